//! Polynomial arithmetic: univariate and ternary multivariate polynomials,
//! resultants, squarefree decomposition, and factorization over ℚ, finite
//! fields, and number-field towers.

pub mod factor_fq;
pub mod factor_q;
pub mod multi;
pub mod squarefree;
pub mod sylvester;
pub mod uni;

use crate::field::Field;
use std::sync::Arc;

pub use multi::{MultiPoly, Var};
pub use sylvester::{bareiss_det, discriminant, resultant};
pub use uni::UniPoly;

/// A field over which univariate polynomials can be factored completely.
pub trait FactorField: Field {
    /// Monic irreducible factors with multiplicities, canonically ordered.
    /// The input times its leading unit equals the product of the factors.
    fn factor_monic(f: &UniPoly<Self>) -> Vec<(UniPoly<Self>, u32)>;

    fn is_irreducible(f: &UniPoly<Self>) -> bool {
        if f.deg_i() < 1 {
            return false;
        }
        let fs = Self::factor_monic(f);
        fs.len() == 1 && fs[0].1 == 1
    }

    /// Roots of f lying in the field itself, canonically ordered.
    fn field_roots(f: &UniPoly<Self>) -> Vec<Self> {
        Self::factor_monic(f)
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| -g.coeff(0))
            .collect()
    }
}

/// Coefficient embedding attached to a simple field extension.
pub type Embed<F, G> = Arc<dyn Fn(&F) -> G + Send + Sync>;

/// A field from which one can pass to a simple extension F[y]/(m).
///
/// ℚ and tower elements extend into towers; finite fields extend into
/// larger finite fields. Only one extension step is ever needed by the
/// singular-locus machinery.
pub trait SimpleExtension: FactorField {
    type Ext: FactorField;

    /// Adjoins a root of the monic irreducible `m`; returns the root and
    /// the coefficient embedding.
    fn adjoin_root(m: &UniPoly<Self>) -> (Self::Ext, Embed<Self, Self::Ext>);
}

impl FactorField for crate::field::Rational {
    fn factor_monic(f: &UniPoly<Self>) -> Vec<(UniPoly<Self>, u32)> {
        factor_q::factor_rational(f)
    }
}

impl FactorField for crate::fq::Fq {
    fn factor_monic(f: &UniPoly<Self>) -> Vec<(UniPoly<Self>, u32)> {
        factor_fq::factor_fq(f)
    }
}

impl SimpleExtension for crate::fq::Fq {
    type Ext = crate::fq::Fq;

    fn adjoin_root(m: &UniPoly<Self>) -> (Self::Ext, Embed<Self, Self::Ext>) {
        use crate::fq::FqCtx;
        let ctx = f_ctx(m);
        let d = m.degree().expect("nonconstant modulus");
        assert!(d >= 1);
        if ctx.degree() == 1 {
            // Direct quotient of F_p by the modulus.
            let p = ctx.p();
            let coeffs: Vec<u64> = (0..=d).map(|i| m.coeff(i).residue().unwrap_or(0)).collect();
            let new = if d == 1 {
                let root = -m.coeff(0);
                let new = FqCtx::prime(p);
                let root = new.from_u64(root.residue().unwrap_or(0));
                let newc = new.clone();
                return (root, Arc::new(move |a: &crate::fq::Fq| promote_fq(&newc, a)));
            } else {
                FqCtx::extension(p, coeffs)
            };
            let root = new.gen();
            let newc = new.clone();
            (root, Arc::new(move |a: &crate::fq::Fq| promote_fq(&newc, a)))
        } else {
            // Compositum: build F_{p^(k·d)} over F_p and embed.
            let p = ctx.p();
            let k = ctx.degree();
            let new_mod = factor_fq::irreducible_poly(p, k * d);
            let coeffs: Vec<u64> = new_mod
                .coeffs()
                .iter()
                .map(|c| c.residue().unwrap_or(0))
                .chain(std::iter::repeat(0))
                .take(k * d + 1)
                .collect();
            let mut coeffs = coeffs;
            coeffs[k * d] = 1;
            let new = FqCtx::extension(p, coeffs);
            let embed = factor_fq::embed_fq(&ctx, &new);
            let m_up = m.map_coeffs(|c| embed(c));
            let roots = factor_fq::roots_fq(&m_up);
            let root = roots
                .first()
                .expect("irreducible polynomial splits in the compositum")
                .clone();
            (root, Arc::new(move |a: &crate::fq::Fq| embed(a)))
        }
    }
}

fn f_ctx(m: &UniPoly<crate::fq::Fq>) -> Arc<crate::fq::FqCtx> {
    m.coeffs()
        .iter()
        .find_map(|c| c.ctx().cloned())
        .expect("modulus needs contextual coefficients")
}

fn promote_fq(ctx: &Arc<crate::fq::FqCtx>, a: &crate::fq::Fq) -> crate::fq::Fq {
    match a {
        crate::fq::Fq::Int(n) => ctx.from_bigint(&num_bigint::BigInt::from(*n)),
        crate::fq::Fq::El(c, v) => {
            assert_eq!(c.degree(), 1, "only prime-field constants promote directly");
            assert_eq!(c.p(), ctx.p());
            ctx.from_u64(v[0])
        }
    }
}
