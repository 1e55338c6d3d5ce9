//! The explicit family 73w² = 7(bracket + 15h): construction, membership in
//! the locked-coefficient locus M′, the h-independent mod-3 smoothness
//! certificate, point-count plumbing, and the constructive normalization of
//! an arbitrary surface into M′-form over an extension tower.

use crate::field::{rat, ratio, Field, Rational};
use crate::poly::{FactorField, MultiPoly, UniPoly};
use crate::smooth::plane_curve_singular;
use crate::surface::{
    reduce_form_mod_p, BranchTangencyDatum, K3DoubleCover, PlaneLine, PlanePoint,
    TernarySexticForm,
};
use crate::tower::{extend_tower, TowerElement, TowerField};
use num_traits::{One, Zero};
use std::sync::Arc;

/// The fixed integer bracket of the family display (no x⁶ term).
pub const FAMILY_BRACKET: [([u32; 3], i64); 21] = [
    ([5, 1, 0], 11),
    ([5, 0, 1], 7),
    ([4, 2, 0], 1),
    ([4, 1, 1], 5),
    ([4, 0, 2], 7),
    ([3, 3, 0], 7),
    ([3, 2, 1], 10),
    ([3, 1, 2], 5),
    ([3, 0, 3], 4),
    ([2, 4, 0], 6),
    ([2, 3, 1], 5),
    ([2, 2, 2], 10),
    ([2, 1, 3], 5),
    ([2, 0, 4], 5),
    ([1, 5, 0], 11),
    ([1, 3, 2], 5),
    ([1, 0, 5], 12),
    ([0, 6, 0], 9),
    ([0, 4, 2], 5),
    ([0, 2, 4], 10),
    ([0, 0, 6], 4),
];

/// The six locked M′ coefficients of x⁶, x⁵y, x⁵z, x⁴y², x⁴yz, x⁴z².
pub fn mprime_lock() -> [([u32; 3], Rational); 6] {
    [
        ([6, 0, 0], rat(0)),
        ([5, 1, 0], ratio(77, 73)),
        ([5, 0, 1], ratio(49, 73)),
        ([4, 2, 0], ratio(7, 73)),
        ([4, 1, 1], ratio(35, 73)),
        ([4, 0, 2], ratio(49, 73)),
    ]
}

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error("h must be integral and homogeneous of degree 6 (or zero)")]
    BadH,
    #[error("re-choose branch point: {0}")]
    RechooseBranchPoint(String),
    #[error("the family member is singular modulo 3, contradicting the family smoothness claim")]
    Mod3Singular,
}

/// An integral homogeneous sextic perturbation (possibly zero).
#[derive(Clone, PartialEq, Debug)]
pub struct HPolynomial {
    pub h: MultiPoly<Rational>,
}

impl HPolynomial {
    pub fn new(h: MultiPoly<Rational>) -> Result<Self, FamilyError> {
        let integral = h.terms().all(|(_, c)| c.denom().is_one());
        if !integral || !(h.is_zero() || h.is_homogeneous(6)) {
            return Err(FamilyError::BadH);
        }
        Ok(HPolynomial { h })
    }

    pub fn zero() -> Self {
        HPolynomial {
            h: MultiPoly::zero_poly(),
        }
    }
}

/// Builds the family member: w² = (7/73)·(bracket + 15·h).
pub fn build_xh(h: &HPolynomial) -> K3DoubleCover<Rational> {
    let mut f = MultiPoly::from_terms(FAMILY_BRACKET.iter().map(|&(e, c)| (e, rat(c))));
    f = f + h.h.scale(&rat(15));
    f = f.scale(&ratio(7, 73));
    K3DoubleCover::new(TernarySexticForm::new(f).unwrap())
}

/// Membership in M′: the six locked coefficients match exactly.
pub fn mprime_membership(surface: &K3DoubleCover<Rational>) -> bool {
    mprime_lock()
        .iter()
        .all(|(e, v)| surface.f().coeff(*e) == *v)
}

/// The h-independent smoothness certificate via the special fiber at 3:
/// reduction kills 15h, the bracket reduces to a fixed sextic over F₃, and
/// its singular locus is checked empty over the closure (the form itself is
/// included in the system since the characteristic is 3).
#[derive(Clone, PartialEq, Debug)]
pub struct Mod3Certificate {
    /// Coefficients of the reduced sextic mod 3, sorted by exponent.
    pub reduced: Vec<([u32; 3], u64)>,
    pub smooth_mod_3: bool,
}

pub fn smooth_mod3(surface: &K3DoubleCover<Rational>) -> Result<Mod3Certificate, FamilyError> {
    let reduced = reduce_form_mod_p(surface.f(), 3).ok_or(FamilyError::Mod3Singular)?;
    let data: Vec<([u32; 3], u64)> = reduced
        .terms()
        .map(|(e, c)| (*e, c.residue().unwrap_or(0)))
        .collect();
    let singular = plane_curve_singular(&reduced);
    if singular {
        // Would falsify the family's smoothness claim; abort loudly.
        return Err(FamilyError::Mod3Singular);
    }
    Ok(Mod3Certificate {
        reduced: data,
        smooth_mod_3: true,
    })
}

/// The recorded normalization chain of Lemma-style M′ reduction.
#[derive(Clone, Debug)]
pub struct NormalizationTransform {
    /// Sends P → [1:0:0] and the tangent → V(y) (columns of the matrix are
    /// the images of the basis vectors).
    pub a1: [[TowerElement; 3]; 3],
    /// The rescale making the x⁵y coefficient 1.
    pub x5y_scale: TowerElement,
    /// x → x + a·y + b·z, y → 11y + 7z, z → c·y + d·z.
    pub a2_params: (TowerElement, TowerElement, TowerElement, TowerElement),
    /// A sixth root of 7/73 adjoined to the tower.
    pub sixth_root: TowerElement,
    /// The tower over which the normalized surface lives.
    pub tower: Arc<TowerField>,
}

/// Lemma-style constructive normalization: given a surface with a branch
/// point P and tangent ℓ, produce the linear chain A₃∘A₂∘A₁ carrying it to
/// a surface whose six locked coefficients are exactly the M′ values.
pub fn normalize_to_mprime(
    surface: &K3DoubleCover<TowerElement>,
    datum: &BranchTangencyDatum,
) -> Result<(NormalizationTransform, K3DoubleCover<TowerElement>), FamilyError> {
    let field = datum.field.clone();
    let f = surface
        .f()
        .map_coeffs(|c| crate::surface::promote_into(c, &field));
    let p = &datum.point;
    let l = &datum.tangent;

    // A₁ as columns [P | v₂ | v₃]: v₃ on ℓ independent of P, v₂ off ℓ.
    let pc = [p.x.clone(), p.y.clone(), p.z.clone()];
    let lc = [l.a.clone(), l.b.clone(), l.c.clone()];
    let v3 = line_point_besides(&lc, p);
    let v2 = off_line_vector(&lc);
    let a1 = cols(&pc, &v2, &v3);
    if crate::genus1::modelmap::mat3_det(&a1).is_zero() {
        return Err(FamilyError::RechooseBranchPoint(
            "A1 columns degenerate".into(),
        ));
    }
    let g1 = f.linear_substitute(&a1);
    // Now [1:0:0] is a branch point with tangent V(y): x⁶ and x⁵z vanish.
    debug_assert!(g1.coeff([6, 0, 0]).is_zero());
    debug_assert!(g1.coeff([5, 0, 1]).is_zero());
    let gamma = g1.coeff([5, 1, 0]);
    if gamma.is_zero() {
        return Err(FamilyError::RechooseBranchPoint(
            "x^5 y coefficient vanishes after A1".into(),
        ));
    }
    let g1 = g1.scale(&gamma.inv().unwrap());

    // A₂: solve the three locked-coefficient equations with c = 1.
    let beta1 = g1.coeff([4, 2, 0]);
    let beta2 = g1.coeff([4, 1, 1]);
    let beta3 = g1.coeff([4, 0, 2]);
    let (a, b, c, d, field2) = solve_a2(&beta1, &beta2, &beta3, &field)?;
    let up = |x: &TowerElement| crate::surface::promote_into(x, &field2);
    let g1_up = g1.map_coeffs(|x| up(x));
    let a2 = [
        [TowerElement::one(), a.clone(), b.clone()],
        [TowerElement::zero(), TowerElement::from_int(11), TowerElement::from_int(7)],
        [TowerElement::zero(), c.clone(), d.clone()],
    ];
    // A₂ must be invertible: 11d − 7c ≠ 0.
    let det2 = TowerElement::from_int(11) * d.clone() - TowerElement::from_int(7) * c.clone();
    if det2.is_zero() {
        return Err(FamilyError::RechooseBranchPoint(
            "A2 lower block is singular".into(),
        ));
    }
    let g2 = g1_up.linear_substitute(&a2);
    debug_assert_eq!(g2.coeff([4, 2, 0]), TowerElement::one().promote(&field2));
    debug_assert_eq!(g2.coeff([4, 1, 1]), TowerElement::from_int(5).promote(&field2));
    debug_assert_eq!(g2.coeff([4, 0, 2]), TowerElement::from_int(7).promote(&field2));

    // A₃: scale the variables by a sixth root of 7/73; on a sextic this
    // multiplies every coefficient by 7/73.
    let (root, field3) = adjoin_sixth_root(&field2)?;
    let g3 = g2
        .map_coeffs(|x| crate::surface::promote_into(x, &field3))
        .scale(&TowerElement::from_rational(ratio(7, 73)).promote(&field3));

    let out = K3DoubleCover::new(TernarySexticForm::new(g3).unwrap());
    let transform = NormalizationTransform {
        a1: a1.map(|r| r.map(|x| up(&x))),
        x5y_scale: up(&gamma),
        a2_params: (a, b, c, d),
        sixth_root: root,
        tower: field3,
    };
    Ok((transform, out))
}

fn cols(
    c0: &[TowerElement; 3],
    c1: &[TowerElement; 3],
    c2: &[TowerElement; 3],
) -> [[TowerElement; 3]; 3] {
    let mut m = std::array::from_fn(|_| std::array::from_fn(|_| TowerElement::zero()));
    for i in 0..3 {
        m[i][0] = c0[i].clone();
        m[i][1] = c1[i].clone();
        m[i][2] = c2[i].clone();
    }
    m
}

/// A point of the line independent of `p`, from a deterministic list.
fn line_point_besides(l: &[TowerElement; 3], p: &PlanePoint<TowerElement>) -> [TowerElement; 3] {
    let cands = [
        [l[1].clone(), -l[0].clone(), TowerElement::zero()],
        [l[2].clone(), TowerElement::zero(), -l[0].clone()],
        [TowerElement::zero(), l[2].clone(), -l[1].clone()],
    ];
    for c in cands {
        if c.iter().all(|v| v.is_zero()) {
            continue;
        }
        let q = PlanePoint::new(c[0].clone(), c[1].clone(), c[2].clone());
        if q != *p {
            return c;
        }
    }
    unreachable!("a line has at least two points")
}

fn off_line_vector(l: &[TowerElement; 3]) -> [TowerElement; 3] {
    for (i, v) in l.iter().enumerate() {
        if !v.is_zero() {
            let mut e = std::array::from_fn(|_| TowerElement::zero());
            e[i] = TowerElement::one();
            return e;
        }
    }
    unreachable!("line coefficients not all zero")
}

/// Solves the three coefficient equations
///   1 = 121β₁ + 11β₂c + β₃c² + 55a
///   5 = 154β₁ + 7β₂c + 11β₂d + 2β₃cd + 35a + 55b
///   7 = 49β₁ + 7β₂d + β₃d² + 35b
/// with c = 1: a and b are eliminated from the outer equations, leaving a
/// polynomial in d (quadratic when β₃ ≠ 0, constant otherwise).
fn solve_a2(
    beta1: &TowerElement,
    beta2: &TowerElement,
    beta3: &TowerElement,
    field: &Arc<TowerField>,
) -> Result<(TowerElement, TowerElement, TowerElement, TowerElement, Arc<TowerField>), FamilyError>
{
    let te = TowerElement::from_int;
    let c = TowerElement::one();
    // a(d-free) from the first equation, b(d) from the third:
    //   a = (1 − 121β₁ − 11β₂ − β₃)/55
    //   b(d) = (7 − 49β₁ − 7β₂d − β₃d²)/35
    // Substituted in the middle equation this gives the d-polynomial:
    //   0 = 5 − 154β₁ − 7β₂ − 2β₃d − 11β₂d·(1 − 11/7·?)  — assembled
    //   symbolically below over K[d].
    type P = UniPoly<TowerElement>;
    let cst = |x: TowerElement| P::constant(x);
    let dvar: P = UniPoly::x();
    let a_val = (TowerElement::one()
        - te(121) * beta1.clone()
        - te(11) * beta2.clone() * c.clone()
        - beta3.clone() * c.clone() * c.clone())
        * te(55).inv().unwrap();
    let b_poly: P = cst(te(7) - te(49) * beta1.clone())
        - dvar.clone().scale(&(te(7) * beta2.clone()))
        - (dvar.clone() * dvar.clone()).scale(&beta3.clone());
    let b_poly = b_poly.scale(&te(35).inv().unwrap());
    // Middle equation residual as a polynomial in d.
    let mid: P = cst(te(154) * beta1.clone() + te(7) * beta2.clone() * c.clone() - te(5))
        + dvar.clone().scale(&(te(11) * beta2.clone()))
        + dvar.clone().scale(&(te(2) * beta3.clone() * c.clone()))
        + cst(te(35) * a_val.clone())
        + b_poly.clone().scale(&te(55));
    if mid.is_zero() {
        // Any d works; pick d = 1 (and 11·1 − 7·1 ≠ 0).
        let d = TowerElement::one();
        let b = b_poly.eval(&d);
        return Ok((a_val, b, c, d, field.clone()));
    }
    if mid.is_constant() {
        return Err(FamilyError::RechooseBranchPoint(
            "the d-equation is a nonzero constant (degenerate beta)".into(),
        ));
    }
    // Root of the d-polynomial, adjoining an irreducible factor if needed.
    let mid_monic = mid.monic().map_coeffs(|x| crate::surface::promote_into(x, field));
    let factors = TowerElement::factor_monic(&mid_monic);
    let (first, _) = &factors[0];
    let (d, field2) = if first.degree() == Some(1) {
        (-first.coeff(0), field.clone())
    } else {
        let name = format!("d{}", field.depth() + 1);
        let t = extend_tower(field, first, &name)
            .map_err(|e| FamilyError::RechooseBranchPoint(e.to_string()))?;
        (TowerElement::generator(&t), t)
    };
    let up = |x: &TowerElement| crate::surface::promote_into(x, &field2);
    let d_up = up(&d);
    let b = b_poly.map_coeffs(|x| up(x)).eval(&d_up);
    Ok((up(&a_val), b, up(&c), d_up, field2))
}

fn adjoin_sixth_root(
    field: &Arc<TowerField>,
) -> Result<(TowerElement, Arc<TowerField>), FamilyError> {
    let target = TowerElement::from_rational(ratio(7, 73));
    let mut coeffs = vec![-crate::surface::promote_into(&target, field)];
    coeffs.extend((0..5).map(|_| TowerElement::zero()));
    coeffs.push(TowerElement::one());
    let poly = UniPoly::from_coeffs(coeffs).map_coeffs(|x| crate::surface::promote_into(x, field));
    let factors = TowerElement::factor_monic(&poly);
    let (first, _) = &factors[0];
    if first.degree() == Some(1) {
        Ok((-first.coeff(0), field.clone()))
    } else {
        let name = format!("r{}", field.depth() + 1);
        let t = extend_tower(field, first, &name)
            .map_err(|e| FamilyError::RechooseBranchPoint(e.to_string()))?;
        Ok((TowerElement::generator(&t), t))
    }
}

/// The fixed tangent line of every M′ surface at [1:0:0].
pub fn mprime_tangent() -> PlaneLine<Rational> {
    PlaneLine::new(rat(0), rat(11), rat(7))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;
    use crate::surface::{branch_point_search, SearchCaps};

    fn h_mono(e: [u32; 3]) -> HPolynomial {
        HPolynomial::new(MultiPoly::from_terms([(e, rat(1))])).unwrap()
    }

    #[test]
    fn x0_coefficients_and_membership() {
        let x0 = build_xh(&HPolynomial::zero());
        assert_eq!(x0.f().coeff([5, 1, 0]), ratio(77, 73));
        assert_eq!(x0.f().coeff([5, 0, 1]), ratio(49, 73));
        assert!(x0.f().coeff([6, 0, 0]).is_zero());
        assert!(mprime_membership(&x0));
        // h = x⁶ leaves M′ (x⁶-coefficient becomes 105/73); h = z⁶ stays.
        let xh = build_xh(&h_mono([6, 0, 0]));
        assert_eq!(xh.f().coeff([6, 0, 0]), ratio(105, 73));
        assert!(!mprime_membership(&xh));
        assert!(mprime_membership(&build_xh(&h_mono([0, 0, 6]))));
        // h = y⁶: the y⁶-coefficient is 7(9+15)/73.
        let xy = build_xh(&h_mono([0, 6, 0]));
        assert_eq!(xy.f().coeff([0, 6, 0]), ratio(168, 73));
    }

    #[test]
    fn family_difference_identity() {
        // f(X_h) − f(X_0) = (105/73)·h.
        let h = HPolynomial::new(MultiPoly::from_terms([
            ([3, 2, 1], rat(4)),
            ([0, 1, 5], rat(-2)),
        ]))
        .unwrap();
        let diff = build_xh(&h).f().clone() - build_xh(&HPolynomial::zero()).f().clone();
        assert_eq!(diff, h.h.scale(&ratio(105, 73)));
    }

    #[test]
    fn mod3_certificate_is_h_independent() {
        let base = smooth_mod3(&build_xh(&HPolynomial::zero())).unwrap();
        assert!(base.smooth_mod_3);
        for h in [
            h_mono([6, 0, 0]),
            h_mono([0, 6, 0]),
            h_mono([2, 2, 2]),
            HPolynomial::new(MultiPoly::from_terms([
                ([1, 1, 4], rat(-7)),
                ([0, 3, 3], rat(9)),
            ]))
            .unwrap(),
        ] {
            let cert = smooth_mod3(&build_xh(&h)).unwrap();
            assert_eq!(cert, base);
        }
    }

    #[test]
    fn degenerate_beta_errors() {
        // β₁ = β₂ = β₃ = 0 makes the middle equation 35a + 55b = 5 with
        // a = 1/55, b = 1/5 forced: inconsistent.
        let q = TowerField::rationals();
        let r = solve_a2(
            &TowerElement::zero(),
            &TowerElement::zero(),
            &TowerElement::zero(),
            &q,
        );
        assert!(matches!(r, Err(FamilyError::RechooseBranchPoint(_))));
    }

    #[test]
    fn normalize_fixed_point_case() {
        // X₀ with P = [1:0:0], ℓ: 11y + 7z = 0 — the locked coefficients
        // are reproduced exactly.
        let x0 = build_xh(&HPolynomial::zero()).to_tower();
        let datum = branch_point_search(&x0, SearchCaps::default()).unwrap();
        assert_eq!(datum.field.depth(), 0);
        let (tr, out) = normalize_to_mprime(&x0, &datum).unwrap();
        for (e, v) in mprime_lock() {
            assert_eq!(
                out.f().coeff(e),
                TowerElement::from_rational(v).promote(&tr.tower),
                "locked coefficient {e:?}"
            );
        }
        // The recorded sixth root really is one.
        let mut pow = TowerElement::one().promote(&tr.tower);
        for _ in 0..6 {
            pow = pow * tr.sixth_root.clone();
        }
        assert_eq!(pow, TowerElement::from_rational(ratio(7, 73)).promote(&tr.tower));
    }

    #[test]
    fn normalize_random_surface() {
        // A surface with a rational branch point, not in the family.
        // f = x^5 y + 3x^4 y^2 - 2 x^4 y z + x^4 z^2 + y^6 + z^6 + x y^5:
        // [1:0:0] is on the branch curve with tangent V(y).
        let f = MultiPoly::from_terms([
            ([5, 1, 0], rat(1)),
            ([4, 2, 0], rat(3)),
            ([4, 1, 1], rat(-2)),
            ([4, 0, 2], rat(1)),
            ([0, 6, 0], rat(1)),
            ([0, 0, 6], rat(1)),
            ([1, 5, 0], rat(1)),
        ]);
        let x = K3DoubleCover::new(TernarySexticForm::new(f).unwrap()).to_tower();
        let datum = branch_point_search(&x, SearchCaps::default()).unwrap();
        let (tr, out) = normalize_to_mprime(&x, &datum).unwrap();
        for (e, v) in mprime_lock() {
            assert_eq!(
                out.f().coeff(e),
                TowerElement::from_rational(v).promote(&tr.tower),
                "locked coefficient {e:?}"
            );
        }
        let _ = Var::X;
    }
}
