//! Univariate factorization over finite fields of odd characteristic:
//! squarefree decomposition, distinct-degree splitting, and
//! Cantor–Zassenhaus equal-degree splitting with a deterministic RNG.

use super::uni::UniPoly;
use crate::fq::{Fq, FqCtx};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn ctx_of(f: &UniPoly<Fq>) -> Arc<FqCtx> {
    f.coeffs()
        .iter()
        .find_map(|c| c.ctx().cloned())
        .expect("polynomial needs at least one contextual coefficient")
}

/// Deterministic seed derived from the field and polynomial data.
fn seed_for(ctx: &FqCtx, f: &UniPoly<Fq>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut mix = |x: u64| {
        h ^= x;
        h = h.wrapping_mul(0x100000001b3);
    };
    mix(ctx.p());
    for &c in ctx.modulus() {
        mix(c);
    }
    for c in f.coeffs() {
        match c.coeffs() {
            Some(v) => v.iter().for_each(|&x| mix(x)),
            None => mix(0),
        }
    }
    h
}

/// base^e mod m in F_q[x].
pub fn poly_powmod(base: &UniPoly<Fq>, e: &BigUint, m: &UniPoly<Fq>) -> UniPoly<Fq> {
    let ctx = ctx_of(m);
    let mut acc = UniPoly::constant(ctx.one());
    let mut b = base.rem(m);
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = (acc * b.clone()).rem(m);
        }
        if i + 1 < e.bits() {
            b = (b.clone() * b).rem(m);
        }
    }
    acc
}

/// Squarefree decomposition over F_q (handles p-th power parts).
pub fn squarefree_decomposition_fq(f: &UniPoly<Fq>) -> Vec<(UniPoly<Fq>, u32)> {
    let ctx = ctx_of(f);
    let p = ctx.p();
    let f = f.monic();
    if f.is_constant() {
        return vec![];
    }
    let mut out: Vec<(UniPoly<Fq>, u32)> = Vec::new();
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div_poly(&c).unwrap();
    let mut i = 1u32;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.exact_div_poly(&y).unwrap();
        if !z.is_constant() {
            out.push((z.monic(), i));
        }
        w = y;
        c = c.exact_div_poly(&w).unwrap();
        i += 1;
    }
    if !c.is_constant() {
        // c = v(x^p); take the p-th root of the coefficients.
        let q = ctx.order();
        let root_exp = &q / BigUint::from(p);
        let mut v = Vec::new();
        for (k, coeff) in c.coeffs().iter().enumerate() {
            if k as u64 % p == 0 {
                let c_root = if coeff.is_zero() {
                    ctx.zero()
                } else {
                    coeff.pow_big(&root_exp)
                };
                v.push(c_root);
            } else {
                assert!(coeff.is_zero(), "p-th power part malformed");
            }
        }
        for (g, m) in squarefree_decomposition_fq(&UniPoly::from_coeffs(v)) {
            out.push((g, m * p as u32));
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

/// Distinct-degree decomposition of a squarefree monic polynomial:
/// pairs (product of irreducibles of degree d, d).
fn distinct_degree(f: &UniPoly<Fq>) -> Vec<(UniPoly<Fq>, usize)> {
    let ctx = ctx_of(f);
    let q = ctx.order();
    let mut f = f.monic();
    let mut out = Vec::new();
    let x = UniPoly::from_coeffs(vec![ctx.zero(), ctx.one()]);
    let mut h = x.clone();
    let mut d = 0usize;
    while f.deg_i() >= 1 {
        d += 1;
        if 2 * d > f.degree().unwrap() {
            out.push((f.clone(), f.degree().unwrap()));
            break;
        }
        h = poly_powmod(&h, &q, &f);
        let g = f.gcd(&(h.clone() - x.clone()));
        if !g.is_constant() {
            out.push((g.clone(), d));
            f = f.exact_div_poly(&g).unwrap();
            h = h.rem(&f);
        }
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (odd q).
fn equal_degree(f: &UniPoly<Fq>, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly<Fq>> {
    let ctx = ctx_of(f);
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.monic()];
    }
    let q = ctx.order();
    let e = (q.pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let deg = rng.gen_range(1..n);
        let coeffs: Vec<Fq> = (0..=deg)
            .map(|_| {
                let v: Vec<u64> = (0..ctx.degree()).map(|_| rng.gen_range(0..ctx.p())).collect();
                ctx.element(v)
            })
            .collect();
        let r = UniPoly::from_coeffs(coeffs);
        if r.is_constant() {
            continue;
        }
        let g0 = f.gcd(&r);
        if !g0.is_constant() && g0.degree() < f.degree() {
            let mut out = equal_degree(&g0, d, rng);
            out.extend(equal_degree(&f.exact_div_poly(&g0).unwrap(), d, rng));
            return out;
        }
        let s = poly_powmod(&r, &e, f) - UniPoly::constant(ctx.one());
        let g = f.gcd(&s);
        if !g.is_constant() && g.degree() < f.degree() {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div_poly(&g).unwrap(), d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles, sorted by degree then by
/// coefficient order (deterministic output).
pub fn factor_fq(f: &UniPoly<Fq>) -> Vec<(UniPoly<Fq>, u32)> {
    assert!(!f.is_zero());
    let ctx = ctx_of(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(&ctx, f));
    let mut out: Vec<(UniPoly<Fq>, u32)> = Vec::new();
    for (sqf, mult) in squarefree_decomposition_fq(f) {
        for (prod, d) in distinct_degree(&sqf) {
            for irr in equal_degree(&prod, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
    out
}

pub fn cmp_poly(a: &UniPoly<Fq>, b: &UniPoly<Fq>) -> std::cmp::Ordering {
    a.deg_i().cmp(&b.deg_i()).then_with(|| {
        for i in (0..a.coeffs().len().max(b.coeffs().len())).rev() {
            let c = a.coeff(i).canon_cmp(&b.coeff(i));
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Roots of f in the coefficient field, sorted canonically.
pub fn roots_fq(f: &UniPoly<Fq>) -> Vec<Fq> {
    let mut roots: Vec<Fq> = factor_fq(f)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| -g.coeff(0))
        .collect();
    roots.sort_by(|a, b| a.canon_cmp(b));
    roots.dedup();
    roots
}

pub fn is_irreducible_fq(f: &UniPoly<Fq>) -> bool {
    if f.deg_i() < 1 {
        return false;
    }
    let fs = factor_fq(f);
    fs.len() == 1 && fs[0].1 == 1 && fs[0].0.degree() == f.degree()
}

/// A monic irreducible polynomial of the requested degree over F_p,
/// found by deterministic random search.
pub fn irreducible_poly(p: u64, degree: usize) -> UniPoly<Fq> {
    assert!(degree >= 1);
    let ctx = FqCtx::prime(p);
    if degree == 1 {
        return UniPoly::from_coeffs(vec![ctx.zero(), ctx.one()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.wrapping_mul(0x9e3779b97f4a7c15) ^ degree as u64);
    loop {
        let mut coeffs: Vec<Fq> = (0..degree).map(|_| ctx.from_u64(rng.gen_range(0..p))).collect();
        coeffs.push(ctx.one());
        let f = UniPoly::from_coeffs(coeffs);
        if is_irreducible_fq(&f) {
            return f;
        }
    }
}

/// Embedding of F_{p^k} into F_{p^K} (k | K): sends the old generator to the
/// canonically smallest root of the old modulus in the new field.
pub fn embed_fq(old: &Arc<FqCtx>, new: &Arc<FqCtx>) -> impl Fn(&Fq) -> Fq {
    assert_eq!(old.p(), new.p());
    assert_eq!(new.degree() % old.degree(), 0, "no embedding: degrees incompatible");
    let old_mod_in_new =
        UniPoly::from_coeffs(old.modulus().iter().map(|&c| new.from_u64(c)).collect());
    let roots = roots_fq(&old_mod_in_new);
    let root = roots.first().expect("old modulus must split in the new field").clone();
    let old = old.clone();
    let new = new.clone();
    move |a: &Fq| -> Fq {
        match a {
            Fq::Int(n) => new.from_bigint(&num_bigint::BigInt::from(*n)),
            Fq::El(c, v) => {
                assert!(c == &old, "element not in the source field");
                let mut acc = new.zero();
                for &coef in v.iter().rev() {
                    acc = acc * root.clone() + new.from_u64(coef);
                }
                acc
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn fp_poly(p: u64, v: &[i64]) -> UniPoly<Fq> {
        let ctx = FqCtx::prime(p);
        UniPoly::from_coeffs(
            v.iter()
                .map(|&x| ctx.from_bigint(&num_bigint::BigInt::from(x)))
                .collect(),
        )
    }

    #[test]
    fn x2_plus_1_mod_3_is_irreducible() {
        // Oracle: exhaustive root search over F_3.
        let f = fp_poly(3, &[1, 0, 1]);
        let ctx = FqCtx::prime(3);
        for a in ctx.all_elements() {
            assert!(!f.eval(&a).is_zero());
        }
        assert!(is_irreducible_fq(&f));
        let fs = factor_fq(&f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 1);
    }

    #[test]
    fn factors_remultiply() {
        // (x^2+1)(x+2)^2 x over F_5
        let f = fp_poly(5, &[1, 0, 1]) * fp_poly(5, &[2, 1]).pow(2) * fp_poly(5, &[0, 1]);
        let fs = factor_fq(&f);
        let prod = fs
            .iter()
            .fold(UniPoly::constant(Fq::from_i64(1)), |acc, (g, m)| {
                acc * g.pow(*m as usize)
            });
        assert_eq!(prod, f.monic());
        // x^2+1 = (x+2)(x+3) mod 5, so x+2 accumulates multiplicity 3.
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn roots_and_embeddings() {
        let f = fp_poly(5, &[1, 0, 1]); // roots 2, 3 mod 5
        let ctx = FqCtx::prime(5);
        assert_eq!(roots_fq(&f), vec![ctx.from_u64(2), ctx.from_u64(3)]);

        // F_3 -> F_9 and a root of x^2+1 upstairs.
        let f9 = FqCtx::extension(3, vec![1, 0, 1]);
        let lift = embed_fq(&FqCtx::prime(3), &f9);
        let two = lift(&FqCtx::prime(3).from_u64(2));
        assert_eq!(two, f9.from_u64(2));
        let g = UniPoly::from_coeffs(vec![f9.one(), f9.zero(), f9.one()]);
        assert_eq!(roots_fq(&g).len(), 2);
    }

    #[test]
    fn irreducible_search_terminates() {
        for d in 1..=4 {
            let f = irreducible_poly(3, d);
            assert_eq!(f.degree(), Some(d));
            assert!(d == 1 || is_irreducible_fq(&f));
        }
    }

    #[test]
    fn squarefree_with_p_power_part() {
        // (x+1)^3 over F_3 has zero derivative interactions.
        let f = fp_poly(3, &[1, 1]).pow(3);
        let parts = squarefree_decomposition_fq(&f);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, 3);
        assert_eq!(parts[0].0, fp_poly(3, &[1, 1]));
    }
}
