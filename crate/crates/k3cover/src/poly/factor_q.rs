//! Factorization over ℚ: squarefree decomposition, then Zassenhaus —
//! factor modulo a good small prime, Hensel lift to a Landau–Mignotte
//! height bound, and recombine modular factors by bounded subset search.
//! Degrees in this crate stay small (≤ 6 directly, ≤ 36 through norms),
//! so the subset search is the guaranteed finisher.

use super::factor_fq::factor_fq;
use super::squarefree::squarefree_decomposition;
use super::uni::UniPoly;
use crate::field::{Rational, Ring};
use crate::fq::{Fq, FqCtx};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

impl Ring for BigInt {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

type ZPoly = UniPoly<BigInt>;
type QPoly = UniPoly<Rational>;

/// Clears denominators and content: returns the primitive integer polynomial
/// with positive leading coefficient (the rational unit is discarded; callers
/// work with monic rational factors).
pub fn primitive_integer_poly(f: &QPoly) -> ZPoly {
    assert!(!f.is_zero());
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if ints.last().unwrap().is_negative() {
        content = -content;
    }
    UniPoly::from_coeffs(ints.into_iter().map(|c| c / &content).collect())
}

fn poly_mod(f: &ZPoly, m: &BigInt) -> ZPoly {
    UniPoly::from_coeffs(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn center(c: &BigInt, m: &BigInt) -> BigInt {
    let c = c.mod_floor(m);
    if &c + &c > *m {
        c - m
    } else {
        c
    }
}

fn poly_center(f: &ZPoly, m: &BigInt) -> ZPoly {
    UniPoly::from_coeffs(f.coeffs().iter().map(|c| center(c, m)).collect())
}

/// Division with remainder by a monic divisor, coefficients mod m.
fn divrem_monic_mod(f: &ZPoly, d: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    assert!(d.lc().is_one());
    let dd = d.degree().unwrap();
    let mut rem = poly_mod(f, m);
    let mut quo = vec![BigInt::zero(); rem.coeffs().len()];
    while let Some(dr) = rem.degree() {
        if dr < dd {
            break;
        }
        let c = rem.lc();
        quo[dr - dd] = c.clone();
        rem = poly_mod(&(rem.clone() - UniPoly::monomial(c, dr - dd) * d.clone()), m);
    }
    (UniPoly::from_coeffs(quo), rem)
}

fn mul_mod(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    poly_mod(&(a.clone() * b.clone()), m)
}

/// One quadratic Hensel step: lifts f ≡ g·h, s·g + t·h ≡ 1 from mod m to
/// mod m² (h monic; f monic here). Follows the classical algorithm.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = poly_mod(&(f.clone() - g.clone() * h.clone()), &m2);
    let (q, r) = divrem_monic_mod(&(s.clone() * e.clone()), h, &m2);
    let g_new = poly_mod(&(g.clone() + t.clone() * e + q * g.clone()), &m2);
    let h_new = poly_mod(&(h.clone() + r), &m2);
    let b = poly_mod(
        &(s.clone() * g_new.clone() + t.clone() * h_new.clone() - UniPoly::one()),
        &m2,
    );
    let (c, d) = divrem_monic_mod(&(s.clone() * b.clone()), &h_new, &m2);
    let s_new = poly_mod(&(s.clone() - d), &m2);
    let t_new = poly_mod(&(t.clone() - t.clone() * b - c * g_new.clone()), &m2);
    (g_new, h_new, s_new, t_new)
}

/// Lifts a pair (u, v), both monic, with f ≡ u·v mod p, to mod p^e ≥ target.
fn lift_pair(f: &ZPoly, u0: &ZPoly, v0: &ZPoly, p: u64, target: &BigInt) -> (ZPoly, ZPoly, BigInt) {
    let pb = BigInt::from(p);
    // Bezout over F_p with deg s < deg v, deg t < deg u.
    let ctx = FqCtx::prime(p);
    let to_fq = |f: &ZPoly| f.map_coeffs(|c| ctx.from_bigint(c));
    let uq = to_fq(u0);
    let vq = to_fq(v0);
    let (gcd, s, _) = uq.extended_gcd(&vq);
    assert!(gcd.is_constant() && !gcd.is_zero(), "factors not coprime mod p");
    let s = s.rem(&vq);
    let t = {
        let num = UniPoly::constant(ctx.one()) - s.clone() * uq.clone();
        num.div_rem(&vq).0
    };
    let from_fq = |f: &UniPoly<Fq>| -> ZPoly {
        f.map_coeffs(|c| match c.residue() {
            Some(r) => BigInt::from(r),
            None => BigInt::zero(),
        })
    };
    let (mut g, mut h) = (u0.clone(), v0.clone());
    let (mut s, mut t) = (from_fq(&s), from_fq(&t));
    let mut m = pb;
    while m < *target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    (g, h, m)
}

/// Tree lifting of a full list of monic modular factors of a monic f.
fn lift_tree(f: &ZPoly, factors: &[ZPoly], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let mut m = BigInt::from(p);
        while m < *target {
            m = &m * &m;
        }
        return vec![poly_mod(f, &m)];
    }
    let half = factors.len() / 2;
    let pb = BigInt::from(p);
    let prod = |fs: &[ZPoly]| -> ZPoly {
        fs.iter()
            .fold(UniPoly::one(), |acc, g| poly_mod(&(acc * g.clone()), &pb))
    };
    let u0 = prod(&factors[..half]);
    let v0 = prod(&factors[half..]);
    let (u, v, _) = lift_pair(f, &u0, &v0, p, target);
    let mut out = lift_tree(&u, &factors[..half], p, target);
    out.extend(lift_tree(&v, &factors[half..], p, target));
    out
}

fn max_abs_coeff(f: &ZPoly) -> BigInt {
    f.coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Landau–Mignotte style bound on coefficients of monic factors of monic f.
fn factor_bound(f: &ZPoly) -> BigInt {
    let n = f.degree().unwrap() as u32;
    let sqrt_np1 = BigInt::from(n + 1).sqrt() + 1;
    (BigInt::one() << n) * sqrt_np1 * max_abs_coeff(f)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Factors a squarefree monic integer polynomial into monic irreducibles
/// over ℤ (equivalently over ℚ).
fn factor_monic_squarefree_int(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.degree().unwrap();
    if n == 1 {
        return vec![f.clone()];
    }
    // Choose a good odd prime: squarefree reduction.
    let mut chosen: Option<(u64, Vec<ZPoly>)> = None;
    for p in (3u64..10_000).filter(|&p| is_small_prime(p)) {
        let ctx = FqCtx::prime(p);
        let fp = f.map_coeffs(|c| ctx.from_bigint(c));
        if fp.degree() != Some(n) {
            continue;
        }
        if !fp.gcd(&fp.derivative()).is_constant() {
            continue;
        }
        let factors: Vec<ZPoly> = factor_fq(&fp)
            .into_iter()
            .map(|(g, m)| {
                assert_eq!(m, 1);
                g.map_coeffs(|c| BigInt::from(c.residue().unwrap()))
            })
            .collect();
        chosen = Some((p, factors));
        break;
    }
    let (p, modular) = chosen.expect("no good prime found for a squarefree polynomial");
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let target = BigInt::from(2) * factor_bound(f) + 1;
    let mut m = BigInt::from(p);
    while m < target {
        m = &m * &m;
    }
    let lifted = lift_tree(f, &modular, p, &target);

    // Subset recombination.
    let mut pool = lifted;
    let mut remaining = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        for combo in combinations(pool.len(), size) {
            let cand_mod = combo
                .iter()
                .fold(UniPoly::one(), |acc, &i| mul_mod(&acc, &pool[i], &m));
            let cand = poly_center(&cand_mod, &m);
            // Quick prune on the constant coefficient.
            let c0 = cand.coeff(0);
            let f0 = remaining.coeff(0);
            let prune = if c0.is_zero() {
                !f0.is_zero()
            } else {
                !(&f0 % &c0).is_zero()
            };
            if prune {
                continue;
            }
            if let Some(quot) = remaining.exact_div_poly(&cand) {
                found.push(cand);
                remaining = quot;
                for &i in combo.iter().rev() {
                    pool.remove(i);
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    if remaining.degree().map_or(false, |d| d >= 1) {
        found.push(remaining);
    }
    found
}

pub fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Factors a squarefree primitive integer polynomial (any leading sign)
/// into monic rational irreducibles.
fn factor_squarefree_primitive(g: &ZPoly) -> Vec<QPoly> {
    let n = g.degree().unwrap();
    if n == 0 {
        return vec![];
    }
    let l = g.lc();
    // Monicize: f_m(x) = l^(n-1) g(x/l), with x^i picking up l^(n-1-i).
    let f_m = UniPoly::from_coeffs(
        (0..=n)
            .map(|i| {
                if i == n {
                    BigInt::one()
                } else {
                    g.coeff(i) * l.pow((n - 1 - i) as u32)
                }
            })
            .collect(),
    );
    factor_monic_squarefree_int(&f_m)
        .into_iter()
        .map(|h| {
            // Undo the substitution: a factor of g is h(l·x) made monic.
            let hl = UniPoly::from_coeffs(
                h.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| Rational::from_integer(c * l.pow(i as u32)))
                    .collect(),
            );
            hl.monic()
        })
        .collect()
}

/// Monic irreducible factors with multiplicities over ℚ, canonically sorted;
/// the input equals its leading unit times the product of the factors.
pub fn factor_rational(f: &QPoly) -> Vec<(QPoly, u32)> {
    assert!(!f.is_zero());
    if f.is_constant() {
        return vec![];
    }
    let mut out: Vec<(QPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        if part.is_constant() {
            continue;
        }
        let prim = primitive_integer_poly(&part);
        for irr in factor_squarefree_primitive(&prim) {
            out.push((irr, mult));
        }
    }
    out.sort_by(cmp_factor);
    out
}

pub fn cmp_qpoly(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    a.deg_i().cmp(&b.deg_i()).then_with(|| {
        for i in (0..a.coeffs().len().max(b.coeffs().len())).rev() {
            let c = a.coeff(i).cmp(&b.coeff(i));
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    })
}

fn cmp_factor(a: &(QPoly, u32), b: &(QPoly, u32)) -> std::cmp::Ordering {
    cmp_qpoly(&a.0, &b.0).then(a.1.cmp(&b.1))
}

/// Rational roots of f, sorted.
pub fn rational_roots(f: &QPoly) -> Vec<Rational> {
    let mut roots: Vec<Rational> = factor_rational(f)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| -g.coeff(0))
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn p(v: &[i64]) -> QPoly {
        UniPoly::from_coeffs(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn cyclotomic_sextic() {
        // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let f = p(&[-1, 0, 0, 0, 0, 0, 1]);
        let fs = factor_rational(&f);
        let expected = vec![
            (p(&[-1, 1]), 1),
            (p(&[1, 1]), 1),
            (p(&[1, -1, 1]), 1),
            (p(&[1, 1, 1]), 1),
        ];
        assert_eq!(fs, expected);
    }

    #[test]
    fn constructed_multiplicities() {
        // (x-1)^2 (x+2)
        let f = p(&[1, -2, 1]) * p(&[2, 1]);
        let fs = factor_rational(&f);
        assert_eq!(fs, vec![(p(&[-1, 1]), 2), (p(&[2, 1]), 1)]);
    }

    #[test]
    fn irreducible_stays_whole() {
        // x^6 + 2 is Eisenstein at 2.
        let f = p(&[2, 0, 0, 0, 0, 0, 1]);
        let fs = factor_rational(&f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0, f);
        // x^2 + 1
        let g = p(&[1, 0, 1]);
        assert_eq!(factor_rational(&g), vec![(g.clone(), 1)]);
    }

    #[test]
    fn non_monic_with_rational_coeffs() {
        // 6x^2 - x - 1 = (2x-1)(3x+1): monic factors (x-1/2)(x+1/3)
        let f = p(&[-1, -1, 6]);
        let fs = factor_rational(&f);
        assert_eq!(fs.len(), 2);
        let prod = fs
            .iter()
            .fold(UniPoly::one(), |acc: QPoly, (g, m)| acc * g.pow(*m as usize));
        assert_eq!(prod.scale(&f.lc()), f);
        assert_eq!(rational_roots(&f), vec![crate::field::ratio(-1, 3), crate::field::ratio(1, 2)]);
    }

    #[test]
    fn remultiplication_over_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let deg = rng.gen_range(1..=6);
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
            let f = p(&coeffs);
            if f.is_zero() || f.is_constant() {
                continue;
            }
            let fs = factor_rational(&f);
            let prod = fs
                .iter()
                .fold(UniPoly::one(), |acc: QPoly, (g, m)| acc * g.pow(*m as usize));
            assert_eq!(prod.scale(&f.lc()), f, "failed on {f:?}");
        }
    }
}
