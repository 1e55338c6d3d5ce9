//! Sound torsion/non-torsion certificates.
//!
//! Over ℚ, Mazur's theorem reduces the torsion test to the scalar
//! multiples m ∈ {1,…,10,12}. Over a proper tower, reductions at two odd
//! primes of good reduction with residue degree 1 bound the possible order
//! by L = gcd(n_p·p^{v_p(n_q)}, n_q·q^{v_q(n_p)}); the certificate then
//! proves [L]P ≠ O either by an exact scalar multiplication or by a third
//! reduction whose point order does not divide L (a ring homomorphism
//! argument: [L]P = O would force [L]P̄ = Ō everywhere).

use super::weierstrass::{curve_order_fq, order_in_fq, ECPoint, WeierstrassCurve};
use crate::field::int_valuation;
use crate::fq::Fq;
use crate::poly::factor_q::is_small_prime;
use crate::surface::SearchCaps;
use crate::tower::{tower_embed_mod_p, TowerElement, TowerEmbedding, TowerField};
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

/// The Mazur set of possible orders over ℚ. Their lcm is 2520, but each m
/// is checked separately to avoid 2520-sized coordinate blowup.
pub const MAZUR_SWEEP: [i64; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12];

#[derive(Debug, thiserror::Error)]
pub enum TorsionError {
    #[error("the point is the origin")]
    PointAtInfinity,
    #[error("point not on curve")]
    PointNotOnCurve,
    #[error("curve is singular")]
    SingularCurve,
    #[error("no two suitable primes below {cap}")]
    NoPrimes { cap: u64 },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

#[derive(Clone, PartialEq, Debug)]
pub enum ExactNonVanishing {
    /// [L]P computed exactly over the tower; it was not O.
    ScalarMultiple,
    /// ord(P̄ mod r) does not divide L, so [L]P̄ ≠ Ō and hence [L]P ≠ O.
    ReductionWitness { r: u64, n_r: u64 },
}

#[derive(Clone, PartialEq, Debug)]
pub enum TorsionCertificate {
    Torsion {
        order: u64,
    },
    NonTorsion(NonTorsionCert),
}

#[derive(Clone, PartialEq, Debug)]
pub enum NonTorsionCert {
    /// Over ℚ: every m in the Mazur set gave [m]P ≠ O.
    MazurQ,
    /// Two-prime reduction bound plus the [L]P ≠ O check.
    Reduction {
        p: u64,
        q: u64,
        n_p: u64,
        n_q: u64,
        l: u64,
        exact: ExactNonVanishing,
    },
}

/// Reduces curve and point through an embedding. `None` on bad reduction of
/// the curve; a point whose coordinates fail to reduce lies in the kernel
/// of reduction and maps to O.
pub fn reduce_curve_point(
    e: &WeierstrassCurve<TowerElement>,
    p: &ECPoint<TowerElement>,
    emb: &TowerEmbedding,
) -> Option<(WeierstrassCurve<Fq>, ECPoint<Fq>)> {
    let coeffs: Result<Vec<Fq>, _> = [&e.a1, &e.a2, &e.a3, &e.a4, &e.a6]
        .into_iter()
        .map(|c| emb.map(c))
        .collect();
    let coeffs = coeffs.ok()?;
    let ec = WeierstrassCurve::new(
        coeffs[0].clone(),
        coeffs[1].clone(),
        coeffs[2].clone(),
        coeffs[3].clone(),
        coeffs[4].clone(),
    );
    if ec.discriminant().is_zero() {
        return None;
    }
    let pt = match p {
        ECPoint::Infinity => ECPoint::Infinity,
        ECPoint::Affine(x, y) => match (emb.map(x), emb.map(y)) {
            (Ok(xr), Ok(yr)) => {
                let q = ECPoint::Affine(xr, yr);
                debug_assert!(ec.on_curve(&q));
                q
            }
            _ => ECPoint::Infinity,
        },
    };
    Some((ec, pt))
}

fn tower_of(
    e: &WeierstrassCurve<TowerElement>,
    p: &ECPoint<TowerElement>,
) -> Arc<TowerField> {
    let mut best = TowerField::rationals();
    let mut consider = |c: &TowerElement| {
        if let Some(ctx) = c.ctx() {
            if ctx.depth() > best.depth() {
                best = ctx.clone();
            }
        }
    };
    for c in [&e.a1, &e.a2, &e.a3, &e.a4, &e.a6] {
        consider(c);
    }
    if let ECPoint::Affine(x, y) = p {
        consider(x);
        consider(y);
    }
    best
}

fn is_rational_setting(
    e: &WeierstrassCurve<TowerElement>,
    p: &ECPoint<TowerElement>,
) -> bool {
    tower_of(e, p).depth() == 0
}

fn point_size(p: &ECPoint<TowerElement>) -> usize {
    match p {
        ECPoint::Infinity => 0,
        ECPoint::Affine(x, y) => x.size_bits() + y.size_bits(),
    }
}

/// Size budget for the exact scalar multiplication (bits per point).
const EXACT_BITS_BUDGET: usize = 2_000_000;

fn l_bound(p: u64, n_p: u64, q: u64, n_q: u64) -> u64 {
    let vp = int_valuation(&BigInt::from(n_q), p);
    let vq = int_valuation(&BigInt::from(n_p), q);
    let a = n_p as u128 * (p as u128).pow(vp);
    let b = n_q as u128 * (q as u128).pow(vq);
    num_integer::Integer::gcd(&a, &b) as u64
}

fn divisors_ascending(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

struct ReducedData {
    p: u64,
    n: u64,
}

/// The certificate generator. Over ℚ (trivial tower) this is the Mazur
/// sweep; otherwise the two-prime reduction argument.
pub fn torsion_certificate(
    e: &WeierstrassCurve<TowerElement>,
    p: &ECPoint<TowerElement>,
    caps: &SearchCaps,
) -> Result<TorsionCertificate, TorsionError> {
    if p.is_infinity() {
        return Err(TorsionError::PointAtInfinity);
    }
    if !e.on_curve(p) {
        return Err(TorsionError::PointNotOnCurve);
    }
    if !e.is_nonsingular() {
        return Err(TorsionError::SingularCurve);
    }
    if is_rational_setting(e, p) {
        for m in MAZUR_SWEEP {
            if m == 1 {
                continue; // P ≠ O was checked above
            }
            if e.scalar_mul(p, m).is_infinity() {
                return Ok(TorsionCertificate::Torsion { order: m as u64 });
            }
        }
        // Mazur's theorem exhausts all possible orders over ℚ.
        return Ok(TorsionCertificate::NonTorsion(NonTorsionCert::MazurQ));
    }

    let tower = tower_of(e, p);
    // Pool of good residue-degree-1 primes with reduced point orders.
    let mut pool: Vec<ReducedData> = Vec::new();
    for prime in (5..=caps.prime_cap).filter(|&x| is_small_prime(x)) {
        if pool.len() >= 12 {
            break;
        }
        let Ok(emb) = tower_embed_mod_p(&tower, prime) else {
            continue;
        };
        if emb.residue_degree() != 1 {
            continue;
        }
        let Some((ec, pt)) = reduce_curve_point(e, p, &emb) else {
            continue;
        };
        pool.push(ReducedData {
            p: prime,
            n: order_in_fq(&ec, &pt),
        });
    }
    if pool.len() < 2 {
        return Err(TorsionError::NoPrimes {
            cap: caps.prime_cap,
        });
    }
    // Choose the pair minimizing L among the first 8 pool entries.
    let pair_pool = &pool[..pool.len().min(8)];
    let mut best: Option<(usize, usize, u64)> = None;
    for i in 0..pair_pool.len() {
        for j in i + 1..pair_pool.len() {
            let l = l_bound(pair_pool[i].p, pair_pool[i].n, pair_pool[j].p, pair_pool[j].n);
            if best.map_or(true, |(_, _, bl)| l < bl) {
                best = Some((i, j, l));
            }
        }
    }
    let (i, j, l) = best.unwrap();
    let (pp, qq) = (&pool[i], &pool[j]);

    // Cheap disproof first: a third reduction whose order does not divide L.
    for (k, r) in pool.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        if l % r.n != 0 {
            return Ok(TorsionCertificate::NonTorsion(NonTorsionCert::Reduction {
                p: pp.p,
                q: qq.p,
                n_p: pp.n,
                n_q: qq.n,
                l,
                exact: ExactNonVanishing::ReductionWitness { r: r.p, n_r: r.n },
            }));
        }
    }

    // All reduced orders divide L: decide by the exact multiplication
    // (cheap when P is torsion, guarded against blowup otherwise).
    match e.scalar_mul_guarded(p, l as i64, &point_size, EXACT_BITS_BUDGET) {
        Some(lp) => {
            if lp.is_infinity() {
                for d in divisors_ascending(l) {
                    if e.scalar_mul(p, d as i64).is_infinity() {
                        return Ok(TorsionCertificate::Torsion { order: d });
                    }
                }
                unreachable!("[L]P = O, so some divisor is the order");
            }
            Ok(TorsionCertificate::NonTorsion(NonTorsionCert::Reduction {
                p: pp.p,
                q: qq.p,
                n_p: pp.n,
                n_q: qq.n,
                l,
                exact: ExactNonVanishing::ScalarMultiple,
            }))
        }
        None => Err(TorsionError::Inconclusive(format!(
            "exact [{l}]P exceeded the size budget and no reduction witness was found"
        ))),
    }
}

/// Order of a reduced point recomputed through the group order: an
/// independent route used by certificate verification (character-sum count
/// of #E(F_p), then divisor peeling).
pub fn order_via_group_enumeration(
    ec: &WeierstrassCurve<Fq>,
    pt: &ECPoint<Fq>,
    p: u64,
) -> u64 {
    let ctx = crate::fq::FqCtx::prime(p);
    let n = curve_order_fq(ec, &ctx);
    let mut order = n;
    let mut m = n;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for ell in primes {
        while order % ell == 0
            && ec
                .scalar_mul(pt, (order / ell) as i64)
                .is_infinity()
        {
            order /= ell;
        }
    }
    order
}

/// Independent re-verification of a non-torsion certificate.
pub fn verify_nontorsion(
    e: &WeierstrassCurve<TowerElement>,
    p: &ECPoint<TowerElement>,
    cert: &NonTorsionCert,
) -> Result<(), String> {
    if p.is_infinity() {
        return Err("origin point".into());
    }
    if !e.on_curve(p) {
        return Err("point not on curve".into());
    }
    match cert {
        NonTorsionCert::MazurQ => {
            if !is_rational_setting(e, p) {
                return Err("Mazur certificate on a non-rational setting".into());
            }
            for m in MAZUR_SWEEP {
                if m > 1 && e.scalar_mul(p, m).is_infinity() {
                    return Err(format!("torsion: [{m}]P = O"));
                }
            }
            Ok(())
        }
        NonTorsionCert::Reduction {
            p: pr,
            q: qr,
            n_p,
            n_q,
            l,
            exact,
        } => {
            let tower = tower_of(e, p);
            let check_prime = |prime: u64, expected: u64| -> Result<(), String> {
                let emb = tower_embed_mod_p(&tower, prime)
                    .map_err(|er| format!("embedding at {prime} failed: {er}"))?;
                if emb.residue_degree() != 1 {
                    return Err(format!("residue degree at {prime} is not 1"));
                }
                let (ec, pt) = reduce_curve_point(e, p, &emb)
                    .ok_or_else(|| format!("bad reduction at {prime}"))?;
                let n = order_via_group_enumeration(&ec, &pt, prime);
                if n != expected {
                    return Err(format!(
                        "reduced order at {prime} recomputed as {n}, certificate says {expected}"
                    ));
                }
                Ok(())
            };
            check_prime(*pr, *n_p)?;
            check_prime(*qr, *n_q)?;
            let l2 = l_bound(*pr, *n_p, *qr, *n_q);
            if l2 != *l {
                return Err(format!("bound L recomputed as {l2}, certificate says {l}"));
            }
            match exact {
                ExactNonVanishing::ScalarMultiple => {
                    match e.scalar_mul_guarded(p, *l as i64, &point_size, EXACT_BITS_BUDGET) {
                        Some(lp) if !lp.is_infinity() => Ok(()),
                        Some(_) => Err("torsion: [L]P = O".into()),
                        None => Err("exact check exceeded the size budget".into()),
                    }
                }
                ExactNonVanishing::ReductionWitness { r, n_r } => {
                    check_prime(*r, *n_r)?;
                    if l % n_r == 0 {
                        return Err("witness order divides L".into());
                    }
                    Ok(())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::poly::UniPoly;
    use crate::tower::extend_tower;

    fn te(n: i64) -> TowerElement {
        TowerElement::from_int(n)
    }

    #[test]
    fn mazur_torsion_order_6() {
        // y² = x³ + 1 with (2, 3): order 6.
        let e = WeierstrassCurve::new(te(0), te(0), te(0), te(0), te(1));
        let p = ECPoint::Affine(te(2), te(3));
        let cert = torsion_certificate(&e, &p, &SearchCaps::default()).unwrap();
        assert_eq!(cert, TorsionCertificate::Torsion { order: 6 });
        let q = ECPoint::Affine(te(0), te(1));
        let cert = torsion_certificate(&e, &q, &SearchCaps::default()).unwrap();
        assert_eq!(cert, TorsionCertificate::Torsion { order: 3 });
    }

    #[test]
    fn mazur_nontorsion() {
        // y² = x³ − 2, P = (3, 5): the classic rank-1 generator.
        let e = WeierstrassCurve::new(te(0), te(0), te(0), te(0), te(-2));
        let p = ECPoint::Affine(te(3), te(5));
        let cert = torsion_certificate(&e, &p, &SearchCaps::default()).unwrap();
        assert_eq!(cert, TorsionCertificate::NonTorsion(NonTorsionCert::MazurQ));
        match &cert {
            TorsionCertificate::NonTorsion(c) => verify_nontorsion(&e, &p, c).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn tower_nontorsion_over_quadratic_field() {
        // Over Q(√2): y² = x³ − 2 with P = (√2·...) — use a rational point
        // promoted into the tower so the reduction machinery exercises the
        // tower route.
        let m = UniPoly::from_coeffs(vec![te(-2), te(0), te(1)]);
        let k = extend_tower(&crate::tower::TowerField::rationals(), &m, "s").unwrap();
        let s = TowerElement::generator(&k);
        // E: y² = x³ + 2: point (−1, 1); also the tower point (s², s³)? no —
        // use x = −1, y = 1: 1 = −1 + 2 ✓.
        let e = WeierstrassCurve::new(
            te(0).promote(&k),
            te(0).promote(&k),
            te(0).promote(&k),
            te(0).promote(&k),
            te(2).promote(&k),
        );
        let p = ECPoint::Affine(te(-1).promote(&k), te(1).promote(&k));
        assert!(e.on_curve(&p));
        let cert = torsion_certificate(&e, &p, &SearchCaps::default()).unwrap();
        match &cert {
            TorsionCertificate::NonTorsion(c) => {
                assert!(matches!(c, NonTorsionCert::Reduction { .. }));
                verify_nontorsion(&e, &p, c).unwrap();
            }
            other => panic!("expected non-torsion, got {other:?}"),
        }
        let _ = s;
    }

    #[test]
    fn tower_torsion_detected() {
        // y² = x³ + 1 over Q(i): (2, 3) still has order 6.
        let m = UniPoly::from_coeffs(vec![te(1), te(0), te(1)]);
        let k = extend_tower(&crate::tower::TowerField::rationals(), &m, "i").unwrap();
        let e = WeierstrassCurve::new(
            te(0).promote(&k),
            te(0).promote(&k),
            te(0).promote(&k),
            te(0).promote(&k),
            te(1).promote(&k),
        );
        let p = ECPoint::Affine(te(2).promote(&k), te(3).promote(&k));
        let cert = torsion_certificate(&e, &p, &SearchCaps::default()).unwrap();
        assert_eq!(cert, TorsionCertificate::Torsion { order: 6 });
    }

    #[test]
    fn reduction_compatibility() {
        // reduce-then-add equals add-then-reduce on random pairs.
        use rand::{Rng, SeedableRng};
        let e = WeierstrassCurve::new(te(0), te(0), te(0), te(0), te(1));
        let tower = crate::tower::TowerField::rationals();
        let emb = tower_embed_mod_p(&tower, 13).unwrap();
        let (ec, _) = reduce_curve_point(&e, &ECPoint::Infinity, &emb).unwrap();
        // Points of E(Q) torsion: the six from the x³+1 curve.
        let pts = [
            ECPoint::Infinity,
            ECPoint::Affine(te(0), te(1)),
            ECPoint::Affine(te(0), te(-1)),
            ECPoint::Affine(te(-1), te(0)),
            ECPoint::Affine(te(2), te(3)),
            ECPoint::Affine(te(2), te(-3)),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = &pts[rng.gen_range(0..pts.len())];
            let b = &pts[rng.gen_range(0..pts.len())];
            let sum = e.add(a, b);
            let (_, ra) = reduce_curve_point(&e, a, &emb).unwrap();
            let (_, rb) = reduce_curve_point(&e, b, &emb).unwrap();
            let (_, rsum) = reduce_curve_point(&e, &sum, &emb).unwrap();
            assert_eq!(ec.add(&ra, &rb), rsum);
        }
        let _ = rat(0);
    }
}
