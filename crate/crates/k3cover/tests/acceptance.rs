//! The acceptance suite: one test per criterion, each printing a PASS line.
//! Golden values are exact rational constants; oracle-backed checks carry
//! their independent oracle in this file.

use k3cover::density::{alpha_eval, density_check, fibration_eval, FibrationIndex};
use k3cover::family::{build_xh, smooth_mod3, HPolynomial};
use k3cover::field::{rat, ratio, Field, Rational};
use k3cover::fq::{Fq, FqCtx};
use k3cover::genus1::modelmap::ModelPoint;
use k3cover::genus1::quartic::pullback_quartic;
use k3cover::genus1::torsion::TorsionCertificate;
use k3cover::genus1::weierstrass::{curve_order_fq, order_in_fq, ECPoint, WeierstrassCurve};
use k3cover::pipeline::{
    certify_bound12, certify_rational, enumerate_points, verify_certificate, Certificate,
};
use k3cover::poly::{resultant, MultiPoly, UniPoly};
use k3cover::surface::{
    branch_point_search, count_points_fq, is_smooth_sextic, DatumRoute, K3DoubleCover,
    SearchCaps, TernarySexticForm, WP3Point,
};
use k3cover::tower::{extend_tower, tower_embed_mod_p, TowerElement, TowerField};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn x0() -> K3DoubleCover<Rational> {
    build_xh(&HPolynomial::zero())
}

/// Criterion 1: the tangent-pullback pipeline on X₀ at [1:0:0] with tangent
/// 11y + 7z = 0 reproduces the golden quartic exactly.
#[test]
fn acceptance_1_golden_quartic() {
    let start = Instant::now();
    let datum = branch_point_search(&x0().to_tower(), SearchCaps::default()).unwrap();
    assert_eq!(datum.route, DatumRoute::AtInfinity);
    assert_eq!(
        datum.point.coords().map(|c| c.as_rational().unwrap()),
        [rat(1), rat(0), rat(0)]
    );
    // Canonical form of 11y + 7z = 0.
    assert_eq!(datum.tangent.a.as_rational().unwrap(), rat(0));
    assert_eq!(datum.tangent.b.as_rational().unwrap(), rat(1));
    assert_eq!(datum.tangent.c.as_rational().unwrap(), ratio(7, 11));
    let (_, quartic) = pullback_quartic(&datum).unwrap();
    let h: Vec<Rational> = quartic
        .h
        .coeffs()
        .iter()
        .map(|c| c.as_rational().unwrap())
        .collect();
    let expected = [
        rat(1),
        ratio(-4078, 3577),
        ratio(81451, 25039),
        ratio(-1540220, 175273),
        ratio(16771780, 1226911),
    ];
    assert_eq!(h, expected, "quartic coefficients (lowest degree first)");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 (golden quartic): PASS in {elapsed:?}");
}

/// Criterion 2: on the Weierstrass model with origin the image of
/// P₁ = [1:0:0:1], the image of P₂ satisfies [m]P₂ ≠ O for all m in the
/// Mazur set, and certify_rational returns a verified certificate.
#[test]
fn acceptance_2_golden_torsion() {
    let start = Instant::now();
    let cert = certify_rational(&x0(), SearchCaps::default()).unwrap();
    assert_eq!(cert.rescale, rat(1), "s = h(0) = 1 for X0");
    let e = &cert.weierstrass;
    let p2 = &cert.q_point;
    assert!(e.on_curve(p2));
    for m in [2i64, 3, 4, 5, 6, 7, 8, 9, 10, 12] {
        assert!(
            !e.scalar_mul(p2, m).is_infinity(),
            "[{m}]P2 = O would make P2 torsion"
        );
    }
    let wrapped = Certificate::Rational(cert);
    let (ok, reasons) = verify_certificate(&wrapped);
    assert!(ok, "certificate failed verification: {reasons:?}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("ACCEPTANCE 2 (golden torsion): PASS in {elapsed:?}");
}

/// Criterion 3: enumerate_points yields 10 pairwise-distinct points, each
/// satisfying 73w² = 7(…) exactly.
#[test]
fn acceptance_3_point_enumeration() {
    let start = Instant::now();
    let surface = x0();
    let cert = certify_rational(&surface, SearchCaps::default()).unwrap();
    let pts = enumerate_points(&Certificate::Rational(cert), 10).unwrap();
    assert!(pts.on_original, "s = 1, so points live on X0 itself");
    assert_eq!(pts.points.len(), 10);
    let x0_tower = surface.to_tower();
    for (i, p) in pts.points.iter().enumerate() {
        assert!(x0_tower.on_surface(p), "point {i} fails 73w^2 = 7(...)");
        for q in &pts.points[i + 1..] {
            assert!(p != q, "points must be pairwise distinct");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("ACCEPTANCE 3 (point enumeration): PASS in {elapsed:?}");
}

/// Criterion 4: the fibration data of the density demonstration — exact
/// parameters [7:1] and [19/5:1], smooth fiber cubics, rational alpha
/// values, and non-torsion certificates for both.
#[test]
fn acceptance_4_fibration_data() {
    let start = Instant::now();
    let p = WP3Point::new(rat(2), ratio(3, 2), rat(1), ratio(69, 8));
    let t1 = fibration_eval(FibrationIndex::F1, &p).unwrap();
    assert_eq!(t1.affine(), Some(&rat(7)));
    let t2 = fibration_eval(FibrationIndex::F2, &p).unwrap();
    assert_eq!(t2.affine(), Some(&ratio(19, 5)));
    for i in [FibrationIndex::F1, FibrationIndex::F2] {
        let (model, rec) = alpha_eval(i, &p).unwrap();
        assert!(model.smooth, "fiber cubic must be smooth");
        // alpha_eval returning at all means the value is rational; re-check
        // it sits on the surface.
        assert!(k3cover::density::surface_y().on_surface(&rec.r_surface));
    }
    let report = density_check(&p, SearchCaps::default()).unwrap();
    assert!(report.criteria_met, "failures: {:?}", report.failures);
    for c in &report.checks {
        assert!(matches!(
            c.torsion,
            Some(TorsionCertificate::NonTorsion(_))
        ));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("ACCEPTANCE 4 (fibration data): PASS in {elapsed:?}");
}

/// Criterion 5: a fixed-seed corpus of ≥ 20 pseudo-random smooth sextics
/// with coefficients in [−5, 5]; every successful certificate satisfies
/// [L:ℚ] ≤ 12 and passes verification; the inconclusive rate is reported
/// and bounded.
#[test]
fn acceptance_5_bound12_corpus() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20260801);
    let monomials: Vec<[u32; 3]> = (0..=6u32)
        .flat_map(|i| (0..=6 - i).map(move |j| [i, j, 6 - i - j]))
        .collect();
    let mut tried = 0usize;
    let mut certified = 0usize;
    let mut inconclusive: Vec<String> = Vec::new();
    while tried < 20 {
        let f: MultiPoly<Rational> = MultiPoly::from_terms(
            monomials
                .iter()
                .map(|&e| (e, rat(rng.gen_range(-5..=5)))),
        );
        if f.is_zero() {
            continue;
        }
        let form = TernarySexticForm::new(f).unwrap();
        let (smooth, _) = is_smooth_sextic(&form);
        if !smooth {
            continue; // the corpus is sextics that are smooth
        }
        tried += 1;
        let surface = K3DoubleCover::new(form).to_tower();
        match certify_bound12(&surface, SearchCaps::default()) {
            Ok(cert) => {
                assert!(
                    cert.relative_degree() <= 12,
                    "degree bound violated: {}",
                    cert.relative_degree()
                );
                let (ok, reasons) = verify_certificate(&Certificate::Bound12(cert));
                assert!(ok, "surface {tried}: verification failed: {reasons:?}");
                certified += 1;
            }
            Err(e) => inconclusive.push(format!("surface {tried}: {e}")),
        }
    }
    let rate = inconclusive.len() as f64 / tried as f64;
    println!(
        "ACCEPTANCE 5 (bound-12 corpus): {certified}/{tried} certified, \
         inconclusive rate {:.1}% {:?}",
        rate * 100.0,
        inconclusive
    );
    assert!(rate <= 0.25, "inconclusive rate too high: {inconclusive:?}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!("ACCEPTANCE 5 (bound-12 corpus): PASS in {elapsed:?}");
}

/// Criterion 6: the mod-3 smoothness certificate is h-independent, and the
/// mod-3 data for h = x⁶ is byte-identical to h = 0.
#[test]
fn acceptance_6_mod3_reproduction() {
    let start = Instant::now();
    let base = smooth_mod3(&build_xh(&HPolynomial::zero())).unwrap();
    let base_bytes = format!("{base:?}");
    let x6 = HPolynomial::new(MultiPoly::from_terms([([6, 0, 0], rat(1))])).unwrap();
    let x6_cert = smooth_mod3(&build_xh(&x6)).unwrap();
    assert_eq!(format!("{x6_cert:?}"), base_bytes, "h = x^6 vs h = 0");
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let monomials: Vec<[u32; 3]> = (0..=6u32)
        .flat_map(|i| (0..=6 - i).map(move |j| [i, j, 6 - i - j]))
        .collect();
    for _ in 0..10 {
        let h = HPolynomial::new(MultiPoly::from_terms(
            monomials
                .iter()
                .map(|&e| (e, rat(rng.gen_range(-9..=9)))),
        ))
        .unwrap();
        let cert = smooth_mod3(&build_xh(&h)).unwrap();
        assert_eq!(format!("{cert:?}"), base_bytes);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("ACCEPTANCE 6 (mod-3 reproduction): PASS in {elapsed:?}");
}

/// Criterion 7: the oracle suites.
#[test]
fn acceptance_7_oracle_suites() {
    let start = Instant::now();

    // (a) Elliptic group law against full enumeration over F_11 and F_13.
    for (p, a4, a6) in [(11u64, 1, 3), (13u64, 2, 5)] {
        let ctx = FqCtx::prime(p);
        let e = WeierstrassCurve::new(
            ctx.zero(),
            ctx.zero(),
            ctx.zero(),
            ctx.from_u64(a4),
            ctx.from_u64(a6),
        );
        assert!(e.is_nonsingular());
        let mut points = vec![ECPoint::Infinity];
        for x in ctx.all_elements() {
            for y in ctx.all_elements() {
                let pt = ECPoint::Affine(x.clone(), y.clone());
                if e.on_curve(&pt) {
                    points.push(pt);
                }
            }
        }
        assert_eq!(points.len() as u64, curve_order_fq(&e, &ctx));
        for pt in &points {
            assert_eq!(points.len() as u64 % order_in_fq(&e, pt), 0);
            for qt in &points {
                let sum = e.add(pt, qt);
                assert!(points.contains(&sum), "closure fails over F_{p}");
            }
        }
        // Associativity over the full group.
        for a in points.iter().step_by(3) {
            for b in points.iter().step_by(2) {
                for c in points.iter().step_by(3) {
                    assert_eq!(e.add(&e.add(a, b), c), e.add(a, &e.add(b, c)));
                }
            }
        }
    }

    // (b) count_points_Fq against the naive enumeration oracle at q = 3, 9.
    let surfaces = vec![
        x0(),
        k3cover::density::surface_y(),
        K3DoubleCover::new(
            TernarySexticForm::new(MultiPoly::from_terms([([0, 0, 6], rat(1))])).unwrap(),
        ),
        K3DoubleCover::new(
            TernarySexticForm::new(MultiPoly::from_terms([
                ([6, 0, 0], rat(-1)),
                ([0, 6, 0], rat(-1)),
                ([0, 0, 6], rat(-1)),
            ]))
            .unwrap(),
        ),
        K3DoubleCover::new(
            TernarySexticForm::new(MultiPoly::from_terms([
                ([5, 1, 0], rat(2)),
                ([2, 2, 2], ratio(1, 2)),
                ([0, 0, 6], rat(1)),
            ]))
            .unwrap(),
        ),
    ];
    for q in [3u64, 9] {
        for s in &surfaces {
            assert_eq!(count_points_fq(s, q).unwrap(), naive_count(s, q), "q = {q}");
        }
    }

    // (c) 200 random factorizations re-multiply to their inputs.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut done = 0;
    while done < 200 {
        let deg = rng.gen_range(1..=6);
        let coeffs: Vec<Rational> = (0..=deg).map(|_| rat(rng.gen_range(-9..=9))).collect();
        let f = UniPoly::from_coeffs(coeffs);
        if f.deg_i() < 1 {
            continue;
        }
        let factors = k3cover::factor_univariate(&f);
        let prod = factors
            .iter()
            .fold(UniPoly::one(), |acc: UniPoly<Rational>, (g, m)| {
                acc * g.pow(*m as usize)
            });
        assert_eq!(prod.scale(&f.lc()), f);
        done += 1;
    }

    // (d) model-map round-trips on sampled points.
    let cert = certify_rational(&x0(), SearchCaps::default()).unwrap();
    let e = cert.weierstrass.clone();
    let mut samples = Vec::new();
    let mut acc = ECPoint::Infinity;
    for _ in 0..6 {
        acc = e.add(&acc, &cert.q_point);
        samples.push(ModelPoint::Curve(acc.clone()));
    }
    for s in &samples {
        let Some(back) = cert.map.backward(s) else {
            continue;
        };
        assert_eq!(cert.map.forward(&back), Some(s.clone()), "round trip at {s:?}");
    }
    let p = WP3Point::new(rat(2), ratio(3, 2), rat(1), ratio(69, 8));
    for i in [FibrationIndex::F1, FibrationIndex::F2] {
        let (model, rec) = alpha_eval(i, &p).unwrap();
        let (fe, fmap) = model.weierstrass.as_ref().unwrap();
        let mut acc = ECPoint::Infinity;
        let mut checked = 0;
        for _ in 0..8 {
            acc = fe.add(&acc, &rec.r_on_model);
            let s = ModelPoint::Curve(acc.clone());
            let Some(back) = fmap.backward(&s) else { continue };
            assert_eq!(fmap.forward(&back), Some(s));
            checked += 1;
        }
        assert!(checked >= 5);
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!("ACCEPTANCE 7 (oracle suites): PASS in {elapsed:?}");
}

fn naive_count(surface: &K3DoubleCover<Rational>, q: u64) -> u64 {
    let (p, k) = if q == 3 { (3u64, 1usize) } else { (3, 2) };
    let ctx = if k == 1 {
        FqCtx::prime(p)
    } else {
        let m = k3cover::poly::factor_fq::irreducible_poly(p, k);
        let coeffs: Vec<u64> = m.coeffs().iter().map(|c| c.residue().unwrap_or(0)).collect();
        FqCtx::extension(p, coeffs)
    };
    let f = surface
        .f()
        .try_map_coeffs(|c| ctx.from_rational(c).ok_or(()))
        .unwrap();
    let els = ctx.all_elements();
    let mut seen: Vec<Vec<Vec<u64>>> = Vec::new();
    for x in &els {
        for y in &els {
            for z in &els {
                if x.is_zero() && y.is_zero() && z.is_zero() {
                    continue;
                }
                for w in &els {
                    if w.clone() * w.clone() != f.eval([x, y, z]) {
                        continue;
                    }
                    let l = [x, y, z].into_iter().find(|c| !c.is_zero()).unwrap();
                    let li = l.inv().unwrap();
                    let li3 = li.clone() * li.clone() * li.clone();
                    let canon = vec![
                        (x.clone() * li.clone()).coeffs().unwrap().to_vec(),
                        (y.clone() * li.clone()).coeffs().unwrap().to_vec(),
                        (z.clone() * li.clone()).coeffs().unwrap().to_vec(),
                        (w.clone() * li3).coeffs().unwrap().to_vec(),
                    ];
                    if !seen.contains(&canon) {
                        seen.push(canon);
                    }
                }
            }
        }
    }
    seen.len() as u64
}

/// Criterion 8: the property suites, ≥ 100 random cases each, fixed seed.
#[test]
fn acceptance_8_property_suites() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(888);

    // Field axioms over a degree-6 tower: Q(c) with c^6 = 2.
    let m = UniPoly::from_coeffs(vec![
        TowerElement::from_int(-2),
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::one(),
    ]);
    let k6 = extend_tower(&TowerField::rationals(), &m, "c").unwrap();
    let gen = TowerElement::generator(&k6);
    let mut random_el = |rng: &mut ChaCha8Rng| -> TowerElement {
        let mut acc = TowerElement::zero().promote(&k6);
        let mut pw = TowerElement::one().promote(&k6);
        for _ in 0..6 {
            acc = acc + TowerElement::from_rational(ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                * pw.clone();
            pw = pw * gen.clone();
        }
        acc
    };
    for _ in 0..100 {
        let a = random_el(&mut rng);
        let b = random_el(&mut rng);
        let c = random_el(&mut rng);
        assert_eq!(
            (a.clone() + b.clone()) + c.clone(),
            a.clone() + (b.clone() + c.clone())
        );
        assert_eq!(
            (a.clone() * b.clone()) * c.clone(),
            a.clone() * (b.clone() * c.clone())
        );
        assert_eq!(
            a.clone() * (b.clone() + c.clone()),
            a.clone() * b.clone() + a.clone() * c.clone()
        );
        if !a.is_zero() {
            assert!((a.clone() * a.inv().unwrap()).is_one());
        }
    }

    // resultant(p, q) = 0 iff gcd(p, q) nonconstant, over Q.
    let mut cases = 0;
    while cases < 100 {
        let rand_poly = |rng: &mut ChaCha8Rng, deg: usize| -> UniPoly<Rational> {
            UniPoly::from_coeffs((0..=deg).map(|_| rat(rng.gen_range(-5..=5))).collect())
        };
        let dp = rng.gen_range(1..=4);
        let dq = rng.gen_range(1..=4);
        let mut p = rand_poly(&mut rng, dp);
        let mut q = rand_poly(&mut rng, dq);
        if p.deg_i() < 1 || q.deg_i() < 1 {
            continue;
        }
        // Half the cases share a forced common factor.
        if cases % 2 == 0 {
            let common = UniPoly::from_coeffs(vec![rat(rng.gen_range(-3..=3)), rat(1)]);
            p = p * common.clone();
            q = q * common;
        }
        let r = resultant(&p, &q);
        let g = p.gcd(&q);
        assert_eq!(r.is_zero(), !g.is_constant(), "p = {p:?}, q = {q:?}");
        cases += 1;
    }

    // Reduction homomorphism on 100 random pairs, Q(i) -> F_13.
    let mi = UniPoly::from_coeffs(vec![
        TowerElement::from_int(1),
        TowerElement::from_int(0),
        TowerElement::from_int(1),
    ]);
    let qi = extend_tower(&TowerField::rationals(), &mi, "i").unwrap();
    let emb = tower_embed_mod_p(&qi, 13).unwrap();
    let iu = TowerElement::generator(&qi);
    for _ in 0..100 {
        let a = TowerElement::from_int(rng.gen_range(-30..30))
            + TowerElement::from_int(rng.gen_range(-30..30)) * iu.clone();
        let b = TowerElement::from_int(rng.gen_range(-30..30))
            + TowerElement::from_int(rng.gen_range(-30..30)) * iu.clone();
        assert_eq!(
            emb.map(&(a.clone() + b.clone())).unwrap(),
            emb.map(&a).unwrap() + emb.map(&b).unwrap()
        );
        assert_eq!(
            emb.map(&(a.clone() * b.clone())).unwrap(),
            emb.map(&a).unwrap() * emb.map(&b).unwrap()
        );
    }

    // Group-law associativity on 100 random triples over Q and over Q(i).
    let e_q = WeierstrassCurve::new(
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::from_int(-2),
    );
    let gen_q = ECPoint::Affine(TowerElement::from_int(3), TowerElement::from_int(5));
    let e_qi = e_q.map_scalars(&|c: &TowerElement| c.promote(&qi));
    let gen_qi = ECPoint::Affine(
        TowerElement::from_int(3).promote(&qi),
        TowerElement::from_int(5).promote(&qi),
    );
    let mut pool_q = vec![ECPoint::Infinity];
    let mut pool_qi = vec![ECPoint::Infinity];
    let mut acc_q = ECPoint::Infinity;
    let mut acc_qi = ECPoint::Infinity;
    for _ in 0..5 {
        acc_q = e_q.add(&acc_q, &gen_q);
        acc_qi = e_qi.add(&acc_qi, &gen_qi);
        pool_q.push(acc_q.clone());
        pool_q.push(e_q.neg(&acc_q));
        pool_qi.push(acc_qi.clone());
        pool_qi.push(e_qi.neg(&acc_qi));
    }
    for _ in 0..50 {
        let a = pool_q[rng.gen_range(0..pool_q.len())].clone();
        let b = pool_q[rng.gen_range(0..pool_q.len())].clone();
        let c = pool_q[rng.gen_range(0..pool_q.len())].clone();
        assert_eq!(e_q.add(&e_q.add(&a, &b), &c), e_q.add(&a, &e_q.add(&b, &c)));
        assert_eq!(e_q.add(&a, &b), e_q.add(&b, &a));
        let a = pool_qi[rng.gen_range(0..pool_qi.len())].clone();
        let b = pool_qi[rng.gen_range(0..pool_qi.len())].clone();
        let c = pool_qi[rng.gen_range(0..pool_qi.len())].clone();
        assert_eq!(
            e_qi.add(&e_qi.add(&a, &b), &c),
            e_qi.add(&a, &e_qi.add(&b, &c))
        );
        assert_eq!(e_qi.add(&a, &b), e_qi.add(&b, &a));
    }
    // Double-and-add equals repeated addition up to 20.
    let mut acc = ECPoint::Infinity;
    for k in 1..=20 {
        acc = e_q.add(&acc, &gen_q);
        assert_eq!(acc, e_q.scalar_mul(&gen_q, k));
    }

    let elapsed = start.elapsed();
    println!("ACCEPTANCE 8 (property suites): PASS in {elapsed:?}");
}

/// The degree-6-extension lemma at work away from the rational-point case:
/// the Fermat-type surface w² = −x⁶−y⁶−z⁶ has no rational point but gets a
/// bound-12 certificate over an explicit extension.
#[test]
fn acceptance_5b_fermat_bound12() {
    let fermat = K3DoubleCover::new(
        TernarySexticForm::new(MultiPoly::from_terms([
            ([6, 0, 0], rat(-1)),
            ([0, 6, 0], rat(-1)),
            ([0, 0, 6], rat(-1)),
        ]))
        .unwrap(),
    );
    let cert = certify_bound12(&fermat.to_tower(), SearchCaps::default()).unwrap();
    assert!(cert.relative_degree() <= 12);
    let wrapped = Certificate::Bound12(cert);
    let (ok, reasons) = verify_certificate(&wrapped);
    assert!(ok, "{reasons:?}");
    let pts = enumerate_points(&wrapped, 3).unwrap();
    assert_eq!(pts.points.len(), 3);
    println!("ACCEPTANCE 5b (Fermat bound-12): PASS");
}
