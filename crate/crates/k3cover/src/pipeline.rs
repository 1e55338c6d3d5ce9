//! End-to-end certificate generation and verification: the degree ≤ 12
//! extension certificate, the ℚ-rational rescaling certificate, point
//! enumeration back onto the surface, and independent re-verification.

use crate::field::Rational;
use crate::genus1::modelmap::{ModelMap, ModelPoint};
use crate::genus1::quartic::{pullback_quartic, quartic_to_weierstrass, QuarticGenus1Curve};
use crate::genus1::torsion::{
    torsion_certificate, verify_nontorsion, NonTorsionCert, TorsionCertificate,
};
use crate::genus1::weierstrass::{ECPoint, WeierstrassCurve};
use crate::poly::UniPoly;
use crate::surface::{
    is_smooth_sextic_tower, BranchSearcher, BranchTangencyDatum, K3DoubleCover, SearchCaps,
    SurfaceError, TernarySexticForm, WP3Point,
};
use crate::tower::{extend_tower, tower_sqrt, TowerElement, TowerField};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("surface is singular")]
    Singular,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("branch search exhausted; rejections: {0:?}")]
    SearchExhausted(Vec<String>),
    #[error("alpha sweep exhausted (|alpha| <= {cap}); diagnostics: {diagnostics:?}")]
    AlphaExhausted { cap: i64, diagnostics: Vec<String> },
    #[error("recipe inconclusive for this surface: {0}")]
    Inconclusive(String),
}

/// Theorem-style certificate: X(L) is infinite with [L:K] ≤ 12.
#[derive(Clone, Debug)]
pub struct ExtensionCertificate {
    /// The surface over its base field K.
    pub surface: K3DoubleCover<TowerElement>,
    pub base: Arc<TowerField>,
    /// K′ = K(x₀) with the tangency datum.
    pub datum: BranchTangencyDatum,
    /// The normalized pullback w² = h over K′.
    pub quartic: QuarticGenus1Curve<TowerElement>,
    /// The swept α with h(α) ≠ 0.
    pub alpha: i64,
    /// Whether t² − h(α) was irreducible (L = K′(√h(α))) or already split.
    pub sqrt_adjoined: bool,
    /// L, and √h(α) inside it.
    pub tower_l: Arc<TowerField>,
    pub sqrt_h_alpha: TowerElement,
    pub weierstrass: WeierstrassCurve<TowerElement>,
    pub map: ModelMap<TowerElement>,
    /// The non-torsion point: the image of (α, −√h(α)) with origin (α, +√h(α)).
    pub q_point: ECPoint<TowerElement>,
    pub nontorsion: NonTorsionCert,
}

impl ExtensionCertificate {
    /// [L : K], the theorem's bound (≤ 2·6 = 12).
    pub fn relative_degree(&self) -> usize {
        let k = self.base.total_degree().max(1);
        self.tower_l.total_degree() / k
    }
}

/// Remark-style certificate: the rescaled surface X′ = (w² = f/s) has
/// infinitely many K-rational points through P₂ = (0, −1) over P₁ = (0, 1).
#[derive(Clone, Debug)]
pub struct InfinitePointsCertificate {
    pub surface: K3DoubleCover<Rational>,
    /// s = h(0).
    pub rescale: Rational,
    pub rescaled: K3DoubleCover<Rational>,
    pub datum: BranchTangencyDatum,
    /// h′ = h/s with h′(0) = 1.
    pub quartic: QuarticGenus1Curve<Rational>,
    pub weierstrass: WeierstrassCurve<Rational>,
    pub map: ModelMap<Rational>,
    /// Image of P₂ = (0, −1) with origin P₁ = (0, 1).
    pub q_point: ECPoint<Rational>,
    pub nontorsion: NonTorsionCert,
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Bound12(ExtensionCertificate),
    Rational(InfinitePointsCertificate),
}

fn alpha_sweep(cap: i64) -> impl Iterator<Item = i64> {
    (0..=cap).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
}

/// The Theorem 1.1 pipeline: branch search, tangent pullback, α-sweep with
/// at most one quadratic extension, and a non-torsion certificate. Sweep
/// orders are fixed so certificates are reproducible.
pub fn certify_bound12(
    surface: &K3DoubleCover<TowerElement>,
    caps: SearchCaps,
) -> Result<ExtensionCertificate, PipelineError> {
    let (smooth, _proof) = is_smooth_sextic_tower(&surface.form)?;
    if !smooth {
        return Err(PipelineError::Singular);
    }
    let mut searcher = BranchSearcher::new(surface, caps);
    let base = searcher.base_field().clone();
    let mut diagnostics: Vec<String> = Vec::new();
    while let Some(datum) = searcher.next_datum() {
        let (_, quartic) = match pullback_quartic(&datum) {
            Ok(v) => v,
            Err(e) => {
                diagnostics.push(format!("pullback: {e}"));
                continue;
            }
        };
        let kprime = datum.field.clone();
        for alpha in alpha_sweep(caps.alpha_cap) {
            let alpha_el = crate::surface::promote_into(&TowerElement::from_int(alpha), &kprime);
            let h_alpha = quartic.h.eval(&alpha_el);
            if h_alpha.is_zero() {
                continue;
            }
            // Either h(α) is already a square in K′ or we adjoin √h(α).
            let (tower_l, v, sqrt_adjoined) = match tower_sqrt(&h_alpha) {
                Some(r) => (kprime.clone(), r, false),
                None => {
                    let m = UniPoly::from_coeffs(vec![
                        -h_alpha.clone(),
                        TowerElement::zero(),
                        TowerElement::one(),
                    ]);
                    let name = format!("w{}", kprime.depth() + 1);
                    match extend_tower(&kprime, &m, &name) {
                        Ok(l) => (l.clone(), TowerElement::generator(&l), true),
                        Err(e) => {
                            diagnostics.push(format!("alpha={alpha}: {e}"));
                            continue;
                        }
                    }
                }
            };
            let quartic_l = QuarticGenus1Curve {
                h: quartic
                    .h
                    .map_coeffs(|c| crate::surface::promote_into(c, &tower_l)),
            };
            let alpha_l = crate::surface::promote_into(&alpha_el, &tower_l);
            let (e, map) = match quartic_to_weierstrass(&quartic_l, &alpha_l, &v) {
                Ok(v) => v,
                Err(err) => {
                    diagnostics.push(format!("alpha={alpha}: {err}"));
                    continue;
                }
            };
            let conj = ModelPoint::Quartic(alpha_l.clone(), -v.clone());
            let Some(ModelPoint::Curve(q)) = map.forward(&conj) else {
                diagnostics.push(format!("alpha={alpha}: conjugate image exceptional"));
                continue;
            };
            match torsion_certificate(&e, &q, &caps) {
                Ok(TorsionCertificate::NonTorsion(nt)) => {
                    return Ok(ExtensionCertificate {
                        surface: surface.clone(),
                        base,
                        datum,
                        quartic,
                        alpha,
                        sqrt_adjoined,
                        tower_l,
                        sqrt_h_alpha: v,
                        weierstrass: e,
                        map,
                        q_point: q,
                        nontorsion: nt,
                    });
                }
                Ok(TorsionCertificate::Torsion { order }) => {
                    diagnostics.push(format!("alpha={alpha}: torsion of order {order}"));
                }
                Err(err) => {
                    diagnostics.push(format!("alpha={alpha}: {err}"));
                }
            }
        }
    }
    if searcher.rejections.is_empty() && diagnostics.is_empty() {
        diagnostics.push("no branch datum found".into());
    }
    diagnostics.extend(searcher.rejections.clone());
    Err(PipelineError::AlphaExhausted {
        cap: caps.alpha_cap,
        diagnostics,
    })
}

/// The Remark-style ℚ-rational pipeline: needs a datum with K′ = ℚ and
/// s = h(0) ≠ 0; rescales so the quartic has constant term 1 and tests
/// P₂ = (0, −1) against origin P₁ = (0, 1) under Mazur.
pub fn certify_rational(
    surface: &K3DoubleCover<Rational>,
    caps: SearchCaps,
) -> Result<InfinitePointsCertificate, PipelineError> {
    let form_q = TernarySexticForm::new(surface.f().clone()).map_err(PipelineError::Surface)?;
    let (smooth, _proof) = crate::surface::is_smooth_sextic(&form_q);
    if !smooth {
        return Err(PipelineError::Singular);
    }
    let tower_surface = surface.to_tower();
    let mut searcher = BranchSearcher::new(&tower_surface, caps);
    let mut last_failure: Option<String> = None;
    while let Some(datum) = searcher.next_datum() {
        if datum.field.depth() != 0 {
            continue; // need K′ = ℚ
        }
        let (_, quartic_t) = match pullback_quartic(&datum) {
            Ok(v) => v,
            Err(e) => {
                last_failure = Some(format!("pullback: {e}"));
                continue;
            }
        };
        let h: UniPoly<Rational> = quartic_t
            .h
            .map_coeffs(|c| c.as_rational().expect("K' = Q datum"));
        let s = h.coeff(0);
        if s.is_zero() {
            last_failure = Some("s = h(0) = 0".into());
            continue;
        }
        let s_inv = crate::field::Field::inv(&s).unwrap();
        let h_prime = h.scale(&s_inv);
        debug_assert!(h_prime.coeff(0).is_one());
        let rescaled_form = surface.f().scale(&s_inv);
        let rescaled = K3DoubleCover::new(TernarySexticForm::new(rescaled_form).unwrap());
        let quartic = QuarticGenus1Curve::new(h_prime).expect("h separable implies h' separable");
        let one = Rational::one();
        let (e, map) = quartic_to_weierstrass(&quartic, &Rational::zero(), &one)
            .expect("(0, 1) lies on the rescaled quartic");
        let p2 = ModelPoint::Quartic(Rational::zero(), -Rational::one());
        let Some(ModelPoint::Curve(q)) = map.forward(&p2) else {
            last_failure = Some("image of P2 exceptional".into());
            continue;
        };
        // Everything is over ℚ here; lift into trivial tower elements for
        // the torsion machinery.
        let lift = |c: &Rational| TowerElement::from_rational(c.clone());
        let e_t = e.map_scalars(&lift);
        let q_t = q.map_scalars(&lift);
        match torsion_certificate(&e_t, &q_t, &caps) {
            Ok(TorsionCertificate::NonTorsion(nt)) => {
                return Ok(InfinitePointsCertificate {
                    surface: surface.clone(),
                    rescale: s,
                    rescaled,
                    datum,
                    quartic,
                    weierstrass: e,
                    map,
                    q_point: q,
                    nontorsion: nt,
                });
            }
            Ok(TorsionCertificate::Torsion { order }) => {
                return Err(PipelineError::Inconclusive(format!(
                    "P2 is torsion of order {order}"
                )));
            }
            Err(err) => {
                last_failure = Some(err.to_string());
            }
        }
    }
    Err(PipelineError::Inconclusive(last_failure.unwrap_or_else(
        || format!("no K' = Q datum with s != 0 found; rejections: {:?}", searcher.rejections),
    )))
}

/// Walks [k]Q back through the model chain onto the surface. For a rational
/// certificate the points land on X′ (equal to X exactly when s is a square
/// and the enumeration multiplies w by √s; the flag records which).
pub struct EnumeratedPoints {
    pub points: Vec<WP3Point<TowerElement>>,
    /// True when the points live on the original surface; false when they
    /// are reported on the rescaled X′.
    pub on_original: bool,
}

pub fn enumerate_points(cert: &Certificate, n: usize) -> Result<EnumeratedPoints, PipelineError> {
    match cert {
        Certificate::Bound12(c) => {
            let surface_l = c
                .surface
                .map_scalars(|x| crate::surface::promote_into(x, &c.tower_l));
            let param = c.datum.param.map_scalars(&|x: &TowerElement| {
                crate::surface::promote_into(x, &c.tower_l)
            });
            let t0 = crate::surface::promote_into(&c.datum.t0, &c.tower_l);
            let pts = walk_multiples(
                &c.weierstrass,
                &c.map,
                &c.q_point,
                &param,
                &t0,
                &surface_l,
                n,
            )?;
            Ok(EnumeratedPoints {
                points: pts,
                on_original: true,
            })
        }
        Certificate::Rational(c) => {
            let lift = |x: &Rational| TowerElement::from_rational(x.clone());
            let e = c.weierstrass.map_scalars(&lift);
            let map = c.map.map_scalars(&lift);
            let q = c.q_point.map_scalars(&lift);
            let param = c.datum.param.clone();
            let t0 = c.datum.t0.clone();
            // √s when s is a rational square.
            let sqrt_s = tower_sqrt(&TowerElement::from_rational(c.rescale.clone()));
            let (target, scale_w, on_original) = match sqrt_s {
                Some(r) => (c.surface.to_tower(), Some(r), true),
                None => (c.rescaled.to_tower(), None, false),
            };
            let mut pts = walk_multiples(&e, &map, &q, &param, &t0, &c.rescaled.to_tower(), n)?;
            if let Some(r) = scale_w {
                pts = pts
                    .into_iter()
                    .map(|p| WP3Point::new(p.x, p.y, p.z, p.w * r.clone()))
                    .collect();
                for p in &pts {
                    debug_assert!(target.on_surface(p));
                }
            }
            Ok(EnumeratedPoints {
                points: pts,
                on_original,
            })
        }
    }
}

fn walk_multiples(
    e: &WeierstrassCurve<TowerElement>,
    map: &ModelMap<TowerElement>,
    q: &ECPoint<TowerElement>,
    param: &crate::surface::LineParam<TowerElement>,
    t0: &TowerElement,
    surface: &K3DoubleCover<TowerElement>,
    n: usize,
) -> Result<Vec<WP3Point<TowerElement>>, PipelineError> {
    let mut out: Vec<WP3Point<TowerElement>> = Vec::new();
    let mut acc = ECPoint::Infinity;
    let mut k = 0u32;
    while out.len() < n {
        k += 1;
        if k > 10_000 {
            return Err(PipelineError::Inconclusive(
                "enumeration budget exceeded (is Q torsion?)".into(),
            ));
        }
        acc = e.add(&acc, q);
        debug_assert!(e.on_curve(&acc));
        let Some(ModelPoint::Quartic(t, v)) = map.backward(&ModelPoint::Curve(acc.clone()))
        else {
            continue; // exceptional fiber of the model maps
        };
        // Normalization to the singular model: w = v·(t − t₀), then the
        // line parametrization carries (t, w) onto the surface.
        let w = v.clone() * (t.clone() - t0.clone());
        let xyz = [
            param.imgs[0].eval(&t),
            param.imgs[1].eval(&t),
            param.imgs[2].eval(&t),
        ];
        if xyz.iter().all(|c| c.is_zero()) {
            continue;
        }
        let pt = WP3Point::new(xyz[0].clone(), xyz[1].clone(), xyz[2].clone(), w);
        if !surface.on_surface(&pt) {
            return Err(PipelineError::Inconclusive(format!(
                "enumerated point fails the on-surface recheck at k = {k}"
            )));
        }
        if !out.contains(&pt) {
            out.push(pt);
        }
    }
    Ok(out)
}

/// Re-runs every invariant of a certificate from scratch.
/// Returns true only when all checks pass; reasons accumulate otherwise.
pub fn verify_certificate(cert: &Certificate) -> (bool, Vec<String>) {
    let mut reasons: Vec<String> = Vec::new();
    match cert {
        Certificate::Bound12(c) => {
            if c.relative_degree() > 12 {
                reasons.push(format!(
                    "degree bound violated: [L:K] = {}",
                    c.relative_degree()
                ));
            }
            if let Err(e) = c.datum.verify(&c.surface) {
                reasons.push(format!("datum: {e}"));
            }
            match pullback_quartic(&c.datum) {
                Ok((_, q)) => {
                    if q.h != c.quartic.h {
                        reasons.push("quartic does not match the pullback".into());
                    }
                }
                Err(e) => reasons.push(format!("pullback: {e}")),
            }
            // Tower bookkeeping: L is K′ or K′ plus one quadratic level.
            let dk = c.datum.field.depth();
            let dl = c.tower_l.depth();
            if c.sqrt_adjoined {
                if dl != dk + 1 || c.tower_l.levels[dl - 1].degree() != 2 {
                    reasons.push("L is not a quadratic extension of K'".into());
                }
            } else if dl != dk {
                reasons.push("L should equal K' when h(alpha) is a square".into());
            }
            // √h(α) really squares to h(α).
            let alpha_l =
                crate::surface::promote_into(&TowerElement::from_int(c.alpha), &c.tower_l);
            let h_alpha = c
                .quartic
                .h
                .map_coeffs(|x| crate::surface::promote_into(x, &c.tower_l))
                .eval(&alpha_l);
            if c.sqrt_h_alpha.clone() * c.sqrt_h_alpha.clone() != h_alpha {
                reasons.push("recorded root does not square to h(alpha)".into());
            }
            if h_alpha.is_zero() {
                reasons.push("h(alpha) = 0".into());
            }
            if !c.weierstrass.is_nonsingular() {
                reasons.push("Weierstrass model is singular".into());
            }
            if !c.weierstrass.on_curve(&c.q_point) {
                reasons.push("point not on curve".into());
            }
            // Model map round-trips on the base pair and on small multiples.
            let base = ModelPoint::Quartic(alpha_l.clone(), c.sqrt_h_alpha.clone());
            if c.map.forward(&base) != Some(ModelPoint::Curve(ECPoint::Infinity)) {
                reasons.push("base point does not map to the origin".into());
            }
            let mut samples = vec![ModelPoint::Curve(c.q_point.clone())];
            let two_q = c.weierstrass.scalar_mul(&c.q_point, 2);
            samples.push(ModelPoint::Curve(two_q));
            for s in samples {
                if let Some(back) = c.map.backward(&s) {
                    match (&back, c.map.forward(&back)) {
                        (ModelPoint::Quartic(u, v), Some(fwd)) => {
                            let quartic_l = c
                                .quartic
                                .h
                                .map_coeffs(|x| crate::surface::promote_into(x, &c.tower_l));
                            if v.clone() * v.clone() != quartic_l.eval(u) {
                                reasons.push("backward image off the quartic".into());
                            }
                            if fwd != s {
                                reasons.push("model map round-trip failed".into());
                            }
                        }
                        _ => reasons.push("model map round-trip undefined".into()),
                    }
                }
            }
            if let Err(e) = verify_nontorsion(&c.weierstrass, &c.q_point, &c.nontorsion) {
                reasons.push(format!("torsion: {e}"));
            }
        }
        Certificate::Rational(c) => {
            let lift = |x: &Rational| TowerElement::from_rational(x.clone());
            if let Err(e) = c.datum.verify(&c.surface.to_tower()) {
                reasons.push(format!("datum: {e}"));
            }
            match pullback_quartic(&c.datum) {
                Ok((_, q)) => {
                    let h: UniPoly<Rational> =
                        q.h.map_coeffs(|x| x.as_rational().expect("rational datum"));
                    if h.coeff(0) != c.rescale {
                        reasons.push("s is not h(0)".into());
                    }
                    if c.rescale.is_zero() {
                        reasons.push("s = 0".into());
                    } else {
                        let scaled =
                            h.scale(&crate::field::Field::inv(&c.rescale).unwrap());
                        if scaled != c.quartic.h {
                            reasons.push("quartic is not h/s".into());
                        }
                    }
                }
                Err(e) => reasons.push(format!("pullback: {e}")),
            }
            if !c.quartic.h.coeff(0).is_one() {
                reasons.push("h'(0) != 1".into());
            }
            let expected_form = c
                .surface
                .f()
                .scale(&crate::field::Field::inv(&c.rescale).unwrap_or_else(Rational::zero));
            if c.rescaled.f() != &expected_form {
                reasons.push("rescaled surface is not f/s".into());
            }
            // P1, P2 = (0, ±1) on the quartic.
            for v in [Rational::one(), -Rational::one()] {
                if !c.quartic.contains(&Rational::zero(), &v) {
                    reasons.push("(0, ±1) not on the quartic".into());
                }
            }
            if !c.weierstrass.is_nonsingular() {
                reasons.push("Weierstrass model is singular".into());
            }
            if !c.weierstrass.on_curve(&c.q_point) {
                reasons.push("point not on curve".into());
            }
            let p1 = ModelPoint::Quartic(Rational::zero(), Rational::one());
            if c.map.forward(&p1) != Some(ModelPoint::Curve(ECPoint::Infinity)) {
                reasons.push("P1 does not map to the origin".into());
            }
            let p2 = ModelPoint::Quartic(Rational::zero(), -Rational::one());
            match c.map.forward(&p2) {
                Some(ModelPoint::Curve(q)) if q == c.q_point => {}
                _ => reasons.push("Q is not the image of P2".into()),
            }
            if let Err(e) = verify_nontorsion(
                &c.weierstrass.map_scalars(&lift),
                &c.q_point.map_scalars(&lift),
                &c.nontorsion,
            ) {
                reasons.push(format!("torsion: {e}"));
            }
        }
    }
    (reasons.is_empty(), reasons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::poly::MultiPoly;

    fn fermat() -> K3DoubleCover<Rational> {
        K3DoubleCover::new(
            TernarySexticForm::new(MultiPoly::from_terms([
                ([6, 0, 0], rat(-1)),
                ([0, 6, 0], rat(-1)),
                ([0, 0, 6], rat(-1)),
            ]))
            .unwrap(),
        )
    }

    #[test]
    fn bound12_on_fermat_sextic() {
        let x = fermat().to_tower();
        let cert = certify_bound12(&x, SearchCaps::default()).unwrap();
        assert!(cert.relative_degree() <= 12);
        let wrapped = Certificate::Bound12(cert);
        let (ok, reasons) = verify_certificate(&wrapped);
        assert!(ok, "verification failed: {reasons:?}");
        let pts = enumerate_points(&wrapped, 3).unwrap();
        assert_eq!(pts.points.len(), 3);
        assert!(pts.on_original);
        // Points are pairwise distinct by construction; re-check.
        for (i, p) in pts.points.iter().enumerate() {
            for q in &pts.points[i + 1..] {
                assert!(p != q);
            }
        }
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let x = fermat().to_tower();
        let mut cert = certify_bound12(&x, SearchCaps::default()).unwrap();
        // Perturb one quartic coefficient.
        let mut coeffs: Vec<TowerElement> = cert.quartic.h.coeffs().to_vec();
        coeffs[0] = coeffs[0].clone() + TowerElement::from_int(1);
        cert.quartic = QuarticGenus1Curve {
            h: UniPoly::from_coeffs(coeffs),
        };
        let (ok, reasons) = verify_certificate(&Certificate::Bound12(cert));
        assert!(!ok);
        assert!(reasons.iter().any(|r| r.contains("quartic")));
    }
}
