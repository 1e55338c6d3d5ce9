//! The two-fibration density checks on Y: w² = x⁶ + y⁶ − z⁶.
//!
//! The fibrations are f₁: [w+x³ : y³−z³] and f₂: [w+x³ : y³+z³], each with
//! a degree-3 multisection line (M₁ = V(w−x³, y+z), M₂ = V(w−x³, y−z)).
//! For a rational point P on a smooth fiber F, α_i(P) is the unique point R
//! with O_F(R) ≅ O_F(M_i) ⊗ O_F(−2P); with origin P this is the group-law
//! sum of the three multisection points. The report records fiber
//! smoothness and non-torsion of both α_i(P), the sufficient conditions
//! the density criterion consumes.

use crate::field::Rational;
use crate::genus1::cubic::cubic_to_weierstrass;
use crate::genus1::modelmap::{ModelMap, ModelPoint};
use crate::genus1::torsion::{torsion_certificate, NonTorsionCert, TorsionCertificate};
use crate::genus1::weierstrass::{ECPoint, WeierstrassCurve};
use crate::poly::{FactorField, MultiPoly, UniPoly, Var};
use crate::smooth::plane_curve_singular;
use crate::surface::{K3DoubleCover, PlanePoint, SearchCaps, TernarySexticForm, WP3Point};
use crate::tower::{TowerElement, TowerField};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum DensityError {
    #[error("point is not on the surface w² = x⁶ + y⁶ − z⁶")]
    NotOnSurface,
    #[error("both representatives of the fibration map vanish at the point")]
    Indeterminate,
    #[error("the fiber parameter is at infinity")]
    InfiniteParameter,
    #[error("singular fiber at parameter {0}")]
    SingularFiber(String),
    #[error("multisection intersection is not reduced of degree 3")]
    BadMultisection,
    #[error("alpha value has irrational coordinates, contradicting Galois stability")]
    IrrationalAlpha,
    #[error("model transformation failed: {0}")]
    Model(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FibrationIndex {
    F1,
    F2,
}

impl FibrationIndex {
    /// Sign convention: f₁ pairs with y³ − z³, f₂ with y³ + z³.
    fn sign(self) -> i64 {
        match self {
            FibrationIndex::F1 => -1,
            FibrationIndex::F2 => 1,
        }
    }
}

/// w² = x⁶ + y⁶ − z⁶.
pub fn surface_y() -> K3DoubleCover<Rational> {
    use crate::field::rat;
    K3DoubleCover::new(
        TernarySexticForm::new(MultiPoly::from_terms([
            ([6, 0, 0], rat(1)),
            ([0, 6, 0], rat(1)),
            ([0, 0, 6], rat(-1)),
        ]))
        .unwrap(),
    )
}

/// A point [a : b] of the base line, canonical: (t, 1) or (1, 0).
#[derive(Clone, PartialEq, Debug)]
pub struct BaseParameter {
    pub a: Rational,
    pub b: Rational,
}

impl BaseParameter {
    fn new(a: Rational, b: Rational) -> Self {
        if !b.is_zero() {
            let bi = b.clone();
            BaseParameter {
                a: a / bi,
                b: Rational::one(),
            }
        } else {
            assert!(!a.is_zero());
            BaseParameter {
                a: Rational::one(),
                b,
            }
        }
    }

    pub fn affine(&self) -> Option<&Rational> {
        if self.b.is_one() {
            Some(&self.a)
        } else {
            None
        }
    }
}

fn cube(c: &Rational) -> Rational {
    c * c * c
}

/// Evaluates the fibration at a surface point, extending across the
/// indeterminacy locus through the identity
/// (w − x³)(w + x³) = (y³ − z³)(y³ + z³).
pub fn fibration_eval(
    i: FibrationIndex,
    p: &WP3Point<Rational>,
) -> Result<BaseParameter, DensityError> {
    if !surface_y().on_surface(p) {
        return Err(DensityError::NotOnSurface);
    }
    let x3 = cube(&p.x);
    let y3 = cube(&p.y);
    let z3 = cube(&p.z);
    let sign: Rational = crate::field::rat(i.sign());
    // Primary representative [w + x³ : y³ + sign·z³].
    let a = p.w.clone() + x3.clone();
    let b = y3.clone() + sign.clone() * z3.clone();
    if !a.is_zero() || !b.is_zero() {
        return Ok(BaseParameter::new(a, b));
    }
    // Complementary representative [y³ − sign·z³ : w − x³].
    let a2 = y3 - sign * z3;
    let b2 = p.w.clone() - x3;
    if !a2.is_zero() || !b2.is_zero() {
        return Ok(BaseParameter::new(a2, b2));
    }
    Err(DensityError::Indeterminate)
}

/// The plane cubic model of the fiber over an affine parameter:
/// 2t·x³ = t²(y³ + s·z³) − (y³ − s·z³) with s the index sign.
pub fn fiber_cubic(i: FibrationIndex, t: &Rational) -> MultiPoly<Rational> {
    let s = crate::field::rat(i.sign());
    let t2 = t * t;
    let y_coeff = t2.clone() - Rational::one();
    let z_coeff = (t2 + Rational::one()) * s;
    MultiPoly::from_terms([
        ([3, 0, 0], t * crate::field::rat(2)),
        ([0, 3, 0], -y_coeff),
        ([0, 0, 3], -z_coeff),
    ])
}

/// Recovers the weight-3 coordinate from the fiber's linear relation:
/// w = t·(y³ + s·z³) − x³.
pub fn fiber_w(i: FibrationIndex, t: &Rational, plane: &PlanePoint<Rational>) -> Rational {
    let s = crate::field::rat(i.sign());
    t.clone() * (cube(&plane.y) + s * cube(&plane.z)) - cube(&plane.x)
}

/// A fiber with its eliminated plane cubic and, when smooth and a point is
/// supplied, a Weierstrass model with the point as origin.
#[derive(Clone, Debug)]
pub struct FiberModel {
    pub index: FibrationIndex,
    pub parameter: BaseParameter,
    pub cubic: MultiPoly<Rational>,
    pub smooth: bool,
    pub distinguished: Option<PlanePoint<Rational>>,
    pub weierstrass: Option<(WeierstrassCurve<Rational>, ModelMap<Rational>)>,
}

pub fn fiber_model(
    i: FibrationIndex,
    parameter: &BaseParameter,
    point: Option<&WP3Point<Rational>>,
) -> Result<FiberModel, DensityError> {
    let t = parameter
        .affine()
        .ok_or(DensityError::InfiniteParameter)?
        .clone();
    let cubic = fiber_cubic(i, &t);
    let smooth = !cubic.is_zero() && cubic.is_homogeneous(3) && !plane_curve_singular(&cubic);
    let mut model = FiberModel {
        index: i,
        parameter: parameter.clone(),
        cubic: cubic.clone(),
        smooth,
        distinguished: None,
        weierstrass: None,
    };
    if let Some(p) = point {
        let plane = PlanePoint::new(p.x.clone(), p.y.clone(), p.z.clone());
        if !cubic.eval(plane.coords()).is_zero() {
            return Err(DensityError::Model(
                "the point does not lie on the fiber cubic".into(),
            ));
        }
        model.distinguished = Some(plane.clone());
        if smooth {
            let (e, map) = cubic_to_weierstrass(&cubic, &plane)
                .map_err(|er| DensityError::Model(er.to_string()))?;
            model.weierstrass = Some((e, map));
        }
    }
    Ok(model)
}

/// The three points of M_i ∩ F as plane points over a splitting tower:
/// roots of u³ + s·t (with y = −s on the line). Returns the tower and the
/// points.
fn multisection_points(
    i: FibrationIndex,
    t: &Rational,
) -> Result<(Arc<TowerField>, Vec<PlanePoint<TowerElement>>), DensityError> {
    // M₁ meets the f₁-fiber cubic where y = −z: x³ = −t·z³;
    // M₂ meets the f₂-fiber cubic where y = z: x³ = t·z³.
    let s = i.sign();
    let rhs = match i {
        FibrationIndex::F1 => -t.clone(),
        FibrationIndex::F2 => t.clone(),
    };
    if rhs.is_zero() {
        return Err(DensityError::BadMultisection);
    }
    let poly: UniPoly<TowerElement> = UniPoly::from_coeffs(vec![
        TowerElement::from_rational(-rhs),
        TowerElement::zero(),
        TowerElement::zero(),
        TowerElement::one(),
    ]);
    if !poly
        .map_coeffs(|c: &TowerElement| c.clone())
        .is_squarefree()
    {
        return Err(DensityError::BadMultisection);
    }
    // Splitting tower: factor, extend by a cubic factor if present, then by
    // the remaining quadratic.
    let mut tower = TowerField::rationals();
    let mut roots: Vec<TowerElement> = Vec::new();
    let mut remaining = poly;
    loop {
        let anchored = remaining.map_coeffs(|c| crate::surface::promote_into(c, &tower));
        let factors = TowerElement::factor_monic(&anchored);
        let mut extended = false;
        for (fac, _) in &factors {
            if fac.degree() == Some(1) {
                roots.push(-fac.coeff(0));
            }
        }
        for (fac, _) in &factors {
            if fac.degree().map_or(false, |d| d >= 2) {
                let name = format!("m{}", tower.depth() + 1);
                let t2 = crate::tower::extend_tower(&tower, fac, &name)
                    .map_err(|e| DensityError::Model(e.to_string()))?;
                tower = t2;
                extended = true;
                break;
            }
        }
        if !extended {
            break;
        }
        // Re-factor over the extended tower from scratch.
        roots.clear();
        remaining = remaining.map_coeffs(|c| crate::surface::promote_into(c, &tower));
    }
    if roots.len() != 3 {
        return Err(DensityError::BadMultisection);
    }
    roots.sort_by(|a, b| a.canon_cmp(b));
    // M₁ lies over y = −z, M₂ over y = z.
    let y_val = TowerElement::from_int(s);
    let pts = roots
        .into_iter()
        .map(|u| {
            PlanePoint::new(
                crate::surface::promote_into(&u, &tower),
                crate::surface::promote_into(&y_val, &tower),
                TowerElement::one().promote(&tower),
            )
        })
        .collect();
    Ok((tower, pts))
}

/// One α_i(P) evaluation with its audit trail.
#[derive(Clone, Debug)]
pub struct AlphaEvalRecord {
    pub index: FibrationIndex,
    pub parameter: BaseParameter,
    pub splitting_tower: Arc<TowerField>,
    pub multisection_points: Vec<PlanePoint<TowerElement>>,
    /// α_i(P) on the Weierstrass model with origin P.
    pub r_on_model: ECPoint<Rational>,
    /// α_i(P) back on the surface.
    pub r_surface: WP3Point<Rational>,
}

pub fn alpha_eval(
    i: FibrationIndex,
    p: &WP3Point<Rational>,
) -> Result<(FiberModel, AlphaEvalRecord), DensityError> {
    let parameter = fibration_eval(i, p)?;
    let model = fiber_model(i, &parameter, Some(p))?;
    if !model.smooth {
        return Err(DensityError::SingularFiber(format!(
            "[{}:{}]",
            parameter.a, parameter.b
        )));
    }
    let (e, map) = model.weierstrass.clone().expect("smooth fiber with a point");
    let t = parameter.affine().unwrap().clone();
    let (tower, pts) = multisection_points(i, &t)?;
    let lift = |c: &Rational| TowerElement::from_rational(c.clone()).promote(&tower);
    let e_t = e.map_scalars(&lift);
    let map_t = map.map_scalars(&lift);
    // Sum the three multisection points with origin P (Abel–Jacobi for the
    // degree-one class M_i − 2P).
    let mut sum: ECPoint<TowerElement> = ECPoint::Infinity;
    for q in &pts {
        let mp = ModelPoint::Plane(q.clone());
        let img = map_t
            .forward(&mp)
            .ok_or_else(|| DensityError::Model("multisection point exceptional".into()))?;
        let ModelPoint::Curve(qe) = img else {
            return Err(DensityError::Model("expected a curve point".into()));
        };
        if !e_t.on_curve(&qe) {
            return Err(DensityError::Model("multisection image off curve".into()));
        }
        sum = e_t.add(&sum, &qe);
    }
    // A Galois-stable class: the sum must be rational.
    let r_on_model: ECPoint<Rational> = match &sum {
        ECPoint::Infinity => ECPoint::Infinity,
        ECPoint::Affine(x, y) => {
            let (Some(xr), Some(yr)) = (x.as_rational(), y.as_rational()) else {
                return Err(DensityError::IrrationalAlpha);
            };
            ECPoint::Affine(xr, yr)
        }
    };
    // Back to the plane and onto Y.
    let back = map
        .backward(&ModelPoint::Curve(r_on_model.clone()))
        .ok_or_else(|| DensityError::Model("alpha value exceptional for the maps".into()))?;
    let ModelPoint::Plane(r_plane) = back else {
        return Err(DensityError::Model("expected a plane point".into()));
    };
    if !model.cubic.eval(r_plane.coords()).is_zero() {
        return Err(DensityError::Model("alpha value off the fiber cubic".into()));
    }
    let w = fiber_w(i, &t, &r_plane);
    let r_surface = WP3Point::new(
        r_plane.x.clone(),
        r_plane.y.clone(),
        r_plane.z.clone(),
        w,
    );
    if !surface_y().on_surface(&r_surface) {
        return Err(DensityError::Model("alpha value off the surface".into()));
    }
    Ok((
        model,
        AlphaEvalRecord {
            index: i,
            parameter,
            splitting_tower: tower,
            multisection_points: pts,
            r_on_model,
            r_surface,
        },
    ))
}

/// Outcome of one fibration branch.
#[derive(Clone, Debug)]
pub struct FiberCheck {
    pub record: AlphaEvalRecord,
    pub fiber_smooth: bool,
    pub torsion: Option<TorsionCertificate>,
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub point: WP3Point<Rational>,
    pub checks: Vec<FiberCheck>,
    /// True only when both fibers are smooth and both α_i(P) carry
    /// non-torsion certificates ("the paper's sufficient conditions").
    pub criteria_met: bool,
    pub failures: Vec<String>,
}

pub fn density_check(p: &WP3Point<Rational>, caps: SearchCaps) -> Result<DensityReport, DensityError> {
    if !surface_y().on_surface(p) {
        return Err(DensityError::NotOnSurface);
    }
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for i in [FibrationIndex::F1, FibrationIndex::F2] {
        match alpha_eval(i, p) {
            Ok((model, record)) => {
                let lift = |c: &Rational| TowerElement::from_rational(c.clone());
                let (e, _) = model.weierstrass.as_ref().unwrap();
                let torsion = match &record.r_on_model {
                    ECPoint::Infinity => {
                        failures.push(format!("{i:?}: alpha value is the origin"));
                        None
                    }
                    pt => match torsion_certificate(
                        &e.map_scalars(&lift),
                        &pt.map_scalars(&lift),
                        &caps,
                    ) {
                        Ok(cert) => {
                            if let TorsionCertificate::Torsion { order } = &cert {
                                failures.push(format!("{i:?}: alpha value torsion of order {order}"));
                            }
                            Some(cert)
                        }
                        Err(e) => {
                            failures.push(format!("{i:?}: torsion test failed: {e}"));
                            None
                        }
                    },
                };
                checks.push(FiberCheck {
                    record,
                    fiber_smooth: model.smooth,
                    torsion,
                });
            }
            Err(DensityError::SingularFiber(t)) => {
                failures.push(format!("{i:?}: singular fiber at {t}"));
            }
            Err(e) => return Err(e),
        }
    }
    let criteria_met = checks.len() == 2
        && failures.is_empty()
        && checks.iter().all(|c| {
            c.fiber_smooth
                && matches!(
                    c.torsion,
                    Some(TorsionCertificate::NonTorsion(NonTorsionCert::MazurQ))
                        | Some(TorsionCertificate::NonTorsion(NonTorsionCert::Reduction { .. }))
                )
        });
    Ok(DensityReport {
        point: p.clone(),
        checks,
        criteria_met,
        failures,
    })
}

/// Symbolic containment of the multisection lines in Y: substituting the
/// parametrization [u : ∓v : v : u³] into w² − f gives the zero polynomial.
pub fn multisection_contained_in_y(i: FibrationIndex) -> bool {
    let f = surface_y().f().clone();
    type P2 = MultiPoly<Rational>;
    let u: P2 = MultiPoly::var(Var::X);
    let v: P2 = MultiPoly::var(Var::Y);
    let y_img = match i {
        FibrationIndex::F1 => -v.clone(),
        FibrationIndex::F2 => v.clone(),
    };
    let fx = f.substitute([&u, &y_img, &v], &|c: &Rational| MultiPoly::constant(c.clone()));
    let w = u.clone() * u.clone() * u.clone();
    let w2 = w.clone() * w;
    w2 - fx == MultiPoly::zero_poly()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn paper_point() -> WP3Point<Rational> {
        WP3Point::new(rat(2), ratio(3, 2), rat(1), ratio(69, 8))
    }

    #[test]
    fn fibration_values_at_the_paper_point() {
        let p = paper_point();
        let t1 = fibration_eval(FibrationIndex::F1, &p).unwrap();
        assert_eq!(t1.affine(), Some(&rat(7)));
        let t2 = fibration_eval(FibrationIndex::F2, &p).unwrap();
        assert_eq!(t2.affine(), Some(&ratio(19, 5)));
        // [1:1:1:1]: y³ − z³ = 0, w + x³ = 2 → [1:0].
        let q = WP3Point::new(rat(1), rat(1), rat(1), rat(1));
        let t = fibration_eval(FibrationIndex::F1, &q).unwrap();
        assert!(t.affine().is_none());
        assert_eq!(t.a, rat(1));
    }

    #[test]
    fn fiber_cubic_matches_elimination() {
        // i = 1, t = 7: 14x³ = 48y³ − 50z³.
        let c = fiber_cubic(FibrationIndex::F1, &rat(7));
        assert_eq!(c.coeff([3, 0, 0]), rat(14));
        assert_eq!(c.coeff([0, 3, 0]), rat(-48));
        assert_eq!(c.coeff([0, 0, 3]), rat(50));
        // The paper point lies on it.
        let p = paper_point();
        let plane = PlanePoint::new(p.x.clone(), p.y.clone(), p.z.clone());
        assert!(c.eval(plane.coords()).is_zero());
        // Cross-check the elimination symbolically: substituting
        // w = t(y³−z³) − x³ into w² − (x⁶+y⁶−z⁶) is divisible by the cubic.
        let t = rat(7);
        type P = MultiPoly<Rational>;
        let x: P = MultiPoly::var(Var::X);
        let y: P = MultiPoly::var(Var::Y);
        let z: P = MultiPoly::var(Var::Z);
        let cube = |p: &P| p.clone() * p.clone() * p.clone();
        let w = (cube(&y) - cube(&z)).scale(&t) - cube(&x);
        let lhs = w.clone() * w - surface_y().f().clone();
        use crate::field::Ring;
        let q = lhs.exact_div(&c).expect("fiber cubic divides the elimination");
        assert!(!q.is_zero());
        // Degenerate parameter t = 0 gives a singular (reducible) cubic.
        let m = fiber_model(FibrationIndex::F1, &BaseParameter::new(rat(0), rat(1)), None)
            .unwrap();
        assert!(!m.smooth);
    }

    #[test]
    fn multisections_lie_on_y() {
        assert!(multisection_contained_in_y(FibrationIndex::F1));
        assert!(multisection_contained_in_y(FibrationIndex::F2));
    }

    #[test]
    fn alpha_values_are_rational_points() {
        let p = paper_point();
        for i in [FibrationIndex::F1, FibrationIndex::F2] {
            let (model, rec) = alpha_eval(i, &p).unwrap();
            assert!(model.smooth);
            assert!(surface_y().on_surface(&rec.r_surface));
            // The multisection splitting tower stays within degree 6.
            assert!(rec.splitting_tower.total_degree() <= 6);
        }
    }

    #[test]
    fn full_density_check_on_paper_point() {
        let report = density_check(&paper_point(), SearchCaps::default()).unwrap();
        assert!(report.criteria_met, "failures: {:?}", report.failures);
    }

    #[test]
    fn labeling_order_invariance() {
        // Summing the multisection points in any order gives the same R.
        let p = paper_point();
        let (model, rec) = alpha_eval(FibrationIndex::F1, &p).unwrap();
        let (e, map) = model.weierstrass.as_ref().unwrap();
        let tower = rec.splitting_tower.clone();
        let lift = |c: &Rational| TowerElement::from_rational(c.clone()).promote(&tower);
        let e_t = e.map_scalars(&lift);
        let map_t = map.map_scalars(&lift);
        let imgs: Vec<ECPoint<TowerElement>> = rec
            .multisection_points
            .iter()
            .map(|q| match map_t.forward(&ModelPoint::Plane(q.clone())) {
                Some(ModelPoint::Curve(c)) => c,
                _ => unreachable!(),
            })
            .collect();
        for perm in [[0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]] {
            let mut sum = ECPoint::Infinity;
            for &k in &perm {
                sum = e_t.add(&sum, &imgs[k]);
            }
            match (&sum, &rec.r_on_model) {
                (ECPoint::Affine(x, y), ECPoint::Affine(xr, yr)) => {
                    assert_eq!(x.as_rational().unwrap(), *xr);
                    assert_eq!(y.as_rational().unwrap(), *yr);
                }
                (ECPoint::Infinity, ECPoint::Infinity) => {}
                _ => panic!("sum mismatch"),
            }
        }
    }

    #[test]
    fn fibration_constant_along_fiber() {
        // Generate points on F₁ via the group law and map them back to Y;
        // the fibration evaluates to [7:1] on all of them.
        let p = paper_point();
        let (model, _) = alpha_eval(FibrationIndex::F1, &p).unwrap();
        let (e, map) = model.weierstrass.as_ref().unwrap();
        let t = rat(7);
        // Take multiples of the alpha value (a rational point on the fiber).
        let (_, rec) = alpha_eval(FibrationIndex::F1, &p).unwrap();
        let mut count = 0;
        for k in 1..=20 {
            let r = e.scalar_mul(&rec.r_on_model, k);
            let Some(ModelPoint::Plane(pl)) = map.backward(&ModelPoint::Curve(r)) else {
                continue;
            };
            let w = fiber_w(FibrationIndex::F1, &t, &pl);
            let yp = WP3Point::new(pl.x.clone(), pl.y.clone(), pl.z.clone(), w);
            assert!(surface_y().on_surface(&yp));
            let param = fibration_eval(FibrationIndex::F1, &yp).unwrap();
            assert_eq!(param.affine(), Some(&rat(7)));
            count += 1;
        }
        assert!(count >= 15, "only {count} multiples were mappable");
    }
}
