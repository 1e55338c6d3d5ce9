//! Degree-2 K3 surfaces as double covers of the plane: the branch sextic,
//! smoothness certificates, weighted-projective points, tangent lines, and
//! the branch-point search that drives the certificate pipeline.

use crate::field::{Field, Rational};
use crate::fq::{Fq, FqCtx};
use crate::poly::factor_q::is_small_prime;
use crate::poly::squarefree::root_multiplicity;
use crate::poly::{FactorField, MultiPoly, UniPoly, Var};
use crate::smooth::plane_curve_singular;
use crate::tower::{extend_tower, TowerElement, TowerField};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum SurfaceError {
    #[error("the form must be nonzero and homogeneous of degree 6")]
    NotASextic,
    #[error("line contained in branch curve")]
    LineInBranchCurve,
    #[error("bad reduction at p = {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("q = {q} is not an odd prime power")]
    NotAPrimePower { q: u64 },
    #[error("branch point search exhausted (|y0| <= {cap}); rejections: {rejections:?}")]
    SearchExhausted { cap: i64, rejections: Vec<String> },
    #[error("smoothness check inconclusive over a non-rational base field")]
    SmoothnessInconclusive,
}

/// A nonzero homogeneous sextic in (x, y, z).
#[derive(Clone, PartialEq, Debug)]
pub struct TernarySexticForm<F: Field> {
    f: MultiPoly<F>,
}

impl<F: Field> TernarySexticForm<F> {
    pub fn new(f: MultiPoly<F>) -> Result<Self, SurfaceError> {
        if f.is_zero() || !f.is_homogeneous(6) {
            return Err(SurfaceError::NotASextic);
        }
        debug_assert!(f.num_terms() <= 28);
        Ok(TernarySexticForm { f })
    }

    pub fn poly(&self) -> &MultiPoly<F> {
        &self.f
    }

    pub fn map_scalars<G: Field>(&self, m: impl Fn(&F) -> G) -> TernarySexticForm<G> {
        TernarySexticForm {
            f: self.f.map_coeffs(m),
        }
    }
}

/// The surface w² = f(x, y, z) in P(1,1,1,3).
#[derive(Clone, PartialEq, Debug)]
pub struct K3DoubleCover<F: Field> {
    pub form: TernarySexticForm<F>,
}

impl<F: Field> K3DoubleCover<F> {
    pub fn new(form: TernarySexticForm<F>) -> Self {
        K3DoubleCover { form }
    }

    pub fn f(&self) -> &MultiPoly<F> {
        self.form.poly()
    }

    /// Membership test: w² = f(x, y, z) exactly.
    pub fn on_surface(&self, p: &WP3Point<F>) -> bool {
        let rhs = self.f().eval([&p.x, &p.y, &p.z]);
        p.w.clone() * p.w.clone() == rhs
    }

    pub fn map_scalars<G: Field>(&self, m: impl Fn(&F) -> G) -> K3DoubleCover<G> {
        K3DoubleCover {
            form: self.form.map_scalars(m),
        }
    }
}

impl K3DoubleCover<Rational> {
    pub fn to_tower(&self) -> K3DoubleCover<TowerElement> {
        self.map_scalars(|c| TowerElement::from_rational(c.clone()))
    }
}

/// A point of P(1,1,1,3), canonical: the first nonzero coordinate among
/// (x, y, z) is scaled to 1; pure-w points are scaled to w = 1.
#[derive(Clone, PartialEq, Debug)]
pub struct WP3Point<F: Field> {
    pub x: F,
    pub y: F,
    pub z: F,
    pub w: F,
}

impl<F: Field> WP3Point<F> {
    pub fn new(x: F, y: F, z: F, w: F) -> Self {
        let lambda = [&x, &y, &z].into_iter().find(|c| !c.is_zero()).cloned();
        match lambda {
            Some(l) => {
                let li = l.inv().unwrap();
                let li3 = li.clone() * li.clone() * li.clone();
                WP3Point {
                    x: x * li.clone(),
                    y: y * li.clone(),
                    z: z * li,
                    w: w * li3,
                }
            }
            None => {
                assert!(!w.is_zero(), "the zero tuple is not a point");
                WP3Point {
                    x,
                    y,
                    z,
                    w: F::one(),
                }
            }
        }
    }

    pub fn map_scalars<G: Field>(&self, m: impl Fn(&F) -> G) -> WP3Point<G> {
        WP3Point::new(m(&self.x), m(&self.y), m(&self.z), m(&self.w))
    }
}

/// An ordinary plane point, canonical in the same way.
#[derive(Clone, PartialEq, Debug)]
pub struct PlanePoint<F: Field> {
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: Field> PlanePoint<F> {
    pub fn new(x: F, y: F, z: F) -> Self {
        let l = [&x, &y, &z]
            .into_iter()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("the zero tuple is not a point");
        let li = l.inv().unwrap();
        PlanePoint {
            x: x * li.clone(),
            y: y * li.clone(),
            z: z * li,
        }
    }

    pub fn coords(&self) -> [&F; 3] {
        [&self.x, &self.y, &self.z]
    }
}

/// The line V(ax + by + cz), canonical: first nonzero coefficient is 1.
#[derive(Clone, PartialEq, Debug)]
pub struct PlaneLine<F: Field> {
    pub a: F,
    pub b: F,
    pub c: F,
}

impl<F: Field> PlaneLine<F> {
    pub fn new(a: F, b: F, c: F) -> Self {
        let l = [&a, &b, &c]
            .into_iter()
            .find(|v| !v.is_zero())
            .cloned()
            .expect("line coefficients must not all vanish");
        let li = l.inv().unwrap();
        PlaneLine {
            a: a * li.clone(),
            b: b * li.clone(),
            c: c * li,
        }
    }

    pub fn contains(&self, p: &PlanePoint<F>) -> bool {
        (self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone() + self.c.clone() * p.z.clone())
            .is_zero()
    }
}

/// A rational parametrization t ↦ [x(t) : y(t) : z(t)] of a line, covering
/// all of it except one point (the chart's infinity).
#[derive(Clone, PartialEq, Debug)]
pub struct LineParam<F: Field> {
    pub imgs: [UniPoly<F>; 3],
}

impl<F: Field> LineParam<F> {
    /// The Lemma-style parametrization in the chart z = 1:
    /// b ≠ 0 → (t, (−a·t − c)/b, 1); otherwise a ≠ 0 → (−c/a, t, 1).
    pub fn z_chart(line: &PlaneLine<F>) -> Self {
        let one = UniPoly::constant(F::one());
        if !line.b.is_zero() {
            let binv = line.b.inv().unwrap();
            let y = UniPoly::from_coeffs(vec![
                -(line.c.clone() * binv.clone()),
                -(line.a.clone() * binv),
            ]);
            LineParam {
                imgs: [UniPoly::x(), y, one],
            }
        } else {
            assert!(!line.a.is_zero());
            let x = UniPoly::constant(-(line.c.clone() * line.a.inv().unwrap()));
            LineParam {
                imgs: [x, UniPoly::x(), one],
            }
        }
    }

    /// The chart x = 1 (used for lines through [1:0:0]):
    /// c ≠ 0 → (1, t, −(a + b·t)/c); otherwise b ≠ 0 → (1, −a/b, t).
    pub fn x_chart(line: &PlaneLine<F>) -> Self {
        let one = UniPoly::constant(F::one());
        if !line.c.is_zero() {
            let cinv = line.c.inv().unwrap();
            let z = UniPoly::from_coeffs(vec![
                -(line.a.clone() * cinv.clone()),
                -(line.b.clone() * cinv),
            ]);
            LineParam {
                imgs: [one, UniPoly::x(), z],
            }
        } else {
            assert!(!line.b.is_zero());
            let y = UniPoly::constant(-(line.a.clone() * line.b.inv().unwrap()));
            LineParam {
                imgs: [one, y, UniPoly::x()],
            }
        }
    }

    pub fn point_at(&self, t: &F) -> PlanePoint<F> {
        PlanePoint::new(
            self.imgs[0].eval(t),
            self.imgs[1].eval(t),
            self.imgs[2].eval(t),
        )
    }

    pub fn map_scalars<G: Field>(&self, m: &impl Fn(&F) -> G) -> LineParam<G> {
        LineParam {
            imgs: [
                self.imgs[0].map_coeffs(m),
                self.imgs[1].map_coeffs(m),
                self.imgs[2].map_coeffs(m),
            ],
        }
    }
}

/// Restriction of a form along a line parametrization; errors when the line
/// lies inside the branch curve.
pub fn restrict_to_param<F: Field>(
    f: &MultiPoly<F>,
    param: &LineParam<F>,
) -> Result<UniPoly<F>, SurfaceError> {
    let s = f.substitute(
        [&param.imgs[0], &param.imgs[1], &param.imgs[2]],
        &|c: &F| UniPoly::constant(c.clone()),
    );
    if s.is_zero() {
        return Err(SurfaceError::LineInBranchCurve);
    }
    Ok(s)
}

/// The spec-level `restrict_to_line` with the fixed z-chart parametrization.
pub fn restrict_to_line<F: Field>(
    f: &TernarySexticForm<F>,
    line: &PlaneLine<F>,
) -> Result<UniPoly<F>, SurfaceError> {
    restrict_to_param(f.poly(), &LineParam::z_chart(line))
}

// ---------------------------------------------------------------------------
// Smoothness.
// ---------------------------------------------------------------------------

/// How smoothness was certified.
#[derive(Clone, PartialEq, Debug)]
pub enum SmoothnessProof {
    /// The reduction modulo p has an empty singular locus over the closure;
    /// good reduction then forces smoothness in characteristic zero.
    ModP { p: u64 },
    /// The singular locus was shown empty directly over ℚ.
    Exact,
}

/// Primes tried for the good-reduction fast path, in order.
pub const SMOOTHNESS_PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Reduce a rational form modulo p after clearing denominators and content
/// (the p-primitive integral model). `None` on bad reduction or vanishing.
pub fn reduce_form_mod_p(f: &MultiPoly<Rational>, p: u64) -> Option<MultiPoly<Fq>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut den = BigInt::one();
    for (_, c) in f.terms() {
        den = den.lcm(c.denom());
    }
    let mut content = BigInt::zero();
    let ints: Vec<([u32; 3], BigInt)> = f
        .terms()
        .map(|(e, c)| (*e, c.numer() * (&den / c.denom())))
        .collect();
    for (_, c) in &ints {
        content = content.gcd(c);
    }
    let ctx = FqCtx::prime(p);
    let reduced = MultiPoly::from_terms(
        ints.iter()
            .map(|(e, c)| (*e, ctx.from_bigint(&(c / &content)))),
    );
    if reduced.is_zero() {
        None
    } else {
        Some(reduced)
    }
}

/// Smoothness of the branch sextic over ℚ̄, with a certificate of which path
/// decided. Total on rational sextics: the mod-p fast path is tried for the
/// primes above, then the exact path decides.
pub fn is_smooth_sextic(f: &TernarySexticForm<Rational>) -> (bool, SmoothnessProof) {
    for p in SMOOTHNESS_PRIMES {
        if let Some(fp) = reduce_form_mod_p(f.poly(), p) {
            if !plane_curve_singular(&fp) {
                return (true, SmoothnessProof::ModP { p });
            }
        }
    }
    (!plane_curve_singular(f.poly()), SmoothnessProof::Exact)
}

/// Smoothness for a surface over a tower base: rational coefficients take
/// the total path; otherwise only the mod-p route is available.
pub fn is_smooth_sextic_tower(
    f: &TernarySexticForm<TowerElement>,
) -> Result<(bool, SmoothnessProof), SurfaceError> {
    let rational: Option<MultiPoly<Rational>> = f
        .poly()
        .try_map_coeffs(|c| c.as_rational().ok_or(()))
        .ok();
    if let Some(fq_form) = rational {
        return Ok(is_smooth_sextic(&TernarySexticForm::new(fq_form).unwrap()));
    }
    let tower = f
        .poly()
        .terms()
        .find_map(|(_, c)| c.ctx().cloned())
        .unwrap_or_else(TowerField::rationals);
    for p in SMOOTHNESS_PRIMES {
        let Ok(emb) = crate::tower::tower_embed_mod_p(&tower, p) else {
            continue;
        };
        let Ok(fp) = f.poly().try_map_coeffs(|c| emb.map(c)) else {
            continue;
        };
        if fp.is_zero() {
            continue;
        }
        if !plane_curve_singular(&fp) {
            return Ok((true, SmoothnessProof::ModP { p }));
        }
    }
    Err(SurfaceError::SmoothnessInconclusive)
}

// ---------------------------------------------------------------------------
// Branch-point search.
// ---------------------------------------------------------------------------

/// Which route produced a tangency datum.
#[derive(Clone, PartialEq, Debug)]
pub enum DatumRoute {
    /// The rational branch point [1:0:0] (available when the x⁶ coefficient
    /// vanishes), handled in the chart x = 1.
    AtInfinity,
    /// The Lemma sweep: x₀ a root of f(x, y₀, 1), handled in the chart z = 1.
    Affine { y0: i64 },
}

/// A branch point with tangent line whose restricted sextic has the shape
/// (t − t₀)² · (separable quartic not vanishing at t₀), of degree exactly 6.
#[derive(Clone, Debug)]
pub struct BranchTangencyDatum {
    /// K′ = K(x₀).
    pub field: Arc<TowerField>,
    pub point: PlanePoint<TowerElement>,
    pub tangent: PlaneLine<TowerElement>,
    pub param: LineParam<TowerElement>,
    /// s(t), the degree-6 restriction of f along the parametrization.
    pub restricted: UniPoly<TowerElement>,
    /// Parameter of the branch point (the double root of s).
    pub t0: TowerElement,
    pub route: DatumRoute,
}

impl BranchTangencyDatum {
    /// Re-verifies every invariant from scratch against a surface.
    pub fn verify(&self, surface: &K3DoubleCover<TowerElement>) -> Result<(), String> {
        let f = surface.f().map_coeffs(|c| promote_into(c, &self.field));
        if !f.eval(self.point.coords()).is_zero() {
            return Err("branch point is not on the branch curve".into());
        }
        if !self.tangent.contains(&self.point) {
            return Err("tangent line does not pass through the point".into());
        }
        let s = restrict_to_param(&f, &self.param).map_err(|e| e.to_string())?;
        if s != self.restricted {
            return Err("restricted sextic mismatch".into());
        }
        validate_restriction(&s, &self.t0).map(|_| ())
    }
}

pub(crate) fn promote_into(c: &TowerElement, field: &Arc<TowerField>) -> TowerElement {
    if field.depth() == 0 {
        c.clone()
    } else {
        c.promote(field)
    }
}

/// Checks the tangency shape and returns the separable quartic s/(t−t₀)².
pub fn validate_restriction(
    s: &UniPoly<TowerElement>,
    t0: &TowerElement,
) -> Result<UniPoly<TowerElement>, String> {
    if s.degree() != Some(6) {
        return Err("intersection at the chart's infinity (z = 0 case)".into());
    }
    let mult = root_multiplicity(s, t0);
    if mult < 2 {
        return Err("restriction is not doubly tangent at the point".into());
    }
    if mult > 2 {
        return Err("tangency multiplicity > 2".into());
    }
    let lin = UniPoly::from_coeffs(vec![-t0.clone(), TowerElement::one()]);
    let h = s
        .exact_div_poly(&(lin.clone() * lin))
        .expect("double root divides");
    debug_assert_eq!(h.degree(), Some(4));
    if !h.map_coeffs(|c: &TowerElement| c.clone()).is_squarefree() {
        return Err("tangency at a second point (quartic not separable)".into());
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchCaps {
    pub y0_cap: i64,
    pub alpha_cap: i64,
    pub prime_cap: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            y0_cap: 50,
            alpha_cap: 200,
            prime_cap: 500,
        }
    }
}

/// Lazy branch-point search. Candidates are produced in a fixed order:
/// first the rational point [1:0:0] when it lies on the branch curve, then
/// y₀ = 0, 1, −1, 2, −2, … with irreducible factors of f(x, y₀, 1) by
/// ascending degree and coefficient order.
pub struct BranchSearcher {
    surface: K3DoubleCover<TowerElement>,
    base: Arc<TowerField>,
    caps: SearchCaps,
    tried_infinity: bool,
    y0_index: i64,
    pending: Vec<(i64, UniPoly<TowerElement>)>,
    pub rejections: Vec<String>,
}

fn y0_at(index: i64) -> i64 {
    // 0, 1, -1, 2, -2, ...
    if index == 0 {
        0
    } else if index % 2 == 1 {
        (index + 1) / 2
    } else {
        -(index / 2)
    }
}

impl BranchSearcher {
    pub fn new(surface: &K3DoubleCover<TowerElement>, caps: SearchCaps) -> Self {
        let base = surface
            .f()
            .terms()
            .find_map(|(_, c)| c.ctx().cloned())
            .unwrap_or_else(TowerField::rationals);
        BranchSearcher {
            surface: surface.clone(),
            base,
            caps,
            tried_infinity: false,
            y0_index: 0,
            pending: Vec::new(),
            rejections: Vec::new(),
        }
    }

    pub fn base_field(&self) -> &Arc<TowerField> {
        &self.base
    }

    fn try_infinity(&mut self) -> Option<BranchTangencyDatum> {
        let f = self.surface.f();
        if !f.coeff([6, 0, 0]).is_zero() {
            return None;
        }
        // Gradient at [1:0:0]: (0, coeff(x^5 y), coeff(x^5 z)).
        let fy = f.coeff([5, 1, 0]);
        let fz = f.coeff([5, 0, 1]);
        if fy.is_zero() && fz.is_zero() {
            self.rejections
                .push("[1:0:0] is a singular point of the branch curve".into());
            return None;
        }
        let tangent = PlaneLine::new(TowerElement::zero(), fy, fz);
        let point = PlanePoint::new(
            TowerElement::one(),
            TowerElement::zero(),
            TowerElement::zero(),
        );
        let param = LineParam::x_chart(&tangent);
        let t0 = TowerElement::zero();
        match restrict_to_param(f, &param) {
            Err(e) => {
                self.rejections.push(format!("[1:0:0]: {e}"));
                None
            }
            Ok(s) => match validate_restriction(&s, &t0) {
                Ok(_) => Some(BranchTangencyDatum {
                    field: self.base.clone(),
                    point,
                    tangent,
                    param,
                    restricted: s,
                    t0,
                    route: DatumRoute::AtInfinity,
                }),
                Err(reason) => {
                    self.rejections.push(format!("[1:0:0]: {reason}"));
                    None
                }
            },
        }
    }

    fn refill_pending(&mut self) {
        while self.pending.is_empty() {
            let y0 = y0_at(self.y0_index);
            if y0.abs() > self.caps.y0_cap {
                return;
            }
            self.y0_index += 1;
            let f = self.surface.f();
            let y0e = TowerElement::from_int(y0);
            let u: UniPoly<TowerElement> = f.substitute(
                [
                    &UniPoly::x(),
                    &UniPoly::constant(y0e.clone()),
                    &UniPoly::constant(TowerElement::one()),
                ],
                &|c: &TowerElement| UniPoly::constant(c.clone()),
            );
            if u.is_constant() {
                self.rejections.push(format!("f(x, {y0}, 1) constant"));
                continue;
            }
            let u = u.map_coeffs(|c| promote_into(c, &self.base));
            let factors = TowerElement::factor_monic(&u.monic());
            // Ascending degree then coefficient order; degree > 6 cannot occur.
            for (m, _) in factors {
                self.pending.push((y0, m));
            }
            self.pending.reverse(); // pop() takes from the front of the order
        }
    }

    fn try_affine(&mut self, y0: i64, m: &UniPoly<TowerElement>) -> Option<BranchTangencyDatum> {
        let (field, x0) = if m.degree() == Some(1) {
            (self.base.clone(), -m.coeff(0))
        } else {
            let name = format!("x0_{}", self.base.depth() + 1);
            match extend_tower(&self.base, m, &name) {
                Ok(t) => (t.clone(), TowerElement::generator(&t)),
                Err(e) => {
                    self.rejections.push(format!("y0={y0}: {e}"));
                    return None;
                }
            }
        };
        let f = self.surface.f().map_coeffs(|c| promote_into(c, &field));
        let point = PlanePoint::new(
            x0.clone(),
            promote_into(&TowerElement::from_int(y0), &field),
            promote_into(&TowerElement::one(), &field),
        );
        // Tangent from the gradient.
        let grad: Vec<TowerElement> = [Var::X, Var::Y, Var::Z]
            .into_iter()
            .map(|v| f.partial(v).eval(point.coords()))
            .collect();
        if grad.iter().all(|g| g.is_zero()) {
            self.rejections
                .push(format!("y0={y0}: singular branch point"));
            return None;
        }
        let tangent = PlaneLine::new(grad[0].clone(), grad[1].clone(), grad[2].clone());
        debug_assert!(tangent.contains(&point));
        let param = LineParam::z_chart(&tangent);
        // Parameter of the point: x0 when parametrized by x, else y0.
        let t0 = if !tangent.b.is_zero() {
            x0
        } else {
            promote_into(&TowerElement::from_int(y0), &field)
        };
        match restrict_to_param(&f, &param) {
            Err(e) => {
                self.rejections.push(format!("y0={y0}: {e}"));
                None
            }
            Ok(s) => match validate_restriction(&s, &t0) {
                Ok(_) => Some(BranchTangencyDatum {
                    field,
                    point,
                    tangent,
                    param,
                    restricted: s,
                    t0,
                    route: DatumRoute::Affine { y0 },
                }),
                Err(reason) => {
                    self.rejections.push(format!("y0={y0}: {reason}"));
                    None
                }
            },
        }
    }

    /// Next valid datum in sweep order, or `None` when the caps are exhausted.
    pub fn next_datum(&mut self) -> Option<BranchTangencyDatum> {
        if !self.tried_infinity {
            self.tried_infinity = true;
            if let Some(d) = self.try_infinity() {
                return Some(d);
            }
        }
        loop {
            if self.pending.is_empty() {
                self.refill_pending();
                if self.pending.is_empty() {
                    return None;
                }
            }
            let (y0, m) = self.pending.pop().unwrap();
            if let Some(d) = self.try_affine(y0, &m) {
                return Some(d);
            }
        }
    }
}

/// The spec-level single-shot search.
pub fn branch_point_search(
    surface: &K3DoubleCover<TowerElement>,
    caps: SearchCaps,
) -> Result<BranchTangencyDatum, SurfaceError> {
    let mut s = BranchSearcher::new(surface, caps);
    s.next_datum().ok_or(SurfaceError::SearchExhausted {
        cap: caps.y0_cap,
        rejections: s.rejections.clone(),
    })
}

// ---------------------------------------------------------------------------
// Point counting over finite fields.
// ---------------------------------------------------------------------------

fn split_prime_power(q: u64) -> Option<(u64, usize)> {
    for p in 3..=q {
        if q % p == 0 {
            if !is_small_prime(p) {
                return None;
            }
            let mut k = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 && p % 2 == 1 { Some((p, k)) } else { None };
        }
    }
    None
}

/// #X(F_q) by the quadratic-character sum over P²(F_q): each plane point
/// contributes 1 + χ(f(P)), branch points contributing exactly one lift.
pub fn count_points_fq(surface: &K3DoubleCover<Rational>, q: u64) -> Result<u64, SurfaceError> {
    assert!(q <= 1_000_000, "q capped at 10^6");
    let (p, k) = split_prime_power(q).ok_or(SurfaceError::NotAPrimePower { q })?;
    let ctx = if k == 1 {
        FqCtx::prime(p)
    } else {
        let m = crate::poly::factor_fq::irreducible_poly(p, k);
        let coeffs: Vec<u64> = m.coeffs().iter().map(|c| c.residue().unwrap_or(0)).collect();
        FqCtx::extension(p, coeffs)
    };
    let f = surface
        .f()
        .try_map_coeffs(|c| {
            ctx.from_rational(c).ok_or(SurfaceError::BadReduction {
                p,
                reason: "p divides a denominator".into(),
            })
        })?;
    let els = ctx.all_elements();
    let mut count: u64 = 0;
    let mut tally = |pt: [&Fq; 3]| {
        let v = f.eval(pt);
        count += (1 + v.quad_character()) as u64;
    };
    for y in &els {
        for z in &els {
            tally([&ctx.one(), y, z]);
        }
    }
    for z in &els {
        tally([&ctx.zero(), &ctx.one(), z]);
    }
    tally([&ctx.zero(), &ctx.zero(), &ctx.one()]);
    Ok(count)
}
