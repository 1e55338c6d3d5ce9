//! Birational maps between genus-1 models, stored stage by stage as tuples
//! of exact rational functions plus the finitely many special images the
//! formulas cannot reach. Round-trips are verified on sample points.

use super::weierstrass::ECPoint;
use crate::field::Field;
use crate::poly::{MultiPoly, Var};
use crate::surface::PlanePoint;
use num_traits::Zero;

/// A point of one of the three model kinds.
#[derive(Clone, PartialEq, Debug)]
pub enum ModelPoint<F: Field> {
    /// A projective plane point (cubic models).
    Plane(PlanePoint<F>),
    /// An affine point (u, v) on a quartic v² = h(u).
    Quartic(F, F),
    /// A Weierstrass point.
    Curve(ECPoint<F>),
}

impl<F: Field> ModelPoint<F> {
    pub fn map_scalars<G: Field>(&self, m: &impl Fn(&F) -> G) -> ModelPoint<G> {
        match self {
            ModelPoint::Plane(p) => {
                ModelPoint::Plane(PlanePoint::new(m(&p.x), m(&p.y), m(&p.z)))
            }
            ModelPoint::Quartic(u, v) => ModelPoint::Quartic(m(u), m(v)),
            ModelPoint::Curve(p) => ModelPoint::Curve(p.map_scalars(m)),
        }
    }

    /// The two coordinates the stage formulas consume. Plane points use the
    /// z = 1 chart; `None` marks an exceptional input for formula evaluation.
    fn affine_pair(&self) -> Option<(F, F)> {
        match self {
            ModelPoint::Plane(p) => {
                let zi = p.z.inv()?;
                Some((p.x.clone() * zi.clone(), p.y.clone() * zi))
            }
            ModelPoint::Quartic(u, v) => Some((u.clone(), v.clone())),
            ModelPoint::Curve(ECPoint::Affine(x, y)) => Some((x.clone(), y.clone())),
            ModelPoint::Curve(ECPoint::Infinity) => None,
        }
    }
}

/// A rational function in two variables (x := first coordinate, y := second).
#[derive(Clone, PartialEq, Debug)]
pub struct RatFn<F: Field> {
    pub num: MultiPoly<F>,
    pub den: MultiPoly<F>,
}

impl<F: Field> RatFn<F> {
    pub fn new(num: MultiPoly<F>, den: MultiPoly<F>) -> Self {
        assert!(!den.is_zero());
        RatFn { num, den }
    }

    pub fn poly(num: MultiPoly<F>) -> Self {
        Self::new(num, MultiPoly::constant(F::one()))
    }

    pub fn eval(&self, a: &F, b: &F) -> Option<F> {
        let z = F::zero();
        let d = self.den.eval([a, b, &z]);
        let n = self.num.eval([a, b, &z]);
        Some(n * d.inv()?)
    }

    pub fn map_scalars<G: Field>(&self, m: &impl Fn(&F) -> G) -> RatFn<G> {
        RatFn {
            num: self.num.map_coeffs(m),
            den: self.den.map_coeffs(m),
        }
    }
}

/// Convenience: the two coordinate variables of a stage's rational functions.
pub fn coord_vars<F: Field>() -> (MultiPoly<F>, MultiPoly<F>) {
    (MultiPoly::var(Var::X), MultiPoly::var(Var::Y))
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum PointKind {
    Plane,
    Quartic,
    Curve,
}

/// One birational step. `fwd`/`bwd` have 3 entries for plane targets
/// (projective coordinates) and 2 otherwise.
#[derive(Clone, Debug)]
pub struct Stage<F: Field> {
    pub label: String,
    pub fwd_kind: PointKind,
    pub fwd: Vec<RatFn<F>>,
    pub bwd_kind: PointKind,
    pub bwd: Vec<RatFn<F>>,
    pub fwd_special: Vec<(ModelPoint<F>, ModelPoint<F>)>,
    pub bwd_special: Vec<(ModelPoint<F>, ModelPoint<F>)>,
}

impl<F: Field> Stage<F> {
    fn apply(
        p: &ModelPoint<F>,
        kind: PointKind,
        fns: &[RatFn<F>],
        special: &[(ModelPoint<F>, ModelPoint<F>)],
    ) -> Option<ModelPoint<F>> {
        for (from, to) in special {
            if from == p {
                return Some(to.clone());
            }
        }
        let (a, b) = p.affine_pair()?;
        let vals: Option<Vec<F>> = fns.iter().map(|f| f.eval(&a, &b)).collect();
        let vals = vals?;
        Some(match kind {
            PointKind::Plane => {
                if vals.iter().all(|v| v.is_zero()) {
                    return None;
                }
                ModelPoint::Plane(PlanePoint::new(
                    vals[0].clone(),
                    vals[1].clone(),
                    vals[2].clone(),
                ))
            }
            PointKind::Quartic => ModelPoint::Quartic(vals[0].clone(), vals[1].clone()),
            PointKind::Curve => {
                ModelPoint::Curve(ECPoint::Affine(vals[0].clone(), vals[1].clone()))
            }
        })
    }

    pub fn forward(&self, p: &ModelPoint<F>) -> Option<ModelPoint<F>> {
        Self::apply(p, self.fwd_kind, &self.fwd, &self.fwd_special)
    }

    pub fn backward(&self, p: &ModelPoint<F>) -> Option<ModelPoint<F>> {
        Self::apply(p, self.bwd_kind, &self.bwd, &self.bwd_special)
    }

    pub fn map_scalars<G: Field>(&self, m: &impl Fn(&F) -> G) -> Stage<G> {
        Stage {
            label: self.label.clone(),
            fwd_kind: self.fwd_kind,
            fwd: self.fwd.iter().map(|f| f.map_scalars(m)).collect(),
            bwd_kind: self.bwd_kind,
            bwd: self.bwd.iter().map(|f| f.map_scalars(m)).collect(),
            fwd_special: self
                .fwd_special
                .iter()
                .map(|(a, b)| (a.map_scalars(m), b.map_scalars(m)))
                .collect(),
            bwd_special: self
                .bwd_special
                .iter()
                .map(|(a, b)| (a.map_scalars(m), b.map_scalars(m)))
                .collect(),
        }
    }
}

/// A chain of stages; forward runs left to right.
#[derive(Clone, Debug, Default)]
pub struct ModelMap<F: Field> {
    pub stages: Vec<Stage<F>>,
}

impl<F: Field> ModelMap<F> {
    pub fn single(stage: Stage<F>) -> Self {
        ModelMap {
            stages: vec![stage],
        }
    }

    pub fn then(mut self, mut other: ModelMap<F>) -> Self {
        self.stages.append(&mut other.stages);
        self
    }

    /// `None` when the point hits the exceptional set of some stage.
    pub fn forward(&self, p: &ModelPoint<F>) -> Option<ModelPoint<F>> {
        let mut cur = p.clone();
        for s in &self.stages {
            cur = s.forward(&cur)?;
        }
        Some(cur)
    }

    pub fn backward(&self, p: &ModelPoint<F>) -> Option<ModelPoint<F>> {
        let mut cur = p.clone();
        for s in self.stages.iter().rev() {
            cur = s.backward(&cur)?;
        }
        Some(cur)
    }

    /// Round-trip identity on every sample point where both directions are
    /// defined; at least one sample must survive.
    pub fn round_trips_on(&self, samples: &[ModelPoint<F>]) -> bool {
        let mut checked = 0;
        for p in samples {
            let Some(q) = self.forward(p) else { continue };
            let Some(back) = self.backward(&q) else {
                continue;
            };
            if back != *p {
                return false;
            }
            checked += 1;
        }
        checked > 0
    }

    pub fn map_scalars<G: Field>(&self, m: &impl Fn(&F) -> G) -> ModelMap<G> {
        ModelMap {
            stages: self.stages.iter().map(|s| s.map_scalars(m)).collect(),
        }
    }
}

/// 3×3 determinant and adjugate inverse for plane coordinate changes.
pub fn mat3_det<F: Field>(m: &[[F; 3]; 3]) -> F {
    let d = |a: &F, b: &F, c: &F, d: &F| a.clone() * d.clone() - b.clone() * c.clone();
    m[0][0].clone() * d(&m[1][1], &m[1][2], &m[2][1], &m[2][2])
        - m[0][1].clone() * d(&m[1][0], &m[1][2], &m[2][0], &m[2][2])
        + m[0][2].clone() * d(&m[1][0], &m[1][1], &m[2][0], &m[2][1])
}

pub fn mat3_inverse<F: Field>(m: &[[F; 3]; 3]) -> Option<[[F; 3]; 3]> {
    let det = mat3_det(m);
    let di = det.inv()?;
    let c = |r: usize, s: usize| -> F {
        let (r1, r2) = match r {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (s1, s2) = match s {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[r1][s1].clone() * m[r2][s2].clone() - m[r1][s2].clone() * m[r2][s1].clone();
        if (r + s) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut out = [
        [F::zero(), F::zero(), F::zero()],
        [F::zero(), F::zero(), F::zero()],
        [F::zero(), F::zero(), F::zero()],
    ];
    #[allow(clippy::needless_range_loop)]
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = c(j, i) * di.clone(); // adjugate transposes
        }
    }
    Some(out)
}

pub fn mat3_apply<F: Field>(m: &[[F; 3]; 3], v: [&F; 3]) -> [F; 3] {
    let mut out = [F::zero(), F::zero(), F::zero()];
    #[allow(clippy::needless_range_loop)]
    for i in 0..3 {
        out[i] = m[i][0].clone() * v[0].clone()
            + m[i][1].clone() * v[1].clone()
            + m[i][2].clone() * v[2].clone();
    }
    out
}

/// A plane-to-plane stage given by an invertible matrix acting on columns.
pub fn linear_stage<F: Field>(label: &str, m: [[F; 3]; 3]) -> Stage<F> {
    let minv = mat3_inverse(&m).expect("matrix must be invertible");
    let (x, y) = coord_vars::<F>();
    let one: MultiPoly<F> = MultiPoly::constant(F::one());
    let row = |mm: &[[F; 3]; 3], i: usize| -> RatFn<F> {
        RatFn::poly(
            x.clone().scale(&mm[i][0]) + y.clone().scale(&mm[i][1]) + one.clone().scale(&mm[i][2]),
        )
    };
    Stage {
        label: label.into(),
        fwd_kind: PointKind::Plane,
        fwd: vec![row(&m, 0), row(&m, 1), row(&m, 2)],
        bwd_kind: PointKind::Plane,
        bwd: vec![row(&minv, 0), row(&minv, 1), row(&minv, 2)],
        fwd_special: plane_specials(&m),
        bwd_special: plane_specials(&minv),
    }
}

/// Exact images of the z = 0 points, which the affine-chart formulas miss.
fn plane_specials<F: Field>(m: &[[F; 3]; 3]) -> Vec<(ModelPoint<F>, ModelPoint<F>)> {
    let mut out = Vec::new();
    // The full line z = 0 cannot be tabulated, but the two axis points
    // cover everything the pipeline maps through linear stages.
    for src in [
        [F::one(), F::zero(), F::zero()],
        [F::zero(), F::one(), F::zero()],
    ] {
        let img = mat3_apply(m, [&src[0], &src[1], &src[2]]);
        if img.iter().all(|c| c.is_zero()) {
            continue;
        }
        out.push((
            ModelPoint::Plane(PlanePoint::new(
                src[0].clone(),
                src[1].clone(),
                src[2].clone(),
            )),
            ModelPoint::Plane(PlanePoint::new(
                img[0].clone(),
                img[1].clone(),
                img[2].clone(),
            )),
        ));
    }
    out
}
