//! Smooth plane cubics with a rational point, transformed to Weierstrass
//! form. A flex goes by a linear change of coordinates; otherwise the curve
//! is projected from the point onto the pencil of lines through it, giving
//! a quartic v² = D(t) with a rational point at the tangent slope, which
//! the quartic transformation finishes.

use super::modelmap::{
    coord_vars, linear_stage, mat3_apply, ModelMap, ModelPoint, PointKind, RatFn, Stage,
};
use super::quartic::{cubic_v2_to_weierstrass, quartic_to_weierstrass, QuarticGenus1Curve};
use super::weierstrass::{ECPoint, WeierstrassCurve};
use crate::field::Field;
use crate::poly::squarefree::root_multiplicity;
use crate::poly::{MultiPoly, SimpleExtension, UniPoly, Var};
use crate::smooth::plane_curve_singular;
use crate::surface::PlanePoint;
use num_traits::Zero;

#[derive(Debug, thiserror::Error)]
pub enum CubicError {
    #[error("the form must be a nonzero homogeneous cubic")]
    NotACubic,
    #[error("singular cubic")]
    Singular,
    #[error("point not on cubic")]
    PointNotOnCurve,
    #[error("internal transformation failure: {0}")]
    Internal(String),
}

/// The tangent line at a smooth point, from the gradient.
fn tangent_at<F: Field>(cubic: &MultiPoly<F>, pt: &PlanePoint<F>) -> Option<[F; 3]> {
    let g = [
        cubic.partial(Var::X).eval(pt.coords()),
        cubic.partial(Var::Y).eval(pt.coords()),
        cubic.partial(Var::Z).eval(pt.coords()),
    ];
    if g.iter().all(|c| c.is_zero()) {
        None
    } else {
        Some(g)
    }
}

/// A point on the line `l` independent of `pt`, from a deterministic list.
fn second_point_on_line<F: Field>(l: &[F; 3], pt: &PlanePoint<F>) -> [F; 3] {
    let cands = [
        [l[1].clone(), -l[0].clone(), F::zero()],
        [l[2].clone(), F::zero(), -l[0].clone()],
        [F::zero(), l[2].clone(), -l[1].clone()],
    ];
    for c in cands {
        if c.iter().all(|v| v.is_zero()) {
            continue;
        }
        let p2 = PlanePoint::new(c[0].clone(), c[1].clone(), c[2].clone());
        if p2 != *pt {
            return c;
        }
    }
    unreachable!("a projective line has more than one point")
}

/// Intersection multiplicity of the tangent with the cubic at pt (2 for a
/// generic point, 3 for a flex).
fn tangent_contact_order<F: Field>(
    cubic: &MultiPoly<F>,
    pt: &PlanePoint<F>,
    tangent: &[F; 3],
) -> u32 {
    let s = second_point_on_line(tangent, pt);
    // Parametrize pt + t·s and restrict.
    let imgs: Vec<UniPoly<F>> = (0..3)
        .map(|i| UniPoly::from_coeffs(vec![pt.coords()[i].clone(), s[i].clone()]))
        .collect();
    let r: UniPoly<F> = cubic.substitute([&imgs[0], &imgs[1], &imgs[2]], &|c: &F| {
        UniPoly::constant(c.clone())
    });
    if r.is_zero() {
        return u32::MAX; // line inside the cubic; impossible for smooth input
    }
    root_multiplicity(&r, &F::zero())
}

/// Completes `cols` to an invertible matrix using standard basis vectors.
fn complete_matrix<F: Field>(cols: Vec<[F; 3]>) -> [[F; 3]; 3] {
    use super::modelmap::mat3_det;
    let basis = [
        [F::one(), F::zero(), F::zero()],
        [F::zero(), F::one(), F::zero()],
        [F::zero(), F::zero(), F::one()],
    ];
    match cols.len() {
        3 => cols_to_matrix(&cols),
        2 => {
            for b in &basis {
                let cand = vec![cols[0].clone(), cols[1].clone(), b.clone()];
                if !mat3_det(&cols_to_matrix(&cand)).is_zero() {
                    return cols_to_matrix(&cand);
                }
            }
            unreachable!("two independent columns always complete")
        }
        1 => {
            for b1 in &basis {
                for b2 in &basis {
                    let cand = vec![cols[0].clone(), b1.clone(), b2.clone()];
                    if !mat3_det(&cols_to_matrix(&cand)).is_zero() {
                        return cols_to_matrix(&cand);
                    }
                }
            }
            unreachable!("a nonzero column always completes")
        }
        _ => panic!("complete_matrix expects 1..=3 columns"),
    }
}

fn cols_to_matrix<F: Field>(cols: &[[F; 3]]) -> [[F; 3]; 3] {
    let mut m = [
        [F::zero(), F::zero(), F::zero()],
        [F::zero(), F::zero(), F::zero()],
        [F::zero(), F::zero(), F::zero()],
    ];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = c[i].clone();
        }
    }
    m
}

/// Transforms a smooth plane cubic with a rational point to Weierstrass
/// form; the distinguished point maps to O.
pub fn cubic_to_weierstrass<F: SimpleExtension>(
    cubic: &MultiPoly<F>,
    pt: &PlanePoint<F>,
) -> Result<(WeierstrassCurve<F>, ModelMap<F>), CubicError> {
    if cubic.is_zero() || !cubic.is_homogeneous(3) {
        return Err(CubicError::NotACubic);
    }
    if !cubic.eval(pt.coords()).is_zero() {
        return Err(CubicError::PointNotOnCurve);
    }
    if plane_curve_singular(cubic) {
        return Err(CubicError::Singular);
    }
    let tangent = tangent_at(cubic, pt).ok_or(CubicError::Singular)?;
    let contact = tangent_contact_order(cubic, pt, &tangent);
    if contact >= 3 {
        flex_path(cubic, pt, &tangent)
    } else {
        nagell_path(cubic, pt)
    }
}

/// Flex: send pt → [0:1:0] and its tangent → V(z), then normalize.
fn flex_path<F: SimpleExtension>(
    cubic: &MultiPoly<F>,
    pt: &PlanePoint<F>,
    tangent: &[F; 3],
) -> Result<(WeierstrassCurve<F>, ModelMap<F>), CubicError> {
    let v1 = second_point_on_line(tangent, pt);
    let ptc = [pt.x.clone(), pt.y.clone(), pt.z.clone()];
    let m = complete_matrix(vec![v1, ptc]);
    let g = cubic.linear_substitute(&m);
    // g vanishes at [0:1:0] with tangent z = 0, to order 3.
    for e in [[0, 3, 0], [1, 2, 0], [2, 1, 0]] {
        if !g.coeff(e).is_zero() {
            return Err(CubicError::Internal(format!(
                "flex normalization leaves monomial {e:?}"
            )));
        }
    }
    let beta = g.coeff([0, 2, 1]);
    let c30 = g.coeff([3, 0, 0]);
    if beta.is_zero() || c30.is_zero() {
        return Err(CubicError::Internal("degenerate flex form".into()));
    }
    let bi = beta.inv().unwrap();
    let p = g.coeff([1, 1, 1]) * bi.clone();
    let q = g.coeff([0, 1, 2]) * bi.clone();
    let r = c30 * bi.clone();
    let s = g.coeff([2, 0, 1]) * bi.clone();
    let t = g.coeff([1, 0, 2]) * bi.clone();
    let u = g.coeff([0, 0, 3]) * bi;
    let e = WeierstrassCurve::new(
        -p,
        -s,
        q * r.clone(),
        t * r.clone(),
        -(u * r.clone() * r.clone()),
    );

    // Stage 1: original plane → normalized plane via M⁻¹ (M maps new → old).
    let minv = super::modelmap::mat3_inverse(&m).ok_or_else(|| {
        CubicError::Internal("coordinate matrix not invertible".into())
    })?;
    let mut lin = linear_stage("flex-normalization", minv.clone());
    // Record the distinguished point exactly (it has z = 0 downstream).
    let img = mat3_apply(&minv, pt.coords());
    lin.fwd_special.push((
        ModelPoint::Plane(pt.clone()),
        ModelPoint::Plane(PlanePoint::new(img[0].clone(), img[1].clone(), img[2].clone())),
    ));
    lin.bwd_special.push((
        ModelPoint::Plane(PlanePoint::new(img[0].clone(), img[1].clone(), img[2].clone())),
        ModelPoint::Plane(pt.clone()),
    ));

    // Stage 2: normalized plane (x, y) → EC via (X, Y) = (−r·x, r·y).
    let (x, y) = coord_vars::<F>();
    let fwd = vec![
        RatFn::poly(x.clone().scale(&-r.clone())),
        RatFn::poly(y.clone().scale(&r)),
    ];
    let flex_plane = ModelPoint::Plane(PlanePoint::new(F::zero(), F::one(), F::zero()));
    let to_ec = Stage {
        label: "flex-to-weierstrass".into(),
        fwd_kind: PointKind::Curve,
        fwd,
        bwd_kind: PointKind::Plane,
        bwd: {
            // Backward must return projective coordinates.
            let (x, y) = coord_vars::<F>();
            vec![
                RatFn::poly(x.scale(&-r.inv().unwrap())),
                RatFn::poly(y.scale(&r.inv().unwrap())),
                RatFn::poly(MultiPoly::constant(F::one())),
            ]
        },
        fwd_special: vec![(flex_plane.clone(), ModelPoint::Curve(ECPoint::Infinity))],
        bwd_special: vec![(ModelPoint::Curve(ECPoint::Infinity), flex_plane)],
    };
    Ok((e, ModelMap::single(lin).then(ModelMap::single(to_ec))))
}

/// Projection from a non-flex point: move pt to the affine origin, project
/// onto the slope t = y/x, and finish through v² = D(t).
fn nagell_path<F: SimpleExtension>(
    cubic: &MultiPoly<F>,
    pt: &PlanePoint<F>,
) -> Result<(WeierstrassCurve<F>, ModelMap<F>), CubicError> {
    // Move pt → [0:0:1].
    let ptc = [pt.x.clone(), pt.y.clone(), pt.z.clone()];
    let m = complete_matrix(vec![ptc]);
    // complete_matrix put pt in the first column; rotate columns so that
    // pt sits in the last one (image of e₃).
    let m = [
        [m[0][1].clone(), m[0][2].clone(), m[0][0].clone()],
        [m[1][1].clone(), m[1][2].clone(), m[1][0].clone()],
        [m[2][1].clone(), m[2][2].clone(), m[2][0].clone()],
    ];
    let mut g = cubic.linear_substitute(&m);
    let minv = super::modelmap::mat3_inverse(&m)
        .ok_or_else(|| CubicError::Internal("coordinate matrix not invertible".into()))?;
    let mut stages = vec![{
        let mut lin = linear_stage("move-to-origin", minv.clone());
        let img = mat3_apply(&minv, pt.coords());
        lin.fwd_special.push((
            ModelPoint::Plane(pt.clone()),
            ModelPoint::Plane(PlanePoint::new(
                img[0].clone(),
                img[1].clone(),
                img[2].clone(),
            )),
        ));
        lin.bwd_special.push((
            ModelPoint::Plane(PlanePoint::new(
                img[0].clone(),
                img[1].clone(),
                img[2].clone(),
            )),
            ModelPoint::Plane(pt.clone()),
        ));
        lin
    }];

    // Ensure the tangent slope at the origin is finite: the linear part
    // p·x + q·y needs q ≠ 0; otherwise swap x and y.
    if g.coeff([0, 1, 2]).is_zero() {
        let swap = [
            [F::zero(), F::one(), F::zero()],
            [F::one(), F::zero(), F::zero()],
            [F::zero(), F::zero(), F::one()],
        ];
        g = g.linear_substitute(&swap);
        stages.push(linear_stage("swap-xy", swap));
    }

    let part = |k: u32| -> UniPoly<F> {
        // F_k(1, t): the degree-k part in (x, y) with z-exponent 3−k.
        let mut coeffs = vec![F::zero(); k as usize + 1];
        for j in 0..=k {
            coeffs[j as usize] = g.coeff([k - j, j, 3 - k]);
        }
        UniPoly::from_coeffs(coeffs)
    };
    let a_t = part(3);
    let b_t = part(2);
    let c_t = part(1);
    let p_lin = c_t.coeff(0);
    let q_lin = c_t.coeff(1);
    debug_assert!(!q_lin.is_zero());
    let t0 = -(p_lin * q_lin.inv().unwrap());
    let v0 = b_t.eval(&t0);
    if v0.is_zero() {
        return Err(CubicError::Internal(
            "flex reached the projection path".into(),
        ));
    }
    // D(t) = b² − 4ac.
    let d_t = b_t.clone() * b_t.clone()
        - a_t.clone() * c_t.clone().scale(&F::from_i64(4));

    // Projection stage: (x, y) → (t, v) = (y/x, (2F₃ + xF₂)/x²).
    let (x, y) = coord_vars::<F>();
    let f3_xy = MultiPoly::from_terms((0..=3u32).map(|j| ([3 - j, j, 0], a_t.coeff(j as usize))));
    let f2_xy = MultiPoly::from_terms((0..=2u32).map(|j| ([2 - j, j, 0], b_t.coeff(j as usize))));
    let x2 = x.clone() * x.clone();
    let proj_fwd = vec![
        RatFn::new(y.clone(), x.clone()),
        RatFn::new(f3_xy.scale(&F::from_i64(2)) + f2_xy.clone(), x2.clone()),
    ];
    // Backward: x = (v − b(t))/(2a(t)), y = t·x, as projective output.
    let (t_var, v_var) = coord_vars::<F>();
    let b_of_t = MultiPoly::from_terms((0..=2u32).map(|j| ([j, 0, 0], b_t.coeff(j as usize))));
    let a_of_t = MultiPoly::from_terms((0..=3u32).map(|j| ([j, 0, 0], a_t.coeff(j as usize))));
    let x_num = v_var.clone() - b_of_t;
    let two_a = a_of_t.scale(&F::from_i64(2));
    let proj_bwd = vec![
        RatFn::new(x_num.clone(), two_a.clone()),
        RatFn::new(t_var * x_num, two_a),
        RatFn::poly(MultiPoly::constant(F::one())),
    ];
    let origin = ModelPoint::Plane(PlanePoint::new(F::zero(), F::zero(), F::one()));
    let base_quartic = ModelPoint::Quartic(t0.clone(), v0.clone());
    let mut proj = Stage {
        label: "project-from-point".into(),
        fwd_kind: PointKind::Quartic,
        fwd: proj_fwd,
        bwd_kind: PointKind::Plane,
        bwd: proj_bwd,
        fwd_special: vec![(origin.clone(), base_quartic.clone())],
        bwd_special: vec![(base_quartic.clone(), origin)],
    };
    // The conjugate (t0, −v0) may map to the chart's infinity when a(t0) = 0.
    if a_t.eval(&t0).is_zero() {
        let inf_pt = ModelPoint::Plane(PlanePoint::new(F::one(), t0.clone(), F::zero()));
        proj.bwd_special
            .push((ModelPoint::Quartic(t0.clone(), -v0.clone()), inf_pt.clone()));
        proj.fwd_special
            .push((inf_pt, ModelPoint::Quartic(t0.clone(), -v0.clone())));
    }
    stages.push(proj);

    // Finish: v² = D(t) of degree 4 (separable) or 3.
    let mut chain = ModelMap { stages };
    let (e, tail) = match d_t.degree() {
        Some(4) => {
            let quartic = QuarticGenus1Curve::new(d_t.clone())
                .map_err(|e| CubicError::Internal(format!("projection quartic: {e}")))?;
            quartic_to_weierstrass(&quartic, &t0, &v0)
                .map_err(|e| CubicError::Internal(format!("quartic step: {e}")))?
        }
        Some(3) => cubic_v2_to_weierstrass(&d_t)
            .map_err(|e| CubicError::Internal(format!("cubic step: {e}")))?,
        other => {
            return Err(CubicError::Internal(format!(
                "projection discriminant has degree {other:?}"
            )))
        }
    };
    chain = chain.then(tail);
    Ok((e, chain))
}
