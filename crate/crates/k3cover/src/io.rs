//! JSON serialization of every artifact: rationals as exact "a/b" strings,
//! tower fields as ordered lists of modulus coefficient vectors, polynomials
//! as maps from exponent strings "i,j,k", and certificates as single
//! documents embedding tower, models, maps, points, and non-torsion data.
//! No floating point appears anywhere.

use crate::field::{rational_from_string, rational_to_string, Rational};
use crate::genus1::modelmap::{ModelMap, ModelPoint, PointKind, RatFn, Stage};
use crate::genus1::torsion::{ExactNonVanishing, NonTorsionCert};
use crate::genus1::weierstrass::{ECPoint, WeierstrassCurve};
use crate::pipeline::{Certificate, ExtensionCertificate, InfinitePointsCertificate};
use crate::poly::{MultiPoly, UniPoly};
use crate::surface::{
    BranchTangencyDatum, DatumRoute, K3DoubleCover, LineParam, PlaneLine, PlanePoint,
    TernarySexticForm, WP3Point,
};
use crate::tower::{Rep, TowerElement, TowerField, TowerLevel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("parse error at {key}: {reason}")]
    Parse { key: String, reason: String },
}

fn parse_err(key: &str, reason: impl std::fmt::Display) -> IoError {
    IoError::Parse {
        key: key.to_string(),
        reason: reason.to_string(),
    }
}

/// A tower element: either a rational string or a coefficient vector in the
/// top generator, entries one level down, lowest degree first.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ElemJson {
    Rat(String),
    Poly(Vec<ElemJson>),
}

pub fn elem_to_json(e: &TowerElement) -> ElemJson {
    fn go(r: &Rep) -> ElemJson {
        match r {
            Rep::Rat(x) => ElemJson::Rat(rational_to_string(x)),
            Rep::Ext(v) => ElemJson::Poly(v.iter().map(go).collect()),
        }
    }
    go(e.rep())
}

pub fn elem_from_json(
    j: &ElemJson,
    ctx: &Arc<TowerField>,
    key: &str,
) -> Result<TowerElement, IoError> {
    fn go(j: &ElemJson, depth: usize, key: &str) -> Result<Rep, IoError> {
        match j {
            ElemJson::Rat(s) => {
                let r = rational_from_string(s).map_err(|e| parse_err(key, e))?;
                Ok(rep_from_rat(&r, depth))
            }
            ElemJson::Poly(v) => {
                if depth == 0 {
                    return Err(parse_err(key, "nested element in a rational context"));
                }
                let mut out = Vec::with_capacity(v.len());
                for e in v {
                    out.push(go(e, depth - 1, key)?);
                }
                while out.last().map_or(false, is_zero_rep) {
                    out.pop();
                }
                Ok(Rep::Ext(out))
            }
        }
    }
    let rep = go(j, ctx.depth(), key)?;
    Ok(TowerElement::with_ctx(ctx, rep))
}

fn rep_from_rat(r: &Rational, depth: usize) -> Rep {
    use num_traits::Zero;
    if depth == 0 {
        Rep::Rat(r.clone())
    } else if r.is_zero() {
        Rep::Ext(vec![])
    } else {
        Rep::Ext(vec![rep_from_rat(r, depth - 1)])
    }
}

fn is_zero_rep(r: &Rep) -> bool {
    use num_traits::Zero;
    match r {
        Rep::Rat(x) => x.is_zero(),
        Rep::Ext(v) => v.is_empty(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelJson {
    pub name: String,
    /// Monic modulus, lowest degree first; entries live one level down.
    pub modulus: Vec<ElemJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct TowerJson(pub Vec<LevelJson>);

pub fn tower_to_json(t: &TowerField) -> TowerJson {
    fn rep_json(r: &Rep) -> ElemJson {
        match r {
            Rep::Rat(x) => ElemJson::Rat(rational_to_string(x)),
            Rep::Ext(v) => ElemJson::Poly(v.iter().map(rep_json).collect()),
        }
    }
    TowerJson(
        t.levels
            .iter()
            .map(|l| LevelJson {
                name: l.name.clone(),
                modulus: l.modulus.iter().map(rep_json).collect(),
            })
            .collect(),
    )
}

pub fn tower_from_json(j: &TowerJson) -> Result<Arc<TowerField>, IoError> {
    let mut levels: Vec<TowerLevel> = Vec::new();
    for (k, lj) in j.0.iter().enumerate() {
        let sub = Arc::new(TowerField {
            levels: levels.clone(),
        });
        let mut modulus = Vec::with_capacity(lj.modulus.len());
        for (i, ej) in lj.modulus.iter().enumerate() {
            let e = elem_from_json(ej, &sub, &format!("tower level {k} coefficient {i}"))?;
            modulus.push(e.rep().clone());
        }
        levels.push(TowerLevel {
            name: lj.name.clone(),
            modulus,
        });
    }
    Ok(Arc::new(TowerField { levels }))
}

/// Surface file: a map of monomial keys "i,j,k" (i+j+k = 6) to coefficient
/// strings, plus an optional tower description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub coefficients: BTreeMap<String, ElemJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerJson>,
}

fn exponent_key(e: &[u32; 3]) -> String {
    format!("{},{},{}", e[0], e[1], e[2])
}

fn exponent_from_key(key: &str) -> Result<[u32; 3], IoError> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != 3 {
        return Err(parse_err(key, "expected three comma-separated exponents"));
    }
    let mut e = [0u32; 3];
    for (i, p) in parts.iter().enumerate() {
        e[i] = p
            .trim()
            .parse::<u32>()
            .map_err(|err| parse_err(key, err))?;
    }
    Ok(e)
}

pub fn multipoly_to_json(f: &MultiPoly<TowerElement>) -> BTreeMap<String, ElemJson> {
    f.terms()
        .map(|(e, c)| (exponent_key(e), elem_to_json(c)))
        .collect()
}

pub fn multipoly_from_json(
    m: &BTreeMap<String, ElemJson>,
    ctx: &Arc<TowerField>,
) -> Result<MultiPoly<TowerElement>, IoError> {
    let mut out = MultiPoly::zero_poly();
    for (k, v) in m {
        let e = exponent_from_key(k)?;
        out.add_term(e, elem_from_json(v, ctx, k)?);
    }
    Ok(out)
}

pub fn surface_to_json(s: &K3DoubleCover<TowerElement>, tower: &Arc<TowerField>) -> SurfaceJson {
    SurfaceJson {
        coefficients: multipoly_to_json(s.f()),
        tower: if tower.depth() == 0 {
            None
        } else {
            Some(tower_to_json(tower))
        },
    }
}

pub fn surface_from_json(
    j: &SurfaceJson,
) -> Result<(K3DoubleCover<TowerElement>, Arc<TowerField>), IoError> {
    let tower = match &j.tower {
        None => TowerField::rationals(),
        Some(t) => tower_from_json(t)?,
    };
    let f = multipoly_from_json(&j.coefficients, &tower)?;
    let form = TernarySexticForm::new(f)
        .map_err(|e| parse_err("coefficients", e))?;
    Ok((K3DoubleCover::new(form), tower))
}

pub fn rational_surface_from_json(j: &SurfaceJson) -> Result<K3DoubleCover<Rational>, IoError> {
    let (s, tower) = surface_from_json(j)?;
    if tower.depth() != 0 {
        return Err(parse_err("tower", "expected a surface over Q"));
    }
    let f = s
        .f()
        .try_map_coeffs(|c| c.as_rational().ok_or(()))
        .map_err(|_| parse_err("coefficients", "non-rational coefficient"))?;
    Ok(K3DoubleCover::new(TernarySexticForm::new(f).unwrap()))
}

pub fn upoly_to_json(p: &UniPoly<TowerElement>) -> Vec<ElemJson> {
    p.coeffs().iter().map(elem_to_json).collect()
}

pub fn upoly_from_json(
    v: &[ElemJson],
    ctx: &Arc<TowerField>,
    key: &str,
) -> Result<UniPoly<TowerElement>, IoError> {
    let mut out = Vec::with_capacity(v.len());
    for e in v {
        out.push(elem_from_json(e, ctx, key)?);
    }
    Ok(UniPoly::from_coeffs(out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveJson {
    /// a1, a2, a3, a4, a6.
    pub coefficients: Vec<ElemJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerJson>,
}

pub fn curve_to_json(e: &WeierstrassCurve<TowerElement>, tower: &Arc<TowerField>) -> CurveJson {
    CurveJson {
        coefficients: [&e.a1, &e.a2, &e.a3, &e.a4, &e.a6]
            .into_iter()
            .map(elem_to_json)
            .collect(),
        tower: if tower.depth() == 0 {
            None
        } else {
            Some(tower_to_json(tower))
        },
    }
}

pub fn curve_from_json(
    j: &CurveJson,
) -> Result<(WeierstrassCurve<TowerElement>, Arc<TowerField>), IoError> {
    let tower = match &j.tower {
        None => TowerField::rationals(),
        Some(t) => tower_from_json(t)?,
    };
    if j.coefficients.len() != 5 {
        return Err(parse_err("coefficients", "expected [a1, a2, a3, a4, a6]"));
    }
    let c: Vec<TowerElement> = j
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, e)| elem_from_json(e, &tower, &format!("a{}", [1, 2, 3, 4, 6][i])))
        .collect::<Result<_, _>>()?;
    Ok((
        WeierstrassCurve::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()),
        tower,
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointJson {
    #[serde(default)]
    pub infinity: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<ElemJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerJson>,
}

pub fn ecpoint_to_json(p: &ECPoint<TowerElement>, tower: &Arc<TowerField>) -> PointJson {
    match p {
        ECPoint::Infinity => PointJson {
            infinity: true,
            coordinates: vec![],
            tower: if tower.depth() == 0 {
                None
            } else {
                Some(tower_to_json(tower))
            },
        },
        ECPoint::Affine(x, y) => PointJson {
            infinity: false,
            coordinates: vec![elem_to_json(x), elem_to_json(y)],
            tower: if tower.depth() == 0 {
                None
            } else {
                Some(tower_to_json(tower))
            },
        },
    }
}

pub fn ecpoint_from_json(
    j: &PointJson,
    default_tower: &Arc<TowerField>,
) -> Result<(ECPoint<TowerElement>, Arc<TowerField>), IoError> {
    let tower = match &j.tower {
        None => default_tower.clone(),
        Some(t) => tower_from_json(t)?,
    };
    if j.infinity {
        return Ok((ECPoint::Infinity, tower));
    }
    if j.coordinates.len() != 2 {
        return Err(parse_err("coordinates", "expected [x, y]"));
    }
    Ok((
        ECPoint::Affine(
            elem_from_json(&j.coordinates[0], &tower, "x")?,
            elem_from_json(&j.coordinates[1], &tower, "y")?,
        ),
        tower,
    ))
}

pub fn wp3_to_json(p: &WP3Point<TowerElement>) -> Vec<ElemJson> {
    [&p.x, &p.y, &p.z, &p.w].into_iter().map(elem_to_json).collect()
}

// ---------------------------------------------------------------------------
// Model maps.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatFnJson {
    pub num: BTreeMap<String, ElemJson>,
    pub den: BTreeMap<String, ElemJson>,
}

fn ratfn_to_json(f: &RatFn<TowerElement>) -> RatFnJson {
    RatFnJson {
        num: multipoly_to_json(&f.num),
        den: multipoly_to_json(&f.den),
    }
}

fn ratfn_from_json(j: &RatFnJson, ctx: &Arc<TowerField>) -> Result<RatFn<TowerElement>, IoError> {
    Ok(RatFn::new(
        multipoly_from_json(&j.num, ctx)?,
        multipoly_from_json(&j.den, ctx)?,
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelPointJson {
    pub kind: String,
    #[serde(default)]
    pub infinity: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<ElemJson>,
}

fn model_point_to_json(p: &ModelPoint<TowerElement>) -> ModelPointJson {
    match p {
        ModelPoint::Plane(q) => ModelPointJson {
            kind: "plane".into(),
            infinity: false,
            coordinates: vec![elem_to_json(&q.x), elem_to_json(&q.y), elem_to_json(&q.z)],
        },
        ModelPoint::Quartic(u, v) => ModelPointJson {
            kind: "quartic".into(),
            infinity: false,
            coordinates: vec![elem_to_json(u), elem_to_json(v)],
        },
        ModelPoint::Curve(ECPoint::Infinity) => ModelPointJson {
            kind: "curve".into(),
            infinity: true,
            coordinates: vec![],
        },
        ModelPoint::Curve(ECPoint::Affine(x, y)) => ModelPointJson {
            kind: "curve".into(),
            infinity: false,
            coordinates: vec![elem_to_json(x), elem_to_json(y)],
        },
    }
}

fn model_point_from_json(
    j: &ModelPointJson,
    ctx: &Arc<TowerField>,
) -> Result<ModelPoint<TowerElement>, IoError> {
    let coord = |i: usize| -> Result<TowerElement, IoError> {
        elem_from_json(
            j.coordinates
                .get(i)
                .ok_or_else(|| parse_err("model point", "missing coordinate"))?,
            ctx,
            "model point",
        )
    };
    match j.kind.as_str() {
        "plane" => Ok(ModelPoint::Plane(PlanePoint::new(
            coord(0)?,
            coord(1)?,
            coord(2)?,
        ))),
        "quartic" => Ok(ModelPoint::Quartic(coord(0)?, coord(1)?)),
        "curve" => {
            if j.infinity {
                Ok(ModelPoint::Curve(ECPoint::Infinity))
            } else {
                Ok(ModelPoint::Curve(ECPoint::Affine(coord(0)?, coord(1)?)))
            }
        }
        other => Err(parse_err("model point", format!("unknown kind {other}"))),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageJson {
    pub label: String,
    pub fwd_kind: String,
    pub fwd: Vec<RatFnJson>,
    pub bwd_kind: String,
    pub bwd: Vec<RatFnJson>,
    pub fwd_special: Vec<(ModelPointJson, ModelPointJson)>,
    pub bwd_special: Vec<(ModelPointJson, ModelPointJson)>,
}

fn kind_to_str(k: PointKind) -> String {
    match k {
        PointKind::Plane => "plane".into(),
        PointKind::Quartic => "quartic".into(),
        PointKind::Curve => "curve".into(),
    }
}

fn kind_from_str(s: &str) -> Result<PointKind, IoError> {
    match s {
        "plane" => Ok(PointKind::Plane),
        "quartic" => Ok(PointKind::Quartic),
        "curve" => Ok(PointKind::Curve),
        other => Err(parse_err("stage kind", other)),
    }
}

pub fn modelmap_to_json(m: &ModelMap<TowerElement>) -> Vec<StageJson> {
    m.stages
        .iter()
        .map(|s| StageJson {
            label: s.label.clone(),
            fwd_kind: kind_to_str(s.fwd_kind),
            fwd: s.fwd.iter().map(ratfn_to_json).collect(),
            bwd_kind: kind_to_str(s.bwd_kind),
            bwd: s.bwd.iter().map(ratfn_to_json).collect(),
            fwd_special: s
                .fwd_special
                .iter()
                .map(|(a, b)| (model_point_to_json(a), model_point_to_json(b)))
                .collect(),
            bwd_special: s
                .bwd_special
                .iter()
                .map(|(a, b)| (model_point_to_json(a), model_point_to_json(b)))
                .collect(),
        })
        .collect()
}

pub fn modelmap_from_json(
    v: &[StageJson],
    ctx: &Arc<TowerField>,
) -> Result<ModelMap<TowerElement>, IoError> {
    let mut stages = Vec::with_capacity(v.len());
    for s in v {
        stages.push(Stage {
            label: s.label.clone(),
            fwd_kind: kind_from_str(&s.fwd_kind)?,
            fwd: s
                .fwd
                .iter()
                .map(|f| ratfn_from_json(f, ctx))
                .collect::<Result<_, _>>()?,
            bwd_kind: kind_from_str(&s.bwd_kind)?,
            bwd: s
                .bwd
                .iter()
                .map(|f| ratfn_from_json(f, ctx))
                .collect::<Result<_, _>>()?,
            fwd_special: s
                .fwd_special
                .iter()
                .map(|(a, b)| Ok((model_point_from_json(a, ctx)?, model_point_from_json(b, ctx)?)))
                .collect::<Result<_, IoError>>()?,
            bwd_special: s
                .bwd_special
                .iter()
                .map(|(a, b)| Ok((model_point_from_json(a, ctx)?, model_point_from_json(b, ctx)?)))
                .collect::<Result<_, IoError>>()?,
        });
    }
    Ok(ModelMap { stages })
}

// ---------------------------------------------------------------------------
// Tangency data and certificates.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumJson {
    pub field: TowerJson,
    pub point: Vec<ElemJson>,
    pub tangent: Vec<ElemJson>,
    /// The three coordinate polynomials of the line parametrization.
    pub parametrization: Vec<Vec<ElemJson>>,
    pub restricted: Vec<ElemJson>,
    pub t0: ElemJson,
    pub route: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<i64>,
}

pub fn datum_to_json(d: &BranchTangencyDatum) -> DatumJson {
    let (route, y0) = match d.route {
        DatumRoute::AtInfinity => ("infinity".to_string(), None),
        DatumRoute::Affine { y0 } => ("affine".to_string(), Some(y0)),
    };
    DatumJson {
        field: tower_to_json(&d.field),
        point: vec![
            elem_to_json(&d.point.x),
            elem_to_json(&d.point.y),
            elem_to_json(&d.point.z),
        ],
        tangent: vec![
            elem_to_json(&d.tangent.a),
            elem_to_json(&d.tangent.b),
            elem_to_json(&d.tangent.c),
        ],
        parametrization: d.param.imgs.iter().map(upoly_to_json).collect(),
        restricted: upoly_to_json(&d.restricted),
        t0: elem_to_json(&d.t0),
        route,
        y0,
    }
}

pub fn datum_from_json(j: &DatumJson) -> Result<BranchTangencyDatum, IoError> {
    let field = tower_from_json(&j.field)?;
    let get = |v: &Vec<ElemJson>, i: usize, k: &str| -> Result<TowerElement, IoError> {
        elem_from_json(
            v.get(i).ok_or_else(|| parse_err(k, "missing entry"))?,
            &field,
            k,
        )
    };
    if j.parametrization.len() != 3 {
        return Err(parse_err("parametrization", "expected three polynomials"));
    }
    let route = match j.route.as_str() {
        "infinity" => DatumRoute::AtInfinity,
        "affine" => DatumRoute::Affine {
            y0: j.y0.ok_or_else(|| parse_err("y0", "missing for affine route"))?,
        },
        other => return Err(parse_err("route", other)),
    };
    Ok(BranchTangencyDatum {
        field: field.clone(),
        point: PlanePoint::new(
            get(&j.point, 0, "point")?,
            get(&j.point, 1, "point")?,
            get(&j.point, 2, "point")?,
        ),
        tangent: PlaneLine::new(
            get(&j.tangent, 0, "tangent")?,
            get(&j.tangent, 1, "tangent")?,
            get(&j.tangent, 2, "tangent")?,
        ),
        param: LineParam {
            imgs: [
                upoly_from_json(&j.parametrization[0], &field, "parametrization")?,
                upoly_from_json(&j.parametrization[1], &field, "parametrization")?,
                upoly_from_json(&j.parametrization[2], &field, "parametrization")?,
            ],
        },
        restricted: upoly_from_json(&j.restricted, &field, "restricted")?,
        t0: elem_from_json(&j.t0, &field, "t0")?,
        route,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonTorsionJson {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_n_r: Option<u64>,
}

pub fn nontorsion_to_json(c: &NonTorsionCert) -> NonTorsionJson {
    match c {
        NonTorsionCert::MazurQ => NonTorsionJson {
            method: "mazur".into(),
            p: None,
            q: None,
            n_p: None,
            n_q: None,
            l: None,
            exact: None,
            witness_r: None,
            witness_n_r: None,
        },
        NonTorsionCert::Reduction {
            p,
            q,
            n_p,
            n_q,
            l,
            exact,
        } => {
            let (exact_kind, wr, wnr) = match exact {
                ExactNonVanishing::ScalarMultiple => ("scalar-multiple".to_string(), None, None),
                ExactNonVanishing::ReductionWitness { r, n_r } => {
                    ("reduction-witness".to_string(), Some(*r), Some(*n_r))
                }
            };
            NonTorsionJson {
                method: "reduction".into(),
                p: Some(*p),
                q: Some(*q),
                n_p: Some(*n_p),
                n_q: Some(*n_q),
                l: Some(*l),
                exact: Some(exact_kind),
                witness_r: wr,
                witness_n_r: wnr,
            }
        }
    }
}

pub fn nontorsion_from_json(j: &NonTorsionJson) -> Result<NonTorsionCert, IoError> {
    match j.method.as_str() {
        "mazur" => Ok(NonTorsionCert::MazurQ),
        "reduction" => {
            let need = |o: Option<u64>, k: &str| o.ok_or_else(|| parse_err(k, "missing"));
            let exact = match j.exact.as_deref() {
                Some("scalar-multiple") => ExactNonVanishing::ScalarMultiple,
                Some("reduction-witness") => ExactNonVanishing::ReductionWitness {
                    r: need(j.witness_r, "witness_r")?,
                    n_r: need(j.witness_n_r, "witness_n_r")?,
                },
                other => return Err(parse_err("exact", format!("{other:?}"))),
            };
            Ok(NonTorsionCert::Reduction {
                p: need(j.p, "p")?,
                q: need(j.q, "q")?,
                n_p: need(j.n_p, "n_p")?,
                n_q: need(j.n_q, "n_q")?,
                l: need(j.l, "l")?,
                exact,
            })
        }
        other => Err(parse_err("method", other)),
    }
}

/// The single-document certificate format shared by both pipelines.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    pub surface: SurfaceJson,
    pub datum: DatumJson,
    /// Bound-12 only: the α and the extension data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sqrt_adjoined: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower_l: Option<TowerJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sqrt_h_alpha: Option<ElemJson>,
    /// Rational only: the rescale s = h(0) and the rescaled surface.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rescale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rescaled: Option<SurfaceJson>,
    pub quartic: Vec<ElemJson>,
    pub weierstrass: Vec<ElemJson>,
    pub model_map: Vec<StageJson>,
    pub q_point: PointJson,
    pub nontorsion: NonTorsionJson,
}

pub fn certificate_to_json(c: &Certificate) -> CertificateJson {
    match c {
        Certificate::Bound12(c) => {
            let l = &c.tower_l;
            CertificateJson {
                kind: "bound12".into(),
                surface: surface_to_json(&c.surface, &c.base),
                datum: datum_to_json(&c.datum),
                alpha: Some(c.alpha),
                sqrt_adjoined: Some(c.sqrt_adjoined),
                tower_l: Some(tower_to_json(l)),
                sqrt_h_alpha: Some(elem_to_json(&c.sqrt_h_alpha)),
                rescale: None,
                rescaled: None,
                quartic: upoly_to_json(&c.quartic.h),
                weierstrass: [&c.weierstrass.a1, &c.weierstrass.a2, &c.weierstrass.a3, &c.weierstrass.a4, &c.weierstrass.a6]
                    .into_iter()
                    .map(elem_to_json)
                    .collect(),
                model_map: modelmap_to_json(&c.map),
                q_point: ecpoint_to_json(&c.q_point, l),
                nontorsion: nontorsion_to_json(&c.nontorsion),
            }
        }
        Certificate::Rational(c) => {
            let lift = |x: &Rational| TowerElement::from_rational(x.clone());
            let q = TowerField::rationals();
            CertificateJson {
                kind: "rational".into(),
                surface: surface_to_json(&c.surface.to_tower(), &q),
                datum: datum_to_json(&c.datum),
                alpha: None,
                sqrt_adjoined: None,
                tower_l: None,
                sqrt_h_alpha: None,
                rescale: Some(rational_to_string(&c.rescale)),
                rescaled: Some(surface_to_json(&c.rescaled.to_tower(), &q)),
                quartic: upoly_to_json(&c.quartic.h.map_coeffs(&lift)),
                weierstrass: [&c.weierstrass.a1, &c.weierstrass.a2, &c.weierstrass.a3, &c.weierstrass.a4, &c.weierstrass.a6]
                    .into_iter()
                    .map(|x| elem_to_json(&lift(x)))
                    .collect(),
                model_map: modelmap_to_json(&c.map.map_scalars(&lift)),
                q_point: ecpoint_to_json(&c.q_point.map_scalars(&lift), &q),
                nontorsion: nontorsion_to_json(&c.nontorsion),
            }
        }
    }
}

pub fn certificate_from_json(j: &CertificateJson) -> Result<Certificate, IoError> {
    let datum = datum_from_json(&j.datum)?;
    match j.kind.as_str() {
        "bound12" => {
            let (surface, base) = surface_from_json(&j.surface)?;
            let tower_l = tower_from_json(
                j.tower_l
                    .as_ref()
                    .ok_or_else(|| parse_err("tower_l", "missing"))?,
            )?;
            let quartic_h = upoly_from_json(&j.quartic, &datum.field, "quartic")?;
            let w: Vec<TowerElement> = j
                .weierstrass
                .iter()
                .map(|e| elem_from_json(e, &tower_l, "weierstrass"))
                .collect::<Result<_, _>>()?;
            if w.len() != 5 {
                return Err(parse_err("weierstrass", "expected five coefficients"));
            }
            let (q_point, _) = ecpoint_from_json(&j.q_point, &tower_l)?;
            Ok(Certificate::Bound12(ExtensionCertificate {
                surface,
                base,
                datum,
                quartic: crate::genus1::quartic::QuarticGenus1Curve { h: quartic_h },
                alpha: j.alpha.ok_or_else(|| parse_err("alpha", "missing"))?,
                sqrt_adjoined: j
                    .sqrt_adjoined
                    .ok_or_else(|| parse_err("sqrt_adjoined", "missing"))?,
                sqrt_h_alpha: elem_from_json(
                    j.sqrt_h_alpha
                        .as_ref()
                        .ok_or_else(|| parse_err("sqrt_h_alpha", "missing"))?,
                    &tower_l,
                    "sqrt_h_alpha",
                )?,
                tower_l: tower_l.clone(),
                weierstrass: WeierstrassCurve::new(
                    w[0].clone(),
                    w[1].clone(),
                    w[2].clone(),
                    w[3].clone(),
                    w[4].clone(),
                ),
                map: modelmap_from_json(&j.model_map, &tower_l)?,
                q_point,
                nontorsion: nontorsion_from_json(&j.nontorsion)?,
            }))
        }
        "rational" => {
            let surface = rational_surface_from_json(&j.surface)?;
            let rescaled = rational_surface_from_json(
                j.rescaled
                    .as_ref()
                    .ok_or_else(|| parse_err("rescaled", "missing"))?,
            )?;
            let rescale = rational_from_string(
                j.rescale
                    .as_deref()
                    .ok_or_else(|| parse_err("rescale", "missing"))?,
            )
            .map_err(|e| parse_err("rescale", e))?;
            let q = TowerField::rationals();
            let to_rat = |e: &TowerElement, k: &str| -> Result<Rational, IoError> {
                e.as_rational()
                    .ok_or_else(|| parse_err(k, "expected a rational"))
            };
            let quartic_h = upoly_from_json(&j.quartic, &q, "quartic")?
                .try_map_coeffs(|c| to_rat(c, "quartic"))?;
            let w: Vec<Rational> = j
                .weierstrass
                .iter()
                .map(|e| elem_from_json(e, &q, "weierstrass").and_then(|x| to_rat(&x, "weierstrass")))
                .collect::<Result<_, _>>()?;
            if w.len() != 5 {
                return Err(parse_err("weierstrass", "expected five coefficients"));
            }
            let (qp, _) = ecpoint_from_json(&j.q_point, &q)?;
            let q_point = match qp {
                ECPoint::Infinity => ECPoint::Infinity,
                ECPoint::Affine(x, y) => {
                    ECPoint::Affine(to_rat(&x, "q_point")?, to_rat(&y, "q_point")?)
                }
            };
            let map_t = modelmap_from_json(&j.model_map, &q)?;
            let map = map_t.map_scalars(&|c: &TowerElement| {
                c.as_rational().expect("rational certificate map")
            });
            Ok(Certificate::Rational(InfinitePointsCertificate {
                surface,
                rescale,
                rescaled,
                datum,
                quartic: crate::genus1::quartic::QuarticGenus1Curve { h: quartic_h },
                weierstrass: WeierstrassCurve::new(
                    w[0].clone(),
                    w[1].clone(),
                    w[2].clone(),
                    w[3].clone(),
                    w[4].clone(),
                ),
                map,
                q_point,
                nontorsion: nontorsion_from_json(&j.nontorsion)?,
            }))
        }
        other => Err(parse_err("kind", other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};
    use crate::pipeline::{certify_rational, verify_certificate};
    use crate::surface::SearchCaps;

    #[test]
    fn elem_round_trip() {
        use crate::tower::extend_tower;
        let m = UniPoly::from_coeffs(vec![
            TowerElement::from_int(1),
            TowerElement::from_int(0),
            TowerElement::from_int(1),
        ]);
        let qi = extend_tower(&TowerField::rationals(), &m, "i").unwrap();
        let i = TowerElement::generator(&qi);
        let z = TowerElement::from_rational(ratio(3, 7)) + TowerElement::from_int(2) * i;
        let j = elem_to_json(&z);
        let back = elem_from_json(&j, &qi, "z").unwrap();
        assert_eq!(back, z);
        let tj = tower_to_json(&qi);
        let qi2 = tower_from_json(&tj).unwrap();
        assert_eq!(*qi2, *qi);
    }

    #[test]
    fn certificate_round_trip() {
        let x0 = crate::family::build_xh(&crate::family::HPolynomial::zero());
        let cert = certify_rational(&x0, SearchCaps::default()).unwrap();
        let wrapped = Certificate::Rational(cert);
        let j = certificate_to_json(&wrapped);
        let text = serde_json::to_string_pretty(&j).unwrap();
        let parsed: CertificateJson = serde_json::from_str(&text).unwrap();
        let back = certificate_from_json(&parsed).unwrap();
        let (ok, reasons) = verify_certificate(&back);
        assert!(ok, "reloaded certificate failed verification: {reasons:?}");
        // Byte-determinism of serialization.
        let j2 = certificate_to_json(&back);
        assert_eq!(text, serde_json::to_string_pretty(&j2).unwrap());
        let _ = rat(0);
    }
}
