//! Number-field towers: ℚ extended by a chain of monic irreducible
//! polynomials, with exact arithmetic, Trager-style factorization over the
//! tower, and reduction embeddings into finite fields.
//!
//! An element is a nested polynomial representation in the tower
//! generators, always fully reduced modulo every level modulus, so equality
//! is structural. A context-free element (no tower handle) is a rational
//! constant and promotes on contact, mirroring the finite-field design.

use crate::field::{Field, Rational, Ring};
use crate::fq::{Fq, FqCtx};
use crate::poly::factor_q::factor_rational;
use crate::poly::squarefree::squarefree_decomposition;
use crate::poly::{resultant, Embed, FactorField, SimpleExtension, UniPoly};
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Nested canonical representation. `Ext` entries live one level down;
/// trailing zeros are trimmed, so zero at a positive level is `Ext([])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rep {
    Rat(Rational),
    Ext(Vec<Rep>),
}

impl Rep {
    fn zero(depth: usize) -> Rep {
        if depth == 0 {
            Rep::Rat(Rational::zero())
        } else {
            Rep::Ext(vec![])
        }
    }

    fn from_rat(r: &Rational, depth: usize) -> Rep {
        if depth == 0 {
            Rep::Rat(r.clone())
        } else if r.is_zero() {
            Rep::Ext(vec![])
        } else {
            Rep::Ext(vec![Rep::from_rat(r, depth - 1)])
        }
    }

    fn is_zero_rep(&self) -> bool {
        match self {
            Rep::Rat(r) => r.is_zero(),
            Rep::Ext(v) => v.is_empty(),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Rep::Rat(r) => Some(r.clone()),
            Rep::Ext(v) => match v.len() {
                0 => Some(Rational::zero()),
                1 => v[0].as_rational(),
                _ => None,
            },
        }
    }

    /// Promote a representation from a prefix tower of depth `from` to depth `to`.
    fn lift(&self, from: usize, to: usize) -> Rep {
        assert!(from <= to);
        let mut r = self.clone();
        for _ in from..to {
            r = if r.is_zero_rep() {
                Rep::Ext(vec![])
            } else {
                Rep::Ext(vec![r])
            };
        }
        r
    }

    /// Canonical total order for deterministic sweeps.
    pub fn canon_cmp(&self, other: &Rep) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Rep::Rat(a), Rep::Rat(b)) => a.cmp(b),
            (Rep::Rat(_), Rep::Ext(_)) => Ordering::Less,
            (Rep::Ext(_), Rep::Rat(_)) => Ordering::Greater,
            (Rep::Ext(a), Rep::Ext(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| {
                    for (x, y) in a.iter().zip(b.iter()).rev() {
                        let c = x.canon_cmp(y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    Ordering::Equal
                }),
        }
    }
}

/// One extension step: a named generator and its monic modulus over the
/// sub-tower (coefficients at depth = level index).
#[derive(Clone, PartialEq, Debug)]
pub struct TowerLevel {
    pub name: String,
    /// Monic, lowest degree first, length degree+1; entries are reps one
    /// level below this one.
    pub modulus: Vec<Rep>,
}

impl TowerLevel {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct TowerField {
    pub levels: Vec<TowerLevel>,
}

impl fmt::Display for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levels.is_empty() {
            return write!(f, "Q");
        }
        let names: Vec<&str> = self.levels.iter().map(|l| l.name.as_str()).collect();
        write!(f, "Q({})", names.join(", "))
    }
}

impl TowerField {
    pub fn rationals() -> Arc<TowerField> {
        Arc::new(TowerField { levels: vec![] })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn total_degree(&self) -> usize {
        self.levels.iter().map(|l| l.degree()).product()
    }

    pub fn prefix(&self, depth: usize) -> Arc<TowerField> {
        Arc::new(TowerField {
            levels: self.levels[..depth].to_vec(),
        })
    }

    fn is_prefix_of(&self, other: &TowerField) -> bool {
        self.levels.len() <= other.levels.len()
            && self.levels[..] == other.levels[..self.levels.len()]
    }
}

/// Reduce a coefficient vector (entries at depth `levels.len()-1`) modulo
/// the monic top-level modulus, then trim.
fn reduce_top(v: &mut Vec<Rep>, levels: &[TowerLevel]) {
    let top = levels.last().expect("reduce needs a level");
    let d = top.degree();
    let sub = &levels[..levels.len() - 1];
    while v.len() > d {
        let c = v.pop().unwrap();
        if c.is_zero_rep() {
            continue;
        }
        let k = v.len() - d;
        for (i, m) in top.modulus.iter().take(d).enumerate() {
            let t = rep_mul(&c, m, sub);
            v[k + i] = rep_sub(&v[k + i], &t, sub);
        }
    }
    while v.last().map_or(false, |c| c.is_zero_rep()) {
        v.pop();
    }
}

fn rep_add(a: &Rep, b: &Rep, levels: &[TowerLevel]) -> Rep {
    match (a, b) {
        (Rep::Rat(x), Rep::Rat(y)) => Rep::Rat(x + y),
        _ => {
            let depth = levels.len();
            assert!(depth > 0, "depth-0 elements must be rational");
            let va = as_vec(a, depth);
            let vb = as_vec(b, depth);
            let sub = &levels[..depth - 1];
            let n = va.len().max(vb.len());
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let x = va.get(i).cloned().unwrap_or_else(|| Rep::zero(depth - 1));
                let y = vb.get(i).cloned().unwrap_or_else(|| Rep::zero(depth - 1));
                out.push(rep_add(&x, &y, sub));
            }
            while out.last().map_or(false, |c| c.is_zero_rep()) {
                out.pop();
            }
            Rep::Ext(out)
        }
    }
}

fn rep_neg(a: &Rep) -> Rep {
    match a {
        Rep::Rat(x) => Rep::Rat(-x),
        Rep::Ext(v) => Rep::Ext(v.iter().map(rep_neg).collect()),
    }
}

fn rep_sub(a: &Rep, b: &Rep, levels: &[TowerLevel]) -> Rep {
    rep_add(a, &rep_neg(b), levels)
}

/// View a rep as a coefficient vector at the given depth (entries one down).
fn as_vec(a: &Rep, depth: usize) -> Vec<Rep> {
    assert!(depth > 0);
    match a {
        Rep::Rat(r) => {
            if r.is_zero() {
                vec![]
            } else {
                vec![Rep::from_rat(r, depth - 1)]
            }
        }
        Rep::Ext(v) => v.clone(),
    }
}

fn rep_mul(a: &Rep, b: &Rep, levels: &[TowerLevel]) -> Rep {
    match (a, b) {
        (Rep::Rat(x), Rep::Rat(y)) => Rep::Rat(x * y),
        _ => {
            let depth = levels.len();
            assert!(depth > 0, "depth-0 elements must be rational");
            let va = as_vec(a, depth);
            let vb = as_vec(b, depth);
            if va.is_empty() || vb.is_empty() {
                return Rep::Ext(vec![]);
            }
            let sub = &levels[..depth - 1];
            let mut out = vec![Rep::zero(depth - 1); va.len() + vb.len() - 1];
            for (i, x) in va.iter().enumerate() {
                if x.is_zero_rep() {
                    continue;
                }
                for (j, y) in vb.iter().enumerate() {
                    let t = rep_mul(x, y, sub);
                    out[i + j] = rep_add(&out[i + j], &t, sub);
                }
            }
            reduce_top(&mut out, levels);
            Rep::Ext(out)
        }
    }
}

fn rep_inv(a: &Rep, levels: &[TowerLevel]) -> Option<Rep> {
    if a.is_zero_rep() {
        return None;
    }
    match a {
        Rep::Rat(x) => Some(Rep::Rat(x.recip())),
        Rep::Ext(_) => {
            let depth = levels.len();
            let sub_ctx = Arc::new(TowerField {
                levels: levels[..depth - 1].to_vec(),
            });
            let wrap = |r: &Rep| TowerElement::with_ctx_opt(&sub_ctx, r.clone());
            let a_poly =
                UniPoly::from_coeffs(as_vec(a, depth).iter().map(wrap).collect::<Vec<_>>());
            let m_poly = UniPoly::from_coeffs(
                levels[depth - 1].modulus.iter().map(wrap).collect::<Vec<_>>(),
            );
            let (g, s, _) = a_poly.extended_gcd(&m_poly);
            assert!(
                g.degree() == Some(0),
                "modulus not irreducible: gcd has positive degree"
            );
            let ginv = g.coeff(0).inv()?;
            let s = s.scale(&ginv);
            let mut v: Vec<Rep> = s.coeffs().iter().map(|e| e.rep.clone()).collect();
            reduce_top(&mut v, levels);
            Some(Rep::Ext(v))
        }
    }
}

/// An element of a tower field (or a context-free rational constant).
#[derive(Clone)]
pub struct TowerElement {
    ctx: Option<Arc<TowerField>>,
    rep: Rep,
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(r: &Rep, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match r {
                Rep::Rat(x) => write!(f, "{}", crate::field::rational_to_string(x)),
                Rep::Ext(v) => {
                    write!(f, "[")?;
                    for (i, e) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        go(e, &names[..names.len() - 1], f)?;
                    }
                    write!(f, "]")
                }
            }
        }
        let names: Vec<String> = self
            .ctx
            .iter()
            .flat_map(|c| c.levels.iter().map(|l| l.name.clone()))
            .collect();
        go(&self.rep, &names, f)
    }
}

impl TowerElement {
    pub fn from_rational(r: Rational) -> Self {
        TowerElement {
            ctx: None,
            rep: Rep::Rat(r),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(crate::field::rat(n))
    }

    pub fn with_ctx(ctx: &Arc<TowerField>, rep: Rep) -> Self {
        if ctx.depth() == 0 {
            let r = rep.as_rational().expect("depth-0 rep must be rational");
            return Self::from_rational(r);
        }
        TowerElement {
            ctx: Some(ctx.clone()),
            rep,
        }
    }

    fn with_ctx_opt(ctx: &Arc<TowerField>, rep: Rep) -> Self {
        Self::with_ctx(ctx, rep)
    }

    /// The top generator of a tower.
    pub fn generator(ctx: &Arc<TowerField>) -> Self {
        let depth = ctx.depth();
        assert!(depth > 0);
        let one = Rep::from_rat(&Rational::one(), depth - 1);
        Self::with_ctx(ctx, Rep::Ext(vec![Rep::zero(depth - 1), one]))
    }

    /// Generator of level `k` (0-based), promoted to the full tower.
    pub fn generator_at(ctx: &Arc<TowerField>, k: usize) -> Self {
        let depth = ctx.depth();
        assert!(k < depth);
        let one = Rep::from_rat(&Rational::one(), k);
        let rep = Rep::Ext(vec![Rep::zero(k), one]).lift(k + 1, depth);
        Self::with_ctx(ctx, rep)
    }

    pub fn ctx(&self) -> Option<&Arc<TowerField>> {
        self.ctx.as_ref()
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.rep.as_rational()
    }

    /// Promote into a (super-)tower; panics if the element does not embed.
    pub fn promote(&self, ctx: &Arc<TowerField>) -> Self {
        match &self.ctx {
            None => {
                let r = self.rep.as_rational().unwrap();
                Self::with_ctx(ctx, Rep::from_rat(&r, ctx.depth()))
            }
            Some(c) => {
                assert!(
                    c.is_prefix_of(ctx),
                    "element tower {c:?} is not a prefix of {ctx:?}"
                );
                Self::with_ctx(ctx, self.rep.lift(c.depth(), ctx.depth()))
            }
        }
    }

    fn unified(&self, other: &Self) -> Option<Arc<TowerField>> {
        match (&self.ctx, &other.ctx) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                if Arc::ptr_eq(a, b) || a == b {
                    Some(a.clone())
                } else if a.is_prefix_of(b) {
                    Some(b.clone())
                } else if b.is_prefix_of(a) {
                    Some(a.clone())
                } else {
                    panic!("incompatible towers: {a:?} vs {b:?}")
                }
            }
        }
    }

    fn binop(&self, other: &Self, f: impl Fn(&Rep, &Rep, &[TowerLevel]) -> Rep) -> Self {
        match self.unified(other) {
            None => {
                let (Rep::Rat(_), Rep::Rat(_)) = (&self.rep, &other.rep) else {
                    unreachable!()
                };
                TowerElement {
                    ctx: None,
                    rep: f(&self.rep, &other.rep, &[]),
                }
            }
            Some(ctx) => {
                let a = self.promote(&ctx);
                let b = other.promote(&ctx);
                let rep = f(&a.rep, &b.rep, &ctx.levels);
                Self::with_ctx(&ctx, rep)
            }
        }
    }

    pub fn canon_cmp(&self, other: &Self) -> std::cmp::Ordering {
        match self.unified(other) {
            None => self.rep.canon_cmp(&other.rep),
            Some(ctx) => self.promote(&ctx).rep.canon_cmp(&other.promote(&ctx).rep),
        }
    }

    /// Total bit size of the representation (numerators and denominators),
    /// used to guard exact computations against coordinate blowup.
    pub fn size_bits(&self) -> usize {
        fn go(r: &Rep) -> usize {
            match r {
                Rep::Rat(x) => (x.numer().bits() + x.denom().bits()) as usize,
                Rep::Ext(v) => v.iter().map(go).sum(),
            }
        }
        go(&self.rep)
    }
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        match self.unified(other) {
            None => self.rep == other.rep,
            Some(ctx) => self.promote(&ctx).rep == other.promote(&ctx).rep,
        }
    }
}

impl std::ops::Add for TowerElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.binop(&rhs, rep_add)
    }
}

impl std::ops::Sub for TowerElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.binop(&rhs, rep_sub)
    }
}

impl std::ops::Mul for TowerElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.binop(&rhs, rep_mul)
    }
}

impl std::ops::Neg for TowerElement {
    type Output = Self;
    fn neg(self) -> Self {
        TowerElement {
            ctx: self.ctx,
            rep: rep_neg(&self.rep),
        }
    }
}

impl Zero for TowerElement {
    fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero_rep()
    }
}

impl One for TowerElement {
    fn one() -> Self {
        Self::from_rational(Rational::one())
    }
    fn is_one(&self) -> bool {
        self.rep.as_rational().map_or(false, |r| r.is_one())
    }
}

impl Ring for TowerElement {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Field for TowerElement {
    fn inv(&self) -> Option<Self> {
        match &self.ctx {
            None => self
                .rep
                .as_rational()
                .unwrap()
                .inv()
                .map(Self::from_rational),
            Some(ctx) => {
                let rep = rep_inv(&self.rep, &ctx.levels)?;
                Some(Self::with_ctx(ctx, rep))
            }
        }
    }

    fn from_i64(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// Errors from tower construction and reduction.
#[derive(Debug, thiserror::Error)]
pub enum TowerError {
    #[error("modulus must be monic")]
    NotMonic,
    #[error("modulus degree must be at least 2 (adjoining a rational is the identity)")]
    DegreeTooSmall,
    #[error("modulus is reducible; a nontrivial factor is {factor:?}")]
    Reducible { factor: UniPoly<TowerElement> },
    #[error("bad reduction at p = {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("no root chain modulo p = {p} at residue degree {max_degree}")]
    NoRootChain { p: u64, max_degree: usize },
}

/// Adjoins a root of `m` to the tower under `m`'s coefficients.
/// `m` must be monic of degree ≥ 2 and irreducible over the tower;
/// a reducible modulus yields an error carrying a nontrivial factor.
pub fn extend_tower(
    base: &Arc<TowerField>,
    m: &UniPoly<TowerElement>,
    name: &str,
) -> Result<Arc<TowerField>, TowerError> {
    if m.lc().inv().map_or(true, |_| !m.lc().is_one()) {
        return Err(TowerError::NotMonic);
    }
    let Some(d) = m.degree() else {
        return Err(TowerError::DegreeTooSmall);
    };
    if d < 2 {
        return Err(TowerError::DegreeTooSmall);
    }
    let m_based = m.map_coeffs(|c| c.promote(base));
    let factors = TowerElement::factor_monic(&m_based.map_coeffs(|c| anchor(c, base)));
    if factors.len() != 1 || factors[0].1 != 1 {
        let f = &factors[0].0;
        return Err(TowerError::Reducible { factor: f.clone() });
    }
    let depth = base.depth();
    let modulus: Vec<Rep> = m_based
        .coeffs()
        .iter()
        .map(|c| c.promote(base).rep.clone())
        .collect();
    let mut levels = base.levels.clone();
    levels.push(TowerLevel {
        name: name.to_string(),
        modulus,
    });
    let _ = depth;
    Ok(Arc::new(TowerField { levels }))
}

/// Ensures at least one coefficient carries the intended field context, so
/// that factorization happens over `base` rather than over ℚ.
fn anchor(c: &TowerElement, base: &Arc<TowerField>) -> TowerElement {
    if base.depth() == 0 {
        c.clone()
    } else {
        c.promote(base)
    }
}

// ---------------------------------------------------------------------------
// Trager factorization over the tower.
// ---------------------------------------------------------------------------

fn poly_ctx(f: &UniPoly<TowerElement>) -> Option<Arc<TowerField>> {
    let mut best: Option<Arc<TowerField>> = None;
    for c in f.coeffs() {
        if let Some(ctx) = c.ctx() {
            match &best {
                None => best = Some(ctx.clone()),
                Some(b) if b.is_prefix_of(ctx) => best = Some(ctx.clone()),
                _ => {}
            }
        }
    }
    best
}

/// Norm of a squarefree monic polynomial from the top tower level down one
/// level: Res_t(m(t), g(x, t)).
fn norm_down(
    g: &UniPoly<TowerElement>,
    ctx: &Arc<TowerField>,
) -> UniPoly<TowerElement> {
    let depth = ctx.depth();
    let sub = ctx.prefix(depth - 1);
    type Sub = UniPoly<TowerElement>;
    // m(t) as a polynomial in t whose coefficients are constants of Sub[x].
    let m_t: UniPoly<Sub> = UniPoly::from_coeffs(
        ctx.levels[depth - 1]
            .modulus
            .iter()
            .map(|r| UniPoly::constant(TowerElement::with_ctx(&sub, r.clone())))
            .collect(),
    );
    // g as a polynomial in t with coefficients in Sub[x].
    let top_deg = ctx.levels[depth - 1].degree();
    let mut t_coeffs: Vec<Vec<TowerElement>> = vec![vec![]; top_deg];
    for (xi, c) in g.coeffs().iter().enumerate() {
        let v = as_vec(&c.promote(ctx).rep, depth);
        for (ti, r) in v.iter().enumerate() {
            let e = TowerElement::with_ctx(&sub, r.clone());
            let col = &mut t_coeffs[ti];
            while col.len() <= xi {
                col.push(TowerElement::zero());
            }
            col[xi] = e;
        }
    }
    let g_t: UniPoly<Sub> =
        UniPoly::from_coeffs(t_coeffs.into_iter().map(UniPoly::from_coeffs).collect());
    if g_t.degree().map_or(true, |d| d == 0) {
        // g has coefficients in the sub-tower already: norm is g^deg(m).
        let base: Sub = if g_t.is_zero() {
            UniPoly::zero()
        } else {
            g_t.coeff(0)
        };
        return base.pow(ctx.levels[depth - 1].degree());
    }
    resultant(&m_t, &g_t)
}

fn factor_squarefree_tower(
    g: &UniPoly<TowerElement>,
    ctx: &Arc<TowerField>,
) -> Vec<UniPoly<TowerElement>> {
    let depth = ctx.depth();
    if depth == 0 {
        return factor_rational(&g.map_coeffs(|c| c.as_rational().unwrap()))
            .into_iter()
            .map(|(f, m)| {
                assert_eq!(m, 1);
                f.map_coeffs(|c| TowerElement::from_rational(c.clone()))
            })
            .collect();
    }
    if g.degree() == Some(1) {
        return vec![g.monic()];
    }
    let theta = TowerElement::generator(ctx);
    let sub = ctx.prefix(depth - 1);
    for shift in shift_sweep() {
        let s = TowerElement::from_int(shift);
        // g(x - s*theta)
        let x_shift = UniPoly::from_coeffs(vec![
            -(s.clone() * theta.clone()),
            TowerElement::one(),
        ]);
        let gs = g.monic().compose(&x_shift);
        let norm = norm_down(&gs, ctx);
        if norm.is_zero() {
            continue;
        }
        let norm = norm.monic();
        let norm_anchored = norm.map_coeffs(|c| anchor(c, &sub));
        if !norm_anchored.is_squarefree() {
            continue;
        }
        let sub_factors = factor_squarefree_tower(&norm_anchored, &sub);
        let mut out = Vec::new();
        let mut rem = gs.clone();
        for nf in sub_factors {
            let nf_up = nf.map_coeffs(|c| c.promote(ctx));
            let h = rem.gcd(&nf_up);
            if h.degree().map_or(false, |d| d >= 1) {
                rem = rem.exact_div_poly(&h).unwrap();
                // Undo the shift: factor of g is h(x + s*theta).
                let x_unshift = UniPoly::from_coeffs(vec![
                    s.clone() * theta.clone(),
                    TowerElement::one(),
                ]);
                out.push(h.compose(&x_unshift).monic());
            }
        }
        assert!(
            rem.degree() == Some(0),
            "norm factorization did not exhaust the polynomial"
        );
        out.sort_by(|a, b| cmp_tower_poly(a, b));
        return out;
    }
    unreachable!("shift sweep is unbounded")
}

fn shift_sweep() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
}

pub fn cmp_tower_poly(a: &UniPoly<TowerElement>, b: &UniPoly<TowerElement>) -> std::cmp::Ordering {
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

impl FactorField for TowerElement {
    /// Factors over the deepest tower context found among the coefficients
    /// (over ℚ when all coefficients are context-free constants).
    fn factor_monic(f: &UniPoly<Self>) -> Vec<(UniPoly<Self>, u32)> {
        assert!(!f.is_zero());
        let ctx = poly_ctx(f);
        match ctx {
            None => factor_rational(&f.map_coeffs(|c| c.as_rational().unwrap()))
                .into_iter()
                .map(|(g, m)| (g.map_coeffs(|c| TowerElement::from_rational(c.clone())), m))
                .collect(),
            Some(ctx) => {
                let f = f.map_coeffs(|c| c.promote(&ctx));
                let mut out = Vec::new();
                for (part, mult) in squarefree_decomposition(&f) {
                    for irr in factor_squarefree_tower(&part, &ctx) {
                        out.push((irr, mult));
                    }
                }
                out.sort_by(|a, b| cmp_tower_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
                out
            }
        }
    }
}

impl SimpleExtension for Rational {
    type Ext = TowerElement;

    fn adjoin_root(m: &UniPoly<Self>) -> (Self::Ext, Embed<Self, Self::Ext>) {
        let m_t = m.map_coeffs(|c| TowerElement::from_rational(c.clone()));
        let ctx = extend_tower(&TowerField::rationals(), &m_t, "y0").expect("irreducible modulus");
        let root = TowerElement::generator(&ctx);
        (
            root,
            Arc::new(|c: &Rational| TowerElement::from_rational(c.clone())),
        )
    }
}

impl SimpleExtension for TowerElement {
    type Ext = TowerElement;

    fn adjoin_root(m: &UniPoly<Self>) -> (Self::Ext, Embed<Self, Self::Ext>) {
        let base = poly_ctx(m).unwrap_or_else(TowerField::rationals);
        let name = format!("g{}", base.depth() + 1);
        let ctx = extend_tower(&base, m, &name).expect("irreducible modulus");
        let root = TowerElement::generator(&ctx);
        let ctx2 = ctx.clone();
        (root, Arc::new(move |c: &TowerElement| c.promote(&ctx2)))
    }
}

/// A square root of `c` in its own field, if one exists (canonical choice).
pub fn tower_sqrt(c: &TowerElement) -> Option<TowerElement> {
    if c.is_zero() {
        return Some(TowerElement::zero());
    }
    let poly = UniPoly::from_coeffs(vec![-c.clone(), TowerElement::zero(), TowerElement::one()]);
    let mut roots = TowerElement::field_roots(&poly);
    roots.sort_by(|a, b| a.canon_cmp(b));
    roots.into_iter().next()
}

// ---------------------------------------------------------------------------
// Reduction of a tower into a finite field.
// ---------------------------------------------------------------------------

/// A ring embedding of the p-integral part of a tower into F_{p^k},
/// determined by a root chain of the reduced level moduli.
pub struct TowerEmbedding {
    pub p: u64,
    pub field: Arc<FqCtx>,
    /// Images of the level generators, in tower order.
    pub generator_images: Vec<Fq>,
}

impl TowerEmbedding {
    pub fn residue_degree(&self) -> usize {
        self.field.degree()
    }

    /// Maps an element; fails on p in a denominator.
    pub fn map(&self, e: &TowerElement) -> Result<Fq, TowerError> {
        self.map_rep(e.rep(), e.ctx().map_or(0, |c| c.depth()))
    }

    fn map_rep(&self, r: &Rep, depth: usize) -> Result<Fq, TowerError> {
        match r {
            Rep::Rat(x) => self.field.from_rational(x).ok_or(TowerError::BadReduction {
                p: self.p,
                reason: format!("p divides the denominator of {x}"),
            }),
            Rep::Ext(v) => {
                assert!(depth >= 1);
                let g = &self.generator_images[depth - 1];
                let mut acc = self.field.zero();
                for c in v.iter().rev() {
                    acc = acc * g.clone() + self.map_rep(c, depth - 1)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Builds an embedding of the tower into some F_{p^k} by chasing roots of
/// the reduced moduli, extending the residue field as needed. Deterministic:
/// minimal factors and minimal roots are chosen at each level.
pub fn tower_embed_mod_p(tower: &Arc<TowerField>, p: u64) -> Result<TowerEmbedding, TowerError> {
    if p < 3 || p % 2 == 0 || !crate::poly::factor_q::is_small_prime(p) {
        return Err(TowerError::BadReduction {
            p,
            reason: "p must be an odd prime".into(),
        });
    }
    let mut emb = TowerEmbedding {
        p,
        field: FqCtx::prime(p),
        generator_images: vec![],
    };
    for (k, level) in tower.levels.iter().enumerate() {
        // Reduce the modulus with the images found so far.
        let mut coeffs = Vec::with_capacity(level.modulus.len());
        for r in &level.modulus {
            coeffs.push(emb.map_rep(r, k)?);
        }
        let reduced = UniPoly::from_coeffs(coeffs);
        if reduced.degree() != Some(level.degree()) {
            return Err(TowerError::BadReduction {
                p,
                reason: "modulus degree drops".into(),
            });
        }
        let factors = crate::poly::factor_fq::factor_fq(&reduced);
        let minimal = factors
            .iter()
            .min_by(|a, b| crate::poly::factor_fq::cmp_poly(&a.0, &b.0))
            .unwrap()
            .0
            .clone();
        if minimal.degree() == Some(1) {
            emb.generator_images.push(-minimal.coeff(0));
        } else {
            let (root, lift) = Fq::adjoin_root(&minimal);
            emb.field = root.ctx().unwrap().clone();
            emb.generator_images = emb.generator_images.iter().map(|g| lift(g)).collect();
            emb.generator_images.push(root);
        }
    }
    Ok(emb)
}

/// Sweeps odd primes from 5 upward looking for an embedding with the given
/// residue degree bound; skips bad reduction.
pub fn sweep_embeddings(
    tower: &Arc<TowerField>,
    max_residue_degree: usize,
    prime_cap: u64,
) -> Vec<TowerEmbedding> {
    let mut out = Vec::new();
    for p in (5..=prime_cap).filter(|&p| crate::poly::factor_q::is_small_prime(p)) {
        if let Ok(e) = tower_embed_mod_p(tower, p) {
            if e.residue_degree() <= max_residue_degree {
                out.push(e);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn qi() -> Arc<TowerField> {
        // Q(i): t^2 + 1.
        let m = UniPoly::from_coeffs(vec![
            TowerElement::from_int(1),
            TowerElement::from_int(0),
            TowerElement::from_int(1),
        ]);
        extend_tower(&TowerField::rationals(), &m, "i").unwrap()
    }

    #[test]
    fn gaussian_arithmetic() {
        let ctx = qi();
        let i = TowerElement::generator(&ctx);
        assert_eq!(i.clone() * i.clone(), TowerElement::from_int(-1));
        let z = TowerElement::from_int(3) + TowerElement::from_int(2) * i.clone(); // 3+2i
        let w = z.inv().unwrap();
        assert!((z * w).is_one());
        assert_eq!(ctx.total_degree(), 2);
    }

    #[test]
    fn extend_rejects_degenerate_moduli() {
        // t - 5: degree too small.
        let m = UniPoly::from_coeffs(vec![TowerElement::from_int(-5), TowerElement::from_int(1)]);
        assert!(matches!(
            extend_tower(&TowerField::rationals(), &m, "a"),
            Err(TowerError::DegreeTooSmall)
        ));
        // t^2 - 1 is reducible; error carries a factor.
        let m = UniPoly::from_coeffs(vec![
            TowerElement::from_int(-1),
            TowerElement::from_int(0),
            TowerElement::from_int(1),
        ]);
        match extend_tower(&TowerField::rationals(), &m, "a") {
            Err(TowerError::Reducible { factor }) => {
                assert_eq!(factor.degree(), Some(1));
            }
            other => panic!("expected Reducible, got {other:?}"),
        }
    }

    #[test]
    fn degree_12_tower() {
        // Q(2^(1/6)) then sqrt(3): total degree 12.
        let m = UniPoly::from_coeffs(vec![
            TowerElement::from_int(-2),
            TowerElement::zero(),
            TowerElement::zero(),
            TowerElement::zero(),
            TowerElement::zero(),
            TowerElement::zero(),
            TowerElement::from_int(1),
        ]);
        let k6 = extend_tower(&TowerField::rationals(), &m, "c").unwrap();
        let m2 = UniPoly::from_coeffs(vec![
            TowerElement::from_int(-3).promote(&k6),
            TowerElement::zero(),
            TowerElement::from_int(1),
        ]);
        let k12 = extend_tower(&k6, &m2, "s").unwrap();
        assert_eq!(k12.total_degree(), 12);
        let c = TowerElement::generator_at(&k12, 0);
        let s = TowerElement::generator_at(&k12, 1);
        assert_eq!(c.clone() * c.clone() * c.clone() * c.clone() * c.clone() * c.clone(),
            TowerElement::from_int(2).promote(&k12));
        assert_eq!(s.clone() * s.clone(), TowerElement::from_int(3).promote(&k12));
        let z = (c + s).inv().unwrap();
        assert!(!z.is_zero());
    }

    #[test]
    fn factor_over_gaussian_integers() {
        let ctx = qi();
        let i = TowerElement::generator(&ctx);
        // x^2 + 1 = (x - i)(x + i) over Q(i).
        let f = UniPoly::from_coeffs(vec![
            TowerElement::from_int(1).promote(&ctx),
            TowerElement::zero(),
            TowerElement::from_int(1),
        ]);
        let fs = TowerElement::factor_monic(&f);
        assert_eq!(fs.len(), 2);
        for (g, m) in &fs {
            assert_eq!(*m, 1);
            assert_eq!(g.degree(), Some(1));
            let root = -g.coeff(0);
            assert!(root == i || root == -i.clone());
        }
        // x^2 - 2 stays irreducible over Q(i).
        let g = UniPoly::from_coeffs(vec![
            TowerElement::from_int(-2).promote(&ctx),
            TowerElement::zero(),
            TowerElement::from_int(1),
        ]);
        assert!(TowerElement::is_irreducible(&g));
    }

    #[test]
    fn sqrt_detection() {
        let ctx = qi();
        let i = TowerElement::generator(&ctx);
        let minus_one = TowerElement::from_int(-1).promote(&ctx);
        let r = tower_sqrt(&minus_one).unwrap();
        assert!(r == i || r == -i);
        assert!(tower_sqrt(&TowerElement::from_int(2).promote(&ctx)).is_none());
        assert_eq!(
            tower_sqrt(&TowerElement::from_rational(ratio(9, 4))),
            Some(TowerElement::from_rational(ratio(-3, 2)))
        );
    }

    #[test]
    fn embeddings_mod_p() {
        // Q -> F_5 identity on reduced rationals.
        let e = tower_embed_mod_p(&TowerField::rationals(), 5).unwrap();
        assert_eq!(e.residue_degree(), 1);
        assert_eq!(
            e.map(&TowerElement::from_rational(ratio(1, 2))).unwrap(),
            FqCtx::prime(5).from_u64(3)
        );

        // Q(i) with p = 5: i -> 2 (the minimal root).
        let ctx = qi();
        let e5 = tower_embed_mod_p(&ctx, 5).unwrap();
        assert_eq!(e5.residue_degree(), 1);
        let img = e5.map(&TowerElement::generator(&ctx)).unwrap();
        // A root of t^2+1: 2 or 3 mod 5; the canonical factor choice gives 3.
        assert!((img.clone() * img.clone() + e5.field.one()).is_zero());
        assert_eq!(img, FqCtx::prime(5).from_u64(3));

        // Q(i) with p = 3: residue degree 2 (t^2+1 irreducible over F_3).
        let e3 = tower_embed_mod_p(&ctx, 3).unwrap();
        assert_eq!(e3.residue_degree(), 2);
        let i9 = e3.map(&TowerElement::generator(&ctx)).unwrap();
        assert!((i9.clone() * i9 + e3.field.one()).is_zero());

        // Bad reduction: denominator divisible by p.
        assert!(e5.map(&TowerElement::from_rational(ratio(1, 5))).is_err());
    }

    #[test]
    fn embedding_is_homomorphism() {
        use rand::{Rng, SeedableRng};
        let ctx = qi();
        let e = tower_embed_mod_p(&ctx, 13).unwrap();
        let i = TowerElement::generator(&ctx);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = TowerElement::from_int(rng.gen_range(-20..20))
                + TowerElement::from_int(rng.gen_range(-20..20)) * i.clone();
            let b = TowerElement::from_int(rng.gen_range(-20..20))
                + TowerElement::from_int(rng.gen_range(-20..20)) * i.clone();
            let sum = e.map(&(a.clone() + b.clone())).unwrap();
            let prod = e.map(&(a.clone() * b.clone())).unwrap();
            assert_eq!(sum, e.map(&a).unwrap() + e.map(&b).unwrap());
            assert_eq!(prod, e.map(&a).unwrap() * e.map(&b).unwrap());
        }
    }

    #[test]
    fn rational_embedding_in_tower() {
        let ctx = qi();
        let half = TowerElement::from_rational(ratio(1, 2)).promote(&ctx);
        assert_eq!(half.as_rational(), Some(ratio(1, 2)));
        assert_eq!(half.clone() + half, TowerElement::from_int(1));
        let _ = rat(0);
    }
}
