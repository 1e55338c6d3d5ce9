//! Finite fields F_{p^k} with odd characteristic.
//!
//! Elements are coefficient vectors modulo a monic irreducible polynomial
//! over F_p (for k = 1 the modulus is simply `t`). Context-free integer
//! constants exist so that `Zero`/`One` from generic code work; they are
//! exact integers until they first meet a contextual element. Do not build
//! field data out of bare constants — go through the `FqCtx` constructors.

use crate::field::{Field, Rational, Ring};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Field context: characteristic and the defining modulus over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FqCtx {
    p: u64,
    /// Monic, lowest degree first, length k+1. For F_p itself this is `t`.
    modulus: Vec<u64>,
}

impl fmt::Debug for FqCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree())
    }
}

impl FqCtx {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Arc<FqCtx> {
        assert!(p >= 3 && p % 2 == 1, "characteristic must be odd");
        Arc::new(FqCtx {
            p,
            modulus: vec![0, 1],
        })
    }

    /// F_{p^k} defined by a monic polynomial over F_p, lowest degree first.
    /// The caller is responsible for irreducibility.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Arc<FqCtx> {
        assert!(p >= 3 && p % 2 == 1, "characteristic must be odd");
        assert!(modulus.len() >= 2);
        assert_eq!(*modulus.last().unwrap(), 1, "modulus must be monic");
        assert!(modulus.iter().all(|&c| c < p));
        Arc::new(FqCtx { p, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// q = p^k as a big integer (can exceed u64 for large extensions).
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }

    pub fn zero(self: &Arc<Self>) -> Fq {
        Fq::El(self.clone(), vec![0; self.degree()])
    }

    pub fn one(self: &Arc<Self>) -> Fq {
        self.from_u64(1)
    }

    pub fn from_u64(self: &Arc<Self>, n: u64) -> Fq {
        let mut c = vec![0; self.degree()];
        c[0] = n % self.p;
        Fq::El(self.clone(), c)
    }

    pub fn from_bigint(self: &Arc<Self>, n: &BigInt) -> Fq {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        self.from_u64(r.to_u64().expect("residue fits u64"))
    }

    /// Reduction of a rational; `None` when p divides the denominator.
    pub fn from_rational(self: &Arc<Self>, r: &Rational) -> Option<Fq> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        let inv = den.inv()?;
        Some(num * inv)
    }

    /// The class of `t`, a root of the modulus (a generator for k > 1).
    pub fn gen(self: &Arc<Self>) -> Fq {
        let k = self.degree();
        let mut c = vec![0; k];
        if k == 1 {
            // F_p: t ≡ 0.
        } else {
            c[1] = 1;
        }
        Fq::El(self.clone(), c)
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<u64>) -> Fq {
        let k = self.degree();
        assert!(coeffs.len() <= k);
        let mut c = coeffs;
        c.iter_mut().for_each(|x| *x %= self.p);
        c.resize(k, 0);
        Fq::El(self.clone(), c)
    }

    /// All elements, in lexicographic coefficient order. Only for small fields.
    pub fn all_elements(self: &Arc<Self>) -> Vec<Fq> {
        let k = self.degree();
        let q = self.order().to_u64().expect("field too large to enumerate");
        let mut out = Vec::with_capacity(q as usize);
        let mut idx = vec![0u64; k];
        loop {
            out.push(Fq::El(self.clone(), idx.clone()));
            let mut j = 0;
            loop {
                if j == k {
                    return out;
                }
                idx[j] += 1;
                if idx[j] < self.p {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }
}

/// An element of F_{p^k}, or a context-free integer constant.
#[derive(Clone)]
pub enum Fq {
    Int(i64),
    El(Arc<FqCtx>, Vec<u64>),
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fq::Int(n) => write!(f, "{n}"),
            Fq::El(ctx, c) => {
                if ctx.degree() == 1 {
                    write!(f, "{}", c[0])
                } else {
                    write!(f, "{c:?}")
                }
            }
        }
    }
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Reduce a coefficient vector modulo the monic ctx modulus, in place.
fn reduce_vec(v: &mut Vec<u64>, ctx: &FqCtx) {
    let k = ctx.degree();
    let p = ctx.p;
    while v.len() > k {
        let top = v.pop().unwrap();
        if top != 0 {
            let d = v.len() - k;
            for (i, &m) in ctx.modulus.iter().take(k).enumerate() {
                let t = mulm(top, m, p);
                v[d + i] = subm(v[d + i], t, p);
            }
        }
    }
    v.resize(k, 0);
}

impl Fq {
    fn promote(&self, ctx: &Arc<FqCtx>) -> Vec<u64> {
        match self {
            Fq::El(c, v) => {
                assert!(c == ctx, "mixed finite-field contexts");
                v.clone()
            }
            Fq::Int(n) => {
                let p = ctx.p as i64;
                let mut r = n % p;
                if r < 0 {
                    r += p;
                }
                let mut v = vec![0; ctx.degree()];
                v[0] = r as u64;
                v
            }
        }
    }

    pub fn ctx(&self) -> Option<&Arc<FqCtx>> {
        match self {
            Fq::Int(_) => None,
            Fq::El(c, _) => Some(c),
        }
    }

    pub fn coeffs(&self) -> Option<&[u64]> {
        match self {
            Fq::Int(_) => None,
            Fq::El(_, v) => Some(v),
        }
    }

    /// For prime-field elements, the residue in [0, p).
    pub fn residue(&self) -> Option<u64> {
        match self {
            Fq::El(ctx, v) if ctx.degree() == 1 => Some(v[0]),
            _ => None,
        }
    }

    fn binop(&self, other: &Self, f: impl Fn(&[u64], &[u64], &FqCtx) -> Vec<u64>) -> Self {
        match (self, other) {
            (Fq::Int(a), Fq::Int(b)) => unreachable!("handled by caller: {a} {b}"),
            _ => {
                let ctx = self.ctx().or(other.ctx()).unwrap().clone();
                let a = self.promote(&ctx);
                let b = other.promote(&ctx);
                Fq::El(ctx.clone(), f(&a, &b, &ctx))
            }
        }
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let ctx = self.ctx().expect("pow_big needs a contextual element");
        let mut base = self.clone();
        let mut acc = ctx.one();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc * base.clone();
            }
            if i + 1 < e.bits() {
                base = base.clone() * base;
            }
        }
        acc
    }

    pub fn pow(&self, e: u64) -> Self {
        match self {
            Fq::Int(_) => {
                assert!(e <= 3, "context-free powers are restricted to tiny exponents");
                let mut acc = Fq::Int(1);
                for _ in 0..e {
                    acc = acc * self.clone();
                }
                acc
            }
            _ => self.pow_big(&BigUint::from(e)),
        }
    }

    /// Quadratic character: 1 for nonzero squares, -1 for non-squares, 0 for 0.
    pub fn quad_character(&self) -> i32 {
        let ctx = self.ctx().expect("character needs a contextual element");
        if self.is_zero() {
            return 0;
        }
        let e = (ctx.order() - BigUint::one()) >> 1;
        let r = self.pow_big(&e);
        if r.is_one() {
            1
        } else {
            -1
        }
    }

    /// Canonical total order (context elements by coefficient vector).
    pub fn canon_cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Fq::Int(a), Fq::Int(b)) => a.cmp(b),
            _ => {
                let ctx = self.ctx().or(other.ctx()).unwrap().clone();
                let mut a = self.promote(&ctx);
                let mut b = other.promote(&ctx);
                a.reverse();
                b.reverse();
                a.cmp(&b)
            }
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Fq::Int(a), Fq::Int(b)) => a == b,
            _ => {
                let ctx = self.ctx().or(other.ctx()).unwrap().clone();
                self.promote(&ctx) == other.promote(&ctx)
            }
        }
    }
}

impl Eq for Fq {}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        if let (Fq::Int(a), Fq::Int(b)) = (&self, &rhs) {
            return Fq::Int(a.checked_add(*b).expect("constant overflow"));
        }
        self.binop(&rhs, |a, b, ctx| {
            a.iter()
                .zip(b)
                .map(|(&x, &y)| addm(x, y, ctx.p))
                .collect()
        })
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        if let (Fq::Int(a), Fq::Int(b)) = (&self, &rhs) {
            return Fq::Int(a.checked_sub(*b).expect("constant overflow"));
        }
        self.binop(&rhs, |a, b, ctx| {
            a.iter()
                .zip(b)
                .map(|(&x, &y)| subm(x, y, ctx.p))
                .collect()
        })
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        if let (Fq::Int(a), Fq::Int(b)) = (&self, &rhs) {
            return Fq::Int(a.checked_mul(*b).expect("constant overflow"));
        }
        self.binop(&rhs, |a, b, ctx| {
            let mut prod = vec![0u64; a.len() + b.len()];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = addm(prod[i + j], mulm(x, y, ctx.p), ctx.p);
                }
            }
            let mut v = prod;
            reduce_vec(&mut v, ctx);
            v
        })
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        match self {
            Fq::Int(a) => Fq::Int(-a),
            Fq::El(ctx, v) => {
                let p = ctx.p;
                Fq::El(
                    ctx,
                    v.into_iter().map(|x| if x == 0 { 0 } else { p - x }).collect(),
                )
            }
        }
    }
}

impl Zero for Fq {
    fn zero() -> Self {
        Fq::Int(0)
    }
    fn is_zero(&self) -> bool {
        match self {
            Fq::Int(a) => *a == 0,
            Fq::El(_, v) => v.iter().all(|&x| x == 0),
        }
    }
}

impl One for Fq {
    fn one() -> Self {
        Fq::Int(1)
    }
    fn is_one(&self) -> bool {
        match self {
            Fq::Int(a) => *a == 1,
            Fq::El(_, v) => v[0] == 1 && v[1..].iter().all(|&x| x == 0),
        }
    }
}

impl Ring for Fq {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Field for Fq {
    fn inv(&self) -> Option<Self> {
        if let Fq::Int(n) = self {
            // Only units invert without a field context.
            return match n {
                0 => None,
                1 | -1 => Some(Fq::Int(*n)),
                _ => panic!("cannot invert the context-free constant {n}"),
            };
        }
        let ctx = self.ctx().expect("inversion needs a contextual element").clone();
        if self.is_zero() {
            return None;
        }
        // Extended Euclid over F_p[t] against the modulus.
        let p = ctx.p();
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        let mut r0 = ctx.modulus().to_vec();
        let mut r1 = self.promote(&ctx);
        trim(&mut r1);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        let inv_fp = |a: u64| -> u64 {
            // Fermat inversion in F_p.
            let mut acc = 1u64;
            let mut b = a;
            let mut e = p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulm(acc, b, p);
                }
                b = mulm(b, b, p);
                e >>= 1;
            }
            acc
        };
        while !r1.is_empty() {
            // r0 = q*r1 + r2 by long division.
            let mut rem = r0.clone();
            let mut q: Vec<u64> = vec![0; rem.len().saturating_sub(r1.len()) + 1];
            let lc_inv = inv_fp(*r1.last().unwrap());
            while rem.len() >= r1.len() && !rem.is_empty() {
                let d = rem.len() - r1.len();
                let c = mulm(*rem.last().unwrap(), lc_inv, p);
                if c != 0 {
                    q[d] = c;
                    for (i, &m) in r1.iter().enumerate() {
                        rem[d + i] = subm(rem[d + i], mulm(c, m, p), p);
                    }
                }
                trim(&mut rem);
                if rem.len() < r1.len() {
                    break;
                }
            }
            trim(&mut rem);
            // s2 = s0 - q*s1
            let mut qs1 = vec![0u64; q.len() + s1.len()];
            for (i, &a) in q.iter().enumerate() {
                for (j, &b) in s1.iter().enumerate() {
                    qs1[i + j] = addm(qs1[i + j], mulm(a, b, p), p);
                }
            }
            let mut s2 = vec![0u64; s0.len().max(qs1.len())];
            for (i, &a) in s0.iter().enumerate() {
                s2[i] = a;
            }
            for (i, &b) in qs1.iter().enumerate() {
                s2[i] = subm(s2[i], b, p);
            }
            trim(&mut s2);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd, a nonzero constant since the modulus is irreducible.
        assert_eq!(r0.len(), 1, "modulus not irreducible or zero input");
        let g_inv = inv_fp(r0[0]);
        let mut v: Vec<u64> = s0.iter().map(|&c| mulm(c, g_inv, p)).collect();
        v.resize(ctx.degree(), 0);
        Some(Fq::El(ctx, v))
    }

    fn from_i64(n: i64) -> Self {
        Fq::Int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f5 = FqCtx::prime(5);
        let a = f5.from_u64(3);
        let b = f5.from_u64(4);
        assert_eq!(a.clone() + b.clone(), f5.from_u64(2));
        assert_eq!(a.clone() * b.clone(), f5.from_u64(2));
        assert_eq!(a.inv().unwrap(), f5.from_u64(2));
        assert_eq!(-b, f5.from_u64(1));
    }

    #[test]
    fn f9_field_axioms() {
        // F_9 = F_3[t]/(t^2+1).
        let f9 = FqCtx::extension(3, vec![1, 0, 1]);
        let els = f9.all_elements();
        assert_eq!(els.len(), 9);
        for a in &els {
            if !a.is_zero() {
                let inv = a.inv().unwrap();
                assert!((a.clone() * inv).is_one());
            }
            for b in &els {
                for c in &els {
                    let l = (a.clone() + b.clone()) * c.clone();
                    let r = a.clone() * c.clone() + b.clone() * c.clone();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn quad_character_values() {
        let f7 = FqCtx::prime(7);
        let squares: Vec<u64> = (1..7).map(|x| x * x % 7).collect();
        for a in 1..7u64 {
            let expected = if squares.contains(&a) { 1 } else { -1 };
            assert_eq!(f7.from_u64(a).quad_character(), expected);
        }
        assert_eq!(f7.from_u64(0).quad_character(), 0);
    }

    #[test]
    fn int_constants_promote() {
        let f5 = FqCtx::prime(5);
        let a = Fq::from_i64(-1) * f5.from_u64(2);
        assert_eq!(a, f5.from_u64(3));
        assert!(Fq::from_i64(0).is_zero());
    }
}
