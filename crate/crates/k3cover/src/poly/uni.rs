//! Univariate polynomials over an exact ring, lowest degree first.

use crate::field::{Field, Ring};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("({c:?})*t"),
                _ => format!("({c:?})*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<R: Ring> UniPoly<R> {
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: R) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![R::zero(), R::one()])
    }

    /// The monomial c·t^k.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree with deg(0) = -1, convenient for size arguments.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Coefficient-wise map that may fail (used for reductions mod p).
    pub fn try_map_coeffs<S: Ring, E>(
        &self,
        f: impl Fn(&R) -> Result<S, E>,
    ) -> Result<UniPoly<S>, E> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(f(c)?);
        }
        Ok(UniPoly::from_coeffs(out))
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::from_coeffs(vec![]);
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let mut n = R::zero();
            for _ in 0..i {
                n = n + R::one();
            }
            out.push(n * c.clone());
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(R::one());
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// p(q(t)).
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::from_coeffs(vec![]);
        for c in self.coeffs.iter().rev() {
            acc = acc * q.clone() + Self::constant(c.clone());
        }
        acc
    }

    /// p(t + c).
    pub fn shift_arg(&self, c: &R) -> Self {
        self.compose(&Self::from_coeffs(vec![c.clone(), R::one()]))
    }

    /// t^deg · p(1/t): the reversed coefficient vector.
    pub fn reverse(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::from_coeffs(v)
    }

    /// Pseudo-division: lc(d)^(deg n - deg d + 1) · n = q·d + r with deg r < deg d.
    pub fn pseudo_div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let dd = d.degree().unwrap();
        if self.deg_i() < dd as i64 {
            return (Self::from_coeffs(vec![]), self.clone());
        }
        let e = (self.degree().unwrap() - dd + 1) as usize;
        let lc = d.lc();
        let mut rem = self.clone();
        let mut quo = Self::from_coeffs(vec![]);
        let mut steps = 0;
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let t = Self::monomial(rem.lc(), dr - dd);
            quo = quo.scale_ref(&lc) + t.clone();
            rem = rem.scale_ref(&lc) - t * d.clone();
            steps += 1;
        }
        // Pad remaining lc-powers so the identity holds with exponent e.
        for _ in steps..e {
            quo = quo.scale_ref(&lc);
            rem = rem.scale_ref(&lc);
        }
        (quo, rem)
    }

    fn scale_ref(&self, c: &R) -> Self {
        self.scale(c)
    }

    /// Exact division over the ring; `None` if not an exact divisor.
    pub fn exact_div_poly(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::from_coeffs(vec![]));
        }
        let dd = d.degree().unwrap();
        let mut rem = self.clone();
        let mut quo_coeffs = vec![R::zero(); self.coeffs.len()];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                return None;
            }
            let c = rem.lc().exact_div(&d.lc())?;
            quo_coeffs[dr - dd] = c.clone();
            rem = rem - Self::monomial(c, dr - dd) * d.clone();
        }
        Some(Self::from_coeffs(quo_coeffs))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lc_inv = d.lc().inv().unwrap();
        let mut rem = self.clone();
        let mut quo = Self::from_coeffs(vec![]);
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let c = rem.lc() * lc_inv.clone();
            let t = Self::monomial(c, dr - dd);
            quo = quo + t.clone();
            rem = rem - t * d.clone();
        }
        (quo, rem)
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns (g, s, t) with s·a + t·b = g, g monic (or zero).
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut s0, mut s1) = (Self::constant(F::one()), Self::from_coeffs(vec![]));
        let (mut t0, mut t1) = (Self::from_coeffs(vec![]), Self::constant(F::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0 - q.clone() * s1.clone();
            let t2 = t0 - q * t1.clone();
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).is_constant()
    }
}

impl<R: Ring> Zero for UniPoly<R> {
    fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for UniPoly<R> {
    fn one() -> Self {
        UniPoly::constant(R::one())
    }
}

impl<R: Ring> Add for UniPoly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(R::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(R::zero);
            out.push(a + b);
        }
        Self::from_coeffs(out)
    }
}

impl<R: Ring> Sub for UniPoly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Neg for UniPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<R: Ring> Mul for UniPoly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::from_coeffs(vec![]);
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out)
    }
}

impl<R: Ring> Ring for UniPoly<R> {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.exact_div_poly(other)
    }
}
