//! Long Weierstrass models y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆ over an
//! exact field, with the chord-tangent group law for general a₁,…,a₆.

use crate::field::Field;
use crate::fq::{Fq, FqCtx};
use std::sync::Arc;

#[derive(Clone, PartialEq, Debug)]
pub struct WeierstrassCurve<F: Field> {
    pub a1: F,
    pub a2: F,
    pub a3: F,
    pub a4: F,
    pub a6: F,
}

#[derive(Clone, PartialEq, Debug)]
pub enum ECPoint<F: Field> {
    Infinity,
    Affine(F, F),
}

impl<F: Field> ECPoint<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn map_scalars<G: Field>(&self, m: &impl Fn(&F) -> G) -> ECPoint<G> {
        match self {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => ECPoint::Affine(m(x), m(y)),
        }
    }
}

impl<F: Field> WeierstrassCurve<F> {
    pub fn new(a1: F, a2: F, a3: F, a4: F, a6: F) -> Self {
        WeierstrassCurve { a1, a2, a3, a4, a6 }
    }

    pub fn map_scalars<G: Field>(&self, m: &impl Fn(&F) -> G) -> WeierstrassCurve<G> {
        WeierstrassCurve::new(
            m(&self.a1),
            m(&self.a2),
            m(&self.a3),
            m(&self.a4),
            m(&self.a6),
        )
    }

    pub fn b_invariants(&self) -> (F, F, F, F) {
        let two = F::from_i64(2);
        let four = F::from_i64(4);
        let b2 = self.a1.clone() * self.a1.clone() + four.clone() * self.a2.clone();
        let b4 = two.clone() * self.a4.clone() + self.a1.clone() * self.a3.clone();
        let b6 = self.a3.clone() * self.a3.clone() + four.clone() * self.a6.clone();
        let b8 = self.a1.clone() * self.a1.clone() * self.a6.clone()
            + four * self.a2.clone() * self.a6.clone()
            - self.a1.clone() * self.a3.clone() * self.a4.clone()
            + self.a2.clone() * self.a3.clone() * self.a3.clone()
            - self.a4.clone() * self.a4.clone();
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> F {
        let (b2, b4, b6, b8) = self.b_invariants();
        let e8 = F::from_i64(8);
        let e9 = F::from_i64(9);
        let e27 = F::from_i64(27);
        -(b2.clone() * b2.clone() * b8.clone())
            - e8 * b4.clone() * b4.clone() * b4.clone()
            - e27 * b6.clone() * b6.clone()
            + e9 * b2 * b4 * b6
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.discriminant().is_zero()
    }

    pub fn on_curve(&self, p: &ECPoint<F>) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine(x, y) => {
                let lhs = y.clone() * y.clone()
                    + self.a1.clone() * x.clone() * y.clone()
                    + self.a3.clone() * y.clone();
                let rhs = x.clone() * x.clone() * x.clone()
                    + self.a2.clone() * x.clone() * x.clone()
                    + self.a4.clone() * x.clone()
                    + self.a6.clone();
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, p: &ECPoint<F>) -> ECPoint<F> {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => ECPoint::Affine(
                x.clone(),
                -(y.clone()) - self.a1.clone() * x.clone() - self.a3.clone(),
            ),
        }
    }

    pub fn add(&self, p: &ECPoint<F>, q: &ECPoint<F>) -> ECPoint<F> {
        use ECPoint::*;
        match (p, q) {
            (Infinity, _) => q.clone(),
            (_, Infinity) => p.clone(),
            (Affine(x1, y1), Affine(x2, y2)) => {
                if x1 == x2 {
                    let neg_y1 =
                        -(y1.clone()) - self.a1.clone() * x1.clone() - self.a3.clone();
                    if *y2 == neg_y1 {
                        return Infinity;
                    }
                }
                let (lambda, nu) = if x1 != x2 {
                    let d = (x2.clone() - x1.clone()).inv().unwrap();
                    let l = (y2.clone() - y1.clone()) * d.clone();
                    let n = (y1.clone() * x2.clone() - y2.clone() * x1.clone()) * d;
                    (l, n)
                } else {
                    // Tangent line; the denominator is nonzero since P ≠ -P.
                    let den = F::from_i64(2) * y1.clone()
                        + self.a1.clone() * x1.clone()
                        + self.a3.clone();
                    let d = den.inv().unwrap();
                    let three = F::from_i64(3);
                    let two = F::from_i64(2);
                    let l = (three * x1.clone() * x1.clone()
                        + two.clone() * self.a2.clone() * x1.clone()
                        + self.a4.clone()
                        - self.a1.clone() * y1.clone())
                        * d.clone();
                    let n = (-(x1.clone() * x1.clone() * x1.clone())
                        + self.a4.clone() * x1.clone()
                        + two * self.a6.clone()
                        - self.a3.clone() * y1.clone())
                        * d;
                    (l, n)
                };
                let x3 = lambda.clone() * lambda.clone() + self.a1.clone() * lambda.clone()
                    - self.a2.clone()
                    - x1.clone()
                    - x2.clone();
                let y3 = -((lambda + self.a1.clone()) * x3.clone()) - nu - self.a3.clone();
                Affine(x3, y3)
            }
        }
    }

    /// [m]P by double-and-add; [0]P = O, [−m]P = −[m]P.
    pub fn scalar_mul(&self, p: &ECPoint<F>, m: i64) -> ECPoint<F> {
        if m == 0 {
            return ECPoint::Infinity;
        }
        let base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut m = m.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        let mut cur = base;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &cur);
            }
            m >>= 1;
            if m > 0 {
                cur = self.add(&cur, &cur);
            }
        }
        acc
    }

    /// Like `scalar_mul` but aborts when the coordinate representation
    /// exceeds a size budget (used by the exact non-torsion check: torsion
    /// points stay small, non-torsion points blow up).
    pub fn scalar_mul_guarded(
        &self,
        p: &ECPoint<F>,
        m: i64,
        size: &impl Fn(&ECPoint<F>) -> usize,
        budget: usize,
    ) -> Option<ECPoint<F>> {
        if m == 0 {
            return Some(ECPoint::Infinity);
        }
        let base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut m = m.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        let mut cur = base;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &cur);
            }
            m >>= 1;
            if m > 0 {
                cur = self.add(&cur, &cur);
            }
            if size(&acc) > budget || size(&cur) > budget {
                return None;
            }
        }
        Some(acc)
    }
}

/// Order of a point in E(F_q) by repeated addition (desk scale).
pub fn order_in_fq(curve: &WeierstrassCurve<Fq>, p: &ECPoint<Fq>) -> u64 {
    if p.is_infinity() {
        return 1;
    }
    let mut acc = p.clone();
    let mut n = 1u64;
    while !acc.is_infinity() {
        acc = curve.add(&acc, p);
        n += 1;
        assert!(n < 1 << 32, "runaway order computation");
    }
    n
}

/// #E(F_q) for odd q by the quadratic-character sum after completing the
/// square: y → y − (a₁x + a₃)/2 turns the curve into v² = g(x).
pub fn curve_order_fq(curve: &WeierstrassCurve<Fq>, ctx: &Arc<FqCtx>) -> u64 {
    let half = ctx.from_u64(2).inv().unwrap();
    let q = ctx
        .order()
        .to_u64_digits()
        .first()
        .copied()
        .expect("field too large to enumerate");
    assert!(ctx.order().bits() <= 40, "field too large to enumerate");
    let mut count = 1u64; // the point at infinity
    for x in ctx.all_elements() {
        let t = curve.a1.clone() * x.clone() + curve.a3.clone();
        let g = x.clone() * x.clone() * x.clone()
            + curve.a2.clone() * x.clone() * x.clone()
            + curve.a4.clone() * x.clone()
            + curve.a6.clone()
            + t.clone() * t * half.clone() * half.clone();
        count += (1 + g.quad_character()) as u64;
    }
    let _ = q;
    count
}
