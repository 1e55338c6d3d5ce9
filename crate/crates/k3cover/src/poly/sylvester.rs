//! Resultants and discriminants via Sylvester matrices.
//!
//! The determinant is computed with the Bareiss fraction-free elimination,
//! which stays inside the coefficient ring (entries may themselves be
//! polynomials). `resultant(p, q) = 0` iff p and q share a root over the
//! algebraic closure, provided neither leading coefficient vanishes.

use super::uni::UniPoly;
use crate::field::{Field, Ring};
use num_traits::Zero;

/// Bareiss determinant over any ring with exact division.
pub fn bareiss_det<R: Ring>(matrix: &[Vec<R>]) -> R {
    let n = matrix.len();
    if n == 0 {
        return R::one();
    }
    let mut m: Vec<Vec<R>> = matrix.to_vec();
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = t
                    .exact_div(&prev)
                    .expect("Bareiss division is exact by Sylvester's identity");
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Sylvester resultant eliminating the variable of two univariate
/// polynomials. Convention fixed by `resultant(x-a, x-b) = b - a`.
pub fn resultant<R: Ring>(p: &UniPoly<R>, q: &UniPoly<R>) -> R {
    assert!(!p.is_zero() && !q.is_zero(), "resultant of zero polynomial");
    let m = p.degree().unwrap();
    let n = q.degree().unwrap();
    if m == 0 && n == 0 {
        // Both constant in the eliminated variable: no elimination possible.
        panic!("resultant requires a nonconstant input");
    }
    if m == 0 {
        return pow_ring(&p.coeff(0), n);
    }
    if n == 0 {
        return pow_ring(&q.coeff(0), m);
    }
    let size = m + n;
    let mut mat = vec![vec![R::zero(); size]; size];
    // q-rows first (m of them), then p-rows (n of them), descending coefficients.
    for i in 0..m {
        for j in 0..=n {
            mat[i][i + j] = q.coeff(n - j);
        }
    }
    for i in 0..n {
        for j in 0..=m {
            mat[m + i][i + j] = p.coeff(m - j);
        }
    }
    bareiss_det(&mat)
}

fn pow_ring<R: Ring>(c: &R, e: usize) -> R {
    let mut acc = R::one();
    for _ in 0..e {
        acc = acc * c.clone();
    }
    acc
}

/// Discriminant of a univariate polynomial over a field:
/// (-1)^(n(n-1)/2) · resultant(p, p') / lc(p).
pub fn discriminant<F: Field>(p: &UniPoly<F>) -> F {
    let n = p.degree().expect("discriminant of the zero polynomial");
    assert!(n >= 1);
    let d = p.derivative();
    if d.is_zero() {
        return F::zero();
    }
    let r = resultant(p, &d);
    let r = r.exact_div(&p.lc()).unwrap();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::field::{rat, Rational};

    fn p(v: &[i64]) -> UniPoly<Rational> {
        UniPoly::from_coeffs(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn linear_resultant_sign() {
        // resultant(x - a, x - b) = b - a; test at a = 2, b = 5.
        let f = p(&[-2, 1]);
        let g = p(&[-5, 1]);
        assert_eq!(resultant(&f, &g), rat(3));
        assert_eq!(resultant(&g, &f), rat(-3));
    }

    #[test]
    fn symbolic_linear_resultant() {
        // Entries in Q[a]: resultant_x(x - a, x - b) with b = 3 gives 3 - a.
        type QA = UniPoly<Rational>;
        let a: QA = UniPoly::x();
        let f: UniPoly<QA> = UniPoly::from_coeffs(vec![-a, UniPoly::one()]);
        let g: UniPoly<QA> = UniPoly::from_coeffs(vec![UniPoly::constant(rat(-3)), UniPoly::one()]);
        let r = resultant(&f, &g);
        assert_eq!(r, UniPoly::from_coeffs(vec![rat(3), rat(-1)]));
    }

    #[test]
    fn discriminant_of_quadratic() {
        // disc(x^2 - 1) = 4.
        assert_eq!(discriminant(&p(&[-1, 0, 1])), rat(4));
        // disc(ax^2+bx+c) = b^2-4ac at (2,3,1): 9 - 8 = 1.
        assert_eq!(discriminant(&p(&[1, 3, 2])), rat(1));
        // Repeated root: disc((x-1)^2) = 0.
        assert_eq!(discriminant(&p(&[1, -2, 1])), rat(0));
    }

    #[test]
    fn zero_iff_common_root() {
        let f = p(&[-1, 0, 1]); // (x-1)(x+1)
        let g = p(&[-2, 1, 1]); // (x-1)(x+2)
        assert!(resultant(&f, &g).is_zero());
        let h = p(&[-6, 1, 1]); // (x-2)(x+3)
        assert!(!resultant(&f, &h).is_zero());
    }

    #[test]
    fn bareiss_matches_small_determinants() {
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(4), rat(5), rat(6)],
            vec![rat(7), rat(8), rat(10)],
        ];
        assert_eq!(bareiss_det(&m), rat(-3));
        let singular = vec![
            vec![rat(1), rat(2)],
            vec![rat(2), rat(4)],
        ];
        assert_eq!(bareiss_det(&singular), rat(0));
    }
}
