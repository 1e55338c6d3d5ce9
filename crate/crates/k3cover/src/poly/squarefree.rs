//! Squarefree decomposition in characteristic zero (Yun's algorithm).

use super::uni::UniPoly;
use crate::field::Field;
use num_traits::Zero;

/// Yun's algorithm: returns monic squarefree parts with multiplicities,
/// so that the input equals lc · ∏ aᵢ^mᵢ with the aᵢ pairwise coprime.
///
/// Valid over fields of characteristic zero (ℚ and its extensions).
pub fn squarefree_decomposition<F: Field>(f: &UniPoly<F>) -> Vec<(UniPoly<F>, u32)> {
    assert!(!f.is_zero());
    let f = f.monic();
    if f.is_constant() {
        return vec![];
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    if a.is_constant() {
        return vec![(f, 1)];
    }
    let mut out = Vec::new();
    let mut b = f.exact_div_poly(&a).unwrap();
    let mut c = df.exact_div_poly(&a).unwrap();
    let mut d = c.clone() - b.derivative();
    let mut i = 1u32;
    while !b.is_constant() {
        let a_i = b.gcd(&d);
        if !a_i.is_constant() {
            out.push((a_i.clone(), i));
        }
        b = b.exact_div_poly(&a_i).unwrap();
        c = d.exact_div_poly(&a_i).unwrap();
        d = c.clone() - b.derivative();
        i += 1;
    }
    out
}

/// Product of the distinct irreducible factors, monic.
pub fn squarefree_part<F: Field>(f: &UniPoly<F>) -> UniPoly<F> {
    squarefree_decomposition(f)
        .into_iter()
        .fold(UniPoly::constant(F::one()), |acc, (a, _)| acc * a)
}

/// Multiplicity of `root` as a zero of `f` (0 when not a root).
pub fn root_multiplicity<F: Field>(f: &UniPoly<F>, root: &F) -> u32 {
    assert!(!f.is_zero());
    let mut g = f.clone();
    let lin = UniPoly::from_coeffs(vec![-root.clone(), F::one()]);
    let mut m = 0;
    loop {
        if !g.eval(root).is_zero() {
            return m;
        }
        g = g.exact_div_poly(&lin).expect("root divides");
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    fn p(v: &[i64]) -> UniPoly<Rational> {
        UniPoly::from_coeffs(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn yun_on_structured_input() {
        // (t-1)^2 (t+2)
        let f = p(&[1, -2, 1]) * p(&[2, 1]);
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        let rebuilt = parts
            .iter()
            .fold(UniPoly::constant(rat(1)), |acc, (a, m)| acc * a.pow(*m as usize));
        assert_eq!(rebuilt, f.monic());
    }

    #[test]
    fn multiplicity_counts() {
        let f = p(&[0, 0, 1]) * p(&[5, 1]); // t^2 (t+5)
        assert_eq!(root_multiplicity(&f, &rat(0)), 2);
        assert_eq!(root_multiplicity(&f, &rat(-5)), 1);
        assert_eq!(root_multiplicity(&f, &rat(1)), 0);
        assert_eq!(squarefree_part(&f), p(&[0, 1]) * p(&[5, 1]));
    }
}
