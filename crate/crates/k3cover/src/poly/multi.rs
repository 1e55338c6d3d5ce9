//! Sparse polynomials in three variables (x, y, z) over an exact ring.

use super::uni::UniPoly;
use crate::field::{Field, Ring};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Var {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn all() -> [Var; 3] {
        [Var::X, Var::Y, Var::Z]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// Exponent triples map to nonzero coefficients; keys are (i, j, k) for
/// x^i y^j z^k.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<F> {
    terms: BTreeMap<[u32; 3], F>,
}

impl<F: Ring> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = format!("({c:?})");
                for (v, &p) in ["x", "y", "z"].iter().zip(e.iter()) {
                    match p {
                        0 => {}
                        1 => s.push_str(&format!("*{v}")),
                        _ => s.push_str(&format!("*{v}^{p}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Ring> MultiPoly<F> {
    pub fn zero_poly() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; 3], F)>) -> Self {
        let mut p = Self::zero_poly();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn constant(c: F) -> Self {
        Self::from_terms([([0, 0, 0], c)])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0u32; 3];
        e[v.index()] = 1;
        Self::from_terms([(e, F::one())])
    }

    pub fn add_term(&mut self, e: [u32; 3], c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let s = slot.get().clone() + c;
                if s.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: [u32; 3]) -> F {
        self.terms.get(&e).cloned().unwrap_or_else(F::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[v.index()]).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())))
    }

    pub fn map_coeffs<G: Ring>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        MultiPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn try_map_coeffs<G: Ring, E>(
        &self,
        f: impl Fn(&F) -> Result<G, E>,
    ) -> Result<MultiPoly<G>, E> {
        let mut out = MultiPoly::zero_poly();
        for (e, c) in &self.terms {
            out.add_term(*e, f(c)?);
        }
        Ok(out)
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Self {
        let idx = v.index();
        let mut out = Self::zero_poly();
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[idx] -= 1;
            let mut n = F::zero();
            for _ in 0..e[idx] {
                n = n + F::one();
            }
            out.add_term(e2, n * c.clone());
        }
        out
    }

    /// Substitutes images for (x, y, z) in any target ring.
    pub fn substitute<R: Ring>(&self, imgs: [&R; 3], embed: &impl Fn(&F) -> R) -> R {
        // Power cache per variable.
        let mut powers: [Vec<R>; 3] = [vec![R::one()], vec![R::one()], vec![R::one()]];
        for (v, pows) in powers.iter_mut().enumerate() {
            let need = self.degree_in(Var::all()[v]).unwrap_or(0) as usize;
            for i in 1..=need {
                let next = pows[i - 1].clone() * imgs[v].clone();
                pows.push(next);
            }
        }
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let t = embed(c)
                * powers[0][e[0] as usize].clone()
                * powers[1][e[1] as usize].clone()
                * powers[2][e[2] as usize].clone();
            acc = acc + t;
        }
        acc
    }

    pub fn eval(&self, pt: [&F; 3]) -> F {
        self.substitute(pt, &|c: &F| c.clone())
    }

    /// Linear change of variables: returns f(M·(x,y,z)ᵀ).
    pub fn linear_substitute(&self, m: &[[F; 3]; 3]) -> Self {
        let imgs: Vec<MultiPoly<F>> = (0..3)
            .map(|i| {
                Self::from_terms([
                    ([1, 0, 0], m[i][0].clone()),
                    ([0, 1, 0], m[i][1].clone()),
                    ([0, 0, 1], m[i][2].clone()),
                ])
            })
            .collect();
        self.substitute([&imgs[0], &imgs[1], &imgs[2]], &|c: &F| {
            MultiPoly::constant(c.clone())
        })
    }

    /// Sets one variable to 1 and returns the bivariate polynomial in the
    /// two others as nested univariate: outer variable `outer`, inner the
    /// remaining one.
    pub fn chart(&self, one_var: Var, outer: Var) -> UniPoly<UniPoly<F>> {
        assert_ne!(one_var, outer);
        let inner = Var::all()
            .into_iter()
            .find(|&v| v != one_var && v != outer)
            .unwrap();
        let mut rows: Vec<Vec<F>> = Vec::new();
        for (e, c) in &self.terms {
            let oe = e[outer.index()] as usize;
            let ie = e[inner.index()] as usize;
            while rows.len() <= oe {
                rows.push(vec![]);
            }
            while rows[oe].len() <= ie {
                rows[oe].push(F::zero());
            }
            rows[oe][ie] = rows[oe][ie].clone() + c.clone();
        }
        UniPoly::from_coeffs(rows.into_iter().map(UniPoly::from_coeffs).collect())
    }

    /// Leading term in the lexicographic order of exponent triples.
    fn leading(&self) -> Option<(&[u32; 3], &F)> {
        self.terms.iter().next_back()
    }
}

impl<F: Field> MultiPoly<F> {
    /// Resultant eliminating `var`: a polynomial in the other variables.
    pub fn resultant_var(p: &Self, q: &Self, var: Var) -> Self {
        let to_uni = |f: &Self| -> UniPoly<MultiPoly<F>> {
            let d = f.degree_in(var).unwrap_or(0) as usize;
            let mut coeffs: Vec<MultiPoly<F>> = vec![MultiPoly::zero_poly(); d + 1];
            for (e, c) in &f.terms {
                let mut e2 = *e;
                let k = e2[var.index()] as usize;
                e2[var.index()] = 0;
                coeffs[k].add_term(e2, c.clone());
            }
            UniPoly::from_coeffs(coeffs)
        };
        super::sylvester::resultant(&to_uni(p), &to_uni(q))
    }
}

impl<F: Ring> Zero for MultiPoly<F> {
    fn zero() -> Self {
        Self::zero_poly()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Ring> One for MultiPoly<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Ring> Add for MultiPoly<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (e, c) in rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl<F: Ring> Sub for MultiPoly<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Ring> Neg for MultiPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        MultiPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<F: Ring> Mul for MultiPoly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero_poly();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<F: Ring> Ring for MultiPoly<F> {
    /// Exact multivariate division by repeated leading-term elimination in
    /// lexicographic order; `None` when not exactly divisible.
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero_poly());
        }
        let (de, dc) = other.leading().map(|(e, c)| (*e, c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quo = Self::zero_poly();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (*e, c.clone())) {
            if re.iter().zip(de.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let c = rc.exact_div(&dc)?;
            let e = [re[0] - de[0], re[1] - de[1], re[2] - de[2]];
            let t = Self::from_terms([(e, c)]);
            rem = rem - t.clone() * other.clone();
            quo = quo + t;
        }
        Some(quo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    fn xyz() -> (MultiPoly<Rational>, MultiPoly<Rational>, MultiPoly<Rational>) {
        (
            MultiPoly::var(Var::X),
            MultiPoly::var(Var::Y),
            MultiPoly::var(Var::Z),
        )
    }

    #[test]
    fn arithmetic_and_eval() {
        let (x, y, z) = xyz();
        let f = x.clone() * x.clone() + y.clone() * z.clone().scale(&rat(3));
        assert_eq!(f.eval([&rat(2), &rat(1), &rat(5)]), rat(4 + 15));
        assert!(f.is_homogeneous(2));
        assert_eq!(f.partial(Var::X), x.clone().scale(&rat(2)));
        assert_eq!(f.partial(Var::Y), z.scale(&rat(3)));
    }

    #[test]
    fn multivariate_resultant_matches_spec_example() {
        // resultant_x(x - a, x - b) = b - a with a := y, b := z.
        let (x, y, z) = xyz();
        let p = x.clone() - y.clone();
        let q = x - z.clone();
        let r = MultiPoly::resultant_var(&p, &q, Var::X);
        assert_eq!(r, z - y);
    }

    #[test]
    fn linear_substitution() {
        let (x, y, _z) = xyz();
        let f = x.clone() * y.clone();
        // x -> y, y -> x (swap).
        let m = [
            [rat(0), rat(1), rat(0)],
            [rat(1), rat(0), rat(0)],
            [rat(0), rat(0), rat(1)],
        ];
        assert_eq!(f.linear_substitute(&m), f);
        // x -> x + y.
        let m2 = [
            [rat(1), rat(1), rat(0)],
            [rat(0), rat(1), rat(0)],
            [rat(0), rat(0), rat(1)],
        ];
        let g = f.linear_substitute(&m2); // (x+y)y = xy + y^2
        assert_eq!(g, x * y.clone() + y.clone() * y);
    }

    #[test]
    fn chart_restriction() {
        let (x, y, z) = xyz();
        // f = x^2 z + y^3, chart z = 1, outer x: x^2 + y^3.
        let f = x.clone() * x.clone() * z + y.clone() * y.clone() * y;
        let c = f.chart(Var::Z, Var::X);
        assert_eq!(c.degree(), Some(2));
        assert_eq!(c.coeff(2), UniPoly::constant(rat(1)));
        assert_eq!(c.coeff(0), UniPoly::monomial(rat(1), 3));
        let _ = x;
    }

    #[test]
    fn exact_division() {
        let (x, y, _) = xyz();
        let f = (x.clone() + y.clone()) * (x.clone() - y.clone());
        let q = f.exact_div(&(x.clone() + y.clone())).unwrap();
        assert_eq!(q, x.clone() - y.clone());
        assert!(f.exact_div(&(x + y.clone() + MultiPoly::one())).is_none());
        let _ = y;
    }
}
