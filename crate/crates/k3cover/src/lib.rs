//! Exact-arithmetic machinery for degree-2 K3 surfaces `w² = f(x,y,z)`:
//! certificates of infinitely many rational points over explicit extensions
//! of degree ≤ 12, the explicit family behind them, and the two-fibration
//! density checks on `w² = x⁶ + y⁶ − z⁶`.
//!
//! The core is generic over an exact scalar [`field::Field`]; the three
//! instantiations that matter are ℚ ([`Rational`]), number-field towers
//! ([`TowerElement`]), and finite fields ([`fq::Fq`]).

pub mod density;
pub mod family;
pub mod field;
pub mod fq;
pub mod io;
pub mod pipeline;
pub mod poly;
pub mod genus1;
pub mod smooth;
pub mod surface;
pub mod tower;

pub use field::{Field, Rational, Ring};
pub use fq::{Fq, FqCtx};
pub use poly::{FactorField, MultiPoly, SimpleExtension, UniPoly, Var};
pub use tower::{extend_tower, tower_embed_mod_p, TowerElement, TowerField};

/// Univariate polynomials over ℚ.
pub type QPoly = UniPoly<Rational>;
/// Univariate polynomials over a number-field tower.
pub type TPoly = UniPoly<TowerElement>;
/// Ternary forms over ℚ.
pub type QForm = MultiPoly<Rational>;
/// Ternary forms over a tower.
pub type TForm = MultiPoly<TowerElement>;

/// The `factor_univariate` entry point: monic irreducible factors with
/// multiplicities over ℚ, a tower field, or a finite field.
pub fn factor_univariate<F: FactorField>(p: &UniPoly<F>) -> Vec<(UniPoly<F>, u32)> {
    F::factor_monic(p)
}
