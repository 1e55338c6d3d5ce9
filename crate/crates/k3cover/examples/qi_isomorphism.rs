//! The surface w² = −x⁶ − y⁶ − z⁶ has no rational points, but over ℚ(i) it
//! becomes isomorphic to w² = x⁶ + y⁶ − z⁶ via (x, y, z, w) ↦ (x, y, iz, iw):
//! then w′² − (x′⁶ + y′⁶ − z′⁶) = −(w² + x⁶ + y⁶ + z⁶). This script checks
//! the identity symbolically on the defining forms and on the three visible
//! ℚ(i)-points, so density of Y(ℚ) transports to X(ℚ(i)).

use k3cover::field::rat;
use k3cover::poly::{MultiPoly, UniPoly, Var};
use k3cover::surface::{K3DoubleCover, TernarySexticForm, WP3Point};
use k3cover::tower::{extend_tower, TowerElement, TowerField};
use num_traits::Zero;

fn main() {
    // Build ℚ(i).
    let m = UniPoly::from_coeffs(vec![
        TowerElement::from_int(1),
        TowerElement::from_int(0),
        TowerElement::from_int(1),
    ]);
    let qi = extend_tower(&TowerField::rationals(), &m, "i").unwrap();
    let i = TowerElement::generator(&qi);

    // X: w² = −x⁶ − y⁶ − z⁶ and Y: w² = x⁶ + y⁶ − z⁶, over ℚ(i).
    let x_form = MultiPoly::from_terms([
        ([6, 0, 0], rat(-1)),
        ([0, 6, 0], rat(-1)),
        ([0, 0, 6], rat(-1)),
    ]);
    let y_surface = k3cover::density::surface_y().to_tower();

    // Symbolic check: substituting z ↦ i·z into the Y-form gives the X-form
    // up to the w-scaling factor (iw)² = −w²:
    //   f_Y(x, y, iz) = x⁶ + y⁶ + z⁶ = −f_X(x, y, z).
    let sub = y_surface.f().substitute(
        [
            &MultiPoly::var(Var::X),
            &MultiPoly::var(Var::Y),
            &MultiPoly::var(Var::Z).scale(&i),
        ],
        &|c: &TowerElement| MultiPoly::constant(c.promote(&qi)),
    );
    let x_form_t = x_form.map_coeffs(|c| TowerElement::from_rational(c.clone()).promote(&qi));
    let diff = sub + x_form_t.clone();
    assert!(diff.is_zero(), "f_Y(x, y, iz) = -f_X(x, y, z) fails");
    println!("symbolic identity f_Y(x, y, iz) = -f_X(x, y, z): verified");

    // Pointwise: the three visible ℚ(i)-points of X map onto Y.
    let x = K3DoubleCover::new(TernarySexticForm::new(x_form_t).unwrap());
    let pts = [
        WP3Point::new(
            TowerElement::one_like(&qi),
            TowerElement::zero(),
            TowerElement::zero(),
            i.clone(),
        ),
        WP3Point::new(
            TowerElement::zero(),
            TowerElement::one_like(&qi),
            TowerElement::zero(),
            i.clone(),
        ),
        WP3Point::new(
            TowerElement::zero(),
            TowerElement::zero(),
            TowerElement::one_like(&qi),
            i.clone(),
        ),
    ];
    for p in &pts {
        assert!(x.on_surface(p), "point not on X");
        // φ(x, y, z, w) = (x, y, i·z, i·w).
        let img = WP3Point::new(
            p.x.clone(),
            p.y.clone(),
            p.z.clone() * i.clone(),
            p.w.clone() * i.clone(),
        );
        assert!(y_surface.on_surface(&img), "image not on Y");
    }
    println!("the three Q(i)-points of X map onto Y under (x, y, z, w) -> (x, y, iz, iw)");
    println!("X(Q(i)) is Zariski dense: it transports from Y(Q) through this isomorphism");
}

trait OneLike {
    fn one_like(ctx: &std::sync::Arc<TowerField>) -> TowerElement;
}

impl OneLike for TowerElement {
    fn one_like(ctx: &std::sync::Arc<TowerField>) -> TowerElement {
        use num_traits::One;
        TowerElement::one().promote(ctx)
    }
}
