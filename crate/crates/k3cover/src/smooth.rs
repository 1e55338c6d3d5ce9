//! Complete singular-locus detection for plane curves via resultants and
//! root chasing, over any field with factorization and simple extensions
//! (ℚ with number-field specializations, or F_p with F_{p^k} ones).
//!
//! The core question is whether a system of bivariate polynomials has a
//! common zero over the algebraic closure. Candidate y-coordinates come
//! from a nonzero eliminant (a resultant or a pure-y member of the system);
//! pairs with vanishing resultant are split through their gcd, using
//! V(A) ∩ V(B) = V(gcd) ∪ (V(A/gcd) ∩ V(B/gcd)).

use crate::field::Field;
use crate::poly::{MultiPoly, SimpleExtension, UniPoly, Var};
use num_traits::Zero;

/// Bivariate polynomials as elements of F[y][x]: outer variable x.
pub type BiPoly<F> = UniPoly<UniPoly<F>>;

/// Content of a bivariate polynomial: monic gcd of its x-coefficients in F[y].
fn content<F: Field>(p: &BiPoly<F>) -> UniPoly<F> {
    let mut g: UniPoly<F> = UniPoly::zero();
    for c in p.coeffs() {
        g = if g.is_zero() { c.monic() } else { g.gcd(c) };
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

fn primitive_part<F: Field>(p: &BiPoly<F>) -> BiPoly<F> {
    let c = content(p);
    p.map_coeffs(|q| q.exact_div_poly(&c).expect("content divides"))
}

/// Full gcd in F[y][x] (content times primitive-part gcd by a primitive PRS).
pub fn bivariate_gcd<F: Field>(a: &BiPoly<F>, b: &BiPoly<F>) -> BiPoly<F> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let cont = content(a).gcd(&content(b));
    let mut r0 = primitive_part(a);
    let mut r1 = primitive_part(b);
    if r0.deg_i() < r1.deg_i() {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !r1.is_zero() {
        let (_, rem) = r0.pseudo_div_rem(&r1);
        let rem = if rem.is_zero() {
            rem
        } else {
            primitive_part(&rem)
        };
        r0 = r1;
        r1 = rem;
    }
    // Normalize: make the leading x-coefficient monic in y.
    let lead_inv = r0.lc().lc().inv().expect("nonzero leading coefficient");
    let r0 = r0.map_coeffs(|q| q.scale(&lead_inv));
    r0.map_coeffs(|q| q.clone() * cont.clone())
}

fn is_nonconstant<F: Field>(p: &BiPoly<F>) -> bool {
    match p.degree() {
        None => false,
        Some(d) if d >= 1 => true,
        Some(_) => !p.coeff(0).is_constant(),
    }
}

/// Specializes the system at a root `y0` of an irreducible factor and tests
/// for a common x-root over the closure (a nonconstant gcd suffices).
fn specialized_common_root<F: Field, G: Field>(
    system: &[BiPoly<F>],
    y0: &G,
    embed: &impl Fn(&F) -> G,
) -> bool {
    let mut g: Option<UniPoly<G>> = None;
    for p in system {
        let spec: UniPoly<G> =
            UniPoly::from_coeffs(p.coeffs().iter().map(|c| c.map_coeffs(embed).eval(y0)).collect());
        if spec.is_zero() {
            continue; // no constraint along this y
        }
        g = Some(match g {
            None => spec.monic(),
            Some(prev) => prev.gcd(&spec),
        });
        if g.as_ref().unwrap().is_constant() {
            return false;
        }
    }
    match g {
        // Every polynomial vanished identically on the line y = y0.
        None => true,
        Some(g) => !g.is_constant(),
    }
}

/// Does the system have a common zero over the algebraic closure of F?
pub fn common_zero_exists<F: SimpleExtension>(system: &[BiPoly<F>]) -> bool {
    let polys: Vec<BiPoly<F>> = system.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.is_empty() {
        return true;
    }
    // A nonzero constant kills the system.
    if polys
        .iter()
        .any(|p| p.degree() == Some(0) && p.coeff(0).is_constant())
    {
        return false;
    }
    // Pure-y members give candidate y-values directly.
    let ycons: Vec<UniPoly<F>> = polys
        .iter()
        .filter(|p| p.degree() == Some(0))
        .map(|p| p.coeff(0))
        .collect();
    if !ycons.is_empty() {
        let mut r = ycons[0].monic();
        for c in &ycons[1..] {
            r = r.gcd(c);
        }
        return check_candidates(&polys, &r);
    }
    // All members now have x-degree >= 1.
    if polys.len() == 1 {
        return true; // a nonconstant bivariate polynomial always vanishes somewhere
    }
    let a = &polys[0];
    let b = &polys[1];
    let g = bivariate_gcd(a, b);
    if is_nonconstant(&g) {
        // V(a) ∩ V(b) = V(g) ∪ (V(a/g) ∩ V(b/g)).
        let mut branch1: Vec<BiPoly<F>> = vec![g.clone()];
        branch1.extend_from_slice(&polys[2..]);
        if common_zero_exists(&branch1) {
            return true;
        }
        let mut branch2: Vec<BiPoly<F>> = vec![
            a.exact_div_poly(&g).expect("gcd divides"),
            b.exact_div_poly(&g).expect("gcd divides"),
        ];
        branch2.extend_from_slice(&polys[2..]);
        return common_zero_exists(&branch2);
    }
    // Coprime pair: the resultant is a nonzero eliminant for y.
    let r = crate::poly::resultant(a, b);
    if r.is_zero() {
        unreachable!("coprime polynomials have nonzero resultant");
    }
    check_candidates(&polys, &r)
}

/// Tests every root of the eliminant `r` (over the closure, one conjugate
/// per irreducible factor) as a candidate y-coordinate.
fn check_candidates<F: SimpleExtension>(system: &[BiPoly<F>], r: &UniPoly<F>) -> bool {
    if r.is_constant() {
        return false;
    }
    for (m, _) in F::factor_monic(r) {
        if m.degree() == Some(1) {
            let y0 = -m.coeff(0);
            if specialized_common_root(system, &y0, &|c: &F| c.clone()) {
                return true;
            }
        } else {
            let (y0, embed) = F::adjoin_root(&m);
            if specialized_common_root(system, &y0, &|c: &F| embed(c)) {
                return true;
            }
        }
    }
    false
}

/// Is the projective plane curve V(f) singular over the algebraic closure?
/// The system {f, f_x, f_y, f_z} is checked in the three affine charts
/// (the form itself is always included; in characteristic 3 the Euler
/// relation degenerates for sextics).
pub fn plane_curve_singular<F: SimpleExtension>(f: &MultiPoly<F>) -> bool {
    assert!(!f.is_zero(), "zero form");
    let system = [
        f.clone(),
        f.partial(Var::X),
        f.partial(Var::Y),
        f.partial(Var::Z),
    ];
    for (one_var, outer) in [(Var::Z, Var::X), (Var::X, Var::Y), (Var::Y, Var::X)] {
        let chart_system: Vec<BiPoly<F>> =
            system.iter().map(|p| p.chart(one_var, outer)).collect();
        if common_zero_exists(&chart_system) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};
    use crate::fq::FqCtx;
    use crate::Fq;

    fn form(terms: &[([u32; 3], i64)]) -> MultiPoly<Rational> {
        MultiPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    #[test]
    fn fermat_sextic_is_smooth() {
        let f = form(&[([6, 0, 0], -1), ([0, 6, 0], -1), ([0, 0, 6], -1)]);
        assert!(!plane_curve_singular(&f));
    }

    #[test]
    fn x6_is_singular() {
        let f = form(&[([6, 0, 0], 1)]);
        assert!(plane_curve_singular(&f));
    }

    #[test]
    fn nodal_cubic_is_singular() {
        // y^2 z = x^3 + x^2 z has a node at the origin of the z-chart.
        let f = form(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], -1)]);
        assert!(plane_curve_singular(&f));
    }

    #[test]
    fn smooth_cubic() {
        // y^2 z = x^3 + z^3.
        let f = form(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([0, 0, 3], -1)]);
        assert!(!plane_curve_singular(&f));
    }

    #[test]
    fn singular_only_at_infinity_of_a_chart() {
        // f = x^2 z - y^3: cusp at [0:0:1]; also check a curve whose singular
        // point has z = 0: y^2 z^4 = x^6 is very singular at [0:1:0].
        let cusp = form(&[([2, 0, 1], 1), ([0, 3, 0], -1)]);
        assert!(plane_curve_singular(&cusp));
        let at_inf = form(&[([0, 2, 4], 1), ([6, 0, 0], -1)]);
        assert!(plane_curve_singular(&at_inf));
    }

    #[test]
    fn mod_p_charts_match_brute_force() {
        // Oracle: enumerate P^2(F_{p^k}) for small fields and compare.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let monomials: Vec<[u32; 3]> = (0..=6u32)
            .flat_map(|i| (0..=6 - i).map(move |j| [i, j, 6 - i - j]))
            .collect();
        for p in [3u64, 5] {
            let ctx = FqCtx::prime(p);
            for _ in 0..10 {
                let f: MultiPoly<Fq> = MultiPoly::from_terms(
                    monomials
                        .iter()
                        .map(|&e| (e, ctx.from_u64(rng.gen_range(0..p)))),
                );
                if f.is_zero() {
                    continue;
                }
                let fast = plane_curve_singular(&f);
                let slow = brute_force_singular(&f, &ctx, 2);
                // The brute force only sees points up to residue degree 2,
                // so it can miss singular points; it never overreports.
                if slow {
                    assert!(fast, "brute force found a singular point that charts missed: {f:?}");
                }
                if !fast {
                    assert!(!slow);
                }
            }
        }
    }

    fn brute_force_singular(
        f: &MultiPoly<Fq>,
        ctx: &std::sync::Arc<FqCtx>,
        max_k: usize,
    ) -> bool {
        use crate::poly::factor_fq::irreducible_poly;
        for k in 1..=max_k {
            let big = if k == 1 {
                ctx.clone()
            } else {
                let m = irreducible_poly(ctx.p(), k);
                let coeffs: Vec<u64> = m.coeffs().iter().map(|c| c.residue().unwrap_or(0)).collect();
                FqCtx::extension(ctx.p(), coeffs)
            };
            let lift = crate::poly::factor_fq::embed_fq(ctx, &big);
            let g = f.map_coeffs(|c| lift(c));
            let system = [
                g.clone(),
                g.partial(Var::X),
                g.partial(Var::Y),
                g.partial(Var::Z),
            ];
            let els = big.all_elements();
            let mut points: Vec<[Fq; 3]> = Vec::new();
            for y in &els {
                for z in &els {
                    points.push([big.one(), y.clone(), z.clone()]);
                }
            }
            for z in &els {
                points.push([big.zero(), big.one(), z.clone()]);
            }
            points.push([big.zero(), big.zero(), big.one()]);
            for pt in points {
                if system.iter().all(|s| s.eval([&pt[0], &pt[1], &pt[2]]).is_zero()) {
                    return true;
                }
            }
        }
        false
    }
}
