//! Seeded random instances: groups, actions, groupoids, elements, boundary
//! decompositions, symbols and band operators.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::AlgebraElement;
use crate::band::{BandOperatorZ, CoefficientSequence, LaurentSymbol};
use crate::fredholm::{symbol_min_modulus, winding_number};
use crate::groupoid::{
    disjoint_union, orbits, pair_groupoid, product, transformation_groupoid, ActionSpec, FiniteGroupoid, GroupSpec,
    UnitId,
};

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A group of order at most `max_order` (at least 1): cyclic, dihedral,
/// symmetric or a product of two cyclic groups.
pub fn random_group<R: Rng + ?Sized>(rng: &mut R, max_order: usize) -> GroupSpec {
    let max_order = max_order.max(1);
    let mut options: Vec<GroupSpec> = (1..=max_order).map(GroupSpec::cyclic).collect();
    options.extend((3..=max_order / 2).map(GroupSpec::dihedral));
    if max_order >= 6 {
        options.push(GroupSpec::symmetric(3));
    }
    if max_order >= 4 {
        options.push(GroupSpec::cyclic(2).direct_product(&GroupSpec::cyclic(2)));
    }
    options.swap_remove(rng.gen_range(0..options.len()))
}

/// Left cosets `g⟨h⟩`, as lists of group elements.
fn cosets(g: &GroupSpec, h: usize) -> Vec<Vec<usize>> {
    let mut sub = vec![g.identity()];
    let mut x = h;
    while x != g.identity() {
        sub.push(x);
        x = g.mul(x, h);
    }
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for a in 0..g.order() {
        if seen[a] {
            continue;
        }
        let mut coset: Vec<usize> = sub.iter().map(|&s| g.mul(a, s)).collect();
        coset.sort_unstable();
        for &c in &coset {
            seen[c] = true;
        }
        out.push(coset);
    }
    out
}

/// An action of a random group of order `≤ max_order` on at most
/// `max_points` points, built from orbits of the form `G/⟨h⟩`.
pub fn random_action<R: Rng + ?Sized>(rng: &mut R, max_order: usize, max_points: usize) -> ActionSpec {
    let g = random_group(rng, max_order);
    let n = g.order();
    let max_points = max_points.max(1);
    let mut perm: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut total = 0;
    loop {
        // Orbit G/⟨h⟩ has |G|/ord(h) points.
        let fitting: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|h| cosets(&g, h))
            .filter(|c| total + c.len() <= max_points)
            .collect();
        if fitting.is_empty() || (total > 0 && rng.gen_bool(0.4)) {
            break;
        }
        let orbit = fitting.choose(rng).unwrap();
        let coset_of = |a: usize| orbit.iter().position(|c| c.contains(&a)).unwrap();
        for (a, row) in perm.iter_mut().enumerate() {
            for c in orbit {
                row.push(total + coset_of(g.mul(a, c[0])));
            }
        }
        total += orbit.len();
    }
    let points = (0..total).map(|i| format!("x{i}")).collect();
    ActionSpec::new(g, points, perm).expect("coset actions are actions")
}

/// One transitive-or-not component: `pair(n) × G` or an action groupoid.
fn random_component<R: Rng + ?Sized>(rng: &mut R, budget: usize) -> Option<FiniteGroupoid> {
    for _ in 0..20 {
        let c = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=4);
            let g = random_group(rng, 6);
            if n == 1 {
                g.as_groupoid()
            } else if g.order() == 1 {
                pair_groupoid(n)
            } else {
                product(&pair_groupoid(n), &g.as_groupoid())
            }
        } else {
            transformation_groupoid(&random_action(rng, 6, 6))
        };
        if c.num_arrows() <= budget {
            return Some(c);
        }
    }
    None
}

/// A disjoint union of random components with at most `max_arrows` arrows
/// and at most `max_components` components.
pub fn random_groupoid<R: Rng + ?Sized>(rng: &mut R, max_arrows: usize, max_components: usize) -> FiniteGroupoid {
    let mut parts = Vec::new();
    let mut used = 0;
    let k = rng.gen_range(1..=max_components.max(1));
    while parts.len() < k {
        match random_component(rng, max_arrows.saturating_sub(used)) {
            Some(c) => {
                used += c.num_arrows();
                parts.push(c);
            }
            None => break,
        }
    }
    if parts.is_empty() {
        parts.push(GroupSpec::cyclic(1).as_groupoid());
    }
    let refs: Vec<&FiniteGroupoid> = parts.iter().collect();
    disjoint_union(&refs)
}

/// Random coefficients on a random subset of arrows (each kept with
/// probability `density`).
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, g: &Arc<FiniteGroupoid>, density: f64) -> AlgebraElement {
    let coeffs = g
        .arrows()
        .map(|_| {
            if rng.gen_bool(density) {
                complex(rng)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    AlgebraElement::from_dense(g, coeffs).expect("one coefficient per arrow")
}

/// A random union of orbits (possibly empty or everything).
pub fn random_invariant_units<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroupoid) -> Vec<UnitId> {
    orbits(g).into_iter().filter(|_| rng.gen_bool(0.5)).flatten().collect()
}

/// A trigonometric polynomial of degree `≤ degree` whose modulus stays
/// above `margin` on the circle.
pub fn random_symbol<R: Rng + ?Sized>(rng: &mut R, degree: usize, margin: f64) -> LaurentSymbol {
    let d = degree as i64;
    loop {
        let s = LaurentSymbol::new((-d..=d).map(|m| (m, complex(rng))));
        if symbol_min_modulus(&s, 4096).lower_bound > margin {
            return s;
        }
    }
}

/// `s(ρe^{iθ})` as a symbol in `θ`.
fn on_circle(s: &LaurentSymbol, rho: f64) -> LaurentSymbol {
    LaurentSymbol::new(s.coeffs().iter().map(|(&m, &c)| (m, c * rho.powi(m as i32))))
}

/// A trigonometric polynomial of degree `≤ degree` with no zeros (as a
/// Laurent polynomial in `z`) in the annulus `1 - gap ≤ |z| ≤ 1/(1 - gap)`.
/// Kernel vectors of the associated band operators then decay at least like
/// `(1 - gap)^|n|`.
pub fn random_separated_symbol<R: Rng + ?Sized>(rng: &mut R, degree: usize, gap: f64) -> LaurentSymbol {
    let rho = 1.0 - gap;
    loop {
        let s = random_symbol(rng, degree, 0.0);
        let circles = [on_circle(&s, rho), s.clone(), on_circle(&s, 1.0 / rho)];
        if circles.iter().any(|c| symbol_min_modulus(c, 4096).lower_bound <= 1e-3) {
            continue;
        }
        let w: Vec<_> = circles.iter().map(|c| winding_number(c, 4096).ok()).collect();
        if w[0].is_some() && w.iter().all(|x| *x == w[0]) {
            return s;
        }
    }
}

fn eventual_band_with<R: Rng + ?Sized>(
    rng: &mut R,
    max_width: usize,
    window: i64,
    symbol: impl Fn(&mut R, usize) -> LaurentSymbol,
) -> BandOperatorZ {
    let w = rng.gen_range(1..=max_width.max(1));
    let plus = symbol(rng, w);
    let minus = symbol(rng, w);
    let mut diagonals = BTreeMap::new();
    for m in -(w as i64)..=(w as i64) {
        let values = (0..2 * window + 1).map(|_| complex(rng)).collect();
        let seq = CoefficientSequence::eventually_constant(window, values, minus.coeff(m), plus.coeff(m))
            .expect("window length");
        diagonals.insert(m, seq);
    }
    BandOperatorZ::new(w, diagonals).expect("diagonals within width")
}

/// A band operator of width `≤ max_width` whose diagonals are eventually
/// constant, with limit symbols at `±∞` bounded away from zero by `margin`.
/// The window values are random and the window has half-width `window`.
pub fn random_eventual_band<R: Rng + ?Sized>(rng: &mut R, max_width: usize, window: i64, margin: f64) -> BandOperatorZ {
    eventual_band_with(rng, max_width, window, |r, w| random_symbol(r, w, margin))
}

/// As [`random_eventual_band`], with limit symbols from [`random_separated_symbol`].
pub fn random_separated_band<R: Rng + ?Sized>(rng: &mut R, max_width: usize, window: i64, gap: f64) -> BandOperatorZ {
    eventual_band_with(rng, max_width, window, |r, w| random_separated_symbol(r, w, gap))
}
