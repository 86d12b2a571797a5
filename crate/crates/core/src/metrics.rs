//! L1 (Wasserstein-1) distance via the mean metric
//! `kappa(X, Y) = int |P(X < u) - P(Y < u)| du`.
//!
//! Both CDFs are piecewise polynomial, so on the merged breakpoint grid their
//! difference is a polynomial per piece. Each piece is split at its sign
//! changes and integrated in closed form; no quadrature is involved.

use std::f64::consts::FRAC_PI_2;

use crate::dist::Distribution;
use crate::flat::Flat;
use crate::poly::Poly;

pub fn l1_distance(a: &Distribution, b: &Distribution) -> f64 {
    flat_l1(&Flat::from_dist(a), &Flat::from_dist(b))
}

pub(crate) fn flat_l1(a: &Flat, b: &Flat) -> f64 {
    let mut grid: Vec<f64> = a.grid();
    grid.extend(b.grid());
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut ia = 0;
    let mut ib = 0;
    // D(u) = F_a(u) - F_b(u) just right of the current grid point
    let mut level = 0.0;
    let mut total = 0.0;
    for w in grid.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        while ia < a.atoms.len() && a.atoms[ia] <= lo {
            level += a.masses[ia];
            ia += 1;
        }
        while ib < b.atoms.len() && b.atoms[ib] <= lo {
            level -= b.masses[ib];
            ib += 1;
        }
        let mid = 0.5 * (lo + hi);
        let dens = match (a.piece_at(mid), b.piece_at(mid)) {
            (Some(p), Some(q)) => p.sub(q),
            (Some(p), None) => p.clone(),
            (None, Some(q)) => q.scale(-1.0),
            (None, None) => Poly::zero(),
        };
        // local coordinate s = u - lo
        let diff = Poly::constant(level).add(&dens.shift(lo).antiderivative());
        total += abs_integral(&diff, hi - lo);
        level = diff.eval(hi - lo);
    }
    total
}

/// `int_0^w |p(s)| ds`.
fn abs_integral(p: &Poly, w: f64) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let anti = p.antiderivative();
    let mut knots = vec![0.0];
    knots.extend(p.roots_in(0.0, w));
    knots.push(w);
    knots
        .windows(2)
        .map(|k| (anti.eval(k[1]) - anti.eval(k[0])).abs())
        .sum()
}

/// Smoothing inequality: `|E e^{itX} - E e^{itY}| <= 2 sin(|t| L1 / 2 ^ pi/2)`.
pub fn cf_distance_bound(l1: f64, t: f64) -> f64 {
    2.0 * (0.5 * t.abs() * l1).min(FRAC_PI_2).sin()
}
