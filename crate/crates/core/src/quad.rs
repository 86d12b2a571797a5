//! Adaptive Simpson quadrature with Richardson extrapolation, and a fixed
//! composite Gauss-Legendre rule.
//!
//! Used only by the bounds module, whose integrands are smooth apart from a
//! handful of known kinks (the `sin(. ^ pi/2)` clamps). Callers pass those
//! kinks in so every panel the recursion sees is smooth.
//!
//! Nested integrals use the fixed rule inside: its result is a smooth function
//! of the limits, so the outer adaptive rule never sees tolerance-level noise.

use std::sync::OnceLock;

const MAX_DEPTH: u32 = 48;
const GL_ORDER: usize = 20;

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol || delta.abs() <= noise {
        return left + right + delta / 15.0;
    }
    recurse(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)
        + recurse(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)
}

/// `int_a^b f` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&f, a, fa, m, fm, b, fb, whole, tol, 0)
}

/// Like [`adaptive_simpson`] but first splits `[a, b]` at every knot strictly inside it.
/// The tolerance is shared between the panels in proportion to their length.
pub fn integrate_with_knots<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, knots: &[f64], tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = knots.iter().copied().filter(|&k| k > lo && k < hi).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(hi);
    let width = hi - lo;
    sign * cuts
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], tol * (w[1] - w[0]) / width))
        .sum::<f64>()
}

/// Nodes and weights of the `GL_ORDER`-point rule on `[-1, 1]`, by Newton on `P_n`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        (0..n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let k = k as f64;
                        (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let step = p1 / dp;
                    x -= step;
                    if step.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

/// `int_a^b f` for `a <= b` by the fixed rule on equal panels no wider than `max_width`,
/// after splitting at the knots inside `(a, b)`.
pub fn gauss_legendre_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, knots: &[f64], max_width: f64) -> f64 {
    let rule = gauss_legendre();
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = knots.iter().copied().filter(|&k| k > a && k < b).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(b);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let pieces = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / pieces as f64;
        for k in 0..pieces {
            let mid = w[0] + (k as f64 + 0.5) * h;
            total += 0.5 * h * rule.iter().map(|&(x, wt)| wt * f(mid + 0.5 * h * x)).sum::<f64>();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_up_to_cubic_are_exact() {
        let v = adaptive_simpson(|x| 4.0 * x * x * x - x + 2.0, -1.0, 2.0, 1e-12);
        assert!((v - (15.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn smooth_integrands() {
        let v = adaptive_simpson(f64::exp, 0.0, 1.0, 1e-13);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-13);
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-13);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn kinks_are_split() {
        // |x - 0.3| on [0, 1]
        let v = integrate_with_knots(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3, 7.0], 1e-14);
        assert!((v - (0.045 + 0.245)).abs() < 1e-15);
        let back = integrate_with_knots(|x: f64| (x - 0.3).abs(), 1.0, 0.0, &[0.3], 1e-14);
        assert_eq!(back, -v);
    }

    #[test]
    fn gauss_legendre_rule() {
        let rule = gauss_legendre();
        let wsum: f64 = rule.iter().map(|r| r.1).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // exact for degree 2n - 1
        let v: f64 = rule.iter().map(|&(x, w)| w * x.powi(38)).sum();
        assert!((v - 2.0 / 39.0).abs() < 1e-14);
        let v = gauss_legendre_panels(f64::exp, 0.0, 3.0, &[], 0.5);
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-13);
        let v = gauss_legendre_panels(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 0.25);
        assert!((v - 0.29).abs() < 1e-15);
    }
}
