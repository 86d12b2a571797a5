//! Bounds on `r(t) = |f(t) - exp(-t^2/2)|` for standardized laws, and on
//! `g1(t) = |f(t) + f''(t)|`, in terms of `beta3 = E|X|^3`.
//!
//! Every integrand carries a factor `exp(u^2/2)` that the prefactor
//! `exp(-t^2/2)` cancels. We never form either factor on its own: integrals are
//! accumulated as `int_0^t h(u) exp((u^2 - t^2)/2) du` and carried from one grid
//! point to the next by multiplying with `exp((t_prev^2 - t^2)/2) <= 1`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use crate::charfn::{cf_eval, cf_zero_bias, normal_cf, require_standardized};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::metrics::{cf_distance_bound, l1_distance};
use crate::quad::{gauss_legendre_panels, integrate_with_knots};
use crate::transforms::square_bias;

/// Absolute tolerance of the outer integrals.
pub const OUTER_TOL: f64 = 1e-12;
/// Panel width of the fixed inner rule in the twice-integrated bound.
const INNER_PANEL: f64 = 0.5;
/// Slack below which a bound counts as violated.
pub const SLACK_TOL: f64 = 1e-9;

/// `beta3` may undershoot 1 by rounding for laws at the Lyapounov boundary.
const BETA3_FLOOR: f64 = 1.0 - 1e-12;

fn check_beta3(beta3: f64) -> Result<()> {
    if beta3 >= BETA3_FLOOR && beta3.is_finite() {
        Ok(())
    } else {
        Err(Error::Beta3BelowOne(beta3))
    }
}

/// `sin(x ^ pi/2)` for `x >= 0`.
fn clamped_sin(x: f64) -> f64 {
    x.min(FRAC_PI_2).sin()
}

/// `2 sin(beta3 |t| / 2 ^ pi/2)`, the bound on `|f(t) + f''(t)|`.
pub fn corollary1_bound(beta3: f64, t: f64) -> Result<f64> {
    check_beta3(beta3)?;
    Ok(2.0 * clamped_sin(0.5 * beta3 * t.abs()))
}

/// `beta3 |t|^3 / 6`.
pub fn power_bound(beta3: f64, t: f64) -> Result<f64> {
    check_beta3(beta3)?;
    Ok(beta3 * t.abs().powi(3) / 6.0)
}

/// `values[k] = int_0^{ts[k]} h(u) exp((u^2 - ts[k]^2)/2) du` for increasing `ts >= 0`.
fn cumulative_scaled<H: Fn(f64) -> f64>(h: H, ts: &[f64], knots: &[f64], tol: f64) -> Vec<f64> {
    let t_last = ts.last().copied().unwrap_or(0.0);
    let mut out = Vec::with_capacity(ts.len());
    let mut prev = 0.0;
    let mut acc = 0.0;
    for &t in ts {
        let seg_tol = if t_last > 0.0 { tol * (t - prev) / t_last } else { tol };
        let seg = integrate_with_knots(|u: f64| h(u) * (0.5 * (u - t) * (u + t)).exp(), prev, t, knots, seg_tol);
        acc = acc * (0.5 * (prev - t) * (prev + t)).exp() + seg;
        out.push(acc);
        prev = t;
    }
    out
}

fn eq9_series(beta3: f64, ts: &[f64]) -> Vec<f64> {
    let h = |u: f64| 2.0 * clamped_sin(0.25 * beta3 * u) * u;
    cumulative_scaled(h, ts, &[2.0 * PI / beta3], OUTER_TOL)
}

/// `2 exp(-t^2/2) int_0^|t| sin(beta3 u / 4 ^ pi/2) u exp(u^2/2) du`.
pub fn eq9_bound(beta3: f64, t: f64) -> Result<f64> {
    check_beta3(beta3)?;
    Ok(eq9_series(beta3, &[t.abs()])[0])
}

/// `A(u) = 2 int_0^u sin(beta3 s / 2 ^ pi/2) ds + u^3 / 3`.
fn term_a(beta3: f64, u: f64) -> f64 {
    let kink = PI / beta3;
    let integral = if u <= kink {
        // 1 - cos(x) = 2 sin^2(x / 2)
        let s = (0.25 * beta3 * u).sin();
        8.0 * s * s / beta3
    } else {
        4.0 / beta3 + 2.0 * (u - kink)
    };
    integral + u * u * u / 3.0
}

/// Integrand of `B`, without the `exp(s^2/2)` factor.
fn b_integrand(beta3: f64, s: f64) -> f64 {
    2.0 * clamped_sin(0.5 * beta3 * s) + 2.0 * s * s * clamped_sin(0.25 * beta3 * s) + s * s
}

/// `B(u) exp(-u^2/2)`.
fn term_b_scaled(beta3: f64, u: f64) -> f64 {
    let b = |s: f64| b_integrand(beta3, s);
    gauss_legendre_panels(
        |s: f64| b(s) * (0.5 * (s - u) * (s + u)).exp(),
        0.0,
        u,
        &[PI / beta3, 2.0 * PI / beta3],
        INNER_PANEL,
    )
}

/// Both readings of the twice-integrated bound on an increasing grid:
/// the per-`u` minimum, and the minimum of the two completed integrals.
fn corollary2_series(beta3: f64, ts: &[f64], with_outer: bool) -> (Vec<f64>, Vec<f64>) {
    let knots = [PI / beta3, 2.0 * PI / beta3];
    let pointwise = cumulative_scaled(|u| term_a(beta3, u).min(term_b_scaled(beta3, u)), ts, &knots, OUTER_TOL);
    if !with_outer {
        return (pointwise, Vec::new());
    }
    let a = cumulative_scaled(|u| term_a(beta3, u), ts, &knots, OUTER_TOL);
    // int_0^t int_0^u b(s) e^{s^2/2} ds du = int_0^t (t - s) b(s) e^{s^2/2} ds
    let b: Vec<f64> = ts
        .iter()
        .map(|&t| {
            integrate_with_knots(
                |s: f64| (t - s) * b_integrand(beta3, s) * (0.5 * (s - t) * (s + t)).exp(),
                0.0,
                t,
                &knots,
                OUTER_TOL,
            )
        })
        .collect();
    let outer = a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect();
    (pointwise, outer)
}

/// `exp(-t^2/2) int_0^|t| [A(u) exp(u^2/2) ^ B(u)] du`, minimum taken inside the integral.
pub fn corollary2_bound(beta3: f64, t: f64) -> Result<f64> {
    check_beta3(beta3)?;
    Ok(corollary2_series(beta3, &[t.abs()], false).0[0])
}

/// The twice-integrated bound read as the minimum of the two completed outer integrals.
pub fn corollary2_outer_bound(beta3: f64, t: f64) -> Result<f64> {
    check_beta3(beta3)?;
    Ok(corollary2_series(beta3, &[t.abs()], true).1[0])
}

/// Leading terms of the twice- and once-integrated bounds for `0 <= beta3 t <= pi`:
/// `(8/beta3^2)(beta3 t/2 - sin(beta3 t/2))` and
/// `(32/beta3^2)(sin(beta3 t/4) - (beta3 t/4) cos(beta3 t/4))`.
pub fn compare_leading_terms(beta3: f64, t: f64) -> Result<(f64, f64)> {
    check_beta3(beta3)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be nonnegative, got {t}")));
    }
    let x = beta3 * t;
    if x > PI {
        return Err(Error::OutsideRegime(x));
    }
    let c = 1.0 / (beta3 * beta3);
    Ok((8.0 * c * x_minus_sin(0.5 * x), 32.0 * c * sin_minus_x_cos(0.25 * x)))
}

/// `x - sin x`, by series near 0.
fn x_minus_sin(x: f64) -> f64 {
    if x > 0.5 {
        return x - x.sin();
    }
    // sum_{k>=1} (-1)^{k+1} x^{2k+1} / (2k+1)!
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut acc = 0.0;
    for k in 1..12 {
        acc += term;
        let n = (2 * k + 2) as f64;
        term *= -x2 / (n * (n + 1.0));
    }
    acc
}

/// `sin x - x cos x`, by series near 0.
fn sin_minus_x_cos(x: f64) -> f64 {
    if x > 0.5 {
        return x.sin() - x * x.cos();
    }
    // sum_{k>=1} (-1)^{k+1} 2k x^{2k+1} / (2k+1)!
    let x2 = x * x;
    let mut pow_fact = x * x2 / 6.0;
    let mut acc = 0.0;
    for k in 1..12 {
        acc += 2.0 * k as f64 * pow_fact;
        let n = (2 * k + 2) as f64;
        pow_fact *= -x2 / (n * (n + 1.0));
    }
    acc
}

/// `(g1, g2, g3)` at `s`: `|f + f''|`, `|s| |f'|` and `s^2 |f - f_z|`.
pub fn diagnostics_g(d: &Distribution, s: f64) -> Result<(f64, f64, f64)> {
    require_standardized(d)?;
    let cf = cf_eval(d, s);
    let g1 = (cf.f + cf.fsecond).norm();
    let g2 = s.abs() * cf.fprime.norm();
    let g3 = s * s * (cf.f - cf_zero_bias(d, s)?).norm();
    Ok((g1, g2, g3))
}

/// `r(t)` and `g1(t)` with every applicable bound on a uniform grid `[0, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub beta3: f64,
    /// `L1(X, X_sq)`, feeding the smoothing-inequality bound on `g1`.
    pub l1_square: f64,
    pub t_values: Vec<f64>,
    pub r: Vec<f64>,
    pub g1: Vec<f64>,
    pub power: Vec<f64>,
    pub eq9: Vec<f64>,
    pub cor2: Vec<f64>,
    pub cor2_outer: Vec<f64>,
    pub cor1: Vec<f64>,
    pub eq8: Vec<f64>,
}

impl BoundCurve {
    /// `(name, bound - actual)` per bound; the first four bound `r`, the last two `g1`.
    pub fn slacks(&self) -> Vec<(&'static str, Vec<f64>)> {
        let diff = |b: &[f64], a: &[f64]| b.iter().zip(a).map(|(x, y)| x - y).collect::<Vec<_>>();
        vec![
            ("power", diff(&self.power, &self.r)),
            ("eq9", diff(&self.eq9, &self.r)),
            ("cor2", diff(&self.cor2, &self.r)),
            ("cor2_outer", diff(&self.cor2_outer, &self.r)),
            ("cor1", diff(&self.cor1, &self.g1)),
            ("eq8", diff(&self.eq8, &self.g1)),
        ]
    }

    /// Smallest slack and where it occurs.
    pub fn min_slack(&self) -> (f64, &'static str, f64) {
        let mut worst = (f64::INFINITY, "", 0.0);
        for (name, s) in self.slacks() {
            for (k, &v) in s.iter().enumerate() {
                if v < worst.0 {
                    worst = (v, name, self.t_values[k]);
                }
            }
        }
        worst
    }

    pub fn holds(&self) -> bool {
        self.min_slack().0 >= -SLACK_TOL
    }

    /// CSV with header `t,r,power,eq9,cor2,g1,cor1` (plus `cor2_outer` if asked), 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W, with_outer: bool) -> io::Result<()> {
        write!(w, "t,r,power,eq9,cor2,g1,cor1")?;
        if with_outer {
            write!(w, ",cor2_outer")?;
        }
        writeln!(w)?;
        for k in 0..self.t_values.len() {
            let row = [self.t_values[k], self.r[k], self.power[k], self.eq9[k], self.cor2[k], self.g1[k], self.cor1[k]];
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            write!(w, "{}", cells.join(","))?;
            if with_outer {
                write!(w, ",{:.16e}", self.cor2_outer[k])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub fn bound_curve(d: &Distribution, t_max: f64, steps: usize) -> Result<BoundCurve> {
    require_standardized(d)?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    if steps == 0 {
        return Err(Error::EmptyGrid);
    }
    let beta3 = d.abs_moment(3.0)?;
    check_beta3(beta3)?;
    let l1_square = l1_distance(d, &square_bias(d)?);

    let t_values: Vec<f64> = (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
    let mut r = Vec::with_capacity(t_values.len());
    let mut g1 = Vec::with_capacity(t_values.len());
    for &t in &t_values {
        let cf = cf_eval(d, t);
        r.push((cf.f - normal_cf(t)).norm());
        g1.push((cf.f + cf.fsecond).norm());
    }
    let (cor2, cor2_outer) = corollary2_series(beta3, &t_values, true);
    Ok(BoundCurve {
        beta3,
        l1_square,
        power: t_values.iter().map(|&t| beta3 * t.powi(3) / 6.0).collect(),
        eq9: eq9_series(beta3, &t_values),
        cor2,
        cor2_outer,
        cor1: t_values.iter().map(|&t| 2.0 * clamped_sin(0.5 * beta3 * t)).collect(),
        eq8: t_values.iter().map(|&t| cf_distance_bound(l1_square, t)).collect(),
        t_values,
        r,
        g1,
    })
}
