//! Characteristic functions `f(t) = E e^{itX}` and their first two
//! derivatives, evaluated in closed form.
//!
//! Atoms contribute finite sums. A density piece on `[c - h, c + h]` is
//! handled in coordinates centered at `c`, reducing every term to the
//! symmetric moments `int_{-h}^{h} s^k e^{its} ds`; those come from a power
//! series when `|t| h` is small and from integration by parts otherwise, so
//! there is no cancellation near `t = 0`.
//!
//! The transformed characteristic functions follow from `f`, `f'`, `f''`:
//! size bias `f'(t) / f'(0)`, zero bias `(f'(t) - f'(0)) / (t f''(0))` and
//! square bias `f''(t) / f''(0)`.

use num_complex::Complex64;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::flat::Flat;
use crate::poly::Poly;
use crate::transforms::MEAN_ZERO_TOL;

/// Tolerance on mean and variance for inputs that must be standardized.
pub const STANDARDIZED_TOL: f64 = 1e-10;

/// `|t| * max|x|` below which the zero-bias ch.f. is summed as a series.
const ZERO_BIAS_SERIES_RADIUS: f64 = 0.1;

/// `(f(t), f'(t), f''(t))` at one real argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharFnTriple {
    pub f: Complex64,
    pub fprime: Complex64,
    pub fsecond: Complex64,
}

pub fn cf_eval(d: &Distribution, t: f64) -> CharFnTriple {
    flat_cf(&Flat::from_dist(d), t)
}

pub(crate) fn flat_cf(fl: &Flat, t: f64) -> CharFnTriple {
    let i = Complex64::i();
    let mut f = Complex64::new(0.0, 0.0);
    let mut f1 = f;
    let mut f2 = f;
    for (&a, &m) in fl.atoms.iter().zip(&fl.masses) {
        let e = Complex64::from_polar(m, t * a);
        f += e;
        f1 += i * a * e;
        f2 -= a * a * e;
    }
    for (k, p) in fl.pieces.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let (lo, hi) = (fl.breaks[k], fl.breaks[k + 1]);
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let q = p.shift(c);
        let lin = Poly(vec![c, 1.0]);
        let r1 = q.mul(&lin);
        let r2 = r1.mul(&lin);
        let moments = symmetric_moments(t, h, r2.0.len());
        let dot = |r: &Poly| -> Complex64 { r.0.iter().zip(&moments).map(|(&rk, &mk)| rk * mk).sum() };
        let phase = Complex64::from_polar(1.0, t * c);
        f += phase * dot(&q);
        f1 += phase * i * dot(&r1);
        f2 -= phase * dot(&r2);
    }
    CharFnTriple {
        f,
        fprime: f1,
        fsecond: f2,
    }
}

/// `int_{-h}^{h} s^k e^{its} ds` for `k < n`.
fn symmetric_moments(t: f64, h: f64, n: usize) -> Vec<Complex64> {
    let x = t * h;
    let mut cos_part = vec![0.0; n];
    let mut sin_part = vec![0.0; n];
    if x.abs() <= 2.0 {
        // int_0^h s^k cos(ts) ds = h^{k+1} sum_j (-1)^j x^{2j} / ((2j)! (k+2j+1)),
        // and the sine analogue with odd powers.
        let mut hk = h;
        for k in 0..n {
            let mut term = 1.0; // (-1)^j x^{2j} / (2j)!
            let mut cs = 0.0;
            let mut sn = 0.0;
            for j in 0..40 {
                let e = (k + 2 * j) as f64;
                let c_add = term / (e + 1.0);
                let odd = term * x / (2 * j + 1) as f64;
                let s_add = odd / (e + 2.0);
                cs += c_add;
                sn += s_add;
                if c_add.abs() <= 1e-18 * cs.abs() && s_add.abs() <= 1e-18 * sn.abs().max(f64::MIN_POSITIVE) {
                    break;
                }
                term = -odd * x / (2 * j + 2) as f64;
                if term == 0.0 {
                    break;
                }
            }
            cos_part[k] = hk * cs;
            sin_part[k] = hk * sn;
            hk *= h;
        }
    } else {
        let (s, c) = x.sin_cos();
        cos_part[0] = s / t;
        sin_part[0] = (1.0 - c) / t;
        let mut hk = h;
        for k in 1..n {
            let kf = k as f64;
            cos_part[k] = hk * s / t - kf / t * sin_part[k - 1];
            sin_part[k] = -hk * c / t + kf / t * cos_part[k - 1];
            hk *= h;
        }
    }
    (0..n)
        .map(|k| {
            if k % 2 == 0 {
                Complex64::new(2.0 * cos_part[k], 0.0)
            } else {
                Complex64::new(0.0, 2.0 * sin_part[k])
            }
        })
        .collect()
}

/// Characteristic function of the size-biased law, `f'(t) / (i E X)`.
pub fn cf_size_bias(d: &Distribution, t: f64) -> Result<Complex64> {
    let fl = Flat::from_dist(d);
    let mean = fl.raw_moment(1);
    if fl.support().0 < 0.0 || !(mean > 0.0) {
        return Err(Error::SizeBiasDomain);
    }
    Ok(flat_cf(&fl, t).fprime / Complex64::new(0.0, mean))
}

/// Characteristic function of the square-biased law, `-f''(t) / E X^2`.
pub fn cf_square_bias(d: &Distribution, t: f64) -> Result<Complex64> {
    let fl = Flat::from_dist(d);
    let second = fl.raw_moment(2);
    if !(second > 0.0) {
        return Err(Error::SquareBiasDomain);
    }
    Ok(-flat_cf(&fl, t).fsecond / second)
}

/// Characteristic function of the zero-biased law, `-f'(t) / (t E X^2)`,
/// with the removable singularity at `t = 0` resolved by a Taylor series.
pub fn cf_zero_bias(d: &Distribution, t: f64) -> Result<Complex64> {
    let fl = Flat::from_dist(d);
    let mean = fl.raw_moment(1);
    if !(mean.abs() <= MEAN_ZERO_TOL) {
        return Err(Error::ZeroBiasMean(mean));
    }
    let second = fl.raw_moment(2);
    if !(second > 0.0) {
        return Err(Error::Degenerate);
    }
    Ok(flat_cf_zero_bias(&fl, t, mean, second))
}

pub(crate) fn flat_cf_zero_bias(fl: &Flat, t: f64, mean: f64, second: f64) -> Complex64 {
    let radius = fl.max_abs_support();
    if t.abs() * radius <= ZERO_BIAS_SERIES_RADIUS {
        // sum_{k>=1} (it)^{k-1} E X^{k+1} / (k! E X^2)
        let it = Complex64::new(0.0, t);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k in 1..=24 {
            fact *= k as f64;
            acc += pow * (fl.raw_moment(k + 1) / fact);
            // |E X^{k+1}| <= R^{k+1}, and odd moments may vanish, so stop on the bound
            let bound = (t.abs() * radius).powi(k as i32 - 1) * radius * radius / fact;
            if bound <= 1e-18 * second {
                break;
            }
            pow *= it;
        }
        acc / second
    } else {
        let f1 = flat_cf(fl, t).fprime;
        (f1 - Complex64::new(0.0, mean)) / (-second * t)
    }
}

pub fn normal_cf(t: f64) -> f64 {
    (-0.5 * t * t).exp()
}

pub(crate) fn require_standardized(d: &Distribution) -> Result<(f64, f64)> {
    let m = d.moments();
    if m.mean.abs() > STANDARDIZED_TOL || (m.second - 1.0).abs() > STANDARDIZED_TOL {
        return Err(Error::NotStandardized {
            mean: m.mean,
            second: m.second,
        });
    }
    Ok((m.mean, m.second))
}

/// `r(t) = |f(t) - exp(-t^2 / 2)|` for a standardized law.
pub fn normal_discrepancy(d: &Distribution, t: f64) -> Result<f64> {
    require_standardized(d)?;
    Ok((cf_eval(d, t).f - normal_cf(t)).norm())
}
