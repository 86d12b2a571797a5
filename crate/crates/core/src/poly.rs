//! Dense real polynomials in ascending-coefficient form.
//!
//! Everything here is small (degree at most 5 in practice), so the
//! representation is a plain `Vec<f64>` and operations allocate freely.

#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Poly(pub Vec<f64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn from_coeffs(c: &[f64]) -> Self {
        let mut p = Poly(c.to_vec());
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// Drop trailing exact zeros.
    pub fn trim(&mut self) {
        while self.0.last() == Some(&0.0) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    /// Degree after trimming exact zeros; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// Multiply by `x^k`.
    pub fn mul_xpow(&self, k: usize) -> Poly {
        if self.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; k];
        out.extend_from_slice(&self.0);
        Poly(out)
    }

    /// `q(s) = p(s + a)`.
    pub fn shift(&self, a: f64) -> Poly {
        // Repeated synthetic division (Horner's shift), O(n^2).
        let mut c = self.0.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] += a * c[j + 1];
            }
        }
        Poly(c)
    }

    /// `q(s) = p(s * b)`.
    pub fn scale_arg(&self, b: f64) -> Poly {
        let mut f = 1.0;
        Poly(
            self.0
                .iter()
                .map(|&c| {
                    let v = c * f;
                    f *= b;
                    v
                })
                .collect(),
        )
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        if self.0.is_empty() {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.push(0.0);
        out.extend(self.0.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
        Poly(out)
    }

    /// Exact integral over `[lo, hi]`, evaluated in coordinates local to `lo`
    /// so that narrow pieces far from the origin do not cancel.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        if self.0.is_empty() || hi == lo {
            return 0.0;
        }
        self.shift(lo).antiderivative().eval(hi - lo)
    }

    /// Real roots strictly inside `(lo, hi)`, ascending.
    ///
    /// Degree one and two use closed forms; higher degrees are isolated by
    /// splitting at the roots of the derivative and bisecting each monotone
    /// segment.
    pub fn roots_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut p = self.clone();
        p.trim();
        let scale = p.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 || lo >= hi {
            return Vec::new();
        }
        let mut roots = match p.degree() {
            0 => Vec::new(),
            1 => vec![-p.coeff(0) / p.coeff(1)],
            2 => quadratic_roots(p.coeff(2), p.coeff(1), p.coeff(0)),
            _ => {
                let crit = p.derivative().roots_in(lo, hi);
                let mut knots = Vec::with_capacity(crit.len() + 2);
                knots.push(lo);
                knots.extend(crit);
                knots.push(hi);
                knots
                    .windows(2)
                    .filter_map(|w| bisect_root(&p, w[0], w[1]))
                    .collect()
            }
        };
        roots.retain(|&r| r > lo && r < hi);
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        roots
    }
}

/// Numerically stable real roots of `a x^2 + b x + c` with `a != 0`.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    let guard = 1e-14 * (b * b).max((4.0 * a * c).abs());
    if disc < -guard {
        return Vec::new();
    }
    if disc <= guard {
        // Double root: touches zero without a sign change.
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let q = if q == 0.0 { -0.5 * disc.sqrt() } else { q };
    let mut r = vec![q / a];
    if q != 0.0 {
        r.push(c / q);
    }
    r
}

/// Root of a monotone polynomial segment, if it changes sign on `[lo, hi]`.
fn bisect_root(p: &Poly, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = p.eval(lo);
    let fhi = p.eval(hi);
    if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
