//! Two- and three-point laws behind `L1(X, X_sq) <= E|X|^3`.
//!
//! Two-point laws have closed forms for every quantity involved. For three
//! points `x < y <= 0 < z` with variance `sigma2`, the function
//! `g = L1(X, X_sq) sigma2 - E|X|^3` splits into three cases by where `sigma2`
//! sits relative to `x^2` and `z^2`; its supremum over the admissible region is
//! 0, which is the inequality. The scan here evaluates `g` on a grid.

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::metrics::l1_distance;
use crate::transforms::square_bias;

/// Standardized law with `P(X = sqrt(q/p)) = p`, `P(X = -sqrt(p/q)) = q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointFamily {
    pub p: f64,
}

impl TwoPointFamily {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!("p must lie in (0, 1), got {p}")));
        }
        Ok(TwoPointFamily { p })
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn distribution(&self) -> Distribution {
        let (p, q) = (self.p, self.q());
        Distribution::discrete(vec![-(p / q).sqrt(), (q / p).sqrt()], vec![q, p])
            .expect("two-point family is a valid law")
    }

    pub fn stats(&self) -> TwoPointStats {
        two_point_stats(self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointStats {
    pub third: f64,
    pub abs_third: f64,
    pub l1_square: f64,
    /// `l1_square / abs_third = |1 - 2p| / (1 - 2p + 2p^2)`.
    pub ratio: f64,
}

pub fn two_point_stats(p: f64) -> TwoPointStats {
    let q = 1.0 - p;
    let root = (p * q).sqrt();
    TwoPointStats {
        third: (q - p) / root,
        abs_third: (p * p + q * q) / root,
        l1_square: (q - p).abs() / root,
        ratio: (1.0 - 2.0 * p).abs() / (1.0 - 2.0 * p + 2.0 * p * p),
    }
}

/// The two-point law with `p = eps / 4`, whose ratio exceeds `1 - eps`.
pub fn sharpness_sequence(eps: f64) -> Result<TwoPointFamily> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
    }
    let fam = TwoPointFamily::new(0.25 * eps)?;
    let ratio = fam.stats().ratio;
    if ratio > 1.0 - eps {
        Ok(fam)
    } else {
        Err(Error::InvalidArgument(format!("ratio {ratio} does not exceed 1 - eps for eps = {eps}")))
    }
}

/// Which closed form of `g` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GCase {
    /// `0 < sigma2 < min(x^2, z^2)`
    Case1,
    /// `z^2 <= sigma2 < x^2`
    Case2,
    /// `x^2 <= sigma2 < z^2`
    Case3,
}

/// Mean-zero law on `x < y <= 0 < z` with variance `sigma2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreePointConfig {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub sigma2: f64,
    #[serde(skip)]
    pub p: f64,
    #[serde(skip)]
    pub q: f64,
    #[serde(skip)]
    pub r: f64,
}

impl ThreePointConfig {
    pub fn new(x: f64, y: f64, z: f64, sigma2: f64) -> Result<Self> {
        if !(x < y && y <= 0.0 && 0.0 < z) {
            return Err(Error::InvalidConfig(format!("need x < y <= 0 < z, got ({x}, {y}, {z})")));
        }
        if !(sigma2 > -y * z && sigma2 < -x * z) {
            return Err(Error::InvalidConfig(format!(
                "sigma2 = {sigma2} outside ({}, {})",
                -y * z,
                -x * z
            )));
        }
        let p = (sigma2 + y * z) / ((z - x) * (y - x));
        let q = -(sigma2 + x * z) / ((z - y) * (y - x));
        let r = (sigma2 + x * y) / ((z - x) * (z - y));
        if !(p > 0.0 && q > 0.0 && r > 0.0) || (p + q + r - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!("probabilities ({p}, {q}, {r}) are not a law")));
        }
        Ok(ThreePointConfig { x, y, z, sigma2, p, q, r })
    }

    pub fn distribution(&self) -> Result<Distribution> {
        Distribution::discrete(vec![self.x, self.y, self.z], vec![self.p, self.q, self.r])
    }

    /// `None` in the dominated region `sigma2 >= max(x^2, z^2)`.
    pub fn case(&self) -> Option<GCase> {
        let (x2, z2, s) = (self.x * self.x, self.z * self.z, self.sigma2);
        if s < x2.min(z2) {
            Some(GCase::Case1)
        } else if z2 <= s && s < x2 {
            Some(GCase::Case2)
        } else if x2 <= s && s < z2 {
            Some(GCase::Case3)
        } else {
            None
        }
    }
}

/// `g(x, y, z, sigma2)` from the case formulas.
pub fn three_point_g(cfg: &ThreePointConfig) -> Result<f64> {
    let ThreePointConfig { x, y, z, sigma2: s, .. } = *cfg;
    let den = (z - x) * (z - y);
    match cfg.case().ok_or(Error::DominatedRegion)? {
        GCase::Case1 => Ok(-2.0 * (s + x * y) * (y * z * z + s * (z - y)) / den),
        GCase::Case2 => Ok(-2.0 * z * z * z * (s + x * y) / den),
        GCase::Case3 => {
            let lin = x * x * (z - y) + y * y * (z - x) + x * y * z;
            Ok(2.0 * (-s * lin + x * y * z * (x * y - x * z - y * z)) / den)
        }
    }
}

/// `g` the long way: exact L1 to the square bias, times `sigma2`, minus `E|X|^3`.
pub fn definitional_g(cfg: &ThreePointConfig) -> Result<f64> {
    let d = cfg.distribution()?;
    let l1 = l1_distance(&d, &square_bias(&d)?);
    Ok(l1 * cfg.sigma2 - d.abs_moment(3.0)?)
}

/// Vertex of the case-1 parabola in `sigma2`: `-y(z^2 + xz - xy) / (2(z - y))`.
pub fn vertex_sigma2(x: f64, y: f64, z: f64) -> f64 {
    -y * (z * z + x * z - x * y) / (2.0 * (z - y))
}

/// `d/dy g(x, y, z, x^2)` in case 3, where `-z < x`.
pub fn case3_dg_dy_at_x2(x: f64, y: f64, z: f64) -> f64 {
    -2.0 * x * (x + z) * (y * z * (2.0 * z - y) + x * (z - y) * (z - y)) / ((z - x) * (z - y) * (z - y))
}

/// Points along one axis of the scan grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis(pub Vec<f64>);

impl Axis {
    /// `n` equally spaced points on `[lo, hi]`; a single point is `lo`.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Axis {
        match n {
            0 => Axis(Vec::new()),
            1 => Axis(vec![lo]),
            _ => Axis((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaSampling {
    /// `n` equally spaced values across the admissible interval of each triple, `margin` inside its ends.
    Uniform(usize),
    /// The same values for every triple, skipped where inadmissible.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    All,
    Case1,
    Case2,
    Case3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
    pub z: Axis,
    pub sigma2: SigmaSampling,
    pub region: Region,
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x: Axis::linspace(-5.0, -0.1, 20),
            y: Axis::linspace(-3.0, 0.0, 20),
            z: Axis::linspace(0.1, 5.0, 20),
            sigma2: SigmaSampling::Uniform(20),
            region: Region::All,
            margin: 1e-6,
        }
    }
}

impl GridSpec {
    /// Admissible `sigma2` interval for a triple, intersected with the region.
    fn sigma2_interval(&self, x: f64, y: f64, z: f64) -> (f64, f64) {
        let (x2, z2) = (x * x, z * z);
        let mut lo = (-y * z).max(0.0);
        let mut hi = (-x * z).min(x2.max(z2));
        match self.region {
            Region::All => {}
            Region::Case1 => hi = hi.min(x2.min(z2)),
            Region::Case2 => {
                lo = lo.max(z2);
                hi = hi.min(x2);
            }
            Region::Case3 => {
                lo = lo.max(x2);
                hi = hi.min(z2);
            }
        }
        (lo, hi)
    }

    fn sigma2_samples(&self, x: f64, y: f64, z: f64) -> Vec<f64> {
        let (lo, hi) = self.sigma2_interval(x, y, z);
        match &self.sigma2 {
            SigmaSampling::Uniform(n) => {
                let (a, b) = (lo + self.margin, hi - self.margin);
                if !(a <= b) || *n == 0 {
                    return Vec::new();
                }
                Axis::linspace(a, b, *n).0
            }
            // region bounds are half-open, [lo, hi); the admissibility bounds are open
            SigmaSampling::Fixed(v) => v.iter().copied().filter(|&s| s >= lo && s < hi && s > -y * z).collect(),
        }
    }

    /// Every admissible configuration, in `(x, y, z, sigma2)` order.
    pub fn configs(&self) -> Vec<ThreePointConfig> {
        let mut out = Vec::new();
        for &x in &self.x.0 {
            for &y in &self.y.0 {
                if !(x < y && y <= 0.0) {
                    continue;
                }
                for &z in &self.z.0 {
                    if !(z > 0.0) {
                        continue;
                    }
                    for s in self.sigma2_samples(x, y, z) {
                        if let Ok(cfg) = ThreePointConfig::new(x, y, z, s) {
                            if cfg.case().is_some() {
                                out.push(cfg);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanReport {
    pub max_g: f64,
    pub argmax: ThreePointConfig,
    pub cells: usize,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn lex_less(a: &ThreePointConfig, b: &ThreePointConfig) -> bool {
    (a.x, a.y, a.z, a.sigma2).partial_cmp(&(b.x, b.y, b.z, b.sigma2)) == Some(std::cmp::Ordering::Less)
}

/// Maximum of `g` over the grid; ties go to the lexicographically smallest `(x, y, z, sigma2)`.
pub fn scan_three_point(spec: &GridSpec) -> Result<ScanReport> {
    let mut best: Option<(f64, ThreePointConfig)> = None;
    let mut cells = 0;
    for cfg in spec.configs() {
        let g = three_point_g(&cfg)?;
        cells += 1;
        best = match best {
            Some((bg, bc)) if bg > g || (bg == g && !lex_less(&cfg, &bc)) => Some((bg, bc)),
            _ => Some((g, cfg)),
        };
    }
    let (max_g, argmax) = best.ok_or(Error::EmptyGrid)?;
    Ok(ScanReport { max_g, argmax, cells })
}
