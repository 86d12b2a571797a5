//! Exact representations of the laws the transforms act on.
//!
//! Three shapes are supported: finite discrete laws, compactly supported
//! piecewise-quadratic densities, and finite mixtures of either. All values
//! are validated on construction and immutable afterwards.
//!
//! The distribution function follows the left-continuous convention
//! `F(u) = P(X < u)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat::Flat;
use crate::poly::Poly;

/// Tolerance on probability sums, mixture weights and density integrals.
pub const NORMALIZATION_TOL: f64 = 1e-12;

const MAX_MIXTURE_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    atoms: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("discrete law needs at least one atom"));
        }
        if atoms.len() != probs.len() {
            return Err(invalid(format!(
                "{} atoms but {} probabilities",
                atoms.len(),
                probs.len()
            )));
        }
        if atoms.iter().any(|a| !a.is_finite()) {
            return Err(invalid("atoms must be finite"));
        }
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("atoms must be strictly increasing"));
        }
        if probs.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(invalid("probabilities must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(invalid(format!("probabilities sum to {total}, not 1")));
        }
        // normalize negative zero so serialization is stable
        let atoms = atoms.into_iter().map(|a| a + 0.0).collect();
        Ok(DiscreteDist { atoms, probs })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn cdf(&self, u: f64) -> f64 {
        let k = self.atoms.partition_point(|&a| a < u);
        self.probs[..k].iter().sum::<f64>().min(1.0)
    }
}

/// Density `c0 + c1 x + c2 x^2` on each interval between consecutive
/// breakpoints, zero outside the first and last breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseDensity {
    breakpoints: Vec<f64>,
    coeffs: Vec<[f64; 3]>,
}

impl PiecewiseDensity {
    pub fn new(breakpoints: Vec<f64>, coeffs: Vec<[f64; 3]>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid("density needs at least two breakpoints"));
        }
        if coeffs.len() + 1 != breakpoints.len() {
            return Err(invalid(format!(
                "{} breakpoints need {} coefficient triples, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                coeffs.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || coeffs.iter().flatten().any(|c| !c.is_finite()) {
            return Err(invalid("density breakpoints and coefficients must be finite"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
        let mut total = 0.0;
        for (k, c) in coeffs.iter().enumerate() {
            let (lo, hi) = (breakpoints[k], breakpoints[k + 1]);
            let p = Poly::from_coeffs(c);
            let mut probe = vec![p.eval(lo), p.eval(hi)];
            if c[2] != 0.0 {
                let x = -c[1] / (2.0 * c[2]);
                if x > lo && x < hi {
                    probe.push(p.eval(x));
                }
            }
            let scale = probe.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            if probe.iter().any(|&v| v < -NORMALIZATION_TOL * scale) {
                return Err(invalid(format!("density is negative on [{lo}, {hi}]")));
            }
            total += p.integrate(lo, hi);
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(invalid(format!("density integrates to {total}, not 1")));
        }
        let breakpoints = breakpoints.into_iter().map(|b| b + 0.0).collect();
        let coeffs = coeffs.into_iter().map(|c| c.map(|v| v + 0.0)).collect();
        Ok(PiecewiseDensity { breakpoints, coeffs })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn coeffs(&self) -> &[[f64; 3]] {
        &self.coeffs
    }

    /// Density value at `x`; at a breakpoint the right-hand piece is used.
    pub fn pdf(&self, x: f64) -> f64 {
        let n = self.breakpoints.len();
        if x < self.breakpoints[0] || x >= self.breakpoints[n - 1] {
            return 0.0;
        }
        let k = self.breakpoints.partition_point(|&b| b <= x) - 1;
        let [c0, c1, c2] = self.coeffs[k];
        c0 + x * (c1 + x * c2)
    }

    fn cdf(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let (lo, hi) = (self.breakpoints[k], self.breakpoints[k + 1]);
            if u <= lo {
                break;
            }
            acc += Poly::from_coeffs(c).integrate(lo, hi.min(u));
        }
        acc.clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDist {
    components: Vec<(f64, Distribution)>,
}

impl MixtureDist {
    pub fn new(components: Vec<(f64, Distribution)>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("mixture needs at least one component"));
        }
        if components.iter().any(|(w, _)| !(*w > 0.0) || !w.is_finite()) {
            return Err(invalid("mixture weights must be positive"));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(invalid(format!("mixture weights sum to {total}, not 1")));
        }
        let m = MixtureDist { components };
        if m.depth() > MAX_MIXTURE_DEPTH {
            return Err(invalid("mixture nesting too deep"));
        }
        Ok(m)
    }

    pub fn components(&self) -> &[(f64, Distribution)] {
        &self.components
    }

    fn depth(&self) -> usize {
        1 + self
            .components
            .iter()
            .map(|(_, d)| match d {
                Distribution::Mixture(m) => m.depth(),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Exact moments of a law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet {
    pub mean: f64,
    /// `E X^2`
    pub second: f64,
    /// `E X^3`
    pub third: f64,
    /// `E |X|^3`
    pub abs_third: f64,
}

impl MomentSet {
    pub fn variance(&self) -> f64 {
        self.second - self.mean * self.mean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr", into = "DistributionRepr")]
pub enum Distribution {
    Discrete(DiscreteDist),
    Density(PiecewiseDensity),
    Mixture(MixtureDist),
}

impl Distribution {
    pub fn discrete(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        DiscreteDist::new(atoms, probs).map(Distribution::Discrete)
    }

    pub fn density(breakpoints: Vec<f64>, coeffs: Vec<[f64; 3]>) -> Result<Self> {
        PiecewiseDensity::new(breakpoints, coeffs).map(Distribution::Density)
    }

    pub fn mixture(components: Vec<(f64, Distribution)>) -> Result<Self> {
        MixtureDist::new(components).map(Distribution::Mixture)
    }

    pub fn point_mass(c: f64) -> Result<Self> {
        Self::discrete(vec![c], vec![1.0])
    }

    /// `P(X = -sigma) = P(X = sigma) = 1/2`.
    pub fn rademacher(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidArgument("rademacher scale must be positive".into()));
        }
        Self::discrete(vec![-sigma, sigma], vec![0.5, 0.5])
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidArgument("uniform needs lo < hi".into()));
        }
        Self::density(vec![lo, hi], vec![[1.0 / (hi - lo), 0.0, 0.0]])
    }

    pub fn as_discrete(&self) -> Option<&DiscreteDist> {
        match self {
            Distribution::Discrete(d) => Some(d),
            _ => None,
        }
    }

    /// `F(u) = P(X < u)`.
    pub fn cdf(&self, u: f64) -> f64 {
        match self {
            Distribution::Discrete(d) => d.cdf(u),
            Distribution::Density(p) => p.cdf(u),
            Distribution::Mixture(m) => m
                .components
                .iter()
                .map(|(w, d)| w * d.cdf(u))
                .sum::<f64>()
                .clamp(0.0, 1.0),
        }
    }

    pub fn moments(&self) -> MomentSet {
        let f = Flat::from_dist(self);
        MomentSet {
            mean: f.raw_moment(1),
            second: f.raw_moment(2),
            third: f.raw_moment(3),
            abs_third: f.abs_moment(3.0),
        }
    }

    /// `E X^k`.
    pub fn raw_moment(&self, k: usize) -> f64 {
        Flat::from_dist(self).raw_moment(k)
    }

    /// `E |X|^r`, `r > 0`.
    pub fn abs_moment(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("moment order {r} must be positive")));
        }
        Ok(Flat::from_dist(self).abs_moment(r))
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    /// Central second moment, computed after centering.
    pub fn variance(&self) -> f64 {
        let f = Flat::from_dist(self);
        let mu = f.raw_moment(1);
        f.affine(mu, 1.0).raw_moment(2)
    }

    /// Smallest and largest points of the support.
    pub fn support(&self) -> (f64, f64) {
        Flat::from_dist(self).support()
    }

    /// Law of `(X - shift) * scale`, preserving the shape of every component.
    pub fn affine(&self, shift: f64, scale: f64) -> Result<Self> {
        if scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::InvalidArgument("affine map needs a finite nonzero scale".into()));
        }
        match self {
            Distribution::Discrete(d) => {
                let mut pairs: Vec<(f64, f64)> = d
                    .atoms
                    .iter()
                    .zip(&d.probs)
                    .map(|(&a, &p)| ((a - shift) * scale, p))
                    .collect();
                if scale < 0.0 {
                    pairs.reverse();
                }
                Self::discrete(pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
            }
            Distribution::Density(_) => {
                let f = Flat::from_dist(self).affine(shift, scale);
                let coeffs = f.pieces.iter().map(|p| [0, 1, 2].map(|k| p.coeff(k))).collect();
                Self::density(f.breaks, coeffs)
            }
            Distribution::Mixture(m) => {
                let comps = m
                    .components
                    .iter()
                    .map(|(w, d)| Ok((*w, d.affine(shift, scale)?)))
                    .collect::<Result<Vec<_>>>()?;
                Self::mixture(comps)
            }
        }
    }

    /// Law of `c X`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        self.affine(0.0, c)
    }

    /// Affine image with mean 0 and variance 1.
    pub fn standardize(&self) -> Result<Self> {
        let f = Flat::from_dist(self);
        let mu = f.raw_moment(1);
        let var = f.affine(mu, 1.0).raw_moment(2);
        let (lo, hi) = f.support();
        // variance below rounding level of the support is a point mass
        if !(var > 1e-24 * (lo * lo).max(hi * hi).max(1e-300)) {
            return Err(Error::Degenerate);
        }
        self.affine(mu, 1.0 / var.sqrt())
    }

    /// Whether mean and second moment are 0 and 1 within `tol`.
    pub fn is_standardized(&self, tol: f64) -> bool {
        let m = self.moments();
        m.mean.abs() <= tol && (m.second - 1.0).abs() <= tol
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("distribution serializes")
    }
}

/// Mixture of `(weight, law)` pairs.
pub fn mixture(components: Vec<(f64, Distribution)>) -> Result<Distribution> {
    Distribution::mixture(components)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDistribution(msg.into())
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum DistributionRepr {
    Discrete {
        atoms: Vec<f64>,
        probs: Vec<f64>,
    },
    Density {
        breakpoints: Vec<f64>,
        coeffs: Vec<[f64; 3]>,
    },
    Mixture {
        components: Vec<ComponentRepr>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentRepr {
    weight: f64,
    dist: Distribution,
}

impl TryFrom<DistributionRepr> for Distribution {
    type Error = Error;

    fn try_from(r: DistributionRepr) -> Result<Self> {
        match r {
            DistributionRepr::Discrete { atoms, probs } => Distribution::discrete(atoms, probs),
            DistributionRepr::Density { breakpoints, coeffs } => Distribution::density(breakpoints, coeffs),
            DistributionRepr::Mixture { components } => {
                Distribution::mixture(components.into_iter().map(|c| (c.weight, c.dist)).collect())
            }
        }
    }
}

impl From<Distribution> for DistributionRepr {
    fn from(d: Distribution) -> Self {
        match d {
            Distribution::Discrete(d) => DistributionRepr::Discrete {
                atoms: d.atoms,
                probs: d.probs,
            },
            Distribution::Density(p) => DistributionRepr::Density {
                breakpoints: p.breakpoints,
                coeffs: p.coeffs,
            },
            Distribution::Mixture(m) => DistributionRepr::Mixture {
                components: m
                    .components
                    .into_iter()
                    .map(|(weight, dist)| ComponentRepr { weight, dist })
                    .collect(),
            },
        }
    }
}
