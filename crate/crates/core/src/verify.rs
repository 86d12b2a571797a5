//! Seeded randomized suites over the library's invariants.
//!
//! Each suite draws its laws from [`LawGenerator`] and reports the largest
//! violation seen. Inequalities report how far the left side exceeds the
//! right (0 when every instance holds); identities report the error. A suite
//! stops at the first instance above its tolerance and returns it.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::charfn::{cf_eval, cf_size_bias, cf_square_bias, cf_zero_bias};
use crate::dist::Distribution;
use crate::error::Result;
use crate::extremal::{definitional_g, scan_three_point, three_point_g, GridSpec, ThreePointConfig};
use crate::flat::Flat;
use crate::metrics::{cf_distance_bound, l1_distance};
use crate::random::LawGenerator;
use crate::transforms::{convolve, size_bias, square_bias, uniform_product_square_bias, zero_bias, zero_bias_decomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Moments,
    FixedPoints,
    Theorem1,
    Eq3,
    Eq8,
    CfConsistency,
    Decomposition,
    Uprod,
    Extremal,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Moments,
        Suite::FixedPoints,
        Suite::Theorem1,
        Suite::Eq3,
        Suite::Eq8,
        Suite::CfConsistency,
        Suite::Decomposition,
        Suite::Uprod,
        Suite::Extremal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Moments => "moments",
            Suite::FixedPoints => "fixed-points",
            Suite::Theorem1 => "theorem1",
            Suite::Eq3 => "eq3",
            Suite::Eq8 => "eq8",
            Suite::CfConsistency => "cf-consistency",
            Suite::Decomposition => "decomposition",
            Suite::Uprod => "uprod",
            Suite::Extremal => "extremal",
        }
    }

    pub fn default_count(self) -> usize {
        match self {
            Suite::Moments | Suite::Theorem1 => 500,
            Suite::Eq3 => 200,
            Suite::Eq8 | Suite::CfConsistency | Suite::Decomposition => 50,
            Suite::FixedPoints | Suite::Uprod => 100,
            Suite::Extremal => 1000,
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Moments | Suite::Eq3 | Suite::Eq8 | Suite::CfConsistency | Suite::Decomposition | Suite::Extremal => 1e-10,
            Suite::Theorem1 => 1e-9,
            Suite::Uprod => 1e-12,
            Suite::FixedPoints => 0.0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub count: usize,
    pub max_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub suite: String,
    pub index: usize,
    pub violation: f64,
    pub tolerance: f64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<serde_json::Value>,
}

pub type Outcome = std::result::Result<SuiteReport, Box<Counterexample>>;

struct Tracker {
    suite: Suite,
    tol: f64,
    max: f64,
}

impl Tracker {
    fn new(suite: Suite) -> Self {
        Tracker { suite, tol: suite.tolerance(), max: 0.0 }
    }

    fn fail(&self, index: usize, violation: f64, detail: String, law: Option<&Distribution>) -> Box<Counterexample> {
        Box::new(Counterexample {
            suite: self.suite.name().into(),
            index,
            violation,
            tolerance: self.tol,
            detail,
            law: law.map(|d| serde_json::from_str(&d.to_json()).expect("law serializes")),
        })
    }

    /// Records `v`; NaN counts as a violation.
    fn check(&mut self, index: usize, v: f64, law: Option<&Distribution>, detail: impl FnOnce() -> String) -> std::result::Result<(), Box<Counterexample>> {
        if v > self.tol || v.is_nan() {
            return Err(self.fail(index, v, detail(), law));
        }
        self.max = self.max.max(v);
        Ok(())
    }

    /// Turns a library error into a counterexample.
    fn ok<T>(&self, index: usize, r: Result<T>, law: Option<&Distribution>) -> std::result::Result<T, Box<Counterexample>> {
        r.map_err(|e| self.fail(index, f64::INFINITY, e.to_string(), law))
    }

    fn report(&self, count: usize) -> SuiteReport {
        SuiteReport { suite: self.suite.name().into(), count, max_violation: self.max, max_g: None }
    }
}

/// Largest `|F_a - F_b|` over 1000 equally spaced points plus every atom and breakpoint of either law.
pub fn sup_cdf_difference(a: &Distribution, b: &Distribution) -> f64 {
    let (alo, ahi) = a.support();
    let (blo, bhi) = b.support();
    let (lo, hi) = (alo.min(blo) - 0.1, ahi.max(bhi) + 0.1);
    let mut pts: Vec<f64> = (0..1000).map(|k| lo + (hi - lo) * k as f64 / 999.0).collect();
    pts.extend(Flat::from_dist(a).grid());
    pts.extend(Flat::from_dist(b).grid());
    pts.iter().map(|&u| (a.cdf(u) - b.cdf(u)).abs()).fold(0.0, f64::max)
}

pub fn run(suite: Suite, seed: u64, count: Option<usize>) -> Outcome {
    let count = count.unwrap_or(suite.default_count());
    let mut gen = LawGenerator::new(seed);
    let mut tr = Tracker::new(suite);
    match suite {
        Suite::Moments => moments(&mut tr, &mut gen, count)?,
        Suite::FixedPoints => fixed_points(&mut tr, &mut gen, count)?,
        Suite::Theorem1 => {
            for i in 0..count {
                let d = gen.standardized();
                let sq = tr.ok(i, square_bias(&d), Some(&d))?;
                let beta3 = tr.ok(i, d.abs_moment(3.0), Some(&d))?;
                let l1 = l1_distance(&d, &sq);
                tr.check(i, (l1 - beta3).max(0.0), Some(&d), || format!("L1(X, X_sq) = {l1} > E|X|^3 = {beta3}"))?;
            }
        }
        Suite::Eq3 => {
            for i in 0..count {
                let d = gen.standardized();
                let zb = tr.ok(i, zero_bias(&d), Some(&d))?;
                let beta3 = tr.ok(i, d.abs_moment(3.0), Some(&d))?;
                let l1 = l1_distance(&d, &zb);
                tr.check(i, (l1 - 0.5 * beta3).max(0.0), Some(&d), || format!("L1(X, X_z) = {l1} > E|X|^3 / 2 = {}", 0.5 * beta3))?;
            }
        }
        Suite::Eq8 => {
            for i in 0..count {
                let a = gen.standardized();
                let b = gen.standardized();
                let l1 = l1_distance(&a, &b);
                for k in -40..=40 {
                    let t = 0.25 * k as f64;
                    let lhs = (cf_eval(&a, t).f - cf_eval(&b, t).f).norm();
                    let rhs = cf_distance_bound(l1, t);
                    tr.check(i, (lhs - rhs).max(0.0), Some(&a), || format!("t = {t}: |f_a - f_b| = {lhs} > {rhs}"))?;
                }
            }
        }
        Suite::CfConsistency => cf_consistency(&mut tr, &mut gen, count)?,
        Suite::Decomposition => decomposition(&mut tr, &mut gen, count)?,
        Suite::Uprod => {
            for i in 0..count {
                let d = gen.symmetric_standardized();
                let u = tr.ok(i, uniform_product_square_bias(&d), Some(&d))?;
                let z = tr.ok(i, zero_bias(&d), Some(&d))?;
                let diff = sup_cdf_difference(&u, &z);
                tr.check(i, diff, Some(&d), || format!("sup |F_uprod - F_z| = {diff}"))?;
            }
        }
        Suite::Extremal => return extremal(&mut tr, &mut gen, count),
    }
    Ok(tr.report(count))
}

fn moments(tr: &mut Tracker, gen: &mut LawGenerator, count: usize) -> std::result::Result<(), Box<Counterexample>> {
    for i in 0..count {
        let d = gen.standardized();
        let s2 = d.raw_moment(2);
        let zb = tr.ok(i, zero_bias(&d), Some(&d))?;
        let sq = tr.ok(i, square_bias(&d), Some(&d))?;
        for n in 1..=3usize {
            let lhs = s2 * zb.raw_moment(n);
            let rhs = d.raw_moment(n + 2) / (n + 1) as f64;
            let scale = tr.ok(i, d.abs_moment((n + 2) as f64), Some(&d))?;
            let err = (lhs - rhs).abs() / scale;
            tr.check(i, err, Some(&d), || format!("zero bias, n = {n}: {lhs} vs {rhs}"))?;
        }
        for r in [0.5, 1.0, 2.5] {
            let lhs = s2 * tr.ok(i, sq.abs_moment(r), Some(&d))?;
            let rhs = tr.ok(i, d.abs_moment(r + 2.0), Some(&d))?;
            let err = (lhs - rhs).abs() / rhs;
            tr.check(i, err, Some(&d), || format!("square bias, r = {r}: {lhs} vs {rhs}"))?;
        }
    }
    Ok(())
}

fn fixed_points(tr: &mut Tracker, gen: &mut LawGenerator, count: usize) -> std::result::Result<(), Box<Counterexample>> {
    let fixed = [0.5, 1.0, 3.0];
    let sigmas: Vec<f64> = fixed.into_iter().chain((0..count).map(|_| gen.uniform_in(0.01, 10.0))).collect();
    for (i, &sigma) in sigmas.iter().enumerate() {
        let d = tr.ok(i, Distribution::rademacher(sigma), None)?;
        let sq = tr.ok(i, square_bias(&d), Some(&d))?;
        let v = if sq == d { 0.0 } else { f64::INFINITY };
        tr.check(i, v, Some(&d), || format!("square bias of Rademacher({sigma}) is {}", sq.to_json()))?;
    }
    Ok(())
}

fn cf_consistency(tr: &mut Tracker, gen: &mut LawGenerator, count: usize) -> std::result::Result<(), Box<Counterexample>> {
    let ts: Vec<f64> = (0..=50).map(|k| 0.1 * k as f64).collect();
    for i in 0..count {
        let d = gen.standardized();
        let zb = tr.ok(i, zero_bias(&d), Some(&d))?;
        let sq = tr.ok(i, square_bias(&d), Some(&d))?;
        let nn = gen.nonnegative();
        let sz = tr.ok(i, size_bias(&nn), Some(&nn))?;
        for &t in &ts {
            let e = (cf_eval(&zb, t).f - tr.ok(i, cf_zero_bias(&d, t), Some(&d))?).norm();
            tr.check(i, e, Some(&d), || format!("zero bias at t = {t}: error {e}"))?;
            let e = (cf_eval(&sq, t).f - tr.ok(i, cf_square_bias(&d, t), Some(&d))?).norm();
            tr.check(i, e, Some(&d), || format!("square bias at t = {t}: error {e}"))?;
            let e = (cf_eval(&sz, t).f - tr.ok(i, cf_size_bias(&nn, t), Some(&nn))?).norm();
            tr.check(i, e, Some(&nn), || format!("size bias at t = {t}: error {e}"))?;
        }
    }
    Ok(())
}

fn decomposition(tr: &mut Tracker, gen: &mut LawGenerator, count: usize) -> std::result::Result<(), Box<Counterexample>> {
    for i in 0..count {
        let summands: Vec<Distribution> = if i == 0 {
            let r = tr.ok(i, Distribution::rademacher(1.0), None)?;
            vec![r.clone(), r]
        } else {
            let n = gen.int_in(2, 4);
            (0..n).map(|_| gen.mean_zero()).collect()
        };
        let mut sum = summands[0].clone();
        for s in &summands[1..] {
            sum = tr.ok(i, convolve(&sum, s), Some(s))?;
        }
        let direct = tr.ok(i, zero_bias(&sum), Some(&sum))?;
        let mixed = tr.ok(i, zero_bias_decomposition(&summands), Some(&sum))?;
        let diff = sup_cdf_difference(&direct, &mixed);
        tr.check(i, diff, Some(&sum), || format!("{} summands: sup |F_direct - F_mixture| = {diff}", summands.len()))?;
    }
    Ok(())
}

/// A uniformly drawn admissible three-point configuration.
pub fn random_config(gen: &mut LawGenerator) -> ThreePointConfig {
    loop {
        let x = gen.uniform_in(-5.0, -0.1);
        let y = gen.uniform_in(x, 0.0);
        let z = gen.uniform_in(0.1, 5.0);
        let lo = (-y * z).max(0.0) + 1e-6;
        let hi = (-x * z).min((x * x).max(z * z)) - 1e-6;
        if !(lo < hi) || x >= y {
            continue;
        }
        if let Ok(cfg) = ThreePointConfig::new(x, y, z, gen.uniform_in(lo, hi)) {
            if cfg.case().is_some() {
                return cfg;
            }
        }
    }
}

fn extremal(tr: &mut Tracker, gen: &mut LawGenerator, count: usize) -> Outcome {
    let scan = tr.ok(0, scan_three_point(&GridSpec::default()), None)?;
    if scan.max_g > 1e-9 {
        let a = scan.argmax;
        return Err(tr.fail(0, scan.max_g, format!("g = {} > 0 at ({}, {}, {}, {})", scan.max_g, a.x, a.y, a.z, a.sigma2), None));
    }
    for i in 0..count {
        let cfg = random_config(gen);
        let g = tr.ok(i, three_point_g(&cfg), None)?;
        let d = tr.ok(i, definitional_g(&cfg), None)?;
        let law = cfg.distribution().ok();
        tr.check(i, (g - d).abs(), law.as_ref(), || format!("case formula {g} vs definition {d} at {cfg:?}"))?;
    }
    let mut rep = tr.report(count);
    rep.max_g = Some(scan.max_g);
    Ok(rep)
}
