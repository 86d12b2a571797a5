//! Seeded random laws for the verification suites.
//!
//! SplitMix64 seeded with the raw seed as its state, so a report can be
//! reproduced by any implementation of the same generator.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::dist::Distribution;

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

pub struct LawGenerator {
    rng: SplitMix64,
}

impl LawGenerator {
    pub fn new(seed: u64) -> Self {
        LawGenerator { rng: SplitMix64::seed_from_u64(seed) }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_M53
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.uniform() * (hi - lo + 1) as f64) as usize
    }

    /// Uniform point on the probability simplex (normalized exponentials).
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..n)
            .map(|_| -(((self.rng.next_u64() >> 11) as f64 + 0.5) * TWO_POW_M53).ln())
            .collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|v| v / total).collect()
    }

    /// `n` atoms uniform on `[lo, hi)` with simplex weights; coincident atoms are merged.
    pub fn discrete(&mut self, n: usize, lo: f64, hi: f64) -> Distribution {
        let atoms: Vec<f64> = (0..n).map(|_| self.uniform_in(lo, hi)).collect();
        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(self.simplex(n)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms = Vec::with_capacity(n);
        let mut probs: Vec<f64> = Vec::with_capacity(n);
        for (a, p) in pairs {
            if atoms.last() == Some(&a) {
                *probs.last_mut().unwrap() += p;
            } else {
                atoms.push(a);
                probs.push(p);
            }
        }
        Distribution::discrete(atoms, probs).expect("generated law is valid")
    }

    /// 2 to 6 atoms on `[-5, 5]`, then standardized.
    pub fn standardized(&mut self) -> Distribution {
        loop {
            let n = self.int_in(2, 6);
            if let Ok(d) = self.discrete(n, -5.0, 5.0).standardize() {
                return d;
            }
        }
    }

    /// 1 to 3 mirrored atom pairs, sometimes with an atom at 0, scaled to unit variance.
    pub fn symmetric_standardized(&mut self) -> Distribution {
        let pairs = self.int_in(1, 3);
        let with_zero = self.uniform() < 0.5;
        let w = self.simplex(pairs + with_zero as usize);
        let mut pos: Vec<(f64, f64)> = (0..pairs).map(|k| (self.uniform_in(0.05, 5.0), 0.5 * w[k])).collect();
        pos.sort_by(|a, b| a.0.total_cmp(&b.0));
        pos.dedup_by(|a, b| {
            let same = a.0 == b.0;
            if same {
                b.1 += a.1;
            }
            same
        });
        let second: f64 = pos.iter().map(|(a, p)| 2.0 * p * a * a).sum();
        let s = second.sqrt();
        let mut atoms: Vec<f64> = pos.iter().rev().map(|(a, _)| -a / s).collect();
        let mut probs: Vec<f64> = pos.iter().rev().map(|(_, p)| *p).collect();
        if with_zero {
            atoms.push(0.0);
            probs.push(w[pairs]);
        }
        atoms.extend(pos.iter().map(|(a, _)| a / s));
        probs.extend(pos.iter().map(|(_, p)| *p));
        Distribution::discrete(atoms, probs).expect("generated law is valid")
    }

    /// 2 to 6 atoms on `[0, 5]`.
    pub fn nonnegative(&mut self) -> Distribution {
        let n = self.int_in(2, 6);
        self.discrete(n, 0.0, 5.0)
    }

    /// 2 to 4 atoms on `[-3, 3]`, shifted to mean zero; the variance is left alone.
    pub fn mean_zero(&mut self) -> Distribution {
        loop {
            let n = self.int_in(2, 4);
            let d = self.discrete(n, -3.0, 3.0);
            if d.variance() > 1e-6 {
                return d.affine(d.mean(), 1.0).expect("shift of a valid law");
            }
        }
    }
}
