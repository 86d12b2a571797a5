//! Canonical flattened form of a [`Distribution`]: a finite set of atoms plus
//! a piecewise-polynomial density on a single breakpoint grid. Mixtures are
//! merged into this form so that every downstream computation (transforms,
//! moments, characteristic functions, L1 distances) handles one shape.

use crate::dist::{DiscreteDist, Distribution, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Debug, Clone, Default)]
pub(crate) struct Flat {
    /// Strictly increasing.
    pub atoms: Vec<f64>,
    pub masses: Vec<f64>,
    /// Strictly increasing; empty when there is no continuous part.
    pub breaks: Vec<f64>,
    /// Density on `[breaks[k], breaks[k + 1]]`, absolute coordinates.
    pub pieces: Vec<Poly>,
}

impl Flat {
    pub fn from_dist(d: &Distribution) -> Flat {
        match d {
            Distribution::Discrete(dd) => Flat {
                atoms: dd.atoms().to_vec(),
                masses: dd.probs().to_vec(),
                ..Flat::default()
            },
            Distribution::Density(pd) => Flat {
                breaks: pd.breakpoints().to_vec(),
                pieces: pd.coeffs().iter().map(|c| Poly::from_coeffs(c)).collect(),
                ..Flat::default()
            },
            Distribution::Mixture(m) => {
                let parts: Vec<(f64, Flat)> = m
                    .components()
                    .iter()
                    .map(|(w, c)| (*w, Flat::from_dist(c)))
                    .collect();
                Flat::merge(&parts)
            }
        }
    }

    /// Weighted sum of flattened measures.
    pub fn merge(parts: &[(f64, Flat)]) -> Flat {
        let mut pairs: Vec<(f64, f64)> = parts
            .iter()
            .flat_map(|(w, f)| f.atoms.iter().zip(&f.masses).map(move |(&a, &m)| (a, w * m)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (atoms, masses) = merge_sorted_atoms(pairs);

        let mut breaks: Vec<f64> = parts.iter().flat_map(|(_, f)| f.breaks.iter().copied()).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let pieces = breaks
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                parts.iter().fold(Poly::zero(), |acc, (wt, f)| match f.piece_at(mid) {
                    Some(p) => acc.add(&p.scale(*wt)),
                    None => acc,
                })
            })
            .collect();
        Flat { atoms, masses, breaks, pieces }
    }

    /// Density polynomial covering the open-interval point `x`.
    pub fn piece_at(&self, x: f64) -> Option<&Poly> {
        if self.breaks.len() < 2 || x <= self.breaks[0] || x >= *self.breaks.last().unwrap() {
            return None;
        }
        let k = self.breaks.partition_point(|&b| b <= x) - 1;
        self.pieces.get(k)
    }

    pub fn has_density(&self) -> bool {
        self.pieces.iter().any(|p| !p.is_zero())
    }

    /// Sorted union of atoms and density breakpoints.
    pub fn grid(&self) -> Vec<f64> {
        let mut g: Vec<f64> = self.atoms.iter().chain(&self.breaks).copied().collect();
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }

    /// Smallest and largest points carrying mass.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if let (Some(&a), Some(&b)) = (self.atoms.first(), self.atoms.last()) {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        for (k, p) in self.pieces.iter().enumerate() {
            if !p.is_zero() {
                lo = lo.min(self.breaks[k]);
                hi = hi.max(self.breaks[k + 1]);
            }
        }
        (lo, hi)
    }

    pub fn max_abs_support(&self) -> f64 {
        let (lo, hi) = self.support();
        lo.abs().max(hi.abs())
    }

    pub fn raw_moment(&self, k: usize) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .zip(&self.masses)
            .map(|(&a, &m)| m * a.powi(k as i32))
            .sum();
        let cont: f64 = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| p.mul_xpow(k).integrate(self.breaks[i], self.breaks[i + 1]))
            .sum();
        atoms + cont
    }

    /// `E|X|^r` for real `r > 0`, in closed form on every density piece.
    pub fn abs_moment(&self, r: f64) -> f64 {
        if r.fract() == 0.0 && r <= 64.0 && (r as usize).is_multiple_of(2) {
            return self.raw_moment(r as usize);
        }
        let atoms: f64 = self
            .atoms
            .iter()
            .zip(&self.masses)
            .map(|(&a, &m)| m * a.abs().powf(r))
            .sum();
        let mut cont = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
            if lo < 0.0 {
                // x = -y on the negative part
                let reflected = p.scale_arg(-1.0);
                cont += abs_power_integral(&reflected, (-hi).max(0.0), -lo, r);
            }
            if hi > 0.0 {
                cont += abs_power_integral(p, lo.max(0.0), hi, r);
            }
        }
        atoms + cont
    }

    /// Law of `(X - shift) * scale`, `scale != 0`.
    pub fn affine(&self, shift: f64, scale: f64) -> Flat {
        let mut pairs: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .zip(&self.masses)
            .map(|(&a, &m)| ((a - shift) * scale, m))
            .collect();
        let mut breaks: Vec<f64> = self.breaks.iter().map(|&b| (b - shift) * scale).collect();
        // f_Y(y) = f(shift + y / scale) / |scale|
        let mut pieces: Vec<Poly> = self
            .pieces
            .iter()
            .map(|p| p.shift(shift).scale_arg(1.0 / scale).scale(1.0 / scale.abs()))
            .collect();
        if scale < 0.0 {
            pairs.reverse();
            breaks.reverse();
            pieces.reverse();
        }
        Flat {
            atoms: pairs.iter().map(|p| p.0).collect(),
            masses: pairs.iter().map(|p| p.1).collect(),
            breaks,
            pieces,
        }
    }

    /// Reweight by the polynomial `w(x)` (unnormalized); zero-mass atoms drop.
    pub fn reweight(&self, w: &Poly) -> Flat {
        let mut atoms = Vec::new();
        let mut masses = Vec::new();
        for (&a, &m) in self.atoms.iter().zip(&self.masses) {
            let nm = m * w.eval(a);
            if nm != 0.0 {
                atoms.push(a);
                masses.push(nm);
            }
        }
        Flat {
            atoms,
            masses,
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.mul(w)).collect(),
        }
    }

    /// Total mass of the atomic and continuous parts.
    pub fn mass_split(&self) -> (f64, f64) {
        let atoms: f64 = self.masses.iter().sum();
        let cont: f64 = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| p.integrate(self.breaks[i], self.breaks[i + 1]))
            .sum();
        (atoms, cont)
    }

    /// Normalize to total mass one and convert back to a validated
    /// [`Distribution`]: discrete, density, or a two-component mixture.
    pub fn into_distribution(mut self) -> Result<Distribution> {
        self.trim_density();
        let (ma, mc) = self.mass_split();
        let has_atoms = !self.atoms.is_empty();
        let has_density = self.has_density();
        let total = if has_atoms { ma } else { 0.0 } + if has_density { mc } else { 0.0 };
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution("no probability mass".into()));
        }
        let discrete = if has_atoms {
            let probs = self.masses.iter().map(|&m| m / ma).collect();
            Some(DiscreteDist::new(self.atoms.clone(), probs)?)
        } else {
            None
        };
        let density = if has_density {
            let mut coeffs = Vec::with_capacity(self.pieces.len());
            for p in &self.pieces {
                let deg = p.degree();
                if deg > 2 {
                    return Err(Error::DegreeTooHigh(deg));
                }
                coeffs.push([0, 1, 2].map(|k| p.coeff(k) / mc + 0.0));
            }
            Some(PiecewiseDensity::new(self.breaks.clone(), coeffs)?)
        } else {
            None
        };
        match (discrete, density) {
            (Some(d), None) => Ok(Distribution::Discrete(d)),
            (None, Some(p)) => Ok(Distribution::Density(p)),
            (Some(d), Some(p)) => Distribution::mixture(vec![
                (ma / total, Distribution::Discrete(d)),
                (mc / total, Distribution::Density(p)),
            ]),
            (None, None) => unreachable!("total mass is positive"),
        }
    }

    /// Remove zero pieces at either end of the density grid.
    fn trim_density(&mut self) {
        while self.pieces.first().is_some_and(Poly::is_zero) {
            self.pieces.remove(0);
            self.breaks.remove(0);
        }
        while self.pieces.last().is_some_and(Poly::is_zero) {
            self.pieces.pop();
            self.breaks.pop();
        }
        if self.pieces.is_empty() {
            self.breaks.clear();
        }
    }
}

fn merge_sorted_atoms(pairs: Vec<(f64, f64)>) -> (Vec<f64>, Vec<f64>) {
    let mut atoms: Vec<f64> = Vec::with_capacity(pairs.len());
    let mut masses: Vec<f64> = Vec::with_capacity(pairs.len());
    for (a, m) in pairs {
        if atoms.last() == Some(&a) {
            *masses.last_mut().unwrap() += m;
        } else {
            atoms.push(a);
            masses.push(m);
        }
    }
    (atoms, masses)
}

/// `int_lo^hi x^r p(x) dx` for `0 <= lo < hi`.
fn abs_power_integral(p: &Poly, lo: f64, hi: f64, r: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let e = r + k as f64 + 1.0;
            c * (hi.powf(e) - lo.powf(e)) / e
        })
        .sum()
}

/// Discrete law as parallel slices, the operand side of exact convolutions.
pub(crate) fn convolve_discrete(a: &Flat, atoms: &[f64], probs: &[f64]) -> Flat {
    let mut pairs: Vec<(f64, f64)> = a
        .atoms
        .iter()
        .zip(&a.masses)
        .flat_map(|(&x, &m)| atoms.iter().zip(probs).map(move |(&y, &p)| (x + y, m * p)))
        .collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    let (out_atoms, out_masses) = merge_sorted_atoms(pairs);

    // sum_j p_j f(x - a_j) on the union of translated grids
    let mut breaks: Vec<f64> = atoms
        .iter()
        .flat_map(|&y| a.breaks.iter().map(move |&b| b + y))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let shifted: Vec<(f64, Flat)> = atoms
        .iter()
        .zip(probs)
        .map(|(&y, &p)| {
            let f = Flat {
                breaks: a.breaks.iter().map(|&b| b + y).collect(),
                pieces: a.pieces.iter().map(|q| q.shift(-y)).collect(),
                ..Flat::default()
            };
            (p, f)
        })
        .collect();
    let pieces = breaks
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            shifted.iter().fold(Poly::zero(), |acc, (p, f)| match f.piece_at(mid) {
                Some(q) => acc.add(&q.scale(*p)),
                None => acc,
            })
        })
        .collect();
    Flat {
        atoms: out_atoms,
        masses: out_masses,
        breaks,
        pieces,
    }
}
