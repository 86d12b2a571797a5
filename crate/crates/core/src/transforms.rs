//! Size-, zero- and square-bias transformations in closed form.
//!
//! Discrete inputs stay discrete under size and square bias (atoms are
//! reweighted by `x / E X` and `x^2 / E X^2`; an atom at zero gets weight
//! zero and is dropped). Zero bias always produces a density,
//! `p(x) = E[X 1(X > x)] / E X^2`, which is piecewise constant for discrete
//! input. Results that would need a density of degree above two are
//! rejected with [`Error::DegreeTooHigh`].

use crate::dist::{DiscreteDist, Distribution};
use crate::error::{Error, Result};
use crate::flat::{convolve_discrete, Flat};
use crate::poly::Poly;

/// Largest `|E X|` accepted as "mean zero".
pub const MEAN_ZERO_TOL: f64 = 1e-10;

/// Transformation kinds exposed on the command line and over FFI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Size,
    Zero,
    Square,
    DoubleSize,
    UniformProduct,
}

impl TransformKind {
    pub fn apply(self, d: &Distribution) -> Result<Distribution> {
        match self {
            TransformKind::Size => size_bias(d),
            TransformKind::Zero => zero_bias(d),
            TransformKind::Square => square_bias(d),
            TransformKind::DoubleSize => double_size_bias(d),
            TransformKind::UniformProduct => uniform_product_square_bias(d),
        }
    }
}

/// `dP(X* < x) = x dF(x) / E X` for nonnegative `X` with `E X > 0`.
pub fn size_bias(d: &Distribution) -> Result<Distribution> {
    let f = Flat::from_dist(d);
    if f.support().0 < 0.0 || !(f.raw_moment(1) > 0.0) {
        return Err(Error::SizeBiasDomain);
    }
    f.reweight(&Poly(vec![0.0, 1.0])).into_distribution()
}

/// `dF_sq(x) = x^2 dF(x) / E X^2`.
pub fn square_bias(d: &Distribution) -> Result<Distribution> {
    let f = Flat::from_dist(d);
    if !(f.raw_moment(2) > 0.0) {
        return Err(Error::SquareBiasDomain);
    }
    f.reweight(&Poly(vec![0.0, 0.0, 1.0])).into_distribution()
}

/// `(X*)*`, which coincides with the square bias of a nonnegative law.
pub fn double_size_bias(d: &Distribution) -> Result<Distribution> {
    size_bias(&size_bias(d)?)
}

/// Zero-bias law of a mean-zero `X`.
pub fn zero_bias(d: &Distribution) -> Result<Distribution> {
    zero_bias_with_report(d).map(|(z, _)| z)
}

/// Zero bias plus the renormalization factor applied to the density.
///
/// The raw density `E[X 1(X > x)] / E X^2` integrates to
/// `1 - min(supp) * E X / E X^2`; with a residual floating-point mean this is
/// not exactly one, so the density is rescaled. The returned factor is the
/// raw integral (1 for an exactly centered input).
pub fn zero_bias_with_report(d: &Distribution) -> Result<(Distribution, f64)> {
    let f = Flat::from_dist(d);
    let mean = f.raw_moment(1);
    if !(mean.abs() <= MEAN_ZERO_TOL) {
        return Err(Error::ZeroBiasMean(mean));
    }
    let second = f.raw_moment(2);
    if !(second > 0.0) {
        return Err(Error::Degenerate);
    }
    let grid = f.grid();
    let n = grid.len();
    if n < 2 {
        return Err(Error::Degenerate);
    }

    // h(x) = E[X 1(X > x)] on (g_k, g_{k+1}) is tail + A(g_{k+1}) - A(x),
    // where A is an antiderivative of t f(t) on that piece.
    let mut pieces = vec![Poly::zero(); n - 1];
    let mut tail = atom_moment_at(&f, grid[n - 1]);
    for k in (0..n - 1).rev() {
        let (lo, hi) = (grid[k], grid[k + 1]);
        let dens = f.piece_at(0.5 * (lo + hi)).cloned().unwrap_or_default();
        let deg = dens.degree();
        if !dens.is_zero() && deg > 0 {
            return Err(Error::DegreeTooHigh(deg + 2));
        }
        let anti = dens.mul_xpow(1).antiderivative();
        let mut h = Poly::constant(tail + anti.eval(hi)).sub(&anti);
        h.trim();
        if h.degree() == 0 {
            // constant pieces come from discrete parts; clip rounding below zero
            h = Poly::constant(h.coeff(0).max(0.0));
        }
        tail += dens.mul_xpow(1).integrate(lo, hi) + atom_moment_at(&f, lo);
        pieces[k] = h;
    }
    let raw = Flat {
        breaks: grid,
        pieces,
        ..Flat::default()
    };
    let integral = raw.mass_split().1;
    Ok((raw.into_distribution()?, integral / second))
}

fn atom_moment_at(f: &Flat, x: f64) -> f64 {
    match f.atoms.binary_search_by(|a| a.total_cmp(&x)) {
        Ok(i) => f.masses[i] * x,
        Err(_) => 0.0,
    }
}

/// Law of `U * X_sq` with `U` uniform on `[-1, 1]` independent of the
/// square-biased `X_sq`. Defined for mean-zero discrete `X`, where
/// `X_sq` is discrete with no atom at zero.
pub fn uniform_product_square_bias(d: &Distribution) -> Result<Distribution> {
    let mean = d.mean();
    if !(mean.abs() <= MEAN_ZERO_TOL) {
        return Err(Error::ZeroBiasMean(mean));
    }
    let sq = square_bias(d)?;
    let f = Flat::from_dist(&sq);
    if f.has_density() {
        return Err(Error::Unsupported("uniform product is defined for discrete laws only"));
    }
    // each atom a contributes q / (2|a|) on [-|a|, |a|]
    let halfwidths: Vec<f64> = f.atoms.iter().map(|a| a.abs()).collect();
    let mut breaks: Vec<f64> = halfwidths.iter().flat_map(|&r| [-r, r]).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let pieces = breaks
        .windows(2)
        .map(|w| {
            let reach = w[0].abs().max(w[1].abs());
            let height: f64 = halfwidths
                .iter()
                .zip(&f.masses)
                .filter(|(&r, _)| r >= reach)
                .map(|(&r, &q)| q / (2.0 * r))
                .sum();
            Poly::constant(height)
        })
        .collect();
    Flat {
        breaks,
        pieces,
        ..Flat::default()
    }
    .into_distribution()
}

/// Exact convolution when at least one operand is discrete.
pub fn convolve(a: &Distribution, b: &Distribution) -> Result<Distribution> {
    let (disc, other) = match (a, b) {
        (Distribution::Discrete(d), o) | (o, Distribution::Discrete(d)) => (d, o),
        _ => {
            return Err(Error::Unsupported(
                "convolution needs at least one discrete operand",
            ))
        }
    };
    convolve_discrete(&Flat::from_dist(other), disc.atoms(), disc.probs()).into_distribution()
}

/// Zero-bias law of `Y_1 + ... + Y_n` for independent mean-zero discrete
/// summands, assembled as the mixture over `I` of `X - Y_I + Y_I^(z)` with
/// `P(I = i) = Var Y_i / Var X`.
pub fn zero_bias_decomposition(summands: &[Distribution]) -> Result<Distribution> {
    if summands.is_empty() {
        return Err(Error::InvalidArgument("no summands".into()));
    }
    let mut discrete: Vec<&DiscreteDist> = Vec::with_capacity(summands.len());
    for s in summands {
        let d = s.as_discrete().ok_or(Error::Unsupported(
            "zero-bias decomposition needs discrete summands",
        ))?;
        let mean = s.mean();
        if !(mean.abs() <= MEAN_ZERO_TOL) {
            return Err(Error::ZeroBiasMean(mean));
        }
        discrete.push(d);
    }
    if summands.len() == 1 {
        return zero_bias(&summands[0]);
    }
    let variances: Vec<f64> = summands.iter().map(|s| s.raw_moment(2)).collect();
    if variances.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Degenerate);
    }
    let total: f64 = variances.iter().sum();

    let mut components = Vec::with_capacity(summands.len());
    for (i, s) in summands.iter().enumerate() {
        let zb = Flat::from_dist(&zero_bias(s)?);
        let rest = discrete
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(None::<Flat>, |acc, (_, d)| {
                Some(match acc {
                    None => Flat::from_dist(&Distribution::Discrete((*d).clone())),
                    Some(f) => convolve_discrete(&f, d.atoms(), d.probs()),
                })
            })
            .expect("at least two summands");
        let part = convolve_discrete(&zb, &rest.atoms, &rest.masses).into_distribution()?;
        components.push((variances[i] / total, part));
    }
    // weights are renormalized to absorb rounding in the variance sum
    let wsum: f64 = components.iter().map(|c| c.0).sum();
    for c in &mut components {
        c.0 /= wsum;
    }
    Distribution::mixture(components)
}

/// Law of `X^2` for discrete `X`.
pub fn squared(d: &Distribution) -> Result<Distribution> {
    let dd = d
        .as_discrete()
        .ok_or(Error::Unsupported("squared law is defined for discrete input only"))?;
    let mut pairs: Vec<(f64, f64)> = dd.atoms().iter().zip(dd.probs()).map(|(&a, &p)| (a * a, p)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut atoms: Vec<f64> = Vec::new();
    let mut probs: Vec<f64> = Vec::new();
    for (a, p) in pairs {
        if atoms.last() == Some(&a) {
            *probs.last_mut().unwrap() += p;
        } else {
            atoms.push(a);
            probs.push(p);
        }
    }
    Distribution::discrete(atoms, probs)
}
