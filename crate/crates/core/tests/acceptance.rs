//! Acceptance criteria 1 to 13. Runs as a plain binary so every criterion
//! prints one line whether it passes or not; exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use sqbias::bounds::{bound_curve, compare_leading_terms, corollary2_bound, eq9_bound, power_bound};
use sqbias::extremal::{definitional_g, scan_three_point, three_point_g, two_point_stats, GridSpec, TwoPointFamily};
use sqbias::metrics::l1_distance;
use sqbias::random::LawGenerator;
use sqbias::transforms::{size_bias, square_bias, zero_bias};
use sqbias::verify::{self, random_config, Suite};
use sqbias::Distribution;

const SEED: u64 = 42;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn suite(s: Suite, count: usize) -> Result<f64, String> {
    let rep = verify::run(s, SEED, Some(count)).map_err(|c| format!("counterexample: {}", c.detail))?;
    ensure(rep.count == count && rep.max_violation <= s.tolerance(), || format!("report {rep:?}"))?;
    Ok(rep.max_violation)
}

/// `int |F - G|` for two discrete laws by sweeping the merged atoms.
fn discrete_l1(a: &Distribution, b: &Distribution) -> f64 {
    let (a, b) = (a.as_discrete().unwrap(), b.as_discrete().unwrap());
    let mut pts: Vec<f64> = a.atoms().iter().chain(b.atoms()).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let cdf = |atoms: &[f64], probs: &[f64], u: f64| -> f64 { atoms.iter().zip(probs).filter(|(x, _)| **x <= u).map(|(_, p)| p).sum() };
    pts.windows(2)
        .map(|w| (cdf(a.atoms(), a.probs(), w[0]) - cdf(b.atoms(), b.probs(), w[0])).abs() * (w[1] - w[0]))
        .sum()
}

fn c1_rademacher_zero_bias() -> Outcome {
    let start = Instant::now();
    let x = Distribution::rademacher(1.0).unwrap();
    let z = zero_bias(&x).unwrap();
    let l1 = l1_distance(&x, &z);
    let beta3 = x.abs_moment(3.0).unwrap();
    let elapsed = start.elapsed();
    ensure(z == Distribution::uniform(-1.0, 1.0).unwrap(), || format!("zero bias is {}", z.to_json()))?;
    ensure((l1 - 0.5).abs() <= 1e-12 && (l1 - beta3 / 2.0).abs() <= 1e-12, || format!("l1 = {l1}, beta3/2 = {}", beta3 / 2.0))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("l1 = {l1}, beta3/2 = {}, {elapsed:?}", beta3 / 2.0))
}

fn c2_theorem1() -> Outcome {
    let start = Instant::now();
    let v = suite(Suite::Theorem1, 500)?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    // independent sweep over the same laws
    let mut gen = LawGenerator::new(SEED);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let d = gen.standardized();
        let sq = square_bias(&d).unwrap();
        let oracle = discrete_l1(&d, &sq);
        let l1 = l1_distance(&d, &sq);
        ensure((l1 - oracle).abs() <= 1e-12, || format!("l1 {l1} vs sweep {oracle}"))?;
        let beta3: f64 = d.as_discrete().unwrap().atoms().iter().zip(d.as_discrete().unwrap().probs()).map(|(x, p)| p * x.abs().powi(3)).sum();
        ensure(oracle <= beta3 + 1e-9, || format!("sweep l1 {oracle} > beta3 {beta3}"))?;
        worst = worst.max(oracle / beta3);
    }
    Ok(format!("max violation {v:e}, max L1/beta3 {worst:.6}, {elapsed:?}"))
}

fn c3_two_point() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=99 {
        let p = k as f64 / 100.0;
        let d = TwoPointFamily::new(p).unwrap().distribution();
        let l1 = l1_distance(&d, &square_bias(&d).unwrap());
        let closed = (1.0 - 2.0 * p).abs() / (p * (1.0 - p)).sqrt();
        worst = worst.max((l1 - closed).abs());
    }
    ensure(worst <= 1e-12, || format!("max |L1 - |EX^3|| = {worst:e}"))?;
    let d = TwoPointFamily::new(0.005).unwrap().distribution();
    let ratio = l1_distance(&d, &square_bias(&d).unwrap()) / d.abs_moment(3.0).unwrap();
    ensure(ratio >= 0.99, || format!("ratio at p = 0.005 is {ratio}"))?;
    let stats = two_point_stats(0.005);
    ensure((stats.ratio - ratio).abs() <= 1e-12, || format!("stats ratio {} vs {ratio}", stats.ratio))?;
    Ok(format!("max |L1 - |EX^3|| = {worst:e}, ratio at p = 0.005 is {ratio:.6}"))
}

fn c4_moments() -> Outcome {
    let v = suite(Suite::Moments, 500)?;
    Ok(format!("max relative error {v:e}"))
}

fn c5_fixed_point() -> Outcome {
    for sigma in [0.5, 1.0, 3.0] {
        let d = Distribution::rademacher(sigma).unwrap();
        let sq = square_bias(&d).unwrap();
        let (a, b) = (d.as_discrete().unwrap(), sq.as_discrete().ok_or("square bias not discrete")?);
        let same = a.atoms().iter().zip(b.atoms()).chain(a.probs().iter().zip(b.probs())).all(|(x, y)| x.to_bits() == y.to_bits());
        ensure(same && a.len() == b.len(), || format!("sigma = {sigma}: {}", sq.to_json()))?;
    }
    Ok("bitwise equal for sigma in {0.5, 1, 3}".into())
}

fn c6_uprod() -> Outcome {
    let v = suite(Suite::Uprod, 100)?;
    Ok(format!("max sup CDF difference {v:e}"))
}

fn c7_decomposition() -> Outcome {
    let v = suite(Suite::Decomposition, 50)?;
    Ok(format!("max sup CDF difference {v:e}, two-Rademacher case included"))
}

fn c8_double_size_bias() -> Outcome {
    let mut gen = LawGenerator::new(SEED);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let d = gen.nonnegative();
        let sq = square_bias(&d).unwrap();
        let ss = size_bias(&size_bias(&d).unwrap()).unwrap();
        let (a, b) = (sq.as_discrete().unwrap(), ss.as_discrete().unwrap());
        ensure(a.len() == b.len(), || format!("law {i}: {} vs {} atoms", a.len(), b.len()))?;
        for k in 0..a.len() {
            worst = worst.max((a.atoms()[k] - b.atoms()[k]).abs()).max((a.probs()[k] - b.probs()[k]).abs());
        }
        // direct reweighting by x^2
        let dd = d.as_discrete().unwrap();
        let m2: f64 = dd.atoms().iter().zip(dd.probs()).map(|(x, p)| p * x * x).sum();
        let mut j = 0;
        for (x, p) in dd.atoms().iter().zip(dd.probs()) {
            let w = p * x * x / m2;
            if w > 0.0 {
                worst = worst.max((a.probs()[j] - w).abs());
                j += 1;
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max atomwise difference {worst:e}"))?;
    Ok(format!("max atomwise difference {worst:e}"))
}

fn c9_cf_consistency() -> Outcome {
    let v = suite(Suite::CfConsistency, 50)?;
    Ok(format!("max error {v:e}"))
}

fn c10_bound_curves() -> Outcome {
    let start = Instant::now();
    let mut gen = LawGenerator::new(SEED);
    let mut worst = (f64::INFINITY, "", 0.0);
    for i in 0..200 {
        let d = gen.standardized();
        let c = bound_curve(&d, 5.0, 50).map_err(|e| format!("law {i}: {e}"))?;
        let s = c.min_slack();
        if s.0 < worst.0 {
            worst = s;
        }
        for (k, &t) in c.t_values.iter().enumerate() {
            if t > 0.0 && c.beta3 * t <= FRAC_PI_2 {
                ensure(c.eq9[k] < c.power[k], || format!("law {i}, t = {t}: eq9 {} >= power {}", c.eq9[k], c.power[k]))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst.0 >= -1e-9, || format!("slack {} for {} at t = {}", worst.0, worst.1, worst.2))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("min slack {:e} ({} at t = {}), {elapsed:?}", worst.0, worst.1, worst.2))
}

/// `2 int_0^t u sin(u / 2) du` by composite Simpson, the once-integrated term at `beta3 = 2`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let s: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + s) * h / 3.0
}

fn c11_leading_terms() -> Outcome {
    let mut gen = LawGenerator::new(SEED);
    let mut min_gap = f64::INFINITY;
    for _ in 0..1000 {
        let beta3 = gen.uniform_in(1.0, 10.0);
        let t = (1.0 - gen.uniform()) * PI / beta3;
        let (twice, once) = compare_leading_terms(beta3, t).map_err(|e| e.to_string())?;
        ensure(twice < once, || format!("beta3 = {beta3}, t = {t}: twice {twice} >= once {once}"))?;
        min_gap = min_gap.min((once - twice) / once);
    }
    let (twice, once) = compare_leading_terms(2.0, 1.0).unwrap();
    let twice_oracle = simpson(|s| 2.0 * (1.0 - s.cos()), 0.0, 1.0, 2000);
    let once_oracle = simpson(|u| 2.0 * u * (u / 2.0).sin(), 0.0, 1.0, 2000);
    ensure((twice - twice_oracle).abs() <= 1e-12 && (once - once_oracle).abs() <= 1e-12, || {
        format!("twice {twice} vs {twice_oracle}, once {once} vs {once_oracle}")
    })?;
    ensure((twice - 0.3171).abs() <= 1e-4, || format!("twice = {twice}, expected 0.3171"))?;
    // The quoted 0.3249 is an arithmetic slip: 8(sin 0.5 - 0.5 cos 0.5) = 0.325074...,
    // confirmed by the integral above. The value is checked against the integral.
    ensure((once - 0.32507).abs() <= 1e-4, || format!("once = {once}, expected 0.32507"))?;
    Ok(format!(
        "min relative gap {min_gap:.3e}; twice = {twice:.6}, once = {once:.6} (quoted 0.3249 differs from the closed form by {:.2e})",
        once - 0.3249
    ))
}

fn c12_extremal() -> Outcome {
    let start = Instant::now();
    let spec = GridSpec::default();
    let scan = scan_three_point(&spec).map_err(|e| e.to_string())?;
    let a = scan.argmax;
    ensure(scan.max_g <= 1e-9, || format!("max g = {}", scan.max_g))?;
    ensure(a.y.abs() <= 1e-12, || format!("argmax y = {}", a.y))?;
    ensure((a.sigma2 - (-a.y * a.z).max(0.0)).abs() <= 2.0 * spec.margin, || format!("argmax sigma2 = {}, -yz = {}", a.sigma2, -a.y * a.z))?;
    let mut gen = LawGenerator::new(SEED);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cfg = random_config(&mut gen);
        let g = three_point_g(&cfg).map_err(|e| e.to_string())?;
        let d = definitional_g(&cfg).map_err(|e| e.to_string())?;
        worst = worst.max((g - d).abs());
    }
    ensure(worst <= 1e-10, || format!("case formula vs definition {worst:e}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!(
        "max g = {:e} at (x, y, z, sigma2) = ({}, {}, {}, {}), {} cells; agreement {worst:e}; {elapsed:?}",
        scan.max_g, a.x, a.y, a.z, a.sigma2, scan.cells
    ))
}

/// Dense trapezoid for the once-integrated bound.
fn eq9_trapezoid(beta3: f64, t: f64, n: usize) -> f64 {
    let h = t / n as f64;
    let f = |u: f64| 2.0 * (beta3 * u / 4.0).min(FRAC_PI_2).sin() * u * ((u * u - t * t) / 2.0).exp();
    let inner: f64 = (1..n).map(|k| f(k as f64 * h)).sum();
    h * (0.5 * (f(0.0) + f(t)) + inner)
}

/// Dense nested trapezoid for the twice-integrated bound, minimum inside the outer integral.
fn cor2_trapezoid(beta3: f64, t: f64, n: usize) -> f64 {
    let h = t / n as f64;
    let sin_at = |x: f64| x.min(FRAC_PI_2).sin();
    let a_inner = |s: f64| 2.0 * sin_at(beta3 * s / 2.0);
    let b_inner = |s: f64| (2.0 * sin_at(beta3 * s / 2.0) + 2.0 * s * s * sin_at(beta3 * s / 4.0) + s * s) * ((s * s - t * t) / 2.0).exp();
    let (mut ia, mut ib) = (0.0, 0.0);
    let mut prev = (a_inner(0.0), b_inner(0.0));
    let outer = |u: f64, ia: f64, ib: f64| ((ia + u * u * u / 3.0) * ((u * u - t * t) / 2.0).exp()).min(ib);
    let mut acc = 0.5 * outer(0.0, 0.0, 0.0);
    for k in 1..=n {
        let u = k as f64 * h;
        let cur = (a_inner(u), b_inner(u));
        ia += 0.5 * h * (prev.0 + cur.0);
        ib += 0.5 * h * (prev.1 + cur.1);
        prev = cur;
        let w = if k == n { 0.5 } else { 1.0 };
        acc += w * outer(u, ia, ib);
    }
    acc * h
}

fn c13_quadrature_oracle() -> Outcome {
    let pairs = [
        (1.0, 0.3), (1.0, 1.0), (1.0, 2.5), (1.0, 4.0),
        (1.3, 0.7), (1.3, 2.0), (1.7, 1.5), (1.7, 3.0),
        (2.0, 0.5), (2.0, 1.0), (2.0, 2.2), (2.5, 1.8),
        (3.0, 0.2), (3.0, 1.2), (4.0, 0.9), (4.0, 2.6),
        (6.86, 0.1), (6.86, 0.5), (10.0, 0.05), (10.0, 1.0),
    ];
    let mut worst = 0.0f64;
    for (beta3, t) in pairs {
        let n = 1_600_000;
        let e = (eq9_bound(beta3, t).unwrap() - eq9_trapezoid(beta3, t, n)).abs();
        let c = (corollary2_bound(beta3, t).unwrap() - cor2_trapezoid(beta3, t, n)).abs();
        ensure(e <= 1e-9 && c <= 1e-9, || format!("beta3 = {beta3}, t = {t}: eq9 off by {e:e}, cor2 off by {c:e}"))?;
        ensure(power_bound(beta3, t).unwrap() > 0.0, || "power bound".into())?;
        worst = worst.max(e).max(c);
    }
    Ok(format!("20 pairs, max deviation {worst:e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("Rademacher zero-bias identity", c1_rademacher_zero_bias),
        ("randomized L1(X, X_sq) <= E|X|^3", c2_theorem1),
        ("two-point exactness and sharpness", c3_two_point),
        ("moment identities", c4_moments),
        ("square-bias fixed point", c5_fixed_point),
        ("U X_sq equals X_z in law", c6_uprod),
        ("zero-bias decomposition of sums", c7_decomposition),
        ("double size bias", c8_double_size_bias),
        ("characteristic function consistency", c9_cf_consistency),
        ("bound curves", c10_bound_curves),
        ("once- vs twice-integrated leading terms", c11_leading_terms),
        ("three-point extremal scan", c12_extremal),
        ("quadrature against trapezoid oracles", c13_quadrature_oracle),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
