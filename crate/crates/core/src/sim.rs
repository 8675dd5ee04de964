//! Seeded generative processes whose limiting laws are catalog entries, and
//! one-sample Kolmogorov–Smirnov fits against the predicted densities.
//!
//! Every sample stream comes from `ChaCha20Rng::seed_from_u64(seed)`, drawn
//! sequentially, so a fixed [`ProcessSpec`] always yields the same bytes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use crate::catalog::{self, to_params, Params};
use crate::error::{Error, Result};
use crate::maxent::GridDistribution;
use crate::transforms::{superstatistics_mix, TransformKernel};

/// Asymptotic KS critical constant at α ≈ 0.01: reject when `D ≥ 1.63/√n`.
pub const KS_CRITICAL: f64 = 1.63;
pub const MIN_SAMPLE_COUNT: usize = 1000;
pub const DEFAULT_SAMPLE_COUNT: usize = 100_000;
pub const DEFAULT_SEED: u64 = 42;
/// Seeds of the multi-seed scenario suite; the first is the default.
pub const SUITE_SEEDS: [u64; 4] = [42, 1, 2, 3];

pub const SCENARIOS: [&str; 6] = [
    "waiting_time_gamma",
    "product_lognormal",
    "maxima_gumbel",
    "maxima_frechet",
    "stable_sum_cauchy",
    "superstat_lomax",
];

pub fn ks_threshold(sample_count: usize) -> f64 {
    KS_CRITICAL / (sample_count as f64).sqrt()
}

/// Law of each positive factor in a product process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum FactorLaw {
    /// `e^U` with `U` uniform, centered, of the given variance.
    LogUniform { log_variance: f64 },
}

/// Parent law of a sample-maximum process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Parent {
    /// Catalog `exponential`; maxima are reported as `rate·M − log n`.
    Exponential { rate: f64 },
    /// Catalog `pareto_i` with `lambda = tail_gamma + 1`; maxima are
    /// reported as `M / (lower·n^{1/tail_gamma})`.
    Pareto { tail_gamma: f64, lower: f64 },
}

/// Normalization of a sum of `n` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rescale {
    /// `S/n`, the Cauchy (γ = 1) normalization.
    Mean,
    /// `S/√n`, the Gaussian (γ = 2) normalization.
    RootN,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Process {
    /// Time until the k-th event of a Poisson process of the given rate.
    WaitingTimeKth { k: u32, rate: f64 },
    /// Product of `n` i.i.d. positive factors.
    ProductOfPerturbations { n: u32, factor_law: FactorLaw },
    /// Standardized maximum of `n` i.i.d. parent draws.
    SampleMaximum { n: u32, parent: Parent },
    /// Rescaled sum of `n` symmetric draws. `tail_gamma = 1` uses standard
    /// Cauchy terms, `tail_gamma = 2` unit-variance uniform terms.
    StableSum { n: u32, tail_gamma: f64, rescale: Rescale },
    /// Exponential waiting time whose rate is drawn from a catalog entry
    /// (`gamma` or `exponential`).
    SuperstatMixture { parameter_entry: String, params: Params },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub process: Process,
    pub sample_count: usize,
    pub seed: u64,
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count < MIN_SAMPLE_COUNT {
            return Err(Error::InvalidSpec(format!(
                "sample_count {} is below {MIN_SAMPLE_COUNT}",
                self.sample_count
            )));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let at_least_one = |name: &str, v: u32| {
            if v >= 1 {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be at least 1")))
            }
        };
        match &self.process {
            Process::WaitingTimeKth { k, rate } => {
                at_least_one("k", *k)?;
                positive("rate", *rate)
            }
            Process::ProductOfPerturbations { n, factor_law } => {
                at_least_one("n", *n)?;
                match factor_law {
                    FactorLaw::LogUniform { log_variance } => positive("log_variance", *log_variance),
                }
            }
            Process::SampleMaximum { n, parent } => {
                at_least_one("n", *n)?;
                match parent {
                    Parent::Exponential { rate } => positive("rate", *rate),
                    Parent::Pareto { tail_gamma, lower } => {
                        positive("tail_gamma", *tail_gamma)?;
                        positive("lower", *lower)
                    }
                }
            }
            Process::StableSum { n, tail_gamma, rescale } => {
                at_least_one("n", *n)?;
                match (*tail_gamma, rescale) {
                    (g, Rescale::Mean) if g == 1.0 => Ok(()),
                    (g, Rescale::RootN) if g == 2.0 => Ok(()),
                    _ => Err(Error::InvalidSpec(format!(
                        "stable sums support tail_gamma 1 with mean rescaling and 2 with root-n rescaling, got {tail_gamma} with {rescale:?}"
                    ))),
                }
            }
            Process::SuperstatMixture { parameter_entry, params } => {
                rate_sampler(parameter_entry, params).map(|_| ())
            }
        }
    }
}

enum RateSampler {
    Gamma(Gamma<f64>),
    Exponential(f64),
}

impl RateSampler {
    fn draw(&self, rng: &mut ChaCha20Rng) -> f64 {
        match self {
            RateSampler::Gamma(g) => g.sample(rng),
            RateSampler::Exponential(rate) => {
                let e: f64 = Exp1.sample(rng);
                e / rate
            }
        }
    }
}

fn rate_sampler(entry: &str, params: &Params) -> Result<RateSampler> {
    let full = catalog::lookup(entry)?.complete(params)?;
    // instantiating checks the parameter domain
    catalog::instantiate(entry, &full)?;
    match entry {
        "gamma" => {
            let g = Gamma::new(full["k"], 1.0 / full["alpha"]).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            Ok(RateSampler::Gamma(g))
        }
        "exponential" => Ok(RateSampler::Exponential(full["lambda"])),
        other => Err(Error::InvalidSpec(format!(
            "rate draws are available for 'gamma' and 'exponential', not '{other}'"
        ))),
    }
}

/// Draw `sample_count` values of the process.
pub fn simulate(spec: &ProcessSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let m = spec.sample_count;
    let mut out = Vec::with_capacity(m);
    match &spec.process {
        Process::WaitingTimeKth { k, rate } => {
            for _ in 0..m {
                let mut t = 0.0;
                for _ in 0..*k {
                    let e: f64 = Exp1.sample(&mut rng);
                    t += e;
                }
                out.push(t / rate);
            }
        }
        Process::ProductOfPerturbations { n, factor_law } => {
            let FactorLaw::LogUniform { log_variance } = factor_law;
            let half = (3.0 * log_variance).sqrt();
            for _ in 0..m {
                let mut log_prod = 0.0;
                for _ in 0..*n {
                    log_prod += rng.random_range(-half..half);
                }
                out.push(log_prod.exp());
            }
        }
        Process::SampleMaximum { n, parent } => {
            let nf = *n as f64;
            for _ in 0..m {
                // both parents are decreasing functions of a uniform, so the
                // maximum draw comes from the smallest uniform. The draws are
                // -ln(u)/rate and lower·u^{-1/γ}; the standardization cancels
                // rate and lower.
                let mut u_min = 1.0f64;
                for _ in 0..*n {
                    u_min = u_min.min(open_unit(&mut rng));
                }
                out.push(match parent {
                    Parent::Exponential { .. } => -u_min.ln() - nf.ln(),
                    Parent::Pareto { tail_gamma, .. } => u_min.powf(-1.0 / tail_gamma) / nf.powf(1.0 / tail_gamma),
                });
            }
        }
        Process::StableSum { n, tail_gamma, rescale } => {
            let nf = *n as f64;
            let half = 3.0f64.sqrt();
            for _ in 0..m {
                let mut s = 0.0;
                for _ in 0..*n {
                    s += if *tail_gamma == 1.0 {
                        (std::f64::consts::PI * (open_unit(&mut rng) - 0.5)).tan()
                    } else {
                        rng.random_range(-half..half)
                    };
                }
                out.push(match rescale {
                    Rescale::Mean => s / nf,
                    Rescale::RootN => s / nf.sqrt(),
                });
            }
        }
        Process::SuperstatMixture { parameter_entry, params } => {
            let sampler = rate_sampler(parameter_entry, params)?;
            for _ in 0..m {
                let rate = sampler.draw(&mut rng);
                let e: f64 = Exp1.sample(&mut rng);
                out.push(e / rate);
            }
        }
    }
    Ok(out)
}

/// Uniform on the open interval (0, 1).
fn open_unit(rng: &mut ChaCha20Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub ks_statistic: f64,
    pub sample_count: usize,
    pub threshold: f64,
    /// Label of the predicted law, e.g. `gamma{alpha=1,k=3}`.
    pub predicted: String,
    pub pass: bool,
}

/// CDF of a tabulated density: the normalized cumulative trapezoid rule,
/// interpolated linearly, 0 left of the grid and 1 right of it.
pub struct GridCdf<'a> {
    grid: &'a [f64],
    cdf: Vec<f64>,
}

impl<'a> GridCdf<'a> {
    pub fn new(dist: &'a GridDistribution) -> Self {
        Self {
            grid: &dist.grid,
            cdf: dist.cdf_table(),
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        let n = self.grid.len();
        if y <= self.grid[0] {
            return 0.0;
        }
        if y >= self.grid[n - 1] {
            return 1.0;
        }
        let i = self.grid.partition_point(|&g| g <= y);
        let t = (y - self.grid[i - 1]) / (self.grid[i] - self.grid[i - 1]);
        self.cdf[i - 1] + t * (self.cdf[i] - self.cdf[i - 1])
    }
}

/// Exact one-sample KS statistic `sup |F_n − F|` for a CDF evaluated on
/// ascending samples.
pub fn ks_statistic_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d.clamp(0.0, 1.0)
}

pub fn fit_against_prediction(samples: &[f64], predicted: &GridDistribution, label: &str) -> Result<FitReport> {
    fit_with_critical(samples, predicted, label, KS_CRITICAL)
}

/// [`fit_against_prediction`] with an explicit critical constant `c`
/// (threshold `c/√n`).
pub fn fit_with_critical(samples: &[f64], predicted: &GridDistribution, label: &str, critical: f64) -> Result<FitReport> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("no samples to fit".into()));
    }
    if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::DegenerateInput(format!("sample {bad} is not finite")));
    }
    if !(critical > 0.0) {
        return Err(Error::InvalidSpec(format!("KS critical constant must be positive, got {critical}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let cdf = GridCdf::new(predicted);
    let ks = ks_statistic_sorted(&sorted, |y| cdf.eval(y));
    let threshold = critical / (samples.len() as f64).sqrt();
    Ok(FitReport {
        ks_statistic: ks,
        sample_count: samples.len(),
        threshold,
        predicted: label.to_string(),
        pass: ks < threshold,
    })
}

/// A predicted law: a catalog entry, or the Laplace mixture of exponentials
/// over a catalog rate density.
#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Entry { name: &'static str, params: Params },
    ExponentialMixture { rate_entry: &'static str, params: Params },
}

impl Prediction {
    fn entry(name: &'static str, pairs: &[(&str, f64)]) -> Self {
        Prediction::Entry {
            name,
            params: to_params(pairs),
        }
    }

    pub fn label(&self) -> String {
        let fmt = |p: &Params| p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
        match self {
            Prediction::Entry { name, params } => format!("{name}{{{}}}", fmt(params)),
            Prediction::ExponentialMixture { rate_entry, params } => {
                format!("exponential mixed over {rate_entry}{{{}}}", fmt(params))
            }
        }
    }

    pub fn distribution(&self) -> Result<GridDistribution> {
        match self {
            Prediction::Entry { name, params } => catalog::distribution(name, params),
            Prediction::ExponentialMixture { rate_entry, params } => {
                let rate = catalog::distribution(rate_entry, params)?;
                superstatistics_mix(TransformKernel::Laplace, &rate, 4096)
            }
        }
    }
}

/// A shipped process with its predicted limit and a deliberately wrong law.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    pub process: Process,
    pub predicted: Prediction,
    pub mismatch: Prediction,
}

pub fn scenario(name: &str) -> Result<Scenario> {
    let s = match name {
        "waiting_time_gamma" => Scenario {
            name: "waiting_time_gamma",
            process: Process::WaitingTimeKth { k: 3, rate: 1.0 },
            predicted: Prediction::entry("gamma", &[("k", 3.0), ("alpha", 1.0)]),
            // same mean, wrong shape
            mismatch: Prediction::entry("exponential", &[("lambda", 1.0 / 3.0)]),
        },
        "product_lognormal" => Scenario {
            name: "product_lognormal",
            process: Process::ProductOfPerturbations {
                n: 50,
                factor_law: FactorLaw::LogUniform { log_variance: 1.0 / 50.0 },
            },
            predicted: Prediction::entry("log_normal", &[("lambda", 0.5), ("mu", 0.0)]),
            mismatch: Prediction::entry("exponential", &[("lambda", 1.0)]),
        },
        "maxima_gumbel" => Scenario {
            name: "maxima_gumbel",
            process: Process::SampleMaximum {
                n: 1000,
                parent: Parent::Exponential { rate: 1.0 },
            },
            predicted: Prediction::entry("gumbel", &[("lambda", 1.0), ("beta", 1.0), ("orientation", 1.0)]),
            mismatch: Prediction::entry("gauss", &[("lambda", 0.5), ("mu", 0.0)]),
        },
        "maxima_frechet" => Scenario {
            name: "maxima_frechet",
            process: Process::SampleMaximum {
                n: 1000,
                parent: Parent::Pareto {
                    tail_gamma: 2.0,
                    lower: 1.0,
                },
            },
            predicted: Prediction::entry("frechet_weibull", &[("lambda", 1.0), ("beta", 2.0), ("orientation", 1.0)]),
            mismatch: Prediction::entry("gumbel", &[("lambda", 1.0), ("beta", 1.0), ("orientation", 1.0)]),
        },
        "stable_sum_cauchy" => Scenario {
            name: "stable_sum_cauchy",
            process: Process::StableSum {
                n: 1000,
                tail_gamma: 1.0,
                rescale: Rescale::Mean,
            },
            predicted: Prediction::entry("generalized_students", &[("k", 1.0), ("alpha", 1.0), ("mu", 0.0)]),
            mismatch: Prediction::entry("gauss", &[("lambda", 0.5), ("mu", 0.0)]),
        },
        "superstat_lomax" => Scenario {
            name: "superstat_lomax",
            process: Process::SuperstatMixture {
                parameter_entry: "gamma".into(),
                params: to_params(&[("k", 2.0), ("alpha", 1.0)]),
            },
            predicted: Prediction::ExponentialMixture {
                rate_entry: "gamma",
                params: to_params(&[("k", 2.0), ("alpha", 1.0)]),
            },
            mismatch: Prediction::entry("exponential", &[("lambda", 1.0)]),
        },
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(s)
}

/// Scenario run against its prediction and its mismatch control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    pub scenario: String,
    pub seed: u64,
    pub fit: FitReport,
    pub mismatch: FitReport,
}

/// Run a scenario with the default sample count and seed.
pub fn run_scenario(name: &str) -> Result<FitReport> {
    Ok(run_scenario_with(name, DEFAULT_SAMPLE_COUNT, DEFAULT_SEED)?.fit)
}

pub fn run_scenario_with(name: &str, sample_count: usize, seed: u64) -> Result<ScenarioOutcome> {
    let (outcome, _) = run_scenario_samples(name, sample_count, seed, KS_CRITICAL)?;
    Ok(outcome)
}

/// Run a scenario and also return the raw samples.
pub fn run_scenario_samples(name: &str, sample_count: usize, seed: u64, critical: f64) -> Result<(ScenarioOutcome, Vec<f64>)> {
    let sc = scenario(name)?;
    let spec = ProcessSpec {
        process: sc.process.clone(),
        sample_count,
        seed,
    };
    let samples = simulate(&spec)?;
    let fit = fit_with_critical(&samples, &sc.predicted.distribution()?, &sc.predicted.label(), critical)?;
    let mismatch = fit_with_critical(&samples, &sc.mismatch.distribution()?, &sc.mismatch.label(), critical)?;
    Ok((
        ScenarioOutcome {
            scenario: sc.name.to_string(),
            seed,
            fit,
            mismatch,
        },
        samples,
    ))
}

/// Standard deviation of the limiting Kolmogorov distribution of `√n·D`.
pub fn kolmogorov_sd() -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let pi = std::f64::consts::PI;
    (pi * pi / 12.0 - 0.5 * pi * ln2 * ln2).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub parent_size: u32,
    pub ks: Vec<f64>,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub replicates: usize,
    pub seeds: Vec<u64>,
    pub rows: Vec<ConvergenceRow>,
    /// One standard deviation of the KS statistic at this replicate count.
    pub noise: f64,
    /// Medians never rise by more than `noise` from one size to the next,
    /// and the last median is below the first.
    pub decreasing: bool,
}

/// KS distance of standardized exponential maxima to the catalog Gumbel as
/// the parent sample size grows.
///
/// Per seed one sorted set of uniforms is shared by every parent size, and
/// each uniform is turned into an exact maximum draw by inverting the CDF of
/// the maximum, `M_n − log n = −log(1 − U^{1/n}) − log n`. The common numbers
/// cancel most of the replicate noise between sizes.
pub fn maxima_convergence(parent_sizes: &[u32], replicates: usize, seeds: &[u64]) -> Result<ConvergenceStudy> {
    if parent_sizes.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidSpec("convergence study needs parent sizes and seeds".into()));
    }
    if replicates < MIN_SAMPLE_COUNT {
        return Err(Error::InvalidSpec(format!("replicates {replicates} is below {MIN_SAMPLE_COUNT}")));
    }
    let gumbel = scenario("maxima_gumbel")?.predicted.distribution()?;
    let cdf = GridCdf::new(&gumbel);
    let mut per_size = vec![Vec::with_capacity(seeds.len()); parent_sizes.len()];
    for &seed in seeds {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut u: Vec<f64> = (0..replicates).map(|_| open_unit(&mut rng)).collect();
        u.sort_by(f64::total_cmp);
        for (j, &n) in parent_sizes.iter().enumerate() {
            if n == 0 {
                return Err(Error::InvalidSpec("parent size must be at least 1".into()));
            }
            let nf = n as f64;
            // the maximum is increasing in U, so the draws stay sorted
            let maxima: Vec<f64> = u.iter().map(|&ui| -(-(ui.ln() / nf).exp_m1()).ln() - nf.ln()).collect();
            per_size[j].push(ks_statistic_sorted(&maxima, |y| cdf.eval(y)));
        }
    }
    let rows: Vec<ConvergenceRow> = parent_sizes
        .iter()
        .zip(per_size)
        .map(|(&n, ks)| ConvergenceRow {
            parent_size: n,
            median: median(&ks),
            ks,
        })
        .collect();
    let noise = kolmogorov_sd() / (replicates as f64).sqrt();
    let decreasing = rows.windows(2).all(|w| w[1].median <= w[0].median + noise)
        && rows[rows.len() - 1].median < rows[0].median;
    Ok(ConvergenceStudy {
        replicates,
        seeds: seeds.to_vec(),
        rows,
        noise,
        decreasing,
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
