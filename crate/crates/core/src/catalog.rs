//! Named distributions as (scale, observable, measure, λ) recipes, each
//! checked against its closed-form density.
//!
//! Parameters use the symbols of the common-distribution table (λ, β, k, α,
//! c₁, c₂, b, γ). Where the table and the running gamma/Lomax formulas
//! disagree on how λ enters, the conversion to the internal `(λ, T)` pair is
//! made here and nowhere else.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::maxent::{normalize, DistributionSpec, GridDistribution, Interval, MeasureAdjustment};
use crate::quadrature::{self, Tolerance};
use crate::scale::{MeasurementScale, ObservableMap, ScaleExpr};

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: Option<f64>,
    pub rule: &'static str,
}

const fn req(name: &'static str, rule: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default: None,
        rule,
    }
}

const fn opt(name: &'static str, default: f64, rule: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default: Some(default),
        rule,
    }
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static [ParamSpec],
    /// Unnormalized density in `y` and the parameter names.
    pub closed_form: &'static str,
    pub table_notes: &'static str,
    build: fn(&Params) -> Result<DistributionSpec>,
    /// Parameter settings exercised by the verification suite.
    pub settings: &'static [&'static [(&'static str, f64)]],
}

impl CatalogEntry {
    pub fn instantiate(&self, params: &Params) -> Result<DistributionSpec> {
        let full = self.complete(params)?;
        (self.build)(&full)
    }

    /// Fill defaults and reject unknown or missing names.
    pub fn complete(&self, params: &Params) -> Result<Params> {
        for k in params.keys() {
            if !self.params.iter().any(|p| p.name == k) {
                return Err(Error::Malformed(format!("'{}' has no parameter '{k}'", self.name)));
            }
        }
        let mut full = Params::new();
        for p in self.params {
            let v = match (params.get(p.name), p.default) {
                (Some(v), _) => *v,
                (None, Some(d)) => d,
                (None, None) => return Err(Error::Malformed(format!("'{}' needs parameter '{}'", self.name, p.name))),
            };
            if !v.is_finite() {
                return Err(out_of_domain(p.name, v, "must be finite"));
            }
            full.insert(p.name.to_string(), v);
        }
        Ok(full)
    }

    pub fn setting(&self, i: usize) -> Params {
        to_params(self.settings[i])
    }
}

pub fn to_params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn out_of_domain(name: &str, value: f64, rule: &str) -> Error {
    Error::ParameterOutOfDomain {
        name: name.to_string(),
        value,
        rule: rule.to_string(),
    }
}

fn get(p: &Params, name: &str) -> f64 {
    p[name]
}

fn ensure(p: &Params, name: &str, ok: impl Fn(f64) -> bool, rule: &str) -> Result<f64> {
    let v = get(p, name);
    if ok(v) {
        Ok(v)
    } else {
        Err(out_of_domain(name, v, rule))
    }
}

fn positive(p: &Params, name: &str) -> Result<f64> {
    ensure(p, name, |v| v > 0.0, "> 0")
}

fn orientation(p: &Params) -> Result<f64> {
    ensure(p, "orientation", |v| v == 1.0 || v == -1.0, "+1 (maxima) or -1 (minima)")
}

fn spec(scale: MeasurementScale, observable: ObservableMap, lambda: f64, measure: MeasureAdjustment, support: Interval) -> Result<DistributionSpec> {
    Ok(DistributionSpec::new(scale, observable, lambda, measure, support))
}

fn neg(e: ScaleExpr) -> ScaleExpr {
    ScaleExpr::combination(vec![(-1.0, e)])
}

fn log_log() -> ScaleExpr {
    ScaleExpr::log_deform(0.0, ScaleExpr::log())
}

/// `log(1 + v/α)`.
fn lin_log(alpha: f64) -> ScaleExpr {
    ScaleExpr::log_deform(1.0, ScaleExpr::combination(vec![(1.0 / alpha, ScaleExpr::Linear)]))
}

/// Log-linear scale and λ for `v^{(k-1)·s} e^{-α v}`, where `s` scales the
/// log term (1 for `f = y`, 1/2 for `f = y²`).
///
/// `k > 1`: `T = -s log v + α/(k-1) v`, `λ = k - 1`.
/// `k = 1`: `T = v`, `λ = α`.
/// `k < 1`: `T = s log v + α/(1-k) v`, `λ = 1 - k` (the table's `y^{-λ} e^{-c₁λy}`).
fn log_linear(k: f64, alpha: f64, s: f64) -> (MeasurementScale, f64) {
    if k == 1.0 {
        return (MeasurementScale::linear(), alpha);
    }
    let lambda = (k - 1.0).abs();
    let sign = if k > 1.0 { -1.0 } else { 1.0 };
    let t = ScaleExpr::combination(vec![(sign * s, ScaleExpr::log()), (alpha / lambda, ScaleExpr::Linear)]);
    (MeasurementScale::affine(t), lambda)
}

fn gamma_params(p: &Params) -> Result<(f64, f64)> {
    Ok((positive(p, "k")?, positive(p, "alpha")?))
}

/// `log(c₂ - v) + b log(v - c₁)`.
fn log_lin_log(c1: f64, c2: f64, b: f64) -> ScaleExpr {
    ScaleExpr::combination(vec![
        (1.0, ScaleExpr::log_deform(c2, neg(ScaleExpr::Linear))),
        (b, ScaleExpr::log_deform(-c1, ScaleExpr::Linear)),
    ])
}

fn beta_exponents(p: &Params) -> Result<(f64, f64)> {
    let lambda = ensure(p, "lambda", |v| v < 1.0, "< 1 (integrable at c2)")?;
    let b = get(p, "b");
    if b * lambda >= 1.0 {
        return Err(out_of_domain("b", b, "b*lambda < 1 (integrable at c1)"));
    }
    Ok((lambda, b))
}

fn b_gumbel(p: &Params) -> Result<DistributionSpec> {
    let (lambda, beta, o) = (positive(p, "lambda")?, positive(p, "beta")?, orientation(p)?);
    let base = if o > 0.0 { neg(ScaleExpr::Linear) } else { ScaleExpr::Linear };
    spec(MeasurementScale::exponential(base, beta), ObservableMap::Identity, lambda * beta, MeasureAdjustment::ScaleDerivative, Interval::real_line())
}

fn b_exponential(p: &Params) -> Result<DistributionSpec> {
    spec(MeasurementScale::linear(), ObservableMap::Identity, positive(p, "lambda")?, MeasureAdjustment::Unit, Interval::positive())
}

fn b_gauss(p: &Params) -> Result<DistributionSpec> {
    let center = get(p, "mu");
    spec(MeasurementScale::linear(), ObservableMap::SquaredDeviation { center }, positive(p, "lambda")?, MeasureAdjustment::Unit, Interval::real_line())
}

fn b_rayleigh(p: &Params) -> Result<DistributionSpec> {
    spec(
        MeasurementScale::linear(),
        ObservableMap::SquaredDeviation { center: 0.0 },
        positive(p, "lambda")?,
        MeasureAdjustment::ScaleDerivative,
        Interval::positive(),
    )
}

fn b_log_normal(p: &Params) -> Result<DistributionSpec> {
    let center = get(p, "mu");
    spec(
        MeasurementScale::linear(),
        ObservableMap::SquaredDeviation { center },
        positive(p, "lambda")?,
        MeasureAdjustment::ChangeOfVariable(ScaleExpr::log()),
        Interval::positive(),
    )
}

fn b_stretched(p: &Params) -> Result<DistributionSpec> {
    let (lambda, beta) = (positive(p, "lambda")?, positive(p, "beta")?);
    spec(MeasurementScale::exponential(ScaleExpr::log(), beta), ObservableMap::Identity, lambda * beta, MeasureAdjustment::Unit, Interval::positive())
}

fn b_frechet_weibull(p: &Params) -> Result<DistributionSpec> {
    let (lambda, beta, o) = (positive(p, "lambda")?, positive(p, "beta")?, orientation(p)?);
    let base = if o > 0.0 { neg(ScaleExpr::log()) } else { ScaleExpr::log() };
    spec(MeasurementScale::exponential(base, beta), ObservableMap::Identity, lambda * beta, MeasureAdjustment::ScaleDerivative, Interval::positive())
}

fn b_pareto(p: &Params) -> Result<DistributionSpec> {
    let lambda = ensure(p, "lambda", |v| v > 1.0, "> 1")?;
    let lower = positive(p, "lower")?;
    spec(MeasurementScale::affine(ScaleExpr::log()), ObservableMap::Identity, lambda, MeasureAdjustment::Unit, Interval::new(lower, f64::INFINITY))
}

fn b_log_frechet(p: &Params) -> Result<DistributionSpec> {
    let (lambda, beta) = (positive(p, "lambda")?, positive(p, "beta")?);
    spec(MeasurementScale::exponential(log_log(), beta), ObservableMap::Identity, lambda * beta, MeasureAdjustment::ScaleDerivative, Interval::new(1.0, f64::INFINITY))
}

fn b_log2_stretched(p: &Params) -> Result<DistributionSpec> {
    let lambda = positive(p, "lambda")?;
    let beta = ensure(p, "beta", |v| v >= 1.0, ">= 1")?;
    if beta == 1.0 && lambda <= 1.0 {
        return Err(out_of_domain("lambda", lambda, "> 1 when beta = 1"));
    }
    spec(MeasurementScale::exponential(log_log(), beta), ObservableMap::Identity, lambda * beta, MeasureAdjustment::Unit, Interval::new(1.0, f64::INFINITY))
}

fn b_log_pareto(p: &Params) -> Result<DistributionSpec> {
    let lambda = ensure(p, "lambda", |v| v > 1.0, "> 1")?;
    let lower = ensure(p, "lower", |v| v > 1.0, "> 1")?;
    spec(
        MeasurementScale::affine(ScaleExpr::log()),
        ObservableMap::Identity,
        lambda,
        MeasureAdjustment::ChangeOfVariable(ScaleExpr::log()),
        Interval::new(lower, f64::INFINITY),
    )
}

fn bounded(p: &Params, lower: f64) -> Result<Interval> {
    let upper = ensure(p, "upper", |v| v > lower && v.is_finite(), "finite and above the lower end")?;
    Ok(Interval::new(lower, upper))
}

fn b_log2_pareto(p: &Params) -> Result<DistributionSpec> {
    let lambda = get(p, "lambda");
    let lower = ensure(p, "lower", |v| v > 1.0, "> 1")?;
    spec(MeasurementScale::affine(log_log()), ObservableMap::Identity, lambda, MeasureAdjustment::Unit, bounded(p, lower)?)
}

fn b_lomax(p: &Params) -> Result<DistributionSpec> {
    let k = ensure(p, "k", |v| v > 1.0, "> 1")?;
    let alpha = positive(p, "alpha")?;
    spec(MeasurementScale::affine(lin_log(alpha)), ObservableMap::Identity, k, MeasureAdjustment::Unit, Interval::positive())
}

fn b_students(p: &Params) -> Result<DistributionSpec> {
    let k = ensure(p, "k", |v| v > 0.5, "> 1/2")?;
    let alpha = positive(p, "alpha")?;
    let center = get(p, "mu");
    spec(MeasurementScale::affine(lin_log(alpha)), ObservableMap::SquaredDeviation { center }, k, MeasureAdjustment::Unit, Interval::real_line())
}

fn b_linlog2(p: &Params) -> Result<DistributionSpec> {
    let lambda = get(p, "lambda");
    let c1 = ensure(p, "c1", |v| v > 1.0, "> 1")?;
    let base = ScaleExpr::log_deform(0.0, ScaleExpr::log_deform(c1, ScaleExpr::Linear));
    spec(MeasurementScale::affine(base), ObservableMap::Identity, lambda, MeasureAdjustment::Unit, bounded(p, 0.0)?)
}

fn b_gamma(p: &Params) -> Result<DistributionSpec> {
    let (k, alpha) = gamma_params(p)?;
    let (scale, lambda) = log_linear(k, alpha, 1.0);
    spec(scale, ObservableMap::Identity, lambda, MeasureAdjustment::Unit, Interval::positive())
}

fn b_chi_square(p: &Params) -> Result<DistributionSpec> {
    let nu = positive(p, "nu")?;
    let (scale, lambda) = log_linear(nu / 2.0, 0.5, 1.0);
    spec(scale, ObservableMap::Identity, lambda, MeasureAdjustment::Unit, Interval::positive())
}

fn b_gamma_gauss(p: &Params) -> Result<DistributionSpec> {
    let (k, alpha) = gamma_params(p)?;
    let (scale, lambda) = log_linear(k, alpha, 0.5);
    spec(scale, ObservableMap::SquaredDeviation { center: 0.0 }, lambda, MeasureAdjustment::Unit, Interval::positive())
}

fn b_generalized_gamma(p: &Params) -> Result<DistributionSpec> {
    let (k, alpha) = gamma_params(p)?;
    let gamma = positive(p, "gamma")?;
    let (scale, lambda) = log_linear(k, alpha, 1.0);
    spec(scale, ObservableMap::Identity, lambda, MeasureAdjustment::ChangeOfVariable(ScaleExpr::power(gamma)), Interval::positive())
}

fn b_beta(p: &Params) -> Result<DistributionSpec> {
    let (lambda, b) = beta_exponents(p)?;
    let c1 = get(p, "c1");
    let c2 = ensure(p, "c2", |v| v > c1, "> c1")?;
    spec(MeasurementScale::affine(log_lin_log(c1, c2, b)), ObservableMap::Identity, lambda, MeasureAdjustment::Unit, Interval::new(c1, c2))
}

fn b_beta_prime(p: &Params) -> Result<DistributionSpec> {
    let (lambda, b) = beta_exponents(p)?;
    // The beta scale b log x + log(1 - x) at x = y/(1+y) is composed by hand:
    // b log y - (b + 1) log(1 + y). Evaluating it through x would lose 1 - x
    // for large y. The Jacobian is that of y -> -(1+y)^{-1}, which differs
    // from y/(1+y) by a constant.
    let composed = ScaleExpr::combination(vec![(b, ScaleExpr::log()), (-(b + 1.0), ScaleExpr::log_deform(1.0, ScaleExpr::Linear))]);
    let g = ScaleExpr::combination(vec![(-1.0, ScaleExpr::exp(-1.0, ScaleExpr::log_deform(1.0, ScaleExpr::Linear)))]);
    spec(
        MeasurementScale::affine(composed),
        ObservableMap::Identity,
        lambda,
        MeasureAdjustment::Jacobian(g),
        Interval::positive(),
    )
}

fn b_gamma_variant(p: &Params) -> Result<DistributionSpec> {
    let lambda = positive(p, "lambda")?;
    let (b, c1, c2) = (get(p, "b"), positive(p, "c1")?, positive(p, "c2")?);
    let t = ScaleExpr::combination(vec![(b, ScaleExpr::log_deform(c1, ScaleExpr::Linear)), (c2, ScaleExpr::Linear)]);
    spec(MeasurementScale::affine(t), ObservableMap::Identity, lambda, MeasureAdjustment::Unit, Interval::positive())
}

const LAMBDA: ParamSpec = req("lambda", "> 0");
const BETA: ParamSpec = req("beta", "> 0");
const ORIENT: ParamSpec = opt("orientation", 1.0, "+1 (maxima) or -1 (minima)");
const MU: ParamSpec = opt("mu", 0.0, "any real");
const K: ParamSpec = req("k", "> 0");
const ALPHA: ParamSpec = req("alpha", "> 0");

static ENTRIES: [CatalogEntry; 22] = [
    CatalogEntry {
        name: "gumbel",
        params: &[LAMBDA, BETA, ORIENT],
        closed_form: "exp(-orientation*beta*y - lambda*exp(-orientation*beta*y))",
        table_notes: "Linear base, exponential wrap, m_y = |T'|. orientation +1 is the maxima form e^{-y-λe^{-y}}; -1 is the table row e^{βy-λe^{βy}}",
        build: b_gumbel,
        settings: &[
            &[("lambda", 1.0), ("beta", 1.0), ("orientation", 1.0)],
            &[("lambda", 2.0), ("beta", 0.5), ("orientation", 1.0)],
            &[("lambda", 0.5), ("beta", 2.0), ("orientation", -1.0)],
            &[("lambda", 1.0), ("beta", 1.0), ("orientation", -1.0)],
        ],
    },
    CatalogEntry {
        name: "exponential",
        params: &[LAMBDA],
        closed_form: "exp(-lambda*y)",
        table_notes: "Gibbs/exponential; linear base, beta -> 0; y > 0",
        build: b_exponential,
        settings: &[&[("lambda", 0.5)], &[("lambda", 1.0)], &[("lambda", 3.0)]],
    },
    CatalogEntry {
        name: "gauss",
        params: &[LAMBDA, MU],
        closed_form: "exp(-lambda*(y-mu)^2)",
        table_notes: "Gauss/normal; linear base, beta -> 0, f_y = (y-mu)^2",
        build: b_gauss,
        settings: &[&[("lambda", 0.5), ("mu", 0.0)], &[("lambda", 2.0), ("mu", 1.0)], &[("lambda", 0.1), ("mu", -3.0)]],
    },
    CatalogEntry {
        name: "rayleigh",
        params: &[LAMBDA],
        closed_form: "y*exp(-lambda*y^2)",
        table_notes: "linear base, beta -> 0, f_y = y^2, m_y = |T'|; gamma_gauss with k = 2",
        build: b_rayleigh,
        settings: &[&[("lambda", 0.5)], &[("lambda", 1.0)], &[("lambda", 4.0)]],
    },
    CatalogEntry {
        name: "log_normal",
        params: &[LAMBDA, MU],
        closed_form: "y^(-1)*exp(-lambda*(log(y)-mu)^2)",
        table_notes: "Gauss read through y -> log y, m_y = 1/y",
        build: b_log_normal,
        settings: &[&[("lambda", 0.5), ("mu", 0.0)], &[("lambda", 1.0), ("mu", 1.0)], &[("lambda", 2.0), ("mu", -0.5)]],
    },
    CatalogEntry {
        name: "stretched_exponential",
        params: &[LAMBDA, BETA],
        closed_form: "exp(-lambda*y^beta)",
        table_notes: "log base, exponential wrap; Gauss shape at beta = 2",
        build: b_stretched,
        settings: &[&[("lambda", 1.0), ("beta", 0.5)], &[("lambda", 2.0), ("beta", 1.5)], &[("lambda", 0.5), ("beta", 3.0)]],
    },
    CatalogEntry {
        name: "frechet_weibull",
        params: &[LAMBDA, BETA, ORIENT],
        closed_form: "y^(-orientation*beta-1)*exp(-lambda*y^(-orientation*beta))",
        table_notes: "log base, exponential wrap, m_y = |T'|. orientation +1 is Frechet (maxima), -1 is Weibull y^{β-1}e^{-λy^β}; Rayleigh at beta = 2, orientation -1",
        build: b_frechet_weibull,
        settings: &[
            &[("lambda", 1.0), ("beta", 2.0), ("orientation", 1.0)],
            &[("lambda", 0.5), ("beta", 1.5), ("orientation", -1.0)],
            &[("lambda", 2.0), ("beta", 3.0), ("orientation", 1.0)],
            &[("lambda", 1.0), ("beta", 0.7), ("orientation", -1.0)],
        ],
    },
    CatalogEntry {
        name: "pareto_i",
        params: &[req("lambda", "> 1"), req("lower", "> 0")],
        closed_form: "y^(-lambda)",
        table_notes: "log base, beta -> 0; y >= lower",
        build: b_pareto,
        settings: &[&[("lambda", 2.0), ("lower", 1.0)], &[("lambda", 3.0), ("lower", 0.5)], &[("lambda", 1.5), ("lower", 2.0)]],
    },
    CatalogEntry {
        name: "log_frechet",
        params: &[LAMBDA, BETA],
        closed_form: "y^(-1)*log(y)^(beta-1)*exp(-lambda*log(y)^beta)",
        table_notes: "log-log base, exponential wrap, m_y = |T'|; y > 1",
        build: b_log_frechet,
        settings: &[&[("lambda", 1.0), ("beta", 2.0)], &[("lambda", 0.5), ("beta", 1.5)], &[("lambda", 2.0), ("beta", 3.0)]],
    },
    CatalogEntry {
        name: "log2_stretched",
        params: &[LAMBDA, req("beta", ">= 1, and lambda > 1 when beta = 1")],
        closed_form: "exp(-lambda*log(y)^beta)",
        table_notes: "unnamed row; log-log base, exponential wrap; stretched exponential with f_y = log y; y > 1",
        build: b_log2_stretched,
        settings: &[&[("lambda", 1.0), ("beta", 2.0)], &[("lambda", 0.5), ("beta", 3.0)], &[("lambda", 2.0), ("beta", 1.0)]],
    },
    CatalogEntry {
        name: "log_pareto_i",
        params: &[req("lambda", "> 1"), req("lower", "> 1")],
        closed_form: "y^(-1)*log(y)^(-lambda)",
        table_notes: "Pareto I read through y -> log y, m_y = 1/y; y >= lower",
        build: b_log_pareto,
        settings: &[&[("lambda", 2.0), ("lower", 2.0)], &[("lambda", 3.0), ("lower", 1.5)], &[("lambda", 4.0), ("lower", 3.0)]],
    },
    CatalogEntry {
        name: "log2_pareto",
        params: &[req("lambda", "any real"), req("lower", "> 1"), req("upper", "> lower")],
        closed_form: "log(y)^(-lambda)",
        table_notes: "unnamed row; log-log base, beta -> 0; not integrable on an unbounded range, so the support is [lower, upper]",
        build: b_log2_pareto,
        settings: &[
            &[("lambda", 1.0), ("lower", 2.0), ("upper", 10.0)],
            &[("lambda", 2.0), ("lower", 1.5), ("upper", 100.0)],
            &[("lambda", 0.5), ("lower", 3.0), ("upper", 20.0)],
        ],
    },
    CatalogEntry {
        name: "lomax",
        params: &[req("k", "> 1"), ALPHA],
        closed_form: "(1+y/alpha)^(-k)",
        table_notes: "Pareto type II; lin-log base log(1 + y/alpha), lambda = k; y > 0",
        build: b_lomax,
        settings: &[&[("k", 2.0), ("alpha", 1.0)], &[("k", 3.0), ("alpha", 2.0)], &[("k", 1.5), ("alpha", 1.0)]],
    },
    CatalogEntry {
        name: "generalized_students",
        params: &[req("k", "> 1/2"), ALPHA, MU],
        closed_form: "(1+(y-mu)^2/alpha)^(-k)",
        table_notes: "lin-log base with f_y = (y-mu)^2, lambda = k; Pearson VII; Cauchy at k = 1, alpha = 1",
        build: b_students,
        settings: &[
            &[("k", 1.0), ("alpha", 1.0), ("mu", 0.0)],
            &[("k", 2.0), ("alpha", 3.0), ("mu", 0.0)],
            &[("k", 0.75), ("alpha", 0.5), ("mu", 1.0)],
        ],
    },
    CatalogEntry {
        name: "linlog2",
        params: &[req("lambda", "any real"), req("c1", "> 1"), req("upper", "> 0")],
        closed_form: "log(c1+y)^(-lambda)",
        table_notes: "unnamed row; base log(log(c1 + y)), beta -> 0; not integrable on an unbounded range, so the support is (0, upper]",
        build: b_linlog2,
        settings: &[
            &[("lambda", 1.0), ("c1", 2.0), ("upper", 10.0)],
            &[("lambda", 2.0), ("c1", 1.5), ("upper", 50.0)],
            &[("lambda", 0.5), ("c1", 3.0), ("upper", 5.0)],
        ],
    },
    CatalogEntry {
        name: "gamma",
        params: &[K, ALPHA],
        closed_form: "y^(k-1)*exp(-alpha*y)",
        table_notes: "log-linear base; k > 1: T = -log y + alpha/(k-1) y, lambda = k-1; k = 1: T = y, lambda = alpha; k < 1: T = log y + alpha/(1-k) y, lambda = 1-k (the table row y^{-λ}e^{-c₁λy})",
        build: b_gamma,
        settings: &[
            &[("k", 2.0), ("alpha", 1.0)],
            &[("k", 1.0), ("alpha", 2.0)],
            &[("k", 0.5), ("alpha", 1.0)],
            &[("k", 3.0), ("alpha", 2.0)],
            &[("k", 1.5), ("alpha", 1.0)],
        ],
    },
    CatalogEntry {
        name: "chi_square",
        params: &[req("nu", "> 0")],
        closed_form: "y^(nu/2-1)*exp(-y/2)",
        table_notes: "gamma with k = nu/2, alpha = 1/2",
        build: b_chi_square,
        settings: &[&[("nu", 1.0)], &[("nu", 2.0)], &[("nu", 5.0)]],
    },
    CatalogEntry {
        name: "gamma_gauss",
        params: &[K, ALPHA],
        closed_form: "y^(k-1)*exp(-alpha*y^2)",
        table_notes: "log-linear base with f_y = y^2; Rayleigh at k = 2 (table lambda = -1); y > 0",
        build: b_gamma_gauss,
        settings: &[&[("k", 2.0), ("alpha", 1.0)], &[("k", 0.5), ("alpha", 1.0)], &[("k", 3.0), ("alpha", 0.5)]],
    },
    CatalogEntry {
        name: "generalized_gamma",
        params: &[K, ALPHA, req("gamma", "> 0")],
        closed_form: "y^(gamma*k-1)*exp(-alpha*y^gamma)",
        table_notes: "gamma read through y -> y^gamma, m_y = gamma y^{gamma-1}; chi at gamma = 2, alpha = 1/2",
        build: b_generalized_gamma,
        settings: &[
            &[("k", 2.0), ("alpha", 1.0), ("gamma", 2.0)],
            &[("k", 0.5), ("alpha", 1.0), ("gamma", 0.5)],
            &[("k", 3.0), ("alpha", 2.0), ("gamma", 1.5)],
        ],
    },
    CatalogEntry {
        name: "beta",
        params: &[req("lambda", "< 1"), req("b", "b*lambda < 1"), req("c1", "any real"), req("c2", "> c1")],
        closed_form: "(c2-y)^(-lambda)*(y-c1)^(-b*lambda)",
        table_notes: "log-lin-log base log(c2 - y) + b log(y - c1), beta -> 0; Pearson type I; c1 <= y <= c2",
        build: b_beta,
        settings: &[
            &[("lambda", 0.5), ("b", 0.5), ("c1", 0.0), ("c2", 1.0)],
            &[("lambda", -1.0), ("b", 2.0), ("c1", 0.0), ("c2", 1.0)],
            &[("lambda", 0.3), ("b", -1.0), ("c1", -1.0), ("c2", 3.0)],
        ],
    },
    CatalogEntry {
        name: "beta_prime",
        params: &[req("lambda", "< 1"), req("b", "b*lambda < 1")],
        closed_form: "y^(-b*lambda)*(1+y)^((b+1)*lambda-2)",
        table_notes: "beta on (0, 1) read through y -> y/(1+y), m_y = (1+y)^{-2}; Pearson VI; y > 0",
        build: b_beta_prime,
        settings: &[&[("lambda", 0.5), ("b", 0.5)], &[("lambda", -1.0), ("b", 2.0)], &[("lambda", 0.5), ("b", -1.0)]],
    },
    CatalogEntry {
        name: "gamma_variant",
        params: &[LAMBDA, req("b", "any real"), req("c1", "> 0"), req("c2", "> 0")],
        closed_form: "(c1+y)^(-b*lambda)*exp(-c2*lambda*y)",
        table_notes: "lin-log-lin base b log(c1 + y) + c2 y, beta -> 0; y > 0",
        build: b_gamma_variant,
        settings: &[
            &[("lambda", 1.0), ("b", 1.0), ("c1", 1.0), ("c2", 1.0)],
            &[("lambda", 2.0), ("b", -0.5), ("c1", 2.0), ("c2", 0.5)],
            &[("lambda", 0.5), ("b", 2.0), ("c1", 0.1), ("c2", 3.0)],
        ],
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownDistribution(name.to_string()))
}

pub fn instantiate(name: &str, params: &Params) -> Result<DistributionSpec> {
    lookup(name)?.instantiate(params)
}

/// Instantiate and normalize in one step.
pub fn distribution(name: &str, params: &Params) -> Result<GridDistribution> {
    normalize(&instantiate(name, params)?)
}

/// Closed-form density of an entry with the parameters bound, as a function of `y`.
pub fn closed_form(name: &str, params: &Params) -> Result<Expr> {
    let entry = lookup(name)?;
    let full = entry.complete(params)?;
    Expr::parse(entry.closed_form)?.bind(&full, "y")
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: Params,
    pub max_pointwise_relerr: f64,
    pub points_checked: usize,
    pub range: (f64, f64),
    pub pass: bool,
}

pub const VERIFY_TOLERANCE: f64 = 1e-8;

/// Compare the normalized recipe with the normalized closed form on the grid
/// points between the 1st and 99th percentiles.
pub fn verify_entry(name: &str, params: &Params) -> Result<VerificationReport> {
    let spec = instantiate(name, params)?;
    let dist = normalize(&spec)?;
    let form = closed_form(name, params)?;
    let support = spec.support;
    let f = |y: f64| {
        if support.contains_interior(y) {
            let v = form.eval(y);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        } else {
            0.0
        }
    };
    let (center, width) = dist.bulk_hint();
    let scale = half_line_scale(support, center, width);
    let z = quadrature::integrate(&f, support.lo, support.hi, center, scale, Tolerance::default())?.value;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::DivergentIntegral(format!("closed form of '{name}' does not normalize")));
    }
    let (q01, q99) = (dist.quantile(0.01), dist.quantile(0.99));
    let mut worst = 0.0f64;
    let mut count = 0;
    for (&y, &p) in dist.grid.iter().zip(&dist.density) {
        if y < q01 || y > q99 {
            continue;
        }
        let c = form.eval(y) / z;
        let rel = ((p - c) / c).abs();
        worst = if rel.is_nan() { f64::INFINITY } else { worst.max(rel) };
        count += 1;
    }
    let full = lookup(name)?.complete(params)?;
    Ok(VerificationReport {
        name: name.to_string(),
        params: full,
        max_pointwise_relerr: worst,
        points_checked: count,
        range: (q01, q99),
        pass: count > 0 && worst < VERIFY_TOLERANCE,
    })
}

pub(crate) fn half_line_scale(support: Interval, center: f64, width: f64) -> f64 {
    if support.lo.is_finite() && !support.hi.is_finite() {
        (center - support.lo).max(width)
    } else if support.hi.is_finite() && !support.lo.is_finite() {
        (support.hi - center).max(width)
    } else {
        width
    }
}

/// `∫ |p - q|` for two normalized distributions sharing a support.
pub fn l1_distance(p: &GridDistribution, q: &GridDistribution) -> Result<f64> {
    let support = Interval::new(p.support.lo.min(q.support.lo), p.support.hi.max(q.support.hi));
    let f = |y: f64| (p.density_at(y) - q.density_at(y)).abs();
    let (center, width) = p.bulk_hint();
    let scale = half_line_scale(support, center, width);
    Ok(quadrature::integrate(&f, support.lo, support.hi, center, scale, Tolerance::with_abs(1e-13))?.value)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub from: String,
    pub to: String,
    pub path: Vec<(Params, Params)>,
    pub l1_distances: Vec<f64>,
    pub decreasing: bool,
}

/// L¹ distance between `from` and `to` along a parameter trajectory.
pub fn limit_check(from: &str, to: &str, path: &[(Params, Params)]) -> Result<ConvergenceReport> {
    let mut d = Vec::with_capacity(path.len());
    for (pf, pt) in path {
        let a = distribution(from, pf)?;
        let b = distribution(to, pt)?;
        d.push(l1_distance(&a, &b)?);
    }
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    Ok(ConvergenceReport {
        from: from.to_string(),
        to: to.to_string(),
        path: path.to_vec(),
        l1_distances: d,
        decreasing,
    })
}

/// Gamma approaching the exponential as `k -> 1` with `alpha = 1`.
pub fn gamma_to_exponential() -> Vec<(Params, Params)> {
    [2.0, 1.5, 1.1, 1.01]
        .iter()
        .map(|&k| (to_params(&[("k", k), ("alpha", 1.0)]), to_params(&[("lambda", 1.0)])))
        .collect()
}

/// Lomax approaching the unit exponential as `alpha -> inf` with `k = alpha`.
/// The path starts at 2 because `k = alpha = 1` is not normalizable.
pub fn lomax_to_exponential() -> Vec<(Params, Params)> {
    [2.0, 10.0, 100.0]
        .iter()
        .map(|&a| (to_params(&[("k", a), ("alpha", a)]), to_params(&[("lambda", 1.0)])))
        .collect()
}

/// Student's approaching the Gaussian `e^{-(k/alpha) y²}` as `alpha -> inf`
/// with `k/alpha = 1/2`.
pub fn students_to_gauss() -> Vec<(Params, Params)> {
    [2.0, 20.0, 200.0]
        .iter()
        .map(|&a| (to_params(&[("k", a / 2.0), ("alpha", a)]), to_params(&[("lambda", 0.5)])))
        .collect()
}

/// Least-squares slope of `log p` against `log y` on log-spaced points in `[lo, hi]`.
pub fn tail_slope(dist: &GridDistribution, lo: f64, hi: f64, points: usize) -> Result<f64> {
    let pts = crate::scale::default_sample_points(lo, hi, points);
    let xs: Vec<f64> = pts.iter().map(|y| y.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|&y| dist.log_density_at(y)).collect();
    if ys.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("density vanishes inside the tail window"));
    }
    Ok(crate::scale::fit_line(&xs, &ys)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        assert_eq!(entries().len(), 22);
        for e in entries() {
            assert!(e.settings.len() >= 3, "{}", e.name);
            Expr::parse(e.closed_form).unwrap();
            for i in 0..e.settings.len() {
                e.instantiate(&e.setting(i)).unwrap();
            }
        }
    }

    #[test]
    fn instantiate_examples() {
        let s = instantiate("exponential", &to_params(&[("lambda", 1.0)])).unwrap();
        assert_eq!(s.scale, MeasurementScale::linear());
        assert_eq!(s.measure, MeasureAdjustment::Unit);
        assert_eq!(s.support, Interval::positive());
        assert!(matches!(instantiate("nosuch", &Params::new()), Err(Error::UnknownDistribution(_))));
        assert!(matches!(
            instantiate("lomax", &to_params(&[("k", 0.5), ("alpha", 1.0)])),
            Err(Error::ParameterOutOfDomain { .. })
        ));
        assert!(matches!(
            instantiate("beta", &to_params(&[("lambda", 0.5), ("b", 3.0), ("c1", 0.0), ("c2", 1.0)])),
            Err(Error::ParameterOutOfDomain { .. })
        ));
        assert!(instantiate("gamma", &to_params(&[("k", 2.0)])).is_err());
        assert!(instantiate("gamma", &to_params(&[("k", 2.0), ("alpha", 1.0), ("zeta", 1.0)])).is_err());
    }

    #[test]
    fn gamma_scale_for_k2() {
        let s = instantiate("gamma", &to_params(&[("k", 2.0), ("alpha", 1.0)])).unwrap();
        assert_eq!(s.lambda, 1.0);
        // T = -log y + y
        assert!((s.scale_value(2.0).unwrap() - (2.0 - 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn named_examples_verify() {
        let r = verify_entry("gumbel", &to_params(&[("lambda", 1.0), ("beta", 1.0)])).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_entry("generalized_students", &to_params(&[("k", 1.0), ("alpha", 1.0)])).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_entry("gamma", &to_params(&[("k", 1.0), ("alpha", 2.0)])).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
