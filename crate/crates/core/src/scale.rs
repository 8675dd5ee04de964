//! Measurement scales: observables, base scale expressions, the exponential
//! wrapper and the transformations a scale may be invariant under.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The observable `f_y` that the base scale is applied to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableMap {
    Identity,
    SquaredDeviation { center: f64 },
    AbsoluteValue,
    LogOfValue,
}

impl ObservableMap {
    pub fn eval(&self, y: f64) -> Result<f64> {
        match *self {
            ObservableMap::Identity => Ok(y),
            ObservableMap::SquaredDeviation { center } => Ok((y - center) * (y - center)),
            ObservableMap::AbsoluteValue => Ok(y.abs()),
            ObservableMap::LogOfValue => {
                if y > 0.0 {
                    Ok(y.ln())
                } else {
                    Err(Error::domain(format!("log observable needs y > 0, got {y}")))
                }
            }
        }
    }

    /// `(f(y), f'(y))`.
    pub fn eval_with_derivative(&self, y: f64) -> Result<(f64, f64)> {
        let v = self.eval(y)?;
        let d = match *self {
            ObservableMap::Identity => 1.0,
            ObservableMap::SquaredDeviation { center } => 2.0 * (y - center),
            ObservableMap::AbsoluteValue => {
                if y > 0.0 {
                    1.0
                } else if y < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            ObservableMap::LogOfValue => 1.0 / y,
        };
        Ok((v, d))
    }
}

/// Base scale `w` as a closed expression tree over the observable value `v`.
///
/// `Exp` is `e^{rate * inner}`; it lets power laws (`y^γ = e^{γ log y}`) and
/// reciprocal maps appear inside change-of-variable and tail-scale nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleExpr {
    Linear,
    #[serde(rename = "logdeform")]
    LogDeform { c: f64, inner: Box<ScaleExpr> },
    #[serde(rename = "combination")]
    LinearCombination(Vec<(f64, ScaleExpr)>),
    Exp { rate: f64, inner: Box<ScaleExpr> },
}

impl ScaleExpr {
    pub fn log_deform(c: f64, inner: ScaleExpr) -> Self {
        ScaleExpr::LogDeform {
            c,
            inner: Box::new(inner),
        }
    }

    /// `log v`.
    pub fn log() -> Self {
        Self::log_deform(0.0, ScaleExpr::Linear)
    }

    pub fn exp(rate: f64, inner: ScaleExpr) -> Self {
        ScaleExpr::Exp {
            rate,
            inner: Box::new(inner),
        }
    }

    /// `v^gamma` for `v > 0`.
    pub fn power(gamma: f64) -> Self {
        Self::exp(gamma, Self::log())
    }

    pub fn combination(terms: Vec<(f64, ScaleExpr)>) -> Self {
        ScaleExpr::LinearCombination(terms)
    }

    pub fn depth(&self) -> usize {
        match self {
            ScaleExpr::Linear => 1,
            ScaleExpr::LogDeform { inner, .. } | ScaleExpr::Exp { inner, .. } => 1 + inner.depth(),
            ScaleExpr::LinearCombination(terms) => 1 + terms.iter().map(|(_, e)| e.depth()).max().unwrap_or(0),
        }
    }

    pub fn eval(&self, v: f64) -> Result<f64> {
        match self {
            ScaleExpr::Linear => Ok(v),
            ScaleExpr::LogDeform { c, inner } => {
                let arg = c + inner.eval(v)?;
                if arg == f64::INFINITY {
                    Err(Error::domain(format!("log argument overflows at v = {v}")))
                } else if arg > 0.0 {
                    Ok(arg.ln())
                } else {
                    Err(Error::domain(format!("log argument {arg} is not positive at v = {v}")))
                }
            }
            ScaleExpr::LinearCombination(terms) => {
                let mut acc = 0.0;
                for (a, e) in terms {
                    acc += a * e.eval(v)?;
                }
                Ok(acc)
            }
            ScaleExpr::Exp { rate, inner } => Ok((rate * inner.eval(v)?).exp()),
        }
    }

    /// `(w(v), dw/dv)` by the chain rule.
    pub fn eval_with_derivative(&self, v: f64) -> Result<(f64, f64)> {
        match self {
            ScaleExpr::Linear => Ok((v, 1.0)),
            ScaleExpr::LogDeform { c, inner } => {
                let (iv, id) = inner.eval_with_derivative(v)?;
                let arg = c + iv;
                if arg == f64::INFINITY {
                    Err(Error::domain(format!("log argument overflows at v = {v}")))
                } else if arg > 0.0 {
                    Ok((arg.ln(), id / arg))
                } else {
                    Err(Error::domain(format!("log argument {arg} is not positive at v = {v}")))
                }
            }
            ScaleExpr::LinearCombination(terms) => {
                let mut val = 0.0;
                let mut der = 0.0;
                for (a, e) in terms {
                    let (ev, ed) = e.eval_with_derivative(v)?;
                    val += a * ev;
                    der += a * ed;
                }
                Ok((val, der))
            }
            ScaleExpr::Exp { rate, inner } => {
                let (iv, id) = inner.eval_with_derivative(v)?;
                let e = (rate * iv).exp();
                Ok((e, rate * id * e))
            }
        }
    }

    /// `(w(v), log |dw/dv|, sign dw/dv)`, with the derivative carried in log
    /// space so that steep maps (`v^{-3}` near 0, `e^{v}` for large `v`) keep
    /// a usable magnitude after `dw/dv` itself has overflowed.
    pub fn eval_with_log_derivative(&self, v: f64) -> Result<(f64, f64, f64)> {
        match self {
            ScaleExpr::Linear => Ok((v, 0.0, 1.0)),
            ScaleExpr::LogDeform { c, inner } => {
                let (iv, il, is) = inner.eval_with_log_derivative(v)?;
                let arg = c + iv;
                if arg == f64::INFINITY {
                    Err(Error::domain(format!("log argument overflows at v = {v}")))
                } else if arg > 0.0 {
                    Ok((arg.ln(), il - arg.ln(), is))
                } else {
                    Err(Error::domain(format!("log argument {arg} is not positive at v = {v}")))
                }
            }
            ScaleExpr::Exp { rate, inner } => {
                let (iv, il, is) = inner.eval_with_log_derivative(v)?;
                let e = rate * iv;
                Ok((e.exp(), e + rate.abs().ln() + il, is * rate.signum()))
            }
            ScaleExpr::LinearCombination(terms) => {
                let mut val = 0.0;
                let mut parts = Vec::with_capacity(terms.len());
                for (a, e) in terms {
                    let (ev, el, es) = e.eval_with_log_derivative(v)?;
                    val += a * ev;
                    if *a != 0.0 {
                        parts.push((el + a.abs().ln(), es * a.signum()));
                    }
                }
                let top = parts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
                if top == f64::NEG_INFINITY {
                    return Ok((val, f64::NEG_INFINITY, 0.0));
                }
                if top == f64::INFINITY {
                    // several overflowing terms cannot be compared; fall back to the plain sum
                    let (_, d) = self.eval_with_derivative(v)?;
                    return Ok((val, d.abs().ln(), d.signum()));
                }
                let sum: f64 = parts.iter().map(|(l, s)| s * (l - top).exp()).sum();
                Ok((val, top + sum.abs().ln(), sum.signum()))
            }
        }
    }

    /// Analytic inverse for single-chain expressions. Returns `None` for
    /// combinations with more than one non-trivial term.
    pub fn inverse(&self, x: f64) -> Option<f64> {
        match self {
            ScaleExpr::Linear => Some(x),
            ScaleExpr::LogDeform { c, inner } => inner.inverse(x.exp() - c),
            ScaleExpr::Exp { rate, inner } => {
                // x = 0 is the limit at infinity
                if x >= 0.0 && *rate != 0.0 {
                    inner.inverse(x.ln() / rate)
                } else {
                    None
                }
            }
            ScaleExpr::LinearCombination(terms) => match terms.as_slice() {
                [(a, e)] if *a != 0.0 => e.inverse(x / a),
                _ => None,
            },
        }
    }
}

impl fmt::Display for ScaleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleExpr::Linear => write!(f, "v"),
            ScaleExpr::LogDeform { c, inner } if *c == 0.0 => write!(f, "log({inner})"),
            ScaleExpr::LogDeform { c, inner } => write!(f, "log({c} + {inner})"),
            ScaleExpr::Exp { rate, inner } => write!(f, "exp({rate}*{inner})"),
            ScaleExpr::LinearCombination(terms) => {
                write!(f, "(")?;
                for (i, (a, e)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{a}*{e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WrapMode {
    ExponentialWrap,
    AffineLimit,
}

/// Full scaling relation `T_f`: either `(e^{βw} - 1)/β` or its β→0 limit `w`,
/// optionally followed by the affine map `offset + factor * T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementScale {
    pub base: ScaleExpr,
    #[serde(default)]
    pub beta: f64,
    #[serde(default = "default_mode")]
    pub mode: WrapMode,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub offset: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub factor: f64,
}

fn default_mode() -> WrapMode {
    WrapMode::AffineLimit
}

fn one() -> f64 {
    1.0
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

impl MeasurementScale {
    pub fn affine(base: ScaleExpr) -> Self {
        Self {
            base,
            beta: 0.0,
            mode: WrapMode::AffineLimit,
            offset: 0.0,
            factor: 1.0,
        }
    }

    pub fn exponential(base: ScaleExpr, beta: f64) -> Self {
        Self {
            base,
            beta,
            mode: WrapMode::ExponentialWrap,
            offset: 0.0,
            factor: 1.0,
        }
    }

    /// The scale `a + b T`.
    pub fn affinely_rescaled(&self, a: f64, b: f64) -> Self {
        Self {
            offset: a + b * self.offset,
            factor: b * self.factor,
            ..self.clone()
        }
    }

    pub fn linear() -> Self {
        Self::affine(ScaleExpr::Linear)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::domain(format!("beta must be finite and >= 0, got {}", self.beta)));
        }
        if self.mode == WrapMode::ExponentialWrap && self.beta <= 0.0 {
            return Err(Error::domain("exponential wrap needs beta > 0"));
        }
        if !self.offset.is_finite() || !self.factor.is_finite() || self.factor == 0.0 {
            return Err(Error::domain("affine rescaling needs finite offset and nonzero factor"));
        }
        Ok(())
    }

    /// Apply the wrapper to a base value `w`.
    pub fn wrap(&self, w: f64) -> f64 {
        let t = match self.mode {
            WrapMode::AffineLimit => w,
            WrapMode::ExponentialWrap => (self.beta * w).exp_m1() / self.beta,
        };
        self.offset + self.factor * t
    }

    fn wrap_derivative(&self, w: f64) -> f64 {
        let d = match self.mode {
            WrapMode::AffineLimit => 1.0,
            WrapMode::ExponentialWrap => (self.beta * w).exp(),
        };
        self.factor * d
    }

    /// `T` applied to an observable value `v`.
    pub fn eval_value(&self, v: f64) -> Result<f64> {
        self.validate()?;
        Ok(self.wrap(self.base.eval(v)?))
    }
}

/// `T(f(y))`.
pub fn eval_scale(scale: &MeasurementScale, observable: &ObservableMap, y: f64) -> Result<f64> {
    scale.validate()?;
    let v = observable.eval(y)?;
    let t = scale.wrap(scale.base.eval(v)?);
    if t.is_nan() {
        return Err(Error::domain(format!("scale is undefined at y = {y}")));
    }
    Ok(t)
}

/// `(T(f(y)), dT(f(y))/dy)` from the expression tree.
pub fn eval_scale_with_derivative(scale: &MeasurementScale, observable: &ObservableMap, y: f64) -> Result<(f64, f64)> {
    scale.validate()?;
    let (v, dv) = observable.eval_with_derivative(y)?;
    let (w, dw) = scale.base.eval_with_derivative(v)?;
    let t = scale.wrap(w);
    let dt = scale.wrap_derivative(w) * dw * dv;
    if t.is_nan() || dt.is_nan() {
        return Err(Error::domain(format!("scale is undefined at y = {y}")));
    }
    Ok((t, dt))
}

/// `(T(f(y)), log |dT(f(y))/dy|)`, accumulating the chain rule in log space so
/// that a large wrapper factor `e^{βw}` does not overflow before `T` does.
pub fn eval_scale_log_abs_derivative(scale: &MeasurementScale, observable: &ObservableMap, y: f64) -> Result<(f64, f64)> {
    scale.validate()?;
    let (v, dv) = observable.eval_with_derivative(y)?;
    let (w, log_dw, _) = scale.base.eval_with_log_derivative(v)?;
    let t = scale.wrap(w);
    let wrap_log = match scale.mode {
        WrapMode::AffineLimit => 0.0,
        WrapMode::ExponentialWrap => scale.beta * w,
    };
    let log_d = scale.factor.abs().ln() + wrap_log + log_dw + dv.abs().ln();
    if t.is_nan() || log_d.is_nan() {
        return Err(Error::domain(format!("scale is undefined at y = {y}")));
    }
    Ok((t, log_d))
}

/// `dT(f(y))/dy`.
pub fn eval_scale_derivative(scale: &MeasurementScale, observable: &ObservableMap, y: f64) -> Result<f64> {
    eval_scale_with_derivative(scale, observable, y).map(|(_, d)| d)
}

/// A transformation `G` of the observable or base-scale value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Shift { delta: f64 },
    Affine { delta: f64, theta: f64 },
    PowerLaw { c: f64, gamma: f64 },
}

impl Transform {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Transform::Shift { .. } => Ok(()),
            Transform::Affine { theta, .. } if theta == 0.0 => Err(Error::domain("affine transform needs theta != 0")),
            Transform::Affine { .. } => Ok(()),
            Transform::PowerLaw { c, gamma } => {
                if c > 0.0 && gamma != 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain("power law needs c > 0 and gamma != 0"))
                }
            }
        }
    }
}

pub fn apply_transform(t: &Transform, x: f64) -> Result<f64> {
    t.validate()?;
    match *t {
        Transform::Shift { delta } => Ok(delta + x),
        Transform::Affine { delta, theta } => Ok(delta + theta * x),
        Transform::PowerLaw { c, gamma } => {
            if x > 0.0 {
                Ok(c * x.powf(gamma))
            } else {
                Err(Error::domain(format!("power law needs positive input, got {x}")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub is_invariant: bool,
    pub fitted_a: f64,
    pub fitted_b: f64,
    pub max_residual: f64,
}

pub const DEFAULT_INVARIANCE_TOLERANCE: f64 = 1e-9;

/// Least-squares test of `T(G(f(y))) = a + b T(f(y))` over the sample points.
pub fn check_affine_invariance(
    scale: &MeasurementScale,
    observable: &ObservableMap,
    t: &Transform,
    sample_points: &[f64],
) -> Result<InvarianceReport> {
    check_affine_invariance_with_tolerance(scale, observable, t, sample_points, DEFAULT_INVARIANCE_TOLERANCE)
}

pub fn check_affine_invariance_with_tolerance(
    scale: &MeasurementScale,
    observable: &ObservableMap,
    t: &Transform,
    sample_points: &[f64],
    tolerance: f64,
) -> Result<InvarianceReport> {
    let mut distinct: Vec<f64> = sample_points.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::DegenerateInput("need at least 3 distinct sample points".into()));
    }
    let mut xs = Vec::with_capacity(sample_points.len());
    let mut ys = Vec::with_capacity(sample_points.len());
    for &y in sample_points {
        let v = observable.eval(y)?;
        let tx = scale.eval_value(v)?;
        let ty = scale.eval_value(apply_transform(t, v)?)?;
        if !tx.is_finite() || !ty.is_finite() {
            return Err(Error::domain(format!("scale is not finite at y = {y}")));
        }
        xs.push(tx);
        ys.push(ty);
    }
    let (a, b) = fit_line(&xs, &ys)?;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (a + b * x)).abs())
        .fold(0.0, f64::max);
    Ok(InvarianceReport {
        is_invariant: max_residual < tolerance,
        fitted_a: a,
        fitted_b: b,
        max_residual,
    })
}

/// Ordinary least squares `y = a + b x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let spread = xs.iter().map(|x| (x - mx).abs()).fold(0.0, f64::max);
    if spread <= 1e-14 * mx.abs().max(f64::MIN_POSITIVE) || sxx == 0.0 {
        return Err(Error::DegenerateInput("all scale values coincide".into()));
    }
    let b = sxy / sxx;
    Ok((my - b * mx, b))
}

/// `n` log-spaced points over `[lo, hi]` (both positive), or linearly spaced
/// when the interval touches zero or negative values.
pub fn default_sample_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(3);
    if lo > 0.0 && hi > lo {
        let (a, b) = (lo.ln(), hi.ln());
        (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
    } else {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn log_derivative_matches_plain_derivative() {
        let exprs = [
            ScaleExpr::Linear,
            ScaleExpr::log(),
            ScaleExpr::power(-2.5),
            ScaleExpr::log_deform(1.0, ScaleExpr::exp(0.5, ScaleExpr::Linear)),
            ScaleExpr::combination(vec![(2.0, ScaleExpr::log()), (-0.3, ScaleExpr::Linear), (0.0, ScaleExpr::Linear)]),
        ];
        for e in &exprs {
            for v in [0.1, 0.7, 3.0, 40.0] {
                let (w, d) = e.eval_with_derivative(v).unwrap();
                let (w2, l, s) = e.eval_with_log_derivative(v).unwrap();
                assert_eq!(w, w2);
                assert!((s * l.exp() - d).abs() <= 1e-13 * d.abs(), "{e} at {v}");
            }
        }
        // v^{-3} overflows near 0 while its log stays finite
        let (_, l, s) = ScaleExpr::power(-2.0).eval_with_log_derivative(1e-110).unwrap();
        assert!(l.is_finite() && s < 0.0);
    }

    #[test]
    fn eval_examples() {
        let id = ObservableMap::Identity;
        assert_eq!(eval_scale(&MeasurementScale::linear(), &id, 3.0).unwrap(), 3.0);
        let logd = MeasurementScale::affine(ScaleExpr::log_deform(1.0, ScaleExpr::Linear));
        assert!((eval_scale(&logd, &id, E - 1.0).unwrap() - 1.0).abs() < 1e-15);
        let ew = MeasurementScale::exponential(ScaleExpr::Linear, 1.0);
        assert_eq!(eval_scale(&ew, &id, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_examples() {
        let id = ObservableMap::Identity;
        assert_eq!(eval_scale_derivative(&MeasurementScale::linear(), &id, 5.0).unwrap(), 1.0);
        let logd = MeasurementScale::affine(ScaleExpr::log_deform(1.0, ScaleExpr::Linear));
        assert_eq!(eval_scale_derivative(&logd, &id, 0.0).unwrap(), 1.0);
        let sq = ObservableMap::SquaredDeviation { center: 0.0 };
        assert_eq!(eval_scale_derivative(&MeasurementScale::linear(), &sq, 2.0).unwrap(), 4.0);
    }

    #[test]
    fn log_of_nonpositive_is_domain_error() {
        let s = MeasurementScale::affine(ScaleExpr::log());
        assert!(matches!(eval_scale(&s, &ObservableMap::Identity, 0.0), Err(Error::Domain(_))));
        assert!(matches!(
            eval_scale(&MeasurementScale::linear(), &ObservableMap::LogOfValue, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn transform_examples() {
        assert_eq!(apply_transform(&Transform::Shift { delta: 2.0 }, 3.0).unwrap(), 5.0);
        assert_eq!(apply_transform(&Transform::Affine { delta: 1.0, theta: 2.0 }, 3.0).unwrap(), 7.0);
        assert_eq!(apply_transform(&Transform::PowerLaw { c: 2.0, gamma: 3.0 }, 2.0).unwrap(), 16.0);
        assert!(apply_transform(&Transform::PowerLaw { c: 2.0, gamma: 3.0 }, 0.0).is_err());
    }

    #[test]
    fn log_scale_is_power_law_invariant() {
        let s = MeasurementScale::affine(ScaleExpr::log());
        let t = Transform::PowerLaw { c: 3.0, gamma: 2.5 };
        let r = check_affine_invariance(&s, &ObservableMap::Identity, &t, &default_sample_points(0.01, 100.0, 64)).unwrap();
        assert!(r.is_invariant);
        assert!((r.fitted_a - 3f64.ln()).abs() < 1e-12);
        assert!((r.fitted_b - 2.5).abs() < 1e-12);
    }

    #[test]
    fn exponential_scale_is_shift_invariant() {
        let s = MeasurementScale::exponential(ScaleExpr::Linear, 1.0);
        let r = check_affine_invariance(&s, &ObservableMap::Identity, &Transform::Shift { delta: 0.7 }, &[0.0, 1.0, 2.0]).unwrap();
        assert!(r.is_invariant);
        assert!((r.fitted_b - 0.7f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn log_scale_is_not_shift_invariant() {
        // Oracle: best affine fit of log(1+y) against log(y) at y = 1, 2, 4, 8.
        // With x = k log 2 (k = 0..3) the fit residuals are of order 1e-2.
        let s = MeasurementScale::affine(ScaleExpr::log());
        let pts = [1.0, 2.0, 4.0, 8.0];
        let r = check_affine_invariance(&s, &ObservableMap::Identity, &Transform::Shift { delta: 1.0 }, &pts).unwrap();
        let xs: Vec<f64> = pts.iter().map(|y: &f64| y.ln()).collect();
        let ys: Vec<f64> = pts.iter().map(|y: &f64| (1.0 + y).ln()).collect();
        let (a, b) = fit_line(&xs, &ys).unwrap();
        let oracle = xs.iter().zip(&ys).map(|(x, y)| (y - a - b * x).abs()).fold(0.0, f64::max);
        assert!(!r.is_invariant);
        assert!((r.max_residual - oracle).abs() < 1e-14);
        assert!(r.max_residual > 1e-3);
    }

    #[test]
    fn degenerate_fit() {
        let s = MeasurementScale::affine(ScaleExpr::log());
        let r = check_affine_invariance(&s, &ObservableMap::AbsoluteValue, &Transform::Shift { delta: 1.0 }, &[1.0, -1.0, 1.0]);
        assert!(matches!(r, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn json_shape() {
        let e = ScaleExpr::log_deform(1.0, ScaleExpr::Linear);
        let j = serde_json::to_string(&e).unwrap();
        assert_eq!(j, r#"{"logdeform":{"c":1.0,"inner":"linear"}}"#);
        let back: ScaleExpr = serde_json::from_str(r#"{"combination":[[2.0,"linear"],[-1.0,{"logdeform":{"c":0,"inner":"linear"}}]]}"#).unwrap();
        assert_eq!(back.eval(1.0).unwrap(), 2.0);
        let t: Transform = serde_json::from_str(r#"{"power_law":{"c":2,"gamma":3}}"#).unwrap();
        assert_eq!(t, Transform::PowerLaw { c: 2.0, gamma: 3.0 });
        let m: MeasurementScale = serde_json::from_str(r#"{"base":"linear"}"#).unwrap();
        assert_eq!(m.mode, WrapMode::AffineLimit);
        assert_eq!(m.factor, 1.0);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"base":"linear","beta":0.0,"mode":"affine_limit"}"#);
    }

    #[test]
    fn chain_inverse() {
        let e = ScaleExpr::exp(-1.0, ScaleExpr::log_deform(1.0, ScaleExpr::Linear));
        let y = 3.0;
        let x = e.eval(y).unwrap();
        assert!((e.inverse(x).unwrap() - y).abs() < 1e-14);
        let comb = ScaleExpr::combination(vec![(1.0, ScaleExpr::Linear), (1.0, ScaleExpr::log())]);
        assert!(comb.inverse(1.0).is_none());
    }
}
