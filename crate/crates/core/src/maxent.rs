//! Maximum-entropy densities `p_y ∝ m_y e^{-λ T_f}`: normalization onto a
//! grid, Lagrange-multiplier solving, entropy, surprise and a discrete
//! brute-force oracle.

use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::scale::{eval_scale, eval_scale_log_abs_derivative, fit_line, MeasurementScale, ObservableMap, ScaleExpr};

/// Support interval; infinite ends serialize as `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(serialize_with = "ser_bound", deserialize_with = "de_lower")]
    pub lo: f64,
    #[serde(serialize_with = "ser_bound", deserialize_with = "de_upper")]
    pub hi: f64,
}

fn ser_bound<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

fn de_lower<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
}

fn de_upper<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn real_line() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn positive() -> Self {
        Self::new(0.0, f64::INFINITY)
    }

    pub fn contains_interior(&self, y: f64) -> bool {
        y > self.lo && y < self.hi
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo.is_nan() || self.hi.is_nan() || self.lo >= self.hi {
            return Err(Error::domain(format!("degenerate support [{}, {}]", self.lo, self.hi)));
        }
        if self.lo == f64::INFINITY || self.hi == f64::NEG_INFINITY {
            return Err(Error::domain("support bounds point the wrong way"));
        }
        Ok(())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// The measure factor `m_y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureAdjustment {
    Unit,
    /// `m_y = |T'_f(y)|`.
    ScaleDerivative,
    /// `m_y = |g'(y)|`, with the scale read on the dissipation variable `x = g(y)`.
    ChangeOfVariable(ScaleExpr),
    /// `m_y = |g'(y)|` with the scale already composed with `g`, so it is read on `y`.
    Jacobian(ScaleExpr),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub scale: MeasurementScale,
    pub observable: ObservableMap,
    pub lambda: f64,
    pub measure: MeasureAdjustment,
    pub support: Interval,
}

impl DistributionSpec {
    pub fn new(scale: MeasurementScale, observable: ObservableMap, lambda: f64, measure: MeasureAdjustment, support: Interval) -> Self {
        Self {
            scale,
            observable,
            lambda,
            measure,
            support,
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self {
            lambda,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scale.validate()?;
        self.support.validate()?;
        if !self.lambda.is_finite() {
            return Err(Error::domain(format!("lambda must be finite, got {}", self.lambda)));
        }
        Ok(())
    }

    /// The variable the scale is read on, `g(y)` under a change of variable and
    /// else `y`, with `log |dx/dy|`.
    fn dissipation_point(&self, y: f64) -> Result<(f64, f64)> {
        match &self.measure {
            MeasureAdjustment::ChangeOfVariable(g) => g.eval_with_log_derivative(y).map(|(x, l, _)| (x, l)),
            _ => Ok((y, 0.0)),
        }
    }

    /// `T(f(y))`, read through the change of variable when there is one.
    pub fn scale_value(&self, y: f64) -> Result<f64> {
        let (x, _) = self.dissipation_point(y)?;
        eval_scale(&self.scale, &self.observable, x)
    }

    /// `log u(y) = log m_y - λ T(f(·))`.
    pub fn log_unnormalized(&self, y: f64) -> Result<f64> {
        let (x, log_dx) = self.dissipation_point(y)?;
        let (t, log_dt) = eval_scale_log_abs_derivative(&self.scale, &self.observable, x)?;
        let log_m = match &self.measure {
            MeasureAdjustment::Unit => 0.0,
            MeasureAdjustment::ScaleDerivative => log_dt,
            MeasureAdjustment::ChangeOfVariable(_) => log_dx,
            MeasureAdjustment::Jacobian(g) => g.eval_with_log_derivative(y)?.1,
        };
        let exponent = -self.lambda * t;
        // an infinite measure against a vanishing exponential factor
        if log_m.is_infinite() && exponent.is_infinite() && log_m.signum() != exponent.signum() {
            return Ok(f64::NEG_INFINITY);
        }
        let v = log_m + exponent;
        if v.is_nan() {
            return Err(Error::domain(format!("density is undefined at y = {y}")));
        }
        Ok(v)
    }
}

/// Coordinate used to lay out grids and scan for the mode.
#[derive(Debug, Clone, Copy)]
enum Chart {
    /// `y = c + s sinh z`.
    Line { c: f64, s: f64 },
    /// `y = a + e^z`.
    Right { a: f64 },
    /// `y = b - e^{-z}`.
    Left { b: f64 },
    /// `y = a + (b - a) / (1 + e^{-z})`.
    Bounded { a: f64, b: f64 },
}

impl Chart {
    fn for_support(support: Interval, center: f64) -> Self {
        match (support.lo.is_finite(), support.hi.is_finite()) {
            (false, false) => Chart::Line { c: center, s: 1.0 },
            (true, false) => Chart::Right { a: support.lo },
            (false, true) => Chart::Left { b: support.hi },
            (true, true) => Chart::Bounded {
                a: support.lo,
                b: support.hi,
            },
        }
    }

    fn y(&self, z: f64) -> f64 {
        match *self {
            Chart::Line { c, s } => c + s * z.sinh(),
            Chart::Right { a } => a + z.exp(),
            Chart::Left { b } => b - (-z).exp(),
            Chart::Bounded { a, b } => {
                if z >= 0.0 {
                    b - (b - a) / (1.0 + z.exp())
                } else {
                    a + (b - a) / (1.0 + (-z).exp())
                }
            }
        }
    }

    fn dy_dz(&self, z: f64) -> f64 {
        match *self {
            Chart::Line { s, .. } => s * z.cosh(),
            Chart::Right { .. } => z.exp(),
            Chart::Left { .. } => (-z).exp(),
            Chart::Bounded { a, b } => {
                let e = (-z.abs()).exp();
                (b - a) * e / ((1.0 + e) * (1.0 + e))
            }
        }
    }

    /// Scan range in `z` wide enough to cover every representable offset.
    fn scan_range(&self) -> (f64, f64) {
        match *self {
            Chart::Line { .. } => (-45.0, 45.0),
            Chart::Right { .. } | Chart::Left { .. } => (-45.0, 45.0),
            Chart::Bounded { .. } => (-40.0, 40.0),
        }
    }
}

/// Location of the bulk and the log-scale offset used to keep `u` in range.
#[derive(Debug, Clone, Copy)]
struct Bulk {
    log_peak: f64,
    center: f64,
    width: f64,
    z_peak: f64,
}

/// Whether `y` is far enough out that a failed evaluation there is floating
/// point running out of range (`y²` overflowing, `y/(1+y)` rounding to 1)
/// rather than a genuine hole in the density.
fn far_out(support: Interval, center: f64, width: f64, y: f64) -> bool {
    let size = 1f64.max(center.abs() + width.abs());
    if !(y.abs() <= 1e12 * size) {
        return true;
    }
    let near = |end: f64| end.is_finite() && (y - end).abs() < 1e-100 * 1f64.max(end.abs());
    near(support.lo) || near(support.hi)
}

/// `log u(y)`, with failures at far-out points reported as `None`.
fn log_u_lenient(spec: &DistributionSpec, center: f64, width: f64, y: f64) -> Result<Option<f64>> {
    match spec.log_unnormalized(y) {
        Ok(l) => Ok(Some(l)),
        Err(_) if far_out(spec.support, center, width, y) => Ok(None),
        Err(e) => Err(e),
    }
}

fn locate_bulk(spec: &DistributionSpec, chart: Chart, center_hint: f64) -> Result<Bulk> {
    let (z0, z1) = chart.scan_range();
    let steps = ((z1 - z0) / 0.125) as usize;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..=steps {
        let z = z0 + (z1 - z0) * i as f64 / steps as f64;
        let y = chart.y(z);
        if !spec.support.contains_interior(y) {
            continue;
        }
        let Some(l) = log_u_lenient(spec, center_hint, 0.0, y)? else {
            continue;
        };
        if l.is_finite() && best.is_none_or(|(_, b)| l > b) {
            best = Some((z, l));
        }
    }
    let (mut z_peak, mut log_peak) = best.ok_or_else(|| Error::domain("density vanishes everywhere on the support"))?;

    // golden-section polish of the peak in z
    let f = |z: f64| {
        let y = chart.y(z);
        if spec.support.contains_interior(y) {
            spec.log_unnormalized(y).ok().filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY)
        } else {
            f64::NEG_INFINITY
        }
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (z_peak - 0.125, z_peak + 0.125);
    for _ in 0..40 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let zm = 0.5 * (a + b);
    let lm = f(zm);
    if lm > log_peak {
        z_peak = zm;
        log_peak = lm;
    }

    let center = chart.y(z_peak);
    // width: distance to where log u has dropped by 2 on either side
    let mut width = f64::INFINITY;
    for dir in [-1.0, 1.0] {
        let mut k = 1;
        while k < 400 {
            let z = z_peak + dir * 0.125 * k as f64;
            let y = chart.y(z);
            if !spec.support.contains_interior(y) || f(z) < log_peak - 2.0 {
                width = width.min((y - center).abs());
                break;
            }
            k += 1;
        }
    }
    if !width.is_finite() || width <= 0.0 {
        width = center.abs().max(1.0);
    }
    Ok(Bulk {
        log_peak,
        center,
        width,
        z_peak,
    })
}

/// Normalizing integral of `exp(log u - log_peak)` over the support.
fn mass_integral(spec: &DistributionSpec, bulk: &Bulk, lo: f64, hi: f64, tol: Tolerance) -> Result<quadrature::Estimate> {
    let err = std::cell::RefCell::new(None);
    let f = |y: f64| {
        if !spec.support.contains_interior(y) {
            return 0.0;
        }
        match log_u_lenient(spec, bulk.center, bulk.width, y) {
            Ok(Some(l)) => (l - bulk.log_peak).exp(),
            Ok(None) => f64::NAN,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let scale = split_scale(spec, bulk, lo, hi);
    prefer_recorded(quadrature::integrate(&f, lo, hi, bulk.center, scale, tol), err)
}

/// Quadrature closures return NaN where the density cannot be evaluated so
/// that unrepresentable far tails get trimmed. An error recorded at an
/// ordinary point always wins over the integration result.
fn prefer_recorded<T>(r: Result<T>, recorded: std::cell::RefCell<Option<Error>>) -> Result<T> {
    match recorded.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

/// Split distance for the exponential substitution on half-lines.
fn split_scale(spec: &DistributionSpec, bulk: &Bulk, lo: f64, hi: f64) -> f64 {
    let _ = spec;
    if lo.is_finite() && !hi.is_finite() {
        (bulk.center - lo).max(bulk.width).max(1e-300)
    } else if hi.is_finite() && !lo.is_finite() {
        (hi - bulk.center).max(bulk.width).max(1e-300)
    } else {
        bulk.width
    }
}

/// Grid construction settings for [`normalize_with`].
#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub points: usize,
    /// `u` below this fraction of its maximum is cut from semi-infinite ends.
    pub truncation: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            points: 4096,
            truncation: 1e-16,
        }
    }
}

pub type LogDensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A normalized density tabulated on a strictly increasing grid.
///
/// Distributions produced from a spec also carry the exact log-density, which
/// lets entropy and moments be computed by adaptive quadrature instead of on
/// the grid.
#[derive(Clone)]
pub struct GridDistribution {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub psi: f64,
    pub quadrature_error: f64,
    pub support: Interval,
    exact: Option<Exact>,
}

#[derive(Clone)]
struct Exact {
    log_density: LogDensityFn,
    center: f64,
    width: f64,
}

impl fmt::Debug for GridDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridDistribution")
            .field("points", &self.grid.len())
            .field("psi", &self.psi)
            .field("quadrature_error", &self.quadrature_error)
            .field("support", &self.support)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GridRecord {
    grid: Vec<f64>,
    density: Vec<f64>,
    psi: f64,
    quadrature_error: f64,
}

impl Serialize for GridDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridRecord {
            grid: self.grid.clone(),
            density: self.density.clone(),
            psi: self.psi,
            quadrature_error: self.quadrature_error,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridDistribution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GridRecord::deserialize(d)?;
        GridDistribution::from_table(r.grid, r.density, r.psi, r.quadrature_error).map_err(serde::de::Error::custom)
    }
}

impl GridDistribution {
    /// A tabulated density without an exact closure. The grid must be
    /// strictly increasing and the density finite and nonnegative.
    pub fn from_table(grid: Vec<f64>, density: Vec<f64>, psi: f64, quadrature_error: f64) -> Result<Self> {
        if grid.len() < 2 || grid.len() != density.len() {
            return Err(Error::Malformed("grid and density need equal length >= 2".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::Malformed("grid must be finite and strictly increasing".into()));
        }
        if density.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Malformed("density must be finite and nonnegative".into()));
        }
        let support = Interval::new(grid[0], grid[grid.len() - 1]);
        Ok(Self {
            grid,
            density,
            psi,
            quadrature_error,
            support,
            exact: None,
        })
    }

    /// Attach an exact log-density, used for quadrature-based functionals.
    pub fn with_log_density(mut self, log_density: LogDensityFn, support: Interval, center: f64, width: f64) -> Self {
        self.support = support;
        self.exact = Some(Exact {
            log_density,
            center,
            width,
        });
        self
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn has_exact_density(&self) -> bool {
        self.exact.is_some()
    }

    /// Density at `y`: exact when available, else linear interpolation on the grid.
    pub fn density_at(&self, y: f64) -> f64 {
        if let Some(ex) = &self.exact {
            let l = (ex.log_density)(y);
            return if l.is_nan() { 0.0 } else { l.exp() };
        }
        interpolate(&self.grid, &self.density, y)
    }

    pub fn log_density_at(&self, y: f64) -> f64 {
        match &self.exact {
            Some(ex) => (ex.log_density)(y),
            None => self.density_at(y).ln(),
        }
    }

    pub(crate) fn exact_log_density(&self) -> Option<LogDensityFn> {
        self.exact.as_ref().map(|e| e.log_density.clone())
    }

    pub(crate) fn bulk_hint(&self) -> (f64, f64) {
        match &self.exact {
            Some(e) => (e.center, e.width),
            None => {
                let (i, _) = self
                    .density
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc });
                let span = self.grid[self.grid.len() - 1] - self.grid[0];
                (self.grid[i], (span / 16.0).max(f64::MIN_POSITIVE))
            }
        }
    }

    /// Trapezoid integral of the tabulated density.
    pub fn trapezoid_mass(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    /// `E[h(Y)]`, by adaptive quadrature when the exact density is known.
    pub fn expectation<F: Fn(f64) -> f64>(&self, h: F) -> Result<f64> {
        self.expectation_with(h, Tolerance::with_abs(1e-15))
    }

    /// [`expectation`](Self::expectation) with an explicit quadrature tolerance.
    pub fn expectation_with<F: Fn(f64) -> f64>(&self, h: F, tol: Tolerance) -> Result<f64> {
        match &self.exact {
            Some(ex) => {
                let f = |y: f64| {
                    if !self.support.contains_interior(y) {
                        return 0.0;
                    }
                    let l = (ex.log_density)(y);
                    if l == f64::NEG_INFINITY {
                        0.0
                    } else {
                        h(y) * l.exp()
                    }
                };
                let scale = if self.support.lo.is_finite() && !self.support.hi.is_finite() {
                    (ex.center - self.support.lo).max(ex.width)
                } else if self.support.hi.is_finite() && !self.support.lo.is_finite() {
                    (self.support.hi - ex.center).max(ex.width)
                } else {
                    ex.width
                };
                Ok(quadrature::integrate(&f, self.support.lo, self.support.hi, ex.center, scale, tol)?.value)
            }
            None => {
                let vals: Vec<f64> = self.grid.iter().zip(&self.density).map(|(&y, &p)| h(y) * p).collect();
                Ok(trapezoid(&self.grid, &vals))
            }
        }
    }

    /// Cumulative distribution on the grid (trapezoid), scaled to end at 1.
    pub fn cdf_table(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.grid.len());
        let mut acc = 0.0;
        c.push(0.0);
        for i in 1..self.grid.len() {
            acc += 0.5 * (self.density[i] + self.density[i - 1]) * (self.grid[i] - self.grid[i - 1]);
            c.push(acc);
        }
        if acc > 0.0 {
            for v in &mut c {
                *v /= acc;
            }
        }
        c
    }

    /// Grid value at which the tabulated CDF reaches `q`.
    pub fn quantile(&self, q: f64) -> f64 {
        let c = self.cdf_table();
        let i = c.partition_point(|&v| v < q);
        if i == 0 {
            return self.grid[0];
        }
        if i >= c.len() {
            return self.grid[self.grid.len() - 1];
        }
        let (c0, c1) = (c[i - 1], c[i]);
        let t = if c1 > c0 { (q - c0) / (c1 - c0) } else { 0.0 };
        self.grid[i - 1] + t * (self.grid[i] - self.grid[i - 1])
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "y,density")?;
        for (y, p) in self.grid.iter().zip(&self.density) {
            writeln!(w, "{y:.16e},{p:.16e}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    /// Parse the `y,density` CSV format. `psi` is unknown and set to NaN-free 1.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut grid = Vec::new();
        let mut density = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with('y')) {
                continue;
            }
            let mut parts = line.split(',');
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(Error::Malformed(format!("line {}: expected two columns", i + 1))),
            };
            let y: f64 = a.trim().parse().map_err(|_| Error::Malformed(format!("line {}: bad number '{a}'", i + 1)))?;
            let p: f64 = b.trim().parse().map_err(|_| Error::Malformed(format!("line {}: bad number '{b}'", i + 1)))?;
            grid.push(y);
            density.push(p);
        }
        let mass = trapezoid(&grid, &density);
        let mut d = Self::from_table(grid, density, 1.0, 0.0)?;
        d.quadrature_error = (mass - 1.0).abs();
        Ok(d)
    }
}

/// Linear interpolation, zero outside the grid.
pub fn interpolate(grid: &[f64], values: &[f64], y: f64) -> f64 {
    let n = grid.len();
    if n == 0 || y < grid[0] || y > grid[n - 1] {
        return 0.0;
    }
    let i = grid.partition_point(|&g| g <= y);
    if i == 0 {
        return values[0];
    }
    if i >= n {
        return values[n - 1];
    }
    let t = (y - grid[i - 1]) / (grid[i] - grid[i - 1]);
    values[i - 1] + t * (values[i] - values[i - 1])
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (yw[0] + yw[1]) * (xw[1] - xw[0]))
        .sum()
}

/// Log-normalizer of a spec: `log u - log_peak - log z` is the log density.
struct Normalizer {
    bulk: Bulk,
    chart: Chart,
    z: f64,
    z_error: f64,
}

fn normalizer(spec: &DistributionSpec) -> Result<Normalizer> {
    spec.validate()?;
    let center_hint = match spec.observable {
        ObservableMap::SquaredDeviation { center } => center,
        _ => 0.0,
    };
    let chart = Chart::for_support(spec.support, center_hint);
    let bulk = locate_bulk(spec, chart, center_hint)?;
    let chart = match chart {
        Chart::Line { .. } => Chart::Line {
            c: bulk.center,
            s: bulk.width,
        },
        other => other,
    };
    let bulk = match chart {
        Chart::Line { .. } => Bulk { z_peak: 0.0, ..bulk },
        _ => bulk,
    };
    let est = mass_integral(spec, &bulk, spec.support.lo, spec.support.hi, Tolerance::default())?;
    if !(est.value > 0.0) || !est.value.is_finite() {
        return Err(Error::DivergentIntegral(format!("normalizing integral is {}", est.value)));
    }
    Ok(Normalizer {
        bulk,
        chart,
        z: est.value,
        z_error: est.abs_error,
    })
}

fn log_density_fn(spec: &DistributionSpec, n: &Normalizer) -> LogDensityFn {
    let spec = spec.clone();
    let shift = n.bulk.log_peak + n.z.ln();
    Arc::new(move |y: f64| {
        if !spec.support.contains_interior(y) {
            return f64::NEG_INFINITY;
        }
        match spec.log_unnormalized(y) {
            Ok(l) => l - shift,
            Err(_) => f64::NAN,
        }
    })
}

/// `log ψ` for `spec`: the density is `ψ u(y)`. Fails with
/// `DivergentIntegral` when `u` is not integrable.
pub fn log_normalization_constant(spec: &DistributionSpec) -> Result<f64> {
    let n = normalizer(spec)?;
    Ok(-(n.bulk.log_peak + n.z.ln()))
}

/// Normalize `spec` onto the default 4096-point grid.
pub fn normalize(spec: &DistributionSpec) -> Result<GridDistribution> {
    normalize_with(spec, GridOptions::default())
}

pub fn normalize_with(spec: &DistributionSpec, opts: GridOptions) -> Result<GridDistribution> {
    let norm = normalizer(spec)?;
    let chart = norm.chart;
    let log_floor = opts.truncation.ln();
    // unevaluable far-out points count as below the floor
    let rel = |y: f64| -> Result<f64> {
        if !spec.support.contains_interior(y) {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(log_u_lenient(spec, norm.bulk.center, norm.bulk.width, y)?.map_or(f64::NEG_INFINITY, |l| l - norm.bulk.log_peak))
    };

    // Truncation in z on either side of the peak.
    let (scan_lo, scan_hi) = chart.scan_range();
    let z_peak = norm.bulk.z_peak;
    let mut ends = [scan_lo, scan_hi];
    for (k, dir) in [-1.0f64, 1.0].into_iter().enumerate() {
        let limit = ends[k];
        let mut inside = z_peak;
        let mut z = z_peak;
        let mut step = 0.125;
        let mut found = None;
        while (z - limit) * dir < 0.0 {
            let next = z + dir * step;
            let next = if (next - limit) * dir > 0.0 { limit } else { next };
            let y = chart.y(next);
            let resolvable = spec.support.contains_interior(y) && y.is_finite();
            if !resolvable {
                found = Some((inside, next));
                break;
            }
            let l = rel(y)?;
            if l < log_floor {
                found = Some((inside, next));
                break;
            }
            inside = next;
            z = next;
            step *= 1.25;
        }
        ends[k] = match found {
            Some((mut a, mut b)) => {
                // bisect for the last point that is resolvable and above the floor
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    let y = chart.y(m);
                    let ok = spec.support.contains_interior(y) && y.is_finite() && rel(y)? >= log_floor;
                    if ok {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                a
            }
            None => inside,
        };
    }
    let (z_lo, z_hi) = (ends[0], ends[1]);
    if !(z_hi > z_lo) {
        return Err(Error::domain("density is concentrated below grid resolution"));
    }

    // Pilot mesh and blended monitor in z: probability mass for percentile
    // resolution, mass^(1/3) for trapezoid accuracy, and a uniform floor.
    let pilot = 16 * opts.points.max(16);
    let mut zs = Vec::with_capacity(pilot + 1);
    let mut mass = Vec::with_capacity(pilot + 1);
    for i in 0..=pilot {
        let z = z_lo + (z_hi - z_lo) * i as f64 / pilot as f64;
        let y = chart.y(z);
        let l = rel(y)?;
        let w = if l.is_finite() { l.exp() * chart.dy_dz(z) } else { 0.0 };
        zs.push(z);
        mass.push(if w.is_finite() { w } else { 0.0 });
    }
    let cube: Vec<f64> = mass.iter().map(|m| m.cbrt()).collect();
    let total_mass = trapezoid(&zs, &mass);
    let total_cube = trapezoid(&zs, &cube);
    let share = |v: &[f64], total: f64, i: usize, dz: f64| {
        if total > 0.0 {
            0.5 * (v[i] + v[i - 1]) * dz / total
        } else {
            0.0
        }
    };
    let mut cum = vec![0.0; zs.len()];
    for i in 1..zs.len() {
        let dz = zs[i] - zs[i - 1];
        cum[i] = cum[i - 1] + 0.45 * share(&mass, total_mass, i, dz) + 0.45 * share(&cube, total_cube, i, dz) + 0.1 * dz / (z_hi - z_lo);
    }
    let last = cum[cum.len() - 1];
    let n = opts.points.max(2);
    let mut grid = Vec::with_capacity(n);
    let mut j = 0;
    for k in 0..n {
        let target = last * k as f64 / (n - 1) as f64;
        while j + 1 < cum.len() - 1 && cum[j + 1] < target {
            j += 1;
        }
        let (c0, c1) = (cum[j], cum[j + 1]);
        let t = if c1 > c0 { ((target - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { 0.0 };
        let z = zs[j] + t * (zs[j + 1] - zs[j]);
        let y = chart.y(z);
        if grid.last().is_none_or(|&p| y > p) {
            grid.push(y);
        }
    }

    let log_fn = log_density_fn(spec, &norm);
    let shift = norm.bulk.log_peak + norm.z.ln();
    let mut density = Vec::with_capacity(grid.len());
    for &y in &grid {
        let l = rel(y)? - norm.z.ln();
        density.push(if l.is_finite() { l.exp() } else { 0.0 });
    }
    if density.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("density is infinite at a grid point"));
    }

    // Mass outside the grid, then the discrepancy of the grid rule itself.
    let y_first = grid[0];
    let y_last = grid[grid.len() - 1];
    let mut outside = 0.0;
    let mut outside_err = 0.0;
    for (lo, hi) in [(spec.support.lo, y_first), (y_last, spec.support.hi)] {
        if hi > lo {
            // the pieces are small; their accuracy only matters relative to Z
            let e = mass_integral(spec, &norm.bulk, lo, hi, Tolerance::with_abs(1e-10 * norm.z))?;
            outside += e.value / norm.z;
            outside_err += e.abs_error / norm.z;
        }
    }
    let trap = trapezoid(&grid, &density);
    let quadrature_error = norm.z_error / norm.z + outside + outside_err + (trap + outside - 1.0).abs();
    let psi = (-shift).exp();

    Ok(GridDistribution {
        grid,
        density,
        psi,
        quadrature_error,
        support: spec.support,
        exact: None,
    }
    .with_log_density(log_fn, spec.support, norm.bulk.center, norm.bulk.width))
}

/// `E[T_f]` under the normalized density of `spec`.
pub fn mean_scale(spec: &DistributionSpec) -> Result<f64> {
    let norm = normalizer(spec)?;
    let shift = norm.bulk.log_peak + norm.z.ln();
    let err = std::cell::RefCell::new(None);
    let f = |y: f64| {
        if !spec.support.contains_interior(y) {
            return 0.0;
        }
        let r = log_u_lenient(spec, norm.bulk.center, norm.bulk.width, y).and_then(|l| {
            let Some(l) = l else { return Ok(f64::NAN) };
            let p = (l - shift).exp();
            if p == 0.0 {
                Ok(0.0)
            } else {
                match spec.scale_value(y) {
                    Ok(t) => Ok(t * p),
                    Err(_) if far_out(spec.support, norm.bulk.center, norm.bulk.width, y) => Ok(f64::NAN),
                    Err(e) => Err(e),
                }
            }
        });
        match r {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let scale = split_scale(spec, &norm.bulk, spec.support.lo, spec.support.hi);
    let r = quadrature::integrate(&f, spec.support.lo, spec.support.hi, norm.bulk.center, scale, Tolerance::with_abs(1e-15));
    Ok(prefer_recorded(r, err)?.value)
}

/// Average-value constraint `E[T_f] = target_mean`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub target_mean: f64,
    pub tolerance: f64,
}

impl Constraint {
    pub fn new(target_mean: f64, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) || !target_mean.is_finite() {
            return Err(Error::domain("constraint needs a finite target and tolerance > 0"));
        }
        Ok(Self {
            target_mean,
            tolerance,
        })
    }
}

/// Search limits for [`solve_lambda`].
pub const LAMBDA_RANGE: (f64, f64) = (1e-9, 1e9);

/// Find λ with `|E[T_f] - target| <= tolerance`. The λ stored in the
/// template only seeds the bracket search.
pub fn solve_lambda(template: &DistributionSpec, constraint: &Constraint) -> Result<f64> {
    if !(constraint.tolerance > 0.0) {
        return Err(Error::domain("constraint tolerance must be positive"));
    }
    let target = constraint.target_mean;
    let (min, max) = (LAMBDA_RANGE.0.ln(), LAMBDA_RANGE.1.ln());
    let no_bracket = || Error::NoBracket {
        target,
        lo: LAMBDA_RANGE.0,
        hi: LAMBDA_RANGE.1,
    };
    // residual(λ) = E[T] - target is decreasing in λ; `None` marks a λ at
    // which the spec does not normalize.
    let residual = |log_l: f64| -> Result<Option<f64>> {
        match mean_scale(&template.with_lambda(log_l.exp())) {
            Ok(m) => Ok(Some(m - target)),
            Err(Error::DivergentIntegral(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };

    // a normalizable starting point, scanning outwards from the template
    let seed = if template.lambda.is_finite() && template.lambda > 0.0 {
        template.lambda.ln().clamp(min, max)
    } else {
        0.0
    };
    let step = 10f64.ln();
    let mut start = None;
    for k in 0..=((max - min) / step).ceil() as i32 {
        for s in [seed + k as f64 * step, seed - k as f64 * step] {
            if s < min || s > max || (k == 0 && s != seed) {
                continue;
            }
            if let Some(r) = residual(s)? {
                start = Some((s, r));
                break;
            }
        }
        if start.is_some() {
            break;
        }
    }
    let (s0, r0) = start.ok_or_else(no_bracket)?;
    if r0.abs() <= constraint.tolerance {
        return Ok(s0.exp());
    }

    // Walk away from s0 until the residual changes sign. Divergence on the
    // far side counts as an infinite residual of the sign the walk is after.
    let dir = if r0 > 0.0 { 1.0 } else { -1.0 };
    let (mut near, mut r_near) = (s0, r0);
    let (far, r_far) = loop {
        let s = near + dir * step;
        if s < min - 1e-9 || s > max + 1e-9 {
            return Err(no_bracket());
        }
        match residual(s)? {
            Some(r) if r.abs() <= constraint.tolerance => return Ok(s.exp()),
            Some(r) if r * dir < 0.0 => break (s, r),
            Some(r) => {
                near = s;
                r_near = r;
            }
            None => break (s, -dir * f64::INFINITY),
        }
    };
    let ((mut lo, mut r_lo), (mut hi, mut r_hi)) = if dir > 0.0 {
        ((near, r_near), (far, r_far))
    } else {
        ((far, r_far), (near, r_near))
    };

    // Illinois-modified regula falsi on log λ, bisecting next to a divergent end.
    let mut side = 0;
    for _ in 0..400 {
        let m = if r_lo.is_finite() && r_hi.is_finite() && r_lo != r_hi {
            let s = hi - r_hi * (hi - lo) / (r_hi - r_lo);
            if s > lo && s < hi {
                s
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 * (1.0 + m.abs()) {
            break;
        }
        let r = match residual(m)? {
            Some(r) => r,
            // divergence inside the bracket belongs to the side that already diverges
            None if r_lo.is_infinite() => f64::INFINITY,
            None if r_hi.is_infinite() => f64::NEG_INFINITY,
            None => return Err(Error::DivergentIntegral(format!("mean diverges at lambda {}", m.exp()))),
        };
        if r.abs() <= constraint.tolerance {
            return Ok(m.exp());
        }
        if r > 0.0 {
            lo = m;
            r_lo = r;
            if side == -1 {
                r_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = m;
            r_hi = r;
            if side == 1 {
                r_lo *= 0.5;
            }
            side = 1;
        }
    }
    if r_lo.is_infinite() || r_hi.is_infinite() {
        // the bracket closed onto the edge of normalizability
        return Err(no_bracket());
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Differential entropy `-∫ p log p`.
pub fn entropy(dist: &GridDistribution) -> Result<f64> {
    match &dist.exact {
        Some(ex) => {
            let f = |y: f64| {
                if !dist.support.contains_interior(y) {
                    return 0.0;
                }
                let l = (ex.log_density)(y);
                if l == f64::NEG_INFINITY || l.is_nan() {
                    0.0
                } else {
                    -l * l.exp()
                }
            };
            let scale = if dist.support.lo.is_finite() && !dist.support.hi.is_finite() {
                (ex.center - dist.support.lo).max(ex.width)
            } else if dist.support.hi.is_finite() && !dist.support.lo.is_finite() {
                (dist.support.hi - ex.center).max(ex.width)
            } else {
                ex.width
            };
            Ok(quadrature::integrate(&f, dist.support.lo, dist.support.hi, ex.center, scale, Tolerance::with_abs(1e-13))?.value)
        }
        None => {
            let v: Vec<f64> = dist
                .density
                .iter()
                .map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 })
                .collect();
            Ok(trapezoid(&dist.grid, &v))
        }
    }
}

/// Pairs `(T(f(y)), -log p(y))` at every grid point.
pub fn surprise_profile(dist: &GridDistribution, spec: &DistributionSpec) -> Result<Vec<(f64, f64)>> {
    if spec.measure != MeasureAdjustment::Unit {
        return Err(Error::domain("surprise is linear in T only for the unit measure"));
    }
    let mut out = Vec::with_capacity(dist.grid.len());
    for (&y, &p) in dist.grid.iter().zip(&dist.density) {
        if !(p > 0.0) {
            return Err(Error::domain(format!("density is zero at y = {y}")));
        }
        let s = match &dist.exact {
            Some(ex) => -(ex.log_density)(y),
            None => -p.ln(),
        };
        out.push((spec.scale_value(y)?, s));
    }
    Ok(out)
}

/// Slope, intercept and max residual of a least-squares line through the profile.
pub fn profile_line(profile: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let xs: Vec<f64> = profile.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = profile.iter().map(|p| p.1).collect();
    let (a, b) = fit_line(&xs, &ys)?;
    let r = xs.iter().zip(&ys).map(|(x, y)| (y - a - b * x).abs()).fold(0.0, f64::max);
    Ok((b, a, r))
}

/// Maximize `-Σ p log p` subject to `Σ p = 1` and `Σ p T = target` by
/// equality-constrained Newton iteration on the primal problem.
pub fn discrete_maxent_oracle(t_values: &[f64], target_mean: f64) -> Result<Vec<f64>> {
    let n = t_values.len();
    if n == 0 || t_values.iter().any(|t| !t.is_finite()) || !target_mean.is_finite() {
        return Err(Error::Malformed("need finite T values and target".into()));
    }
    let t_min = t_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_max = t_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(target_mean > t_min && target_mean < t_max) {
        if t_min == t_max && target_mean == t_min {
            return Ok(vec![1.0 / n as f64; n]);
        }
        return Err(Error::InfeasibleConstraint {
            target: target_mean,
            min: t_min,
            max: t_max,
        });
    }

    // Feasible interior start: mix of uniform and a point mass at an extreme.
    let nf = n as f64;
    let mean_u = t_values.iter().sum::<f64>() / nf;
    let mut p = vec![1.0 / nf; n];
    if target_mean != mean_u {
        let (idx, t_ext) = if target_mean > mean_u {
            let i = t_values.iter().position(|&t| t == t_max).unwrap();
            (i, t_max)
        } else {
            let i = t_values.iter().position(|&t| t == t_min).unwrap();
            (i, t_min)
        };
        let theta = (t_ext - target_mean) / (t_ext - mean_u);
        for v in &mut p {
            *v *= theta;
        }
        p[idx] += 1.0 - theta;
    }

    let objective = |p: &[f64]| -> f64 { p.iter().map(|&x| if x > 0.0 { x * x.ln() } else { 0.0 }).sum() };
    for _ in 0..500 {
        // KKT: Δ = -D(g + Aᵀν), A D Aᵀ ν = -A D g with D = diag(p), g = 1 + log p.
        let g: Vec<f64> = p.iter().map(|&x| 1.0 + x.ln()).collect();
        let (mut s00, mut s01, mut s11, mut r0, mut r1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            let (pi, ti) = (p[i], t_values[i] - target_mean);
            s00 += pi;
            s01 += pi * ti;
            s11 += pi * ti * ti;
            r0 -= pi * g[i];
            r1 -= pi * ti * g[i];
        }
        let det = s00 * s11 - s01 * s01;
        if det == 0.0 {
            break;
        }
        let nu0 = (r0 * s11 - r1 * s01) / det;
        let nu1 = (s00 * r1 - s01 * r0) / det;
        let delta: Vec<f64> = (0..n)
            .map(|i| -p[i] * (g[i] + nu0 + nu1 * (t_values[i] - target_mean)))
            .collect();
        // Newton decrement squared: Δᵀ H Δ with H = diag(1/p).
        let decrement: f64 = (0..n).map(|i| delta[i] * delta[i] / p[i]).sum();
        if decrement < 1e-30 {
            break;
        }
        let mut step = 1.0f64;
        for i in 0..n {
            if delta[i] < 0.0 {
                step = step.min(-0.99 * p[i] / delta[i]);
            }
        }
        let f0 = objective(&p);
        let mut next;
        loop {
            next = (0..n).map(|i| p[i] + step * delta[i]).collect::<Vec<f64>>();
            if objective(&next) <= f0 - 0.25 * step * decrement || step < 1e-16 {
                break;
            }
            step *= 0.5;
        }
        if next.iter().any(|&x| !(x > 0.0)) {
            break;
        }
        p = next;
        if decrement < 1e-28 {
            break;
        }
    }
    let s: f64 = p.iter().sum();
    for v in &mut p {
        *v /= s;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::ScaleExpr;
    use std::f64::consts::{E, PI};

    fn exponential(lambda: f64) -> DistributionSpec {
        DistributionSpec::new(MeasurementScale::linear(), ObservableMap::Identity, lambda, MeasureAdjustment::Unit, Interval::positive())
    }

    fn gaussian(lambda: f64) -> DistributionSpec {
        DistributionSpec::new(
            MeasurementScale::linear(),
            ObservableMap::SquaredDeviation { center: 0.0 },
            lambda,
            MeasureAdjustment::Unit,
            Interval::real_line(),
        )
    }

    fn gamma_k2() -> DistributionSpec {
        let t = ScaleExpr::combination(vec![(-1.0, ScaleExpr::log()), (1.0, ScaleExpr::Linear)]);
        DistributionSpec::new(MeasurementScale::affine(t), ObservableMap::Identity, 1.0, MeasureAdjustment::Unit, Interval::positive())
    }

    #[test]
    fn unit_exponential() {
        let d = normalize(&exponential(1.0)).unwrap();
        assert!((d.psi - 1.0).abs() < 1e-10, "{}", d.psi);
        for (y, p) in d.grid.iter().zip(&d.density) {
            assert!((p - (-y).exp()).abs() <= 1e-10 * (-y).exp());
        }
        assert!((d.trapezoid_mass() - 1.0).abs() <= 10.0 * d.quadrature_error);
        assert!((entropy(&d).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn standard_normal() {
        let d = normalize(&gaussian(0.5)).unwrap();
        assert!((d.psi - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!((entropy(&d).unwrap() - 0.5 * (2.0 * PI * E).ln()).abs() < 1e-9);
        assert!(d.quadrature_error < 1e-6, "{}", d.quadrature_error);
    }

    #[test]
    fn pure_power_law_diverges() {
        let s = DistributionSpec::new(MeasurementScale::affine(ScaleExpr::log()), ObservableMap::Identity, 0.5, MeasureAdjustment::Unit, Interval::positive());
        assert!(matches!(normalize(&s), Err(Error::DivergentIntegral(_))));
    }

    #[test]
    fn degenerate_support_rejected() {
        let mut s = exponential(1.0);
        s.support = Interval::new(1.0, 1.0);
        assert!(matches!(normalize(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn solve_lambda_examples() {
        let c = Constraint::new(2.0, 1e-12).unwrap();
        assert!((solve_lambda(&exponential(1.0), &c).unwrap() - 0.5).abs() < 1e-10);
        let c = Constraint::new(1.0, 1e-12).unwrap();
        assert!((solve_lambda(&gaussian(1.0), &c).unwrap() - 0.5).abs() < 1e-10);
        assert!((solve_lambda(&exponential(3.0), &c).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn non_normalizable_specs_are_divergent() {
        let student = crate::catalog::lookup("generalized_students").unwrap();
        let s = student.instantiate(&student.setting(0)).unwrap();
        // |y|^{-2λ} tails
        assert!(matches!(normalize(&s.with_lambda(0.4)), Err(Error::DivergentIntegral(_))));
        assert!(normalize(&s.with_lambda(0.6)).is_ok());
        // (1-y)^{-λ} y^{-λ/2} on (0, 1)
        let beta = crate::catalog::lookup("beta").unwrap();
        let b = beta.instantiate(&beta.setting(0)).unwrap();
        assert!(matches!(normalize(&b.with_lambda(1.0)), Err(Error::DivergentIntegral(_))));
        assert!(normalize(&b.with_lambda(0.9)).is_ok());
    }

    #[test]
    fn solve_lambda_starts_from_a_divergent_template() {
        let beta = crate::catalog::lookup("beta").unwrap();
        let b = beta.instantiate(&beta.setting(0)).unwrap();
        let target = mean_scale(&b.with_lambda(0.5)).unwrap();
        let c = Constraint::new(target, 1e-12 * target.abs().max(1.0)).unwrap();
        let l = solve_lambda(&b.with_lambda(5.0), &c).unwrap();
        assert!((l - 0.5).abs() < 1e-9, "{l}");
    }

    #[test]
    fn unattainable_mean_has_no_bracket() {
        // E[y²] for a Gaussian can not be negative
        let c = Constraint::new(-1.0, 1e-9).unwrap();
        assert!(matches!(solve_lambda(&gaussian(1.0), &c), Err(Error::NoBracket { .. })));
    }

    #[test]
    fn gamma_entropy_matches_midpoint_oracle() {
        // Oracle: 10x finer brute-force midpoint sum of -p log p for p = y e^{-y}
        // over [0, 60]; computed independently of the adaptive machinery.
        let n = 2_000_000;
        let h = 60.0 / n as f64;
        let mut oracle = 0.0;
        for i in 0..n {
            let y = (i as f64 + 0.5) * h;
            let p = y * (-y).exp();
            if p > 0.0 {
                oracle -= p * p.ln() * h;
            }
        }
        let d = normalize(&gamma_k2()).unwrap();
        let got = entropy(&d).unwrap();
        assert!((got - oracle).abs() < 1e-6, "{got} vs {oracle}");
        // closed form 1 + Euler-Mascheroni for gamma(2, 1)
        assert!((got - 1.577_215_664_901_532_9).abs() < 1e-9);
    }

    #[test]
    fn surprise_is_linear() {
        for spec in [exponential(1.0), gaussian(0.5), gamma_k2()] {
            let d = normalize(&spec).unwrap();
            let prof = surprise_profile(&d, &spec).unwrap();
            let (slope, _, resid) = profile_line(&prof).unwrap();
            assert!((slope - spec.lambda).abs() < 1e-9, "{slope}");
            assert!(resid < 1e-8, "{resid}");
        }
        let d = normalize(&exponential(1.0)).unwrap();
        let (_, intercept, _) = profile_line(&surprise_profile(&d, &exponential(1.0)).unwrap()).unwrap();
        assert!(intercept.abs() < 1e-9);
    }

    #[test]
    fn oracle_examples() {
        let p = discrete_maxent_oracle(&[0.0, 1.0], 0.5).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let p = discrete_maxent_oracle(&[0.0, 1.0, 2.0], 1.0).unwrap();
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-12));
        assert!(matches!(discrete_maxent_oracle(&[0.0, 1.0], 2.0), Err(Error::InfeasibleConstraint { .. })));
    }

    #[test]
    fn oracle_matches_bisected_dual() {
        // Oracle for the oracle: bisect the scalar mean equation for λ.
        let t = [0.0, 1.0, 2.0];
        let target = 0.5;
        let mean = |l: f64| {
            let w: Vec<f64> = t.iter().map(|x| (-l * x).exp()).collect();
            let z: f64 = w.iter().sum();
            t.iter().zip(&w).map(|(x, w)| x * w).sum::<f64>() / z
        };
        let (mut a, mut b) = (-50.0, 50.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if mean(m) > target {
                a = m;
            } else {
                b = m;
            }
        }
        let l = 0.5 * (a + b);
        let w: Vec<f64> = t.iter().map(|x| (-l * x).exp()).collect();
        let z: f64 = w.iter().sum();
        let p = discrete_maxent_oracle(&t, target).unwrap();
        for i in 0..3 {
            assert!((p[i] - w[i] / z).abs() < 1e-8);
        }
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let d = normalize_with(&exponential(1.0), GridOptions { points: 64, truncation: 1e-16 }).unwrap();
        let csv = d.to_csv_string();
        assert!(csv.starts_with("y,density\n"));
        let back = GridDistribution::read_csv(csv.as_bytes()).unwrap();
        assert_eq!(back.grid, d.grid);
        assert_eq!(back.density, d.density);
        let j = serde_json::to_value(&d).unwrap();
        assert_eq!(j.as_object().unwrap().len(), 4);
        let back: GridDistribution = serde_json::from_value(j).unwrap();
        assert_eq!(back.grid, d.grid);
    }

    #[test]
    fn support_json_uses_null_for_infinity() {
        let j = serde_json::to_string(&Interval::positive()).unwrap();
        assert_eq!(j, r#"{"lo":0.0,"hi":null}"#);
        let back: Interval = serde_json::from_str(&j).unwrap();
        assert_eq!(back, Interval::positive());
    }
}
