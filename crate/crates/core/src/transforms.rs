//! Scale changes and integral transforms of densities: change of variable,
//! extreme-value construction, Laplace transform, superstatistics mixing and
//! Fourier inversion of symmetric stable characteristic functions.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxent::{self, trapezoid, DistributionSpec, GridDistribution, Interval, MeasureAdjustment};
use crate::quadrature::{self, Tolerance};
use crate::scale::{eval_scale_derivative, MeasurementScale, ObservableMap, ScaleExpr};

/// Largest drift between source and target mass tolerated by [`change_of_variable`].
pub const MAX_RENORMALIZATION_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeDirection {
    /// The source density lives on the dissipation scale `x = g(y)`.
    DissipationToObservation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableChange {
    pub g: ScaleExpr,
    pub direction: ChangeDirection,
}

impl VariableChange {
    pub fn new(g: ScaleExpr) -> Self {
        Self {
            g,
            direction: ChangeDirection::DissipationToObservation,
        }
    }
}

/// Monotone inverse of `g`, analytic when the expression is a single chain and
/// by bisection on a sampled bracket otherwise.
struct Inverse<'a> {
    g: &'a ScaleExpr,
    /// `(y, g(y))` samples ordered by `y`, present only without an analytic inverse.
    samples: Option<Vec<(f64, f64)>>,
    increasing: bool,
}

impl<'a> Inverse<'a> {
    fn new(g: &'a ScaleExpr, probe: f64) -> Result<Self> {
        if g.inverse(probe).is_some() {
            let increasing = Self::analytic_direction(g, probe)?;
            return Ok(Self {
                g,
                samples: None,
                increasing,
            });
        }
        // y = sinh(z) covers every magnitude from 1e-17 to 1e17 on both sides
        let mut samples = Vec::new();
        let mut signs = (false, false);
        for i in -4000..=4000 {
            let y = (i as f64 * 0.01).sinh();
            if let Ok((x, d)) = g.eval_with_derivative(y) {
                if x.is_finite() && d.is_finite() {
                    samples.push((y, x));
                    if d > 0.0 {
                        signs.0 = true;
                    } else if d < 0.0 {
                        signs.1 = true;
                    }
                }
            }
        }
        if signs.0 && signs.1 {
            return Err(Error::NonMonotoneMap(format!("derivative of {g} changes sign")));
        }
        if !(signs.0 || signs.1) || samples.len() < 2 {
            return Err(Error::NonMonotoneMap(format!("{g} is constant or undefined")));
        }
        Ok(Self {
            g,
            samples: Some(samples),
            increasing: signs.0,
        })
    }

    fn analytic_direction(g: &ScaleExpr, probe: f64) -> Result<bool> {
        let y = g.inverse(probe).unwrap_or(f64::NAN);
        let (_, d) = g.eval_with_derivative(y)?;
        if d > 0.0 {
            Ok(true)
        } else if d < 0.0 {
            Ok(false)
        } else {
            Err(Error::NonMonotoneMap(format!("{g} has zero derivative at y = {y}")))
        }
    }

    fn at(&self, x: f64) -> Result<f64> {
        let samples = match &self.samples {
            None => {
                return self
                    .g
                    .inverse(x)
                    .filter(|y| !y.is_nan())
                    .ok_or_else(|| Error::domain(format!("{x} is outside the range of {}", self.g)))
            }
            Some(s) => s,
        };
        let key = |x: f64| if self.increasing { x } else { -x };
        let i = samples.partition_point(|&(_, gx)| key(gx) < key(x));
        if i == 0 || i == samples.len() {
            if let Some(&(y, _)) = samples.iter().find(|&&(_, gx)| gx == x) {
                return Ok(y);
            }
            return Err(Error::domain(format!("{x} is outside the sampled range of {}", self.g)));
        }
        let (mut a, mut b) = (samples[i - 1].0, samples[i].0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let gm = self.g.eval(m)?;
            if key(gm) < key(x) {
                a = m;
            } else {
                b = m;
            }
        }
        Ok(0.5 * (a + b))
    }

    /// Image of a source support end, approached from inside when the end
    /// itself is outside the domain of the inverse.
    fn end(&self, x: f64, toward: f64) -> f64 {
        if let Ok(y) = self.at(x) {
            return y;
        }
        if x.is_finite() {
            let nudged = if toward > x { x + f64::MIN_POSITIVE.max(x.abs() * f64::EPSILON) } else { x - f64::MIN_POSITIVE.max(x.abs() * f64::EPSILON) };
            if let Ok(y) = self.at(nudged) {
                return y;
            }
        }
        match &self.samples {
            Some(s) => {
                let first_is_low = (x < toward) == self.increasing;
                if first_is_low {
                    s[0].0
                } else {
                    s[s.len() - 1].0
                }
            }
            None => f64::NAN,
        }
    }
}

/// Carry a density on `x = g(y)` over to `y`: `p_y = |g'(y)| p_x(g(y))`.
///
/// The result is renormalized on its own grid; when the source knows its exact
/// density, the target does too and the mass is computed by quadrature.
pub fn change_of_variable(source: &GridDistribution, change: &VariableChange) -> Result<GridDistribution> {
    let g = &change.g;
    let (center_x, width_x) = source.bulk_hint();
    let inv = Inverse::new(g, center_x)?;

    let mut pairs = Vec::with_capacity(source.len());
    for (&x, &p) in source.grid.iter().zip(&source.density) {
        let y = inv.at(x)?;
        let (_, d) = g.eval_with_derivative(y)?;
        if d == 0.0 || !d.is_finite() {
            return Err(Error::NonMonotoneMap(format!("|g'| is {} at y = {y}", d.abs())));
        }
        pairs.push((y, d.abs() * p));
    }
    if !inv.increasing {
        pairs.reverse();
    }
    if pairs.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::NonMonotoneMap(format!("{g} does not map the source grid monotonically")));
    }
    let (grid, raw): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();

    let (ylo, yhi) = {
        let a = inv.end(source.support.lo, source.support.hi);
        let b = inv.end(source.support.hi, source.support.lo);
        if inv.increasing {
            (a, b)
        } else {
            (b, a)
        }
    };
    let y_support = if ylo.is_nan() || yhi.is_nan() || !(yhi > ylo) {
        Interval::new(grid[0], grid[grid.len() - 1])
    } else {
        Interval::new(ylo, yhi)
    };

    let center_y = inv.at(center_x)?;
    let (_, d_center) = g.eval_with_derivative(center_y)?;
    let width_y = (width_x / d_center.abs()).max(f64::MIN_POSITIVE);

    match source.exact_log_density() {
        Some(log_px) => {
            let g_exact = g.clone();
            let support = y_support;
            let log_py = move |y: f64| -> f64 {
                if !support.contains_interior(y) {
                    return f64::NEG_INFINITY;
                }
                match g_exact.eval_with_log_derivative(y) {
                    Ok((x, log_d, _)) => {
                        let lp = log_px(x);
                        if lp == f64::NEG_INFINITY {
                            lp
                        } else {
                            log_d + lp
                        }
                    }
                    Err(_) => f64::NAN,
                }
            };
            let f = |y: f64| {
                let l = log_py(y);
                if l == f64::NEG_INFINITY {
                    0.0
                } else {
                    l.exp()
                }
            };
            let split = if y_support.lo.is_finite() && !y_support.hi.is_finite() {
                (center_y - y_support.lo).max(width_y)
            } else if y_support.hi.is_finite() && !y_support.lo.is_finite() {
                (y_support.hi - center_y).max(width_y)
            } else {
                width_y
            };
            let mass = quadrature::integrate(&f, y_support.lo, y_support.hi, center_y, split, Tolerance::with_abs(1e-15))?;
            let drift = (mass.value - 1.0).abs();
            if drift > MAX_RENORMALIZATION_DRIFT {
                return Err(Error::RenormalizationDrift(drift));
            }
            let m = mass.value;
            let density: Vec<f64> = raw.iter().map(|p| p / m).collect();
            let log_m = m.ln();
            let closure: maxent::LogDensityFn = Arc::new(move |y| log_py(y) - log_m);
            let trap = trapezoid(&grid, &density);
            let qe = source.quadrature_error + drift + mass.abs_error + (trap - 1.0).abs();
            Ok(GridDistribution::from_table(grid, density, source.psi / m, qe)?.with_log_density(closure, y_support, center_y, width_y))
        }
        None => {
            let before = source.trapezoid_mass();
            let after = trapezoid(&grid, &raw);
            if !(after > 0.0) {
                return Err(Error::domain("mapped density has no mass"));
            }
            let drift = (after - before).abs();
            if drift > MAX_RENORMALIZATION_DRIFT {
                return Err(Error::RenormalizationDrift(drift));
            }
            let density: Vec<f64> = raw.iter().map(|p| p / after).collect();
            GridDistribution::from_table(grid, density, source.psi / after, source.quadrature_error + drift)
        }
    }
}

/// Upper-tail scale `T(y)`, the cumulative probability beyond threshold `y`
/// up to an affine map, together with the support it is defined on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailScale {
    pub tail_t: ScaleExpr,
    pub support: Interval,
}

impl TailScale {
    /// `e^{-y}` on the real line: exponential-type tails.
    pub fn exponential() -> Self {
        Self {
            tail_t: ScaleExpr::exp(-1.0, ScaleExpr::Linear),
            support: Interval::real_line(),
        }
    }

    /// `y^{-γ}` on `y > 0`: power-law tails.
    pub fn power(gamma: f64) -> Self {
        Self {
            tail_t: ScaleExpr::power(-gamma),
            support: Interval::positive(),
        }
    }
}

/// Points spread over an interval at every magnitude, for shape checks.
fn probe_points(support: Interval) -> Vec<f64> {
    (-48..=48)
        .map(|i| {
            let z = i as f64 * 0.5;
            match (support.lo.is_finite(), support.hi.is_finite()) {
                (false, false) => z.sinh(),
                (true, false) => support.lo + z.exp(),
                (false, true) => support.hi - z.exp(),
                (true, true) => support.lo + (support.hi - support.lo) / (1.0 + (-z).exp()),
            }
        })
        .filter(|y| support.contains_interior(*y))
        .collect()
}

/// `p_y ∝ |T'| e^{-λ T}` with `T` the tail scale: the limiting law of maxima.
pub fn extreme_value_density(tail: &TailScale, lambda: f64) -> Result<DistributionSpec> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    let scale = MeasurementScale::affine(tail.tail_t.clone());
    for y in probe_points(tail.support) {
        let d = eval_scale_derivative(&scale, &ObservableMap::Identity, y)?;
        if d > 0.0 {
            return Err(Error::domain(format!("tail scale increases at y = {y}")));
        }
    }
    let spec = DistributionSpec::new(scale, ObservableMap::Identity, lambda, MeasureAdjustment::ScaleDerivative, tail.support);
    maxent::log_normalization_constant(&spec)?;
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKernel {
    /// `e^{-x f}`.
    Laplace,
    /// `e^{-i x y}`.
    Fourier,
}

/// `∫ e^{-x s} p_x dx` at one dual point.
pub fn laplace_at(source: &GridDistribution, s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("Laplace dual point must be finite and >= 0, got {s}")));
    }
    if source.support.lo < 0.0 {
        return Err(Error::domain("Laplace transform needs a source supported on x >= 0"));
    }
    // relative accuracy: the transform of a smooth density decays like a power of s
    source.expectation_with(|x| (-x * s).exp(), Tolerance::default())
}

/// `h*(s) = ∫ e^{-x s} p_x dx` at each dual point. Sources with an exact
/// density use adaptive quadrature; tabulated sources the grid trapezoid.
pub fn laplace_transform(source: &GridDistribution, dual_points: &[f64]) -> Result<Vec<f64>> {
    dual_points.iter().map(|&s| laplace_at(source, s)).collect()
}

/// `∫_0^∞ h*(s) ds` for the Laplace transform of `source`, by nested quadrature.
pub fn laplace_mass(source: &GridDistribution) -> Result<f64> {
    let (center, width) = source.bulk_hint();
    let scale = 1.0 / center.abs().max(width).max(f64::MIN_POSITIVE);
    let err = std::cell::RefCell::new(None);
    let f = |s: f64| match laplace_at(source, s) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let r = quadrature::integrate(&f, 0.0, f64::INFINITY, 0.0, scale, Tolerance::with_abs(1e-14));
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}

/// A unit mass at `a`, tabulated as a triangle of half-width `w`. Trapezoid
/// sums against it reproduce point evaluation at `a` exactly.
pub fn point_mass(a: f64, w: f64) -> Result<GridDistribution> {
    atoms(&[(a, 1.0)], w)
}

/// Weighted point masses as adjacent triangles of half-width `w`.
pub fn atoms(points: &[(f64, f64)], w: f64) -> Result<GridDistribution> {
    if points.is_empty() || !(w > 0.0) {
        return Err(Error::domain("atoms need at least one point and a positive width"));
    }
    let total: f64 = points.iter().map(|p| p.1).sum();
    if points.iter().any(|p| !(p.1 > 0.0) || !p.0.is_finite()) || !(total > 0.0) {
        return Err(Error::domain("atom weights must be positive and locations finite"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if sorted.windows(2).any(|p| p[1].0 - p[0].0 <= 2.0 * w) {
        return Err(Error::domain("atoms overlap at this width"));
    }
    let mut grid = Vec::with_capacity(3 * sorted.len());
    let mut density = Vec::with_capacity(3 * sorted.len());
    for (x, weight) in sorted {
        let (lo, hi) = (x - w, x + w);
        grid.extend([lo, x, hi]);
        // peak from the rounded spacing so the trapezoid area is exactly the weight
        density.extend([0.0, 2.0 * weight / total / (hi - lo), 0.0]);
    }
    GridDistribution::from_table(grid, density, 1.0, 0.0)
}

/// Mixture `q(y) = ∫ x e^{-x y} h(x) dx` of normalized exponentials over a
/// rate density `h` on `x > 0`, tabulated on `points` values of `y ≥ 0`.
pub fn superstatistics_mix(kernel: TransformKernel, parameter: &GridDistribution, points: usize) -> Result<GridDistribution> {
    if kernel != TransformKernel::Laplace {
        return Err(Error::domain("superstatistics mixing is implemented for the Laplace kernel only"));
    }
    if parameter.support.lo < 0.0 || parameter.grid[0] < 0.0 {
        return Err(Error::domain("rate density must live on x >= 0"));
    }
    let points = points.max(16);
    let q = |y: f64| parameter.expectation(|x| x * (-x * y).exp());
    let q0 = q(0.0)?;
    if !(q0 > 0.0) || !q0.is_finite() {
        return Err(Error::domain(format!("mixture density at 0 is {q0}; the rate needs a finite mean")));
    }
    // y range: the mixture is decreasing, so cut where it falls below 1e-16 of q(0)
    let c = 1.0 / q0;
    let mut y_hi = c;
    while q(y_hi)? > 1e-16 * q0 && y_hi < 1e12 * c {
        y_hi *= 2.0;
    }
    let z_hi = (1.0 + y_hi / c).ln();
    let mut grid = Vec::with_capacity(points);
    let mut density = Vec::with_capacity(points);
    for i in 0..points {
        let y = c * ((z_hi * i as f64 / (points - 1) as f64).exp() - 1.0);
        if grid.last().is_some_and(|&p: &f64| y <= p) {
            continue;
        }
        grid.push(y);
        density.push(q(y)?);
    }
    // ∫_Y^∞ x e^{-x y} dy = e^{-x Y}, so the cut mass is a Laplace value
    let tail = laplace_at(parameter, grid[grid.len() - 1])?;
    let trap = trapezoid(&grid, &density);
    let qe = parameter.quadrature_error + tail + (trap + tail - 1.0).abs();

    let param = parameter.clone();
    let closure: maxent::LogDensityFn = Arc::new(move |y: f64| {
        if !(y >= 0.0) || !y.is_finite() {
            return f64::NEG_INFINITY;
        }
        match param.expectation(|x| x * (-x * y).exp()) {
            Ok(v) if v > 0.0 => v.ln(),
            Ok(_) => f64::NEG_INFINITY,
            Err(_) => f64::NAN,
        }
    });
    Ok(GridDistribution::from_table(grid, density, 1.0, qe)?.with_log_density(closure, Interval::positive(), c, c))
}

/// Layout of the symmetric grid used for stable-law inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyGrid {
    /// FFT length, a power of two.
    pub points: usize,
    /// The y grid spans `[-half_width, half_width]`.
    pub half_width: f64,
}

impl Default for LevyGrid {
    fn default() -> Self {
        Self {
            points: 1 << 16,
            half_width: 2048.0,
        }
    }
}

impl LevyGrid {
    fn validate(&self) -> Result<()> {
        if self.points < 8 || !self.points.is_power_of_two() {
            return Err(Error::domain(format!("grid length {} is not a power of two >= 8", self.points)));
        }
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(Error::domain("half width must be positive"));
        }
        Ok(())
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Spacing of the reciprocal grid, `2π / (N dy)`.
    pub fn dx(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Largest dual magnitude represented.
    pub fn dual_max(&self) -> f64 {
        self.dx() * (self.points / 2) as f64
    }
}

/// Negative values above this fraction of the peak are clipped; anything
/// deeper is an error.
pub const RINGING_TOLERANCE: f64 = 1e-9;
/// The characteristic function must fall below this at the dual boundary.
pub const BOUNDARY_DECAY: f64 = 1e-16;

/// Symmetric stable density with characteristic function `e^{-φ|x|^γ}`,
/// by discrete Fourier inversion on a `points + 1` node grid from
/// `-half_width` to `half_width`.
pub fn levy_stable_density(gamma: f64, phi: f64, layout: LevyGrid) -> Result<GridDistribution> {
    if !(gamma > 0.0 && gamma <= 2.0) {
        return Err(Error::ParameterOutOfDomain {
            name: "gamma".into(),
            value: gamma,
            rule: "0 < gamma <= 2".into(),
        });
    }
    if !(phi > 0.0) || !phi.is_finite() {
        return Err(Error::ParameterOutOfDomain {
            name: "phi".into(),
            value: phi,
            rule: "phi > 0".into(),
        });
    }
    layout.validate()?;
    let n = layout.points;
    let (dx, dy) = (layout.dx(), layout.dy());
    let residual = (-phi * layout.dual_max().powf(gamma)).exp();
    if residual >= BOUNDARY_DECAY {
        return Err(Error::GridTooNarrow { residual });
    }

    // p(y_j) = dx/2π Σ_k c(x_k) e^{-i x_k y_j} with x_k = (k - N/2) dx and
    // y_j = (j - N/2) dy; the centering shifts become (-1)^{j+k} factors.
    let half = (n / 2) as isize;
    let sign = |i: usize| if i % 2 == 0 { 1.0 } else { -1.0 };
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            let x = (k as isize - half) as f64 * dx;
            Complex::new(sign(k) * (-phi * x.abs().powf(gamma)).exp(), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = dx / (2.0 * std::f64::consts::PI);
    let mut values: Vec<f64> = (0..n).map(|j| sign(j) * buf[j].re * scale).collect();
    // node N/2 + N/2 = N closes the symmetric grid; by periodicity it equals node 0
    values.push(values[0]);
    // exact evenness: average mirror pairs
    let m = values.len();
    for j in 0..m / 2 {
        let avg = 0.5 * (values[j] + values[m - 1 - j]);
        values[j] = avg;
        values[m - 1 - j] = avg;
    }

    let peak = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let deepest = values.iter().cloned().fold(0.0, f64::min);
    if -deepest > RINGING_TOLERANCE * peak {
        return Err(Error::RingingExceedsTolerance { relative: -deepest / peak });
    }
    let mut clipped = 0.0;
    for v in &mut values {
        if *v < 0.0 {
            clipped += -*v * dy;
            *v = 0.0;
        }
    }
    let grid: Vec<f64> = (0..=n).map(|j| (j as f64 - half as f64) * dy).collect();
    let mass = trapezoid(&grid, &values);
    let density: Vec<f64> = values.iter().map(|v| v / mass).collect();
    let qe = (mass - 1.0).abs() + clipped + residual;
    GridDistribution::from_table(grid, density, 1.0 / mass, qe)
}

/// Characteristic function `∫ e^{i x y} p(y) dy` of a density on a uniform
/// symmetric `N + 1` node grid, evaluated on the reciprocal grid by FFT.
/// Returns `(x, re, im)`.
pub fn fourier_on_reciprocal_grid(dist: &GridDistribution) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let m = dist.len();
    let n = m - 1;
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::domain("reciprocal-grid transform needs 2^k + 1 nodes"));
    }
    let lo = dist.grid[0];
    let hi = dist.grid[n];
    let dy = (hi - lo) / n as f64;
    let uniform = dist.grid.iter().enumerate().all(|(j, &y)| (y - (lo + j as f64 * dy)).abs() <= 1e-9 * dy.max(y.abs() * 1e-6));
    if !uniform || (lo + hi).abs() > 1e-9 * dy {
        return Err(Error::domain("reciprocal-grid transform needs a uniform grid symmetric about 0"));
    }
    let half = (n / 2) as isize;
    let sign = |i: usize| if i % 2 == 0 { 1.0 } else { -1.0 };
    // the two end nodes share one periodic slot with half weight each
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|j| {
            let p = if j == 0 { 0.5 * (dist.density[0] + dist.density[n]) } else { dist.density[j] };
            Complex::new(sign(j) * p, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let dx = 2.0 * std::f64::consts::PI / (n as f64 * dy);
    let xs = (0..n).map(|k| (k as isize - half) as f64 * dx).collect();
    let re = (0..n).map(|k| sign(k) * buf[k].re * dy).collect();
    let im = (0..n).map(|k| sign(k) * buf[k].im * dy).collect();
    Ok((xs, re, im))
}

/// Characteristic function at arbitrary dual points by trapezoid sums on the grid.
pub fn characteristic_function(dist: &GridDistribution, xs: &[f64]) -> Vec<(f64, f64)> {
    xs.iter()
        .map(|&x| {
            let re: Vec<f64> = dist.grid.iter().zip(&dist.density).map(|(y, p)| (x * y).cos() * p).collect();
            let im: Vec<f64> = dist.grid.iter().zip(&dist.density).map(|(y, p)| (x * y).sin() * p).collect();
            (trapezoid(&dist.grid, &re), trapezoid(&dist.grid, &im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{distribution, to_params};
    use crate::maxent::normalize;
    use crate::scale::MeasurementScale;

    fn std_normal() -> GridDistribution {
        let spec = DistributionSpec::new(
            MeasurementScale::linear(),
            ObservableMap::SquaredDeviation { center: 0.0 },
            0.5,
            MeasureAdjustment::Unit,
            Interval::real_line(),
        );
        normalize(&spec).unwrap()
    }

    #[test]
    fn normal_through_log_is_log_normal() {
        let ln = change_of_variable(&std_normal(), &VariableChange::new(ScaleExpr::log())).unwrap();
        assert_eq!(ln.support, Interval::positive());
        for y in [0.05, 0.3, 1.0, 2.5, 10.0] {
            let want = (-(y as f64).ln().powi(2) / 2.0).exp() / (y * (2.0 * std::f64::consts::PI).sqrt());
            assert!((ln.density_at(y) / want - 1.0).abs() < 1e-10, "y={y}");
        }
        // grid values also carry the Jacobian
        let i = ln.len() / 2;
        let y = ln.grid[i];
        let want = (-y.ln().powi(2) / 2.0).exp() / (y * (2.0 * std::f64::consts::PI).sqrt());
        assert!((ln.density[i] / want - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gamma_through_exp_is_exponential_gamma() {
        let (k, alpha) = (2.5, 1.5);
        let g = distribution("gamma", &to_params(&[("k", k), ("alpha", alpha)])).unwrap();
        let eg = change_of_variable(&g, &VariableChange::new(ScaleExpr::exp(1.0, ScaleExpr::Linear))).unwrap();
        assert_eq!(eg.support, Interval::real_line());
        // e^{ky - α e^y} α^k / Γ(k), Γ(2.5) = 3√π/4
        let gamma_k = 0.75 * std::f64::consts::PI.sqrt();
        for y in [-3.0, -1.0, 0.0, 0.7, 1.5] {
            let want = (k * y - alpha * (y as f64).exp()).exp() * alpha.powf(k) / gamma_k;
            assert!((eg.density_at(y) / want - 1.0).abs() < 1e-9, "y={y}");
        }
    }

    #[test]
    fn identity_change_keeps_density() {
        let n = std_normal();
        let same = change_of_variable(&n, &VariableChange::new(ScaleExpr::Linear)).unwrap();
        assert_eq!(same.grid, n.grid);
        for (a, b) in same.density.iter().zip(&n.density) {
            assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        }
    }

    #[test]
    fn decreasing_map_and_numeric_inverse() {
        // x = e^{-y}, written as a combination so there is no analytic inverse
        let g = ScaleExpr::combination(vec![(1.0, ScaleExpr::exp(-1.0, ScaleExpr::Linear)), (0.0, ScaleExpr::Linear)]);
        let expo = distribution("exponential", &to_params(&[("lambda", 1.0)])).unwrap();
        let out = change_of_variable(&expo, &VariableChange::new(g)).unwrap();
        // p_y = e^{-y} e^{-e^{-y}}
        for y in [-2.0, 0.0, 1.0, 5.0] {
            let want = (-y - (-y as f64).exp()).exp();
            assert!((out.density_at(y) / want - 1.0).abs() < 1e-8, "y={y}");
        }
        assert!(out.grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn non_monotone_map_is_rejected() {
        let g = ScaleExpr::combination(vec![(1.0, ScaleExpr::Linear), (1.0, ScaleExpr::exp(-2.0, ScaleExpr::Linear))]);
        let err = change_of_variable(&std_normal(), &VariableChange::new(g)).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneMap(_)), "{err:?}");
    }

    #[test]
    fn gumbel_mode_is_log_lambda() {
        let spec = extreme_value_density(&TailScale::exponential(), 2.0).unwrap();
        // the log density y - λ e^{-y} peaks where e^{-y} = 1/λ
        let l = |y: f64| spec.log_unnormalized(y).unwrap();
        let m = 2f64.ln();
        assert!(l(m) > l(m - 1e-4) && l(m) > l(m + 1e-4));
    }

    #[test]
    fn frechet_from_power_tail() {
        let spec = extreme_value_density(&TailScale::power(2.0), 1.0).unwrap();
        let d = normalize(&spec).unwrap();
        // 2 y^{-3} e^{-y^{-2}} is already normalized
        for y in [0.5, 1.0, 3.0] {
            let want = 2.0 * (y as f64).powi(-3) * (-(y as f64).powi(-2)).exp();
            assert!((d.density_at(y) / want - 1.0).abs() < 1e-10);
        }
        let rising = TailScale {
            tail_t: ScaleExpr::Linear,
            support: Interval::positive(),
        };
        assert!(extreme_value_density(&rising, 1.0).is_err());
    }

    #[test]
    fn laplace_of_gamma_and_exponential() {
        let g = distribution("gamma", &to_params(&[("k", 2.0), ("alpha", 1.0)])).unwrap();
        let h = laplace_transform(&g, &[0.0, 1.0, 3.0]).unwrap();
        // (1+s)^{-2}
        for (v, want) in h.iter().zip([1.0, 0.25, 0.0625]) {
            assert!((v - want).abs() < 1e-9, "{v} vs {want}");
        }
        let e = distribution("exponential", &to_params(&[("lambda", 2.5)])).unwrap();
        for s in [0.0, 0.5, 4.0, 100.0] {
            let v = laplace_at(&e, s).unwrap();
            assert!((v - 2.5 / (2.5 + s)).abs() < 1e-9);
        }
        // E[1/x] for gamma(2, 1) is 1
        assert!((laplace_mass(&g).unwrap() - 1.0).abs() < 1e-9);
        assert!(laplace_at(&std_normal(), 1.0).is_err());
    }

    #[test]
    fn point_masses() {
        let p = point_mass(1.7, 1e-3).unwrap();
        for s in [0.0, 0.4, 2.0] {
            assert!((laplace_at(&p, s).unwrap() - (-1.7 * s as f64).exp()).abs() < 1e-15);
        }
        assert!(atoms(&[(1.0, 1.0), (1.0005, 1.0)], 1e-3).is_err());
    }

    #[test]
    fn mixtures_of_exponentials() {
        let m = superstatistics_mix(TransformKernel::Laplace, &point_mass(2.0, 1e-3).unwrap(), 512).unwrap();
        for y in [0.0, 0.5, 3.0] {
            assert!((m.density_at(y) - 2.0 * (-2.0 * y as f64).exp()).abs() < 1e-12);
        }
        let two = superstatistics_mix(TransformKernel::Laplace, &atoms(&[(1.0, 0.5), (2.0, 0.5)], 1e-3).unwrap(), 512).unwrap();
        for y in [0.0, 0.5, 3.0] {
            let want = 0.5 * ((-y as f64).exp() + 2.0 * (-2.0 * y as f64).exp());
            assert!((two.density_at(y) - want).abs() < 1e-12);
        }
        let g = distribution("gamma", &to_params(&[("k", 2.0), ("alpha", 1.0)])).unwrap();
        let lomax = superstatistics_mix(TransformKernel::Laplace, &g, 2048).unwrap();
        for y in [0.1, 1.0, 10.0, 100.0] {
            let want = 2.0 / (1.0 + y as f64).powi(3);
            assert!((lomax.density_at(y) / want - 1.0).abs() < 1e-9, "y={y}");
        }
        assert!(superstatistics_mix(TransformKernel::Fourier, &g, 64).is_err());
    }

    #[test]
    fn levy_pairs() {
        let layout = LevyGrid::default();
        let cauchy = levy_stable_density(1.0, 1.0, layout).unwrap();
        let gauss = levy_stable_density(2.0, 1.0, layout).unwrap();
        let mut worst: f64 = 0.0;
        let mut worst_g: f64 = 0.0;
        for (i, &y) in cauchy.grid.iter().enumerate() {
            if y.abs() <= 10.0 {
                worst = worst.max((cauchy.density[i] - 1.0 / (std::f64::consts::PI * (1.0 + y * y))).abs());
                let g = (-y * y / 4.0).exp() / (4.0 * std::f64::consts::PI).sqrt();
                worst_g = worst_g.max((gauss.density[i] - g).abs());
            }
        }
        assert!(worst < 1e-6, "cauchy {worst:e}");
        assert!(worst_g < 1e-6, "gauss {worst_g:e}");
        let n = cauchy.len();
        for j in 0..n {
            assert!((cauchy.density[j] - cauchy.density[n - 1 - j]).abs() < 1e-12);
        }
    }

    #[test]
    fn levy_rejects_narrow_grids_and_bad_gamma() {
        assert!(matches!(levy_stable_density(0.3, 1.0, LevyGrid::default()), Err(Error::GridTooNarrow { .. })));
        assert!(levy_stable_density(2.5, 1.0, LevyGrid::default()).is_err());
        let odd = LevyGrid {
            points: 1000,
            half_width: 10.0,
        };
        assert!(levy_stable_density(1.0, 1.0, odd).is_err());
    }

    #[test]
    fn forward_transform_recovers_characteristic_function() {
        let d = levy_stable_density(1.5, 1.0, LevyGrid::default()).unwrap();
        let (xs, re, im) = fourier_on_reciprocal_grid(&d).unwrap();
        let quarter = xs[xs.len() - 1] / 2.0;
        for ((x, r), i) in xs.iter().zip(&re).zip(&im) {
            if x.abs() <= quarter {
                assert!((r - (-x.abs().powf(1.5)).exp()).abs() < 1e-6, "x={x}");
                assert!(i.abs() < 1e-9);
            }
        }
        let direct = characteristic_function(&d, &[0.0, 1.0]);
        assert!((direct[0].0 - 1.0).abs() < 1e-9);
        assert!((direct[1].0 - (-1f64).exp()).abs() < 1e-6);
    }
}
