//! Fixed-step numerical machinery: time quadrature with step-halving
//! diagnostics, classical RK4 for scalar ODEs, and midpoint quadrature
//! around circular loops.
//!
//! Everything here is deterministic: the same inputs produce bit-identical
//! outputs, and no step size is ever chosen adaptively.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::types::{TimeGrid, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureMethod {
    Trapezoid,
    #[default]
    Simpson,
}

impl QuadratureMethod {
    /// Theoretical convergence order on smooth integrands.
    pub fn order(self) -> u32 {
        match self {
            QuadratureMethod::Trapezoid => 2,
            QuadratureMethod::Simpson => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadratureMethod::Trapezoid => "trapezoid",
            QuadratureMethod::Simpson => "simpson",
        }
    }
}

/// How to integrate over time, and how accurately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    method: QuadratureMethod,
    grid: TimeGrid,
    tolerance: f64,
}

impl QuadratureSpec {
    pub fn new(method: QuadratureMethod, grid: TimeGrid, tolerance: f64) -> Result<Self> {
        if method == QuadratureMethod::Simpson && !grid.n_steps().is_multiple_of(2) {
            return Err(Error::Config(format!(
                "simpson quadrature needs an even step count (got {})",
                grid.n_steps()
            )));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "quadrature tolerance must be positive (got {tolerance})"
            )));
        }
        Ok(Self {
            method,
            grid,
            tolerance,
        })
    }

    pub fn method(&self) -> QuadratureMethod {
        self.method
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// Step-halving diagnostics for one quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    /// Rule applied on the requested grid.
    pub coarse: f64,
    /// Rule applied with half the step.
    pub fine: f64,
    /// Richardson combination of `coarse` and `fine`.
    pub extrapolated: f64,
    /// `log2` of successive difference ratios over three levels; `None`
    /// when the differences are at rounding level (the rule is exact).
    pub estimated_order: Option<f64>,
    /// Estimated absolute error of `fine`.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Richardson-extrapolated integral.
    pub value: f64,
    pub report: ConvergenceReport,
}

fn simpson_samples(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    debug_assert!(n.is_multiple_of(2));
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in y.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (y[0] + 4.0 * odd + 2.0 * even + y[n])
}

fn trapezoid_samples(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    let inner: f64 = y[1..n].iter().sum();
    h * (0.5 * (y[0] + y[n]) + inner)
}

/// Integrate samples taken at the `n_steps + 1` points of `grid`.
pub fn integrate_samples(samples: &[f64], grid: &TimeGrid, method: QuadratureMethod) -> Result<f64> {
    if samples.len() != grid.n_steps() + 1 {
        return Err(Error::Config(format!(
            "expected {} samples for the grid, got {}",
            grid.n_steps() + 1,
            samples.len()
        )));
    }
    match method {
        QuadratureMethod::Trapezoid => Ok(trapezoid_samples(samples, grid.dt())),
        QuadratureMethod::Simpson => {
            if !grid.n_steps().is_multiple_of(2) {
                return Err(Error::Config(
                    "simpson quadrature needs an even step count".into(),
                ));
            }
            Ok(simpson_samples(samples, grid.dt()))
        }
    }
}

/// Composite trapezoid rule for `f` on `grid`.
pub fn trapezoid(f: impl Fn(f64) -> f64, grid: &TimeGrid) -> f64 {
    let y: Vec<f64> = grid.times().map(f).collect();
    trapezoid_samples(&y, grid.dt())
}

/// Composite Simpson rule for `f` on `grid` (even step count required).
pub fn simpson(f: impl Fn(f64) -> f64, grid: &TimeGrid) -> Result<f64> {
    let y: Vec<f64> = grid.times().map(f).collect();
    integrate_samples(&y, grid, QuadratureMethod::Simpson)
}

fn every(y: &[f64], stride: usize) -> Vec<f64> {
    y.iter().step_by(stride).copied().collect()
}

/// Breakpoints strictly inside `(lo, hi)`, sorted and deduplicated.
fn interior(breakpoints: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut b: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&t| t > lo && t < hi)
        .collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Split `grid` at interior breakpoints into sub-grids whose step counts
/// are proportional to their length (at least 2, even for Simpson).
fn pieces(grid: &TimeGrid, breakpoints: &[f64], method: QuadratureMethod) -> Result<Vec<TimeGrid>> {
    let cuts = interior(breakpoints, grid.t_start(), grid.t_end());
    if cuts.is_empty() {
        return Ok(vec![*grid]);
    }
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(grid.t_start());
    edges.extend(cuts);
    edges.push(grid.t_end());
    edges
        .windows(2)
        .map(|w| {
            let raw = (grid.n_steps() as f64 * (w[1] - w[0]) / grid.duration()).ceil() as usize;
            let mut n = raw.max(2);
            if method == QuadratureMethod::Simpson && n % 2 == 1 {
                n += 1;
            }
            TimeGrid::new(w[0], w[1], n)
        })
        .collect()
}

/// Integrate `f` over the grid of `spec` with step-halving diagnostics.
///
/// The rule is applied with `n`, `2n` and `4n` steps (sharing samples).
/// The returned value is the Richardson combination of the `n` and `2n`
/// results; the error estimate is measured against `∫|f| dt` so that
/// integrals with cancellation are judged on the integrand's scale.
pub fn integrate_time(f: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    integrate_time_piecewise(f, spec, &[])
}

/// As [`integrate_time`], but the grid is first cut at any `breakpoints`
/// inside it (kinks of `f` or its derivatives), so that no panel straddles
/// one. Each piece keeps roughly the step density of `spec`.
pub fn integrate_time_piecewise(
    f: impl Fn(f64) -> f64,
    spec: &QuadratureSpec,
    breakpoints: &[f64],
) -> Result<Quadrature> {
    let rule = |samples: &[f64], step: f64| match spec.method {
        QuadratureMethod::Trapezoid => trapezoid_samples(samples, step),
        QuadratureMethod::Simpson => simpson_samples(samples, step),
    };
    let (mut coarse, mut fine, mut finer, mut magnitude) = (0.0, 0.0, 0.0, 0.0);
    for piece in pieces(&spec.grid, breakpoints, spec.method)? {
        let finest = piece.refined().refined();
        let y: Vec<f64> = finest.times().map(&f).collect();
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "integrand is not finite at t = {}",
                finest.time(i)
            )));
        }
        let h = finest.dt();
        coarse += rule(&every(&y, 4), 4.0 * h);
        fine += rule(&every(&y, 2), 2.0 * h);
        finer += rule(&y, h);
        magnitude += trapezoid_samples(&y.iter().map(|v| v.abs()).collect::<Vec<_>>(), h);
    }

    let p = spec.method.order() as i32;
    let denom = 2f64.powi(p) - 1.0;
    let extrapolated = fine + (fine - coarse) / denom;
    let error_estimate = (fine - coarse).abs() / denom;

    let scale = extrapolated.abs().max(magnitude);
    let noise = 64.0 * f64::EPSILON * scale;
    let (d1, d2) = ((coarse - fine).abs(), (fine - finer).abs());
    let estimated_order = (d1 > noise && d2 > noise).then(|| (d1 / d2).log2());

    let report = ConvergenceReport {
        coarse,
        fine,
        extrapolated,
        estimated_order,
        error_estimate,
    };
    if error_estimate > spec.tolerance * scale {
        return Err(Error::Convergence {
            what: format!(
                "{} quadrature on {} steps",
                spec.method.name(),
                spec.grid.n_steps()
            ),
            estimate: error_estimate / scale.max(f64::MIN_POSITIVE),
            tolerance: spec.tolerance,
        });
    }
    Ok(Quadrature {
        value: extrapolated,
        report,
    })
}

fn rk4_step(rhs: &mut impl FnMut(f64, f64) -> f64, t: f64, t_next: f64, y: f64) -> Result<f64> {
    let h = t_next - t;
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    let k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    let k4 = rhs(t_next.next_down(), y + h * k3);
    if !(k1.is_finite() && k2.is_finite() && k3.is_finite() && k4.is_finite()) {
        return Err(Error::Numerical(format!(
            "ODE right-hand side not finite near t = {t}"
        )));
    }
    Ok(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// Classical fourth-order Runge–Kutta for a scalar ODE `y' = rhs(t, y)`,
/// returning `y` at every grid point.
///
/// The last stage of each step is evaluated one ulp before the step's end
/// time, so a right-hand side with a jump exactly on a grid point is seen
/// from inside the step on both sides.
pub fn step_ode(initial: f64, rhs: impl FnMut(f64, f64) -> f64, grid: &TimeGrid) -> Result<Vec<f64>> {
    step_ode_piecewise(initial, rhs, grid, &[])
}

/// As [`step_ode`], but a step containing a breakpoint is taken as
/// sub-steps that end and restart on it. Output stays on the grid.
pub fn step_ode_piecewise(
    initial: f64,
    mut rhs: impl FnMut(f64, f64) -> f64,
    grid: &TimeGrid,
    breakpoints: &[f64],
) -> Result<Vec<f64>> {
    let cuts = interior(breakpoints, grid.t_start(), grid.t_end());
    let mut out = Vec::with_capacity(grid.n_steps() + 1);
    let mut y = initial;
    out.push(y);
    let mut next_cut = cuts.iter().peekable();
    for i in 0..grid.n_steps() {
        let mut t = grid.time(i);
        let t_next = grid.time(i + 1);
        while let Some(&&b) = next_cut.peek() {
            if b >= t_next {
                break;
            }
            next_cut.next();
            if b > t {
                y = rk4_step(&mut rhs, t, b, y)?;
                t = b;
            }
        }
        y = rk4_step(&mut rhs, t, t_next, y)?;
        out.push(y);
    }
    Ok(out)
}

/// Midpoint-rule line integral around a circle.
///
/// The circle has the given `radius` and `center` and lies in the plane
/// normal to `axis`; it is traversed right-handedly about `axis`. `g`
/// receives each midpoint position and the unit tangent there, and returns
/// the integrand per unit length. The result is `Σ g(r_i, t̂_i) · a·Δθ`.
pub fn loop_quadrature(
    mut g: impl FnMut(Vec3, Vec3) -> f64,
    radius: f64,
    center: Vec3,
    axis: Vec3,
    n_segments: usize,
) -> Result<f64> {
    let axis = axis
        .normalized()
        .ok_or_else(|| Error::Config("loop axis is degenerate".into()))?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Config(format!(
            "loop radius must be positive (got {radius})"
        )));
    }
    if n_segments < 8 {
        return Err(Error::Config(format!(
            "loop quadrature needs at least 8 segments (got {n_segments})"
        )));
    }
    let e1 = axis.any_orthogonal();
    let e2 = axis.cross(e1);
    let dtheta = 2.0 * PI / n_segments as f64;
    let dl = radius * dtheta;
    let mut sum = 0.0;
    for i in 0..n_segments {
        let theta = (i as f64 + 0.5) * dtheta;
        let (s, c) = theta.sin_cos();
        let r = center + (e1 * c + e2 * s) * radius;
        let tangent = e2 * c - e1 * s;
        sum += g(r, tangent);
    }
    Ok(sum * dl)
}

/// Ordinary least-squares fit `y ≈ slope·x + intercept`.
///
/// `None` when fewer than two points are given or all `x` coincide.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
