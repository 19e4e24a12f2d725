//! The classical analog: a neutral ring whose charged fluid circulates as a
//! current loop.
//!
//! The loop carries moment `μ = πa²I·axis` and couples to a uniform field
//! through `I∮A·dl = μ·B`. When B changes, the induced EMF delivers power
//! `P = −μ·∂B/∂t` to the fluid. The current is held fixed (the fluid's
//! charge-to-mass ratio is negligible), so the fluid's kinetic energy
//! absorbs the power: `KE(t) = KE(T₀) − μ·B(t)`. Its drop exactly cancels
//! the interaction term and the Lagrangian
//! `L = ½Mv_z² + KE_fluid + μ·B` stays at `L(T₀)`.
//!
//! Notation: the fluid mass is written `fluid_mass` throughout; it is the
//! same quantity in the Lagrangian and in the kinetic-energy balance.

use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::fields::{field_at, field_rate_at, vector_potential_at, FieldModel};
use crate::integrate::{
    integrate_samples, loop_quadrature, step_ode_piecewise, QuadratureMethod, QuadratureSpec,
};
use crate::neutron::{accumulate_action_with, NeutronState, DEFAULT_ACTION_TOLERANCE};
use crate::types::{TimeGrid, Vec3};

/// Default segment count for the loop line integral.
pub const DEFAULT_SEGMENTS: usize = 1024;

/// Default relative tolerance on the fluid kinetic energy (step-halving check).
pub const DEFAULT_ENERGY_TOLERANCE: f64 = 1e-10;

/// The quantum action shift counts as field dependence above this, J·s
/// (one microradian of phase).
pub const QUANTUM_ACTION_THRESHOLD: f64 = 1e-6 * HBAR;

/// Relative bound on the classical action shift for the invariance verdict.
pub const CLASSICAL_INVARIANCE_TOLERANCE: f64 = 1e-6;

/// A rigid ring carrying a circulating charged fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingDevice {
    radius: f64,
    current: f64,
    device_mass: f64,
    fluid_mass: f64,
    axial_speed: f64,
    fluid_speed: f64,
    center: Vec3,
    axis: Vec3,
}

impl RingDevice {
    /// Ring on the z axis at the origin, at rest axially, with fluid speed
    /// `fluid_speed` (m/s) at the start of a run.
    pub fn new(
        radius: f64,
        current: f64,
        device_mass: f64,
        fluid_mass: f64,
        fluid_speed: f64,
    ) -> Result<Self> {
        let ring = Self {
            radius,
            current,
            device_mass,
            fluid_mass,
            axial_speed: 0.0,
            fluid_speed,
            center: Vec3::ZERO,
            axis: Vec3::Z,
        };
        ring.validate()?;
        Ok(ring)
    }

    /// Ring whose moment equals `moment`: axis along it and current
    /// `|μ|/(πa²)`. A zero moment gives a zero current on the z axis.
    pub fn matched_to(
        moment: Vec3,
        radius: f64,
        device_mass: f64,
        fluid_mass: f64,
        fluid_speed: f64,
    ) -> Result<Self> {
        let ring = Self::new(radius, 0.0, device_mass, fluid_mass, fluid_speed)?;
        match moment.normalized() {
            Some(axis) => Ok(RingDevice {
                current: moment.norm() / (PI * radius * radius),
                axis,
                ..ring
            }),
            None => Ok(ring),
        }
    }

    pub fn with_axial_speed(mut self, v_z: f64) -> Result<Self> {
        self.axial_speed = v_z;
        self.validate()?;
        Ok(self)
    }

    pub fn with_center(mut self, center: Vec3) -> Result<Self> {
        self.center = center;
        self.validate()?;
        Ok(self)
    }

    pub fn with_axis(mut self, axis: Vec3) -> Result<Self> {
        self.axis = axis;
        self.validate()?;
        Ok(self)
    }

    pub fn with_current(mut self, current: f64) -> Result<Self> {
        self.current = current;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(format!("ring: {m}")));
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return fail(format!("radius must be positive (got {})", self.radius));
        }
        if !self.current.is_finite() {
            return fail("current must be finite".into());
        }
        if !(self.fluid_mass > 0.0 && self.fluid_mass.is_finite()) {
            return fail(format!("fluid mass must be positive (got {})", self.fluid_mass));
        }
        if !(self.device_mass >= self.fluid_mass && self.device_mass.is_finite()) {
            return fail(format!(
                "device mass {} must be at least the fluid mass {}",
                self.device_mass, self.fluid_mass
            ));
        }
        if !(self.axial_speed.is_finite() && self.fluid_speed.is_finite()) {
            return fail("speeds must be finite".into());
        }
        if !self.center.is_finite() {
            return fail("center must be finite".into());
        }
        if !self.axis.is_unit(1e-12) {
            return fail(format!(
                "axis must be a unit vector (|axis| = {})",
                self.axis.norm()
            ));
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn current(&self) -> f64 {
        self.current
    }
    pub fn device_mass(&self) -> f64 {
        self.device_mass
    }
    pub fn fluid_mass(&self) -> f64 {
        self.fluid_mass
    }
    pub fn axial_speed(&self) -> f64 {
        self.axial_speed
    }
    /// Fluid speed at the start of a run, m/s.
    pub fn fluid_speed(&self) -> f64 {
        self.fluid_speed
    }
    pub fn center(&self) -> Vec3 {
        self.center
    }
    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    /// `½ M v_z²`, J.
    pub fn axial_kinetic_energy(&self) -> f64 {
        0.5 * self.device_mass * self.axial_speed * self.axial_speed
    }

    /// `½ m_f v_⊥²(T₀)`, J.
    pub fn initial_fluid_energy(&self) -> f64 {
        0.5 * self.fluid_mass * self.fluid_speed * self.fluid_speed
    }
}

/// `π a² I · axis`, A·m².
pub fn ring_moment(ring: &RingDevice) -> Vec3 {
    ring.axis * (PI * ring.radius * ring.radius * ring.current)
}

/// `I ∮ A·dl` around the ring, J, in the symmetric gauge.
pub fn interaction_line_integral(
    ring: &RingDevice,
    field: &FieldModel,
    t: f64,
    n_segments: usize,
) -> Result<f64> {
    interaction_line_integral_in_gauge(ring, field, t, n_segments, |_| Vec3::ZERO)
}

/// As [`interaction_line_integral`], with `∇χ` added to the potential.
pub fn interaction_line_integral_in_gauge(
    ring: &RingDevice,
    field: &FieldModel,
    t: f64,
    n_segments: usize,
    gauge_gradient: impl Fn(Vec3) -> Vec3,
) -> Result<f64> {
    let circulation = loop_quadrature(
        |r, tangent| (vector_potential_at(field, r, t) + gauge_gradient(r)).dot(tangent),
        ring.radius,
        ring.center,
        ring.axis,
        n_segments,
    )?;
    Ok(ring.current * circulation)
}

/// Line integral with a segment-doubling check: fails with a convergence
/// error when `n` and `2n` segments disagree by more than `tolerance`
/// relative to `|I|·πa²·|B|`.
pub fn interaction_line_integral_checked(
    ring: &RingDevice,
    field: &FieldModel,
    t: f64,
    n_segments: usize,
    tolerance: f64,
) -> Result<f64> {
    let coarse = interaction_line_integral(ring, field, t, n_segments)?;
    let fine = interaction_line_integral(ring, field, t, 2 * n_segments)?;
    let scale = (PI * ring.radius * ring.radius * ring.current).abs() * field_at(field, t).norm();
    let diff = (fine - coarse).abs();
    if diff > tolerance * scale {
        return Err(Error::Convergence {
            what: format!("ring line integral with {n_segments} segments"),
            estimate: diff / scale.max(f64::MIN_POSITIVE),
            tolerance,
        });
    }
    Ok(fine)
}

/// `μ·B(t)`, J.
pub fn interaction_analytic(ring: &RingDevice, field: &FieldModel, t: f64) -> f64 {
    ring_moment(ring).dot(field_at(field, t))
}

/// Power delivered to the fluid by the induced EMF, `−Iπa² axis·∂B/∂t`, W.
pub fn induced_power(ring: &RingDevice, field: &FieldModel, t: f64) -> f64 {
    -PI * ring.radius * ring.radius * ring.current * ring.axis.dot(field_rate_at(field, t))
}

/// `½Mv_z² + KE_fluid + μ·B(t)`, J.
pub fn classical_lagrangian(ring: &RingDevice, kinetic_fluid: f64, field: &FieldModel, t: f64) -> f64 {
    ring.axial_kinetic_energy() + kinetic_fluid + interaction_analytic(ring, field, t)
}

/// One output step of a ring run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSample {
    pub t: f64,
    /// Field magnitude along the field direction, T.
    pub field: f64,
    pub v_perp: f64,
    pub kinetic_fluid: f64,
    pub interaction: f64,
    pub lagrangian_total: f64,
}

/// Time series of a ring run on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RingRunResult {
    pub grid: TimeGrid,
    pub samples: Vec<RingSample>,
    /// Axial kinetic energy `½Mv_z²`, J.
    pub axial_kinetic: f64,
    /// Relative step-halving error estimate of the fluid energy.
    pub convergence_estimate: f64,
}

impl RingRunResult {
    pub fn initial(&self) -> &RingSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &RingSample {
        self.samples.last().expect("a run has at least three samples")
    }

    /// `max_t |L(t) − L(T₀)| / |L(T₀)|`.
    pub fn max_lagrangian_deviation(&self) -> f64 {
        let l0 = self.initial().lagrangian_total;
        self.samples
            .iter()
            .map(|s| (s.lagrangian_total - l0).abs())
            .fold(0.0, f64::max)
            / l0.abs()
    }

    /// `max_t |KE(t) + μ·B(t) − KE(T₀)| / KE(T₀)`.
    pub fn max_closed_form_residual(&self) -> f64 {
        let ke0 = self.initial().kinetic_fluid;
        self.samples
            .iter()
            .map(|s| (s.kinetic_fluid + s.interaction - ke0).abs())
            .fold(0.0, f64::max)
            / ke0
    }

    /// Classical action `∫ L dt` over the run, J·s.
    pub fn classical_action(&self) -> Result<f64> {
        let l: Vec<f64> = self.samples.iter().map(|s| s.lagrangian_total).collect();
        let method = if self.grid.n_steps().is_multiple_of(2) {
            QuadratureMethod::Simpson
        } else {
            QuadratureMethod::Trapezoid
        };
        integrate_samples(&l, &self.grid, method)
    }

    /// Running classical action at every sample, J·s (trapezoid).
    pub fn cumulative_action(&self) -> Vec<f64> {
        let h = self.grid.dt();
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.samples.len());
        out.push(0.0);
        for w in self.samples.windows(2) {
            acc += 0.5 * h * (w[0].lagrangian_total + w[1].lagrangian_total);
            out.push(acc);
        }
        out
    }
}

/// Evolve the fluid's kinetic energy under the induced power at the
/// default tolerance.
pub fn evolve_fluid_energy(ring: &RingDevice, field: &FieldModel, grid: &TimeGrid) -> Result<RingRunResult> {
    evolve_fluid_energy_with(ring, field, grid, DEFAULT_ENERGY_TOLERANCE)
}

/// Integrate `dKE/dt = P(t)` with fixed-step RK4 from `KE(T₀) = ½m_f v_⊥²`.
///
/// The run is repeated with half the step; if the two disagree at the grid
/// points by more than `tolerance · KE(T₀)` (after the usual 1/15 scaling)
/// a convergence error is returned. The field must vanish at `T₀` and the
/// fluid must never stall.
pub fn evolve_fluid_energy_with(
    ring: &RingDevice,
    field: &FieldModel,
    grid: &TimeGrid,
    tolerance: f64,
) -> Result<RingRunResult> {
    let t0 = grid.t_start();
    let b0 = field.magnitude_at(t0);
    if b0.abs() > 1e-12 * field.profile().amplitude().abs() {
        return Err(Error::Config(format!(
            "field must vanish at start (B(T0) = {b0:e} T)"
        )));
    }
    let ke0 = ring.initial_fluid_energy();
    if ke0.is_nan() || ke0 <= 0.0 {
        return Err(Error::PhysicalValidity(
            "fluid must be circulating at the start (zero kinetic energy)".into(),
        ));
    }

    let power = |t: f64, _ke: f64| induced_power(ring, field, t);
    let knots = field.profile().breakpoints();
    let coarse = step_ode_piecewise(ke0, power, grid, &knots)?;
    let fine = step_ode_piecewise(ke0, power, &grid.refined(), &knots)?;
    let max_diff = coarse
        .iter()
        .zip(fine.iter().step_by(2))
        .map(|(c, f)| (c - f).abs())
        .fold(0.0, f64::max);
    let convergence_estimate = max_diff / 15.0 / ke0;
    if let Some((t, ke)) = grid
        .times()
        .zip(coarse.iter().copied())
        .find(|&(_, ke)| ke.is_nan() || ke <= 0.0)
    {
        return Err(Error::PhysicalValidity(format!(
            "fluid stalls at t = {t:e} s: kinetic energy would drop to {ke:e} J"
        )));
    }
    if convergence_estimate > tolerance {
        return Err(Error::Convergence {
            what: format!("fluid energy RK4 on {} steps", grid.n_steps()),
            estimate: convergence_estimate,
            tolerance,
        });
    }

    let mut samples = Vec::with_capacity(coarse.len());
    for (t, &ke) in grid.times().zip(&coarse) {
        let interaction = interaction_analytic(ring, field, t);
        samples.push(RingSample {
            t,
            field: field.magnitude_at(t),
            v_perp: (2.0 * ke / ring.fluid_mass).sqrt(),
            kinetic_fluid: ke,
            interaction,
            lagrangian_total: ring.axial_kinetic_energy() + ke + interaction,
        });
    }
    Ok(RingRunResult {
        grid: *grid,
        samples,
        axial_kinetic: ring.axial_kinetic_energy(),
        convergence_estimate,
    })
}

/// Side-by-side field dependence of the neutron and its classical analog.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// `∫B dt` along the field direction over the grid, closed form, T·s.
    pub pulse_area: f64,
    /// Neutron action with the field on, J·s.
    pub quantum_action: f64,
    /// `S_on − S_off` for the neutron, J·s.
    pub delta_action_quantum: f64,
    /// `ΔS_quantum / ħ`, rad.
    pub phase_shift: f64,
    /// Ring action with the field on, J·s.
    pub classical_action: f64,
    /// `S_on − S_off` for the ring, J·s.
    pub delta_action_classical: f64,
    pub classical_lagrangian_initial: f64,
    pub max_lagrangian_deviation: f64,
    /// `|ΔS_quantum| > QUANTUM_ACTION_THRESHOLD`.
    pub quantum_depends: bool,
    /// `|ΔS_classical| ≤ CLASSICAL_INVARIANCE_TOLERANCE · |S_classical|`.
    pub classical_invariant: bool,
    pub ring_run: RingRunResult,
}

/// Run the neutron and the ring through the same field on the same grid,
/// each with the field on and off, and compare the action shifts.
///
/// The ring's moment must equal the neutron's within 1e-9 relative.
pub fn compare_quantum_classical(
    neutron: &NeutronState,
    ring: &RingDevice,
    field: &FieldModel,
    grid: &TimeGrid,
) -> Result<ComparisonReport> {
    let spec = QuadratureSpec::new(QuadratureMethod::Simpson, *grid, DEFAULT_ACTION_TOLERANCE)?;
    compare_quantum_classical_with(neutron, ring, field, &spec, DEFAULT_ENERGY_TOLERANCE)
}

/// As [`compare_quantum_classical`] with explicit quadrature settings for
/// the neutron and energy tolerance for the ring.
pub fn compare_quantum_classical_with(
    neutron: &NeutronState,
    ring: &RingDevice,
    field: &FieldModel,
    spec: &QuadratureSpec,
    energy_tolerance: f64,
) -> Result<ComparisonReport> {
    let grid = spec.grid();
    let mu_n = neutron.moment();
    let mu_r = ring_moment(ring);
    if (mu_n - mu_r).norm() > 1e-9 * mu_n.norm().max(mu_r.norm()) {
        return Err(Error::Config(format!(
            "ring moment {mu_r:?} does not match neutron moment {mu_n:?}"
        )));
    }
    let off = field.switched_off();

    let q_on = accumulate_action_with(neutron, field, spec)?;
    let q_off = accumulate_action_with(neutron, &off, spec)?;
    let phase = crate::neutron::phase_shift(&q_on, &q_off)?;
    let delta_q = phase * HBAR;

    let r_on = evolve_fluid_energy_with(ring, field, grid, energy_tolerance)?;
    let r_off = evolve_fluid_energy_with(ring, &off, grid, energy_tolerance)?;
    let s_on = r_on.classical_action()?;
    let s_off = r_off.classical_action()?;
    let delta_c = s_on - s_off;

    Ok(ComparisonReport {
        pulse_area: field.pulse_area(grid.t_start(), grid.t_end()),
        quantum_action: q_on.action,
        delta_action_quantum: delta_q,
        phase_shift: phase,
        classical_action: s_on,
        delta_action_classical: delta_c,
        classical_lagrangian_initial: r_on.initial().lagrangian_total,
        max_lagrangian_deviation: r_on.max_lagrangian_deviation(),
        quantum_depends: delta_q.abs() > QUANTUM_ACTION_THRESHOLD,
        classical_invariant: delta_c.abs() <= CLASSICAL_INVARIANCE_TOLERANCE * s_on.abs(),
        ring_run: r_on,
    })
}
