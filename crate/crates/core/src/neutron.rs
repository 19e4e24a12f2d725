//! The quantum side: a neutral particle with a fixed magnetic moment drifting
//! through a uniform, time-dependent field.
//!
//! With zero charge the Lagrangian keeps only the kinetic and `μ·B` terms,
//! `L = ½mv² + μ·B(t)`. A uniform field exerts neither force nor torque, so
//! the drift velocity is constant and position never enters `L`. The action
//! nevertheless changes by `μ·∫B dt`, which shows up as an interferometric
//! phase `Δφ = ΔS/ħ`.
//!
//! The neutron is inert: its moment is fixed at construction and nothing in
//! this module mutates a [`NeutronState`].

use crate::constants::{HBAR, NEUTRON_MASS, NEUTRON_MOMENT, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::fields::{field_at, FieldModel};
use crate::integrate::{integrate_time_piecewise, step_ode_piecewise, QuadratureMethod, QuadratureSpec};
use crate::types::{TimeGrid, Vec3};

/// Default relative tolerance for action quadratures.
pub const DEFAULT_ACTION_TOLERANCE: f64 = 1e-10;

/// Moment orientation relative to the field axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinSign {
    Parallel,
    Antiparallel,
}

impl SpinSign {
    pub fn sign(self) -> f64 {
        match self {
            SpinSign::Parallel => 1.0,
            SpinSign::Antiparallel => -1.0,
        }
    }

    pub fn flipped(self) -> SpinSign {
        match self {
            SpinSign::Parallel => SpinSign::Antiparallel,
            SpinSign::Antiparallel => SpinSign::Parallel,
        }
    }

    pub fn from_sign(s: i32) -> Option<SpinSign> {
        match s {
            1 => Some(SpinSign::Parallel),
            -1 => Some(SpinSign::Antiparallel),
            _ => None,
        }
    }
}

/// An inert neutral particle: mass, fixed moment and constant drift velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutronState {
    mass: f64,
    moment: Vec3,
    velocity: Vec3,
    spin: SpinSign,
}

impl NeutronState {
    /// A neutron with CODATA mass and moment magnitude, its moment along
    /// `spin.sign() · field_direction`.
    pub fn new(velocity: Vec3, spin: SpinSign, field_direction: Vec3) -> Result<Self> {
        Self::with_parameters(NEUTRON_MASS, NEUTRON_MOMENT, velocity, spin, field_direction)
    }

    pub fn with_parameters(
        mass: f64,
        moment_magnitude: f64,
        velocity: Vec3,
        spin: SpinSign,
        field_direction: Vec3,
    ) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Config(format!(
                "neutron mass must be positive (got {mass})"
            )));
        }
        if !(moment_magnitude >= 0.0 && moment_magnitude.is_finite()) {
            return Err(Error::Config(format!(
                "moment magnitude must be finite and non-negative (got {moment_magnitude})"
            )));
        }
        if !velocity.is_finite() {
            return Err(Error::Config("drift velocity must be finite".into()));
        }
        let speed = velocity.norm();
        if speed >= 0.01 * SPEED_OF_LIGHT {
            return Err(Error::Config(format!(
                "drift speed {speed:.3e} m/s is not nonrelativistic (limit 0.01c)"
            )));
        }
        if !field_direction.is_unit(1e-12) {
            return Err(Error::Config("field direction must be a unit vector".into()));
        }
        Ok(Self {
            mass,
            moment: field_direction * (spin.sign() * moment_magnitude),
            velocity,
            spin,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Magnetic moment, J/T.
    pub fn moment(&self) -> Vec3 {
        self.moment
    }

    pub fn velocity(&self) -> Vec3 {
        self.velocity
    }

    pub fn spin(&self) -> SpinSign {
        self.spin
    }

    /// `½ m |v|²`, J.
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.mass * self.velocity.norm_squared()
    }

    /// Same particle with the moment reversed.
    pub fn spin_flipped(&self) -> NeutronState {
        NeutronState {
            moment: -self.moment,
            spin: self.spin.flipped(),
            ..*self
        }
    }
}

/// Action accumulated along one drift path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub grid: TimeGrid,
    /// Kinetic energy of the drift, J. Identifies the kinetic parameters.
    pub kinetic_energy: f64,
    /// Total action `∫L dt`, J·s.
    pub action: f64,
    pub kinetic_action: f64,
    pub magnetic_action: f64,
    /// `(t, L(t))` at every grid point.
    pub lagrangian: Vec<(f64, f64)>,
}

/// `½ m |v|² + μ·B(t)`, J.
pub fn neutron_lagrangian(state: &NeutronState, field: &FieldModel, t: f64) -> f64 {
    state.kinetic_energy() + state.moment.dot(field_at(field, t))
}

/// Accumulate the action with Simpson quadrature at the default tolerance.
pub fn accumulate_action(state: &NeutronState, field: &FieldModel, grid: &TimeGrid) -> Result<PathResult> {
    let spec = QuadratureSpec::new(QuadratureMethod::Simpson, *grid, DEFAULT_ACTION_TOLERANCE)?;
    accumulate_action_with(state, field, &spec)
}

/// Accumulate `S = ∫ L dt` over the grid of `spec`, reporting the kinetic and
/// magnetic parts separately. Each part is its own quadrature.
pub fn accumulate_action_with(
    state: &NeutronState,
    field: &FieldModel,
    spec: &QuadratureSpec,
) -> Result<PathResult> {
    let kinetic = state.kinetic_energy();
    let knots = field.profile().breakpoints();
    let kinetic_action = integrate_time_piecewise(|_| kinetic, spec, &[])?.value;
    let magnetic_action =
        integrate_time_piecewise(|t| state.moment.dot(field_at(field, t)), spec, &knots)?.value;
    let action = integrate_time_piecewise(|t| neutron_lagrangian(state, field, t), spec, &knots)?.value;
    let grid = *spec.grid();
    let lagrangian = grid
        .times()
        .map(|t| (t, neutron_lagrangian(state, field, t)))
        .collect();
    Ok(PathResult {
        grid,
        kinetic_energy: kinetic,
        action,
        kinetic_action,
        magnetic_action,
        lagrangian,
    })
}

/// Running action `∫_{t_start}^{t} L dt` at every grid point.
///
/// One RK4 step on a right-hand side that depends only on time is a
/// Simpson panel, so this is fourth-order accurate.
pub fn cumulative_action(state: &NeutronState, field: &FieldModel, grid: &TimeGrid) -> Result<Vec<f64>> {
    step_ode_piecewise(
        0.0,
        |t, _| neutron_lagrangian(state, field, t),
        grid,
        &field.profile().breakpoints(),
    )
}

/// Phase difference `(S_on − S_off)/ħ`, radians.
///
/// The kinetic and magnetic parts are differenced separately so that the
/// small magnetic contribution is not swamped by the kinetic action.
pub fn phase_shift(path_on: &PathResult, path_off: &PathResult) -> Result<f64> {
    if path_on.grid != path_off.grid {
        return Err(Error::Config(
            "phase shift needs both paths on the same time grid".into(),
        ));
    }
    if path_on.kinetic_energy != path_off.kinetic_energy {
        return Err(Error::Config(
            "phase shift needs both paths with the same drift kinetic energy".into(),
        ));
    }
    let delta = (path_on.kinetic_action - path_off.kinetic_action)
        + (path_on.magnetic_action - path_off.magnetic_action);
    Ok(delta / HBAR)
}

/// Two-beam interference readout `½(1 + V cos φ)`.
pub fn fringe_intensity(phase: f64, visibility: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::Config(format!(
            "visibility must lie in [0, 1] (got {visibility})"
        )));
    }
    if !phase.is_finite() {
        return Err(Error::Numerical("phase is not finite".into()));
    }
    Ok((0.5 * (1.0 + visibility * phase.cos())).clamp(0.0, 1.0))
}
