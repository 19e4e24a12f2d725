//! Simulation of a neutral particle's magnetic action and phase in a
//! uniform, time-dependent field, side by side with a classical current
//! loop whose Lagrangian stays independent of the same field.
//!
//! - [`types`], [`constants`]: vectors, time grids and SI constants.
//! - [`fields`]: pulse profiles, `B(t)`, `∂B/∂t` and the symmetric-gauge potential.
//! - [`neutron`]: Lagrangian, action, phase shift and fringe readout.
//! - [`ring`]: the current loop, induced power, energy back-reaction and
//!   the quantum/classical comparison.
//! - [`integrate`]: quadrature, RK4 and loop integrals.
//! - [`scenario`]: config files, validation, batch runs and CSV output.

pub mod constants;
pub mod error;
pub mod fields;
pub mod integrate;
pub mod neutron;
pub mod ring;
pub mod scenario;
pub mod types;

pub use constants::Constants;
pub use error::{Error, ErrorKind, Result, Violation};
pub use fields::{field_at, field_rate_at, vector_potential_at, FieldModel, PulseProfile};
pub use integrate::{ConvergenceReport, Quadrature, QuadratureMethod, QuadratureSpec};
pub use neutron::{
    accumulate_action, fringe_intensity, neutron_lagrangian, phase_shift, NeutronState, PathResult, SpinSign,
};
pub use ring::{
    classical_lagrangian, compare_quantum_classical, evolve_fluid_energy, induced_power,
    interaction_analytic, interaction_line_integral, ring_moment, ComparisonReport, RingDevice,
    RingRunResult, RingSample,
};
pub use types::{cross, dot, TimeGrid, Vec3};
