//! Physical constants in SI units (CODATA 2018 recommended values).
//!
//! Everything in this crate is SI with ħ explicit. Formulas written with
//! `c = 1` carry over unchanged in the nonrelativistic regime used here:
//! the magnetic interaction `μ·B` is already in joules when μ is in J/T
//! and B in tesla, so no factor of `c` appears anywhere.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Neutron rest mass, kg.
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;

/// Magnitude of the neutron magnetic moment, J/T.
pub const NEUTRON_MOMENT: f64 = 9.662_365_1e-27;

/// Speed of light in vacuum, m/s. Used only for the nonrelativistic guard.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// The constant table as a value, for callers that want to pass it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub neutron_mass: f64,
    pub neutron_moment_magnitude: f64,
    pub speed_of_light: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        hbar: HBAR,
        neutron_mass: NEUTRON_MASS,
        neutron_moment_magnitude: NEUTRON_MOMENT,
        speed_of_light: SPEED_OF_LIGHT,
    };
}

impl Default for Constants {
    fn default() -> Self {
        Self::SI
    }
}
