//! Spatially uniform, time-dependent magnetic fields.
//!
//! A [`FieldModel`] is a [`PulseProfile`] (the scalar time dependence, in
//! tesla) along a fixed unit direction. Because the field never varies in
//! space, the vector potential is taken in the symmetric gauge
//! `A(r, t) = ½ B(t) × r`, whose curl is exactly `B` and divergence zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::types::Vec3;

/// Scalar time dependence of the field magnitude.
///
/// All timing parameters are in seconds, amplitudes in tesla. Apart from
/// `Constant`, every profile is zero before it switches on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseProfile {
    /// `B(t) = amplitude` for all t.
    Constant { amplitude: f64 },
    /// Zero before `start`, rising linearly to `amplitude` at `end`, held after.
    /// Continuous, but the derivative jumps at both knots.
    LinearRamp { amplitude: f64, start: f64, end: f64 },
    /// `amplitude · ½(1 − cos(2π(t − start)/duration))` on the window, zero outside.
    RaisedCosine {
        amplitude: f64,
        start: f64,
        duration: f64,
    },
    /// Half-cosine rise over `rise`, flat top for `hold`, mirrored fall over
    /// `rise`. C¹ everywhere.
    SmoothedRectangle {
        amplitude: f64,
        start: f64,
        rise: f64,
        hold: f64,
    },
}

impl PulseProfile {
    pub fn amplitude(&self) -> f64 {
        match *self {
            PulseProfile::Constant { amplitude }
            | PulseProfile::LinearRamp { amplitude, .. }
            | PulseProfile::RaisedCosine { amplitude, .. }
            | PulseProfile::SmoothedRectangle { amplitude, .. } => amplitude,
        }
    }

    /// Copy of the profile with a different amplitude and identical timing.
    pub fn with_amplitude(&self, amplitude: f64) -> PulseProfile {
        let mut p = *self;
        match &mut p {
            PulseProfile::Constant { amplitude: a }
            | PulseProfile::LinearRamp { amplitude: a, .. }
            | PulseProfile::RaisedCosine { amplitude: a, .. }
            | PulseProfile::SmoothedRectangle { amplitude: a, .. } => *a = amplitude,
        }
        p
    }

    /// Short lowercase name as used in scenario files.
    pub fn kind_name(&self) -> &'static str {
        match self {
            PulseProfile::Constant { .. } => "constant",
            PulseProfile::LinearRamp { .. } => "linear-ramp",
            PulseProfile::RaisedCosine { .. } => "raised-cosine",
            PulseProfile::SmoothedRectangle { .. } => "smoothed-rectangle",
        }
    }

    /// Whether the profile and its derivative are both continuous.
    pub fn is_c1(&self) -> bool {
        !matches!(self, PulseProfile::LinearRamp { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("{} profile: {msg}", self.kind_name())));
        if !self.amplitude().is_finite() {
            return bad("amplitude must be finite");
        }
        match *self {
            PulseProfile::Constant { .. } => {}
            PulseProfile::LinearRamp { start, end, .. } => {
                if !(start.is_finite() && end.is_finite() && end > start) {
                    return bad("ramp needs finite start < end");
                }
            }
            PulseProfile::RaisedCosine { start, duration, .. } => {
                if !(start.is_finite() && duration.is_finite() && duration > 0.0) {
                    return bad("duration must be positive");
                }
            }
            PulseProfile::SmoothedRectangle {
                start, rise, hold, ..
            } => {
                if !(start.is_finite() && rise.is_finite() && rise > 0.0) {
                    return bad("rise time must be positive");
                }
                if !(hold.is_finite() && hold >= 0.0) {
                    return bad("hold time must be non-negative");
                }
            }
        }
        Ok(())
    }

    /// Profile value at `t`, tesla.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            PulseProfile::Constant { amplitude } => amplitude,
            PulseProfile::LinearRamp {
                amplitude,
                start,
                end,
            } => {
                if t <= start {
                    0.0
                } else if t >= end {
                    amplitude
                } else {
                    amplitude * (t - start) / (end - start)
                }
            }
            PulseProfile::RaisedCosine {
                amplitude,
                start,
                duration,
            } => {
                let s = t - start;
                if s <= 0.0 || s >= duration {
                    0.0
                } else {
                    amplitude * 0.5 * (1.0 - (2.0 * PI * s / duration).cos())
                }
            }
            PulseProfile::SmoothedRectangle {
                amplitude,
                start,
                rise,
                hold,
            } => {
                let s = t - start;
                if s <= 0.0 || s >= 2.0 * rise + hold {
                    0.0
                } else if s < rise {
                    amplitude * 0.5 * (1.0 - (PI * s / rise).cos())
                } else if s <= rise + hold {
                    amplitude
                } else {
                    let u = s - rise - hold;
                    amplitude * 0.5 * (1.0 + (PI * u / rise).cos())
                }
            }
        }
    }

    /// Analytic time derivative, T/s. At the knots of the linear ramp the
    /// one-sided value from the right is returned.
    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            PulseProfile::Constant { .. } => 0.0,
            PulseProfile::LinearRamp {
                amplitude,
                start,
                end,
            } => {
                if t >= start && t < end {
                    amplitude / (end - start)
                } else {
                    0.0
                }
            }
            PulseProfile::RaisedCosine {
                amplitude,
                start,
                duration,
            } => {
                let s = t - start;
                if s <= 0.0 || s >= duration {
                    0.0
                } else {
                    amplitude * PI / duration * (2.0 * PI * s / duration).sin()
                }
            }
            PulseProfile::SmoothedRectangle {
                amplitude,
                start,
                rise,
                hold,
            } => {
                let s = t - start;
                if s <= 0.0 || s >= 2.0 * rise + hold {
                    0.0
                } else if s < rise {
                    amplitude * 0.5 * PI / rise * (PI * s / rise).sin()
                } else if s <= rise + hold {
                    0.0
                } else {
                    let u = s - rise - hold;
                    -amplitude * 0.5 * PI / rise * (PI * u / rise).sin()
                }
            }
        }
    }

    /// Closed-form antiderivative, zero at `t = start` (or at `t = 0` for
    /// the constant profile).
    fn antiderivative(&self, t: f64) -> f64 {
        match *self {
            PulseProfile::Constant { amplitude } => amplitude * t,
            PulseProfile::LinearRamp {
                amplitude,
                start,
                end,
            } => {
                let ramp = end - start;
                if t <= start {
                    0.0
                } else if t >= end {
                    amplitude * (0.5 * ramp + (t - end))
                } else {
                    let s = t - start;
                    amplitude * s * s / (2.0 * ramp)
                }
            }
            PulseProfile::RaisedCosine {
                amplitude,
                start,
                duration,
            } => {
                let s = (t - start).clamp(0.0, duration);
                if s >= duration {
                    amplitude * 0.5 * duration
                } else {
                    amplitude * 0.5 * (s - duration / (2.0 * PI) * (2.0 * PI * s / duration).sin())
                }
            }
            PulseProfile::SmoothedRectangle {
                amplitude,
                start,
                rise,
                hold,
            } => {
                let s = (t - start).clamp(0.0, 2.0 * rise + hold);
                if s < rise {
                    amplitude * 0.5 * (s - rise / PI * (PI * s / rise).sin())
                } else if s <= rise + hold {
                    amplitude * (0.5 * rise + (s - rise))
                } else if s < 2.0 * rise + hold {
                    let u = s - rise - hold;
                    amplitude * (0.5 * rise + hold + 0.5 * (u + rise / PI * (PI * u / rise).sin()))
                } else {
                    amplitude * (rise + hold)
                }
            }
        }
    }

    /// Closed-form pulse area `∫_{t0}^{t1} B dt`, T·s.
    pub fn area(&self, t0: f64, t1: f64) -> f64 {
        self.antiderivative(t1) - self.antiderivative(t0)
    }

    /// Instants where the profile or its derivative has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            PulseProfile::Constant { .. } => vec![],
            PulseProfile::LinearRamp { start, end, .. } => vec![start, end],
            PulseProfile::RaisedCosine { start, duration, .. } => vec![start, start + duration],
            PulseProfile::SmoothedRectangle {
                start, rise, hold, ..
            } => vec![
                start,
                start + rise,
                start + rise + hold,
                start + 2.0 * rise + hold,
            ],
        }
    }
}

/// A uniform magnetic field `B(t) = profile(t) · direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldModel {
    profile: PulseProfile,
    direction: Vec3,
}

impl FieldModel {
    /// Field along `direction`, which must be a unit vector within 1e-12.
    pub fn new(profile: PulseProfile, direction: Vec3) -> Result<Self> {
        profile.validate()?;
        if !direction.is_unit(1e-12) {
            return Err(Error::Config(format!(
                "field direction must be a unit vector (|d| = {})",
                direction.norm()
            )));
        }
        Ok(Self { profile, direction })
    }

    /// Field along the z axis.
    pub fn along_z(profile: PulseProfile) -> Result<Self> {
        Self::new(profile, Vec3::Z)
    }

    /// The field-free reference with the same direction and timing.
    pub fn switched_off(&self) -> FieldModel {
        FieldModel {
            profile: self.profile.with_amplitude(0.0),
            direction: self.direction,
        }
    }

    pub fn with_amplitude(&self, amplitude: f64) -> FieldModel {
        FieldModel {
            profile: self.profile.with_amplitude(amplitude),
            direction: self.direction,
        }
    }

    pub fn profile(&self) -> &PulseProfile {
        &self.profile
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    /// Signed magnitude of B along `direction` at `t`, tesla.
    pub fn magnitude_at(&self, t: f64) -> f64 {
        self.profile.value(t)
    }

    /// Field pulse area `∫_{t0}^{t1} B dt` along `direction`, T·s.
    pub fn pulse_area(&self, t0: f64, t1: f64) -> f64 {
        self.profile.area(t0, t1)
    }
}

/// Magnetic field vector at time `t`, tesla. Independent of position.
pub fn field_at(model: &FieldModel, t: f64) -> Vec3 {
    model.direction * model.profile.value(t)
}

/// Analytic `∂B/∂t` at time `t`, tesla per second.
pub fn field_rate_at(model: &FieldModel, t: f64) -> Vec3 {
    model.direction * model.profile.rate(t)
}

/// Symmetric-gauge vector potential `½ B(t) × r`, T·m.
pub fn vector_potential_at(model: &FieldModel, r: Vec3, t: f64) -> Vec3 {
    field_at(model, t).cross(r) * 0.5
}
