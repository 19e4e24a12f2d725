//! On-disk scenario format (TOML). Every physical key carries its unit in
//! the name: `bmax_t`, `radius_m`, `current_a`, `velocity_m_per_s`, ...
//!
//! ```toml
//! id = "pulse-demo"
//! kind = "compare"
//!
//! [grid]
//! t_end_s = 1.0e-3
//!
//! [field]
//! profile = "raised-cosine"
//! bmax_t = 1.0e-3
//! start_s = 0.0
//! duration_s = 1.0e-3
//!
//! [neutron]
//! velocity_m_per_s = [0.0, 0.0, 2000.0]
//!
//! [ring]
//! radius_m = 1.0e-3
//! device_mass_kg = 1.0e-3
//! fluid_mass_kg = 1.0e-4
//! fluid_speed_m_per_s = 0.5
//! ```

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// `neutron`, `ring`, `compare` or `sweep`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Fringe visibility in `[0, 1]`; default 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visibility: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neutron: Option<NeutronConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_start_s: Option<f64>,
    pub t_end_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    /// `simpson` (default) or `trapezoid`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    /// `constant`, `linear-ramp`, `raised-cosine` or `smoothed-rectangle`.
    pub profile: String,
    pub bmax_t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_s: Option<f64>,
    /// Ramp end (linear-ramp only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_s: Option<f64>,
    /// Pulse length (raised-cosine only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
    /// Rise and fall time (smoothed-rectangle only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rise_s: Option<f64>,
    /// Flat-top length (smoothed-rectangle only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hold_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
    /// Requested spatial gradient of |B|. The model is exactly uniform, so
    /// anything beyond `uniformity_tolerance` is rejected.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_t_per_m: Option<f64>,
    /// Size of the region the gradient acts over.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region_m: Option<f64>,
    /// Largest accepted `|gradient|·region/|bmax|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniformity_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeutronConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    /// Moment magnitude; default is the neutron's.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_j_per_t: Option<f64>,
    pub velocity_m_per_s: [f64; 3],
    /// `+1`: moment along the field direction, `-1`: against it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_sign: Option<i32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub radius_m: f64,
    /// Required for ring runs. In compare runs, omit it to match the
    /// neutron's moment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub current_a: Option<f64>,
    pub device_mass_kg: f64,
    pub fluid_mass_kg: f64,
    /// Fluid speed before the field is switched on.
    pub fluid_speed_m_per_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axial_speed_m_per_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_m: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_segments: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Swept key; only `bmax_t` is supported.
    pub parameter: String,
    pub values: Vec<f64>,
    /// Kind of each sub-run: `neutron` (default) or `compare`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}
