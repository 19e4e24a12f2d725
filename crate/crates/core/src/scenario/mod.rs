//! Declarative experiment descriptions: loading, validation, execution and
//! CSV output.
//!
//! A [`ScenarioConfig`] is what sits on disk. [`Scenario::from_config`]
//! checks every physical premise at once and either returns a validated
//! [`Scenario`] or an [`Error::Validation`] listing every violated guard by
//! its config key.

mod config;
mod output;
mod run;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub use config::{
    FieldConfig, GridConfig, NeutronConfig, OutputConfig, RingConfig, ScenarioConfig, SweepConfig,
};
pub use output::{write_outputs, NEUTRON_COLUMNS, RING_COLUMNS, SWEEP_COLUMNS};
pub use run::{execute, run, RunRecord, RunSummary, SweepRow};

use crate::constants::{NEUTRON_MASS, NEUTRON_MOMENT, SPEED_OF_LIGHT};
use crate::error::{Error, Result, Violation};
use crate::fields::{FieldModel, PulseProfile};
use crate::integrate::{QuadratureMethod, QuadratureSpec};
use crate::neutron::{NeutronState, SpinSign, DEFAULT_ACTION_TOLERANCE};
use crate::ring::{ring_moment, RingDevice, DEFAULT_ENERGY_TOLERANCE, DEFAULT_SEGMENTS};
use crate::types::{TimeGrid, Vec3};

pub const DEFAULT_STEPS: usize = 4096;
pub const DEFAULT_VISIBILITY: f64 = 1.0;
pub const DEFAULT_REGION_M: f64 = 0.01;
pub const DEFAULT_UNIFORMITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Neutron,
    Ring,
    Compare,
    Sweep,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Neutron => "neutron",
            ScenarioKind::Ring => "ring",
            ScenarioKind::Compare => "compare",
            ScenarioKind::Sweep => "sweep",
        }
    }

    fn needs_neutron(self) -> bool {
        self != ScenarioKind::Ring
    }

    fn needs_ring(self, target: Option<ScenarioKind>) -> bool {
        matches!(self, ScenarioKind::Ring | ScenarioKind::Compare)
            || (self == ScenarioKind::Sweep && target == Some(ScenarioKind::Compare))
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "neutron" => Ok(ScenarioKind::Neutron),
            "ring" => Ok(ScenarioKind::Ring),
            "compare" => Ok(ScenarioKind::Compare),
            "sweep" => Ok(ScenarioKind::Sweep),
            other => Err(format!(
                "unknown scenario kind `{other}` (expected neutron, ring, compare or sweep)"
            )),
        }
    }
}

/// A ring together with its numerical settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSetup {
    pub device: RingDevice,
    pub n_segments: usize,
    pub energy_tolerance: f64,
}

/// One materialized point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SubRun {
    /// Value of the swept parameter.
    pub value: f64,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: String,
    pub target: ScenarioKind,
    pub runs: Vec<SubRun>,
}

/// A validated scenario, ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub kind: ScenarioKind,
    pub field: FieldModel,
    pub quadrature: QuadratureSpec,
    pub visibility: f64,
    pub neutron: Option<NeutronState>,
    pub ring: Option<RingSetup>,
    pub sweep: Option<Sweep>,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl Scenario {
    pub fn grid(&self) -> &TimeGrid {
        self.quadrature.grid()
    }

    /// Validate a config. `default_id` is used when the file has no `id`;
    /// `expected_kind`, if given, fills a missing `kind` and must agree
    /// with one that is present.
    pub fn from_config(
        cfg: &ScenarioConfig,
        default_id: &str,
        expected_kind: Option<ScenarioKind>,
    ) -> Result<Scenario> {
        let mut v = Validator::default();
        let scenario = v.scenario(cfg, default_id, expected_kind);
        match scenario {
            Some(s) if v.violations.is_empty() => Ok(s),
            _ => Err(Error::Validation(v.violations)),
        }
    }

    /// Fully explicit config that validates back to an equal scenario.
    pub fn to_config(&self) -> ScenarioConfig {
        let grid = self.grid();
        let (profile, start_s, end_s, duration_s, rise_s, hold_s) = match *self.field.profile() {
            PulseProfile::Constant { .. } => ("constant", None, None, None, None, None),
            PulseProfile::LinearRamp { start, end, .. } => {
                ("linear-ramp", Some(start), Some(end), None, None, None)
            }
            PulseProfile::RaisedCosine { start, duration, .. } => {
                ("raised-cosine", Some(start), None, Some(duration), None, None)
            }
            PulseProfile::SmoothedRectangle {
                start, rise, hold, ..
            } => (
                "smoothed-rectangle",
                Some(start),
                None,
                None,
                Some(rise),
                Some(hold),
            ),
        };
        let field = FieldConfig {
            profile: profile.into(),
            bmax_t: self.field.profile().amplitude(),
            start_s,
            end_s,
            duration_s,
            rise_s,
            hold_s,
            direction: Some(self.field.direction().into()),
            ..Default::default()
        };
        let neutron = self.neutron.map(|n| NeutronConfig {
            mass_kg: Some(n.mass()),
            moment_j_per_t: Some(n.moment().norm()),
            velocity_m_per_s: n.velocity().into(),
            spin_sign: Some(n.spin().sign() as i32),
        });
        let ring = self.ring.map(|r| RingConfig {
            radius_m: r.device.radius(),
            current_a: Some(r.device.current()),
            device_mass_kg: r.device.device_mass(),
            fluid_mass_kg: r.device.fluid_mass(),
            fluid_speed_m_per_s: r.device.fluid_speed(),
            axial_speed_m_per_s: Some(r.device.axial_speed()),
            center_m: Some(r.device.center().into()),
            axis: Some(r.device.axis().into()),
            n_segments: Some(r.n_segments),
            energy_tolerance: Some(r.energy_tolerance),
        });
        let sweep = self.sweep.as_ref().map(|s| SweepConfig {
            parameter: s.parameter.clone(),
            values: s.runs.iter().map(|r| r.value).collect(),
            target: Some(s.target.as_str().into()),
            workers: self.workers,
        });
        ScenarioConfig {
            id: Some(self.id.clone()),
            kind: Some(self.kind.as_str().into()),
            visibility: Some(self.visibility),
            grid: Some(GridConfig {
                t_start_s: Some(grid.t_start()),
                t_end_s: grid.t_end(),
                n_steps: Some(grid.n_steps()),
                method: Some(self.quadrature.method().name().into()),
                tolerance: Some(self.quadrature.tolerance()),
            }),
            field: Some(field),
            neutron,
            ring,
            sweep,
            output: self.output_dir.as_ref().map(|d| OutputConfig {
                dir: Some(d.display().to_string()),
            }),
        }
    }
}

/// Parse TOML text into a config.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parse and validate scenario text.
pub fn parse_scenario(text: &str, default_id: &str, expected_kind: Option<ScenarioKind>) -> Result<Scenario> {
    Scenario::from_config(&parse_config(text)?, default_id, expected_kind)
}

/// Read and validate a scenario file. The file stem is the default id.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    load_scenario_as(path, None)
}

pub fn load_scenario_as(path: &Path, expected_kind: Option<ScenarioKind>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    parse_scenario(&text, &stem, expected_kind)
}

/// Serialize a scenario as TOML.
pub fn scenario_to_toml(scenario: &Scenario) -> Result<String> {
    toml::to_string(&scenario.to_config()).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_scenario(scenario: &Scenario, path: &Path) -> Result<()> {
    std::fs::write(path, scenario_to_toml(scenario)?)?;
    Ok(())
}

#[derive(Default)]
struct Validator {
    violations: Vec<Violation>,
}

impl Validator {
    fn fail(&mut self, field: &str, message: impl Into<String>) {
        self.violations.push(Violation::new(field, message));
    }

    fn positive(&mut self, field: &str, value: f64) -> bool {
        let ok = value > 0.0 && value.is_finite();
        if !ok {
            self.fail(field, format!("must be positive and finite (got {value})"));
        }
        ok
    }

    fn finite(&mut self, field: &str, value: f64) -> bool {
        let ok = value.is_finite();
        if !ok {
            self.fail(field, format!("must be finite (got {value})"));
        }
        ok
    }

    fn unit(&mut self, field: &str, v: [f64; 3]) -> Option<Vec3> {
        let v = Vec3::from(v);
        if v.is_unit(1e-12) {
            Some(v)
        } else {
            self.fail(field, format!("must be a unit vector (|v| = {})", v.norm()));
            None
        }
    }

    fn scenario(
        &mut self,
        cfg: &ScenarioConfig,
        default_id: &str,
        expected_kind: Option<ScenarioKind>,
    ) -> Option<Scenario> {
        let id = cfg.id.clone().unwrap_or_else(|| default_id.to_string());
        if id.is_empty() || id.contains(['/', '\\']) {
            self.fail("id", "must be non-empty and contain no path separators");
        }

        let kind = match (cfg.kind.as_deref().map(ScenarioKind::from_str), expected_kind) {
            (Some(Ok(k)), Some(e)) if k != e => {
                self.fail("kind", format!("file declares `{k}` but `{e}` was requested"));
                None
            }
            (Some(Ok(k)), _) => Some(k),
            (Some(Err(msg)), _) => {
                self.fail("kind", msg);
                None
            }
            (None, Some(e)) => Some(e),
            (None, None) => {
                self.fail("kind", "missing (expected neutron, ring, compare or sweep)");
                None
            }
        };

        let visibility = cfg.visibility.unwrap_or(DEFAULT_VISIBILITY);
        if !(0.0..=1.0).contains(&visibility) {
            self.fail("visibility", format!("must lie in [0, 1] (got {visibility})"));
        }

        let quadrature = match &cfg.grid {
            Some(g) => self.grid(g),
            None => {
                self.fail("grid", "missing section");
                None
            }
        };

        let field = match &cfg.field {
            Some(f) => self.field(f, cfg.ring.as_ref().map(|r| r.radius_m)),
            None => {
                self.fail("field", "missing section");
                None
            }
        };

        let target = match (&cfg.sweep, kind) {
            (Some(s), Some(ScenarioKind::Sweep)) => match s.target.as_deref().unwrap_or("neutron") {
                "neutron" => Some(ScenarioKind::Neutron),
                "compare" => Some(ScenarioKind::Compare),
                other => {
                    self.fail(
                        "sweep.target",
                        format!("must be neutron or compare (got `{other}`)"),
                    );
                    None
                }
            },
            _ => None,
        };

        let kind = kind?;
        let needs_neutron = kind.needs_neutron();
        let needs_ring = kind.needs_ring(target);

        match (&cfg.neutron, needs_neutron) {
            (None, true) => self.fail("neutron", format!("required for {kind} scenarios")),
            (Some(_), false) => self.fail("neutron", format!("not used by {kind} scenarios")),
            _ => {}
        }
        match (&cfg.ring, needs_ring) {
            (None, true) => self.fail("ring", format!("required for {kind} scenarios")),
            (Some(_), false) => self.fail("ring", format!("not used by {kind} scenarios")),
            _ => {}
        }
        match (&cfg.sweep, kind) {
            (None, ScenarioKind::Sweep) => self.fail("sweep", "required for sweep scenarios"),
            (Some(_), k) if k != ScenarioKind::Sweep => {
                self.fail("sweep", format!("not used by {k} scenarios"))
            }
            _ => {}
        }

        let direction = field.map(|f| f.direction()).unwrap_or(Vec3::Z);
        let neutron = match (&cfg.neutron, needs_neutron) {
            (Some(n), true) => self.neutron(n, direction),
            _ => None,
        };

        let ring_kind = target.unwrap_or(kind);
        let ring = match (&cfg.ring, needs_ring) {
            (Some(r), true) => self.ring(
                r,
                ring_kind,
                neutron.as_ref(),
                field.as_ref(),
                quadrature.as_ref(),
            ),
            _ => None,
        };

        let workers = cfg.sweep.as_ref().and_then(|s| s.workers);
        if workers == Some(0) {
            self.fail("sweep.workers", "must be at least 1");
        }

        let output_dir = cfg
            .output
            .as_ref()
            .and_then(|o| o.dir.as_ref())
            .map(PathBuf::from);

        let (field, quadrature) = (field?, quadrature?);
        if needs_neutron && neutron.is_none() || needs_ring && ring.is_none() {
            return None;
        }

        let base = Scenario {
            id,
            kind: target.unwrap_or(kind),
            field,
            quadrature,
            visibility,
            neutron,
            ring,
            sweep: None,
            workers,
            output_dir,
        };
        if kind != ScenarioKind::Sweep {
            return Some(base);
        }
        let sweep = self.sweep(cfg.sweep.as_ref()?, target?, &base)?;
        Some(Scenario {
            kind: ScenarioKind::Sweep,
            sweep: Some(sweep),
            ..base
        })
    }

    fn grid(&mut self, g: &GridConfig) -> Option<QuadratureSpec> {
        let t_start = g.t_start_s.unwrap_or(0.0);
        let n_steps = g.n_steps.unwrap_or(DEFAULT_STEPS);
        let tolerance = g.tolerance.unwrap_or(DEFAULT_ACTION_TOLERANCE);
        let method = match g.method.as_deref().unwrap_or("simpson") {
            "simpson" => Some(QuadratureMethod::Simpson),
            "trapezoid" => Some(QuadratureMethod::Trapezoid),
            other => {
                self.fail(
                    "grid.method",
                    format!("must be simpson or trapezoid (got `{other}`)"),
                );
                None
            }
        };
        let mut ok = self.finite("grid.t_start_s", t_start) & self.finite("grid.t_end_s", g.t_end_s);
        if ok && g.t_end_s <= t_start {
            self.fail("grid.t_end_s", "must be after grid.t_start_s");
            ok = false;
        }
        if n_steps < 2 {
            self.fail("grid.n_steps", format!("must be at least 2 (got {n_steps})"));
            ok = false;
        }
        if method == Some(QuadratureMethod::Simpson) && !n_steps.is_multiple_of(2) {
            self.fail(
                "grid.n_steps",
                format!("simpson quadrature needs an even step count (got {n_steps})"),
            );
            ok = false;
        }
        ok &= self.positive("grid.tolerance", tolerance);
        if !ok {
            return None;
        }
        let grid = TimeGrid::new(t_start, g.t_end_s, n_steps).ok()?;
        QuadratureSpec::new(method?, grid, tolerance).ok()
    }

    fn field(&mut self, f: &FieldConfig, ring_radius: Option<f64>) -> Option<FieldModel> {
        self.finite("field.bmax_t", f.bmax_t);
        let start = f.start_s.unwrap_or(0.0);
        let allowed: &[&str] = match f.profile.as_str() {
            "constant" => &[],
            "linear-ramp" => &["start_s", "end_s"],
            "raised-cosine" => &["start_s", "duration_s"],
            "smoothed-rectangle" => &["start_s", "rise_s", "hold_s"],
            other => {
                self.fail(
                    "field.profile",
                    format!("unknown profile `{other}` (expected constant, linear-ramp, raised-cosine or smoothed-rectangle)"),
                );
                return None;
            }
        };
        for (key, present) in [
            ("start_s", f.start_s.is_some()),
            ("end_s", f.end_s.is_some()),
            ("duration_s", f.duration_s.is_some()),
            ("rise_s", f.rise_s.is_some()),
            ("hold_s", f.hold_s.is_some()),
        ] {
            if present && !allowed.contains(&key) {
                self.fail(
                    &format!("field.{key}"),
                    format!("not used by the {} profile", f.profile),
                );
            }
        }
        let need = |v: &mut Self, key: &str, value: Option<f64>| -> Option<f64> {
            match value {
                Some(x) => Some(x),
                None => {
                    v.fail(
                        &format!("field.{key}"),
                        format!("required by the {} profile", f.profile),
                    );
                    None
                }
            }
        };
        let profile = match f.profile.as_str() {
            "constant" => Some(PulseProfile::Constant { amplitude: f.bmax_t }),
            "linear-ramp" => need(self, "end_s", f.end_s).map(|end| PulseProfile::LinearRamp {
                amplitude: f.bmax_t,
                start,
                end,
            }),
            "raised-cosine" => {
                need(self, "duration_s", f.duration_s).map(|duration| PulseProfile::RaisedCosine {
                    amplitude: f.bmax_t,
                    start,
                    duration,
                })
            }
            _ => {
                let rise = need(self, "rise_s", f.rise_s);
                let hold = need(self, "hold_s", f.hold_s);
                rise.zip(hold)
                    .map(|(rise, hold)| PulseProfile::SmoothedRectangle {
                        amplitude: f.bmax_t,
                        start,
                        rise,
                        hold,
                    })
            }
        };
        let direction = self.unit("field.direction", f.direction.unwrap_or([0.0, 0.0, 1.0]));

        let gradient = f.gradient_t_per_m.unwrap_or(0.0);
        let region = f
            .region_m
            .or(ring_radius.map(|r| 2.0 * r))
            .unwrap_or(DEFAULT_REGION_M);
        let tol = f.uniformity_tolerance.unwrap_or(DEFAULT_UNIFORMITY_TOLERANCE);
        if self.finite("field.gradient_t_per_m", gradient) && gradient != 0.0 {
            let variation = gradient.abs() * region;
            if variation > tol * f.bmax_t.abs() {
                self.fail(
                    "field.gradient_t_per_m",
                    format!(
                        "field must be spatially uniform: variation {variation:.3e} T over {region:.3e} m exceeds {tol:.1e} of bmax"
                    ),
                );
            }
        }

        let profile = profile?;
        if let Err(e) = profile.validate() {
            self.fail("field", e.to_string());
            return None;
        }
        FieldModel::new(profile, direction?).ok()
    }

    fn neutron(&mut self, n: &NeutronConfig, direction: Vec3) -> Option<NeutronState> {
        let mass = n.mass_kg.unwrap_or(NEUTRON_MASS);
        let moment = n.moment_j_per_t.unwrap_or(NEUTRON_MOMENT);
        let mut ok = self.positive("neutron.mass_kg", mass);
        if !(moment >= 0.0 && moment.is_finite()) {
            self.fail(
                "neutron.moment_j_per_t",
                format!("must be a finite magnitude >= 0 (got {moment})"),
            );
            ok = false;
        }
        let v = Vec3::from(n.velocity_m_per_s);
        if !v.is_finite() {
            self.fail("neutron.velocity_m_per_s", "must be finite");
            ok = false;
        } else if v.norm() >= 0.01 * SPEED_OF_LIGHT {
            self.fail(
                "neutron.velocity_m_per_s",
                format!(
                    "speed {:.3e} m/s violates the nonrelativistic limit 0.01c",
                    v.norm()
                ),
            );
            ok = false;
        }
        let spin = match SpinSign::from_sign(n.spin_sign.unwrap_or(1)) {
            Some(s) => Some(s),
            None => {
                self.fail("neutron.spin_sign", "must be +1 or -1");
                None
            }
        };
        if !ok {
            return None;
        }
        NeutronState::with_parameters(mass, moment, v, spin?, direction).ok()
    }

    fn ring(
        &mut self,
        r: &RingConfig,
        kind: ScenarioKind,
        neutron: Option<&NeutronState>,
        field: Option<&FieldModel>,
        quadrature: Option<&QuadratureSpec>,
    ) -> Option<RingSetup> {
        let mut ok = self.positive("ring.radius_m", r.radius_m);
        ok &= self.positive("ring.fluid_mass_kg", r.fluid_mass_kg);
        if !(r.device_mass_kg.is_finite() && r.device_mass_kg >= r.fluid_mass_kg) {
            self.fail(
                "ring.device_mass_kg",
                "must be finite and at least ring.fluid_mass_kg",
            );
            ok = false;
        }
        if !(r.fluid_speed_m_per_s.is_finite() && r.fluid_speed_m_per_s != 0.0) {
            self.fail(
                "ring.fluid_speed_m_per_s",
                "fluid must be circulating (nonzero, finite speed)",
            );
            ok = false;
        }
        let axial = r.axial_speed_m_per_s.unwrap_or(0.0);
        ok &= self.finite("ring.axial_speed_m_per_s", axial);
        let center = Vec3::from(r.center_m.unwrap_or([0.0; 3]));
        if !center.is_finite() {
            self.fail("ring.center_m", "must be finite");
            ok = false;
        }
        let n_segments = r.n_segments.unwrap_or(DEFAULT_SEGMENTS);
        if n_segments < 8 {
            self.fail(
                "ring.n_segments",
                format!("must be at least 8 (got {n_segments})"),
            );
            ok = false;
        }
        let energy_tolerance = r.energy_tolerance.unwrap_or(DEFAULT_ENERGY_TOLERANCE);
        ok &= self.positive("ring.energy_tolerance", energy_tolerance);
        let axis = match r.axis {
            Some(a) => self.unit("ring.axis", a),
            None => Some(Vec3::Z),
        };

        if let (Some(f), Some(q)) = (field, quadrature) {
            let b0 = f.magnitude_at(q.grid().t_start());
            if b0.abs() > 1e-12 * f.profile().amplitude().abs() {
                self.fail(
                    "field",
                    format!("field must vanish at start for ring runs (B(T0) = {b0:e} T at grid.t_start_s)"),
                );
            }
        }

        let device = match (kind, r.current_a) {
            (ScenarioKind::Ring, None) => {
                self.fail("ring.current_a", "required for ring scenarios");
                return None;
            }
            (_, Some(i)) => {
                ok &= self.finite("ring.current_a", i);
                if !ok {
                    return None;
                }
                let axis = axis?;
                RingDevice::new(
                    r.radius_m,
                    i,
                    r.device_mass_kg,
                    r.fluid_mass_kg,
                    r.fluid_speed_m_per_s,
                )
                .and_then(|d| d.with_axis(axis))
                .ok()?
            }
            (_, None) => {
                let mu = neutron?.moment();
                if r.axis.is_some() {
                    self.fail(
                        "ring.axis",
                        "set by the neutron moment when ring.current_a is omitted",
                    );
                    return None;
                }
                if !ok {
                    return None;
                }
                RingDevice::matched_to(
                    mu,
                    r.radius_m,
                    r.device_mass_kg,
                    r.fluid_mass_kg,
                    r.fluid_speed_m_per_s,
                )
                .ok()?
            }
        };
        if !ok {
            return None;
        }
        let device = device
            .with_axial_speed(axial)
            .and_then(|d| d.with_center(center))
            .ok()?;

        if kind == ScenarioKind::Compare {
            if let Some(n) = neutron {
                let (mu_n, mu_r) = (n.moment(), ring_moment(&device));
                if (mu_n - mu_r).norm() > 1e-9 * mu_n.norm().max(mu_r.norm()) {
                    self.fail(
                        "ring.current_a",
                        "ring moment must match the neutron moment in compare scenarios (omit current_a to match automatically)",
                    );
                    return None;
                }
            }
        }
        Some(RingSetup {
            device,
            n_segments,
            energy_tolerance,
        })
    }

    fn sweep(&mut self, s: &SweepConfig, target: ScenarioKind, base: &Scenario) -> Option<Sweep> {
        if s.parameter != "bmax_t" {
            self.fail(
                "sweep.parameter",
                format!("unsupported parameter `{}` (supported: bmax_t)", s.parameter),
            );
            return None;
        }
        if s.values.is_empty() {
            self.fail("sweep.values", "must list at least one value");
            return None;
        }
        if let Some(bad) = s.values.iter().find(|v| !v.is_finite()) {
            self.fail("sweep.values", format!("values must be finite (got {bad})"));
            return None;
        }
        let runs = s
            .values
            .iter()
            .enumerate()
            .map(|(k, &value)| SubRun {
                value,
                scenario: Scenario {
                    id: format!("{}-{k:03}", base.id),
                    kind: target,
                    field: base.field.with_amplitude(value),
                    ..base.clone()
                },
            })
            .collect();
        Some(Sweep {
            parameter: s.parameter.clone(),
            target,
            runs,
        })
    }
}
