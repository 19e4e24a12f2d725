use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{output, Scenario, ScenarioKind, SubRun};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::fields::field_at;
use crate::integrate::fit_line;
use crate::neutron::{
    accumulate_action_with, cumulative_action, fringe_intensity, neutron_lagrangian, phase_shift,
    NeutronState,
};
use crate::ring::{
    compare_quantum_classical_with, evolve_fluid_energy_with, interaction_analytic,
    interaction_line_integral, RingRunResult, CLASSICAL_INVARIANCE_TOLERANCE, QUANTUM_ACTION_THRESHOLD,
};
use crate::scenario::RingSetup;

/// One summary row per scenario. Fields that do not apply to the
/// scenario's kind are `None` (an empty CSV cell).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub id: String,
    pub kind: String,
    pub pulse_area_t_s: f64,
    pub action_j_s: Option<f64>,
    pub kinetic_action_j_s: Option<f64>,
    pub magnetic_action_j_s: Option<f64>,
    pub delta_action_quantum_j_s: Option<f64>,
    pub phase_shift_rad: Option<f64>,
    pub fringe_intensity: Option<f64>,
    pub classical_lagrangian_initial_j: Option<f64>,
    pub max_lagrangian_deviation: Option<f64>,
    pub classical_action_j_s: Option<f64>,
    pub delta_action_classical_j_s: Option<f64>,
    pub kinetic_fluid_initial_j: Option<f64>,
    pub kinetic_fluid_final_j: Option<f64>,
    /// Relative gap between the loop line integral and `μ·B` at peak field.
    pub stokes_relative_error: Option<f64>,
    pub quantum_depends: Option<bool>,
    pub classical_invariant: Option<bool>,
    /// Fitted `dφ/d(area)` over a sweep.
    pub phase_slope_rad_per_t_s: Option<f64>,
    /// `μ_z/ħ`, the slope a sweep should reproduce.
    pub expected_slope_rad_per_t_s: Option<f64>,
    pub wall_time_s: f64,
}

impl RunSummary {
    /// All numeric fields finite.
    pub fn is_finite(&self) -> bool {
        let opts = [
            self.action_j_s,
            self.kinetic_action_j_s,
            self.magnetic_action_j_s,
            self.delta_action_quantum_j_s,
            self.phase_shift_rad,
            self.fringe_intensity,
            self.classical_lagrangian_initial_j,
            self.max_lagrangian_deviation,
            self.classical_action_j_s,
            self.delta_action_classical_j_s,
            self.kinetic_fluid_initial_j,
            self.kinetic_fluid_final_j,
            self.stokes_relative_error,
            self.phase_slope_rad_per_t_s,
            self.expected_slope_rad_per_t_s,
        ];
        self.pulse_area_t_s.is_finite()
            && self.wall_time_s.is_finite()
            && opts.iter().flatten().all(|v| v.is_finite())
    }
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "scenario {} ({})", self.id, self.kind)?;
        writeln!(f, "  pulse area               {:.6e} T·s", self.pulse_area_t_s)?;
        let rows: [(&str, Option<f64>, &str); 15] = [
            ("neutron action", self.action_j_s, "J·s"),
            ("  kinetic part", self.kinetic_action_j_s, "J·s"),
            ("  magnetic part", self.magnetic_action_j_s, "J·s"),
            ("quantum ΔS", self.delta_action_quantum_j_s, "J·s"),
            ("phase shift", self.phase_shift_rad, "rad"),
            ("fringe intensity", self.fringe_intensity, ""),
            ("classical L(T0)", self.classical_lagrangian_initial_j, "J"),
            ("max |L-L0|/|L0|", self.max_lagrangian_deviation, ""),
            ("classical action", self.classical_action_j_s, "J·s"),
            ("classical ΔS", self.delta_action_classical_j_s, "J·s"),
            ("fluid KE initial", self.kinetic_fluid_initial_j, "J"),
            ("fluid KE final", self.kinetic_fluid_final_j, "J"),
            ("Stokes rel. error", self.stokes_relative_error, ""),
            ("fitted phase slope", self.phase_slope_rad_per_t_s, "rad/(T·s)"),
            ("expected slope", self.expected_slope_rad_per_t_s, "rad/(T·s)"),
        ];
        for (label, value, unit) in rows {
            if let Some(v) = value {
                writeln!(f, "  {label:<24} {v:.6e} {unit}")?;
            }
        }
        if let Some(q) = self.quantum_depends {
            writeln!(
                f,
                "  quantum action depends on field:   {}",
                if q { "yes" } else { "no" }
            )?;
        }
        if let Some(c) = self.classical_invariant {
            writeln!(
                f,
                "  classical action field-invariant:  {}",
                if c { "yes" } else { "no" }
            )?;
        }
        write!(f, "  wall time {:.3} s", self.wall_time_s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeutronRow {
    pub t_s: f64,
    pub b_t: f64,
    pub lagrangian_j: f64,
    pub kinetic_j: f64,
    pub interaction_j: f64,
    pub action_j_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingRow {
    pub t_s: f64,
    pub b_t: f64,
    pub lagrangian_j: f64,
    pub kinetic_j: f64,
    pub interaction_j: f64,
    pub action_j_s: f64,
    pub kinetic_fluid_j: f64,
    pub v_perp_m_per_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub bmax_t: f64,
    pub pulse_area_t_s: f64,
    pub delta_action_j_s: f64,
    pub phase_rad: f64,
    pub fringe_intensity: f64,
    pub classical_relative_delta: Option<f64>,
}

/// Everything a run produced, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub summary: RunSummary,
    pub neutron_series: Option<Vec<NeutronRow>>,
    pub ring_series: Option<Vec<RingRow>>,
    pub sweep_rows: Option<Vec<SweepRow>>,
}

/// Run a scenario without touching the filesystem. Sweep sub-runs use up
/// to `workers` threads (the scenario's own setting, else rayon's default).
pub fn execute(scenario: &Scenario, workers: Option<usize>) -> Result<RunRecord> {
    let started = Instant::now();
    let mut record = match scenario.kind {
        ScenarioKind::Sweep => execute_sweep(scenario, workers.or(scenario.workers)),
        _ => execute_single(scenario),
    }
    .map_err(|e| e.in_scenario(&scenario.id))?;
    record.summary.wall_time_s = started.elapsed().as_secs_f64();
    if !record.summary.is_finite() {
        return Err(Error::Numerical("summary contains non-finite values".into()).in_scenario(&scenario.id));
    }
    Ok(record)
}

/// Execute and write the CSV outputs into `out_dir`.
pub fn run(scenario: &Scenario, out_dir: &Path, workers: Option<usize>) -> Result<RunSummary> {
    let record = execute(scenario, workers)?;
    output::write_outputs(&record, out_dir)?;
    Ok(record.summary)
}

fn base_summary(scenario: &Scenario) -> RunSummary {
    let grid = scenario.grid();
    RunSummary {
        id: scenario.id.clone(),
        kind: scenario.kind.as_str().into(),
        pulse_area_t_s: scenario.field.pulse_area(grid.t_start(), grid.t_end()),
        ..Default::default()
    }
}

fn execute_single(scenario: &Scenario) -> Result<RunRecord> {
    let mut summary = base_summary(scenario);
    let mut neutron_series = None;
    let mut ring_series = None;

    if let Some(neutron) = &scenario.neutron {
        let on = accumulate_action_with(neutron, &scenario.field, &scenario.quadrature)?;
        let off = accumulate_action_with(neutron, &scenario.field.switched_off(), &scenario.quadrature)?;
        let phase = phase_shift(&on, &off)?;
        let delta = phase * HBAR;
        summary.action_j_s = Some(on.action);
        summary.kinetic_action_j_s = Some(on.kinetic_action);
        summary.magnetic_action_j_s = Some(on.magnetic_action);
        summary.delta_action_quantum_j_s = Some(delta);
        summary.phase_shift_rad = Some(phase);
        summary.fringe_intensity = Some(fringe_intensity(phase, scenario.visibility)?);
        summary.quantum_depends = Some(delta.abs() > QUANTUM_ACTION_THRESHOLD);
        neutron_series = Some(neutron_rows(scenario, neutron)?);
    }

    if let Some(setup) = &scenario.ring {
        let (run, s_on, delta_c) = match (scenario.kind, &scenario.neutron) {
            (ScenarioKind::Compare, Some(neutron)) => {
                let report = compare_quantum_classical_with(
                    neutron,
                    &setup.device,
                    &scenario.field,
                    &scenario.quadrature,
                    setup.energy_tolerance,
                )?;
                summary.quantum_depends = Some(report.quantum_depends);
                (
                    report.ring_run,
                    report.classical_action,
                    report.delta_action_classical,
                )
            }
            _ => {
                let grid = scenario.grid();
                let on =
                    evolve_fluid_energy_with(&setup.device, &scenario.field, grid, setup.energy_tolerance)?;
                let off = evolve_fluid_energy_with(
                    &setup.device,
                    &scenario.field.switched_off(),
                    grid,
                    setup.energy_tolerance,
                )?;
                let s_on = on.classical_action()?;
                let delta = s_on - off.classical_action()?;
                (on, s_on, delta)
            }
        };
        summary.classical_lagrangian_initial_j = Some(run.initial().lagrangian_total);
        summary.max_lagrangian_deviation = Some(run.max_lagrangian_deviation());
        summary.classical_action_j_s = Some(s_on);
        summary.delta_action_classical_j_s = Some(delta_c);
        summary.kinetic_fluid_initial_j = Some(run.initial().kinetic_fluid);
        summary.kinetic_fluid_final_j = Some(run.last().kinetic_fluid);
        summary.classical_invariant = Some(delta_c.abs() <= CLASSICAL_INVARIANCE_TOLERANCE * s_on.abs());
        summary.stokes_relative_error = stokes_check(scenario, setup, &run)?;
        ring_series = Some(ring_rows(&run));
    }

    Ok(RunRecord {
        summary,
        neutron_series,
        ring_series,
        sweep_rows: None,
    })
}

fn neutron_rows(scenario: &Scenario, neutron: &NeutronState) -> Result<Vec<NeutronRow>> {
    let grid = scenario.grid();
    let field = &scenario.field;
    let cumulative = cumulative_action(neutron, field, grid)?;
    let kinetic = neutron.kinetic_energy();
    Ok(grid
        .times()
        .zip(cumulative)
        .map(|(t, action)| NeutronRow {
            t_s: t,
            b_t: field.magnitude_at(t),
            lagrangian_j: neutron_lagrangian(neutron, field, t),
            kinetic_j: kinetic,
            interaction_j: neutron.moment().dot(field_at(field, t)),
            action_j_s: action,
        })
        .collect())
}

fn ring_rows(run: &RingRunResult) -> Vec<RingRow> {
    run.samples
        .iter()
        .zip(run.cumulative_action())
        .map(|(s, action)| RingRow {
            t_s: s.t,
            b_t: s.field,
            lagrangian_j: s.lagrangian_total,
            kinetic_j: run.axial_kinetic + s.kinetic_fluid,
            interaction_j: s.interaction,
            action_j_s: action,
            kinetic_fluid_j: s.kinetic_fluid,
            v_perp_m_per_s: s.v_perp,
        })
        .collect()
}

/// Line integral against `μ·B` at the sample with the largest field.
fn stokes_check(scenario: &Scenario, setup: &RingSetup, run: &RingRunResult) -> Result<Option<f64>> {
    let peak = run
        .samples
        .iter()
        .max_by(|a, b| a.field.abs().total_cmp(&b.field.abs()))
        .expect("runs are never empty");
    let analytic = interaction_analytic(&setup.device, &scenario.field, peak.t);
    if analytic == 0.0 {
        return Ok(None);
    }
    let numeric = interaction_line_integral(&setup.device, &scenario.field, peak.t, setup.n_segments)?;
    Ok(Some((numeric - analytic).abs() / analytic.abs()))
}

fn execute_sweep(scenario: &Scenario, workers: Option<usize>) -> Result<RunRecord> {
    let sweep = scenario
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep scenario without sweep runs".into()))?;
    let one = |sub: &SubRun| -> Result<(f64, RunSummary)> {
        execute_single(&sub.scenario)
            .map(|r| (sub.value, r.summary))
            .map_err(|e| e.in_scenario(&sub.scenario.id))
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(f64, RunSummary)> =
        pool.install(|| sweep.runs.par_iter().map(one).collect::<Result<_>>())?;

    let rows: Vec<SweepRow> = results
        .iter()
        .map(|(value, s)| SweepRow {
            bmax_t: *value,
            pulse_area_t_s: s.pulse_area_t_s,
            delta_action_j_s: s.delta_action_quantum_j_s.unwrap_or(0.0),
            phase_rad: s.phase_shift_rad.unwrap_or(0.0),
            fringe_intensity: s.fringe_intensity.unwrap_or(0.0),
            classical_relative_delta: s
                .delta_action_classical_j_s
                .zip(s.classical_action_j_s)
                .map(|(d, a)| d.abs() / a.abs()),
        })
        .collect();

    let mut summary = base_summary(scenario);
    let areas: Vec<f64> = rows.iter().map(|r| r.pulse_area_t_s).collect();
    let phases: Vec<f64> = rows.iter().map(|r| r.phase_rad).collect();
    summary.phase_slope_rad_per_t_s = fit_line(&areas, &phases).map(|(slope, _)| slope);
    if let Some(n) = &scenario.neutron {
        summary.expected_slope_rad_per_t_s = Some(n.moment().dot(scenario.field.direction()) / HBAR);
    }
    summary.quantum_depends = Some(results.iter().all(|(_, s)| s.quantum_depends == Some(true)));
    if sweep.target == ScenarioKind::Compare {
        summary.classical_invariant = Some(results.iter().all(|(_, s)| s.classical_invariant == Some(true)));
        summary.max_lagrangian_deviation = results
            .iter()
            .filter_map(|(_, s)| s.max_lagrangian_deviation)
            .reduce(f64::max);
    }
    Ok(RunRecord {
        summary,
        neutron_series: None,
        ring_series: None,
        sweep_rows: Some(rows),
    })
}
