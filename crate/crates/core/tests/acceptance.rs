//! Acceptance criteria 1-7. Runs without the libtest harness so that each
//! criterion prints exactly one PASS/FAIL line, in order.
//!
//!     cargo test -p inertphase-core --test acceptance

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use inertphase::constants::{HBAR, NEUTRON_MOMENT};
use inertphase::integrate::{integrate_time, simpson, step_ode, QuadratureMethod, QuadratureSpec};
use inertphase::neutron::accumulate_action;
use inertphase::ring::{
    evolve_fluid_energy, interaction_line_integral, interaction_line_integral_in_gauge, ring_moment,
};
use inertphase::scenario::{execute, parse_scenario};
use inertphase::{
    compare_quantum_classical, induced_power, interaction_analytic, phase_shift, ErrorKind, FieldModel,
    NeutronState, PulseProfile, RingDevice, SpinSign, TimeGrid, Vec3,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Outcome);

// Tolerances, one per quantity checked.
const STOKES_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-9;
const LAGRANGIAN_TOL: f64 = 1e-6;
const ACTION_TOL: f64 = 1e-6;
const MAGNETIC_ACTION_TOL: f64 = 1e-10;
const SLOPE_TOL: f64 = 1e-8;
const CLASSICAL_INVARIANCE_TOL: f64 = 1e-6;
const QUANTUM_SHIFT_TOL: f64 = 1e-9;
const ORDER_RATIO: f64 = 16.0;
const ORDER_FACTOR: f64 = 2.0;
const GAUGE_TOL: f64 = 1e-9;

const SEED: u64 = 0x001e_2019_c0ab;
const STOKES_SEGMENTS: usize = 1024;
const RUN_STEPS: usize = 4096;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        // Bound first so that a NaN comparison counts as a failure.
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+).into());
        }
    };
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream)
}

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

fn random_ring(rng: &mut ChaCha8Rng, b_max: f64) -> RingDevice {
    let a = rng.random_range(0.01..1.0);
    let current: f64 = rng.random_range(-10.0..10.0);
    let fluid_mass = rng.random_range(0.5..2.0);
    let device_mass = fluid_mass * rng.random_range(1.0..5.0);
    // Keep the fluid well clear of stalling.
    let coupling = PI * a * a * current.abs() * b_max;
    let ke0 = rng.random_range(2.0..10.0) * coupling + 1.0;
    let fluid_speed = (2.0 * ke0 / fluid_mass).sqrt();
    let center = Vec3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    RingDevice::new(a, current, device_mass, fluid_mass, fluid_speed)
        .and_then(|r| r.with_axis(unit_vector(rng)))
        .and_then(|r| r.with_center(center))
        .and_then(|r| r.with_axial_speed(rng.random_range(-3.0..3.0)))
        .expect("random ring is valid")
}

/// One profile of each shape on `[0, scale]`. Knots are deliberately off
/// any power-of-two grid. `Constant` has amplitude `constant`.
fn catalogue(amplitude: f64, scale: f64, constant: f64) -> Vec<PulseProfile> {
    vec![
        PulseProfile::Constant { amplitude: constant },
        PulseProfile::LinearRamp {
            amplitude,
            start: 0.2 * scale,
            end: 0.55 * scale,
        },
        PulseProfile::RaisedCosine {
            amplitude,
            start: 0.1234 * scale,
            duration: 0.6 * scale,
        },
        PulseProfile::SmoothedRectangle {
            amplitude,
            start: 0.1 * scale,
            rise: 0.15 * scale,
            hold: 0.33 * scale,
        },
    ]
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Least-squares slope, written out here rather than borrowed from the crate.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn criterion_1() -> Outcome {
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let ring = random_ring(&mut rng, 5.0);
        let b = rng.random_range(-5.0..5.0);
        let field = FieldModel::new(PulseProfile::Constant { amplitude: b }, unit_vector(&mut rng))?;
        let t = rng.random_range(0.0..1.0);
        let line = interaction_line_integral(&ring, &field, t, STOKES_SEGMENTS)?;
        let exact = ring_moment(&ring).dot(field.direction() * b);
        let err = relative(line, exact);
        ensure!(
            err <= STOKES_TOL,
            "line integral {line:e} vs mu.B {exact:e}: rel {err:e}"
        );
        worst = worst.max(err);
    }
    Ok(format!("20 rings, worst relative error {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let mut rng = rng(2);
    let grid = TimeGrid::new(0.0, 1.0, RUN_STEPS)?;
    let mut worst = 0.0f64;
    let mut worst_restore = 0.0f64;
    let mut shapes = 0;
    for profile in catalogue(5.0, 1.0, 0.0).into_iter().filter(|p| p.is_c1()) {
        shapes += 1;
        for _ in 0..10 {
            let ring = random_ring(&mut rng, 5.0);
            let field = FieldModel::new(profile, unit_vector(&mut rng))?;
            let run = evolve_fluid_energy(&ring, &field, &grid)?;
            let ke0 = run.initial().kinetic_fluid;
            let mu = ring_moment(&ring);
            for s in &run.samples {
                let residual =
                    (s.kinetic_fluid + mu.dot(field.direction() * field.magnitude_at(s.t)) - ke0).abs() / ke0;
                ensure!(
                    residual <= CLOSED_FORM_TOL,
                    "{}: KE + mu.B drifts by {residual:e} at t = {}",
                    profile.kind_name(),
                    s.t
                );
                worst = worst.max(residual);
            }
            if profile.value(grid.t_end()) == 0.0 {
                let restore = relative(run.last().kinetic_fluid, ke0);
                ensure!(
                    restore <= CLOSED_FORM_TOL,
                    "{}: KE not restored ({restore:e})",
                    profile.kind_name()
                );
                worst_restore = worst_restore.max(restore);
            }
        }
    }
    Ok(format!(
        "{shapes} C1 shapes x 10 rings, worst residual {worst:.2e}, worst restoration {worst_restore:.2e}"
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = rng(3);
    let grid = TimeGrid::new(0.0, 1.0, RUN_STEPS)?;
    let (mut worst_l, mut worst_s) = (0.0f64, 0.0f64);
    for profile in catalogue(5.0, 1.0, 0.0) {
        for _ in 0..10 {
            let ring = random_ring(&mut rng, 5.0);
            let field = FieldModel::new(profile, unit_vector(&mut rng))?;
            let run = evolve_fluid_energy(&ring, &field, &grid)?;
            let l0 = run.initial().lagrangian_total;
            let dev = run
                .samples
                .iter()
                .map(|s| (s.lagrangian_total - l0).abs() / l0.abs())
                .fold(0.0, f64::max);
            ensure!(
                dev <= LAGRANGIAN_TOL,
                "{}: L(t) deviates by {dev:e}",
                profile.kind_name()
            );
            let s = relative(run.classical_action()?, l0 * grid.duration());
            ensure!(
                s <= ACTION_TOL,
                "{}: action vs L0*T rel {s:e}",
                profile.kind_name()
            );
            worst_l = worst_l.max(dev);
            worst_s = worst_s.max(s);
        }
    }
    // A constant field is already on at the start, which the ring run refuses.
    let ring = random_ring(&mut rng, 5.0);
    let on = FieldModel::along_z(PulseProfile::Constant { amplitude: 1.0 })?;
    let refused = evolve_fluid_energy(&ring, &on, &grid).map_err(|e| e.kind());
    ensure!(
        refused == Err(ErrorKind::Config),
        "nonzero constant field accepted at start"
    );
    Ok(format!(
        "4 shapes x 10 rings, worst |L-L0|/|L0| {worst_l:.2e}, worst action error {worst_s:.2e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let scale = 1e-3;
    let grid = TimeGrid::new(0.0, scale, RUN_STEPS)?;
    let mut worst = 0.0f64;
    for profile in catalogue(1e-3, scale, 1e-3) {
        for spin in [SpinSign::Parallel, SpinSign::Antiparallel] {
            let field = FieldModel::new(profile, unit_vector(&mut rng))?;
            let neutron = NeutronState::new(unit_vector(&mut rng) * 2000.0, spin, field.direction())?;
            let path = accumulate_action(&neutron, &field, &grid)?;
            let mu_z = neutron.moment().dot(field.direction());
            let exact = mu_z * profile.area(0.0, scale);
            let err = relative(path.magnetic_action, exact);
            ensure!(
                err <= MAGNETIC_ACTION_TOL,
                "{}: magnetic action {:e} vs {exact:e}, rel {err:e}",
                profile.kind_name(),
                path.magnetic_action
            );
            worst = worst.max(err);
        }
    }

    let expected = NEUTRON_MOMENT / HBAR;
    let scenario = parse_scenario(
        include_str!("../../../scenarios/sweep_amplitude.toml"),
        "sweep",
        None,
    )?;
    let rows = execute(&scenario, Some(2))?
        .sweep_rows
        .ok_or("sweep produced no rows")?;
    ensure!(rows.len() == 5, "expected 5 sweep points, got {}", rows.len());
    let areas: Vec<f64> = rows.iter().map(|r| r.pulse_area_t_s).collect();
    let phases: Vec<f64> = rows.iter().map(|r| r.phase_rad).collect();
    let fitted = slope(&areas, &phases);
    let slope_err = relative(fitted, expected);
    ensure!(
        slope_err <= SLOPE_TOL,
        "sweep slope {fitted:e} vs mu/hbar {expected:e}, rel {slope_err:e}"
    );

    // Same on a C0 shape through the library directly.
    let base = catalogue(1.0, scale, 0.0)[1];
    let neutron = NeutronState::new(Vec3::new(0.0, 0.0, 2000.0), SpinSign::Parallel, Vec3::Z)?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 1..=5 {
        let field = FieldModel::along_z(base.with_amplitude(2e-4 * k as f64))?;
        let on = accumulate_action(&neutron, &field, &grid)?;
        let off = accumulate_action(&neutron, &field.switched_off(), &grid)?;
        xs.push(field.pulse_area(0.0, scale));
        ys.push(phase_shift(&on, &off)?);
    }
    let ramp_err = relative(slope(&xs, &ys), expected);
    ensure!(ramp_err <= SLOPE_TOL, "ramp sweep slope rel error {ramp_err:e}");

    Ok(format!(
        "worst magnetic-action error {worst:.2e}, sweep slope error {slope_err:.2e} (ramp {ramp_err:.2e})"
    ))
}

fn criterion_5() -> Outcome {
    let scenario = parse_scenario(
        include_str!("../../../scenarios/compare_pulse.toml"),
        "compare",
        None,
    )?;
    let s = execute(&scenario, None)?.summary;
    let dq = s.delta_action_quantum_j_s.ok_or("no quantum shift")?;
    let dc = s.delta_action_classical_j_s.ok_or("no classical shift")?;
    let sc = s.classical_action_j_s.ok_or("no classical action")?;
    let expected = NEUTRON_MOMENT * s.pulse_area_t_s;
    ensure!(dq.abs() > 0.0, "quantum action shift is zero");
    let q_err = relative(dq.abs(), expected);
    ensure!(
        q_err <= QUANTUM_SHIFT_TOL,
        "|dS_q| {dq:e} vs |mu_z| area {expected:e}"
    );
    let c_rel = dc.abs() / sc.abs();
    ensure!(c_rel <= CLASSICAL_INVARIANCE_TOL, "|dS_c|/|S_c| = {c_rel:e}");
    ensure!(
        s.quantum_depends == Some(true),
        "verdict: quantum phase reported field-independent"
    );
    ensure!(
        s.classical_invariant == Some(true),
        "verdict: classical action reported field-dependent"
    );

    // Every shape that starts from zero field, through the library.
    let scale = 1e-3;
    let grid = TimeGrid::new(0.0, scale, RUN_STEPS)?;
    let neutron = NeutronState::new(Vec3::new(0.0, 0.0, 2000.0), SpinSign::Antiparallel, Vec3::Z)?;
    let ring = RingDevice::matched_to(neutron.moment(), 1e-3, 1e-3, 1e-4, 0.5)?;
    let mut worst_c = c_rel;
    for profile in catalogue(1e-3, scale, 0.0).into_iter().skip(1) {
        let field = FieldModel::along_z(profile)?;
        let r = compare_quantum_classical(&neutron, &ring, &field, &grid)?;
        let err = relative(r.delta_action_quantum.abs(), NEUTRON_MOMENT * r.pulse_area.abs());
        ensure!(
            err <= QUANTUM_SHIFT_TOL,
            "{}: |dS_q| rel error {err:e}",
            profile.kind_name()
        );
        ensure!(
            r.quantum_depends && r.classical_invariant,
            "{}: wrong verdict",
            profile.kind_name()
        );
        worst_c = worst_c.max(r.delta_action_classical.abs() / r.classical_action.abs());
    }
    Ok(format!(
        "quantum depends on the field (dS_q = {dq:.4e} J s), classical invariant (worst |dS_c|/|S_c| {worst_c:.2e})"
    ))
}

fn ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

fn in_band(r: f64) -> bool {
    (ORDER_RATIO / ORDER_FACTOR..=ORDER_RATIO * ORDER_FACTOR).contains(&r)
}

fn criterion_6() -> Outcome {
    // y' = y cos t, y(0) = 1 -> y = exp(sin t).
    let exact = 2f64.sin().exp();
    let mut ode_errors = Vec::new();
    for n in [16, 32, 64, 128] {
        let y = step_ode(1.0, |t, y| y * t.cos(), &TimeGrid::new(0.0, 2.0, n)?)?;
        ode_errors.push((y[n] - exact).abs());
    }
    let ode = ratios(&ode_errors);
    ensure!(ode.iter().all(|&r| in_band(r)), "RK4 error ratios {ode:?}");

    let exact = 1f64.exp() - 1.0;
    let mut quad_errors = Vec::new();
    for n in [8, 16, 32, 64] {
        quad_errors.push((simpson(f64::exp, &TimeGrid::new(0.0, 1.0, n)?)? - exact).abs());
    }
    let quad = ratios(&quad_errors);
    ensure!(quad.iter().all(|&r| in_band(r)), "Simpson error ratios {quad:?}");
    let spec = QuadratureSpec::new(QuadratureMethod::Simpson, TimeGrid::new(0.0, 1.0, 16)?, 1e-6)?;
    let order = integrate_time(f64::exp, &spec)?
        .report
        .estimated_order
        .ok_or("no order estimate")?;
    ensure!((order - 4.0).abs() <= 0.5, "reported Simpson order {order}");

    let mut rng = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let ring = random_ring(&mut rng, 5.0);
        let b = rng.random_range(0.5..5.0);
        let field = FieldModel::new(PulseProfile::Constant { amplitude: b }, unit_vector(&mut rng))?;
        // chi = x^2 y + sin(z) + x z
        let grad = |r: Vec3| Vec3::new(2.0 * r.x * r.y + r.z, r.x * r.x, r.z.cos() + r.x);
        let plain = interaction_line_integral(&ring, &field, 0.0, STOKES_SEGMENTS)?;
        let shifted = interaction_line_integral_in_gauge(&ring, &field, 0.0, STOKES_SEGMENTS, grad)?;
        let err = relative(shifted, plain);
        ensure!(
            err <= GAUGE_TOL,
            "gauge shift changed the loop integral by {err:e}"
        );
        worst = worst.max(err);
    }
    Ok(format!(
        "RK4 ratios {}, Simpson ratios {}, worst gauge shift {worst:.2e}",
        fmt_ratios(&ode),
        fmt_ratios(&quad)
    ))
}

fn fmt_ratios(r: &[f64]) -> String {
    r.iter().map(|x| format!("{x:.1}")).collect::<Vec<_>>().join("/")
}

fn criterion_7() -> Outcome {
    let scale = 1e-3;
    let grid = TimeGrid::new(0.0, scale, 256)?;
    let profiles = catalogue(1e-3, scale, 1e-3);
    let neutron = NeutronState::new(Vec3::new(0.0, 2000.0, 0.0), SpinSign::Parallel, Vec3::Z)?;
    let ring = RingDevice::new(0.05, 2.0, 0.05, 0.01, 2.0)?;
    let reversed = ring.with_current(-ring.current())?;

    for profile in &profiles {
        let zero = FieldModel::along_z(profile.with_amplitude(0.0))?;
        let on = accumulate_action(&neutron, &zero, &grid)?;
        let off = accumulate_action(&neutron, &zero.switched_off(), &grid)?;
        let phase = phase_shift(&on, &off)?;
        ensure!(
            phase == 0.0,
            "{}: zero field gives phase {phase}",
            profile.kind_name()
        );
        let ke = neutron.kinetic_energy();
        ensure!(
            on.lagrangian.iter().all(|&(_, l)| l == ke),
            "neutron Lagrangian not constant at zero field"
        );
        let run = evolve_fluid_energy(&ring, &zero, &grid)?;
        ensure!(
            run.max_lagrangian_deviation() == 0.0,
            "ring Lagrangian not constant at zero field"
        );
        ensure!(
            grid.times().all(|t| induced_power(&ring, &zero, t) == 0.0),
            "nonzero induced power at zero field"
        );

        let field = FieldModel::along_z(*profile)?;
        let off = field.switched_off();
        let up = phase_shift(
            &accumulate_action(&neutron, &field, &grid)?,
            &accumulate_action(&neutron, &off, &grid)?,
        )?;
        let flipped = neutron.spin_flipped();
        let down = phase_shift(
            &accumulate_action(&flipped, &field, &grid)?,
            &accumulate_action(&flipped, &off, &grid)?,
        )?;
        ensure!(
            up != 0.0 && down == -up,
            "{}: spin flip gives {down} vs {up}",
            profile.kind_name()
        );

        for t in grid.times() {
            ensure!(
                interaction_analytic(&reversed, &field, t) == -interaction_analytic(&ring, &field, t),
                "current reversal does not negate mu.B"
            );
            ensure!(
                induced_power(&reversed, &field, t) == -induced_power(&ring, &field, t),
                "current reversal does not negate the power"
            );
        }
        let t = 0.5 * scale;
        let fwd = interaction_line_integral(&ring, &field, t, STOKES_SEGMENTS)?;
        let back = interaction_line_integral(&reversed, &field, t, STOKES_SEGMENTS)?;
        ensure!(back == -fwd, "current reversal does not negate the line integral");
    }
    Ok(format!(
        "{} shapes: zero field, spin flip and current reversal",
        profiles.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("line integral equals mu.B", criterion_1),
        ("fluid energy closed form", criterion_2),
        ("classical Lagrangian constancy", criterion_3),
        ("quantum field dependence", criterion_4),
        ("quantum vs classical contrast", criterion_5),
        ("integrator orders and gauge invariance", criterion_6),
        ("trivial cases", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {e}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
