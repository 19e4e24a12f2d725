//! CSV output. One file per series, comma-separated with a header row,
//! `.` as decimal separator, UTF-8. Column order is fixed per file kind:
//!
//! - `<id>_neutron.csv`: [`NEUTRON_COLUMNS`]
//! - `<id>_ring.csv`: [`RING_COLUMNS`]
//! - `<id>_sweep.csv`: [`SWEEP_COLUMNS`]
//! - `<id>_summary.csv`: one row of [`RunSummary`](super::RunSummary) fields

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::RunRecord;
use crate::error::Result;

pub const NEUTRON_COLUMNS: [&str; 6] = [
    "t_s",
    "b_t",
    "lagrangian_j",
    "kinetic_j",
    "interaction_j",
    "action_j_s",
];

pub const RING_COLUMNS: [&str; 8] = [
    "t_s",
    "b_t",
    "lagrangian_j",
    "kinetic_j",
    "interaction_j",
    "action_j_s",
    "kinetic_fluid_j",
    "v_perp_m_per_s",
];

pub const SWEEP_COLUMNS: [&str; 6] = [
    "bmax_t",
    "pulse_area_t_s",
    "delta_action_j_s",
    "phase_rad",
    "fringe_intensity",
    "classical_relative_delta",
];

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Write every series in `record` plus the summary row into `dir`,
/// creating it if needed. Returns the paths written.
pub fn write_outputs(record: &RunRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let id = &record.summary.id;
    let mut written = Vec::new();
    let mut emit = |suffix: &str| {
        let p = dir.join(format!("{id}_{suffix}.csv"));
        written.push(p.clone());
        p
    };
    if let Some(rows) = &record.neutron_series {
        write_csv(&emit("neutron"), rows)?;
    }
    if let Some(rows) = &record.ring_series {
        write_csv(&emit("ring"), rows)?;
    }
    if let Some(rows) = &record.sweep_rows {
        write_csv(&emit("sweep"), rows)?;
    }
    write_csv(&emit("summary"), std::slice::from_ref(&record.summary))?;
    Ok(written)
}
