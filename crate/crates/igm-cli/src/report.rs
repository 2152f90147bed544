//! The verification report document and the plot-series files.

use std::fs;
use std::path::Path;

use igm::metrics::{diameter, densification_series, mixing_bound, normalized_laplacian_spectrum};
use igm::verify::{RunOptions, RunReport, TheoremCheck};
use igm::NodeId;
use serde::Serialize;

/// The serialized body of a verification run. Field order is fixed;
/// counts travel as decimal strings; two runs with the same flags and
/// seed produce byte-identical output.
#[derive(Serialize)]
pub struct ReportDocument<'a> {
    pub schema_version: &'static str,
    pub params: ParamsEcho,
    pub trajectory_summary: Vec<LevelCounts>,
    /// Capacity message when the requested depth exceeded the budget.
    pub stopped: Option<String>,
    pub checks: &'a [TheoremCheck],
    pub tool_version: &'static str,
}

#[derive(Serialize)]
pub struct ParamsEcho {
    pub seed: String,
    pub k: usize,
}

#[derive(Serialize)]
pub struct LevelCounts {
    pub level: usize,
    pub nodes: String,
    pub edges: String,
}

pub fn document(run: &RunReport) -> ReportDocument<'_> {
    ReportDocument {
        schema_version: "1",
        params: ParamsEcho {
            seed: run.params.seed.to_string(),
            k: run.params.k,
        },
        trajectory_summary: run
            .trajectory
            .counts()
            .iter()
            .enumerate()
            .map(|(level, (n, e))| LevelCounts {
                level,
                nodes: n.to_string(),
                edges: e.to_string(),
            })
            .collect(),
        stopped: run.trajectory.stopped.as_ref().map(|c| c.to_string()),
        checks: &run.checks,
        tool_version: env!("CARGO_PKG_VERSION"),
    }
}

pub fn render_json(run: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(&document(run)).expect("report serializes");
    s.push('\n');
    s
}

/// CSV series for external plotting: densification ratio, spectral
/// gap with its mixing bound, and diameter, each against the level.
/// Cells outside a cap or undefined (disconnected, degenerate volume)
/// are left empty.
pub fn write_plots(dir: &Path, run: &RunReport, options: &RunOptions) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let snapshots = &run.trajectory.snapshots;

    let mut out = String::from("level,ratio,comparator\n");
    for p in densification_series(snapshots) {
        out.push_str(&format!(
            "{},{},{}\n",
            p.level,
            p.ratio,
            p.comparator.map(|c| c.to_string()).unwrap_or_default()
        ));
    }
    fs::write(dir.join("densification.csv"), out)?;

    let mut out = String::from("level,lambda_gap,mixing_bound\n");
    for (t, g) in snapshots.iter().enumerate() {
        let gap = (g.node_count() <= options.spectral_max_n)
            .then(|| normalized_laplacian_spectrum(g).ok())
            .flatten()
            .map(|s| s.lambda_gap.to_string())
            .unwrap_or_default();
        let bound = g
            .first_clone_of_level()
            .and_then(|first| {
                let clones: Vec<NodeId> = (first..g.node_count() as NodeId).collect();
                mixing_bound(g, &clones).ok()
            })
            .map(|b| b.to_string())
            .unwrap_or_default();
        out.push_str(&format!("{t},{gap},{bound}\n"));
    }
    fs::write(dir.join("lambda_gap.csv"), out)?;

    let mut out = String::from("level,diameter\n");
    for (t, g) in snapshots.iter().enumerate() {
        let d = (g.node_count() <= options.diameter_max_n)
            .then(|| diameter(g))
            .flatten()
            .map(|d| d.to_string())
            .unwrap_or_default();
        out.push_str(&format!("{t},{d}\n"));
    }
    fs::write(dir.join("diameter.csv"), out)?;
    Ok(())
}
