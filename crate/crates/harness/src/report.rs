//! Report data model and emission.
//!
//! A report is a list of experiment cells plus an optional runtime section.
//! Equality (used by round-trip tests and reproducibility checks) ignores
//! wall-time fields; everything else must be bit-identical under a fixed
//! seed. Emission produces `report.json`, flat CSV tables, and static SVG
//! charts with no plotting dependency.

use crate::svg;
use crate::Result;
use magic_ml::cv::CvReport;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowCounts {
    pub train: usize,
    pub test: usize,
    pub extrapolation: usize,
    pub excluded: usize,
}

/// Wall-clock timings (milliseconds, monotonic clock). Never part of
/// report equality.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CellTimings {
    pub label_ms_total: f64,
    pub train_ms: f64,
    pub predict_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMetric {
    /// "test" or "extrapolation".
    pub side: String,
    pub key: String,
    pub rows: usize,
    pub mse: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellReport {
    pub name: String,
    pub dataset: String,
    pub encoding: String,
    pub model: String,
    pub split: String,
    pub seed: u64,
    pub selected_label: String,
    pub selected_params: serde_json::Value,
    pub cv: CvReport,
    pub rows: RowCounts,
    pub train_mse: f64,
    pub test_mse: f64,
    pub extrapolation_mse: Option<f64>,
    pub test_label_variance: f64,
    pub per_group: Vec<GroupMetric>,
    pub timings: CellTimings,
}

impl PartialEq for CellReport {
    fn eq(&self, other: &Self) -> bool {
        // Everything except `timings`.
        self.name == other.name
            && self.dataset == other.dataset
            && self.encoding == other.encoding
            && self.model == other.model
            && self.split == other.split
            && self.seed == other.seed
            && self.selected_label == other.selected_label
            && self.selected_params == other.selected_params
            && serde_json::to_string(&self.cv).unwrap() == serde_json::to_string(&other.cv).unwrap()
            && self.rows.train == other.rows.train
            && self.rows.test == other.rows.test
            && self.rows.extrapolation == other.rows.extrapolation
            && self.rows.excluded == other.rows.excluded
            && self.train_mse == other.train_mse
            && self.test_mse == other.test_mse
            && self.extrapolation_mse == other.extrapolation_mse
            && self.test_label_variance == other.test_label_variance
            && self.per_group == other.per_group
    }
}

/// One runtime-scaling measurement point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuntimePoint {
    pub n_qubits: usize,
    /// Mean exact-labeling wall time per circuit (simulate + entropy).
    pub exact_sre_ms: f64,
    pub rfr_train_ms: f64,
    pub rfr_predict_ms_per_circuit: f64,
    pub svr_train_ms: f64,
    pub svr_predict_ms_per_circuit: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuntimeReport {
    pub samples_per_point: usize,
    pub gate_range: (usize, usize),
    pub train_circuits_per_point: usize,
    pub seed: u64,
    pub points: Vec<RuntimePoint>,
}

impl PartialEq for RuntimeReport {
    fn eq(&self, other: &Self) -> bool {
        // Runtime points are all wall time; only the configuration is
        // load-bearing for equality.
        self.samples_per_point == other.samples_per_point
            && self.gate_range == other.gate_range
            && self.train_circuits_per_point == other.train_circuits_per_point
            && self.seed == other.seed
            && self.points.len() == other.points.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub kind: String,
    pub cells: Vec<CellReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime: Option<RuntimeReport>,
}

impl Report {
    pub fn new(kind: &str, cells: Vec<CellReport>) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            kind: kind.to_string(),
            cells,
            runtime: None,
        }
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

fn write_cells_csv(report: &Report, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "name",
        "dataset",
        "encoding",
        "model",
        "split",
        "seed",
        "selected",
        "train_rows",
        "test_rows",
        "extrapolation_rows",
        "excluded_rows",
        "train_mse",
        "test_mse",
        "extrapolation_mse",
        "test_label_variance",
    ])?;
    for c in &report.cells {
        w.write_record([
            c.name.clone(),
            c.dataset.clone(),
            c.encoding.clone(),
            c.model.clone(),
            c.split.clone(),
            c.seed.to_string(),
            c.selected_label.clone(),
            c.rows.train.to_string(),
            c.rows.test.to_string(),
            c.rows.extrapolation.to_string(),
            c.rows.excluded.to_string(),
            fmt(c.train_mse),
            fmt(c.test_mse),
            c.extrapolation_mse.map(fmt).unwrap_or_default(),
            fmt(c.test_label_variance),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_groups_csv(report: &Report, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["cell", "side", "group", "rows", "mse"])?;
    for c in &report.cells {
        for g in &c.per_group {
            w.write_record([
                c.name.clone(),
                g.side.clone(),
                g.key.clone(),
                g.rows.to_string(),
                fmt(g.mse),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_runtime_csv(rt: &RuntimeReport, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "n_qubits",
        "exact_sre_ms",
        "rfr_train_ms",
        "rfr_predict_ms_per_circuit",
        "svr_train_ms",
        "svr_predict_ms_per_circuit",
    ])?;
    for p in &rt.points {
        w.write_record([
            p.n_qubits.to_string(),
            fmt(p.exact_sre_ms),
            fmt(p.rfr_train_ms),
            format!("{:.6}", p.rfr_predict_ms_per_circuit),
            fmt(p.svr_train_ms),
            format!("{:.6}", p.svr_predict_ms_per_circuit),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn mse_bar_chart(report: &Report) -> String {
    let groups: Vec<svg::BarGroup> = report
        .cells
        .iter()
        .map(|c| {
            let mut bars = vec![
                svg::Bar {
                    label: "train".into(),
                    value: c.train_mse,
                    hatched: false,
                    color: 0,
                },
                svg::Bar {
                    label: "test".into(),
                    value: c.test_mse,
                    hatched: true,
                    color: 0,
                },
            ];
            if let Some(ex) = c.extrapolation_mse {
                bars.push(svg::Bar {
                    label: "extrapolation".into(),
                    value: ex,
                    hatched: true,
                    color: 1,
                });
            }
            svg::BarGroup {
                label: format!("{}/{}/{}", c.dataset, c.model, c.encoding),
                bars,
            }
        })
        .collect();
    svg::grouped_bar_chart(&format!("MSE by cell ({})", report.kind), "MSE", &groups)
}

fn runtime_chart(rt: &RuntimeReport) -> String {
    let xs: Vec<f64> = rt.points.iter().map(|p| p.n_qubits as f64).collect();
    let series = vec![
        svg::LineSeries {
            label: "exact SRE".into(),
            points: xs
                .iter()
                .zip(rt.points.iter().map(|p| p.exact_sre_ms))
                .map(|(&x, y)| (x, y))
                .collect(),
        },
        svg::LineSeries {
            label: "RFR train".into(),
            points: xs
                .iter()
                .zip(rt.points.iter().map(|p| p.rfr_train_ms))
                .map(|(&x, y)| (x, y))
                .collect(),
        },
        svg::LineSeries {
            label: "RFR predict".into(),
            points: xs
                .iter()
                .zip(rt.points.iter().map(|p| p.rfr_predict_ms_per_circuit))
                .map(|(&x, y)| (x, y))
                .collect(),
        },
        svg::LineSeries {
            label: "SVR train".into(),
            points: xs
                .iter()
                .zip(rt.points.iter().map(|p| p.svr_train_ms))
                .map(|(&x, y)| (x, y))
                .collect(),
        },
        svg::LineSeries {
            label: "SVR predict".into(),
            points: xs
                .iter()
                .zip(rt.points.iter().map(|p| p.svr_predict_ms_per_circuit))
                .map(|(&x, y)| (x, y))
                .collect(),
        },
    ];
    svg::log_line_chart("Runtime vs qubit count", "qubits", "milliseconds", &series)
}

/// Write `report.json`, CSV tables, and SVG charts into `dir`. Sections
/// that are absent (no cells, no runtime data) are omitted in every format.
pub fn emit_report(report: &Report, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let json_path = dir.join("report.json");
    let mut f = std::fs::File::create(&json_path)?;
    f.write_all(serde_json::to_string_pretty(report)?.as_bytes())?;
    f.write_all(b"\n")?;
    written.push(json_path);

    if !report.cells.is_empty() {
        let cells_path = dir.join("cells.csv");
        write_cells_csv(report, &cells_path)?;
        written.push(cells_path);

        if report.cells.iter().any(|c| !c.per_group.is_empty()) {
            let groups_path = dir.join("groups.csv");
            write_groups_csv(report, &groups_path)?;
            written.push(groups_path);
        }

        let chart_path = dir.join("mse_bars.svg");
        std::fs::write(&chart_path, mse_bar_chart(report))?;
        written.push(chart_path);
    }

    if let Some(rt) = &report.runtime {
        let rt_csv = dir.join("runtime.csv");
        write_runtime_csv(rt, &rt_csv)?;
        written.push(rt_csv);
        let rt_chart = dir.join("runtime.svg");
        std::fs::write(&rt_chart, runtime_chart(rt))?;
        written.push(rt_chart);
    }
    Ok(written)
}

/// Read a report back from `report.json`.
pub fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
