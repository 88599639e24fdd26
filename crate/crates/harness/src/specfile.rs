//! Experiment spec files.
//!
//! A spec file is TOML with one `[experiment]` table and optional
//! `[grid.rfr]` / `[grid.svr]` tables. Lists for `encodings`, `models`, and
//! `qubits` expand into a batch of cells sharing the same seed and split
//! rule, which is what a grouped-bar report expects.
//!
//! ```toml
//! [experiment]
//! name = "rqc-interpolation"
//! kind = "interpolation"            # interpolation | extrapolation
//! dataset_label = "rqc"
//! datasets = ["rqc_labeled.jsonl"]  # relative to this file
//! encodings = ["circuit_level", "shadow", "combined"]
//! models = ["svr", "rfr"]
//! split = "random_80_20"            # or gate_bins | trotter_steps | qubits
//! qubits = [3]                      # optional row filter; one cell per entry
//! seed = 42
//! cv_folds = 5
//! shadow_mode = "exact"             # exact | sampled
//! shadow_shots = 10000
//! pad_shadow = false
//!
//! [grid.svr]
//! c = [0.1, 1.0, 10.0, 100.0]
//! epsilon = [0.01, 0.1]
//! kernels = ["rbf", "linear"]
//!
//! [grid.rfr]
//! n_estimators = [100, 300]
//! max_depth = [10, 20, 0]           # 0 = unlimited
//! max_features = [1.0, 0.3333333333333333]
//! ```

use crate::experiment::{run_extrapolation, run_interpolation, ExperimentSpec, ModelKind};
use crate::report::{CellReport, Report};
use crate::split::SplitRule;
use crate::{HarnessError, Result};
use magic_core::codec::{read_labeled, Labeled};
use magic_core::features::Encoding;
use magic_core::shadows::ShadowMode;
use magic_ml::cv::{ModelGrid, RfrGrid, SvrGrid};
use magic_ml::kernel::Kernel;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub grid: GridSection,
}

fn default_cv_folds() -> usize {
    5
}

fn default_shadow_mode() -> String {
    "exact".into()
}

fn default_shadow_shots() -> usize {
    10_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: String,
    /// "interpolation" or "extrapolation".
    pub kind: String,
    #[serde(default)]
    pub dataset_label: Option<String>,
    pub datasets: Vec<String>,
    pub encodings: Vec<String>,
    pub models: Vec<String>,
    pub split: String,
    /// Optional qubit filter; interpolation runs one cell per entry.
    #[serde(default)]
    pub qubits: Vec<usize>,
    pub seed: u64,
    #[serde(default = "default_cv_folds")]
    pub cv_folds: usize,
    #[serde(default = "default_shadow_mode")]
    pub shadow_mode: String,
    #[serde(default = "default_shadow_shots")]
    pub shadow_shots: usize,
    #[serde(default)]
    pub pad_shadow: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub rfr: Option<RfrGridToml>,
    pub svr: Option<SvrGridToml>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfrGridToml {
    pub n_estimators: Vec<usize>,
    /// 0 means unlimited depth.
    pub max_depth: Vec<usize>,
    pub max_features: Vec<f64>,
    #[serde(default)]
    pub min_samples_leaf: Option<usize>,
    #[serde(default)]
    pub bootstrap: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SvrGridToml {
    pub c: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub kernels: Vec<String>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    Ok(toml::from_str(text)?)
}

fn kernel_from_name(name: &str) -> Result<Kernel> {
    match name {
        "rbf" => Ok(Kernel::rbf()),
        "linear" => Ok(Kernel::Linear),
        "poly" => Ok(Kernel::Poly {
            degree: 3,
            gamma: None,
            coef0: 1.0,
        }),
        other => Err(HarnessError::Spec(format!("unknown kernel `{other}`"))),
    }
}

pub fn rfr_grid_from(section: &GridSection) -> ModelGrid {
    match &section.rfr {
        None => ModelGrid::Rfr(RfrGrid::default()),
        Some(g) => {
            let mut grid = RfrGrid {
                n_estimators: g.n_estimators.clone(),
                max_depth: g
                    .max_depth
                    .iter()
                    .map(|&d| if d == 0 { None } else { Some(d) })
                    .collect(),
                max_features: g.max_features.clone(),
                ..RfrGrid::default()
            };
            if let Some(msl) = g.min_samples_leaf {
                grid.min_samples_leaf = msl;
            }
            if let Some(b) = g.bootstrap {
                grid.bootstrap = b;
            }
            ModelGrid::Rfr(grid)
        }
    }
}

pub fn svr_grid_from(section: &GridSection) -> Result<ModelGrid> {
    match &section.svr {
        None => Ok(ModelGrid::Svr(SvrGrid::default())),
        Some(g) => {
            let kernels = g
                .kernels
                .iter()
                .map(|k| kernel_from_name(k))
                .collect::<Result<Vec<_>>>()?;
            let mut grid = SvrGrid {
                c: g.c.clone(),
                epsilon: g.epsilon.clone(),
                kernel: kernels,
                ..SvrGrid::default()
            };
            if let Some(t) = g.tol {
                grid.tol = t;
            }
            if g.max_iter.is_some() {
                grid.max_iter = g.max_iter;
            }
            Ok(ModelGrid::Svr(grid))
        }
    }
}

/// Load every dataset referenced by the spec, relative to `base_dir`.
pub fn load_datasets(spec: &SpecFile, base_dir: &Path) -> Result<Vec<Labeled>> {
    let mut rows = Vec::new();
    for rel in &spec.experiment.datasets {
        let path = base_dir.join(rel);
        rows.extend(read_labeled(&path)?);
    }
    if rows.is_empty() {
        return Err(HarnessError::InsufficientRows { have: 0, need: 1 });
    }
    Ok(rows)
}

/// Expand the spec into concrete cells and run them all.
pub fn run_spec(spec: &SpecFile, labeled: &[Labeled]) -> Result<Report> {
    let exp = &spec.experiment;
    let split = SplitRule::from_name(&exp.split)
        .ok_or_else(|| HarnessError::Spec(format!("unknown split `{}`", exp.split)))?;
    let shadow_mode = match exp.shadow_mode.as_str() {
        "exact" => ShadowMode::Exact,
        "sampled" => ShadowMode::Sampled {
            shots: exp.shadow_shots,
            seed: exp.seed,
        },
        other => return Err(HarnessError::Spec(format!("unknown shadow mode `{other}`"))),
    };
    let is_interpolation = match exp.kind.as_str() {
        "interpolation" => true,
        "extrapolation" => false,
        other => return Err(HarnessError::Spec(format!("unknown kind `{other}`"))),
    };
    let dataset_label = exp.dataset_label.clone().unwrap_or_else(|| "data".into());

    // Interpolation runs per fixed width; extrapolation may filter widths.
    let width_cells: Vec<Option<usize>> = if exp.qubits.is_empty() {
        vec![None]
    } else if is_interpolation {
        exp.qubits.iter().map(|&n| Some(n)).collect()
    } else {
        vec![None]
    };

    let mut cells: Vec<CellReport> = Vec::new();
    for width in &width_cells {
        let filtered: Vec<Labeled> = match width {
            Some(n) => labeled
                .iter()
                .filter(|l| l.circuit.n_qubits() == *n)
                .cloned()
                .collect(),
            None if !exp.qubits.is_empty() => labeled
                .iter()
                .filter(|l| exp.qubits.contains(&l.circuit.n_qubits()))
                .cloned()
                .collect(),
            None => labeled.to_vec(),
        };
        for model_name in &exp.models {
            let model = ModelKind::from_name(model_name)
                .ok_or_else(|| HarnessError::Spec(format!("unknown model `{model_name}`")))?;
            let grid = match model {
                ModelKind::Rfr => rfr_grid_from(&spec.grid),
                ModelKind::Svr => svr_grid_from(&spec.grid)?,
            };
            for encoding_name in &exp.encodings {
                let encoding = Encoding::from_name(encoding_name).ok_or_else(|| {
                    HarnessError::Spec(format!("unknown encoding `{encoding_name}`"))
                })?;
                let suffix = width.map(|n| format!("-n{n}")).unwrap_or_default();
                let cell_spec = ExperimentSpec {
                    name: format!("{}-{}-{}{}", exp.name, model_name, encoding_name, suffix),
                    dataset_label: dataset_label.clone(),
                    encoding,
                    model,
                    split,
                    seed: exp.seed,
                    shadow_mode,
                    pad_shadow: exp.pad_shadow,
                    grid: grid.clone(),
                    cv_folds: exp.cv_folds,
                };
                let (report, _) = if is_interpolation {
                    run_interpolation(&filtered, &cell_spec)?
                } else {
                    run_extrapolation(&filtered, &cell_spec)?
                };
                cells.push(report);
            }
        }
    }
    Ok(Report::new(&exp.kind, cells))
}
