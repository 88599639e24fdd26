//! Grid search with k-fold cross-validation.
//!
//! Every grid cell is scored on the same seeded fold partition by mean
//! validation MSE; the winner (ties resolve toward the smaller model —
//! fewer trees or smaller C — then grid order) is refit on the full
//! training set. Seeds are derived per (cell, fold), so the whole search is
//! deterministic and cells can be evaluated in any order or in parallel.

use crate::forest::{fit_rfr, ForestParams};
use crate::kernel::Kernel;
use crate::metrics::mse;
use crate::model::ModelPayload;
use crate::svr::{fit_svr, SvrParams};
use crate::tree::SplitCriterion;
use crate::{MlError, Result};
use magic_core::rng::{derive_seed, master_rng};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Random-forest search space. Axes follow the declared field order when
/// cells are enumerated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RfrGrid {
    pub n_estimators: Vec<usize>,
    /// `None` = unlimited depth. In config files use 0 for unlimited.
    pub max_depth: Vec<Option<usize>>,
    pub max_features: Vec<f64>,
    pub criterion: Vec<SplitCriterion>,
    pub min_samples_leaf: usize,
    pub bootstrap: bool,
}

impl Default for RfrGrid {
    fn default() -> Self {
        RfrGrid {
            n_estimators: vec![100, 300],
            max_depth: vec![Some(10), Some(20), None],
            max_features: vec![1.0, 1.0 / 3.0],
            criterion: vec![SplitCriterion::VarianceReduction],
            min_samples_leaf: 1,
            bootstrap: true,
        }
    }
}

/// SVR search space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvrGrid {
    pub c: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub kernel: Vec<Kernel>,
    pub tol: f64,
    pub max_iter: Option<usize>,
}

impl Default for SvrGrid {
    fn default() -> Self {
        SvrGrid {
            c: vec![0.1, 1.0, 10.0, 100.0],
            epsilon: vec![0.01, 0.1],
            kernel: vec![Kernel::rbf(), Kernel::Linear],
            tol: 1e-3,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelGrid {
    Rfr(RfrGrid),
    Svr(SvrGrid),
}

/// One hyperparameter combination.
#[derive(Debug, Clone)]
pub enum Cell {
    Rfr(ForestParams),
    Svr(SvrParams),
}

impl Cell {
    pub fn label(&self) -> String {
        match self {
            Cell::Rfr(p) => format!(
                "rfr(trees={}, depth={}, feat={:.3})",
                p.n_estimators,
                p.max_depth.map_or("none".into(), |d| d.to_string()),
                p.max_features
            ),
            Cell::Svr(p) => format!(
                "svr(C={}, eps={}, kernel={})",
                p.c,
                p.epsilon,
                p.kernel.label()
            ),
        }
    }

    /// Ordering key for the smaller-model tie break.
    fn size_key(&self) -> f64 {
        match self {
            Cell::Rfr(p) => p.n_estimators as f64,
            Cell::Svr(p) => p.c,
        }
    }

    fn fit(&self, x: &[Vec<f64>], y: &[f64], seed: u64) -> Result<ModelPayload> {
        match self {
            Cell::Rfr(p) => Ok(ModelPayload::Rfr(fit_rfr(x, y, p, seed)?)),
            Cell::Svr(p) => Ok(ModelPayload::Svr(fit_svr(x, y, p)?.0)),
        }
    }
}

fn enumerate_cells(grid: &ModelGrid) -> Vec<Cell> {
    let mut cells = Vec::new();
    match grid {
        ModelGrid::Rfr(g) => {
            for &n_estimators in &g.n_estimators {
                for &max_depth in &g.max_depth {
                    for &max_features in &g.max_features {
                        for &criterion in &g.criterion {
                            cells.push(Cell::Rfr(ForestParams {
                                n_estimators,
                                max_depth,
                                min_samples_leaf: g.min_samples_leaf,
                                max_features,
                                criterion,
                                bootstrap: g.bootstrap,
                            }));
                        }
                    }
                }
            }
        }
        ModelGrid::Svr(g) => {
            for &c in &g.c {
                for &epsilon in &g.epsilon {
                    for &kernel in &g.kernel {
                        cells.push(Cell::Svr(SvrParams {
                            kernel,
                            c,
                            epsilon,
                            tol: g.tol,
                            max_iter: g.max_iter,
                            ..SvrParams::default()
                        }));
                    }
                }
            }
        }
    }
    cells
}

/// Seeded k-fold partition: a shuffle of 0..m cut into k nearly equal
/// chunks. Every cell of one search sees the identical partition.
pub fn kfold_indices(m: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(MlError::InvalidParameter("k must be ≥ 2".into()));
    }
    if m < k {
        return Err(MlError::DegenerateFolds { rows: m, k });
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut master_rng(seed));
    let base = m / k;
    let extra = m % k;
    let mut folds = Vec::with_capacity(k);
    let mut at = 0;
    for j in 0..k {
        let len = base + usize::from(j < extra);
        folds.push(order[at..at + len].to_vec());
        at += len;
    }
    Ok(folds)
}

/// One scored grid cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvCell {
    pub label: String,
    pub params: serde_json::Value,
    pub fold_mse: Vec<f64>,
    pub mean_mse: f64,
}

/// The full search record: every cell on identical folds, plus the winner.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub cells: Vec<CvCell>,
    pub best_index: usize,
}

fn cell_params_json(cell: &Cell) -> serde_json::Value {
    match cell {
        Cell::Rfr(p) => serde_json::to_value(p).unwrap_or_default(),
        Cell::Svr(p) => serde_json::to_value(p).unwrap_or_default(),
    }
}

/// Run the grid search and refit the winner on all rows.
pub fn grid_search_cv(
    x: &[Vec<f64>],
    y: &[f64],
    grid: &ModelGrid,
    k: usize,
    seed: u64,
) -> Result<(ModelPayload, CvReport)> {
    if x.len() != y.len() {
        return Err(MlError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let cells = enumerate_cells(grid);
    if cells.is_empty() {
        return Err(MlError::EmptyInput("grid has no cells".into()));
    }
    let folds = kfold_indices(x.len(), k, derive_seed(seed, 0))?;

    let mut report_cells = Vec::with_capacity(cells.len());
    for (ci, cell) in cells.iter().enumerate() {
        let cell_seed = derive_seed(seed, 1 + ci as u64);
        let fold_mse: Vec<f64> = folds
            .par_iter()
            .enumerate()
            .map(|(fi, val_idx)| {
                let val_set: std::collections::HashSet<usize> = val_idx.iter().copied().collect();
                let mut xt = Vec::with_capacity(x.len() - val_idx.len());
                let mut yt = Vec::with_capacity(x.len() - val_idx.len());
                for i in 0..x.len() {
                    if !val_set.contains(&i) {
                        xt.push(x[i].clone());
                        yt.push(y[i]);
                    }
                }
                let model = cell.fit(&xt, &yt, derive_seed(cell_seed, fi as u64))?;
                let xv: Vec<Vec<f64>> = val_idx.iter().map(|&i| x[i].clone()).collect();
                let yv: Vec<f64> = val_idx.iter().map(|&i| y[i]).collect();
                let preds = match &model {
                    ModelPayload::Rfr(f) => f.predict(&xv),
                    ModelPayload::Svr(s) => s.predict(&xv),
                };
                mse(&preds, &yv)
            })
            .collect::<Result<_>>()?;
        let mean_mse = fold_mse.iter().sum::<f64>() / fold_mse.len() as f64;
        report_cells.push(CvCell {
            label: cell.label(),
            params: cell_params_json(cell),
            fold_mse,
            mean_mse,
        });
    }

    let mut best = 0usize;
    for i in 1..cells.len() {
        let a = (report_cells[i].mean_mse, cells[i].size_key());
        let b = (report_cells[best].mean_mse, cells[best].size_key());
        if a.0 < b.0 || (a.0 == b.0 && a.1 < b.1) {
            best = i;
        }
    }

    let refit_seed = derive_seed(derive_seed(seed, 1 + best as u64), k as u64);
    let model = cells[best].fit(x, y, refit_seed)?;
    Ok((
        model,
        CvReport {
            k,
            seed,
            cells: report_cells,
            best_index: best,
        },
    ))
}
