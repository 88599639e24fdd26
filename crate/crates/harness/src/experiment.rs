//! Interpolation and extrapolation experiment runs.
//!
//! One experiment cell = (labeled circuits, encoding, model kind, split
//! rule, grid). The pipeline is: assemble features → partition → grid-search
//! CV on the training part only → refit → score train/test (and the
//! out-of-domain part for extrapolation rules) → per-group breakdowns.
//! Hyperparameter selection never sees a feature or label outside the
//! training partition; the standardizer inside each SVR fit likewise sees
//! only the rows of that fit.

use crate::report::{CellReport, CellTimings, GroupMetric, RowCounts};
use crate::split::{partition, SplitRule};
use crate::{HarnessError, Result};
use magic_core::codec::Labeled;
use magic_core::features::{assemble, Dataset, DatasetRow, Encoding};
use magic_core::shadows::ShadowMode;
use magic_ml::cv::{grid_search_cv, CvReport, ModelGrid};
use magic_ml::metrics::{mse, variance};
use magic_ml::model::ModelPayload;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Rfr,
    Svr,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rfr => "rfr",
            ModelKind::Svr => "svr",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "rfr" => Some(ModelKind::Rfr),
            "svr" => Some(ModelKind::Svr),
            _ => None,
        }
    }
}

/// One experiment cell, fully pinned.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: String,
    /// Dataset tag for reports ("rqc", "tim").
    pub dataset_label: String,
    pub encoding: Encoding,
    pub model: ModelKind,
    pub split: SplitRule,
    pub seed: u64,
    pub shadow_mode: ShadowMode,
    pub pad_shadow: bool,
    pub grid: ModelGrid,
    pub cv_folds: usize,
}

impl ExperimentSpec {
    fn check_grid_matches_model(&self) -> Result<()> {
        let ok = matches!(
            (&self.grid, self.model),
            (ModelGrid::Rfr(_), ModelKind::Rfr) | (ModelGrid::Svr(_), ModelKind::Svr)
        );
        if ok {
            Ok(())
        } else {
            Err(HarnessError::Spec(format!(
                "grid kind does not match model `{}`",
                self.model.name()
            )))
        }
    }
}

fn gather<'a>(rows: &'a [DatasetRow], idx: &[usize]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let x = idx.iter().map(|&i| rows[i].features.clone()).collect();
    let y = idx.iter().map(|&i| rows[i].label).collect();
    let _ = rows;
    (x, y)
}

fn group_key(row: &DatasetRow, split: SplitRule) -> String {
    match split {
        SplitRule::TrotterSteps => format!("t={}", row.trotter_steps),
        SplitRule::GateBins => format!("g={}-{}", (row.gate_count / 20) * 20, (row.gate_count / 20) * 20 + 19),
        _ => format!("n={}", row.n_qubits),
    }
}

fn group_breakdown(
    rows: &[DatasetRow],
    idx: &[usize],
    preds: &[f64],
    split: SplitRule,
    side: &str,
) -> Vec<GroupMetric> {
    let mut keys: Vec<String> = idx
        .iter()
        .map(|&i| group_key(&rows[i], split))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    keys.sort();
    let mut out = Vec::new();
    for key in keys {
        let members: Vec<usize> = idx
            .iter()
            .enumerate()
            .filter(|(_, &i)| group_key(&rows[i], split) == key)
            .map(|(pos, _)| pos)
            .collect();
        let p: Vec<f64> = members.iter().map(|&pos| preds[pos]).collect();
        let y: Vec<f64> = members.iter().map(|&pos| rows[idx[pos]].label).collect();
        out.push(GroupMetric {
            side: side.to_string(),
            key,
            rows: members.len(),
            mse: mse(&p, &y).unwrap_or(f64::NAN),
        });
    }
    out
}

fn predict(model: &ModelPayload, x: &[Vec<f64>]) -> Vec<f64> {
    match model {
        ModelPayload::Rfr(f) => f.predict(x),
        ModelPayload::Svr(s) => s.predict(x),
    }
}

/// Tune hyperparameters on the training rows only. Public so tests can
/// verify that nothing outside the training partition influences selection.
pub fn tune(
    dataset: &Dataset,
    train_idx: &[usize],
    grid: &ModelGrid,
    cv_folds: usize,
    seed: u64,
) -> Result<(ModelPayload, CvReport)> {
    let (x, y) = gather(&dataset.rows, train_idx);
    Ok(grid_search_cv(&x, &y, grid, cv_folds, seed)?)
}

/// Run one experiment cell on already-labeled circuits.
pub fn run_experiment(labeled: &[Labeled], spec: &ExperimentSpec) -> Result<(CellReport, ModelPayload)> {
    spec.check_grid_matches_model()?;
    let dataset = assemble(labeled, spec.encoding, spec.shadow_mode, spec.pad_shadow)?;
    let split = partition(&dataset.rows, spec.split, spec.seed)?;

    let t_train = Instant::now();
    let (model, cv) = tune(&dataset, &split.train, &spec.grid, spec.cv_folds, spec.seed)?;
    let train_ms = t_train.elapsed().as_secs_f64() * 1e3;

    let (x_train, y_train) = gather(&dataset.rows, &split.train);
    let (x_test, y_test) = gather(&dataset.rows, &split.test);
    let train_mse = mse(&predict(&model, &x_train), &y_train)?;

    let t_pred = Instant::now();
    let test_preds = predict(&model, &x_test);
    let predict_ms = t_pred.elapsed().as_secs_f64() * 1e3;
    let test_mse = mse(&test_preds, &y_test)?;

    let mut per_group = group_breakdown(&dataset.rows, &split.test, &test_preds, spec.split, "test");
    let extrapolation_mse = if split.extrapolation.is_empty() {
        None
    } else {
        let (x_ex, y_ex) = gather(&dataset.rows, &split.extrapolation);
        let ex_preds = predict(&model, &x_ex);
        per_group.extend(group_breakdown(
            &dataset.rows,
            &split.extrapolation,
            &ex_preds,
            spec.split,
            "extrapolation",
        ));
        Some(mse(&ex_preds, &y_ex)?)
    };

    let selected = &cv.cells[cv.best_index];
    let report = CellReport {
        name: spec.name.clone(),
        dataset: spec.dataset_label.clone(),
        encoding: spec.encoding.name().to_string(),
        model: spec.model.name().to_string(),
        split: spec.split.name().to_string(),
        seed: spec.seed,
        selected_params: selected.params.clone(),
        selected_label: selected.label.clone(),
        cv: cv.clone(),
        rows: RowCounts {
            train: split.train.len(),
            test: split.test.len(),
            extrapolation: split.extrapolation.len(),
            excluded: split.excluded.len(),
        },
        train_mse,
        test_mse,
        extrapolation_mse,
        test_label_variance: variance(&y_test)?,
        per_group,
        timings: CellTimings {
            label_ms_total: labeled.iter().map(|l| l.label_ms).sum(),
            train_ms,
            predict_ms,
        },
    };
    Ok((report, model))
}

/// In-distribution evaluation on one fixed circuit width: seeded 80/20
/// split, grid-search CV, train/test MSE.
pub fn run_interpolation(labeled: &[Labeled], spec: &ExperimentSpec) -> Result<(CellReport, ModelPayload)> {
    if spec.split != SplitRule::Random8020 {
        return Err(HarnessError::Spec(
            "interpolation uses the random_80_20 split".into(),
        ));
    }
    if labeled.len() < 50 {
        return Err(HarnessError::InsufficientRows {
            have: labeled.len(),
            need: 50,
        });
    }
    let mut widths: Vec<usize> = labeled.iter().map(|l| l.circuit.n_qubits()).collect();
    widths.sort_unstable();
    widths.dedup();
    if widths.len() != 1 {
        return Err(HarnessError::Spec(format!(
            "interpolation trains per fixed qubit count, dataset has {widths:?}"
        )));
    }
    run_experiment(labeled, spec)
}

/// Out-of-distribution evaluation: train on the in-domain subset (with an
/// internal 80/20 for the test MSE), score the out-of-domain subset.
pub fn run_extrapolation(labeled: &[Labeled], spec: &ExperimentSpec) -> Result<(CellReport, ModelPayload)> {
    if !spec.split.is_extrapolation() {
        return Err(HarnessError::Spec(
            "extrapolation needs a domain split rule".into(),
        ));
    }
    if spec.split == SplitRule::Qubits
        && spec.encoding.uses_shadow()
        && !spec.pad_shadow
    {
        return Err(HarnessError::Spec(
            "qubit extrapolation with shadow features requires the padded layout".into(),
        ));
    }
    run_experiment(labeled, spec)
}
