//! Bootstrap-aggregated regression forests.

use crate::tree::{fit_tree_on, Columns, DecisionTree, SplitCriterion, TreeParams};
use crate::{MlError, Result};
use magic_core::rng::{child_rng, derive_seed};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Fraction of features considered per split node.
    pub max_features: f64,
    pub criterion: SplitCriterion,
    /// With-replacement resample of training size per tree; disabling it
    /// trains every tree on the full set.
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_estimators: 100,
            max_depth: None,
            min_samples_leaf: 1,
            max_features: 1.0,
            criterion: SplitCriterion::VarianceReduction,
            bootstrap: true,
        }
    }
}

impl ForestParams {
    fn tree_params(&self) -> TreeParams {
        TreeParams {
            max_depth: self.max_depth,
            min_samples_leaf: self.min_samples_leaf,
            max_features: self.max_features,
            criterion: self.criterion,
        }
    }
}

/// A fitted forest; prediction is the arithmetic mean of the trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub params: ForestParams,
    pub seed: u64,
    pub trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict_row(row)).sum();
        sum / self.trees.len() as f64
    }

    /// Batch prediction, tree-outer per chunk so each tree streams through
    /// cache once. Chunking never reorders the per-row tree sum, so results
    /// equal `predict_row` at any thread count.
    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        let inv = 1.0 / self.trees.len() as f64;
        let mut out = vec![0.0f64; rows.len()];
        out.par_chunks_mut(64)
            .zip(rows.par_chunks(64))
            .for_each(|(acc, chunk)| {
                for tree in &self.trees {
                    for (a, row) in acc.iter_mut().zip(chunk) {
                        *a += tree.predict_row(row);
                    }
                }
                for a in acc.iter_mut() {
                    *a *= inv;
                }
            });
        out
    }
}

/// Fit a forest. Tree i draws its bootstrap and node feature subsets from
/// the child stream `derive_seed(seed, i)`, so training parallelizes over
/// trees with a deterministic result.
pub fn fit_rfr(x: &[Vec<f64>], y: &[f64], params: &ForestParams, seed: u64) -> Result<RandomForest> {
    if params.n_estimators == 0 {
        return Err(MlError::InvalidParameter("n_estimators must be ≥ 1".into()));
    }
    if x.len() != y.len() {
        return Err(MlError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let cols = Columns::from_rows(x)?;
    let tree_params = params.tree_params();
    let m = x.len();
    let trees: Vec<DecisionTree> = (0..params.n_estimators)
        .into_par_iter()
        .map(|i| {
            let tree_seed = derive_seed(seed, i as u64);
            let rows: Vec<u32> = if params.bootstrap {
                let mut rng = child_rng(tree_seed, 0);
                (0..m).map(|_| rng.gen_range(0..m) as u32).collect()
            } else {
                (0..m as u32).collect()
            };
            // The tree's own stream is a separate child so bootstrap draws
            // never alias feature-subset draws.
            fit_tree_on(&cols, y, &rows, &tree_params, derive_seed(tree_seed, 1))
        })
        .collect::<Result<_>>()?;
    Ok(RandomForest {
        params: params.clone(),
        seed,
        trees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::mse;
    use crate::tree::fit_tree;
    use magic_core::rng::child_rng;
    use rand::Rng;

    fn toy_data(n: usize, d: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut rng = child_rng(seed, 0);
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let y: Vec<f64> = x
            .iter()
            .map(|r| r[0] * 2.0 + r[1 % d] * r[1 % d] + 0.05 * rng.gen::<f64>())
            .collect();
        (x, y)
    }

    #[test]
    fn single_tree_no_bootstrap_memorizes() {
        let (x, y) = toy_data(60, 4, 1);
        let params = ForestParams {
            n_estimators: 1,
            bootstrap: false,
            ..ForestParams::default()
        };
        let forest = fit_rfr(&x, &y, &params, 5).unwrap();
        assert_eq!(mse(&forest.predict(&x), &y).unwrap(), 0.0);
        // Degenerate ensemble equals the single tree it contains.
        let tree = fit_tree(&x, &y, &TreeParams::default(), derive_seed(derive_seed(5, 0), 1))
            .unwrap();
        for row in &x {
            assert_eq!(forest.predict_row(row), tree.predict_row(row));
        }
    }

    #[test]
    fn constant_labels_predict_the_constant() {
        let (x, _) = toy_data(40, 3, 2);
        let y = vec![2.5; 40];
        let forest = fit_rfr(&x, &y, &ForestParams::default(), 9).unwrap();
        assert!(forest.predict(&x).iter().all(|p| (p - 2.5).abs() < 1e-12));
    }

    #[test]
    fn fits_are_deterministic() {
        let (x, y) = toy_data(80, 5, 3);
        let params = ForestParams {
            n_estimators: 12,
            max_features: 0.5,
            ..ForestParams::default()
        };
        let a = fit_rfr(&x, &y, &params, 7).unwrap();
        let b = fit_rfr(&x, &y, &params, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prediction_is_invariant_under_monotone_feature_maps() {
        // Axis-aligned splits only compare feature values, so applying a
        // strictly monotone map consistently at train and predict time
        // cannot change predictions at the training points. (Bootstrap is
        // off: a point absent from a resample can fall strictly between two
        // sampled values, where thresholds — midpoints — are not preserved
        // by monotone maps.)
        let (x, y) = toy_data(50, 3, 4);
        let params = ForestParams {
            n_estimators: 8,
            max_features: 0.67,
            bootstrap: false,
            ..ForestParams::default()
        };
        let forest = fit_rfr(&x, &y, &params, 11).unwrap();
        let mapped: Vec<Vec<f64>> = x
            .iter()
            .map(|r| r.iter().map(|v| v.powi(3) + 2.0 * v).collect())
            .collect();
        let forest_mapped = fit_rfr(&mapped, &y, &params, 11).unwrap();
        for (orig, trans) in x.iter().zip(&mapped) {
            let a = forest.predict_row(orig);
            let b = forest_mapped.predict_row(trans);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn thread_count_does_not_change_the_model() {
        let (x, y) = toy_data(60, 4, 8);
        let params = ForestParams {
            n_estimators: 16,
            max_features: 0.5,
            ..ForestParams::default()
        };
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| fit_rfr(&x, &y, &params, 21).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
