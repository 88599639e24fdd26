//! CART regression trees.
//!
//! Greedy best-split search with the variance-reduction criterion (an
//! absolute-error criterion exists as an experimental option; leaves predict
//! the mean either way). Candidate features can be subsampled per node.
//! Ties between equally good splits resolve to the lowest feature index,
//! then the lowest threshold, so builds are bit-reproducible.

use crate::{MlError, Result};
use magic_core::rng::{self, DetRng};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Split-quality criterion. `VarianceReduction` is the production value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCriterion {
    VarianceReduction,
    /// Experimental: minimizes L1 deviation around the child medians.
    AbsoluteError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// None = unlimited.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Fraction of features considered per node, in (0, 1].
    pub max_features: f64,
    pub criterion: SplitCriterion,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_leaf: 1,
            max_features: 1.0,
            criterion: SplitCriterion::VarianceReduction,
        }
    }
}

impl TreeParams {
    fn check(&self) -> Result<()> {
        if self.min_samples_leaf == 0 {
            return Err(MlError::InvalidParameter("min_samples_leaf must be ≥ 1".into()));
        }
        if !(self.max_features > 0.0 && self.max_features <= 1.0) {
            return Err(MlError::InvalidParameter(
                "max_features must be a fraction in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        value: f64,
        count: u32,
    },
}

/// A fitted regression tree; the root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut at = 0usize;
        loop {
            match self.nodes[at] {
                Node::Leaf { value, .. } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[feature as usize] <= threshold {
                        left as usize
                    } else {
                        right as usize
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => {
                    1 + walk(nodes, left as usize).max(walk(nodes, right as usize))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }
}

/// Column-major view of the training matrix; built once per forest and
/// shared by every tree.
pub struct Columns {
    pub cols: Vec<Vec<f64>>,
    pub n_rows: usize,
}

impl Columns {
    pub fn from_rows(x: &[Vec<f64>]) -> Result<Self> {
        if x.is_empty() {
            return Err(MlError::EmptyInput("no training rows".into()));
        }
        let d = x[0].len();
        if d == 0 {
            return Err(MlError::EmptyInput("rows have no features".into()));
        }
        let mut cols = vec![Vec::with_capacity(x.len()); d];
        for row in x {
            if row.len() != d {
                return Err(MlError::LengthMismatch {
                    left: row.len(),
                    right: d,
                });
            }
            for (j, v) in row.iter().enumerate() {
                cols[j].push(*v);
            }
        }
        Ok(Columns {
            cols,
            n_rows: x.len(),
        })
    }

    pub fn n_features(&self) -> usize {
        self.cols.len()
    }
}

/// Running L1-to-median cost over a growing prefix, via the two-heap
/// median trick with element sums.
struct MedianCost {
    lo: BinaryHeap<Bits>,          // max-heap of the lower half
    hi: BinaryHeap<Reverse<Bits>>, // min-heap of the upper half
    lo_sum: f64,
    hi_sum: f64,
}

/// Total-order f64 wrapper for the heaps.
#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
struct Bits(u64);

impl Bits {
    fn from(v: f64) -> Self {
        // total_cmp bit trick: flip sign bit for positives, all bits for negatives.
        let b = v.to_bits();
        Bits(if b >> 63 == 0 { b ^ (1 << 63) } else { !b })
    }
    fn value(self) -> f64 {
        let b = self.0;
        f64::from_bits(if b >> 63 == 1 { b ^ (1 << 63) } else { !b })
    }
}

impl MedianCost {
    fn new() -> Self {
        MedianCost {
            lo: BinaryHeap::new(),
            hi: BinaryHeap::new(),
            lo_sum: 0.0,
            hi_sum: 0.0,
        }
    }

    fn push(&mut self, v: f64) {
        if self.lo.peek().map(|b| v <= b.value()).unwrap_or(true) {
            self.lo.push(Bits::from(v));
            self.lo_sum += v;
        } else {
            self.hi.push(Reverse(Bits::from(v)));
            self.hi_sum += v;
        }
        // Rebalance so that |lo| = |hi| or |lo| = |hi| + 1.
        if self.lo.len() > self.hi.len() + 1 {
            let b = self.lo.pop().unwrap();
            self.lo_sum -= b.value();
            self.hi_sum += b.value();
            self.hi.push(Reverse(b));
        } else if self.hi.len() > self.lo.len() {
            let Reverse(b) = self.hi.pop().unwrap();
            self.hi_sum -= b.value();
            self.lo_sum += b.value();
            self.lo.push(b);
        }
    }

    /// Σ |v − median| over everything pushed so far (lower median).
    fn cost(&self) -> f64 {
        match self.lo.peek() {
            None => 0.0,
            Some(med) => {
                let m = med.value();
                (m * self.lo.len() as f64 - self.lo_sum) + (self.hi_sum - m * self.hi.len() as f64)
            }
        }
    }
}

struct Builder<'a> {
    cols: &'a Columns,
    y: &'a [f64],
    params: &'a TreeParams,
    rng: DetRng,
    nodes: Vec<Node>,
    // Reused per node: (feature value, label) pairs sorted by value.
    scratch: Vec<(f64, f64)>,
    feature_pool: Vec<u32>,
    row_buf: Vec<u32>,
    left_cost: Vec<f64>,
    right_cost: Vec<f64>,
}

struct BestSplit {
    score: f64,
    feature: u32,
    threshold: f64,
}

impl<'a> Builder<'a> {
    fn label_stats(&self, rows: &[u32]) -> (f64, f64) {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for &r in rows {
            let v = self.y[r as usize];
            sum += v;
            sum_sq += v * v;
        }
        let m = rows.len() as f64;
        let mean = sum / m;
        let sse = (sum_sq - sum * sum / m).max(0.0);
        (mean, sse)
    }

    /// Distinct candidate features for this node, ascending.
    fn sample_features(&mut self) -> Vec<u32> {
        let d = self.cols.n_features();
        let k = ((self.params.max_features * d as f64).floor() as usize).clamp(1, d);
        if k == d {
            return (0..d as u32).collect();
        }
        // Partial Fisher-Yates over the persistent pool.
        for i in 0..k {
            let j = self.rng.gen_range(i..d);
            self.feature_pool.swap(i, j);
        }
        let mut picked: Vec<u32> = self.feature_pool[..k].to_vec();
        picked.sort_unstable();
        picked
    }

    fn fill_costs(&mut self, m: usize) {
        self.left_cost.clear();
        self.right_cost.clear();
        self.left_cost.resize(m + 1, 0.0);
        self.right_cost.resize(m + 1, 0.0);
        match self.params.criterion {
            SplitCriterion::VarianceReduction => {
                let mut sum = 0.0;
                let mut sum_sq = 0.0;
                for p in 1..=m {
                    let v = self.scratch[p - 1].1;
                    sum += v;
                    sum_sq += v * v;
                    self.left_cost[p] = (sum_sq - sum * sum / p as f64).max(0.0);
                }
                sum = 0.0;
                sum_sq = 0.0;
                for p in (0..m).rev() {
                    let v = self.scratch[p].1;
                    sum += v;
                    sum_sq += v * v;
                    let len = (m - p) as f64;
                    self.right_cost[p] = (sum_sq - sum * sum / len).max(0.0);
                }
            }
            SplitCriterion::AbsoluteError => {
                let mut acc = MedianCost::new();
                for p in 1..=m {
                    acc.push(self.scratch[p - 1].1);
                    self.left_cost[p] = acc.cost();
                }
                let mut acc = MedianCost::new();
                for p in (0..m).rev() {
                    acc.push(self.scratch[p].1);
                    self.right_cost[p] = acc.cost();
                }
            }
        }
    }

    fn find_split(&mut self, rows: &[u32]) -> Option<BestSplit> {
        let m = rows.len();
        let min_leaf = self.params.min_samples_leaf;
        let mut best: Option<BestSplit> = None;
        for feature in self.sample_features() {
            let col = &self.cols.cols[feature as usize];
            self.scratch.clear();
            self.scratch
                .extend(rows.iter().map(|&r| (col[r as usize], self.y[r as usize])));
            self.scratch
                .sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            if self.scratch[0].0 == self.scratch[m - 1].0 {
                continue; // constant feature on this node
            }
            self.fill_costs(m);
            for p in min_leaf..=m - min_leaf {
                let lo = self.scratch[p - 1].0;
                let hi = self.scratch[p].0;
                if lo == hi {
                    continue;
                }
                let score = self.left_cost[p] + self.right_cost[p];
                // Strict improvement keeps the lowest feature index and, within
                // a feature, the lowest threshold.
                if best.as_ref().map(|b| score < b.score).unwrap_or(true) {
                    // Midpoint, unless lo and hi are so close that it rounds
                    // onto hi — then routing `<= threshold` would starve the
                    // right child. lo itself realizes the same partition.
                    let mut threshold = 0.5 * (lo + hi);
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some(BestSplit {
                        score,
                        feature,
                        threshold,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, rows: &mut [u32], depth: usize) -> u32 {
        let (mean, sse) = self.label_stats(rows);
        let make_leaf = |nodes: &mut Vec<Node>| {
            nodes.push(Node::Leaf {
                value: mean,
                count: rows.len() as u32,
            });
            (nodes.len() - 1) as u32
        };
        let depth_exhausted = self.params.max_depth.map(|d| depth >= d).unwrap_or(false);
        if depth_exhausted || rows.len() < 2 * self.params.min_samples_leaf || sse <= 1e-12 {
            return make_leaf(&mut self.nodes);
        }
        let Some(split) = self.find_split(rows) else {
            return make_leaf(&mut self.nodes);
        };

        // Stable partition: left block keeps row order, then right block.
        let col = &self.cols.cols[split.feature as usize];
        self.row_buf.clear();
        let mut write = 0usize;
        for i in 0..rows.len() {
            let r = rows[i];
            if col[r as usize] <= split.threshold {
                rows[write] = r;
                write += 1;
            } else {
                self.row_buf.push(r);
            }
        }
        let split_at = write;
        rows[split_at..].copy_from_slice(&self.row_buf);

        let index = self.nodes.len() as u32;
        self.nodes.push(Node::Leaf { value: 0.0, count: 0 }); // patched below
        let (left_rows, right_rows) = rows.split_at_mut(split_at);
        let left = self.build(left_rows, depth + 1);
        let right = self.build(right_rows, depth + 1);
        self.nodes[index as usize] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        index
    }
}

/// Fit one tree on the rows listed in `row_indices` (duplicates allowed —
/// that is how bootstrap resamples arrive).
pub fn fit_tree_on(
    cols: &Columns,
    y: &[f64],
    row_indices: &[u32],
    params: &TreeParams,
    seed: u64,
) -> Result<DecisionTree> {
    params.check()?;
    if row_indices.is_empty() {
        return Err(MlError::EmptyInput("no rows to fit".into()));
    }
    if y.len() != cols.n_rows {
        return Err(MlError::LengthMismatch {
            left: y.len(),
            right: cols.n_rows,
        });
    }
    let mut builder = Builder {
        cols,
        y,
        params,
        rng: rng::child_rng(seed, 0),
        nodes: Vec::new(),
        scratch: Vec::new(),
        feature_pool: (0..cols.n_features() as u32).collect(),
        row_buf: Vec::new(),
        left_cost: Vec::new(),
        right_cost: Vec::new(),
    };
    let mut rows = row_indices.to_vec();
    let root = builder.build(&mut rows, 0);
    debug_assert_eq!(root, 0);
    Ok(DecisionTree {
        nodes: builder.nodes,
    })
}

/// Fit one tree on a full (x, y) set.
pub fn fit_tree(x: &[Vec<f64>], y: &[f64], params: &TreeParams, seed: u64) -> Result<DecisionTree> {
    let cols = Columns::from_rows(x)?;
    let rows: Vec<u32> = (0..x.len() as u32).collect();
    fit_tree_on(&cols, y, &rows, params, seed)
}
