//! ε-insensitive support vector regression.
//!
//! The dual is solved by sequential pairwise optimization: each iteration
//! picks the maximal-violating coordinate pair (one move that pushes the
//! weight sum up, one that pushes it down, chosen by a second-order gain
//! rule), takes the exact Newton step along that pair clipped to the
//! [0, C] boxes, and updates the cached decision values. The stopping rule
//! is the dual feasibility gap: the largest lower bound on the bias minus
//! the smallest upper bound must fall below `tol`, otherwise the fit errors
//! out after `max_iter` steps with the violation it reached. The solver is
//! single-threaded and scans in fixed index order, so fits are
//! bit-reproducible.
//!
//! Features are standardized inside `fit_svr` (per-column z-score, fitted on
//! the training rows it receives), which is also what keeps grid-search
//! folds leak-free: each fold fit standardizes only its own training part.

use crate::kernel::{dot, Kernel, ResolvedKernel};
use crate::{MlError, Result};
use magic_core::features::Standardizer;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrParams {
    pub kernel: Kernel,
    /// Box constraint C > 0.
    pub c: f64,
    /// Tube half-width ε ≥ 0.
    pub epsilon: f64,
    /// KKT tolerance for the stopping rule.
    pub tol: f64,
    /// Iteration cap; `None` picks `max(200·m, 200_000)`.
    pub max_iter: Option<usize>,
    /// Standardize features before solving (recommended; a warning is
    /// logged when disabled on data that does not look standardized).
    pub standardize: bool,
    /// Kernel row cache budget in bytes.
    pub cache_bytes: usize,
}

impl Default for SvrParams {
    fn default() -> Self {
        SvrParams {
            kernel: Kernel::rbf(),
            c: 1.0,
            epsilon: 0.1,
            tol: 1e-3,
            max_iter: None,
            standardize: true,
            cache_bytes: 256 << 20,
        }
    }
}

/// A fitted regressor: prediction is Σ coefᵢ·K(svᵢ, x) + bias on
/// standardized inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    pub kernel: ResolvedKernel,
    pub c: f64,
    pub epsilon: f64,
    /// Standardized support vectors.
    pub support_vectors: Vec<Vec<f64>>,
    /// α⁺ − α⁻ per support vector; |coef| ≤ C.
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
    pub standardizer: Standardizer,
}

impl SvrModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let xs = self.standardizer.transform_row(row);
        self.predict_standardized(&xs)
    }

    fn predict_standardized(&self, xs: &[f64]) -> f64 {
        self.bias
            + self
                .support_vectors
                .iter()
                .zip(&self.dual_coefs)
                .map(|(sv, c)| c * self.kernel.eval(sv, xs))
                .sum::<f64>()
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        // The linear kernel collapses to a single weight vector.
        if matches!(self.kernel, ResolvedKernel::Linear) {
            let d = self.standardizer.mean.len();
            let mut w = vec![0.0; d];
            for (sv, c) in self.support_vectors.iter().zip(&self.dual_coefs) {
                for (wj, xj) in w.iter_mut().zip(sv) {
                    *wj += c * xj;
                }
            }
            return rows
                .iter()
                .map(|r| dot(&w, &self.standardizer.transform_row(r)) + self.bias)
                .collect();
        }
        rows.iter().map(|r| self.predict_row(r)).collect()
    }

    pub fn support_vector_count(&self) -> usize {
        self.support_vectors.len()
    }
}

/// Solver diagnostics: final dual state and the violation at exit.
#[derive(Debug, Clone)]
pub struct SvrFitReport {
    pub iterations: usize,
    pub final_violation: f64,
    pub alpha_up: Vec<f64>,
    pub alpha_dn: Vec<f64>,
}

/// Bounded FIFO cache of kernel matrix rows.
struct KernelCache<'a> {
    x: &'a [Vec<f64>],
    kernel: ResolvedKernel,
    rows: Vec<Option<Box<[f64]>>>,
    fifo: VecDeque<usize>,
    cap_rows: usize,
}

impl<'a> KernelCache<'a> {
    fn new(x: &'a [Vec<f64>], kernel: ResolvedKernel, cache_bytes: usize) -> Self {
        let m = x.len();
        let cap_rows = (cache_bytes / (8 * m.max(1))).clamp(8, m.max(8));
        KernelCache {
            x,
            kernel,
            rows: vec![None; m],
            fifo: VecDeque::new(),
            cap_rows,
        }
    }

    fn row(&mut self, i: usize) -> &[f64] {
        if self.rows[i].is_none() {
            if self.fifo.len() >= self.cap_rows {
                if let Some(victim) = self.fifo.pop_front() {
                    self.rows[victim] = None;
                }
            }
            let xi = &self.x[i];
            let row: Box<[f64]> = self.x.iter().map(|xj| self.kernel.eval(xi, xj)).collect();
            self.rows[i] = Some(row);
            self.fifo.push_back(i);
        }
        self.rows[i].as_ref().unwrap()
    }
}

/// One coordinate of the paired update: which point and which of its two
/// dual variables moves.
#[derive(Clone, Copy, Debug)]
struct MoveRef {
    index: usize,
    /// true = the α⁺ variable, false = the α⁻ variable.
    plus_side: bool,
}

struct Solver<'a> {
    y: &'a [f64],
    c: f64,
    eps: f64,
    alpha_up: Vec<f64>,
    alpha_dn: Vec<f64>,
    /// fᵢ = Σⱼ (α⁺ⱼ − α⁻ⱼ) K(i, j), the decision value without bias.
    f: Vec<f64>,
    diag: Vec<f64>,
}

const CURVATURE_FLOOR: f64 = 1e-12;

impl<'a> Solver<'a> {
    /// Largest lower bound and smallest upper bound on the bias, with the
    /// moves that realize them. Ties keep the lowest index.
    fn select(&self) -> (Option<(f64, MoveRef)>, Option<(f64, MoveRef)>) {
        let mut best_low: Option<(f64, MoveRef)> = None;
        let mut best_up: Option<(f64, MoveRef)> = None;
        for i in 0..self.y.len() {
            let residual = self.y[i] - self.f[i];
            let low_plus = residual - self.eps; // from increasing α⁺
            let up_sides = [
                (self.alpha_up[i] > 0.0, low_plus, true), // decreasing α⁺
                (self.alpha_dn[i] < self.c, residual + self.eps, false), // increasing α⁻
            ];
            let low_sides = [
                (self.alpha_up[i] < self.c, low_plus, true),
                (self.alpha_dn[i] > 0.0, residual + self.eps, false),
            ];
            for (ok, value, plus_side) in low_sides {
                if ok && best_low.map(|(v, _)| value > v).unwrap_or(true) {
                    best_low = Some((value, MoveRef { index: i, plus_side }));
                }
            }
            for (ok, value, plus_side) in up_sides {
                if ok && best_up.map(|(v, _)| value < v).unwrap_or(true) {
                    best_up = Some((value, MoveRef { index: i, plus_side }));
                }
            }
        }
        (best_low, best_up)
    }

    /// Second-order partner choice: among down-moves strictly below `b_low`,
    /// maximize (b_low − U)² / curvature along the pair.
    fn select_partner(&self, b_low: f64, k_uu: f64, row_u: &[f64]) -> Option<(f64, MoveRef)> {
        let mut best: Option<(f64, f64, MoveRef)> = None; // (gain, value, move)
        for i in 0..self.y.len() {
            let residual = self.y[i] - self.f[i];
            let candidates = [
                (self.alpha_up[i] > 0.0, residual - self.eps, true),
                (self.alpha_dn[i] < self.c, residual + self.eps, false),
            ];
            for (ok, value, plus_side) in candidates {
                if !ok || value >= b_low {
                    continue;
                }
                let curv = (k_uu + self.diag[i] - 2.0 * row_u[i]).max(CURVATURE_FLOOR);
                let gap = b_low - value;
                let gain = gap * gap / curv;
                if best.map(|(g, _, _)| gain > g).unwrap_or(true) {
                    best = Some((gain, value, MoveRef { index: i, plus_side }));
                }
            }
        }
        best.map(|(_, value, mv)| (value, mv))
    }

    fn headroom(&self, mv: MoveRef, is_up_move: bool) -> f64 {
        match (is_up_move, mv.plus_side) {
            (true, true) => self.c - self.alpha_up[mv.index], // α⁺ grows
            (true, false) => self.alpha_dn[mv.index],         // α⁻ shrinks
            (false, true) => self.alpha_up[mv.index],         // α⁺ shrinks
            (false, false) => self.c - self.alpha_dn[mv.index], // α⁻ grows
        }
    }

    fn apply(&mut self, mv: MoveRef, is_up_move: bool, delta: f64, at_bound: bool) {
        let i = mv.index;
        match (is_up_move, mv.plus_side) {
            (true, true) => {
                self.alpha_up[i] = if at_bound { self.c } else { self.alpha_up[i] + delta }
            }
            (true, false) => {
                self.alpha_dn[i] = if at_bound { 0.0 } else { self.alpha_dn[i] - delta }
            }
            (false, true) => {
                self.alpha_up[i] = if at_bound { 0.0 } else { self.alpha_up[i] - delta }
            }
            (false, false) => {
                self.alpha_dn[i] = if at_bound { self.c } else { self.alpha_dn[i] + delta }
            }
        }
        debug_assert!(
            (0.0..=self.c).contains(&self.alpha_up[i])
                && (0.0..=self.c).contains(&self.alpha_dn[i]),
            "dual box constraint violated"
        );
    }
}

fn solve(
    xs: &[Vec<f64>],
    y: &[f64],
    kernel: &ResolvedKernel,
    params: &SvrParams,
) -> Result<(Vec<f64>, f64, SvrFitReport)> {
    let m = xs.len();
    let max_iter = params.max_iter.unwrap_or_else(|| (200 * m).max(200_000));
    let mut cache = KernelCache::new(xs, *kernel, params.cache_bytes);
    let mut solver = Solver {
        y,
        c: params.c,
        eps: params.epsilon,
        alpha_up: vec![0.0; m],
        alpha_dn: vec![0.0; m],
        f: vec![0.0; m],
        diag: (0..m).map(|i| kernel.eval(&xs[i], &xs[i])).collect(),
    };

    let mut iterations = 0usize;
    let (bias, violation) = loop {
        let (low, up) = solver.select();
        let (Some((b_low, up_move)), Some((b_up, _))) = (low, up) else {
            // One side has no movable coordinate; cannot improve further.
            break (0.0, 0.0);
        };
        let violation = b_low - b_up;
        if violation <= params.tol {
            break (0.5 * (b_low + b_up), violation);
        }
        if iterations >= max_iter {
            return Err(MlError::NotConverged {
                violation,
                tolerance: params.tol,
                iterations,
            });
        }

        let u = up_move.index;
        let k_uu = solver.diag[u];
        let (partner_value, down_move) = {
            let row_u = cache.row(u);
            solver
                .select_partner(b_low, k_uu, row_u)
                .expect("a violating pair exists whenever the gap exceeds tol")
        };
        let v = down_move.index;
        let k_uv = cache.row(u)[v];
        let curv = (k_uu + solver.diag[v] - 2.0 * k_uv).max(CURVATURE_FLOOR);
        let raw_step = (b_low - partner_value) / curv;
        let room_u = solver.headroom(up_move, true);
        let room_v = solver.headroom(down_move, false);
        let delta = raw_step.min(room_u).min(room_v);
        debug_assert!(delta > 0.0, "selected pair must admit a positive step");
        solver.apply(up_move, true, delta, delta >= room_u);
        solver.apply(down_move, false, delta, delta >= room_v);

        // Decision values: w_u went up by δ, w_v down by δ.
        {
            let row_u = cache.row(u);
            for (fi, k) in solver.f.iter_mut().zip(row_u) {
                *fi += delta * k;
            }
        }
        {
            let row_v = cache.row(v);
            for (fi, k) in solver.f.iter_mut().zip(row_v) {
                *fi -= delta * k;
            }
        }
        iterations += 1;
    };

    let coefs: Vec<f64> = solver
        .alpha_up
        .iter()
        .zip(&solver.alpha_dn)
        .map(|(up, dn)| up - dn)
        .collect();
    Ok((
        coefs,
        bias,
        SvrFitReport {
            iterations,
            final_violation: violation,
            alpha_up: solver.alpha_up,
            alpha_dn: solver.alpha_dn,
        },
    ))
}

/// Fit an SVR. Returns the model plus solver diagnostics; errors out if the
/// optimizer hits its iteration cap first.
pub fn fit_svr(x: &[Vec<f64>], y: &[f64], params: &SvrParams) -> Result<(SvrModel, SvrFitReport)> {
    if x.is_empty() {
        return Err(MlError::EmptyInput("no training rows".into()));
    }
    if x.len() != y.len() {
        return Err(MlError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if !(params.c > 0.0) {
        return Err(MlError::InvalidParameter("C must be positive".into()));
    }
    if !(params.epsilon >= 0.0) {
        return Err(MlError::InvalidParameter("epsilon must be ≥ 0".into()));
    }
    if !(params.tol > 0.0) {
        return Err(MlError::InvalidParameter("tol must be positive".into()));
    }

    let d = x[0].len();
    let standardizer = if params.standardize && x.len() >= 2 {
        Standardizer::fit(x)?
    } else {
        if params.standardize {
            // Single row: nothing to fit, identity is the only choice.
        } else if looks_unscaled(x) {
            log::warn!("svr: features do not look standardized; fits may condition poorly");
        }
        Standardizer {
            mean: vec![0.0; d],
            scale: vec![1.0; d],
        }
    };
    let xs = standardizer.transform(x);
    let kernel = params.kernel.resolve(&xs);
    let (coefs, bias, report) = solve(&xs, y, &kernel, params)?;

    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for (i, &w) in coefs.iter().enumerate() {
        if w != 0.0 {
            support_vectors.push(xs[i].clone());
            dual_coefs.push(w);
        }
    }
    Ok((
        SvrModel {
            kernel,
            c: params.c,
            epsilon: params.epsilon,
            support_vectors,
            dual_coefs,
            bias,
            standardizer,
        },
        report,
    ))
}

fn looks_unscaled(x: &[Vec<f64>]) -> bool {
    let d = x[0].len();
    let m = x.len() as f64;
    (0..d).any(|j| {
        let mean = x.iter().map(|r| r[j]).sum::<f64>() / m;
        let var = x.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / m;
        mean.abs() > 1.0 || var > 100.0
    })
}
