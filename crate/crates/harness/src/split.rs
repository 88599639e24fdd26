//! Dataset partition rules.
//!
//! `Random8020` is the in-distribution split; the three domain rules carve
//! the dataset into an in-domain part (which then gets its own seeded 80/20
//! train/test split) and an out-of-domain evaluation part. Gate-count
//! binning follows the 0–79 train / 80–99 evaluation convention; circuits
//! with exactly 100 gates fall outside both bins and are excluded (their
//! count is reported).

use crate::{HarnessError, Result};
use magic_core::features::DatasetRow;
use magic_core::rng::master_rng;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRule {
    /// Seeded shuffle, 80% train / 20% test, no extrapolation part.
    Random8020,
    /// Train on gate counts 0–79, extrapolate to 80–99, exclude 100.
    GateBins,
    /// Train on Trotter steps 1–4, extrapolate to step 5.
    TrotterSteps,
    /// Train on 2–5 qubits, extrapolate to 6.
    Qubits,
}

impl SplitRule {
    pub fn name(self) -> &'static str {
        match self {
            SplitRule::Random8020 => "random_80_20",
            SplitRule::GateBins => "gate_bins",
            SplitRule::TrotterSteps => "trotter_steps",
            SplitRule::Qubits => "qubits",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "random_80_20" => Some(SplitRule::Random8020),
            "gate_bins" => Some(SplitRule::GateBins),
            "trotter_steps" => Some(SplitRule::TrotterSteps),
            "qubits" => Some(SplitRule::Qubits),
            _ => None,
        }
    }

    pub fn is_extrapolation(self) -> bool {
        !matches!(self, SplitRule::Random8020)
    }
}

/// Row indices of one partition. Train, test, and extrapolation are
/// pairwise disjoint; together with `excluded` they cover all input rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub extrapolation: Vec<usize>,
    pub excluded: Vec<usize>,
}

fn shuffled_80_20(mut indices: Vec<usize>, seed: u64) -> (Vec<usize>, Vec<usize>) {
    indices.shuffle(&mut master_rng(seed));
    let n_train = (indices.len() * 4) / 5;
    let test = indices.split_off(n_train);
    (indices, test)
}

/// Partition `rows` under `rule`. The seed drives only the 80/20 shuffles;
/// domain membership is a pure function of each row.
pub fn partition(rows: &[DatasetRow], rule: SplitRule, seed: u64) -> Result<Split> {
    if rows.is_empty() {
        return Err(HarnessError::InsufficientRows { have: 0, need: 1 });
    }
    let in_domain = |r: &DatasetRow| -> Option<bool> {
        // Some(true) = in-domain, Some(false) = out-of-domain, None = excluded.
        match rule {
            SplitRule::Random8020 => Some(true),
            SplitRule::GateBins => match r.gate_count {
                0..=79 => Some(true),
                80..=99 => Some(false),
                _ => None,
            },
            SplitRule::TrotterSteps => match r.trotter_steps {
                1..=4 => Some(true),
                5 => Some(false),
                _ => None,
            },
            SplitRule::Qubits => match r.n_qubits {
                2..=5 => Some(true),
                6 => Some(false),
                _ => None,
            },
        }
    };

    let mut pool = Vec::new();
    let mut extrapolation = Vec::new();
    let mut excluded = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        match in_domain(row) {
            Some(true) => pool.push(i),
            Some(false) => extrapolation.push(i),
            None => excluded.push(i),
        }
    }
    if pool.is_empty() {
        return Err(HarnessError::EmptySplit {
            rule: rule.name().into(),
            side: "in-domain".into(),
        });
    }
    if rule.is_extrapolation() && extrapolation.is_empty() {
        return Err(HarnessError::EmptySplit {
            rule: rule.name().into(),
            side: "out-of-domain".into(),
        });
    }
    let (train, test) = shuffled_80_20(pool, seed);
    Ok(Split {
        train,
        test,
        extrapolation,
        excluded,
    })
}
