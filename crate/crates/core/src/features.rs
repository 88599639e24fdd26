//! Feature encodings, dataset assembly, CSV persistence, and the z-score
//! standardizer.
//!
//! The circuit-level encoding is 152 values: 50 binned-angle counts for each
//! of RX, RY, RZ (the interval [0, 2π) split into 50 half-open bins), the
//! CNOT count, and the qubit count. The shadow encoding is the 1-/2-local
//! Pauli expectation vector from [`crate::shadows`], optionally padded into
//! the 6-qubit layout so mixed-width datasets share columns. Combined is the
//! concatenation `[circuit_level ∥ shadow]`.

use crate::circuit::{Circuit, GateKind};
use crate::codec::{fmt_f64, Labeled};
use crate::pauli::{local_feature_count, local_observables};
use crate::rng::derive_seed;
use crate::shadows::{pad_features, shadow_features, ShadowMode};
use crate::sim::simulate;
use crate::{CoreError, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::path::Path;

/// Bumped whenever any column layout changes meaning.
pub const LAYOUT_VERSION: u32 = 1;

/// Number of angle bins per rotation kind.
pub const ANGLE_BINS: usize = 50;

/// Length of the circuit-level encoding: 3·50 bins + CNOT count + qubit count.
pub const CIRCUIT_LEVEL_LEN: usize = 3 * ANGLE_BINS + 2;

/// Padded shadow layouts always target the dataset-wide maximum of 6 qubits.
pub const PAD_LAYOUT_QUBITS: usize = 6;

/// The three feature encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    CircuitLevel,
    Shadow,
    Combined,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::CircuitLevel => "circuit_level",
            Encoding::Shadow => "shadow",
            Encoding::Combined => "combined",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "circuit_level" => Some(Encoding::CircuitLevel),
            "shadow" => Some(Encoding::Shadow),
            "combined" => Some(Encoding::Combined),
            _ => None,
        }
    }

    pub fn uses_shadow(self) -> bool {
        !matches!(self, Encoding::CircuitLevel)
    }
}

/// Bin index for one rotation angle: reduce mod 2π, then floor into one of
/// the 50 half-open bins [2πi/50, 2π(i+1)/50), clamping the top edge.
pub fn angle_bin(angle: f64) -> usize {
    let reduced = angle.rem_euclid(TAU);
    ((reduced / TAU * ANGLE_BINS as f64) as usize).min(ANGLE_BINS - 1)
}

/// The 152-value circuit-level encoding.
pub fn circuit_level_features(circuit: &Circuit) -> Vec<f64> {
    let mut out = vec![0.0f64; CIRCUIT_LEVEL_LEN];
    for gate in circuit.gates() {
        match gate.kind {
            GateKind::Cnot => out[3 * ANGLE_BINS] += 1.0,
            kind => {
                let block = match kind {
                    GateKind::Rx => 0,
                    GateKind::Ry => 1,
                    GateKind::Rz => 2,
                    GateKind::Cnot => unreachable!(),
                };
                out[block * ANGLE_BINS + angle_bin(gate.angle.unwrap())] += 1.0;
            }
        }
    }
    out[3 * ANGLE_BINS + 1] = circuit.n_qubits() as f64;
    out
}

/// Column names of the circuit-level encoding, in layout order.
pub fn circuit_level_names() -> Vec<String> {
    let mut names = Vec::with_capacity(CIRCUIT_LEVEL_LEN);
    for kind in ["rx", "ry", "rz"] {
        for b in 0..ANGLE_BINS {
            names.push(format!("{kind}_b{b:02}"));
        }
    }
    names.push("cnot".into());
    names.push("nq".into());
    names
}

/// Column names of the shadow encoding for a given layout width.
pub fn shadow_names(layout_n: usize) -> Vec<String> {
    local_observables(layout_n)
        .iter()
        .map(|p| p.label())
        .collect()
}

/// One assembled sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub id: usize,
    pub features: Vec<f64>,
    /// Exact S₂ label.
    pub label: f64,
    pub n_qubits: usize,
    pub gate_count: usize,
    /// 0 for RQC rows.
    pub trotter_steps: usize,
}

/// A feature matrix with labels and grouping keys. Row order always matches
/// the input order of the labeled circuits it was assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub encoding: Encoding,
    /// Width of the shadow layout when the encoding includes one.
    pub layout_n: Option<usize>,
    pub feature_names: Vec<String>,
    pub rows: Vec<DatasetRow>,
}

impl Dataset {
    pub fn width(&self) -> usize {
        self.feature_names.len()
    }

    pub fn labels(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.label).collect()
    }
}

fn shadow_layout(labeled: &[Labeled], pad: bool) -> Result<usize> {
    let mut ns: Vec<usize> = labeled.iter().map(|l| l.circuit.n_qubits()).collect();
    ns.sort_unstable();
    ns.dedup();
    if pad {
        if let Some(&max) = ns.iter().max() {
            if max > PAD_LAYOUT_QUBITS {
                return Err(CoreError::InvalidParameter(format!(
                    "padded layout holds up to {PAD_LAYOUT_QUBITS} qubits, dataset has {max}"
                )));
            }
        }
        return Ok(PAD_LAYOUT_QUBITS);
    }
    match ns.as_slice() {
        [] => Err(CoreError::EmptyInput("no labeled circuits".into())),
        [n] => Ok(*n),
        _ => Err(CoreError::MixedQubitCounts(ns)),
    }
}

/// Assemble a feature matrix from labeled circuits. Feature extraction is
/// parallel per row; `Sampled` shadow rows draw from per-row child seeds, so
/// the matrix is identical at any thread count. Row ids are input positions.
pub fn assemble(
    labeled: &[Labeled],
    encoding: Encoding,
    mode: ShadowMode,
    pad: bool,
) -> Result<Dataset> {
    if labeled.is_empty() {
        return Err(CoreError::EmptyInput("no labeled circuits".into()));
    }
    let layout_n = if encoding.uses_shadow() {
        Some(shadow_layout(labeled, pad)?)
    } else {
        None
    };
    let mut feature_names = Vec::new();
    if encoding != Encoding::Shadow {
        feature_names.extend(circuit_level_names());
    }
    if let Some(n) = layout_n {
        feature_names.extend(shadow_names(n));
    }

    let rows: Vec<DatasetRow> = labeled
        .par_iter()
        .enumerate()
        .map(|(id, l)| {
            let mut features = Vec::with_capacity(feature_names.len());
            if encoding != Encoding::Shadow {
                features.extend(circuit_level_features(&l.circuit));
            }
            if let Some(layout) = layout_n {
                let state = simulate(&l.circuit)?;
                let row_mode = match mode {
                    ShadowMode::Exact => ShadowMode::Exact,
                    ShadowMode::Sampled { shots, seed } => ShadowMode::Sampled {
                        shots,
                        seed: derive_seed(seed, id as u64),
                    },
                };
                let raw = shadow_features(&state, row_mode)?;
                let n = l.circuit.n_qubits();
                if n == layout {
                    features.extend(raw);
                } else {
                    features.extend(pad_features(&raw, n, layout)?);
                }
            }
            Ok(DatasetRow {
                id,
                features,
                label: l.sre,
                n_qubits: l.circuit.n_qubits(),
                gate_count: l.circuit.gate_count(),
                trotter_steps: l.circuit.meta().trotter_steps(),
            })
        })
        .collect::<Result<_>>()?;

    Ok(Dataset {
        encoding,
        layout_n,
        feature_names,
        rows,
    })
}

/// Write a dataset as CSV: header `id,<features...>,sre,n,gates,steps`,
/// floats at 17 significant digits.
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["id".to_string()];
    header.extend(dataset.feature_names.iter().cloned());
    header.extend(["sre", "n", "gates", "steps"].map(String::from));
    w.write_record(&header)?;
    for row in &dataset.rows {
        let mut rec = Vec::with_capacity(header.len());
        rec.push(row.id.to_string());
        rec.extend(row.features.iter().map(|v| fmt_f64(*v)));
        rec.push(fmt_f64(row.label));
        rec.push(row.n_qubits.to_string());
        rec.push(row.gate_count.to_string());
        rec.push(row.trotter_steps.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn infer_encoding(names: &[String]) -> Result<(Encoding, Option<usize>)> {
    let has_circuit = names.first().map(|n| n == "rx_b00").unwrap_or(false);
    let shadow_start = if has_circuit { CIRCUIT_LEVEL_LEN } else { 0 };
    let has_shadow = names
        .get(shadow_start)
        .map(|n| n.starts_with('q'))
        .unwrap_or(false);
    let encoding = match (has_circuit, has_shadow) {
        (true, true) => Encoding::Combined,
        (true, false) => Encoding::CircuitLevel,
        (false, true) => Encoding::Shadow,
        (false, false) => {
            return Err(CoreError::Malformed(
                "unrecognized feature columns".into(),
            ))
        }
    };
    let layout_n = if has_shadow {
        // Shadow widths are distinct per n, so the count pins the layout.
        let width = names.len() - shadow_start;
        (2..=16)
            .find(|&n| local_feature_count(n) == width)
            .map(Some)
            .ok_or_else(|| {
                CoreError::Malformed(format!("no shadow layout has {width} columns"))
            })?
    } else {
        None
    };
    Ok((encoding, layout_n))
}

/// Read a dataset back from CSV. The exact float formatting of
/// [`write_csv`] makes this a lossless inverse.
pub fn read_csv(path: &Path) -> Result<Dataset> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r
        .headers()?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if header.len() < 5 || header[0] != "id" || header[header.len() - 4..] != ["sre", "n", "gates", "steps"] {
        return Err(CoreError::Malformed(
            "csv header does not match the dataset schema".into(),
        ));
    }
    let feature_names: Vec<String> = header[1..header.len() - 4].to_vec();
    let (encoding, layout_n) = infer_encoding(&feature_names)?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let get = |i: usize| -> Result<&str> {
            record
                .get(i)
                .ok_or_else(|| CoreError::Malformed("short csv record".into()))
        };
        let parse_f = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| CoreError::Malformed(format!("bad float `{s}`")))
        };
        let parse_u = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| CoreError::Malformed(format!("bad integer `{s}`")))
        };
        let id = parse_u(get(0)?)?;
        let mut features = Vec::with_capacity(feature_names.len());
        for i in 0..feature_names.len() {
            features.push(parse_f(get(1 + i)?)?);
        }
        let base = 1 + feature_names.len();
        rows.push(DatasetRow {
            id,
            features,
            label: parse_f(get(base)?)?,
            n_qubits: parse_u(get(base + 1)?)?,
            gate_count: parse_u(get(base + 2)?)?,
            trotter_steps: parse_u(get(base + 3)?)?,
        });
    }
    Ok(Dataset {
        encoding,
        layout_n,
        feature_names,
        rows,
    })
}

/// Per-column z-score transform fitted on training rows only. Columns with
/// standard deviation below 1e-12 pass through unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    /// Fit on ≥ 2 training rows.
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(CoreError::EmptyInput(
                "standardizer needs at least two training rows".into(),
            ));
        }
        let d = rows[0].len();
        let m = rows.len() as f64;
        let mut mean = vec![0.0; d];
        for row in rows {
            for (j, v) in row.iter().enumerate() {
                mean[j] += v;
            }
        }
        for v in &mut mean {
            *v /= m;
        }
        let mut var = vec![0.0; d];
        for row in rows {
            for (j, v) in row.iter().enumerate() {
                var[j] += (v - mean[j]) * (v - mean[j]);
            }
        }
        let mut scale = vec![1.0; d];
        for j in 0..d {
            let std = (var[j] / m).sqrt();
            if std < 1e-12 {
                // Constant column: identity transform.
                mean[j] = 0.0;
                scale[j] = 1.0;
            } else {
                scale[j] = std;
            }
        }
        Ok(Standardizer { mean, scale })
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, v)| (v - self.mean[j]) / self.scale[j])
            .collect()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }

    pub fn inverse_transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, v)| v * self.scale[j] + self.mean[j])
            .collect()
    }
}
