//! Line-oriented circuit serialization.
//!
//! One JSON object per circuit per line, keys in fixed order
//! `v, n, family, seed, g | t, theta, phi, gates`, each gate as
//! `{"k":"cnot","q":[c,t]}` or `{"k":"rx","q":[i],"a":<radians>}`.
//! Angles are printed with 17 significant digits, which round-trips every
//! f64 exactly, so `serialize ∘ deserialize ∘ serialize` is byte-identical.
//! Labeled lines append `sre` (17 significant digits) and `label_ms`
//! (timing; excluded from determinism comparisons).
//!
//! The writer is hand-rolled to pin the exact byte layout; the reader goes
//! through `serde_json` and accepts any key order plus unknown trailing
//! fields.

use crate::circuit::{Circuit, CircuitMeta, Gate, GateKind, ValidationPolicy};
use crate::{CoreError, Result};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Current schema version; bumped on any incompatible layout change.
pub const SCHEMA_VERSION: u64 = 1;

/// Format a float with 17 significant digits (exact f64 round trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_gates(out: &mut String, gates: &[Gate]) {
    out.push('[');
    for (i, g) in gates.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("{\"k\":\"");
        out.push_str(g.kind.name());
        out.push_str("\",\"q\":[");
        for (j, q) in g.qubits.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{q}");
        }
        out.push(']');
        if let Some(a) = g.angle {
            let _ = write!(out, ",\"a\":{}", fmt_f64(a));
        }
        out.push('}');
    }
    out.push(']');
}

fn serialize_prefix(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"v\":{},\"n\":{},\"family\":\"{}\",\"seed\":{}",
        SCHEMA_VERSION,
        circuit.n_qubits(),
        circuit.meta().family().name(),
        circuit.meta().seed()
    );
    match *circuit.meta() {
        CircuitMeta::Rqc { gate_count, .. } => {
            let _ = write!(out, ",\"g\":{gate_count}");
        }
        CircuitMeta::Tim {
            trotter_steps,
            theta,
            phi,
            ..
        } => {
            let _ = write!(
                out,
                ",\"t\":{},\"theta\":{},\"phi\":{}",
                trotter_steps,
                fmt_f64(theta),
                fmt_f64(phi)
            );
        }
    }
    out.push_str(",\"gates\":");
    write_gates(&mut out, circuit.gates());
    out
}

/// Serialize one circuit to its canonical single-line form.
pub fn serialize(circuit: &Circuit) -> String {
    let mut out = serialize_prefix(circuit);
    out.push('}');
    out
}

/// Serialize a labeled circuit: the canonical circuit line with `sre` and
/// `label_ms` appended.
pub fn serialize_labeled(circuit: &Circuit, sre: f64, label_ms: f64) -> String {
    let mut out = serialize_prefix(circuit);
    let _ = write!(out, ",\"sre\":{},\"label_ms\":{label_ms:.3}", fmt_f64(sre));
    out.push('}');
    out
}

fn field<'a>(obj: &'a serde_json::Value, key: &str) -> Result<&'a serde_json::Value> {
    obj.get(key)
        .ok_or_else(|| CoreError::Malformed(format!("missing field `{key}`")))
}

fn as_u64(v: &serde_json::Value, key: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| CoreError::Malformed(format!("field `{key}` is not an unsigned integer")))
}

fn as_f64(v: &serde_json::Value, key: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| CoreError::Malformed(format!("field `{key}` is not a number")))
}

fn parse_gate(v: &serde_json::Value, index: usize) -> Result<Gate> {
    let kind_name = field(v, "k")?
        .as_str()
        .ok_or_else(|| CoreError::Malformed(format!("gate {index}: `k` is not a string")))?;
    let kind = GateKind::from_name(kind_name)
        .ok_or_else(|| CoreError::Malformed(format!("gate {index}: unknown gate `{kind_name}`")))?;
    let qubits = field(v, "q")?
        .as_array()
        .ok_or_else(|| CoreError::Malformed(format!("gate {index}: `q` is not an array")))?
        .iter()
        .map(|q| as_u64(q, "q").map(|x| x as usize))
        .collect::<Result<Vec<_>>>()?;
    let angle = match v.get("a") {
        Some(a) => Some(as_f64(a, "a")?),
        None => None,
    };
    Ok(Gate {
        kind,
        qubits,
        angle,
    })
}

fn parse_circuit(obj: &serde_json::Value) -> Result<Circuit> {
    let v = as_u64(field(obj, "v")?, "v")?;
    if v != SCHEMA_VERSION {
        return Err(CoreError::SchemaVersion {
            found: v,
            expected: SCHEMA_VERSION,
        });
    }
    let n = as_u64(field(obj, "n")?, "n")? as usize;
    let family = field(obj, "family")?
        .as_str()
        .ok_or_else(|| CoreError::Malformed("`family` is not a string".into()))?;
    let seed = as_u64(field(obj, "seed")?, "seed")?;
    let meta = match family {
        "RQC" => CircuitMeta::Rqc {
            seed,
            gate_count: as_u64(field(obj, "g")?, "g")? as usize,
        },
        "TIM" => CircuitMeta::Tim {
            seed,
            trotter_steps: as_u64(field(obj, "t")?, "t")? as usize,
            theta: as_f64(field(obj, "theta")?, "theta")?,
            phi: as_f64(field(obj, "phi")?, "phi")?,
        },
        other => return Err(CoreError::Malformed(format!("unknown family `{other}`"))),
    };
    let gates = field(obj, "gates")?
        .as_array()
        .ok_or_else(|| CoreError::Malformed("`gates` is not an array".into()))?
        .iter()
        .enumerate()
        .map(|(i, g)| parse_gate(g, i))
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(n, gates, meta)
}

/// Parse one circuit line and validate it under `policy`.
pub fn deserialize_with(line: &str, policy: ValidationPolicy) -> Result<Circuit> {
    let obj: serde_json::Value =
        serde_json::from_str(line).map_err(|e| CoreError::Malformed(e.to_string()))?;
    let circuit = parse_circuit(&obj)?;
    circuit.validate_with(policy)?;
    Ok(circuit)
}

/// Parse one circuit line under the default width policy.
pub fn deserialize(line: &str) -> Result<Circuit> {
    deserialize_with(line, ValidationPolicy::default())
}

/// A parsed labeled line: circuit plus its exact S₂ label and the wall time
/// the labeling took (absent on unlabeled lines the caller chose to accept).
#[derive(Debug, Clone, PartialEq)]
pub struct Labeled {
    pub circuit: Circuit,
    pub sre: f64,
    pub label_ms: f64,
}

/// Parse one labeled circuit line (a circuit line with `sre` present).
pub fn deserialize_labeled(line: &str) -> Result<Labeled> {
    let obj: serde_json::Value =
        serde_json::from_str(line).map_err(|e| CoreError::Malformed(e.to_string()))?;
    let circuit = parse_circuit(&obj)?;
    circuit.validate()?;
    let sre = as_f64(field(&obj, "sre")?, "sre")?;
    let label_ms = match obj.get("label_ms") {
        Some(v) => as_f64(v, "label_ms")?,
        None => 0.0,
    };
    Ok(Labeled {
        circuit,
        sre,
        label_ms,
    })
}

/// Stream circuits to a JSONL file (UTF-8, LF line endings).
pub fn write_circuits(path: &Path, circuits: &[Circuit]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for c in circuits {
        w.write_all(serialize(c).as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read every circuit line of a JSONL file under the default policy.
pub fn read_circuits(path: &Path) -> Result<Vec<Circuit>> {
    let r = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(deserialize(&line)?);
    }
    Ok(out)
}

/// Stream labeled circuits to a JSONL file.
pub fn write_labeled(path: &Path, rows: &[Labeled]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for row in rows {
        w.write_all(serialize_labeled(&row.circuit, row.sre, row.label_ms).as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read every labeled line of a JSONL file.
pub fn read_labeled(path: &Path) -> Result<Vec<Labeled>> {
    let r = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(deserialize_labeled(&line)?);
    }
    Ok(out)
}
