//! Quantum-circuit intermediate representation shared by every stage of the
//! pipeline.
//!
//! The gate set is `CNOT` plus the three single-qubit rotations `RX`, `RY`,
//! `RZ` in the half-angle convention (`RX(θ) = exp(-iθX/2)`). Angles are
//! stored exactly as generated, in radians, unnormalized; reduction into
//! `[0, 2π)` happens only at feature-binning time.

use crate::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// The four supported gate kinds. CNOT carries no angle; the rotations carry
/// exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Cnot,
    Rx,
    Ry,
    Rz,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Cnot => "cnot",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "cnot" => Some(GateKind::Cnot),
            "rx" => Some(GateKind::Rx),
            "ry" => Some(GateKind::Ry),
            "rz" => Some(GateKind::Rz),
            _ => None,
        }
    }

    pub fn is_rotation(self) -> bool {
        !matches!(self, GateKind::Cnot)
    }
}

/// One gate instance. For CNOT, `qubits` is `[control, target]`; for
/// rotations it is the single target qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    /// Rotation angle in radians; `None` exactly when `kind` is CNOT.
    pub angle: Option<f64>,
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate {
            kind: GateKind::Cnot,
            qubits: vec![control, target],
            angle: None,
        }
    }

    pub fn rx(qubit: usize, angle: f64) -> Self {
        Gate {
            kind: GateKind::Rx,
            qubits: vec![qubit],
            angle: Some(angle),
        }
    }

    pub fn ry(qubit: usize, angle: f64) -> Self {
        Gate {
            kind: GateKind::Ry,
            qubits: vec![qubit],
            angle: Some(angle),
        }
    }

    pub fn rz(qubit: usize, angle: f64) -> Self {
        Gate {
            kind: GateKind::Rz,
            qubits: vec![qubit],
            angle: Some(angle),
        }
    }

    fn check(&self, index: usize, n_qubits: usize) -> Result<()> {
        let bad = |reason: &str| {
            Err(CoreError::InvalidGate {
                index,
                reason: reason.to_string(),
            })
        };
        match self.kind {
            GateKind::Cnot => {
                if self.qubits.len() != 2 {
                    return bad("cnot takes exactly two qubits");
                }
                if self.qubits[0] == self.qubits[1] {
                    return bad("duplicate qubits");
                }
                if self.angle.is_some() {
                    return bad("cnot carries no angle");
                }
            }
            _ => {
                if self.qubits.len() != 1 {
                    return bad("rotation takes exactly one qubit");
                }
                if self.angle.is_none() {
                    return bad("missing angle");
                }
            }
        }
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= n_qubits) {
            return Err(CoreError::InvalidGate {
                index,
                reason: format!("index out of range: qubit {q} on {n_qubits}-qubit circuit"),
            });
        }
        if let Some(a) = self.angle {
            if !a.is_finite() {
                return bad("angle is not finite");
            }
        }
        Ok(())
    }
}

/// Which generator family a circuit came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Rqc,
    Tim,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Rqc => "RQC",
            Family::Tim => "TIM",
        }
    }
}

/// Generation metadata. A TIM circuit is fully reproducible from its meta
/// (the deterministic builder re-derives the exact gate list); an RQC
/// circuit records its per-circuit seed and sampled gate count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CircuitMeta {
    Rqc {
        seed: u64,
        /// Sampled gate count G.
        gate_count: usize,
    },
    Tim {
        seed: u64,
        /// Trotter steps T ≥ 1.
        trotter_steps: usize,
        /// θ = JΔt in radians; every ZZ block applies RZ(2θ).
        theta: f64,
        /// φ = hΔt in radians; every field layer applies RX(2φ).
        phi: f64,
    },
}

impl CircuitMeta {
    pub fn family(&self) -> Family {
        match self {
            CircuitMeta::Rqc { .. } => Family::Rqc,
            CircuitMeta::Tim { .. } => Family::Tim,
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            CircuitMeta::Rqc { seed, .. } | CircuitMeta::Tim { seed, .. } => seed,
        }
    }

    /// Trotter steps for TIM circuits, 0 for RQC (used as a grouping key).
    pub fn trotter_steps(&self) -> usize {
        match *self {
            CircuitMeta::Tim { trotter_steps, .. } => trotter_steps,
            CircuitMeta::Rqc { .. } => 0,
        }
    }
}

/// Width policy for [`Circuit::validate_with`]. The pipeline default is the
/// 2..=6 qubit range the datasets cover; callers doing standalone simulation
/// can widen it.
#[derive(Debug, Clone, Copy)]
pub struct ValidationPolicy {
    pub min_qubits: usize,
    pub max_qubits: usize,
}

impl Default for ValidationPolicy {
    fn default() -> Self {
        ValidationPolicy {
            min_qubits: 2,
            max_qubits: 6,
        }
    }
}

/// An ordered gate list over `n_qubits` qubits plus generation metadata.
/// Immutable after construction; gate order is semantically significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    meta: CircuitMeta,
}

impl Circuit {
    /// Build a circuit, checking every structural gate invariant (qubit
    /// indices in range, CNOT control ≠ target, angle present exactly on
    /// rotations). Width policy is checked separately by [`Self::validate_with`].
    pub fn new(n_qubits: usize, gates: Vec<Gate>, meta: CircuitMeta) -> Result<Self> {
        if n_qubits == 0 {
            return Err(CoreError::InvalidParameter(
                "circuit needs at least one qubit".into(),
            ));
        }
        for (i, g) in gates.iter().enumerate() {
            g.check(i, n_qubits)?;
        }
        Ok(Circuit {
            n_qubits,
            gates,
            meta,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn meta(&self) -> &CircuitMeta {
        &self.meta
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Re-check all invariants under the default 2..=6 qubit policy.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(ValidationPolicy::default())
    }

    /// Re-check all invariants under an explicit width policy. Reports the
    /// first violation found.
    pub fn validate_with(&self, policy: ValidationPolicy) -> Result<()> {
        if self.n_qubits < policy.min_qubits || self.n_qubits > policy.max_qubits {
            return Err(CoreError::QubitRange {
                n: self.n_qubits,
                min: policy.min_qubits,
                max: policy.max_qubits,
            });
        }
        for (i, g) in self.gates.iter().enumerate() {
            g.check(i, self.n_qubits)?;
        }
        Ok(())
    }
}
