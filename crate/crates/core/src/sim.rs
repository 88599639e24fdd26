//! Dense statevector simulation and exact Pauli-string expectation values.
//!
//! The state of n qubits is a vector of 2ⁿ complex amplitudes. Qubit 0 is
//! the leftmost tensor factor and therefore the most significant bit of a
//! state index. Rotation gates use the half-angle convention; global phase
//! is preserved. No renormalization is ever applied: unitarity has to hold
//! on its own, and norm drift is asserted rather than hidden.
//!
//! `pauli_expectation` runs in O(2ⁿ) per string via an index-mask and phase
//! traversal; enumerating all 4ⁿ strings therefore costs O(8ⁿ), which is the
//! exact-labeling cost the rest of the pipeline is built to avoid at
//! prediction time.

use crate::circuit::{Circuit, Gate, GateKind};
use crate::pauli::PauliString;
use crate::{CoreError, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Default cap on simulated qubits (2ⁿ amplitudes ≈ 1 MiB at n = 16; the
/// cap keeps accidental huge requests from thrashing the host).
pub const SIM_QUBIT_CAP: usize = 14;

/// Default cap for full 4ⁿ Pauli enumeration (the output vector alone is
/// 128 MiB at n = 12).
pub const PAULI_ENUM_QUBIT_CAP: usize = 12;

type Mat2 = [[Complex64; 2]; 2];

/// 2ⁿ complex amplitudes of a pure n-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0…0⟩ on n qubits.
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { n_qubits, amps }
    }

    /// Wrap raw amplitudes (length must be a power of two).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(CoreError::InvalidParameter(
                "amplitude vector length must be a nonzero power of two".into(),
            ));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probabilities of every computational basis outcome.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Apply an arbitrary one-qubit matrix. Used for gates and for the
    /// basis rotations of the shadow protocol.
    pub fn apply_one_qubit(&mut self, qubit: usize, m: &Mat2) {
        debug_assert!(qubit < self.n_qubits);
        let stride = 1usize << (self.n_qubits - 1 - qubit);
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += 2 * stride;
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << (self.n_qubits - 1 - control);
        let tmask = 1usize << (self.n_qubits - 1 - target);
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate.kind {
            GateKind::Cnot => self.apply_cnot(gate.qubits[0], gate.qubits[1]),
            kind => {
                let m = rotation_matrix(kind, gate.angle.expect("rotation carries an angle"));
                self.apply_one_qubit(gate.qubits[0], &m);
            }
        }
        debug_assert!(
            (self.norm_sqr() - 1.0).abs() < 1e-10,
            "norm drifted past 1e-10"
        );
    }
}

/// Half-angle rotation matrix for RX, RY, or RZ.
pub fn rotation_matrix(kind: GateKind, angle: f64) -> Mat2 {
    let h = 0.5 * angle;
    let (sin, cos) = h.sin_cos();
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        GateKind::Rx => [
            [Complex64::new(cos, 0.0), Complex64::new(0.0, -sin)],
            [Complex64::new(0.0, -sin), Complex64::new(cos, 0.0)],
        ],
        GateKind::Ry => [
            [Complex64::new(cos, 0.0), Complex64::new(-sin, 0.0)],
            [Complex64::new(sin, 0.0), Complex64::new(cos, 0.0)],
        ],
        GateKind::Rz => [
            [Complex64::new(cos, -sin), zero],
            [zero, Complex64::new(cos, sin)],
        ],
        GateKind::Cnot => unreachable!("cnot is not a one-qubit rotation"),
    }
}

/// Run a circuit on |0…0⟩ under the default qubit cap.
pub fn simulate(circuit: &Circuit) -> Result<Statevector> {
    simulate_with_cap(circuit, SIM_QUBIT_CAP)
}

/// Run a circuit on |0…0⟩, refusing widths beyond `cap`.
pub fn simulate_with_cap(circuit: &Circuit, cap: usize) -> Result<Statevector> {
    let n = circuit.n_qubits();
    if n > cap {
        return Err(CoreError::MemoryCap { n, cap });
    }
    let mut state = Statevector::zero_state(n);
    for gate in circuit.gates() {
        state.apply_gate(gate);
    }
    Ok(state)
}

/// Reverse the low `n` bits: converts qubit-aligned masks (bit q = qubit q)
/// into state-index-aligned masks (qubit 0 = most significant bit).
fn reverse_low_bits(mask: u64, n: usize) -> u64 {
    let mut out = 0u64;
    for q in 0..n {
        if (mask >> q) & 1 == 1 {
            out |= 1 << (n - 1 - q);
        }
    }
    out
}

/// Exact ⟨ψ|P|ψ⟩ via a single O(2ⁿ) mask-and-phase pass.
///
/// Decomposing each factor as X^x Z^z with Y = iXZ gives
/// P|b⟩ = i^{|Y|} (−1)^{b·z} |b ⊕ x⟩, so the expectation is a phase times
/// Σ_b (−1)^{b·z} ψ(b) ψ*(b ⊕ x).
pub fn pauli_expectation(state: &Statevector, p: &PauliString) -> Result<f64> {
    if p.n_qubits != state.n_qubits {
        return Err(CoreError::DimensionMismatch {
            state_qubits: state.n_qubits,
            operand_qubits: p.n_qubits,
        });
    }
    let n = state.n_qubits;
    let sx = reverse_low_bits(p.x_mask, n) as usize;
    let sz = reverse_low_bits(p.z_mask, n) as usize;
    let y_count = (p.x_mask & p.z_mask).count_ones();
    let amps = &state.amps;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &a) in amps.iter().enumerate() {
        let flipped = amps[k ^ sx];
        let term = a * flipped.conj();
        if (k & sz).count_ones() & 1 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    // i^{|Y|}: the remaining phase from Y = iXZ factors.
    let value = match y_count & 3 {
        0 => acc,
        1 => acc * Complex64::new(0.0, 1.0),
        2 => -acc,
        _ => acc * Complex64::new(0.0, -1.0),
    };
    debug_assert!(value.im.abs() < 1e-8, "hermitian expectation came out complex");
    Ok(value.re)
}

/// Expectations of every Pauli string in canonical order, under the default
/// enumeration cap.
pub fn all_pauli_expectations(state: &Statevector) -> Result<Vec<f64>> {
    all_pauli_expectations_with_cap(state, PAULI_ENUM_QUBIT_CAP)
}

/// Expectations of all 4ⁿ Pauli strings in canonical order. Strings are
/// evaluated independently (possibly in parallel) and written by index, so
/// the result is identical at any thread count.
pub fn all_pauli_expectations_with_cap(state: &Statevector, cap: usize) -> Result<Vec<f64>> {
    let n = state.n_qubits;
    if n > cap {
        return Err(CoreError::MemoryCap { n, cap });
    }
    let total = 1u64 << (2 * n);
    (0..total)
        .into_par_iter()
        .map(|k| {
            let p = PauliString::from_index(n, k)?;
            pauli_expectation(state, &p)
        })
        .collect()
}
