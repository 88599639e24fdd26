//! Dense-matrix reference oracles for the test suites.
//!
//! Everything here materializes full 2ⁿ×2ⁿ operators and does textbook
//! matrix algebra — deliberately slow, deliberately independent of the
//! mask-based kernels in [`crate::sim`] and the entropy code in
//! [`crate::sre`], so the two routes can check each other. Only practical
//! for n ≤ 4 or so.

use crate::circuit::{Circuit, Gate, GateKind};
use crate::pauli::{Axis, PauliString};
use crate::sim::{rotation_matrix, Statevector};
use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let dim = self.dim * other.dim;
        let mut out = DenseMatrix::zeros(dim);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.at(r1, c1);
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        out.set(
                            r1 * other.dim + r2,
                            c1 * other.dim + c2,
                            a * other.at(r2, c2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| self.at(r, c) * x[c])
                    .sum::<Complex64>()
            })
            .collect()
    }
}

fn mat2(m: [[Complex64; 2]; 2]) -> DenseMatrix {
    DenseMatrix {
        dim: 2,
        data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
    }
}

/// The 2×2 Pauli matrix for one axis.
pub fn pauli_matrix(axis: Axis) -> DenseMatrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        Axis::X => mat2([[z, one], [one, z]]),
        Axis::Y => mat2([[z, -i], [i, z]]),
        Axis::Z => mat2([[one, z], [z, -one]]),
    }
}

/// Materialize a Pauli string as its full 2ⁿ×2ⁿ matrix, qubit 0 as the
/// leftmost Kronecker factor.
pub fn dense_pauli_matrix(p: &PauliString) -> DenseMatrix {
    let mut m = DenseMatrix::identity(1);
    for q in 0..p.n_qubits {
        let factor = match p.axis(q) {
            None => DenseMatrix::identity(2),
            Some(axis) => pauli_matrix(axis),
        };
        m = m.kron(&factor);
    }
    m
}

/// ⟨ψ|P|ψ⟩ by explicit matrix-vector product.
pub fn dense_pauli_expectation(state: &Statevector, p: &PauliString) -> f64 {
    let m = dense_pauli_matrix(p);
    let px = m.matvec(state.amplitudes());
    let acc: Complex64 = state
        .amplitudes()
        .iter()
        .zip(&px)
        .map(|(a, b)| a.conj() * b)
        .sum();
    acc.re
}

/// Full 2ⁿ×2ⁿ matrix of one gate acting on an n-qubit register.
pub fn dense_gate_matrix(gate: &Gate, n_qubits: usize) -> DenseMatrix {
    match gate.kind {
        GateKind::Cnot => {
            // Permutation matrix from the action on basis states.
            let dim = 1usize << n_qubits;
            let cbit = n_qubits - 1 - gate.qubits[0];
            let tbit = n_qubits - 1 - gate.qubits[1];
            let mut m = DenseMatrix::zeros(dim);
            for col in 0..dim {
                let row = if (col >> cbit) & 1 == 1 {
                    col ^ (1 << tbit)
                } else {
                    col
                };
                m.set(row, col, Complex64::new(1.0, 0.0));
            }
            m
        }
        kind => {
            let g = mat2(rotation_matrix(kind, gate.angle.unwrap()));
            let mut m = DenseMatrix::identity(1);
            for q in 0..n_qubits {
                let factor = if q == gate.qubits[0] {
                    g.clone()
                } else {
                    DenseMatrix::identity(2)
                };
                m = m.kron(&factor);
            }
            m
        }
    }
}

/// Simulate by explicit full-matrix products — the oracle for the mask
/// kernels in [`crate::sim`].
pub fn dense_simulate(circuit: &Circuit) -> Statevector {
    let dim = 1usize << circuit.n_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(1.0, 0.0);
    for gate in circuit.gates() {
        let m = dense_gate_matrix(gate, circuit.n_qubits());
        amps = m.matvec(&amps);
    }
    Statevector::from_amplitudes(amps).unwrap()
}

/// Stabilizer Rényi entropy by brute force: every Pauli matrix is
/// materialized and traced against |ψ⟩⟨ψ|, then the α-entropy of the
/// normalized squared-expectation distribution is taken (natural log).
pub fn dense_sre(state: &Statevector, alpha: f64) -> f64 {
    let n = state.n_qubits();
    let mut sum = 0.0f64;
    for k in 0..1u64 << (2 * n) {
        let p = PauliString::from_index(n, k).unwrap();
        let e = dense_pauli_expectation(state, &p);
        let xi = e * e / (1u64 << n) as f64;
        sum += xi.powf(alpha);
    }
    sum.ln() / (1.0 - alpha) - (n as f64) * std::f64::consts::LN_2
}

/// A random circuit whose every rotation angle is a multiple of π/2, so
/// every gate is Clifford (up to phase) and the output state is a stabilizer
/// state. Same sampling shape as the RQC generator otherwise.
pub fn clifford_angle_circuit(n_qubits: usize, gate_count: usize, seed: u64) -> Circuit {
    use crate::circuit::CircuitMeta;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = crate::rng::DetRng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(gate_count);
    for _ in 0..gate_count {
        gates.push(random_clifford_gate(n_qubits, &mut rng));
    }
    Circuit::new(
        n_qubits,
        gates,
        CircuitMeta::Rqc {
            seed,
            gate_count,
        },
    )
    .unwrap()
}

fn random_clifford_gate(n_qubits: usize, rng: &mut crate::rng::DetRng) -> Gate {
    use rand::Rng;
    match rng.gen_range(0..4u8) {
        0 if n_qubits >= 2 => {
            let control = rng.gen_range(0..n_qubits);
            let mut target = rng.gen_range(0..n_qubits - 1);
            if target >= control {
                target += 1;
            }
            Gate::cnot(control, target)
        }
        kind => {
            let qubit = rng.gen_range(0..n_qubits);
            let angle = rng.gen_range(0..4u8) as f64 * std::f64::consts::FRAC_PI_2;
            match kind {
                0 | 1 => Gate::rx(qubit, angle),
                2 => Gate::ry(qubit, angle),
                _ => Gate::rz(qubit, angle),
            }
        }
    }
}

/// Append `count` random Clifford-angle gates to a circuit.
pub fn append_clifford_gates(base: &Circuit, count: usize, seed: u64) -> Circuit {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = crate::rng::DetRng::seed_from_u64(seed);
    let mut gates = base.gates().to_vec();
    for _ in 0..count {
        gates.push(random_clifford_gate(base.n_qubits(), &mut rng));
    }
    Circuit::new(base.n_qubits(), gates, base.meta().clone()).unwrap()
}

/// Place two circuits on disjoint qubit blocks of one wider register:
/// `a` keeps its qubit indices, `b` is shifted up by `a.n_qubits()`.
pub fn disjoint_union(a: &Circuit, b: &Circuit) -> Circuit {
    use crate::circuit::CircuitMeta;
    let n = a.n_qubits() + b.n_qubits();
    let mut gates = a.gates().to_vec();
    for g in b.gates() {
        let mut shifted = g.clone();
        for q in &mut shifted.qubits {
            *q += a.n_qubits();
        }
        gates.push(shifted);
    }
    let gate_count = gates.len();
    Circuit::new(
        n,
        gates,
        CircuitMeta::Rqc {
            seed: 0,
            gate_count,
        },
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitMeta;
    use crate::sim::simulate;

    #[test]
    fn dense_cnot_flips_conditionally() {
        let c = Circuit::new(
            2,
            vec![Gate::rx(0, std::f64::consts::PI), Gate::cnot(0, 1)],
            CircuitMeta::Rqc {
                seed: 0,
                gate_count: 2,
            },
        )
        .unwrap();
        let s = dense_simulate(&c);
        // RX(π)|0⟩ = -i|1⟩ on qubit 0, CNOT propagates it to qubit 1: state index 3.
        assert!((s.amplitudes()[3].norm() - 1.0).abs() < 1e-12);
        let fast = simulate(&c).unwrap();
        for (a, b) in fast.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn dense_sre_of_zero_state_vanishes() {
        for n in 1..=3 {
            let s = Statevector::zero_state(n);
            assert!(dense_sre(&s, 2.0).abs() < 1e-12);
        }
    }
}
