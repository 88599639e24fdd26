//! Pauli strings as bitmask pairs, plus the canonical orderings the rest of
//! the pipeline depends on.
//!
//! A string over n qubits is `(x_mask, z_mask)`: bit i of `x_mask` puts an X
//! factor on qubit i, bit i of `z_mask` a Z factor, both set a Y, neither the
//! identity. The canonical full ordering indexes all 4ⁿ strings by base-4
//! digits, qubit 0 as the most significant digit, digit values
//! 0=I, 1=X, 2=Y, 3=Z. The local-observable ordering lists all weight-1
//! strings first (qubit ascending, X<Y<Z), then weight-2 strings (qubit pair
//! (i<j) lexicographic, Pauli pairs XX, XY, XZ, YX, ..., ZZ).

use crate::{CoreError, Result};

/// One of the three non-identity single-qubit Paulis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// n-qubit tensor product of {I, X, Y, Z} encoded as two n-bit masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub n_qubits: usize,
    pub x_mask: u64,
    pub z_mask: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            n_qubits,
            x_mask: 0,
            z_mask: 0,
        }
    }

    /// Single-axis factor on one qubit.
    pub fn single(n_qubits: usize, qubit: usize, axis: Axis) -> Self {
        let mut p = PauliString::identity(n_qubits);
        p.set(qubit, Some(axis));
        p
    }

    /// Set (or clear) the factor on one qubit.
    pub fn set(&mut self, qubit: usize, axis: Option<Axis>) {
        debug_assert!(qubit < self.n_qubits);
        let bit = 1u64 << qubit;
        self.x_mask &= !bit;
        self.z_mask &= !bit;
        match axis {
            Some(Axis::X) => self.x_mask |= bit,
            Some(Axis::Y) => {
                self.x_mask |= bit;
                self.z_mask |= bit;
            }
            Some(Axis::Z) => self.z_mask |= bit,
            None => {}
        }
    }

    pub fn axis(&self, qubit: usize) -> Option<Axis> {
        let x = (self.x_mask >> qubit) & 1 == 1;
        let z = (self.z_mask >> qubit) & 1 == 1;
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (true, true) => Some(Axis::Y),
            (false, true) => Some(Axis::Z),
        }
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    /// Qubits on which the string acts non-trivially, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.x_mask | self.z_mask;
        (0..self.n_qubits).filter(move |q| (mask >> q) & 1 == 1)
    }

    /// Decode canonical index `k` in [0, 4ⁿ).
    pub fn from_index(n_qubits: usize, k: u64) -> Result<Self> {
        if n_qubits > 31 {
            return Err(CoreError::InvalidParameter(
                "pauli index space exceeds u64".into(),
            ));
        }
        if k >= 1u64 << (2 * n_qubits) {
            return Err(CoreError::InvalidParameter(format!(
                "pauli index {k} out of range for {n_qubits} qubits"
            )));
        }
        let mut p = PauliString::identity(n_qubits);
        for q in 0..n_qubits {
            let digit = (k >> (2 * (n_qubits - 1 - q))) & 3;
            let axis = match digit {
                0 => None,
                1 => Some(Axis::X),
                2 => Some(Axis::Y),
                _ => Some(Axis::Z),
            };
            p.set(q, axis);
        }
        Ok(p)
    }

    /// Canonical index of this string.
    pub fn index(&self) -> u64 {
        let mut k = 0u64;
        for q in 0..self.n_qubits {
            let digit = match self.axis(q) {
                None => 0,
                Some(Axis::X) => 1,
                Some(Axis::Y) => 2,
                Some(Axis::Z) => 3,
            };
            k |= digit << (2 * (self.n_qubits - 1 - q));
        }
        k
    }

    /// Human-readable label, e.g. `q0x` or `q0x_q2z`. Identity is `id`.
    pub fn label(&self) -> String {
        if self.weight() == 0 {
            return "id".to_string();
        }
        let parts: Vec<String> = self
            .support()
            .map(|q| format!("q{}{}", q, self.axis(q).unwrap().name()))
            .collect();
        parts.join("_")
    }
}

/// Number of 1- and 2-local observables on n qubits: 3n + 9·C(n,2).
pub fn local_feature_count(n: usize) -> usize {
    3 * n + 9 * n * (n - 1) / 2
}

/// The canonical ordered set of all Pauli strings of weight 1 or 2 on n
/// qubits. Length is [`local_feature_count`]; the order is a pure function
/// of n.
pub fn local_observables(n: usize) -> Vec<PauliString> {
    let mut out = Vec::with_capacity(local_feature_count(n));
    for q in 0..n {
        for axis in Axis::ALL {
            out.push(PauliString::single(n, q, axis));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for a in Axis::ALL {
                for b in Axis::ALL {
                    let mut p = PauliString::single(n, i, a);
                    p.set(j, Some(b));
                    out.push(p);
                }
            }
        }
    }
    out
}
