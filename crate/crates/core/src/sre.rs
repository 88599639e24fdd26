//! Exact stabilizer Rényi entropy — the label every model in this workspace
//! is trained to predict.
//!
//! For a pure state, Ξ_P = ⟨P⟩²/2ⁿ is a probability distribution over the
//! 4ⁿ Pauli strings, and
//!
//!   S_α = 1/(1−α) · ln( Σ_P Ξ_P^α ) − n·ln 2
//!
//! which is zero exactly on stabilizer states for α ≥ 2. Logarithms are
//! natural throughout ([`LOG_BASE_NOTE`]); α defaults to 2 and the pipeline
//! only exercises that value.

use crate::circuit::Circuit;
use crate::codec::Labeled;
use crate::sim::{all_pauli_expectations, simulate, Statevector};
use crate::{CoreError, Result};
use rayon::prelude::*;
use std::time::Instant;

/// All entropies in this crate use the natural logarithm; reporting in
/// another base is a single division by `ln(base)` at the call site.
pub const LOG_BASE_NOTE: &str = "natural";

/// Raw results in [-REPORT_CLAMP, 0) are floating-point dips below the true
/// zero; reports clamp them to 0, the raw API does not.
pub const REPORT_CLAMP: f64 = 1e-9;

/// Entropy order. Only α ≥ 2 keeps the "stabilizer ⇒ 0" guarantee the test
/// suites rely on, so smaller orders are rejected at construction.
#[derive(Debug, Clone, Copy)]
pub struct SreParams {
    alpha: f64,
}

impl SreParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 2.0) {
            return Err(CoreError::InvalidParameter(format!(
                "alpha must be ≥ 2, got {alpha}"
            )));
        }
        Ok(SreParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for SreParams {
    fn default() -> Self {
        SreParams { alpha: 2.0 }
    }
}

/// The normalized squared-Pauli-expectation distribution of a pure state,
/// in canonical Pauli order.
#[derive(Debug, Clone)]
pub struct XiDistribution {
    pub n_qubits: usize,
    pub values: Vec<f64>,
}

impl XiDistribution {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Ξ_P = ⟨P⟩²/2ⁿ for every Pauli string, canonical order.
pub fn xi_distribution(state: &Statevector) -> Result<XiDistribution> {
    let norm = (1u64 << state.n_qubits()) as f64;
    let values = all_pauli_expectations(state)?
        .into_iter()
        .map(|e| e * e / norm)
        .collect();
    Ok(XiDistribution {
        n_qubits: state.n_qubits(),
        values,
    })
}

fn sre_from_xi(xi: &XiDistribution, params: &SreParams) -> f64 {
    let alpha = params.alpha;
    let sum: f64 = if alpha == 2.0 {
        xi.values.iter().map(|x| x * x).sum()
    } else {
        xi.values.iter().map(|x| x.powf(alpha)).sum()
    };
    sum.ln() / (1.0 - alpha) - (xi.n_qubits as f64) * std::f64::consts::LN_2
}

/// Exact S_α of a pure state. Unclamped: tiny negative values (within
/// [`REPORT_CLAMP`] of zero) are returned as-is.
pub fn sre(state: &Statevector, params: &SreParams) -> Result<f64> {
    Ok(sre_from_xi(&xi_distribution(state)?, params))
}

/// Clamp a raw entropy for reporting: values in [-REPORT_CLAMP, 0) become 0.
pub fn clamp_for_report(raw: f64) -> f64 {
    if raw < 0.0 && raw >= -REPORT_CLAMP {
        0.0
    } else {
        raw
    }
}

/// Label a batch of circuits with their exact S₂ (clamped for reporting)
/// and the wall time each label took. Per-item failures are recorded in
/// place and the batch continues; output order matches input order at any
/// thread count.
pub fn label_dataset(circuits: Vec<Circuit>, params: &SreParams) -> Vec<Result<Labeled>> {
    circuits
        .into_par_iter()
        .map(|circuit| {
            let start = Instant::now();
            let state = simulate(&circuit)?;
            let raw = sre(&state, params)?;
            let label_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(Labeled {
                circuit,
                sre: clamp_for_report(raw),
                label_ms,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, CircuitMeta, Gate};
    use crate::generators::{gen_rqc, RqcConfig};
    use crate::testkit;

    const LN_4_3: f64 = 0.2876820724517809; // ln(4/3)

    fn rqc_meta() -> CircuitMeta {
        CircuitMeta::Rqc {
            seed: 0,
            gate_count: 0,
        }
    }

    fn t_state_circuit() -> Circuit {
        // RZ(π/4)·RY(π/2)|0⟩: ⟨X⟩ = ⟨Y⟩ = 1/√2, ⟨Z⟩ = 0.
        Circuit::new(
            1,
            vec![
                Gate::ry(0, std::f64::consts::FRAC_PI_2),
                Gate::rz(0, std::f64::consts::FRAC_PI_4),
            ],
            rqc_meta(),
        )
        .unwrap()
    }

    #[test]
    fn xi_of_zero_state() {
        let s = Statevector::zero_state(1);
        let xi = xi_distribution(&s).unwrap();
        assert_eq!(xi.values.len(), 4);
        for (got, want) in xi.values.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((xi.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xi_of_t_state() {
        let s = simulate(&t_state_circuit()).unwrap();
        let xi = xi_distribution(&s).unwrap();
        for (got, want) in xi.values.iter().zip([0.5, 0.25, 0.25, 0.0]) {
            assert!((got - want).abs() < 1e-12, "{:?}", xi.values);
        }
    }

    #[test]
    fn stabilizer_xi_is_flat_on_its_group() {
        // Every stabilizer state has exactly 2ⁿ nonzero Ξ entries, each 1/2ⁿ.
        for seed in 0..20u64 {
            let c = testkit::clifford_angle_circuit(3, 30, seed);
            let s = simulate(&c).unwrap();
            let xi = xi_distribution(&s).unwrap();
            let nonzero: Vec<f64> = xi
                .values
                .iter()
                .copied()
                .filter(|x| *x > 1e-12)
                .collect();
            assert_eq!(nonzero.len(), 8, "seed {seed}");
            assert!(nonzero.iter().all(|x| (x - 0.125).abs() < 1e-10));
        }
    }

    #[test]
    fn zero_state_has_zero_entropy() {
        for n in 1..=5 {
            let s = Statevector::zero_state(n);
            assert!(sre(&s, &SreParams::default()).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn t_state_entropy_is_ln_4_3() {
        let s = simulate(&t_state_circuit()).unwrap();
        let got = sre(&s, &SreParams::default()).unwrap();
        assert!((got - LN_4_3).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn disjoint_t_states_add() {
        let pair = testkit::disjoint_union(&t_state_circuit(), &t_state_circuit());
        let s = simulate(&pair).unwrap();
        let got = sre(&s, &SreParams::default()).unwrap();
        assert!((got - 2.0 * LN_4_3).abs() < 1e-9, "got {got}");
        // Same number through the brute-force dense oracle.
        assert!((testkit::dense_sre(&s, 2.0) - 2.0 * LN_4_3).abs() < 1e-9);
    }

    #[test]
    fn clifford_angle_circuits_have_zero_entropy() {
        for seed in 0..30u64 {
            let n = 2 + (seed % 4) as usize;
            let c = testkit::clifford_angle_circuit(n, 40, seed);
            let s = simulate(&c).unwrap();
            let raw = sre(&s, &SreParams::default()).unwrap();
            assert!(raw.abs() <= 1e-9, "n={n} seed={seed}: {raw}");
            assert!(raw >= -REPORT_CLAMP);
            assert_eq!(clamp_for_report(raw).max(0.0), clamp_for_report(raw));
        }
    }

    #[test]
    fn appending_clifford_gates_preserves_entropy() {
        let params = SreParams::default();
        for seed in 0..10u64 {
            let base = gen_rqc(&RqcConfig::new(3, 21, 0), seed).unwrap();
            let s0 = sre(&simulate(&base).unwrap(), &params).unwrap();
            let extended = testkit::append_clifford_gates(&base, 5, seed + 100);
            let s1 = sre(&simulate(&extended).unwrap(), &params).unwrap();
            assert!((s0 - s1).abs() < 1e-8, "seed {seed}: {s0} vs {s1}");
        }
    }

    #[test]
    fn additivity_on_random_disjoint_pairs() {
        let params = SreParams::default();
        for seed in 0..12u64 {
            let na = 1 + (seed % 2) as usize;
            let nb = 2;
            let a = gen_rqc(&RqcConfig::new(na.max(2), 51, 0), seed).unwrap();
            let b = gen_rqc(&RqcConfig::new(nb, 52, 0), seed + 500).unwrap();
            let sa = sre(&simulate(&a).unwrap(), &params).unwrap();
            let sb = sre(&simulate(&b).unwrap(), &params).unwrap();
            let joint = testkit::disjoint_union(&a, &b);
            let sj = sre(&simulate(&joint).unwrap(), &params).unwrap();
            assert!((sj - sa - sb).abs() < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn matches_dense_oracle_up_to_three_qubits() {
        let params = SreParams::default();
        for n in 2..=3usize {
            for seed in 0..8u64 {
                let c = gen_rqc(&RqcConfig::new(n, 61, 0), seed).unwrap();
                let s = simulate(&c).unwrap();
                let fast = sre(&s, &params).unwrap();
                let brute = testkit::dense_sre(&s, 2.0);
                assert!((fast - brute).abs() < 1e-10, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn alpha_below_two_is_rejected() {
        assert!(SreParams::new(1.5).is_err());
        assert!(SreParams::new(f64::NAN).is_err());
        assert!(SreParams::new(3.0).is_ok());
    }

    #[test]
    fn labeling_is_deterministic_and_timed() {
        let circuits: Vec<Circuit> = (0..20)
            .map(|i| gen_rqc(&RqcConfig::new(3, 71, 0), i).unwrap())
            .collect();
        let a = label_dataset(circuits.clone(), &SreParams::default());
        let b = label_dataset(circuits, &SreParams::default());
        for (ra, rb) in a.iter().zip(&b) {
            let (ra, rb) = (ra.as_ref().unwrap(), rb.as_ref().unwrap());
            assert_eq!(ra.sre, rb.sre);
            assert!(ra.label_ms > 0.0);
            assert!(ra.sre >= 0.0);
        }
        // Empty circuit labels to exactly zero.
        let empty = Circuit::new(2, vec![], rqc_meta()).unwrap();
        let out = label_dataset(vec![empty], &SreParams::default());
        let labeled = out[0].as_ref().unwrap();
        assert_eq!(labeled.sre, 0.0);
        assert!(labeled.label_ms > 0.0);
    }
}
