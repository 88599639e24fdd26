//! Seeded construction of the two circuit families.
//!
//! RQC: a uniformly drawn number of gates, each gate picked uniformly from
//! {CNOT, RX, RY, RZ} with uniform qubit assignments and rotation angles
//! uniform over [0, 2π). TIM: the deterministic first-order Trotter circuit
//! of the transverse-field Ising chain, one `CNOT·RZ(2θ)·CNOT` block per
//! bond followed by an `RX(2φ)` layer per step.
//!
//! Everything is a pure function of (config, seed). Batch generation derives
//! per-circuit seeds with [`crate::rng::derive_seed`], so parallel runs are
//! byte-identical to sequential ones. Draw order within one RQC circuit is
//! fixed: gate count first, then per gate its kind (0=CNOT, 1=RX, 2=RY,
//! 3=RZ), then qubits, then the angle. A sampled TIM circuit draws
//! (T, θ, φ) in that order.

use crate::circuit::{Circuit, CircuitMeta, Gate};
use crate::rng::{derive_seed, DetRng};
use crate::{CoreError, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Configuration for the random-circuit family.
#[derive(Debug, Clone)]
pub struct RqcConfig {
    pub n_qubits: usize,
    /// Inclusive gate-count range; the default [0, 100] matches the dataset.
    pub gate_count_range: (usize, usize),
    pub master_seed: u64,
    pub count: usize,
}

impl RqcConfig {
    pub fn new(n_qubits: usize, master_seed: u64, count: usize) -> Self {
        RqcConfig {
            n_qubits,
            gate_count_range: (0, 100),
            master_seed,
            count,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(CoreError::InvalidParameter(
                "RQC generation needs n ≥ 2".into(),
            ));
        }
        if self.gate_count_range.0 > self.gate_count_range.1 {
            return Err(CoreError::InvalidParameter(
                "gate count range is inverted".into(),
            ));
        }
        Ok(())
    }
}

/// Configuration for the Trotterized Ising family.
#[derive(Debug, Clone)]
pub struct TimConfig {
    pub n_qubits: usize,
    /// Inclusive Trotter-step range, default [1, 5].
    pub trotter_step_range: (usize, usize),
    /// Sampling range for θ = JΔt, default [0, 2π).
    pub theta_range: (f64, f64),
    /// Sampling range for φ = hΔt, default [0, 2π).
    pub phi_range: (f64, f64),
    pub master_seed: u64,
    pub count: usize,
}

impl TimConfig {
    pub fn new(n_qubits: usize, master_seed: u64, count: usize) -> Self {
        TimConfig {
            n_qubits,
            trotter_step_range: (1, 5),
            theta_range: (0.0, TAU),
            phi_range: (0.0, TAU),
            master_seed,
            count,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(CoreError::InvalidParameter(
                "the Ising chain needs at least one bond (n ≥ 2)".into(),
            ));
        }
        if self.trotter_step_range.0 < 1 || self.trotter_step_range.0 > self.trotter_step_range.1 {
            return Err(CoreError::InvalidParameter(
                "trotter step range must satisfy 1 ≤ lo ≤ hi".into(),
            ));
        }
        Ok(())
    }
}

/// Generate one random circuit from `config` using `seed`.
pub fn gen_rqc(config: &RqcConfig, seed: u64) -> Result<Circuit> {
    config.check()?;
    let n = config.n_qubits;
    let mut rng = DetRng::seed_from_u64(seed);
    let (lo, hi) = config.gate_count_range;
    let gate_count = rng.gen_range(lo..=hi);
    let mut gates = Vec::with_capacity(gate_count);
    for _ in 0..gate_count {
        let kind = rng.gen_range(0..4u8);
        match kind {
            0 => {
                let control = rng.gen_range(0..n);
                // Uniform over the n-1 remaining qubits.
                let mut target = rng.gen_range(0..n - 1);
                if target >= control {
                    target += 1;
                }
                gates.push(Gate::cnot(control, target));
            }
            _ => {
                let qubit = rng.gen_range(0..n);
                let angle = rng.gen::<f64>() * TAU;
                gates.push(match kind {
                    1 => Gate::rx(qubit, angle),
                    2 => Gate::ry(qubit, angle),
                    _ => Gate::rz(qubit, angle),
                });
            }
        }
    }
    Circuit::new(n, gates, CircuitMeta::Rqc { seed, gate_count })
}

/// Build the deterministic TIM circuit for (n, T, θ, φ): per step, a
/// `CNOT(i,i+1) RZ(2θ)(i+1) CNOT(i,i+1)` block for each bond i = 0..n-2 in
/// ascending order, then `RX(2φ)` on every qubit. Gate count is T·(4n−3).
pub fn gen_tim(n: usize, trotter_steps: usize, theta: f64, phi: f64, seed: u64) -> Result<Circuit> {
    if n < 2 {
        return Err(CoreError::InvalidParameter(
            "the Ising chain needs at least one bond (n ≥ 2)".into(),
        ));
    }
    if trotter_steps < 1 {
        return Err(CoreError::InvalidParameter(
            "at least one Trotter step required".into(),
        ));
    }
    let mut gates = Vec::with_capacity(trotter_steps * (4 * n - 3));
    for _ in 0..trotter_steps {
        for i in 0..n - 1 {
            gates.push(Gate::cnot(i, i + 1));
            gates.push(Gate::rz(i + 1, 2.0 * theta));
            gates.push(Gate::cnot(i, i + 1));
        }
        for q in 0..n {
            gates.push(Gate::rx(q, 2.0 * phi));
        }
    }
    Circuit::new(
        n,
        gates,
        CircuitMeta::Tim {
            seed,
            trotter_steps,
            theta,
            phi,
        },
    )
}

/// Rebuild a TIM circuit from its metadata. Returns an error for RQC meta.
pub fn gen_tim_from_meta(n: usize, meta: &CircuitMeta) -> Result<Circuit> {
    match *meta {
        CircuitMeta::Tim {
            seed,
            trotter_steps,
            theta,
            phi,
        } => gen_tim(n, trotter_steps, theta, phi, seed),
        CircuitMeta::Rqc { .. } => Err(CoreError::InvalidParameter(
            "meta describes an RQC circuit".into(),
        )),
    }
}

/// Sample one TIM circuit: T uniform over the step range, θ and φ uniform
/// over their ranges, then the deterministic builder.
pub fn gen_tim_sampled(config: &TimConfig, seed: u64) -> Result<Circuit> {
    config.check()?;
    let mut rng = DetRng::seed_from_u64(seed);
    let (t_lo, t_hi) = config.trotter_step_range;
    let trotter_steps = rng.gen_range(t_lo..=t_hi);
    let theta = config.theta_range.0
        + rng.gen::<f64>() * (config.theta_range.1 - config.theta_range.0);
    let phi = config.phi_range.0 + rng.gen::<f64>() * (config.phi_range.1 - config.phi_range.0);
    gen_tim(config.n_qubits, trotter_steps, theta, phi, seed)
}

/// A family-tagged batch configuration.
#[derive(Debug, Clone)]
pub enum GeneratorConfig {
    Rqc(RqcConfig),
    Tim(TimConfig),
}

impl GeneratorConfig {
    pub fn count(&self) -> usize {
        match self {
            GeneratorConfig::Rqc(c) => c.count,
            GeneratorConfig::Tim(c) => c.count,
        }
    }
}

/// Generate the configured batch. Circuit `i` uses seed
/// `derive_seed(master_seed, i)`; output order is by index regardless of
/// thread count.
pub fn gen_dataset(config: &GeneratorConfig) -> Result<Vec<Circuit>> {
    match config {
        GeneratorConfig::Rqc(c) => {
            c.check()?;
            (0..c.count)
                .into_par_iter()
                .map(|i| gen_rqc(c, derive_seed(c.master_seed, i as u64)))
                .collect()
        }
        GeneratorConfig::Tim(c) => {
            c.check()?;
            (0..c.count)
                .into_par_iter()
                .map(|i| gen_tim_sampled(c, derive_seed(c.master_seed, i as u64)))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::codec;

    #[test]
    fn rqc_gate_counts_stay_in_range_and_validate() {
        let cfg = RqcConfig::new(3, 99, 0);
        for seed in 0..2000u64 {
            let c = gen_rqc(&cfg, seed).unwrap();
            assert!(c.gate_count() <= 100);
            c.validate().unwrap();
            match *c.meta() {
                CircuitMeta::Rqc { gate_count, .. } => assert_eq!(gate_count, c.gate_count()),
                _ => panic!("wrong family"),
            }
        }
    }

    #[test]
    fn rqc_is_deterministic() {
        let cfg = RqcConfig::new(4, 7, 0);
        let a = gen_rqc(&cfg, 123).unwrap();
        let b = gen_rqc(&cfg, 123).unwrap();
        assert_eq!(codec::serialize(&a), codec::serialize(&b));
    }

    #[test]
    fn rqc_gate_count_histogram_is_uniform() {
        // χ² over 10⁴ samples against uniform on [0, 100]; the 0.999 quantile
        // of χ²(100) is 149.449.
        let cfg = RqcConfig::new(2, 2024, 0);
        let mut hist = [0usize; 101];
        let samples = 10_000;
        for seed in 0..samples as u64 {
            hist[gen_rqc(&cfg, derive_seed(cfg.master_seed, seed)).unwrap().gate_count()] += 1;
        }
        let expected = samples as f64 / 101.0;
        let chi2: f64 = hist
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 149.449, "χ² = {chi2}");
    }

    #[test]
    fn rqc_angles_and_pairs_are_wellformed() {
        let cfg = RqcConfig::new(5, 31, 0);
        for seed in 0..500u64 {
            let c = gen_rqc(&cfg, seed).unwrap();
            for g in c.gates() {
                if let Some(a) = g.angle {
                    assert!((0.0..TAU).contains(&a));
                }
                if g.kind == GateKind::Cnot {
                    assert_ne!(g.qubits[0], g.qubits[1]);
                }
            }
        }
    }

    #[test]
    fn tim_gate_count_identity() {
        for (n, t, want) in [(2, 1, 5), (6, 1, 21), (6, 5, 105), (4, 3, 39)] {
            let c = gen_tim(n, t, 0.3, 0.7, 0).unwrap();
            assert_eq!(c.gate_count(), want);
            assert_eq!(c.gate_count(), t * (4 * n - 3));
        }
    }

    #[test]
    fn tim_two_qubit_single_step_layout() {
        let theta = 0.4;
        let phi = 1.1;
        let c = gen_tim(2, 1, theta, phi, 0).unwrap();
        let g = c.gates();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], Gate::cnot(0, 1));
        assert_eq!(g[1], Gate::rz(1, 2.0 * theta));
        assert_eq!(g[2], Gate::cnot(0, 1));
        assert_eq!(g[3], Gate::rx(0, 2.0 * phi));
        assert_eq!(g[4], Gate::rx(1, 2.0 * phi));
    }

    #[test]
    fn tim_meta_reproduces_circuit() {
        let cfg = TimConfig::new(5, 17, 64);
        let batch = gen_dataset(&GeneratorConfig::Tim(cfg)).unwrap();
        for c in &batch {
            let rebuilt = gen_tim_from_meta(c.n_qubits(), c.meta()).unwrap();
            assert_eq!(rebuilt.gates(), c.gates());
            let (lo, hi) = (1, 5);
            let t = c.meta().trotter_steps();
            assert!((lo..=hi).contains(&t));
        }
    }

    #[test]
    fn dataset_generation_is_reproducible() {
        let cfg = GeneratorConfig::Rqc(RqcConfig::new(3, 5, 200));
        let a = gen_dataset(&cfg).unwrap();
        let b = gen_dataset(&cfg).unwrap();
        let lines_a: Vec<_> = a.iter().map(codec::serialize).collect();
        let lines_b: Vec<_> = b.iter().map(codec::serialize).collect();
        assert_eq!(lines_a, lines_b);
    }
}
