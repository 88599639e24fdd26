//! Runtime scaling analysis: exact labeling cost versus trained-model
//! training and prediction cost, per qubit count.
//!
//! All timings run inside a single-thread rayon scope so the exponential
//! exact-labeling curve and the per-circuit prediction times are measured
//! on identical footing. Each point averages over a fixed sample of
//! circuits drawn from a mid-depth gate window; three warmup circuits are
//! timed and discarded first.

use crate::report::{RuntimePoint, RuntimeReport};
use crate::{HarnessError, Result};
use magic_core::features::{assemble, circuit_level_features, Encoding};
use magic_core::generators::{gen_dataset, GeneratorConfig, RqcConfig};
use magic_core::rng::derive_seed;
use magic_core::shadows::ShadowMode;
use magic_core::sim::simulate;
use magic_core::sre::{label_dataset, sre, SreParams};
use magic_ml::forest::{fit_rfr, ForestParams};
use magic_ml::svr::{fit_svr, SvrParams};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct RuntimeSpec {
    /// Inclusive qubit range to sweep.
    pub qubit_range: (usize, usize),
    /// Circuits timed per point.
    pub samples: usize,
    /// Gate-count window the timed circuits are drawn from.
    pub gate_range: (usize, usize),
    /// Circuits per point used to train the timed models.
    pub train_count: usize,
    pub seed: u64,
    /// Timed-and-discarded circuits before measurement.
    pub warmup: usize,
}

impl Default for RuntimeSpec {
    fn default() -> Self {
        RuntimeSpec {
            qubit_range: (2, 6),
            samples: 50,
            gate_range: (40, 59),
            train_count: 400,
            seed: 1,
            warmup: 3,
        }
    }
}

fn fixed_forest_params() -> ForestParams {
    ForestParams {
        n_estimators: 100,
        max_depth: Some(20),
        max_features: 1.0 / 3.0,
        ..ForestParams::default()
    }
}

fn fixed_svr_params() -> SvrParams {
    SvrParams {
        c: 10.0,
        epsilon: 0.1,
        ..SvrParams::default()
    }
}

fn measure_point(spec: &RuntimeSpec, n: usize) -> Result<RuntimePoint> {
    let point_seed = derive_seed(spec.seed, n as u64);
    let params = SreParams::default();

    // Timed sample: mid-depth window, warmups prepended.
    let mut sample_cfg = RqcConfig::new(n, derive_seed(point_seed, 0), spec.samples + spec.warmup);
    sample_cfg.gate_count_range = spec.gate_range;
    let sample = gen_dataset(&GeneratorConfig::Rqc(sample_cfg))?;

    for circuit in &sample[..spec.warmup] {
        let state = simulate(circuit)?;
        let _ = sre(&state, &params)?;
    }
    let timed = &sample[spec.warmup..];
    let t0 = Instant::now();
    for circuit in timed {
        let state = simulate(circuit)?;
        let _ = sre(&state, &params)?;
    }
    let exact_sre_ms = t0.elapsed().as_secs_f64() * 1e3 / timed.len() as f64;

    // Models trained once per point on a separate corpus.
    let train_circuits = gen_dataset(&GeneratorConfig::Rqc(RqcConfig::new(
        n,
        derive_seed(point_seed, 1),
        spec.train_count,
    )))?;
    let labeled: Vec<_> = label_dataset(train_circuits, &params)
        .into_iter()
        .collect::<magic_core::Result<_>>()?;
    let ds = assemble(&labeled, Encoding::CircuitLevel, ShadowMode::Exact, false)?;
    let x: Vec<Vec<f64>> = ds.rows.iter().map(|r| r.features.clone()).collect();
    let y: Vec<f64> = ds.rows.iter().map(|r| r.label).collect();

    let t0 = Instant::now();
    let forest = fit_rfr(&x, &y, &fixed_forest_params(), derive_seed(point_seed, 2))?;
    let rfr_train_ms = t0.elapsed().as_secs_f64() * 1e3;

    let t0 = Instant::now();
    let (svr, _) = fit_svr(&x, &y, &fixed_svr_params())?;
    let svr_train_ms = t0.elapsed().as_secs_f64() * 1e3;

    // Per-circuit prediction time over the timed sample: one warmup batch,
    // then the mean over several batch repetitions.
    const PREDICT_REPS: usize = 5;
    let queries: Vec<Vec<f64>> = timed.iter().map(circuit_level_features).collect();
    let _ = forest.predict(&queries);
    let t0 = Instant::now();
    for _ in 0..PREDICT_REPS {
        let _ = forest.predict(&queries);
    }
    let rfr_predict_ms =
        t0.elapsed().as_secs_f64() * 1e3 / (PREDICT_REPS * queries.len()) as f64;

    let _ = svr.predict(&queries);
    let t0 = Instant::now();
    for _ in 0..PREDICT_REPS {
        let _ = svr.predict(&queries);
    }
    let svr_predict_ms =
        t0.elapsed().as_secs_f64() * 1e3 / (PREDICT_REPS * queries.len()) as f64;

    Ok(RuntimePoint {
        n_qubits: n,
        exact_sre_ms,
        rfr_train_ms,
        rfr_predict_ms_per_circuit: rfr_predict_ms,
        svr_train_ms,
        svr_predict_ms_per_circuit: svr_predict_ms,
    })
}

/// Sweep the qubit range and time each point, single-threaded.
pub fn run_runtime_analysis(spec: &RuntimeSpec) -> Result<RuntimeReport> {
    if spec.qubit_range.0 < 2 || spec.qubit_range.0 > spec.qubit_range.1 {
        return Err(HarnessError::Spec("bad qubit range".into()));
    }
    if spec.samples == 0 {
        return Err(HarnessError::Spec("samples must be ≥ 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(
        |e| HarnessError::Spec(format!("thread pool: {e}")),
    )?;
    let points: Result<Vec<RuntimePoint>> = pool.install(|| {
        (spec.qubit_range.0..=spec.qubit_range.1)
            .map(|n| measure_point(spec, n))
            .collect()
    });
    Ok(RuntimeReport {
        samples_per_point: spec.samples,
        gate_range: spec.gate_range,
        train_circuits_per_point: spec.train_count,
        seed: spec.seed,
        points: points?,
    })
}
