//! Acceptance suite. Each test is one numbered criterion with pinned
//! tolerances; it prints a single `ACCEPTANCE <id> ... PASS` line when it
//! holds and panics with the measured numbers when it does not.
//!
//! Corpora are desk scale (2,000 random circuits and 400 Ising circuits per
//! qubit count, one fifth of the full datasets) so the whole suite stays in
//! the tens of minutes on a laptop. Heavy criteria serialize on a mutex so
//! wall-time measurements do not fight each other for cores.

use magic_core::circuit::{Circuit, CircuitMeta, Gate};
use magic_core::codec::Labeled;
use magic_core::features::{
    assemble, circuit_level_features, write_csv, Encoding, CIRCUIT_LEVEL_LEN,
};
use magic_core::generators::{gen_dataset, gen_rqc, GeneratorConfig, RqcConfig, TimConfig};
use magic_core::pauli::local_feature_count;
use magic_core::rng::derive_seed;
use magic_core::shadows::{shadow_features, ShadowMode};
use magic_core::sim::simulate;
use magic_core::sre::{label_dataset, sre, SreParams};
use magic_core::testkit;
use magic_harness::experiment::{run_extrapolation, run_interpolation, ExperimentSpec, ModelKind};
use magic_harness::report::CellReport;
use magic_harness::runtime::{run_runtime_analysis, RuntimeSpec};
use magic_harness::split::SplitRule;
use magic_ml::cv::{ModelGrid, RfrGrid, SvrGrid};
use magic_ml::kernel::Kernel;
use magic_ml::metrics::{mse, variance};
use magic_ml::svr::{fit_svr, SvrParams};
use magic_ml::tree::{fit_tree, TreeParams};
use once_cell::sync::Lazy;
use std::sync::Mutex;

/// Serializes the compute-heavy criteria.
static HEAVY: Mutex<()> = Mutex::new(());

const LN_4_3: f64 = 0.2876820724517809;

fn label_all(circuits: Vec<Circuit>) -> Vec<Labeled> {
    label_dataset(circuits, &SreParams::default())
        .into_iter()
        .map(|r| r.expect("desk corpus labels cleanly"))
        .collect()
}

/// Desk-scale RQC corpus: 2,000 labeled circuits per qubit count 2..=6.
static RQC_DESK: Lazy<Vec<Labeled>> = Lazy::new(|| {
    let mut all = Vec::with_capacity(10_000);
    for n in 2..=6 {
        let cfg = GeneratorConfig::Rqc(RqcConfig::new(n, 0xACC0 + n as u64, 2_000));
        all.extend(label_all(gen_dataset(&cfg).expect("rqc corpus")));
    }
    all
});

/// Desk-scale TIM corpus: 400 labeled circuits per qubit count 2..=6.
static TIM_DESK: Lazy<Vec<Labeled>> = Lazy::new(|| {
    let mut all = Vec::with_capacity(2_000);
    for n in 2..=6 {
        let cfg = GeneratorConfig::Tim(TimConfig::new(n, 0x7EA0 + n as u64, 400));
        all.extend(label_all(gen_dataset(&cfg).expect("tim corpus")));
    }
    all
});

fn rqc_at(n: usize) -> Vec<Labeled> {
    RQC_DESK
        .iter()
        .filter(|l| l.circuit.n_qubits() == n)
        .cloned()
        .collect()
}

fn tim_at(n: usize) -> Vec<Labeled> {
    TIM_DESK
        .iter()
        .filter(|l| l.circuit.n_qubits() == n)
        .cloned()
        .collect()
}

/// Lean SVR grid used by the experiment criteria.
fn svr_grid() -> ModelGrid {
    ModelGrid::Svr(SvrGrid {
        c: vec![1.0, 10.0, 100.0],
        epsilon: vec![0.01, 0.1],
        kernel: vec![Kernel::rbf()],
        ..SvrGrid::default()
    })
}

/// Lean extrapolation grids: one RFR cell, two SVR cells.
fn rfr_grid_lean() -> ModelGrid {
    ModelGrid::Rfr(RfrGrid {
        n_estimators: vec![80],
        max_depth: vec![Some(16)],
        max_features: vec![1.0 / 3.0],
        ..RfrGrid::default()
    })
}

fn svr_grid_lean() -> ModelGrid {
    ModelGrid::Svr(SvrGrid {
        c: vec![1.0, 10.0],
        epsilon: vec![0.1],
        kernel: vec![Kernel::rbf()],
        ..SvrGrid::default()
    })
}

fn spec(
    name: &str,
    dataset: &str,
    model: ModelKind,
    grid: ModelGrid,
    split: SplitRule,
) -> ExperimentSpec {
    ExperimentSpec {
        name: name.to_string(),
        dataset_label: dataset.to_string(),
        encoding: Encoding::CircuitLevel,
        model,
        split,
        seed: 0xD15C,
        shadow_mode: ShadowMode::Exact,
        pad_shadow: false,
        grid,
        cv_folds: 3,
    }
}

// --- Criterion 1: exact-SRE correctness -----------------------------------

#[test]
fn acceptance_1_exact_sre_correctness() {
    let params = SreParams::default();

    // 1a: 100 seeded Clifford-angle circuits across n = 2..5 label to zero.
    let mut checked = 0;
    for seed in 0..100u64 {
        let n = 2 + (seed % 4) as usize;
        let circuit = testkit::clifford_angle_circuit(n, 40, 0xC11F + seed);
        let value = sre(&simulate(&circuit).unwrap(), &params).unwrap();
        assert!(
            value.abs() <= 1e-9,
            "criterion 1a: stabilizer circuit n={n} seed={seed} gave S₂={value}"
        );
        checked += 1;
    }
    assert_eq!(checked, 100);

    // 1b: single-qubit T-state hits ln(4/3) to 1e-9.
    let t_state = Circuit::new(
        1,
        vec![
            Gate::ry(0, std::f64::consts::FRAC_PI_2),
            Gate::rz(0, std::f64::consts::FRAC_PI_4),
        ],
        CircuitMeta::Rqc { seed: 0, gate_count: 2 },
    )
    .unwrap();
    let t_value = sre(&simulate(&t_state).unwrap(), &params).unwrap();
    assert!(
        (t_value - LN_4_3).abs() <= 1e-9,
        "criterion 1b: T-state S₂={t_value}, want ln(4/3)={LN_4_3}"
    );

    // 1c: additivity over 50 random disjoint pairs with n_A + n_B ≤ 5.
    for pair in 0..50u64 {
        let na = 2 + (pair % 2) as usize; // 2 or 3
        let nb = if na == 2 { 2 + (pair % 2) as usize } else { 2 }; // total ≤ 5
        let a = gen_rqc(&RqcConfig::new(na, 0xADD0, 0), pair).unwrap();
        let b = gen_rqc(&RqcConfig::new(nb, 0xADD1, 0), pair + 1000).unwrap();
        let sa = sre(&simulate(&a).unwrap(), &params).unwrap();
        let sb = sre(&simulate(&b).unwrap(), &params).unwrap();
        let joint = testkit::disjoint_union(&a, &b);
        let sj = sre(&simulate(&joint).unwrap(), &params).unwrap();
        assert!(
            (sj - sa - sb).abs() <= 1e-8,
            "criterion 1c: pair {pair} additivity residual {}",
            (sj - sa - sb).abs()
        );
    }

    // 1d: brute-force dense-matrix oracle agreement for n ≤ 3.
    for n in 2..=3usize {
        for seed in 0..10u64 {
            let c = gen_rqc(&RqcConfig::new(n, 0xB00F + n as u64, 0), seed).unwrap();
            let state = simulate(&c).unwrap();
            let fast = sre(&state, &params).unwrap();
            let brute = testkit::dense_sre(&state, 2.0);
            assert!(
                (fast - brute).abs() <= 1e-10,
                "criterion 1d: n={n} seed={seed} |{fast} - {brute}|"
            );
        }
    }
    println!("ACCEPTANCE 1 exact-SRE correctness: PASS");
}

// --- Criterion 2: shadow-estimator fidelity --------------------------------

#[test]
fn acceptance_2_shadow_estimator_fidelity() {
    let _guard = HEAVY.lock().unwrap();
    let n_local1 = 3 * 4; // weight-1 features at n=4 come first
    let mut within = 0usize;
    let mut total = 0usize;
    let mut errors_10k: Vec<f64> = Vec::new();
    let mut errors_40k: Vec<f64> = Vec::new();

    for i in 0..20u64 {
        let circuit = gen_rqc(&RqcConfig::new(4, 0x5AD0, 0), i).unwrap();
        let state = simulate(&circuit).unwrap();
        let exact = shadow_features(&state, ShadowMode::Exact).unwrap();
        let sampled = shadow_features(
            &state,
            ShadowMode::Sampled { shots: 10_000, seed: derive_seed(0x5AD1, i) },
        )
        .unwrap();
        let sampled_4x = shadow_features(
            &state,
            ShadowMode::Sampled { shots: 40_000, seed: derive_seed(0x5AD2, i) },
        )
        .unwrap();
        for k in 0..exact.len() {
            let err = (exact[k] - sampled[k]).abs();
            errors_10k.push(err);
            errors_40k.push((exact[k] - sampled_4x[k]).abs());
            if k >= n_local1 {
                // Two-local features: the 0.12 deviation budget.
                total += 1;
                if err <= 0.12 {
                    within += 1;
                }
            }
        }
    }
    let fraction = within as f64 / total as f64;
    assert!(
        fraction >= 0.95,
        "criterion 2: only {within}/{total} two-local estimates within 0.12"
    );

    let median = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let med_10k = median(&mut errors_10k);
    let med_40k = median(&mut errors_40k);
    let ratio = med_10k / med_40k;
    // Quadrupling the shadow halves the error, within a factor 1.5.
    assert!(
        (2.0 / 1.5..=2.0 * 1.5).contains(&ratio),
        "criterion 2: median error ratio {ratio} (10k: {med_10k}, 40k: {med_40k})"
    );
    println!(
        "ACCEPTANCE 2 shadow-estimator fidelity: PASS ({:.1}% within 0.12, error ratio {ratio:.2})",
        fraction * 100.0
    );
}

// --- Criterion 3: feature-count identities ----------------------------------

#[test]
fn acceptance_3_feature_count_identities() {
    assert_eq!(local_feature_count(2), 15, "criterion 3: F(2)");
    assert_eq!(local_feature_count(6), 153, "criterion 3: F(6)");
    assert_eq!(CIRCUIT_LEVEL_LEN, 152, "criterion 3: circuit-level length");

    let circuit = gen_rqc(&RqcConfig::new(6, 3, 0), 5).unwrap();
    assert_eq!(circuit_level_features(&circuit).len(), 152);
    let state = simulate(&circuit).unwrap();
    assert_eq!(
        shadow_features(&state, ShadowMode::Exact).unwrap().len(),
        153
    );
    let labeled = label_all(vec![circuit]);
    let combined = assemble(&labeled, Encoding::Combined, ShadowMode::Exact, false).unwrap();
    assert_eq!(combined.width(), 305, "criterion 3: combined length at n=6");
    println!("ACCEPTANCE 3 feature-count identities: PASS (15/153/152/305)");
}

// --- Criterion 4: interpolation at desk scale -------------------------------

#[test]
fn acceptance_4_interpolation_desk_scale() {
    let _guard = HEAVY.lock().unwrap();
    // RQC: 2,000 labeled 3-qubit circuits, SVR + circuit-level.
    let rqc3 = rqc_at(3);
    assert_eq!(rqc3.len(), 2_000);
    let s = spec("acc4-rqc", "rqc", ModelKind::Svr, svr_grid(), SplitRule::Random8020);
    let (report, _) = run_interpolation(&rqc3, &s).unwrap();
    let half_variance = 0.5 * report.test_label_variance;
    assert!(
        report.test_mse <= 0.15,
        "criterion 4: RQC test MSE {} > 0.15",
        report.test_mse
    );
    assert!(
        report.test_mse <= half_variance,
        "criterion 4: RQC test MSE {} > half label variance {half_variance}",
        report.test_mse
    );

    // TIM analog at the same width.
    let tim3 = tim_at(3);
    assert_eq!(tim3.len(), 400);
    let s = spec("acc4-tim", "tim", ModelKind::Svr, svr_grid(), SplitRule::Random8020);
    let (tim_report, _) = run_interpolation(&tim3, &s).unwrap();
    assert!(
        tim_report.test_mse <= 0.10,
        "criterion 4: TIM test MSE {} > 0.10",
        tim_report.test_mse
    );
    println!(
        "ACCEPTANCE 4 interpolation desk scale: PASS (RQC test MSE {:.4} ≤ min(0.15, {:.4}); TIM {:.4} ≤ 0.10; full-scale anchors: RQC < 0.08, TIM < 0.05)",
        report.test_mse, half_variance, tim_report.test_mse
    );
}

// --- Criterion 5: extrapolation qualitative match ----------------------------

struct ExtrapolationCell {
    dataset: &'static str,
    experiment: &'static str,
    model: &'static str,
    report: CellReport,
}

fn extrapolation_cells() -> Vec<ExtrapolationCell> {
    let mut cells = Vec::new();
    for (dataset, rows, rule, experiment) in [
        ("rqc", &*RQC_DESK, SplitRule::GateBins, "depth"),
        ("tim", &*TIM_DESK, SplitRule::TrotterSteps, "depth"),
        ("rqc", &*RQC_DESK, SplitRule::Qubits, "qubit"),
        ("tim", &*TIM_DESK, SplitRule::Qubits, "qubit"),
    ] {
        for (model, grid) in [
            (ModelKind::Rfr, rfr_grid_lean()),
            (ModelKind::Svr, svr_grid_lean()),
        ] {
            let name = format!("acc5-{dataset}-{experiment}-{}", model.name());
            let s = spec(&name, dataset, model, grid, rule);
            let (report, _) = run_extrapolation(rows, &s).unwrap();
            cells.push(ExtrapolationCell {
                dataset,
                experiment,
                model: model.name(),
                report,
            });
        }
    }
    cells
}

#[test]
fn acceptance_5_extrapolation_qualitative_match() {
    let _guard = HEAVY.lock().unwrap();
    let cells = extrapolation_cells();

    // 5a: out-of-distribution error exceeds in-distribution error everywhere.
    for cell in &cells {
        let extrap = cell.report.extrapolation_mse.unwrap();
        assert!(
            extrap > cell.report.test_mse,
            "criterion 5a: {}-{}-{} extrapolation MSE {extrap} ≤ test MSE {}",
            cell.dataset,
            cell.experiment,
            cell.model,
            cell.report.test_mse
        );
    }

    // 5b: RQC depth-extrapolation inflation lands in the plausible band.
    for cell in cells.iter().filter(|c| c.dataset == "rqc" && c.experiment == "depth") {
        let ratio = cell.report.extrapolation_mse.unwrap() / cell.report.test_mse;
        assert!(
            (1.2..=10.0).contains(&ratio),
            "criterion 5b: {} depth ratio {ratio}",
            cell.model
        );
    }

    // 5c: structured data extrapolates better, model by model.
    for experiment in ["depth", "qubit"] {
        for model in ["rfr", "svr"] {
            let pick = |dataset: &str| {
                cells
                    .iter()
                    .find(|c| c.dataset == dataset && c.experiment == experiment && c.model == model)
                    .unwrap()
                    .report
                    .extrapolation_mse
                    .unwrap()
            };
            let (tim, rqc) = (pick("tim"), pick("rqc"));
            assert!(
                tim < rqc,
                "criterion 5c: {model} {experiment}: TIM extrapolation MSE {tim} ≥ RQC {rqc}"
            );
        }
    }

    let summary: Vec<String> = cells
        .iter()
        .map(|c| {
            format!(
                "{}-{}-{}: test {:.4} extrap {:.4}",
                c.dataset,
                c.experiment,
                c.model,
                c.report.test_mse,
                c.report.extrapolation_mse.unwrap()
            )
        })
        .collect();
    println!(
        "ACCEPTANCE 5 extrapolation qualitative match: PASS ({})",
        summary.join("; ")
    );
}

// --- Criterion 6: runtime scaling -------------------------------------------

#[test]
fn acceptance_6_runtime_scaling() {
    let _guard = HEAVY.lock().unwrap();
    let spec = RuntimeSpec {
        qubit_range: (2, 6),
        samples: 50,
        gate_range: (40, 59),
        train_count: 400,
        seed: 0x71ED,
        warmup: 3,
    };
    let report = run_runtime_analysis(&spec).unwrap();
    let point = |n: usize| {
        report
            .points
            .iter()
            .find(|p| p.n_qubits == n)
            .expect("point for every n")
    };
    for n in 3..=5usize {
        let ratio = point(n + 1).exact_sre_ms / point(n).exact_sre_ms;
        assert!(
            ratio >= 4.0,
            "criterion 6: exact-SRE t({})/t({n}) = {ratio:.2} < 4",
            n + 1
        );
    }
    let p6 = point(6);
    let prediction_fraction = p6.rfr_predict_ms_per_circuit / p6.exact_sre_ms;
    assert!(
        prediction_fraction <= 0.01,
        "criterion 6: prediction at n=6 costs {:.3}% of exact labeling",
        prediction_fraction * 100.0
    );
    println!(
        "ACCEPTANCE 6 runtime scaling: PASS (ratios {:.1}/{:.1}/{:.1}; prediction {:.4}% of exact at n=6; svr prediction {:.4}%)",
        point(4).exact_sre_ms / point(3).exact_sre_ms,
        point(5).exact_sre_ms / point(4).exact_sre_ms,
        point(6).exact_sre_ms / point(5).exact_sre_ms,
        prediction_fraction * 100.0,
        100.0 * p6.svr_predict_ms_per_circuit / p6.exact_sre_ms
    );
}

// --- Criterion 7: pipeline determinism ---------------------------------------

#[test]
fn acceptance_7_determinism_across_thread_counts() {
    let make = || {
        let circuits = gen_dataset(&GeneratorConfig::Rqc(RqcConfig::new(4, 0xDE7, 150))).unwrap();
        let lines: Vec<String> = circuits.iter().map(magic_core::codec::serialize).collect();
        let labeled = label_all(circuits);
        let labels: Vec<f64> = labeled.iter().map(|l| l.sre).collect();
        let ds = assemble(
            &labeled,
            Encoding::Combined,
            ShadowMode::Sampled { shots: 500, seed: 0xFEED },
            false,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        write_csv(&ds, &path).unwrap();
        (lines, labels, std::fs::read(path).unwrap())
    };
    let in_pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(make)
    };
    let single = in_pool(1);
    let multi = in_pool(4);
    assert_eq!(single.0, multi.0, "criterion 7: circuit bytes differ");
    assert_eq!(single.1, multi.1, "criterion 7: labels differ");
    assert_eq!(single.2, multi.2, "criterion 7: feature csv differs");
    println!("ACCEPTANCE 7 determinism: PASS (1-thread and 4-thread artifacts byte-identical)");
}

// --- Criterion 8: ML component unit contracts --------------------------------

#[test]
fn acceptance_8_ml_component_contracts() {
    // Tree memorization: unlimited depth, leaf size 1 ⇒ zero training error.
    let mut rng = magic_core::rng::master_rng(0x8EE);
    use rand::Rng;
    let x: Vec<Vec<f64>> = (0..200)
        .map(|_| (0..6).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let y: Vec<f64> = (0..200).map(|_| rng.gen::<f64>() * 3.0).collect();
    let tree = fit_tree(&x, &y, &TreeParams::default(), 1).unwrap();
    let preds: Vec<f64> = x.iter().map(|r| tree.predict_row(r)).collect();
    let memorization_mse = mse(&preds, &y).unwrap();
    assert_eq!(
        memorization_mse, 0.0,
        "criterion 8: tree memorization MSE {memorization_mse}"
    );

    // SVR recovers a clean line within ε + 1e-2 off the training grid.
    let lx: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 20.0]).collect();
    let ly: Vec<f64> = lx.iter().map(|r| 2.0 * r[0] + 1.0).collect();
    let params = SvrParams {
        kernel: Kernel::Linear,
        c: 100.0,
        epsilon: 0.01,
        ..SvrParams::default()
    };
    let (line_model, line_report) = fit_svr(&lx, &ly, &params).unwrap();
    let held: Vec<Vec<f64>> = (0..13).map(|i| vec![0.037 + i as f64 / 13.0 * 0.9]).collect();
    for row in &held {
        let want = 2.0 * row[0] + 1.0;
        let got = line_model.predict_row(row);
        assert!(
            (got - want).abs() <= params.epsilon + 1e-2,
            "criterion 8: line recovery off by {} at x={}",
            (got - want).abs(),
            row[0]
        );
    }

    // KKT residual within tolerance and dual box constraints on every
    // converged model, across a small parameter sweep.
    for c in [0.5, 10.0, 100.0] {
        let params = SvrParams {
            c,
            epsilon: 0.05,
            ..SvrParams::default()
        };
        let (model, report) = fit_svr(&x, &y, &params).unwrap();
        assert!(
            report.final_violation <= params.tol,
            "criterion 8: KKT violation {} > tol at C={c}",
            report.final_violation
        );
        for (up, dn) in report.alpha_up.iter().zip(&report.alpha_dn) {
            assert!((0.0..=c).contains(up) && (0.0..=c).contains(dn));
        }
        for coef in &model.dual_coefs {
            assert!(coef.abs() <= c + 1e-12);
        }
    }
    assert!(line_report.final_violation <= params.tol);
    println!("ACCEPTANCE 8 ML component contracts: PASS");
}
