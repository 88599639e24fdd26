//! Cross-module property tests: serialization round trips, generator output
//! validity at scale, and thread-count invariance of every seeded stage.

use magic_core::circuit::{Circuit, CircuitMeta, Gate};
use magic_core::codec;
use magic_core::features::{assemble, write_csv, Encoding};
use magic_core::generators::{gen_dataset, GeneratorConfig, RqcConfig, TimConfig};
use magic_core::rng::derive_seed;
use magic_core::shadows::ShadowMode;
use magic_core::sre::{label_dataset, SreParams};
use proptest::prelude::*;

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..n, 0..n - 1).prop_map(move |(c, t0)| {
            let t = if t0 >= c { t0 + 1 } else { t0 };
            Gate::cnot(c, t)
        }),
        (0..n, -100.0f64..100.0).prop_map(|(q, a)| Gate::rx(q, a)),
        (0..n, -100.0f64..100.0).prop_map(|(q, a)| Gate::ry(q, a)),
        (0..n, -100.0f64..100.0).prop_map(|(q, a)| Gate::rz(q, a)),
    ]
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (2usize..=6).prop_flat_map(|n| {
        (proptest::collection::vec(arb_gate(n), 0..60), any::<u64>()).prop_map(
            move |(gates, seed)| {
                let gate_count = gates.len();
                Circuit::new(n, gates, CircuitMeta::Rqc { seed, gate_count }).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn serialize_deserialize_is_identity(c in arb_circuit()) {
        let line = codec::serialize(&c);
        let back = codec::deserialize(&line).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(codec::serialize(&back), line);
    }
}

#[test]
fn reserialization_is_byte_identical_for_generated_tim_circuits() {
    let cfg = GeneratorConfig::Tim(TimConfig::new(6, 2718, 1000));
    for c in gen_dataset(&cfg).unwrap() {
        let line = codec::serialize(&c);
        let again = codec::serialize(&codec::deserialize(&line).unwrap());
        assert_eq!(line, again);
    }
}

#[test]
fn validate_accepts_every_generated_circuit() {
    // 10⁴ seeds across both families and all dataset widths.
    for n in 2..=6usize {
        let rqc = GeneratorConfig::Rqc(RqcConfig::new(n, 1000 + n as u64, 1200));
        for c in gen_dataset(&rqc).unwrap() {
            c.validate().unwrap();
        }
        let tim = GeneratorConfig::Tim(TimConfig::new(n, 2000 + n as u64, 800));
        for c in gen_dataset(&tim).unwrap() {
            c.validate().unwrap();
        }
    }
}

fn run_in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

/// The full generate → label → features path must be byte-identical at any
/// thread count (timing fields excluded).
#[test]
fn pipeline_artifacts_are_thread_count_invariant() {
    let make_artifacts = || {
        let circuits = gen_dataset(&GeneratorConfig::Rqc(RqcConfig::new(3, 99, 60))).unwrap();
        let circuit_lines: Vec<String> = circuits.iter().map(codec::serialize).collect();
        let labeled: Vec<_> = label_dataset(circuits, &SreParams::default())
            .into_iter()
            .map(|r| r.unwrap())
            .collect();
        let labels: Vec<f64> = labeled.iter().map(|l| l.sre).collect();
        let ds = assemble(
            &labeled,
            Encoding::Combined,
            ShadowMode::Sampled { shots: 300, seed: 5 },
            false,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        write_csv(&ds, &path).unwrap();
        let csv_bytes = std::fs::read(path).unwrap();
        (circuit_lines, labels, csv_bytes)
    };
    let single = run_in_pool(1, make_artifacts);
    let quad = run_in_pool(4, make_artifacts);
    assert_eq!(single.0, quad.0);
    assert_eq!(single.1, quad.1);
    assert_eq!(single.2, quad.2);
}

#[test]
fn per_item_seeds_are_order_independent() {
    // Regenerating item 17 alone equals item 17 of the batch.
    let cfg = RqcConfig::new(4, 4242, 50);
    let batch = gen_dataset(&GeneratorConfig::Rqc(cfg.clone())).unwrap();
    let single = magic_core::generators::gen_rqc(&cfg, derive_seed(4242, 17)).unwrap();
    assert_eq!(codec::serialize(&batch[17]), codec::serialize(&single));
}
