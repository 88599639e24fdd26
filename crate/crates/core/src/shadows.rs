//! Classical-shadow protocol with the local (single-qubit) Clifford
//! ensemble.
//!
//! Data collection: per snapshot, every qubit independently gets one of the
//! 24 single-qubit Cliffords, the rotated state is measured once in the
//! computational basis. Post-processing inverts the per-qubit measurement
//! channel, M₁⁻¹(A) = 3A − Tr(A)·I, so the per-snapshot estimate of a Pauli
//! string P is Π_{q ∈ support(P)} 3·⟨b_q|U_q σ_q U_q†|b_q⟩ — each factor is
//! 0 (rotation moved σ_q off the measurement axis) or ±3, and the mean over
//! snapshots is an unbiased estimate of ⟨P⟩.
//!
//! The Clifford ensemble is enumerated canonically by breadth-first search
//! over words in the generators {H, S} starting from the identity, children
//! visited H first, deduplicated by conjugation action on (X, Z). Index 0 is
//! the identity, 1 is H, 2 is S. The uniform distribution over the full
//! 24-element group induces the same measurement channel as its 6-element
//! Pauli-basis subgroup; the full group is sampled regardless.

use crate::pauli::{local_feature_count, local_observables, Axis, PauliString};
use crate::rng::{child_rng, DetRng};
use crate::sim::{pauli_expectation, Statevector};
use crate::{CoreError, Result};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use rand::Rng;
use rayon::prelude::*;

type Mat2 = [[Complex64; 2]; 2];

/// One element of the single-qubit Clifford group: its matrix (for rotating
/// states) and its conjugation action U σ U† on the three Pauli axes (for
/// the integer-exact estimator).
#[derive(Debug, Clone)]
pub struct SingleQubitClifford {
    pub matrix: Mat2,
    /// `conj[a] = (axis, sign)` meaning U σ_a U† = sign · σ_axis, with
    /// a indexed X=0, Y=1, Z=2.
    pub conj: [(Axis, i8); 3],
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn dagger(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn axis_matrix(axis: Axis) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        Axis::X => [[z, one], [one, z]],
        Axis::Y => [[z, -i], [i, z]],
        Axis::Z => [[one, z], [z, -one]],
    }
}

/// Identify U σ U† as ± one of the three Pauli axes.
fn conj_action(u: &Mat2, axis: Axis) -> (Axis, i8) {
    let conj = mat_mul(&mat_mul(u, &axis_matrix(axis)), &dagger(u));
    for candidate in Axis::ALL {
        let target = axis_matrix(candidate);
        for sign in [1i8, -1i8] {
            let s = sign as f64;
            let close = (0..2).all(|r| {
                (0..2).all(|c| (conj[r][c] - target[r][c] * s).norm() < 1e-9)
            });
            if close {
                return (candidate, sign);
            }
        }
    }
    unreachable!("a Clifford conjugation must map a Pauli axis to a signed Pauli axis");
}

fn build_clifford_table() -> Vec<SingleQubitClifford> {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let h: Mat2 = [
        [Complex64::new(s2, 0.0), Complex64::new(s2, 0.0)],
        [Complex64::new(s2, 0.0), Complex64::new(-s2, 0.0)],
    ];
    let s: Mat2 = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
    ];
    let identity: Mat2 = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];

    let action_key = |u: &Mat2| (conj_action(u, Axis::X), conj_action(u, Axis::Z));
    let mut table: Vec<SingleQubitClifford> = Vec::with_capacity(24);
    let mut seen: Vec<((Axis, i8), (Axis, i8))> = Vec::with_capacity(24);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(identity);
    while let Some(u) = queue.pop_front() {
        let key = action_key(&u);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        table.push(SingleQubitClifford {
            matrix: u,
            conj: [
                conj_action(&u, Axis::X),
                conj_action(&u, Axis::Y),
                conj_action(&u, Axis::Z),
            ],
        });
        queue.push_back(mat_mul(&u, &h));
        queue.push_back(mat_mul(&u, &s));
    }
    assert_eq!(table.len(), 24, "single-qubit Clifford group has 24 elements");
    table
}

static CLIFFORD_TABLE: Lazy<Vec<SingleQubitClifford>> = Lazy::new(build_clifford_table);

/// The canonical 24-element single-qubit Clifford table.
pub fn clifford_table() -> &'static [SingleQubitClifford] {
    &CLIFFORD_TABLE
}

/// One randomized measurement: a Clifford index per qubit and the measured
/// bitstring (bit q of `outcomes` is qubit q's outcome).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub rotations: Vec<u8>,
    pub outcomes: u64,
}

impl Snapshot {
    pub fn outcome_bit(&self, qubit: usize) -> u8 {
        ((self.outcomes >> qubit) & 1) as u8
    }
}

/// A classical shadow: N independent snapshots of one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shadow {
    pub n_qubits: usize,
    pub snapshots: Vec<Snapshot>,
    pub seed: u64,
}

impl Shadow {
    pub fn size(&self) -> usize {
        self.snapshots.len()
    }
}

fn collect_one(state: &Statevector, rng: &mut DetRng) -> Snapshot {
    let n = state.n_qubits();
    let table = clifford_table();
    let rotations: Vec<u8> = (0..n).map(|_| rng.gen_range(0..24) as u8).collect();
    let mut rotated = state.clone();
    for (q, &r) in rotations.iter().enumerate() {
        rotated.apply_one_qubit(q, &table[r as usize].matrix);
    }
    let probs = rotated.probabilities();
    let draw: f64 = rng.gen();
    let mut acc = 0.0;
    let mut index = probs.len() - 1;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if draw < acc {
            index = i;
            break;
        }
    }
    // Re-align bits: state index has qubit 0 as MSB, outcomes store qubit q
    // at bit q.
    let mut outcomes = 0u64;
    for q in 0..n {
        if (index >> (n - 1 - q)) & 1 == 1 {
            outcomes |= 1 << q;
        }
    }
    Snapshot {
        rotations,
        outcomes,
    }
}

/// Collect a shadow of `size` snapshots. Snapshot i draws from the child
/// stream `derive_seed(seed, i)`, so collection parallelizes without
/// changing the result.
pub fn collect_shadow(state: &Statevector, size: usize, seed: u64) -> Result<Shadow> {
    if size == 0 {
        return Err(CoreError::InvalidParameter(
            "a shadow needs at least one snapshot".into(),
        ));
    }
    let snapshots: Vec<Snapshot> = (0..size)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(seed, i as u64);
            collect_one(state, &mut rng)
        })
        .collect();
    Ok(Shadow {
        n_qubits: state.n_qubits(),
        snapshots,
        seed,
    })
}

/// Single-snapshot estimate of ⟨P⟩: 0 or ±3^weight(P), exact by integer
/// table lookups.
pub fn snapshot_estimate(snapshot: &Snapshot, p: &PauliString) -> f64 {
    let table = clifford_table();
    let mut value = 1.0f64;
    for q in p.support() {
        let axis = p.axis(q).expect("support yields non-identity qubits");
        let rotation = &table[snapshot.rotations[q] as usize];
        let (image, sign) = rotation.conj[match axis {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }];
        if image != Axis::Z {
            return 0.0;
        }
        let outcome_sign = if snapshot.outcome_bit(q) == 1 { -1.0 } else { 1.0 };
        value *= 3.0 * sign as f64 * outcome_sign;
    }
    value
}

/// Shadow estimate of ⟨P⟩: the plain mean of the per-snapshot estimates.
/// The identity string is rejected — its expectation is 1 by definition and
/// it is excluded from every feature set.
pub fn estimate_pauli(shadow: &Shadow, p: &PauliString) -> Result<f64> {
    if p.weight() == 0 {
        return Err(CoreError::IdentityObservable);
    }
    if p.n_qubits != shadow.n_qubits {
        return Err(CoreError::DimensionMismatch {
            state_qubits: shadow.n_qubits,
            operand_qubits: p.n_qubits,
        });
    }
    let sum: f64 = shadow
        .snapshots
        .iter()
        .map(|s| snapshot_estimate(s, p))
        .sum();
    Ok(sum / shadow.size() as f64)
}

/// How shadow features are produced: `Exact` evaluates each observable with
/// the simulator (the estimator's oracle); `Sampled` runs the measurement
/// protocol with one shared shadow for all observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowMode {
    Exact,
    Sampled { shots: usize, seed: u64 },
}

/// All 1- and 2-local Pauli expectations of a state, in the canonical
/// [`local_observables`] order (length `3n + 9·C(n,2)`).
pub fn shadow_features(state: &Statevector, mode: ShadowMode) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    if n < 2 {
        return Err(CoreError::InvalidParameter(
            "shadow features need at least two qubits".into(),
        ));
    }
    let observables = local_observables(n);
    match mode {
        ShadowMode::Exact => observables
            .iter()
            .map(|p| pauli_expectation(state, p))
            .collect(),
        ShadowMode::Sampled { shots, seed } => {
            let shadow = collect_shadow(state, shots, seed)?;
            observables
                .iter()
                .map(|p| estimate_pauli(&shadow, p))
                .collect()
        }
    }
}

/// Embed a length-F(n) feature vector into the F(n_max) layout by canonical
/// observable position (qubit indices are global); positions whose support
/// exceeds n are zero.
pub fn pad_features(values: &[f64], n: usize, n_max: usize) -> Result<Vec<f64>> {
    if n > n_max {
        return Err(CoreError::InvalidParameter(format!(
            "cannot pad {n} qubits into a {n_max}-qubit layout"
        )));
    }
    if values.len() != local_feature_count(n) {
        return Err(CoreError::InvalidParameter(format!(
            "expected {} features for {n} qubits, got {}",
            local_feature_count(n),
            values.len()
        )));
    }
    let wide = local_observables(n_max);
    let mut out = vec![0.0; wide.len()];
    let mut src = 0usize;
    for (dst, obs) in wide.iter().enumerate() {
        if obs.support().all(|q| q < n) {
            out[dst] = values[src];
            src += 1;
        }
    }
    debug_assert_eq!(src, values.len());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_rqc, RqcConfig};
    use crate::sim::simulate;

    #[test]
    fn table_has_24_unitary_elements_with_full_action_coverage() {
        let table = clifford_table();
        assert_eq!(table.len(), 24);
        let mut actions = std::collections::HashSet::new();
        for el in table {
            // Unitarity.
            let udu = mat_mul(&dagger(&el.matrix), &el.matrix);
            for r in 0..2 {
                for c in 0..2 {
                    let want = if r == c { 1.0 } else { 0.0 };
                    assert!((udu[r][c] - Complex64::new(want, 0.0)).norm() < 1e-12);
                }
            }
            assert!(actions.insert((el.conj[0], el.conj[2])));
        }
        // Every valid (image of X, image of Z) pair appears exactly once:
        // 6 signed axes for X times 4 signed axes orthogonal to it.
        assert_eq!(actions.len(), 24);
    }

    #[test]
    fn table_prefix_is_identity_h_s() {
        let table = clifford_table();
        assert_eq!(
            table[0].conj,
            [(Axis::X, 1), (Axis::Y, 1), (Axis::Z, 1)]
        );
        // H: X→Z, Y→−Y, Z→X.
        assert_eq!(
            table[1].conj,
            [(Axis::Z, 1), (Axis::Y, -1), (Axis::X, 1)]
        );
        // S: X→Y, Y→−X, Z→Z.
        assert_eq!(
            table[2].conj,
            [(Axis::Y, 1), (Axis::X, -1), (Axis::Z, 1)]
        );
    }

    #[test]
    fn identity_rotation_on_zero_state_always_measures_zero() {
        let state = Statevector::zero_state(2);
        let shadow = collect_shadow(&state, 500, 7).unwrap();
        let mut saw_identity = false;
        for snap in &shadow.snapshots {
            for q in 0..2 {
                if snap.rotations[q] == 0 {
                    saw_identity = true;
                    assert_eq!(snap.outcome_bit(q), 0);
                }
            }
        }
        assert!(saw_identity);
    }

    #[test]
    fn shadow_has_requested_size_and_is_deterministic() {
        let c = gen_rqc(&RqcConfig::new(3, 1, 0), 5).unwrap();
        let state = simulate(&c).unwrap();
        let a = collect_shadow(&state, 1000, 42).unwrap();
        let b = collect_shadow(&state, 1000, 42).unwrap();
        assert_eq!(a.size(), 1000);
        assert_eq!(a, b);
    }

    #[test]
    fn snapshot_estimates_live_on_the_lattice() {
        let c = gen_rqc(&RqcConfig::new(3, 2, 0), 9).unwrap();
        let state = simulate(&c).unwrap();
        let shadow = collect_shadow(&state, 200, 4).unwrap();
        let single = PauliString::single(3, 1, Axis::Y);
        let mut pair = PauliString::single(3, 0, Axis::X);
        pair.set(2, Some(Axis::Z));
        for snap in &shadow.snapshots {
            let s1 = snapshot_estimate(snap, &single);
            assert!(s1 == 0.0 || s1 == 3.0 || s1 == -3.0);
            let s2 = snapshot_estimate(snap, &pair);
            assert!(s2 == 0.0 || s2 == 9.0 || s2 == -9.0);
        }
    }

    #[test]
    fn z_estimate_on_zero_state_concentrates_near_one() {
        let state = Statevector::zero_state(1);
        let shadow = collect_shadow(&state, 10_000, 11).unwrap();
        let est = estimate_pauli(&shadow, &PauliString::single(1, 0, Axis::Z)).unwrap();
        assert!((est - 1.0).abs() < 0.1, "estimate {est}");
    }

    #[test]
    fn xx_estimate_on_zero_state_converges_to_zero() {
        let state = Statevector::zero_state(2);
        let shadow = collect_shadow(&state, 100_000, 13).unwrap();
        let mut xx = PauliString::single(2, 0, Axis::X);
        xx.set(1, Some(Axis::X));
        let est = estimate_pauli(&shadow, &xx).unwrap();
        assert!(est.abs() < 0.05, "estimate {est}");
    }

    #[test]
    fn identity_observable_is_rejected() {
        let state = Statevector::zero_state(2);
        let shadow = collect_shadow(&state, 10, 1).unwrap();
        assert!(matches!(
            estimate_pauli(&shadow, &PauliString::identity(2)),
            Err(CoreError::IdentityObservable)
        ));
    }

    #[test]
    fn exact_features_of_zero_state() {
        let state = Statevector::zero_state(2);
        let feats = shadow_features(&state, ShadowMode::Exact).unwrap();
        assert_eq!(feats.len(), 15);
        // +1 exactly at Z₀ (index 2), Z₁ (index 5), Z₀Z₁ (index 14).
        for (i, v) in feats.iter().enumerate() {
            let want = if i == 2 || i == 5 || i == 14 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12, "index {i}: {v}");
        }
    }

    #[test]
    fn sampled_features_track_exact_features() {
        let mut worst: f64 = 0.0;
        for seed in 0..3u64 {
            let c = gen_rqc(&RqcConfig::new(4, 33, 0), seed).unwrap();
            let state = simulate(&c).unwrap();
            let exact = shadow_features(&state, ShadowMode::Exact).unwrap();
            let sampled = shadow_features(
                &state,
                ShadowMode::Sampled {
                    shots: 10_000,
                    seed: 100 + seed,
                },
            )
            .unwrap();
            for (e, s) in exact.iter().zip(&sampled) {
                worst = worst.max((e - s).abs());
            }
        }
        // 2-local estimator std at 10⁴ shots is ≤ 0.03; 0.2 is ~7σ.
        assert!(worst < 0.2, "worst deviation {worst}");
    }

    #[test]
    fn unbiasedness_over_many_seeds() {
        let c = gen_rqc(&RqcConfig::new(2, 55, 0), 3).unwrap();
        let state = simulate(&c).unwrap();
        let mut zz = PauliString::single(2, 0, Axis::Z);
        zz.set(1, Some(Axis::Z));
        let exact = pauli_expectation(&state, &zz).unwrap();
        let mean: f64 = (0..40u64)
            .map(|seed| {
                let shadow = collect_shadow(&state, 2_000, 1000 + seed).unwrap();
                estimate_pauli(&shadow, &zz).unwrap()
            })
            .sum::<f64>()
            / 40.0;
        // 80k total snapshots: std of the grand mean ≈ 0.01.
        assert!((mean - exact).abs() < 0.04, "mean {mean} vs exact {exact}");
    }

    #[test]
    fn padding_embeds_by_canonical_position() {
        let state = Statevector::zero_state(2);
        let feats = shadow_features(&state, ShadowMode::Exact).unwrap();
        let padded = pad_features(&feats, 2, 3).unwrap();
        assert_eq!(padded.len(), local_feature_count(3));
        let wide = local_observables(3);
        let mut src = 0;
        for (i, obs) in wide.iter().enumerate() {
            if obs.support().all(|q| q < 2) {
                assert_eq!(padded[i], feats[src]);
                src += 1;
            } else {
                assert_eq!(padded[i], 0.0);
            }
        }
    }
}
