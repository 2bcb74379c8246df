//! Property tests over randomized dimensions, indices, states, and spectra.

use proptest::prelude::*;

use qudit_switch::bsa::{self, RngSeed};
use qudit_switch::linalg::{apply, apply_full, inner, kron, mat_pow, random_state, random_unitary};
use qudit_switch::states::{bell_state, root_of_unity, shift, BellIndex};
use qudit_switch::switch::{apply_branchwise, build_dense, canonical_config};
use qudit_switch::{locc_bound, LoccBoundInput};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bell_triple() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..=8).prop_flat_map(|d| (Just(d), 0..d, 0..d))
}

proptest! {
    /// Measuring the switch output decodes back to whatever Bell state went in.
    #[test]
    fn decode_inverts_encoding((d, i, j) in bell_triple()) {
        let cfg = canonical_config(d).unwrap();
        let idx = BellIndex::new(d, i, j).unwrap();
        let rec = bsa::analyze_deterministic(d, idx, &cfg).unwrap();
        prop_assert_eq!(rec.decoded, idx);
        prop_assert_eq!(rec.control_outcome.idx(), (d - i) % d);
    }

    /// Branchwise and dense application agree on arbitrary (non-Bell) states.
    #[test]
    fn branchwise_equals_dense(d in 2usize..=6, stream in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        let cfg = canonical_config(d).unwrap();
        let dense = build_dense(&cfg).unwrap();
        let v = random_state(&[d, d, d], &mut rng);
        let a = apply_branchwise(&cfg, &v).unwrap();
        let b = apply_full(&dense, &v).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-12);
    }

    /// Single-subsystem application preserves the norm.
    #[test]
    fn apply_preserves_norm(d in 2usize..=5, sub in 0usize..3, stream in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        let v = random_state(&[d, d, d], &mut rng);
        let u = random_unitary(d, &mut rng);
        let out = apply(&u, &v, sub).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
    }

    /// (shift^m ⊗ shift^{m+1}) advances the shift index and contributes the
    /// phase ω^{-im}.
    #[test]
    fn shift_pair_phase_bookkeeping((d, i, j) in bell_triple(), m_raw in 0usize..8) {
        let m = m_raw % d;
        let s = shift(d).unwrap();
        let op = kron(&mat_pow(&s, m), &mat_pow(&s, m + 1)).unwrap();
        let moved = apply_full(&op, &bell_state(BellIndex::new(d, i, j).unwrap())).unwrap();
        let target = bell_state(BellIndex::new(d, i, (j + 1) % d).unwrap());
        let overlap = inner(&target, &moved).unwrap();
        let want = root_of_unity(d, -((i * m) as i64));
        prop_assert!((overlap - want).norm() <= 1e-12);
    }

    /// Flattening a Schmidt spectrum with a Robin Hood transfer never
    /// increases the LOCC bound.
    #[test]
    fn locc_bound_monotone_under_flattening(
        raw in proptest::collection::vec(1.0e-3..1.0f64, 2..=6),
        lambda in 0.0..=0.5f64,
    ) {
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let n = probs.len();
        let d = n.max(2);
        let hi = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let lo = probs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let mut flatter = probs.clone();
        if hi != lo {
            let delta = lambda * (probs[hi] - probs[lo]);
            flatter[hi] -= delta;
            flatter[lo] += delta;
        }
        let as_input = |p: &[f64]| {
            let alphas: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
            let norm: f64 = alphas.iter().map(|a| a * a).sum::<f64>().sqrt();
            LoccBoundInput::new(d, d, alphas.iter().map(|a| a / norm).collect()).unwrap()
        };
        let before = locc_bound(&as_input(&probs));
        let after = locc_bound(&as_input(&flatter));
        prop_assert!(after <= before + 1e-9);
    }

    /// Sampling is reproducible under its seed.
    #[test]
    fn sampling_reproducible((d, i, j) in bell_triple(), seed in any::<u64>()) {
        let cfg = canonical_config(d).unwrap();
        let idx = BellIndex::new(d, i, j).unwrap();
        let a = bsa::sample(d, idx, &cfg, 20, RngSeed(seed)).unwrap();
        let b = bsa::sample(d, idx, &cfg, 20, RngSeed(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Every sampled record of a Bell input decodes to the input state.
    #[test]
    fn sampled_records_decode_correctly((d, i, j) in bell_triple(), seed in any::<u64>()) {
        let cfg = canonical_config(d).unwrap();
        let idx = BellIndex::new(d, i, j).unwrap();
        for rec in bsa::sample(d, idx, &cfg, 16, RngSeed(seed)).unwrap() {
            prop_assert_eq!(rec.decoded, idx);
            prop_assert_eq!(
                rec.bob_outcome,
                (rec.alice_outcome + j + 1) % d
            );
        }
    }
}
