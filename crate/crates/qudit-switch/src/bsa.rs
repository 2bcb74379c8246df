//! The full Bell-state-analyzer protocol: prepare `|D_0> ⊗ |φ_{i,j}>`, run
//! the switch, measure the control in the Fourier basis and both targets in
//! the computational basis, and decode `(i, j)` from the three outcomes.
//!
//! `analyze_deterministic` reads outcomes straight off the output state;
//! `sample` realizes the same measurements as seeded Born-rule draws;
//! `confusion` aggregates either into a full discrimination matrix;
//! `iterate_switch` re-prepares the control and runs additional rounds,
//! which works because the switch never consumes it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{fidelity, StateVector};
use crate::states::{bell_state, BellIndex, FourierIndex};
use crate::switch::{
    apply_branchwise, decompose_control, prepare_input, project_control, ControlDecomposition,
    SwitchConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Residual above which an input is rejected as not heralding a Bell state.
/// An order of magnitude looser than the state tolerances, so accumulated
/// rounding cannot cause false rejections.
pub const HERALD_RESIDUAL_THRESHOLD: f64 = 1e-10;

/// Seed for the sampling generator. The same seed always reproduces the
/// exact same measurement trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngSeed(pub u64);

/// One protocol run: control Fourier outcome, both target outcomes, and the
/// Bell index they decode to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasurementRecord {
    pub control_outcome: FourierIndex,
    pub alice_outcome: usize,
    pub bob_outcome: usize,
    pub decoded: BellIndex,
}

/// Inverts the switch's action on the measurement outcomes:
/// `i = (d - l) mod d`, `j = (j_b - j_a - 1) mod d`.
///
/// The control lands on `|D_{(d-i) mod d}>`, which inverts to the first
/// formula, and the target leaves the switch with its shift index advanced
/// by one, which the `-1` undoes.
pub fn decode(d: usize, l: usize, j_a: usize, j_b: usize) -> Result<BellIndex> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    for idx in [l, j_a, j_b] {
        if idx >= d {
            return Err(Error::IndexOutOfRange { index: idx, dim: d });
        }
    }
    let i = (d - l) % d;
    let j = (j_b + 2 * d - j_a - 1) % d;
    BellIndex::new(d, i, j)
}

fn record_from(d: usize, l: usize, target_flat: usize) -> Result<MeasurementRecord> {
    let j_a = target_flat / d;
    let j_b = target_flat % d;
    Ok(MeasurementRecord {
        control_outcome: FourierIndex::new(d, l)?,
        alice_outcome: j_a,
        bob_outcome: j_b,
        decoded: decode(d, l, j_a, j_b)?,
    })
}

/// Runs the protocol once without randomness: the control outcome is the
/// dominant Fourier index (which must carry essentially all the weight) and
/// the target outcome is read from the support of the post-projection state.
/// With the canonical switch every support element decodes to the same
/// index, so one element suffices.
pub fn analyze_deterministic(
    d: usize,
    true_state: BellIndex,
    switch: &SwitchConfig,
) -> Result<MeasurementRecord> {
    if switch.d() != d || true_state.d() != d {
        return Err(Error::ShapeMismatch(format!(
            "dimension mismatch: d={d}, switch d={}, state d={}",
            switch.d(),
            true_state.d()
        )));
    }
    let output = apply_branchwise(switch, &prepare_input(true_state))?;
    let dec = decompose_control(&output)?;
    if dec.residual > HERALD_RESIDUAL_THRESHOLD {
        return Err(Error::NonHeraldedInput {
            residual: dec.residual,
            threshold: HERALD_RESIDUAL_THRESHOLD,
        });
    }
    let (_, target) = project_control(&output, dec.dominant)?;
    let target = target.expect("dominant branch has weight ~1");
    let support = target
        .amplitudes()
        .iter()
        .position(|a| a.norm_sqr() > 1e-12)
        .expect("normalized state has support");
    record_from(d, dec.dominant.idx(), support)
}

/// Draws `shots` Born-rule measurement records from the switch output.
///
/// Each shot first samples the control Fourier outcome from its projection
/// probabilities, then the target pair from the conditional computational-
/// basis distribution. ChaCha8 seeded with `seed` makes the trajectory
/// reproducible bit for bit.
pub fn sample(
    d: usize,
    true_state: BellIndex,
    switch: &SwitchConfig,
    shots: usize,
    seed: RngSeed,
) -> Result<Vec<MeasurementRecord>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    if switch.d() != d || true_state.d() != d {
        return Err(Error::ShapeMismatch(format!(
            "dimension mismatch: d={d}, switch d={}, state d={}",
            switch.d(),
            true_state.d()
        )));
    }
    let output = apply_branchwise(switch, &prepare_input(true_state))?;

    // Projection probability and conditional target distribution per l.
    let mut probs = Vec::with_capacity(d);
    let mut conditional = Vec::with_capacity(d);
    for l in 0..d {
        let (p, target) = project_control(&output, FourierIndex::new(d, l)?)?;
        probs.push(p);
        conditional.push(target.map(|t| {
            t.amplitudes()
                .iter()
                .map(|a| a.norm_sqr())
                .collect::<Vec<f64>>()
        }));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut records = Vec::with_capacity(shots);
    for _ in 0..shots {
        let l = draw_index(&probs, rng.random::<f64>());
        let dist = conditional[l]
            .as_ref()
            .expect("a drawn branch has nonzero probability");
        let t = draw_index(dist, rng.random::<f64>());
        records.push(record_from(d, l, t)?);
    }
    Ok(records)
}

fn draw_index(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    for (idx, w) in weights.iter().enumerate() {
        acc += w / total;
        if u < acc {
            return idx;
        }
    }
    weights.len() - 1
}

/// Decoded-vs-true counts over every Bell input.
#[derive(Debug, Clone, Serialize)]
pub struct ConfusionMatrix {
    pub d: usize,
    /// `counts[true.flat()][decoded.flat()]`; each row sums to
    /// `shots_per_state`.
    pub counts: Vec<Vec<u64>>,
    pub shots_per_state: usize,
}

impl ConfusionMatrix {
    /// True exactly when every shot decoded to its input state.
    pub fn is_exact_identity(&self) -> bool {
        self.counts.iter().enumerate().all(|(r, row)| {
            row.iter().enumerate().all(|(c, &n)| {
                n == if r == c {
                    self.shots_per_state as u64
                } else {
                    0
                }
            })
        })
    }

    /// Fraction of all shots on the diagonal.
    pub fn accuracy(&self) -> f64 {
        let diag: u64 = (0..self.counts.len()).map(|k| self.counts[k][k]).sum();
        diag as f64 / (self.counts.len() * self.shots_per_state) as f64
    }

    pub fn off_diagonal_total(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != r)
                    .map(|(_, &n)| n)
                    .sum::<u64>()
            })
            .sum()
    }
}

// SplitMix64 finalizer; used to give every true state its own substream.
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the substream of state number `flat`: the SplitMix64 finalizer
/// applied to `seed + (flat + 1) · γ`. Independent of evaluation order, so
/// the per-state runs may fan out in parallel without changing the result.
fn derive_state_seed(seed: RngSeed, flat: usize) -> RngSeed {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    RngSeed(splitmix64(
        seed.0.wrapping_add((flat as u64 + 1).wrapping_mul(GAMMA)),
    ))
}

/// Samples every one of the d² Bell inputs `shots_per_state` times and
/// tallies decoded against true. Row-normalized, this is the identity for
/// the canonical switch.
pub fn confusion(
    d: usize,
    switch: &SwitchConfig,
    shots_per_state: usize,
    seed: RngSeed,
) -> Result<ConfusionMatrix> {
    let n = d * d;
    let mut counts = vec![vec![0u64; n]; n];
    for (flat, row) in counts.iter_mut().enumerate() {
        let true_state = BellIndex::from_flat(d, flat)?;
        let records = sample(
            d,
            true_state,
            switch,
            shots_per_state,
            derive_state_seed(seed, flat),
        )?;
        for rec in records {
            row[rec.decoded.flat()] += 1;
        }
    }
    Ok(ConfusionMatrix {
        d,
        counts,
        shots_per_state,
    })
}

/// What repeated switch rounds did to the target.
#[derive(Debug, Clone)]
pub struct IterationOutcome {
    /// Control decomposition recorded at the end of each round.
    pub controls: Vec<ControlDecomposition>,
    /// The target pair after the last round, dims (d, d).
    pub final_target: StateVector,
}

/// Runs the switch `rounds` times. After each round the control is measured
/// (recorded as its decomposition, collapsing onto the dominant Fourier
/// state) and a fresh `|D_0>` control is attached for the next round; the
/// target is untouched by the control measurement because the output
/// factorizes. After round r the target is `|φ_{i,(j+r) mod d}>` and every
/// round's control lands on index `(d - i) mod d`.
pub fn iterate_switch(
    d: usize,
    true_state: BellIndex,
    switch: &SwitchConfig,
    rounds: usize,
) -> Result<IterationOutcome> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    if switch.d() != d || true_state.d() != d {
        return Err(Error::ShapeMismatch(format!(
            "dimension mismatch: d={d}, switch d={}, state d={}",
            switch.d(),
            true_state.d()
        )));
    }
    let control0 = crate::states::fourier_state(FourierIndex::new(d, 0)?);
    let mut target = bell_state(true_state);
    let mut controls = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let output = apply_branchwise(switch, &control0.tensor(&target))?;
        let dec = decompose_control(&output)?;
        let (_, projected) = project_control(&output, dec.dominant)?;
        target = projected.expect("dominant branch carries weight");
        controls.push(dec);
    }
    Ok(IterationOutcome {
        controls,
        final_target: target,
    })
}

/// Convenience wrapper asserting the two-round nondestructive contract:
/// returns the fidelity of the final target with `|φ_{i,(j+rounds) mod d}>`.
pub fn iterated_target_fidelity(outcome: &IterationOutcome, expected: BellIndex) -> Result<f64> {
    fidelity(&outcome.final_target, &bell_state(expected))
}
