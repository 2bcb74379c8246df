//! Runs the analyzer three ways: reading outcomes deterministically off the
//! output state, drawing seeded Born-rule samples, and tallying a full
//! confusion matrix — including what goes wrong with a miswired switch.

use qudit_switch::bsa::{analyze_deterministic, confusion, sample, RngSeed};
use qudit_switch::linalg::mat_pow;
use qudit_switch::states::{shift, BellIndex};
use qudit_switch::switch::{canonical_config, SwitchConfig};

fn main() {
    let d = 3;
    let cfg = canonical_config(d).unwrap();

    println!(
        "deterministic analysis of all {} qutrit Bell states:",
        d * d
    );
    for flat in 0..d * d {
        let idx = BellIndex::from_flat(d, flat).unwrap();
        let rec = analyze_deterministic(d, idx, &cfg).unwrap();
        println!(
            "  phi{idx} -> control D_{}, targets ({}, {}), decoded phi{}",
            rec.control_outcome.idx(),
            rec.alice_outcome,
            rec.bob_outcome,
            rec.decoded
        );
    }

    let idx = BellIndex::new(d, 2, 1).unwrap();
    let records = sample(d, idx, &cfg, 1000, RngSeed(7)).unwrap();
    let hits = records.iter().filter(|r| r.decoded == idx).count();
    println!("\nsampling phi{idx}, 1000 shots, seed 7: {hits}/1000 decoded correctly");

    let matrix = confusion(d, &cfg, 200, RngSeed(42)).unwrap();
    println!(
        "confusion matrix ({} shots/state): accuracy {}, off-diagonal shots {}",
        matrix.shots_per_state,
        matrix.accuracy(),
        matrix.off_diagonal_total()
    );

    // a switch with V_k = U_k never advances the shift index, so decoding
    // misses j by one — all the mass moves one column over
    let s = shift(d).unwrap();
    let same: Vec<_> = (0..d).map(|k| mat_pow(&s, k)).collect();
    let broken = SwitchConfig::new(same.clone(), same).unwrap();
    let matrix = confusion(d, &broken, 200, RngSeed(42)).unwrap();
    println!(
        "same switch with V_k = U_k: accuracy {}, off-diagonal shots {}",
        matrix.accuracy(),
        matrix.off_diagonal_total()
    );
}
