//! The switch never consumes its control: after one round the output
//! factorizes, so measuring the control and attaching a fresh one supports
//! any number of rounds. Each round advances the Bell state's shift index by
//! one while heralding the same phase index.

use qudit_switch::bsa::{iterate_switch, iterated_target_fidelity};
use qudit_switch::states::BellIndex;
use qudit_switch::switch::canonical_config;

fn main() {
    let d = 3;
    let cfg = canonical_config(d).unwrap();
    let input = BellIndex::new(d, 1, 0).unwrap();

    let outcome = iterate_switch(d, input, &cfg, 2).unwrap();
    println!("input phi{input}, two rounds:");
    for (r, dec) in outcome.controls.iter().enumerate() {
        println!(
            "  round {}: control D_{}, residual {:.2e}",
            r + 1,
            dec.dominant.idx(),
            dec.residual
        );
    }
    let expected = BellIndex::new(d, 1, 2).unwrap();
    println!(
        "final target fidelity with phi{expected}: {:.15}",
        iterated_target_fidelity(&outcome, expected).unwrap()
    );

    // the shift index cycles with period d, so d rounds return the input
    let d = 5;
    let cfg = canonical_config(d).unwrap();
    let input = BellIndex::new(d, 2, 1).unwrap();
    let outcome = iterate_switch(d, input, &cfg, d).unwrap();
    println!(
        "\nd={d}: after {d} rounds phi{input} returns to itself (fidelity {:.15})",
        iterated_target_fidelity(&outcome, input).unwrap()
    );
    let all_same = outcome
        .controls
        .iter()
        .all(|c| c.dominant.idx() == (d - 2) % d);
    println!("every round heralded D_{}: {all_same}", (d - 2) % d);
}
