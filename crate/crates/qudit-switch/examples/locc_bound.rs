//! Local operations and classical communication cap perfect discrimination
//! of equally entangled states at d1·d2 / (Σ α_i)². For maximally entangled
//! pairs that is d — the switch protocol identifies all d².

use qudit_switch::{bell_bound, locc_bound, LoccBoundInput};

fn main() {
    println!(
        "{:<4} {:>12} {:>20}",
        "d", "LOCC cap", "switch distinguishes"
    );
    for d in 2..=8 {
        println!("{:<4} {:>12} {:>20}", d, bell_bound(d).unwrap(), d * d);
    }

    // a partially entangled spectrum sits strictly between the extremes
    let input = LoccBoundInput::new(4, 4, vec![0.8, 0.6, 0.0, 0.0]).unwrap();
    let bound = locc_bound(&input);
    println!(
        "\nd1=d2=4 with Schmidt amplitudes (0.8, 0.6): bound {bound:.6} (floor {})",
        bound.floor()
    );

    let product = LoccBoundInput::new(4, 4, vec![1.0]).unwrap();
    println!(
        "product states (no entanglement): bound {} = full state count",
        locc_bound(&product)
    );
}
