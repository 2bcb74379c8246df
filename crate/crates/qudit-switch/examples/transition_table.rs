//! Prints the discrimination tables for d = 3 and d = 4: which control
//! outcome heralds which group of Bell states, and how the target outcomes
//! pin down the state within the group.

use qudit_switch::report::{cmd_table, DimLimits, OutputFormat};

fn main() {
    for dim in [3, 4] {
        let report = cmd_table(dim, DimLimits::default()).expect("in-cap dimension");
        println!("{}", report.render(OutputFormat::Text));
    }
    println!("Every row's outcome triple decodes back to its input state;");
    println!("run with --format json/csv via the `qudit-switch table` subcommand.");
}
