use clap::{Args, Parser, Subcommand};

use qudit_switch::report::{
    cmd_bound, cmd_gravity, cmd_iterate, cmd_simulate, cmd_table, cmd_verify, BoundSpec, DimLimits,
    OutputFormat, Report,
};

/// Simulate the quantum d-switch and its Bell-state analyzer.
#[derive(Parser)]
#[command(name = "qudit-switch", version, about)]
struct Cli {
    /// Raise the dimension cap for branchwise commands (memory grows as d^3
    /// amplitudes per state; dense verification stays capped regardless).
    #[arg(long, global = true, value_name = "N")]
    max_dim_override: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormatArg {
    /// Output format: text, json, or csv
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the discrimination table for one dimension
    Table {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run the verification suites over a dimension range; exit 0 iff all pass
    Verify {
        /// Inclusive range LO..HI
        #[arg(long, value_name = "LO..HI", default_value = "2..12")]
        dim_range: String,
        /// Entrywise/fidelity tolerance
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Seeded Born-rule simulation of the analyzer on one Bell input
    Simulate {
        #[arg(long)]
        dim: usize,
        /// Phase index of the input Bell state
        #[arg(long)]
        i: usize,
        /// Shift index of the input Bell state
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Print the event-ordering ledger and its match against the switch
    Gravity {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Evaluate the LOCC discrimination bound
    Bound {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        /// Use the maximally entangled spectrum (requires d1 = d2)
        #[arg(long, conflicts_with = "schmidt")]
        maximal: bool,
        /// Comma-separated Schmidt coefficients (amplitudes)
        #[arg(long, value_name = "A1,A2,...")]
        schmidt: Option<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run the switch for several rounds, re-preparing the control each time
    Iterate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 2)]
        rounds: usize,
        #[command(flatten)]
        format: FormatArg,
    },
}

fn parse_dim_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI (inclusive), got '{s}'"))?;
    let lo = lo
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("bad range start '{lo}': {e}"))?;
    let hi = hi
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("bad range end '{hi}': {e}"))?;
    Ok((lo, hi))
}

fn parse_schmidt(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad Schmidt coefficient '{part}': {e}"))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(Report, OutputFormat), String> {
    let limits = DimLimits::with_override(cli.max_dim_override);
    if let Some(n) = cli.max_dim_override {
        eprintln!(
            "warning: dimension cap raised to {n}; state vectors hold d^3 complex \
             amplitudes, so memory and runtime grow steeply"
        );
    }
    let (report, format) = match cli.command {
        Command::Table { dim, format } => (
            cmd_table(dim, limits).map_err(|e| e.to_string())?,
            format.format,
        ),
        Command::Verify {
            dim_range,
            tol,
            format,
        } => {
            let (lo, hi) = parse_dim_range(&dim_range)?;
            (
                cmd_verify(lo, hi, tol, limits).map_err(|e| e.to_string())?,
                format.format,
            )
        }
        Command::Simulate {
            dim,
            i,
            j,
            shots,
            seed,
            format,
        } => (
            cmd_simulate(dim, i, j, shots, seed, limits).map_err(|e| e.to_string())?,
            format.format,
        ),
        Command::Gravity { dim, format } => (
            cmd_gravity(dim, limits).map_err(|e| e.to_string())?,
            format.format,
        ),
        Command::Bound {
            d1,
            d2,
            maximal,
            schmidt,
            format,
        } => {
            let spec = match (maximal, schmidt) {
                (true, None) => BoundSpec::Maximal,
                (false, Some(list)) => BoundSpec::Schmidt(parse_schmidt(&list)?),
                (false, None) => return Err("provide either --maximal or --schmidt".to_string()),
                (true, Some(_)) => unreachable!("clap conflicts_with"),
            };
            (
                cmd_bound(d1, d2, spec).map_err(|e| e.to_string())?,
                format.format,
            )
        }
        Command::Iterate {
            dim,
            i,
            j,
            rounds,
            format,
        } => (
            cmd_iterate(dim, i, j, rounds, limits).map_err(|e| e.to_string())?,
            format.format,
        ),
    };
    let format: OutputFormat = format
        .parse()
        .map_err(|e: qudit_switch::Error| e.to_string())?;
    Ok((report, format))
}

fn main() {
    // exit codes: 0 all-pass, 1 verification failure, 2 usage error
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format)) => {
            print!("{}", report.render(format));
            if report.pass() == Some(false) {
                std::process::exit(1);
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}
