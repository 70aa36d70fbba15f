//! Command-line interface for the entropic uncertainty laboratory.

use clap::{Args, Parser, Subcommand};

use eurlab_cli::commands::{self, CmdError};
use eurlab_cli::config::{OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "eurlab",
    version,
    about = "Quantum/classical entropic uncertainty: decompositions, purity-based bounds, \
             counterexamples and extremal states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scatter data of quantum vs classical uncertainty for random states (CSV)
    QcPlot(CommonArgs),
    /// Verify every applicable lower bound over random states (JSON, exit 1 on violation)
    BoundsCheck(CommonArgs),
    /// Emit the reference violation of the weakest linear purity bound (JSON)
    Counterexample(CommonArgs),
    /// Fixed-purity minimal-uncertainty curve vs the mixing line (CSV)
    Mus(CommonArgs),
    /// The maximal-uncertainty family traced over the mixing parameter (CSV)
    Maxus(CommonArgs),
    /// Find a pure state unbiased in both eigenbases (JSON)
    Unbiased(CommonArgs),
    /// One-way discord vs entanglement entropy on random pure states (JSON)
    Discord(CommonArgs),
    /// Degenerate-measurement splitting demo on the coarse-grained qutrit (JSON)
    DegenerateDemo(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Hilbert-space dimension (for discord: d1*d2 in {4, 6, 9})
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Bloch angle between the two qubit observable axes, radians in [0, pi/2]
    #[arg(long)]
    gamma: Option<f64>,

    /// Rotation angle about the (1,1,1) axis linking the qutrit bases, radians
    #[arg(long)]
    alpha: Option<f64>,

    /// Basis-pair preset (`counterexample`)
    #[arg(long)]
    preset: Option<String>,

    /// Number of random states (defaults: 10000; discord: 25)
    #[arg(long)]
    samples: Option<usize>,

    /// RNG seed; identical configurations give byte-identical outputs
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Number of grid points in S (in p for maxus)
    #[arg(long, default_value_t = 41)]
    s_grid: usize,

    /// Output path, `-` for stdout
    #[arg(long, default_value = "-")]
    out: String,

    /// Output format (csv for plot/curve commands, json for reports)
    #[arg(long)]
    format: Option<OutputFormat>,

    /// Shift every bound's right-hand side upward (self-test hook)
    #[arg(long, default_value_t = 0.0)]
    bound_offset: f64,
}

fn resolve(command: &str, args: &CommonArgs) -> RunConfig {
    let default_format = match command {
        "qc-plot" | "mus" | "maxus" => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    let default_samples = match command {
        "discord" => 25,
        _ => 10_000,
    };
    RunConfig {
        command: command.to_string(),
        dim: args.dim,
        gamma: args.gamma,
        alpha: args.alpha,
        preset: args.preset.clone(),
        samples: args.samples.unwrap_or(default_samples),
        seed: args.seed,
        s_grid: args.s_grid,
        out: args.out.clone(),
        format: args.format.unwrap_or(default_format),
        bound_offset: args.bound_offset,
    }
}

fn main() {
    let cli = Cli::parse();
    let (name, args, runner): (&str, &CommonArgs, fn(&RunConfig) -> commands::CmdResult) =
        match &cli.command {
            Command::QcPlot(a) => ("qc-plot", a, commands::cmd_qc_plot),
            Command::BoundsCheck(a) => ("bounds-check", a, commands::cmd_bounds_check),
            Command::Counterexample(a) => ("counterexample", a, commands::cmd_counterexample),
            Command::Mus(a) => ("mus", a, commands::cmd_mus),
            Command::Maxus(a) => ("maxus", a, commands::cmd_maxus),
            Command::Unbiased(a) => ("unbiased", a, commands::cmd_unbiased),
            Command::Discord(a) => ("discord", a, commands::cmd_discord),
            Command::DegenerateDemo(a) => ("degenerate-demo", a, commands::cmd_degenerate_demo),
        };
    let cfg = resolve(name, args);
    match runner(&cfg) {
        Ok(code) => std::process::exit(code),
        Err(e @ CmdError::Config(_)) | Err(e @ CmdError::Runtime(_)) => {
            eprintln!("eurlab: {e}");
            std::process::exit(2);
        }
    }
}
