use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use compressim_cli::commands::{self, Failure, NoiseArg, Output};

#[derive(Parser)]
#[command(name = "compressim", version, about = "Compressed simulation of the transverse Ising chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Magnetization sweep over a grid of couplings.
    Sweep(SweepArgs),
    /// Lower a circuit to Clifford+T on the star topology.
    Compile(CompileArgs),
    /// Run a validating set and report per-circuit errors.
    Validate(ValidateArgs),
    /// Single-qubit tomography and fidelity for single gates.
    Tomo(TomoArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Prefix the output with a timestamp comment line.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 10)]
    max_t: usize,
    #[arg(long, default_value_t = 1e-9)]
    epsilon: f64,
    #[arg(long, default_value_t = 40)]
    max_length: usize,
}

#[derive(Args)]
struct NoiseArgs {
    /// Noise config path, or `off`. Defaults to $COMPRESSIM_NOISE, else off.
    #[arg(long)]
    noise: Option<String>,
    /// Shots per expectation value.
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    /// Use exact outcome probabilities instead of sampling.
    #[arg(long)]
    analytic: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    ExactMatrix,
    CompiledCircuit,
    NoisyShots,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Adiabatic steps for the full ramp.
    #[arg(long = "L", default_value_t = 2400)]
    steps: usize,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, default_value_t = 2.0)]
    jmax: f64,
    #[arg(long, default_value_t = 12)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Mode::ExactMatrix)]
    mode: Mode,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CompileArgs {
    /// Builtin target name.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    builtin: Option<String>,
    /// Circuit file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Metadata JSON file; standard error when absent.
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(long, default_value_t = 39, conflicts_with = "no_depth_limit")]
    depth_limit: usize,
    #[arg(long)]
    no_depth_limit: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Builtin base circuit; repeat for several bases.
    #[arg(long, required_unless_present = "input")]
    builtin: Vec<String>,
    /// Base circuit file; repeat for several bases.
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Variants per base circuit.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Measured qubit; defaults to the readout qubit of builtins, else 0.
    #[arg(long)]
    measured_qubit: Option<usize>,
    /// Seed for drawing the replacement gates.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct TomoArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    gate: Option<String>,
    /// All seven table gates in order.
    #[arg(long)]
    all: bool,
    /// Divide Bloch vectors by the calibrated readout contrast.
    #[arg(long)]
    rescale: bool,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    out: OutArgs,
}

impl From<BudgetArgs> for commands::Budget {
    fn from(b: BudgetArgs) -> Self {
        commands::Budget { max_t_count: b.max_t, target_epsilon: b.epsilon, max_total_length: b.max_length }
    }
}

impl From<NoiseArgs> for NoiseArg {
    fn from(a: NoiseArgs) -> Self {
        NoiseArg {
            source: a.noise.or_else(|| std::env::var(commands::NOISE_ENV).ok()),
            shots: a.shots,
            analytic: a.analytic,
        }
    }
}

impl From<OutArgs> for Output {
    fn from(o: OutArgs) -> Self {
        Output { path: o.out, timestamp: o.timestamp }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep(a) => commands::sweep(&commands::SweepRequest {
            n: a.n,
            steps: a.steps,
            dt: a.dt,
            j_max: a.jmax,
            points: a.points,
            mode: match a.mode {
                Mode::ExactMatrix => commands::SweepMode::ExactMatrix,
                Mode::CompiledCircuit => commands::SweepMode::CompiledCircuit,
                Mode::NoisyShots => commands::SweepMode::NoisyShots,
            },
            budget: a.budget.into(),
            noise: a.noise.into(),
            out: a.out.into(),
        }),
        Command::Compile(a) => commands::compile(&commands::CompileRequest {
            builtin: a.builtin,
            input: a.input,
            meta: a.meta,
            depth_limit: (!a.no_depth_limit).then_some(a.depth_limit),
            budget: a.budget.into(),
            out: a.out.into(),
        }),
        Command::Validate(a) => commands::validate(&commands::ValidateRequest {
            builtins: a.builtin,
            inputs: a.input,
            count: a.count,
            measured_qubit: a.measured_qubit,
            seed: a.seed,
            budget: a.budget.into(),
            noise: a.noise.into(),
            out: a.out.into(),
        }),
        Command::Tomo(a) => commands::tomo(&commands::TomoRequest {
            gate: a.gate,
            rescale: a.rescale,
            noise: a.noise.into(),
            out: a.out.into(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
