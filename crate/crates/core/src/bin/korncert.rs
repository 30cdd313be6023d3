use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use korncert::cli::{execute, Run, RunConfig, RunError, TestKind, DEFAULT_PROBE_TRIALS};
use korncert::diffop::{builtin_operator, ellipticity_probe, Builtin, DiffOperator, OperatorSpec};
use korncert::kernel::{kernel_basis, kernel_dim_profile};
use korncert::VerdictTag;

#[derive(Parser)]
#[command(name = "korncert", version, about = "Polynomial kernels of differential operators and trace-norm certificates")]
struct Cli {
    /// Overrides the seed of any config.
    #[arg(long, global = true, env = "KORNCERT_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config end to end.
    Check(CheckArgs),
    /// Run a config whose test is a point-measure test.
    Points(CheckArgs),
    /// Run a config and write CSV plot data.
    Plot {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact kernel basis of an operator on polynomials of degree K.
    Kernel {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long = "K", short = 'K')]
        degree: u32,
        /// Print kernel dimensions for every degree up to K instead.
        #[arg(long)]
        profile: bool,
        #[arg(long)]
        json: bool,
    },
    /// Randomized rank tests of the operator symbol.
    Probe {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = DEFAULT_PROBE_TRIALS)]
        trials: usize,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    config: PathBuf,
    /// Expected verdict; overrides the config.
    #[arg(long)]
    expect: Option<VerdictTag>,
    #[arg(long)]
    emit_plots: Option<PathBuf>,
    /// Write the JSON report here; overrides the config.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OperatorArgs {
    /// Builtin operator name, e.g. sym_grad or grad_k.
    #[arg(long, required_unless_present = "custom")]
    op: Option<String>,
    #[arg(long, required_unless_present = "custom")]
    n: Option<usize>,
    /// Order of grad_k.
    #[arg(long)]
    order: Option<u32>,
    /// JSON operator file instead of a builtin.
    #[arg(long, conflicts_with = "op")]
    custom: Option<PathBuf>,
}

impl OperatorArgs {
    fn build(&self) -> Result<DiffOperator, RunError> {
        if let Some(path) = &self.custom {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Schema(format!("cannot read {}: {e}", path.display())))?;
            let spec: OperatorSpec =
                serde_json::from_str(&text).map_err(|e| RunError::Schema(format!("{}: {e}", path.display())))?;
            return spec.build().map_err(|e| RunError::Schema(format!("operator: {e}")));
        }
        let name = self.op.as_deref().expect("clap requires --op");
        let n = self.n.expect("clap requires --n");
        Builtin::from_name(name, self.order)
            .and_then(|b| builtin_operator(b, n))
            .map_err(|e| RunError::Schema(format!("operator: {e}")))
    }
}

fn load(path: &Path, seed: Option<u64>) -> Result<RunConfig, RunError> {
    let mut config = RunConfig::load(path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn check(args: &CheckArgs, seed: Option<u64>, require: Option<TestKind>) -> Result<u8, RunError> {
    let mut config = load(&args.config, seed)?;
    if let Some(want) = require {
        if config.test != Some(want) {
            return Err(RunError::Schema(format!("test: this subcommand needs \"{}\"", test_name(want))));
        }
    }
    if args.expect.is_some() {
        config.expected = args.expect;
    }
    if args.report.is_some() {
        config.output.report = args.report.clone();
    }
    let plots = args.emit_plots.clone().or_else(|| config.output.plots.clone());
    let report_path = config.output.report.clone();
    let mut run = execute(config)?;
    if let Some(dir) = plots {
        run.emit_plot_data(&dir)?;
    }
    finish(&run, report_path.as_deref(), args.json)
}

fn test_name(kind: TestKind) -> &'static str {
    match kind {
        TestKind::Boundary => "boundary",
        TestKind::Points => "points",
    }
}

fn finish(run: &Run, report_path: Option<&Path>, json: bool) -> Result<u8, RunError> {
    let text = run.report.to_json_pretty();
    if let Some(path) = report_path {
        std::fs::write(path, &text).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    }
    if json {
        println!("{text}");
    } else {
        print!("{}", run.report.summary());
    }
    Ok(run.report.exit_code())
}

fn run(cli: Cli) -> Result<u8, RunError> {
    match &cli.command {
        Command::Check(args) => check(args, cli.seed, None),
        Command::Points(args) => check(args, cli.seed, Some(TestKind::Points)),
        Command::Plot { config, out } => {
            let mut run = execute(load(config, cli.seed)?)?;
            let record = run.emit_plot_data(out)?;
            for f in &record.files {
                println!("{}", record.dir.join(f).display());
            }
            if let Some(note) = &record.note {
                println!("note: {note}");
            }
            Ok(0)
        }
        Command::Kernel { op, degree, profile, json } => {
            let op = op.build()?;
            if *profile {
                let p = kernel_dim_profile(&op, *degree).map_err(|e| RunError::Schema(e.to_string()))?;
                if *json {
                    println!("{}", serde_json::to_string_pretty(&p).expect("profile serializes"));
                } else {
                    println!("dims: {:?} stabilized: {}", p.dims, p.stabilized);
                }
                return Ok(0);
            }
            let kb = kernel_basis(&op, *degree).map_err(|e| RunError::Schema(e.to_string()))?;
            if *json {
                println!("{}", serde_json::to_string_pretty(&kb.export()).expect("kernel serializes"));
            } else {
                println!("dim {} (ambient {}, rank {})", kb.dim(), kb.ambient_dim(), kb.map_rank());
                for (i, p) in kb.elements().iter().enumerate() {
                    println!("  [{}] {}", i + 1, p.pretty());
                }
            }
            Ok(0)
        }
        Command::Probe { op, trials } => {
            let op = op.build()?;
            let report = ellipticity_probe(&op, *trials, cli.seed.unwrap_or(0));
            let record = korncert::cli::EllipticityRecord::from(&report);
            println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("korncert: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
