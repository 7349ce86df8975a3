use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cone_moea::evolution::Algorithm;
use cone_moea::harness::{self, BudgetMode, ExperimentConfig, HarnessError, RunRecord};
use cone_moea::problems::ProblemId;

#[derive(Parser)]
#[command(name = "cone-moea", version, about = "Rotated-cone many-objective optimization experiments")]
struct Cli {
    /// Log progress (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and print its summary.
    Run(RunArgs),
    /// Summarize the records of an experiment directory.
    Summarize {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Print the per-generation front counts of a run record as CSV.
    Layers {
        #[arg(long = "in", value_name = "RECORD")]
        input: PathBuf,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<ProblemId>,
    #[arg(long)]
    objectives: Option<usize>,
    #[arg(long)]
    algorithm: Option<Algorithm>,
    /// Comma-separated angles in degrees.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<f64>>,
    #[arg(long)]
    runs: Option<usize>,
    /// Use half of the default evaluation budget.
    #[arg(long)]
    half_budget: bool,
    /// Exact evaluation budget.
    #[arg(long)]
    evaluations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    seed_base: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// IGD reference set file, one point per line.
    #[arg(long)]
    reference_set: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_toml_file(path)?,
            None => {
                let missing = |what: &str| HarnessError::Config(format!("--{what} is required without --config"));
                ExperimentConfig::new(
                    self.problem.ok_or_else(|| missing("problem"))?,
                    self.objectives.ok_or_else(|| missing("objectives"))?,
                    self.algorithm.ok_or_else(|| missing("algorithm"))?,
                )
            }
        };
        if let Some(p) = self.problem {
            cfg.problem = p;
        }
        if let Some(m) = self.objectives {
            cfg.objectives = m;
        }
        if let Some(a) = self.algorithm {
            cfg.algorithm = a;
        }
        if let Some(a) = self.angles {
            cfg.angles = a;
        }
        if let Some(r) = self.runs {
            cfg.runs = r;
        }
        if self.half_budget {
            cfg.budget = BudgetMode::Half;
        }
        if self.evaluations.is_some() {
            cfg.evaluations = self.evaluations;
        }
        if let Some(n) = self.population {
            cfg.population_size = n;
        }
        if let Some(s) = self.seed_base {
            cfg.seed_base = s;
        }
        if let Some(o) = self.out {
            cfg.out = o;
        }
        if self.reference_set.is_some() {
            cfg.reference_set = self.reference_set;
        }
        Ok(cfg)
    }
}

fn render(summary: &harness::Summary, format: Format) -> Result<String, HarnessError> {
    match format {
        Format::Csv => summary.to_csv(),
        Format::Md => Ok(summary.to_markdown()),
    }
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run(args) => {
            if let Some(n) = args.threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
            }
            let cfg = args.into_config()?;
            let out = harness::run_experiment(&cfg)?;
            print!("{}", harness::summarize(&out.records).to_markdown());
            eprintln!("records written to {}", out.dir.display());
        }
        Command::Summarize { input, format } => {
            let records = harness::load_records(&input)?;
            if records.is_empty() {
                return Err(HarnessError::Config(format!("no run records in {}", input.display())));
            }
            print!("{}", render(&harness::summarize(&records), format)?);
        }
        Command::Layers { input, out } => {
            let record = RunRecord::read(&input)?;
            match out {
                Some(path) => harness::write_layer_series(&record, &path)?,
                None => harness::emit_layer_series(&record, std::io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
