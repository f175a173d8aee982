use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use galaxy_contagion::risk::{BailoutAllocation, Criterion};
use galaxy_contagion::Money;
use galaxy_contagion_cli::report::prepare_output_dir;
use galaxy_contagion_cli::{cmd_calibrate, cmd_frontier, cmd_simulate, with_threads, CliError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "galaxy-contagion", version, about = "Interbank contagion and bailout sizing for a galactic banking network")]
struct Cli {
    /// JSON run configuration; defaults apply to every missing field.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    scenarios: Option<usize>,
    /// Output directory. A non-empty directory gets a fresh `run-*` subdirectory
    /// unless `--overwrite` is given.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads. Results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    overwrite: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the calibrated network and write its headline numbers.
    Calibrate,
    /// Monte Carlo loss distribution for one bailout allocation.
    Simulate {
        /// Also report the run with deposit insurance.
        #[arg(long)]
        insurance: bool,
        /// Cash injected into each Massive bank, in QUINTILLIONS.
        #[arg(long, default_value_t = 0.0)]
        bailout_massive: f64,
        /// Cash injected into each Big bank, in QUINTILLIONS.
        #[arg(long, default_value_t = 0.0)]
        bailout_big: f64,
    },
    /// Minimal bailout frontier under one or all risk criteria.
    Frontier {
        #[arg(long, value_enum, default_value_t = CriterionArg::All)]
        criterion: CriterionArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CriterionArg {
    Expectation,
    Var,
    Avar,
    All,
}

impl CriterionArg {
    fn criteria(self) -> Vec<Criterion> {
        match self {
            CriterionArg::Expectation => vec![Criterion::Expectation],
            CriterionArg::Var => vec![Criterion::ValueAtRisk],
            CriterionArg::Avar => vec![Criterion::AverageValueAtRisk],
            CriterionArg::All => Criterion::ALL.to_vec(),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(n) = cli.scenarios {
        config.n_scenarios = n;
    }
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    config.validate()?;
    let threads = match cli.threads {
        Some(0) => return Err(CliError::Config("--threads must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let dir = prepare_output_dir(&config.output_dir, cli.overwrite)?;

    match cli.command {
        Command::Calibrate => {
            let report = cmd_calibrate(&config, &dir)?;
            for (k, v) in &report.headline {
                println!("{k:<34} {v}");
            }
        }
        Command::Simulate { insurance, bailout_massive, bailout_big } => {
            let bailout = BailoutAllocation::new(Money(bailout_massive), Money(bailout_big))
                .map_err(|e| CliError::Config(e.to_string()))?;
            let insurance = insurance || config.loss.deposit_insurance;
            let report = with_threads(threads, || cmd_simulate(&config, insurance, bailout, &dir))??;
            let ggp = config.loss_config().ggp;
            let s = &report.no_insurance;
            println!("scenarios                  {}", s.n_scenarios);
            println!("mean loss                  {:.1} Q ({:.2}% GGP)", s.mean_loss.0, 100.0 * (s.mean_loss / ggp));
            println!("below green line           {:.1}%", 100.0 * s.fraction_below_green_line);
            println!("exceedance probability     {:.4}", s.exceedance_probability);
            println!("average VaR                {:.1} Q", s.average_var.0);
            if let Some(i) = &report.insurance {
                println!("mean loss, insured         {:.1} Q ({:.2}% GGP)", i.mean_loss.0, 100.0 * (i.mean_loss / ggp));
                println!(
                    "mean insurance payout      {:.1} Q ({:.2}% GGP)",
                    i.mean_insurance_payout.0,
                    100.0 * (i.mean_insurance_payout / ggp)
                );
            }
        }
        Command::Frontier { criterion } => {
            let criteria = criterion.criteria();
            let report = with_threads(threads, || cmd_frontier(&config, &criteria, &dir))??;
            print!("{}", report.table());
            if report.has_gaps() {
                eprintln!("some grid points are unattainable; see frontier.csv");
                println!("wrote {}", dir.display());
                return Ok(ExitCode::from(3));
            }
        }
    }
    println!("wrote {}", dir.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
