use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use psimoment::report::{self, Formula, Mode, OutputFormat, RunConfig, Table};
use psimoment::sieve::{BasePrimes, LambdaSource, Segment, DEFAULT_SEGMENT_SIZE};
use psimoment::{cramer_variance, Error, Result, WeightSum};

#[derive(Parser)]
#[command(
    name = "psimoment",
    version,
    about = "Moments of primes in short intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List von Mangoldt events up to a limit, or count them.
    Sieve {
        /// Largest n to sieve.
        #[arg(long)]
        limit: u64,
        /// Print counts and ψ(limit) instead of the events.
        #[arg(long)]
        count: bool,
    },
    /// Moments over fixed-length windows (x, x + h].
    Fixed {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        h: f64,
        /// Discrete sum over integer n, or the integral over real x.
        #[arg(long, value_enum, default_value_t = FixedMode::Sum)]
        mode: FixedMode,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Moments over proportional windows (x, x + δx].
    Scaled {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a main-term formula.
    Predict {
        #[arg(long, value_enum)]
        formula: FormulaArg,
        #[arg(long)]
        x: f64,
        #[arg(long, conflicts_with = "delta")]
        h: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        k: Vec<u32>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute one of the reference tables.
    Reproduce {
        #[arg(value_enum)]
        table: TableArg,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated moment exponents, ascending, each in 1..=16.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    k: Vec<u32>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    /// Integers per sieve segment. Part of the checkpoint identity.
    #[arg(long, default_value_t = DEFAULT_SEGMENT_SIZE)]
    segment_size: u64,
    /// Append each finished segment to this JSONL file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Skip segments already recorded in the checkpoint.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format [default: csv; reproduce prints a text table].
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Allow runs projected to take more than 30 minutes.
    #[arg(long)]
    confirm_long: bool,
    /// Report wall_seconds as 0 for byte-stable output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixedMode {
    Sum,
    Integral,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Ms,
    ThmI,
    ThmIi,
    Cramer,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    MsTable,
    #[value(name = "scaled-1e8")]
    Scaled1e8,
    #[value(name = "scaled-1e10")]
    Scaled1e10,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl FormatArg {
    fn into_format(self) -> OutputFormat {
        match self {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

impl RunArgs {
    fn apply(&self, mut config: RunConfig) -> RunConfig {
        config.ks = self.k.clone();
        config.threads = self.threads;
        config.segment_size = self.segment_size;
        config.checkpoint_path = self.checkpoint.clone();
        config.resume = self.resume;
        config.confirm_long = self.confirm_long;
        config.record_timing = !self.no_timing;
        config.output_format = self
            .format
            .map_or(OutputFormat::Csv, FormatArg::into_format);
        config.out_path = self.out.clone();
        config
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psimoment: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Sieve { limit, count } => sieve(limit, count),
        Command::Fixed { x, h, mode, run } => {
            let mode = match mode {
                FixedMode::Sum => Mode::FixedSum,
                FixedMode::Integral => Mode::FixedIntegral,
            };
            let config = run.apply(RunConfig::new(mode, x, &[]).with_h(h));
            let report = report::run(&config)?;
            report::emit(&report, config.output_format, config.out_path.as_deref())
        }
        Command::Scaled { x, delta, run } => {
            let config = run.apply(RunConfig::new(Mode::ScaledIntegral, x, &[]).with_delta(delta));
            let report = report::run(&config)?;
            report::emit(&report, config.output_format, config.out_path.as_deref())
        }
        Command::Predict {
            formula,
            x,
            h,
            delta,
            k,
            format,
            out,
        } => {
            if let FormulaArg::Cramer = formula {
                let h = h.ok_or_else(|| Error::Usage("cramer needs --h".into()))?;
                let (gaussian, cramer) = cramer_variance(x, h)?;
                println!("formula,x,h,gaussian_variance,cramer_variance,ratio");
                println!(
                    "cramer,{x:.16e},{h:.16e},{gaussian:.16e},{cramer:.16e},{:.16e}",
                    gaussian / cramer
                );
                return Ok(());
            }
            let formula = match formula {
                FormulaArg::Ms => Formula::Ms,
                FormulaArg::ThmI => Formula::ThmI,
                FormulaArg::ThmIi => Formula::ThmII,
                FormulaArg::Cramer => unreachable!(),
            };
            let mut config = RunConfig::new(Mode::Predict, x, &k);
            config.h = h;
            config.delta = delta;
            config.formula = Some(formula);
            config.record_timing = false;
            let report = report::run(&config)?;
            let format = format.map_or(OutputFormat::Csv, FormatArg::into_format);
            report::emit(&report, format, out.as_deref())
        }
        Command::Reproduce { table, run } => {
            let table = match table {
                TableArg::MsTable => Table::MsTable,
                TableArg::Scaled1e8 => Table::Scaled1e8,
                TableArg::Scaled1e10 => Table::Scaled1e10,
            };
            let config = run.apply(RunConfig::new(Mode::Reproduce, 0.0, &[2, 4, 6]));
            let report = report::reproduce(table, &config)?;
            match run.format {
                Some(f) => report::emit(&report, f.into_format(), config.out_path.as_deref()),
                None => {
                    let text = report::render_table(table, &report);
                    match &config.out_path {
                        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
                        None => {
                            print!("{text}");
                            Ok(())
                        }
                    }
                }
            }
        }
    }
}

fn sieve(limit: u64, count: bool) -> Result<()> {
    if limit < 2 {
        return Err(Error::EmptyDomain(format!("no prime powers up to {limit}")));
    }
    let base = BasePrimes::for_range(limit);
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let (mut primes, mut powers, mut psi) = (0u64, 0u64, WeightSum::ZERO);
    for seg in Segment::new(1, limit)?.split(DEFAULT_SEGMENT_SIZE) {
        for e in base.events(seg)? {
            if count {
                if (e.n as f64).ln() == e.weight {
                    primes += 1;
                }
                powers += 1;
                psi.add(e.weight);
            } else {
                writeln!(out, "{},{:.17e}", e.n, e.weight).map_err(|e| Error::io("<stdout>", e))?;
            }
        }
    }
    if count {
        writeln!(
            out,
            "limit={limit} primes={primes} prime_powers={powers} psi={:.17e}",
            psi.value()
        )
        .map_err(|e| Error::io("<stdout>", e))?;
    }
    out.flush().map_err(|e| Error::io("<stdout>", e))
}
