use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use rootnum::engine::{sign_global_with, EngineError, RootNumberReport};
use rootnum::job::parse_job;
use rootnum::local::{ValidationOptions, ValidationReport};
use rootnum::suites::{self, Suite, SuiteReport, SweepCase, SweepGrid};

#[derive(Parser)]
#[command(
    name = "rootnum",
    version,
    about = "Root numbers of abelian varieties with real multiplication"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the root number of a JSON job.
    Eval {
        job: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Admit split and non-split multiplicative reduction over p = 2.
        #[arg(long)]
        allow_p2_multiplicative: bool,
    },
    /// Compare closed forms against the Gauss-sum oracle.
    Verify {
        /// Suite to run; every suite when omitted.
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Largest residue characteristic for the abelian suite.
        #[arg(long, default_value_t = 47)]
        pmax: u64,
        /// Largest field order for the other suites.
        #[arg(long)]
        qmax: Option<u64>,
        /// Seed for the random jobs of the even suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random jobs per dimension in the even suite.
        #[arg(long, default_value_t = 100)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Tabulate local signs over a parameter grid as CSV.
    Sweep {
        #[arg(long = "case", value_enum)]
        case: SweepCase,
        #[arg(long, default_value_t = 1)]
        g: u32,
        /// Explicit field orders.
        #[arg(long, value_delimiter = ',', conflicts_with = "qmax")]
        q: Vec<u64>,
        /// Every odd prime power up to this bound.
        #[arg(long)]
        qmax: Option<u64>,
        /// Restrict the tame order e to these values.
        #[arg(long, value_delimiter = ',')]
        e: Vec<u64>,
        /// Wild exponents to sweep.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        r: Vec<u32>,
        /// Per-embedding conductor for the induced case.
        #[arg(long, default_value_t = 2)]
        a_iota: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval {
            job,
            format,
            allow_p2_multiplicative,
        } => cmd_eval(&job, format, allow_p2_multiplicative),
        Command::Verify {
            suite,
            pmax,
            qmax,
            seed,
            jobs,
            format,
        } => cmd_verify(suite, pmax, qmax, seed, jobs, format),
        Command::Sweep {
            case,
            g,
            q,
            qmax,
            e,
            r,
            a_iota,
            output,
        } => cmd_sweep(case, g, q, qmax, e, r, a_iota, output),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn cmd_eval(path: &PathBuf, format: Format, allow_p2: bool) -> anyhow::Result<ExitCode> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let data = parse_job(&text).context("parsing job")?;
    let opts = ValidationOptions {
        allow_p2_multiplicative: allow_p2,
    };
    match sign_global_with(&data, &opts) {
        Ok(report) => {
            for w in &report.validation.warnings {
                eprintln!("warning [{}] {}: {}", w.label, w.code, w.detail);
            }
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Format::Table => print!("{}", report_table(&report)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(EngineError::Invalid(validation)) => {
            eprintln!("validation failed: {validation}");
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({ "validation": validation }))?
                ),
                Format::Table => print!("{}", validation_table(&validation)),
            }
            Ok(ExitCode::from(2))
        }
        Err(err) => Err(err.into()),
    }
}

fn report_table(report: &RootNumberReport) -> String {
    let width = report
        .per_place
        .iter()
        .map(|p| p.label.chars().count())
        .chain(["label".len(), "infinite".len()])
        .max()
        .unwrap_or(5);
    let mut out = String::new();
    writeln!(out, "dimension g = {}", report.dimension).unwrap();
    writeln!(
        out,
        "{:<width$}  {:<14}  {:>6}  {:>3}",
        "label", "case", "w_iota", "w"
    )
    .unwrap();
    for p in &report.per_place {
        writeln!(
            out,
            "{:<width$}  {:<14}  {:>6}  {:>3}",
            p.label,
            p.case_tag.to_string(),
            p.w_iota,
            p.w
        )
        .unwrap();
    }
    let inf = rootnum::Sign::Minus.pow(report.infinite_places as u64);
    writeln!(
        out,
        "{:<width$}  {:<14}  {:>6}  {:>3}",
        "infinite",
        format!("x{}", report.infinite_places),
        inf,
        inf.pow(report.dimension as u64)
    )
    .unwrap();
    writeln!(out, "global w_iota = {}", report.global_w_iota).unwrap();
    writeln!(out, "global w      = {}", report.global_w).unwrap();
    writeln!(out, "validation: {}", report.validation).unwrap();
    out
}

fn validation_table(report: &ValidationReport) -> String {
    let mut out = String::new();
    for v in &report.violations {
        writeln!(out, "{}\t{}\t{}", v.label, v.code, v.detail).unwrap();
    }
    out
}

fn run_suite(
    suite: Suite,
    pmax: u64,
    qmax: Option<u64>,
    seed: u64,
    jobs: usize,
) -> Result<Vec<SuiteReport>, suites::SuiteError> {
    Ok(match suite {
        Suite::Abelian => vec![suites::verify_abelian(pmax)?],
        Suite::Induced => vec![suites::verify_induced(qmax.unwrap_or(13))?],
        Suite::Fq => vec![suites::verify_fq(qmax.unwrap_or(13))?],
        Suite::Sp2 => {
            let q = qmax.unwrap_or(100);
            vec![suites::verify_sp2(q)?, suites::verify_squareness(q)?]
        }
        Suite::Gauss => vec![suites::verify_gauss(qmax.unwrap_or(121))?],
        Suite::Even => vec![suites::verify_even_dimension(
            qmax.unwrap_or(100),
            jobs,
            seed,
        )?],
    })
}

fn cmd_verify(
    suite: Option<Suite>,
    pmax: u64,
    qmax: Option<u64>,
    seed: u64,
    jobs: usize,
    format: Format,
) -> anyhow::Result<ExitCode> {
    let selected: Vec<Suite> = match suite {
        Some(s) => vec![s],
        None => Suite::value_variants().to_vec(),
    };
    let mut reports = Vec::new();
    for s in selected {
        reports.extend(run_suite(s, pmax, qmax, seed, jobs)?);
    }
    let passed = reports.iter().all(SuiteReport::passed);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
        Format::Table => {
            for r in &reports {
                println!("{r}");
            }
            println!("{}", if passed { "PASS" } else { "FAIL" });
        }
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    case: SweepCase,
    g: u32,
    q: Vec<u64>,
    qmax: Option<u64>,
    e: Vec<u64>,
    r: Vec<u32>,
    a_iota: u64,
    output: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let qs = match qmax {
        Some(bound) => {
            anyhow::ensure!(
                bound <= suites::SWEEP_Q_LIMIT,
                "qmax {bound} exceeds the limit {}",
                suites::SWEEP_Q_LIMIT
            );
            suites::prime_powers_up_to(bound, true)
        }
        None => q,
    };
    let grid = SweepGrid {
        case,
        g,
        qs,
        e_filter: (!e.is_empty()).then_some(e),
        r_values: r,
        a_iota,
    };
    let csv = suites::rows_to_csv(&suites::sweep(&grid)?);
    match output {
        Some(path) => {
            std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
