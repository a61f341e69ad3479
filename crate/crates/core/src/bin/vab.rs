//! Command line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vab_core::examples::{self, Example};
use vab_core::growth::{empirical_conj, probe_lower_bound, write_csv};
use vab_core::io::{analyze, parse_element, ConjugacyAnswer, InputDocument, ReportDocument};
use vab_core::separability::{k3_exponent, ExponentMode, SearchOptions, Tuple};
use vab_core::vab::VirtAbGroup;
use vab_core::{Error, Result};

#[derive(Parser)]
#[command(name = "vab", version, about = "Conjugacy and conjugacy separability growth of virtually abelian groups")]
struct Cli {
    /// Seed for randomized subroutines; recorded in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel searches (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Print a text summary instead of the JSON report.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group and report its square hull and W/V lattices.
    Analyze {
        /// Input document, or the name of a built-in example.
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide conjugacy of two elements (`v1,v2,..;g` or JSON).
    Conj {
        input: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Compute the exponent k of the ln^k growth.
    Exponent {
        input: String,
        #[arg(long)]
        exact: bool,
        /// JSON file with a list of tuples.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        upper: bool,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 4)]
        height_cap: u32,
    },
    /// Empirical growth table and witness-sequence probes.
    Growth {
        input: String,
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        /// Largest quotient index searched.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// JSON file with one tuple to probe along its witness sequence.
        #[arg(long)]
        probe: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        j_max: usize,
        /// Exponent used for the reference column of probes.
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 200_000)]
        ball_cap: usize,
    },
    /// Run a built-in example end to end (`all` for every one).
    Examples {
        name: String,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn load(input: &str) -> Result<(VirtAbGroup, Option<String>)> {
    let path = Path::new(input);
    if path.exists() {
        let text = fs::read_to_string(path)?;
        let doc = InputDocument::parse(&text).map_err(|e| Error::InvalidInput(format!("{input}: {e}")))?;
        return Ok((doc.load()?.group, None));
    }
    if examples::NAMES.contains(&input) {
        return Ok((examples::by_name(input)?.group, Some(input.to_string())));
    }
    Err(Error::InvalidInput(format!("'{input}' is neither a file nor a built-in example")))
}

fn read_tuples(path: &Path) -> Result<Vec<Tuple>> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(if value.is_array() { serde_json::from_value(value)? } else { vec![serde_json::from_value(value)?] })
}

fn emit(report: &ReportDocument, text: bool, out: Option<&Path>) -> Result<()> {
    let body = if text { report.to_text() } else { report.to_json()? + "\n" };
    match out {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn options(budget: u64, height_cap: u32) -> SearchOptions {
    SearchOptions { budget, height_cap, ..SearchOptions::default() }
}

/// Exit status 2 when a budget cut a result short.
fn status(report: &ReportDocument) -> u8 {
    let partial = report.exponent.iter().any(|e| !e.complete)
        || report.growth.iter().any(|r| r.budget_hit)
        || report.probe.iter().any(|r| r.budget_hit);
    if partial {
        2
    } else {
        0
    }
}

fn run_example(ex: &Example, budget: u64) -> Result<ReportDocument> {
    let mut report = analyze(&ex.group)?;
    report.name = Some(ex.name.to_string());
    let opts = options(budget, 4);
    report.exponent.push(k3_exponent(&ex.group, ExponentMode::NaiveUpper, &[], &opts)?);
    if let Some(t) = &ex.witness {
        report.exponent.push(k3_exponent(&ex.group, ExponentMode::WitnessLower, std::slice::from_ref(t), &opts)?);
    }
    report.exponent.push(k3_exponent(&ex.group, ExponentMode::Exact, &[], &opts)?);
    Ok(report)
}

fn run(cli: Cli) -> Result<u8> {
    #[cfg(feature = "parallel")]
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| Error::Internal(e.to_string()))?;
    }
    let text = cli.text;
    match cli.command {
        Command::Analyze { input, out } => {
            let (group, name) = load(&input)?;
            let mut report = analyze(&group)?;
            report.name = name;
            report.seed = cli.seed;
            emit(&report, text, out.as_deref())?;
            Ok(0)
        }
        Command::Conj { input, x, y } => {
            let (group, name) = load(&input)?;
            let (x, y) = (parse_element(&x)?, parse_element(&y)?);
            let c = group.is_conjugate(&x, &y)?;
            let report = ReportDocument {
                name,
                group_order: group.group_order(),
                dim: group.dim(),
                conjugacy: vec![ConjugacyAnswer { x, y, conjugate: c.conjugate, witness: c.witness }],
                seed: cli.seed,
                ..Default::default()
            };
            emit(&report, text, None)?;
            Ok(0)
        }
        Command::Exponent { input, exact, witness, upper, budget, height_cap } => {
            let (group, name) = load(&input)?;
            let opts = options(budget, height_cap);
            let mut report = ReportDocument {
                name,
                group_order: group.group_order(),
                dim: group.dim(),
                seed: cli.seed,
                ..Default::default()
            };
            let any = exact || upper || witness.is_some();
            if upper {
                report.exponent.push(k3_exponent(&group, ExponentMode::NaiveUpper, &[], &opts)?);
            }
            if let Some(p) = witness {
                let tuples = read_tuples(&p)?;
                report.exponent.push(k3_exponent(&group, ExponentMode::WitnessLower, &tuples, &opts)?);
            }
            if exact || !any {
                report.exponent.push(k3_exponent(&group, ExponentMode::Exact, &[], &opts)?);
            }
            emit(&report, text, None)?;
            Ok(status(&report))
        }
        Command::Growth { input, n_max, budget, probe, j_max, k, out, format, ball_cap } => {
            let (group, name) = load(&input)?;
            let mut report = ReportDocument {
                name,
                group_order: group.group_order(),
                dim: group.dim(),
                seed: cli.seed,
                ..Default::default()
            };
            report.growth = empirical_conj(&group, n_max, budget, ball_cap)?;
            if let Some(p) = probe {
                let tuples = read_tuples(&p)?;
                let t = tuples.first().ok_or_else(|| Error::InvalidInput("probe file has no tuple".into()))?;
                report.probe = probe_lower_bound(&group, t, j_max, budget, k)?;
            }
            match format {
                Format::Json => emit(&report, text, out.as_deref())?,
                Format::Csv => match out {
                    Some(p) => write_csv(&report.growth, fs::File::create(p)?)?,
                    None => write_csv(&report.growth, std::io::stdout().lock())?,
                },
            }
            Ok(status(&report))
        }
        Command::Examples { name, budget } => {
            let list = if name == "all" { examples::all()? } else { vec![examples::by_name(&name)?] };
            let mut code = 0;
            for ex in &list {
                let mut report = run_example(ex, budget)?;
                report.seed = cli.seed;
                emit(&report, text, None)?;
                code = code.max(status(&report));
            }
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
