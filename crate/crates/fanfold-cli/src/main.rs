//! Command-line front end: fan validation, full analysis reports in text or
//! JSON, SVG rendering, and seeded batch sweeps of random foldable fans.
//!
//! Exit codes: 0 success, 1 domain rejection (invalid fan or malformed
//! document), 2 I/O or arithmetic capacity.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fanfold::classify::{random_foldable_fan, RANDOM_BASES};
use fanfold::fan::{catalog, Fan2D, FanError};
use fanfold::report::{full_report, Provenance, Report};
use fanfold_cli::{document::FanDocument, svg, text};

#[derive(Parser)]
#[command(name = "fanfold", version, about = "Symmetry, deformation and moduli-cone analysis of smooth complete toric surface fans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Fan document (JSON with optional "name" and required "rays").
    #[arg(value_name = "FILE", conflicts_with = "catalog", required_unless_present = "catalog")]
    file: Option<PathBuf>,
    /// Use a named catalog fan instead of a file (e.g. Y3, P2, Sigma6,
    /// Hirzebruch(2), NonGorensteinX).
    #[arg(long, value_name = "NAME")]
    catalog: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and echo its canonical form.
    Validate(InputArgs),
    /// Run the full analysis pipeline and print the report.
    Report {
        #[command(flatten)]
        input: InputArgs,
        /// Machine-readable JSON output.
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Human-readable text output (the default).
        #[arg(long)]
        text: bool,
    },
    /// Render the fan as an SVG diagram.
    Render {
        #[command(flatten)]
        input: InputArgs,
        /// Output path for the SVG file.
        #[arg(long, value_name = "OUT")]
        svg: PathBuf,
    },
    /// Analyze a seeded batch of random foldable fans.
    Batch {
        /// Number of fans to generate.
        #[arg(long, value_name = "N")]
        random: u64,
        /// Base seed; fan i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Base fan for the equivariant blow-ups.
        #[arg(long, default_value = "Y2")]
        base: String,
        /// Equivariant blow-up rounds per fan.
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Print only the aggregate counts.
        #[arg(long)]
        summary: bool,
    },
}

enum Failure {
    /// Domain rejection: structurally readable input that is not a valid fan.
    Domain(String),
    /// I/O problems or arithmetic capacity.
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Domain(_) => ExitCode::from(1),
            Failure::Io(_) => ExitCode::from(2),
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Io(m) => m,
        }
    }
}

fn classify_fan_error(e: FanError) -> Failure {
    match e {
        FanError::Overflow => Failure::Io(e.to_string()),
        other => Failure::Domain(other.to_string()),
    }
}

fn load_fan(input: &InputArgs) -> Result<(Fan2D, String), Failure> {
    if let Some(name) = &input.catalog {
        let fan = catalog(name).map_err(classify_fan_error)?;
        return Ok((fan, format!("catalog:{name}")));
    }
    let path = input.file.as_ref().expect("clap enforces file xor catalog");
    let contents = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let doc: FanDocument = serde_json::from_str(&contents)
        .map_err(|e| Failure::Domain(format!("malformed fan document: {e}")))?;
    let fan = doc.validate().map_err(classify_fan_error)?;
    Ok((fan, path.display().to_string()))
}

fn provenance(input: String, seed: Option<u64>) -> Provenance {
    Provenance {
        input,
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        seed,
    }
}

fn cmd_validate(input: &InputArgs) -> Result<(), Failure> {
    let (fan, _) = load_fan(input)?;
    let doc = FanDocument::from_fan(&fan);
    let body = serde_json::to_string_pretty(&doc)
        .map_err(|e| Failure::Io(format!("serialization failed: {e}")))?;
    println!("{body}");
    Ok(())
}

fn cmd_report(input: &InputArgs, json: bool) -> Result<(), Failure> {
    let (fan, origin) = load_fan(input)?;
    let report = full_report(&fan, provenance(origin, None));
    print_report(&report, json)
}

fn print_report(report: &Report, json: bool) -> Result<(), Failure> {
    if json {
        let body = serde_json::to_string_pretty(report)
            .map_err(|e| Failure::Io(format!("serialization failed: {e}")))?;
        println!("{body}");
    } else {
        let value = serde_json::to_value(report)
            .map_err(|e| Failure::Io(format!("serialization failed: {e}")))?;
        print!("{}", text::render(&value));
    }
    Ok(())
}

fn cmd_render(input: &InputArgs, out: &Path) -> Result<(), Failure> {
    let (fan, _) = load_fan(input)?;
    let body = svg::render(&fan);
    std::fs::write(out, body)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", out.display())))?;
    Ok(())
}

fn cmd_batch(
    count: u64,
    seed: u64,
    base: &str,
    rounds: usize,
    summary: bool,
) -> Result<(), Failure> {
    if !RANDOM_BASES.contains(&base) {
        return Err(Failure::Domain(format!(
            "unknown base {base:?}; choose one of {RANDOM_BASES:?}"
        )));
    }
    if count == 0 {
        return Err(Failure::Domain("--random must be at least 1".into()));
    }
    let mut gorenstein = 0u64;
    let mut terminal = 0u64;
    let mut rigid = 0u64;
    let mut foldable = 0u64;
    for i in 0..count {
        let fan_seed = seed.wrapping_add(i);
        let fan = random_foldable_fan(fan_seed, base, rounds).map_err(classify_fan_error)?;
        let report = full_report(
            &fan,
            provenance(format!("random:{base}:{rounds}"), Some(fan_seed)),
        );
        if report.deformation.rigid {
            rigid += 1;
        }
        if report.foldability.foldable {
            foldable += 1;
        }
        let gor = report.quotient.gorenstein == Some(true);
        let term = report.quotient.terminal == Some(true);
        if gor {
            gorenstein += 1;
        }
        if term {
            terminal += 1;
        }
        if !summary {
            println!(
                "fan {i}: seed={fan_seed} rays={} group={} p={} dim={} rank={} gorenstein={} terminal={} csck={}",
                report.fan.ray_count,
                report.symmetry.group_type,
                report.foldability.p,
                report.deformation.total_dim,
                report
                    .quotient
                    .rank
                    .map_or_else(|| "-".to_owned(), |r| r.to_string()),
                report
                    .quotient
                    .gorenstein
                    .map_or_else(|| "-".to_owned(), |b| b.to_string()),
                report
                    .quotient
                    .terminal
                    .map_or_else(|| "-".to_owned(), |b| b.to_string()),
                report.classification.csck,
            );
        }
    }
    println!(
        "total {count}: gorenstein {gorenstein}/{count}, terminal {terminal}/{count}, rigid {rigid}/{count}, foldable {foldable}/{count}"
    );
    Ok(())
}

fn run() -> Result<(), Failure> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Validate(input) => cmd_validate(input),
        Command::Report { input, json, .. } => cmd_report(input, *json),
        Command::Render { input, svg } => cmd_render(input, svg),
        Command::Batch {
            random,
            seed,
            base,
            rounds,
            summary,
        } => cmd_batch(*random, *seed, base, *rounds, *summary),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.exit_code()
        }
    }
}
