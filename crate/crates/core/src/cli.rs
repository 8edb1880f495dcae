//! `pvfca` command line: `mine`, `lattice`, `stats`, `generate`.
//!
//! Exit codes: 0 success, 2 usage or input error, 1 internal failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::context::FormalContext;
use crate::io::{read_cases, write_cases_csv, write_report_csv, InputFormat};
use crate::lattice::enumerate_concepts;
use crate::mining::{mine, MiningConfig, MiningReport, RelationshipKind};
use crate::stats::{
    Chi2Correction, ContingencyMode, ContingencyTable, DisproportionalityResult, MhraThresholds,
    StatsConfig,
};
use crate::synth::{generate, GeneratorConfig, PlantedAssociation};

#[derive(Debug, Parser)]
#[command(name = "pvfca", version, about = "Concept-lattice mining of adverse drug event reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate concepts, apply the MHRA filter and classify relationships.
    Mine(MineArgs),
    /// Dump the (optionally support-pruned) concept set as JSON.
    Lattice(LatticeArgs),
    /// PRR, χ² and the MHRA verdict for one 2×2 table.
    Stats(StatsArgs),
    /// Write a seeded synthetic case-report CSV.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum CorrectionArg {
    #[default]
    Yates,
    Pearson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ModeArg {
    #[default]
    Conjunction,
    Extent,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 3)]
    pub min_support: usize,
    #[arg(long, default_value_t = 2.0)]
    pub min_prr: f64,
    #[arg(long, default_value_t = 4.0)]
    pub min_chi2: f64,
    #[arg(long, value_enum, default_value_t)]
    pub chi2_correction: CorrectionArg,
    #[arg(long, value_enum, default_value_t)]
    pub contingency_mode: ModeArg,
    /// Haldane 0.5 correction of PRR when a cell is zero.
    #[arg(long)]
    pub haldane: bool,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Report destination; standard output when omitted (the summary then
    /// goes to standard error).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub output_format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub min_support: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    #[arg(long, default_value_t = 2.0)]
    pub min_prr: f64,
    #[arg(long, default_value_t = 4.0)]
    pub min_chi2: f64,
    #[arg(long, default_value_t = 3)]
    pub min_support: usize,
    #[arg(long, value_enum, default_value_t)]
    pub chi2_correction: CorrectionArg,
    #[arg(long)]
    pub haldane: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 3000)]
    pub cases: usize,
    #[arg(long, default_value_t = 500)]
    pub drugs: usize,
    #[arg(long, default_value_t = 600)]
    pub events: usize,
    #[arg(long, default_value_t = 0.01)]
    pub density: f64,
    /// Planted association `DRUG:EVENT:CASES`; repeatable.
    #[arg(long = "plant", value_name = "DRUG:EVENT:CASES")]
    pub planted: Vec<String>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Mine(args) => cmd_mine(&args, out, err),
        Command::Lattice(args) => cmd_lattice(&args, out),
        Command::Stats(args) => cmd_stats(&args, out),
        Command::Generate(args) => cmd_generate(&args, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn load_context(input: &InputArgs) -> Result<FormalContext, Failure> {
    let format = match input.format {
        Some(FormatArg::Csv) => InputFormat::Csv,
        Some(FormatArg::Jsonl) => InputFormat::Jsonl,
        None => InputFormat::from_path(&input.input),
    };
    let cases = read_cases(&input.input, format).map_err(|e| Failure::Input(e.to_string()))?;
    FormalContext::ingest(&cases).map_err(|e| Failure::Input(e.to_string()))
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(internal)
}

fn open_output(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", path.display())))
}

fn mining_config(t: &ThresholdArgs) -> Result<MiningConfig, Failure> {
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if t.min_support == 0 || !positive(t.min_prr) || !positive(t.min_chi2) {
        return Err(Failure::Input(
            "thresholds must be strictly positive".to_string(),
        ));
    }
    Ok(MiningConfig {
        thresholds: MhraThresholds {
            min_support: t.min_support,
            min_prr: t.min_prr,
            min_chi2: t.min_chi2,
        },
        stats: StatsConfig {
            correction: correction(t.chi2_correction),
            contingency_mode: match t.contingency_mode {
                ModeArg::Conjunction => ContingencyMode::Conjunction,
                ModeArg::Extent => ContingencyMode::Extent,
            },
            haldane: t.haldane,
        },
    })
}

fn correction(c: CorrectionArg) -> Chi2Correction {
    match c {
        CorrectionArg::Yates => Chi2Correction::Yates,
        CorrectionArg::Pearson => Chi2Correction::Pearson,
    }
}

/// Three-row summary (total / drug+AE / filtered) plus the per-kind split.
pub fn write_summary(report: &MiningReport, config: &MiningConfig, w: &mut dyn Write) -> std::io::Result<()> {
    let t = &config.thresholds;
    let rows = [
        (format!("Total (support >= {})", t.min_support), report.total_concepts),
        ("{D1..Dn; AE1..AEm}".to_string(), report.strip_concepts),
        (
            format!("PRR > {}, chi2 > {}, support >= {}", t.min_prr, t.min_chi2, t.min_support),
            report.filtered_concepts,
        ),
    ];
    writeln!(w, "{:<44} {:>8}", "Concepts", "Count")?;
    for (label, n) in rows {
        writeln!(w, "{label:<44} {n:>8}")?;
    }
    for kind in RelationshipKind::ALL {
        let n = report.per_kind.get(&kind).copied().unwrap_or(0);
        writeln!(w, "  {:<42} {n:>8}", kind.description())?;
    }
    Ok(())
}

fn write_report(report: &MiningReport, format: OutputFormat, w: &mut dyn Write) -> CmdResult {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, report).map_err(internal)?;
            writeln!(w).map_err(internal)
        }
        OutputFormat::Csv => write_report_csv(report, w).map_err(internal),
    }
}

fn cmd_mine(args: &MineArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let config = mining_config(&args.thresholds)?;
    let ctx = load_context(&args.input)?;
    let report = pool(args.input.threads)?.install(|| mine(&ctx, &config));
    match &args.output {
        Some(path) => {
            let mut f = open_output(path)?;
            write_report(&report, args.output_format, &mut f)?;
            f.flush().map_err(internal)?;
            write_summary(&report, &config, out).map_err(internal)
        }
        None => {
            write_report(&report, args.output_format, out)?;
            write_summary(&report, &config, err).map_err(internal)
        }
    }
}

fn cmd_lattice(args: &LatticeArgs, out: &mut dyn Write) -> CmdResult {
    let ctx = load_context(&args.input)?;
    let concepts = pool(args.input.threads)?.install(|| enumerate_concepts(&ctx, args.min_support));
    let records = concepts.to_records(&ctx);
    let write = |w: &mut dyn Write| -> CmdResult {
        serde_json::to_writer_pretty(&mut *w, &records).map_err(internal)?;
        writeln!(w).map_err(internal)?;
        w.flush().map_err(internal)
    };
    match &args.output {
        Some(path) => write(&mut open_output(path)?),
        None => write(out),
    }
}

#[derive(Serialize)]
struct StatsOutput {
    #[serde(flatten)]
    table: ContingencyTable,
    #[serde(flatten)]
    result: DisproportionalityResult,
}

fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> CmdResult {
    let table = ContingencyTable::new(args.a, args.b, args.c, args.d);
    let config = StatsConfig {
        correction: correction(args.chi2_correction),
        contingency_mode: ContingencyMode::Conjunction,
        haldane: args.haldane,
    };
    let thresholds = MhraThresholds {
        min_support: args.min_support,
        min_prr: args.min_prr,
        min_chi2: args.min_chi2,
    };
    let result = DisproportionalityResult::evaluate(&table, args.a as usize, &config, &thresholds)
        .map_err(|e| Failure::Input(e.to_string()))?;
    serde_json::to_writer(&mut *out, &StatsOutput { table, result }).map_err(internal)?;
    writeln!(out).map_err(internal)
}

fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> CmdResult {
    let planted = args
        .planted
        .iter()
        .map(|s| s.parse::<PlantedAssociation>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let config = GeneratorConfig {
        n_cases: args.cases,
        n_drugs: args.drugs,
        n_events: args.events,
        density: args.density,
        planted,
        seed: args.seed,
    };
    let cases = generate(&config).map_err(|e| Failure::Input(e.to_string()))?;
    match &args.output {
        Some(path) => {
            let mut f = open_output(path)?;
            write_cases_csv(&cases, &mut f).map_err(internal)?;
            f.flush().map_err(internal)
        }
        None => write_cases_csv(&cases, out).map_err(internal),
    }
}
