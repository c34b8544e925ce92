use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rhobock_core::{
    analyze, chart_from_page, covers_region, ko_chart, load_catalog, load_rules, render,
    seed_rules, Catalog, ChartKind, EngineOptions, Error, Format, ReportKind, Window,
};

const EXIT_USAGE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_IO: u8 = 4;

/// Smallest stem bound that reaches the first Q-tower differentials.
const MIN_REPORT_STEM: i64 = 8;

#[derive(Parser)]
#[command(
    name = "rhobock",
    version,
    about = "Bockstein and Adams computations for the coweight-0 region of C2-equivariant Ext"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline and emit a report and/or a chart.
    Compute(ComputeArgs),
}

#[derive(Parser)]
struct ComputeArgs {
    #[arg(long, default_value_t = 24)]
    max_stem: i64,
    /// Coweight range as MIN..MAX.
    #[arg(long, default_value = "-2..1", allow_hyphen_values = true, value_parser = parse_range)]
    coweights: (i64, i64),
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum)]
    report: Option<ReportArg>,
    #[arg(long, value_enum, default_value_t = ChartArg::None)]
    chart: ChartArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Svg)]
    format: FormatArg,
    /// Chart destination; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rules file replacing the seeded differentials.
    #[arg(long)]
    rules_override: Option<PathBuf>,
    /// Treat every structural warning as a violation.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportArg {
    Divisibility,
    FixedPoints,
    TwoDivisibility,
    Mahowald,
    Census,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChartArg {
    E2,
    Einf,
    Ko,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Tikz,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or("expected MIN..MAX")?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{a}`"))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{b}`"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Violation(Vec<String>),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::UnsupportedFormat(_)
            | Error::UnknownFamily(_) => Failure::Usage(e.to_string()),
            other => Failure::Violation(vec![other.to_string()]),
        }
    }
}

fn compute(args: &ComputeArgs) -> Result<(), Failure> {
    if args.report.is_some() && args.max_stem < MIN_REPORT_STEM {
        return Err(Failure::Usage(format!(
            "reports need --max-stem >= {MIN_REPORT_STEM}"
        )));
    }
    let cat = match &args.catalog {
        Some(p) => load_catalog(p)?,
        None => Catalog::default(),
    };
    let rules = match &args.rules_override {
        Some(p) => load_rules(&cat, p)?,
        None => seed_rules(&cat)?,
    };
    let window = Window::new(args.max_stem, args.coweights)?;
    if args.report.is_some() && !covers_region(&window) {
        return Err(Failure::Usage(
            "reports need --coweights covering -1..1".into(),
        ));
    }
    let opts = EngineOptions {
        strict: args.strict,
        ..EngineOptions::default()
    };
    let analysis = analyze(&cat, &rules, window, &opts)?;

    let mut stderr = std::io::stderr().lock();
    for w in analysis.warnings(args.strict) {
        let _ = writeln!(stderr, "warning: {w}");
    }
    for line in analysis.inference_lines(&cat) {
        let _ = writeln!(stderr, "inference: {line}");
    }
    let violations = analysis.violations(args.strict);
    if !violations.is_empty() {
        return Err(Failure::Violation(violations));
    }

    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    if let Some(kind) = args.report {
        let kind = match kind {
            ReportArg::Divisibility => ReportKind::Divisibility,
            ReportArg::FixedPoints => ReportKind::FixedPoints,
            ReportArg::TwoDivisibility => ReportKind::TwoDivisibility,
            ReportArg::Mahowald => ReportKind::Mahowald,
            ReportArg::Census => ReportKind::Census,
        };
        let table = analysis.table(&cat, kind);
        write!(stdout, "{}\n{}", table.to_pretty(), table.to_tsv()).map_err(io)?;
    }
    let kind = match args.chart {
        ChartArg::None => return Ok(()),
        ChartArg::E2 => ChartKind::E2,
        ChartArg::Einf => ChartKind::Einf,
        ChartArg::Ko => ChartKind::Ko,
    };
    let doc = match kind {
        ChartKind::Ko => ko_chart(rhobock_core::chart::DEFAULT_KO_CHART)?,
        _ => chart_from_page(&analysis.run, &cat, kind)?,
    };
    let format = match args.format {
        FormatArg::Svg => Format::Svg,
        FormatArg::Tikz => Format::Tikz,
    };
    let bytes = render(&doc, format);
    match &args.out {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?
        }
        None => stdout.write_all(&bytes).map_err(io)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Compute(args) = cli.command;
    match compute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Violation(list)) => {
            for m in list {
                eprintln!("violation: {m}");
            }
            ExitCode::from(EXIT_VIOLATION)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}
