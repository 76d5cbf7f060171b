use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arcgrid::bounds::BoundReport;
use arcgrid::simplify::Certificate;
use arcgrid::{
    census, morse_to_grid, parse_grid, parse_morse, serialize_grid, simplify, verify_certificate, CensusConfig,
    GridDiagram, Mode, SearchConfig, Target, Verdict,
};
use arcgrid_cli::{render_ascii, render_svg};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Arc-presentations of knots: validation, rendering, conversion and
/// monotonic simplification.
#[derive(Parser)]
#[command(name = "arcgrid", version)]
struct Cli {
    /// Extra diagnostics (timings) on standard error.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a grid file.
    Validate { grid: PathBuf },
    /// Draw a grid as ASCII or SVG.
    Render {
        grid: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a Morse word to a grid.
    Convert {
        #[arg(long)]
        morse: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a monotonic simplification.
    Simplify(SimplifyArgs),
    /// Apply a move sequence and print the result with its ledger.
    Apply {
        grid: PathBuf,
        #[arg(long)]
        moves: PathBuf,
    },
    /// Check a certificate against a claimed verdict.
    Verify {
        grid: PathBuf,
        #[arg(long)]
        moves: PathBuf,
        #[arg(long)]
        verdict: String,
    },
    /// Unknotting bounds for a complexity.
    Bounds(BoundsArgs),
    /// Enumerate and classify all diagrams of one size.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Trivial,
    Split,
    Composite,
}

#[derive(Args)]
struct SimplifyArgs {
    grid: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = TargetArg::Trivial)]
    target: TargetArg,
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    no_cyclic: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    emit_sequence: Option<PathBuf>,
    #[arg(long)]
    emit_ledger: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct BoundsArgs {
    #[arg(long, requires = "cr", conflicts_with_all = ["n", "grid"])]
    b: Option<u64>,
    #[arg(long, requires = "b")]
    cr: Option<u64>,
    #[arg(long, conflicts_with = "grid")]
    n: Option<u64>,
    #[arg(long)]
    grid: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_grid(path: &Path) -> Result<GridDiagram, Failure> {
    parse_grid(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate { grid } => {
            let g = load_grid(&grid)?;
            println!("ok n={} crossings={} components={}", g.size(), g.crossing_count(), g.component_count());
            Ok(0)
        }
        Command::Render { grid, format, output } => {
            let g = load_grid(&grid)?;
            let text = match format {
                Format::Ascii => render_ascii(&g),
                Format::Svg => render_svg(&g),
            };
            emit(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Convert { morse, output } => {
            let word = parse_morse(&read(&morse)?).map_err(|e| invalid(format!("{}: {e}", morse.display())))?;
            let g = morse_to_grid(&word);
            let text = format!("# {} crossings={}\n{}", word.stats(), g.crossing_count(), serialize_grid(&g));
            emit(output.as_deref(), &text)?;
            if output.is_some() {
                println!("{} n={} crossings={}", word.stats(), g.size(), g.crossing_count());
            }
            Ok(0)
        }
        Command::Simplify(args) => simplify_cmd(args, cli.verbose),
        Command::Apply { grid, moves } => {
            let g = load_grid(&grid)?;
            let cert: Certificate = read(&moves)?.parse().map_err(|e| invalid(format!("{}: {e}", moves.display())))?;
            let replay = arcgrid::apply_sequence(&g, &cert.moves).map_err(invalid)?;
            print!("{}", serialize_grid(&replay.diagram));
            print!("{}", replay.ledger);
            println!("max_crossings={}", replay.max_crossings);
            Ok(0)
        }
        Command::Verify { grid, moves, verdict } => {
            let g = load_grid(&grid)?;
            let claimed: Verdict = verdict.parse().map_err(invalid)?;
            let cert: Certificate = read(&moves)?.parse().map_err(|e| invalid(format!("{}: {e}", moves.display())))?;
            if let Some(from) = &cert.from {
                if from.unoriented_key() != g.unoriented_key() {
                    return Err(invalid("certificate `from` header does not match the grid"));
                }
            }
            let report = verify_certificate(&g, &cert.moves, claimed);
            print!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Bounds(args) => {
            let report = match (args.b, args.cr, args.n, args.grid) {
                (Some(b), Some(cr), _, _) => BoundReport::from_morse(b, cr),
                (_, _, Some(n), _) => BoundReport::from_complexity(n),
                (_, _, _, Some(path)) => BoundReport::from_complexity(load_grid(&path)?.size() as u64),
                _ => return Err(invalid("give --b and --cr, --n, or --grid")),
            }
            .map_err(invalid)?;
            print!("{report}");
            Ok(0)
        }
        Command::Census { n, records, threads } => {
            let cfg = CensusConfig { threads, ..CensusConfig::default() };
            let report = census(n, &cfg).map_err(invalid)?;
            print!("{report}");
            if let Some(path) = records {
                let text: String = report.records.iter().map(|r| r.to_json_line() + "\n").collect();
                write(&path, &text)?;
            }
            Ok(if report.inconclusive > 0 { 3 } else { 0 })
        }
    }
}

fn simplify_cmd(args: SimplifyArgs, verbose: bool) -> Result<u8, Failure> {
    let g = load_grid(&args.grid)?;
    let cfg = SearchConfig {
        target: match args.target {
            TargetArg::Trivial => Target::Trivial,
            TargetArg::Split => Target::Split,
            TargetArg::Composite => Target::Composite,
        },
        mode: match args.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Greedy => Mode::Greedy,
        },
        cyclic: !args.no_cyclic,
        max_nodes: args.max_nodes,
        threads: args.threads,
    };
    let result = simplify(&g, &cfg).map_err(invalid)?;
    println!("verdict {}", result.verdict);
    println!("moves {}", result.certificate.len());
    println!("nodes_visited {}", result.stats.nodes_visited);
    println!("max_crossings {}", result.stats.max_crossings);
    print!("final {}", serialize_grid(&result.final_diagram).replace('\n', " ").trim_end());
    println!();
    if verbose {
        eprintln!("elapsed {:?}", result.stats.elapsed);
    }
    if let Some(path) = &args.emit_sequence {
        write(path, &result.certificate_text(&g))?;
    }
    if let Some(path) = &args.emit_ledger {
        write(path, &result.ledger.to_string())?;
    }
    Ok(if result.verdict == Verdict::Inconclusive { 3 } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
