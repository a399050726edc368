use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use latinlab::codec::{self, Document, Format};
use latinlab::constructions::{group_square, search_intercalate_free, GroupSpec};
use latinlab::counting::IntercalateStats;
use latinlab::decompose::{check_partition, star_matching_partition, Hypergraph3};
use latinlab::harness::{
    freedman_bound, gstar_experiment, mc_distribution, subsquare_report, Direction,
    FreedmanParams, Sampler,
};
use latinlab::rng::stream;
use latinlab::sampling::jm::{default_burnin, default_thin};
use latinlab::sampling::permanent::extension_bounds_for;
use latinlab::sampling::{enumerate_rectangles, enumerate_squares, JmSampler};
use latinlab::switching::{switching_effect_report, write_report_csv};
use latinlab::trp::{annotate_trace, trp_run, write_trace_csv, TrpOutcome};
use latinlab::{Error, LatinSquare};

#[derive(Parser)]
#[command(name = "latinlab", version, about = "Random Latin squares and their intercalates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Grid,
    Triples,
}

#[derive(Args)]
struct Common {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw squares with the Jacobson-Matthews chain.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
        /// Defaults to n^3 steps.
        #[arg(long)]
        burnin: Option<u64>,
        /// Defaults to n^2 proper visits.
        #[arg(long)]
        thin: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Intercalate statistics of a square, rectangle or partial square.
    Count {
        /// Input file; stdin when omitted.
        input: Option<PathBuf>,
        /// Input format (grid, triples or json); guessed when omitted.
        #[arg(long)]
        input_format: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Count (or list) every square of order n, or every k x n rectangle.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Print every object instead of the total.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the triangle removal process on K_{n,n,n}.
    Trp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record e(G) and the triangle count after every step.
        #[arg(long)]
        trace: bool,
        /// Also record the quasirandomness deviation at this order.
        #[arg(long)]
        h: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare intercalate counts of the binomial model and its pruning with
    /// their exact expectations.
    Gstar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Effect of every switching of a rectangle on its first-row intercalates.
    Switchings {
        #[arg(long)]
        rect: PathBuf,
        #[arg(long)]
        restrict_rows: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Split a 3-uniform hypergraph into stars and matchings of size r.
    Decompose {
        /// One edge per line: three vertex ids; an optional first line gives
        /// the vertex count.
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Group tables and intercalate-free squares.
    Construct {
        #[arg(long, group = "which")]
        boolean: Option<u32>,
        #[arg(long, group = "which")]
        cyclic: Option<usize>,
        #[arg(long, group = "which")]
        intercalate_free: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Distribution of the intercalate (or order-3 subsquare) count.
    Experiment {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        burnin: Option<u64>,
        #[arg(long)]
        thin: Option<u64>,
        /// Every square exactly once (n <= 5).
        #[arg(long)]
        exhaustive: bool,
        /// Count order-3 subsquares instead of intercalates.
        #[arg(long)]
        subsquares: bool,
        /// Tail thresholds; each is reported in both directions.
        #[arg(long = "delta", value_delimiter = ',')]
        deltas: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the analytic bounds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Freedman's concentration bound exp(-t^2 / (4K^2Np + 2Kt)).
    Freedman {
        #[arg(long)]
        lipschitz: f64,
        #[arg(long)]
        coords: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        t: f64,
    },
    /// Bregman and Egorychev-Falikman bounds on one-row extensions of a
    /// k x n rectangle.
    Extensions {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
}

type CliResult = Result<(), Box<dyn std::error::Error>>;

fn emit(common: &Common, text: &str) -> CliResult {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn grid_format(f: Option<OutFormat>) -> Result<Format, Error> {
    match f.unwrap_or(OutFormat::Grid) {
        OutFormat::Grid => Ok(Format::Grid),
        OutFormat::Triples => Ok(Format::Triples),
        OutFormat::Json => Ok(Format::Json),
        OutFormat::Csv => Err(Error::InvalidParams("squares are not written as csv".into())),
    }
}

fn read_input(path: Option<&Path>) -> io::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p),
        None => io::read_to_string(io::stdin()),
    }
}

fn guess_format(text: &str) -> Format {
    let t = text.trim_start();
    if t.starts_with('{') {
        Format::Json
    } else {
        Format::Grid
    }
}

fn squares_text(squares: &[LatinSquare], format: Format) -> String {
    squares
        .iter()
        .map(|sq| codec::encode(&Document::Square(sq.clone()), format))
        .collect::<Vec<_>>()
        .join(if format == Format::Json { "\n" } else { "" })
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Sample { n, seed, samples, burnin, thin, common } => {
            let format = grid_format(common.format)?;
            let squares: Vec<LatinSquare> = JmSampler::new(
                n,
                burnin.unwrap_or_else(|| default_burnin(n)),
                thin.unwrap_or_else(|| default_thin(n)),
                samples,
                stream(seed, 0),
            )
            .collect();
            emit(&common, &squares_text(&squares, format))
        }
        Command::Count { input, input_format, common } => {
            let text = read_input(input.as_deref())?;
            let format = match input_format {
                Some(f) => f.parse()?,
                None => guess_format(&text),
            };
            let stats = match codec::decode(&text, format)? {
                Document::Square(sq) => IntercalateStats::of(&sq),
                Document::Rectangle(r) => IntercalateStats::of(&r),
                Document::Triples(t) => IntercalateStats::of(&t),
            };
            emit(&common, &format!("{}\n", stats.to_json()))
        }
        Command::Enumerate { n, k, list, common } => {
            let format = grid_format(common.format)?;
            let mut out = String::new();
            let mut total = 0u64;
            match k {
                None => {
                    for sq in enumerate_squares(n)? {
                        total += 1;
                        if list {
                            out.push_str(&codec::encode(&Document::Square(sq), format));
                        }
                    }
                }
                Some(k) => {
                    for r in enumerate_rectangles(k, n)? {
                        total += 1;
                        if list {
                            out.push_str(&codec::encode(&Document::Rectangle(r), format));
                        }
                    }
                }
            }
            if !list {
                out = format!("{total}\n");
            }
            emit(&common, &out)
        }
        Command::Trp { n, m, seed, trace, h, common } => {
            let mut rng = stream(seed, 0);
            let mut run = trp_run(n, m, &mut rng, trace || h.is_some())?;
            if let Some(h) = h {
                annotate_trace(&mut run, h)?;
            }
            if common.format == Some(OutFormat::Csv) {
                let rows = run.trace.as_deref().ok_or_else(|| {
                    Error::InvalidParams("csv output needs --trace".into())
                })?;
                let mut buf = Vec::new();
                write_trace_csv(rows, &mut buf)?;
                return emit(&common, &String::from_utf8(buf)?);
            }
            #[derive(Serialize)]
            struct Summary<'a> {
                schema: &'static str,
                n: usize,
                m: usize,
                seed: u64,
                outcome: &'static str,
                removed: &'a [latinlab::Triple],
                max_deviation: Option<f64>,
                trace: Option<&'a [latinlab::trp::TraceRow]>,
            }
            let max_deviation = run.trace.as_ref().and_then(|t| {
                t.iter().filter_map(|r| r.deviation).reduce(f64::max)
            });
            let summary = Summary {
                schema: latinlab::harness::SCHEMA,
                n,
                m,
                seed,
                outcome: match run.outcome {
                    TrpOutcome::Removed(_) => "removed",
                    TrpOutcome::Star => "star",
                },
                removed: run.removed.sequence(),
                max_deviation,
                trace: if trace { run.trace.as_deref() } else { None },
            };
            emit(&common, &to_json(&summary))
        }
        Command::Gstar { n, alpha, samples, seed, common } => {
            let report = gstar_experiment(n, alpha, samples, seed)?;
            emit(&common, &to_json(&report))
        }
        Command::Switchings { rect, restrict_rows, common } => {
            let text = fs::read_to_string(&rect)?;
            let rect = match codec::decode(&text, guess_format(&text))? {
                Document::Rectangle(r) => r,
                Document::Square(sq) => sq.into_rectangle(),
                Document::Triples(_) => {
                    return Err(Error::InvalidParams("expected a rectangle".into()).into())
                }
            };
            let report = switching_effect_report(&rect, restrict_rows)?;
            if common.format == Some(OutFormat::Json) {
                return emit(&common, &to_json(&report));
            }
            let mut buf = Vec::new();
            write_report_csv(&report, &mut buf)?;
            emit(&common, &String::from_utf8(buf)?)
        }
        Command::Decompose { edges, r, common } => {
            let h = parse_edges(&fs::read_to_string(&edges)?)?;
            let parts = star_matching_partition(&h, r)?;
            let problems = check_partition(&h, r, &parts);
            if !problems.is_empty() {
                return Err(problems.join("; ").into());
            }
            emit(&common, &to_json(&parts))
        }
        Command::Construct { boolean, cyclic, intercalate_free, common } => {
            let format = grid_format(common.format)?;
            let sq = if let Some(q) = boolean {
                group_square(GroupSpec::Boolean(q))?
            } else if let Some(m) = cyclic {
                group_square(GroupSpec::Cyclic(m))?
            } else if let Some(n) = intercalate_free {
                search_intercalate_free(n)?
                    .ok_or_else(|| format!("no intercalate-free square of order {n}"))?
            } else {
                return Err("one of --boolean, --cyclic, --intercalate-free is required".into());
            };
            emit(&common, &codec::encode(&Document::Square(sq), format))
        }
        Command::Experiment {
            n,
            seed,
            samples,
            burnin,
            thin,
            exhaustive,
            subsquares,
            deltas,
            common,
        } => {
            let sampler = if exhaustive {
                Sampler::Exhaustive
            } else {
                Sampler::Jm {
                    burnin: burnin.unwrap_or_else(|| default_burnin(n)),
                    thin: thin.unwrap_or_else(|| default_thin(n)),
                }
            };
            let report = if subsquares {
                subsquare_report(n, sampler, samples, seed)?
            } else {
                mc_distribution(n, sampler, samples, seed)?
            };
            let tails: Vec<(Direction, f64)> = deltas
                .iter()
                .flat_map(|&d| [(Direction::Lower, d), (Direction::Upper, d)])
                .collect();
            let report = report.with_tails(&tails);
            if common.format == Some(OutFormat::Csv) {
                emit(&common, &report.histogram_csv())
            } else {
                emit(&common, &format!("{}\n", report.to_json()))
            }
        }
        Command::Bounds { which } => {
            let common = Common { out: None, format: None };
            match which {
                BoundsCommand::Freedman { lipschitz, coords, p, t } => {
                    let params = FreedmanParams { k: lipschitz, n: coords, p, t };
                    let value = freedman_bound(params)?;
                    emit(&common, &to_json(&serde_json::json!({ "params": params, "bound": value })))
                }
                BoundsCommand::Extensions { k, n } => {
                    let (upper, lower) = extension_bounds_for(k, n)?;
                    emit(
                        &common,
                        &to_json(&serde_json::json!({ "k": k, "n": n, "bregman_upper": upper, "evf_lower": lower })),
                    )
                }
            }
        }
    }
}

fn parse_edges(text: &str) -> Result<Hypergraph3, Box<dyn std::error::Error>> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        match nums.as_slice() {
            [v] if edges.is_empty() && declared.is_none() => declared = Some(*v),
            [a, b, c] => edges.push([*a, *b, *c]),
            _ => return Err(format!("line {}: expected three vertex ids", i + 1).into()),
        }
    }
    let vertices = declared.unwrap_or_else(|| edges.iter().flatten().max().map_or(0, |&v| v + 1));
    Ok(Hypergraph3::new(vertices, edges)?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
