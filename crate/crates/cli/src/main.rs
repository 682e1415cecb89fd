mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use motif_expect::estimator::{
    estimate_from_latents, naive_from_latents, significance_from_latents, EstimateReport,
    SignificanceMode, SignificanceReport,
};
use motif_expect::oracle::{
    check_expected_identity, check_fast_path, check_identity, link_count, ExpectedIdentityCheck,
    FastPathCheck, IdentityReport, DEFAULT_MAX_LINKS,
};
use motif_expect::{
    automorphisms, ordered_count_binary, parse_edge_list, parse_latents, sample_latent, set_count,
    Decoder, ErrorClass, LabeledGraph, LatentVector, Motif, PriorSpec, DEFAULT_MAX_ARITY,
};
use serde::Serialize;

use output::{render, Format, Input, Provenance};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  I/O error (missing or unreadable file)
  2  usage error
  3  parse error (malformed edge list, JSON, or latent file; self-loop)
  4  validation error (invalid matrix, directedness or dimension mismatch)
  5  size limit (oracle enumeration too large)
  6  numerical flag (zero spread: significance score undefined)
  7  check failed (an identity or oracle comparison did not hold)";

/// Expected motif counts for mixture graph models with conditionally
/// independent links.
#[derive(Parser)]
#[command(version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Largest accepted motif arity. Counting enumerates n^k tuples.
    #[arg(long, default_value_t = DEFAULT_MAX_ARITY, global = true)]
    max_arity: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Ordered count, set count and automorphism count of a motif in a graph.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        motif: PathBuf,
        /// Read the graph as directed (default: the motif's directedness).
        #[arg(long)]
        directed: bool,
    },
    /// Automorphisms of a motif template.
    Aut {
        #[arg(long)]
        motif: PathBuf,
    },
    /// Expected ordered motif count under a decoder and a standard normal prior.
    Expected {
        #[arg(long)]
        decoder: PathBuf,
        #[arg(long)]
        motif: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        /// conditional: count on the expected matrix per latent;
        /// naive: count on sampled graphs.
        #[arg(long, value_enum, default_value = "conditional")]
        method: MethodArg,
        /// Graphs sampled per latent (naive method).
        #[arg(long, default_value_t = 1)]
        graphs_per_z: usize,
    },
    /// Check the expected-matrix count against exhaustive enumeration, and
    /// ordered = Aut × set on exact expectations and on random graphs.
    Verify {
        /// Decoder JSON; a table decoder is a weighted graph.
        #[arg(long)]
        decoder: PathBuf,
        #[arg(long)]
        motif: PathBuf,
        /// Latent file; the first vector is used (default: one prior draw).
        #[arg(long)]
        latents: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random graphs for the ordered = Aut × set check.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Largest number of independent links the oracle enumerates (2^L graphs).
        #[arg(long, default_value_t = DEFAULT_MAX_LINKS)]
        max_oracle_links: usize,
    },
    /// Standardized score of an observed motif count against the model.
    Significance {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        decoder: PathBuf,
        #[arg(long)]
        motif: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        sampling: Sampling,
        /// Graphs sampled per latent (total-variance mode).
        #[arg(long, default_value_t = 100)]
        graphs_per_z: usize,
        /// Read the graph as directed (default: the decoder's directedness).
        #[arg(long)]
        directed: bool,
    },
}

#[derive(Args)]
struct Sampling {
    /// Latent samples drawn from the prior (ignored with --latents).
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Seed for latent and graph sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Whitespace-separated latent vectors, one per line, used instead of
    /// prior draws.
    #[arg(long)]
    latents: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Conditional,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ConditionalSpread,
    TotalVariance,
}

impl From<ModeArg> for SignificanceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ConditionalSpread => SignificanceMode::ConditionalSpread,
            ModeArg::TotalVariance => SignificanceMode::TotalVariance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Failure {
    Io = 1,
    Parse = 3,
    Validation = 4,
    SizeLimit = 5,
    Numerical = 6,
    CheckFailed = 7,
}

struct CliError {
    kind: Failure,
    msg: String,
}

impl From<motif_expect::Error> for CliError {
    fn from(e: motif_expect::Error) -> Self {
        let kind = match e.class() {
            ErrorClass::Io => Failure::Io,
            ErrorClass::Parse => Failure::Parse,
            ErrorClass::Validation => Failure::Validation,
            ErrorClass::SizeLimit => Failure::SizeLimit,
        };
        CliError {
            kind,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            kind: Failure::Io,
            msg: e.to_string(),
        }
    }
}

/// A rendered report plus an optional non-zero status for flagged results.
struct Outcome {
    text: String,
    flag: Option<Failure>,
}

fn load_motif(path: &Path, common: &Common) -> Result<(Input, Motif), CliError> {
    let input = Input::read("motif", path)?;
    let motif = Motif::from_json_str(&input.text, common.max_arity)?;
    if motif.k() > DEFAULT_MAX_ARITY {
        eprintln!(
            "note: motif arity {} exceeds the default limit {DEFAULT_MAX_ARITY}; \
             counting enumerates n^{} tuples",
            motif.k(),
            motif.k()
        );
    }
    Ok((input, motif))
}

fn load_graph(path: &Path, directed: bool) -> Result<(Input, LabeledGraph), CliError> {
    let input = Input::read("graph", path)?;
    let graph = parse_edge_list(&input.text, directed)?;
    Ok((input, graph))
}

fn load_decoder(path: &Path) -> Result<(Input, Decoder), CliError> {
    let input = Input::read("decoder", path)?;
    let decoder = Decoder::from_json_str(&input.text)?;
    Ok((input, decoder))
}

/// Latents from `--latents`, or `samples` prior draws.
fn latents(
    decoder: &Decoder,
    sampling: &Sampling,
) -> Result<(Option<Input>, Vec<LatentVector>), CliError> {
    match &sampling.latents {
        Some(path) => {
            let input = Input::read("latents", path)?;
            let zs = parse_latents(&input.text)?;
            if zs.is_empty() {
                return Err(CliError {
                    kind: Failure::Parse,
                    msg: "latent file is empty".into(),
                });
            }
            Ok((Some(input), zs))
        }
        None => {
            if sampling.samples == 0 {
                return Err(CliError {
                    kind: Failure::Validation,
                    msg: "--samples must be at least 1".into(),
                });
            }
            let prior = PriorSpec::standard_normal(decoder.latent_dim(), sampling.seed);
            Ok((None, sample_latent(&prior, sampling.samples)))
        }
    }
}

#[derive(Serialize)]
struct CountReport {
    command: &'static str,
    n: usize,
    k: usize,
    directed: bool,
    ordered: u64,
    set: u64,
    aut: u64,
    identity_holds: bool,
    provenance: Provenance,
}

#[derive(Serialize)]
struct AutReport {
    command: &'static str,
    k: usize,
    directed: bool,
    aut: u64,
    automorphisms: Vec<Vec<usize>>,
    provenance: Provenance,
}

#[derive(Serialize)]
struct ExpectedReport {
    command: &'static str,
    n: usize,
    k: usize,
    #[serde(flatten)]
    estimate: EstimateReport,
    provenance: Provenance,
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    n: usize,
    k: usize,
    directed: bool,
    links: usize,
    fast_path: FastPathCheck,
    expected_identity: ExpectedIdentityCheck,
    graph_identity: IdentityReport,
    pass: bool,
    provenance: Provenance,
}

#[derive(Serialize)]
struct SignificanceOutput {
    command: &'static str,
    #[serde(flatten)]
    report: SignificanceReport,
    provenance: Provenance,
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let common = &cli.common;
    let format = common.format;
    let done = |text: String| Ok(Outcome { text, flag: None });

    match &cli.command {
        Command::Count {
            graph,
            motif,
            directed,
        } => {
            let (minput, m) = load_motif(motif, common)?;
            let (ginput, lg) = load_graph(graph, *directed || m.directed())?;
            let g = &lg.graph;
            let ordered = ordered_count_binary(g, &m)?;
            let set = set_count(g, &m)?;
            let aut = automorphisms(&m).len() as u64;
            let identity_holds = ordered == aut * set;
            let report = CountReport {
                command: "count",
                n: g.n(),
                k: m.k(),
                directed: g.directed(),
                ordered,
                set,
                aut,
                identity_holds,
                provenance: Provenance::new(None, &[&ginput, &minput]),
            };
            Ok(Outcome {
                text: render(&report, format),
                flag: (!identity_holds).then_some(Failure::CheckFailed),
            })
        }

        Command::Aut { motif } => {
            let (minput, m) = load_motif(motif, common)?;
            let autos = automorphisms(&m);
            let report = AutReport {
                command: "aut",
                k: m.k(),
                directed: m.directed(),
                aut: autos.len() as u64,
                automorphisms: autos,
                provenance: Provenance::new(None, &[&minput]),
            };
            done(render(&report, format))
        }

        Command::Expected {
            decoder,
            motif,
            sampling,
            method,
            graphs_per_z,
        } => {
            let (dinput, d) = load_decoder(decoder)?;
            let (minput, m) = load_motif(motif, common)?;
            let (linput, zs) = latents(&d, sampling)?;
            let estimate = match method {
                MethodArg::Conditional => estimate_from_latents(&d, &zs, &m, sampling.seed)?,
                MethodArg::Naive => naive_from_latents(&d, &zs, &m, *graphs_per_z, sampling.seed)?,
            };
            let mut inputs = vec![&dinput, &minput];
            inputs.extend(linput.as_ref());
            let report = ExpectedReport {
                command: "expected",
                n: d.n(),
                k: m.k(),
                estimate,
                provenance: Provenance::new(Some(sampling.seed), &inputs),
            };
            done(render(&report, format))
        }

        Command::Verify {
            decoder,
            motif,
            latents: latent_path,
            seed,
            trials,
            max_oracle_links,
        } => {
            let (dinput, d) = load_decoder(decoder)?;
            let (minput, m) = load_motif(motif, common)?;
            let links = link_count(d.n(), d.directed());
            if *max_oracle_links > DEFAULT_MAX_LINKS && links <= *max_oracle_links {
                eprintln!(
                    "note: oracle limit raised to {max_oracle_links} links; this instance has \
                     {links} links, i.e. 2^{links} graphs × {}^{} tuples each",
                    d.n(),
                    m.k()
                );
            }
            let sampling = Sampling {
                samples: 1,
                seed: *seed,
                latents: latent_path.clone(),
            };
            let (linput, zs) = latents(&d, &sampling)?;
            let wg = d.decode(&zs[0])?;
            let fast_path = check_fast_path(&wg, &m, *max_oracle_links)?;
            let expected_identity = check_expected_identity(&wg, &m, *max_oracle_links)?;
            let graph_identity = check_identity(&m, *trials, *seed)?;
            let pass = fast_path.pass && expected_identity.pass && graph_identity.holds();
            let mut inputs = vec![&dinput, &minput];
            inputs.extend(linput.as_ref());
            let report = VerifyReport {
                command: "verify",
                n: d.n(),
                k: m.k(),
                directed: d.directed(),
                links,
                fast_path,
                expected_identity,
                graph_identity,
                pass,
                provenance: Provenance::new(Some(*seed), &inputs),
            };
            Ok(Outcome {
                text: render(&report, format),
                flag: (!pass).then_some(Failure::CheckFailed),
            })
        }

        Command::Significance {
            graph,
            decoder,
            motif,
            mode,
            sampling,
            graphs_per_z,
            directed,
        } => {
            let (dinput, d) = load_decoder(decoder)?;
            let (minput, m) = load_motif(motif, common)?;
            let (ginput, lg) = load_graph(graph, *directed || d.directed())?;
            let (linput, zs) = latents(&d, sampling)?;
            let report = significance_from_latents(
                &lg.graph,
                &d,
                &zs,
                &m,
                (*mode).into(),
                *graphs_per_z,
                sampling.seed,
            )?;
            let undefined = report.undefined_score;
            if undefined {
                eprintln!("warning: expected spread is zero; score is undefined");
            }
            let mut inputs = vec![&ginput, &dinput, &minput];
            inputs.extend(linput.as_ref());
            let out = SignificanceOutput {
                command: "significance",
                report,
                provenance: Provenance::new(Some(sampling.seed), &inputs),
            };
            Ok(Outcome {
                text: render(&out, format),
                flag: undefined.then_some(Failure::Numerical),
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let result = match cli.common.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(CliError {
                kind: Failure::Validation,
                msg: e.to_string(),
            }),
        },
        None => run(&cli),
    };

    match result {
        Ok(outcome) => {
            print!("{}", outcome.text);
            match outcome.flag {
                None => ExitCode::SUCCESS,
                Some(f) => ExitCode::from(f as u8),
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.kind as u8)
        }
    }
}
