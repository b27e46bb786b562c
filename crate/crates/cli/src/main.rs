use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dspack_core::distance::{self, DEFAULT_TOL};
use dspack_core::extremal::{build_extremal, exact_rho_extremal, ExtremalFamily, ExtremalSpec};
use dspack_core::graph::{decode_graph, encode_graph, Format, Graph};
use dspack_core::harness::{run_campaign, CampaignConfig, HarnessError, OutputFormat};
use dspack_core::packing::{
    nu_f_exact, tau_packing, verify_p, SearchBudget, DEFAULT_MAX_ENUM_N,
};

const EXIT_FOUND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "dspack", version, about = "Distance spectra, tree packings and P(k,d) certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified distance spectral radius of a graph.
    RhoD {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Exact fractional packing number with a minimising partition.
    NuF {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM_N)]
        max_n: usize,
    },
    /// Pack k edge-disjoint spanning trees or print a violating partition.
    Tau {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Decide property P(k,d).
    VerifyP {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    /// Build an extremal graph and/or its distance spectral radius.
    Extremal {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run a verification campaign from a JSON config.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    G1,
    G2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Graph,
    Rho,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("el") => Format::EdgeList,
        Some("g6") => Format::Graph6,
        _ => {
            return Err(Failure::Usage(format!(
                "{}: graph files must end in .el or .g6",
                path.display()
            )))
        }
    };
    let bytes = fs::read(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    decode_graph(&bytes, format).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn print_json(value: &serde_json::Value) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::RhoD { graph, tol } => {
            let g = read_graph(&graph)?;
            let dm = distance::apsp(&g)?;
            let est = distance::rho_d(&dm, tol)?;
            print_json(&json!({
                "n": g.n(),
                "m": g.m(),
                "wiener": distance::wiener(&dm),
                "rayleigh_lower_bound": dspack_core::rational::RationalRepr::from(
                    distance::rayleigh_lower_bound(&dm)
                ),
                "rho_d": est,
            }))?;
            Ok(0)
        }
        Command::NuF { graph, max_n } => {
            let g = read_graph(&graph)?;
            let (value, partition) = nu_f_exact(&g, max_n)?;
            print_json(&json!({
                "nu_f": dspack_core::rational::RationalRepr::from(value),
                "partition": partition,
            }))?;
            Ok(0)
        }
        Command::Tau { graph, k } => {
            let g = read_graph(&graph)?;
            print_json(&serde_json::to_value(tau_packing(&g, k)?)?)?;
            Ok(0)
        }
        Command::VerifyP { graph, k, d } => {
            let g = read_graph(&graph)?;
            let verdict = verify_p(&g, k, d, &SearchBudget::default())?;
            print_json(&serde_json::to_value(&verdict)?)?;
            Ok(0)
        }
        Command::Extremal {
            family,
            k,
            n,
            emit,
            tol,
        } => {
            let family = match family {
                FamilyArg::G1 => ExtremalFamily::G1Join,
                FamilyArg::G2 => ExtremalFamily::G2Bipartite,
            };
            let spec = ExtremalSpec::new(family, k, n);
            spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let g = build_extremal(&spec)?;
            let edge_list = String::from_utf8(encode_graph(&g, Format::EdgeList)?)
                .expect("edge lists are ASCII");
            if emit == Emit::Graph {
                print!("{edge_list}");
                return Ok(0);
            }
            let rho = exact_rho_extremal(&spec, tol)?;
            let mut value = serde_json::to_value(&rho)?;
            if emit == Emit::Both {
                value["edge_list"] = json!(edge_list);
            }
            print_json(&value)?;
            Ok(0)
        }
        Command::Campaign {
            config,
            seed,
            samples,
            out,
            format,
        } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Failure::Runtime(format!("{}: {e}", config.display())))?;
            let mut cfg = CampaignConfig::from_json(&text).map_err(|e| match e {
                HarnessError::InvalidConfig(m) => Failure::Usage(m),
                other => Failure::Runtime(other.to_string()),
            })?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(samples) = samples {
                cfg.sample_count = samples;
            }
            if let Some(out) = out {
                cfg.output.path = Some(out);
            }
            if let Some(f) = format {
                cfg.output.format = match f {
                    FormatArg::Csv => OutputFormat::Csv,
                    FormatArg::Json => OutputFormat::Json,
                };
            }
            let report = run_campaign(&cfg).map_err(|e| match e {
                HarnessError::InvalidConfig(m) => Failure::Usage(m),
                other => Failure::Runtime(other.to_string()),
            })?;
            match &cfg.output.path {
                Some(path) => report.write(path, cfg.output.format, Some(&cfg))?,
                None => {
                    let bytes = match cfg.output.format {
                        OutputFormat::Csv => report.to_csv()?,
                        OutputFormat::Json => report.to_json(Some(&cfg), None)?,
                    };
                    std::io::stdout().lock().write_all(&bytes)?;
                }
            }
            let s = &report.summary;
            eprintln!(
                "{}: rows={} ok={} counterexamples={} inconsistencies={} errors={} spectral_passed={} verified={} unknown={}",
                cfg.campaign.as_str(),
                s.rows,
                s.ok,
                s.counterexamples,
                s.inconsistencies,
                s.errors,
                s.spectral_passed,
                s.verified,
                s.unknown
            );
            Ok(if report.exit_code() == 0 { 0 } else { EXIT_FOUND })
        }
    }
}
