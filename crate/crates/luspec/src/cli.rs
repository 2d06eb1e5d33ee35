//! Command-line front end: argument parsing and the five subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use luspec_core::closedform::{lift_to_bipartite, spectrum};
use luspec_core::ff::{prime_power, Field};
use luspec_core::graphs::{build_cayley, build_d4, build_gamma, Graph};

use crate::export::{
    epsilon_table, epsilon_text, now_stamp, numeric_json, report_table, spectrum_json,
    spectrum_table, write_coords, write_edge_list, write_epsilon_csv, Stamp,
};
use crate::oracle::{
    numeric_spectrum, ExpansionReport, OracleError, Source, DEFAULT_MAX_DENSE_N, DEFAULT_TOLERANCE,
    MAX_DENSE_N_ENV,
};
use crate::verify::{all_passed, checks_table, verify_q, VerifyOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "luspec",
    version,
    about = "Spectra of the graphs D(4,q) and Γ(4,q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the `generated=` header so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a graph and write its edge list and coordinate dictionary.
    Build(BuildArgs),
    /// Emit the closed-form or numeric spectrum.
    Spectrum(SpectrumArgs),
    /// Run the cross-validation suite; exits 1 on any failure.
    Verify(VerifyArgs),
    /// Tabulate the exponential sums ε_f for odd q.
    Epsilons(EpsilonArgs),
    /// Report λ₂, spectral gap and the Ramanujan verdict for D(4,q).
    Ramanujan(RamanujanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphArg {
    D4,
    Gamma,
    Cayley,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Closed,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Edgelist,
    Table,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long, value_enum, default_value = "gamma")]
    pub graph: GraphArg,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: Format,
    /// Coordinate dictionary path; defaults to `<out>.coords` when `--out` is given.
    #[arg(long)]
    pub coords: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long, value_enum, default_value = "gamma")]
    pub graph: GraphArg,
    #[arg(long, value_enum, default_value = "closed")]
    pub source: SourceArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, env = MAX_DENSE_N_ENV, default_value_t = DEFAULT_MAX_DENSE_N)]
    pub max_dense_n: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated prime powers.
    #[arg(long, value_parser = parse_q, value_delimiter = ',', required = true, num_args = 1..)]
    pub q: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, env = MAX_DENSE_N_ENV, default_value_t = DEFAULT_MAX_DENSE_N)]
    pub max_dense_n: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EpsilonArgs {
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RamanujanArgs {
    #[arg(long, value_parser = parse_q, value_delimiter = ',', required = true, num_args = 1..)]
    pub q: Vec<u64>,
    #[arg(long, value_enum, default_value = "closed")]
    pub source: SourceArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long, env = MAX_DENSE_N_ENV, default_value_t = DEFAULT_MAX_DENSE_N)]
    pub max_dense_n: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] luspec_core::Error),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot serialize JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Accepts a prime power `q ≥ 2`.
pub fn parse_q(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty q list".into());
    }
    let q: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if prime_power(q).is_none() {
        return Err(format!(
            "q = {q} is not a prime power; the graphs are defined over F_q, which needs a prime-power order"
        ));
    }
    Ok(q)
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Config(format!("`{command}` does not support --format {format:?}").to_lowercase())
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn build_graph(field: &Field, graph: GraphArg) -> Result<Graph, CliError> {
    Ok(match graph {
        GraphArg::D4 => build_d4(field)?,
        GraphArg::Gamma => build_gamma(field)?,
        GraphArg::Cayley => build_cayley(field)?,
    })
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let stamp: Stamp = (!cli.no_timestamp).then(now_stamp);
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Build(a) => cmd_build(a, out, stamp),
        Command::Spectrum(a) => cmd_spectrum(a, out, stamp),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Epsilons(a) => cmd_epsilons(a, out, stamp),
        Command::Ramanujan(a) => cmd_ramanujan(a, out),
    }
}

fn cmd_build(a: &BuildArgs, out: Option<&Path>, stamp: Stamp) -> Result<u8, CliError> {
    if a.format != Format::Edgelist {
        return Err(unsupported("build", a.format));
    }
    let field = Field::of_order(a.q)?;
    let graph = build_graph(&field, a.graph)?;
    let mut w = open_out(out)?;
    write_edge_list(&mut w, &graph, stamp)?;
    w.flush()?;
    let coords = a.coords.clone().or_else(|| {
        out.map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".coords");
            PathBuf::from(s)
        })
    });
    if let Some(path) = coords {
        let mut w = BufWriter::new(File::create(path)?);
        write_coords(&mut w, &field, &graph, stamp)?;
        w.flush()?;
    }
    Ok(EXIT_OK)
}

fn cmd_spectrum(a: &SpectrumArgs, out: Option<&Path>, stamp: Stamp) -> Result<u8, CliError> {
    let field = Field::of_order(a.q)?;
    let mut w = open_out(out)?;
    match a.source {
        SourceArg::Closed => {
            let gamma = spectrum(&field)?;
            let s = match a.graph {
                GraphArg::D4 => lift_to_bipartite(&gamma)?,
                GraphArg::Gamma | GraphArg::Cayley => gamma,
            };
            match a.format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &spectrum_json(Some(&field), &s, stamp))?;
                    writeln!(w)?;
                }
                Format::Table => write!(w, "{}", spectrum_table(&s))?,
                f => return Err(unsupported("spectrum", f)),
            }
        }
        SourceArg::Numeric => {
            let graph = build_graph(&field, a.graph)?;
            let s = numeric_spectrum(&graph, a.max_dense_n)?;
            match a.format {
                Format::Json => {
                    serde_json::to_writer_pretty(
                        &mut w,
                        &numeric_json(graph.kind(), a.q, &s, stamp),
                    )?;
                    writeln!(w)?;
                }
                Format::Table => {
                    for v in &s.values {
                        writeln!(w, "{v:.12}")?;
                    }
                }
                f => return Err(unsupported("spectrum", f)),
            }
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: Option<&Path>) -> Result<u8, CliError> {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(CliError::Config(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    let opts = VerifyOptions {
        tolerance: a.tol,
        max_dense_n: a.max_dense_n,
    };
    let checks: Vec<_> = a.q.iter().flat_map(|&q| verify_q(q, &opts)).collect();
    let mut w = open_out(out)?;
    match a.format {
        Format::Table => write!(w, "{}", checks_table(&checks))?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &checks)?;
            writeln!(w)?;
        }
        f => return Err(unsupported("verify", f)),
    }
    w.flush()?;
    Ok(if all_passed(&checks) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_epsilons(a: &EpsilonArgs, out: Option<&Path>, stamp: Stamp) -> Result<u8, CliError> {
    let field = Field::of_order(a.q)?;
    if field.characteristic() == 2 {
        return Err(CliError::Config(format!(
            "q = {} is even; the ε tables cover odd q only",
            a.q
        )));
    }
    let table = epsilon_table(&field)?;
    let mut w = open_out(out)?;
    match a.format {
        Format::Csv => write_epsilon_csv(&mut w, &table)?,
        Format::Table => {
            if let Some(t) = stamp {
                writeln!(w, "# generated={t}")?;
            }
            write!(w, "{}", epsilon_text(&table))?;
        }
        f => return Err(unsupported("epsilons", f)),
    }
    w.flush()?;
    Ok(EXIT_OK)
}

/// The expansion report for one `q` from the chosen source.
pub fn expansion_report(
    q: u64,
    source: SourceArg,
    max_dense_n: usize,
) -> Result<ExpansionReport, CliError> {
    let field = Field::of_order(q)?;
    Ok(match source {
        SourceArg::Closed => {
            let lifted = lift_to_bipartite(&spectrum(&field)?)?;
            ExpansionReport::from_values(q, Source::Closed, lifted.expanded())
        }
        SourceArg::Numeric => {
            let s = numeric_spectrum(&build_d4(&field)?, max_dense_n)?;
            ExpansionReport::from_values(q, Source::Numeric, s.values)
        }
    })
}

fn cmd_ramanujan(a: &RamanujanArgs, out: Option<&Path>) -> Result<u8, CliError> {
    let reports =
        a.q.iter()
            .map(|&q| expansion_report(q, a.source, a.max_dense_n))
            .collect::<Result<Vec<_>, _>>()?;
    let mut w = open_out(out)?;
    match a.format {
        Format::Table => write!(w, "{}", report_table(&reports))?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &reports)?;
            writeln!(w)?;
        }
        f => return Err(unsupported("ramanujan", f)),
    }
    w.flush()?;
    Ok(EXIT_OK)
}
