//! Command-line front end for `geoment-core`: state files, relative and
//! absolute measures, hierarchies, reference tables, curve datasets and a
//! self-verification suite.

pub mod curves;
pub mod output;
pub mod tables;
pub mod verify;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use geoment_core::hierarchy::{egk_absolute, egk_relative, full_hierarchy, HierarchyConfig};
use geoment_core::state::{StateFile, StateRecipe};
use geoment_core::{OptimizerConfig, Partition};
use serde::Serialize;

use crate::output::{fmt_sig, write_csv, write_text};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "geoment", version, about = "Generalized geometric entanglement of N-qubit pure states")]
pub struct Cli {
    #[command(flatten)]
    pub opts: ConfigArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Optimizer and scan settings shared by all subcommands.
#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Restarts per partition
    #[arg(long, global = true, env = "GEOMENT_RESTARTS", default_value_t = 64)]
    pub restarts: usize,

    /// Sweeps per restart
    #[arg(long, global = true, env = "GEOMENT_MAX_ITERATIONS", default_value_t = 10_000)]
    pub max_iterations: usize,

    /// Stop a restart once a sweep improves the overlap by less than this
    #[arg(long = "tol", global = true, default_value_t = 1e-12)]
    pub tolerance: f64,

    /// Seed for random restarts and random test states
    #[arg(long, global = true, env = "GEOMENT_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Points per angle for the grid oracle
    #[arg(long, global = true, default_value_t = 40)]
    pub grid_resolution: usize,

    /// Largest N scanned over all set partitions
    #[arg(long, global = true, env = "GEOMENT_FULL_SCAN_CAP", default_value_t = 8)]
    pub full_scan_cap: usize,

    /// Largest N scanned one partition per shape
    #[arg(long, global = true, env = "GEOMENT_SHAPE_SCAN_CAP", default_value_t = 14)]
    pub shape_scan_cap: usize,

    /// Scan one contiguous partition per shape even for asymmetric states
    #[arg(long, global = true)]
    pub shapes_only: bool,

    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true, env = "GEOMENT_THREADS")]
    pub threads: Option<usize>,
}

impl ConfigArgs {
    pub fn hierarchy_config(&self) -> HierarchyConfig {
        HierarchyConfig {
            optimizer: OptimizerConfig {
                restarts: self.restarts,
                max_iterations: self.max_iterations,
                tolerance: self.tolerance,
                seed: self.seed,
                grid_resolution: self.grid_resolution,
            },
            full_scan_cap: self.full_scan_cap,
            shape_scan_cap: self.shape_scan_cap,
            shapes_only: self.shapes_only,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a state and write it as JSON
    State(StateArgs),
    /// Relative or absolute measure of a state file
    Egk(EgkArgs),
    /// Absolute measures for K = 2..N
    Hierarchy(HierarchyArgs),
    /// Reference tables as CSV
    Tables(TablesArgs),
    /// Figure datasets as CSV
    Curves(CurvesArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ghz,
    W,
    WTilde,
    Cluster4,
    Magnon,
    Wghz,
    #[value(name = "w-w-tilde")]
    WWTilde,
    WGhz3,
    AsymW,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Number of qubits
    #[arg(long)]
    pub n: Option<usize>,
    /// Excitation count for magnon states
    #[arg(long)]
    pub k: Option<usize>,
    /// Mixing angle in [0, π/2]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Relative phase in [0, 2π]
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Comma-separated weights of the asymmetric W state
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// Comma-separated phases of the asymmetric W state (default all zero)
    #[arg(long, value_delimiter = ',')]
    pub xi: Vec<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct EgkArgs {
    /// State file written by `state`
    pub state: PathBuf,
    /// Number of blocks
    #[arg(long)]
    pub k: usize,
    /// Fixed partition, 1-based, e.g. `1,2|3,4`
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HierarchyArgs {
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    #[arg(long, value_enum)]
    pub table: tables::TableId,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    /// Figure number, 1-7
    #[arg(long)]
    pub figure: u8,
    /// Points on the mixing-angle grid
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Points per axis of the (γ1, γ2) surface grid
    #[arg(long, default_value_t = 61)]
    pub grid: usize,
    /// Qubit counts for figure 3
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Skip the optimizer where a formula is available
    #[arg(long)]
    pub closed_form_only: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Replace the tolerances of the table comparisons
    #[arg(long)]
    pub numeric_tolerance: Option<f64>,
    /// Random states in the monotonicity suite
    #[arg(long, default_value_t = 200)]
    pub random_states: usize,
    /// Random three-qubit states checked against the grid oracle
    #[arg(long, default_value_t = 20)]
    pub oracle_states: usize,
    /// Points on the mixing-angle grids
    #[arg(long, default_value_t = 101)]
    pub eta_points: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Maps an error to the process exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<geoment_core::Error>() {
        Some(geoment_core::Error::Cap(_)) => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn need<T>(value: Option<T>, flag: &str, family: Family) -> anyhow::Result<T> {
    value.with_context(|| format!("--{flag} is required for {family:?}"))
}

fn recipe(args: &StateArgs) -> anyhow::Result<StateRecipe> {
    let f = args.family;
    Ok(match f {
        Family::Ghz => StateRecipe::Ghz { n: need(args.n, "n", f)? },
        Family::W => StateRecipe::W { n: need(args.n, "n", f)? },
        Family::WTilde => StateRecipe::WTilde,
        Family::Cluster4 => StateRecipe::Cluster4,
        Family::Magnon => StateRecipe::Magnon {
            n: need(args.n, "n", f)?,
            k: need(args.k, "k", f)?,
        },
        Family::Wghz => StateRecipe::WghzSuperposition {
            n: need(args.n, "n", f)?,
            eta: need(args.eta, "eta", f)?,
        },
        Family::WWTilde => StateRecipe::WWTildeSuperposition {
            eta: need(args.eta, "eta", f)?,
            phi: args.phi,
        },
        Family::WGhz3 => StateRecipe::WGhz3Superposition {
            eta: need(args.eta, "eta", f)?,
            phi: args.phi,
        },
        Family::AsymW => {
            if args.gamma.is_empty() {
                bail!("--gamma is required for AsymW");
            }
            let xi = if args.xi.is_empty() {
                vec![0.0; args.gamma.len()]
            } else {
                args.xi.clone()
            };
            StateRecipe::AsymW {
                gamma: args.gamma.clone(),
                xi,
            }
        }
    })
}

fn cmd_state(args: &StateArgs) -> anyhow::Result<u8> {
    let recipe = recipe(args)?;
    let psi = recipe.build()?;
    let file = StateFile::from_state(&psi, Some(recipe));
    let summary = format!(
        "N={} support={}",
        psi.num_qubits(),
        psi.support_size(geoment_core::state::NORM_TOL)
    );
    match &args.output {
        Some(path) => {
            file.write(path)?;
            println!("{summary}");
        }
        None => {
            println!("{}", file.to_json()?);
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn load(path: &Path) -> anyhow::Result<geoment_core::PureState> {
    let file = StateFile::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(file.to_state()?)
}

#[derive(Serialize)]
struct EgkRecord {
    k: usize,
    partition: Option<String>,
    e: f64,
    lambda2: f64,
    argmin_partitions: Vec<String>,
}

fn cmd_egk(args: &EgkArgs, config: &HierarchyConfig) -> anyhow::Result<u8> {
    let psi = load(&args.state)?;
    let n = psi.num_qubits();
    let record = match &args.partition {
        Some(text) => {
            let p = Partition::parse(text, n)?;
            if p.num_blocks() != args.k {
                bail!("partition {text} has {} blocks, --k is {}", p.num_blocks(), args.k);
            }
            let r = egk_relative(&psi, &p, &config.optimizer)?;
            EgkRecord {
                k: args.k,
                partition: Some(p.to_string()),
                e: r.e_g,
                lambda2: r.lambda2,
                argmin_partitions: Vec::new(),
            }
        }
        None => {
            let r = egk_absolute(&psi, args.k, config)?;
            EgkRecord {
                k: args.k,
                partition: None,
                e: r.absolute_e,
                lambda2: 1.0 - r.absolute_e,
                argmin_partitions: r.argmin_labels(),
            }
        }
    };
    let out = args.output.as_deref();
    match args.format {
        Format::Text => {
            let mut text = match &record.partition {
                Some(p) => format!("E_G^({})({p}) = {}\n", record.k, fmt_sig(record.e)),
                None => format!("E_G^({}) = {}\n", record.k, fmt_sig(record.e)),
            };
            if !record.argmin_partitions.is_empty() {
                text.push_str(&format!("argmin: {}\n", record.argmin_partitions.join(" ")));
            }
            write_text(out, &text)?;
        }
        Format::Json => write_text(out, &(serde_json::to_string_pretty(&record)? + "\n"))?,
        Format::Csv => write_csv(
            output::sink(out)?,
            &["k", "partition", "e", "lambda2", "argmin_partitions"],
            &[vec![
                record.k.to_string(),
                record.partition.clone().unwrap_or_default(),
                fmt_sig(record.e),
                fmt_sig(record.lambda2),
                record.argmin_partitions.join(" "),
            ]],
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_hierarchy(args: &HierarchyArgs, config: &HierarchyConfig) -> anyhow::Result<u8> {
    let psi = load(&args.state)?;
    let report = full_hierarchy(&psi, config)?;
    let out = args.output.as_deref();
    match args.format {
        Format::Json => write_text(out, &(report.to_json()? + "\n"))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .levels
                .iter()
                .map(|l| {
                    vec![
                        l.k.to_string(),
                        fmt_sig(l.absolute_e),
                        l.argmin_partitions.join(" "),
                    ]
                })
                .collect();
            write_csv(output::sink(out)?, &["k", "absolute_e", "argmin_partitions"], &rows)?;
        }
        Format::Text => {
            let mut text = String::new();
            for l in &report.levels {
                text.push_str(&format!(
                    "K={} E={} argmin: {}\n",
                    l.k,
                    fmt_sig(l.absolute_e),
                    l.argmin_partitions.join(" ")
                ));
            }
            text.push_str(&format!("monotone: {}\n", report.monotone));
            write_text(out, &text)?;
        }
    }
    if !report.monotone {
        eprintln!("warning: monotonicity violated at {:?}", report.violations);
    }
    Ok(EXIT_OK)
}

fn cmd_tables(args: &TablesArgs, config: &HierarchyConfig) -> anyhow::Result<u8> {
    let rows = tables::compute(args.table, config)?;
    write_csv(
        output::sink(args.output.as_deref())?,
        &tables::HEADER,
        &tables::csv_rows(&rows),
    )?;
    Ok(EXIT_OK)
}

fn cmd_curves(args: &CurvesArgs, opts: &ConfigArgs) -> anyhow::Result<u8> {
    let curve_opts = curves::CurveOptions {
        points: args.points,
        grid: args.grid,
        ns: if args.n.is_empty() {
            curves::DEFAULT_CURVE_NS.to_vec()
        } else {
            args.n.clone()
        },
        seed: opts.seed,
        closed_form_only: args.closed_form_only,
    };
    let data = curves::figure(args.figure, &curve_opts, &opts.hierarchy_config())?;
    let header: Vec<&str> = data.header.iter().map(String::as_str).collect();
    write_csv(output::sink(args.output.as_deref())?, &header, &data.rows)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, opts: &ConfigArgs) -> anyhow::Result<u8> {
    let verify_opts = verify::VerifyOptions {
        seed: opts.seed,
        numeric_tolerance: args.numeric_tolerance,
        random_states: args.random_states,
        oracle_states: args.oracle_states,
        eta_points: args.eta_points,
    };
    let report = verify::run(&opts.hierarchy_config(), &verify_opts)?;
    write_text(args.output.as_deref(), &report.render())?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn dispatch(cli: &Cli) -> anyhow::Result<u8> {
    let config = cli.opts.hierarchy_config();
    config.optimizer.validate()?;
    match &cli.command {
        Command::State(a) => cmd_state(a),
        Command::Egk(a) => cmd_egk(a, &config),
        Command::Hierarchy(a) => cmd_hierarchy(a, &config),
        Command::Tables(a) => cmd_tables(a, &config),
        Command::Curves(a) => cmd_curves(a, &cli.opts),
        Command::Verify(a) => cmd_verify(a, &cli.opts),
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = match cli.opts.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Err(e.into()),
        },
        None => dispatch(cli),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    }
}
