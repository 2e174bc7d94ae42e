//! `caplim` — command-line front end for the capacity library.
//!
//! Every command prints one JSON document on stdout. Exit codes: 0 success
//! or property passed, 1 property failed, 2 invalid input or precondition.

#![allow(clippy::result_large_err)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use caplim::certify::{
    certify_bicommutativity, certify_cylinder_pinning, certify_openness, certify_surjectivity, Neighborhood,
    OpennessCenter, SamplerConfig, SamplerMethod, TrialPlan,
};
use caplim::choquet::choquet_integral;
use caplim::construct::{clamp_extension, inner_join_square, lower_capacity, upper_capacity};
use caplim::io::{capacity_json, map_json, parse_capacity, parse_diagram, parse_function, parse_map};
use caplim::limit::limit_with_cap;
use caplim::rational::{decimal_string, format_rational, parse_rational};
use caplim::square::Square;
use caplim::{Capacity, Diagram, Error, LimitSpace, MarginalFamily};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "caplim", version, about = "Capacities on finite spaces and limits of finite diagrams")]
struct Cli {
    /// Refuse to build capacity tables on limits with more threads than this.
    #[arg(long, global = true, default_value_t = 16)]
    max_limit_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a diagram and report which projections of its limit are onto.
    Validate { diagram: PathBuf },
    /// Print the threads of the limit and the projections.
    Limit { diagram: PathBuf },
    /// Choquet integral of a function against a capacity.
    Choquet { capacity: PathBuf, function: PathBuf },
    /// Push a capacity forward along a point map.
    Pushforward { capacity: PathBuf, map: PathBuf },
    /// Inner join of two capacities on a bicommutative square.
    Join { square: PathBuf, mu: PathBuf, nu: PathBuf },
    /// Clamp a capacity on the limit so that it has the given marginals.
    Extend {
        diagram: PathBuf,
        lambda0: PathBuf,
        /// Marginal at one vertex, as `ID=FILE`; one per vertex.
        #[arg(long = "marginal", value_name = "ID=FILE", required = true)]
        marginals: Vec<String>,
        /// Also print the lower and upper envelope capacities.
        #[arg(long)]
        emit_envelopes: bool,
    },
    /// Run a certifier and print its report.
    Certify {
        property: Property,
        diagram: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, env = "CAPLIM_SEED", default_value_t = 0)]
        seed: u64,
        /// Enumerate every grid capacity with values in {0, 1/K, …, 1}
        /// instead of sampling.
        #[arg(long, value_name = "K")]
        grid: Option<u32>,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        /// Openness only: constrain singleton values alone.
        #[arg(long)]
        singleton_only: bool,
        /// Openness only: a fixed centre instead of a sampled one.
        #[arg(long)]
        lambda0: Option<PathBuf>,
        #[arg(long, default_value = "rectified-uniform")]
        method: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Bicommutativity,
    Openness,
    Surjectivity,
    Pinning,
}

/// An invalid-input failure, tied to the file it came from when known.
struct Failure {
    file: Option<PathBuf>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { file: None, error }
    }
}

trait InFile<T> {
    fn in_file(self, path: &Path) -> Result<T, Failure>;
}

impl<T> InFile<T> for caplim::Result<T> {
    fn in_file(self, path: &Path) -> Result<T, Failure> {
        self.map_err(|error| Failure {
            file: Some(path.to_path_buf()),
            error,
        })
    }
}

enum Output {
    Done(Value),
    Report { json: Value, pass: bool },
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        file: Some(path.to_path_buf()),
        error: Error::Format(format!("cannot read file: {e}")),
    })
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    parse_diagram(&read(path)?).in_file(path)
}

fn load_capacity(path: &Path) -> Result<Capacity, Failure> {
    parse_capacity(&read(path)?).in_file(path)
}

fn build_limit(d: &Diagram, cap: usize, path: &Path) -> Result<LimitSpace, Failure> {
    limit_with_cap(d, cap).in_file(path)
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let cap = cli.max_limit_size;
    match cli.command {
        Command::Validate { diagram } => {
            let d = load_diagram(&diagram)?;
            let l = build_limit(&d, cap, &diagram)?;
            let onto: BTreeMap<&str, bool> = d.ids().iter().map(String::as_str).zip(l.projection_surjectivity()).collect();
            Ok(Output::Done(json!({
                "valid": true,
                "vertices": d.vertex_count(),
                "edges": d.edges().len(),
                "threads": l.len(),
                "surjective_projections": onto,
            })))
        }
        Command::Limit { diagram } => {
            let d = load_diagram(&diagram)?;
            let l = build_limit(&d, cap, &diagram)?;
            let labels = l.space().map(|s| s.points().to_vec()).unwrap_or_default();
            let threads: Vec<Value> = l
                .threads()
                .iter()
                .zip(&labels)
                .map(|(t, label)| {
                    let coords: BTreeMap<&str, &str> =
                        t.iter().enumerate().map(|(o, &p)| (d.id(o), d.space(o).label(p))).collect();
                    json!({"label": label, "coordinates": coords})
                })
                .collect();
            let projections: BTreeMap<&str, Value> =
                l.projections().iter().enumerate().map(|(o, pr)| (d.id(o), map_json(pr))).collect();
            Ok(Output::Done(json!({"threads": threads, "projections": projections})))
        }
        Command::Choquet { capacity, function } => {
            let nu = load_capacity(&capacity)?;
            let f = parse_function(&read(&function)?).in_file(&function)?;
            let value = choquet_integral(&nu, &f).in_file(&function)?;
            Ok(Output::Done(json!({"value": format_rational(&value), "decimal": decimal_string(&value)})))
        }
        Command::Pushforward { capacity, map } => {
            let nu = load_capacity(&capacity)?;
            let m = parse_map(&read(&map)?).in_file(&map)?;
            Ok(Output::Done(capacity_json(&nu.pushforward(&m).in_file(&map)?)))
        }
        Command::Join { square, mu, nu } => {
            let d = load_diagram(&square)?;
            let sq = Square::from_diagram(&d).in_file(&square)?;
            let (mu_cap, nu_cap) = (load_capacity(&mu)?, load_capacity(&nu)?);
            let joined = inner_join_square(&sq, &mu_cap, &nu_cap).map_err(|error| {
                let file = match error {
                    Error::MarginalMismatch { .. } | Error::SpaceMismatch(_) => mu,
                    _ => square,
                };
                Failure { file: Some(file), error }
            })?;
            Ok(Output::Done(capacity_json(&joined)))
        }
        Command::Extend {
            diagram,
            lambda0,
            marginals,
            emit_envelopes,
        } => {
            let d = load_diagram(&diagram)?;
            let l = build_limit(&d, cap, &diagram)?;
            let lam0 = load_capacity(&lambda0)?;
            let mut slots: Vec<Option<Capacity>> = vec![None; d.vertex_count()];
            for spec in &marginals {
                let (id, file) = spec
                    .split_once('=')
                    .ok_or_else(|| Error::Format(format!("--marginal {spec:?}: expected ID=FILE")))?;
                let o = d.index_of(id).in_file(&diagram)?;
                if slots[o].is_some() {
                    return Err(Error::Format(format!("--marginal given twice for vertex {id:?}")).into());
                }
                slots[o] = Some(load_capacity(Path::new(file))?);
            }
            let caps = slots
                .into_iter()
                .enumerate()
                .map(|(o, c)| c.ok_or_else(|| Error::UnknownVertex(format!("no --marginal for vertex {}", d.id(o)))))
                .collect::<caplim::Result<Vec<_>>>()?;
            let family = MarginalFamily::new(Arc::new(d.clone()), caps).in_file(&diagram)?;
            let lambda = clamp_extension(&l, &lam0, &family).map_err(|error| {
                let file = match error {
                    Error::SpaceMismatch(_) => lambda0.clone(),
                    _ => diagram.clone(),
                };
                Failure { file: Some(file), error }
            })?;
            let mut out = json!({"lambda": capacity_json(&lambda)});
            if emit_envelopes {
                out["lower"] = capacity_json(&lower_capacity(&l, &family)?);
                out["upper"] = capacity_json(&upper_capacity(&l, &family)?);
            }
            Ok(Output::Done(out))
        }
        Command::Certify {
            property,
            diagram,
            trials,
            seed,
            grid,
            epsilon,
            singleton_only,
            lambda0,
            method,
        } => {
            let d = load_diagram(&diagram)?;
            let method: SamplerMethod = method.parse()?;
            let mut cfg = SamplerConfig::new(seed, method);
            if let Some(k) = grid {
                cfg = cfg.with_grid(k)?;
            }
            let plan = match grid {
                Some(k) => TrialPlan::Grid(k),
                None => TrialPlan::Sampled(trials),
            };
            let report = match property {
                Property::Bicommutativity => certify_bicommutativity(&d, &cfg, plan).in_file(&diagram)?,
                Property::Surjectivity => {
                    certify_surjectivity(&build_limit(&d, cap, &diagram)?, &cfg, plan).in_file(&diagram)?
                }
                Property::Pinning => {
                    certify_cylinder_pinning(&build_limit(&d, cap, &diagram)?, &cfg, plan).in_file(&diagram)?
                }
                Property::Openness => {
                    let l = build_limit(&d, cap, &diagram)?;
                    let eps = parse_rational(&epsilon)?;
                    let center = match &lambda0 {
                        Some(path) => OpennessCenter::Fixed(load_capacity(path)?),
                        None => OpennessCenter::Sampled,
                    };
                    let nbhd = if singleton_only {
                        Neighborhood::Singletons
                    } else {
                        Neighborhood::AllSubsets
                    };
                    certify_openness(&l, &center, &eps, nbhd, &cfg, trials).in_file(&diagram)?
                }
            };
            Ok(Output::Report {
                json: report.to_json(),
                pass: report.pass,
            })
        }
    }
}

/// Prints one JSON document; a closed stdout is not an error worth a panic.
fn emit(v: &Value) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{v}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Output::Done(v)) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Ok(Output::Report { json, pass }) => {
            emit(&json);
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure { file, error }) => {
            let file = file.map(|p| p.display().to_string());
            emit(&json!({
                "error": {
                    "file": file,
                    "location": error.location(),
                    "rule": error.rule(),
                    "message": error.to_string(),
                }
            }));
            match &file {
                Some(f) => eprintln!("caplim: {f}: {error}"),
                None => eprintln!("caplim: {error}"),
            }
            ExitCode::from(2)
        }
    }
}
