//! Command-line front end. Every command reads at most one JSON document
//! (file argument or stdin) and writes one JSON document to stdout.
//!
//! Exit codes: 0 success, 2 validation error, 3 mathematical inconsistency.
//! Errors go to stderr as `{"error": {"kind": ..., "message": ...}}`.

pub mod catalog;
pub mod doc;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hff;
use crate::insertion::{finite_type_order, finite_type_order_closed_form, is_sst_shape};
use crate::lattice::CohClass;
use crate::series::{DonaldsonSeries, PairViolation, Sector};
use crate::structfit::{default_bounds, recover_structure};
use crate::transforms::{blow_down_derivative, blow_up, connect_sum_s1s3, recolor, BlowupVariant};

/// Environment variable fixing the worker-thread count; output does not
/// depend on it.
pub const THREADS_ENV: &str = "DONALDSON_THREADS";

#[derive(Parser, Debug)]
#[command(name = "donaldson", version, about = "Exact calculus of structured Donaldson series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a series document into a truncated series.
    Expand {
        #[arg(long)]
        cutoff: u32,
        #[arg(long, default_value_t = 4)]
        lambda_cutoff: u32,
        /// Expand a single sector only.
        #[arg(long)]
        sector: Option<Sector>,
        input: Option<PathBuf>,
    },
    /// Recover the structured form of an expanded series.
    Fit {
        /// Bound on class coordinates, turned into frequency bounds.
        #[arg(long, default_value_t = 3)]
        bound: i64,
        input: Option<PathBuf>,
    },
    /// Blow up: classes K±E (cosh keeps w, sinh moves it to w+E).
    Blowup {
        #[arg(long, default_value = "cosh")]
        variant: BlowupVariant,
        input: Option<PathBuf>,
    },
    /// Blow-down derivative along an exceptional coordinate (default: last).
    Blowdown {
        #[arg(long)]
        index: Option<usize>,
        input: Option<PathBuf>,
    },
    /// Change the reference class to w'.
    Recolor {
        #[arg(long = "w-prime", alias = "w2", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        w_prime: Vec<i64>,
        input: Option<PathBuf>,
    },
    /// Connected sum with S1xS3.
    SumS1s3 {
        #[arg(long, default_value = "a")]
        cycle: String,
        input: Option<PathBuf>,
    },
    /// Plus-sector classes with their polynomials.
    BasicClasses { input: Option<PathBuf> },
    /// Finite-type order.
    Order { input: Option<PathBuf> },
    /// Adjunction lower bound on the genus of a surface class.
    MinGenus {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        surface: Vec<i64>,
        input: Option<PathBuf>,
    },
    /// Pair structure, symmetric flag and the expansion identity.
    SymmetryCheck {
        #[arg(long, default_value_t = 8)]
        cutoff: u32,
        #[arg(long, default_value_t = 4)]
        lambda_cutoff: u32,
        input: Option<PathBuf>,
    },
    /// Annihilating operators from the Fukaya-Floer spectrum.
    Annihilators {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 1)]
        mult: u32,
        #[arg(long, default_value_t = 1)]
        dsigma: i64,
    },
    /// List fixtures, or print one.
    Catalog { name: Option<String> },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read_doc(input: &Option<PathBuf>, stdin: &mut dyn Read) -> std::result::Result<Value, Failure> {
    let mut text = String::new();
    match input {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
        }
        _ => {
            stdin.read_to_string(&mut text).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        }
    }
    serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::Parse(format!("invalid JSON: {e}"))))
}

fn read_series(input: &Option<PathBuf>, stdin: &mut dyn Read) -> std::result::Result<DonaldsonSeries, Failure> {
    Ok(doc::series_from(&read_doc(input, stdin)?)?)
}

fn violation_value(v: &PairViolation) -> Value {
    match v {
        PairViolation::MissingPartner(k) => json!({ "kind": "missing_partner", "K": k.coords() }),
        PairViolation::Mismatch(k) => json!({ "kind": "mismatch", "K": k.coords() }),
    }
}

fn execute(cmd: Command, stdin: &mut dyn Read) -> std::result::Result<(Value, bool), Failure> {
    let ok = |v: Value| Ok((v, true));
    match cmd {
        Command::Expand { cutoff, lambda_cutoff, sector, input } => {
            let s = read_series(&input, stdin)?;
            let g = match sector {
                Some(sec) => s.expand_sector(sec, cutoff, lambda_cutoff)?,
                None => s.expand(cutoff, lambda_cutoff)?,
            };
            ok(doc::trunc_value(&g, Some(&s)))
        }
        Command::Fit { bound, input } => {
            let (g, header) = doc::trunc_from(&read_doc(&input, stdin)?)?;
            let h = header
                .ok_or_else(|| Error::InvalidInput("fit needs a \"source\" header with the manifold data".into()))?;
            let bounds = default_bounds(&h.manifold.lattice, bound);
            let r = recover_structure(&g, h.manifold, h.w, h.zword, &bounds)?;
            ok(json!({
                "series": doc::series_value(&r.series),
                "residual": { "checked": r.residual.checked, "nonzero": r.residual.nonzero },
            }))
        }
        Command::Blowup { variant, input } => ok(doc::series_value(&blow_up(&read_series(&input, stdin)?, variant)?)),
        Command::Blowdown { index, input } => {
            let s = read_series(&input, stdin)?;
            let i = index.unwrap_or(s.rank() - 1);
            ok(doc::series_value(&blow_down_derivative(&s, i)?))
        }
        Command::Recolor { w_prime, input } => {
            let s = read_series(&input, stdin)?;
            ok(doc::series_value(&recolor(&s, &CohClass::new(w_prime))?))
        }
        Command::SumS1s3 { cycle, input } => {
            ok(doc::series_value(&connect_sum_s1s3(&read_series(&input, stdin)?, &cycle)?))
        }
        Command::BasicClasses { input } => {
            let s = read_series(&input, stdin)?;
            let list: Vec<Value> =
                s.basic_classes().iter().map(|(k, p)| json!({ "K": k.coords(), "poly": doc::poly_value(p) })).collect();
            ok(Value::Array(list))
        }
        Command::Order { input } => {
            let s = read_series(&input, stdin)?;
            ok(json!({
                "order": finite_type_order(&s)?,
                "closed_form": finite_type_order_closed_form(&s),
                "sst_shape": is_sst_shape(&s)?,
            }))
        }
        Command::MinGenus { surface, input } => {
            let s = read_series(&input, stdin)?;
            let surf = CohClass::new(surface);
            let g = s.min_genus(&surf)?;
            ok(json!({ "surface": surf.coords(), "min_genus": g }))
        }
        Command::SymmetryCheck { cutoff, lambda_cutoff, input } => {
            let s = read_series(&input, stdin)?;
            let pairs = s.check_pair_structure()?;
            let image = s.minus_from_plus()?;
            let minus: std::collections::BTreeMap<_, _> =
                s.sector_terms(Sector::Minus).map(|(k, p)| (k.clone(), p.clone())).collect();
            let symmetric = image == minus;
            let identity = s.check_expansion_identity(cutoff, lambda_cutoff)?;
            let passes = pairs.passes() && symmetric && identity;
            let report = json!({
                "passes": passes,
                "pair_structure": {
                    "passes": pairs.passes(),
                    "violations": pairs.violations.iter().map(violation_value).collect::<Vec<_>>(),
                },
                "symmetric": symmetric,
                "expansion_identity": identity,
                "cutoff": cutoff,
                "lambda_cutoff": lambda_cutoff,
            });
            Ok((report, passes))
        }
        Command::Annihilators { genus, mult, dsigma } => {
            let a = hff::annihilators(genus, mult, dsigma)?;
            let (odd, even) = hff::gluing_relations(genus, mult, dsigma)?;
            ok(json!({
                "genus": genus,
                "mult": mult,
                "dsigma": dsigma,
                "plus": doc::op_value(&a.plus),
                "minus": doc::op_value(&a.minus),
                "combined": doc::op_value(&a.combined),
                "gluing": { "odd": doc::op_value(&odd), "even": doc::op_value(&even) },
            }))
        }
        Command::Catalog { name: None } => {
            let list: Vec<Value> = catalog::catalog()?
                .iter()
                .map(|f| {
                    json!({
                        "name": f.name,
                        "description": f.description,
                        "rank": f.series.rank(),
                        "sst": f.series.flags().sst,
                    })
                })
                .collect();
            ok(json!({ "fixtures": list }))
        }
        Command::Catalog { name: Some(name) } => match catalog::fixture(&name)? {
            Some(s) => ok(doc::series_value(&s)),
            None => Err(Error::InvalidInput(format!("no fixture named {name:?}")).into()),
        },
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Runs the CLI on explicit streams and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = writeln!(stderr, "{}", error_json("usage", text.trim_end()));
            }
            return code;
        }
    };
    match execute(cli.command, stdin) {
        Ok((v, passed)) => {
            let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            let _ = writeln!(stdout, "{text}");
            if passed {
                0
            } else {
                let _ = writeln!(stderr, "{}", error_json("check_failed", "one or more checks failed"));
                3
            }
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "{}", error_json(e.kind(), &e.to_string()));
            if e.is_inconsistency() {
                3
            } else {
                2
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "{}", error_json("io", &msg));
            2
        }
    }
}

/// Sizes the global thread pool from [`THREADS_ENV`] when set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("cannot configure threads: {e}")))?;
    }
    Ok(())
}
