//! `hblab`: list catalog mappings, evaluate single functionals and run the
//! verification suites.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hblab::catalog;
use hblab::extremal::{analytic_bloch_seminorm, bloch_type_seminorm, hyperbolic_norm, GridSpec};
use hblab::geometry::schlicht_radius;
use hblab::report::VerificationReport;
use hblab::suites::{run_suite, SuiteConfig, SUITES};
use hblab::transforms::becker_margin;
use hblab::{Complex64, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "hblab", version, about = "Bloch-type harmonic mappings: seminorms, transforms and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Functional {
    /// sup (1 − |z|²) √|J_f|
    Beta,
    /// Analytic Bloch seminorm of h.
    BlochH,
    /// Analytic Bloch seminorm of g.
    BlochG,
    /// sup of the hyperbolic derivative of the dilatation.
    HyperbolicNorm,
    /// Becker univalence margin.
    Becker,
    /// Distance from f(z) to the image boundary (univalent targets).
    SchlichtRadius,
    /// f(z).
    Value,
}

#[derive(clap::Args)]
struct Common {
    /// Series order of constructions.
    #[arg(long, default_value_t = hblab::series::DEFAULT_ORDER)]
    order: usize,
    /// Local refinement rounds of the supremum scan.
    #[arg(long, default_value_t = 5)]
    grid_depth: usize,
    /// Deepest radial level is 1 − 2^-k.
    #[arg(long, default_value_t = 20)]
    rmax_exp: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn grid(&self) -> GridSpec {
        GridSpec { refine_depth: self.grid_depth, ..GridSpec::with_rmax_exp(self.rmax_exp) }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries, their parameters and known values.
    List {
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Evaluate one functional on one target.
    Eval {
        #[arg(value_enum)]
        functional: Functional,
        /// Catalog target, `name` or `name:k=v,...`.
        #[arg(long)]
        target: String,
        /// Extra target parameter `k=v` (repeatable).
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
        /// Point for pointwise functionals, e.g. `0.3+0.2i`.
        #[arg(long, default_value = "0")]
        point: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        /// Target `name:k=v,...` (repeatable); defaults depend on the suite.
        #[arg(long = "target")]
        targets: Vec<String>,
        /// Suite parameter `k=v` (repeatable), e.g. `eps=0.5`.
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random mappings added to the default targets.
        #[arg(long, default_value_t = 50)]
        random_count: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected k=v, got `{s}`"))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownEntry(_) | Error::UnknownSuite(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Error> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn render_report(r: &VerificationReport, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => r.to_json(),
        Format::Md => Ok(r.to_markdown()),
        Format::Csv => r.to_csv(),
    }
}

fn list(format: Format) -> Result<String, Error> {
    let entries = catalog::entries();
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            let params = e.resolve(&BTreeMap::new())?;
            Ok(json!({
                "name": e.name,
                "description": e.description,
                "params": e.params,
                "known_values": e.known_values(&params),
            }))
        })
        .collect::<Result<_, Error>>()?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("serializable"),
        Format::Md => {
            let mut s = String::from("| name | parameters | description |\n|---|---|---|\n");
            for e in &entries {
                let ps: Vec<String> = e.params.iter().map(|p| format!("{} ({})", p.name, p.doc)).collect();
                s.push_str(&format!("| {} | {} | {} |\n", e.name, ps.join(", ").replace('|', "\\|"), e.description.replace('|', "\\|")));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("name,parameters,description\n");
            for e in &entries {
                let ps: Vec<&str> = e.params.iter().map(|p| p.name).collect();
                s.push_str(&format!("{},{},\"{}\"\n", e.name, ps.join(";"), e.description.replace('"', "\"\"")));
            }
            s
        }
    })
}

fn eval(
    functional: Functional,
    target: &str,
    params: &[(String, String)],
    point: &str,
    common: &Common,
) -> Result<String, Error> {
    let (name, mut raw) = catalog::parse_target(target)?;
    raw.extend(params.iter().cloned());
    let f = catalog::get(&name, &raw)?;
    let grid = common.grid();
    grid.validate()?;
    let z: Complex64 = point
        .replace(' ', "")
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("cannot parse point `{point}`")))?;
    let body = match functional {
        Functional::Beta => json!(bloch_type_seminorm(&f, &grid)?),
        Functional::BlochH => json!(analytic_bloch_seminorm(&f.h, &grid)?),
        Functional::BlochG => json!(analytic_bloch_seminorm(&f.g, &grid)?),
        Functional::HyperbolicNorm => json!(hyperbolic_norm(&f.dilatation(), &grid)?),
        Functional::Becker => json!(becker_margin(&f, &grid)?),
        Functional::SchlichtRadius => json!(schlicht_radius(&f, z)?),
        Functional::Value => json!({ "point": z, "value": f.evaluate(z)? }),
    };
    let out = json!({
        "target": f.name,
        "functional": functional.to_possible_value().map(|v| v.get_name().to_string()),
        "result": body,
    });
    Ok(match common.format {
        Format::Json => serde_json::to_string_pretty(&out).expect("serializable"),
        Format::Md | Format::Csv => flatten(&out["result"], "")
            .into_iter()
            .map(|(k, v)| match common.format {
                Format::Md => format!("- {k}: {v}"),
                _ => format!("{k},{v}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn flatten(v: &Value, prefix: &str) -> Vec<(String, String)> {
    match v {
        Value::Object(m) => m
            .iter()
            .flat_map(|(k, v)| {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(v, &key)
            })
            .collect(),
        Value::Array(a) if a.len() > 2 => vec![(prefix.to_string(), format!("[{} items]", a.len()))],
        other => vec![(prefix.to_string(), other.to_string())],
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::List { format } => {
            emit(&list(format)?, None)?;
            Ok(0)
        }
        Command::Eval { functional, target, params, point, common } => {
            emit(&eval(functional, &target, &params, &point, &common)?, common.output.as_ref())?;
            Ok(0)
        }
        Command::Verify { suite, targets, params, tol, seed, random_count, common } => {
            let config = SuiteConfig {
                order: common.order,
                grid: common.grid(),
                tol,
                seed,
                random_count,
                params: params.into_iter().collect(),
                ..SuiteConfig::default()
            };
            let report = run_suite(&suite, &targets, &config)?;
            emit(&render_report(&report, common.format)?, common.output.as_ref())?;
            let n = report.counts();
            eprintln!("{suite}: {} pass, {} fail, {} skip", n.pass, n.fail, n.skip);
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HBLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hblab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
