use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use repspace::canonical::to_canonical_json;
use repspace::cohomology::cohomology;
use repspace::error::Error;
use repspace::poisson::{
    closure_to_lie_algebra, cone_reference_table, planar_invariants, proportionality_constant,
    spatial_invariants,
};
use repspace::poly::Rational;
use repspace::strata::{rows_to_csv, stratum_report_many};
use repspace::verify::{run_verify_parallel, VerifyOptions};
use repspace::words::{orbit_type_with, solve_flat, Representation, StratumLabel, CLASSIFY_TOL};

const EXIT_VERIFY: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "repspace", version, about = "SU(2) representation spaces of surface groups and their local Poisson models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Cone,
    Planar,
    Spatial,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a flat representation in the given stratum.
    Solve {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        stratum: StratumLabel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Commutation tolerance for classifying the result.
        #[arg(long, default_value_t = CLASSIFY_TOL)]
        tolerance: f64,
    },
    /// Cohomology, pairing and λ analysis of a representation file.
    Cohomology {
        /// JSON file as written by `solve`.
        rep: PathBuf,
    },
    /// Exact bracket table of an invariant generator set.
    BracketTable {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Per-stratum cohomology and local-model detectors.
    Report {
        /// One or more genera in 2..=4.
        #[arg(long, num_args = 1.., default_values_t = [2])]
        genus: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run the verification suite and print its manifest.
    Verify {
        /// Only run checks whose name contains this text, or the check with this number.
        #[arg(long)]
        only: Option<String>,
        /// Expected constant between the cone table and the reference table.
        #[arg(long, default_value = "-1/2")]
        cone_constant: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } | Error::Genus { .. } => EXIT_SOLVER,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn bracket_table(model: Model, format: Format) -> Result<String, Failure> {
    let set = match model {
        Model::Cone => planar_invariants().subset(&["x1", "x2", "rho"])?,
        Model::Planar => planar_invariants(),
        Model::Spatial => spatial_invariants(2)?,
    };
    let table = set.bracket_table()?;
    let constant = match model {
        Model::Cone => proportionality_constant(&table, &cone_reference_table(&table.generator_vars)?)?,
        _ => None,
    };
    let momentum_commutes = set.invariance_violation()?.is_none();
    let closes = closure_to_lie_algebra(&set).is_ok();
    Ok(match format {
        Format::Text => {
            let mut s = table.to_text();
            if let Some(c) = &constant {
                s.push_str(&format!("reference = {c} * table\n"));
            }
            s.push_str(&format!("momentum commutes with all generators: {momentum_commutes}\n"));
            s
        }
        _ => {
            let mut v = table.to_json();
            v["momentum_commutes"] = json!(momentum_commutes);
            v["closes_linearly"] = json!(closes);
            v["size"] = json!(set.len());
            if let Some(c) = constant {
                v["reference_constant"] = json!(c.to_string());
            }
            to_canonical_json(&v)
        }
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            genus,
            stratum,
            seed,
            tolerance,
        } => {
            if !(tolerance > 0.0) {
                return Err(Error::BadTolerance(tolerance).into());
            }
            let rep = solve_flat(genus, stratum, seed)?;
            let mut v = rep.to_json();
            v["stratum"] = json!(orbit_type_with(&rep, tolerance).as_str());
            v["seed"] = json!(seed);
            emit(&cli.output, &to_canonical_json(&v))
        }
        Command::Cohomology { rep } => {
            let text = std::fs::read_to_string(&rep).map_err(|e| Failure::input(format!("{}: {e}", rep.display())))?;
            let parsed: Representation = serde_json::from_str(&text).map_err(Error::from)?;
            let parsed = Representation::new(parsed.genus, parsed.images)?;
            let data = cohomology(&parsed)?;
            emit(&cli.output, &to_canonical_json(&data.to_json()))
        }
        Command::BracketTable { model, format } => emit(&cli.output, &bracket_table(model, format)?),
        Command::Report {
            genus,
            seed,
            format,
            jobs,
        } => {
            if let Some(g) = genus.iter().find(|g| !(2..=4).contains(*g)) {
                return Err(Failure::input(format!("report genus must be in 2..=4, got {g}")));
            }
            let rows = stratum_report_many(&genus, seed, jobs)?;
            let text = match format {
                Format::Csv => rows_to_csv(&rows)?,
                _ => to_canonical_json(&json!({ "rows": serde_json::to_value(&rows).map_err(Error::from)? })),
            };
            emit(&cli.output, &text)
        }
        Command::Verify {
            only,
            cone_constant,
            seed,
            jobs,
        } => {
            let constant: Rational = cone_constant
                .parse()
                .map_err(|_| Failure::input(format!("not a rational number: {cone_constant}")))?;
            let opts = VerifyOptions {
                only,
                cone_constant: constant,
                seed,
            };
            let manifest = run_verify_parallel(&opts, jobs);
            for r in &manifest.results {
                eprintln!("{}", r.line());
            }
            emit(&cli.output, &manifest.to_canonical())?;
            if manifest.passed() {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_VERIFY,
                    message: "verification failed".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
