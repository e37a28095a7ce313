use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use realconic::document::{parse_spec, SpecDocument};
use realconic::exactpoly::DEFAULT_REFINE_BITS;
use realconic::report::{
    analyze, exit, oracle_check, render_human, validate_document, AnalysisError, Options, Report,
};

#[derive(Parser)]
#[command(
    name = "realconic",
    version,
    about = "Real conic bundles: topology, obstruction group, approximation of maps to the sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Refine isolating intervals to width 2^-N.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_REFINE_BITS, global = true)]
    refine_bits: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a spec file, or for every *.json file in a directory.
    Analyze { path: PathBuf },
    /// The obstruction group and its closed-form cross-check.
    Gamma { path: PathBuf },
    /// Whether a named map to the sphere can be approximated by regular maps.
    Approx {
        path: PathBuf,
        #[arg(long, value_name = "NAME")]
        map: String,
    },
    /// Check a spec without analysing it.
    Validate { path: PathBuf },
    /// Compare the exact topology of an explicit g against a floating-point count.
    OracleCheck { path: PathBuf },
}

/// What one command prints, and the exit code it ends with.
struct Outcome {
    human: String,
    json: serde_json::Value,
    code: i32,
    /// Nothing was analysed; human output goes to stderr.
    failed: bool,
}

impl Outcome {
    fn failure(e: impl std::fmt::Display, code: i32) -> Self {
        let message = e.to_string();
        Outcome {
            human: format!("error: {}\n", message.replace('\n', "\nerror: ")),
            json: json!({ "error": message.lines().collect::<Vec<_>>() }),
            code,
            failed: true,
        }
    }
}

fn load(path: &Path) -> Result<SpecDocument, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Outcome::failure(
            format!("cannot read {}: {e}", path.display()),
            exit::INVALID_SPEC,
        )
    })?;
    parse_spec(&text).map_err(|e| Outcome::failure(e, exit::INVALID_SPEC))
}

fn run_analysis(path: &Path, opts: Options) -> Result<Report, Outcome> {
    let doc = load(path)?;
    analyze(&doc, opts).map_err(|e: AnalysisError| {
        let code = e.exit_code();
        Outcome::failure(e, code)
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn analyze_file(path: &Path, opts: Options) -> Outcome {
    match run_analysis(path, opts) {
        Ok(r) => Outcome {
            human: render_human(&r),
            json: to_value(&r),
            code: r.exit_code(),
            failed: false,
        },
        Err(o) => o,
    }
}

fn spec_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Every file is analysed independently, several at a time.
fn analyze_dir(dir: &Path, opts: Options) -> Outcome {
    let files = match spec_files(dir) {
        Ok(f) => f,
        Err(e) => {
            return Outcome::failure(
                format!("cannot list {}: {e}", dir.display()),
                exit::INVALID_SPEC,
            )
        }
    };
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(files.len().max(1));
    let chunk = files.len().div_ceil(workers).max(1);
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|f| analyze_file(f, opts))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    });

    let mut human = String::new();
    let mut entries = Vec::new();
    for (f, r) in files.iter().zip(&results) {
        human.push_str(&format!(
            "== {} (exit {})\n{}",
            f.display(),
            r.code,
            r.human
        ));
        entries.push(
            json!({ "file": f.display().to_string(), "exit_code": r.code, "result": r.json }),
        );
    }
    Outcome {
        human,
        json: serde_json::Value::Array(entries),
        code: results.iter().map(|r| r.code).max().unwrap_or(exit::OK),
        failed: false,
    }
}

fn gamma_only(path: &Path, opts: Options) -> Outcome {
    match run_analysis(path, opts) {
        Ok(r) => {
            let c = &r.census;
            Outcome {
                human: format!(
                    "Gamma = {}\nclosed form {} ({:?}, s={} t={} k={} k'={}): {}\n",
                    r.gamma.display,
                    r.gamma.predicted_display,
                    r.gamma.detail.closed_form,
                    c.s,
                    c.t,
                    c.k,
                    c.k_prime,
                    if r.gamma.detail.matches {
                        "match"
                    } else {
                        "MISMATCH"
                    }
                ),
                json: json!({ "census": to_value(&r.census), "gamma": to_value(&r.gamma) }),
                code: r.exit_code(),
                failed: false,
            }
        }
        Err(o) => o,
    }
}

fn approx(path: &Path, name: &str, opts: Options) -> Outcome {
    let r = match run_analysis(path, opts) {
        Ok(r) => r,
        Err(o) => return o,
    };
    let Some(m) = r.maps.iter().find(|m| m.name == name) else {
        let known: Vec<&str> = r.maps.iter().map(|m| m.name.as_str()).collect();
        return Outcome::failure(
            format!(
                "no map named {name:?} in the spec (maps: {})",
                known.join(", ")
            ),
            exit::INVALID_SPEC,
        );
    };
    let mut human = format!(
        "map {}: {}\n",
        m.name,
        if m.approximable {
            "approximable"
        } else {
            "not approximable"
        }
    );
    for e in &m.explanation {
        human.push_str(&format!("  - {e}\n"));
    }
    Outcome {
        human,
        json: to_value(m),
        code: r.exit_code(),
        failed: false,
    }
}

fn validate(path: &Path, opts: Options) -> Outcome {
    let doc = match load(path) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let v = validate_document(&doc, opts);
    let human = if v.valid {
        format!("valid: {} real component(s)\n", v.components)
    } else {
        v.errors.iter().map(|e| format!("error: {e}\n")).collect()
    };
    Outcome {
        human,
        json: to_value(&v),
        code: if v.valid {
            exit::OK
        } else {
            exit::INVALID_SPEC
        },
        failed: false,
    }
}

fn oracle(path: &Path, opts: Options) -> Outcome {
    let doc = match load(path) {
        Ok(d) => d,
        Err(o) => return o,
    };
    match oracle_check(&doc, opts) {
        Ok(r) => Outcome {
            human: format!(
                "exact: {} sphere(s), {} torus/tori; numeric (grid {}): {} sphere(s), {} torus/tori\nnumerator real roots: exact {}, numeric {}\n{}\n",
                r.exact.spheres,
                r.exact.tori,
                r.grid,
                r.numeric.spheres,
                r.numeric.tori,
                r.exact_numerator_roots,
                r.numeric_numerator_roots,
                if r.agree { "agree" } else { "DISAGREE" }
            ),
            json: to_value(&r),
            code: r.exit_code(),
            failed: false,
        },
        Err(e) => {
            let code = e.exit_code();
            Outcome::failure(e, code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        refine_bits: cli.refine_bits,
    };
    let outcome = match &cli.command {
        Command::Analyze { path } if path.is_dir() => analyze_dir(path, opts),
        Command::Analyze { path } => analyze_file(path, opts),
        Command::Gamma { path } => gamma_only(path, opts),
        Command::Approx { path, map } => approx(path, map, opts),
        Command::Validate { path } => validate(path, opts),
        Command::OracleCheck { path } => oracle(path, opts),
    };
    match cli.format {
        Format::Human if outcome.failed => eprint!("{}", outcome.human),
        Format::Human => print!("{}", outcome.human),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&outcome.json).expect("json output")
        ),
    }
    ExitCode::from(outcome.code as u8)
}
