//! Command-line driver: verification runs, basic-class enumeration,
//! handle-script replay, characteristic-vector reduction, and lattice
//! utilities over manifest files.
//!
//! Exit codes: 0 on success, 1 when a verification check or script
//! expectation fails, 2 on malformed input. All output is deterministic
//! for identical inputs and flags; `--json` switches every command to its
//! machine-readable mirror.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use blowdown::dataset;
use blowdown::error::Error;
use blowdown::kirbytrace;
use blowdown::lattice::{gram_of, ClassVector};
use blowdown::manifest::Manifest;
use blowdown::normalform::wall_reduce;
use blowdown::rbd::liftable_thm;
use blowdown::report;
use blowdown::swchamber::SwReport;
use blowdown::verify;
use blowdown::{basiclasses, lattice};

/// Prints one line to stdout. A closed pipe (the consumer stopped reading)
/// exits quietly with success instead of panicking; any other write error
/// is an input/output failure.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let mut stdout = std::io::stdout().lock();
        if let Err(e) = writeln!(stdout, $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("error: cannot write to stdout: {e}");
            std::process::exit(2);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "blowdown",
    version,
    about = "Exact lattice arithmetic for rational blow-downs: chamber SW values, \
             lift conditions, basic-class enumeration, characteristic normal forms, \
             and handle-move replay."
)]
struct Cli {
    /// Emit the machine-readable JSON mirror instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification battery over the embedded dataset.
    VerifyPaper {
        /// Only run sections whose name matches or starts with this.
        #[arg(long)]
        section: Option<String>,
    },
    /// Enumerate basic classes for a manifest's chamber.
    Enumerate {
        /// Builtin manifest name or path to a manifest file.
        #[arg(long)]
        manifest: String,
        /// Partition the search across this many workers.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Keep only classes that descend through this named configuration.
        #[arg(long)]
        config: Option<String>,
        /// Override the derived leading-coordinate bound.
        #[arg(long)]
        a_bound: Option<u64>,
    },
    /// Replay a handle-move script (builtin name or file path).
    Replay {
        /// Builtin script name or path to a script file.
        script: String,
    },
    /// Reduce a named characteristic vector to its normal form.
    Reduce {
        /// Builtin manifest name or path to a manifest file.
        #[arg(long)]
        manifest: String,
        /// Name of the vector to reduce.
        #[arg(long)]
        class: String,
    },
    /// Lattice utilities over manifest vectors.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Print the embedded dataset: manifests and scripts.
    DumpDataset,
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Gram matrix, determinant, and inertia of named vectors.
    Gram {
        #[arg(long)]
        manifest: String,
        /// Vector names (at least one).
        #[arg(required = true)]
        names: Vec<String>,
    },
    /// Pairing of two named vectors.
    Inner {
        #[arg(long)]
        manifest: String,
        a: String,
        b: String,
    },
    /// Self-pairing of a named vector.
    Square {
        #[arg(long)]
        manifest: String,
        name: String,
    },
    /// Whether a named vector is characteristic in the ambient lattice.
    Characteristic {
        #[arg(long)]
        manifest: String,
        name: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::VerifyPaper { section } => cmd_verify_paper(section.as_deref(), cli.json),
        Command::Enumerate {
            manifest,
            workers,
            config,
            a_bound,
        } => cmd_enumerate(manifest, *workers, config.as_deref(), *a_bound, cli.json),
        Command::Replay { script } => cmd_replay(script, cli.json),
        Command::Reduce { manifest, class } => cmd_reduce(manifest, class, cli.json),
        Command::Lattice { op } => cmd_lattice(op, cli.json),
        Command::DumpDataset => cmd_dump_dataset(cli.json),
    }
}

/// Loads a manifest by builtin name, falling back to a file path.
fn load_manifest(arg: &str) -> Result<(Manifest, String), Error> {
    if let Some(text) = dataset::builtin_manifest(arg) {
        return Ok((Manifest::parse(text)?, arg.to_owned()));
    }
    let path = PathBuf::from(arg);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::ManifestParse {
        line: 0,
        reason: format!("cannot read `{arg}`: {e}"),
    })?;
    Ok((Manifest::parse(&text)?, arg.to_owned()))
}

fn named_vector(manifest: &Manifest, name: &str) -> Result<ClassVector, Error> {
    manifest
        .vector(name)
        .cloned()
        .ok_or_else(|| Error::UnknownName {
            name: name.to_owned(),
        })
}

fn cmd_verify_paper(section: Option<&str>, json: bool) -> Result<ExitCode, Error> {
    let selected: Vec<&'static str> = match section {
        None => verify::SECTION_NAMES.to_vec(),
        Some(filter) => {
            let exact: Vec<&'static str> = verify::SECTION_NAMES
                .iter()
                .copied()
                .filter(|n| *n == filter)
                .collect();
            let matched = if exact.is_empty() {
                verify::SECTION_NAMES
                    .iter()
                    .copied()
                    .filter(|n| n.starts_with(filter))
                    .collect()
            } else {
                exact
            };
            if matched.is_empty() {
                return Err(Error::UnknownName {
                    name: filter.to_owned(),
                });
            }
            matched
        }
    };
    let sections: Vec<verify::Section> = selected
        .iter()
        .map(|n| verify::run_section(n))
        .collect::<Result<_, _>>()?;
    if json {
        out!("{}", report::sections_json(&sections));
    } else {
        print!("{}", report::sections_text(&sections));
    }
    if report::all_passed(&sections) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_enumerate(
    manifest_arg: &str,
    workers: usize,
    config: Option<&str>,
    a_bound: Option<u64>,
    json: bool,
) -> Result<ExitCode, Error> {
    let (manifest, label) = load_manifest(manifest_arg)?;
    let resolved = manifest.resolve(label)?;
    let model = resolved.model()?;
    let chamber_rep = resolved.chamber.clone().ok_or_else(|| Error::ManifestParse {
        line: 0,
        reason: "manifest declares no chamber; enumeration needs one".into(),
    })?;
    let chamber = model.chamber(chamber_rep)?;
    let mut spec = basiclasses::SearchSpec::new(&model, &chamber);
    spec.workers = workers.max(1);
    spec.a_bound_override = a_bound;
    let mut sw_report: SwReport = basiclasses::enumerate_basic(&spec)?;
    if let Some(cfg_name) = config {
        let cfg = resolved.config(Some(cfg_name))?;
        let mut kept = Vec::with_capacity(sw_report.entries.len());
        for entry in sw_report.entries {
            if liftable_thm(&resolved.ambient, &entry.class, cfg)?.liftable {
                kept.push(entry);
            }
        }
        sw_report.entries = kept;
    }
    if json {
        out!("{}", report::sw_report_json(&sw_report));
    } else {
        print!("{}", report::sw_report_text(&sw_report));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_replay(script_arg: &str, json: bool) -> Result<ExitCode, Error> {
    let outcome = if dataset::builtin_script(script_arg).is_some() {
        kirbytrace::replay_builtin(script_arg)
    } else {
        let text = std::fs::read_to_string(script_arg).map_err(|e| Error::ScriptParse {
            line: 0,
            reason: format!("cannot read `{script_arg}`: {e}"),
        })?;
        let script = kirbytrace::parse_script(&text)?;
        kirbytrace::replay(&script)
    };
    match outcome {
        Ok(outcome) => {
            if json {
                out!("{}", report::replay_json(&outcome));
            } else {
                print!("{}", report::replay_text(&outcome));
            }
            Ok(ExitCode::SUCCESS)
        }
        // A move or expectation that does not hold is a failed check (exit
        // 1), distinct from unreadable input (exit 2).
        Err(Error::MoveRejected { step, reason }) => {
            if json {
                out!(
                    "{}",
                    json!({ "script": script_arg, "failed_step": step, "reason": reason })
                );
            } else {
                out!("script {script_arg}: FAIL at step {step}: {reason}");
            }
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e),
    }
}

fn cmd_reduce(manifest_arg: &str, class: &str, json: bool) -> Result<ExitCode, Error> {
    let (manifest, _) = load_manifest(manifest_arg)?;
    let (_, negative) = manifest.ambient();
    let vector = named_vector(&manifest, class)?;
    let reduction = wall_reduce(negative, &vector)?;
    if json {
        let images: Vec<Value> = reduction
            .iso
            .images()
            .iter()
            .map(|v| Value::Array(v.coords().iter().map(big_json).collect()))
            .collect();
        out!(
            "{}",
            json!({
                "input": vector.coords().iter().map(big_json).collect::<Vec<_>>(),
                "result": reduction.result.coords().iter().map(big_json).collect::<Vec<_>>(),
                "steps": reduction.steps,
                "negated": reduction.negated,
                "images": images,
            })
        );
    } else {
        out!("input  {}", vector.format_he());
        out!("result {}", reduction.result.format_he());
        out!(
            "steps {}  negated {}",
            reduction.steps, reduction.negated
        );
        for (i, image) in reduction.iso.images().iter().enumerate() {
            out!("image of basis vector {i}: {}", image.format_he());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn big_json(v: &BigInt) -> Value {
    match i64::try_from(v.clone()) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

fn cmd_lattice(op: &LatticeOp, json: bool) -> Result<ExitCode, Error> {
    match op {
        LatticeOp::Gram { manifest, names } => {
            let (manifest, label) = load_manifest(manifest)?;
            let ambient = manifest.resolve(label)?.ambient;
            let vectors = names
                .iter()
                .map(|n| named_vector(&manifest, n))
                .collect::<Result<Vec<_>, _>>()?;
            let gram = gram_of(&ambient, &vectors);
            let inertia = lattice::rational_inertia(&gram);
            let det = lattice::bareiss_determinant(gram.clone());
            if json {
                let rows: Vec<Value> = gram
                    .iter()
                    .map(|row| Value::Array(row.iter().map(big_json).collect()))
                    .collect();
                out!(
                    "{}",
                    json!({
                        "gram": rows,
                        "determinant": big_json(&det),
                        "inertia": {
                            "positive": inertia.positive,
                            "negative": inertia.negative,
                            "zero": inertia.zero,
                        },
                    })
                );
            } else {
                for row in &gram {
                    let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                    out!("[{}]", cells.join(", "));
                }
                out!("determinant {det}");
                out!("inertia {inertia}");
            }
        }
        LatticeOp::Inner { manifest, a, b } => {
            let (manifest, label) = load_manifest(manifest)?;
            let ambient = manifest.resolve(label)?.ambient;
            let va = named_vector(&manifest, a)?;
            let vb = named_vector(&manifest, b)?;
            let inner = ambient.inner(&va, &vb)?;
            if json {
                out!("{}", json!({ "inner": big_json(&inner) }));
            } else {
                out!("inner {inner}");
            }
        }
        LatticeOp::Square { manifest, name } => {
            let (manifest, label) = load_manifest(manifest)?;
            let ambient = manifest.resolve(label)?.ambient;
            let v = named_vector(&manifest, name)?;
            let square = ambient.square(&v)?;
            if json {
                out!("{}", json!({ "square": big_json(&square) }));
            } else {
                out!("square {square}");
            }
        }
        LatticeOp::Characteristic { manifest, name } => {
            let (manifest, label) = load_manifest(manifest)?;
            let ambient = manifest.resolve(label)?.ambient;
            let v = named_vector(&manifest, name)?;
            let characteristic = ambient.is_characteristic(&v)?;
            if json {
                out!("{}", json!({ "characteristic": characteristic }));
            } else {
                out!("characteristic {characteristic}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dump_dataset(json: bool) -> Result<ExitCode, Error> {
    if json {
        let manifests: Value = dataset::MANIFEST_NAMES
            .iter()
            .map(|n| (n.to_string(), json!(dataset::builtin_manifest(n).unwrap())))
            .collect::<serde_json::Map<_, _>>()
            .into();
        let scripts: Value = dataset::SCRIPT_NAMES
            .iter()
            .map(|n| (n.to_string(), json!(dataset::builtin_script(n).unwrap())))
            .collect::<serde_json::Map<_, _>>()
            .into();
        out!("{}", json!({ "manifests": manifests, "scripts": scripts }));
    } else {
        for name in dataset::MANIFEST_NAMES {
            out!("=== manifest {name} ===");
            print!("{}", dataset::builtin_manifest(name).unwrap());
        }
        for name in dataset::SCRIPT_NAMES {
            out!("=== script {name} ===");
            print!("{}", dataset::builtin_script(name).unwrap());
        }
    }
    Ok(ExitCode::SUCCESS)
}
