//! Operator front end. Every subcommand is a thin shell around the library;
//! the exit code is the machine contract: 0 pass, 1 assurance failure,
//! 2 infrastructure failure, 64 usage.

use clap::{Parser, Subcommand};
use pq_assure_core::corpus::{generate_corpus, load_manifest, verify_manifest};
use pq_assure_core::evaluate::{
    coverage_report, emit_reports, evaluate_corpus, success_criteria, RunSummary, Surface,
};
use pq_assure_core::exit;
use pq_assure_core::fsio::write_json;
use pq_assure_core::pkix::ParameterSet;
use pq_assure_core::registry::{
    builtin_registry, load_registry, validate_registry, GatePack, Mode, Registry,
};
use pq_assure_core::replay::{run_replay, ReplayError};
use pq_assure_core::substrate::{Substrate, SubstrateVerdict};
use std::fmt::Display;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "pq-assure",
    version,
    about = "Assurance gates for ML-KEM / ML-DSA PKIX artifacts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the requirement registry's topology.
    ValidateRegistry {
        /// Registry JSON path [default: requirements.json, else built-in]
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Generate the artifact corpus and verify its hashed manifest.
    GenCorpus {
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
    },
    /// Evaluate the corpus against the registry in one mode.
    Evaluate {
        #[arg(long, default_value = "deployable", value_parser = parse_mode)]
        mode: Mode,
        /// Registry JSON path [default: requirements.json, else built-in]
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Consistency bridge executable (overrides PQ_ASSURE_BRIDGE)
        #[arg(long)]
        bridge: Option<PathBuf>,
    },
    /// Report per-requirement coverage for one surface.
    Coverage {
        #[arg(long, value_parser = parse_surface)]
        surface: Surface,
        #[arg(long, default_value = "deployable", value_parser = parse_mode)]
        mode: Mode,
        /// Registry JSON path [default: requirements.json, else built-in]
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Consistency bridge executable (overrides PQ_ASSURE_BRIDGE)
        #[arg(long)]
        bridge: Option<PathBuf>,
    },
    /// Evaluate one gate pack's slice of the corpus.
    GatePack {
        #[arg(long, value_parser = parse_pack)]
        pack: GatePack,
        #[arg(long, default_value = "deployable", value_parser = parse_mode)]
        mode: Mode,
        /// Registry JSON path [default: requirements.json, else built-in]
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Consistency bridge executable (overrides PQ_ASSURE_BRIDGE)
        #[arg(long)]
        bridge: Option<PathBuf>,
    },
    /// Emit the policy matrix and operator workflow views.
    Workflow {
        /// Registry JSON path [default: requirements.json, else built-in]
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Ask the consistency substrate about one seed/expanded pair.
    BridgeCheck {
        #[arg(long, value_parser = parse_param_set)]
        param_set: ParameterSet,
        #[arg(long)]
        seed_hex: String,
        #[arg(long)]
        expanded_hex: String,
        /// Consistency bridge executable (overrides PQ_ASSURE_BRIDGE)
        #[arg(long)]
        bridge: Option<PathBuf>,
    },
    /// Run the full pipeline: environment, corpus, both modes, views, verify.
    Replay {
        /// Registry JSON path [default: requirements.json, else built-in]
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Consistency bridge executable (overrides PQ_ASSURE_BRIDGE)
        #[arg(long)]
        bridge: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_surface(s: &str) -> Result<Surface, String> {
    s.parse()
}

fn parse_pack(s: &str) -> Result<GatePack, String> {
    s.parse()
}

fn parse_param_set(s: &str) -> Result<ParameterSet, String> {
    ParameterSet::ALL
        .into_iter()
        .find(|set| set.name() == s)
        .ok_or_else(|| {
            let names: Vec<&str> = ParameterSet::ALL.iter().map(|set| set.name()).collect();
            format!("unknown parameter set {s:?}; expected one of {}", names.join(", "))
        })
}

struct Failure {
    code: i32,
    message: String,
}

fn infra(err: impl Display) -> Failure {
    Failure {
        code: exit::INFRASTRUCTURE,
        message: err.to_string(),
    }
}

fn assurance(err: impl Display) -> Failure {
    Failure {
        code: exit::ASSURANCE_FAILURE,
        message: err.to_string(),
    }
}

/// Explicit path must load; the default path falls back to the built-in
/// registry when absent. Returns the registry and where it came from.
fn resolve_registry(arg: &Option<PathBuf>) -> Result<(Registry, String), Failure> {
    match arg {
        Some(path) => {
            let registry = load_registry(path).map_err(infra)?;
            Ok((registry, path.display().to_string()))
        }
        None => {
            let default = Path::new("requirements.json");
            if default.exists() {
                let registry = load_registry(default).map_err(infra)?;
                Ok((registry, default.display().to_string()))
            } else {
                Ok((builtin_registry(), "built-in".to_string()))
            }
        }
    }
}

/// A registry that fails its own topology checks cannot gate anything.
fn require_clean(registry: &Registry, source: &str) -> Result<(), Failure> {
    let report = validate_registry(registry);
    if report.is_clean() {
        Ok(())
    } else {
        Err(assurance(format!(
            "registry {source} failed validation with {} violation(s); run validate-registry",
            report.violations.len()
        )))
    }
}

fn print_run(summary: &RunSummary, registry_source: &str) {
    println!("mode: {}", summary.mode.name());
    println!(
        "registry: {} {} ({registry_source})",
        summary.registry_profile, summary.registry_version
    );
    println!("substrate: {}", summary.substrate);
    println!(
        "artifacts: {} = {} valid + {} invalid",
        summary.totals.artifacts, summary.totals.valid, summary.totals.invalid
    );
    println!(
        "dispositions: {} pass / {} warn / {} block / {} error",
        summary.totals.pass, summary.totals.warn, summary.totals.block, summary.totals.errors
    );
    println!("false positives: {}", summary.totals.false_positives);
}

fn finish_run(summary: &RunSummary) -> i32 {
    if !summary.errors.is_empty() {
        for err in &summary.errors {
            eprintln!("error: {}: {}", err.artifact_id, err.detail);
        }
        return exit::INFRASTRUCTURE;
    }
    let criteria = success_criteria(summary);
    let verdict = [
        ("all-expected-met", criteria.all_expected_met),
        ("zero-false-positives", criteria.zero_false_positives),
        ("no-unexpected", criteria.no_unexpected),
        ("no-open-gaps", criteria.no_open_gaps),
        ("no-errors", criteria.no_errors),
    ];
    for (name, held) in verdict {
        println!("criterion {name}: {}", if held { "met" } else { "NOT met" });
    }
    if criteria.passed() {
        println!("result: PASS");
        exit::OK
    } else {
        println!("result: FAIL");
        exit::ASSURANCE_FAILURE
    }
}

fn cmd_validate_registry(registry_arg: &Option<PathBuf>) -> Result<i32, Failure> {
    let (registry, source) = resolve_registry(registry_arg)?;
    let report = validate_registry(&registry);
    println!(
        "registry: {} {} ({source}), {} requirements",
        registry.profile,
        registry.version,
        registry.requirements.len()
    );
    if report.is_clean() {
        println!("validation: clean");
        Ok(exit::OK)
    } else {
        for violation in &report.violations {
            match &violation.record_id {
                Some(id) => println!("violation [{}] {}: {}", violation.kind, id, violation.detail),
                None => println!("violation [{}]: {}", violation.kind, violation.detail),
            }
        }
        println!("validation: {} violation(s)", report.violations.len());
        Ok(exit::ASSURANCE_FAILURE)
    }
}

fn cmd_gen_corpus(corpus: &Path) -> Result<i32, Failure> {
    let entries = generate_corpus(corpus).map_err(infra)?;
    println!("generated: {} artifacts under {}", entries.len(), corpus.display());
    let report = verify_manifest(&corpus.join("manifest.jsonl")).map_err(infra)?;
    println!(
        "manifest: {} checked, {} mismatch(es), {} missing",
        report.checked,
        report.mismatches.len(),
        report.missing.len()
    );
    if entries.len() == 48 && report.checked == 48 && report.is_clean() {
        Ok(exit::OK)
    } else {
        Err(assurance("corpus did not verify at the expected 48 entries"))
    }
}

fn cmd_evaluate(
    mode: Mode,
    registry_arg: &Option<PathBuf>,
    corpus: &Path,
    out: &Path,
    bridge: Option<PathBuf>,
) -> Result<i32, Failure> {
    let (registry, source) = resolve_registry(registry_arg)?;
    require_clean(&registry, &source)?;
    let entries = load_manifest(&corpus.join("manifest.jsonl")).map_err(infra)?;
    let substrate = Substrate::from_options(bridge);
    let summary = evaluate_corpus(corpus, &entries, &registry, mode, &substrate);
    let files = emit_reports(&summary, &registry, out).map_err(infra)?;
    print_run(&summary, &source);
    for file in &files {
        println!("wrote: {}", file.display());
    }
    Ok(finish_run(&summary))
}

fn cmd_coverage(
    surface: Surface,
    mode: Mode,
    registry_arg: &Option<PathBuf>,
    corpus: &Path,
    out: &Path,
    bridge: Option<PathBuf>,
) -> Result<i32, Failure> {
    let (registry, source) = resolve_registry(registry_arg)?;
    require_clean(&registry, &source)?;
    let entries = load_manifest(&corpus.join("manifest.jsonl")).map_err(infra)?;
    let substrate = Substrate::from_options(bridge);
    let summary = evaluate_corpus(corpus, &entries, &registry, mode, &substrate);
    if !summary.errors.is_empty() {
        for err in &summary.errors {
            eprintln!("error: {}: {}", err.artifact_id, err.detail);
        }
        return Ok(exit::INFRASTRUCTURE);
    }
    let report = coverage_report(&summary, surface, &registry);
    let path = out.join(format!("{}_{}.json", surface.file_stem(), mode.name()));
    write_json(&path, &report).map_err(infra)?;
    println!("surface: {} ({} mode)", report.surface, mode.name());
    for row in &report.requirements {
        println!(
            "{}: exercised {}, detected {}, missing {}{}",
            row.requirement_id,
            row.exercised,
            row.detected,
            row.missing,
            if row.open_gap { " [OPEN GAP]" } else { "" }
        );
    }
    println!(
        "coverage: {}/{} requirements, {} open gap(s)",
        report.detected_count,
        report.requirement_count,
        report.open_gaps.len()
    );
    println!("wrote: {}", path.display());
    if report.open_gaps.is_empty() {
        Ok(exit::OK)
    } else {
        Ok(exit::ASSURANCE_FAILURE)
    }
}

fn cmd_gate_pack(
    pack: GatePack,
    mode: Mode,
    registry_arg: &Option<PathBuf>,
    corpus: &Path,
    out: &Path,
    bridge: Option<PathBuf>,
) -> Result<i32, Failure> {
    let (registry, source) = resolve_registry(registry_arg)?;
    require_clean(&registry, &source)?;
    let entries = load_manifest(&corpus.join("manifest.jsonl")).map_err(infra)?;
    let slice: Vec<_> = entries
        .iter()
        .filter(|e| e.stage == pack.stage())
        .cloned()
        .collect();
    let substrate = Substrate::from_options(bridge);
    let summary = evaluate_corpus(corpus, &slice, &registry, mode, &substrate);
    let criteria = success_criteria(&summary);
    let wrapped = serde_json::json!({
        "gate_pack": pack.name(),
        "owner": pack.owner().name(),
        "stage": pack.stage().name(),
        "run": summary,
        "success_criteria": criteria,
    });
    let path = out.join(format!("gate_pack_{}_{}.json", pack.name(), mode.name()));
    write_json(&path, &wrapped).map_err(infra)?;
    println!(
        "gate pack: {} (owner {}, stage {})",
        pack.name(),
        pack.owner().name(),
        pack.stage().name()
    );
    println!("requirements in pack: {}", registry.records_in_pack(pack).len());
    print_run(&summary, &source);
    println!("wrote: {}", path.display());
    Ok(finish_run(&summary))
}

fn cmd_workflow(registry_arg: &Option<PathBuf>, out: &Path) -> Result<i32, Failure> {
    let (registry, source) = resolve_registry(registry_arg)?;
    require_clean(&registry, &source)?;
    let files = pq_assure_core::workflow::emit_workflow_outputs(&registry, out).map_err(infra)?;
    for file in &files {
        println!("wrote: {}", file.display());
    }
    Ok(exit::OK)
}

fn cmd_bridge_check(
    set: ParameterSet,
    seed_hex: &str,
    expanded_hex: &str,
    bridge: Option<PathBuf>,
) -> Result<i32, Failure> {
    let seed = hex::decode(seed_hex).map_err(|e| infra(format!("bad --seed-hex: {e}")))?;
    let expanded =
        hex::decode(expanded_hex).map_err(|e| infra(format!("bad --expanded-hex: {e}")))?;
    let substrate = Substrate::from_options(bridge);
    println!("substrate: {}", substrate.describe());
    match substrate.check_consistency(set, &seed, &expanded) {
        SubstrateVerdict::Consistent => {
            println!("verdict: consistent");
            Ok(exit::OK)
        }
        SubstrateVerdict::Mismatch => {
            println!("verdict: mismatch");
            Ok(exit::ASSURANCE_FAILURE)
        }
        SubstrateVerdict::Failure { detail } => {
            println!("verdict: bridge failure");
            eprintln!("error: {detail}");
            Ok(exit::INFRASTRUCTURE)
        }
    }
}

fn cmd_replay(
    registry_arg: &Option<PathBuf>,
    corpus: &Path,
    out: &Path,
    bridge: Option<PathBuf>,
) -> Result<i32, Failure> {
    let (registry, source) = resolve_registry(registry_arg)?;
    println!("registry source: {source}");
    let substrate = Substrate::from_options(bridge);
    match run_replay(corpus, out, &registry, &substrate) {
        Ok(report) => {
            for line in &report.log {
                println!("{line}");
            }
            if report.passed() {
                println!("result: PASS");
                Ok(exit::OK)
            } else {
                println!("result: FAIL");
                Ok(exit::ASSURANCE_FAILURE)
            }
        }
        // A registry or integrity failure is an assurance verdict; anything
        // else means the pipeline itself could not run.
        Err(err @ (ReplayError::Registry { .. } | ReplayError::Verification { .. })) => {
            Err(assurance(err))
        }
        Err(err) => Err(infra(err)),
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::ValidateRegistry { registry } => cmd_validate_registry(&registry),
        Command::GenCorpus { corpus } => cmd_gen_corpus(&corpus),
        Command::Evaluate {
            mode,
            registry,
            corpus,
            out,
            bridge,
        } => cmd_evaluate(mode, &registry, &corpus, &out, bridge),
        Command::Coverage {
            surface,
            mode,
            registry,
            corpus,
            out,
            bridge,
        } => cmd_coverage(surface, mode, &registry, &corpus, &out, bridge),
        Command::GatePack {
            pack,
            mode,
            registry,
            corpus,
            out,
            bridge,
        } => cmd_gate_pack(pack, mode, &registry, &corpus, &out, bridge),
        Command::Workflow { registry, out } => cmd_workflow(&registry, &out),
        Command::BridgeCheck {
            param_set,
            seed_hex,
            expanded_hex,
            bridge,
        } => cmd_bridge_check(param_set, &seed_hex, &expanded_hex, bridge),
        Command::Replay {
            registry,
            corpus,
            out,
            bridge,
        } => cmd_replay(&registry, &corpus, &out, bridge),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    exit::OK
                }
                _ => exit::USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
