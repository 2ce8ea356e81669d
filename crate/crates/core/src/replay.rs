//! The end-to-end pipeline: environment capture, corpus generation,
//! both-mode evaluation with reports, workflow views, manifest verification.
//!
//! Every stage is deterministic, so two consecutive runs over the same
//! trees are byte-identical; the environment record deliberately carries
//! no timestamps. Any stage that cannot complete aborts the run.

use crate::corpus::{generate_corpus, verify_manifest, CorpusError, VerificationReport};
use crate::evaluate::{
    emit_reports, evaluate_corpus, success_criteria, RunSummary, SuccessCriteria,
};
use crate::fsio::write_string;
use crate::registry::{validate_registry, Mode, Registry};
use crate::substrate::Substrate;
use crate::workflow::emit_workflow_outputs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("registry validation failed with {violations} violation(s)")]
    Registry { violations: usize },
    #[error("corpus stage failed: {0}")]
    Corpus(#[from] CorpusError),
    #[error("{mode} evaluation could not complete: {first_detail} ({errors} artifact(s) affected)")]
    Evaluation {
        mode: &'static str,
        errors: usize,
        first_detail: String,
    },
    #[error("write failed for {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest verification failed: {mismatches} mismatch(es), {missing} missing file(s)")]
    Verification { mismatches: usize, missing: usize },
}

#[derive(Debug)]
pub struct ModeRun {
    pub mode: Mode,
    pub summary: RunSummary,
    pub criteria: SuccessCriteria,
}

#[derive(Debug)]
pub struct ReplayReport {
    pub corpus_entries: usize,
    pub runs: Vec<ModeRun>,
    pub verification: VerificationReport,
    /// Everything written under the output directory, in emission order.
    pub files: Vec<PathBuf>,
    /// One line per completed stage, for operator-facing logs.
    pub log: Vec<String>,
}

impl ReplayReport {
    /// True iff every mode's criteria held. Infrastructure failures never
    /// reach this point; they abort [`run_replay`] instead.
    pub fn passed(&self) -> bool {
        self.runs.iter().all(|run| run.criteria.passed())
    }
}

/// Stable provenance record. Tool identity and platform only: anything
/// time- or path-dependent would break replay idempotence.
pub fn environment_record(registry: &Registry, substrate: &Substrate) -> String {
    format!(
        "tool: pq-assure {}\nos: {}\narch: {}\nregistry: {} {}\nsubstrate: {}\nmodes: strict, deployable\n",
        env!("CARGO_PKG_VERSION"),
        std::env::consts::OS,
        std::env::consts::ARCH,
        registry.profile,
        registry.version,
        substrate.describe(),
    )
}

fn write_stage(path: &Path, text: &str) -> Result<(), ReplayError> {
    write_string(path, text).map_err(|source| ReplayError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn run_replay(
    corpus_root: &Path,
    out_dir: &Path,
    registry: &Registry,
    substrate: &Substrate,
) -> Result<ReplayReport, ReplayError> {
    let mut files = Vec::new();
    let mut log = Vec::new();

    let validation = validate_registry(registry);
    if !validation.is_clean() {
        return Err(ReplayError::Registry {
            violations: validation.violations.len(),
        });
    }
    log.push(format!(
        "registry {} {} validated, {} requirements",
        registry.profile,
        registry.version,
        registry.requirements.len()
    ));

    let env_path = out_dir.join("environment.txt");
    std::fs::create_dir_all(out_dir).map_err(|source| ReplayError::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    write_stage(&env_path, &environment_record(registry, substrate))?;
    files.push(env_path.clone());
    log.push(format!("environment captured at {}", env_path.display()));

    let entries = generate_corpus(corpus_root)?;
    log.push(format!(
        "corpus generated: {} artifacts under {}",
        entries.len(),
        corpus_root.display()
    ));

    let mut runs = Vec::new();
    for mode in Mode::ALL {
        let summary = evaluate_corpus(corpus_root, &entries, registry, mode, substrate);
        if !summary.errors.is_empty() {
            return Err(ReplayError::Evaluation {
                mode: mode.name(),
                errors: summary.errors.len(),
                first_detail: summary.errors[0].detail.clone(),
            });
        }
        let written = emit_reports(&summary, registry, out_dir).map_err(|source| {
            ReplayError::Write {
                path: out_dir.to_path_buf(),
                source,
            }
        })?;
        let criteria = success_criteria(&summary);
        log.push(format!(
            "{} evaluation: {} pass / {} warn / {} block, criteria {}",
            mode.name(),
            summary.totals.pass,
            summary.totals.warn,
            summary.totals.block,
            if criteria.passed() { "met" } else { "NOT met" }
        ));
        files.extend(written);
        runs.push(ModeRun {
            mode,
            summary,
            criteria,
        });
    }

    let workflow_files = emit_workflow_outputs(registry, out_dir).map_err(|source| {
        ReplayError::Write {
            path: out_dir.to_path_buf(),
            source,
        }
    })?;
    log.push(format!(
        "workflow views emitted: {} files",
        workflow_files.len()
    ));
    files.extend(workflow_files);

    let verification = verify_manifest(&corpus_root.join("manifest.jsonl"))?;
    if !verification.is_clean() {
        return Err(ReplayError::Verification {
            mismatches: verification.mismatches.len(),
            missing: verification.missing.len(),
        });
    }
    log.push(format!(
        "manifest verified: {} artifacts rehashed clean",
        verification.checked
    ));

    Ok(ReplayReport {
        corpus_entries: entries.len(),
        runs,
        verification,
        files,
        log,
    })
}
