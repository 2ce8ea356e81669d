//! Evaluation engine: runs the detectors over a manifest under one mode,
//! applies the registry's mode actions, and accounts expected-vs-actual
//! detection per artifact.
//!
//! Detector evidence never depends on the mode; only dispositions do. A
//! substrate that cannot answer produces a per-artifact evaluation error
//! that fails the run; it is never folded into a pass.

use crate::corpus::{ManifestEntry, Validity};
use crate::detect::{
    detect_certificate, detect_private_key, detect_spki, DetectError, DetectionResult, Finding,
};
use crate::fsio::write_json;
use crate::registry::{ArtifactType, Mode, ModeAction, Registry, Stage};
use crate::substrate::Substrate;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Disposition {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "warn")]
    Warn,
    #[serde(rename = "block")]
    Block,
    /// The artifact could not be evaluated. Distinct from pass by design.
    #[serde(rename = "error")]
    Error,
}

/// Per-artifact evaluation outcome under one mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArtifactReport {
    pub artifact_id: String,
    pub stage: Stage,
    pub validity: Validity,
    pub disposition: Disposition,
    pub findings: Vec<Finding>,
    pub first_hit: Option<String>,
    pub redundant_count: usize,
    /// unique requirements cover the manifest expected_detection set.
    pub expected_met: bool,
    pub missing_expected: Vec<String>,
    pub unexpected: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RunTotals {
    pub artifacts: usize,
    pub valid: usize,
    pub invalid: usize,
    pub pass: usize,
    pub warn: usize,
    pub block: usize,
    pub errors: usize,
    /// Valid artifacts whose disposition is not pass.
    pub false_positives: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StageTotals {
    pub artifacts: usize,
    pub valid: usize,
    pub invalid: usize,
    pub pass: usize,
    pub warn: usize,
    pub block: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RequirementOutcome {
    /// Invalid artifacts whose expected set names this requirement.
    pub exercised: usize,
    /// Of those, how many actually triggered it.
    pub detected: usize,
    pub missing: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationError {
    pub artifact_id: String,
    pub detail: String,
}

/// One full evaluation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub mode: Mode,
    pub registry_profile: String,
    pub registry_version: String,
    pub substrate: String,
    pub totals: RunTotals,
    pub per_stage: BTreeMap<Stage, StageTotals>,
    /// Keyed by requirement id, scoped to the stages present in the run.
    pub per_requirement: BTreeMap<String, RequirementOutcome>,
    pub reports: Vec<ArtifactReport>,
    pub errors: Vec<EvaluationError>,
}

fn evaluate_entry(
    corpus_root: &Path,
    entry: &ManifestEntry,
    registry: &Registry,
    mode: Mode,
    substrate: &Substrate,
) -> ArtifactReport {
    let detection = std::fs::read(corpus_root.join(&entry.path))
        .map_err(|e| format!("artifact unreadable: {e}"))
        .and_then(|bytes| run_detectors(&entry.artifact_id, entry.artifact_type, &bytes, registry, substrate));

    let expected: BTreeSet<&str> = entry
        .expected_detection
        .iter()
        .flatten()
        .map(String::as_str)
        .collect();

    match detection {
        Err(detail) => ArtifactReport {
            artifact_id: entry.artifact_id.clone(),
            stage: entry.stage,
            validity: entry.validity,
            disposition: Disposition::Error,
            findings: Vec::new(),
            first_hit: None,
            redundant_count: 0,
            expected_met: expected.is_empty(),
            missing_expected: expected.iter().map(|s| s.to_string()).collect(),
            unexpected: Vec::new(),
            error: Some(detail),
        },
        Ok(result) => {
            let unique = result.unique_requirements();
            let disposition = result
                .findings
                .iter()
                .map(|f| {
                    registry
                        .action(&f.requirement_id, mode)
                        .expect("finding ids come from the registry")
                })
                .max()
                .map_or(Disposition::Pass, |action| match action {
                    ModeAction::Block => Disposition::Block,
                    ModeAction::Warn => Disposition::Warn,
                });
            ArtifactReport {
                artifact_id: entry.artifact_id.clone(),
                stage: entry.stage,
                validity: entry.validity,
                disposition,
                first_hit: result.first_hit().map(str::to_string),
                redundant_count: result.redundant_count(),
                expected_met: expected.iter().all(|id| unique.contains(id)),
                missing_expected: expected
                    .iter()
                    .filter(|id| !unique.contains(*id))
                    .map(|s| s.to_string())
                    .collect(),
                unexpected: unique
                    .iter()
                    .filter(|id| !expected.contains(*id))
                    .map(|s| s.to_string())
                    .collect(),
                findings: result.findings,
                error: None,
            }
        }
    }
}

fn run_detectors(
    artifact_id: &str,
    artifact_type: ArtifactType,
    bytes: &[u8],
    registry: &Registry,
    substrate: &Substrate,
) -> Result<DetectionResult, String> {
    match artifact_type {
        ArtifactType::Certificate => crate::pkix::parse_certificate(bytes)
            .map(|view| detect_certificate(artifact_id, &view, registry))
            .map_err(|e| format!("certificate parse failed: {e}")),
        ArtifactType::Spki => crate::pkix::parse_spki(bytes)
            .map(|view| detect_spki(artifact_id, &view, registry))
            .map_err(|e| format!("SPKI parse failed: {e}")),
        ArtifactType::PrivateKeyContainer => crate::pkix::parse_private_key_container(bytes)
            .map_err(|e| format!("private-key parse failed: {e}"))
            .and_then(|view| {
                detect_private_key(artifact_id, &view, substrate, registry).map_err(
                    |DetectError::SubstrateUnavailable { detail }| {
                        format!("bridge unavailable: {detail}")
                    },
                )
            }),
    }
}

fn aggregate(
    mode: Mode,
    registry: &Registry,
    substrate: &Substrate,
    mut reports: Vec<ArtifactReport>,
) -> RunSummary {
    reports.sort_by(|a, b| a.artifact_id.cmp(&b.artifact_id));

    let mut totals = RunTotals::default();
    let mut per_stage: BTreeMap<Stage, StageTotals> = BTreeMap::new();
    let mut errors = Vec::new();
    let stages_present: BTreeSet<Stage> = reports.iter().map(|r| r.stage).collect();

    let mut per_requirement: BTreeMap<String, RequirementOutcome> = registry
        .requirements
        .iter()
        .filter(|r| stages_present.contains(&r.stage))
        .map(|r| (r.id.clone(), RequirementOutcome::default()))
        .collect();

    for report in &reports {
        totals.artifacts += 1;
        let stage = per_stage.entry(report.stage).or_default();
        stage.artifacts += 1;
        match report.validity {
            Validity::Valid => {
                totals.valid += 1;
                stage.valid += 1;
                if report.disposition != Disposition::Pass {
                    totals.false_positives += 1;
                }
            }
            Validity::Invalid => {
                totals.invalid += 1;
                stage.invalid += 1;
            }
        }
        match report.disposition {
            Disposition::Pass => {
                totals.pass += 1;
                stage.pass += 1;
            }
            Disposition::Warn => {
                totals.warn += 1;
                stage.warn += 1;
            }
            Disposition::Block => {
                totals.block += 1;
                stage.block += 1;
            }
            Disposition::Error => {
                totals.errors += 1;
                stage.errors += 1;
            }
        }
        if let Some(detail) = &report.error {
            errors.push(EvaluationError {
                artifact_id: report.artifact_id.clone(),
                detail: detail.clone(),
            });
        }
        if report.validity == Validity::Invalid {
            // The report partitions the expected set for us: ids that were
            // missed, plus found ids that were not unexpected.
            let unique: BTreeSet<&str> =
                report.findings.iter().map(|f| f.requirement_id.as_str()).collect();
            let mut expected: BTreeSet<&str> =
                report.missing_expected.iter().map(String::as_str).collect();
            expected.extend(
                unique
                    .iter()
                    .filter(|id| !report.unexpected.iter().any(|u| u == *id)),
            );
            for id in expected {
                let outcome = per_requirement.entry(id.to_string()).or_default();
                outcome.exercised += 1;
                if unique.contains(id) {
                    outcome.detected += 1;
                } else {
                    outcome.missing += 1;
                }
            }
        }
    }

    RunSummary {
        mode,
        registry_profile: registry.profile.clone(),
        registry_version: registry.version.clone(),
        substrate: substrate.describe(),
        totals,
        per_stage,
        per_requirement,
        reports,
        errors,
    }
}

/// Evaluates every manifest entry under `mode`. Artifact order in the output
/// is by artifact id regardless of input order or scheduling.
pub fn evaluate_corpus(
    corpus_root: &Path,
    entries: &[ManifestEntry],
    registry: &Registry,
    mode: Mode,
    substrate: &Substrate,
) -> RunSummary {
    #[cfg(feature = "parallel")]
    let reports: Vec<ArtifactReport> = entries
        .par_iter()
        .map(|entry| evaluate_entry(corpus_root, entry, registry, mode, substrate))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let reports: Vec<ArtifactReport> = entries
        .iter()
        .map(|entry| evaluate_entry(corpus_root, entry, registry, mode, substrate))
        .collect();
    aggregate(mode, registry, substrate, reports)
}

/// Sequential evaluation with identical output; the baseline the bench
/// suite compares the parallel path against.
pub fn evaluate_corpus_serial(
    corpus_root: &Path,
    entries: &[ManifestEntry],
    registry: &Registry,
    mode: Mode,
    substrate: &Substrate,
) -> RunSummary {
    let reports: Vec<ArtifactReport> = entries
        .iter()
        .map(|entry| evaluate_entry(corpus_root, entry, registry, mode, substrate))
        .collect();
    aggregate(mode, registry, substrate, reports)
}

/// The run-level success criteria: expected sets met, clean valid set, no
/// unexpected requirement anywhere, no open detector gap in scope, and no
/// evaluation errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuccessCriteria {
    pub all_expected_met: bool,
    pub zero_false_positives: bool,
    pub no_unexpected: bool,
    pub no_open_gaps: bool,
    pub no_errors: bool,
}

impl SuccessCriteria {
    pub fn passed(self) -> bool {
        self.all_expected_met
            && self.zero_false_positives
            && self.no_unexpected
            && self.no_open_gaps
            && self.no_errors
    }
}

pub fn success_criteria(summary: &RunSummary) -> SuccessCriteria {
    SuccessCriteria {
        all_expected_met: summary
            .reports
            .iter()
            .filter(|r| r.validity == Validity::Invalid)
            .all(|r| r.expected_met),
        zero_false_positives: summary.totals.false_positives == 0,
        no_unexpected: summary.reports.iter().all(|r| r.unexpected.is_empty()),
        no_open_gaps: summary
            .per_requirement
            .values()
            .all(|o| o.exercised > 0 && o.missing == 0),
        no_errors: summary.errors.is_empty(),
    }
}

/// Reporting surface: the CA-facing pair of stages or the importer stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    CertificateSpki,
    PrivateKey,
}

impl Surface {
    pub const ALL: [Surface; 2] = [Surface::CertificateSpki, Surface::PrivateKey];

    pub fn name(self) -> &'static str {
        match self {
            Surface::CertificateSpki => "certificate-spki",
            Surface::PrivateKey => "private-key",
        }
    }

    pub fn stages(self) -> &'static [Stage] {
        match self {
            Surface::CertificateSpki => &[Stage::CertificateProfile, Stage::SpkiPublicKey],
            Surface::PrivateKey => &[Stage::PrivateKeyImport],
        }
    }

    pub fn file_stem(self) -> &'static str {
        match self {
            Surface::CertificateSpki => "certificate_spki_coverage",
            Surface::PrivateKey => "private_key_coverage",
        }
    }
}

impl std::str::FromStr for Surface {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "certificate-spki" => Ok(Surface::CertificateSpki),
            "private-key" => Ok(Surface::PrivateKey),
            other => Err(format!(
                "unknown surface {other:?}; expected certificate-spki or private-key"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageRow {
    pub requirement_id: String,
    pub stage: Stage,
    pub exercised: usize,
    pub detected: usize,
    pub missing: usize,
    pub open_gap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub mode: Mode,
    pub surface: String,
    pub requirements: Vec<CoverageRow>,
    pub requirement_count: usize,
    pub detected_count: usize,
    pub open_gaps: Vec<String>,
}

/// Per-requirement coverage over one surface. A registry row that was never
/// exercised, or whose expected detections were missed anywhere, is an open
/// gap.
pub fn coverage_report(summary: &RunSummary, surface: Surface, registry: &Registry) -> CoverageReport {
    let mut requirements = Vec::new();
    let mut open_gaps = Vec::new();
    for record in &registry.requirements {
        if !surface.stages().contains(&record.stage) {
            continue;
        }
        let outcome = summary
            .per_requirement
            .get(&record.id)
            .copied()
            .unwrap_or_default();
        let open_gap = outcome.exercised == 0 || outcome.missing > 0;
        if open_gap {
            open_gaps.push(record.id.clone());
        }
        requirements.push(CoverageRow {
            requirement_id: record.id.clone(),
            stage: record.stage,
            exercised: outcome.exercised,
            detected: outcome.detected,
            missing: outcome.missing,
            open_gap,
        });
    }
    requirements.sort_by(|a, b| a.requirement_id.cmp(&b.requirement_id));
    open_gaps.sort();
    CoverageReport {
        mode: summary.mode,
        surface: surface.name().to_string(),
        requirement_count: requirements.len(),
        detected_count: requirements.iter().filter(|r| !r.open_gap).count(),
        open_gaps,
        requirements,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolicySummary {
    pub mode: Mode,
    pub profile: String,
    pub version: String,
    pub total_requirements: usize,
    pub block_count: usize,
    pub warn_count: usize,
    pub warn_requirements: Vec<String>,
    pub actions: BTreeMap<String, &'static str>,
}

pub fn policy_summary(registry: &Registry, mode: Mode) -> PolicySummary {
    let mut actions = BTreeMap::new();
    let mut warn_requirements = Vec::new();
    let mut block_count = 0;
    for record in &registry.requirements {
        let action = record.action(mode).expect("validated registry");
        actions.insert(record.id.clone(), action.name());
        match action {
            ModeAction::Block => block_count += 1,
            ModeAction::Warn => warn_requirements.push(record.id.clone()),
        }
    }
    warn_requirements.sort();
    PolicySummary {
        mode,
        profile: registry.profile.clone(),
        version: registry.version.clone(),
        total_requirements: registry.requirements.len(),
        block_count,
        warn_count: warn_requirements.len(),
        warn_requirements,
        actions,
    }
}

#[derive(Serialize)]
struct ExtendedRegistrySummary<'a> {
    #[serde(flatten)]
    summary: &'a RunSummary,
    success_criteria: SuccessCriteria,
}

/// Writes the four mode-specific report files. Re-emission over the same
/// summary is byte-identical.
pub fn emit_reports(
    summary: &RunSummary,
    registry: &Registry,
    out_dir: &Path,
) -> std::io::Result<Vec<PathBuf>> {
    let mode = summary.mode.name();
    let mut written = Vec::new();

    let path = out_dir.join(format!("extended_registry_summary_{mode}.json"));
    write_json(
        &path,
        &ExtendedRegistrySummary {
            summary,
            success_criteria: success_criteria(summary),
        },
    )?;
    written.push(path);

    let path = out_dir.join(format!("policy_summary_{mode}.json"));
    write_json(&path, &policy_summary(registry, summary.mode))?;
    written.push(path);

    for surface in Surface::ALL {
        let path = out_dir.join(format!("{}_{mode}.json", surface.file_stem()));
        write_json(&path, &coverage_report(summary, surface, registry))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_corpus, MANIFEST_FILE};
    use crate::registry::{builtin_registry, ids};
    use std::path::PathBuf;

    struct Run {
        _dir: tempfile::TempDir,
        root: PathBuf,
        entries: Vec<ManifestEntry>,
        registry: Registry,
    }

    fn corpus_run() -> Run {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let entries = generate_corpus(&root).unwrap();
        Run {
            _dir: dir,
            root,
            entries,
            registry: builtin_registry(),
        }
    }

    #[test]
    fn strict_run_matches_controlled_results() {
        let run = corpus_run();
        let summary = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Strict,
            &Substrate::Structural,
        );
        assert_eq!(summary.totals.artifacts, 48);
        assert_eq!(summary.totals.block, 27);
        assert_eq!(summary.totals.warn, 0);
        assert_eq!(summary.totals.pass, 21);
        assert_eq!(summary.totals.false_positives, 0);
        assert_eq!(summary.totals.errors, 0);

        let blocks_by_stage: Vec<usize> = [
            Stage::CertificateProfile,
            Stage::SpkiPublicKey,
            Stage::PrivateKeyImport,
        ]
        .iter()
        .map(|s| summary.per_stage[s].block)
        .collect();
        assert_eq!(blocks_by_stage, [7, 13, 7]);

        let criteria = success_criteria(&summary);
        assert!(criteria.passed(), "{criteria:?}");

        // Reports are sorted and every invalid artifact met its set exactly.
        let ids_sorted: Vec<&str> = summary.reports.iter().map(|r| r.artifact_id.as_str()).collect();
        let mut expected_order = ids_sorted.clone();
        expected_order.sort();
        assert_eq!(ids_sorted, expected_order);
        for report in &summary.reports {
            assert!(report.expected_met, "{}", report.artifact_id);
            assert!(report.unexpected.is_empty(), "{}", report.artifact_id);
        }
    }

    #[test]
    fn deployable_differs_only_in_disposition() {
        let run = corpus_run();
        let strict = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Strict,
            &Substrate::Structural,
        );
        let deployable = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Deployable,
            &Substrate::Structural,
        );
        assert_eq!(deployable.totals.block, 26);
        assert_eq!(deployable.totals.warn, 1);
        assert_eq!(deployable.totals.pass, 21);

        let warn: Vec<&str> = deployable
            .reports
            .iter()
            .filter(|r| r.disposition == Disposition::Warn)
            .map(|r| r.artifact_id.as_str())
            .collect();
        assert_eq!(warn, ["der-mut-mlkem768-spki-unreduced-byteencode12-pub"]);

        // Mode-evidence equality: identical finding sets artifact by artifact.
        for (s, d) in strict.reports.iter().zip(&deployable.reports) {
            assert_eq!(s.artifact_id, d.artifact_id);
            assert_eq!(s.findings, d.findings);
        }
        assert!(success_criteria(&deployable).passed());
    }

    #[test]
    fn first_hit_matches_expected_order() {
        let run = corpus_run();
        let summary = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Strict,
            &Substrate::Structural,
        );
        for entry in run.entries.iter().filter(|e| e.validity == Validity::Invalid) {
            let report = summary
                .reports
                .iter()
                .find(|r| r.artifact_id == entry.artifact_id)
                .unwrap();
            let expected_first = entry.expected_detection.as_ref().unwrap()[0].as_str();
            assert_eq!(
                report.first_hit.as_deref(),
                Some(expected_first),
                "{}",
                entry.artifact_id
            );
        }
    }

    #[test]
    fn redundancy_is_confined_to_the_signature_aid_pair() {
        let run = corpus_run();
        let summary = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Strict,
            &Substrate::Structural,
        );
        for report in &summary.reports {
            let expected_redundant = matches!(
                report.artifact_id.as_str(),
                "der-mut-mldsa44-cert-signature-aid-null"
                    | "der-mut-mldsa44-cert-signature-aid-octet-params"
            );
            if expected_redundant {
                assert_eq!(report.findings.len(), 2, "{}", report.artifact_id);
                assert_eq!(report.redundant_count, 1, "{}", report.artifact_id);
            } else {
                assert_eq!(report.redundant_count, 0, "{}", report.artifact_id);
            }
        }
    }

    #[test]
    fn coverage_closes_both_surfaces() {
        let run = corpus_run();
        let summary = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Strict,
            &Substrate::Structural,
        );
        let importer = coverage_report(&summary, Surface::PrivateKey, &run.registry);
        assert_eq!(importer.requirement_count, 7);
        assert_eq!(importer.detected_count, 7);
        assert!(importer.open_gaps.is_empty());

        let ca = coverage_report(&summary, Surface::CertificateSpki, &run.registry);
        assert_eq!(ca.requirement_count, 10);
        assert_eq!(ca.detected_count, 10);
        assert!(ca.open_gaps.is_empty());
    }

    #[test]
    fn unexercised_registry_row_is_an_open_gap() {
        let run = corpus_run();
        let mut registry = run.registry.clone();
        let mut extra = registry.requirements[0].clone();
        extra.id = "MLKEM-SPKI-SYNTHETIC-EXTRA".to_string();
        extra.stage = Stage::SpkiPublicKey;
        registry.requirements.push(extra);

        let summary = evaluate_corpus(
            &run.root,
            &run.entries,
            &registry,
            Mode::Strict,
            &Substrate::Structural,
        );
        let ca = coverage_report(&summary, Surface::CertificateSpki, &registry);
        assert_eq!(ca.open_gaps, ["MLKEM-SPKI-SYNTHETIC-EXTRA"]);
        assert!(!success_criteria(&summary).no_open_gaps);
    }

    #[test]
    fn stage_slice_scopes_the_requirement_table() {
        let run = corpus_run();
        let slice: Vec<ManifestEntry> = run
            .entries
            .iter()
            .filter(|e| e.stage == Stage::PrivateKeyImport)
            .cloned()
            .collect();
        let summary = evaluate_corpus(
            &run.root,
            &slice,
            &run.registry,
            Mode::Strict,
            &Substrate::Structural,
        );
        assert_eq!(summary.totals.artifacts, 14);
        assert_eq!(summary.per_requirement.len(), 7);
        assert!(summary
            .per_requirement
            .keys()
            .all(|id| id.contains("PRIVATE")));
        assert!(success_criteria(&summary).passed());
    }

    #[test]
    fn unavailable_bridge_fails_the_run() {
        let run = corpus_run();
        let substrate = Substrate::Bridge(PathBuf::from("/nonexistent/bridge"));
        let summary = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Strict,
            &substrate,
        );
        // Exactly the artifacts whose evaluation needs a consistency verdict:
        // the two valid both-form containers and the two both-mismatch
        // mutants (the hash-mismatch mutant settles without the bridge).
        let error_ids: Vec<&str> = summary.errors.iter().map(|e| e.artifact_id.as_str()).collect();
        assert_eq!(
            error_ids,
            [
                "der-mut-mldsa44-key-both-mismatch",
                "der-mut-mlkem512-key-both-mismatch",
                "openssl-mldsa44-ee-key",
                "openssl-mlkem512-ee-key",
            ]
        );
        let valid_error = summary
            .reports
            .iter()
            .find(|r| r.artifact_id == "openssl-mlkem512-ee-key")
            .unwrap();
        assert_eq!(valid_error.disposition, Disposition::Error);
        assert_eq!(summary.totals.false_positives, 2);
        assert!(!success_criteria(&summary).passed());
    }

    #[test]
    fn serial_and_parallel_paths_agree_and_reemission_is_stable() {
        let run = corpus_run();
        let parallel = evaluate_corpus(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Deployable,
            &Substrate::Structural,
        );
        let serial = evaluate_corpus_serial(
            &run.root,
            &run.entries,
            &run.registry,
            Mode::Deployable,
            &Substrate::Structural,
        );
        assert_eq!(parallel, serial);

        let out_a = tempfile::tempdir().unwrap();
        let out_b = tempfile::tempdir().unwrap();
        let files_a = emit_reports(&parallel, &run.registry, out_a.path()).unwrap();
        let files_b = emit_reports(&serial, &run.registry, out_b.path()).unwrap();
        assert_eq!(files_a.len(), 4);
        for (a, b) in files_a.iter().zip(&files_b) {
            assert_eq!(
                std::fs::read(a).unwrap(),
                std::fs::read(b).unwrap(),
                "{a:?} vs {b:?}"
            );
        }
    }

    #[test]
    fn policy_summaries_split_sixteen_one() {
        let registry = builtin_registry();
        let strict = policy_summary(&registry, Mode::Strict);
        assert_eq!((strict.block_count, strict.warn_count), (17, 0));
        let deployable = policy_summary(&registry, Mode::Deployable);
        assert_eq!((deployable.block_count, deployable.warn_count), (16, 1));
        assert_eq!(
            deployable.warn_requirements,
            [ids::MLKEM_SPKI_ENCODE_DECODE_IDENTITY]
        );
    }

    #[test]
    fn manifest_file_name_is_stable() {
        // The evaluator's callers locate the manifest by this name.
        assert_eq!(MANIFEST_FILE, "manifest.jsonl");
    }
}
