//! Policy- and workflow-facing views, generated from the registry alone.
//!
//! Everything here is derived data: the registry is the single source and
//! each view is a deterministic projection of it, so regeneration over the
//! same registry is byte-identical. The runtime consumer appears with zero
//! requirements on purpose; it is a named boundary, not covered surface.

use crate::fsio::{write_json, write_string};
use crate::registry::{GatePack, Mode, ModeAction, Owner, Registry, Stage};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// policy_matrix.csv: one row per requirement, sorted by id.
pub fn policy_matrix_csv(registry: &Registry) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "id",
            "owner",
            "stage",
            "gate_pack",
            "detector_kind",
            "normative_strength",
            "strict_action",
            "deployable_action",
        ])
        .expect("csv into vec");
    let mut records: Vec<_> = registry.requirements.iter().collect();
    records.sort_by(|a, b| a.id.cmp(&b.id));
    for record in records {
        writer
            .write_record([
                record.id.as_str(),
                record.owner.name(),
                record.stage.name(),
                record.gate_pack.name(),
                record.detector_kind.name(),
                record.normative_strength.name(),
                record.action(Mode::Strict).expect("validated registry").name(),
                record
                    .action(Mode::Deployable)
                    .expect("validated registry")
                    .name(),
            ])
            .expect("csv into vec");
    }
    String::from_utf8(writer.into_inner().expect("csv into vec")).expect("csv is utf-8")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryRow {
    pub boundary: &'static str,
    pub owner: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_pack: Option<&'static str>,
    pub requirements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageOwnerSummary {
    pub profile: String,
    pub version: String,
    pub boundaries: Vec<BoundaryRow>,
    pub by_owner: BTreeMap<&'static str, usize>,
    pub total_requirements: usize,
}

/// Requirement inventory collapsed by workflow boundary. The three
/// executable stages plus the explicitly-empty runtime consumer.
pub fn stage_owner_summary(registry: &Registry) -> StageOwnerSummary {
    let count_stage =
        |stage: Stage| registry.requirements.iter().filter(|r| r.stage == stage).count();
    let mut boundaries: Vec<BoundaryRow> = Stage::ALL
        .iter()
        .map(|&stage| {
            let pack = GatePack::for_stage(stage);
            BoundaryRow {
                boundary: stage.name(),
                owner: pack.owner().name(),
                gate_pack: Some(pack.name()),
                requirements: count_stage(stage),
            }
        })
        .collect();
    boundaries.push(BoundaryRow {
        boundary: "runtime-consumer",
        owner: Owner::RuntimeConsumer.name(),
        gate_pack: None,
        requirements: registry
            .requirements
            .iter()
            .filter(|r| r.owner == Owner::RuntimeConsumer)
            .count(),
    });
    let mut by_owner: BTreeMap<&'static str, usize> = BTreeMap::new();
    for owner in [Owner::CaPreissuance, Owner::ArtifactImporter, Owner::RuntimeConsumer] {
        by_owner.insert(
            owner.name(),
            registry.requirements.iter().filter(|r| r.owner == owner).count(),
        );
    }
    StageOwnerSummary {
        profile: registry.profile.clone(),
        version: registry.version.clone(),
        boundaries,
        by_owner,
        total_requirements: registry.requirements.len(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ActionCounts {
    pub block: usize,
    pub warn: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateMatrixRow {
    pub gate_pack: &'static str,
    pub owner: &'static str,
    pub stage: &'static str,
    pub requirement_count: usize,
    pub requirement_ids: Vec<String>,
    pub detector_kinds: BTreeMap<&'static str, usize>,
    pub strict: ActionCounts,
    pub deployable: ActionCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorGateMatrix {
    pub profile: String,
    pub version: String,
    pub packs: Vec<GateMatrixRow>,
}

/// The registry's policy re-expressed in gate-pack form.
pub fn operator_gate_matrix(registry: &Registry) -> OperatorGateMatrix {
    let packs = GatePack::ALL
        .iter()
        .map(|&pack| {
            let records = registry.records_in_pack(pack);
            let mut requirement_ids: Vec<String> =
                records.iter().map(|r| r.id.clone()).collect();
            requirement_ids.sort();
            let mut detector_kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
            for record in &records {
                *detector_kinds.entry(record.detector_kind.name()).or_default() += 1;
            }
            let count_actions = |mode: Mode| {
                let mut counts = ActionCounts::default();
                for record in &records {
                    match record.action(mode).expect("validated registry") {
                        ModeAction::Block => counts.block += 1,
                        ModeAction::Warn => counts.warn += 1,
                    }
                }
                counts
            };
            GateMatrixRow {
                gate_pack: pack.name(),
                owner: pack.owner().name(),
                stage: pack.stage().name(),
                requirement_count: records.len(),
                requirement_ids,
                detector_kinds,
                strict: count_actions(Mode::Strict),
                deployable: count_actions(Mode::Deployable),
            }
        })
        .collect();
    OperatorGateMatrix {
        profile: registry.profile.clone(),
        version: registry.version.clone(),
        packs,
    }
}

pub fn operator_gate_matrix_csv(matrix: &OperatorGateMatrix) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "gate_pack",
            "owner",
            "stage",
            "requirements",
            "strict_block",
            "strict_warn",
            "deployable_block",
            "deployable_warn",
        ])
        .expect("csv into vec");
    for row in &matrix.packs {
        writer
            .write_record([
                row.gate_pack,
                row.owner,
                row.stage,
                &row.requirement_count.to_string(),
                &row.strict.block.to_string(),
                &row.strict.warn.to_string(),
                &row.deployable.block.to_string(),
                &row.deployable.warn.to_string(),
            ])
            .expect("csv into vec");
    }
    String::from_utf8(writer.into_inner().expect("csv into vec")).expect("csv is utf-8")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackReadiness {
    pub gate_pack: &'static str,
    pub owner: &'static str,
    pub stage: &'static str,
    pub default_mode: &'static str,
    pub audit_mode: &'static str,
    pub purpose: &'static str,
    pub commands: Vec<String>,
    pub audit_replay: &'static str,
    pub outputs_to_inspect: Vec<&'static str>,
    pub decision: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorReadinessSummary {
    pub profile: String,
    pub version: String,
    pub default_mode: &'static str,
    pub reference_mode: &'static str,
    pub packs: Vec<PackReadiness>,
}

/// Freezes the operator posture per gate pack: default and audit modes,
/// command lines, files to inspect, and the decision each gate supports.
pub fn operator_readiness_summary(registry: &Registry) -> OperatorReadinessSummary {
    let eval = |mode: &str| format!("pq-assure evaluate --mode {mode}");
    let coverage =
        |surface: &str, mode: &str| format!("pq-assure coverage --surface {surface} --mode {mode}");
    let packs = vec![
        PackReadiness {
            gate_pack: GatePack::CaCertificateProfile.name(),
            owner: Owner::CaPreissuance.name(),
            stage: Stage::CertificateProfile.name(),
            default_mode: "deployable",
            audit_mode: "strict",
            purpose: "certificate-profile semantics gate before issuance",
            commands: vec![
                eval("deployable"),
                coverage("certificate-spki", "deployable"),
            ],
            audit_replay: "same commands with --mode strict",
            outputs_to_inspect: vec![
                "extended_registry_summary_<mode>.json",
                "policy_summary_<mode>.json",
                "certificate_spki_coverage_<mode>.json",
                "operator_readiness_summary.json",
            ],
            decision: "issue, hold, or block on certificate-profile semantics before issuance",
        },
        PackReadiness {
            gate_pack: GatePack::CaSpkiPublicKey.name(),
            owner: Owner::CaPreissuance.name(),
            stage: Stage::SpkiPublicKey.name(),
            default_mode: "deployable",
            audit_mode: "strict",
            purpose: "SPKI structure, parameter, and key-material gate before issuance",
            commands: vec![
                eval("deployable"),
                coverage("certificate-spki", "deployable"),
            ],
            audit_replay: "same commands with --mode strict",
            outputs_to_inspect: vec![
                "extended_registry_summary_<mode>.json",
                "policy_summary_<mode>.json",
                "certificate_spki_coverage_<mode>.json",
                "operator_gate_matrix.json",
            ],
            decision:
                "issue, hold, or block on SPKI structure, parameters, and key-material conditions before issuance",
        },
        PackReadiness {
            gate_pack: GatePack::ImportPrivateKey.name(),
            owner: Owner::ArtifactImporter.name(),
            stage: Stage::PrivateKeyImport.name(),
            default_mode: "deployable",
            audit_mode: "strict",
            purpose: "private-key container gate before key import",
            commands: vec![
                format!("{} [--bridge <import-bridge>]", eval("<mode>")),
                coverage("private-key", "<mode>"),
            ],
            audit_replay: "run in both modes; strict is the audit posture",
            outputs_to_inspect: vec![
                "private_key_coverage_<mode>.json",
                "extended_registry_summary_<mode>.json",
                "policy_summary_<mode>.json",
                "operator_gate_matrix.json",
            ],
            decision:
                "import, reject, or escalate based on container form, length, and consistency checks before use",
        },
    ];
    OperatorReadinessSummary {
        profile: registry.profile.clone(),
        version: registry.version.clone(),
        default_mode: "deployable",
        reference_mode: "strict",
        packs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkflowStep {
    pub step: usize,
    pub name: &'static str,
    pub command: &'static str,
    pub purpose: &'static str,
    pub outputs: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkflowOwner {
    pub owner: &'static str,
    pub gate_packs: Vec<&'static str>,
    pub stages: Vec<&'static str>,
    pub requirements: usize,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceWorkflow {
    pub profile: String,
    pub version: String,
    pub default_mode: &'static str,
    pub audit_mode: &'static str,
    pub owners: Vec<WorkflowOwner>,
    pub steps: Vec<WorkflowStep>,
}

/// The owner/stage recipe: who runs what, in which order, and what comes
/// out of each step.
pub fn reference_workflow(registry: &Registry) -> ReferenceWorkflow {
    let count_owner =
        |owner: Owner| registry.requirements.iter().filter(|r| r.owner == owner).count();
    let owners = vec![
        WorkflowOwner {
            owner: Owner::CaPreissuance.name(),
            gate_packs: vec![
                GatePack::CaCertificateProfile.name(),
                GatePack::CaSpkiPublicKey.name(),
            ],
            stages: vec![Stage::CertificateProfile.name(), Stage::SpkiPublicKey.name()],
            requirements: count_owner(Owner::CaPreissuance),
            note: "pre-issuance gates; default deployable, strict for audit replay",
        },
        WorkflowOwner {
            owner: Owner::ArtifactImporter.name(),
            gate_packs: vec![GatePack::ImportPrivateKey.name()],
            stages: vec![Stage::PrivateKeyImport.name()],
            requirements: count_owner(Owner::ArtifactImporter),
            note: "import gate; consistency checks may use an external bridge",
        },
        WorkflowOwner {
            owner: Owner::RuntimeConsumer.name(),
            gate_packs: vec![],
            stages: vec![],
            requirements: count_owner(Owner::RuntimeConsumer),
            note: "explicit boundary with zero active requirements; no coverage is claimed for it",
        },
    ];
    let steps = vec![
        WorkflowStep {
            step: 1,
            name: "validate-registry",
            command: "pq-assure validate-registry",
            purpose: "check registry topology before anything consumes it",
            outputs: vec![],
        },
        WorkflowStep {
            step: 2,
            name: "gen-corpus",
            command: "pq-assure gen-corpus",
            purpose: "materialize the 48-artifact corpus and its hash ledger",
            outputs: vec!["corpus/manifest.jsonl", "corpus/valid/", "corpus/mutated/"],
        },
        WorkflowStep {
            step: 3,
            name: "evaluate-deployable",
            command: "pq-assure evaluate --mode deployable",
            purpose: "operational posture run",
            outputs: vec![
                "extended_registry_summary_deployable.json",
                "policy_summary_deployable.json",
                "certificate_spki_coverage_deployable.json",
                "private_key_coverage_deployable.json",
            ],
        },
        WorkflowStep {
            step: 4,
            name: "evaluate-strict",
            command: "pq-assure evaluate --mode strict",
            purpose: "audit replay of the same evidence",
            outputs: vec![
                "extended_registry_summary_strict.json",
                "policy_summary_strict.json",
                "certificate_spki_coverage_strict.json",
                "private_key_coverage_strict.json",
            ],
        },
        WorkflowStep {
            step: 5,
            name: "workflow-views",
            command: "pq-assure workflow",
            purpose: "regenerate the policy and operator views from the registry",
            outputs: vec![
                "policy_matrix.csv",
                "stage_owner_summary.json",
                "operator_gate_matrix.json",
                "operator_gate_matrix.csv",
                "operator_readiness_summary.json",
                "reference_workflow.json",
                "reference_workflow.md",
            ],
        },
        WorkflowStep {
            step: 6,
            name: "verify-manifest",
            command: "pq-assure gen-corpus (verification pass)",
            purpose: "rehash every artifact against the ledger",
            outputs: vec![],
        },
    ];
    ReferenceWorkflow {
        profile: registry.profile.clone(),
        version: registry.version.clone(),
        default_mode: "deployable",
        audit_mode: "strict",
        owners,
        steps,
    }
}

/// Markdown rendering of the reference workflow.
pub fn reference_workflow_markdown(workflow: &ReferenceWorkflow) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# Reference workflow ({} {})\n\nDefault mode: `{}`. Audit mode: `{}`.\n\n",
        workflow.profile, workflow.version, workflow.default_mode, workflow.audit_mode
    ));
    out.push_str("## Owners\n\n| owner | gate packs | stages | requirements |\n|---|---|---|---|\n");
    for owner in &workflow.owners {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            owner.owner,
            if owner.gate_packs.is_empty() {
                "-".to_string()
            } else {
                owner.gate_packs.join(", ")
            },
            if owner.stages.is_empty() {
                "-".to_string()
            } else {
                owner.stages.join(", ")
            },
            owner.requirements
        ));
    }
    out.push('\n');
    for owner in &workflow.owners {
        out.push_str(&format!("- {}: {}\n", owner.owner, owner.note));
    }
    out.push_str("\n## Steps\n\n");
    for step in &workflow.steps {
        out.push_str(&format!(
            "{}. **{}**: `{}`\n   {}\n",
            step.step, step.name, step.command, step.purpose
        ));
        if !step.outputs.is_empty() {
            out.push_str(&format!("   Outputs: {}\n", step.outputs.join(", ")));
        }
    }
    out
}

/// Writes the seven shared workflow files into `out_dir`.
pub fn emit_workflow_outputs(registry: &Registry, out_dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();

    let path = out_dir.join("policy_matrix.csv");
    write_string(&path, &policy_matrix_csv(registry))?;
    written.push(path);

    let path = out_dir.join("stage_owner_summary.json");
    write_json(&path, &stage_owner_summary(registry))?;
    written.push(path);

    let matrix = operator_gate_matrix(registry);
    let path = out_dir.join("operator_gate_matrix.json");
    write_json(&path, &matrix)?;
    written.push(path);

    let path = out_dir.join("operator_gate_matrix.csv");
    write_string(&path, &operator_gate_matrix_csv(&matrix))?;
    written.push(path);

    let path = out_dir.join("operator_readiness_summary.json");
    write_json(&path, &operator_readiness_summary(registry))?;
    written.push(path);

    let workflow = reference_workflow(registry);
    let path = out_dir.join("reference_workflow.json");
    write_json(&path, &workflow)?;
    written.push(path);

    let path = out_dir.join("reference_workflow.md");
    write_string(&path, &reference_workflow_markdown(&workflow))?;
    written.push(path);

    Ok(written)
}
