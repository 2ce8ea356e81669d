//! The requirement registry: the single source of truth for what the
//! detectors enforce, who owns each check, and how each mode reacts.
//!
//! The registry ships in two forms that must stay in lockstep: the
//! compiled-in table from [`builtin_registry`] and a JSON file (by
//! convention `requirements.json`) that tools may edit and pass back in.
//! [`validate_registry`] checks the frozen topology of the `pkix-core`
//! profile: 17 records, the owner/stage/gate-pack partition, detector-kind
//! and strength counts, and the single deployable-mode warn entry.

use crate::pkix::Family;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("cannot read registry: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse registry JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Evaluation mode. Strict is the reference posture; deployable is the
/// operational default.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Mode {
    #[serde(rename = "strict")]
    Strict,
    #[serde(rename = "deployable")]
    Deployable,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Strict, Mode::Deployable];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Deployable => "deployable",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "deployable" => Ok(Mode::Deployable),
            other => Err(format!("unknown mode {other:?} (strict, deployable)")),
        }
    }
}

/// What a finding does to the run disposition in a given mode.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum ModeAction {
    #[serde(rename = "warn")]
    Warn,
    #[serde(rename = "block")]
    Block,
}

impl ModeAction {
    pub fn name(self) -> &'static str {
        match self {
            ModeAction::Warn => "warn",
            ModeAction::Block => "block",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArtifactType {
    #[serde(rename = "certificate")]
    Certificate,
    #[serde(rename = "spki")]
    Spki,
    #[serde(rename = "private-key-container")]
    PrivateKeyContainer,
}

impl ArtifactType {
    pub fn name(self) -> &'static str {
        match self {
            ArtifactType::Certificate => "certificate",
            ArtifactType::Spki => "spki",
            ArtifactType::PrivateKeyContainer => "private-key-container",
        }
    }
}

/// Pipeline stage a requirement is checked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    #[serde(rename = "certificate/profile")]
    CertificateProfile,
    #[serde(rename = "SPKI/public-key")]
    SpkiPublicKey,
    #[serde(rename = "private-key-container/import")]
    PrivateKeyImport,
}

impl Stage {
    pub const ALL: [Stage; 3] = [
        Stage::CertificateProfile,
        Stage::SpkiPublicKey,
        Stage::PrivateKeyImport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::CertificateProfile => "certificate/profile",
            Stage::SpkiPublicKey => "SPKI/public-key",
            Stage::PrivateKeyImport => "private-key-container/import",
        }
    }

    pub fn artifact_type(self) -> ArtifactType {
        match self {
            Stage::CertificateProfile => ArtifactType::Certificate,
            Stage::SpkiPublicKey => ArtifactType::Spki,
            Stage::PrivateKeyImport => ArtifactType::PrivateKeyContainer,
        }
    }
}

/// Boundary that runs a gate pack. The runtime consumer owns no records in
/// this profile but is still a named boundary in operator views.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Owner {
    #[serde(rename = "ca-preissuance")]
    CaPreissuance,
    #[serde(rename = "artifact-importer")]
    ArtifactImporter,
    #[serde(rename = "runtime-consumer")]
    RuntimeConsumer,
}

impl Owner {
    pub fn name(self) -> &'static str {
        match self {
            Owner::CaPreissuance => "ca-preissuance",
            Owner::ArtifactImporter => "artifact-importer",
            Owner::RuntimeConsumer => "runtime-consumer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GatePack {
    #[serde(rename = "ca-certificate-profile")]
    CaCertificateProfile,
    #[serde(rename = "ca-spki-public-key")]
    CaSpkiPublicKey,
    #[serde(rename = "import-private-key")]
    ImportPrivateKey,
}

impl GatePack {
    pub const ALL: [GatePack; 3] = [
        GatePack::CaCertificateProfile,
        GatePack::CaSpkiPublicKey,
        GatePack::ImportPrivateKey,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GatePack::CaCertificateProfile => "ca-certificate-profile",
            GatePack::CaSpkiPublicKey => "ca-spki-public-key",
            GatePack::ImportPrivateKey => "import-private-key",
        }
    }

    pub fn owner(self) -> Owner {
        match self {
            GatePack::CaCertificateProfile | GatePack::CaSpkiPublicKey => Owner::CaPreissuance,
            GatePack::ImportPrivateKey => Owner::ArtifactImporter,
        }
    }

    pub fn stage(self) -> Stage {
        match self {
            GatePack::CaCertificateProfile => Stage::CertificateProfile,
            GatePack::CaSpkiPublicKey => Stage::SpkiPublicKey,
            GatePack::ImportPrivateKey => Stage::PrivateKeyImport,
        }
    }

    pub fn for_stage(stage: Stage) -> GatePack {
        match stage {
            Stage::CertificateProfile => GatePack::CaCertificateProfile,
            Stage::SpkiPublicKey => GatePack::CaSpkiPublicKey,
            Stage::PrivateKeyImport => GatePack::ImportPrivateKey,
        }
    }
}

impl FromStr for GatePack {
    type Err = String;

    fn from_str(s: &str) -> Result<GatePack, String> {
        GatePack::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown gate pack {s:?} (ca-certificate-profile, ca-spki-public-key, import-private-key)"
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DetectorKind {
    #[serde(rename = "structural")]
    Structural,
    #[serde(rename = "policy")]
    Policy,
    #[serde(rename = "import-crypto")]
    ImportCrypto,
}

impl DetectorKind {
    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Structural => "structural",
            DetectorKind::Policy => "policy",
            DetectorKind::ImportCrypto => "import-crypto",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NormativeStrength {
    #[serde(rename = "must")]
    Must,
    #[serde(rename = "should")]
    Should,
}

impl NormativeStrength {
    pub fn name(self) -> &'static str {
        match self {
            NormativeStrength::Must => "must",
            NormativeStrength::Should => "should",
        }
    }
}

/// Fault families, used both to classify registry records and to label the
/// fault a mutated corpus artifact injects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FaultFamily {
    #[serde(rename = "encoding/container")]
    EncodingContainer,
    #[serde(rename = "size/shape")]
    SizeShape,
    #[serde(rename = "inter-field-consistency")]
    InterFieldConsistency,
    #[serde(rename = "profile/usage-policy")]
    ProfileUsagePolicy,
    #[serde(rename = "field-domain")]
    FieldDomain,
    #[serde(rename = "algorithm-policy")]
    AlgorithmPolicy,
    #[serde(rename = "import-validation")]
    ImportValidation,
}

impl FaultFamily {
    pub const ALL: [FaultFamily; 7] = [
        FaultFamily::EncodingContainer,
        FaultFamily::SizeShape,
        FaultFamily::InterFieldConsistency,
        FaultFamily::ProfileUsagePolicy,
        FaultFamily::FieldDomain,
        FaultFamily::AlgorithmPolicy,
        FaultFamily::ImportValidation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FaultFamily::EncodingContainer => "encoding/container",
            FaultFamily::SizeShape => "size/shape",
            FaultFamily::InterFieldConsistency => "inter-field-consistency",
            FaultFamily::ProfileUsagePolicy => "profile/usage-policy",
            FaultFamily::FieldDomain => "field-domain",
            FaultFamily::AlgorithmPolicy => "algorithm-policy",
            FaultFamily::ImportValidation => "import-validation",
        }
    }
}

/// Requirement identifiers, spelled once.
pub mod ids {
    pub const MLKEM_CERT_KU_KEYENCIPHERMENT_ONLY: &str = "MLKEM-CERT-KU-KEYENCIPHERMENT-ONLY";
    pub const MLDSA_CERT_SIGNATURE_AID_PARAMS_ABSENT: &str =
        "MLDSA-CERT-SIGNATURE-AID-PARAMS-ABSENT";
    pub const MLDSA_CERT_KU_AT_LEAST_ONE_SIGNING_BIT: &str =
        "MLDSA-CERT-KU-AT-LEAST-ONE-SIGNING-BIT";
    pub const MLDSA_CERT_KU_NO_ENCIPHERMENT_OR_AGREEMENT: &str =
        "MLDSA-CERT-KU-NO-ENCIPHERMENT-OR-AGREEMENT";
    pub const MLDSA_PKIX_HASHML_FORBIDDEN: &str = "MLDSA-PKIX-HASHML-FORBIDDEN";
    pub const MLKEM_SPKI_AID_PARAMS_ABSENT: &str = "MLKEM-SPKI-AID-PARAMS-ABSENT";
    pub const MLKEM_SPKI_PUBLIC_KEY_LENGTH: &str = "MLKEM-SPKI-PUBLIC-KEY-LENGTH";
    pub const MLKEM_SPKI_ENCODE_DECODE_IDENTITY: &str = "MLKEM-SPKI-ENCODE-DECODE-IDENTITY";
    pub const MLDSA_SPKI_AID_PARAMS_ABSENT: &str = "MLDSA-SPKI-AID-PARAMS-ABSENT";
    pub const MLDSA_SPKI_PUBLIC_KEY_LENGTH: &str = "MLDSA-SPKI-PUBLIC-KEY-LENGTH";
    pub const MLKEM_PRIVATE_SEED_LENGTH: &str = "MLKEM-PRIVATE-SEED-LENGTH";
    pub const MLKEM_PRIVATE_EXPANDED_LENGTH: &str = "MLKEM-PRIVATE-EXPANDED-LENGTH";
    pub const MLKEM_PRIVATE_BOTH_CONSISTENCY: &str = "MLKEM-PRIVATE-BOTH-CONSISTENCY";
    pub const MLKEM_PRIVATE_EXPANDED_HASH_CHECK: &str = "MLKEM-PRIVATE-EXPANDED-HASH-CHECK";
    pub const MLDSA_PRIVATE_SEED_LENGTH: &str = "MLDSA-PRIVATE-SEED-LENGTH";
    pub const MLDSA_PRIVATE_EXPANDED_LENGTH: &str = "MLDSA-PRIVATE-EXPANDED-LENGTH";
    pub const MLDSA_PRIVATE_BOTH_CONSISTENCY: &str = "MLDSA-PRIVATE-BOTH-CONSISTENCY";
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementRecord {
    pub id: String,
    pub algorithm: Family,
    pub artifact_type: ArtifactType,
    pub stage: Stage,
    pub owner: Owner,
    pub gate_pack: GatePack,
    pub fault_family: FaultFamily,
    pub requirement: String,
    pub expected_detector: String,
    pub detector_kind: DetectorKind,
    pub normative_strength: NormativeStrength,
    pub baseline_status: String,
    pub constructibility: String,
    pub mode_action: BTreeMap<Mode, ModeAction>,
    pub severity: String,
    pub source: String,
    pub source_locators: Vec<String>,
    pub justification: String,
}

impl RequirementRecord {
    pub fn action(&self, mode: Mode) -> Option<ModeAction> {
        self.mode_action.get(&mode).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    pub profile: String,
    pub version: String,
    pub requirements: Vec<RequirementRecord>,
}

impl Registry {
    pub fn get(&self, id: &str) -> Option<&RequirementRecord> {
        self.requirements.iter().find(|r| r.id == id)
    }

    pub fn action(&self, id: &str, mode: Mode) -> Option<ModeAction> {
        self.get(id).and_then(|r| r.action(mode))
    }

    /// Requirement ids whose deployable action is warn.
    pub fn warn_set(&self, mode: Mode) -> BTreeSet<String> {
        self.requirements
            .iter()
            .filter(|r| r.action(mode) == Some(ModeAction::Warn))
            .map(|r| r.id.clone())
            .collect()
    }

    pub fn records_in_pack(&self, pack: GatePack) -> Vec<&RequirementRecord> {
        self.requirements
            .iter()
            .filter(|r| r.gate_pack == pack)
            .collect()
    }
}

pub fn load_registry(path: &Path) -> Result<Registry, RegistryError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn save_registry(registry: &Registry, path: &Path) -> Result<(), RegistryError> {
    let mut sorted = registry.clone();
    sorted.requirements.sort_by(|a, b| a.id.cmp(&b.id));
    let value = serde_json::to_value(&sorted)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// One failed registry check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegistryViolation {
    pub kind: String,
    pub record_id: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<RegistryViolation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn violation(kind: &str, record_id: Option<&str>, detail: String) -> RegistryViolation {
    RegistryViolation {
        kind: kind.to_string(),
        record_id: record_id.map(str::to_string),
        detail,
    }
}

/// Checks the frozen `pkix-core` topology. Any violation means the registry
/// must not drive an evaluation.
pub fn validate_registry(registry: &Registry) -> ValidationReport {
    let mut v = Vec::new();

    if registry.profile != "pkix-core" {
        v.push(violation(
            "profile-violation",
            None,
            format!("profile is {:?}, expected \"pkix-core\"", registry.profile),
        ));
    }
    if registry.requirements.len() != 17 {
        v.push(violation(
            "count-violation",
            None,
            format!("{} records, expected 17", registry.requirements.len()),
        ));
    }

    let mut seen = BTreeSet::new();
    for r in &registry.requirements {
        let id = r.id.as_str();
        if !seen.insert(id.to_string()) {
            v.push(violation("duplicate-id", Some(id), "id appears twice".into()));
        }
        if r.gate_pack.owner() != r.owner || r.gate_pack.stage() != r.stage {
            v.push(violation(
                "topology-violation",
                Some(id),
                format!(
                    "gate pack {} binds owner {} and stage {}, record says {} / {}",
                    r.gate_pack.name(),
                    r.gate_pack.owner().name(),
                    r.gate_pack.stage().name(),
                    r.owner.name(),
                    r.stage.name()
                ),
            ));
        }
        if r.stage.artifact_type() != r.artifact_type {
            v.push(violation(
                "topology-violation",
                Some(id),
                format!(
                    "stage {} checks {} artifacts, record says {}",
                    r.stage.name(),
                    r.stage.artifact_type().name(),
                    r.artifact_type.name()
                ),
            ));
        }
        let expected_prefix = match r.algorithm {
            Family::MlKem => "MLKEM-",
            Family::MlDsa => "MLDSA-",
            Family::HashMlDsa => "",
        };
        if expected_prefix.is_empty() || !id.starts_with(expected_prefix) {
            v.push(violation(
                "algorithm-violation",
                Some(id),
                format!("id does not match algorithm {}", r.algorithm),
            ));
        }
        for mode in Mode::ALL {
            if r.action(mode).is_none() {
                v.push(violation(
                    "missing-mode-action",
                    Some(id),
                    format!("no action for mode {mode}"),
                ));
            }
        }
        if r.action(Mode::Strict) == Some(ModeAction::Warn) {
            v.push(violation(
                "strict-action-violation",
                Some(id),
                "strict mode never warns in this profile".into(),
            ));
        }
        // Deployable may relax strict, never tighten it.
        if let (Some(s), Some(d)) = (r.action(Mode::Strict), r.action(Mode::Deployable)) {
            if d > s {
                v.push(violation(
                    "mode-monotonicity",
                    Some(id),
                    "deployable action is stricter than strict action".into(),
                ));
            }
        }
        if r.constructibility != "covered" {
            v.push(violation(
                "constructibility-violation",
                Some(id),
                format!("constructibility is {:?}, expected \"covered\"", r.constructibility),
            ));
        }
        for (field, value) in [
            ("requirement", &r.requirement),
            ("expected_detector", &r.expected_detector),
            ("baseline_status", &r.baseline_status),
            ("severity", &r.severity),
            ("source", &r.source),
            ("justification", &r.justification),
        ] {
            if value.trim().is_empty() {
                v.push(violation(
                    "empty-field",
                    Some(id),
                    format!("{field} must be non-empty"),
                ));
            }
        }
        if r.source_locators.is_empty() {
            v.push(violation(
                "empty-field",
                Some(id),
                "source_locators must be non-empty".into(),
            ));
        }
    }

    // Aggregate partition counts; only meaningful on a full-size registry.
    if registry.requirements.len() == 17 {
        let count = |f: &dyn Fn(&RequirementRecord) -> bool| {
            registry.requirements.iter().filter(|r| f(r)).count()
        };
        let checks: [(&str, usize, usize); 10] = [
            (
                "owner ca-preissuance",
                count(&|r| r.owner == Owner::CaPreissuance),
                10,
            ),
            (
                "owner artifact-importer",
                count(&|r| r.owner == Owner::ArtifactImporter),
                7,
            ),
            (
                "pack ca-certificate-profile",
                count(&|r| r.gate_pack == GatePack::CaCertificateProfile),
                5,
            ),
            (
                "pack ca-spki-public-key",
                count(&|r| r.gate_pack == GatePack::CaSpkiPublicKey),
                5,
            ),
            (
                "pack import-private-key",
                count(&|r| r.gate_pack == GatePack::ImportPrivateKey),
                7,
            ),
            (
                "kind structural",
                count(&|r| r.detector_kind == DetectorKind::Structural),
                10,
            ),
            (
                "kind policy",
                count(&|r| r.detector_kind == DetectorKind::Policy),
                4,
            ),
            (
                "kind import-crypto",
                count(&|r| r.detector_kind == DetectorKind::ImportCrypto),
                3,
            ),
            (
                "strength must",
                count(&|r| r.normative_strength == NormativeStrength::Must),
                15,
            ),
            (
                "strength should",
                count(&|r| r.normative_strength == NormativeStrength::Should),
                2,
            ),
        ];
        for (label, actual, expected) in checks {
            if actual != expected {
                v.push(violation(
                    "partition-violation",
                    None,
                    format!("{label}: {actual} records, expected {expected}"),
                ));
            }
        }
        let warn_ids = registry.warn_set(Mode::Deployable);
        let expected_warn: BTreeSet<String> =
            [ids::MLKEM_SPKI_ENCODE_DECODE_IDENTITY.to_string()].into();
        if warn_ids != expected_warn {
            v.push(violation(
                "warn-set-violation",
                None,
                format!(
                    "deployable warn set is {:?}, expected exactly {:?}",
                    warn_ids, expected_warn
                ),
            ));
        }
    }

    ValidationReport { violations: v }
}

struct RecordSpec {
    id: &'static str,
    algorithm: Family,
    gate_pack: GatePack,
    fault_family: FaultFamily,
    requirement: &'static str,
    expected_detector: &'static str,
    detector_kind: DetectorKind,
    normative_strength: NormativeStrength,
    baseline_status: &'static str,
    deployable_action: ModeAction,
    severity: &'static str,
    source: &'static str,
    source_locators: &'static [&'static str],
    justification: &'static str,
}

fn build(spec: RecordSpec) -> RequirementRecord {
    let stage = spec.gate_pack.stage();
    RequirementRecord {
        id: spec.id.to_string(),
        algorithm: spec.algorithm,
        artifact_type: stage.artifact_type(),
        stage,
        owner: spec.gate_pack.owner(),
        gate_pack: spec.gate_pack,
        fault_family: spec.fault_family,
        requirement: spec.requirement.to_string(),
        expected_detector: spec.expected_detector.to_string(),
        detector_kind: spec.detector_kind,
        normative_strength: spec.normative_strength,
        baseline_status: spec.baseline_status.to_string(),
        constructibility: "covered".to_string(),
        mode_action: [
            (Mode::Strict, ModeAction::Block),
            (Mode::Deployable, spec.deployable_action),
        ]
        .into_iter()
        .collect(),
        severity: spec.severity.to_string(),
        source: spec.source.to_string(),
        source_locators: spec.source_locators.iter().map(|s| s.to_string()).collect(),
        justification: spec.justification.to_string(),
    }
}

/// The compiled-in `pkix-core` registry, 17 records, sorted by id.
pub fn builtin_registry() -> Registry {
    use DetectorKind::*;
    use FaultFamily::*;
    use GatePack::*;
    use ModeAction::*;
    use NormativeStrength::*;

    let specs = vec![
        RecordSpec {
            id: ids::MLKEM_CERT_KU_KEYENCIPHERMENT_ONLY,
            algorithm: Family::MlKem,
            gate_pack: CaCertificateProfile,
            fault_family: ProfileUsagePolicy,
            requirement: "A certificate for an ML-KEM subject key that includes the keyUsage \
                          extension must assert exactly the keyEncipherment bit and nothing else.",
            expected_detector: "cert-keyusage-mlkem-exact-set",
            detector_kind: Policy,
            normative_strength: Must,
            baseline_status: "incomplete",
            deployable_action: Block,
            severity: "high",
            source: "RFC 9935",
            source_locators: &["RFC 9935, key usage rules for ML-KEM certificates"],
            justification: "An encapsulation-only key advertising signing or agreement bits \
                            invites cross-purpose use; issuance is the last point where the \
                            profile can refuse such a certificate.",
        },
        RecordSpec {
            id: ids::MLDSA_CERT_SIGNATURE_AID_PARAMS_ABSENT,
            algorithm: Family::MlDsa,
            gate_pack: CaCertificateProfile,
            fault_family: EncodingContainer,
            requirement: "Both signature AlgorithmIdentifiers of an ML-DSA-signed certificate \
                          (tbsCertificate.signature and the outer signatureAlgorithm) must omit \
                          the parameters field entirely.",
            expected_detector: "cert-signature-aid-params-absent",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "partial",
            deployable_action: Block,
            severity: "high",
            source: "RFC 9881",
            source_locators: &["RFC 9881, AlgorithmIdentifier encoding for ML-DSA signatures"],
            justification: "A NULL or any other parameters payload changes the signed bytes and \
                            splits verifiers on acceptance; absence is the only interoperable \
                            encoding.",
        },
        RecordSpec {
            id: ids::MLDSA_CERT_KU_AT_LEAST_ONE_SIGNING_BIT,
            algorithm: Family::MlDsa,
            gate_pack: CaCertificateProfile,
            fault_family: ProfileUsagePolicy,
            requirement: "A certificate for an ML-DSA subject key that includes the keyUsage \
                          extension must assert at least one of digitalSignature, nonRepudiation, \
                          keyCertSign or cRLSign.",
            expected_detector: "cert-keyusage-mldsa-signing-bit",
            detector_kind: Policy,
            normative_strength: Must,
            baseline_status: "incomplete",
            deployable_action: Block,
            severity: "high",
            source: "RFC 9881",
            source_locators: &["RFC 9881, key usage rules for ML-DSA certificates"],
            justification: "A signature key whose certificate grants no signing usage is \
                            unusable as issued and signals a mis-profiled request.",
        },
        RecordSpec {
            id: ids::MLDSA_CERT_KU_NO_ENCIPHERMENT_OR_AGREEMENT,
            algorithm: Family::MlDsa,
            gate_pack: CaCertificateProfile,
            fault_family: ProfileUsagePolicy,
            requirement: "A certificate for an ML-DSA subject key must not assert \
                          keyEncipherment, dataEncipherment, keyAgreement, encipherOnly or \
                          decipherOnly.",
            expected_detector: "cert-keyusage-mldsa-prohibited-bits",
            detector_kind: Policy,
            normative_strength: Must,
            baseline_status: "covered-for-prohibited-bits",
            deployable_action: Block,
            severity: "high",
            source: "RFC 9881",
            source_locators: &["RFC 9881, key usage rules for ML-DSA certificates"],
            justification: "Encipherment and agreement bits promise operations an ML-DSA key \
                            cannot perform; relying parties must never be told otherwise.",
        },
        RecordSpec {
            id: ids::MLDSA_PKIX_HASHML_FORBIDDEN,
            algorithm: Family::MlDsa,
            gate_pack: CaCertificateProfile,
            fault_family: AlgorithmPolicy,
            requirement: "Pre-hash (HashML-DSA) algorithm identifiers must not appear as \
                          certificate signature algorithms; only pure ML-DSA identifiers are \
                          acceptable in this profile.",
            expected_detector: "cert-hashmldsa-oid-forbidden",
            detector_kind: Policy,
            normative_strength: Must,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "high",
            source: "RFC 9881",
            source_locators: &["RFC 9881, prohibition of pre-hash identifiers in PKIX signatures"],
            justification: "Pre-hash identifiers weaken the binding between message and \
                            signature domain; the certificate profile admits only the pure \
                            variants.",
        },
        RecordSpec {
            id: ids::MLKEM_SPKI_AID_PARAMS_ABSENT,
            algorithm: Family::MlKem,
            gate_pack: CaSpkiPublicKey,
            fault_family: EncodingContainer,
            requirement: "An ML-KEM SubjectPublicKeyInfo AlgorithmIdentifier must carry the \
                          parameter-set OID with the parameters field absent.",
            expected_detector: "spki-aid-params-absent",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "partial",
            deployable_action: Block,
            severity: "high",
            source: "RFC 9935",
            source_locators: &["RFC 9935, SubjectPublicKeyInfo encoding for ML-KEM"],
            justification: "Parameters in the AlgorithmIdentifier create two encodings of the \
                            same key and break byte-exact SPKI comparison downstream.",
        },
        RecordSpec {
            id: ids::MLKEM_SPKI_PUBLIC_KEY_LENGTH,
            algorithm: Family::MlKem,
            gate_pack: CaSpkiPublicKey,
            fault_family: SizeShape,
            requirement: "The subjectPublicKey payload of an ML-KEM SubjectPublicKeyInfo must be \
                          exactly the encapsulation-key length of the parameter set named by its \
                          OID: 800, 1184 or 1568 bytes.",
            expected_detector: "spki-public-key-length",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "covered-for-encoded-key",
            deployable_action: Block,
            severity: "high",
            source: "FIPS 203",
            source_locators: &[
                "FIPS 203, encapsulation key sizes",
                "RFC 9935, SubjectPublicKeyInfo encoding for ML-KEM",
            ],
            justification: "A key of the wrong length cannot be the claimed parameter set; the \
                            mismatch is detectable before any use of the key.",
        },
        RecordSpec {
            id: ids::MLKEM_SPKI_ENCODE_DECODE_IDENTITY,
            algorithm: Family::MlKem,
            gate_pack: CaSpkiPublicKey,
            fault_family: FieldDomain,
            requirement: "Every 12-bit coefficient lane of an encoded ML-KEM encapsulation key \
                          must hold a value reduced mod q = 3329, so decoding and re-encoding \
                          the key reproduces its bytes exactly.",
            expected_detector: "spki-mlkem-canonicality",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "covered-by-external-lint-path",
            deployable_action: Warn,
            severity: "medium",
            source: "FIPS 203",
            source_locators: &["FIPS 203, ByteEncode/ByteDecode coefficient domain"],
            justification: "Unreduced lanes make the byte encoding non-canonical: two distinct \
                            byte strings denote one key, which breaks caching, pinning and \
                            signature-input stability. Deployable mode downgrades to warn \
                            because fielded encoders have shipped such keys and the defect is \
                            recoverable by re-encoding.",
        },
        RecordSpec {
            id: ids::MLDSA_SPKI_AID_PARAMS_ABSENT,
            algorithm: Family::MlDsa,
            gate_pack: CaSpkiPublicKey,
            fault_family: EncodingContainer,
            requirement: "An ML-DSA SubjectPublicKeyInfo AlgorithmIdentifier must carry the \
                          parameter-set OID with the parameters field absent.",
            expected_detector: "spki-aid-params-absent",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "partial",
            deployable_action: Block,
            severity: "high",
            source: "RFC 9881",
            source_locators: &["RFC 9881, SubjectPublicKeyInfo encoding for ML-DSA"],
            justification: "Parameters in the AlgorithmIdentifier create two encodings of the \
                            same key and break byte-exact SPKI comparison downstream.",
        },
        RecordSpec {
            id: ids::MLDSA_SPKI_PUBLIC_KEY_LENGTH,
            algorithm: Family::MlDsa,
            gate_pack: CaSpkiPublicKey,
            fault_family: SizeShape,
            requirement: "The subjectPublicKey payload of an ML-DSA SubjectPublicKeyInfo must be \
                          exactly the public-key length of the parameter set named by its OID: \
                          1312, 1952 or 2592 bytes.",
            expected_detector: "spki-public-key-length",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "gap-or-unverified",
            deployable_action: Block,
            severity: "high",
            source: "FIPS 204",
            source_locators: &[
                "FIPS 204, public key sizes",
                "RFC 9881, SubjectPublicKeyInfo encoding for ML-DSA",
            ],
            justification: "A key of the wrong length cannot be the claimed parameter set; the \
                            mismatch is detectable before any use of the key.",
        },
        RecordSpec {
            id: ids::MLKEM_PRIVATE_SEED_LENGTH,
            algorithm: Family::MlKem,
            gate_pack: ImportPrivateKey,
            fault_family: SizeShape,
            requirement: "A seed-form ML-KEM private key must be exactly 64 bytes: the 32-byte d \
                          seed followed by the 32-byte z rejection secret.",
            expected_detector: "private-seed-length",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "high",
            source: "FIPS 203",
            source_locators: &[
                "FIPS 203, key generation inputs",
                "RFC 9935, private key encoding for ML-KEM",
            ],
            justification: "A truncated or padded seed silently changes every derived key; the \
                            importer is the only boundary that still sees the seed bytes.",
        },
        RecordSpec {
            id: ids::MLKEM_PRIVATE_EXPANDED_LENGTH,
            algorithm: Family::MlKem,
            gate_pack: ImportPrivateKey,
            fault_family: SizeShape,
            requirement: "An expanded-form ML-KEM private key must be exactly the decapsulation \
                          key length of its parameter set: 1632, 2400 or 3168 bytes.",
            expected_detector: "private-expanded-length",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "high",
            source: "FIPS 203",
            source_locators: &[
                "FIPS 203, decapsulation key sizes",
                "RFC 9935, private key encoding for ML-KEM",
            ],
            justification: "The expanded layout is position-coded; any length error shifts the \
                            embedded key, hash and secret segments against each other.",
        },
        RecordSpec {
            id: ids::MLKEM_PRIVATE_BOTH_CONSISTENCY,
            algorithm: Family::MlKem,
            gate_pack: ImportPrivateKey,
            fault_family: InterFieldConsistency,
            requirement: "When a both-form ML-KEM private key carries seed and expanded bytes, \
                          the expanded key should equal the deterministic expansion of the seed.",
            expected_detector: "private-both-consistency",
            detector_kind: ImportCrypto,
            normative_strength: Should,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "medium",
            source: "RFC 9935",
            source_locators: &["RFC 9935, both-form private key semantics"],
            justification: "A both-form container whose halves disagree will behave differently \
                            depending on which half an implementation prefers; importers should \
                            refuse the ambiguity.",
        },
        RecordSpec {
            id: ids::MLKEM_PRIVATE_EXPANDED_HASH_CHECK,
            algorithm: Family::MlKem,
            gate_pack: ImportPrivateKey,
            fault_family: ImportValidation,
            requirement: "The stored H(ek) segment of an expanded ML-KEM private key must equal \
                          SHA3-256 of the embedded encapsulation key.",
            expected_detector: "private-expanded-hash",
            detector_kind: ImportCrypto,
            normative_strength: Must,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "high",
            source: "FIPS 203",
            source_locators: &["FIPS 203, decapsulation key layout and hash binding"],
            justification: "The hash segment is the decapsulator's integrity anchor for the \
                            public half; importing a key with a broken binding bakes an \
                            implicit-rejection fault into every later decapsulation.",
        },
        RecordSpec {
            id: ids::MLDSA_PRIVATE_SEED_LENGTH,
            algorithm: Family::MlDsa,
            gate_pack: ImportPrivateKey,
            fault_family: SizeShape,
            requirement: "A seed-form ML-DSA private key must be exactly 32 bytes.",
            expected_detector: "private-seed-length",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "high",
            source: "FIPS 204",
            source_locators: &[
                "FIPS 204, key generation inputs",
                "RFC 9881, private key encoding for ML-DSA",
            ],
            justification: "A truncated or padded seed silently changes every derived key; the \
                            importer is the only boundary that still sees the seed bytes.",
        },
        RecordSpec {
            id: ids::MLDSA_PRIVATE_EXPANDED_LENGTH,
            algorithm: Family::MlDsa,
            gate_pack: ImportPrivateKey,
            fault_family: SizeShape,
            requirement: "An expanded-form ML-DSA private key must be exactly the private key \
                          length of its parameter set: 2560, 4032 or 4896 bytes.",
            expected_detector: "private-expanded-length",
            detector_kind: Structural,
            normative_strength: Must,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "high",
            source: "FIPS 204",
            source_locators: &[
                "FIPS 204, private key sizes",
                "RFC 9881, private key encoding for ML-DSA",
            ],
            justification: "The expanded layout is position-coded; any length error shifts the \
                            packed polynomial segments against each other.",
        },
        RecordSpec {
            id: ids::MLDSA_PRIVATE_BOTH_CONSISTENCY,
            algorithm: Family::MlDsa,
            gate_pack: ImportPrivateKey,
            fault_family: InterFieldConsistency,
            requirement: "When a both-form ML-DSA private key carries seed and expanded bytes, \
                          the expanded key should equal the deterministic expansion of the seed.",
            expected_detector: "private-both-consistency",
            detector_kind: ImportCrypto,
            normative_strength: Should,
            baseline_status: "gap",
            deployable_action: Block,
            severity: "medium",
            source: "RFC 9881",
            source_locators: &["RFC 9881, both-form private key semantics"],
            justification: "A both-form container whose halves disagree will behave differently \
                            depending on which half an implementation prefers; importers should \
                            refuse the ambiguity.",
        },
    ];

    let mut requirements: Vec<RequirementRecord> = specs.into_iter().map(build).collect();
    requirements.sort_by(|a, b| a.id.cmp(&b.id));
    Registry {
        profile: "pkix-core".to_string(),
        version: "1.0.0".to_string(),
        requirements,
    }
}
