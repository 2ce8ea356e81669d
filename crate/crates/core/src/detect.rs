//! The 17 executable checks. Detectors take parsed views plus the active
//! registry and produce requirement-tagged findings; a rule whose id is not
//! in the registry stays silent, so a trimmed registry trims detection.
//!
//! Ordering and suppression are fixed: certificate checks run hash-ban,
//! signature parameters, keyUsage, then embedded SPKI; a wrong-length key
//! suppresses canonicality; a wrong-length component suppresses the
//! seed/expanded consistency call. Structural defects never cascade into
//! secondary findings.

use crate::mlkem::{check_ek_canonical, check_expanded_hash, CanonicalityVerdict, HashVerdict};
use crate::pkix::{
    key_usage, CertificateView, Family, KeyUsagePresence, ParameterSet,
    PrivateKeyContainerView, PrivateKeyForm, SpkiView,
};
use crate::registry::{ids, DetectorKind, Registry};
use crate::substrate::{Substrate, SubstrateVerdict};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DetectError {
    /// The consistency substrate was needed but could not deliver a
    /// verdict. Surfaces as an evaluation error, never as a pass.
    #[error("consistency substrate unavailable: {detail}")]
    SubstrateUnavailable { detail: String },
}

/// One requirement-tagged defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub requirement_id: String,
    pub detector_kind: DetectorKind,
    /// Field-path label of the offending bytes.
    pub locus: String,
    pub detail: String,
}

/// Ordered findings for one artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetectionResult {
    pub artifact_id: String,
    pub findings: Vec<Finding>,
}

impl DetectionResult {
    pub fn unique_requirements(&self) -> BTreeSet<&str> {
        self.findings
            .iter()
            .map(|f| f.requirement_id.as_str())
            .collect()
    }

    pub fn first_hit(&self) -> Option<&str> {
        self.findings.first().map(|f| f.requirement_id.as_str())
    }

    /// Finding instances beyond the first per requirement.
    pub fn redundant_count(&self) -> usize {
        self.findings.len() - self.unique_requirements().len()
    }
}

/// Collects findings, consulting the registry for each id: unknown ids are
/// dropped, known ones carry the record's detector kind.
struct Sink<'r> {
    registry: &'r Registry,
    findings: Vec<Finding>,
}

impl<'r> Sink<'r> {
    fn new(registry: &'r Registry) -> Self {
        Sink {
            registry,
            findings: Vec::new(),
        }
    }

    fn push(&mut self, id: &str, locus: &str, detail: String) {
        if let Some(record) = self.registry.get(id) {
            self.findings.push(Finding {
                requirement_id: id.to_string(),
                detector_kind: record.detector_kind,
                locus: locus.to_string(),
                detail,
            });
        }
    }

    fn into_result(self, artifact_id: &str) -> DetectionResult {
        DetectionResult {
            artifact_id: artifact_id.to_string(),
            findings: self.findings,
        }
    }
}

fn spki_checks(spki: &SpkiView, sink: &mut Sink) {
    // Parameter absence, scoped to the resolved family.
    if let Some(family) = spki.algorithm.family() {
        let params_id = match family {
            Family::MlKem => Some(ids::MLKEM_SPKI_AID_PARAMS_ABSENT),
            Family::MlDsa => Some(ids::MLDSA_SPKI_AID_PARAMS_ABSENT),
            Family::HashMlDsa => None,
        };
        if let (Some(id), false) = (params_id, spki.algorithm.params.is_absent()) {
            sink.push(
                id,
                "spki.algorithm.parameters",
                format!(
                    "AlgorithmIdentifier parameters {}; the profile requires the field to be absent",
                    spki.algorithm.params.describe()
                ),
            );
        }
    }

    // Payload length against the catalog, then canonicality for ML-KEM.
    let Some(set) = spki.algorithm.parameter_set() else {
        return;
    };
    let expected = set.public_key_len();
    if spki.public_key.len() != expected {
        let id = match set.family() {
            Family::MlKem => ids::MLKEM_SPKI_PUBLIC_KEY_LENGTH,
            _ => ids::MLDSA_SPKI_PUBLIC_KEY_LENGTH,
        };
        sink.push(
            id,
            "spki.subjectPublicKey",
            format!(
                "public key is {} bytes; {} requires {expected}",
                spki.public_key.len(),
                set.name()
            ),
        );
        // A wrong-size key has no well-defined lanes to decode.
        return;
    }
    if let Some(layout) = set.mlkem_layout() {
        match check_ek_canonical(&spki.public_key, layout).expect("length checked above") {
            CanonicalityVerdict::Canonical => {}
            CanonicalityVerdict::NonCanonical {
                first_index,
                violations,
            } => sink.push(
                ids::MLKEM_SPKI_ENCODE_DECODE_IDENTITY,
                "spki.subjectPublicKey",
                format!(
                    "encoded key does not round-trip: {violations} coefficient lane(s) >= q, first at index {first_index}"
                ),
            ),
        }
    }
}

/// SPKI checks for a standalone public-key artifact.
pub fn detect_spki(artifact_id: &str, spki: &SpkiView, registry: &Registry) -> DetectionResult {
    let mut sink = Sink::new(registry);
    spki_checks(spki, &mut sink);
    sink.into_result(artifact_id)
}

const SIGNING_BITS: [usize; 4] = [
    key_usage::DIGITAL_SIGNATURE,
    key_usage::NON_REPUDIATION,
    key_usage::KEY_CERT_SIGN,
    key_usage::CRL_SIGN,
];

const PROHIBITED_FOR_SIGNING: [usize; 5] = [
    key_usage::KEY_ENCIPHERMENT,
    key_usage::DATA_ENCIPHERMENT,
    key_usage::KEY_AGREEMENT,
    key_usage::ENCIPHER_ONLY,
    key_usage::DECIPHER_ONLY,
];

fn key_usage_describe(view: &crate::pkix::KeyUsageView) -> String {
    if view.set.is_empty() {
        "{}".to_string()
    } else {
        format!("{{{}}}", view.names().join(", "))
    }
}

/// Certificate-profile checks plus the embedded-SPKI checks.
pub fn detect_certificate(
    artifact_id: &str,
    cert: &CertificateView,
    registry: &Registry,
) -> DetectionResult {
    let mut sink = Sink::new(registry);

    // 1. HashML-DSA signature OIDs are out of profile. One finding per
    // certificate even when both loci carry the offending family.
    let hash_loci: Vec<&str> = [&cert.tbs_signature, &cert.outer_signature]
        .into_iter()
        .filter(|aid| aid.family() == Some(Family::HashMlDsa))
        .map(|aid| aid.locus)
        .collect();
    if !hash_loci.is_empty() {
        sink.push(
            ids::MLDSA_PKIX_HASHML_FORBIDDEN,
            &hash_loci.join("+"),
            format!(
                "signature algorithm resolves to the HashML-DSA family at {}",
                hash_loci.join(" and ")
            ),
        );
    }

    // 2. ML-DSA signature AID parameters, one instance per offending locus.
    for aid in [&cert.tbs_signature, &cert.outer_signature] {
        if aid.family() == Some(Family::MlDsa) && !aid.params.is_absent() {
            sink.push(
                ids::MLDSA_CERT_SIGNATURE_AID_PARAMS_ABSENT,
                &format!("{}.parameters", aid.locus),
                format!(
                    "signature AlgorithmIdentifier parameters {}; the profile requires the field to be absent",
                    aid.params.describe()
                ),
            );
        }
    }

    // 3. keyUsage policy, only when the extension is present.
    if let KeyUsagePresence::Present(ku) = &cert.key_usage {
        match cert.spki.algorithm.family() {
            Some(Family::MlKem) => {
                if !ku.is_exactly(&[key_usage::KEY_ENCIPHERMENT]) {
                    sink.push(
                        ids::MLKEM_CERT_KU_KEYENCIPHERMENT_ONLY,
                        "tbs.extensions.keyUsage",
                        format!(
                            "keyUsage is {}; an ML-KEM key requires exactly {{keyEncipherment}}",
                            key_usage_describe(ku)
                        ),
                    );
                }
            }
            Some(Family::MlDsa) => {
                if !ku.any_of(&SIGNING_BITS) {
                    sink.push(
                        ids::MLDSA_CERT_KU_AT_LEAST_ONE_SIGNING_BIT,
                        "tbs.extensions.keyUsage",
                        format!(
                            "keyUsage is {}; an ML-DSA key requires at least one signing-related bit",
                            key_usage_describe(ku)
                        ),
                    );
                }
                let prohibited: Vec<&str> = PROHIBITED_FOR_SIGNING
                    .iter()
                    .filter(|&&b| ku.contains(b))
                    .map(|&b| key_usage::bit_name(b))
                    .collect();
                if !prohibited.is_empty() {
                    sink.push(
                        ids::MLDSA_CERT_KU_NO_ENCIPHERMENT_OR_AGREEMENT,
                        "tbs.extensions.keyUsage",
                        format!(
                            "keyUsage asserts {{{}}}; encipherment and agreement bits are forbidden for ML-DSA keys",
                            prohibited.join(", ")
                        ),
                    );
                }
            }
            _ => {}
        }
    }

    // 4. Embedded SPKI.
    spki_checks(&cert.spki, &mut sink);
    sink.into_result(artifact_id)
}

/// Runs the ML-KEM expanded-key hash check; a mismatch emits both the hash
/// requirement and the seed/expanded consistency requirement, which is the
/// coupling the import gate expects. Returns true when the relation failed.
fn expanded_hash_check(set: ParameterSet, expanded: &[u8], sink: &mut Sink) -> bool {
    let Some(layout) = set.mlkem_layout() else {
        return false;
    };
    match check_expanded_hash(expanded, layout).expect("length checked by caller") {
        HashVerdict::Consistent => false,
        HashVerdict::Mismatch => {
            sink.push(
                ids::MLKEM_PRIVATE_EXPANDED_HASH_CHECK,
                "privateKey.expanded",
                "stored H(ek) segment does not match SHA3-256 of the embedded encapsulation key"
                    .to_string(),
            );
            sink.push(
                ids::MLKEM_PRIVATE_BOTH_CONSISTENCY,
                "privateKey.expanded",
                "hash relation failure implies the expanded key is not internally consistent"
                    .to_string(),
            );
            true
        }
    }
}

fn seed_length_id(family: Family) -> &'static str {
    match family {
        Family::MlKem => ids::MLKEM_PRIVATE_SEED_LENGTH,
        _ => ids::MLDSA_PRIVATE_SEED_LENGTH,
    }
}

fn expanded_length_id(family: Family) -> &'static str {
    match family {
        Family::MlKem => ids::MLKEM_PRIVATE_EXPANDED_LENGTH,
        _ => ids::MLDSA_PRIVATE_EXPANDED_LENGTH,
    }
}

fn consistency_id(family: Family) -> &'static str {
    match family {
        Family::MlKem => ids::MLKEM_PRIVATE_BOTH_CONSISTENCY,
        _ => ids::MLDSA_PRIVATE_BOTH_CONSISTENCY,
    }
}

/// Import-gate checks for a private-key container.
///
/// Both-form consistency needs the substrate; when the substrate cannot
/// answer, the artifact's evaluation fails rather than passing silently.
pub fn detect_private_key(
    artifact_id: &str,
    container: &PrivateKeyContainerView,
    substrate: &Substrate,
    registry: &Registry,
) -> Result<DetectionResult, DetectError> {
    let mut sink = Sink::new(registry);
    let Some(set) = container.algorithm.parameter_set() else {
        return Ok(sink.into_result(artifact_id));
    };
    let family = set.family();

    let check_seed = |seed: &[u8], sink: &mut Sink| -> bool {
        if seed.len() == set.seed_len() {
            return true;
        }
        sink.push(
            seed_length_id(family),
            "privateKey.seed",
            format!(
                "seed is {} bytes; {} requires {}",
                seed.len(),
                set.name(),
                set.seed_len()
            ),
        );
        false
    };
    let check_expanded = |expanded: &[u8], sink: &mut Sink| -> bool {
        if expanded.len() == set.expanded_len() {
            return true;
        }
        sink.push(
            expanded_length_id(family),
            "privateKey.expanded",
            format!(
                "expanded key is {} bytes; {} requires {}",
                expanded.len(),
                set.name(),
                set.expanded_len()
            ),
        );
        false
    };

    match &container.form {
        PrivateKeyForm::Seed(seed) => {
            check_seed(seed, &mut sink);
        }
        PrivateKeyForm::Expanded(expanded) => {
            if check_expanded(expanded, &mut sink) {
                expanded_hash_check(set, expanded, &mut sink);
            }
        }
        PrivateKeyForm::Both { seed, expanded } => {
            let seed_ok = check_seed(seed, &mut sink);
            let expanded_ok = check_expanded(expanded, &mut sink);
            // A wrong-length component leaves nothing meaningful to compare.
            if seed_ok && expanded_ok {
                let hash_failed = expanded_hash_check(set, expanded, &mut sink);
                // The hash verdict already settled consistency; a second,
                // substrate-backed verdict would only duplicate it.
                if !hash_failed {
                    match substrate.check_consistency(set, seed, expanded) {
                        SubstrateVerdict::Consistent => {}
                        SubstrateVerdict::Mismatch => sink.push(
                            consistency_id(family),
                            "privateKey.both",
                            format!(
                                "expanded key does not equal the expansion of the seed (substrate: {})",
                                substrate.describe()
                            ),
                        ),
                        SubstrateVerdict::Failure { detail } => {
                            return Err(DetectError::SubstrateUnavailable { detail });
                        }
                    }
                }
            }
        }
    }
    Ok(sink.into_result(artifact_id))
}
