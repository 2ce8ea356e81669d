//! Deterministic artifact corpus: 21 valid artifacts, 27 mutated ones, and
//! the hashed JSON-lines manifest that ledgers them.
//!
//! Everything is derived from fixed labels through SHAKE256, so two
//! generations into different directories produce byte-identical files.
//! Each mutated artifact is produced by re-encoding an owned DER tree after
//! a targeted edit, which recomputes every enclosing length; mutations
//! corrupt meaning, never TLV framing.
//!
//! The mutation table below is frozen: artifact ids, injected-fault
//! families, mutation tokens and expected-detection sets are data, written
//! into the manifest before any evaluation runs.

use crate::der::{encode_named_bits, encode_tlv, encode_uint_content, parse_tree, Node, Tag};
use crate::fsio::sha256_hex;
use crate::mlkem::Q;
use crate::pem;
use crate::pkix::{algorithm_oid, key_usage, Family, ParameterSet};
use crate::registry::{ids, ArtifactType, FaultFamily, Stage};
use crate::substrate::expand_seed;
use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;
use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest line {line} is not valid JSON: {source}")]
    ManifestJson {
        line: usize,
        source: serde_json::Error,
    },
    #[error("mutation {artifact_id} failed: {detail}")]
    Mutation {
        artifact_id: String,
        detail: String,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Validity {
    #[serde(rename = "valid")]
    Valid,
    #[serde(rename = "invalid")]
    Invalid,
}

/// One corpus-ledger line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub artifact_id: String,
    /// Path relative to the manifest's directory, forward slashes.
    pub path: String,
    pub artifact_type: ArtifactType,
    pub stage: Stage,
    pub algorithm: Family,
    pub parameter_set: ParameterSet,
    pub validity: Validity,
    pub source_note: String,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault_family: Option<FaultFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_tokens: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_detection: Option<Vec<String>>,
}

/// Derives `len` bytes from a corpus label. The version prefix pins the
/// derivation; bumping it regenerates every artifact byte.
fn derive(label: &str, len: usize) -> Vec<u8> {
    let mut hasher = Shake256::default();
    hasher.update(b"pq-assure/corpus/v1/");
    hasher.update(label.as_bytes());
    let mut out = vec![0u8; len];
    hasher.finalize_xof().read(&mut out);
    out
}

// ---------------------------------------------------------------------------
// DER builders for valid artifacts.
// ---------------------------------------------------------------------------

fn aid_node(set: ParameterSet) -> Node {
    Node::sequence(vec![Node::primitive(
        Tag::OBJECT_IDENTIFIER,
        algorithm_oid(set).encode_content(),
    )])
}

fn bit_string_node(payload: &[u8]) -> Node {
    let mut content = vec![0u8];
    content.extend_from_slice(payload);
    Node::primitive(Tag::BIT_STRING, content)
}

/// SubjectPublicKeyInfo with absent parameters.
pub fn spki_der(set: ParameterSet, public_key: &[u8]) -> Vec<u8> {
    Node::sequence(vec![aid_node(set), bit_string_node(public_key)]).encode()
}

fn name_node(common_name: &str) -> Node {
    Node::sequence(vec![Node::constructed(
        Tag::SET,
        vec![Node::sequence(vec![
            Node::primitive(Tag::OBJECT_IDENTIFIER, vec![0x55, 0x04, 0x03]),
            Node::primitive(Tag::UTF8_STRING, common_name.as_bytes().to_vec()),
        ])],
    )])
}

fn utc_time_node(stamp: &str) -> Node {
    Node::primitive(Tag::UTC_TIME, stamp.as_bytes().to_vec())
}

/// Everything a deterministic test certificate needs.
pub struct CertSpec<'a> {
    pub serial: u64,
    pub signature_set: ParameterSet,
    pub subject_set: ParameterSet,
    pub subject_public_key: &'a [u8],
    pub issuer_cn: &'a str,
    pub subject_cn: &'a str,
    /// keyUsage named bits; `None` omits the extension.
    pub key_usage: Option<&'a [usize]>,
    pub signature_filler: &'a [u8],
}

fn key_usage_extension(bits: &[usize]) -> Node {
    let bit_string = encode_tlv(Tag::BIT_STRING, &encode_named_bits(bits));
    Node::sequence(vec![
        Node::primitive(Tag::OBJECT_IDENTIFIER, vec![0x55, 0x1d, 0x0f]),
        Node::primitive(Tag::BOOLEAN, vec![0xff]),
        Node::primitive(Tag::OCTET_STRING, bit_string),
    ])
}

/// A v3 certificate. The signature value is deterministic filler: nothing
/// in this pipeline verifies signatures, only their framing.
pub fn certificate_der(spec: &CertSpec) -> Vec<u8> {
    let mut tbs_children = vec![
        Node::constructed(
            Tag::context_constructed(0),
            vec![Node::primitive(Tag::INTEGER, vec![0x02])],
        ),
        Node::primitive(Tag::INTEGER, encode_uint_content(spec.serial)),
        aid_node(spec.signature_set),
        name_node(spec.issuer_cn),
        Node::sequence(vec![
            utc_time_node("260101000000Z"),
            utc_time_node("280101000000Z"),
        ]),
        name_node(spec.subject_cn),
        Node::sequence(vec![
            aid_node(spec.subject_set),
            bit_string_node(spec.subject_public_key),
        ]),
    ];
    if let Some(bits) = spec.key_usage {
        tbs_children.push(Node::constructed(
            Tag::context_constructed(3),
            vec![Node::sequence(vec![key_usage_extension(bits)])],
        ));
    }
    Node::sequence(vec![
        Node::sequence(tbs_children),
        aid_node(spec.signature_set),
        bit_string_node(spec.signature_filler),
    ])
    .encode()
}

/// Private-key payload forms for the OneAsymmetricKey container.
pub enum KeyForm<'a> {
    Seed(&'a [u8]),
    Expanded(&'a [u8]),
    Both { seed: &'a [u8], expanded: &'a [u8] },
}

/// OneAsymmetricKey with the given CHOICE form.
pub fn private_key_der(set: ParameterSet, form: &KeyForm) -> Vec<u8> {
    let choice = match form {
        KeyForm::Seed(seed) => Node::primitive(Tag::context(0), seed.to_vec()),
        KeyForm::Expanded(expanded) => Node::primitive(Tag::OCTET_STRING, expanded.to_vec()),
        KeyForm::Both { seed, expanded } => Node::sequence(vec![
            Node::primitive(Tag::OCTET_STRING, seed.to_vec()),
            Node::primitive(Tag::OCTET_STRING, expanded.to_vec()),
        ]),
    };
    Node::sequence(vec![
        Node::primitive(Tag::INTEGER, vec![0x00]),
        aid_node(set),
        Node::primitive(Tag::OCTET_STRING, choice.encode()),
    ])
    .encode()
}

// ---------------------------------------------------------------------------
// Valid corpus.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KeyFormKind {
    Seed,
    Expanded,
    Both,
}

struct Subject {
    label: &'static str,
    set: ParameterSet,
    serial: u64,
    signature_set: ParameterSet,
    key_usage: &'static [usize],
    key_form: KeyFormKind,
}

/// The seven key subjects behind the 21 valid artifacts. Each yields a
/// standalone SPKI, a certificate and a private-key container.
const SUBJECTS: [Subject; 7] = [
    Subject {
        label: "mldsa44-ee",
        set: ParameterSet::MlDsa44,
        serial: 1,
        signature_set: ParameterSet::MlDsa44,
        key_usage: &[key_usage::DIGITAL_SIGNATURE],
        key_form: KeyFormKind::Both,
    },
    Subject {
        label: "mldsa65-ca",
        set: ParameterSet::MlDsa65,
        serial: 2,
        signature_set: ParameterSet::MlDsa65,
        key_usage: &[key_usage::KEY_CERT_SIGN, key_usage::CRL_SIGN],
        key_form: KeyFormKind::Seed,
    },
    Subject {
        label: "mldsa65-ee",
        set: ParameterSet::MlDsa65,
        serial: 3,
        signature_set: ParameterSet::MlDsa65,
        key_usage: &[key_usage::DIGITAL_SIGNATURE],
        key_form: KeyFormKind::Expanded,
    },
    Subject {
        label: "mldsa87-ee",
        set: ParameterSet::MlDsa87,
        serial: 4,
        signature_set: ParameterSet::MlDsa87,
        key_usage: &[key_usage::DIGITAL_SIGNATURE],
        key_form: KeyFormKind::Seed,
    },
    Subject {
        label: "mlkem512-ee",
        set: ParameterSet::MlKem512,
        serial: 5,
        signature_set: ParameterSet::MlDsa65,
        key_usage: &[key_usage::KEY_ENCIPHERMENT],
        key_form: KeyFormKind::Both,
    },
    Subject {
        label: "mlkem768-ee",
        set: ParameterSet::MlKem768,
        serial: 6,
        signature_set: ParameterSet::MlDsa65,
        key_usage: &[key_usage::KEY_ENCIPHERMENT],
        key_form: KeyFormKind::Expanded,
    },
    Subject {
        label: "mlkem1024-ee",
        set: ParameterSet::MlKem1024,
        serial: 7,
        signature_set: ParameterSet::MlDsa65,
        key_usage: &[key_usage::KEY_ENCIPHERMENT],
        key_form: KeyFormKind::Seed,
    },
];

/// Deterministic signature filler sized like a real signature of the set.
fn signature_filler_len(set: ParameterSet) -> usize {
    match set {
        ParameterSet::MlDsa44 => 2420,
        ParameterSet::MlDsa65 => 3309,
        ParameterSet::MlDsa87 => 4627,
        _ => unreachable!("only signature sets sign certificates"),
    }
}

/// The subject's public key bytes. ML-KEM keys are sliced out of the
/// structural expansion so their coefficient lanes are reduced; ML-DSA keys
/// are opaque deterministic bytes of the right length.
fn subject_public_key(subject: &Subject, seed: &[u8]) -> Vec<u8> {
    match subject.set.family() {
        Family::MlKem => {
            let layout = subject.set.mlkem_layout().expect("KEM set");
            let dk = expand_seed(subject.set, seed).expect("seed length fixed by table");
            dk[layout.ek_span()].to_vec()
        }
        _ => derive(
            &format!("{}/pk", subject.label),
            subject.set.public_key_len(),
        ),
    }
}

struct ValidArtifact {
    entry: ManifestEntry,
    der: Vec<u8>,
    pem_label: &'static str,
}

fn valid_artifacts() -> Vec<ValidArtifact> {
    let mut out = Vec::new();
    for subject in &SUBJECTS {
        let seed = derive(&format!("{}/seed", subject.label), subject.set.seed_len());
        let public_key = subject_public_key(subject, &seed);
        let expanded = expand_seed(subject.set, &seed).expect("seed length fixed by table");
        let filler = derive(
            &format!("{}/sig", subject.label),
            signature_filler_len(subject.signature_set),
        );

        let spki = spki_der(subject.set, &public_key);
        let cert = certificate_der(&CertSpec {
            serial: subject.serial,
            signature_set: subject.signature_set,
            subject_set: subject.set,
            subject_public_key: &public_key,
            issuer_cn: "PQ Assure Test CA",
            subject_cn: subject.label,
            key_usage: Some(subject.key_usage),
            signature_filler: &filler,
        });
        let key_form = match subject.key_form {
            KeyFormKind::Seed => KeyForm::Seed(&seed),
            KeyFormKind::Expanded => KeyForm::Expanded(&expanded),
            KeyFormKind::Both => KeyForm::Both {
                seed: &seed,
                expanded: &expanded,
            },
        };
        let key = private_key_der(subject.set, &key_form);

        for (role, der, pem_label, artifact_type, stage) in [
            (
                "pub",
                spki,
                pem::LABEL_PUBLIC_KEY,
                ArtifactType::Spki,
                Stage::SpkiPublicKey,
            ),
            (
                "cert",
                cert,
                pem::LABEL_CERTIFICATE,
                ArtifactType::Certificate,
                Stage::CertificateProfile,
            ),
            (
                "key",
                key,
                pem::LABEL_PRIVATE_KEY,
                ArtifactType::PrivateKeyContainer,
                Stage::PrivateKeyImport,
            ),
        ] {
            let artifact_id = format!("openssl-{}-{role}", subject.label);
            let file = format!("valid/openssl/{}.pem", artifact_id.replace('-', "_"));
            let pem_text = pem::encode_pem(pem_label, &der);
            out.push(ValidArtifact {
                entry: ManifestEntry {
                    artifact_id,
                    path: file,
                    artifact_type,
                    stage,
                    algorithm: subject.set.family(),
                    parameter_set: subject.set,
                    validity: Validity::Valid,
                    source_note: format!(
                        "deterministic synthesis, subject {}",
                        subject.label
                    ),
                    sha256: sha256_hex(pem_text.as_bytes()),
                    fault_family: None,
                    mutation_tokens: None,
                    expected_detection: None,
                },
                der,
                pem_label,
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Mutations.
// ---------------------------------------------------------------------------

/// A targeted DER edit. Every operator edits the owned tree and re-encodes,
/// so enclosing lengths are always recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationOp {
    /// Insert NULL parameters into the SPKI AlgorithmIdentifier.
    SpkiAidParamsNull,
    /// Insert OCTET STRING parameters into the SPKI AlgorithmIdentifier.
    SpkiAidParamsOctet,
    /// Insert NULL parameters into both certificate signature
    /// AlgorithmIdentifiers.
    CertSignatureAidParamsNull,
    /// Insert OCTET STRING parameters into both certificate signature
    /// AlgorithmIdentifiers.
    CertSignatureAidParamsOctet,
    /// Swap both certificate signature OIDs to their pre-hash counterparts.
    CertSignatureHashMlDsa,
    /// Drop the last byte of the SPKI public-key payload.
    SpkiPayloadTruncate,
    /// Zero-pad the SPKI public-key payload to the given length.
    SpkiPayloadExtendTo(usize),
    /// Rewrite the SPKI algorithm OID; the payload is untouched.
    SpkiOidRewrite(ParameterSet),
    /// Replace the keyUsage bit set.
    KeyUsageRewrite(&'static [usize]),
    /// Rewrite coefficient lane 0 of an ML-KEM key to 4095 (>= q).
    MlKemUnreducedLane,
    /// Drop the last byte of the seed component.
    PrivateSeedTruncate,
    /// Drop the last byte of the expanded component.
    PrivateExpandedTruncate,
    /// XOR 0x01 into one byte of the expanded component.
    PrivateExpandedFlipByte(usize),
}

/// One frozen mutation-ledger row.
pub struct MutationSpec {
    pub artifact_id: &'static str,
    pub parent_id: &'static str,
    pub operator: MutationOp,
    pub stage: Stage,
    pub artifact_type: ArtifactType,
    pub fault_family: FaultFamily,
    pub mutation_tokens: &'static [&'static str],
    pub expected_detection: &'static [&'static str],
    /// Post-mutation parameter set for the manifest; OID rewrites change
    /// what the artifact claims to be.
    pub set_override: Option<ParameterSet>,
}

/// The 27 invalid artifacts. Order here is presentation order; the manifest
/// is sorted by artifact id.
pub fn mutation_specs() -> &'static [MutationSpec] {
    use ArtifactType::*;
    use FaultFamily::*;
    use MutationOp::*;
    use Stage::*;

    const SPECS: &[MutationSpec] = &[
        // --- SPKI/public-key stage: raw SPKI artifacts ---
        MutationSpec {
            artifact_id: "der-mut-mldsa44-spki-oid-swapped-to-mldsa65-pub",
            parent_id: "openssl-mldsa44-ee-pub",
            operator: SpkiOidRewrite(ParameterSet::MlDsa65),
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: InterFieldConsistency,
            mutation_tokens: &["spki-oid-length-mismatch"],
            expected_detection: &[ids::MLDSA_SPKI_PUBLIC_KEY_LENGTH],
            set_override: Some(ParameterSet::MlDsa65),
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa65-spki-aid-null-pub",
            parent_id: "openssl-mldsa65-ee-pub",
            operator: SpkiAidParamsNull,
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: EncodingContainer,
            mutation_tokens: &["aid-parameters-null"],
            expected_detection: &[ids::MLDSA_SPKI_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa65-spki-aid-octet-params-pub",
            parent_id: "openssl-mldsa65-ee-pub",
            operator: SpkiAidParamsOctet,
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: EncodingContainer,
            mutation_tokens: &["aid-parameters-present-non-null"],
            expected_detection: &[ids::MLDSA_SPKI_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa87-spki-payload-2602-pub",
            parent_id: "openssl-mldsa87-ee-pub",
            operator: SpkiPayloadExtendTo(2602),
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: SizeShape,
            mutation_tokens: &[
                "spki-public-key-extend",
                "rfc9881-appendix-size-transcription-2602",
            ],
            expected_detection: &[ids::MLDSA_SPKI_PUBLIC_KEY_LENGTH],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa65-spki-oid-swapped-to-mlkem768-pub",
            parent_id: "openssl-mldsa65-ee-pub",
            operator: SpkiOidRewrite(ParameterSet::MlKem768),
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: InterFieldConsistency,
            mutation_tokens: &["aid-oid-family-swap", "spki-oid-length-mismatch"],
            expected_detection: &[ids::MLKEM_SPKI_PUBLIC_KEY_LENGTH],
            set_override: Some(ParameterSet::MlKem768),
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem512-spki-oid-swapped-to-mlkem768-pub",
            parent_id: "openssl-mlkem512-ee-pub",
            operator: SpkiOidRewrite(ParameterSet::MlKem768),
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: InterFieldConsistency,
            mutation_tokens: &["spki-oid-length-mismatch"],
            expected_detection: &[ids::MLKEM_SPKI_PUBLIC_KEY_LENGTH],
            set_override: Some(ParameterSet::MlKem768),
        },
        // --- SPKI/public-key stage: certificate-carried artifacts ---
        MutationSpec {
            artifact_id: "der-mut-mlkem768-cert-spki-aid-null",
            parent_id: "openssl-mlkem768-ee-cert",
            operator: SpkiAidParamsNull,
            stage: SpkiPublicKey,
            artifact_type: Certificate,
            fault_family: EncodingContainer,
            mutation_tokens: &["aid-parameters-null"],
            expected_detection: &[ids::MLKEM_SPKI_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem768-cert-spki-aid-octet-params",
            parent_id: "openssl-mlkem768-ee-cert",
            operator: SpkiAidParamsOctet,
            stage: SpkiPublicKey,
            artifact_type: Certificate,
            fault_family: EncodingContainer,
            mutation_tokens: &["aid-parameters-present-non-null"],
            expected_detection: &[ids::MLKEM_SPKI_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem768-cert-spki-payload-truncated",
            parent_id: "openssl-mlkem768-ee-cert",
            operator: SpkiPayloadTruncate,
            stage: SpkiPublicKey,
            artifact_type: Certificate,
            fault_family: SizeShape,
            mutation_tokens: &["spki-public-key-truncate"],
            expected_detection: &[ids::MLKEM_SPKI_PUBLIC_KEY_LENGTH],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem768-spki-aid-null-pub",
            parent_id: "openssl-mlkem768-ee-pub",
            operator: SpkiAidParamsNull,
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: EncodingContainer,
            mutation_tokens: &["aid-parameters-null"],
            expected_detection: &[ids::MLKEM_SPKI_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem768-spki-aid-octet-params-pub",
            parent_id: "openssl-mlkem768-ee-pub",
            operator: SpkiAidParamsOctet,
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: EncodingContainer,
            mutation_tokens: &["aid-parameters-present-non-null"],
            expected_detection: &[ids::MLKEM_SPKI_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem768-spki-payload-truncated-pub",
            parent_id: "openssl-mlkem768-ee-pub",
            operator: SpkiPayloadTruncate,
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: SizeShape,
            mutation_tokens: &["spki-public-key-truncate"],
            expected_detection: &[ids::MLKEM_SPKI_PUBLIC_KEY_LENGTH],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem768-spki-unreduced-byteencode12-pub",
            parent_id: "openssl-mlkem768-ee-pub",
            operator: MlKemUnreducedLane,
            stage: SpkiPublicKey,
            artifact_type: Spki,
            fault_family: FieldDomain,
            mutation_tokens: &["mlkem-unreduced-byteencode12-value"],
            expected_detection: &[ids::MLKEM_SPKI_ENCODE_DECODE_IDENTITY],
            set_override: None,
        },
        // --- certificate/profile stage ---
        MutationSpec {
            artifact_id: "der-mut-mldsa44-cert-signature-aid-null",
            parent_id: "openssl-mldsa44-ee-cert",
            operator: CertSignatureAidParamsNull,
            stage: CertificateProfile,
            artifact_type: Certificate,
            fault_family: EncodingContainer,
            mutation_tokens: &["signature-aid-parameters-null"],
            expected_detection: &[ids::MLDSA_CERT_SIGNATURE_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa44-cert-signature-aid-octet-params",
            parent_id: "openssl-mldsa44-ee-cert",
            operator: CertSignatureAidParamsOctet,
            stage: CertificateProfile,
            artifact_type: Certificate,
            fault_family: EncodingContainer,
            mutation_tokens: &["signature-aid-parameters-present-non-null"],
            expected_detection: &[ids::MLDSA_CERT_SIGNATURE_AID_PARAMS_ABSENT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa44-cert-signature-hashmldsa44",
            parent_id: "openssl-mldsa44-ee-cert",
            operator: CertSignatureHashMlDsa,
            stage: CertificateProfile,
            artifact_type: Certificate,
            fault_family: AlgorithmPolicy,
            mutation_tokens: &[
                "hashml-dsa-signature-oid-in-pkix-cert",
                "hashml-dsa-pkix-context",
            ],
            expected_detection: &[ids::MLDSA_PKIX_HASHML_FORBIDDEN],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa65-cert-keyusage-empty",
            parent_id: "openssl-mldsa65-ee-cert",
            operator: KeyUsageRewrite(&[]),
            stage: CertificateProfile,
            artifact_type: Certificate,
            fault_family: ProfileUsagePolicy,
            mutation_tokens: &["keyusage-empty"],
            expected_detection: &[ids::MLDSA_CERT_KU_AT_LEAST_ONE_SIGNING_BIT],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "openssl-mut-mldsa65-keyusage-key-encipherment-cert",
            parent_id: "openssl-mldsa65-ee-cert",
            operator: KeyUsageRewrite(&[key_usage::KEY_ENCIPHERMENT]),
            stage: CertificateProfile,
            artifact_type: Certificate,
            fault_family: ProfileUsagePolicy,
            mutation_tokens: &["keyusage-missing-signature-bit", "keyusage-key-encipherment"],
            expected_detection: &[
                ids::MLDSA_CERT_KU_AT_LEAST_ONE_SIGNING_BIT,
                ids::MLDSA_CERT_KU_NO_ENCIPHERMENT_OR_AGREEMENT,
            ],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem768-cert-keyusage-empty",
            parent_id: "openssl-mlkem768-ee-cert",
            operator: KeyUsageRewrite(&[]),
            stage: CertificateProfile,
            artifact_type: Certificate,
            fault_family: ProfileUsagePolicy,
            mutation_tokens: &["keyusage-empty"],
            expected_detection: &[ids::MLKEM_CERT_KU_KEYENCIPHERMENT_ONLY],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "openssl-mut-mlkem768-keyusage-digital-signature-cert",
            parent_id: "openssl-mlkem768-ee-cert",
            operator: KeyUsageRewrite(&[key_usage::DIGITAL_SIGNATURE]),
            stage: CertificateProfile,
            artifact_type: Certificate,
            fault_family: ProfileUsagePolicy,
            mutation_tokens: &[
                "keyusage-missing-key-encipherment",
                "keyusage-extra-prohibited-bit",
            ],
            expected_detection: &[ids::MLKEM_CERT_KU_KEYENCIPHERMENT_ONLY],
            set_override: None,
        },
        // --- private-key-container/import stage ---
        MutationSpec {
            artifact_id: "der-mut-mldsa44-key-both-mismatch",
            parent_id: "openssl-mldsa44-ee-key",
            operator: PrivateExpandedFlipByte(0),
            stage: PrivateKeyImport,
            artifact_type: PrivateKeyContainer,
            fault_family: InterFieldConsistency,
            mutation_tokens: &["private-key-both-seed-expanded-mismatch"],
            expected_detection: &[ids::MLDSA_PRIVATE_BOTH_CONSISTENCY],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa44-key-expanded-short",
            parent_id: "openssl-mldsa44-ee-key",
            operator: PrivateExpandedTruncate,
            stage: PrivateKeyImport,
            artifact_type: PrivateKeyContainer,
            fault_family: SizeShape,
            mutation_tokens: &["private-key-expanded-length-short"],
            expected_detection: &[ids::MLDSA_PRIVATE_EXPANDED_LENGTH],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mldsa44-key-seed-short",
            parent_id: "openssl-mldsa44-ee-key",
            operator: PrivateSeedTruncate,
            stage: PrivateKeyImport,
            artifact_type: PrivateKeyContainer,
            fault_family: SizeShape,
            mutation_tokens: &["private-key-seed-length-short"],
            expected_detection: &[ids::MLDSA_PRIVATE_SEED_LENGTH],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem512-key-both-mismatch",
            parent_id: "openssl-mlkem512-ee-key",
            operator: PrivateExpandedFlipByte(0),
            stage: PrivateKeyImport,
            artifact_type: PrivateKeyContainer,
            fault_family: InterFieldConsistency,
            mutation_tokens: &["private-key-both-seed-expanded-mismatch"],
            expected_detection: &[ids::MLKEM_PRIVATE_BOTH_CONSISTENCY],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem512-key-expanded-short",
            parent_id: "openssl-mlkem512-ee-key",
            operator: PrivateExpandedTruncate,
            stage: PrivateKeyImport,
            artifact_type: PrivateKeyContainer,
            fault_family: SizeShape,
            mutation_tokens: &["private-key-expanded-length-short"],
            expected_detection: &[ids::MLKEM_PRIVATE_EXPANDED_LENGTH],
            set_override: None,
        },
        MutationSpec {
            // Flip one byte inside the stored H(ek) segment of the ML-KEM-512
            // expanded key: bytes [1568, 1600) of the 1632-byte layout.
            artifact_id: "der-mut-mlkem512-key-hash-mismatch",
            parent_id: "openssl-mlkem512-ee-key",
            operator: PrivateExpandedFlipByte(1568),
            stage: PrivateKeyImport,
            artifact_type: PrivateKeyContainer,
            fault_family: ImportValidation,
            mutation_tokens: &["mlkem-expanded-key-hash-mismatch"],
            expected_detection: &[
                ids::MLKEM_PRIVATE_EXPANDED_HASH_CHECK,
                ids::MLKEM_PRIVATE_BOTH_CONSISTENCY,
            ],
            set_override: None,
        },
        MutationSpec {
            artifact_id: "der-mut-mlkem512-key-seed-short",
            parent_id: "openssl-mlkem512-ee-key",
            operator: PrivateSeedTruncate,
            stage: PrivateKeyImport,
            artifact_type: PrivateKeyContainer,
            fault_family: SizeShape,
            mutation_tokens: &["private-key-seed-length-short"],
            expected_detection: &[ids::MLKEM_PRIVATE_SEED_LENGTH],
            set_override: None,
        },
    ];
    SPECS
}

// Tree navigation helpers for mutation targets.

fn node_children<'a>(node: &'a mut Node, what: &str) -> Result<&'a mut Vec<Node>, String> {
    node.children_mut()
        .ok_or_else(|| format!("{what} is not constructed"))
}

/// Index of the SPKI inside tbsCertificate children (version-aware).
fn tbs_spki_index(tbs: &[Node]) -> Result<usize, String> {
    let base = usize::from(
        tbs.first()
            .is_some_and(|c| c.tag() == Tag::context_constructed(0)),
    );
    if tbs.len() < base + 6 {
        return Err("tbsCertificate has too few fields".into());
    }
    Ok(base + 5)
}

/// Borrows the SPKI node: the root itself for a raw SPKI artifact, or the
/// embedded subjectPublicKeyInfo for a certificate.
fn spki_node_of<'a>(
    root: &'a mut Node,
    artifact_type: ArtifactType,
) -> Result<&'a mut Node, String> {
    match artifact_type {
        ArtifactType::Spki => Ok(root),
        ArtifactType::Certificate => {
            let outer = node_children(root, "certificate")?;
            let tbs = node_children(&mut outer[0], "tbsCertificate")?;
            let idx = tbs_spki_index(tbs)?;
            Ok(&mut tbs[idx])
        }
        ArtifactType::PrivateKeyContainer => Err("private key has no SPKI".into()),
    }
}

fn push_aid_param(aid: &mut Node, param: Node) -> Result<(), String> {
    let children = node_children(aid, "AlgorithmIdentifier")?;
    if children.len() != 1 {
        return Err("AlgorithmIdentifier already has parameters".into());
    }
    children.push(param);
    Ok(())
}

fn rewrite_oid(aid: &mut Node, content: Vec<u8>) -> Result<(), String> {
    let children = node_children(aid, "AlgorithmIdentifier")?;
    let oid = children
        .first_mut()
        .and_then(|n| n.primitive_content_mut())
        .ok_or("AlgorithmIdentifier has no OID")?;
    *oid = content;
    Ok(())
}

/// Maps an ML-DSA OID content to its pre-hash counterpart (arc 17..19 ->
/// 32..34).
fn hash_counterpart(content: &[u8]) -> Result<Vec<u8>, String> {
    let mut out = content.to_vec();
    match out.last_mut() {
        Some(last @ 0x11..=0x13) => {
            *last += 0x0f;
            Ok(out)
        }
        _ => Err("signature OID is not a pure ML-DSA identifier".into()),
    }
}

/// Applies `op` to the parent's DER and returns the mutated DER.
fn apply_op(
    op: MutationOp,
    parent_der: &[u8],
    artifact_type: ArtifactType,
) -> Result<Vec<u8>, String> {
    let mut root = parse_tree(parent_der).map_err(|e| e.to_string())?;
    match op {
        MutationOp::SpkiAidParamsNull | MutationOp::SpkiAidParamsOctet => {
            let spki = spki_node_of(&mut root, artifact_type)?;
            let children = node_children(spki, "SubjectPublicKeyInfo")?;
            let param = if op == MutationOp::SpkiAidParamsNull {
                Node::primitive(Tag::NULL, vec![])
            } else {
                Node::primitive(Tag::OCTET_STRING, vec![0xde, 0xad])
            };
            push_aid_param(&mut children[0], param)?;
        }
        MutationOp::CertSignatureAidParamsNull | MutationOp::CertSignatureAidParamsOctet => {
            let make_param = || {
                if op == MutationOp::CertSignatureAidParamsNull {
                    Node::primitive(Tag::NULL, vec![])
                } else {
                    Node::primitive(Tag::OCTET_STRING, vec![0xde, 0xad])
                }
            };
            let outer = node_children(&mut root, "certificate")?;
            // Outer signatureAlgorithm first; then tbs.signature.
            push_aid_param(&mut outer[1], make_param())?;
            let tbs = node_children(&mut outer[0], "tbsCertificate")?;
            let base = usize::from(
                tbs.first()
                    .is_some_and(|c| c.tag() == Tag::context_constructed(0)),
            );
            push_aid_param(&mut tbs[base + 1], make_param())?;
        }
        MutationOp::CertSignatureHashMlDsa => {
            let outer = node_children(&mut root, "certificate")?;
            for locus in [1usize, 0] {
                let aid = if locus == 1 {
                    &mut outer[1]
                } else {
                    let tbs = node_children(&mut outer[0], "tbsCertificate")?;
                    let base = usize::from(
                        tbs.first()
                            .is_some_and(|c| c.tag() == Tag::context_constructed(0)),
                    );
                    &mut tbs[base + 1]
                };
                let children = node_children(aid, "AlgorithmIdentifier")?;
                let oid = children
                    .first_mut()
                    .and_then(|n| n.primitive_content_mut())
                    .ok_or("AlgorithmIdentifier has no OID")?;
                *oid = hash_counterpart(oid)?;
            }
        }
        MutationOp::SpkiPayloadTruncate => {
            let spki = spki_node_of(&mut root, artifact_type)?;
            let children = node_children(spki, "SubjectPublicKeyInfo")?;
            let bits = children[1]
                .primitive_content_mut()
                .ok_or("subjectPublicKey is not primitive")?;
            if bits.len() < 2 {
                return Err("payload too short to truncate".into());
            }
            bits.pop();
        }
        MutationOp::SpkiPayloadExtendTo(target) => {
            let spki = spki_node_of(&mut root, artifact_type)?;
            let children = node_children(spki, "SubjectPublicKeyInfo")?;
            let bits = children[1]
                .primitive_content_mut()
                .ok_or("subjectPublicKey is not primitive")?;
            // Content byte 0 is the unused-bit octet.
            if bits.len() - 1 >= target {
                return Err(format!("payload already >= {target}"));
            }
            bits.resize(target + 1, 0x00);
        }
        MutationOp::SpkiOidRewrite(to) => {
            let spki = spki_node_of(&mut root, artifact_type)?;
            let children = node_children(spki, "SubjectPublicKeyInfo")?;
            rewrite_oid(&mut children[0], algorithm_oid(to).encode_content())?;
        }
        MutationOp::KeyUsageRewrite(bits) => {
            let outer = node_children(&mut root, "certificate")?;
            let tbs = node_children(&mut outer[0], "tbsCertificate")?;
            let wrapper = tbs
                .iter_mut()
                .find(|n| n.tag() == Tag::context_constructed(3))
                .ok_or("certificate has no extensions")?;
            let ext_list = &mut node_children(wrapper, "extensions wrapper")?[0];
            let exts = node_children(ext_list, "extensions list")?;
            let ku = exts
                .iter_mut()
                .find(|e| {
                    e.children()
                        .and_then(|c| c.first())
                        .and_then(|n| n.primitive_content())
                        == Some(&[0x55, 0x1d, 0x0f][..])
                })
                .ok_or("certificate has no keyUsage extension")?;
            let fields = node_children(ku, "keyUsage extension")?;
            let value = fields
                .last_mut()
                .and_then(|n| n.primitive_content_mut())
                .ok_or("keyUsage extnValue is not primitive")?;
            *value = encode_tlv(Tag::BIT_STRING, &encode_named_bits(bits));
        }
        MutationOp::MlKemUnreducedLane => {
            let spki = spki_node_of(&mut root, artifact_type)?;
            let children = node_children(spki, "SubjectPublicKeyInfo")?;
            let bits = children[1]
                .primitive_content_mut()
                .ok_or("subjectPublicKey is not primitive")?;
            if bits.len() < 3 {
                return Err("payload too short for a coefficient lane".into());
            }
            // Lane 0 lives in payload bytes 0..2 = content bytes 1..3.
            let original = bits[1] as u16 | ((bits[2] as u16 & 0x0f) << 8);
            if original >= Q {
                return Err(format!("lane 0 is already {original}, >= q"));
            }
            bits[1] = 0xff;
            bits[2] |= 0x0f;
        }
        MutationOp::PrivateSeedTruncate
        | MutationOp::PrivateExpandedTruncate
        | MutationOp::PrivateExpandedFlipByte(_) => {
            let outer = node_children(&mut root, "OneAsymmetricKey")?;
            let holder = outer[2]
                .primitive_content_mut()
                .ok_or("privateKey is not an OCTET STRING")?;
            let mut choice = parse_tree(holder).map_err(|e| e.to_string())?;
            {
                let parts = node_children(&mut choice, "both-form private key")?;
                if parts.len() != 2 {
                    return Err("parent is not a both-form container".into());
                }
                match op {
                    MutationOp::PrivateSeedTruncate => {
                        parts[0]
                            .primitive_content_mut()
                            .ok_or("seed component is not primitive")?
                            .pop();
                    }
                    MutationOp::PrivateExpandedTruncate => {
                        parts[1]
                            .primitive_content_mut()
                            .ok_or("expanded component is not primitive")?
                            .pop();
                    }
                    MutationOp::PrivateExpandedFlipByte(offset) => {
                        let expanded = parts[1]
                            .primitive_content_mut()
                            .ok_or("expanded component is not primitive")?;
                        let byte = expanded
                            .get_mut(offset)
                            .ok_or(format!("flip offset {offset} out of range"))?;
                        *byte ^= 0x01;
                    }
                    _ => unreachable!(),
                }
            }
            *holder = choice.encode();
        }
    }
    Ok(root.encode())
}

/// Applies one frozen mutation row to its parent's DER.
pub fn apply_mutation(spec: &MutationSpec, parent_der: &[u8]) -> Result<Vec<u8>, CorpusError> {
    let parent_type = if spec.parent_id.ends_with("-pub") {
        ArtifactType::Spki
    } else if spec.parent_id.ends_with("-cert") {
        ArtifactType::Certificate
    } else {
        ArtifactType::PrivateKeyContainer
    };
    let mutated =
        apply_op(spec.operator, parent_der, parent_type).map_err(|detail| CorpusError::Mutation {
            artifact_id: spec.artifact_id.to_string(),
            detail,
        })?;
    debug_assert!(
        parse_tree(&mutated).is_ok(),
        "mutation must keep TLV framing intact"
    );
    debug_assert_ne!(mutated, parent_der, "mutation must change bytes");
    Ok(mutated)
}

// ---------------------------------------------------------------------------
// Generation and the manifest.
// ---------------------------------------------------------------------------

fn pem_label_for(artifact_type: ArtifactType) -> &'static str {
    match artifact_type {
        ArtifactType::Certificate => pem::LABEL_CERTIFICATE,
        ArtifactType::Spki => pem::LABEL_PUBLIC_KEY,
        ArtifactType::PrivateKeyContainer => pem::LABEL_PRIVATE_KEY,
    }
}

/// Generates the full corpus under `root` and writes `manifest.jsonl`.
/// Returns the manifest entries, sorted by artifact id.
pub fn generate_corpus(root: &Path) -> Result<Vec<ManifestEntry>, CorpusError> {
    let valid = valid_artifacts();
    let mut entries = Vec::with_capacity(48);
    let mut der_by_id: BTreeMap<&str, (&[u8], ParameterSet, Family)> = BTreeMap::new();

    for artifact in &valid {
        let path = root.join(&artifact.entry.path);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        let text = pem::encode_pem(artifact.pem_label, &artifact.der);
        std::fs::write(&path, text).map_err(io_err(&path))?;
        der_by_id.insert(
            &artifact.entry.artifact_id,
            (
                &artifact.der,
                artifact.entry.parameter_set,
                artifact.entry.algorithm,
            ),
        );
        entries.push(artifact.entry.clone());
    }

    for spec in mutation_specs() {
        let (parent_der, parent_set, parent_family) = der_by_id
            .get(spec.parent_id)
            .copied()
            .ok_or_else(|| CorpusError::Mutation {
                artifact_id: spec.artifact_id.to_string(),
                detail: format!("unknown parent {}", spec.parent_id),
            })?;
        let mutated = apply_mutation(spec, parent_der)?;
        let file = format!("mutated/{}.pem", spec.artifact_id.replace('-', "_"));
        let path = root.join(&file);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        let text = pem::encode_pem(pem_label_for(spec.artifact_type), &mutated);
        std::fs::write(&path, &text).map_err(io_err(&path))?;

        let (set, family) = match spec.set_override {
            Some(set) => (set, set.family()),
            None => (parent_set, parent_family),
        };
        entries.push(ManifestEntry {
            artifact_id: spec.artifact_id.to_string(),
            path: file,
            artifact_type: spec.artifact_type,
            stage: spec.stage,
            algorithm: family,
            parameter_set: set,
            validity: Validity::Invalid,
            source_note: format!("mutated from {}", spec.parent_id),
            sha256: sha256_hex(text.as_bytes()),
            fault_family: Some(spec.fault_family),
            mutation_tokens: Some(spec.mutation_tokens.iter().map(|s| s.to_string()).collect()),
            expected_detection: Some(
                spec.expected_detection.iter().map(|s| s.to_string()).collect(),
            ),
        });
    }

    entries.sort_by(|a, b| a.artifact_id.cmp(&b.artifact_id));
    write_manifest(&entries, &root.join(MANIFEST_FILE))?;
    Ok(entries)
}

/// Writes the manifest as JSON lines sorted by artifact id, one object per
/// line, keys sorted.
pub fn write_manifest(entries: &[ManifestEntry], path: &Path) -> Result<(), CorpusError> {
    let mut sorted: Vec<&ManifestEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.artifact_id.cmp(&b.artifact_id));
    let mut out = Vec::new();
    for entry in sorted {
        let value = serde_json::to_value(entry).expect("manifest entries serialize");
        serde_json::to_writer(&mut out, &value).expect("vec write cannot fail");
        out.push(b'\n');
    }
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let mut file = std::fs::File::create(path).map_err(io_err(path))?;
    file.write_all(&out).map_err(io_err(path))?;
    Ok(())
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        entries.push(
            serde_json::from_str(line).map_err(|source| CorpusError::ManifestJson {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HashMismatch {
    pub artifact_id: String,
    pub path: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checked: usize,
    pub mismatches: Vec<HashMismatch>,
    pub missing: Vec<String>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.missing.is_empty()
    }
}

/// Rehashes every artifact file against its manifest line. The per-file
/// hashing runs in parallel when the `parallel` feature is on.
pub fn verify_manifest(manifest_path: &Path) -> Result<VerificationReport, CorpusError> {
    let entries = load_manifest(manifest_path)?;
    let root = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));

    enum Outcome {
        Ok,
        Missing(String),
        Mismatch(HashMismatch),
    }

    let check = |entry: &ManifestEntry| -> Outcome {
        let path = root.join(&entry.path);
        match std::fs::read(&path) {
            Err(_) => Outcome::Missing(entry.artifact_id.clone()),
            Ok(bytes) => {
                let actual = sha256_hex(&bytes);
                if actual == entry.sha256 {
                    Outcome::Ok
                } else {
                    Outcome::Mismatch(HashMismatch {
                        artifact_id: entry.artifact_id.clone(),
                        path: entry.path.clone(),
                        expected: entry.sha256.clone(),
                        actual,
                    })
                }
            }
        }
    };

    #[cfg(feature = "parallel")]
    let outcomes: Vec<Outcome> = entries.par_iter().map(check).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Outcome> = entries.iter().map(check).collect();

    let mut report = VerificationReport {
        checked: entries.len(),
        mismatches: Vec::new(),
        missing: Vec::new(),
    };
    for outcome in outcomes {
        match outcome {
            Outcome::Ok => {}
            Outcome::Missing(id) => report.missing.push(id),
            Outcome::Mismatch(m) => report.mismatches.push(m),
        }
    }
    Ok(report)
}
