//! Structural views over the three artifact shapes the pipeline checks:
//! certificates, standalone SubjectPublicKeyInfo blobs, and
//! OneAsymmetricKey private-key containers.
//!
//! Parsing is deliberately shallow: names, validity and signature values
//! are carried opaquely, while the fields the detectors reason about
//! (algorithm identifiers, key bytes, keyUsage, private-key form) are
//! decoded with their byte spans retained for reporting.

use crate::der::{
    self, parse_bit_string_content, parse_children, parse_element, parse_root, DerElement, Tag,
};
use crate::mlkem::MlKemLayout;
use crate::oid::{oid, ObjectIdentifierValue, OidError};
use crate::pem::{self, PemError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PkixError {
    #[error("malformed DER: {0}")]
    Der(#[from] der::DerError),
    #[error("{0}")]
    Pem(#[from] PemError),
    #[error("malformed object identifier: {0}")]
    Oid(#[from] OidError),
    #[error("not a certificate shape: {0}")]
    NotACertificateShape(String),
    #[error("not a SubjectPublicKeyInfo shape: {0}")]
    NotAnSpkiShape(String),
    #[error("not a private-key container shape: {0}")]
    NotAPrivateKeyShape(String),
    #[error("malformed AlgorithmIdentifier at {locus}: {detail}")]
    MalformedAlgorithmIdentifier { locus: &'static str, detail: String },
    #[error("keyUsage extension is undecodable: {0}")]
    KeyUsageUndecodable(String),
    #[error("subjectPublicKey BIT STRING has a nonzero unused-bit count")]
    PublicKeyUnusedBits,
    #[error("private key CHOICE tag 0x{tag:02x} is not seed, expanded or both")]
    UnknownChoiceTag { tag: u8 },
    #[error("both-form private key is not a SEQUENCE of exactly two OCTET STRINGs")]
    BothFormShape,
}

/// Algorithm family an OID belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "ML-KEM")]
    MlKem,
    #[serde(rename = "ML-DSA")]
    MlDsa,
    #[serde(rename = "HashML-DSA")]
    HashMlDsa,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::MlKem => "ML-KEM",
            Family::MlDsa => "ML-DSA",
            Family::HashMlDsa => "HashML-DSA",
        })
    }
}

/// The six parameter sets in scope. Hash-prefixed ML-DSA identifiers are
/// catalogued by family only; no parameter-set expectations attach to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ParameterSet {
    #[serde(rename = "ML-KEM-512")]
    MlKem512,
    #[serde(rename = "ML-KEM-768")]
    MlKem768,
    #[serde(rename = "ML-KEM-1024")]
    MlKem1024,
    #[serde(rename = "ML-DSA-44")]
    MlDsa44,
    #[serde(rename = "ML-DSA-65")]
    MlDsa65,
    #[serde(rename = "ML-DSA-87")]
    MlDsa87,
}

impl ParameterSet {
    pub const ALL: [ParameterSet; 6] = [
        ParameterSet::MlKem512,
        ParameterSet::MlKem768,
        ParameterSet::MlKem1024,
        ParameterSet::MlDsa44,
        ParameterSet::MlDsa65,
        ParameterSet::MlDsa87,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParameterSet::MlKem512 => "ML-KEM-512",
            ParameterSet::MlKem768 => "ML-KEM-768",
            ParameterSet::MlKem1024 => "ML-KEM-1024",
            ParameterSet::MlDsa44 => "ML-DSA-44",
            ParameterSet::MlDsa65 => "ML-DSA-65",
            ParameterSet::MlDsa87 => "ML-DSA-87",
        }
    }

    pub fn family(self) -> Family {
        match self {
            ParameterSet::MlKem512 | ParameterSet::MlKem768 | ParameterSet::MlKem1024 => {
                Family::MlKem
            }
            _ => Family::MlDsa,
        }
    }

    /// ML-KEM byte layout; none for signature parameter sets.
    pub fn mlkem_layout(self) -> Option<MlKemLayout> {
        match self {
            ParameterSet::MlKem512 => MlKemLayout::from_k(2),
            ParameterSet::MlKem768 => MlKemLayout::from_k(3),
            ParameterSet::MlKem1024 => MlKemLayout::from_k(4),
            _ => None,
        }
    }

    /// Expected SubjectPublicKeyInfo payload length.
    pub fn public_key_len(self) -> usize {
        match self {
            ParameterSet::MlDsa44 => 1312,
            ParameterSet::MlDsa65 => 1952,
            ParameterSet::MlDsa87 => 2592,
            kem => kem.mlkem_layout().expect("KEM set").ek_len(),
        }
    }

    /// Expected seed-form private key length.
    pub fn seed_len(self) -> usize {
        match self.family() {
            Family::MlKem => MlKemLayout::SEED_LEN,
            _ => 32,
        }
    }

    /// Expected expanded-form private key length.
    pub fn expanded_len(self) -> usize {
        match self {
            ParameterSet::MlDsa44 => 2560,
            ParameterSet::MlDsa65 => 4032,
            ParameterSet::MlDsa87 => 4896,
            kem => kem.mlkem_layout().expect("KEM set").dk_len(),
        }
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of the algorithm OID catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmCatalogEntry {
    pub oid: ObjectIdentifierValue,
    pub label: &'static str,
    pub family: Family,
    pub parameter_set: Option<ParameterSet>,
}

/// All algorithm OIDs the profile recognizes.
pub fn algorithm_catalog() -> &'static [AlgorithmCatalogEntry] {
    static CATALOG: OnceLock<Vec<AlgorithmCatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let sig = |last: u64| oid(&[2, 16, 840, 1, 101, 3, 4, 3, last]);
        let kem = |last: u64| oid(&[2, 16, 840, 1, 101, 3, 4, 4, last]);
        vec![
            AlgorithmCatalogEntry {
                oid: kem(1),
                label: "ML-KEM-512",
                family: Family::MlKem,
                parameter_set: Some(ParameterSet::MlKem512),
            },
            AlgorithmCatalogEntry {
                oid: kem(2),
                label: "ML-KEM-768",
                family: Family::MlKem,
                parameter_set: Some(ParameterSet::MlKem768),
            },
            AlgorithmCatalogEntry {
                oid: kem(3),
                label: "ML-KEM-1024",
                family: Family::MlKem,
                parameter_set: Some(ParameterSet::MlKem1024),
            },
            AlgorithmCatalogEntry {
                oid: sig(17),
                label: "ML-DSA-44",
                family: Family::MlDsa,
                parameter_set: Some(ParameterSet::MlDsa44),
            },
            AlgorithmCatalogEntry {
                oid: sig(18),
                label: "ML-DSA-65",
                family: Family::MlDsa,
                parameter_set: Some(ParameterSet::MlDsa65),
            },
            AlgorithmCatalogEntry {
                oid: sig(19),
                label: "ML-DSA-87",
                family: Family::MlDsa,
                parameter_set: Some(ParameterSet::MlDsa87),
            },
            AlgorithmCatalogEntry {
                oid: sig(32),
                label: "HashML-DSA-44",
                family: Family::HashMlDsa,
                parameter_set: None,
            },
            AlgorithmCatalogEntry {
                oid: sig(33),
                label: "HashML-DSA-65",
                family: Family::HashMlDsa,
                parameter_set: None,
            },
            AlgorithmCatalogEntry {
                oid: sig(34),
                label: "HashML-DSA-87",
                family: Family::HashMlDsa,
                parameter_set: None,
            },
        ]
    })
}

pub fn resolve_algorithm(value: &ObjectIdentifierValue) -> Option<&'static AlgorithmCatalogEntry> {
    algorithm_catalog().iter().find(|e| &e.oid == value)
}

pub fn algorithm_oid(set: ParameterSet) -> &'static ObjectIdentifierValue {
    algorithm_catalog()
        .iter()
        .find(|e| e.parameter_set == Some(set))
        .map(|e| &e.oid)
        .expect("all parameter sets are catalogued")
}

/// keyUsage named-bit positions.
pub mod key_usage {
    pub const DIGITAL_SIGNATURE: usize = 0;
    pub const NON_REPUDIATION: usize = 1;
    pub const KEY_ENCIPHERMENT: usize = 2;
    pub const DATA_ENCIPHERMENT: usize = 3;
    pub const KEY_AGREEMENT: usize = 4;
    pub const KEY_CERT_SIGN: usize = 5;
    pub const CRL_SIGN: usize = 6;
    pub const ENCIPHER_ONLY: usize = 7;
    pub const DECIPHER_ONLY: usize = 8;

    pub fn bit_name(bit: usize) -> &'static str {
        match bit {
            DIGITAL_SIGNATURE => "digitalSignature",
            NON_REPUDIATION => "nonRepudiation",
            KEY_ENCIPHERMENT => "keyEncipherment",
            DATA_ENCIPHERMENT => "dataEncipherment",
            KEY_AGREEMENT => "keyAgreement",
            KEY_CERT_SIGN => "keyCertSign",
            CRL_SIGN => "cRLSign",
            ENCIPHER_ONLY => "encipherOnly",
            DECIPHER_ONLY => "decipherOnly",
            _ => "unknown",
        }
    }
}

/// What the AlgorithmIdentifier carries after the OID.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamsPresence {
    /// One-child SEQUENCE: the parameters field is absent.
    Absent,
    /// An ASN.1 NULL is present.
    Null,
    /// Some other parameters element is present; its tag byte is kept.
    Other { tag: u8 },
}

impl ParamsPresence {
    pub fn is_absent(self) -> bool {
        self == ParamsPresence::Absent
    }

    pub fn describe(self) -> String {
        match self {
            ParamsPresence::Absent => "absent".to_string(),
            ParamsPresence::Null => "NULL present".to_string(),
            ParamsPresence::Other { tag } => format!("present (tag 0x{tag:02x})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmIdentifierView {
    pub locus: &'static str,
    pub span: Range<usize>,
    pub oid: ObjectIdentifierValue,
    pub params: ParamsPresence,
    pub resolved: Option<&'static AlgorithmCatalogEntry>,
}

impl AlgorithmIdentifierView {
    pub fn family(&self) -> Option<Family> {
        self.resolved.map(|e| e.family)
    }

    pub fn parameter_set(&self) -> Option<ParameterSet> {
        self.resolved.and_then(|e| e.parameter_set)
    }
}

/// Decoded keyUsage bit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyUsageView {
    pub span: Range<usize>,
    pub set: BTreeSet<usize>,
}

impl KeyUsageView {
    pub fn contains(&self, bit: usize) -> bool {
        self.set.contains(&bit)
    }

    pub fn any_of(&self, bits: &[usize]) -> bool {
        bits.iter().any(|b| self.set.contains(b))
    }

    pub fn is_exactly(&self, bits: &[usize]) -> bool {
        self.set == bits.iter().copied().collect()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.set.iter().map(|&b| key_usage::bit_name(b)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyUsagePresence {
    Absent,
    Present(KeyUsageView),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpkiView {
    pub span: Range<usize>,
    pub algorithm: AlgorithmIdentifierView,
    /// BIT STRING payload, unused-bit octet stripped.
    pub public_key: Vec<u8>,
    pub public_key_span: Range<usize>,
}

#[derive(Debug, Clone)]
pub struct CertificateView {
    pub der: Vec<u8>,
    pub tbs_signature: AlgorithmIdentifierView,
    pub outer_signature: AlgorithmIdentifierView,
    pub spki: SpkiView,
    pub key_usage: KeyUsagePresence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrivateKeyForm {
    Seed(Vec<u8>),
    Expanded(Vec<u8>),
    Both { seed: Vec<u8>, expanded: Vec<u8> },
}

impl PrivateKeyForm {
    pub fn name(&self) -> &'static str {
        match self {
            PrivateKeyForm::Seed(_) => "seed",
            PrivateKeyForm::Expanded(_) => "expanded",
            PrivateKeyForm::Both { .. } => "both",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PrivateKeyContainerView {
    pub der: Vec<u8>,
    pub algorithm: AlgorithmIdentifierView,
    pub form: PrivateKeyForm,
    pub form_span: Range<usize>,
}

const OID_KEY_USAGE_CONTENT: [u8; 3] = [0x55, 0x1d, 0x0f];

fn parse_algorithm_identifier(
    buf: &[u8],
    elem: &DerElement,
    locus: &'static str,
) -> Result<AlgorithmIdentifierView, PkixError> {
    let malformed = |detail: &str| PkixError::MalformedAlgorithmIdentifier {
        locus,
        detail: detail.to_string(),
    };
    if elem.tag != Tag::SEQUENCE {
        return Err(malformed("not a SEQUENCE"));
    }
    let children = parse_children(buf, elem)?;
    if children.is_empty() || children.len() > 2 {
        return Err(malformed("expected one or two children"));
    }
    if children[0].tag != Tag::OBJECT_IDENTIFIER {
        return Err(malformed("first child is not an OBJECT IDENTIFIER"));
    }
    let oid_value = ObjectIdentifierValue::decode_content(children[0].content_bytes(buf))?;
    let params = match children.get(1) {
        None => ParamsPresence::Absent,
        Some(p) if p.tag == Tag::NULL && p.content.is_empty() => ParamsPresence::Null,
        Some(p) => ParamsPresence::Other { tag: p.tag.byte() },
    };
    let resolved = resolve_algorithm(&oid_value);
    Ok(AlgorithmIdentifierView {
        locus,
        span: elem.span(),
        oid: oid_value,
        params,
        resolved,
    })
}

fn parse_spki_element(buf: &[u8], elem: &DerElement) -> Result<SpkiView, PkixError> {
    let shape = |detail: &str| PkixError::NotAnSpkiShape(detail.to_string());
    if elem.tag != Tag::SEQUENCE {
        return Err(shape("outer element is not a SEQUENCE"));
    }
    let children = parse_children(buf, elem)?;
    if children.len() != 2 {
        return Err(shape("expected AlgorithmIdentifier and subjectPublicKey"));
    }
    let algorithm = parse_algorithm_identifier(buf, &children[0], "spki.algorithm")?;
    let key_elem = &children[1];
    if key_elem.tag != Tag::BIT_STRING {
        return Err(shape("subjectPublicKey is not a BIT STRING"));
    }
    let bits = parse_bit_string_content(key_elem.content_bytes(buf), key_elem.offset)?;
    if bits.unused_bits != 0 {
        return Err(PkixError::PublicKeyUnusedBits);
    }
    Ok(SpkiView {
        span: elem.span(),
        algorithm,
        public_key: bits.data,
        public_key_span: key_elem.content.start + 1..key_elem.content.end,
    })
}

/// Parses a standalone SubjectPublicKeyInfo artifact (PEM `PUBLIC KEY` or
/// raw DER).
pub fn parse_spki(bytes: &[u8]) -> Result<SpkiView, PkixError> {
    let der_bytes = pem::read_artifact(bytes, pem::LABEL_PUBLIC_KEY)?;
    let root = parse_root(&der_bytes)?;
    parse_spki_element(&der_bytes, &root)
}

/// Parses a certificate artifact (PEM `CERTIFICATE` or raw DER) into the
/// fields the profile checks.
pub fn parse_certificate(bytes: &[u8]) -> Result<CertificateView, PkixError> {
    let der_bytes = pem::read_artifact(bytes, pem::LABEL_CERTIFICATE)?;
    let shape = |detail: &str| PkixError::NotACertificateShape(detail.to_string());

    let root = parse_root(&der_bytes)?;
    if root.tag != Tag::SEQUENCE {
        return Err(shape("outer element is not a SEQUENCE"));
    }
    let outer = parse_children(&der_bytes, &root)?;
    if outer.len() != 3 {
        return Err(shape("expected tbsCertificate, signatureAlgorithm, signature"));
    }
    if outer[0].tag != Tag::SEQUENCE {
        return Err(shape("tbsCertificate is not a SEQUENCE"));
    }
    if outer[2].tag != Tag::BIT_STRING {
        return Err(shape("signature is not a BIT STRING"));
    }
    let outer_signature =
        parse_algorithm_identifier(&der_bytes, &outer[1], "outer.signatureAlgorithm")?;

    let tbs_children = parse_children(&der_bytes, &outer[0])?;
    let has_version = tbs_children
        .first()
        .is_some_and(|c| c.tag == Tag::context_constructed(0));
    let base = usize::from(has_version);
    if tbs_children.len() < base + 6 {
        return Err(shape("tbsCertificate has too few fields"));
    }
    let tbs_signature =
        parse_algorithm_identifier(&der_bytes, &tbs_children[base + 1], "tbs.signature")?;
    let spki = parse_spki_element(&der_bytes, &tbs_children[base + 5])
        .map_err(|e| shape(&format!("subjectPublicKeyInfo: {e}")))?;

    let extensions = tbs_children[base + 6..]
        .iter()
        .find(|c| c.tag == Tag::context_constructed(3));
    let key_usage = match extensions {
        None => KeyUsagePresence::Absent,
        Some(wrapper) => parse_key_usage(&der_bytes, wrapper)?,
    };

    Ok(CertificateView {
        der: der_bytes,
        tbs_signature,
        outer_signature,
        spki,
        key_usage,
    })
}

fn parse_key_usage(buf: &[u8], wrapper: &DerElement) -> Result<KeyUsagePresence, PkixError> {
    let bad = |detail: &str| PkixError::KeyUsageUndecodable(detail.to_string());
    let inner = parse_children(buf, wrapper)?;
    let [ext_list] = inner.as_slice() else {
        return Err(bad("extensions wrapper does not hold one SEQUENCE"));
    };
    if ext_list.tag != Tag::SEQUENCE {
        return Err(bad("extensions list is not a SEQUENCE"));
    }
    for ext in parse_children(buf, ext_list)? {
        if ext.tag != Tag::SEQUENCE {
            return Err(bad("extension entry is not a SEQUENCE"));
        }
        let fields = parse_children(buf, &ext)?;
        let Some(oid_elem) = fields.first() else {
            return Err(bad("empty extension entry"));
        };
        if oid_elem.tag != Tag::OBJECT_IDENTIFIER
            || oid_elem.content_bytes(buf) != OID_KEY_USAGE_CONTENT
        {
            continue;
        }
        // extnValue is the last field; an optional criticality BOOLEAN may
        // sit between it and the OID.
        let value_elem = fields.last().unwrap();
        if value_elem.tag != Tag::OCTET_STRING || fields.len() > 3 {
            return Err(bad("keyUsage extnValue is not an OCTET STRING"));
        }
        let bit_string = parse_element(buf, value_elem.content.start).map_err(|e| bad(&e.to_string()))?;
        if bit_string.content.end != value_elem.content.end {
            return Err(bad("trailing bytes inside keyUsage extnValue"));
        }
        if bit_string.tag != Tag::BIT_STRING {
            return Err(bad("keyUsage value is not a BIT STRING"));
        }
        let bits = parse_bit_string_content(bit_string.content_bytes(buf), bit_string.offset)
            .map_err(|e| bad(&e.to_string()))?;
        return Ok(KeyUsagePresence::Present(KeyUsageView {
            span: bit_string.span(),
            set: bits.set_bits().into_iter().collect(),
        }));
    }
    Ok(KeyUsagePresence::Absent)
}

/// Parses a OneAsymmetricKey artifact (PEM `PRIVATE KEY` or raw DER) into
/// its algorithm identifier and private-key form.
pub fn parse_private_key_container(bytes: &[u8]) -> Result<PrivateKeyContainerView, PkixError> {
    let der_bytes = pem::read_artifact(bytes, pem::LABEL_PRIVATE_KEY)?;
    let shape = |detail: &str| PkixError::NotAPrivateKeyShape(detail.to_string());

    let root = parse_root(&der_bytes)?;
    if root.tag != Tag::SEQUENCE {
        return Err(shape("outer element is not a SEQUENCE"));
    }
    let children = parse_children(&der_bytes, &root)?;
    if children.len() < 3 {
        return Err(shape("expected version, algorithm and privateKey fields"));
    }
    if children[0].tag != Tag::INTEGER {
        return Err(shape("version is not an INTEGER"));
    }
    let algorithm =
        parse_algorithm_identifier(&der_bytes, &children[1], "privateKey.algorithm")?;
    let holder = &children[2];
    if holder.tag != Tag::OCTET_STRING {
        return Err(shape("privateKey is not an OCTET STRING"));
    }

    let choice = parse_element(&der_bytes, holder.content.start)?;
    if choice.content.end != holder.content.end {
        return Err(shape("trailing bytes after private key CHOICE"));
    }
    let form_span = choice.span();
    let form = if choice.tag == Tag::context(0) {
        PrivateKeyForm::Seed(choice.content_bytes(&der_bytes).to_vec())
    } else if choice.tag == Tag::OCTET_STRING {
        PrivateKeyForm::Expanded(choice.content_bytes(&der_bytes).to_vec())
    } else if choice.tag == Tag::SEQUENCE {
        let parts = parse_children(&der_bytes, &choice)?;
        match parts.as_slice() {
            [seed, expanded]
                if seed.tag == Tag::OCTET_STRING && expanded.tag == Tag::OCTET_STRING =>
            {
                PrivateKeyForm::Both {
                    seed: seed.content_bytes(&der_bytes).to_vec(),
                    expanded: expanded.content_bytes(&der_bytes).to_vec(),
                }
            }
            _ => return Err(PkixError::BothFormShape),
        }
    } else {
        return Err(PkixError::UnknownChoiceTag {
            tag: choice.tag.byte(),
        });
    };

    Ok(PrivateKeyContainerView {
        der: der_bytes,
        algorithm,
        form,
        form_span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::der::Node;

    fn aid_node(set: ParameterSet, params: Option<Node>) -> Node {
        let mut children = vec![Node::primitive(
            Tag::OBJECT_IDENTIFIER,
            algorithm_oid(set).encode_content(),
        )];
        children.extend(params);
        Node::sequence(children)
    }

    fn spki_node(set: ParameterSet, key: &[u8], params: Option<Node>) -> Node {
        let mut bits = vec![0u8];
        bits.extend_from_slice(key);
        Node::sequence(vec![
            aid_node(set, params),
            Node::primitive(Tag::BIT_STRING, bits),
        ])
    }

    #[test]
    fn mldsa_lengths_match_parameter_derivation() {
        // (k, l, eta) per parameter set; q = 8380417, d = 13.
        for (set, k, l, eta) in [
            (ParameterSet::MlDsa44, 4usize, 4usize, 2usize),
            (ParameterSet::MlDsa65, 6, 5, 4),
            (ParameterSet::MlDsa87, 8, 7, 2),
        ] {
            let bitlen_q1 = 23; // bits in q-1
            let d = 13;
            let pk = 32 + 32 * k * (bitlen_q1 - d);
            let bitlen_2eta = usize::BITS as usize - (2 * eta).leading_zeros() as usize;
            let sk = 128 + 32 * ((k + l) * bitlen_2eta + k * d);
            assert_eq!(set.public_key_len(), pk);
            assert_eq!(set.expanded_len(), sk);
            assert_eq!(set.seed_len(), 32);
        }
    }

    #[test]
    fn mlkem_lengths_follow_layout() {
        assert_eq!(ParameterSet::MlKem512.public_key_len(), 800);
        assert_eq!(ParameterSet::MlKem768.public_key_len(), 1184);
        assert_eq!(ParameterSet::MlKem1024.public_key_len(), 1568);
        assert_eq!(ParameterSet::MlKem512.expanded_len(), 1632);
        assert_eq!(ParameterSet::MlKem768.expanded_len(), 2400);
        assert_eq!(ParameterSet::MlKem1024.expanded_len(), 3168);
        for set in [
            ParameterSet::MlKem512,
            ParameterSet::MlKem768,
            ParameterSet::MlKem1024,
        ] {
            assert_eq!(set.seed_len(), 64);
        }
    }

    #[test]
    fn catalog_covers_all_sets_and_hash_variants() {
        assert_eq!(algorithm_catalog().len(), 9);
        for set in ParameterSet::ALL {
            let entry = resolve_algorithm(algorithm_oid(set)).unwrap();
            assert_eq!(entry.parameter_set, Some(set));
            assert_eq!(entry.family, set.family());
        }
        let hash44 = oid(&[2, 16, 840, 1, 101, 3, 4, 3, 32]);
        let entry = resolve_algorithm(&hash44).unwrap();
        assert_eq!(entry.family, Family::HashMlDsa);
        assert_eq!(entry.parameter_set, None);
        assert!(resolve_algorithm(&oid(&[1, 2, 3])).is_none());
    }

    #[test]
    fn spki_parses_and_resolves() {
        let key = vec![0x11u8; ParameterSet::MlKem768.public_key_len()];
        let der = spki_node(ParameterSet::MlKem768, &key, None).encode();
        let view = parse_spki(&der).unwrap();
        assert_eq!(view.algorithm.parameter_set(), Some(ParameterSet::MlKem768));
        assert_eq!(view.algorithm.params, ParamsPresence::Absent);
        assert_eq!(view.public_key, key);
        assert_eq!(view.public_key_span.len(), key.len());

        // Same artifact through PEM.
        let pem_text = pem::encode_pem(pem::LABEL_PUBLIC_KEY, &der);
        let view = parse_spki(pem_text.as_bytes()).unwrap();
        assert_eq!(view.public_key.len(), 1184);
    }

    #[test]
    fn spki_params_presence_is_distinguished() {
        let key = vec![0u8; 4];
        let der = spki_node(
            ParameterSet::MlDsa44,
            &key,
            Some(Node::primitive(Tag::NULL, vec![])),
        )
        .encode();
        let view = parse_spki(&der).unwrap();
        assert_eq!(view.algorithm.params, ParamsPresence::Null);

        let der = spki_node(
            ParameterSet::MlDsa44,
            &key,
            Some(Node::primitive(Tag::OCTET_STRING, vec![0xde, 0xad])),
        )
        .encode();
        let view = parse_spki(&der).unwrap();
        assert_eq!(view.algorithm.params, ParamsPresence::Other { tag: 0x04 });
    }

    #[test]
    fn spki_rejects_nonzero_unused_bits() {
        let node = Node::sequence(vec![
            aid_node(ParameterSet::MlKem512, None),
            Node::primitive(Tag::BIT_STRING, vec![0x03, 0xf8]),
        ]);
        assert_eq!(
            parse_spki(&node.encode()),
            Err(PkixError::PublicKeyUnusedBits)
        );
    }

    #[test]
    fn empty_sequence_is_not_a_certificate() {
        let der = [0x30, 0x00];
        assert!(matches!(
            parse_certificate(&der),
            Err(PkixError::NotACertificateShape(_))
        ));
    }

    #[test]
    fn private_key_forms_parse() {
        let aid = aid_node(ParameterSet::MlKem512, None);
        let wrap = |inner: Node| {
            Node::sequence(vec![
                Node::primitive(Tag::INTEGER, vec![0x00]),
                aid.clone(),
                Node::primitive(Tag::OCTET_STRING, inner.encode()),
            ])
            .encode()
        };

        let seed_der = wrap(Node::primitive(Tag::context(0), vec![0xaa; 64]));
        let view = parse_private_key_container(&seed_der).unwrap();
        assert_eq!(view.form, PrivateKeyForm::Seed(vec![0xaa; 64]));

        let exp_der = wrap(Node::primitive(Tag::OCTET_STRING, vec![0xbb; 1632]));
        let view = parse_private_key_container(&exp_der).unwrap();
        assert_eq!(view.form, PrivateKeyForm::Expanded(vec![0xbb; 1632]));

        let both_der = wrap(Node::sequence(vec![
            Node::primitive(Tag::OCTET_STRING, vec![0xaa; 64]),
            Node::primitive(Tag::OCTET_STRING, vec![0xbb; 1632]),
        ]));
        let view = parse_private_key_container(&both_der).unwrap();
        assert_eq!(
            view.form,
            PrivateKeyForm::Both {
                seed: vec![0xaa; 64],
                expanded: vec![0xbb; 1632]
            }
        );
        assert_eq!(view.form.name(), "both");

        let bad_tag = wrap(Node::primitive(Tag::context(1), vec![0xaa; 64]));
        assert!(matches!(
            parse_private_key_container(&bad_tag),
            Err(PkixError::UnknownChoiceTag { tag: 0x81 })
        ));

        let bad_both = wrap(Node::sequence(vec![Node::primitive(
            Tag::OCTET_STRING,
            vec![0xaa; 64],
        )]));
        assert!(matches!(
            parse_private_key_container(&bad_both),
            Err(PkixError::BothFormShape)
        ));
    }

    #[test]
    fn key_usage_view_queries() {
        let view = KeyUsageView {
            span: 0..0,
            set: [key_usage::DIGITAL_SIGNATURE, key_usage::CRL_SIGN]
                .into_iter()
                .collect(),
        };
        assert!(view.contains(key_usage::DIGITAL_SIGNATURE));
        assert!(view.any_of(&[key_usage::KEY_CERT_SIGN, key_usage::CRL_SIGN]));
        assert!(!view.is_exactly(&[key_usage::DIGITAL_SIGNATURE]));
        assert!(view.is_exactly(&[key_usage::CRL_SIGN, key_usage::DIGITAL_SIGNATURE]));
        assert_eq!(view.names(), vec!["digitalSignature", "cRLSign"]);
    }
}
