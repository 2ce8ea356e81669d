//! PEM framing for artifact files.
//!
//! Readers accept either a PEM block with the expected label or raw DER,
//! distinguished by the first byte: DER artifacts in this profile always
//! begin with a SEQUENCE tag (0x30).

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use thiserror::Error;

pub const LABEL_CERTIFICATE: &str = "CERTIFICATE";
pub const LABEL_PUBLIC_KEY: &str = "PUBLIC KEY";
pub const LABEL_PRIVATE_KEY: &str = "PRIVATE KEY";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PemError {
    #[error("no PEM BEGIN boundary and first byte is not a DER SEQUENCE tag")]
    NotPemOrDer,
    #[error("PEM BEGIN boundary is malformed")]
    MalformedBegin,
    #[error("missing PEM END boundary for label {label}")]
    MissingEnd { label: String },
    #[error("PEM label mismatch: expected {expected}, found {found}")]
    LabelMismatch { expected: String, found: String },
    #[error("PEM body is not valid base64")]
    Base64,
    #[error("artifact is not valid UTF-8 text")]
    NotText,
}

/// One decoded PEM block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PemBlock {
    pub label: String,
    pub der: Vec<u8>,
}

/// Encodes DER bytes as a PEM block with 64-column base64 lines.
pub fn encode_pem(label: &str, der: &[u8]) -> String {
    let body = BASE64.encode(der);
    let mut out = format!("-----BEGIN {label}-----\n");
    for chunk in body.as_bytes().chunks(64) {
        out.push_str(std::str::from_utf8(chunk).expect("base64 is ascii"));
        out.push('\n');
    }
    out.push_str(&format!("-----END {label}-----\n"));
    out
}

/// Decodes the first PEM block in `text`.
pub fn decode_pem(text: &str) -> Result<PemBlock, PemError> {
    let begin_at = text.find("-----BEGIN ").ok_or(PemError::NotPemOrDer)?;
    let after = &text[begin_at + "-----BEGIN ".len()..];
    let label_end = after.find("-----").ok_or(PemError::MalformedBegin)?;
    let label = after[..label_end].to_string();
    let body_start = &after[label_end + 5..];
    let end_marker = format!("-----END {label}-----");
    let end_at = body_start.find(&end_marker).ok_or(PemError::MissingEnd {
        label: label.clone(),
    })?;
    let body: String = body_start[..end_at]
        .chars()
        .filter(|c| !c.is_ascii_whitespace())
        .collect();
    let der = BASE64.decode(body.as_bytes()).map_err(|_| PemError::Base64)?;
    Ok(PemBlock { label, der })
}

/// Reads an artifact as DER: raw DER passes through, PEM is unwrapped and
/// its label checked against `expected_label`.
pub fn read_artifact(bytes: &[u8], expected_label: &str) -> Result<Vec<u8>, PemError> {
    if bytes.first() == Some(&0x30) {
        return Ok(bytes.to_vec());
    }
    let text = std::str::from_utf8(bytes).map_err(|_| PemError::NotText)?;
    let block = decode_pem(text)?;
    if block.label != expected_label {
        return Err(PemError::LabelMismatch {
            expected: expected_label.to_string(),
            found: block.label,
        });
    }
    Ok(block.der)
}
