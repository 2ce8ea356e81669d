//! Seed/expanded consistency substrate.
//!
//! The built-in substrate is structural, not cryptographic: it expands a
//! seed through SHAKE256 under fixed domain-separation labels and compares
//! bytes. It reproduces the byte layout of real expanded keys (segment
//! order, reduced coefficient lanes, the SHA3-256 hash binding) without
//! implementing the actual key-generation math, which keeps the corpus
//! deterministic and dependency-free.
//!
//! A real cryptographic implementation can replace it through the bridge
//! protocol: an executable taking `<parameter-set> <seed-hex>
//! <expanded-hex>` and exiting 0 for consistent, 1 for mismatch, anything
//! else for failure. The `--bridge` flag wins over the `PQ_ASSURE_BRIDGE`
//! environment variable.

use crate::mlkem::{byte_decode12, byte_encode12, MlKemLayout, POLY_BYTES, Q};
use crate::pkix::{Family, ParameterSet};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Digest, Sha3_256, Shake256};
use std::path::{Path, PathBuf};
use std::process::Command;
use thiserror::Error;

/// Environment variable naming a bridge executable.
pub const BRIDGE_ENV: &str = "PQ_ASSURE_BRIDGE";

/// Domain-separation labels for the structural expansion. Frozen: changing
/// any of them changes every derived corpus byte.
mod label {
    pub const DK_PKE: &[u8] = b"dkpke";
    pub const T_HAT: &[u8] = b"that";
    pub const RHO: &[u8] = b"rho";
    pub const MLDSA_EXPANDED: &[u8] = b"mldsa-expanded";
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstrateError {
    #[error("seed for {set} must be {expected} bytes, got {actual}")]
    BadSeedLength {
        set: &'static str,
        expected: usize,
        actual: usize,
    },
}

/// Outcome of a consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstrateVerdict {
    Consistent,
    Mismatch,
    /// The substrate itself failed (bridge missing, crashed, or refused).
    /// Never to be read as a pass.
    Failure { detail: String },
}

/// SHAKE256(seed || label) read to `len` bytes.
fn xof(seed: &[u8], label: &[u8], len: usize) -> Vec<u8> {
    let mut hasher = Shake256::default();
    hasher.update(seed);
    hasher.update(label);
    let mut out = vec![0u8; len];
    hasher.finalize_xof().read(&mut out);
    out
}

/// Reduces every 12-bit lane of raw XOF output mod q and re-encodes, so the
/// result is a canonical coefficient encoding.
fn reduce_lanes(raw: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(raw.len());
    for block in raw.chunks_exact(POLY_BYTES) {
        let coeffs: Vec<u16> = byte_decode12(block)
            .expect("block size fixed")
            .into_iter()
            .map(|c| c % Q)
            .collect();
        out.extend_from_slice(&byte_encode12(&coeffs).expect("reduced lanes are in range"));
    }
    out
}

/// Deterministically expands a seed-form private key into the expanded-form
/// byte layout for its parameter set.
pub fn expand_seed(set: ParameterSet, seed: &[u8]) -> Result<Vec<u8>, SubstrateError> {
    if seed.len() != set.seed_len() {
        return Err(SubstrateError::BadSeedLength {
            set: set.name(),
            expected: set.seed_len(),
            actual: seed.len(),
        });
    }
    match set.family() {
        Family::MlKem => {
            let layout: MlKemLayout = set.mlkem_layout().expect("KEM set");
            let dk_pke = reduce_lanes(&xof(seed, label::DK_PKE, POLY_BYTES * layout.k));
            let mut ek = reduce_lanes(&xof(seed, label::T_HAT, POLY_BYTES * layout.k));
            ek.extend_from_slice(&xof(seed, label::RHO, 32));
            let h_ek = Sha3_256::digest(&ek);
            let z = &seed[32..64];

            let mut dk = Vec::with_capacity(layout.dk_len());
            dk.extend_from_slice(&dk_pke);
            dk.extend_from_slice(&ek);
            dk.extend_from_slice(&h_ek);
            dk.extend_from_slice(z);
            debug_assert_eq!(dk.len(), layout.dk_len());
            Ok(dk)
        }
        _ => Ok(xof(seed, label::MLDSA_EXPANDED, set.expanded_len())),
    }
}

/// Which implementation answers consistency questions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Substrate {
    Structural,
    Bridge(PathBuf),
}

impl Substrate {
    /// Resolution order: explicit flag, then `PQ_ASSURE_BRIDGE`, then the
    /// structural substrate.
    pub fn from_options(flag: Option<PathBuf>) -> Substrate {
        if let Some(path) = flag {
            return Substrate::Bridge(path);
        }
        match std::env::var_os(BRIDGE_ENV) {
            Some(path) if !path.is_empty() => Substrate::Bridge(PathBuf::from(path)),
            _ => Substrate::Structural,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Substrate::Structural => "structural".to_string(),
            Substrate::Bridge(path) => format!("bridge:{}", path.display()),
        }
    }

    /// Checks that `expanded` is the expansion of `seed`. Lengths are the
    /// caller's job; a bad seed length surfaces as a substrate failure, not
    /// a verdict.
    pub fn check_consistency(
        &self,
        set: ParameterSet,
        seed: &[u8],
        expanded: &[u8],
    ) -> SubstrateVerdict {
        match self {
            Substrate::Structural => match expand_seed(set, seed) {
                Ok(derived) if derived == expanded => SubstrateVerdict::Consistent,
                Ok(_) => SubstrateVerdict::Mismatch,
                Err(e) => SubstrateVerdict::Failure {
                    detail: e.to_string(),
                },
            },
            Substrate::Bridge(path) => invoke_bridge(path, set, seed, expanded),
        }
    }
}

/// Runs a bridge executable per the fixed protocol.
pub fn invoke_bridge(
    path: &Path,
    set: ParameterSet,
    seed: &[u8],
    expanded: &[u8],
) -> SubstrateVerdict {
    let output = Command::new(path)
        .arg(set.name())
        .arg(hex::encode(seed))
        .arg(hex::encode(expanded))
        .output();
    match output {
        Err(e) => SubstrateVerdict::Failure {
            detail: format!("bridge {} failed to start: {e}", path.display()),
        },
        Ok(out) => match out.status.code() {
            Some(0) => SubstrateVerdict::Consistent,
            Some(1) => SubstrateVerdict::Mismatch,
            code => SubstrateVerdict::Failure {
                detail: format!(
                    "bridge {} exited with {:?}: {}",
                    path.display(),
                    code,
                    String::from_utf8_lossy(&out.stderr).trim()
                ),
            },
        },
    }
}
