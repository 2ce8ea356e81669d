//! Assurance library for ML-KEM / ML-DSA PKIX artifacts.
//!
//! The crate is organized as a pipeline:
//!
//! * [`der`], [`pem`], [`oid`]: a strict DER reader/writer (definite lengths
//!   only, minimal length encodings, bounded nesting) plus PEM framing.
//! * [`pkix`]: structural views over certificates, SubjectPublicKeyInfo and
//!   OneAsymmetricKey containers, with byte spans retained for reporting.
//! * [`mlkem`]: the 12-bit coefficient codec and the encapsulation-key
//!   canonicality / expanded-key hash checks.
//! * [`registry`]: the requirement registry (compiled-in and JSON forms)
//!   with topology validation, plus policy/workflow views in [`workflow`].
//! * [`detect`]: registry-driven detectors per artifact type.
//! * [`substrate`]: deterministic seed expansion and the external bridge
//!   protocol used for seed/expanded consistency checks.
//! * [`corpus`]: the deterministic valid corpus, the mutation catalogue and
//!   the hashed manifest.
//! * [`evaluate`]: corpus evaluation, coverage summaries and report output.
//! * [`replay`]: the end-to-end deterministic pipeline used by the CLI.

pub mod corpus;
pub mod der;
pub mod detect;
pub mod evaluate;
pub mod fsio;
pub mod mlkem;
pub mod oid;
pub mod pem;
pub mod pkix;
pub mod registry;
pub mod replay;
pub mod substrate;
pub mod workflow;

/// Process exit codes shared by the CLI and the replay pipeline.
pub mod exit {
    /// Run completed and every applicable criterion held.
    pub const OK: i32 = 0;
    /// Run completed but an assurance criterion failed.
    pub const ASSURANCE_FAILURE: i32 = 1;
    /// The pipeline itself could not run (I/O, bridge missing, bad inputs).
    pub const INFRASTRUCTURE: i32 = 2;
    /// Command line was malformed.
    pub const USAGE: i32 = 64;
}
