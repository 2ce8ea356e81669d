//! ML-KEM key byte layouts, the 12-bit coefficient codec, and the two
//! key-level checks built on them: encapsulation-key canonicality and the
//! expanded-key hash binding.
//!
//! Coefficients of the ring live in Z_q with q = 3329 but travel in 12-bit
//! lanes, so values 3329..=4095 are representable yet never produced by a
//! conforming encoder. Canonicality checking walks every lane of the
//! encoded key and flags the first out-of-range value.

use sha3::{Digest, Sha3_256};
use std::ops::Range;
use thiserror::Error;

/// Ring modulus.
pub const Q: u16 = 3329;

/// Coefficients per polynomial.
pub const N: usize = 256;

/// Encoded bytes per polynomial: 256 lanes of 12 bits.
pub const POLY_BYTES: usize = 384;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("{role} length is {actual}, expected {expected}")]
    WrongLength {
        role: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("coefficient {index} is {value}, out of 12-bit range")]
    CoefficientOutOfRange { index: usize, value: u16 },
}

/// Byte layout of one ML-KEM parameter set, fixed entirely by the module
/// rank k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MlKemLayout {
    pub k: usize,
}

impl MlKemLayout {
    /// Seed form is d || z, 32 bytes each.
    pub const SEED_LEN: usize = 64;

    pub fn from_k(k: usize) -> Option<MlKemLayout> {
        matches!(k, 2 | 3 | 4).then_some(MlKemLayout { k })
    }

    /// Encapsulation key: k encoded polynomials plus the 32-byte matrix seed.
    pub fn ek_len(&self) -> usize {
        POLY_BYTES * self.k + 32
    }

    /// Expanded decapsulation key: dk_pke || ek || H(ek) || z.
    pub fn dk_len(&self) -> usize {
        768 * self.k + 96
    }

    pub fn dk_pke_span(&self) -> Range<usize> {
        0..POLY_BYTES * self.k
    }

    pub fn ek_span(&self) -> Range<usize> {
        let start = POLY_BYTES * self.k;
        start..start + self.ek_len()
    }

    pub fn h_ek_span(&self) -> Range<usize> {
        let start = self.ek_span().end;
        start..start + 32
    }

    pub fn z_span(&self) -> Range<usize> {
        let start = self.h_ek_span().end;
        start..start + 32
    }
}

/// Unpacks one 384-byte block into 256 coefficients. Two coefficients share
/// three bytes: the low byte and low nibble of the middle byte form the
/// first lane, the rest the second.
pub fn byte_decode12(block: &[u8]) -> Result<Vec<u16>, CodecError> {
    if block.len() != POLY_BYTES {
        return Err(CodecError::WrongLength {
            role: "coefficient block",
            expected: POLY_BYTES,
            actual: block.len(),
        });
    }
    let mut coeffs = Vec::with_capacity(N);
    for chunk in block.chunks_exact(3) {
        let b0 = chunk[0] as u16;
        let b1 = chunk[1] as u16;
        let b2 = chunk[2] as u16;
        coeffs.push(b0 | ((b1 & 0x0f) << 8));
        coeffs.push((b1 >> 4) | (b2 << 4));
    }
    Ok(coeffs)
}

/// Packs 256 coefficients (each < 4096) into 384 bytes. Exact inverse of
/// [`byte_decode12`] over in-range values.
pub fn byte_encode12(coeffs: &[u16]) -> Result<Vec<u8>, CodecError> {
    if coeffs.len() != N {
        return Err(CodecError::WrongLength {
            role: "coefficient vector",
            expected: N,
            actual: coeffs.len(),
        });
    }
    if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, &c)| c >= 4096) {
        return Err(CodecError::CoefficientOutOfRange { index, value });
    }
    let mut out = Vec::with_capacity(POLY_BYTES);
    for pair in coeffs.chunks_exact(2) {
        let (c0, c1) = (pair[0], pair[1]);
        out.push((c0 & 0xff) as u8);
        out.push(((c0 >> 8) | ((c1 & 0x0f) << 4)) as u8);
        out.push((c1 >> 4) as u8);
    }
    Ok(out)
}

/// Outcome of the encapsulation-key canonicality walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalityVerdict {
    Canonical,
    /// At least one 12-bit lane holds a value >= q. `first_index` is the
    /// global coefficient index of the first offender.
    NonCanonical { first_index: usize, violations: usize },
}

/// Checks that every coefficient lane of the encoded key part of `ek` is
/// reduced mod q. The trailing 32 seed bytes are opaque and exempt.
pub fn check_ek_canonical(
    ek: &[u8],
    layout: MlKemLayout,
) -> Result<CanonicalityVerdict, CodecError> {
    if ek.len() != layout.ek_len() {
        return Err(CodecError::WrongLength {
            role: "encapsulation key",
            expected: layout.ek_len(),
            actual: ek.len(),
        });
    }
    let mut first_index = None;
    let mut violations = 0usize;
    for (block_no, block) in ek[..POLY_BYTES * layout.k].chunks_exact(POLY_BYTES).enumerate() {
        for (i, &coeff) in byte_decode12(block)?.iter().enumerate() {
            if coeff >= Q {
                violations += 1;
                first_index.get_or_insert(block_no * N + i);
            }
        }
    }
    Ok(match first_index {
        None => CanonicalityVerdict::Canonical,
        Some(first_index) => CanonicalityVerdict::NonCanonical {
            first_index,
            violations,
        },
    })
}

/// Outcome of the expanded-key hash binding check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashVerdict {
    Consistent,
    Mismatch,
}

/// Verifies the stored H(ek) segment of an expanded decapsulation key
/// against a fresh SHA3-256 of the embedded encapsulation key.
pub fn check_expanded_hash(dk: &[u8], layout: MlKemLayout) -> Result<HashVerdict, CodecError> {
    if dk.len() != layout.dk_len() {
        return Err(CodecError::WrongLength {
            role: "expanded decapsulation key",
            expected: layout.dk_len(),
            actual: dk.len(),
        });
    }
    let computed = Sha3_256::digest(&dk[layout.ek_span()]);
    if computed.as_slice() == &dk[layout.h_ek_span()] {
        Ok(HashVerdict::Consistent)
    } else {
        Ok(HashVerdict::Mismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block_with_prefix(prefix: &[u8]) -> Vec<u8> {
        let mut block = vec![0u8; POLY_BYTES];
        block[..prefix.len()].copy_from_slice(prefix);
        block
    }

    #[test]
    fn decode_packs_low_byte_and_nibble() {
        let coeffs = byte_decode12(&block_with_prefix(&[0xff, 0x0f, 0x00])).unwrap();
        assert_eq!(coeffs[0], 4095);
        assert_eq!(coeffs[1], 0);

        let coeffs = byte_decode12(&block_with_prefix(&[0x00, 0x0d, 0x00])).unwrap();
        assert_eq!(coeffs[0], 3328);
        assert_eq!(coeffs[1], 0);

        let coeffs = byte_decode12(&block_with_prefix(&[0x00, 0x00, 0x00])).unwrap();
        assert_eq!(&coeffs[..2], &[0, 0]);
    }

    #[test]
    fn encode_is_decode_inverse_on_samples() {
        let mut coeffs = vec![0u16; N];
        coeffs[0] = 1;
        let bytes = byte_encode12(&coeffs).unwrap();
        assert_eq!(&bytes[..3], &[0x01, 0x00, 0x00]);
        assert_eq!(byte_decode12(&bytes).unwrap(), coeffs);

        // A spread of lane values including both boundary sides of q.
        let coeffs: Vec<u16> = (0..N as u16).map(|i| (i * 13 + 3300) % 4096).collect();
        let bytes = byte_encode12(&coeffs).unwrap();
        assert_eq!(byte_decode12(&bytes).unwrap(), coeffs);
    }

    #[test]
    fn encode_rejects_out_of_range() {
        let mut coeffs = vec![0u16; N];
        coeffs[17] = 4096;
        assert_eq!(
            byte_encode12(&coeffs),
            Err(CodecError::CoefficientOutOfRange {
                index: 17,
                value: 4096
            })
        );
    }

    #[test]
    fn layout_lengths() {
        let l2 = MlKemLayout::from_k(2).unwrap();
        let l3 = MlKemLayout::from_k(3).unwrap();
        let l4 = MlKemLayout::from_k(4).unwrap();
        assert_eq!((l2.ek_len(), l2.dk_len()), (800, 1632));
        assert_eq!((l3.ek_len(), l3.dk_len()), (1184, 2400));
        assert_eq!((l4.ek_len(), l4.dk_len()), (1568, 3168));
        assert!(MlKemLayout::from_k(5).is_none());

        // Spans tile the expanded key exactly.
        for l in [l2, l3, l4] {
            assert_eq!(l.dk_pke_span().end, l.ek_span().start);
            assert_eq!(l.ek_span().end, l.h_ek_span().start);
            assert_eq!(l.h_ek_span().end, l.z_span().start);
            assert_eq!(l.z_span().end, l.dk_len());
            assert_eq!(l.ek_span().len(), l.ek_len());
        }
    }

    #[test]
    fn canonicality_flags_first_offender() {
        let layout = MlKemLayout::from_k(2).unwrap();
        // All coefficients q-1: canonical.
        let coeffs = vec![Q - 1; N];
        let block = byte_encode12(&coeffs).unwrap();
        let mut ek = Vec::new();
        ek.extend_from_slice(&block);
        ek.extend_from_slice(&block);
        ek.extend_from_slice(&[0xab; 32]);
        assert_eq!(
            check_ek_canonical(&ek, layout).unwrap(),
            CanonicalityVerdict::Canonical
        );

        // Raise lane 300 (second polynomial) to q.
        let mut coeffs2 = coeffs.clone();
        coeffs2[300 - N] = Q;
        let mut ek2 = byte_encode12(&coeffs).unwrap();
        ek2.extend_from_slice(&byte_encode12(&coeffs2).unwrap());
        ek2.extend_from_slice(&[0xab; 32]);
        assert_eq!(
            check_ek_canonical(&ek2, layout).unwrap(),
            CanonicalityVerdict::NonCanonical {
                first_index: 300,
                violations: 1
            }
        );

        // Seed bytes are exempt: all-0xff trailer stays canonical.
        let mut ek3 = ek.clone();
        for b in &mut ek3[layout.ek_len() - 32..] {
            *b = 0xff;
        }
        assert_eq!(
            check_ek_canonical(&ek3, layout).unwrap(),
            CanonicalityVerdict::Canonical
        );

        assert!(check_ek_canonical(&ek[..799], layout).is_err());
    }

    #[test]
    fn expanded_hash_binds_ek_segment() {
        let layout = MlKemLayout::from_k(2).unwrap();
        let mut dk = vec![0u8; layout.dk_len()];
        for (i, b) in dk.iter_mut().enumerate() {
            *b = (i % 251) as u8;
        }
        let digest = Sha3_256::digest(&dk[layout.ek_span()]);
        dk[layout.h_ek_span()].copy_from_slice(&digest);
        assert_eq!(
            check_expanded_hash(&dk, layout).unwrap(),
            HashVerdict::Consistent
        );

        // Any h_ek byte flip breaks the binding.
        let mut bad = dk.clone();
        bad[layout.h_ek_span().start + 5] ^= 0x01;
        assert_eq!(
            check_expanded_hash(&bad, layout).unwrap(),
            HashVerdict::Mismatch
        );

        // dk_pke and z are outside the binding.
        let mut benign = dk.clone();
        benign[0] ^= 0xff;
        benign[layout.z_span().start] ^= 0xff;
        assert_eq!(
            check_expanded_hash(&benign, layout).unwrap(),
            HashVerdict::Consistent
        );

        assert!(check_expanded_hash(&dk[..100], layout).is_err());
    }
}
