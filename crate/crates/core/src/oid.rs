//! OBJECT IDENTIFIER values: dotted arcs to content octets and back.
//!
//! Arc subidentifiers use base-128 with the continuation bit in the high
//! bit; the first two arcs share one subidentifier as `40 * a0 + a1`.
//! Decoding rejects non-minimal subidentifiers (a leading 0x80 octet).

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OidError {
    #[error("object identifier needs at least two arcs")]
    TooFewArcs,
    #[error("first arc must be 0, 1 or 2")]
    FirstArcRange,
    #[error("second arc must be below 40 when the first arc is 0 or 1")]
    SecondArcRange,
    #[error("empty object identifier content")]
    EmptyContent,
    #[error("truncated arc at content offset {offset}")]
    TruncatedArc { offset: usize },
    #[error("non-minimal arc encoding at content offset {offset}")]
    NonMinimalArc { offset: usize },
    #[error("arc value overflow at content offset {offset}")]
    ArcOverflow { offset: usize },
    #[error("malformed dotted form: {0}")]
    MalformedDotted(String),
}

/// An object identifier held as its dotted arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectIdentifierValue {
    arcs: Vec<u64>,
}

impl ObjectIdentifierValue {
    pub fn new(arcs: Vec<u64>) -> Result<Self, OidError> {
        if arcs.len() < 2 {
            return Err(OidError::TooFewArcs);
        }
        if arcs[0] > 2 {
            return Err(OidError::FirstArcRange);
        }
        if arcs[0] < 2 && arcs[1] >= 40 {
            return Err(OidError::SecondArcRange);
        }
        Ok(ObjectIdentifierValue { arcs })
    }

    pub fn arcs(&self) -> &[u64] {
        &self.arcs
    }

    /// Content octets (no tag, no length).
    pub fn encode_content(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let first = 40 * self.arcs[0] + self.arcs[1];
        push_subidentifier(&mut out, first);
        for &arc in &self.arcs[2..] {
            push_subidentifier(&mut out, arc);
        }
        out
    }

    /// Decodes content octets (no tag, no length).
    pub fn decode_content(content: &[u8]) -> Result<Self, OidError> {
        if content.is_empty() {
            return Err(OidError::EmptyContent);
        }
        let mut arcs = Vec::new();
        let mut at = 0usize;
        while at < content.len() {
            let start = at;
            if content[at] == 0x80 {
                return Err(OidError::NonMinimalArc { offset: start });
            }
            let mut value: u64 = 0;
            loop {
                let byte = *content
                    .get(at)
                    .ok_or(OidError::TruncatedArc { offset: start })?;
                if value > (u64::MAX >> 7) {
                    return Err(OidError::ArcOverflow { offset: start });
                }
                value = (value << 7) | (byte & 0x7f) as u64;
                at += 1;
                if byte & 0x80 == 0 {
                    break;
                }
            }
            if arcs.is_empty() {
                if value < 40 {
                    arcs.push(0);
                    arcs.push(value);
                } else if value < 80 {
                    arcs.push(1);
                    arcs.push(value - 40);
                } else {
                    arcs.push(2);
                    arcs.push(value - 80);
                }
            } else {
                arcs.push(value);
            }
        }
        ObjectIdentifierValue::new(arcs)
    }
}

fn push_subidentifier(out: &mut Vec<u8>, value: u64) {
    let mut shifts = 0;
    while value >> (7 * (shifts + 1)) != 0 {
        shifts += 1;
    }
    for i in (1..=shifts).rev() {
        out.push(0x80 | ((value >> (7 * i)) & 0x7f) as u8);
    }
    out.push((value & 0x7f) as u8);
}

impl fmt::Display for ObjectIdentifierValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for arc in &self.arcs {
            if !first {
                write!(f, ".")?;
            }
            write!(f, "{arc}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for ObjectIdentifierValue {
    type Err = OidError;

    fn from_str(s: &str) -> Result<Self, OidError> {
        let arcs = s
            .split('.')
            .map(|part| {
                part.parse::<u64>()
                    .map_err(|_| OidError::MalformedDotted(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ObjectIdentifierValue::new(arcs)
    }
}

/// Shorthand for tables of well-known identifiers.
pub fn oid(arcs: &[u64]) -> ObjectIdentifierValue {
    ObjectIdentifierValue::new(arcs.to_vec()).expect("static arcs are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent reference decoder: reads base-128 subidentifiers without
    /// sharing any code with the production path above.
    fn reference_decode(content: &[u8]) -> Vec<u64> {
        let mut subids = Vec::new();
        let mut acc: u64 = 0;
        for &b in content {
            acc = acc * 128 + (b & 0x7f) as u64;
            if b & 0x80 == 0 {
                subids.push(acc);
                acc = 0;
            }
        }
        let mut arcs = Vec::new();
        let first = subids[0];
        if first < 80 {
            arcs.push(first / 40);
            arcs.push(first % 40);
        } else {
            arcs.push(2);
            arcs.push(first - 80);
        }
        arcs.extend_from_slice(&subids[1..]);
        arcs
    }

    #[test]
    fn key_usage_oid_bytes() {
        let v = oid(&[2, 5, 29, 15]);
        assert_eq!(v.encode_content(), vec![0x55, 0x1d, 0x0f]);
        assert_eq!(reference_decode(&v.encode_content()), vec![2, 5, 29, 15]);
    }

    #[test]
    fn mlkem768_oid_bytes() {
        let v = oid(&[2, 16, 840, 1, 101, 3, 4, 4, 2]);
        assert_eq!(
            v.encode_content(),
            vec![0x60, 0x86, 0x48, 0x01, 0x65, 0x03, 0x04, 0x04, 0x02]
        );
        assert_eq!(
            reference_decode(&v.encode_content()),
            vec![2, 16, 840, 1, 101, 3, 4, 4, 2]
        );
    }

    #[test]
    fn zero_zero_encodes_one_octet() {
        let v = oid(&[0, 0]);
        assert_eq!(v.encode_content(), vec![0x00]);
        assert_eq!(
            ObjectIdentifierValue::decode_content(&[0x00]).unwrap(),
            v
        );
    }

    #[test]
    fn rejects_malformed_content() {
        assert_eq!(
            ObjectIdentifierValue::decode_content(&[]),
            Err(OidError::EmptyContent)
        );
        assert_eq!(
            ObjectIdentifierValue::decode_content(&[0x80, 0x01]),
            Err(OidError::NonMinimalArc { offset: 0 })
        );
        assert_eq!(
            ObjectIdentifierValue::decode_content(&[0x55, 0x9d]),
            Err(OidError::TruncatedArc { offset: 1 })
        );
    }

    #[test]
    fn rejects_bad_arc_shapes() {
        assert_eq!(
            ObjectIdentifierValue::new(vec![1]),
            Err(OidError::TooFewArcs)
        );
        assert_eq!(
            ObjectIdentifierValue::new(vec![3, 1]),
            Err(OidError::FirstArcRange)
        );
        assert_eq!(
            ObjectIdentifierValue::new(vec![1, 40]),
            Err(OidError::SecondArcRange)
        );
        // First arc 2 allows a large second arc.
        assert!(ObjectIdentifierValue::new(vec![2, 999]).is_ok());
    }

    #[test]
    fn dotted_form_round_trips() {
        let v: ObjectIdentifierValue = "1.2.840.113549.1.1.11".parse().unwrap();
        assert_eq!(v.to_string(), "1.2.840.113549.1.1.11");
        assert_eq!(
            ObjectIdentifierValue::decode_content(&v.encode_content()).unwrap(),
            v
        );
    }
}
