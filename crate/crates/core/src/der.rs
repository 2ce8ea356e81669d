//! Strict DER reader and writer.
//!
//! Only definite-length, minimally-encoded DER is accepted. Indefinite
//! lengths, non-minimal length encodings, high-tag-number form and content
//! that overruns the buffer are all hard errors: an artifact that needs a
//! lenient decoder is already outside the profile this crate checks.
//!
//! Two representations are provided. [`DerElement`] is a flat view with
//! absolute byte offsets, used by the structural parsers so findings can
//! carry spans. [`Node`] is an owned tree, used by the corpus forge: edits
//! re-encode through [`Node::encode`], which recomputes every enclosing
//! length.

use std::ops::Range;
use thiserror::Error;

/// Maximum nesting depth accepted when descending constructed elements.
pub const MAX_DEPTH: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerError {
    #[error("truncated content at offset {offset}: need {needed} bytes, {available} available")]
    TruncatedContent {
        offset: usize,
        needed: usize,
        available: usize,
    },
    #[error("indefinite length at offset {offset}")]
    IndefiniteLength { offset: usize },
    #[error("non-minimal length encoding at offset {offset}")]
    NonMinimalLength { offset: usize },
    #[error("invalid length encoding at offset {offset}")]
    InvalidLength { offset: usize },
    #[error("reserved tag byte 0x{tag:02x} at offset {offset}")]
    ReservedTag { tag: u8, offset: usize },
    #[error("{trailing} trailing bytes after element ending at offset {end}")]
    TrailingGarbage { end: usize, trailing: usize },
    #[error("nesting depth {depth} exceeds limit {MAX_DEPTH}")]
    NestingTooDeep { depth: usize },
    #[error("constructed element expected at offset {offset}")]
    NotConstructed { offset: usize },
    #[error("bit string at offset {offset} has empty content")]
    EmptyBitString { offset: usize },
    #[error("bit string at offset {offset}: unused-bit count {unused} out of range")]
    UnusedBitsOutOfRange { offset: usize, unused: u8 },
    #[error("bit string at offset {offset}: padding bits are not zero")]
    NonzeroPaddingBits { offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    Universal,
    Application,
    Context,
    Private,
}

/// A low-tag-number DER tag. High-tag-number form (five low bits all set)
/// is rejected at parse time, so `number` is always < 31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tag {
    pub class: Class,
    pub number: u8,
    pub constructed: bool,
}

impl Tag {
    pub const BOOLEAN: Tag = Tag::universal(1);
    pub const INTEGER: Tag = Tag::universal(2);
    pub const BIT_STRING: Tag = Tag::universal(3);
    pub const OCTET_STRING: Tag = Tag::universal(4);
    pub const NULL: Tag = Tag::universal(5);
    pub const OBJECT_IDENTIFIER: Tag = Tag::universal(6);
    pub const UTF8_STRING: Tag = Tag::universal(12);
    pub const SEQUENCE: Tag = Tag::constructed_universal(16);
    pub const SET: Tag = Tag::constructed_universal(17);
    pub const UTC_TIME: Tag = Tag::universal(23);

    pub const fn universal(number: u8) -> Tag {
        Tag {
            class: Class::Universal,
            number,
            constructed: false,
        }
    }

    pub const fn constructed_universal(number: u8) -> Tag {
        Tag {
            class: Class::Universal,
            number,
            constructed: true,
        }
    }

    /// Context-specific tag, primitive form ([0] IMPLICIT over a primitive).
    pub const fn context(number: u8) -> Tag {
        Tag {
            class: Class::Context,
            number,
            constructed: false,
        }
    }

    /// Context-specific tag, constructed form ([0] EXPLICIT wrappers).
    pub const fn context_constructed(number: u8) -> Tag {
        Tag {
            class: Class::Context,
            number,
            constructed: true,
        }
    }

    pub fn byte(self) -> u8 {
        let class = match self.class {
            Class::Universal => 0x00,
            Class::Application => 0x40,
            Class::Context => 0x80,
            Class::Private => 0xc0,
        };
        class | if self.constructed { 0x20 } else { 0x00 } | (self.number & 0x1f)
    }

    pub fn from_byte(byte: u8, offset: usize) -> Result<Tag, DerError> {
        if byte & 0x1f == 0x1f {
            // High-tag-number form; nothing in this profile uses it.
            return Err(DerError::ReservedTag { tag: byte, offset });
        }
        let class = match byte >> 6 {
            0 => Class::Universal,
            1 => Class::Application,
            2 => Class::Context,
            _ => Class::Private,
        };
        Ok(Tag {
            class,
            number: byte & 0x1f,
            constructed: byte & 0x20 != 0,
        })
    }
}

/// Flat view of one TLV. Offsets are absolute within the parse buffer, so a
/// view produced deep inside a certificate still locates its bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerElement {
    pub tag: Tag,
    /// Offset of the tag byte.
    pub offset: usize,
    /// Content byte range (absolute).
    pub content: Range<usize>,
}

impl DerElement {
    /// Full TLV span, header included.
    pub fn span(&self) -> Range<usize> {
        self.offset..self.content.end
    }

    pub fn content_bytes<'a>(&self, buf: &'a [u8]) -> &'a [u8] {
        &buf[self.content.clone()]
    }

    pub fn bytes<'a>(&self, buf: &'a [u8]) -> &'a [u8] {
        &buf[self.span()]
    }
}

/// Parses the definite, minimally-encoded length starting at `offset`.
/// Returns (content_len, length_field_len).
fn parse_length(buf: &[u8], offset: usize) -> Result<(usize, usize), DerError> {
    let first = *buf.get(offset).ok_or(DerError::TruncatedContent {
        offset,
        needed: 1,
        available: 0,
    })?;
    if first == 0x80 {
        return Err(DerError::IndefiniteLength { offset });
    }
    if first < 0x80 {
        return Ok((first as usize, 1));
    }
    if first == 0xff {
        return Err(DerError::InvalidLength { offset });
    }
    let n = (first & 0x7f) as usize;
    if n > std::mem::size_of::<usize>() {
        return Err(DerError::InvalidLength { offset });
    }
    let avail = buf.len().saturating_sub(offset + 1);
    if avail < n {
        return Err(DerError::TruncatedContent {
            offset,
            needed: n,
            available: avail,
        });
    }
    let mut value: usize = 0;
    for i in 0..n {
        value = (value << 8) | buf[offset + 1 + i] as usize;
    }
    // Minimality: no leading zero octet, and long form only above 127.
    if buf[offset + 1] == 0 || value < 0x80 {
        return Err(DerError::NonMinimalLength { offset });
    }
    Ok((value, 1 + n))
}

/// Parses one element at `offset`. Content must fit inside `buf`; nothing
/// after the element is examined.
pub fn parse_element(buf: &[u8], offset: usize) -> Result<DerElement, DerError> {
    let tag_byte = *buf.get(offset).ok_or(DerError::TruncatedContent {
        offset,
        needed: 1,
        available: 0,
    })?;
    let tag = Tag::from_byte(tag_byte, offset)?;
    let (len, len_len) = parse_length(buf, offset + 1)?;
    let content_start = offset + 1 + len_len;
    let available = buf.len().saturating_sub(content_start);
    if available < len {
        return Err(DerError::TruncatedContent {
            offset,
            needed: len,
            available,
        });
    }
    Ok(DerElement {
        tag,
        offset,
        content: content_start..content_start + len,
    })
}

/// Parses the single element covering the whole buffer. Trailing bytes are
/// rejected, not skipped.
pub fn parse_root(buf: &[u8]) -> Result<DerElement, DerError> {
    let elem = parse_element(buf, 0)?;
    let end = elem.content.end;
    if end != buf.len() {
        return Err(DerError::TrailingGarbage {
            end,
            trailing: buf.len() - end,
        });
    }
    Ok(elem)
}

/// Enumerates the immediate children of a constructed element. The children
/// must tile the content range exactly.
pub fn parse_children(buf: &[u8], elem: &DerElement) -> Result<Vec<DerElement>, DerError> {
    if !elem.tag.constructed {
        return Err(DerError::NotConstructed {
            offset: elem.offset,
        });
    }
    let mut children = Vec::new();
    let mut at = elem.content.start;
    while at < elem.content.end {
        let child = parse_element(buf, at)?;
        if child.content.end > elem.content.end {
            return Err(DerError::TruncatedContent {
                offset: at,
                needed: child.content.end - at,
                available: elem.content.end - at,
            });
        }
        at = child.content.end;
        children.push(child);
    }
    Ok(children)
}

/// Minimal DER length octets for `len`.
pub fn encode_len(len: usize) -> Vec<u8> {
    if len < 0x80 {
        return vec![len as u8];
    }
    let mut be = len.to_be_bytes().to_vec();
    while be.first() == Some(&0) {
        be.remove(0);
    }
    let mut out = vec![0x80 | be.len() as u8];
    out.extend_from_slice(&be);
    out
}

/// One TLV from tag and content bytes.
pub fn encode_tlv(tag: Tag, content: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(content.len() + 4);
    out.push(tag.byte());
    out.extend_from_slice(&encode_len(content.len()));
    out.extend_from_slice(content);
    out
}

/// Owned DER tree. Constructed nodes re-derive their lengths on encode, so
/// any edit deep in the tree automatically fixes every enclosing length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Primitive { tag: Tag, content: Vec<u8> },
    Constructed { tag: Tag, children: Vec<Node> },
}

impl Node {
    pub fn primitive(tag: Tag, content: Vec<u8>) -> Node {
        Node::Primitive { tag, content }
    }

    pub fn constructed(tag: Tag, children: Vec<Node>) -> Node {
        Node::Constructed { tag, children }
    }

    pub fn sequence(children: Vec<Node>) -> Node {
        Node::constructed(Tag::SEQUENCE, children)
    }

    pub fn tag(&self) -> Tag {
        match self {
            Node::Primitive { tag, .. } | Node::Constructed { tag, .. } => *tag,
        }
    }

    pub fn children(&self) -> Option<&[Node]> {
        match self {
            Node::Constructed { children, .. } => Some(children),
            Node::Primitive { .. } => None,
        }
    }

    pub fn children_mut(&mut self) -> Option<&mut Vec<Node>> {
        match self {
            Node::Constructed { children, .. } => Some(children),
            Node::Primitive { .. } => None,
        }
    }

    pub fn primitive_content(&self) -> Option<&[u8]> {
        match self {
            Node::Primitive { content, .. } => Some(content),
            Node::Constructed { .. } => None,
        }
    }

    pub fn primitive_content_mut(&mut self) -> Option<&mut Vec<u8>> {
        match self {
            Node::Primitive { content, .. } => Some(content),
            Node::Constructed { .. } => None,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        match self {
            Node::Primitive { tag, content } => encode_tlv(*tag, content),
            Node::Constructed { tag, children } => {
                let mut content = Vec::new();
                for child in children {
                    content.extend_from_slice(&child.encode());
                }
                encode_tlv(*tag, &content)
            }
        }
    }
}

fn parse_node(buf: &[u8], elem: &DerElement, depth: usize) -> Result<Node, DerError> {
    if depth > MAX_DEPTH {
        return Err(DerError::NestingTooDeep { depth });
    }
    if elem.tag.constructed {
        let mut children = Vec::new();
        for child in parse_children(buf, elem)? {
            children.push(parse_node(buf, &child, depth + 1)?);
        }
        Ok(Node::Constructed {
            tag: elem.tag,
            children,
        })
    } else {
        Ok(Node::Primitive {
            tag: elem.tag,
            content: elem.content_bytes(buf).to_vec(),
        })
    }
}

/// Parses a whole buffer into an owned tree, enforcing strictness at every
/// level. Round-trips byte-for-byte through [`Node::encode`].
pub fn parse_tree(buf: &[u8]) -> Result<Node, DerError> {
    let root = parse_root(buf)?;
    parse_node(buf, &root, 1)
}

/// Decoded BIT STRING content: the unused-bit count plus the raw data bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStringContent {
    pub unused_bits: u8,
    pub data: Vec<u8>,
}

impl BitStringContent {
    /// Number of significant bits.
    pub fn bit_len(&self) -> usize {
        self.data.len() * 8 - self.unused_bits as usize
    }

    /// Bit at position `i`, most-significant-first. Out-of-range reads are
    /// false, matching the named-bit convention that absent bits are clear.
    pub fn bit(&self, i: usize) -> bool {
        if i >= self.bit_len() {
            return false;
        }
        self.data[i / 8] & (0x80 >> (i % 8)) != 0
    }

    /// Positions of all set bits, ascending.
    pub fn set_bits(&self) -> Vec<usize> {
        (0..self.bit_len()).filter(|&i| self.bit(i)).collect()
    }
}

/// Decodes BIT STRING content octets (the bytes after the tag and length).
/// `offset` is only used for error reporting.
pub fn parse_bit_string_content(
    content: &[u8],
    offset: usize,
) -> Result<BitStringContent, DerError> {
    let (&unused, data) = content
        .split_first()
        .ok_or(DerError::EmptyBitString { offset })?;
    if unused > 7 || (data.is_empty() && unused != 0) {
        return Err(DerError::UnusedBitsOutOfRange { offset, unused });
    }
    if unused > 0 {
        let last = data[data.len() - 1];
        if last & ((1u16 << unused) as u8 - 1) != 0 {
            return Err(DerError::NonzeroPaddingBits { offset });
        }
    }
    Ok(BitStringContent {
        unused_bits: unused,
        data: data.to_vec(),
    })
}

/// Encodes a named-bit set as BIT STRING content octets. Trailing zero bits
/// are trimmed as DER requires, so the empty set encodes as a single zero
/// octet.
pub fn encode_named_bits(bits: &[usize]) -> Vec<u8> {
    let Some(&max) = bits.iter().max() else {
        return vec![0x00];
    };
    let nbytes = max / 8 + 1;
    let mut data = vec![0u8; nbytes];
    for &b in bits {
        data[b / 8] |= 0x80 >> (b % 8);
    }
    let unused = (nbytes * 8 - (max + 1)) as u8;
    let mut out = vec![unused];
    out.extend_from_slice(&data);
    out
}

/// Minimal two's-complement INTEGER content for a non-negative value.
pub fn encode_uint_content(value: u64) -> Vec<u8> {
    let mut be = value.to_be_bytes().to_vec();
    while be.len() > 1 && be[0] == 0 && be[1] & 0x80 == 0 {
        be.remove(0);
    }
    if be[0] & 0x80 != 0 {
        be.insert(0, 0);
    }
    be
}
