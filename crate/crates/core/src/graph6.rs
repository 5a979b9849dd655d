//! graph6 encoding, as produced by nauty's `geng` and friends.
//!
//! A line is a size header followed by the upper triangle of the adjacency
//! matrix in column order (`(0,1), (0,2), (1,2), (0,3), ...`), packed six bits
//! per byte, big-endian, each byte offset by 63.

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

const OFFSET: u8 = 63;
const SHORT_LIMIT: usize = 62;
const MEDIUM_LIMIT: usize = 258_047;
const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph6 error at byte {offset}: {kind}")]
pub struct Graph6Error {
    pub offset: usize,
    pub kind: Graph6ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6ErrorKind {
    #[error("empty line")]
    Empty,
    #[error("malformed size header")]
    MalformedHeader,
    #[error("byte {0:#04x} outside the printable range 63..=126")]
    OutOfRange(u8),
    #[error("payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{0} unexpected bytes after the payload")]
    TrailingData(usize),
    #[error("non-zero padding bits in the final byte")]
    NonZeroPadding,
    #[error("graph order {0} exceeds the supported limit of {MAX_VERTICES}")]
    TooLarge(usize),
}

fn error(offset: usize, kind: Graph6ErrorKind) -> Graph6Error {
    Graph6Error { offset, kind }
}

/// Decodes one graph6 line. A trailing newline and the optional `>>graph6<<`
/// file header are accepted.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let trimmed = line.trim_end_matches(['\n', '\r']);
    let (bytes, base) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (rest.as_bytes(), HEADER.len()),
        None => (trimmed.as_bytes(), 0),
    };
    if bytes.is_empty() {
        return Err(error(base, Graph6ErrorKind::Empty));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(OFFSET..=126).contains(&b) {
            return Err(error(base + i, Graph6ErrorKind::OutOfRange(b)));
        }
    }

    let (n, header_len) = decode_order(bytes).map_err(|(at, kind)| error(base + at, kind))?;
    if n > MAX_VERTICES {
        return Err(error(base, Graph6ErrorKind::TooLarge(n)));
    }

    let bit_count = n * n.saturating_sub(1) / 2;
    let expected = bit_count.div_ceil(6);
    let payload = &bytes[header_len..];
    if payload.len() < expected {
        return Err(error(
            base + bytes.len(),
            Graph6ErrorKind::Truncated {
                expected,
                found: payload.len(),
            },
        ));
    }
    if payload.len() > expected {
        return Err(error(
            base + header_len + expected,
            Graph6ErrorKind::TrailingData(payload.len() - expected),
        ));
    }
    let pad = expected * 6 - bit_count;
    if pad > 0 {
        let last = payload[expected - 1] - OFFSET;
        if last & ((1 << pad) - 1) != 0 {
            return Err(error(
                base + header_len + expected - 1,
                Graph6ErrorKind::NonZeroPadding,
            ));
        }
    }

    let mut edges = Vec::new();
    let mut bit = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = payload[bit / 6] - OFFSET;
            if byte >> (5 - bit % 6) & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Ok(Graph::from_edges(n, edges).expect("decoded upper triangle is a simple graph"))
}

/// Returns the order and the header length in bytes.
fn decode_order(bytes: &[u8]) -> Result<(usize, usize), (usize, Graph6ErrorKind)> {
    let value = |range: std::ops::Range<usize>| -> Result<usize, (usize, Graph6ErrorKind)> {
        if bytes.len() < range.end {
            return Err((bytes.len(), Graph6ErrorKind::MalformedHeader));
        }
        Ok(bytes[range]
            .iter()
            .fold(0usize, |acc, &b| acc << 6 | usize::from(b - OFFSET)))
    };
    if bytes[0] != b'~' {
        return Ok((usize::from(bytes[0] - OFFSET), 1));
    }
    if bytes.get(1) == Some(&b'~') {
        let n = value(2..8)?;
        if n <= MEDIUM_LIMIT {
            return Err((0, Graph6ErrorKind::MalformedHeader));
        }
        return Ok((n, 8));
    }
    let n = value(1..4)?;
    if n <= SHORT_LIMIT {
        return Err((0, Graph6ErrorKind::MalformedHeader));
    }
    Ok((n, 4))
}

/// Encodes a graph as a graph6 line, without a trailing newline.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::with_capacity(8 + (n * n) / 12);
    if n <= SHORT_LIMIT {
        out.push(n as u8 + OFFSET);
    } else if n <= MEDIUM_LIMIT {
        out.push(b'~');
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + OFFSET));
    } else {
        out.extend(*b"~~");
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + OFFSET));
    }

    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(acc + OFFSET);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + OFFSET);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}
