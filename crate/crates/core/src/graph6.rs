//! graph6 encoding (no `>>graph6<<` header).
//!
//! Layout: size prefix `N(n)`, then the upper triangle `x(i,j)` for
//! `0 <= i < j < n` ordered by column `j` then row `i`, packed six bits per
//! byte (most significant first), zero padded, each byte offset by 63.

use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::Graph;

const OFFSET: u8 = 63;
const SHORT_MAX: usize = 62;
const MEDIUM_MAX: usize = 258_047;
const LONG_MAX: usize = (1 << 36) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 line")]
    Empty,
    #[error("byte {byte:#04x} at position {position} outside the printable range 63..=126")]
    ByteOutOfRange { byte: u8, position: usize },
    #[error("malformed size prefix")]
    BadLength,
    #[error("expected {expected} data bytes, found {found}")]
    WrongDataLength { expected: usize, found: usize },
    #[error("nonzero padding bits in final byte")]
    NonzeroPadding,
    #[error("graph too large for graph6 ({0} vertices)")]
    TooLarge(usize),
}

fn six(byte: u8, position: usize) -> Result<u8, Graph6Error> {
    if !(63..=126).contains(&byte) {
        return Err(Graph6Error::ByteOutOfRange { byte, position });
    }
    Ok(byte - OFFSET)
}

fn read_big(bytes: &[u8], start: usize, count: usize) -> Result<usize, Graph6Error> {
    if bytes.len() < start + count {
        return Err(Graph6Error::BadLength);
    }
    let mut n = 0usize;
    for (i, &b) in bytes[start..start + count].iter().enumerate() {
        n = (n << 6) | six(b, start + i)? as usize;
    }
    Ok(n)
}

/// Returns `(n, header_len)`.
fn parse_size(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let first = *bytes.first().ok_or(Graph6Error::Empty)?;
    if first != 126 {
        return Ok((six(first, 0)? as usize, 1));
    }
    if bytes.get(1) == Some(&126) {
        Ok((read_big(bytes, 2, 6)?, 8))
    } else {
        Ok((read_big(bytes, 1, 3)?, 4))
    }
}

/// Number of upper-triangle bits for `n` vertices.
fn pair_bits(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.trim_end_matches(['\n', '\r']).as_bytes();
    let (n, header) = parse_size(bytes)?;
    let bits = pair_bits(n);
    let expected = bits.div_ceil(6);
    let data = &bytes[header..];
    if data.len() != expected {
        return Err(Graph6Error::WrongDataLength {
            expected,
            found: data.len(),
        });
    }
    let mut values = Vec::with_capacity(data.len());
    for (i, &b) in data.iter().enumerate() {
        values.push(six(b, header + i)?);
    }
    let pad = expected * 6 - bits;
    if pad > 0 {
        let mask = (1u8 << pad) - 1;
        if values.last().is_some_and(|&v| v & mask != 0) {
            return Err(Graph6Error::NonzeroPadding);
        }
    }

    let mut rows = vec![VertexSet::empty(n); n];
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            if (values[k / 6] >> (5 - k % 6)) & 1 == 1 {
                rows[i].insert(j);
                rows[j].insert(i);
            }
            k += 1;
        }
    }
    Ok(Graph::from_rows(rows).expect("graph6 decoding yields a simple graph"))
}

pub fn write_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n();
    let mut out: Vec<u8> = Vec::with_capacity(8 + pair_bits(n).div_ceil(6));
    if n <= SHORT_MAX {
        out.push(n as u8 + OFFSET);
    } else if n <= MEDIUM_MAX {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + OFFSET);
        }
    } else if n <= LONG_MAX {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + OFFSET);
        }
    } else {
        return Err(Graph6Error::TooLarge(n));
    }

    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let row = g.neighbors(j);
        for i in 0..j {
            acc = (acc << 1) | row.contains(i) as u8;
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
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_by_hand() {
        // 'D' = 5 vertices; '?' = 000000, '{' = 111100: pairs (0,4),(1,4),(2,4),(3,4)
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(write_graph6(&g).unwrap(), "D?{");
    }

    #[test]
    fn small_writes() {
        assert_eq!(write_graph6(&Graph::empty(1)).unwrap(), "@");
        assert_eq!(write_graph6(&Graph::empty(0)).unwrap(), "?");
        // K2: one bit set, padded: 100000 = 32 -> 95 '_'
        assert_eq!(write_graph6(&Graph::complete(2)).unwrap(), "A_");
        assert_eq!(write_graph6(&Graph::cycle(5)).unwrap(), "Dhc");
        assert_eq!(write_graph6(&Graph::petersen()).unwrap().len(), 9);
    }

    #[test]
    fn medium_size_prefix() {
        let g = Graph::path(100);
        let s = write_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        assert_eq!(&s.as_bytes()[1..4], &[63, 63 + 1, 63 + 36]);
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert!(matches!(
            parse_graph6("D?"),
            Err(Graph6Error::WrongDataLength {
                expected: 2,
                found: 1
            })
        ));
        // '|' = 111101, padding bit set
        assert_eq!(parse_graph6("D?|"), Err(Graph6Error::NonzeroPadding));
        assert!(matches!(
            parse_graph6("D? "),
            Err(Graph6Error::ByteOutOfRange {
                byte: b' ',
                position: 2
            })
        ));
        assert_eq!(parse_graph6("~?"), Err(Graph6Error::BadLength));
    }
}
