//! graph6 encoding (orders 0 to 32).
//!
//! The order is a single byte `n + 63`; the upper triangle follows column by
//! column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) in groups of six bits, each
//! group offset by 63, zero-padded at the end.

use crate::error::{Error, Result};
use crate::graph::{SmallGraph, MAX_ORDER};

const HEADER: &str = ">>graph6<<";

pub fn emit(g: &SmallGraph) -> String {
    let n = g.order();
    let mut out = String::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    out.push((n as u8 + 63) as char);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

pub fn parse(text: &str) -> Result<SmallGraph> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let (body, base) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (rest.as_bytes(), HEADER.len()),
        None => (trimmed.as_bytes(), 0),
    };
    let err = |offset: usize, reason: &str| Error::Graph6 {
        offset: base + offset,
        reason: reason.to_string(),
    };
    let Some(&first) = body.first() else {
        return Err(err(0, "empty input"));
    };
    if !(63..=126).contains(&first) {
        return Err(err(0, "order byte outside the printable graph6 range"));
    }
    let (n, mut pos) = if first == 126 {
        if body.len() < 4 {
            return Err(err(body.len(), "truncated extended order"));
        }
        let mut n = 0usize;
        for (k, &b) in body[1..4].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(err(1 + k, "invalid extended order byte"));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 4)
    } else {
        ((first - 63) as usize, 1)
    };
    if n > MAX_ORDER {
        return Err(err(0, &format!("order {n} is above the supported maximum {MAX_ORDER}")));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let expected = pos + pairs.div_ceil(6);
    if body.len() != expected {
        return Err(err(
            body.len().min(expected),
            &format!("expected {} bytes for order {n}, found {}", expected, body.len()),
        ));
    }
    let mut g = SmallGraph::empty(n)?;
    let mut k = 0usize;
    let mut chunk = 0u8;
    for j in 1..n {
        for i in 0..j {
            if k.is_multiple_of(6) {
                let b = body[pos];
                if !(63..=126).contains(&b) {
                    return Err(err(pos, "byte outside the printable graph6 range"));
                }
                chunk = b - 63;
                pos += 1;
            }
            if chunk & (1 << (5 - k % 6)) != 0 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    if !k.is_multiple_of(6) {
        let used = k % 6;
        if chunk & ((1u8 << (6 - used)) - 1) != 0 {
            return Err(err(pos - 1, "nonzero padding bits"));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_strings() {
        // nauty's own examples
        let k4 = SmallGraph::complete(4).unwrap();
        assert_eq!(emit(&k4), "C~");
        let p = SmallGraph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(emit(&p), "DQc");
        assert_eq!(parse("DQc").unwrap(), p);
    }

    #[test]
    fn empty_graph_roundtrips() {
        let g = SmallGraph::empty(0).unwrap();
        assert_eq!(emit(&g), "?");
        assert_eq!(parse("?").unwrap(), g);
        assert_eq!(emit(&SmallGraph::empty(1).unwrap()), "@");
    }

    #[test]
    fn header_and_newline_are_accepted() {
        assert_eq!(parse(">>graph6<<C~\n").unwrap(), SmallGraph::complete(4).unwrap());
    }

    #[test]
    fn order_32_roundtrips() {
        let g = SmallGraph::complete(32).unwrap();
        let s = emit(&g);
        assert_eq!(s.len(), 1 + 496usize.div_ceil(6));
        assert_eq!(parse(&s).unwrap(), g);
    }

    #[test]
    fn errors_carry_offsets() {
        match parse("").unwrap_err() {
            Error::Graph6 { offset, .. } => assert_eq!(offset, 0),
            e => panic!("{e}"),
        }
        // order 33
        match parse("`").unwrap_err() {
            Error::Graph6 { offset, reason } => {
                assert_eq!(offset, 0);
                assert!(reason.contains("33"));
            }
            e => panic!("{e}"),
        }
        // extended form with order 100
        assert!(parse("~?A?").is_err());
        // truncated body
        assert!(matches!(parse("D?").unwrap_err(), Error::Graph6 { offset: 2, .. }));
        // invalid byte inside the body
        assert!(matches!(parse("D Q").unwrap_err(), Error::Graph6 { .. }));
        // padding bit set: order 3 uses 3 bits of one byte
        assert!(matches!(parse("B@").unwrap_err(), Error::Graph6 { offset: 1, .. }));
    }
}
