//! Edge-list and graph6 text formats.
//!
//! Edge list: a header line `n m`, then `m` lines `u v` with `0 ≤ u < v < n`,
//! ASCII decimal, each line newline-terminated.
//!
//! graph6: the size header `N(n)` followed by the upper triangle of the
//! adjacency matrix, column by column, packed big-endian into 6-bit groups
//! offset by 63. One graph per line.

use super::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    EdgeList,
    Graph6,
}

const G6_HEADER: &[u8] = b">>graph6<<";
const G6_MAX_N: u64 = 68_719_476_735;

pub fn encode_graph(g: &Graph, format: Format) -> Result<Vec<u8>, GraphError> {
    match format {
        Format::EdgeList => Ok(encode_edge_list(g)),
        Format::Graph6 => {
            let mut out = encode_graph6(g)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn decode_graph(bytes: &[u8], format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::EdgeList => decode_edge_list(bytes),
        Format::Graph6 => {
            let mut body = bytes;
            let mut offset = 0;
            if body.starts_with(G6_HEADER) {
                body = &body[G6_HEADER.len()..];
                offset = G6_HEADER.len();
            }
            while let [rest @ .., b'\n' | b'\r'] = body {
                body = rest;
            }
            if body.contains(&b'\n') {
                let at = offset + body.iter().position(|&b| b == b'\n').unwrap();
                return Err(parse_err(at, "expected a single graph6 line"));
            }
            decode_graph6(body, offset)
        }
    }
}

/// Decodes every non-empty line of a graph6 file.
pub fn decode_graph6_lines(bytes: &[u8]) -> Result<Vec<Graph>, GraphError> {
    let mut graphs = Vec::new();
    let mut offset = 0;
    for line in bytes.split(|&b| b == b'\n') {
        let start = offset;
        offset += line.len() + 1;
        let mut line = line.strip_suffix(b"\r").unwrap_or(line);
        let mut at = start;
        if line.starts_with(G6_HEADER) {
            line = &line[G6_HEADER.len()..];
            at += G6_HEADER.len();
        }
        if line.is_empty() {
            continue;
        }
        graphs.push(decode_graph6(line, at)?);
    }
    Ok(graphs)
}

fn parse_err(offset: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        offset,
        message: message.into(),
    }
}

fn encode_edge_list(g: &Graph) -> Vec<u8> {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out.into_bytes()
}

fn decode_edge_list(bytes: &[u8]) -> Result<Graph, GraphError> {
    let mut lines = Vec::new();
    let mut offset = 0;
    for line in bytes.split(|&b| b == b'\n') {
        lines.push((offset, line.strip_suffix(b"\r").unwrap_or(line)));
        offset += line.len() + 1;
    }
    while lines.last().is_some_and(|(_, l)| l.iter().all(u8::is_ascii_whitespace)) {
        lines.pop();
    }
    let mut it = lines.into_iter();
    let (at, header) = it.next().ok_or_else(|| parse_err(0, "missing header line"))?;
    let [n, m] = parse_pair(header, at)?;
    if n == 0 {
        return Err(parse_err(at, "vertex count must be at least 1"));
    }
    let mut edges = Vec::with_capacity(m.min(1 << 20));
    for (at, line) in it.by_ref() {
        if edges.len() == m {
            return Err(parse_err(at, format!("more than the declared {m} edges")));
        }
        let [u, v] = parse_pair(line, at)?;
        if u >= v || v >= n {
            return Err(parse_err(at, format!("edge {u} {v} violates 0 <= u < v < {n}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            bytes.len(),
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges).map_err(|e| match e {
        GraphError::DuplicateEdge(u, v) => parse_err(bytes.len(), format!("edge {u} {v} repeated")),
        other => other,
    })
}

fn parse_pair(line: &[u8], at: usize) -> Result<[usize; 2], GraphError> {
    let text = std::str::from_utf8(line).map_err(|e| parse_err(at + e.valid_up_to(), "not ASCII"))?;
    let mut out = [0usize; 2];
    let mut fields = text.split_ascii_whitespace();
    for slot in &mut out {
        let tok = fields
            .next()
            .ok_or_else(|| parse_err(at, "expected two integers"))?;
        let col = tok.as_ptr() as usize - text.as_ptr() as usize;
        *slot = tok
            .parse()
            .map_err(|_| parse_err(at + col, format!("invalid integer {tok:?}")))?;
    }
    if let Some(extra) = fields.next() {
        let col = extra.as_ptr() as usize - text.as_ptr() as usize;
        return Err(parse_err(at + col, "trailing token"));
    }
    Ok(out)
}

fn encode_graph6(g: &Graph) -> Result<Vec<u8>, GraphError> {
    let n = g.n() as u64;
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else if n <= G6_MAX_N {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        return Err(GraphError::Overflow { n, format: "graph6" });
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..g.n() {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(out)
}

fn decode_graph6(line: &[u8], base: usize) -> Result<Graph, GraphError> {
    let digit = |i: usize| -> Result<u64, GraphError> {
        match line.get(i) {
            Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as u64),
            Some(&b) => Err(parse_err(base + i, format!("byte {b:#04x} outside graph6 range"))),
            None => Err(parse_err(base + i, "truncated size header")),
        }
    };
    let (n, mut pos) = match line.first() {
        None => return Err(parse_err(base, "empty graph6 line")),
        Some(126) if line.get(1) == Some(&126) => {
            let mut n = 0;
            for i in 2..8 {
                n = (n << 6) | digit(i)?;
            }
            (n, 8)
        }
        Some(126) => {
            let mut n = 0;
            for i in 1..4 {
                n = (n << 6) | digit(i)?;
            }
            (n, 4)
        }
        Some(_) => (digit(0)?, 1),
    };
    if n == 0 {
        return Err(parse_err(base, "vertex count must be at least 1"));
    }
    let pairs = n
        .checked_mul(n - 1)
        .map(|p| p / 2)
        .filter(|p| p.div_ceil(6) as usize + pos == line.len())
        .ok_or_else(|| {
            parse_err(
                base + line.len().min(pos),
                format!("body length does not match {n} vertices"),
            )
        })?;
    let n = usize::try_from(n).map_err(|_| GraphError::Overflow { n, format: "graph6" })?;
    let mut edges = Vec::new();
    let mut bit = 0u64;
    let mut current = 0u64;
    'outer: for j in 1..n {
        for i in 0..j {
            if bit.is_multiple_of(6) {
                current = digit(pos)?;
                pos += 1;
            }
            if current >> (5 - bit % 6) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
            if bit == pairs {
                break 'outer;
            }
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_encoding() {
        let p3 = Graph::path(3).unwrap();
        assert_eq!(encode_graph(&p3, Format::EdgeList).unwrap(), b"3 2\n0 1\n1 2\n");
        let k2 = decode_graph(b"2 1\n0 1\n", Format::EdgeList).unwrap();
        assert_eq!(k2, Graph::complete(2).unwrap());
    }

    #[test]
    fn edge_list_errors_carry_offsets() {
        let err = decode_graph(b"3 2\n0 1\n1 x\n", Format::EdgeList).unwrap_err();
        assert_eq!(
            err,
            GraphError::Parse {
                offset: 10,
                message: "invalid integer \"x\"".into()
            }
        );
        let err = decode_graph(b"3 2\n0 1\n2 1\n", Format::EdgeList).unwrap_err();
        assert!(matches!(err, GraphError::Parse { offset: 8, .. }));
        let err = decode_graph(b"3 2\n0 1\n", Format::EdgeList).unwrap_err();
        assert!(matches!(err, GraphError::Parse { .. }));
        let err = decode_graph(b"3 1\n0 1\n1 2\n", Format::EdgeList).unwrap_err();
        assert!(matches!(err, GraphError::Parse { offset: 8, .. }));
        assert!(decode_graph(b"", Format::EdgeList).is_err());
    }

    #[test]
    fn graph6_known_strings() {
        // Reference strings from the nauty format description.
        let p3 = Graph::path(3).unwrap();
        assert_eq!(encode_graph(&p3, Format::Graph6).unwrap(), b"Bg\n");
        let cherry = Graph::new(3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(encode_graph(&cherry, Format::Graph6).unwrap(), b"Bo\n");
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(encode_graph(&k4, Format::Graph6).unwrap(), b"C~\n");
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(encode_graph(&c5, Format::Graph6).unwrap(), b"Dhc\n");
        assert_eq!(encode_graph(&Graph::empty(1).unwrap(), Format::Graph6).unwrap(), b"@\n");
    }

    #[test]
    fn graph6_large_header() {
        let g = Graph::path(100).unwrap();
        let bytes = encode_graph(&g, Format::Graph6).unwrap();
        assert_eq!(&bytes[..4], &[126, 63, 64, 63 + 36]);
        assert_eq!(decode_graph(&bytes, Format::Graph6).unwrap(), g);
    }

    #[test]
    fn graph6_errors() {
        assert!(matches!(
            decode_graph(b"Bo?", Format::Graph6),
            Err(GraphError::Parse { offset: 1, .. })
        ));
        assert!(matches!(
            decode_graph(b"B\x20", Format::Graph6),
            Err(GraphError::Parse { .. })
        ));
        assert!(decode_graph(b"", Format::Graph6).is_err());
        assert!(decode_graph(b"?", Format::Graph6).is_err());
    }

    #[test]
    fn graph6_header_and_multiline() {
        assert_eq!(
            decode_graph(b">>graph6<<C~\n", Format::Graph6).unwrap(),
            Graph::complete(4).unwrap()
        );
        let gs = decode_graph6_lines(b"Bo\nC~\n\nDhc\n").unwrap();
        assert_eq!(gs.len(), 3);
        assert_eq!(gs[2], Graph::cycle(5).unwrap());
    }
}
