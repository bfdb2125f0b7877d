//! Plain-text hypergraph files.
//!
//! The first line is `n d m`; each of the following `m` lines lists the `d`
//! vertex ids of one hyperedge in increasing order, and the lines themselves
//! are sorted. Blank lines are ignored when reading.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::Vertex;

pub fn write_hypergraph(h: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    write_to(h, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_to(h: &Hypergraph, out: &mut impl Write) -> Result<()> {
    writeln!(out, "{} {} {}", h.n(), h.d(), h.num_edges())?;
    for e in h.edges() {
        let mut first = true;
        for v in e {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{v}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn to_text(h: &Hypergraph) -> String {
    let mut buf = Vec::new();
    write_to(h, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("ascii")
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph> {
    read_from(fs::File::open(path)?)
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    read_from(text.as_bytes())
}

pub fn read_from(input: impl Read) -> Result<Hypergraph> {
    let reader = BufReader::new(input);
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let Some((n, d, _)) = header else {
            let nums = parse_numbers::<usize>(&fields, lineno)?;
            let [n, d, m] = nums[..] else {
                return Err(parse_err(lineno, "header must be `n d m`"));
            };
            if d == 0 {
                return Err(parse_err(lineno, "d must be at least 1"));
            }
            header = Some((n, d, m));
            continue;
        };
        if fields.len() != d {
            return Err(parse_err(lineno, format!("expected {d} vertex ids, found {}", fields.len())));
        }
        let edge = parse_numbers::<Vertex>(&fields, lineno)?;
        if let Some(&v) = edge.iter().find(|&&v| v as usize >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        edges.push(edge);
    }
    let (n, d, m) = header.ok_or_else(|| parse_err(1, "missing header"))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} hyperedges but {} were listed", edges.len()),
        ));
    }
    Hypergraph::new(n, d, edges)
}

fn parse_numbers<T: std::str::FromStr>(fields: &[&str], line: usize) -> Result<Vec<T>> {
    fields
        .iter()
        .map(|f| f.parse::<T>().map_err(|_| parse_err(line, format!("`{f}` is not a valid number"))))
        .collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GeneratorSpec};

    #[test]
    fn parses_minimal_file() {
        let h = parse_hypergraph("4 2 1\n0 1\n").unwrap();
        assert_eq!(h, Hypergraph::new(4, 2, [[0, 1]]).unwrap());
    }

    #[test]
    fn rejects_repeated_vertex() {
        assert!(matches!(parse_hypergraph("4 2 1\n0 0\n"), Err(Error::RepeatedVertex(_))));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_hypergraph("4 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hypergraph("4 2 1\n0 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hypergraph("4 2 1\n0 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hypergraph("4 2 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hypergraph("4 2 1\n0 4\n"), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(parse_hypergraph("4 2 2\n0 1\n1 0\n"), Err(Error::DuplicateEdge(_))));
        assert!(parse_hypergraph("").is_err());
    }

    #[test]
    fn round_trips_through_a_file() {
        let h = generate(&GeneratorSpec::random(40, 3, 100, 2)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        write_hypergraph(&h, &path).unwrap();
        assert_eq!(read_hypergraph(&path).unwrap(), h);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("40 3 100\n"));
        assert_eq!(text, to_text(&h));
    }
}
