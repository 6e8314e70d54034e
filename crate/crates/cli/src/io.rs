//! Plain-text file formats.
//!
//! * pair CSV: header `p0,p1`, then one coordinate per line;
//! * edge list: header `n K`, then `i j` per undirected edge (0-based);
//! * dense matrix: `n` lines of `n` whitespace-separated 0/1 entries;
//! * labels: one 0-based label per line.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chernoff_sbm_core::detect::Labeling;
use chernoff_sbm_core::{Adjacency, HypothesisPair};

use crate::error::{CliError, CliResult};

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line, msg: msg.into() }
}

pub fn read_pairs(path: &Path) -> CliResult<HypothesisPair> {
    let text = read(path)?;
    let mut lines = content_lines(&text);
    match lines.next() {
        Some((_, h)) if h.replace(' ', "") == "p0,p1" => {}
        Some((n, _)) => return Err(parse_err(path, n, "expected header `p0,p1`")),
        None => return Err(parse_err(path, 1, "empty file")),
    }
    let (mut p0, mut p1) = (Vec::new(), Vec::new());
    for (n, l) in lines {
        let mut it = l.split(',').map(str::trim);
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(path, n, "expected two comma-separated values"));
        };
        let a: f64 = a.parse().map_err(|_| parse_err(path, n, format!("bad number `{a}`")))?;
        let b: f64 = b.parse().map_err(|_| parse_err(path, n, format!("bad number `{b}`")))?;
        p0.push(a);
        p1.push(b);
    }
    Ok(HypothesisPair::new(p0, p1)?)
}

pub fn write_pairs(pair: &HypothesisPair) -> String {
    let mut s = String::from("p0,p1\n");
    for (a, b) in pair.p0().iter().zip(pair.p1()) {
        writeln!(s, "{a},{b}").unwrap();
    }
    s
}

/// Edge list with its declared community count.
pub fn read_edge_list(path: &Path) -> CliResult<(Adjacency, usize)> {
    let text = read(path)?;
    let mut lines = content_lines(&text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [n, k] = head[..] else {
        return Err(parse_err(path, hl, "expected header `n K`"));
    };
    let n: usize = n.parse().map_err(|_| parse_err(path, hl, "bad node count"))?;
    let k: usize = k.parse().map_err(|_| parse_err(path, hl, "bad community count"))?;
    let mut edges = Vec::new();
    for (ln, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        let [i, j] = f[..] else {
            return Err(parse_err(path, ln, "expected `i j`"));
        };
        let i: usize = i.parse().map_err(|_| parse_err(path, ln, format!("bad node `{i}`")))?;
        let j: usize = j.parse().map_err(|_| parse_err(path, ln, format!("bad node `{j}`")))?;
        edges.push((i, j));
    }
    Ok((Adjacency::from_edges(n, edges)?, k))
}

pub fn write_edge_list(a: &Adjacency, k: usize) -> String {
    let mut s = format!("{} {}\n", a.n(), k);
    for (i, j) in a.edges() {
        writeln!(s, "{i} {j}").unwrap();
    }
    s
}

pub fn read_dense(path: &Path) -> CliResult<Adjacency> {
    let text = read(path)?;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (ln, l) in content_lines(&text) {
        let row = l
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                _ => Err(parse_err(path, ln, format!("entry `{t}` is not 0 or 1"))),
            })
            .collect::<CliResult<Vec<u8>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(parse_err(path, 1, "matrix is not square"));
    }
    Ok(Adjacency::from_dense(n, &rows.concat())?)
}

pub fn read_labels(path: &Path, k: usize) -> CliResult<Labeling> {
    let text = read(path)?;
    let mut labels = Vec::new();
    for (ln, l) in content_lines(&text) {
        labels.push(l.parse::<usize>().map_err(|_| parse_err(path, ln, format!("bad label `{l}`")))?);
    }
    Ok(Labeling::new(labels, k)?)
}

pub fn write_labels(labels: &[usize]) -> String {
    let mut s = String::with_capacity(labels.len() * 2);
    for l in labels {
        writeln!(s, "{l}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn pairs_round_trip() {
        let p = HypothesisPair::new(vec![0.1, 0.55], vec![0.2, 0.45]).unwrap();
        let f = file(&write_pairs(&p));
        assert_eq!(read_pairs(f.path()).unwrap(), p);
        assert!(read_pairs(file("a,b\n0.1,0.2\n").path()).is_err());
        assert!(read_pairs(file("p0,p1\n0.1\n").path()).is_err());
        assert!(read_pairs(file("p0,p1\n0.0,0.5\n").path()).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let a = Adjacency::from_edges(4, [(0, 1), (2, 3), (1, 3)]).unwrap();
        let f = file(&write_edge_list(&a, 2));
        assert_eq!(read_edge_list(f.path()).unwrap(), (a, 2));
        assert!(read_edge_list(file("3 2\n0 0\n").path()).is_err());
        assert!(read_edge_list(file("3 2\n0 1\n1 0\n").path()).is_err());
        assert!(read_edge_list(file("3\n0 1\n").path()).is_err());
    }

    #[test]
    fn dense_rejects_asymmetry() {
        assert!(read_dense(file("0 1\n1 0\n").path()).is_ok());
        assert!(read_dense(file("0 1\n0 0\n").path()).is_err());
        assert!(read_dense(file("0 1 0\n1 0\n").path()).is_err());
    }

    #[test]
    fn labels_round_trip() {
        let f = file(&write_labels(&[0, 2, 1]));
        assert_eq!(read_labels(f.path(), 3).unwrap().labels(), &[0, 2, 1]);
        assert!(read_labels(f.path(), 2).is_err());
    }
}
