use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::updates::UpdateOp;
use super::BenchError;
use crate::graph::{EdgeKey, Graph, GraphError};
use crate::maintenance::UpdateKind;

/// Lines dropped while loading an edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadStats {
    pub lines: usize,
    pub duplicates: usize,
    pub self_loops: usize,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_vertex(tok: Option<&str>, line: usize) -> Result<u64, BenchError> {
    let tok = tok.ok_or_else(|| BenchError::Parse {
        line,
        msg: "expected two vertex ids".into(),
    })?;
    tok.parse().map_err(|_| BenchError::Parse {
        line,
        msg: format!("invalid vertex id {tok:?}"),
    })
}

/// Reads a whitespace-separated edge list. Direction is ignored, so a
/// reversed pair counts as a duplicate. Extra columns are ignored.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(Graph, LoadStats), BenchError> {
    let mut g = Graph::new();
    let mut stats = LoadStats::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err(Path::new("<input>")))?;
        let lineno = i + 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        stats.lines += 1;
        let mut toks = body.split_whitespace();
        let a = parse_vertex(toks.next(), lineno)?;
        let b = parse_vertex(toks.next(), lineno)?;
        let Some(key) = EdgeKey::new(a, b) else {
            stats.self_loops += 1;
            continue;
        };
        match g.insert_edge_raw(key) {
            Ok(()) => {}
            Err(GraphError::DuplicateEdge(_)) => stats.duplicates += 1,
            Err(e) => return Err(e.into()),
        }
    }
    Ok((g, stats))
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<(Graph, LoadStats), BenchError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(path))?;
    parse_edge_list(BufReader::new(file)).map_err(|e| match e {
        BenchError::Io { source, .. } => BenchError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Reads an `I u v` / `D u v` update stream.
pub fn read_stream(path: impl AsRef<Path>) -> Result<Vec<UpdateOp>, BenchError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(path))?;
    let mut ops = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let lineno = i + 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut toks = body.split_whitespace();
        let kind = match toks.next() {
            Some("I") | Some("i") => UpdateKind::Insert,
            Some("D") | Some("d") => UpdateKind::Delete,
            other => {
                return Err(BenchError::Parse {
                    line: lineno,
                    msg: format!("expected I or D, got {:?}", other.unwrap_or("")),
                })
            }
        };
        let a = parse_vertex(toks.next(), lineno)?;
        let b = parse_vertex(toks.next(), lineno)?;
        let edge = EdgeKey::new(a, b).ok_or_else(|| BenchError::Parse {
            line: lineno,
            msg: format!("self-loop on {a}"),
        })?;
        if toks.next().is_some() {
            return Err(BenchError::Parse {
                line: lineno,
                msg: "trailing tokens".into(),
            });
        }
        ops.push(UpdateOp { kind, edge });
    }
    Ok(ops)
}

pub fn write_stream(path: impl AsRef<Path>, ops: &[UpdateOp]) -> Result<(), BenchError> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    for op in ops {
        writeln!(w, "{op}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}
