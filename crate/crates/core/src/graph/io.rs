//! Tab-separated text formats for edge lists, node sets and partitions.
//!
//! Lines starting with `#` and blank lines are ignored everywhere.

use std::io::{BufRead, Write};

use log::warn;

use super::{IdMap, WeightedGraph};
use crate::error::{Error, Result};
use crate::partition::PartitionMap;

/// Counters collected while loading an edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub records: usize,
    pub self_loops: usize,
    pub merged_duplicates: usize,
}

fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(l) => {
                let t = l.trim();
                if t.is_empty() || t.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, t.to_string())))
                }
            }
        })
}

fn parse_id(field: &str, line: usize) -> Result<u64> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid node id {field:?}"),
    })
}

/// Reads `src<TAB>dst[<TAB>weight]` records into a symmetric graph.
///
/// Without `weighted`, any weight column is ignored and every edge weighs 1.
/// Parallel records are summed and self-loops dropped (each endpoint still
/// gets an id).
pub fn load_edge_list<R: BufRead>(
    reader: R,
    weighted: bool,
) -> Result<(WeightedGraph, IdMap, LoadStats)> {
    let mut ids = IdMap::new();
    let mut edges = Vec::new();
    let mut stats = LoadStats::default();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 or 3 fields, found {}", fields.len()),
            });
        }
        let a = ids.get_or_insert(parse_id(fields[0], line)?);
        let b = ids.get_or_insert(parse_id(fields[1], line)?);
        let w = match (weighted, fields.get(2)) {
            (true, Some(raw)) => {
                let w: f64 = raw.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid weight {raw:?}"),
                })?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::Parse {
                        line,
                        message: format!("weight must be finite and positive, found {w}"),
                    });
                }
                w
            }
            _ => 1.0,
        };
        stats.records += 1;
        if a == b {
            stats.self_loops += 1;
        } else {
            edges.push((a.min(b), a.max(b), w));
        }
    }
    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if stats.self_loops > 0 {
        warn!("dropped {} self-loop record(s)", stats.self_loops);
    }
    let records = edges.len();
    let g = WeightedGraph::from_canonical(ids.len(), edges, vec![1; ids.len()]);
    stats.merged_duplicates = records - g.edge_count();
    Ok((g, ids, stats))
}

/// Writes each undirected edge once as `src<TAB>dst<TAB>weight`.
pub fn write_edge_list<W: Write>(g: &WeightedGraph, ids: &IdMap, mut out: W) -> Result<()> {
    for (a, b, w) in g.edges() {
        writeln!(out, "{}\t{}\t{}", ids.external_of(a), ids.external_of(b), w)?;
    }
    Ok(())
}

/// Reads one external id per line and resolves it against `ids`.
pub fn read_node_set<R: BufRead>(reader: R, ids: &IdMap) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let id = parse_id(text.split_whitespace().next().unwrap_or(""), line)?;
        let idx = ids.index_of(id).ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown node id {id}"),
        })?;
        out.push(idx);
    }
    Ok(out)
}

pub fn write_node_set<W: Write>(nodes: &[usize], ids: &IdMap, mut out: W) -> Result<()> {
    for &v in nodes {
        writeln!(out, "{}", ids.external_of(v))?;
    }
    Ok(())
}

/// Writes `external_id<TAB>part_id` for every node in index order.
pub fn write_partition<W: Write>(parts: &PartitionMap, ids: &IdMap, mut out: W) -> Result<()> {
    for (v, &p) in parts.assignment().iter().enumerate() {
        writeln!(out, "{}\t{}", ids.external_of(v), p)?;
    }
    Ok(())
}

/// Reads a partition file.
///
/// With `ids`, every known node must appear exactly once and the result is
/// indexed like the graph; without, nodes are indexed in file order and the
/// returned map describes that order.
pub fn read_partition<R: BufRead>(
    reader: R,
    ids: Option<&IdMap>,
) -> Result<(PartitionMap, IdMap)> {
    let mut records = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let id = parse_id(fields[0], line)?;
        let part: usize = fields[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid part id {:?}", fields[1]),
        })?;
        records.push((line, id, part));
    }
    match ids {
        None => {
            let map = IdMap::from_external(records.iter().map(|r| r.1).collect())?;
            let parts = PartitionMap::from_assignment(records.into_iter().map(|r| r.2).collect());
            Ok((parts, map))
        }
        Some(ids) => {
            let mut assignment = vec![usize::MAX; ids.len()];
            for (line, id, part) in records {
                let idx = ids.index_of(id).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("unknown node id {id}"),
                })?;
                if assignment[idx] != usize::MAX {
                    return Err(Error::Parse { line, message: format!("node {id} assigned twice") });
                }
                assignment[idx] = part;
            }
            if let Some(missing) = assignment.iter().position(|&p| p == usize::MAX) {
                return Err(Error::InvalidParameter(format!(
                    "node {} has no part assignment",
                    ids.external_of(missing)
                )));
            }
            Ok((PartitionMap::from_assignment(assignment), ids.clone()))
        }
    }
}
