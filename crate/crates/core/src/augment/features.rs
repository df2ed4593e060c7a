use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{IdMap, WeightedGraph};
use crate::partition::PartitionMap;

/// Dense row-major feature matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    dim: usize,
    data: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Aggregation {
    #[default]
    Mean,
    Sum,
}

impl std::str::FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(Self::Mean),
            "sum" => Ok(Self::Sum),
            other => Err(Error::InvalidParameter(format!("unknown aggregation {other:?}"))),
        }
    }
}

impl FeatureTable {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("feature dimension must be >= 1".into()));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: data.len() % dim });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("features must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Self::new(dim, rows.concat())
    }

    pub fn zeros(rows: usize, dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; rows * dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Reads `#dim F` followed by `external_id<TAB>f1 ... fF` rows.
    ///
    /// With `ids`, rows are placed at the ids' indices and every id must be
    /// present; otherwise rows keep file order, described by the returned map.
    pub fn read_tsv<R: BufRead>(reader: R, ids: Option<&IdMap>) -> Result<(Self, IdMap)> {
        let mut dim = None;
        let mut records: Vec<(usize, u64, Vec<f64>)> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(rest) = t.strip_prefix("#dim") {
                let d: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid dimension header {t:?}"),
                })?;
                dim = Some(d);
                continue;
            }
            if t.starts_with('#') {
                continue;
            }
            let d = dim.ok_or(Error::Parse { line: line_no, message: "missing '#dim F' header".into() })?;
            let mut fields = t.split_whitespace();
            let id: u64 = fields.next().unwrap_or("").parse().map_err(|_| Error::Parse {
                line: line_no,
                message: "invalid node id".into(),
            })?;
            let values = fields
                .map(|f| {
                    f.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("invalid feature value {f:?}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != d {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {d} features, found {}", values.len()),
                });
            }
            records.push((line_no, id, values));
        }
        let dim = dim.ok_or(Error::Parse { line: 0, message: "missing '#dim F' header".into() })?;
        match ids {
            None => {
                let map = IdMap::from_external(records.iter().map(|r| r.1).collect())?;
                let data = records.into_iter().flat_map(|r| r.2).collect();
                Ok((Self::new(dim, data)?, map))
            }
            Some(ids) => {
                let mut data = vec![f64::NAN; ids.len() * dim];
                let mut seen = vec![false; ids.len()];
                for (line, id, values) in records {
                    let idx = ids.index_of(id).ok_or_else(|| Error::Parse {
                        line,
                        message: format!("unknown node id {id}"),
                    })?;
                    seen[idx] = true;
                    data[idx * dim..(idx + 1) * dim].copy_from_slice(&values);
                }
                if let Some(missing) = seen.iter().position(|s| !s) {
                    return Err(Error::InvalidParameter(format!(
                        "no features for node {}",
                        ids.external_of(missing)
                    )));
                }
                Ok((Self::new(dim, data)?, ids.clone()))
            }
        }
    }

    pub fn write_tsv<W: Write>(&self, ids: &IdMap, mut out: W) -> Result<()> {
        writeln!(out, "#dim {}", self.dim)?;
        for i in 0..self.len() {
            write!(out, "{}", ids.external_of(i))?;
            for x in self.row(i) {
                write!(out, "\t{x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// One row per part: the mean (or sum) of its members' rows.
pub fn aggregate_features(
    g: &WeightedGraph,
    parts: &PartitionMap,
    feats: &FeatureTable,
    op: Aggregation,
) -> Result<FeatureTable> {
    if feats.len() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: g.node_count(), found: feats.len() });
    }
    if parts.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: g.node_count(), found: parts.node_count() });
    }
    let d = feats.dim();
    let mut data = vec![0.0; parts.part_count() * d];
    for v in 0..feats.len() {
        let p = parts.part_of(v);
        for (acc, x) in data[p * d..(p + 1) * d].iter_mut().zip(feats.row(v)) {
            *acc += x;
        }
    }
    if op == Aggregation::Mean {
        for (p, &size) in parts.part_sizes().iter().enumerate() {
            if size > 0 {
                data[p * d..(p + 1) * d].iter_mut().for_each(|x| *x /= size as f64);
            }
        }
    }
    FeatureTable::new(d, data)
}

/// Appends each node's part row: `out[v] = feats[v] ++ global[part(v)]`.
pub fn concat_global(
    feats: &FeatureTable,
    global: &FeatureTable,
    parts: &PartitionMap,
) -> Result<FeatureTable> {
    if parts.node_count() != feats.len() {
        return Err(Error::DimensionMismatch { expected: feats.len(), found: parts.node_count() });
    }
    if global.len() < parts.part_count() {
        return Err(Error::InvalidParameter(format!(
            "global table has {} rows but the partition has {} parts",
            global.len(),
            parts.part_count()
        )));
    }
    let dim = feats.dim() + global.dim();
    let mut data = Vec::with_capacity(feats.len() * dim);
    for v in 0..feats.len() {
        data.extend_from_slice(feats.row(v));
        data.extend_from_slice(global.row(parts.part_of(v)));
    }
    FeatureTable::new(dim, data)
}
