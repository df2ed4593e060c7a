use crate::error::{Error, Result};

/// Total assignment of nodes to parts `0..part_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMap {
    assignment: Vec<usize>,
    part_count: usize,
}

impl PartitionMap {
    /// Wraps an assignment, checking that every entry is below `part_count`.
    pub fn new(assignment: Vec<usize>, part_count: usize) -> Result<Self> {
        if let Some(&bad) = assignment.iter().find(|&&p| p >= part_count) {
            return Err(Error::PartOutOfRange { index: bad, part_count });
        }
        Ok(Self { assignment, part_count })
    }

    /// Uses `max + 1` as the part count.
    pub fn from_assignment(assignment: Vec<usize>) -> Self {
        let part_count = assignment.iter().max().map_or(0, |&m| m + 1);
        Self { assignment, part_count }
    }

    /// Relabels arbitrary labels to `0..M` in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Self { assignment, part_count: remap.len() }
    }

    /// Every node in part 0.
    pub fn single(n: usize) -> Self {
        Self { assignment: vec![0; n], part_count: usize::from(n > 0) }
    }

    pub fn part_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<usize> {
        self.assignment
    }

    pub fn part_count(&self) -> usize {
        self.part_count
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.part_count];
        for &p in &self.assignment {
            sizes[p] += 1;
        }
        sizes
    }

    /// Node lists per part, each in ascending node order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.part_count];
        for (v, &p) in self.assignment.iter().enumerate() {
            out[p].push(v);
        }
        out
    }

    /// True when every part has at least one node.
    pub fn is_surjective(&self) -> bool {
        self.part_sizes().iter().all(|&s| s > 0)
    }

    /// Follows `self` then `next`: node `v` lands in `next[self[v]]`.
    pub fn compose(&self, next: &PartitionMap) -> Result<PartitionMap> {
        if next.node_count() != self.part_count {
            return Err(Error::DimensionMismatch {
                expected: self.part_count,
                found: next.node_count(),
            });
        }
        Ok(PartitionMap {
            assignment: self.assignment.iter().map(|&p| next.part_of(p)).collect(),
            part_count: next.part_count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_compact_in_first_appearance_order() {
        let p = PartitionMap::from_labels(&[9, 4, 9, 7]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.part_count(), 3);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(PartitionMap::new(vec![0, 3], 3).is_err());
    }

    #[test]
    fn compose_follows_both_maps() {
        let a = PartitionMap::new(vec![0, 1, 1, 2], 3).unwrap();
        let b = PartitionMap::new(vec![1, 0, 1], 2).unwrap();
        assert_eq!(a.compose(&b).unwrap().assignment(), &[1, 0, 0, 1]);
        assert!(b.compose(&a).is_err());
    }
}
