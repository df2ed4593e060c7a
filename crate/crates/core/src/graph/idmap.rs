use std::collections::HashMap;

use crate::error::{Error, Result};

/// Bijection between external 64-bit node identifiers and dense indices.
///
/// Indices are handed out in first-appearance order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    external: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Map where index `i` carries external id `i`.
    pub fn identity(n: usize) -> Self {
        Self::from_external((0..n as u64).collect()).expect("identity ids are distinct")
    }

    /// Map from an ordered list of distinct external ids.
    pub fn from_external(external: Vec<u64>) -> Result<Self> {
        let mut index = HashMap::with_capacity(external.len());
        for (i, &id) in external.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate node id {id}")));
            }
        }
        Ok(Self { external, index })
    }

    /// Dense index for `id`, assigning the next free one on first sight.
    pub fn get_or_insert(&mut self, id: u64) -> usize {
        let next = self.external.len();
        let external = &mut self.external;
        *self.index.entry(id).or_insert_with(|| {
            external.push(id);
            next
        })
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn external_of(&self, index: usize) -> u64 {
        self.external[index]
    }

    pub fn externals(&self) -> &[u64] {
        &self.external
    }

    pub fn len(&self) -> usize {
        self.external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    /// Composes `self` (local -> parent index) with `parent` (index -> external).
    pub fn compose(&self, parent: &IdMap) -> IdMap {
        IdMap::from_external(
            self.external
                .iter()
                .map(|&p| parent.external_of(p as usize))
                .collect(),
        )
        .expect("composition of bijections is a bijection")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_appearance_order() {
        let mut m = IdMap::new();
        assert_eq!(m.get_or_insert(70), 0);
        assert_eq!(m.get_or_insert(3), 1);
        assert_eq!(m.get_or_insert(70), 0);
        assert_eq!(m.externals(), &[70, 3]);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(IdMap::from_external(vec![1, 2, 1]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(ids in proptest::collection::vec(any::<u64>(), 0..200)) {
            let mut m = IdMap::new();
            for &id in &ids {
                let idx = m.get_or_insert(id);
                prop_assert_eq!(m.external_of(idx), id);
                prop_assert_eq!(m.index_of(id), Some(idx));
            }
            for i in 0..m.len() {
                prop_assert_eq!(m.index_of(m.external_of(i)), Some(i));
            }
        }
    }
}
