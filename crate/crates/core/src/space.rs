use std::collections::BTreeMap;

use crate::catalog::Catalog;
use crate::degree::TriDegree;
use crate::monomial::Monomial;

/// Basis classes grouped by tridegree, each degree's basis sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrigradedSpace {
    by_degree: BTreeMap<TriDegree, Vec<Monomial>>,
}

impl TrigradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a space from classes, placing each at its computed degree.
    pub fn from_classes(cat: &Catalog, classes: impl IntoIterator<Item = Monomial>) -> Self {
        let mut by_degree: BTreeMap<TriDegree, Vec<Monomial>> = BTreeMap::new();
        for m in classes {
            by_degree.entry(m.degree(cat)).or_default().push(m);
        }
        for basis in by_degree.values_mut() {
            basis.sort();
            basis.dedup();
        }
        TrigradedSpace { by_degree }
    }

    pub fn basis(&self, d: TriDegree) -> &[Monomial] {
        self.by_degree.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, d: TriDegree) -> usize {
        self.basis(d).len()
    }

    pub fn index_of(&self, d: TriDegree, m: &Monomial) -> Option<usize> {
        self.basis(d).binary_search(m).ok()
    }

    pub fn degrees(&self) -> impl Iterator<Item = TriDegree> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TriDegree, &[Monomial])> {
        self.by_degree.iter().map(|(d, b)| (*d, b.as_slice()))
    }

    pub fn classes(&self) -> impl Iterator<Item = &Monomial> {
        self.by_degree.values().flatten()
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.values().map(Vec::len).sum()
    }

    pub fn contains(&self, cat: &Catalog, m: &Monomial) -> bool {
        self.index_of(m.degree(cat), m).is_some()
    }

    /// Direct sum; bases are re-sorted per degree.
    pub fn merged(&self, other: &TrigradedSpace) -> TrigradedSpace {
        let mut by_degree = self.by_degree.clone();
        for (d, b) in &other.by_degree {
            let e = by_degree.entry(*d).or_default();
            e.extend_from_slice(b);
            e.sort();
            e.dedup();
        }
        TrigradedSpace { by_degree }
    }

    pub fn filter(&self, mut keep: impl FnMut(TriDegree, &Monomial) -> bool) -> TrigradedSpace {
        let by_degree = self
            .by_degree
            .iter()
            .filter_map(|(d, b)| {
                let kept: Vec<Monomial> = b.iter().filter(|m| keep(*d, m)).copied().collect();
                (!kept.is_empty()).then_some((*d, kept))
            })
            .collect();
        TrigradedSpace { by_degree }
    }
}
