use std::collections::BTreeMap;
use std::ops::Range;

use super::{Bidegree, HodgeError, Issue, ValidationReport};
use crate::linalg::{concat_bases, QiMatrix, Subspace};

/// A pure Hodge structure of weight `n` given by its blocks `H^{p,q}`.
///
/// Zero-dimensional blocks are dropped on construction; an absent key means
/// the block is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HodgeDecomposition {
    weight: i64,
    rank: usize,
    blocks: BTreeMap<Bidegree, Subspace>,
}

impl HodgeDecomposition {
    /// Builds and validates a decomposition.
    pub fn new(
        weight: i64,
        rank: usize,
        blocks: impl IntoIterator<Item = (Bidegree, Subspace)>,
    ) -> Result<Self, HodgeError> {
        let d = Self::new_unchecked(weight, rank, blocks);
        HodgeError::from_report(d.validate())?;
        Ok(d)
    }

    /// Builds a candidate decomposition without checking any invariant
    /// beyond dropping zero blocks; see [`validate_decomposition`].
    pub fn new_unchecked(
        weight: i64,
        rank: usize,
        blocks: impl IntoIterator<Item = (Bidegree, Subspace)>,
    ) -> Self {
        Self {
            weight,
            rank,
            blocks: blocks.into_iter().filter(|(_, s)| !s.is_zero()).collect(),
        }
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> &BTreeMap<Bidegree, Subspace> {
        &self.blocks
    }

    pub fn block(&self, key: Bidegree) -> Option<&Subspace> {
        self.blocks.get(&key)
    }

    /// `h^{p,q} = dim H^{p,q}` for every nonzero block.
    pub fn hodge_numbers(&self) -> BTreeMap<Bidegree, usize> {
        self.blocks.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport::from_issues(block_issues(self.rank, &self.blocks, Some(self.weight)))
    }

    pub fn to_mixed(&self) -> MixedDecomposition {
        MixedDecomposition {
            rank: self.rank,
            blocks: self.blocks.clone(),
        }
    }

    pub(crate) fn adapted_basis(&self) -> AdaptedBasis {
        AdaptedBasis::new(self.rank, &self.blocks)
    }
}

pub fn validate_decomposition(d: &HodgeDecomposition) -> ValidationReport {
    d.validate()
}

/// Blocks of several total degrees living in one ambient space: the single
/// space realization of a general (direct sum of pure) Hodge structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedDecomposition {
    pub(crate) rank: usize,
    pub(crate) blocks: BTreeMap<Bidegree, Subspace>,
}

impl MixedDecomposition {
    pub fn new_unchecked(rank: usize, blocks: impl IntoIterator<Item = (Bidegree, Subspace)>) -> Self {
        Self {
            rank,
            blocks: blocks.into_iter().filter(|(_, s)| !s.is_zero()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> &BTreeMap<Bidegree, Subspace> {
        &self.blocks
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport::from_issues(block_issues(self.rank, &self.blocks, None))
    }

    /// The common total degree of all blocks, if there is one.
    pub fn pure_weight(&self) -> Option<i64> {
        let mut degrees = self.blocks.keys().map(|k| k.total());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

pub(crate) fn block_issues(
    rank: usize,
    blocks: &BTreeMap<Bidegree, Subspace>,
    weight: Option<i64>,
) -> Vec<Issue> {
    let mut issues = Vec::new();
    for (key, s) in blocks {
        if s.ambient_dim() != rank {
            issues.push(Issue::AmbientMismatch {
                key: key.to_string(),
                expected: rank,
                found: s.ambient_dim(),
            });
        }
        if let Some(n) = weight {
            if key.total() != n {
                issues.push(Issue::WeightMismatch { p: key.p, q: key.q, weight: n });
            }
        }
    }
    if !issues.iter().all(|i| matches!(i, Issue::WeightMismatch { .. })) {
        return issues;
    }

    let parts: Vec<Subspace> = blocks.values().cloned().collect();
    let total_dim: usize = parts.iter().map(Subspace::dim).sum();
    let span_dim = concat_bases(&parts, rank).rank();
    if total_dim != rank || span_dim != rank {
        issues.push(Issue::NotDirectSum { total_dim, span_dim, rank });
    }

    for (key, s) in blocks {
        let partner = blocks.get(&key.swapped());
        if partner != Some(&s.conjugate()) {
            issues.push(Issue::ConjugationAsymmetry { p: key.p, q: key.q });
        }
    }
    issues
}

/// The concatenated block bases of a valid decomposition, with the column
/// range belonging to each block, and its inverse.
pub(crate) struct AdaptedBasis {
    pub matrix: QiMatrix,
    pub inverse: QiMatrix,
    pub ranges: Vec<(Bidegree, Range<usize>)>,
}

impl AdaptedBasis {
    pub fn new(rank: usize, blocks: &BTreeMap<Bidegree, Subspace>) -> Self {
        let parts: Vec<Subspace> = blocks.values().cloned().collect();
        let matrix = concat_bases(&parts, rank);
        let inverse = matrix
            .inverse()
            .expect("square by construction")
            .expect("blocks of a valid decomposition form a basis");
        let mut ranges = Vec::with_capacity(blocks.len());
        let mut start = 0;
        for (key, s) in blocks {
            ranges.push((*key, start..start + s.dim()));
            start += s.dim();
        }
        Self { matrix, inverse, ranges }
    }

    /// Bidegree of each adapted basis vector, in column order.
    pub fn degrees(&self) -> Vec<Bidegree> {
        self.ranges
            .iter()
            .flat_map(|(k, r)| std::iter::repeat_n(*k, r.len()))
            .collect()
    }
}
