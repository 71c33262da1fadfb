use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::decomposition::AdaptedBasis;
use super::general::{GeneralHodgeStructure, HodgeStructure};
use super::{Bidegree, HodgeDecomposition, HodgeError, Issue, MixedDecomposition, ValidationReport};
use crate::linalg::{QiMatrix, Subspace};

/// Declared weight of a representation: a single integer for a pure
/// structure, or `"mixed"` when several total degrees occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightTag {
    Pure(i64),
    Mixed(MixedMarker),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixedMarker {
    Mixed,
}

impl WeightTag {
    pub const MIXED: WeightTag = WeightTag::Mixed(MixedMarker::Mixed);

    pub fn pure(self) -> Option<i64> {
        match self {
            WeightTag::Pure(n) => Some(n),
            WeightTag::Mixed(_) => None,
        }
    }
}

/// The algebraic C*-action `h(z) = Σ z^p z̄^q C_{pq}` on `C^rank`, stored
/// through its coefficient matrices.
///
/// For a valid representation the coefficients are the spectral projectors of
/// every `h(z)`: idempotent, mutually annihilating, summing to the identity
/// and exchanged by conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HodgeRepresentation {
    weight: WeightTag,
    rank: usize,
    coefficients: BTreeMap<Bidegree, QiMatrix>,
}

impl HodgeRepresentation {
    pub fn new_unchecked(
        weight: WeightTag,
        rank: usize,
        coefficients: impl IntoIterator<Item = (Bidegree, QiMatrix)>,
    ) -> Self {
        Self {
            weight,
            rank,
            coefficients: coefficients.into_iter().collect(),
        }
    }

    pub fn new(
        weight: WeightTag,
        rank: usize,
        coefficients: impl IntoIterator<Item = (Bidegree, QiMatrix)>,
    ) -> Result<Self, HodgeError> {
        let r = Self::new_unchecked(weight, rank, coefficients);
        HodgeError::from_report(r.validate())?;
        Ok(r)
    }

    pub fn weight(&self) -> WeightTag {
        self.weight
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coefficients(&self) -> &BTreeMap<Bidegree, QiMatrix> {
        &self.coefficients
    }

    pub fn is_pure(&self) -> bool {
        self.common_degree().is_some() || (self.coefficients.is_empty() && self.weight.pure().is_some())
    }

    fn common_degree(&self) -> Option<i64> {
        let mut degrees = self.coefficients.keys().map(|k| k.total());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// `h(z)` evaluated at a Gaussian rational point `z ≠ 0`.
    pub fn evaluate(&self, z: &crate::linalg::GaussianRational) -> QiMatrix {
        let zbar = z.conj();
        let mut acc = QiMatrix::zeros(self.rank, self.rank);
        for (k, c) in &self.coefficients {
            let s = &power(z, k.p) * &power(&zbar, k.q);
            acc = &acc + &c.scale(&s);
        }
        acc
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport::from_issues(self.issues())
    }

    fn issues(&self) -> Vec<Issue> {
        let n = self.rank;
        let mut issues = Vec::new();
        for (k, c) in &self.coefficients {
            if !c.is_square() {
                issues.push(Issue::NotSquare { key: k.to_string() });
            } else if c.rows() != n {
                issues.push(Issue::AmbientMismatch {
                    key: k.to_string(),
                    expected: n,
                    found: c.rows(),
                });
            }
        }
        if !issues.is_empty() {
            return issues;
        }
        if let WeightTag::Pure(w) = self.weight {
            for k in self.coefficients.keys() {
                if k.total() != w {
                    issues.push(Issue::WeightMismatch { p: k.p, q: k.q, weight: w });
                }
            }
        }
        for (k, c) in &self.coefficients {
            if c.is_zero() {
                issues.push(Issue::ZeroProjector { p: k.p, q: k.q });
            } else if &(c * c) != c {
                issues.push(Issue::NotIdempotent { p: k.p, q: k.q });
            }
        }
        let entries: Vec<_> = self.coefficients.iter().collect();
        for (i, (ka, a)) in entries.iter().enumerate() {
            for (kb, b) in entries.iter().skip(i + 1) {
                if !(*a * *b).is_zero() || !(*b * *a).is_zero() {
                    issues.push(Issue::NotAnnihilating {
                        first: ka.to_string(),
                        second: kb.to_string(),
                    });
                }
            }
        }
        let total = self
            .coefficients
            .values()
            .fold(QiMatrix::zeros(n, n), |acc, c| &acc + c);
        if total != QiMatrix::identity(n) {
            issues.push(Issue::NotComplete);
        }
        for (k, c) in &self.coefficients {
            if self.coefficients.get(&k.swapped()) != Some(&c.conj()) {
                issues.push(Issue::RealityFails { p: k.p, q: k.q });
            }
        }
        issues
    }
}

fn power(z: &crate::linalg::GaussianRational, k: i64) -> crate::linalg::GaussianRational {
    use num_traits::One;
    let base = if k < 0 { z.inv().expect("z is nonzero") } else { z.clone() };
    let mut acc = crate::linalg::GaussianRational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

pub fn validate_representation(r: &HodgeRepresentation) -> ValidationReport {
    r.validate()
}

/// Spectral projectors of the blocks: `C_{pq}` projects onto `H^{p,q}`
/// along the other blocks.
pub(crate) fn projectors(rank: usize, blocks: &BTreeMap<Bidegree, Subspace>) -> BTreeMap<Bidegree, QiMatrix> {
    let basis = AdaptedBasis::new(rank, blocks);
    basis
        .ranges
        .iter()
        .map(|(key, range)| {
            let cols: Vec<usize> = range.clone().collect();
            let left = basis.matrix.select_columns(&cols);
            let right = basis.inverse.select_rows(&cols);
            (*key, &left * &right)
        })
        .collect()
}

pub fn decomposition_to_representation(d: &HodgeDecomposition) -> Result<HodgeRepresentation, HodgeError> {
    HodgeError::from_report(d.validate())?;
    Ok(HodgeRepresentation {
        weight: WeightTag::Pure(d.weight()),
        rank: d.rank(),
        coefficients: projectors(d.rank(), d.blocks()),
    })
}

pub(crate) fn mixed_to_representation(m: &MixedDecomposition) -> Result<HodgeRepresentation, HodgeError> {
    HodgeError::from_report(m.validate())?;
    let weight = match m.pure_weight() {
        Some(n) => WeightTag::Pure(n),
        None => WeightTag::MIXED,
    };
    Ok(HodgeRepresentation {
        weight,
        rank: m.rank(),
        coefficients: projectors(m.rank(), m.blocks()),
    })
}

/// Recovers the blocks as the images of the projectors. A representation
/// whose keys share one total degree gives a pure structure; otherwise the
/// blocks are grouped by total degree into a general structure.
pub fn representation_to_decomposition(r: &HodgeRepresentation) -> Result<HodgeStructure, HodgeError> {
    HodgeError::from_report(r.validate())?;
    let blocks: BTreeMap<Bidegree, Subspace> = r
        .coefficients
        .iter()
        .map(|(k, c)| (*k, Subspace::column_space(c)))
        .collect();
    match (r.common_degree(), r.weight) {
        (Some(n), _) | (None, WeightTag::Pure(n)) => {
            Ok(HodgeStructure::Pure(HodgeDecomposition::new(n, r.rank, blocks)?))
        }
        (None, WeightTag::Mixed(_)) => {
            let mixed = MixedDecomposition::new_unchecked(r.rank, blocks);
            Ok(HodgeStructure::General(GeneralHodgeStructure::from_mixed(&mixed)?))
        }
    }
}
