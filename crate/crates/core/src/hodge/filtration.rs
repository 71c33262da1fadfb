use std::collections::BTreeMap;

use super::{Bidegree, HodgeDecomposition, HodgeError, Issue, ValidationReport};
use crate::linalg::{direct_sum_spans, Subspace};

/// A Hodge filtration `F^{p_min} ⊇ ... ⊇ F^{p_max}` of weight `n`.
///
/// Below the first stored index every step is the whole space and above the
/// last one every step is zero. Construction trims redundant leading full
/// steps and trailing zero steps, so a valid filtration is stored exactly as
/// the canonical filtration of its decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HodgeFiltration {
    weight: i64,
    rank: usize,
    steps: BTreeMap<i64, Subspace>,
}

impl HodgeFiltration {
    pub fn new_unchecked(weight: i64, rank: usize, steps: impl IntoIterator<Item = (i64, Subspace)>) -> Self {
        let mut steps: BTreeMap<i64, Subspace> = steps.into_iter().collect();
        while let Some((&p, s)) = steps.last_key_value() {
            if !s.is_zero() {
                break;
            }
            steps.remove(&p);
        }
        loop {
            let mut keys = steps.keys().copied();
            let (Some(first), Some(second)) = (keys.next(), keys.next()) else {
                break;
            };
            if second == first + 1 && steps[&second].is_full() && steps[&first].is_full() {
                steps.remove(&first);
            } else {
                break;
            }
        }
        Self { weight, rank, steps }
    }

    pub fn new(weight: i64, rank: usize, steps: impl IntoIterator<Item = (i64, Subspace)>) -> Result<Self, HodgeError> {
        let f = Self::new_unchecked(weight, rank, steps);
        HodgeError::from_report(f.validate())?;
        Ok(f)
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn steps(&self) -> &BTreeMap<i64, Subspace> {
        &self.steps
    }

    /// `F^p` for any integer `p`.
    pub fn step(&self, p: i64) -> Subspace {
        match (self.steps.first_key_value(), self.steps.last_key_value()) {
            (Some((&lo, _)), _) if p < lo => Subspace::full(self.rank),
            (_, Some((&hi, _))) if p > hi => Subspace::zero(self.rank),
            (None, None) => Subspace::zero(self.rank),
            _ => self
                .steps
                .get(&p)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(self.rank)),
        }
    }

    fn structural_issues(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        if self.steps.is_empty() {
            if self.rank > 0 {
                issues.push(Issue::NoSteps);
            }
            return issues;
        }
        for (p, s) in &self.steps {
            if s.ambient_dim() != self.rank {
                issues.push(Issue::AmbientMismatch {
                    key: p.to_string(),
                    expected: self.rank,
                    found: s.ambient_dim(),
                });
            }
        }
        if !issues.is_empty() {
            return issues;
        }
        let (&lo, first) = self.steps.first_key_value().expect("nonempty");
        let &hi = self.steps.last_key_value().expect("nonempty").0;
        if !first.is_full() {
            issues.push(Issue::FirstStepNotFull { p: lo });
        }
        for p in lo..hi {
            match (self.steps.get(&p), self.steps.get(&(p + 1))) {
                (Some(a), Some(b)) => {
                    if !b.is_subspace_of(a) {
                        issues.push(Issue::NotDecreasing { p });
                    }
                }
                _ => issues.push(Issue::MissingStep { p: p + 1 }),
            }
        }
        issues
    }

    /// First `p` at which `F^p ⊕ conj(F^{n-p+1})` fails to be the whole space.
    fn first_non_opposed(&self) -> Option<i64> {
        let (lo, hi) = self.index_range()?;
        (lo..=hi + 1).find(|&p| {
            let complement = self.step(self.weight - p + 1).conjugate();
            !direct_sum_spans(&[self.step(p), complement]).expect("shared ambient dimension")
        })
    }

    fn index_range(&self) -> Option<(i64, i64)> {
        Some((*self.steps.first_key_value()?.0, *self.steps.last_key_value()?.0))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = self.structural_issues();
        if issues.is_empty() {
            if let Some(p) = self.first_non_opposed() {
                issues.push(Issue::NotOpposed { p });
            }
        }
        ValidationReport::from_issues(issues)
    }
}

pub fn validate_filtration(f: &HodgeFiltration) -> ValidationReport {
    f.validate()
}

/// `F^p = ⊕_{r ≥ p} H^{r, n-r}`.
pub fn decomposition_to_filtration(d: &HodgeDecomposition) -> Result<HodgeFiltration, HodgeError> {
    HodgeError::from_report(d.validate())?;
    let n = d.weight();
    let rank = d.rank();
    let Some((lo, hi)) = d
        .blocks()
        .keys()
        .map(|k| k.p)
        .fold(None, |acc: Option<(i64, i64)>, p| match acc {
            None => Some((p, p)),
            Some((a, b)) => Some((a.min(p), b.max(p))),
        })
    else {
        return Ok(HodgeFiltration::new_unchecked(n, rank, []));
    };
    let mut steps = BTreeMap::new();
    let mut acc = Subspace::zero(rank);
    for p in (lo..=hi).rev() {
        if let Some(block) = d.block(Bidegree::new(p, n - p)) {
            acc = acc.sum(block)?;
        }
        steps.insert(p, acc.clone());
    }
    Ok(HodgeFiltration::new_unchecked(n, rank, steps))
}

/// `H^{p,q} = F^p ∩ conj(F^q)` for `p + q = n`.
pub fn filtration_to_decomposition(f: &HodgeFiltration) -> Result<HodgeDecomposition, HodgeError> {
    let structural = f.structural_issues();
    if !structural.is_empty() {
        return Err(HodgeError::Invalid(ValidationReport::from_issues(structural)));
    }
    if let Some(p) = f.first_non_opposed() {
        return Err(HodgeError::NotOpposed { p });
    }
    let n = f.weight();
    let Some((lo, hi)) = f.index_range() else {
        return HodgeDecomposition::new(n, f.rank(), []);
    };
    let mut blocks = Vec::new();
    for p in lo..=hi {
        let q = n - p;
        let block = f.step(p).intersect(&f.step(q).conjugate())?;
        blocks.push((Bidegree::new(p, q), block));
    }
    HodgeDecomposition::new(n, f.rank(), blocks)
}
