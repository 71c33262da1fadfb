//! Pure Hodge structures in three equivalent presentations and the
//! conversions between them.
//!
//! * [`HodgeDecomposition`]: the splitting of `C^rank` into blocks `H^{p,q}`
//!   with `p + q = n` and `conj(H^{p,q}) = H^{q,p}`.
//! * [`HodgeFiltration`]: the decreasing chain `F^p = ⊕_{r≥p} H^{r,n-r}`.
//! * [`HodgeRepresentation`]: the Laurent polynomial `h(z) = Σ z^p z̄^q C_{pq}`
//!   whose coefficients are the spectral projectors onto the blocks.
//!
//! The integral lattice is always the standard `Z^rank` inside `C^rank`, so
//! "conjugation" is entrywise conjugation of coordinates.

mod decomposition;
mod document;
mod filtration;
mod general;
mod ops;
mod representation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::LinalgError;

pub use decomposition::{validate_decomposition, HodgeDecomposition, MixedDecomposition};
pub use document::{validate_batch, Face, HodgeDocument, SchemaError};
pub use filtration::{
    decomposition_to_filtration, filtration_to_decomposition, validate_filtration, HodgeFiltration,
};
pub use general::{weight_components, GeneralHodgeStructure, HodgeStructure};
pub use ops::{direct_sum, dual, exterior_power, tensor, wedge_index};
pub use representation::{
    decomposition_to_representation, representation_to_decomposition, validate_representation,
    HodgeRepresentation, WeightTag,
};

/// Bidegree `(p, q)` of a Hodge block or of a character `z^p z̄^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
}

impl Bidegree {
    pub const fn new(p: i64, q: i64) -> Self {
        Self { p, q }
    }

    pub const fn total(self) -> i64 {
        self.p + self.q
    }

    /// `(q, p)`, the bidegree of the conjugate block.
    pub const fn swapped(self) -> Self {
        Self::new(self.q, self.p)
    }

    pub const fn negated(self) -> Self {
        Self::new(-self.p, -self.q)
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl From<(i64, i64)> for Bidegree {
    fn from((p, q): (i64, i64)) -> Self {
        Self::new(p, q)
    }
}

/// Formats as the JSON map key `"p,q"`.
impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl FromStr for Bidegree {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (p, q) = s
            .split_once(',')
            .ok_or_else(|| format!("bidegree key {s:?} is not of the form \"p,q\""))?;
        let p = p.trim().parse().map_err(|e| format!("bad p in {s:?}: {e}"))?;
        let q = q.trim().parse().map_err(|e| format!("bad q in {s:?}: {e}"))?;
        Ok(Self::new(p, q))
    }
}

/// One violated invariant found while validating a structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum Issue {
    /// A block or coefficient sits in the wrong ambient space.
    AmbientMismatch { key: String, expected: usize, found: usize },
    /// Block `(p, q)` does not satisfy `p + q = weight`.
    WeightMismatch { p: i64, q: i64, weight: i64 },
    /// The blocks are not independent or do not span the ambient space.
    NotDirectSum { total_dim: usize, span_dim: usize, rank: usize },
    /// `conj(H^{p,q}) != H^{q,p}`.
    ConjugationAsymmetry { p: i64, q: i64 },
    /// Filtration steps are not contiguous in `p`.
    MissingStep { p: i64 },
    /// `F^{p+1}` is not contained in `F^p`.
    NotDecreasing { p: i64 },
    /// The first stored step is not the whole space.
    FirstStepNotFull { p: i64 },
    /// No steps stored although the space is nonzero.
    NoSteps,
    /// `F^p ⊕ conj(F^{n-p+1})` is not the whole space.
    NotOpposed { p: i64 },
    NotSquare { key: String },
    NotIdempotent { p: i64, q: i64 },
    ZeroProjector { p: i64, q: i64 },
    NotAnnihilating { first: String, second: String },
    NotComplete,
    /// `conj(C_{pq}) != C_{qp}`.
    RealityFails { p: i64, q: i64 },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::AmbientMismatch { key, expected, found } => {
                write!(f, "entry {key} has dimension {found}, expected {expected}")
            }
            Issue::WeightMismatch { p, q, weight } => {
                write!(f, "block ({p},{q}) does not have total degree {weight}")
            }
            Issue::NotDirectSum { total_dim, span_dim, rank } => write!(
                f,
                "blocks are not a direct sum decomposition: dimensions sum to {total_dim}, span has dimension {span_dim}, rank is {rank}"
            ),
            Issue::ConjugationAsymmetry { p, q } => {
                write!(f, "conjugate of block ({p},{q}) is not block ({q},{p})")
            }
            Issue::MissingStep { p } => write!(f, "filtration step F^{p} is missing"),
            Issue::NotDecreasing { p } => write!(f, "F^{} is not contained in F^{p}", p + 1),
            Issue::FirstStepNotFull { p } => write!(f, "first step F^{p} is not the whole space"),
            Issue::NoSteps => write!(f, "filtration has no steps"),
            Issue::NotOpposed { p } => write!(
                f,
                "filtration is not opposed to its conjugate at p = {p}"
            ),
            Issue::NotSquare { key } => write!(f, "coefficient {key} is not square"),
            Issue::NotIdempotent { p, q } => write!(f, "C_({p},{q}) is not idempotent"),
            Issue::ZeroProjector { p, q } => write!(f, "C_({p},{q}) is zero"),
            Issue::NotAnnihilating { first, second } => {
                write!(f, "C_({first}) C_({second}) is not zero")
            }
            Issue::NotComplete => write!(f, "coefficients do not sum to the identity"),
            Issue::RealityFails { p, q } => {
                write!(f, "conjugate of C_({p},{q}) is not C_({q},{p})")
            }
        }
    }
}

/// Outcome of validating a structure: empty `issues` means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn from_issues(issues: Vec<Issue>) -> Self {
        Self {
            valid: issues.is_empty(),
            issues,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return write!(f, "valid");
        }
        write!(f, "invalid:")?;
        for issue in &self.issues {
            write!(f, "\n  - {issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HodgeError {
    #[error("invalid structure: {0}")]
    Invalid(ValidationReport),
    #[error("filtration is not opposed to its conjugate at p = {p}")]
    NotOpposed { p: i64 },
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(i64, i64),
    #[error("structure is not pure")]
    NotPure,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl HodgeError {
    fn from_report(report: ValidationReport) -> Result<(), HodgeError> {
        if report.valid {
            Ok(())
        } else {
            Err(HodgeError::Invalid(report))
        }
    }
}
