//! Periods of the Weierstrass family `y² = 4x³ − t2·x + t3`.
//!
//! The classical invariants are `g2 = t2`, `g3 = −t3`. Periods come from the
//! complex AGM; Gauss–Kronrod integration and Eisenstein q-series serve as
//! independent oracles.

pub mod agm;
mod curve;
pub mod modular;
mod periods;
pub mod quadrature;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::batch::{self, Execution};

pub use curve::{discriminant, j_algebraic, WeierstrassCurve};
pub use modular::{eisenstein_e4_e6, j_of_tau, reduce_to_fundamental_domain, Sl2Z, TauPoint};
pub use periods::{basis_change, betti_de_rham_row, lattice_invariants, periods, reduced_basis, tau_of, BettiDeRhamMatrix};

/// Default relative precision.
pub const DEFAULT_PRECISION: f64 = 1e-12;
/// Default number of q-series terms.
pub const DEFAULT_TERMS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("singular curve: t2 = {t2}, t3 = {t3} has zero discriminant")]
    Singular { t2: f64, t3: f64 },
    #[error("AGM did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("tau = {re} + {im}i is not in the upper half-plane")]
    NotInUpperHalfPlane { re: f64, im: f64 },
    #[error("reduction of tau = {re} + {im}i did not terminate")]
    ReductionDidNotTerminate { re: f64, im: f64 },
    #[error("integration failed: {reason}")]
    Integration { reason: String },
    #[error("precision must lie in (0, 1), got {0}")]
    InvalidPrecision(f64),
}

/// `L = Z·ω1 + Z·ω2` with `Im(ω2/ω1) > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodLattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
    /// Descriptions of the cycles `(δ1, δ2)` integrated to get `ω1`, `ω2`.
    pub cycle_labels: (String, String),
}

impl PeriodLattice {
    /// Negates `ω2` (and its cycle) if needed so that `Im(ω2/ω1) > 0`.
    pub fn oriented(omega1: Complex64, omega2: Complex64, labels: (String, String)) -> Self {
        if (omega2 / omega1).im < 0.0 {
            Self {
                omega1,
                omega2: -omega2,
                cycle_labels: (labels.0, format!("-({})", labels.1)),
            }
        } else {
            Self {
                omega1,
                omega2,
                cycle_labels: labels,
            }
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            omega1: self.omega1 * factor,
            omega2: self.omega2 * factor,
            cycle_labels: self.cycle_labels.clone(),
        }
    }
}

/// A real number written as a decimal string at full (round-trip) precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decimal(pub f64);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:?}", self.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecimalComplex {
    pub re: Decimal,
    pub im: Decimal,
}

impl From<Complex64> for DecimalComplex {
    fn from(z: Complex64) -> Self {
        Self {
            re: Decimal(z.re),
            im: Decimal(z.im),
        }
    }
}

/// Everything computed for one curve, in the shape printed by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticRecord {
    pub convention: &'static str,
    pub t2: Decimal,
    pub t3: Decimal,
    pub discriminant: Decimal,
    pub j_algebraic: Decimal,
    pub omega1: DecimalComplex,
    pub omega2: DecimalComplex,
    pub cycle_labels: [String; 2],
    pub tau_reduced: DecimalComplex,
    pub reducing_word: Sl2Z,
    pub j_of_tau: DecimalComplex,
    pub roundtrip_g2: DecimalComplex,
    pub roundtrip_g3: DecimalComplex,
}

impl EllipticRecord {
    pub fn compute(c: &WeierstrassCurve, precision: f64, terms: usize) -> Result<Self, EllipticError> {
        let lattice = periods(c, precision)?;
        let (_, tau) = reduced_basis(&lattice)?;
        let (g2, g3) = lattice_invariants(&lattice, terms)?;
        Ok(Self {
            convention: "y^2 = 4x^3 - t2*x + t3; g2 = t2, g3 = -t3",
            t2: Decimal(c.t2()),
            t3: Decimal(c.t3()),
            discriminant: Decimal(discriminant(c)),
            j_algebraic: Decimal(j_algebraic(c)?),
            omega1: lattice.omega1.into(),
            omega2: lattice.omega2.into(),
            cycle_labels: [lattice.cycle_labels.0, lattice.cycle_labels.1],
            tau_reduced: tau.tau.into(),
            reducing_word: tau.reducing_word,
            j_of_tau: j_of_tau(&tau, terms).into(),
            roundtrip_g2: g2.into(),
            roundtrip_g3: g3.into(),
        })
    }
}

/// Computes a record per curve.
pub fn period_grid(
    curves: &[WeierstrassCurve],
    precision: f64,
    terms: usize,
    exec: Execution,
) -> Vec<Result<EllipticRecord, EllipticError>> {
    batch::map(curves, exec, |c| EllipticRecord::compute(c, precision, terms))
}
