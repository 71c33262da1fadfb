//! Polarizations: integer bilinear forms on the lattice checked against the
//! two Hodge–Riemann bilinear relations, plus the even/odd weight grading of
//! a general Hodge structure.
//!
//! The form `Q` is extended to `C^rank` bilinearly. Positivity on a block
//! `H^{p,q}` (with `p ≥ q`) means the Hermitian form `v ↦ i^{p-q} Q(v, v̄)` is
//! positive definite there, decided exactly by Sylvester's criterion.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::hodge::{Bidegree, GeneralHodgeStructure, HodgeDecomposition, HodgeError};
use crate::linalg::{GaussianRational, QiMatrix, Rational, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    /// Parity expected for a polarization of weight `n`: `(-1)^n`.
    pub fn for_weight(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Symmetric
        } else {
            Parity::Antisymmetric
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolarizationError {
    #[error("gram matrix must be {rank}x{rank}")]
    Shape { rank: usize },
    #[error("gram matrix is not {0:?}")]
    ParityViolated(Parity),
    #[error("gram matrix is degenerate")]
    Degenerate,
    #[error("form has rank {form}, structure has rank {structure}")]
    RankMismatch { form: usize, structure: usize },
    #[error(transparent)]
    Hodge(#[from] HodgeError),
}

/// A nondegenerate integral bilinear form on `Z^rank` of declared parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawForm", into = "RawForm")]
pub struct PolarizationForm {
    rank: usize,
    parity: Parity,
    gram: Vec<Vec<i64>>,
    gram_qi: QiMatrix,
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    rank: usize,
    parity: Parity,
    gram: Vec<Vec<i64>>,
}

impl TryFrom<RawForm> for PolarizationForm {
    type Error = PolarizationError;
    fn try_from(raw: RawForm) -> Result<Self, Self::Error> {
        PolarizationForm::new(raw.rank, raw.parity, raw.gram)
    }
}

impl From<PolarizationForm> for RawForm {
    fn from(f: PolarizationForm) -> Self {
        RawForm {
            rank: f.rank,
            parity: f.parity,
            gram: f.gram,
        }
    }
}

impl PolarizationForm {
    pub fn new(rank: usize, parity: Parity, gram: Vec<Vec<i64>>) -> Result<Self, PolarizationError> {
        if gram.len() != rank || gram.iter().any(|r| r.len() != rank) {
            return Err(PolarizationError::Shape { rank });
        }
        let sign = match parity {
            Parity::Symmetric => 1,
            Parity::Antisymmetric => -1,
        };
        for i in 0..rank {
            for j in 0..rank {
                if gram[i][j] != sign * gram[j][i] {
                    return Err(PolarizationError::ParityViolated(parity));
                }
            }
        }
        let gram_qi = QiMatrix::from_rows(
            gram.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from(x)).collect())
                .collect(),
            rank,
        )
        .expect("square by the shape check");
        if rank > 0 && gram_qi.determinant().expect("square").is_zero() {
            return Err(PolarizationError::Degenerate);
        }
        Ok(Self { rank, parity, gram, gram_qi })
    }

    /// The standard symplectic form `[[0, 1], [-1, 0]]`.
    pub fn symplectic_plane() -> Self {
        Self::new(2, Parity::Antisymmetric, vec![vec![0, 1], vec![-1, 0]]).expect("nondegenerate")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn negated(&self) -> Self {
        let gram = self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Self::new(self.rank, self.parity, gram).expect("negation preserves parity and rank")
    }

    /// `Q(u, v) = uᵀ G v`, bilinear over Q(i).
    pub fn eval(&self, u: &[GaussianRational], v: &[GaussianRational]) -> GaussianRational {
        let gv = self.gram_qi.mul_vec(v);
        u.iter()
            .zip(&gv)
            .fold(GaussianRational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Matrix `[Q(u_a, v_b)]` between two bases.
    pub fn pairing(&self, us: &Subspace, vs: &Subspace) -> QiMatrix {
        &(&us.basis().transpose() * &self.gram_qi) * vs.basis()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthogonalityFailureKind {
    /// `Q` does not vanish on blocks that are not conjugate partners.
    NonzeroPairing,
    /// `Q` is degenerate on `H^{p,q} × H^{q,p}`.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityFailure {
    pub first: Bidegree,
    pub second: Bidegree,
    pub kind: OrthogonalityFailureKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub ok: bool,
    pub failures: Vec<OrthogonalityFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum PositivityFailure {
    /// `i^{p-q} Q(u_a, ū_b)` is not a Hermitian matrix; happens when the
    /// parity of `Q` does not match the weight.
    NotHermitian { block: Bidegree },
    /// A leading principal minor is not positive; `witness` is a vector of
    /// the block with `i^{p-q} Q(w, w̄) = value ≤ 0`.
    NotPositive {
        block: Bidegree,
        minor_index: usize,
        witness: Vec<GaussianRational>,
        #[serde(with = "rational_string")]
        value: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub ok: bool,
    pub failures: Vec<PositivityFailure>,
    /// Leading principal minors of the Hermitian form on each checked block,
    /// as far as they were computed.
    #[serde(serialize_with = "minors_as_strings")]
    pub minors: BTreeMap<Bidegree, Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeRiemannReport {
    pub orthogonality_ok: bool,
    pub orthogonality_failures: Vec<OrthogonalityFailure>,
    pub positivity_ok: bool,
    pub positivity_failures: Vec<PositivityFailure>,
    pub warnings: Vec<String>,
    pub overall: bool,
}

mod rational_string {
    use super::Rational;
    pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }
}

fn minors_as_strings<S: serde::Serializer>(
    minors: &BTreeMap<Bidegree, Vec<Rational>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(minors.len()))?;
    for (k, v) in minors {
        let strings: Vec<String> = v.iter().map(ToString::to_string).collect();
        map.serialize_entry(&k.to_string(), &strings)?;
    }
    map.end()
}

fn check_inputs(d: &HodgeDecomposition, form: &PolarizationForm) -> Result<(), PolarizationError> {
    if d.rank() != form.rank() {
        return Err(PolarizationError::RankMismatch {
            form: form.rank(),
            structure: d.rank(),
        });
    }
    let report = d.validate();
    if !report.is_valid() {
        return Err(HodgeError::Invalid(report).into());
    }
    Ok(())
}

/// First Hodge–Riemann relation: `Q(H^{p,q}, H^{p',q'}) = 0` unless
/// `(p', q') = (q, p)`, and `Q` is nondegenerate on `H^{p,q} × H^{q,p}`.
pub fn check_orthogonality(
    d: &HodgeDecomposition,
    form: &PolarizationForm,
) -> Result<OrthogonalityReport, PolarizationError> {
    check_inputs(d, form)?;
    let mut failures = Vec::new();
    for (ka, a) in d.blocks() {
        for (kb, b) in d.blocks() {
            if kb < ka {
                continue;
            }
            let pairing = form.pairing(a, b);
            if *kb == ka.swapped() {
                if pairing.determinant().expect("partner blocks have equal dimension").is_zero() {
                    failures.push(OrthogonalityFailure {
                        first: *ka,
                        second: *kb,
                        kind: OrthogonalityFailureKind::Degenerate,
                    });
                }
            } else if !pairing.is_zero() {
                failures.push(OrthogonalityFailure {
                    first: *ka,
                    second: *kb,
                    kind: OrthogonalityFailureKind::NonzeroPairing,
                });
            }
        }
    }
    Ok(OrthogonalityReport {
        ok: failures.is_empty(),
        failures,
    })
}

/// Second Hodge–Riemann relation on every block with `p ≥ q`.
pub fn check_positivity(
    d: &HodgeDecomposition,
    form: &PolarizationForm,
) -> Result<PositivityReport, PolarizationError> {
    check_inputs(d, form)?;
    let mut failures = Vec::new();
    let mut minors = BTreeMap::new();
    for (key, block) in d.blocks() {
        if key.p < key.q {
            continue;
        }
        let factor = GaussianRational::i_pow(key.p - key.q);
        let hermitian = form.pairing(block, &block.conjugate()).scale(&factor);
        if hermitian.adjoint() != hermitian {
            failures.push(PositivityFailure::NotHermitian { block: *key });
            continue;
        }
        let outcome = sylvester(&hermitian);
        minors.insert(*key, outcome.minors.clone());
        if let Some((index, coefficients)) = outcome.witness {
            let witness = block.basis().mul_vec(&coefficients);
            let value = form.eval(&witness, &conj_vec(&witness)) * &factor;
            debug_assert!(value.is_real());
            failures.push(PositivityFailure::NotPositive {
                block: *key,
                minor_index: index,
                witness,
                value: value.re,
            });
        }
    }
    Ok(PositivityReport {
        ok: failures.is_empty(),
        failures,
        minors,
    })
}

/// Both relations, plus a warning when the parity of `Q` is not `(-1)^n`.
pub fn check_polarization(
    d: &HodgeDecomposition,
    form: &PolarizationForm,
) -> Result<HodgeRiemannReport, PolarizationError> {
    let orthogonality = check_orthogonality(d, form)?;
    let positivity = check_positivity(d, form)?;
    let mut warnings = Vec::new();
    let expected = Parity::for_weight(d.weight());
    if form.parity() != expected {
        warnings.push(format!(
            "form is {:?} but weight {} calls for a {:?} form",
            form.parity(),
            d.weight(),
            expected
        ));
    }
    Ok(HodgeRiemannReport {
        overall: orthogonality.ok && positivity.ok,
        orthogonality_ok: orthogonality.ok,
        orthogonality_failures: orthogonality.failures,
        positivity_ok: positivity.ok,
        positivity_failures: positivity.failures,
        warnings,
    })
}

fn conj_vec(v: &[GaussianRational]) -> Vec<GaussianRational> {
    v.iter().map(GaussianRational::conj).collect()
}

/// Whether a Hermitian matrix is positive definite, decided exactly;
/// `None` if `h` is not Hermitian.
pub fn is_positive_definite(h: &QiMatrix) -> Option<bool> {
    if h.rows() != h.cols() || h.adjoint() != *h {
        return None;
    }
    Some(sylvester(h).witness.is_none())
}

struct Sylvester {
    minors: Vec<Rational>,
    /// First nonpositive leading minor (1-based) and coefficients `c` with
    /// `cᵀ H c̄ ≤ 0`.
    witness: Option<(usize, Vec<GaussianRational>)>,
}

/// Hermitian LDL* without pivoting. The leading principal minors are the
/// running products of the pivots, so they are all positive iff every pivot
/// is; at the first nonpositive pivot `D_j`, `x = L^{-*} e_j` has
/// `x* H x = D_j`.
fn sylvester(h: &QiMatrix) -> Sylvester {
    let n = h.rows();
    let mut l = QiMatrix::identity(n);
    let mut pivots: Vec<Rational> = Vec::with_capacity(n);
    let mut minors = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = h[(j, j)].clone();
        for k in 0..j {
            let ljk = &l[(j, k)];
            dj -= &(&(ljk * &ljk.conj()) * &GaussianRational::real(pivots[k].clone()));
        }
        debug_assert!(dj.is_real(), "pivots of a Hermitian matrix are real");
        let dj = dj.re;
        let minor = minors.last().cloned().unwrap_or_else(|| Rational::from_integer(1.into())) * &dj;
        minors.push(minor);
        if !dj.is_positive() {
            // Solve L* x = e_j on the leading block by back substitution.
            let mut x = vec![GaussianRational::zero(); n];
            x[j] = GaussianRational::from(1);
            for i in (0..j).rev() {
                let mut acc = GaussianRational::zero();
                for k in i + 1..=j {
                    acc += &(&l[(k, i)].conj() * &x[k]);
                }
                x[i] = -acc;
            }
            return Sylvester {
                minors,
                witness: Some((j + 1, conj_vec(&x))),
            };
        }
        let dj_inv = GaussianRational::real(dj.recip());
        for i in j + 1..n {
            let mut v = h[(i, j)].clone();
            for k in 0..j {
                let term = &(&l[(i, k)] * &l[(j, k)].conj()) * &GaussianRational::real(pivots[k].clone());
                v -= &term;
            }
            l[(i, j)] = &v * &dj_inv;
        }
        pivots.push(dj);
    }
    Sylvester { minors, witness: None }
}

/// Splits a general structure into its even-weight and odd-weight parts.
pub fn z2_grading(g: &GeneralHodgeStructure) -> (GeneralHodgeStructure, GeneralHodgeStructure) {
    let (even, odd): (Vec<_>, Vec<_>) = g
        .components()
        .values()
        .cloned()
        .partition(|d| d.weight().rem_euclid(2) == 0);
    (
        GeneralHodgeStructure::from_components(even).expect("distinct weights"),
        GeneralHodgeStructure::from_components(odd).expect("distinct weights"),
    )
}
