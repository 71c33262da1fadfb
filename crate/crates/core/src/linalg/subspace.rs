use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::QiMatrix;
use super::scalar::GaussianRational;
use super::LinalgError;

/// A linear subspace of Q(i)^n.
///
/// The basis is stored in reduced column echelon form (the transpose of the
/// RREF of the spanning vectors taken as rows), so two equal subspaces always
/// compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: QiMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: QiMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: QiMatrix::identity(ambient_dim),
        }
    }

    /// Span of the given vectors. Linearly dependent input is fine.
    pub fn span(ambient_dim: usize, vectors: &[Vec<GaussianRational>]) -> Result<Self, LinalgError> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        let rows = QiMatrix::from_rows(vectors.to_vec(), ambient_dim)?;
        Ok(Self::from_row_matrix(&rows))
    }

    /// Column space of `m`.
    pub fn column_space(m: &QiMatrix) -> Self {
        Self::from_row_matrix(&m.transpose())
    }

    /// Span of the standard basis vectors `e_i` for the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let vectors: Vec<_> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![GaussianRational::zero(); ambient_dim];
                v[i] = GaussianRational::one();
                v
            })
            .collect();
        Self::span(ambient_dim, &vectors).expect("indices within ambient dimension")
    }

    fn from_row_matrix(rows: &QiMatrix) -> Self {
        let ambient_dim = rows.cols();
        let (r, pivots) = rows.rref_with_pivots();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        Self {
            ambient_dim,
            basis: r.select_rows(&keep).transpose(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// `ambient_dim x dim` matrix whose columns are the canonical basis.
    pub fn basis(&self) -> &QiMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<GaussianRational>> {
        self.basis.columns()
    }

    /// Row index of the leading one in each canonical basis column.
    pub fn pivot_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|j| {
                (0..self.ambient_dim)
                    .find(|&i| !self.basis[(i, j)].is_zero())
                    .expect("canonical basis columns are nonzero")
            })
            .collect()
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let coords: Vec<_> = self.pivot_rows().into_iter().map(|i| v[i].clone()).collect();
        let back = self.basis.mul_vec(&coords);
        (back == v).then_some(coords)
    }

    pub fn contains(&self, v: &[GaussianRational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.basis.columns().iter().all(|v| other.contains(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, &vectors)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        intersect(self, other)
    }

    /// Entrywise conjugate of the subspace.
    pub fn conjugate(&self) -> Subspace {
        conjugate(self)
    }

    /// True when the subspace is stable under conjugation, i.e. defined over Q.
    pub fn is_real(&self) -> bool {
        self.basis.is_real()
    }

    /// Image of the subspace under a linear map.
    pub fn image_under(&self, m: &QiMatrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: m.cols(),
            });
        }
        Ok(Subspace::column_space(&(m * &self.basis)))
    }
}

/// Null space of `m` as a canonical subspace of Q(i)^cols.
pub fn kernel(m: &QiMatrix) -> Subspace {
    Subspace::span(m.cols(), &m.null_space_vectors()).expect("null vectors have matching length")
}

/// Reduced row echelon form of `m`.
pub fn rref(m: &QiMatrix) -> QiMatrix {
    m.rref()
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.check_ambient(b)?;
    if a.is_zero() || b.is_zero() {
        return Ok(Subspace::zero(a.ambient_dim));
    }
    // Solve A x = B y, i.e. [A | -B] (x, y) = 0, and map x through A.
    let neg_b = b.basis.scale(&-GaussianRational::one());
    let joint = a.basis.hstack(&neg_b)?;
    let k = a.dim();
    let images: Vec<_> = joint
        .null_space_vectors()
        .into_iter()
        .map(|v| a.basis.mul_vec(&v[..k]))
        .collect();
    Subspace::span(a.ambient_dim, &images)
}

pub fn conjugate(s: &Subspace) -> Subspace {
    // Conjugation maps a reduced echelon basis to a reduced echelon basis.
    Subspace {
        ambient_dim: s.ambient_dim,
        basis: s.basis.conj(),
    }
}

/// True iff the parts are independent and together span the ambient space.
pub fn direct_sum_spans(parts: &[Subspace]) -> Result<bool, LinalgError> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    let n = first.ambient_dim;
    for p in parts {
        first.check_ambient(p)?;
    }
    let total: usize = parts.iter().map(Subspace::dim).sum();
    if total != n {
        return Ok(false);
    }
    Ok(concat_bases(parts, n).rank() == n)
}

/// Concatenates the bases of `parts` column-wise into an `n x Σdim` matrix.
pub fn concat_bases(parts: &[Subspace], n: usize) -> QiMatrix {
    let columns: Vec<_> = parts.iter().flat_map(Subspace::basis_vectors).collect();
    QiMatrix::from_columns(&columns, n).expect("bases share the ambient dimension")
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(serializer)
    }
}

/// Subspaces are read back from a basis matrix whose columns span them; the
/// ambient dimension is the row count, so zero-row input cannot carry one.
impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let m = QiMatrix::deserialize(deserializer)?;
        Ok(Subspace::column_space(&m))
    }
}
