//! Linear algebra constructions on Hodge structures: direct sum, tensor
//! product, dual and exterior powers.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Bidegree, GeneralHodgeStructure, HodgeDecomposition, HodgeError};
use crate::linalg::{GaussianRational, QiMatrix, Subspace};

/// Direct sum of two pure structures of the same weight, `a` in the first
/// coordinates. Use [`GeneralHodgeStructure::direct_sum`] for mixed weights.
pub fn direct_sum(a: &HodgeDecomposition, b: &HodgeDecomposition) -> Result<HodgeDecomposition, HodgeError> {
    if a.weight() != b.weight() {
        return Err(HodgeError::WeightMismatch(a.weight(), b.weight()));
    }
    let rank = a.rank() + b.rank();
    let mut vectors: BTreeMap<Bidegree, Vec<Vec<GaussianRational>>> = BTreeMap::new();
    for (d, offset) in [(a, 0), (b, a.rank())] {
        for (k, s) in d.blocks() {
            for v in s.basis_vectors() {
                let mut w = vec![GaussianRational::zero(); rank];
                w[offset..offset + v.len()].clone_from_slice(&v);
                vectors.entry(*k).or_default().push(w);
            }
        }
    }
    let blocks = vectors
        .into_iter()
        .map(|(k, vs)| Ok((k, Subspace::span(rank, &vs)?)))
        .collect::<Result<Vec<_>, HodgeError>>()?;
    HodgeDecomposition::new(a.weight(), rank, blocks)
}

/// Tensor product on `C^{ra} ⊗ C^{rb}` (Kronecker coordinates); bidegrees
/// and weights add.
pub fn tensor(a: &HodgeDecomposition, b: &HodgeDecomposition) -> Result<HodgeDecomposition, HodgeError> {
    let rank = a.rank() * b.rank();
    let mut vectors: BTreeMap<Bidegree, Vec<Vec<GaussianRational>>> = BTreeMap::new();
    for (ka, sa) in a.blocks() {
        for (kb, sb) in b.blocks() {
            let product = sa.basis().kron(sb.basis());
            vectors.entry(*ka + *kb).or_default().extend(product.columns());
        }
    }
    let blocks = vectors
        .into_iter()
        .map(|(k, vs)| Ok((k, Subspace::span(rank, &vs)?)))
        .collect::<Result<Vec<_>, HodgeError>>()?;
    HodgeDecomposition::new(a.weight() + b.weight(), rank, blocks)
}

/// Dual structure on the dual space (dual standard basis): the block of
/// bidegree `(-p, -q)` is the annihilator of every block other than
/// `H^{p,q}`, i.e. the rows of the inverse adapted basis belonging to it.
pub fn dual(a: &HodgeDecomposition) -> Result<HodgeDecomposition, HodgeError> {
    HodgeError::from_report(a.validate())?;
    let rank = a.rank();
    if rank == 0 {
        return HodgeDecomposition::new(-a.weight(), 0, []);
    }
    let basis = a.adapted_basis();
    let blocks = basis
        .ranges
        .iter()
        .map(|(k, range)| {
            let rows: Vec<_> = range.clone().map(|i| basis.inverse.row(i).to_vec()).collect();
            Ok((k.negated(), Subspace::span(rank, &rows)?))
        })
        .collect::<Result<Vec<_>, HodgeError>>()?;
    HodgeDecomposition::new(-a.weight(), rank, blocks)
}

/// Index of `e_{i1} ∧ ... ∧ e_{ik}` (strictly increasing `subset`) in the
/// lexicographic basis of `Λ^k C^m`.
pub fn wedge_index(subset: &[usize], m: usize) -> usize {
    let k = subset.len();
    let mut index = 0;
    let mut prev = 0;
    for (pos, &s) in subset.iter().enumerate() {
        for skipped in prev..s {
            index += binomial(m - skipped - 1, k - pos - 1);
        }
        prev = s + 1;
    }
    index
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing `k`-subsets of `0..m` in lexicographic order.
pub(crate) fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            if m - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}

/// `k`-th exterior power on `Λ^k C^rank` (lexicographic wedge basis).
///
/// With an adapted basis `u_1..u_m`, the block of bidegree `(P, Q)` is
/// spanned by the wedges `u_{j1} ∧ ... ∧ u_{jk}` whose bidegrees sum to
/// `(P, Q)`; the coordinates of such a wedge are the `k x k` minors of the
/// matrix `[u_{j1} .. u_{jk}]`.
pub fn exterior_power(a: &HodgeDecomposition, k: usize) -> Result<HodgeDecomposition, HodgeError> {
    HodgeError::from_report(a.validate())?;
    let m = a.rank();
    let weight = a.weight() * k as i64;
    let rank = binomial(m, k);
    if rank == 0 {
        return HodgeDecomposition::new(weight, 0, []);
    }
    if k == 0 {
        return HodgeDecomposition::new(0, 1, [(Bidegree::new(0, 0), Subspace::full(1))]);
    }
    let basis = a.adapted_basis();
    let degrees = basis.degrees();
    let coordinate_sets = subsets(m, k);
    let mut vectors: BTreeMap<Bidegree, Vec<Vec<GaussianRational>>> = BTreeMap::new();
    for chosen in &coordinate_sets {
        let degree = chosen
            .iter()
            .fold(Bidegree::new(0, 0), |acc, &j| acc + degrees[j]);
        let columns = basis.matrix.select_columns(chosen);
        let wedge: Vec<GaussianRational> = coordinate_sets
            .iter()
            .map(|rows| minor(&columns, rows))
            .collect();
        vectors.entry(degree).or_default().push(wedge);
    }
    let blocks = vectors
        .into_iter()
        .map(|(key, vs)| Ok((key, Subspace::span(rank, &vs)?)))
        .collect::<Result<Vec<_>, HodgeError>>()?;
    HodgeDecomposition::new(weight, rank, blocks)
}

fn minor(columns: &QiMatrix, rows: &[usize]) -> GaussianRational {
    columns
        .select_rows(rows)
        .determinant()
        .expect("square minor")
}

fn unit() -> HodgeDecomposition {
    HodgeDecomposition::new(0, 1, [(Bidegree::new(0, 0), Subspace::full(1))]).expect("trivial structure")
}

impl GeneralHodgeStructure {
    /// Componentwise direct sum; components of equal weight are summed.
    pub fn direct_sum(&self, other: &GeneralHodgeStructure) -> Result<GeneralHodgeStructure, HodgeError> {
        GeneralHodgeStructure::from_components(
            self.components()
                .values()
                .chain(other.components().values())
                .cloned(),
        )
    }

    pub fn tensor(&self, other: &GeneralHodgeStructure) -> Result<GeneralHodgeStructure, HodgeError> {
        let mut parts = Vec::new();
        for a in self.components().values() {
            for b in other.components().values() {
                parts.push(tensor(a, b)?);
            }
        }
        GeneralHodgeStructure::from_components(parts)
    }

    pub fn dual(&self) -> Result<GeneralHodgeStructure, HodgeError> {
        let parts = self
            .components()
            .values()
            .map(dual)
            .collect::<Result<Vec<_>, _>>()?;
        GeneralHodgeStructure::from_components(parts)
    }

    /// `Λ^k(A ⊕ B) = ⊕_{i+j=k} Λ^i A ⊗ Λ^j B`, folded over the components.
    pub fn exterior_power(&self, k: usize) -> Result<GeneralHodgeStructure, HodgeError> {
        // powers[j] = Λ^j of the components processed so far.
        let mut powers: Vec<GeneralHodgeStructure> = (0..=k)
            .map(|j| {
                if j == 0 {
                    GeneralHodgeStructure::from_pure(unit())
                } else {
                    GeneralHodgeStructure::empty()
                }
            })
            .collect();
        for c in self.components().values() {
            let own: Vec<GeneralHodgeStructure> = (0..=k)
                .map(|i| exterior_power(c, i).map(GeneralHodgeStructure::from_pure))
                .collect::<Result<_, _>>()?;
            let mut next = Vec::with_capacity(k + 1);
            for j in 0..=k {
                let mut acc = GeneralHodgeStructure::empty();
                for i in 0..=j {
                    acc = acc.direct_sum(&powers[j - i].tensor(&own[i])?)?;
                }
                next.push(acc);
            }
            powers = next;
        }
        Ok(powers.swap_remove(k))
    }
}
