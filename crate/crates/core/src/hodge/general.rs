use std::collections::BTreeMap;

use num_traits::Zero;

use super::representation::mixed_to_representation;
use super::{Bidegree, HodgeDecomposition, HodgeError, HodgeRepresentation, MixedDecomposition};
use crate::linalg::{GaussianRational, Subspace};

/// A general Hodge structure: a direct sum of pure structures of distinct
/// weights, one component per weight.
///
/// The single-space realization ([`GeneralHodgeStructure::to_mixed`]) places
/// the components block-diagonally in increasing weight order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GeneralHodgeStructure {
    components: BTreeMap<i64, HodgeDecomposition>,
}

/// Result of reading a structure whose purity is not known in advance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HodgeStructure {
    Pure(HodgeDecomposition),
    General(GeneralHodgeStructure),
}

impl HodgeStructure {
    pub fn into_general(self) -> GeneralHodgeStructure {
        match self {
            HodgeStructure::Pure(d) => GeneralHodgeStructure::from_pure(d),
            HodgeStructure::General(g) => g,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            HodgeStructure::Pure(d) => d.rank(),
            HodgeStructure::General(g) => g.rank(),
        }
    }
}

impl GeneralHodgeStructure {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pure(d: HodgeDecomposition) -> Self {
        let mut components = BTreeMap::new();
        if d.rank() > 0 {
            components.insert(d.weight(), d);
        }
        Self { components }
    }

    /// Assembles components, merging equal weights by direct sum and dropping
    /// rank-zero parts.
    pub fn from_components(parts: impl IntoIterator<Item = HodgeDecomposition>) -> Result<Self, HodgeError> {
        let mut components: BTreeMap<i64, HodgeDecomposition> = BTreeMap::new();
        for d in parts {
            if d.rank() == 0 {
                continue;
            }
            let merged = match components.remove(&d.weight()) {
                Some(existing) => super::direct_sum(&existing, &d)?,
                None => d,
            };
            components.insert(merged.weight(), merged);
        }
        Ok(Self { components })
    }

    pub fn rank(&self) -> usize {
        self.components.values().map(HodgeDecomposition::rank).sum()
    }

    pub fn components(&self) -> &BTreeMap<i64, HodgeDecomposition> {
        &self.components
    }

    pub fn is_pure(&self) -> bool {
        self.components.len() <= 1
    }

    /// The only component when the structure is pure and nonzero.
    pub fn as_pure(&self) -> Option<&HodgeDecomposition> {
        match self.components.len() {
            1 => self.components.values().next(),
            _ => None,
        }
    }

    pub fn hodge_numbers(&self) -> BTreeMap<Bidegree, usize> {
        self.components.values().flat_map(|d| d.hodge_numbers()).collect()
    }

    /// Block-diagonal realization in `C^rank`.
    pub fn to_mixed(&self) -> MixedDecomposition {
        let rank = self.rank();
        let mut blocks = BTreeMap::new();
        let mut offset = 0;
        for d in self.components.values() {
            for (k, s) in d.blocks() {
                let vectors: Vec<Vec<GaussianRational>> = s
                    .basis_vectors()
                    .into_iter()
                    .map(|v| embed(&v, offset, rank))
                    .collect();
                let sub = Subspace::span(rank, &vectors).expect("embedded vectors have length rank");
                blocks.insert(*k, sub);
            }
            offset += d.rank();
        }
        MixedDecomposition::new_unchecked(rank, blocks)
    }

    pub fn to_representation(&self) -> Result<HodgeRepresentation, HodgeError> {
        mixed_to_representation(&self.to_mixed())
    }

    /// Splits a single-space structure into its weight components. Each
    /// weight space is conjugation stable, hence spanned by its (rational)
    /// reduced echelon basis, and the component is expressed in that basis.
    pub fn from_mixed(m: &MixedDecomposition) -> Result<Self, HodgeError> {
        HodgeError::from_report(m.validate())?;
        let mut by_weight: BTreeMap<i64, Vec<(Bidegree, &Subspace)>> = BTreeMap::new();
        for (k, s) in m.blocks() {
            by_weight.entry(k.total()).or_default().push((*k, s));
        }
        let mut components = BTreeMap::new();
        for (n, parts) in by_weight {
            let mut space = Subspace::zero(m.rank());
            for (_, s) in &parts {
                space = space.sum(s)?;
            }
            debug_assert!(space.is_real(), "weight spaces of a valid structure are real");
            let dim = space.dim();
            let blocks = parts.into_iter().map(|(k, s)| {
                let coords: Vec<_> = s
                    .basis_vectors()
                    .iter()
                    .map(|v| space.coordinates(v).expect("block lies in its weight space"))
                    .collect();
                (k, Subspace::span(dim, &coords).expect("coordinates have length dim"))
            });
            components.insert(n, HodgeDecomposition::new(n, dim, blocks)?);
        }
        Ok(Self { components })
    }
}

fn embed(v: &[GaussianRational], offset: usize, rank: usize) -> Vec<GaussianRational> {
    let mut out = vec![GaussianRational::zero(); rank];
    out[offset..offset + v.len()].clone_from_slice(v);
    out
}

/// Pure components sorted by weight.
pub fn weight_components(g: &GeneralHodgeStructure) -> Vec<(i64, HodgeDecomposition)> {
    g.components.iter().map(|(k, d)| (*k, d.clone())).collect()
}
