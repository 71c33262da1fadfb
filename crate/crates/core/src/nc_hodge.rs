//! Non-commutative Hodge check: an algebraic SL(2,C) representation
//! qualifies when its restriction to an embedded C* is a pure Hodge
//! structure.
//!
//! Representations are given by their decomposition into summands
//! `Sym^a ⊗ conj(Sym^b)`. Under the diagonal torus `z ↦ diag(z, z⁻¹)` the
//! summand has characters `z^{a-2i} z̄^{b-2j}`, `0 ≤ i ≤ a`, `0 ≤ j ≤ b`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::hodge::{Bidegree, HodgeDecomposition};
use crate::linalg::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub a: u32,
    pub b: u32,
    pub multiplicity: u32,
}

impl Summand {
    pub fn dim(&self) -> usize {
        self.multiplicity as usize * (self.a as usize + 1) * (self.b as usize + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepSpecError {
    #[error("cannot parse representation term {0:?}; expected Sym(a)*conj(Sym(b))xM")]
    BadTerm(String),
    #[error("multiplicity must be positive in {0:?}")]
    ZeroMultiplicity(String),
    #[error("representation is empty")]
    Empty,
}

/// A finite-dimensional representation as a formal sum of
/// `Sym^a ⊗ conj(Sym^b)` summands with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRep", into = "RawRep")]
pub struct SL2Rep {
    summands: Vec<Summand>,
}

#[derive(Serialize, Deserialize)]
struct RawRep {
    summands: Vec<Summand>,
}

impl TryFrom<RawRep> for SL2Rep {
    type Error = RepSpecError;
    fn try_from(raw: RawRep) -> Result<Self, RepSpecError> {
        SL2Rep::new(raw.summands)
    }
}

impl From<SL2Rep> for RawRep {
    fn from(r: SL2Rep) -> Self {
        RawRep { summands: r.summands }
    }
}

impl SL2Rep {
    pub fn new(summands: Vec<Summand>) -> Result<Self, RepSpecError> {
        if let Some(s) = summands.iter().find(|s| s.multiplicity == 0) {
            return Err(RepSpecError::ZeroMultiplicity(format!("{s:?}")));
        }
        if summands.is_empty() {
            return Err(RepSpecError::Empty);
        }
        Ok(Self { summands })
    }

    pub fn single(a: u32, b: u32) -> Self {
        Self {
            summands: vec![Summand { a, b, multiplicity: 1 }],
        }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn dim(&self) -> usize {
        self.summands.iter().map(Summand::dim).sum()
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.summands.iter().all(|s| s.a == s.b)
    }
}

fn term_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"^Sym\(\s*(\d+)\s*\)\s*\*\s*conj\(\s*Sym\(\s*(\d+)\s*\)\s*\)\s*x\s*(\d+)$")
            .expect("valid pattern")
    })
}

/// Parses `"Sym(a)*conj(Sym(b))xM, ..."`.
impl FromStr for SL2Rep {
    type Err = RepSpecError;
    fn from_str(s: &str) -> Result<Self, RepSpecError> {
        let mut summands = Vec::new();
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let caps = term_pattern()
                .captures(term)
                .ok_or_else(|| RepSpecError::BadTerm(term.to_string()))?;
            let num = |i: usize| -> Result<u32, RepSpecError> {
                caps[i].parse().map_err(|_| RepSpecError::BadTerm(term.to_string()))
            };
            let summand = Summand {
                a: num(1)?,
                b: num(2)?,
                multiplicity: num(3)?,
            };
            if summand.multiplicity == 0 {
                return Err(RepSpecError::ZeroMultiplicity(term.to_string()));
            }
            summands.push(summand);
        }
        SL2Rep::new(summands)
    }
}

impl fmt::Display for SL2Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "Sym({})*conj(Sym({}))x{}", s.a, s.b, s.multiplicity)?;
        }
        Ok(())
    }
}

/// How C* sits inside SL(2,C).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorusEmbedding {
    /// `z ↦ diag(z, z⁻¹)`.
    #[default]
    Diagonal,
}

impl FromStr for TorusEmbedding {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "diagonal" => Ok(TorusEmbedding::Diagonal),
            other => Err(format!("unknown torus embedding {other:?}")),
        }
    }
}

/// Characters `z^p z̄^q` with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterMultiset {
    entries: BTreeMap<Bidegree, usize>,
}

impl CharacterMultiset {
    pub fn entries(&self) -> &BTreeMap<Bidegree, usize> {
        &self.entries
    }

    pub fn multiplicity(&self, key: Bidegree) -> usize {
        self.entries.get(&key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    fn add(&mut self, key: Bidegree, m: usize) {
        *self.entries.entry(key).or_default() += m;
    }
}

impl FromIterator<(Bidegree, usize)> for CharacterMultiset {
    fn from_iter<I: IntoIterator<Item = (Bidegree, usize)>>(iter: I) -> Self {
        let mut c = CharacterMultiset::default();
        for (k, m) in iter {
            c.add(k, m);
        }
        c
    }
}

impl Serialize for CharacterMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, m) in &self.entries {
            map.serialize_entry(&k.to_string(), m)?;
        }
        map.end()
    }
}

/// Weights `a - 2i` of `Sym^a` under `diag(z, z⁻¹)`, highest first.
fn sym_weights(a: u32) -> impl Iterator<Item = i64> {
    let a = a as i64;
    (0..=a).map(move |i| a - 2 * i)
}

/// Characters of the restriction, one weight vector per basis element in the
/// order summand, copy, `i`, `j`.
fn weight_vectors(r: &SL2Rep, e: TorusEmbedding) -> Vec<Bidegree> {
    match e {
        TorusEmbedding::Diagonal => r
            .summands
            .iter()
            .flat_map(|s| {
                (0..s.multiplicity).flat_map(move |_| {
                    sym_weights(s.a).flat_map(move |p| sym_weights(s.b).map(move |q| Bidegree::new(p, q)))
                })
            })
            .collect(),
    }
}

pub fn restrict_to_torus(r: &SL2Rep, e: TorusEmbedding) -> CharacterMultiset {
    weight_vectors(r, e).into_iter().map(|k| (k, 1)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Purity {
    Pure { weight: i64 },
    /// Two characters with different total degrees.
    Impure { witness: [Bidegree; 2], degrees: [i64; 2] },
    /// No characters at all (zero representation).
    Empty,
}

/// The impure witness pairs a key of the highest total degree with a key of
/// the next total degree below it.
pub fn purity_check(c: &CharacterMultiset) -> Purity {
    let keys: Vec<Bidegree> = c.entries.iter().filter(|(_, m)| **m > 0).map(|(k, _)| *k).collect();
    let Some(top) = keys.iter().copied().max_by_key(|k| (k.total(), std::cmp::Reverse(*k))) else {
        return Purity::Empty;
    };
    let next = keys
        .iter()
        .copied()
        .filter(|k| k.total() < top.total())
        .max_by_key(|k| (k.total(), std::cmp::Reverse(*k)));
    match next {
        None => Purity::Pure { weight: top.total() },
        Some(other) => Purity::Impure {
            witness: [top, other],
            degrees: [top.total(), other.total()],
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcHodgeReport {
    pub is_nc_hodge: bool,
    pub weight: Option<i64>,
    pub purity: Purity,
    pub character_table: CharacterMultiset,
    /// The Hodge decomposition on the torus weight spaces, present when the
    /// restriction is pure and conjugation compatible.
    #[serde(skip)]
    pub decomposition: Option<HodgeDecomposition>,
}

pub fn nc_hodge_check(r: &SL2Rep, e: TorusEmbedding) -> NcHodgeReport {
    let weights = weight_vectors(r, e);
    let character_table: CharacterMultiset = weights.iter().map(|k| (*k, 1)).collect();
    let purity = purity_check(&character_table);
    let weight = match purity {
        Purity::Pure { weight } => Some(weight),
        _ => None,
    };
    let decomposition = weight.and_then(|n| {
        let dim = weights.len();
        let mut indices: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
        for (i, k) in weights.iter().enumerate() {
            indices.entry(*k).or_default().push(i);
        }
        let blocks = indices
            .into_iter()
            .map(|(k, idx)| (k, Subspace::coordinate(dim, &idx)));
        HodgeDecomposition::new(n, dim, blocks).ok()
    });
    NcHodgeReport {
        is_nc_hodge: weight.is_some(),
        weight,
        purity,
        character_table,
        decomposition,
    }
}

/// Checks every representation in `reps`, in parallel when enabled.
pub fn nc_hodge_batch(reps: &[SL2Rep], e: TorusEmbedding, exec: crate::batch::Execution) -> Vec<NcHodgeReport> {
    crate::batch::map(reps, exec, |r| nc_hodge_check(r, e))
}
