//! The JSON document form of a structure:
//!
//! ```json
//! {"kind": "decomposition", "weight": 1, "rank": 2,
//!  "blocks": {"1,0": [["1"], [{"re": "0", "im": "1"}]], "0,1": ...}}
//! ```
//!
//! `weight` may be `"mixed"` for decompositions and representations. Blocks
//! and steps are basis matrices with `rank` rows; coefficients are
//! `rank × rank` matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::Value;

use super::representation::mixed_to_representation;
use super::{
    decomposition_to_filtration, decomposition_to_representation, filtration_to_decomposition,
    representation_to_decomposition, Bidegree, GeneralHodgeStructure, HodgeDecomposition, HodgeError,
    HodgeFiltration, HodgeRepresentation, HodgeStructure, MixedDecomposition, ValidationReport, WeightTag,
};
use crate::batch::{self, Execution};
use crate::linalg::{GaussianRational, QiMatrix, Subspace};

/// The three presentations of a structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Face {
    Decomposition,
    Filtration,
    Representation,
}

impl Face {
    pub const ALL: [Face; 3] = [Face::Decomposition, Face::Filtration, Face::Representation];

    pub fn as_str(self) -> &'static str {
        match self {
            Face::Decomposition => "decomposition",
            Face::Filtration => "filtration",
            Face::Representation => "representation",
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Face {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Face::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown kind {s:?}; expected decomposition, filtration or representation"))
    }
}

/// A document that does not match the schema. `pointer` is a JSON pointer
/// to the offending value.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[error("{pointer}: {message}")]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl SchemaError {
    fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

/// A parsed document. Parsing checks shapes only; use
/// [`HodgeDocument::validate`] for the structural conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HodgeDocument {
    Decomposition(HodgeDecomposition),
    /// A decomposition with `"weight": "mixed"`.
    MixedDecomposition(MixedDecomposition),
    Filtration(HodgeFiltration),
    Representation(HodgeRepresentation),
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn parse_matrix(v: &Value, pointer: &str, rows: usize, cols: Option<usize>) -> Result<QiMatrix, SchemaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SchemaError::at(pointer, "expected a matrix (array of row arrays)"))?;
    // `[]` is the empty basis of a zero block.
    if arr.is_empty() && cols.is_none() {
        return Ok(QiMatrix::zeros(rows, 0));
    }
    if arr.len() != rows {
        return Err(SchemaError::at(pointer, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut width = cols;
    let mut out = Vec::with_capacity(rows);
    for (i, row) in arr.iter().enumerate() {
        let row_ptr = format!("{pointer}/{i}");
        let row = row
            .as_array()
            .ok_or_else(|| SchemaError::at(&row_ptr, "expected a row array"))?;
        let w = *width.get_or_insert(row.len());
        if row.len() != w {
            return Err(SchemaError::at(&row_ptr, format!("expected {w} entries, found {}", row.len())));
        }
        let mut parsed = Vec::with_capacity(w);
        for (j, x) in row.iter().enumerate() {
            let g: GaussianRational = serde_json::from_value(x.clone())
                .map_err(|e| SchemaError::at(format!("{row_ptr}/{j}"), e.to_string()))?;
            parsed.push(g);
        }
        out.push(parsed);
    }
    QiMatrix::from_rows(out, width.unwrap_or(0)).map_err(|e| SchemaError::at(pointer, e.to_string()))
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value, SchemaError> {
    obj.get(key)
        .ok_or_else(|| SchemaError::at(format!("/{key}"), format!("missing required key {key:?}")))
}

fn parse_map<K, T>(
    obj: &serde_json::Map<String, Value>,
    key: &str,
    parse_key: impl Fn(&str) -> Result<K, String>,
    parse_value: impl Fn(&Value, &str) -> Result<T, SchemaError>,
) -> Result<BTreeMap<K, T>, SchemaError>
where
    K: Ord,
{
    let map = field(obj, key)?
        .as_object()
        .ok_or_else(|| SchemaError::at(format!("/{key}"), "expected an object"))?;
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let pointer = format!("/{key}/{}", escape(k));
        let parsed = parse_key(k).map_err(|e| SchemaError::at(&pointer, e))?;
        if out.insert(parsed, parse_value(v, &pointer)?).is_some() {
            return Err(SchemaError::at(&pointer, "duplicate key"));
        }
    }
    Ok(out)
}

fn parse_weight(v: &Value) -> Result<WeightTag, SchemaError> {
    serde_json::from_value(v.clone()).map_err(|_| SchemaError::at("/weight", "expected an integer or \"mixed\""))
}

impl HodgeDocument {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let v: Value = serde_json::from_str(text).map_err(|e| SchemaError::at("", format!("invalid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self, SchemaError> {
        let obj = v
            .as_object()
            .ok_or_else(|| SchemaError::at("", "expected a JSON object"))?;
        let kind = field(obj, "kind")?
            .as_str()
            .ok_or_else(|| SchemaError::at("/kind", "expected a string"))?;
        let face = Face::from_str(kind).map_err(|e| SchemaError::at("/kind", e))?;
        let weight = parse_weight(field(obj, "weight")?)?;
        let rank = field(obj, "rank")?
            .as_u64()
            .ok_or_else(|| SchemaError::at("/rank", "expected a non-negative integer"))? as usize;
        let bidegree = |k: &str| Bidegree::from_str(k).map_err(|e| format!("bad bidegree key: {e}"));
        let subspace = |v: &Value, p: &str| parse_matrix(v, p, rank, None).map(|m| Subspace::column_space(&m));
        for key in obj.keys() {
            let allowed = match face {
                Face::Decomposition => "blocks",
                Face::Filtration => "steps",
                Face::Representation => "coefficients",
            };
            if !["kind", "weight", "rank", allowed].contains(&key.as_str()) {
                return Err(SchemaError::at(format!("/{}", escape(key)), "unexpected key"));
            }
        }
        Ok(match (face, weight) {
            (Face::Decomposition, WeightTag::Pure(n)) => {
                let blocks = parse_map(obj, "blocks", bidegree, subspace)?;
                HodgeDocument::Decomposition(HodgeDecomposition::new_unchecked(n, rank, blocks))
            }
            (Face::Decomposition, WeightTag::Mixed(_)) => {
                let blocks = parse_map(obj, "blocks", bidegree, subspace)?;
                HodgeDocument::MixedDecomposition(MixedDecomposition::new_unchecked(rank, blocks))
            }
            (Face::Filtration, WeightTag::Pure(n)) => {
                let index = |k: &str| i64::from_str(k.trim()).map_err(|e| format!("bad filtration index: {e}"));
                let steps = parse_map(obj, "steps", index, subspace)?;
                HodgeDocument::Filtration(HodgeFiltration::new_unchecked(n, rank, steps))
            }
            (Face::Filtration, WeightTag::Mixed(_)) => {
                return Err(SchemaError::at("/weight", "a filtration needs an integer weight"));
            }
            (Face::Representation, weight) => {
                let coefficient = |v: &Value, p: &str| parse_matrix(v, p, rank, Some(rank));
                let coefficients = parse_map(obj, "coefficients", bidegree, coefficient)?;
                HodgeDocument::Representation(HodgeRepresentation::new_unchecked(weight, rank, coefficients))
            }
        })
    }

    pub fn face(&self) -> Face {
        match self {
            HodgeDocument::Decomposition(_) | HodgeDocument::MixedDecomposition(_) => Face::Decomposition,
            HodgeDocument::Filtration(_) => Face::Filtration,
            HodgeDocument::Representation(_) => Face::Representation,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            HodgeDocument::Decomposition(d) => d.rank(),
            HodgeDocument::MixedDecomposition(m) => m.rank(),
            HodgeDocument::Filtration(f) => f.rank(),
            HodgeDocument::Representation(r) => r.rank(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            HodgeDocument::Decomposition(d) => d.validate(),
            HodgeDocument::MixedDecomposition(m) => m.validate(),
            HodgeDocument::Filtration(f) => f.validate(),
            HodgeDocument::Representation(r) => r.validate(),
        }
    }

    /// The blocks, in whichever face the document is in.
    fn to_blocks(&self) -> Result<Blocks, HodgeError> {
        match self {
            HodgeDocument::Decomposition(d) => {
                check(d.validate())?;
                Ok(Blocks::Pure(d.clone()))
            }
            HodgeDocument::MixedDecomposition(m) => {
                check(m.validate())?;
                Ok(Blocks::Mixed(m.clone()))
            }
            HodgeDocument::Filtration(f) => Ok(Blocks::Pure(filtration_to_decomposition(f)?)),
            HodgeDocument::Representation(r) => match r.weight() {
                WeightTag::Pure(_) => match representation_to_decomposition(r)? {
                    HodgeStructure::Pure(d) => Ok(Blocks::Pure(d)),
                    HodgeStructure::General(_) => Err(HodgeError::NotPure),
                },
                WeightTag::Mixed(_) => {
                    check(r.validate())?;
                    let blocks = r
                        .coefficients()
                        .iter()
                        .map(|(k, c)| (*k, Subspace::column_space(c)));
                    Ok(Blocks::Mixed(MixedDecomposition::new_unchecked(r.rank(), blocks)))
                }
            },
        }
    }

    /// Converts to another face. Converting to the document's own face
    /// validates and canonicalizes it.
    pub fn convert(&self, to: Face) -> Result<HodgeDocument, HodgeError> {
        let blocks = self.to_blocks()?;
        Ok(match (to, blocks) {
            (Face::Decomposition, Blocks::Pure(d)) => HodgeDocument::Decomposition(d),
            (Face::Decomposition, Blocks::Mixed(m)) => HodgeDocument::MixedDecomposition(m),
            (Face::Filtration, Blocks::Pure(d)) => HodgeDocument::Filtration(decomposition_to_filtration(&d)?),
            (Face::Filtration, Blocks::Mixed(_)) => return Err(HodgeError::NotPure),
            (Face::Representation, Blocks::Pure(d)) => {
                HodgeDocument::Representation(decomposition_to_representation(&d)?)
            }
            (Face::Representation, Blocks::Mixed(m)) => {
                let r = mixed_to_representation(&m)?;
                HodgeDocument::Representation(HodgeRepresentation::new_unchecked(
                    WeightTag::MIXED,
                    r.rank(),
                    r.coefficients().clone(),
                ))
            }
        })
    }

    /// The structure as a direct sum of pure components.
    pub fn to_general(&self) -> Result<GeneralHodgeStructure, HodgeError> {
        match self.to_blocks()? {
            Blocks::Pure(d) => Ok(GeneralHodgeStructure::from_pure(d)),
            Blocks::Mixed(m) => GeneralHodgeStructure::from_mixed(&m),
        }
    }

    /// A pure structure becomes a decomposition document; anything else the
    /// block-diagonal mixed decomposition.
    pub fn from_general(g: &GeneralHodgeStructure) -> Self {
        match g.as_pure() {
            Some(d) => HodgeDocument::Decomposition(d.clone()),
            None => HodgeDocument::MixedDecomposition(g.to_mixed()),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

fn check(report: ValidationReport) -> Result<(), HodgeError> {
    if report.valid {
        Ok(())
    } else {
        Err(HodgeError::Invalid(report))
    }
}

enum Blocks {
    Pure(HodgeDecomposition),
    Mixed(MixedDecomposition),
}

struct KeyedMap<'a, K, V>(&'a BTreeMap<K, V>);

impl<K: fmt::Display, V: Serialize> Serialize for KeyedMap<'_, K, V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl Serialize for HodgeDocument {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HodgeDocument", 4)?;
        st.serialize_field("kind", self.face().as_str())?;
        match self {
            HodgeDocument::Decomposition(d) => {
                st.serialize_field("weight", &d.weight())?;
                st.serialize_field("rank", &d.rank())?;
                st.serialize_field("blocks", &KeyedMap(d.blocks()))?;
            }
            HodgeDocument::MixedDecomposition(m) => {
                st.serialize_field("weight", &WeightTag::MIXED)?;
                st.serialize_field("rank", &m.rank())?;
                st.serialize_field("blocks", &KeyedMap(m.blocks()))?;
            }
            HodgeDocument::Filtration(f) => {
                st.serialize_field("weight", &f.weight())?;
                st.serialize_field("rank", &f.rank())?;
                st.serialize_field("steps", &KeyedMap(f.steps()))?;
            }
            HodgeDocument::Representation(r) => {
                st.serialize_field("weight", &r.weight())?;
                st.serialize_field("rank", &r.rank())?;
                st.serialize_field("coefficients", &KeyedMap(r.coefficients()))?;
            }
        }
        st.end()
    }
}

/// Validates many documents.
pub fn validate_batch(docs: &[HodgeDocument], exec: Execution) -> Vec<ValidationReport> {
    batch::map(docs, exec, HodgeDocument::validate)
}
