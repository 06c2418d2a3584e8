//! The JSON instance schema and its resolution into engine objects.
//!
//! ```json
//! {
//!   "field": {"kind": "cyclotomic", "conductor": 8, "subgroup_h": [1]},
//!   "cm_type": {"induced": {"subfield_h": [1, 5], "subfield_type": [1, 5]}},
//!   "prime": {"p": 3}
//! }
//! ```
//!
//! Explicit (possibly non-abelian) fields declare named generator
//! permutations in cycle notation and refer to elements by words over the
//! generator names; cyclotomic fields refer to elements by residues, with
//! conjugation implicitly the residue `-1`.

use serde::{Deserialize, Serialize};
use std::path::Path;

use cmnewton_core::cm::{enumerate_cm_types, induced_type, CmField, CmTypeLift};
use cmnewton_core::cyclotomic::{decomposition_and_inertia, unit_group, UnitGroupModN};
use cmnewton_core::group::{
    group_from_generators, permutation_from_cycles, ElementId, FiniteGroup, Subgroup,
};
use cmnewton_core::newton::PrimeContext;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cm_type: Option<TypeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<PrimeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    /// Subfield of the n-th cyclotomic field fixed by the subgroup of
    /// `(Z/n)^*` generated by `subgroup_h` (the whole cyclotomic field
    /// when empty).
    Cyclotomic {
        conductor: u64,
        #[serde(default)]
        subgroup_h: Vec<u64>,
    },
    /// Galois group given by generator permutations; `h` and
    /// `conjugation` are words over the generator names.
    Explicit {
        degree: usize,
        generators: Vec<GeneratorSpec>,
        h: Vec<String>,
        conjugation: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// Disjoint cycles on the points `0..degree`; omitted points are fixed.
    pub cycles: Vec<Vec<usize>>,
}

/// An element reference: a residue for cyclotomic fields, a word over the
/// generator names for explicit ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementName {
    Residue(u64),
    Word(String),
}

impl std::fmt::Display for ElementName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ElementName::Residue(r) => write!(f, "{r}"),
            ElementName::Word(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TypeSpec {
    Explicit { explicit: Vec<ElementName> },
    Induced { induced: InducedSpec },
    All { all: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InducedSpec {
    pub subfield_h: Vec<ElementName>,
    pub subfield_type: Vec<ElementName>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimeSpec {
    /// A rational prime; cyclotomic fields only (the decomposition and
    /// inertia groups are computed).
    Rational { p: u64 },
    /// Decomposition group generators, with optional inertia generators.
    Group {
        d: Vec<ElementName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        i: Option<Vec<ElementName>>,
    },
}

/// A CM field together with the cyclotomic model it came from, if any.
#[derive(Debug)]
pub struct ResolvedField {
    pub field: CmField,
    pub units: Option<UnitGroupModN>,
    pub kind: &'static str,
}

/// Everything `run` needs for one instance.
#[derive(Debug)]
pub struct ResolvedInstance {
    pub field: ResolvedField,
    pub cm_type: CmTypeLift,
    pub context: PrimeContext,
    pub rational_prime: Option<u64>,
}

pub fn load_spec(path: &Path) -> Result<InstanceSpec, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn resolve_element(
    group: &FiniteGroup,
    units: Option<&UnitGroupModN>,
    name: &ElementName,
    path: &str,
) -> Result<ElementId, CliError> {
    match (units, name) {
        (Some(u), ElementName::Residue(r)) => u.id_of_residue(*r).ok_or_else(|| {
            CliError::spec(
                path,
                format!("{r} is not a unit modulo {}", u.conductor()),
            )
        }),
        (Some(_), ElementName::Word(w)) => {
            let r: u64 = w.trim().parse().map_err(|_| {
                CliError::spec(path, format!("cyclotomic elements are residues, got {w:?}"))
            })?;
            resolve_element(group, units, &ElementName::Residue(r), path)
        }
        (None, ElementName::Word(w)) => group
            .evaluate_word(w)
            .map_err(|e| CliError::spec(path, e)),
        (None, ElementName::Residue(r)) => Err(CliError::spec(
            path,
            format!("explicit group elements are words over the generators, got {r}"),
        )),
    }
}

fn resolve_elements(
    group: &FiniteGroup,
    units: Option<&UnitGroupModN>,
    names: &[ElementName],
    path: &str,
) -> Result<Vec<ElementId>, CliError> {
    names
        .iter()
        .map(|n| resolve_element(group, units, n, path))
        .collect()
}

pub fn resolve_field(spec: &InstanceSpec) -> Result<ResolvedField, CliError> {
    match &spec.field {
        FieldSpec::Cyclotomic {
            conductor,
            subgroup_h,
        } => {
            let units =
                unit_group(*conductor).map_err(|e| CliError::spec("field.conductor", e))?;
            let seeds: Vec<ElementId> = subgroup_h
                .iter()
                .map(|&r| {
                    units.id_of_residue(r).ok_or_else(|| {
                        CliError::spec(
                            "field.subgroup_h",
                            format!("{r} is not a unit modulo {conductor}"),
                        )
                    })
                })
                .collect::<Result<_, _>>()?;
            let h = Subgroup::generated(units.group(), &seeds)
                .map_err(|e| CliError::spec("field.subgroup_h", e))?;
            let field = CmField::new(units.group(), h, units.conjugation())
                .map_err(|e| CliError::spec("field", e))?;
            Ok(ResolvedField {
                field,
                units: Some(units),
                kind: "cyclotomic",
            })
        }
        FieldSpec::Explicit {
            degree,
            generators,
            h,
            conjugation,
        } => {
            let mut gens: Vec<(&str, Vec<usize>)> = Vec::new();
            for g in generators {
                for cycle in &g.cycles {
                    if let Some(&bad) = cycle.iter().find(|&&pt| pt >= *degree) {
                        return Err(CliError::spec(
                            "field.generators",
                            format!("point {bad} outside 0..{degree} in cycles of {:?}", g.name),
                        ));
                    }
                }
                gens.push((g.name.as_str(), permutation_from_cycles(*degree, &g.cycles)));
            }
            let group = group_from_generators(*degree, &gens)
                .map_err(|e| CliError::spec("field.generators", e))?;
            let h_ids: Vec<ElementId> = h
                .iter()
                .map(|w| group.evaluate_word(w))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::spec("field.h", e))?;
            let h_sub = Subgroup::generated(&group, &h_ids)
                .map_err(|e| CliError::spec("field.h", e))?;
            let c = group
                .evaluate_word(conjugation)
                .map_err(|e| CliError::spec("field.conjugation", e))?;
            let field =
                CmField::new(&group, h_sub, c).map_err(|e| CliError::spec("field", e))?;
            Ok(ResolvedField {
                field,
                units: None,
                kind: "explicit",
            })
        }
    }
}

pub fn resolve_type(
    resolved: &ResolvedField,
    type_spec: &TypeSpec,
) -> Result<CmTypeLift, CliError> {
    let group = resolved.field.group();
    let units = resolved.units.as_ref();
    match type_spec {
        TypeSpec::Explicit { explicit } => {
            let members = resolve_elements(group, units, explicit, "cm_type.explicit")?;
            CmTypeLift::new(&resolved.field, &members)
                .map_err(|e| CliError::spec("cm_type", e))
        }
        TypeSpec::Induced { induced } => {
            let seeds = resolve_elements(
                group,
                units,
                &induced.subfield_h,
                "cm_type.induced.subfield_h",
            )?;
            let h_sub = Subgroup::generated(group, &seeds)
                .map_err(|e| CliError::spec("cm_type.induced.subfield_h", e))?;
            let members = resolve_elements(
                group,
                units,
                &induced.subfield_type,
                "cm_type.induced.subfield_type",
            )?;
            induced_type(&resolved.field, &h_sub, &members)
                .map_err(|e| CliError::spec("cm_type.induced", e))
        }
        TypeSpec::All { .. } => Err(CliError::spec(
            "cm_type",
            "\"all\" enumerates every type; use the census mode for that",
        )),
    }
}

/// Picks the first enumerated CM type; used by scan when the instance
/// fixes no particular type.
pub fn default_type(resolved: &ResolvedField) -> Result<CmTypeLift, CliError> {
    enumerate_cm_types(&resolved.field)
        .map_err(|e| CliError::spec("field", e))
        .map(|mut ts| ts.remove(0))
}

pub fn resolve_prime(
    resolved: &ResolvedField,
    prime_spec: &PrimeSpec,
) -> Result<(PrimeContext, Option<u64>), CliError> {
    let group = resolved.field.group();
    let units = resolved.units.as_ref();
    match prime_spec {
        PrimeSpec::Rational { p } => {
            let u = units.ok_or_else(|| {
                CliError::spec("prime.p", "a rational prime requires a cyclotomic field")
            })?;
            let (d, i) =
                decomposition_and_inertia(u, *p).map_err(|e| CliError::spec("prime.p", e))?;
            let pc = PrimeContext::new(&resolved.field, d, Some(i))
                .map_err(|e| CliError::spec("prime", e))?;
            Ok((pc, Some(*p)))
        }
        PrimeSpec::Group { d, i } => {
            let d_ids = resolve_elements(group, units, d, "prime.d")?;
            let d_sub = Subgroup::generated(group, &d_ids)
                .map_err(|e| CliError::spec("prime.d", e))?;
            let i_sub = match i {
                Some(names) => {
                    let ids = resolve_elements(group, units, names, "prime.i")?;
                    Some(
                        Subgroup::generated(group, &ids)
                            .map_err(|e| CliError::spec("prime.i", e))?,
                    )
                }
                None => None,
            };
            let pc = PrimeContext::new(&resolved.field, d_sub, i_sub)
                .map_err(|e| CliError::spec("prime", e))?;
            Ok((pc, None))
        }
    }
}

/// Full resolution for `run`: the instance must carry a concrete CM type
/// and a prime.
pub fn resolve_instance(spec: &InstanceSpec) -> Result<ResolvedInstance, CliError> {
    let field = resolve_field(spec)?;
    let type_spec = spec
        .cm_type
        .as_ref()
        .ok_or_else(|| CliError::spec("cm_type", "missing (an explicit or induced type)"))?;
    let cm_type = resolve_type(&field, type_spec)?;
    let prime_spec = spec
        .prime
        .as_ref()
        .ok_or_else(|| CliError::spec("prime", "missing ({\"p\": ...} or {\"d\": [...]})"))?;
    let (context, rational_prime) = resolve_prime(&field, prime_spec)?;
    Ok(ResolvedInstance {
        field,
        cm_type,
        context,
        rational_prime,
    })
}
