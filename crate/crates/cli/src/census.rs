//! Census: every CM type of a field against every cyclic decomposition
//! class, with primitivity flags. Systematises the case analysis one
//! otherwise does by hand for a single field.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cmnewton_core::cm::enumerate_cm_types;
use cmnewton_core::group::{ElementId, Subgroup};
use cmnewton_core::newton::{newton_polygon, PrimeContext};

use crate::spec::{resolve_field, InstanceSpec};
use crate::{fraction, CliError};

/// Enumeration guard for the census (`2^g` types, each against every
/// decomposition class).
pub const MAX_CENSUS_DIMENSION: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub type_index: usize,
    pub cm_type: Vec<String>,
    pub primitive: bool,
    pub d_generator: String,
    pub d_order: usize,
    pub classification: String,
    /// Slope multiset, ascending, as `num/den:multiplicity` entries.
    pub slopes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusResult {
    pub group_order: usize,
    pub dimension: usize,
    pub type_count: usize,
    pub class_count: usize,
    pub rows: Vec<CensusRow>,
}

/// All distinct cyclic subgroups, each tagged with the label of the first
/// generator (in identifier order) that produces it.
fn cyclic_classes(field: &cmnewton_core::cm::CmField) -> Vec<(String, Subgroup)> {
    let g = field.group();
    let mut seen: Vec<Vec<ElementId>> = Vec::new();
    let mut out = Vec::new();
    for a in g.elements() {
        let sub = Subgroup::generated(g, &[a]).expect("element of the group");
        if seen.iter().any(|m| m == sub.members()) {
            continue;
        }
        seen.push(sub.members().to_vec());
        out.push((g.label(a), sub));
    }
    out
}

/// Unramified census over all CM types and all cyclic decomposition
/// classes. Rows are ordered type-major, class-minor.
pub fn census(spec: &InstanceSpec) -> Result<CensusResult, CliError> {
    let resolved = resolve_field(spec)?;
    let field = &resolved.field;
    if field.dimension() > MAX_CENSUS_DIMENSION {
        return Err(CliError::spec(
            "field",
            format!(
                "dimension {} exceeds the census cap g <= {MAX_CENSUS_DIMENSION}",
                field.dimension()
            ),
        ));
    }
    let types = enumerate_cm_types(field).map_err(|e| CliError::spec("field", e))?;
    let classes = cyclic_classes(field);
    let group = field.group();

    let rows: Vec<CensusRow> = types
        .par_iter()
        .enumerate()
        .map(|(type_index, t)| -> Result<Vec<CensusRow>, CliError> {
            let primitive = t.is_primitive();
            let members: Vec<String> =
                t.members().iter().map(|&m| group.label(m)).collect();
            classes
                .iter()
                .map(|(d_generator, d)| {
                    let pc = PrimeContext::unramified(field, d.clone())
                        .map_err(|e| CliError::Internal(e.to_string()))?;
                    let polygon = newton_polygon(t, &pc)
                        .map_err(|e| CliError::Internal(e.to_string()))?;
                    let slopes: Vec<String> = polygon
                        .slope_multiset()
                        .into_iter()
                        .map(|(s, m)| format!("{}:{}", fraction(s), m))
                        .collect();
                    Ok(CensusRow {
                        type_index,
                        cm_type: members.clone(),
                        primitive,
                        d_generator: d_generator.clone(),
                        d_order: d.order(),
                        classification: polygon.classify().to_string(),
                        slopes: slopes.join(" "),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<CensusRow>>, CliError>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(CensusResult {
        group_order: group.order(),
        dimension: field.dimension(),
        type_count: types.len(),
        class_count: classes.len(),
        rows,
    })
}

pub fn render_csv(result: &CensusResult) -> String {
    let mut out = String::from(
        "type_index,cm_type,primitive,d_generator,d_order,classification,slopes\n",
    );
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.type_index,
            r.cm_type.join(" "),
            r.primitive,
            r.d_generator,
            r.d_order,
            r.classification,
            r.slopes
        ));
    }
    out
}

pub fn render_text(result: &CensusResult) -> String {
    let mut out = format!(
        "census: |G| = {}, g = {}, {} types x {} decomposition classes\n",
        result.group_order, result.dimension, result.type_count, result.class_count
    );
    out.push_str(&format!(
        "{:>5} {:<24} {:<10} {:<10} {:>5}  {:<14} {}\n",
        "type", "members", "primitive", "D = <.>", "|D|", "class", "slopes"
    ));
    for r in &result.rows {
        out.push_str(&format!(
            "{:>5} {:<24} {:<10} {:<10} {:>5}  {:<14} {}\n",
            r.type_index,
            format!("{{{}}}", r.cm_type.join(",")),
            r.primitive,
            r.d_generator,
            r.d_order,
            r.classification,
            r.slopes
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_census_shows_both_behaviours() {
        let spec: InstanceSpec = serde_json::from_str(
            r#"{"field": {"kind": "explicit", "degree": 4,
                          "generators": [{"name": "x", "cycles": [[1, 3]]},
                                         {"name": "y", "cycles": [[0, 1, 2, 3]]}],
                          "h": ["1", "x"], "conjugation": "y^2"},
                "cm_type": {"all": true}}"#,
        )
        .unwrap();
        let result = census(&spec).unwrap();
        assert_eq!(result.type_count, 4);
        assert_eq!(result.class_count, 7); // 1, <x>, <y>, <xy>, <yx>, <y^2>, <xy^2>
        assert_eq!(result.rows.len(), 28);

        // the golden type {1, x, y, xy^3}; xy^3 carries its reduced label "yx"
        let golden: Vec<&CensusRow> = result
            .rows
            .iter()
            .filter(|r| r.cm_type == ["1", "x", "y", "yx"])
            .collect();
        assert!(!golden.is_empty());
        let by_gen = |g: &str| golden.iter().find(|r| r.d_generator == g).unwrap();
        assert_eq!(by_gen("xy").classification, "supersingular");
        assert_eq!(by_gen("xy").slopes, "1/2:4");
        assert_eq!(by_gen("yx").classification, "ordinary");
        assert_eq!(by_gen("yx").slopes, "0/1:2 1/1:2");
        // trivial decomposition group: always ordinary
        assert_eq!(by_gen("1").classification, "ordinary");
        for r in &result.rows {
            if r.d_order == 1 {
                assert_eq!(r.classification, "ordinary");
            }
        }
        for r in &golden {
            assert!(r.primitive);
        }
    }

    #[test]
    fn conductor8_census_flags_induced_types() {
        let spec: InstanceSpec = serde_json::from_str(
            r#"{"field": {"kind": "cyclotomic", "conductor": 8},
                "cm_type": {"all": true}}"#,
        )
        .unwrap();
        let result = census(&spec).unwrap();
        assert_eq!(result.type_count, 4);
        // every type of the conductor-8 field is induced from one of the
        // two imaginary quadratic subfields: {1,5} and {3,7} from the
        // subfield fixed by 5, {1,3} and {5,7} from the one fixed by 3
        for r in &result.rows {
            assert!(!r.primitive, "type {:?}", r.cm_type);
        }
        // exactly two types have stabiliser {1, 5}
        let spec2: InstanceSpec = serde_json::from_str(
            r#"{"field": {"kind": "cyclotomic", "conductor": 8},
                "cm_type": {"all": true}}"#,
        )
        .unwrap();
        let resolved = crate::spec::resolve_field(&spec2).unwrap();
        let five = resolved.units.as_ref().unwrap().id_of_residue(5).unwrap();
        let with_five = cmnewton_core::cm::enumerate_cm_types(&resolved.field)
            .unwrap()
            .iter()
            .filter(|t| t.stabilizer().contains(five))
            .count();
        assert_eq!(with_five, 2);
    }

    #[test]
    fn census_determinism() {
        let spec: InstanceSpec = serde_json::from_str(
            r#"{"field": {"kind": "cyclotomic", "conductor": 8},
                "cm_type": {"all": true}}"#,
        )
        .unwrap();
        let a = census(&spec).unwrap();
        let b = census(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(render_csv(&a), render_csv(&b));
    }
}
