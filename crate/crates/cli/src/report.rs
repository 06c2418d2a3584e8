//! The report document emitted by `run`, plus its text, CSV and SVG
//! renderings. Field order is fixed by the struct declarations, so
//! serialisation is byte-deterministic.

use serde::{Deserialize, Serialize};

use cmnewton_core::newton::{
    check_criteria, newton_polygon, splitting_report, CriteriaReport, ImplicationCheck,
    NewtonPolygon,
};

use crate::spec::ResolvedInstance;
use crate::{fraction, CliError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub field: FieldDoc,
    pub cm_type: TypeDoc,
    pub prime: PrimeDoc,
    pub polygon: PolygonDoc,
    pub splitting: Vec<RealPlaceDoc>,
    pub criteria: CriteriaDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDoc {
    pub kind: String,
    pub galois_group_order: usize,
    pub degree: usize,
    pub dimension: usize,
    pub h: Vec<String>,
    pub conjugation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeDoc {
    pub members: Vec<String>,
    pub primitive: bool,
    pub stabilizer_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub d: Vec<String>,
    pub i: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDoc {
    pub blocks: Vec<BlockDoc>,
    pub vertices: Vec<[u64; 2]>,
    pub classification: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub coset: String,
    pub slope: String,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPlaceDoc {
    pub v: String,
    pub e: usize,
    pub f: usize,
    pub behavior: String,
    pub above: Vec<FieldPlaceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldPlaceDoc {
    pub w: String,
    pub e: usize,
    pub f: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub hypothesis: bool,
    pub conclusion: bool,
    pub satisfied: bool,
}

impl From<ImplicationCheck> for CheckDoc {
    fn from(c: ImplicationCheck) -> Self {
        CheckDoc {
            hypothesis: c.hypothesis_holds,
            conclusion: c.conclusion_holds,
            satisfied: c.implication_satisfied,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaDoc {
    pub nonsplit_implies_supersingular: CheckDoc,
    pub supersingular_implies_odd_places_nonsplit: CheckDoc,
    pub odd_dimension_supersingular_has_nonsplit: CheckDoc,
    pub galois_real_subfield_equivalence: CheckDoc,
    pub ordinary_implies_all_split: CheckDoc,
}

impl From<CriteriaReport> for CriteriaDoc {
    fn from(c: CriteriaReport) -> Self {
        CriteriaDoc {
            nonsplit_implies_supersingular: c.nonsplit_implies_supersingular.into(),
            supersingular_implies_odd_places_nonsplit: c
                .supersingular_implies_odd_places_nonsplit
                .into(),
            odd_dimension_supersingular_has_nonsplit: c
                .odd_dimension_supersingular_has_nonsplit
                .into(),
            galois_real_subfield_equivalence: c.galois_real_subfield_equivalence.into(),
            ordinary_implies_all_split: c.ordinary_implies_all_split.into(),
        }
    }
}

/// Runs the engine on a resolved instance and assembles the document.
pub fn build_report(instance: &ResolvedInstance) -> Result<ReportDocument, CliError> {
    let field = &instance.field.field;
    let group = field.group();
    let label = |id| group.label(id);
    let labels = |ids: &[u16]| ids.iter().map(|&m| group.label(m)).collect::<Vec<_>>();

    let polygon = newton_polygon(&instance.cm_type, &instance.context)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let split = splitting_report(&instance.context, Some(&instance.cm_type))
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let criteria = check_criteria(&split, &polygon);

    let stabilizer = instance.cm_type.stabilizer();
    Ok(ReportDocument {
        field: FieldDoc {
            kind: instance.field.kind.to_string(),
            galois_group_order: group.order(),
            degree: 2 * field.dimension(),
            dimension: field.dimension(),
            h: labels(field.h().members()),
            conjugation: label(field.conjugation()),
        },
        cm_type: TypeDoc {
            members: labels(instance.cm_type.members()),
            primitive: instance.cm_type.is_primitive(),
            stabilizer_order: stabilizer.order(),
        },
        prime: PrimeDoc {
            p: instance.rational_prime,
            d: labels(instance.context.decomposition().members()),
            i: labels(instance.context.inertia().members()),
        },
        polygon: PolygonDoc {
            blocks: polygon
                .blocks()
                .iter()
                .map(|b| BlockDoc {
                    coset: label(
                        b.coset
                            .as_ref()
                            .expect("engine polygons carry cosets")
                            .representative(),
                    ),
                    slope: fraction(b.slope),
                    multiplicity: b.multiplicity,
                })
                .collect(),
            vertices: polygon.vertices().iter().map(|&(x, y)| [x, y]).collect(),
            classification: polygon.classify().to_string(),
        },
        splitting: split
            .places()
            .iter()
            .map(|v| RealPlaceDoc {
                v: label(v.coset.representative()),
                e: v.e,
                f: v.f,
                behavior: v.behavior.to_string(),
                above: v
                    .above
                    .iter()
                    .map(|w| FieldPlaceDoc {
                        w: label(w.coset.representative()),
                        e: w.e,
                        f: w.f,
                        slope: w.slope.map(fraction),
                    })
                    .collect(),
            })
            .collect(),
        criteria: criteria.into(),
    })
}

fn slope_display(s: &str) -> String {
    match s.strip_suffix("/1") {
        Some(int) => int.to_string(),
        None => s.to_string(),
    }
}

/// Human-readable rendering.
pub fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let w = &mut out;
    use std::fmt::Write;

    let _ = writeln!(
        w,
        "CM field: degree {} (g = {}), {} model, |G| = {}",
        doc.field.degree, doc.field.dimension, doc.field.kind, doc.field.galois_group_order
    );
    let _ = writeln!(
        w,
        "  H = {{{}}}, conjugation = {}",
        doc.field.h.join(", "),
        doc.field.conjugation
    );
    let _ = writeln!(
        w,
        "CM type: {{{}}}  ({}, stabilizer order {})",
        doc.cm_type.members.join(", "),
        if doc.cm_type.primitive {
            "primitive"
        } else {
            "induced from a subfield"
        },
        doc.cm_type.stabilizer_order
    );
    match doc.prime.p {
        Some(p) => {
            let _ = writeln!(
                w,
                "prime: p = {p}, D = {{{}}}, I = {{{}}}",
                doc.prime.d.join(", "),
                doc.prime.i.join(", ")
            );
        }
        None => {
            let _ = writeln!(
                w,
                "prime: D = {{{}}}, I = {{{}}}",
                doc.prime.d.join(", "),
                doc.prime.i.join(", ")
            );
        }
    }
    let _ = writeln!(w, "newton polygon:");
    let _ = writeln!(w, "  coset    slope  multiplicity");
    for b in &doc.polygon.blocks {
        let _ = writeln!(
            w,
            "  {:<8} {:<6} {}",
            b.coset,
            slope_display(&b.slope),
            b.multiplicity
        );
    }
    let verts: Vec<String> = doc
        .polygon
        .vertices
        .iter()
        .map(|v| format!("({},{})", v[0], v[1]))
        .collect();
    let _ = writeln!(w, "  vertices: {}", verts.join(" "));
    let _ = writeln!(w, "classification: {}", doc.polygon.classification);
    let _ = writeln!(w, "splitting over the real subfield:");
    for v in &doc.splitting {
        let above: Vec<String> = v
            .above
            .iter()
            .map(|pl| {
                let slope = pl
                    .slope
                    .as_ref()
                    .map(|s| format!(", slope {}", slope_display(s)))
                    .unwrap_or_default();
                format!("w@{} (e={}, f={}{slope})", pl.w, pl.e, pl.f)
            })
            .collect();
        let _ = writeln!(
            w,
            "  v@{} (e={}, f={}): {}; above: {}",
            v.v,
            v.e,
            v.f,
            v.behavior,
            above.join(", ")
        );
    }
    let _ = writeln!(w, "criteria:");
    let mut crit = |name: &str, c: &CheckDoc| {
        let _ = writeln!(
            w,
            "  {:<45} hypothesis {}, conclusion {} -> {}",
            name,
            c.hypothesis,
            c.conclusion,
            if c.satisfied { "satisfied" } else { "VIOLATED" }
        );
    };
    crit(
        "all v non-split => supersingular:",
        &doc.criteria.nonsplit_implies_supersingular,
    );
    crit(
        "supersingular => odd-degree v non-split:",
        &doc.criteria.supersingular_implies_odd_places_nonsplit,
    );
    crit(
        "g odd + supersingular => some v non-split:",
        &doc.criteria.odd_dimension_supersingular_has_nonsplit,
    );
    crit(
        "g odd + real subfield Galois => equivalence:",
        &doc.criteria.galois_real_subfield_equivalence,
    );
    crit(
        "ordinary => all v split:",
        &doc.criteria.ordinary_implies_all_split,
    );
    out
}

/// CSV rendering of the slope table.
pub fn render_csv(doc: &ReportDocument) -> String {
    let mut out = String::from("coset,slope,multiplicity\n");
    for b in &doc.polygon.blocks {
        out.push_str(&format!("{},{},{}\n", b.coset, b.slope, b.multiplicity));
    }
    out.push_str(&format!("# classification,{}\n", doc.polygon.classification));
    out
}

/// Standalone SVG of the polygon's lattice path.
pub fn render_svg(polygon: &NewtonPolygon) -> String {
    let verts = polygon.vertices();
    let (max_x, max_y) = verts
        .iter()
        .fold((1u64, 1u64), |(mx, my), &(x, y)| (mx.max(x), my.max(y.max(1))));
    let scale = 40.0;
    let pad = 30.0;
    let width = pad * 2.0 + max_x as f64 * scale;
    let height = pad * 2.0 + max_y as f64 * scale;
    let map = |x: u64, y: u64| -> (f64, f64) {
        (pad + x as f64 * scale, height - pad - y as f64 * scale)
    };
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // lattice grid
    for gx in 0..=max_x {
        for gy in 0..=max_y {
            let (cx, cy) = map(gx, gy);
            svg.push_str(&format!(
                "  <circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"1.5\" fill=\"#bbbbbb\"/>\n"
            ));
        }
    }
    let points: Vec<String> = verts
        .iter()
        .map(|&(x, y)| {
            let (cx, cy) = map(x, y);
            format!("{cx:.1},{cy:.1}")
        })
        .collect();
    svg.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2.5\"/>\n",
        points.join(" ")
    ));
    for &(x, y) in &verts {
        let (cx, cy) = map(x, y);
        svg.push_str(&format!(
            "  <circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"4\" fill=\"#1f4e9c\"/>\n"
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" font-family=\"monospace\">({x},{y})</text>\n",
            cx + 6.0,
            cy - 6.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
