//! Prime scan: one cyclotomic instance evaluated at every prime up to a
//! bound, with class densities in the footer.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cmnewton_core::arith::primes_up_to;
use cmnewton_core::cyclotomic::decomposition_and_inertia;
use cmnewton_core::newton::{newton_polygon, splitting_report, PrimeContext, SplittingBehavior};

use crate::spec::{resolve_field, resolve_type, FieldSpec, InstanceSpec, TypeSpec};
use crate::CliError;

pub const MAX_SCAN_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: u64,
    pub p_mod_n: u64,
    pub d_order: usize,
    pub i_order: usize,
    pub classification: String,
    pub v_split: usize,
    pub v_inert: usize,
    pub v_ramified: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub conductor: u64,
    pub bound: u64,
    pub rows: Vec<ScanRow>,
    pub density_supersingular: f64,
    pub density_ordinary: f64,
    pub density_mixed: f64,
}

impl ScanResult {
    pub fn count_of(&self, classification: &str) -> usize {
        self.rows
            .iter()
            .filter(|r| r.classification == classification)
            .count()
    }
}

/// Scans every prime `p <= bound` (ramified ones included) for the given
/// cyclotomic instance. Rows are computed in parallel and assembled in
/// prime order.
pub fn scan_primes(spec: &InstanceSpec, bound: u64) -> Result<ScanResult, CliError> {
    let conductor = match &spec.field {
        FieldSpec::Cyclotomic { conductor, .. } => *conductor,
        FieldSpec::Explicit { .. } => {
            return Err(CliError::spec(
                "field",
                "scan requires a cyclotomic field (decomposition groups vary with p)",
            ))
        }
    };
    if bound > MAX_SCAN_BOUND {
        return Err(CliError::spec(
            "bound",
            format!("{bound} exceeds the scan cap {MAX_SCAN_BOUND}"),
        ));
    }
    let resolved = resolve_field(spec)?;
    let type_spec = spec.cm_type.as_ref().ok_or_else(|| {
        CliError::spec("cm_type", "missing (scan needs one fixed CM type)")
    })?;
    if matches!(type_spec, TypeSpec::All { .. }) {
        return Err(CliError::spec(
            "cm_type",
            "scan needs one fixed CM type, not \"all\"",
        ));
    }
    let cm_type = resolve_type(&resolved, type_spec)?;
    let units = resolved.units.as_ref().expect("cyclotomic field");

    let rows: Vec<ScanRow> = primes_up_to(bound)
        .par_iter()
        .map(|&p| -> Result<ScanRow, CliError> {
            let (d, i) =
                decomposition_and_inertia(units, p).map_err(|e| CliError::spec("prime", e))?;
            let pc = PrimeContext::new(&resolved.field, d, Some(i))
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let polygon = newton_polygon(&cm_type, &pc)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let report = splitting_report(&pc, None)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let count = |b: SplittingBehavior| {
                report.places().iter().filter(|v| v.behavior == b).count()
            };
            Ok(ScanRow {
                p,
                p_mod_n: p % conductor,
                d_order: pc.decomposition().order(),
                i_order: pc.inertia().order(),
                classification: polygon.classify().to_string(),
                v_split: count(SplittingBehavior::Split),
                v_inert: count(SplittingBehavior::Inert),
                v_ramified: count(SplittingBehavior::Ramified),
            })
        })
        .collect::<Result<_, _>>()?;

    let total = rows.len().max(1) as f64;
    let density = |name: &str| {
        rows.iter().filter(|r| r.classification == name).count() as f64 / total
    };
    Ok(ScanResult {
        conductor,
        bound,
        density_supersingular: density("supersingular"),
        density_ordinary: density("ordinary"),
        density_mixed: density("mixed"),
        rows,
    })
}

pub fn render_csv(result: &ScanResult) -> String {
    let mut out =
        String::from("p,p_mod_n,d_order,i_order,classification,v_split,v_inert,v_ramified\n");
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.p, r.p_mod_n, r.d_order, r.i_order, r.classification, r.v_split, r.v_inert,
            r.v_ramified
        ));
    }
    out.push_str(&format!(
        "# density,supersingular,{:.6}\n# density,ordinary,{:.6}\n# density,mixed,{:.6}\n",
        result.density_supersingular, result.density_ordinary, result.density_mixed
    ));
    out
}

pub fn render_text(result: &ScanResult) -> String {
    let mut out = format!(
        "scan of conductor {} up to {} ({} primes)\n",
        result.conductor,
        result.bound,
        result.rows.len()
    );
    out.push_str(&format!(
        "{:>8} {:>8} {:>7} {:>7}  {:<14} {:>7} {:>7} {:>9}\n",
        "p", "p mod n", "|D|", "|I|", "class", "split", "inert", "ramified"
    ));
    for r in &result.rows {
        out.push_str(&format!(
            "{:>8} {:>8} {:>7} {:>7}  {:<14} {:>7} {:>7} {:>9}\n",
            r.p,
            r.p_mod_n,
            r.d_order,
            r.i_order,
            r.classification,
            r.v_split,
            r.v_inert,
            r.v_ramified
        ));
    }
    out.push_str(&format!(
        "densities: supersingular {:.4}, ordinary {:.4}, mixed {:.4}\n",
        result.density_supersingular, result.density_ordinary, result.density_mixed
    ));
    out
}
