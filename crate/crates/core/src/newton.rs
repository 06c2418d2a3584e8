//! The slope formula and everything derived from it.
//!
//! Given a CM field datum `(G, H, c)`, a lifted CM type `Φ` and the
//! decomposition group `D` of a prime of the Galois closure above `p`,
//! the Newton polygon of the reduction has one block per double coset
//! `DgH`:
//!
//! ```text
//!     slope  |DgH ∩ Φ| / |DgH|   with multiplicity   |DgH| / |H|
//! ```
//!
//! Double cosets correspond to the primes of the CM field above `p`, so
//! the same partition (and its coarsening by `H+`) also yields the full
//! splitting data of `p` in the CM field over its real subfield, with
//! ramification read off the inertia group `I`:
//! `e(w|p) = |I| / |I ∩ gHg^-1|`.

use num_rational::Rational64;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::cm::{CmField, CmTypeLift};
use crate::group::{double_cosets, DoubleCoset, Subgroup};

/// Exact rational slope in `[0, 1]`.
pub type Slope = Rational64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("CM type and prime context belong to different CM fields")]
    FieldMismatch,
    #[error("subgroup does not belong to the field's Galois group")]
    GroupMismatch,
    #[error("inertia group is not contained in the decomposition group")]
    InertiaNotContained,
    #[error("inertia group is not normal in the decomposition group")]
    InertiaNotNormal,
    #[error("decomposition modulo inertia is not cyclic")]
    QuotientNotCyclic,
}

/// A prime of the Galois closure above `p`, encoded by its decomposition
/// group and (optionally nontrivial) inertia group.
#[derive(Clone, Debug)]
pub struct PrimeContext {
    field: CmField,
    decomposition: Subgroup,
    inertia: Subgroup,
}

impl PrimeContext {
    /// `inertia = None` means unramified (trivial inertia). The inertia
    /// group must be normal in the decomposition group with cyclic
    /// quotient, as for any actual prime.
    pub fn new(
        field: &CmField,
        decomposition: Subgroup,
        inertia: Option<Subgroup>,
    ) -> Result<Self, NewtonError> {
        if !decomposition.parent().same_group(field.group()) {
            return Err(NewtonError::GroupMismatch);
        }
        let inertia = match inertia {
            Some(i) => {
                if !i.parent().same_group(field.group()) {
                    return Err(NewtonError::GroupMismatch);
                }
                i
            }
            None => Subgroup::trivial(field.group()),
        };
        if !inertia.is_subgroup_of(&decomposition) {
            return Err(NewtonError::InertiaNotContained);
        }
        if !inertia.is_normal_in(&decomposition) {
            return Err(NewtonError::InertiaNotNormal);
        }
        if !inertia.has_cyclic_quotient_in(&decomposition) {
            return Err(NewtonError::QuotientNotCyclic);
        }
        Ok(PrimeContext {
            field: field.clone(),
            decomposition,
            inertia,
        })
    }

    pub fn unramified(field: &CmField, decomposition: Subgroup) -> Result<Self, NewtonError> {
        Self::new(field, decomposition, None)
    }

    pub fn field(&self) -> &CmField {
        &self.field
    }

    pub fn decomposition(&self) -> &Subgroup {
        &self.decomposition
    }

    pub fn inertia(&self) -> &Subgroup {
        &self.inertia
    }
}

/// One block of the Newton polygon: a slope with multiplicity, tied to the
/// double coset it came from (absent for polygons built from a Frobenius
/// trace rather than from group data).
#[derive(Clone, Debug)]
pub struct SlopeBlock {
    pub slope: Slope,
    pub multiplicity: usize,
    pub coset: Option<DoubleCoset>,
}

/// Classification of a reduction by its slopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Every slope is 0 or 1.
    Ordinary,
    /// Every slope is 1/2.
    Supersingular,
    /// Anything else.
    Mixed,
}

impl Reduction {
    pub fn as_str(self) -> &'static str {
        match self {
            Reduction::Ordinary => "ordinary",
            Reduction::Supersingular => "supersingular",
            Reduction::Mixed => "mixed",
        }
    }
}

impl std::fmt::Display for Reduction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A Newton polygon: slope blocks whose multiplicities sum to `2g` and
/// whose weighted slope sum is `g`.
#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    blocks: Vec<SlopeBlock>,
}

impl NewtonPolygon {
    pub fn from_blocks(blocks: Vec<SlopeBlock>) -> Self {
        NewtonPolygon { blocks }
    }

    pub fn blocks(&self) -> &[SlopeBlock] {
        &self.blocks
    }

    /// Total multiplicity, equal to `2g`.
    pub fn height(&self) -> usize {
        self.blocks.iter().map(|b| b.multiplicity).sum()
    }

    /// Slope-weighted mass `sum of slope * multiplicity` (equals `g`).
    pub fn mass(&self) -> Rational64 {
        self.blocks
            .iter()
            .map(|b| b.slope * Rational64::from_integer(b.multiplicity as i64))
            .sum()
    }

    /// Distinct slopes with their total multiplicities, ascending.
    pub fn slope_multiset(&self) -> BTreeMap<Slope, usize> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            *out.entry(b.slope).or_insert(0) += b.multiplicity;
        }
        out
    }

    /// Lattice vertices of the lower-convex polygon from `(0, 0)`: slopes
    /// ascending, one segment per distinct slope with horizontal run equal
    /// to its total multiplicity. Ends at `(2g, g)`.
    pub fn vertices(&self) -> Vec<(u64, u64)> {
        let mut verts = vec![(0u64, 0u64)];
        let mut x = 0u64;
        let mut y = Rational64::from_integer(0);
        for (slope, mult) in self.slope_multiset() {
            x += mult as u64;
            y += slope * Rational64::from_integer(mult as i64);
            assert!(y.is_integer(), "polygon breakpoints are lattice points");
            verts.push((x, y.to_integer() as u64));
        }
        verts
    }

    /// True iff the slope multiset is invariant under `s -> 1 - s`.
    pub fn is_symmetric(&self) -> bool {
        let ms = self.slope_multiset();
        ms.iter().all(|(&s, &m)| {
            ms.get(&(Rational64::from_integer(1) - s)) == Some(&m)
        })
    }

    pub fn classify(&self) -> Reduction {
        classify(self)
    }
}

/// Labels a polygon ordinary (all slopes 0 or 1), supersingular (all
/// slopes 1/2) or mixed.
pub fn classify(polygon: &NewtonPolygon) -> Reduction {
    let half = Rational64::new(1, 2);
    let zero = Rational64::from_integer(0);
    let one = Rational64::from_integer(1);
    let slopes: Vec<Slope> = polygon.blocks.iter().map(|b| b.slope).collect();
    if slopes.iter().all(|&s| s == half) {
        Reduction::Supersingular
    } else if slopes.iter().all(|&s| s == zero || s == one) {
        Reduction::Ordinary
    } else {
        Reduction::Mixed
    }
}

/// Computes the Newton polygon of the reduction from the CM type and the
/// prime context, one block per double coset `D \ G / H`.
pub fn newton_polygon(
    cm_type: &CmTypeLift,
    context: &PrimeContext,
) -> Result<NewtonPolygon, NewtonError> {
    if !cm_type.field().same_field(context.field()) {
        return Err(NewtonError::FieldMismatch);
    }
    let field = context.field();
    let g = field.group();
    let cosets = double_cosets(g, context.decomposition(), field.h())
        .expect("context subgroups share the field's group");
    let h_order = field.h().order();
    let blocks = cosets
        .into_iter()
        .map(|coset| {
            let inside = coset
                .members()
                .iter()
                .filter(|&&m| cm_type.contains(m))
                .count();
            let slope = Rational64::new(inside as i64, coset.len() as i64);
            let multiplicity = coset.len() / h_order;
            SlopeBlock {
                slope,
                multiplicity,
                coset: Some(coset),
            }
        })
        .collect();
    Ok(NewtonPolygon::from_blocks(blocks))
}

/// How a prime of the real subfield behaves in the CM field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplittingBehavior {
    Split,
    Inert,
    Ramified,
}

impl SplittingBehavior {
    pub fn as_str(self) -> &'static str {
        match self {
            SplittingBehavior::Split => "split",
            SplittingBehavior::Inert => "inert",
            SplittingBehavior::Ramified => "ramified",
        }
    }
}

impl std::fmt::Display for SplittingBehavior {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A prime `w` of the CM field above `p`: its double coset, ramification
/// index and residue degree over `p`, and its slope when a CM type was
/// supplied.
#[derive(Clone, Debug)]
pub struct FieldPlace {
    pub coset: DoubleCoset,
    pub e: usize,
    pub f: usize,
    pub slope: Option<Slope>,
}

/// A prime `v` of the maximal totally real subfield above `p`, together
/// with the primes of the CM field above it.
#[derive(Clone, Debug)]
pub struct RealPlace {
    pub coset: DoubleCoset,
    pub e: usize,
    pub f: usize,
    pub behavior: SplittingBehavior,
    pub above: Vec<FieldPlace>,
}

/// Full decomposition data of `p` in the CM field over its real subfield.
#[derive(Clone, Debug)]
pub struct SplittingReport {
    field: CmField,
    places: Vec<RealPlace>,
}

impl SplittingReport {
    pub fn field(&self) -> &CmField {
        &self.field
    }

    pub fn places(&self) -> &[RealPlace] {
        &self.places
    }

    /// Sum over the real places of `e * f`; always the dimension `g`.
    pub fn real_degree_sum(&self) -> usize {
        self.places.iter().map(|v| v.e * v.f).sum()
    }
}

fn ramification_over_p(inertia: &Subgroup, fixer: &Subgroup, rep: u16) -> usize {
    let conj = fixer.conjugate_by(rep);
    inertia.order() / inertia.intersection(&conj).order()
}

/// Computes how `p` decomposes in the CM field and its real subfield from
/// the prime context. Double cosets of `H` are the primes of the CM
/// field, double cosets of `H+` the primes of the real subfield; a slope
/// is attached to each prime of the CM field when a type is given.
pub fn splitting_report(
    context: &PrimeContext,
    cm_type: Option<&CmTypeLift>,
) -> Result<SplittingReport, NewtonError> {
    if let Some(t) = cm_type {
        if !t.field().same_field(context.field()) {
            return Err(NewtonError::FieldMismatch);
        }
    }
    let field = context.field();
    let g = field.group();
    let d = context.decomposition();
    let inertia = context.inertia();
    let fine = double_cosets(g, d, field.h()).expect("validated context");
    let coarse = double_cosets(g, d, field.h_plus()).expect("validated context");

    let places = coarse
        .into_iter()
        .map(|v_coset| {
            let e_v = ramification_over_p(inertia, field.h_plus(), v_coset.representative());
            let ef_v = v_coset.len() / field.h_plus().order();
            debug_assert_eq!(ef_v % e_v, 0);
            let f_v = ef_v / e_v;

            let above: Vec<FieldPlace> = fine
                .iter()
                .filter(|w| v_coset.contains(w.representative()))
                .map(|w_coset| {
                    let e_w =
                        ramification_over_p(inertia, field.h(), w_coset.representative());
                    let ef_w = w_coset.len() / field.h().order();
                    debug_assert_eq!(ef_w % e_w, 0);
                    let slope = cm_type.map(|t| {
                        let inside = w_coset
                            .members()
                            .iter()
                            .filter(|&&m| t.contains(m))
                            .count();
                        Rational64::new(inside as i64, w_coset.len() as i64)
                    });
                    FieldPlace {
                        coset: w_coset.clone(),
                        e: e_w,
                        f: ef_w / e_w,
                        slope,
                    }
                })
                .collect();

            let behavior = match above.len() {
                2 => SplittingBehavior::Split,
                1 => {
                    let w = &above[0];
                    assert_eq!(
                        w.e * w.f,
                        2 * e_v * f_v,
                        "a single prime above v has local degree 2 over it"
                    );
                    if w.e / e_v == 2 {
                        SplittingBehavior::Ramified
                    } else {
                        SplittingBehavior::Inert
                    }
                }
                n => panic!("{n} primes above a place of the real subfield"),
            };
            RealPlace {
                coset: v_coset,
                e: e_v,
                f: f_v,
                behavior,
                above,
            }
        })
        .collect();
    Ok(SplittingReport {
        field: field.clone(),
        places,
    })
}

/// Truth record of one implication on one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImplicationCheck {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub implication_satisfied: bool,
}

fn implication(hypothesis: bool, conclusion: bool) -> ImplicationCheck {
    ImplicationCheck {
        hypothesis_holds: hypothesis,
        conclusion_holds: conclusion,
        implication_satisfied: !hypothesis || conclusion,
    }
}

/// Per-instance evaluation of the type-independent splitting criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriteriaReport {
    /// All real places non-split implies supersingular.
    pub nonsplit_implies_supersingular: ImplicationCheck,
    /// Supersingular implies every real place of odd local degree `e*f`
    /// is inert or ramified.
    pub supersingular_implies_odd_places_nonsplit: ImplicationCheck,
    /// Odd dimension and supersingular imply some real place is non-split.
    pub odd_dimension_supersingular_has_nonsplit: ImplicationCheck,
    /// For odd dimension with the real subfield Galois over the rationals
    /// (its fixing group normal), supersingular holds exactly when every
    /// real place is non-split.
    pub galois_real_subfield_equivalence: ImplicationCheck,
    /// Ordinary implies every real place splits.
    pub ordinary_implies_all_split: ImplicationCheck,
}

/// Evaluates each splitting criterion on one instance. The report and the
/// polygon must come from the same prime context.
pub fn check_criteria(report: &SplittingReport, polygon: &NewtonPolygon) -> CriteriaReport {
    let class = polygon.classify();
    let supersingular = class == Reduction::Supersingular;
    let ordinary = class == Reduction::Ordinary;
    let dim = report.field().dimension();
    let odd_dim = dim % 2 == 1;

    let all_nonsplit = report
        .places()
        .iter()
        .all(|v| v.behavior != SplittingBehavior::Split);
    let all_split = report
        .places()
        .iter()
        .all(|v| v.behavior == SplittingBehavior::Split);
    let some_nonsplit = report
        .places()
        .iter()
        .any(|v| v.behavior != SplittingBehavior::Split);
    let odd_places_nonsplit = report
        .places()
        .iter()
        .filter(|v| (v.e * v.f) % 2 == 1)
        .all(|v| v.behavior != SplittingBehavior::Split);
    let h_plus_normal = report.field().h_plus().is_normal();

    CriteriaReport {
        nonsplit_implies_supersingular: implication(all_nonsplit, supersingular),
        supersingular_implies_odd_places_nonsplit: implication(
            supersingular,
            odd_places_nonsplit,
        ),
        odd_dimension_supersingular_has_nonsplit: implication(
            odd_dim && supersingular,
            some_nonsplit,
        ),
        galois_real_subfield_equivalence: implication(
            odd_dim && h_plus_normal,
            supersingular == all_nonsplit,
        ),
        ordinary_implies_all_split: implication(ordinary, all_split),
    }
}
