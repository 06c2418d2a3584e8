//! CM field data and lifted CM types.
//!
//! A CM field of degree `2g` is described purely group-theoretically by a
//! triple `(G, H, c)`: the Galois group of a Galois closure, the subgroup
//! fixing the field, and complex conjugation (a central involution outside
//! `H`). A CM type lifts to the subset of `G` restricting to it, which is
//! a union of right `H`-cosets covering exactly one of each conjugate
//! coset pair.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{ElementId, FiniteGroup, GroupError, Subgroup};

/// Enumeration guard: at most `2^20` CM types are enumerated.
pub const MAX_ENUMERATION_DIMENSION: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CmError {
    #[error("conjugation must be a non-trivial involution")]
    ConjugationNotInvolution,
    #[error("conjugation must be central in the Galois group")]
    ConjugationNotCentral,
    #[error("conjugation fixes the field (it lies in H)")]
    ConjugationFixesField,
    #[error("the index of H in G is odd")]
    IndexNotEven,
    #[error("subgroup does not belong to this Galois group")]
    GroupMismatch,
    #[error("type members are not stable under right multiplication by H")]
    NotHStable,
    #[error("type contains a conjugate pair: {0} and {1}")]
    ConjugatePairPresent(String, String),
    #[error("type has {got} elements but must have {want} to cover all embeddings")]
    IncompleteCover { got: usize, want: usize },
    #[error("dimension {0} too large to enumerate all 2^g CM types (cap g <= {MAX_ENUMERATION_DIMENSION})")]
    DimensionTooLargeForEnumeration(usize),
    #[error("subgroup is not intermediate: it must contain H and avoid conjugation")]
    NotIntermediateSubgroup,
    #[error("subfield type is invalid: {0}")]
    SubTypeInvalid(Box<CmError>),
    #[error(transparent)]
    Group(#[from] GroupError),
}

struct CmFieldInner {
    group: FiniteGroup,
    h: Subgroup,
    conjugation: ElementId,
    h_plus: Subgroup,
    dimension: usize,
}

/// Validated CM field datum `(G, H, c)` with the derived real-subfield
/// group `H+ = <H, c>` and dimension `g = |G| / (2 |H|)`.
#[derive(Clone)]
pub struct CmField {
    inner: Arc<CmFieldInner>,
}

impl fmt::Debug for CmField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CmField(|G| = {}, |H| = {}, g = {})",
            self.group().order(),
            self.h().order(),
            self.dimension()
        )
    }
}

impl CmField {
    /// Validates `(G, H, c)` as a CM field datum.
    pub fn new(
        group: &FiniteGroup,
        h: Subgroup,
        conjugation: ElementId,
    ) -> Result<Self, CmError> {
        if !h.parent().same_group(group) {
            return Err(CmError::GroupMismatch);
        }
        group.check_element(conjugation)?;
        let c = conjugation;
        if c == group.identity() || group.product(c, c) != group.identity() {
            return Err(CmError::ConjugationNotInvolution);
        }
        if !group.is_central(c)? {
            return Err(CmError::ConjugationNotCentral);
        }
        if h.contains(c) {
            return Err(CmError::ConjugationFixesField);
        }
        let index = group.order() / h.order();
        if index % 2 != 0 {
            return Err(CmError::IndexNotEven);
        }
        let mut seeds: Vec<ElementId> = h.members().to_vec();
        seeds.push(c);
        let h_plus = Subgroup::generated(group, &seeds)?;
        debug_assert_eq!(h_plus.order(), 2 * h.order());
        Ok(CmField {
            inner: Arc::new(CmFieldInner {
                group: group.clone(),
                h,
                conjugation,
                h_plus,
                dimension: index / 2,
            }),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.inner.group
    }

    /// Subgroup fixing the CM field.
    pub fn h(&self) -> &Subgroup {
        &self.inner.h
    }

    /// Subgroup fixing the maximal totally real subfield.
    pub fn h_plus(&self) -> &Subgroup {
        &self.inner.h_plus
    }

    pub fn conjugation(&self) -> ElementId {
        self.inner.conjugation
    }

    /// Half the degree of the CM field: the dimension of an abelian
    /// variety with this CM.
    pub fn dimension(&self) -> usize {
        self.inner.dimension
    }

    pub fn same_field(&self, other: &CmField) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

/// A lifted CM type: the subset of `G` restricting to a CM type of the
/// field, stored as a sorted set of element identifiers.
#[derive(Clone, Debug)]
pub struct CmTypeLift {
    field: CmField,
    members: Vec<ElementId>,
}

impl PartialEq for CmTypeLift {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.members == other.members
    }
}

impl Eq for CmTypeLift {}

impl CmTypeLift {
    /// Validates a member set as a lifted CM type: right `H`-stable, free
    /// of conjugate pairs, and covering half of `G`.
    pub fn new(field: &CmField, members: &[ElementId]) -> Result<Self, CmError> {
        let g = field.group();
        for &m in members {
            g.check_element(m)?;
        }
        let mut members: Vec<ElementId> = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let contains = |a: ElementId| members.binary_search(&a).is_ok();
        for &m in &members {
            for &h in field.h().members() {
                if !contains(g.product(m, h)) {
                    return Err(CmError::NotHStable);
                }
            }
        }
        let c = field.conjugation();
        for &m in &members {
            let cm = g.product(c, m);
            if contains(cm) {
                return Err(CmError::ConjugatePairPresent(g.label(m), g.label(cm)));
            }
        }
        if members.len() != g.order() / 2 {
            return Err(CmError::IncompleteCover {
                got: members.len(),
                want: g.order() / 2,
            });
        }
        Ok(CmTypeLift {
            field: field.clone(),
            members,
        })
    }

    pub fn field(&self) -> &CmField {
        &self.field
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: ElementId) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// The complementary type `c * members`.
    pub fn conjugate(&self) -> CmTypeLift {
        let g = self.field.group();
        let c = self.field.conjugation();
        let mut members: Vec<ElementId> =
            self.members.iter().map(|&m| g.product(c, m)).collect();
        members.sort_unstable();
        CmTypeLift {
            field: self.field.clone(),
            members,
        }
    }

    /// The right stabiliser `{ s : members * s = members }`. It always
    /// contains `H`; the type is primitive exactly when it equals `H`.
    pub fn stabilizer(&self) -> Subgroup {
        let g = self.field.group();
        let fixers: Vec<ElementId> = g
            .elements()
            .filter(|&s| {
                self.members
                    .iter()
                    .all(|&m| self.contains(g.product(m, s)))
            })
            .collect();
        Subgroup::generated(g, &fixers).expect("stabilizer members are group elements")
    }

    /// A type is primitive when it is not induced from a CM type of a
    /// proper subfield, i.e. when its stabiliser is exactly `H`.
    pub fn is_primitive(&self) -> bool {
        self.stabilizer().members() == self.field.h().members()
    }
}

/// All `2^g` lifted CM types, in a fixed deterministic order: the
/// `H`-coset pairs `{gH, cgH}` are sorted by smallest representative and
/// bit `i` of the enumeration index selects the conjugate of pair `i`.
pub fn enumerate_cm_types(field: &CmField) -> Result<Vec<CmTypeLift>, CmError> {
    let g = field.group();
    let dim = field.dimension();
    if dim > MAX_ENUMERATION_DIMENSION {
        return Err(CmError::DimensionTooLargeForEnumeration(dim));
    }
    let c = field.conjugation();
    let n = g.order();
    let mut seen = vec![false; n];
    let mut pairs: Vec<(Vec<ElementId>, Vec<ElementId>)> = Vec::new();
    for rep in 0..n as ElementId {
        if seen[rep as usize] {
            continue;
        }
        let coset: Vec<ElementId> = field
            .h()
            .members()
            .iter()
            .map(|&h| g.product(rep, h))
            .collect();
        let partner: Vec<ElementId> = coset.iter().map(|&m| g.product(c, m)).collect();
        for &m in coset.iter().chain(partner.iter()) {
            seen[m as usize] = true;
        }
        let mut coset = coset;
        let mut partner = partner;
        coset.sort_unstable();
        partner.sort_unstable();
        pairs.push((coset, partner));
    }
    debug_assert_eq!(pairs.len(), dim);
    let mut out = Vec::with_capacity(1usize << dim);
    for k in 0..(1usize << dim) {
        let mut members = Vec::with_capacity(n / 2);
        for (i, (first, second)) in pairs.iter().enumerate() {
            let pick = if k >> i & 1 == 0 { first } else { second };
            members.extend_from_slice(pick);
        }
        members.sort_unstable();
        out.push(CmTypeLift {
            field: field.clone(),
            members,
        });
    }
    Ok(out)
}

/// Reinterprets a CM type of the subfield fixed by `h_sub` (an
/// intermediate group `H <= h_sub <= G` avoiding conjugation) as a CM type
/// of the full field. The member set is unchanged; it is automatically
/// `H`-stable. The result is never primitive unless `h_sub = H`.
pub fn induced_type(
    field: &CmField,
    h_sub: &Subgroup,
    sub_members: &[ElementId],
) -> Result<CmTypeLift, CmError> {
    if !h_sub.parent().same_group(field.group()) {
        return Err(CmError::GroupMismatch);
    }
    if !field.h().is_subgroup_of(h_sub) || h_sub.contains(field.conjugation()) {
        return Err(CmError::NotIntermediateSubgroup);
    }
    let sub_field = CmField::new(field.group(), h_sub.clone(), field.conjugation())?;
    let sub_type = CmTypeLift::new(&sub_field, sub_members)
        .map_err(|e| CmError::SubTypeInvalid(Box::new(e)))?;
    Ok(CmTypeLift::new(field, sub_type.members())
        .expect("a type stable under h_sub is stable under H"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::unit_group;
    use crate::group::{group_from_generators, permutation_from_cycles};

    fn d8_field() -> (FiniteGroup, CmField) {
        let x = permutation_from_cycles(4, &[vec![1, 3]]);
        let y = permutation_from_cycles(4, &[vec![0, 1, 2, 3]]);
        let g = group_from_generators(4, &[("x", x), ("y", y)]).unwrap();
        let h = Subgroup::generated(&g, &[g.evaluate_word("x").unwrap()]).unwrap();
        let c = g.evaluate_word("y^2").unwrap();
        let field = CmField::new(&g, h, c).unwrap();
        (g, field)
    }

    fn ids(g: &FiniteGroup, words: &[&str]) -> Vec<ElementId> {
        let mut v: Vec<ElementId> = words.iter().map(|w| g.evaluate_word(w).unwrap()).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn zeta8_field_data() {
        let u = unit_group(8).unwrap();
        let h = Subgroup::trivial(u.group());
        let field = CmField::new(u.group(), h, u.conjugation()).unwrap();
        assert_eq!(field.dimension(), 2);
        assert_eq!(field.h_plus().order(), 2);
    }

    #[test]
    fn d8_field_data() {
        let (g, field) = d8_field();
        assert_eq!(field.dimension(), 2);
        assert_eq!(
            field.h_plus().members(),
            ids(&g, &["1", "x", "y^2", "xy^2"]).as_slice()
        );
    }

    #[test]
    fn conjugation_in_h_rejected() {
        let x = permutation_from_cycles(4, &[vec![1, 3]]);
        let y = permutation_from_cycles(4, &[vec![0, 1, 2, 3]]);
        let g = group_from_generators(4, &[("x", x), ("y", y)]).unwrap();
        let h = Subgroup::generated(&g, &[g.evaluate_word("x").unwrap()]).unwrap();
        // x is not central, so picking c = x trips centrality; pick a field
        // where c lies in H instead: H = <y^2>, c = y^2.
        let h2 = Subgroup::generated(&g, &[g.evaluate_word("y^2").unwrap()]).unwrap();
        assert_eq!(
            CmField::new(&g, h2, g.evaluate_word("y^2").unwrap()).unwrap_err(),
            CmError::ConjugationFixesField
        );
        assert_eq!(
            CmField::new(&g, h, g.evaluate_word("x").unwrap()).unwrap_err(),
            CmError::ConjugationNotCentral
        );
    }

    #[test]
    fn conjugation_must_be_involution() {
        let u = unit_group(8).unwrap();
        let h = Subgroup::trivial(u.group());
        assert_eq!(
            CmField::new(u.group(), h, 0).unwrap_err(),
            CmError::ConjugationNotInvolution
        );
    }

    #[test]
    fn d8_golden_type_is_valid_and_primitive() {
        let (g, field) = d8_field();
        let t = CmTypeLift::new(&field, &ids(&g, &["1", "x", "y", "xy^3"])).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.stabilizer().members(), field.h().members());
        assert!(t.is_primitive());
    }

    #[test]
    fn zeta8_types() {
        let u = unit_group(8).unwrap();
        let g = u.group();
        let h = Subgroup::trivial(g);
        let field = CmField::new(g, h, u.conjugation()).unwrap();
        let id = |r: u64| u.id_of_residue(r).unwrap();

        // {1, 5} is a valid lift (the type induced from the quartic
        // subfield fixed by 5); its stabiliser is {1, 5}, so imprimitive.
        let t = CmTypeLift::new(&field, &[id(1), id(5)]).unwrap();
        assert_eq!(t.stabilizer().members(), &[id(1), id(5)]);
        assert!(!t.is_primitive());

        // {1, 7} contains the conjugate pair (1, 7).
        let err = CmTypeLift::new(&field, &[id(1), id(7)]).unwrap_err();
        assert!(matches!(err, CmError::ConjugatePairPresent(_, _)));

        // too small
        let err = CmTypeLift::new(&field, &[id(1)]).unwrap_err();
        assert_eq!(err, CmError::IncompleteCover { got: 1, want: 2 });
    }

    #[test]
    fn h_stability_enforced() {
        let (g, field) = d8_field();
        // {1, y, y^2, y^3} is not a union of H-cosets
        let err = CmTypeLift::new(&field, &ids(&g, &["1", "y", "y^2", "y^3"])).unwrap_err();
        assert_eq!(err, CmError::NotHStable);
    }

    #[test]
    fn enumeration_counts_and_membership() {
        // g = 1: exactly two types
        let u4 = unit_group(4).unwrap();
        let f1 = CmField::new(u4.group(), Subgroup::trivial(u4.group()), u4.conjugation())
            .unwrap();
        let types = enumerate_cm_types(&f1).unwrap();
        assert_eq!(types.len(), 2);
        assert_eq!(types[0].members(), &[0]);
        assert_eq!(types[1].members(), &[1]);

        // conductor 8: four types
        let u8 = unit_group(8).unwrap();
        let f2 = CmField::new(u8.group(), Subgroup::trivial(u8.group()), u8.conjugation())
            .unwrap();
        assert_eq!(enumerate_cm_types(&f2).unwrap().len(), 4);

        // D8: four types, the golden one among them
        let (g, field) = d8_field();
        let types = enumerate_cm_types(&field).unwrap();
        assert_eq!(types.len(), 4);
        let golden = ids(&g, &["1", "x", "y", "xy^3"]);
        assert!(types.iter().any(|t| t.members() == golden.as_slice()));
        for t in &types {
            assert_eq!(t.len(), 4);
            // validation agrees
            assert!(CmTypeLift::new(&field, t.members()).is_ok());
        }
    }

    #[test]
    fn enumeration_pairs_off_under_conjugation() {
        let (_, field) = d8_field();
        let types = enumerate_cm_types(&field).unwrap();
        for t in &types {
            let conj = t.conjugate();
            assert!(types.iter().any(|s| s == &conj));
            assert_ne!(&conj, t);
        }
    }

    #[test]
    fn induced_from_quartic_subfield() {
        let u = unit_group(8).unwrap();
        let g = u.group();
        let field =
            CmField::new(g, Subgroup::trivial(g), u.conjugation()).unwrap();
        let id = |r: u64| u.id_of_residue(r).unwrap();
        let h_sub = Subgroup::generated(g, &[id(5)]).unwrap();
        let t = induced_type(&field, &h_sub, &[id(1), id(5)]).unwrap();
        assert_eq!(t.members(), &[id(1), id(5)]);
        assert!(!t.is_primitive());

        // h_sub = H is the identity operation
        let t2 = induced_type(&field, &Subgroup::trivial(g), &[id(1), id(5)]).unwrap();
        assert_eq!(t2.members(), &[id(1), id(5)]);

        // intermediate groups containing conjugation are rejected
        let bad = Subgroup::generated(g, &[id(7)]).unwrap();
        assert_eq!(
            induced_type(&field, &bad, &[id(1), id(3)]).unwrap_err(),
            CmError::NotIntermediateSubgroup
        );

        // invalid subfield type is reported as such
        let err = induced_type(&field, &h_sub, &[id(1), id(3)]).unwrap_err();
        assert!(matches!(err, CmError::SubTypeInvalid(_)));
    }

    #[test]
    fn stabilizer_always_between_h_and_g_minus_c() {
        let (_, field) = d8_field();
        for t in enumerate_cm_types(&field).unwrap() {
            let st = t.stabilizer();
            assert!(field.h().is_subgroup_of(&st));
            assert!(!st.contains(field.conjugation()));
        }
    }

    #[test]
    fn g1_types_are_primitive() {
        let u = unit_group(3).unwrap();
        let field = CmField::new(u.group(), Subgroup::trivial(u.group()), u.conjugation())
            .unwrap();
        for t in enumerate_cm_types(&field).unwrap() {
            assert!(t.is_primitive());
        }
    }
}
