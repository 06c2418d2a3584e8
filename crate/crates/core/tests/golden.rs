//! End-to-end scenarios over the library surface: the quartic dihedral
//! field with its two contrasting decomposition groups, the conductor-8
//! story across residue classes, and the elliptic-curve cross-check.

use cmnewton_core::cm::{enumerate_cm_types, induced_type, CmField, CmTypeLift};
use cmnewton_core::cyclotomic::{decomposition_and_inertia, unit_group};
use cmnewton_core::ec::{count_points, newton_from_trace, ShortWeierstrassCurve};
use cmnewton_core::group::{
    group_from_generators, permutation_from_cycles, ElementId, FiniteGroup, Subgroup,
};
use cmnewton_core::newton::{
    check_criteria, newton_polygon, splitting_report, PrimeContext, Reduction,
    SplittingBehavior,
};
use cmnewton_core::Rational64;

fn quartic_dihedral() -> (FiniteGroup, CmField, CmTypeLift) {
    let x = permutation_from_cycles(4, &[vec![1, 3]]);
    let y = permutation_from_cycles(4, &[vec![0, 1, 2, 3]]);
    let g = group_from_generators(4, &[("x", x), ("y", y)]).unwrap();
    let h = Subgroup::generated(&g, &[g.evaluate_word("x").unwrap()]).unwrap();
    let field = CmField::new(&g, h, g.evaluate_word("y^2").unwrap()).unwrap();
    let members: Vec<ElementId> = ["1", "x", "y", "xy^3"]
        .iter()
        .map(|w| g.evaluate_word(w).unwrap())
        .collect();
    let t = CmTypeLift::new(&field, &members).unwrap();
    (g, field, t)
}

#[test]
fn quartic_field_both_reduction_types() {
    let (g, field, t) = quartic_dihedral();
    for (d_word, expected) in [("xy", Reduction::Supersingular), ("xy^3", Reduction::Ordinary)] {
        let d = Subgroup::generated(&g, &[g.evaluate_word(d_word).unwrap()]).unwrap();
        let pc = PrimeContext::unramified(&field, d).unwrap();
        let np = newton_polygon(&t, &pc).unwrap();
        assert_eq!(np.classify(), expected, "D = <{d_word}>");

        // In both cases p splits in the CM field over its real subfield.
        let report = splitting_report(&pc, Some(&t)).unwrap();
        assert_eq!(report.places().len(), 1);
        assert_eq!(report.places()[0].behavior, SplittingBehavior::Split);
        let crit = check_criteria(&report, &np);
        assert!(crit.nonsplit_implies_supersingular.implication_satisfied);
        assert!(crit.supersingular_implies_odd_places_nonsplit.implication_satisfied);
        assert!(crit.odd_dimension_supersingular_has_nonsplit.implication_satisfied);
        assert!(crit.ordinary_implies_all_split.implication_satisfied);
    }
}

#[test]
fn conductor_eight_induced_type_by_residue_class() {
    let u = unit_group(8).unwrap();
    let g = u.group();
    let field = CmField::new(g, Subgroup::trivial(g), u.conjugation()).unwrap();
    let id = |r: u64| u.id_of_residue(r).unwrap();
    let h_sub = Subgroup::generated(g, &[id(5)]).unwrap();
    let t = induced_type(&field, &h_sub, &[id(1), id(5)]).unwrap();

    // classification depends only on p mod 8
    let mut seen = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        let (d, i) = decomposition_and_inertia(&u, p).unwrap();
        let pc = PrimeContext::new(&field, d, Some(i)).unwrap();
        let class = newton_polygon(&t, &pc).unwrap().classify();
        let expected = if p == 2 || p % 4 == 3 {
            Reduction::Supersingular
        } else {
            Reduction::Ordinary
        };
        assert_eq!(class, expected, "p = {p}");
        seen.push((p, class));
    }
    // both classes occur
    assert!(seen.iter().any(|&(_, c)| c == Reduction::Supersingular));
    assert!(seen.iter().any(|&(_, c)| c == Reduction::Ordinary));
}

#[test]
fn primitive_type_on_conductor_eight_is_mixed_free() {
    // All four types on the conductor-8 field: the two primitive ones see
    // supersingular reduction at every inert prime, the induced ones give
    // the quartic product behaviour. None is ever mixed (g = 2 with these
    // abelian decomposition groups).
    let u = unit_group(8).unwrap();
    let g = u.group();
    let field = CmField::new(g, Subgroup::trivial(g), u.conjugation()).unwrap();
    for t in enumerate_cm_types(&field).unwrap() {
        for p in [3u64, 5, 7, 11, 13] {
            let (d, i) = decomposition_and_inertia(&u, p).unwrap();
            let pc = PrimeContext::new(&field, d, Some(i)).unwrap();
            let np = newton_polygon(&t, &pc).unwrap();
            assert_eq!(np.height(), 4);
            assert_eq!(np.mass(), Rational64::from_integer(2));
            assert!(np.is_symmetric());
        }
    }
}

#[test]
fn trace_polygon_agrees_with_group_polygon_for_g1() {
    let curve = ShortWeierstrassCurve::gaussian();
    let u = unit_group(4).unwrap();
    let field = CmField::new(u.group(), Subgroup::trivial(u.group()), u.conjugation()).unwrap();
    let t = enumerate_cm_types(&field).unwrap().into_iter().next().unwrap();
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let red = count_points(&curve, p).unwrap();
        let from_trace = newton_from_trace(&red);
        let (d, i) = decomposition_and_inertia(&u, p).unwrap();
        let pc = PrimeContext::new(&field, d, Some(i)).unwrap();
        let from_group = newton_polygon(&t, &pc).unwrap();
        assert_eq!(
            from_trace.slope_multiset(),
            from_group.slope_multiset(),
            "p = {p}"
        );
    }
}
