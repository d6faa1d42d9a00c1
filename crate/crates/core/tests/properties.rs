mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::{dual_degree, is_fano, random_fano_triangles, t_singularities, to_pairs, triangle, triangle_mult};
use fano_mutations::diophantine::{build_mutation_tree, decreasing_pivots, descend_to_minimal, TreeBounds};
use fano_mutations::fwps::{
    edge_cones, is_t_singularity, mutate_weights, one_step_targets, weights_of, wps_triangle, QuotientSingularity,
    WeightTriple,
};
use fano_mutations::lattice::{FanoPolygonLike, FanoTriangle, LatticePoint, LatticeSegment, Point2, Unimodular, WidthVector};
use fano_mutations::mutation::{
    apply_dual_map, enumerate_one_step, find_factors, admissible_widths, mutate, mutate_with_factor, MutationData,
};
use fano_mutations::normal_form::{unimodularly_equivalent, NormalForm};

const EDGE_ORACLE_BOUND: u64 = 20_000;

fn edge_oracle() -> &'static BTreeSet<(u64, u64)> {
    static ORACLE: OnceLock<BTreeSet<(u64, u64)>> = OnceLock::new();
    ORACLE.get_or_init(|| t_singularities(EDGE_ORACLE_BOUND))
}

fn arb_fano_triangle() -> impl Strategy<Value = FanoTriangle> {
    let coord = -12i64..=12;
    prop::array::uniform3((coord.clone(), coord)).prop_filter_map("not Fano", |v| FanoTriangle::from_ints(v).ok())
}

fn arb_unimodular() -> impl Strategy<Value = Unimodular> {
    prop::array::uniform4(-4i64..=4).prop_filter_map("not unimodular", |[a, b, c, d]| {
        Unimodular::from_ints([[a, b], [c, d]]).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_matches_weights_and_dual(t in arb_fano_triangle()) {
        let inv = weights_of(&t);
        let pairs = to_pairs(t.vertices());
        prop_assert_eq!(t.degree(), dual_degree(&pairs));
        prop_assert_eq!(inv.degree.clone(), t.degree());
        prop_assert_eq!(inv.mult, triangle_mult(&pairs));
    }

    #[test]
    fn double_dual_is_identity(t in arb_fano_triangle()) {
        let back = t.dual().dual().to_lattice().expect("dual of a rational polygon's dual is lattice");
        prop_assert_eq!(back, t.vertices().to_vec());
    }

    #[test]
    fn invariants_are_unimodular_invariants(t in arb_fano_triangle(), u in arb_unimodular()) {
        let moved = t.transformed(&u);
        prop_assert!(unimodularly_equivalent(t.vertices(), moved.vertices()));
        prop_assert_eq!(weights_of(&t), {
            let mut m = weights_of(&moved);
            m.vertex_weights = weights_of(&t).vertex_weights;
            m
        });
        let mut a: Vec<_> = edge_cones(&t).into_iter().map(|e| e.singularity).collect();
        let mut b: Vec<_> = edge_cones(&moved).into_iter().map(|e| e.singularity).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn every_mutation_is_invertible_and_consistent_with_the_dual_map(t in arb_fano_triangle()) {
        for w in admissible_widths(&t) {
            for (factor, _) in find_factors(&t, &w) {
                let q = mutate_with_factor(&t, &factor).unwrap();
                prop_assert!(is_fano(&to_pairs(q.vertices())));
                prop_assert_eq!(q.degree(), t.degree());
                prop_assert_eq!(mutate_with_factor(&q, &factor.inverse()).unwrap(), t.to_polygon());
                prop_assert_eq!(apply_dual_map(&t, &factor).unwrap(), q.dual());
            }
        }
    }

    #[test]
    fn edge_t_flags_match_the_oracle(t in arb_fano_triangle()) {
        let oracle = edge_oracle();
        for e in edge_cones(&t) {
            let s = &e.singularity;
            let r: u64 = s.r().try_into().unwrap();
            if r <= EDGE_ORACLE_BOUND {
                let a: u64 = s.a().try_into().unwrap();
                prop_assert_eq!(s.is_t_singularity(), oracle.contains(&(r, a)));
            }
        }
    }
}

/// Every output of every mutation over a fixed random sample of triangles.
#[test]
fn random_triangles_mutations_preserve_invariants() {
    let sample = random_fano_triangles(0x5eed, 200, 12);
    let mut checked = 0usize;
    for v in sample {
        let t = triangle(v);
        let degree = dual_degree(&to_pairs(t.vertices()));
        let mult = triangle_mult(&to_pairs(t.vertices()));
        for m in enumerate_one_step(&t, false) {
            let out = to_pairs(m.polygon.vertices());
            assert!(is_fano(&out), "{t} -> {:?}", out);
            assert_eq!(dual_degree(&out), degree);
            if out.len() == 3 {
                assert_eq!(triangle_mult(&out), mult);
            }
            assert_eq!(mutate_with_factor(&m.polygon, &m.factor.inverse()).unwrap(), t.to_polygon());
            checked += 1;
        }
    }
    assert!(checked > 0);
}

fn shrink(seg: &LatticeSegment, from_start: bool) -> Option<LatticeSegment> {
    let len = seg.lattice_length();
    if len == BigInt::from(0) {
        return None;
    }
    let step = seg.end.sub(&seg.start);
    let step = Point2::new(&step.x / &len, &step.y / &len);
    Some(if from_start {
        LatticeSegment::new(seg.start.add(&step), seg.end.clone())
    } else {
        LatticeSegment::new(seg.start.clone(), seg.end.sub(&step))
    })
}

/// Any valid choice of the negative-height pieces gives the same polygon.
#[test]
fn output_is_independent_of_the_choice_of_pieces() {
    let mut alternatives = 0usize;
    for v in random_fano_triangles(7, 60, 6) {
        let t = triangle(v);
        for w in admissible_widths(&t) {
            for (factor, data) in find_factors(&t, &w) {
                let expected = mutate(&data).unwrap();
                let heights: Vec<BigInt> = data.g_segments().keys().cloned().collect();
                for h in heights {
                    let mut choices: Vec<Option<LatticeSegment>> = vec![None];
                    if let Some(seg) = data.g_segments()[&h].clone() {
                        choices.extend([shrink(&seg, true), shrink(&seg, false)].into_iter().flatten().map(Some));
                    }
                    for choice in choices {
                        let mut g: BTreeMap<BigInt, Option<LatticeSegment>> = data.g_segments().clone();
                        g.insert(h.clone(), choice);
                        if let Ok(alt) = MutationData::new(t.to_polygon(), factor.clone(), g) {
                            assert_eq!(mutate(&alt).unwrap(), expected);
                            alternatives += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(alternatives > 0, "no alternative choices were exercised");
}

/// Divisibility `r | (1 + a)^2` against the `1/(dn^2)(1, dnc - 1)` list.
#[test]
fn t_singularity_divisibility_matches_oracle() {
    let oracle = t_singularities(200);
    for r in 1..=200u64 {
        for a in 0..r.max(2) {
            if num_integer::gcd(a, r) != 1 && r != 1 {
                continue;
            }
            let s = QuotientSingularity::from_ints(r, 1, a).unwrap();
            let key = common::normalize_cyclic(r, a);
            assert_eq!(is_t_singularity(&s), oracle.contains(&key), "1/{r}(1,{a})");
        }
    }
}

/// Weight-level predictions agree with the geometric mutations of the
/// weighted projective plane's triangle whenever the multiplicity is one.
#[test]
fn weight_targets_match_geometry_for_wps() {
    for a in 1..=12u64 {
        for b in a..=12 {
            for c in b..=30 {
                let Ok(w) = WeightTriple::from_ints(a, b, c) else { continue };
                if !w.is_well_formed() {
                    continue;
                }
                let t = wps_triangle(&w).unwrap();
                let inv = weights_of(&t);
                assert_eq!(inv.weights, w);
                let mut predicted: Vec<WeightTriple> = one_step_targets(&inv)
                    .into_iter()
                    .filter(|x| x.weights != w)
                    .map(|x| x.weights)
                    .collect();
                predicted.sort();
                predicted.dedup();
                let mut geometric: Vec<WeightTriple> = enumerate_one_step(&t, true)
                    .into_iter()
                    .map(|m| weights_of(&m.polygon.as_triangle().unwrap()))
                    .filter(|x| x.mult == BigInt::from(1))
                    .map(|x| x.weights)
                    .filter(|x| x != &w)
                    .collect();
                geometric.sort();
                geometric.dedup();
                assert_eq!(predicted, geometric, "weights {w}");
            }
        }
    }
}

/// With `w` minimal on an edge, a mutation to another triangle exists exactly
/// when the edge's cone is a T-singularity.
#[test]
fn mutable_edges_are_t_cones() {
    let mut seen = [0usize; 2];
    for v in random_fano_triangles(11, 150, 8) {
        let t = triangle(v);
        for e in edge_cones(&t) {
            let (p, q) = &e.edge;
            let normal = Point2::new(q.y.clone() - &p.y, p.x.clone() - &q.x);
            let w = WidthVector::primitive_along(&normal.to_rational());
            let w = if w.eval(p) < BigInt::from(0) { w } else { w.negated() };
            let to_triangle = find_factors(&t, &w)
                .iter()
                .any(|(f, _)| mutate_with_factor(&t, f).unwrap().vertices().len() == 3);
            assert_eq!(to_triangle, e.singularity.is_t_singularity(), "{t}: edge {p}-{q}, cone {}", e.singularity);
            seen[usize::from(to_triangle)] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn markov_tree_descends_to_root() {
    let tree = build_mutation_tree(&WeightTriple::from_ints(1, 1, 1).unwrap(), &TreeBounds::depth(6)).unwrap();
    for node in tree.nodes() {
        let path = descend_to_minimal(&node.weights).unwrap();
        assert_eq!(path.len(), node.depth + 1);
        assert_eq!(path.last().unwrap(), &tree.root().weights);
        let expect = usize::from(node.depth > 0);
        assert_eq!(decreasing_pivots(&node.weights).unwrap().len(), expect);
    }
}

#[test]
fn normal_forms_separate_mutation_classes() {
    let p2 = FanoTriangle::from_ints([(1, 0), (0, 1), (-1, -1)]).unwrap();
    let found = enumerate_one_step(&p2, false);
    let forms: Vec<NormalForm> = found.iter().map(|m| m.normal_form.clone()).collect();
    let mut sorted = forms.clone();
    sorted.dedup();
    assert_eq!(forms, sorted);
    assert!(found.iter().all(|m| m.polygon.vertices().iter().all(|v: &LatticePoint| v.content() == BigInt::from(1))));
    assert!(mutate_weights(&WeightTriple::from_ints(1, 1, 1).unwrap(), 0).is_ok());
}
