//! Property tests. Random inputs are small: weighted graphs on a few
//! vertices, and finite representation graphs over a one-vertex graph with
//! `k` loops of weight `k`, where every vertex spends its `k` tags on the `k`
//! loops in a random order and each loop's targets form a random permutation.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::sample::subsequence;

use wlpa_core::algebra::{
    act, check_module_hom, check_relations, grading, induced_hom, multiply, AlgebraElement, Grading, ModuleVector,
};
use wlpa_core::branching::{
    action_table_of, check_branching_relations, interval_branching, reconstruct_rep_graph, validate_branching,
    CarrierSet, IntervalOrders, IntervalUnion, ReconstructMode,
};
use wlpa_core::chen::{rational_rep_graph, tail_equivalent, EvPeriodicPath};
use wlpa_core::expr::parse_expr;
use wlpa_core::field::{reduce_mod, FieldValue};
use wlpa_core::graph::{
    build_hat_graph, is_immersion, letters, universal_cover, CoverAlphabet, DegreeVector, Letter, PathWord,
};
use wlpa_core::rep::{
    find_isomorphism, is_quotient_of, minimize, similarity_partition, universal_representation, RepEdge,
};
use wlpa_core::{fixtures, Field, Lift, RepresentationGraph, TaggedEdge, WeightedGraph};

/// Connected graph: a path `0 → 1 → … → n-1` plus extra random edges.
fn weighted_graph() -> impl Strategy<Value = WeightedGraph> {
    (1usize..=3).prop_flat_map(|n| {
        let spine = proptest::collection::vec(1u32..=3, n - 1);
        let extra = proptest::collection::vec((0..n, 0..n, 1u32..=3), 0..=3);
        (Just(n), spine, extra).prop_map(|(n, spine, extra)| {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut edges = Vec::new();
            for (i, w) in spine.into_iter().enumerate() {
                edges.push((format!("s{i}"), names[i].clone(), names[i + 1].clone(), w));
            }
            for (k, (a, b, w)) in extra.into_iter().enumerate() {
                edges.push((format!("x{k}"), names[a].clone(), names[b].clone(), w));
            }
            WeightedGraph::new(names, edges).unwrap()
        })
    })
}

/// A composable letter word in the double graph, built by walking.
fn walk(g: &WeightedGraph, start: usize, picks: &[usize]) -> PathWord {
    let alphabet = letters(g);
    let mut at = start;
    let mut out = Vec::new();
    for &p in picks {
        let options: Vec<Letter> = alphabet.iter().copied().filter(|l| g.letter_source(l) == at).collect();
        if options.is_empty() {
            break;
        }
        let l = options[p % options.len()];
        at = g.letter_target(&l);
        out.push(l);
    }
    PathWord::new(g, start, out).unwrap()
}

fn loops_base(k: usize) -> Arc<WeightedGraph> {
    let names = ["e", "f", "g"];
    let edges: Vec<(&str, &str, &str, u32)> = names[..k].iter().map(|&e| (e, "v", "v", k as u32)).collect();
    Arc::new(WeightedGraph::from_spec(&["v"], &edges).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

/// `(k, n, tag order per vertex, target permutation per loop)`.
fn rep_graph() -> impl Strategy<Value = RepresentationGraph> {
    (1usize..=2, 1usize..=5).prop_flat_map(|(k, n)| {
        let orders = proptest::collection::vec(permutation(k), n);
        let targets = proptest::collection::vec(permutation(n), k);
        (Just(k), Just(n), orders, targets).prop_map(|(k, n, orders, targets)| {
            let base = loops_base(k);
            let mut edges = Vec::new();
            let mut used = vec![0usize; k];
            for (u, order) in orders.iter().enumerate() {
                for (t, &e) in order.iter().enumerate() {
                    let dst = targets[e][used[e]];
                    used[e] += 1;
                    edges.push(RepEdge {
                        id: format!("{}{}_{u}", base.edge(e).id, t + 1),
                        src: u,
                        dst,
                        image: TaggedEdge { edge: e, tag: t as u32 + 1 },
                    });
                }
            }
            let vertices = (0..n).map(|u| (format!("u{u}"), 0)).collect();
            RepresentationGraph::from_indices(base, vertices, edges, BTreeSet::new()).unwrap()
        })
    })
}

fn rep_and_word() -> impl Strategy<Value = (RepresentationGraph, Vec<usize>, usize)> {
    (rep_graph(), proptest::collection::vec(0usize..64, 0..=6), 0usize..8)
}

/// Random element with at most 4 terms and words of length at most 5.
fn element(g: &WeightedGraph, spec: &[(i64, Vec<usize>)]) -> AlgebraElement {
    let field = Field::Rational;
    let mut a = AlgebraElement::zero(field);
    for (c, picks) in spec {
        let w = walk(g, 0, picks);
        let t = AlgebraElement::term(field.from_i64(*c), w);
        a = a.try_add(&t).unwrap();
    }
    a
}

fn element_spec() -> impl Strategy<Value = Vec<(i64, Vec<usize>)>> {
    proptest::collection::vec((-3i64..=3, proptest::collection::vec(0usize..64, 0..=5)), 1..=4)
}

/// Oracle for `~`: `u ~ w` iff no pair reachable from `(u, w)` in the product
/// automaton disagrees on whether a letter is defined.
fn similar_by_product(f: &RepresentationGraph, u: usize, w: usize) -> bool {
    let alphabet = letters(f.base());
    let mut seen = BTreeSet::from([(u, w)]);
    let mut queue = VecDeque::from([(u, w)]);
    while let Some((a, b)) = queue.pop_front() {
        if f.image(a) != f.image(b) {
            return false;
        }
        for &l in &alphabet {
            match (f.lift_step(a, l), f.lift_step(b, l)) {
                (Lift::To(x), Lift::To(y)) => {
                    if seen.insert((x, y)) {
                        queue.push_back((x, y));
                    }
                }
                (Lift::Zero, Lift::Zero) => {}
                _ => return false,
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hat_graph_has_one_copy_per_tag(g in weighted_graph()) {
        let hat = build_hat_graph(&g);
        let total: u32 = g.edges().iter().map(|e| e.weight).sum();
        prop_assert_eq!(hat.len(), total as usize);
        for (k, e) in g.edges().iter().enumerate() {
            let tags: Vec<u32> = hat.iter().filter(|t| t.edge == k).map(|t| t.tag).collect();
            prop_assert_eq!(tags, (1..=e.weight).collect::<Vec<_>>());
        }
    }

    #[test]
    fn length_vector_is_additive(g in weighted_graph(), a in proptest::collection::vec(0usize..64, 0..6),
                                 b in proptest::collection::vec(0usize..64, 0..6), start in 0usize..3) {
        let start = start % g.vertex_count();
        let p = walk(&g, start, &a);
        let q = walk(&g, p.target(&g), &b);
        let pq = p.concat(&g, &q).unwrap();
        let n = g.max_weight();
        let sum: Vec<i64> = p.length_vector(&g).0.iter().zip(&q.length_vector(&g).0).map(|(x, y)| x + y).collect();
        prop_assert_eq!(pq.length_vector(&g).0, sum);
        let neg: Vec<i64> = p.length_vector(&g).0.iter().map(|x| -x).collect();
        prop_assert_eq!(p.reverse(&g).length_vector(&g).0, neg);
        prop_assert_eq!(p.length_vector(&g).0.len(), n);
        prop_assert_eq!(p.is_reduced(), p.reverse(&g).is_reduced());
    }

    #[test]
    fn universal_cover_is_an_immersed_tree(g in weighted_graph(), depth in 0usize..3, structure in any::<bool>()) {
        let alphabet = if structure { CoverAlphabet::Structure } else { CoverAlphabet::Tagged };
        let c = universal_cover(&g, 0, depth, alphabet).unwrap();
        prop_assert_eq!(c.tree.edge_count() + 1, c.tree.vertex_count());
        prop_assert!(c.tree.is_connected());
        let target = match alphabet {
            CoverAlphabet::Structure => g.clone(),
            CoverAlphabet::Tagged => wlpa_core::graph::hat_graph(&g),
        };
        prop_assert!(is_immersion(&c.tree, &target, &c.projection).unwrap());
    }

    #[test]
    fn lifts_retrace((f, picks, start) in rep_and_word()) {
        let u = start % f.vertex_count();
        let w = walk(f.base(), 0, &picks);
        if let Lift::To(end) = f.lift_word(u, &w.letters) {
            let back = w.reverse(f.base());
            prop_assert_eq!(f.lift_word(end, &back.letters), Lift::To(u));
        }
    }

    #[test]
    fn similarity_matches_product_oracle(f in rep_graph()) {
        let p = similarity_partition(&f);
        for u in 0..f.vertex_count() {
            for w in 0..f.vertex_count() {
                prop_assert_eq!(p.block_of(u) == p.block_of(w), similar_by_product(&f, u, w));
            }
        }
    }

    #[test]
    fn minimize_is_idempotent_and_a_quotient(f in rep_graph()) {
        prop_assume!(f.is_connected());
        let m = minimize(&f).unwrap();
        let mm = minimize(&m).unwrap();
        prop_assert!(find_isomorphism(&m, &mm).is_some());
        let s = is_quotient_of(&f, &m);
        prop_assert!(s.holds());
        let alpha = s.morphism.unwrap();
        let h = check_module_hom(&f, &m, &induced_hom(&alpha, Field::Rational)).unwrap();
        prop_assert!(h.holds());
    }

    #[test]
    fn mutual_quotients_are_isomorphic(f in rep_graph(), g in rep_graph()) {
        prop_assume!(f.base() == g.base() && f.is_connected() && g.is_connected());
        let (a, b) = (is_quotient_of(&f, &g), is_quotient_of(&g, &f));
        if let (Some(a), Some(b)) = (&a.morphism, &b.morphism) {
            let ab = a.then(b);
            let ba = b.then(a);
            let f_id: Vec<usize> = (0..f.vertex_count()).collect();
            let g_id: Vec<usize> = (0..g.vertex_count()).collect();
            prop_assert_eq!(ab.vertex_map, f_id);
            prop_assert_eq!(ba.vertex_map, g_id);
        }
    }

    #[test]
    fn relations_hold_on_valid_graphs(f in rep_graph()) {
        prop_assert!(f.validate().is_ok());
        prop_assert!(check_relations(&f, Field::Rational).is_ok());
        prop_assert!(check_relations(&f, Field::Prime(3)).is_ok());
    }

    #[test]
    fn action_is_associative(f in rep_graph(), a in element_spec(), b in element_spec(), start in 0usize..8) {
        let g = f.base();
        let (a, b) = (element(g, &a), element(g, &b));
        let x = ModuleVector::basis(Field::Rational, start % f.vertex_count());
        let lhs = act(&f, &act(&f, &x, &a).unwrap(), &b).unwrap();
        let rhs = act(&f, &x, &multiply(g, &a, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prime_action_is_reduced_rational_action(f in rep_graph(), spec in element_spec(), start in 0usize..8) {
        let g = f.base();
        let text = element(g, &spec).display(g);
        prop_assume!(!text.is_empty() && text != "0");
        let u = start % f.vertex_count();
        let over_q = act(&f, &ModuleVector::basis(Field::Rational, u), &parse_expr(&text, g, Field::Rational).unwrap().element).unwrap();
        let p = 5;
        let over_p = act(&f, &ModuleVector::basis(Field::Prime(p), u), &parse_expr(&text, g, Field::Prime(p)).unwrap().element).unwrap();
        let mut reduced = ModuleVector::zero(Field::Prime(p));
        for (&b, c) in over_q.terms() {
            let FieldValue::Rat(q) = c else { unreachable!() };
            reduced.add_term(b, reduce_mod(q, p).unwrap());
        }
        prop_assert_eq!(reduced, over_p);
    }

    #[test]
    fn reconstruction_round_trips(f in rep_graph()) {
        prop_assume!(f.is_connected());
        let t = action_table_of(&f, Field::Rational);
        let back = reconstruct_rep_graph(&t, ReconstructMode::Strict).unwrap();
        prop_assert!(find_isomorphism(&back, &f).is_some());
    }

    #[test]
    fn interval_systems_partition_exactly(g in weighted_graph(), seed in any::<u64>()) {
        let g = Arc::new(g);
        let x = interval_branching(&g, &IntervalOrders::default()).unwrap();
        prop_assert!(validate_branching(&x).is_ok());
        let mut all = IntervalUnion::default();
        let mut total = BigRational::from_integer(0.into());
        for s in &x.d {
            let CarrierSet::Intervals(u) = s else { unreachable!() };
            prop_assert!(all.intersection(u).is_empty());
            all = all.union(u);
            total += u.measure();
        }
        prop_assert_eq!(total, BigRational::from_integer(g.vertex_count().into()));
        prop_assert!(check_branching_relations(&x, Field::Rational, seed).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grading_tracks_length(depth in 1usize..4, spec in proptest::collection::vec(0usize..64, 0..=5), start in 0usize..64) {
        let t = universal_representation(&fixtures::f7(), 0, depth).unwrap().graph;
        let Grading::Graded { degrees } = grading(&t).unwrap() else {
            return Err(TestCaseError::fail("a tree is graded"));
        };
        let g = t.base();
        let u = start % t.vertex_count();
        let w = walk(g, t.image(u), &spec);
        if let Lift::To(v) = t.lift_word(u, &w.letters) {
            let want: Vec<i64> = degrees[u].0.iter().zip(&w.length_vector(g).0).map(|(a, b)| a + b).collect();
            prop_assert_eq!(&degrees[v].0, &want);
        }
        let _ = DegreeVector::zero(g.max_weight());
    }

    #[test]
    fn canonical_paths(prefix in proptest::collection::vec(0usize..3, 0..5), cycle in proptest::collection::vec(0usize..3, 1..5),
                       others in subsequence(vec![0usize, 1, 2], 1..=3)) {
        let g = fixtures::three_loop_base();
        let p = EvPeriodicPath::new(&g, prefix, cycle.clone()).unwrap();
        let again = EvPeriodicPath::new(&g, p.prefix().to_vec(), p.cycle().to_vec()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert!(tail_equivalent(&p, &p));
        let q = EvPeriodicPath::new(&g, vec![], cycle).unwrap();
        prop_assert!(tail_equivalent(&p, &q) && tail_equivalent(&q, &p));
        let r = EvPeriodicPath::new(&g, vec![], others).unwrap();
        if tail_equivalent(&p, &r) {
            prop_assert!(tail_equivalent(&q, &r));
        }
    }

    #[test]
    fn rational_graphs_validate(cycle in proptest::collection::vec(0usize..3, 1..5), depth in 0usize..3) {
        let g = fixtures::three_loop_base();
        let ids: Vec<&str> = cycle.iter().map(|&e| g.edge(e).id.as_str()).collect();
        let primitive = EvPeriodicPath::new(&g, vec![], cycle.clone()).unwrap().cycle().len() == cycle.len();
        match rational_rep_graph(&g, &ids, depth) {
            Ok(r) => {
                prop_assert!(primitive);
                prop_assert!(r.graph.validate().is_ok());
                let spine: Vec<usize> = r.graph.interior_vertices().filter(|&u| !r.graph.vertex_id(u).contains(':')).collect();
                prop_assert!(wlpa_core::rep::separation(&r.graph).unseparated_among(&spine).is_empty());
            }
            Err(_) => prop_assert!(!primitive),
        }
    }
}
