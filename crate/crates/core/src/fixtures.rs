//! Worked examples shipped with the library: base graphs and representation
//! graphs used by the tests, the acceptance suite and the CLI demos.

use std::sync::Arc;

use crate::chen;
use crate::graph::WeightedGraph;
use crate::algebra::ModuleVector;
use crate::rep::{universal_representation, RepresentationGraph};
use crate::field::Field;

type VSpec = Vec<(String, String)>;
type ESpec = Vec<(String, String, String, String, u32)>;

fn build(base: &Arc<WeightedGraph>, vertices: VSpec, edges: ESpec, frontier: Vec<String>) -> RepresentationGraph {
    RepresentationGraph::new(base.clone(), vertices, edges, frontier).expect("fixture is well formed")
}

fn e(id: String, src: &str, dst: &str, edge: &str, tag: u32) -> (String, String, String, String, u32) {
    (id, src.to_string(), dst.to_string(), edge.to_string(), tag)
}

/// One vertex `v` with loops `e`, `f` of weight 2.
pub fn excat_base() -> Arc<WeightedGraph> {
    Arc::new(WeightedGraph::from_spec(&["v"], &[("e", "v", "v", 2), ("f", "v", "v", 2)]).unwrap())
}

/// One vertex with loops `e`, `f` of weight 3: the `L(2,3)` graph.
pub fn l23_base() -> Arc<WeightedGraph> {
    Arc::new(WeightedGraph::from_spec(&["v"], &[("e", "v", "v", 3), ("f", "v", "v", 3)]).unwrap())
}

/// One vertex with three loops `e`, `f`, `g` of weight 1.
pub fn three_loop_base() -> Arc<WeightedGraph> {
    Arc::new(
        WeightedGraph::from_spec(&["v"], &[("e", "v", "v", 1), ("f", "v", "v", 1), ("g", "v", "v", 1)]).unwrap(),
    )
}

/// One vertex with three loops of weight 3.
pub fn three_loop_w3_base() -> Arc<WeightedGraph> {
    Arc::new(
        WeightedGraph::from_spec(&["v"], &[("e", "v", "v", 3), ("f", "v", "v", 3), ("g", "v", "v", 3)]).unwrap(),
    )
}

/// `x --a--> u` with `u` a sink.
pub fn sink_base() -> Arc<WeightedGraph> {
    Arc::new(WeightedGraph::from_spec(&["x", "u"], &[("a", "x", "u", 1)]).unwrap())
}

/// Radius of the truncated lattice fixtures `F_2`, `F_3`, `F_4` and depth of `F_1`.
pub const LATTICE_RADIUS: i64 = 4;

/// `F_7`: vertex `u` with loops `g ↦ e_1`, `h ↦ f_2`. The irreducible graph.
pub fn f7() -> RepresentationGraph {
    let b = excat_base();
    build(
        &b,
        vec![("u".into(), "v".into())],
        vec![e("g".into(), "u", "u", "e", 1), e("h".into(), "u", "u", "f", 2)],
        vec![],
    )
}

/// `F_1`: the universal representation of the class, truncated.
pub fn f1() -> RepresentationGraph {
    universal_representation(&f7(), 0, LATTICE_RADIUS as usize)
        .expect("f7 is valid")
        .graph
}

fn lattice_id(x: i64, y: i64) -> String {
    format!("({x},{y})")
}

/// `F_2`: the `Z²` grid, `e_1` horizontal and `f_2` vertical, cut to a diamond.
pub fn f2() -> RepresentationGraph {
    let b = excat_base();
    let r = LATTICE_RADIUS;
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            if x.abs() + y.abs() <= r {
                pts.push((x, y));
            }
        }
    }
    pts.sort_by_key(|&(x, y)| (x.abs() + y.abs(), x, y));
    let inside = |x: i64, y: i64| x.abs() + y.abs() <= r;
    let mut edges = Vec::new();
    for &(x, y) in &pts {
        if inside(x + 1, y) {
            edges.push(e(format!("h{x},{y}"), &lattice_id(x, y), &lattice_id(x + 1, y), "e", 1));
        }
        if inside(x, y + 1) {
            edges.push(e(format!("w{x},{y}"), &lattice_id(x, y), &lattice_id(x, y + 1), "f", 2));
        }
    }
    let frontier = pts
        .iter()
        .filter(|(x, y)| x.abs() + y.abs() == r)
        .map(|&(x, y)| lattice_id(x, y))
        .collect();
    build(
        &b,
        pts.iter().map(|&(x, y)| (lattice_id(x, y), "v".to_string())).collect(),
        edges,
        frontier,
    )
}

fn line_order() -> Vec<i64> {
    let mut xs = vec![0];
    for k in 1..=LATTICE_RADIUS {
        xs.push(k);
        xs.push(-k);
    }
    xs
}

/// A line of vertices with steps along `step` and loops along `looped`.
fn line(step: (&str, u32), looped: (&str, u32)) -> RepresentationGraph {
    let b = excat_base();
    let r = LATTICE_RADIUS;
    let xs = line_order();
    let id = |x: i64| format!("n{x}");
    let mut edges = Vec::new();
    for &x in &xs {
        if x < r {
            edges.push(e(format!("s{x}"), &id(x), &id(x + 1), step.0, step.1));
        }
        edges.push(e(format!("l{x}"), &id(x), &id(x), looped.0, looped.1));
    }
    build(
        &b,
        xs.iter().map(|&x| (id(x), "v".to_string())).collect(),
        edges,
        vec![id(r), id(-r)],
    )
}

/// `F_3`: `e_1` steps along a line, `f_2` loops.
pub fn f3() -> RepresentationGraph {
    line(("e", 1), ("f", 2))
}

/// `F_4`: `f_2` steps along a line, `e_1` loops.
pub fn f4() -> RepresentationGraph {
    line(("f", 2), ("e", 1))
}

fn two_cycle(step: (&str, u32), looped: (&str, u32)) -> RepresentationGraph {
    let b = excat_base();
    build(
        &b,
        vec![("a".into(), "v".into()), ("b".into(), "v".into())],
        vec![
            e("ab".into(), "a", "b", step.0, step.1),
            e("ba".into(), "b", "a", step.0, step.1),
            e("la".into(), "a", "a", looped.0, looped.1),
            e("lb".into(), "b", "b", looped.0, looped.1),
        ],
        vec![],
    )
}

/// `F_5`: an `e_1` two-cycle with `f_2` loops.
pub fn f5() -> RepresentationGraph {
    two_cycle(("e", 1), ("f", 2))
}

/// `F_6`: an `f_2` two-cycle with `e_1` loops.
pub fn f6() -> RepresentationGraph {
    two_cycle(("f", 2), ("e", 1))
}

/// `F_1, …, F_7` in order.
pub fn lattice() -> Vec<RepresentationGraph> {
    vec![f1(), f2(), f3(), f4(), f5(), f6(), f7()]
}

/// Arrows `F_i → F_j` of the lattice (1-based), before closure.
pub const LATTICE_ARROWS: [(usize, usize); 7] = [(1, 2), (2, 3), (2, 4), (3, 5), (4, 6), (5, 7), (6, 7)];

/// Number of interior vertices in [`wlpa3`].
pub const WLPA3_INTERIOR: usize = 10;

/// The simple `L(2,3)`-module graph over one vertex with two weight-3 loops,
/// truncated after `v_9`.
pub fn wlpa3() -> RepresentationGraph {
    let b = l23_base();
    let n = 16;
    let id = |k: usize| format!("v_{k}");
    let mut edges = Vec::new();
    let mut add = |src: usize, edge: &str, tag: u32, dst: usize| {
        edges.push(e(format!("{edge}{tag}_{src}"), &id(src), &id(dst), edge, tag));
    };
    add(0, "e", 1, 0);
    add(0, "f", 2, 0);
    add(0, "f", 3, 1);
    add(1, "e", 1, 1);
    add(1, "e", 2, 2);
    add(1, "e", 3, 3);
    add(2, "f", 1, 2);
    add(2, "f", 2, 3);
    add(2, "f", 3, 4);
    for v in 3..WLPA3_INTERIOR {
        let k = v / 2;
        for j in 1..=3u32 {
            if v % 2 == 1 {
                add(v, "e", j, 3 * k + j as usize);
            } else {
                add(v, "f", j, 3 * k - 2 + j as usize);
            }
        }
    }
    build(
        &b,
        (0..n).map(|k| (id(k), "v".to_string())).collect(),
        edges,
        (WLPA3_INTERIOR..n).map(id).collect(),
    )
}

/// The graph of the cyclic path `efg…` on the three-loop graph, with one
/// layer of side vertices.
pub fn wlpa4() -> RepresentationGraph {
    let b = three_loop_base();
    let id = |k: usize| format!("v_{k}");
    let spec: [(usize, &str, usize); 9] = [
        (1, "e", 2),
        (2, "f", 3),
        (3, "g", 1),
        (4, "e", 1),
        (5, "f", 1),
        (6, "f", 2),
        (7, "g", 2),
        (8, "g", 3),
        (9, "e", 3),
    ];
    build(
        &b,
        (1..=9).map(|k| (id(k), "v".to_string())).collect(),
        spec.iter()
            .map(|&(s, edge, d)| e(format!("{edge}_{s}"), &id(s), &id(d), edge, 1))
            .collect(),
        (4..=9).map(id).collect(),
    )
}

/// Prefix of the irrational path `ef ef² ef³ …` used for the second
/// three-loop example.
pub const WLPA45_PREFIX: [&str; 5] = ["e", "f", "e", "f", "f"];

/// Truncation of the graph of the irrational path `ef ef² ef³ …`.
pub fn wlpa45(prefix_len: usize, side_depth: usize) -> RepresentationGraph {
    let b = three_loop_base();
    let prefix: Vec<String> = (1..)
        .flat_map(|k| std::iter::once("e".to_string()).chain(std::iter::repeat("f".to_string()).take(k)))
        .take(prefix_len)
        .collect();
    let refs: Vec<&str> = prefix.iter().map(String::as_str).collect();
    chen::irrational_rep_graph(&b, &refs, side_depth).expect("prefix is composable").graph
}

/// Base of the morphism example: `u → v` with edges `e`, `f` of weight 2.
pub fn excat11_base() -> Arc<WeightedGraph> {
    Arc::new(WeightedGraph::from_spec(&["u", "v"], &[("e", "u", "v", 2), ("f", "u", "v", 2)]).unwrap())
}

/// Four-vertex graph `F` of the morphism example.
pub fn excat11_f() -> RepresentationGraph {
    let b = excat11_base();
    build(
        &b,
        vec![
            ("u_1".into(), "u".into()),
            ("u_2".into(), "u".into()),
            ("v_1".into(), "v".into()),
            ("v_2".into(), "v".into()),
        ],
        vec![
            e("a".into(), "u_1", "v_1", "e", 1),
            e("b".into(), "u_1", "v_2", "f", 2),
            e("c".into(), "u_2", "v_2", "e", 1),
            e("d".into(), "u_2", "v_1", "f", 2),
        ],
        vec![],
    )
}

/// Two-vertex quotient `G` of [`excat11_f`].
pub fn excat11_g() -> RepresentationGraph {
    let b = excat11_base();
    build(
        &b,
        vec![("u".into(), "u".into()), ("v".into(), "v".into())],
        vec![e("x".into(), "u", "v", "e", 1), e("y".into(), "u", "v", "f", 2)],
        vec![],
    )
}

/// `σ: V_G → V_F` with `σ(u) = u_1 + u_2`, `σ(v) = v_1 + v_2`, indexed by `G`-vertex.
pub fn excat11_sigma(field: Field) -> Vec<ModuleVector> {
    let f = excat11_f();
    let pair = |a: &str, b: &str| {
        ModuleVector::basis(field, f.vertex(a).unwrap()) + ModuleVector::basis(field, f.vertex(b).unwrap())
    };
    vec![pair("u_1", "u_2"), pair("v_1", "v_2")]
}

/// The eight representation-graph fixtures: `F_1, …, F_7` and the `L(2,3)` graph.
pub fn eight_fixtures() -> Vec<(&'static str, RepresentationGraph)> {
    vec![
        ("F_1", f1()),
        ("F_2", f2()),
        ("F_3", f3()),
        ("F_4", f4()),
        ("F_5", f5()),
        ("F_6", f6()),
        ("F_7", f7()),
        ("wlpa3", wlpa3()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_validate() {
        for (name, f) in eight_fixtures() {
            assert!(f.validate().is_ok(), "{name}: {:?}", f.validate());
        }
        assert!(wlpa4().validate().is_ok());
        assert!(wlpa45(5, 1).validate().is_ok());
        assert!(excat11_f().validate().is_ok());
        assert!(excat11_g().validate().is_ok());
    }

    #[test]
    fn lattice_sizes() {
        let r = LATTICE_RADIUS as usize;
        assert_eq!(f2().vertex_count(), 2 * r * r + 2 * r + 1);
        assert_eq!(f3().vertex_count(), 2 * r + 1);
        assert_eq!(f1().vertex_count(), 1 + 4 * (3usize.pow(r as u32) - 1) / 2);
    }
}
