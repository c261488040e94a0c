//! Chen modules over weight-one graphs: eventually periodic paths, tail
//! equivalence, the path action, and representation graphs realising the
//! sink, irrational and rational cases.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{Generator, RightAction, Step};
use crate::error::{ChenError, GraphError};
use crate::graph::{Dir, Letter, TaggedEdge, WeightedGraph};
use crate::rep::{Lift, RepEdge, RepresentationGraph};

fn check_weight_one(g: &WeightedGraph) -> Result<(), ChenError> {
    match g.edges().iter().find(|e| e.weight != 1) {
        Some(e) => Err(ChenError::NotWeightOne(e.id.clone())),
        None => Ok(()),
    }
}

fn edge_ids(g: &WeightedGraph, ids: &[&str]) -> Result<Vec<usize>, ChenError> {
    ids.iter()
        .map(|id| g.edge_by_id(id).ok_or_else(|| GraphError::UnknownEdge(id.to_string()).into()))
        .collect()
}

fn composable(g: &WeightedGraph, es: &[usize]) -> bool {
    es.windows(2).all(|w| g.edge(w[0]).dst == g.edge(w[1]).src)
}

/// Length of the shortest period of `w`, via the failure function.
fn smallest_period(w: &[usize]) -> usize {
    let n = w.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail.last().copied().unwrap_or(0);
    if n % p == 0 {
        p
    } else {
        n
    }
}

/// Least rotation of `w` (lexicographic on edge indices).
fn least_rotation(w: &[usize]) -> Vec<usize> {
    (0..w.len())
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// The right-infinite path `prefix · cycle · cycle · …` in canonical form:
/// primitive cycle, shortest prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvPeriodicPath {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl EvPeriodicPath {
    pub fn new(g: &WeightedGraph, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self, ChenError> {
        if cycle.is_empty() || !composable(g, &cycle) || g.edge(*cycle.last().unwrap()).dst != g.edge(cycle[0]).src {
            return Err(ChenError::NotSimpleCycle);
        }
        if !composable(g, &prefix) || prefix.last().is_some_and(|&l| g.edge(l).dst != g.edge(cycle[0]).src) {
            return Err(GraphError::NotComposable(prefix.len()).into());
        }
        Ok(EvPeriodicPath::canonical(prefix, cycle))
    }

    pub fn from_ids(g: &WeightedGraph, prefix: &[&str], cycle: &[&str]) -> Result<Self, ChenError> {
        EvPeriodicPath::new(g, edge_ids(g, prefix)?, edge_ids(g, cycle)?)
    }

    fn canonical(mut prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        let p = smallest_period(&cycle);
        let mut cycle = cycle[..p].to_vec();
        while let (Some(&a), Some(&b)) = (prefix.last(), cycle.last()) {
            if a != b {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        EvPeriodicPath { prefix, cycle }
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn first(&self) -> usize {
        *self.prefix.first().unwrap_or(&self.cycle[0])
    }

    /// `τ_{>1}`.
    pub fn tail(&self) -> Self {
        if self.prefix.is_empty() {
            let mut c = self.cycle.clone();
            c.rotate_left(1);
            EvPeriodicPath { prefix: vec![], cycle: c }
        } else {
            EvPeriodicPath::canonical(self.prefix[1..].to_vec(), self.cycle.clone())
        }
    }

    /// `e · self`; the caller checks `r(e) = s(self)`.
    pub fn prepend(&self, e: usize) -> Self {
        let mut prefix = vec![e];
        prefix.extend(&self.prefix);
        EvPeriodicPath::canonical(prefix, self.cycle.clone())
    }

    /// Identifies the tail-equivalence class.
    pub fn class_key(&self) -> Vec<usize> {
        least_rotation(&self.cycle)
    }

    pub fn display(&self, g: &WeightedGraph) -> String {
        let ids = |es: &[usize]| es.iter().map(|&e| g.edge(e).id.as_str()).collect::<Vec<_>>().join(" ");
        format!("({})({})^inf", ids(&self.prefix), ids(&self.cycle))
    }
}

pub fn tail_equivalent(p: &EvPeriodicPath, q: &EvPeriodicPath) -> bool {
    p.class_key() == q.class_key()
}

/// A basis element of a Chen module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChenPath {
    /// A finite path ending at the sink `sink` (empty for the trivial path).
    Sink { edges: Vec<usize>, sink: usize },
    Periodic(EvPeriodicPath),
}

impl ChenPath {
    pub fn source(&self, g: &WeightedGraph) -> usize {
        match self {
            ChenPath::Sink { edges, sink } => edges.first().map(|&e| g.edge(e).src).unwrap_or(*sink),
            ChenPath::Periodic(p) => g.edge(p.first()).src,
        }
    }

    pub fn display(&self, g: &WeightedGraph) -> String {
        match self {
            ChenPath::Sink { edges, sink } if edges.is_empty() => g.vertex_id(*sink).to_string(),
            ChenPath::Sink { edges, .. } => edges.iter().map(|&e| g.edge(e).id.as_str()).collect::<Vec<_>>().join(" "),
            ChenPath::Periodic(p) => p.display(g),
        }
    }
}

/// The Chen module of a weight-one graph acting on paths.
pub struct ChenModule<'a> {
    pub graph: &'a WeightedGraph,
}

impl RightAction for ChenModule<'_> {
    type Basis = ChenPath;

    fn base(&self) -> &WeightedGraph {
        self.graph
    }

    fn step(&self, q: &ChenPath, gen: Generator) -> Step<ChenPath> {
        let g = self.graph;
        match gen {
            Generator::Vertex(v) if q.source(g) == v => Step::To(q.clone()),
            Generator::Vertex(_) => Step::Zero,
            Generator::Letter(l) if l.tag != 1 => Step::Zero,
            Generator::Letter(Letter { edge, dir: Dir::Real, .. }) => match q {
                ChenPath::Sink { edges, sink } if edges.first() == Some(&edge) => Step::To(ChenPath::Sink {
                    edges: edges[1..].to_vec(),
                    sink: *sink,
                }),
                ChenPath::Periodic(p) if p.first() == edge => Step::To(ChenPath::Periodic(p.tail())),
                _ => Step::Zero,
            },
            Generator::Letter(Letter { edge, dir: Dir::Ghost, .. }) => {
                if g.edge(edge).dst != q.source(g) {
                    return Step::Zero;
                }
                Step::To(match q {
                    ChenPath::Sink { edges, sink } => {
                        let mut es = vec![edge];
                        es.extend(edges);
                        ChenPath::Sink { edges: es, sink: *sink }
                    }
                    ChenPath::Periodic(p) => ChenPath::Periodic(p.prepend(edge)),
                })
            }
        }
    }

    fn basis_name(&self, b: &ChenPath) -> String {
        b.display(self.graph)
    }
}

/// A representation graph realising a Chen module, with the dictionary `γ`
/// sending each vertex to its path.
#[derive(Debug, Clone)]
pub struct ChenRep {
    pub graph: RepresentationGraph,
    /// `None` for spine vertices of an irrational truncation, whose path is
    /// only known up to the visible prefix.
    pub gamma: Vec<Option<ChenPath>>,
}

struct Builder {
    vertices: Vec<(String, usize)>,
    edges: Vec<RepEdge>,
    gamma: Vec<Option<ChenPath>>,
    frontier: BTreeSet<usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: vec![],
            edges: vec![],
            gamma: vec![],
            frontier: BTreeSet::new(),
        }
    }

    fn vertex(&mut self, id: String, image: usize, gamma: Option<ChenPath>) -> usize {
        self.vertices.push((id, image));
        self.gamma.push(gamma);
        self.vertices.len() - 1
    }

    fn edge(&mut self, id: String, src: usize, dst: usize, e: usize) {
        self.edges.push(RepEdge {
            id,
            src,
            dst,
            image: TaggedEdge { edge: e, tag: 1 },
        });
    }

    /// Side tree at spine vertex `root`: vertices `root_id:q` for paths `q`
    /// into `φ(root)` with `|q| ≤ depth` whose last letter is not `exclude`.
    fn side_tree(&mut self, g: &WeightedGraph, root: usize, root_id: &str, exclude: Option<usize>, depth: usize) {
        let img = self.vertices[root].1;
        if depth == 0 && g.in_edges(img).iter().any(|&e| exclude != Some(e)) {
            self.frontier.insert(root);
        }
        // (vertex, path q as edges) in BFS order
        let mut layer: Vec<(usize, Vec<usize>)> = vec![(root, vec![])];
        for len in 1..=depth {
            let mut next = Vec::new();
            for (at, q) in &layer {
                let s = if q.is_empty() { self.vertices[*at].1 } else { g.edge(q[0]).src };
                for &e in g.in_edges(s) {
                    if q.is_empty() && exclude == Some(e) {
                        continue;
                    }
                    let mut q2 = vec![e];
                    q2.extend(q);
                    let name = q2.iter().map(|&k| g.edge(k).id.as_str()).collect::<Vec<_>>().join(".");
                    let gamma = self.gamma[*at].as_ref().map(|p| prepend(g, p, e));
                    let v = self.vertex(format!("{root_id}:{name}"), g.edge(e).src, gamma);
                    self.edge(format!("f_{root_id}:{name}"), v, *at, e);
                    if len == depth && !g.in_edges(g.edge(e).src).is_empty() {
                        self.frontier.insert(v);
                    }
                    next.push((v, q2));
                }
            }
            layer = next;
        }
    }

    fn finish(self, g: &Arc<WeightedGraph>) -> Result<ChenRep, ChenError> {
        let graph = RepresentationGraph::from_indices(g.clone(), self.vertices, self.edges, self.frontier)?;
        Ok(ChenRep {
            graph,
            gamma: self.gamma,
        })
    }
}

fn prepend(g: &WeightedGraph, p: &ChenPath, e: usize) -> ChenPath {
    let m = ChenModule { graph: g };
    match m.step(p, Generator::Letter(TaggedEdge { edge: e, tag: 1 }.ghost())) {
        Step::To(q) => q,
        _ => unreachable!("side-tree edges end where the path starts"),
    }
}

/// The graph of the class of `c c c …` for a primitive closed path `c`.
pub fn rational_rep_graph(g: &Arc<WeightedGraph>, cycle: &[&str], depth: usize) -> Result<ChenRep, ChenError> {
    check_weight_one(g)?;
    let c = edge_ids(g, cycle)?;
    if c.is_empty() || smallest_period(&c) != c.len() {
        return Err(ChenError::NotSimpleCycle);
    }
    let n = c.len();
    let mut b = Builder::new();
    for i in 0..n {
        let rot: Vec<usize> = c[i..].iter().chain(&c[..i]).copied().collect();
        let p = EvPeriodicPath::new(g, vec![], rot)?;
        b.vertex(format!("v_{}", i + 1), g.edge(c[i]).src, Some(ChenPath::Periodic(p)));
    }
    for i in 0..n {
        b.edge(format!("f_{}", i + 1), i, (i + 1) % n, c[i]);
    }
    for i in 0..n {
        let prev = c[(i + n - 1) % n];
        b.side_tree(g, i, &format!("v_{}", i + 1), Some(prev), depth);
    }
    b.finish(g)
}

/// The graph of the module on finite paths into the sink `u`.
pub fn sink_rep_graph(g: &Arc<WeightedGraph>, sink: &str, depth: usize) -> Result<ChenRep, ChenError> {
    check_weight_one(g)?;
    let u = g.vertex(sink).ok_or_else(|| GraphError::UnknownVertex(sink.to_string()))?;
    if !g.is_sink(u) {
        return Err(ChenError::NotASink(sink.to_string()));
    }
    let mut b = Builder::new();
    b.vertex("v".into(), u, Some(ChenPath::Sink { edges: vec![], sink: u }));
    b.side_tree(g, 0, "v", None, depth);
    b.finish(g)
}

/// Truncation of the graph of an infinite path with the given prefix
/// `p_1 … p_m`: spine `v_1 … v_{m+1}` with side trees on `v_1 … v_m`; the
/// last spine vertex is frontier.
pub fn irrational_rep_graph(g: &Arc<WeightedGraph>, prefix: &[&str], depth: usize) -> Result<ChenRep, ChenError> {
    check_weight_one(g)?;
    let p = edge_ids(g, prefix)?;
    if !composable(g, &p) {
        return Err(GraphError::NotComposable(p.len()).into());
    }
    let mut b = Builder::new();
    if p.is_empty() {
        b.vertex("v_1".into(), 0, None);
        b.frontier.insert(0);
        return b.finish(g);
    }
    let m = p.len();
    for (i, &e) in p.iter().enumerate() {
        b.vertex(format!("v_{}", i + 1), g.edge(e).src, None);
    }
    b.vertex(format!("v_{}", m + 1), g.edge(p[m - 1]).dst, None);
    for (i, &e) in p.iter().enumerate() {
        b.edge(format!("f_{}", i + 1), i, i + 1, e);
    }
    b.frontier.insert(m);
    for i in 0..m {
        let exclude = if i == 0 { None } else { Some(p[i - 1]) };
        b.side_tree(g, i, &format!("v_{}", i + 1), exclude, depth);
    }
    b.finish(g)
}

/// Outcome of comparing the graph action with the path action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub checked: usize,
    pub skipped_truncated: usize,
    /// `(vertex, word)` pairs where the two actions disagree.
    pub mismatches: Vec<(String, String)>,
}

/// For every interior vertex `x` with known `γ(x)` and every composable word
/// of length `≤ budget` (plus each vertex idempotent), compares `x · w`
/// against `γ(x) · w` under `γ`. Words that reach the frontier are skipped.
pub fn chen_agreement_oracle(rep: &ChenRep, budget: usize) -> OracleReport {
    let f = &rep.graph;
    let g = f.base();
    let module = ChenModule { graph: g };
    let alphabet: Vec<Letter> = crate::graph::letters(g);
    let mut report = OracleReport {
        checked: 0,
        skipped_truncated: 0,
        mismatches: vec![],
    };
    let mut record = |x: usize, word: &[Generator], ours: Lift, theirs: Step<ChenPath>| {
        let agree = match (&ours, &theirs) {
            (Lift::Truncated, _) => {
                report.skipped_truncated += 1;
                return;
            }
            (Lift::To(y), Step::To(q)) => rep.gamma[*y].as_ref().map_or(true, |gy| gy == q),
            (Lift::Zero, Step::Zero) => true,
            _ => false,
        };
        report.checked += 1;
        if !agree {
            report.mismatches.push((
                f.vertex_id(x).to_string(),
                word.iter().map(|w| w.name(g)).collect::<Vec<_>>().join(" "),
            ));
        }
    };
    for x in f.interior_vertices() {
        let Some(gx) = rep.gamma[x].clone() else { continue };
        if budget > 0 {
            for v in 0..g.vertex_count() {
                let ours = if f.image(x) == v { Lift::To(x) } else { Lift::Zero };
                record(x, &[Generator::Vertex(v)], ours, module.step(&gx, Generator::Vertex(v)));
            }
        }
        // depth-first over letter words from x, tracking both sides
        let mut stack: Vec<(Vec<Generator>, usize, ChenPath)> = vec![(vec![], x, gx)];
        while let Some((word, at, q)) = stack.pop() {
            if word.len() == budget {
                continue;
            }
            for &l in &alphabet {
                if g.letter_source(&l) != f.image(at) {
                    continue;
                }
                let mut w2 = word.clone();
                w2.push(Generator::Letter(l));
                let ours = f.lift_step(at, l);
                let theirs = module.step(&q, Generator::Letter(l));
                record(x, &w2, ours, theirs.clone());
                if let (Lift::To(y), Step::To(q2)) = (ours, theirs) {
                    stack.push((w2, y, q2));
                }
            }
        }
    }
    report
}

/// A copy of `rep` with the dictionary entries of two vertices swapped.
pub fn swap_gamma(rep: &ChenRep, a: usize, b: usize) -> ChenRep {
    let mut out = rep.clone();
    out.gamma.swap(a, b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ev(prefix: &[&str], cycle: &[&str]) -> EvPeriodicPath {
        EvPeriodicPath::from_ids(&fixtures::three_loop_base(), prefix, cycle).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(ev(&["e"], &["f", "g", "e"]), ev(&[], &["e", "f", "g"]));
        assert_eq!(ev(&[], &["e", "f", "e", "f"]), ev(&[], &["e", "f"]));
        assert_ne!(ev(&["g"], &["e", "f", "g"]), ev(&[], &["e", "f", "g"]));
    }

    #[test]
    fn tail_equivalence() {
        assert!(tail_equivalent(&ev(&[], &["e", "f", "g"]), &ev(&["e"], &["f", "g", "e"])));
        assert!(!tail_equivalent(&ev(&[], &["e", "f", "g"]), &ev(&[], &["e", "f"])));
    }

    #[test]
    fn ghost_then_canonicalise() {
        let g = fixtures::three_loop_base();
        let m = ChenModule { graph: &g };
        let p = ChenPath::Periodic(ev(&[], &["e", "f", "g"]));
        let e_star = Generator::Letter(TaggedEdge { edge: 0, tag: 1 }.ghost());
        assert_eq!(m.step(&p, e_star), Step::To(ChenPath::Periodic(ev(&["e"], &["e", "f", "g"]))));
        let g_real = Generator::Letter(TaggedEdge { edge: 2, tag: 1 }.real());
        assert_eq!(m.step(&p, g_real), Step::Zero);
    }

    #[test]
    fn rational_depth_one_matches_fixture() {
        let r = rational_rep_graph(&fixtures::three_loop_base(), &["e", "f", "g"], 1).unwrap();
        assert_eq!(r.graph.vertex_count(), 9);
        assert!(crate::rep::find_isomorphism(&r.graph, &fixtures::wlpa4()).is_some());
        assert!(matches!(
            rational_rep_graph(&fixtures::three_loop_base(), &["e", "e"], 1),
            Err(ChenError::NotSimpleCycle)
        ));
    }

    #[test]
    fn single_loop_depth_zero() {
        let g = Arc::new(WeightedGraph::from_spec(&["v"], &[("e", "v", "v", 1)]).unwrap());
        let r = rational_rep_graph(&g, &["e"], 0).unwrap();
        assert_eq!((r.graph.vertex_count(), r.graph.edge_count()), (1, 1));
        assert!(r.graph.is_complete());
    }

    #[test]
    fn sink_example() {
        let r = sink_rep_graph(&fixtures::sink_base(), "u", 1).unwrap();
        assert_eq!(r.graph.vertex_ids(), &["v".to_string(), "v:a".to_string()]);
        let va = r.graph.vertex("v:a").unwrap();
        assert_eq!(r.graph.lift_step(va, TaggedEdge { edge: 0, tag: 1 }.real()), Lift::To(0));
        assert!(r.graph.is_complete());
    }

    #[test]
    fn irrational_shapes() {
        let g = fixtures::three_loop_base();
        let empty = irrational_rep_graph(&g, &[], 1).unwrap();
        assert_eq!(empty.graph.vertex_count(), 1);
        assert_eq!(empty.graph.frontier().len(), 1);
        let one = irrational_rep_graph(&g, &["e"], 0).unwrap();
        assert_eq!((one.graph.vertex_count(), one.graph.edge_count()), (2, 1));
    }
}
