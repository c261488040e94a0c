//! Representation graphs `(F, φ: F → Ê)`: construction, validation against the
//! two lifting axioms, and unique path lifting.
//!
//! Infinite graphs are carried as truncations: a set of frontier vertices whose
//! incident edges may be incomplete. Axioms are enforced exactly at interior
//! vertices; at frontier vertices only determinism is enforced.

mod morphism;
mod refine;
mod universal;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Axiom, AxiomWitness, RepError, Violation, ViolationKind};
use crate::error::GraphError;
use crate::graph::{Dir, Letter, TaggedEdge, WeightedGraph};

pub use morphism::{find_isomorphism, is_quotient_of, QuotientSearch, RepMorphism};
pub use refine::{
    are_equivalent, are_equivalent_at, irreducibility, is_irreducible, minimize, quotient, separation,
    similarity_partition, Equivalence, Irreducibility, Separation, VertexPartition,
};
pub use universal::{universal_representation, TruncatedUniversalRep};

/// An edge of `F` with its image `φ(f) ∈ Ê^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepEdge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub image: TaggedEdge,
}

/// Result of moving a basis vertex along one letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lift {
    To(usize),
    Zero,
    /// The answer depends on edges beyond the truncation frontier.
    Truncated,
}

/// Like [`Lift`] but names the traversed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLift {
    Edge(usize),
    Zero,
    Truncated,
}

#[derive(Debug, Clone)]
pub struct RepresentationGraph {
    base: Arc<WeightedGraph>,
    vertices: Vec<String>,
    image: Vec<usize>,
    edges: Vec<RepEdge>,
    frontier: BTreeSet<usize>,
    vertex_index: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl RepresentationGraph {
    /// Builds a graph from ids: vertices `(id, image vertex)`, edges
    /// `(id, src, dst, structure edge, tag)`, and frontier vertex ids.
    /// Checks well-formedness and that `φ` is a homomorphism; the lifting
    /// axioms are checked separately by [`RepresentationGraph::validate`].
    pub fn new(
        base: Arc<WeightedGraph>,
        vertices: Vec<(String, String)>,
        edges: Vec<(String, String, String, String, u32)>,
        frontier: Vec<String>,
    ) -> Result<Self, RepError> {
        let mut vs = Vec::with_capacity(vertices.len());
        for (id, img) in vertices {
            let i = base.vertex(&img).ok_or(GraphError::UnknownVertex(img))?;
            vs.push((id, i));
        }
        let index: HashMap<&str, usize> = vs.iter().enumerate().map(|(k, (id, _))| (id.as_str(), k)).collect();
        let lookup = |edge: &str, v: &str| -> Result<usize, RepError> {
            index.get(v).copied().ok_or_else(|| {
                GraphError::DanglingEndpoint {
                    edge: edge.to_string(),
                    vertex: v.to_string(),
                }
                .into()
            })
        };
        let mut es = Vec::with_capacity(edges.len());
        for (id, s, d, e, tag) in edges {
            let src = lookup(&id, &s)?;
            let dst = lookup(&id, &d)?;
            let edge = base.edge_by_id(&e).ok_or(GraphError::UnknownEdge(e))?;
            es.push(RepEdge {
                id,
                src,
                dst,
                image: TaggedEdge { edge, tag },
            });
        }
        let mut fr = BTreeSet::new();
        for f in frontier {
            fr.insert(index.get(f.as_str()).copied().ok_or(GraphError::UnknownVertex(f))?);
        }
        RepresentationGraph::from_indices(base, vs, es, fr)
    }

    /// Index-based constructor used by the generators in this crate.
    pub fn from_indices(
        base: Arc<WeightedGraph>,
        vertices: Vec<(String, usize)>,
        edges: Vec<RepEdge>,
        frontier: BTreeSet<usize>,
    ) -> Result<Self, RepError> {
        let n = vertices.len();
        let mut vertex_index = HashMap::with_capacity(n);
        let mut ids = Vec::with_capacity(n);
        let mut image = Vec::with_capacity(n);
        for (id, img) in vertices {
            if img >= base.vertex_count() {
                return Err(GraphError::UnknownVertex(img.to_string()).into());
            }
            if vertex_index.insert(id.clone(), ids.len()).is_some() {
                return Err(GraphError::DuplicateVertex(id).into());
            }
            ids.push(id);
            image.push(img);
        }
        let mut seen_edges = BTreeSet::new();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (k, f) in edges.iter().enumerate() {
            if !seen_edges.insert(f.id.as_str()) {
                return Err(GraphError::DuplicateEdge(f.id.clone()).into());
            }
            if f.src >= n || f.dst >= n {
                return Err(GraphError::DanglingEndpoint {
                    edge: f.id.clone(),
                    vertex: f.src.max(f.dst).to_string(),
                }
                .into());
            }
            if f.image.edge >= base.edge_count() {
                return Err(GraphError::UnknownEdge(f.image.edge.to_string()).into());
            }
            let e = base.edge(f.image.edge);
            if f.image.tag == 0 || f.image.tag > e.weight {
                return Err(RepError::TagOutOfRange {
                    edge: f.id.clone(),
                    tag: f.image.tag,
                    weight: e.weight,
                });
            }
            if image[f.src] != e.src || image[f.dst] != e.dst {
                return Err(RepError::NotHomomorphism {
                    edge: f.id.clone(),
                    detail: format!(
                        "endpoints map to ({}, {}) but `{}` runs {} -> {}",
                        base.vertex_id(image[f.src]),
                        base.vertex_id(image[f.dst]),
                        e.id,
                        base.vertex_id(e.src),
                        base.vertex_id(e.dst)
                    ),
                });
            }
            out[f.src].push(k);
            inc[f.dst].push(k);
        }
        if let Some(&bad) = frontier.iter().find(|&&v| v >= n) {
            return Err(GraphError::UnknownVertex(bad.to_string()).into());
        }
        Ok(RepresentationGraph {
            base,
            vertices: ids,
            image,
            edges,
            frontier,
            vertex_index,
            out,
            inc,
        })
    }

    pub fn base(&self) -> &WeightedGraph {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<WeightedGraph> {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    /// `φ^0(v)`.
    pub fn image(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn edges(&self) -> &[RepEdge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &RepEdge {
        &self.edges[k]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn frontier(&self) -> &BTreeSet<usize> {
        &self.frontier
    }

    pub fn is_frontier(&self, v: usize) -> bool {
        self.frontier.contains(&v)
    }

    /// True when the graph carries no truncation frontier.
    pub fn is_complete(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|v| !self.frontier.contains(v))
    }

    /// Display form of a letter over the base graph.
    pub fn letter_name(&self, l: &Letter) -> String {
        self.base.letter_name(l)
    }

    /// Checks the two lifting axioms and reports the first failure in vertex
    /// order (Axiom 1 before Axiom 2 at each vertex).
    pub fn validate(&self) -> Result<(), Violation> {
        for v in 0..self.vertices.len() {
            let interior = !self.frontier.contains(&v);
            let img = self.image[v];
            for tag in 1..=self.base.vertex_weight(img) {
                let count = self.out[v]
                    .iter()
                    .filter(|&&k| self.edges[k].image.tag == tag)
                    .count();
                if let Some(kind) = fault(count, interior) {
                    return Err(Violation {
                        axiom: Axiom::Emit,
                        vertex: self.vertices[v].clone(),
                        witness: AxiomWitness::Tag(tag),
                        kind,
                    });
                }
            }
            for &e in self.base.in_edges(img) {
                let count = self.inc[v]
                    .iter()
                    .filter(|&&k| self.edges[k].image.edge == e)
                    .count();
                if let Some(kind) = fault(count, interior) {
                    return Err(Violation {
                        axiom: Axiom::Receive,
                        vertex: self.vertices[v].clone(),
                        witness: AxiomWitness::Structure(self.base.edge(e).id.clone()),
                        kind,
                    });
                }
            }
        }
        Ok(())
    }

    /// The edge traversed when moving `u` along `l`, if determined.
    pub fn lift_edge(&self, u: usize, l: Letter) -> EdgeLift {
        if self.base.letter_source(&l) != self.image[u] {
            return EdgeLift::Zero;
        }
        let found = match l.dir {
            Dir::Real => self.out[u]
                .iter()
                .find(|&&k| self.edges[k].image.tag == l.tag)
                .map(|&k| (k, self.edges[k].image.edge == l.edge)),
            Dir::Ghost => self.inc[u]
                .iter()
                .find(|&&k| self.edges[k].image.edge == l.edge)
                .map(|&k| (k, self.edges[k].image.tag == l.tag)),
        };
        match found {
            Some((k, true)) => EdgeLift::Edge(k),
            Some((_, false)) => EdgeLift::Zero,
            None if self.frontier.contains(&u) => EdgeLift::Truncated,
            None => EdgeLift::Zero,
        }
    }

    /// `u · ℓ` for a single letter.
    pub fn lift_step(&self, u: usize, l: Letter) -> Lift {
        match self.lift_edge(u, l) {
            EdgeLift::Edge(k) => Lift::To(match l.dir {
                Dir::Real => self.edges[k].dst,
                Dir::Ghost => self.edges[k].src,
            }),
            EdgeLift::Zero => Lift::Zero,
            EdgeLift::Truncated => Lift::Truncated,
        }
    }

    /// `u · p` for a word; stops at the first zero or truncation.
    pub fn lift_word(&self, u: usize, letters: &[Letter]) -> Lift {
        let mut at = u;
        for &l in letters {
            match self.lift_step(at, l) {
                Lift::To(v) => at = v,
                other => return other,
            }
        }
        Lift::To(at)
    }

    /// Connectivity of the undirected underlying graph.
    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Component label per vertex (labels in order of first appearance).
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &k in self.out[v].iter().chain(&self.inc[v]) {
                    for w in [self.edges[k].src, self.edges[k].dst] {
                        if comp[w] == usize::MAX {
                            comp[w] = next;
                            queue.push_back(w);
                        }
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Undirected distance from each vertex to the nearest frontier vertex
    /// (`usize::MAX` when there is no frontier in its component).
    pub fn completeness(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &f in &self.frontier {
            dist[f] = 0;
            queue.push_back(f);
        }
        while let Some(v) = queue.pop_front() {
            for &k in self.out[v].iter().chain(&self.inc[v]) {
                for w in [self.edges[k].src, self.edges[k].dst] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// The underlying directed graph with unit weights and the same ids.
    pub fn underlying(&self) -> WeightedGraph {
        WeightedGraph::new(
            self.vertices.iter().cloned(),
            self.edges.iter().map(|f| {
                (
                    f.id.clone(),
                    self.vertices[f.src].clone(),
                    self.vertices[f.dst].clone(),
                    1,
                )
            }),
        )
        .expect("ids were checked at construction")
    }

    /// Relabels `φ` through a map of base graphs `ψ: E → E'` (vertex and edge
    /// index maps), keeping tags.
    pub fn relabel(
        &self,
        new_base: Arc<WeightedGraph>,
        vertex_map: &[usize],
        edge_map: &[usize],
    ) -> Result<RepresentationGraph, RepError> {
        let vertices = self
            .vertices
            .iter()
            .zip(&self.image)
            .map(|(id, &i)| (id.clone(), vertex_map[i]))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|f| RepEdge {
                image: TaggedEdge {
                    edge: edge_map[f.image.edge],
                    tag: f.image.tag,
                },
                ..f.clone()
            })
            .collect();
        RepresentationGraph::from_indices(new_base, vertices, edges, self.frontier.clone())
    }

    /// A copy with a different frontier set.
    pub fn with_frontier(&self, frontier: BTreeSet<usize>) -> RepresentationGraph {
        RepresentationGraph {
            frontier,
            ..self.clone()
        }
    }

    /// A copy without the edge at index `k` (for negative controls).
    pub fn without_edge(&self, k: usize) -> Result<RepresentationGraph, RepError> {
        let mut edges = self.edges.clone();
        edges.remove(k);
        RepresentationGraph::from_indices(
            self.base.clone(),
            self.vertices.iter().cloned().zip(self.image.iter().copied()).collect(),
            edges,
            self.frontier.clone(),
        )
    }

    /// A copy where edge `k` carries a different image. Endpoint images are
    /// not re-checked, so the result may fail to be a homomorphism; callers
    /// are expected to run [`RepresentationGraph::validate`] or
    /// [`RepresentationGraph::is_homomorphism`].
    pub fn with_edge_image(&self, k: usize, image: TaggedEdge) -> RepresentationGraph {
        let mut g = self.clone();
        g.edges[k].image = image;
        g
    }

    /// Whether every edge image matches its endpoint images.
    pub fn is_homomorphism(&self) -> bool {
        self.edges.iter().all(|f| {
            let e = self.base.edge(f.image.edge);
            self.image[f.src] == e.src && self.image[f.dst] == e.dst
        })
    }
}

fn fault(count: usize, interior: bool) -> Option<ViolationKind> {
    match count {
        0 if interior => Some(ViolationKind::Missing),
        0 | 1 => None,
        _ => Some(ViolationKind::Duplicated),
    }
}

/// Free-function form of [`RepresentationGraph::validate`].
pub fn validate(f: &RepresentationGraph) -> Result<(), Violation> {
    f.validate()
}

/// Free-function form of [`RepresentationGraph::lift_step`].
pub fn lift_step(f: &RepresentationGraph, u: usize, l: Letter) -> Lift {
    f.lift_step(u, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn f7_validates_and_breaks_without_f2_loop() {
        let f7 = fixtures::f7();
        assert!(f7.validate().is_ok());
        let h = f7.edges().iter().position(|f| f.image.tag == 2).unwrap();
        let broken = f7.without_edge(h).unwrap();
        let v = broken.validate().unwrap_err();
        assert_eq!(v.axiom, Axiom::Emit);
        assert_eq!(v.witness, AxiomWitness::Tag(2));
        assert_eq!(v.kind, ViolationKind::Missing);
    }

    #[test]
    fn homomorphism_enforced() {
        let base = Arc::new(WeightedGraph::from_spec(&["u", "v"], &[("e", "u", "v", 1)]).unwrap());
        let err = RepresentationGraph::new(
            base,
            vec![("a".into(), "u".into()), ("b".into(), "u".into())],
            vec![("x".into(), "a".into(), "b".into(), "e".into(), 1)],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, RepError::NotHomomorphism { .. }));
    }

    #[test]
    fn lift_on_foreign_structure_is_zero() {
        let g = fixtures::excat11_f();
        let u1 = g.vertex("u_1").unwrap();
        // a letter whose source in E is v, not u
        let e1_ghost = TaggedEdge { edge: 0, tag: 1 }.ghost();
        assert_eq!(g.lift_step(u1, e1_ghost), Lift::Zero);
    }
}
