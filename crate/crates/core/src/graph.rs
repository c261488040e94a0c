//! Weighted graphs, the tagged graph `Ê`, double-graph letters, path words,
//! length vectors, coverings/immersions and truncated universal covers.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::GraphError;

/// A directed edge with a positive weight; endpoints are vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub weight: u32,
}

/// A finite weighted graph. Vertex and edge order is the insertion order and
/// is the canonical order used by every enumeration in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl WeightedGraph {
    /// Builds a graph from vertex ids and `(id, src, dst, weight)` records.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String, u32)>,
    {
        let mut g = WeightedGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
            out: Vec::new(),
            inc: Vec::new(),
        };
        for v in vertices {
            let v: String = v.into();
            if g.vertex_index.contains_key(&v) {
                return Err(GraphError::DuplicateVertex(v));
            }
            g.vertex_index.insert(v.clone(), g.vertices.len());
            g.vertices.push(v);
            g.out.push(Vec::new());
            g.inc.push(Vec::new());
        }
        for (id, src, dst, weight) in edges {
            if g.edge_index.contains_key(&id) {
                return Err(GraphError::DuplicateEdge(id));
            }
            if weight == 0 {
                return Err(GraphError::ZeroWeight(id));
            }
            let s = *g
                .vertex_index
                .get(&src)
                .ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: id.clone(),
                    vertex: src.clone(),
                })?;
            let d = *g
                .vertex_index
                .get(&dst)
                .ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: id.clone(),
                    vertex: dst.clone(),
                })?;
            let k = g.edges.len();
            g.edge_index.insert(id.clone(), k);
            g.out[s].push(k);
            g.inc[d].push(k);
            g.edges.push(Edge {
                id,
                src: s,
                dst: d,
                weight,
            });
        }
        Ok(g)
    }

    /// Convenience constructor from string slices.
    pub fn from_spec(vertices: &[&str], edges: &[(&str, &str, &str, u32)]) -> Result<Self, GraphError> {
        WeightedGraph::new(
            vertices.iter().map(|s| s.to_string()),
            edges
                .iter()
                .map(|(i, s, d, w)| (i.to_string(), s.to_string(), d.to_string(), *w)),
        )
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

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out[v].is_empty()
    }

    /// `w(v)`: the largest weight emitted by `v`, or 0 for a sink.
    pub fn vertex_weight(&self, v: usize) -> u32 {
        self.out[v]
            .iter()
            .map(|&k| self.edges[k].weight)
            .max()
            .unwrap_or(0)
    }

    /// `n = max w(e)`, the rank of the length lattice (0 for an edgeless graph).
    pub fn max_weight(&self) -> usize {
        self.edges.iter().map(|e| e.weight as usize).max().unwrap_or(0)
    }

    pub fn is_weight_one(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1)
    }

    /// Connectivity of the underlying undirected graph. The empty graph counts
    /// as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &k in self.out[v].iter().chain(self.inc[v].iter()) {
                let e = &self.edges[k];
                for w in [e.src, e.dst] {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        count == self.vertices.len()
    }

    /// Display form of a letter, e.g. `e[1]` or `e[1]*`.
    pub fn letter_name(&self, l: &Letter) -> String {
        let star = if l.dir == Dir::Ghost { "*" } else { "" };
        format!("{}[{}]{}", self.edges[l.edge].id, l.tag, star)
    }

    /// Concatenated display form of a letter sequence.
    pub fn word_name(&self, letters: &[Letter]) -> String {
        letters.iter().map(|l| self.letter_name(l)).collect()
    }

    /// Source of a letter in the double graph of `Ê`.
    pub fn letter_source(&self, l: &Letter) -> usize {
        let e = &self.edges[l.edge];
        match l.dir {
            Dir::Real => e.src,
            Dir::Ghost => e.dst,
        }
    }

    pub fn letter_target(&self, l: &Letter) -> usize {
        let e = &self.edges[l.edge];
        match l.dir {
            Dir::Real => e.dst,
            Dir::Ghost => e.src,
        }
    }
}

/// A tagged copy `e_i` of an edge `e`. Ordered by (edge order, tag).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedEdge {
    /// Index of the structure edge `st(e_i) = e`.
    pub edge: usize,
    pub tag: u32,
}

impl TaggedEdge {
    pub fn real(self) -> Letter {
        Letter {
            edge: self.edge,
            tag: self.tag,
            dir: Dir::Real,
        }
    }

    pub fn ghost(self) -> Letter {
        Letter {
            edge: self.edge,
            tag: self.tag,
            dir: Dir::Ghost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Real,
    Ghost,
}

/// A letter of the double graph: `e_i` or its ghost `e_i^*`.
/// The derived order is (structure edge, tag, Real before Ghost).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub edge: usize,
    pub tag: u32,
    pub dir: Dir,
}

impl Letter {
    pub fn tagged(self) -> TaggedEdge {
        TaggedEdge {
            edge: self.edge,
            tag: self.tag,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            dir: match self.dir {
                Dir::Real => Dir::Ghost,
                Dir::Ghost => Dir::Real,
            },
            ..self
        }
    }

    pub fn is_real(self) -> bool {
        self.dir == Dir::Real
    }
}

/// `Ê^1` in canonical order: edge order, then tag.
pub fn build_hat_graph(g: &WeightedGraph) -> Vec<TaggedEdge> {
    g.edges
        .iter()
        .enumerate()
        .flat_map(|(k, e)| (1..=e.weight).map(move |tag| TaggedEdge { edge: k, tag }))
        .collect()
}

/// `Ê` as a weight-one graph with edge ids `e[i]`. Edge `k` of the result is
/// element `k` of [`build_hat_graph`].
pub fn hat_graph(g: &WeightedGraph) -> WeightedGraph {
    let edges = build_hat_graph(g)
        .into_iter()
        .map(|t| {
            let e = g.edge(t.edge);
            (
                format!("{}[{}]", e.id, t.tag),
                g.vertex_id(e.src).to_string(),
                g.vertex_id(e.dst).to_string(),
                1,
            )
        })
        .collect::<Vec<_>>();
    WeightedGraph::new(g.vertex_ids().iter().cloned(), edges).expect("hat graph of a valid graph is valid")
}

/// The alphabet of `Ê_d` in canonical order.
pub fn letters(g: &WeightedGraph) -> Vec<Letter> {
    build_hat_graph(g)
        .into_iter()
        .flat_map(|t| [t.real(), t.ghost()])
        .collect()
}

/// A composable word in `Ê_d` starting at an `E`-vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub source: usize,
    pub letters: Vec<Letter>,
}

impl PathWord {
    pub fn trivial(v: usize) -> Self {
        PathWord {
            source: v,
            letters: Vec::new(),
        }
    }

    /// Checks composability in the double graph.
    pub fn new(g: &WeightedGraph, source: usize, letters: Vec<Letter>) -> Result<Self, GraphError> {
        let mut at = source;
        for (k, l) in letters.iter().enumerate() {
            if l.tag == 0 || l.tag > g.edge(l.edge).weight || g.letter_source(l) != at {
                return Err(GraphError::NotComposable(k));
            }
            at = g.letter_target(l);
        }
        Ok(PathWord { source, letters })
    }

    /// Builds a word from its letters; the source is the first letter's source.
    pub fn from_letters(g: &WeightedGraph, letters: Vec<Letter>) -> Result<Self, GraphError> {
        let source = letters
            .first()
            .map(|l| g.letter_source(l))
            .ok_or(GraphError::NotComposable(0))?;
        PathWord::new(g, source, letters)
    }

    pub fn target(&self, g: &WeightedGraph) -> usize {
        self.letters
            .last()
            .map(|l| g.letter_target(l))
            .unwrap_or(self.source)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// No adjacent pair `e_i e_i^*` or `e_i^* e_i`.
    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[1] != w[0].inverse())
    }

    /// `p^*`: reversed word of inverse letters.
    pub fn reverse(&self, g: &WeightedGraph) -> PathWord {
        PathWord {
            source: self.target(g),
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation; `None` when `r(self) != s(other)`.
    pub fn concat(&self, g: &WeightedGraph, other: &PathWord) -> Option<PathWord> {
        if self.target(g) != other.source {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Some(PathWord {
            source: self.source,
            letters,
        })
    }

    /// `|p| ∈ Z^n`.
    pub fn length_vector(&self, g: &WeightedGraph) -> DegreeVector {
        let n = g.max_weight();
        self.letters
            .iter()
            .fold(DegreeVector::zero(n), |acc, l| acc + DegreeVector::of_letter(n, l))
    }

    pub fn display(&self, g: &WeightedGraph) -> String {
        if self.letters.is_empty() {
            g.vertex_id(self.source).to_string()
        } else {
            g.word_name(&self.letters)
        }
    }
}

pub fn is_reduced(p: &PathWord) -> bool {
    p.is_reduced()
}

pub fn length_vector(g: &WeightedGraph, p: &PathWord) -> DegreeVector {
    p.length_vector(g)
}

/// An element of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn zero(n: usize) -> Self {
        DegreeVector(vec![0; n])
    }

    /// Unit vector in component `tag` (1-based).
    pub fn unit(n: usize, tag: u32) -> Self {
        let mut v = vec![0; n];
        v[tag as usize - 1] = 1;
        DegreeVector(v)
    }

    pub fn of_letter(n: usize, l: &Letter) -> Self {
        let u = DegreeVector::unit(n, l.tag);
        match l.dir {
            Dir::Real => u,
            Dir::Ghost => -u,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for DegreeVector {
    type Output = DegreeVector;
    fn add(self, rhs: DegreeVector) -> DegreeVector {
        DegreeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for DegreeVector {
    type Output = DegreeVector;
    fn sub(self, rhs: DegreeVector) -> DegreeVector {
        self + (-rhs)
    }
}

impl Neg for DegreeVector {
    type Output = DegreeVector;
    fn neg(self) -> DegreeVector {
        DegreeVector(self.0.into_iter().map(|x| -x).collect())
    }
}

/// A graph homomorphism given by vertex and edge index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl GraphMorphism {
    pub fn identity(g: &WeightedGraph) -> Self {
        GraphMorphism {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).collect(),
        }
    }
}

/// Checks that `m` respects sources, ranges and weights.
pub fn check_homomorphism(f: &WeightedGraph, g: &WeightedGraph, m: &GraphMorphism) -> Result<(), GraphError> {
    let bad = |s: String| Err(GraphError::MalformedHomomorphism(s));
    if m.vertex_map.len() != f.vertex_count() || m.edge_map.len() != f.edge_count() {
        return bad("map sizes do not match the source graph".into());
    }
    if let Some(&v) = m.vertex_map.iter().find(|&&v| v >= g.vertex_count()) {
        return bad(format!("vertex index {v} out of range"));
    }
    for (k, e) in f.edges().iter().enumerate() {
        let t = m.edge_map[k];
        if t >= g.edge_count() {
            return bad(format!("edge `{}` maps out of range", e.id));
        }
        let te = g.edge(t);
        if m.vertex_map[e.src] != te.src || m.vertex_map[e.dst] != te.dst {
            return bad(format!("edge `{}` endpoints not preserved", e.id));
        }
        if e.weight != te.weight {
            return bad(format!("edge `{}` weight not preserved", e.id));
        }
    }
    Ok(())
}

/// Covering test. Vertices in `f_frontier` (or mapping into `g_frontier`) have
/// incomplete fibers and are checked for injectivity only; surjectivity is
/// required onto interior vertices of `g` and onto edges touching them.
pub fn is_covering(
    f: &WeightedGraph,
    f_frontier: &BTreeSet<usize>,
    g: &WeightedGraph,
    g_frontier: &BTreeSet<usize>,
    m: &GraphMorphism,
) -> Result<bool, GraphError> {
    check_homomorphism(f, g, m)?;
    let mut hit_v = vec![false; g.vertex_count()];
    let mut hit_e = vec![false; g.edge_count()];
    for &v in &m.vertex_map {
        hit_v[v] = true;
    }
    for &k in &m.edge_map {
        hit_e[k] = true;
    }
    for v in 0..g.vertex_count() {
        if !g_frontier.contains(&v) && !hit_v[v] {
            return Ok(false);
        }
    }
    for (k, e) in g.edges().iter().enumerate() {
        let touches_interior = !g_frontier.contains(&e.src) || !g_frontier.contains(&e.dst);
        if touches_interior && !hit_e[k] {
            return Ok(false);
        }
    }
    for v in 0..f.vertex_count() {
        let image = m.vertex_map[v];
        let complete = !f_frontier.contains(&v) && !g_frontier.contains(&image);
        for (fiber, target) in [(f.out_edges(v), g.out_edges(image)), (f.in_edges(v), g.in_edges(image))] {
            let mut images: Vec<usize> = fiber.iter().map(|&k| m.edge_map[k]).collect();
            images.sort_unstable();
            let before = images.len();
            images.dedup();
            if images.len() != before {
                return Ok(false);
            }
            if complete && images.len() != target.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Immersion test: injective on every source fiber.
pub fn is_immersion(f: &WeightedGraph, g: &WeightedGraph, m: &GraphMorphism) -> Result<bool, GraphError> {
    check_homomorphism(f, g, m)?;
    for v in 0..f.vertex_count() {
        let mut images: Vec<usize> = f.out_edges(v).iter().map(|&k| m.edge_map[k]).collect();
        images.sort_unstable();
        let before = images.len();
        images.dedup();
        if images.len() != before {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which double alphabet a universal cover is built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverAlphabet {
    /// Letters `e`, `e^*` of `E_d`; the tree projects onto `E`.
    Structure,
    /// Letters `e_i`, `e_i^*` of `Ê_d`; the tree projects onto `Ê`.
    Tagged,
}

/// Depth truncation of a universal covering tree.
#[derive(Debug, Clone)]
pub struct UniversalCover {
    pub tree: WeightedGraph,
    /// Vertices at exactly the truncation depth.
    pub frontier: BTreeSet<usize>,
    pub root: usize,
    /// Projection onto `E` (Structure) or onto [`hat_graph`] (Tagged).
    pub projection: GraphMorphism,
    pub alphabet: CoverAlphabet,
}

/// Tree of reduced words from `base` of length at most `depth`; vertex ids are
/// the words, the root is named after `base`.
pub fn universal_cover(
    g: &WeightedGraph,
    base: usize,
    depth: usize,
    alphabet: CoverAlphabet,
) -> Result<UniversalCover, GraphError> {
    if base >= g.vertex_count() {
        return Err(GraphError::UnknownVertex(base.to_string()));
    }
    if !g.is_connected() {
        return Err(GraphError::DisconnectedGraph);
    }
    // Letters as (target-graph edge index, direction); for Tagged the target is Ê.
    let target = match alphabet {
        CoverAlphabet::Structure => g.clone(),
        CoverAlphabet::Tagged => hat_graph(g),
    };
    let alpha: Vec<(usize, Dir)> = (0..target.edge_count())
        .flat_map(|k| [(k, Dir::Real), (k, Dir::Ghost)])
        .collect();
    let name = |k: usize, d: Dir| -> String {
        // Ê edge ids already carry the tag, e.g. `e[2]`.
        let base_name = target.edge(k).id.clone();
        match d {
            Dir::Real => base_name,
            Dir::Ghost => format!("{base_name}*"),
        }
    };

    let mut ids = vec![g.vertex_id(base).to_string()];
    let mut at = vec![base];
    let mut last: Vec<Option<(usize, Dir)>> = vec![None];
    let mut level = vec![0usize];
    let mut edges: Vec<(String, String, String, u32)> = Vec::new();
    let mut vmap = vec![base];
    let mut emap = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        if level[t] == depth {
            continue;
        }
        for &(k, d) in &alpha {
            let e = target.edge(k);
            let (from, to) = match d {
                Dir::Real => (e.src, e.dst),
                Dir::Ghost => (e.dst, e.src),
            };
            if from != at[t] {
                continue;
            }
            let inverse = (k, if d == Dir::Real { Dir::Ghost } else { Dir::Real });
            if last[t] == Some(inverse) {
                continue;
            }
            let word = if level[t] == 0 {
                name(k, d)
            } else {
                format!("{}{}", ids[t], name(k, d))
            };
            let child = ids.len();
            ids.push(word.clone());
            at.push(to);
            last.push(Some((k, d)));
            level.push(level[t] + 1);
            vmap.push(to);
            let (s, r) = match d {
                Dir::Real => (ids[t].clone(), word.clone()),
                Dir::Ghost => (word.clone(), ids[t].clone()),
            };
            edges.push((format!("~{word}"), s, r, e.weight));
            emap.push(k);
            queue.push_back(child);
        }
    }
    let frontier = (0..ids.len()).filter(|&t| level[t] == depth).collect();
    let tree = WeightedGraph::new(ids, edges)?;
    Ok(UniversalCover {
        tree,
        frontier,
        root: 0,
        projection: GraphMorphism {
            vertex_map: vmap,
            edge_map: emap,
        },
        alphabet,
    })
}
