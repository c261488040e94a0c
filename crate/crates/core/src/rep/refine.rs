//! The similarity relation `~` as automaton state equivalence, quotients by
//! admissible partitions, minimization, and `⇌`-equivalence.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::RepError;
use crate::graph::{letters, Letter};

use super::{Lift, RepEdge, RepresentationGraph};

/// A partition of `F^0`. Blocks are sorted and ordered by their least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl VertexPartition {
    /// Builds a partition from blocks; every index in `0..n` must occur once.
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, RepError> {
        let mut block_of = vec![usize::MAX; n];
        for b in blocks.iter_mut() {
            b.sort_unstable();
            b.dedup();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                if v >= n {
                    return Err(RepError::BadPartition(format!("index {v} out of range")));
                }
                if block_of[v] != usize::MAX {
                    return Err(RepError::BadPartition(format!("vertex {v} in two blocks")));
                }
                block_of[v] = i;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(RepError::BadPartition(format!("vertex {v} in no block")));
        }
        Ok(VertexPartition { blocks, block_of })
    }

    /// Partition from a block label per vertex.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: HashMap<usize, Vec<usize>> = HashMap::new();
        for (v, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(v);
        }
        VertexPartition::from_blocks(labels.len(), by_label.into_values().collect())
            .expect("labels cover every vertex")
    }

    /// Partition from blocks of vertex ids.
    pub fn from_ids(f: &RepresentationGraph, blocks: &[Vec<String>]) -> Result<Self, RepError> {
        let mut idx = Vec::with_capacity(blocks.len());
        let mut seen = BTreeSet::new();
        for b in blocks {
            let mut ib = Vec::with_capacity(b.len());
            for id in b {
                let v = f
                    .vertex(id)
                    .ok_or_else(|| RepError::BadPartition(format!("unknown vertex `{id}`")))?;
                seen.insert(v);
                ib.push(v);
            }
            idx.push(ib);
        }
        // unspecified vertices become singletons
        for v in 0..f.vertex_count() {
            if !seen.contains(&v) {
                idx.push(vec![v]);
            }
        }
        VertexPartition::from_blocks(f.vertex_count(), idx)
    }

    pub fn discrete(n: usize) -> Self {
        VertexPartition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// Deterministic partial automaton over the `Ê_d` alphabet, possibly the
/// disjoint union of two graphs over one base.
pub(crate) struct Automaton {
    pub images: Vec<usize>,
    pub alphabet: Vec<Letter>,
    /// `step[u][k]` is `u · alphabet[k]`.
    pub step: Vec<Vec<Lift>>,
}

impl Automaton {
    pub fn of(graphs: &[&RepresentationGraph]) -> Self {
        let alphabet = letters(graphs[0].base());
        let mut images = Vec::new();
        let mut step = Vec::new();
        let mut offset = 0;
        for g in graphs {
            for u in 0..g.vertex_count() {
                images.push(g.image(u));
                step.push(
                    alphabet
                        .iter()
                        .map(|&l| match g.lift_step(u, l) {
                            Lift::To(v) => Lift::To(v + offset),
                            other => other,
                        })
                        .collect(),
                );
            }
            offset += g.vertex_count();
        }
        Automaton { images, alphabet, step }
    }

    fn inverse_index(&self) -> Vec<usize> {
        self.alphabet
            .iter()
            .map(|l| self.alphabet.iter().position(|m| *m == l.inverse()).expect("alphabet closed under inverse"))
            .collect()
    }

    /// Moore refinement. Round 0 separates by image and the set of defined
    /// letters; after round `r` equal labels mean equal languages up to word
    /// length `r + 1`. `rounds = None` runs to the fixpoint.
    pub fn moore(&self, rounds: Option<usize>) -> Vec<usize> {
        let code0 = |s: &Lift| match s {
            Lift::To(_) => 1i64,
            Lift::Zero => 0,
            Lift::Truncated => 2,
        };
        let mut label = renumber(
            (0..self.images.len())
                .map(|u| {
                    let mut key = vec![self.images[u] as i64];
                    key.extend(self.step[u].iter().map(code0));
                    key
                })
                .collect(),
        );
        let mut count = distinct(&label);
        let mut round = 0;
        loop {
            if rounds.is_some_and(|r| round >= r) {
                break;
            }
            let next = renumber(
                (0..self.images.len())
                    .map(|u| {
                        let mut key = vec![label[u] as i64];
                        key.extend(self.step[u].iter().map(|s| match s {
                            Lift::To(v) => label[*v] as i64,
                            Lift::Zero => -1,
                            Lift::Truncated => -2,
                        }));
                        key
                    })
                    .collect(),
            );
            round += 1;
            let c = distinct(&next);
            label = next;
            if c == count && rounds.is_none() {
                break;
            }
            count = c;
        }
        label
    }

    /// Pairs `(u, w)` for which some word is defined at one and provably
    /// zero at the other. Symmetric `n × n` table.
    pub fn certain_separation(&self) -> Vec<bool> {
        let n = self.images.len();
        let inv = self.inverse_index();
        let mut sep = vec![false; n * n];
        let mut queue = VecDeque::new();
        for u in 0..n {
            for w in (u + 1)..n {
                let base = self.images[u] != self.images[w]
                    || self.step[u].iter().zip(&self.step[w]).any(|(a, b)| {
                        matches!((a, b), (Lift::To(_), Lift::Zero) | (Lift::Zero, Lift::To(_)))
                    });
                if base {
                    sep[u * n + w] = true;
                    sep[w * n + u] = true;
                    queue.push_back((u, w));
                }
            }
        }
        while let Some((a, b)) = queue.pop_front() {
            for (k, &ik) in inv.iter().enumerate() {
                let _ = k;
                if let (Lift::To(x), Lift::To(y)) = (self.step[a][ik], self.step[b][ik]) {
                    if x != y && !sep[x * n + y] {
                        sep[x * n + y] = true;
                        sep[y * n + x] = true;
                        queue.push_back((x, y));
                    }
                }
            }
        }
        sep
    }
}

fn renumber(keys: Vec<Vec<i64>>) -> Vec<usize> {
    let mut ids: HashMap<Vec<i64>, usize> = HashMap::new();
    keys.into_iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect()
}

fn distinct(labels: &[usize]) -> usize {
    labels.iter().collect::<BTreeSet<_>>().len()
}

/// Pairwise certain-separation data of one graph.
#[derive(Debug, Clone)]
pub struct Separation {
    n: usize,
    sep: Vec<bool>,
}

impl Separation {
    pub fn separated(&self, u: usize, w: usize) -> bool {
        u == w || self.sep[u * self.n + w]
    }

    /// Unseparated pairs `u < w` among the given vertices.
    pub fn unseparated_among(&self, vs: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &u) in vs.iter().enumerate() {
            for &w in &vs[i + 1..] {
                if !self.separated(u, w) {
                    out.push((u, w));
                }
            }
        }
        out
    }
}

/// Certain separation on `F` (exactly the complement of `~` on complete graphs).
pub fn separation(f: &RepresentationGraph) -> Separation {
    let a = Automaton::of(&[f]);
    Separation {
        n: f.vertex_count(),
        sep: a.certain_separation(),
    }
}

/// The similarity partition. On complete graphs this is Moore refinement to
/// the fixpoint. On truncations, vertices are grouped by the transitive
/// closure of "not certainly separated", the coarsest grouping consistent
/// with the visible data.
pub fn similarity_partition(f: &RepresentationGraph) -> VertexPartition {
    if f.is_complete() {
        return VertexPartition::from_labels(&Automaton::of(&[f]).moore(None));
    }
    let s = separation(f);
    let n = f.vertex_count();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while l[r] != r {
            r = l[r];
        }
        let mut y = x;
        while l[y] != r {
            let nx = l[y];
            l[y] = r;
            y = nx;
        }
        r
    }
    for u in 0..n {
        for w in (u + 1)..n {
            if !s.separated(u, w) {
                let (a, b) = (find(&mut label, u), find(&mut label, w));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut label, v)).collect();
    VertexPartition::from_labels(&roots)
}

/// Verdict on irreducibility (connected and `~` trivial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Disconnected,
    /// Complete graph with two similar vertices.
    Reducible { pair: (String, String) },
    /// Truncation where some interior pair cannot be separated from the
    /// visible data.
    Undetermined {
        unseparated_pairs: usize,
        example: (String, String),
    },
}

pub fn irreducibility(f: &RepresentationGraph) -> Irreducibility {
    if !f.is_connected() {
        return Irreducibility::Disconnected;
    }
    if f.is_complete() {
        let p = similarity_partition(f);
        return match p.blocks().iter().find(|b| b.len() > 1) {
            None => Irreducibility::Irreducible,
            Some(b) => Irreducibility::Reducible {
                pair: (f.vertex_id(b[0]).to_string(), f.vertex_id(b[1]).to_string()),
            },
        };
    }
    let s = separation(f);
    let interior: Vec<usize> = f.interior_vertices().collect();
    let bad = s.unseparated_among(&interior);
    match bad.first() {
        None => Irreducibility::Irreducible,
        Some(&(u, w)) => Irreducibility::Undetermined {
            unseparated_pairs: bad.len(),
            example: (f.vertex_id(u).to_string(), f.vertex_id(w).to_string()),
        },
    }
}

/// True iff [`irreducibility`] certifies the graph irreducible.
pub fn is_irreducible(f: &RepresentationGraph) -> bool {
    irreducibility(f) == Irreducibility::Irreducible
}

/// Quotient by an admissible partition. Admissibility is checked as
/// (a) no block contains a certainly separated pair and (b) one-step
/// congruence under every letter.
pub fn quotient(f: &RepresentationGraph, p: &VertexPartition) -> Result<RepresentationGraph, RepError> {
    if p.block_of.len() != f.vertex_count() {
        return Err(RepError::BadPartition("partition size differs from vertex count".into()));
    }
    let sep = separation(f);
    let alphabet = letters(f.base());
    for b in p.blocks() {
        let r = b[0];
        for &m in &b[1..] {
            if sep.separated(r, m) {
                return Err(RepError::NotAdmissible {
                    condition: "does not refine the similarity relation".into(),
                    left: f.vertex_id(r).to_string(),
                    right: f.vertex_id(m).to_string(),
                });
            }
            for &l in &alphabet {
                if let (Lift::To(x), Lift::To(y)) = (f.lift_step(r, l), f.lift_step(m, l)) {
                    if p.block_of(x) != p.block_of(y) {
                        return Err(RepError::NotAdmissible {
                            condition: format!("not a congruence under {}", f.letter_name(&l)),
                            left: f.vertex_id(r).to_string(),
                            right: f.vertex_id(m).to_string(),
                        });
                    }
                }
            }
        }
    }
    let vertices = p
        .blocks()
        .iter()
        .map(|b| (f.vertex_id(b[0]).to_string(), f.image(b[0])))
        .collect();
    let frontier = p
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.iter().all(|&v| f.is_frontier(v)))
        .map(|(i, _)| i)
        .collect();
    // representative edge per (source block, image): least source index wins
    let mut order: Vec<usize> = (0..f.edge_count()).collect();
    order.sort_by_key(|&k| (f.edge(k).src, k));
    let mut chosen: HashMap<(usize, crate::graph::TaggedEdge), usize> = HashMap::new();
    for k in order {
        let e = f.edge(k);
        chosen.entry((p.block_of(e.src), e.image)).or_insert(k);
    }
    let mut reps: Vec<usize> = chosen.into_values().collect();
    reps.sort_unstable();
    let edges = reps
        .into_iter()
        .map(|k| {
            let e = f.edge(k);
            RepEdge {
                id: e.id.clone(),
                src: p.block_of(e.src),
                dst: p.block_of(e.dst),
                image: e.image,
            }
        })
        .collect();
    let q = RepresentationGraph::from_indices(f.base_arc().clone(), vertices, edges, frontier)?;
    q.validate()?;
    Ok(q)
}

/// `F / ~`, the irreducible representative of the class of a connected `F`.
pub fn minimize(f: &RepresentationGraph) -> Result<RepresentationGraph, RepError> {
    if !f.is_connected() {
        return Err(crate::error::GraphError::DisconnectedGraph.into());
    }
    quotient(f, &similarity_partition(f))
}

/// Outcome of an `⇌` test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// A pair with equal languages; `depth` is `None` for an exact answer and
    /// `Some(k)` when only words of length `≤ k` were comparable.
    Equivalent {
        left: String,
        right: String,
        depth: Option<usize>,
    },
    Inequivalent { depth: Option<usize> },
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

/// `F ⇌ G`. Exact on complete graphs; on truncations languages are compared
/// up to the deepest length at which both graphs have fully visible vertices.
pub fn are_equivalent(f: &RepresentationGraph, g: &RepresentationGraph) -> Result<Equivalence, RepError> {
    let depth = |h: &RepresentationGraph| h.completeness().into_iter().max().unwrap_or(0);
    let k = depth(f).min(depth(g));
    if k == usize::MAX {
        return are_equivalent_at(f, g, None);
    }
    are_equivalent_at(f, g, Some(k))
}

/// `⇌` with an explicit comparison depth (`None` = exact, complete graphs only).
pub fn are_equivalent_at(
    f: &RepresentationGraph,
    g: &RepresentationGraph,
    depth: Option<usize>,
) -> Result<Equivalence, RepError> {
    if f.base() != g.base() {
        return Err(RepError::BaseMismatch);
    }
    let a = Automaton::of(&[f, g]);
    let n = f.vertex_count();
    let (labels, cf, cg) = match depth {
        None => (a.moore(None), vec![usize::MAX; n], vec![usize::MAX; g.vertex_count()]),
        Some(0) => return Ok(Equivalence::Inequivalent { depth: Some(0) }),
        Some(k) => (a.moore(Some(k - 1)), f.completeness(), g.completeness()),
    };
    let need = depth.unwrap_or(usize::MAX);
    for u in 0..n {
        if cf[u] < need {
            continue;
        }
        for w in 0..g.vertex_count() {
            if cg[w] >= need && labels[u] == labels[n + w] {
                return Ok(Equivalence::Equivalent {
                    left: f.vertex_id(u).to_string(),
                    right: g.vertex_id(w).to_string(),
                    depth,
                });
            }
        }
    }
    Ok(Equivalence::Inequivalent { depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn f7_is_irreducible_f5_is_not() {
        assert!(is_irreducible(&fixtures::f7()));
        assert!(matches!(irreducibility(&fixtures::f5()), Irreducibility::Reducible { .. }));
    }

    #[test]
    fn f1_collapses() {
        let f1 = fixtures::f1();
        assert_eq!(similarity_partition(&f1).len(), 1);
    }

    #[test]
    fn merging_across_images_is_not_admissible() {
        let f = fixtures::excat11_f();
        let p = VertexPartition::from_ids(&f, &[vec!["u_1".into(), "v_1".into()]]).unwrap();
        assert!(matches!(quotient(&f, &p), Err(RepError::NotAdmissible { .. })));
    }

    #[test]
    fn discrete_quotient_is_identity() {
        let f = fixtures::f5();
        let q = quotient(&f, &VertexPartition::discrete(f.vertex_count())).unwrap();
        assert_eq!(q.vertex_ids(), f.vertex_ids());
        assert_eq!(q.edges(), f.edges());
    }
}
