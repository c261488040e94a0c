//! Morphisms of representation graphs over `Ê`: the quotient-of decision and
//! isomorphism search, both by root pairing and extension through `F_d`.

use std::collections::VecDeque;

use crate::graph::{is_covering, GraphMorphism};

use super::refine::Automaton;
use super::{EdgeLift, RepresentationGraph};

/// Vertex and edge index maps `F → G` commuting with the images in `Ê`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl RepMorphism {
    pub fn identity(f: &RepresentationGraph) -> Self {
        RepMorphism {
            vertex_map: (0..f.vertex_count()).collect(),
            edge_map: (0..f.edge_count()).collect(),
        }
    }

    /// `β ∘ α` for `self = α: F → G` and `beta: G → H`.
    pub fn then(&self, beta: &RepMorphism) -> RepMorphism {
        RepMorphism {
            vertex_map: self.vertex_map.iter().map(|&v| beta.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|&k| beta.edge_map[k]).collect(),
        }
    }

    pub fn as_graph_morphism(&self) -> GraphMorphism {
        GraphMorphism {
            vertex_map: self.vertex_map.clone(),
            edge_map: self.edge_map.clone(),
        }
    }
}

/// Outcome of [`is_quotient_of`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSearch {
    pub morphism: Option<RepMorphism>,
    pub candidates_tried: usize,
    /// Candidates abandoned because the extension ran into a frontier.
    pub undetermined: usize,
}

impl QuotientSearch {
    pub fn holds(&self) -> bool {
        self.morphism.is_some()
    }
}

enum Extension {
    Found(RepMorphism),
    Conflict,
    Truncated,
}

/// Extends `root ↦ target` to all of `F` (assumed connected) by determinism.
fn extend(f: &RepresentationGraph, g: &RepresentationGraph, root: usize, target: usize) -> Extension {
    let mut vmap = vec![usize::MAX; f.vertex_count()];
    let mut emap = vec![usize::MAX; f.edge_count()];
    vmap[root] = target;
    let mut queue = VecDeque::from([root]);
    let mut truncated = false;
    while let Some(u) = queue.pop_front() {
        let at = vmap[u];
        let steps = f
            .out_edges(u)
            .iter()
            .map(|&k| (k, f.edge(k).image.real(), f.edge(k).dst))
            .chain(f.in_edges(u).iter().map(|&k| (k, f.edge(k).image.ghost(), f.edge(k).src)));
        for (k, letter, other) in steps.collect::<Vec<_>>() {
            let k2 = match g.lift_edge(at, letter) {
                EdgeLift::Edge(k2) => k2,
                EdgeLift::Zero => return Extension::Conflict,
                EdgeLift::Truncated => {
                    // keep looking for a hard conflict elsewhere
                    truncated = true;
                    continue;
                }
            };
            let ge = g.edge(k2);
            let img = if letter.is_real() { ge.dst } else { ge.src };
            if emap[k] != usize::MAX && emap[k] != k2 {
                return Extension::Conflict;
            }
            emap[k] = k2;
            if vmap[other] == usize::MAX {
                vmap[other] = img;
                queue.push_back(other);
            } else if vmap[other] != img {
                return Extension::Conflict;
            }
        }
    }
    if truncated || vmap.contains(&usize::MAX) || emap.contains(&usize::MAX) {
        return Extension::Truncated;
    }
    Extension::Found(RepMorphism {
        vertex_map: vmap,
        edge_map: emap,
    })
}

/// Candidate targets for `F`'s root in `G`, in stored order.
fn candidates(f: &RepresentationGraph, g: &RepresentationGraph, root: usize) -> Vec<usize> {
    let a = Automaton::of(&[f, g]);
    let n = f.vertex_count();
    if f.is_complete() && g.is_complete() {
        let labels = a.moore(None);
        (0..g.vertex_count()).filter(|&w| labels[n + w] == labels[root]).collect()
    } else {
        let sep = a.certain_separation();
        let m = n + g.vertex_count();
        (0..g.vertex_count())
            .filter(|&w| f.image(root) == g.image(w) && !sep[root * m + n + w])
            .collect()
    }
}

/// Decides whether `G` is a quotient of `F`, i.e. a morphism `F → G` exists.
/// The root is `F`'s first vertex. A returned morphism has been checked to be
/// a covering of the underlying graphs (relative to both frontiers).
pub fn is_quotient_of(f: &RepresentationGraph, g: &RepresentationGraph) -> QuotientSearch {
    let mut out = QuotientSearch {
        morphism: None,
        candidates_tried: 0,
        undetermined: 0,
    };
    if f.base() != g.base() || f.vertex_count() == 0 {
        return out;
    }
    for w in candidates(f, g, 0) {
        out.candidates_tried += 1;
        match extend(f, g, 0, w) {
            Extension::Found(m) => {
                let covers = is_covering(&f.underlying(), f.frontier(), &g.underlying(), g.frontier(), &m.as_graph_morphism())
                    .unwrap_or(false);
                if covers {
                    out.morphism = Some(m);
                    return out;
                }
            }
            Extension::Conflict => {}
            Extension::Truncated => out.undetermined += 1,
        }
    }
    out
}

/// An isomorphism `F → G` over `Ê` preserving frontiers, if one exists. The
/// search is rooted at vertex 0, so both graphs are taken to be connected.
pub fn find_isomorphism(f: &RepresentationGraph, g: &RepresentationGraph) -> Option<RepMorphism> {
    if f.base() != g.base()
        || f.vertex_count() != g.vertex_count()
        || f.edge_count() != g.edge_count()
        || f.frontier().len() != g.frontier().len()
    {
        return None;
    }
    if f.vertex_count() == 0 {
        return Some(RepMorphism::identity(f));
    }
    for w in 0..g.vertex_count() {
        if g.image(w) != f.image(0) {
            continue;
        }
        if let Extension::Found(m) = extend(f, g, 0, w) {
            if is_bijection(&m.vertex_map, g.vertex_count())
                && is_bijection(&m.edge_map, g.edge_count())
                && f.frontier().iter().all(|&v| g.is_frontier(m.vertex_map[v]))
            {
                return Some(m);
            }
        }
    }
    None
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    let mut hit = vec![false; n];
    for &x in map {
        if x >= n || hit[x] {
            return false;
        }
        hit[x] = true;
    }
    map.len() == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_is_found() {
        let f = fixtures::f5();
        let q = is_quotient_of(&f, &f);
        assert_eq!(q.morphism, Some(RepMorphism::identity(&f)));
    }

    #[test]
    fn f5_and_f6_are_incomparable() {
        assert!(!is_quotient_of(&fixtures::f5(), &fixtures::f6()).holds());
        assert!(!is_quotient_of(&fixtures::f6(), &fixtures::f5()).holds());
    }

    #[test]
    fn excat11_morphism() {
        let m = is_quotient_of(&fixtures::excat11_f(), &fixtures::excat11_g()).morphism.unwrap();
        let f = fixtures::excat11_f();
        let g = fixtures::excat11_g();
        for (u, &w) in m.vertex_map.iter().enumerate() {
            assert_eq!(&f.vertex_id(u)[..1], g.vertex_id(w));
        }
    }
}
