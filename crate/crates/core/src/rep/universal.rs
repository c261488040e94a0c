//! Truncations of the universal representation `T_C` of a `⇌`-class.

use std::collections::{BTreeSet, VecDeque};

use crate::error::RepError;
use crate::graph::{letters, Letter};

use super::{Lift, RepEdge, RepresentationGraph};

#[derive(Debug, Clone)]
pub struct TruncatedUniversalRep {
    /// Vertex `v_p` is named by the word `p`; the root by its `E`-vertex.
    pub graph: RepresentationGraph,
    pub root: usize,
    /// Depth of each vertex (word length).
    pub depth: Vec<usize>,
    /// `V_T` is indecomposable by the structure theorem for universal
    /// representations. Set only when the truncation validates; never computed.
    pub indecomposable_by_theorem: bool,
}

/// Tree of non-backtracking words in the language of `u`, up to `depth`.
/// A vertex is frontier when it sits at the depth bound or when one of its
/// expansions runs into `F`'s own frontier.
pub fn universal_representation(
    f: &RepresentationGraph,
    u: usize,
    depth: usize,
) -> Result<TruncatedUniversalRep, RepError> {
    if u >= f.vertex_count() {
        return Err(crate::error::GraphError::UnknownVertex(u.to_string()).into());
    }
    let base = f.base();
    let alphabet = letters(base);
    let mut ids = vec![base.vertex_id(f.image(u)).to_string()];
    let mut image = vec![f.image(u)];
    let mut at = vec![u];
    let mut last: Vec<Option<Letter>> = vec![None];
    let mut level = vec![0usize];
    let mut edges = Vec::new();
    let mut frontier = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        if level[t] == depth {
            frontier.insert(t);
            continue;
        }
        for &l in &alphabet {
            if last[t] == Some(l.inverse()) {
                continue;
            }
            let next = match f.lift_step(at[t], l) {
                Lift::To(w) => w,
                Lift::Zero => continue,
                Lift::Truncated => {
                    frontier.insert(t);
                    continue;
                }
            };
            let word = if level[t] == 0 {
                base.letter_name(&l)
            } else {
                format!("{}{}", ids[t], base.letter_name(&l))
            };
            let child = ids.len();
            ids.push(word.clone());
            image.push(base.letter_target(&l));
            at.push(next);
            last.push(Some(l));
            level.push(level[t] + 1);
            let (src, dst) = if l.is_real() { (t, child) } else { (child, t) };
            edges.push(RepEdge {
                id: format!("e_{word}"),
                src,
                dst,
                image: l.tagged(),
            });
            queue.push_back(child);
        }
    }
    let graph = RepresentationGraph::from_indices(
        f.base_arc().clone(),
        ids.into_iter().zip(image).collect(),
        edges,
        frontier,
    )?;
    let indecomposable_by_theorem = graph.validate().is_ok();
    Ok(TruncatedUniversalRep {
        graph,
        root: 0,
        depth: level,
        indecomposable_by_theorem,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn counts_on_one_vertex_two_loops() {
        let f7 = fixtures::f7();
        let counts: Vec<usize> = (0..3)
            .map(|d| universal_representation(&f7, 0, d).unwrap().graph.vertex_count())
            .collect();
        assert_eq!(counts, vec![1, 5, 17]);
    }

    #[test]
    fn depth_one_orientation() {
        let t = universal_representation(&fixtures::f7(), 0, 1).unwrap();
        let g = &t.graph;
        assert_eq!(g.out_edges(0).len(), 2);
        assert_eq!(g.in_edges(0).len(), 2);
        assert!(t.indecomposable_by_theorem);
    }
}
