//! Elements of the weighted Leavitt path algebra as free linear combinations
//! of monomials, right modules given by a basis action, relation checking,
//! simplicity witnesses, gradings and module homomorphisms.
//!
//! No normal form of `L_K(E)` is computed. Every semantic question is routed
//! through a module action, so monomials are kept exactly as written.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Add;

use crate::error::{AlgebraError, FieldError, GraphError, RelationViolation};
use crate::field::{Field, FieldValue};
use crate::graph::{letters, DegreeVector, Dir, Letter, PathWord, TaggedEdge, WeightedGraph};
use crate::rep::{Lift, RepMorphism, RepresentationGraph};

/// A generator of `L_K(E)`: a vertex idempotent or a letter of `Ê_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Vertex(usize),
    Letter(Letter),
}

impl Generator {
    pub fn name(&self, g: &WeightedGraph) -> String {
        match self {
            Generator::Vertex(v) => g.vertex_id(*v).to_string(),
            Generator::Letter(l) => g.letter_name(l),
        }
    }
}

/// All generators in canonical order: vertices, then letters.
pub fn generators(g: &WeightedGraph) -> Vec<Generator> {
    (0..g.vertex_count())
        .map(Generator::Vertex)
        .chain(letters(g).into_iter().map(Generator::Letter))
        .collect()
}

/// Effect of one generator on a basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<B> {
    To(B),
    Zero,
    /// Depends on data outside a truncation.
    Truncated,
}

impl From<Lift> for Step<usize> {
    fn from(l: Lift) -> Self {
        match l {
            Lift::To(v) => Step::To(v),
            Lift::Zero => Step::Zero,
            Lift::Truncated => Step::Truncated,
        }
    }
}

/// A right `L_K(E)`-module with a basis permuted partially by generators.
/// Representation graphs, action tables, branching systems and Chen modules
/// all fit this shape, so one relation checker serves them all.
pub trait RightAction {
    type Basis: Clone + Ord + fmt::Debug;

    fn base(&self) -> &WeightedGraph;
    fn step(&self, b: &Self::Basis, g: Generator) -> Step<Self::Basis>;
    fn basis_name(&self, b: &Self::Basis) -> String;

    /// `b · p` for a word: the source idempotent, then each letter.
    fn step_word(&self, b: &Self::Basis, p: &PathWord) -> Step<Self::Basis> {
        let mut at = match self.step(b, Generator::Vertex(p.source)) {
            Step::To(x) => x,
            other => return other,
        };
        for &l in &p.letters {
            at = match self.step(&at, Generator::Letter(l)) {
                Step::To(x) => x,
                other => return other,
            };
        }
        Step::To(at)
    }
}

impl RightAction for RepresentationGraph {
    type Basis = usize;

    fn base(&self) -> &WeightedGraph {
        RepresentationGraph::base(self)
    }

    fn step(&self, b: &usize, g: Generator) -> Step<usize> {
        match g {
            Generator::Vertex(v) if self.image(*b) == v => Step::To(*b),
            Generator::Vertex(_) => Step::Zero,
            Generator::Letter(l) => self.lift_step(*b, l).into(),
        }
    }

    fn basis_name(&self, b: &usize) -> String {
        self.vertex_id(*b).to_string()
    }
}

/// A formal linear combination of monomials. The trivial word at `v`
/// stands for the vertex idempotent `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    field: Field,
    terms: BTreeMap<PathWord, FieldValue>,
}

impl AlgebraElement {
    pub fn zero(field: Field) -> Self {
        AlgebraElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: Field, p: PathWord) -> Self {
        AlgebraElement::term(field.one(), p)
    }

    pub fn term(coeff: FieldValue, p: PathWord) -> Self {
        let mut a = AlgebraElement::zero(coeff.field());
        a.add_term(p, coeff);
        a
    }

    pub fn vertex(field: Field, v: usize) -> Self {
        AlgebraElement::monomial(field, PathWord::trivial(v))
    }

    pub fn letter(field: Field, g: &WeightedGraph, l: Letter) -> Self {
        AlgebraElement::monomial(field, PathWord::new(g, g.letter_source(&l), vec![l]).expect("single letter"))
    }

    /// Monomial from a letter sequence; zero when not composable.
    pub fn word(field: Field, g: &WeightedGraph, ls: Vec<Letter>) -> Self {
        match PathWord::from_letters(g, ls) {
            Ok(p) => AlgebraElement::monomial(field, p),
            Err(_) => AlgebraElement::zero(field),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PathWord, &FieldValue)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: PathWord, c: FieldValue) {
        let sum = match self.terms.remove(&p) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(p, sum);
        }
    }

    pub fn scale(&self, k: &FieldValue) -> Self {
        let mut out = AlgebraElement::zero(self.field);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * k);
        }
        out
    }

    pub fn try_add(&self, other: &AlgebraElement) -> Result<Self, AlgebraError> {
        same_field(self.field, other.field)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn display(&self, g: &WeightedGraph) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if mag != "1" {
                s.push_str(&mag);
                s.push('*');
            }
            s.push_str(&monomial_name(g, p));
        }
        s
    }
}

/// Space-separated form of a monomial, re-readable by the expression parser.
pub fn monomial_name(g: &WeightedGraph, p: &PathWord) -> String {
    if p.letters.is_empty() {
        g.vertex_id(p.source).to_string()
    } else {
        p.letters.iter().map(|l| g.letter_name(l)).collect::<Vec<_>>().join(" ")
    }
}

fn same_field(a: Field, b: Field) -> Result<(), AlgebraError> {
    if a == b {
        Ok(())
    } else {
        Err(FieldError::Mismatch { left: a, right: b }.into())
    }
}

/// Free product of monomials: `p · q = pq` when `r(p) = s(q)`, else zero.
/// Vertices behave as idempotents.
pub fn multiply(g: &WeightedGraph, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    same_field(a.field, b.field)?;
    let mut out = AlgebraElement::zero(a.field);
    for (p, c) in &a.terms {
        for (q, d) in &b.terms {
            if p.target(g) != q.source {
                continue;
            }
            let pq = PathWord {
                source: p.source,
                letters: p.letters.iter().chain(&q.letters).copied().collect(),
            };
            out.add_term(pq, c * d);
        }
    }
    Ok(out)
}

/// A finitely supported vector over a module basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVector<B: Ord = usize> {
    field: Field,
    terms: BTreeMap<B, FieldValue>,
}

impl<B: Ord + Clone> ModuleVector<B> {
    pub fn zero(field: Field) -> Self {
        ModuleVector {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(field: Field, b: B) -> Self {
        let mut x = ModuleVector::zero(field);
        x.add_term(b, field.one());
        x
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (B, FieldValue)>) -> Result<Self, AlgebraError> {
        let mut x = ModuleVector::zero(field);
        for (b, c) in terms {
            same_field(field, c.field())?;
            x.add_term(b, c);
        }
        Ok(x)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&B, &FieldValue)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<B> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, b: &B) -> Option<&FieldValue> {
        self.terms.get(b)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: B, c: FieldValue) {
        let sum = match self.terms.remove(&b) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(b, sum);
        }
    }

    pub fn scale(&self, k: &FieldValue) -> Self {
        let mut out = ModuleVector::zero(self.field);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c * k);
        }
        out
    }

    /// The single basis element with coefficient one, if that is what this is.
    pub fn as_basis(&self) -> Option<&B> {
        match self.terms.iter().next() {
            Some((b, c)) if self.terms.len() == 1 && c.is_one() => Some(b),
            _ => None,
        }
    }

    pub fn display_with(&self, name: impl Fn(&B) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(b, c)| if c.is_one() { name(b) } else { format!("{c}*{}", name(b)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<B: Ord + Clone> Add for ModuleVector<B> {
    type Output = ModuleVector<B>;
    fn add(mut self, rhs: ModuleVector<B>) -> ModuleVector<B> {
        for (b, c) in rhs.terms {
            self.add_term(b, c);
        }
        self
    }
}

/// `x · a`, extended bilinearly from the basis action.
pub fn act<A: RightAction>(
    module: &A,
    x: &ModuleVector<A::Basis>,
    a: &AlgebraElement,
) -> Result<ModuleVector<A::Basis>, AlgebraError> {
    same_field(x.field, a.field)?;
    let mut out = ModuleVector::zero(x.field);
    for (b, c) in &x.terms {
        for (p, k) in &a.terms {
            match module.step_word(b, p) {
                Step::To(t) => out.add_term(t, c * k),
                Step::Zero => {}
                Step::Truncated => {
                    return Err(AlgebraError::Truncated {
                        vertex: module.basis_name(b),
                        monomial: monomial_name(module.base(), p),
                    })
                }
            }
        }
    }
    Ok(out)
}

/// Applies a generator sequence to a basis element.
fn apply_seq<A: RightAction>(module: &A, b: &A::Basis, seq: &[Generator]) -> Step<A::Basis> {
    let mut at = b.clone();
    for &g in seq {
        at = match module.step(&at, g) {
            Step::To(x) => x,
            other => return other,
        };
    }
    Step::To(at)
}

/// `b · Σ seq` with unit coefficients; `None` if any summand is truncated.
fn eval_sum<A: RightAction>(module: &A, b: &A::Basis, sum: &[Vec<Generator>], field: Field) -> Option<ModuleVector<A::Basis>> {
    let mut out = ModuleVector::zero(field);
    for seq in sum {
        match apply_seq(module, b, seq) {
            Step::To(t) => out.add_term(t, field.one()),
            Step::Zero => {}
            Step::Truncated => return None,
        }
    }
    Some(out)
}

/// Counts from a successful relation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RelationReport {
    pub checked: usize,
    /// Instances skipped because they touch a truncation frontier.
    pub truncated: usize,
}

/// One relation instance: `Σ lhs = Σ rhs` as sums of generator sequences.
struct Instance {
    relation: u8,
    indices: String,
    lhs: Vec<Vec<Generator>>,
    rhs: Vec<Vec<Generator>>,
}

/// All instances of the four defining relations over `g`:
/// (1) `v v' = δ v`; (2) `s(e) e_i = e_i = e_i r(e)` and the ghost analogue;
/// (3) `Σ_{i ≤ w(v)} e_i^* f_i = δ_{ef} r(e)`; (4) `Σ_{e ∈ s^{-1}(v)} e_i e_j^* = δ_{ij} v`.
/// Letters with tag above the edge weight count as zero.
fn relation_instances(g: &WeightedGraph) -> Vec<Instance> {
    use Generator::{Letter as L, Vertex as V};
    let mut out = Vec::new();
    let n = g.vertex_count();
    for v in 0..n {
        for v2 in 0..n {
            out.push(Instance {
                relation: 1,
                indices: format!("{}, {}", g.vertex_id(v), g.vertex_id(v2)),
                lhs: vec![vec![V(v), V(v2)]],
                rhs: if v == v2 { vec![vec![V(v)]] } else { vec![] },
            });
        }
    }
    for l in letters(g) {
        let (s, r) = (g.letter_source(&l), g.letter_target(&l));
        out.push(Instance {
            relation: 2,
            indices: format!("{} on the left", g.letter_name(&l)),
            lhs: vec![vec![V(s), L(l)]],
            rhs: vec![vec![L(l)]],
        });
        out.push(Instance {
            relation: 2,
            indices: format!("{} on the right", g.letter_name(&l)),
            lhs: vec![vec![L(l), V(r)]],
            rhs: vec![vec![L(l)]],
        });
    }
    let letter = |edge: usize, tag: u32, dir: Dir| -> Option<Generator> {
        (tag <= g.edge(edge).weight).then_some(L(Letter { edge, tag, dir }))
    };
    for v in 0..n {
        let wv = g.vertex_weight(v);
        for &e in g.out_edges(v) {
            for &f in g.out_edges(v) {
                out.push(Instance {
                    relation: 3,
                    indices: format!("{}, {}", g.edge(e).id, g.edge(f).id),
                    lhs: (1..=wv)
                        .filter_map(|i| Some(vec![letter(e, i, Dir::Ghost)?, letter(f, i, Dir::Real)?]))
                        .collect(),
                    rhs: if e == f { vec![vec![V(g.edge(e).dst)]] } else { vec![] },
                });
            }
        }
        for i in 1..=wv {
            for j in 1..=wv {
                out.push(Instance {
                    relation: 4,
                    indices: format!("{i}, {j} at {}", g.vertex_id(v)),
                    lhs: g
                        .out_edges(v)
                        .iter()
                        .filter_map(|&e| Some(vec![letter(e, i, Dir::Real)?, letter(e, j, Dir::Ghost)?]))
                        .collect(),
                    rhs: if i == j { vec![vec![V(v)]] } else { vec![] },
                });
            }
        }
    }
    out
}

/// Checks the defining relations on every given basis element. Instances
/// that reach a truncation frontier are counted and skipped.
pub fn check_relations_on<A: RightAction>(
    module: &A,
    basis: impl IntoIterator<Item = A::Basis>,
    field: Field,
) -> Result<RelationReport, RelationViolation> {
    let instances = relation_instances(module.base());
    let mut report = RelationReport::default();
    for b in basis {
        for inst in &instances {
            match (eval_sum(module, &b, &inst.lhs, field), eval_sum(module, &b, &inst.rhs, field)) {
                (Some(l), Some(r)) => {
                    report.checked += 1;
                    if l != r {
                        let show = |x: &ModuleVector<A::Basis>| x.display_with(|y| module.basis_name(y));
                        return Err(RelationViolation {
                            relation: inst.relation,
                            basis: module.basis_name(&b),
                            indices: inst.indices.clone(),
                            lhs: show(&l),
                            rhs: show(&r),
                        });
                    }
                }
                _ => report.truncated += 1,
            }
        }
    }
    Ok(report)
}

/// Relation check for `V_F` on every basis vertex.
pub fn check_relations(f: &RepresentationGraph, field: Field) -> Result<RelationReport, RelationViolation> {
    check_relations_on(f, 0..f.vertex_count(), field)
}

/// `V_F` is simple iff `F` is irreducible.
pub fn is_simple_module(f: &RepresentationGraph) -> bool {
    crate::rep::is_irreducible(f)
}

/// A scaled monomial `k·p` taking a vector to a single basis vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityWitness {
    pub element: AlgebraElement,
    pub result: usize,
}

/// Finds `k·p` with `x · k p` a basis vertex by repeatedly choosing the
/// shortest word (BFS, vertices before letters) that kills part but not all
/// of the support. Steps touching a truncation frontier are never used.
pub fn simplicity_witness(f: &RepresentationGraph, x: &ModuleVector) -> Result<SimplicityWitness, AlgebraError> {
    if x.is_zero() {
        return Err(AlgebraError::NoSeparatingWord("0".into()));
    }
    let g = f.base();
    let gens = generators(g);
    let field = x.field();
    let mut support: Vec<usize> = x.support();
    // the surviving word as generator sequence
    let mut path: Vec<Generator> = Vec::new();
    while support.len() > 1 {
        let mut seen: HashSet<Vec<usize>> = HashSet::from([support.clone()]);
        let mut queue: VecDeque<(Vec<usize>, Vec<Generator>)> = VecDeque::from([(support.clone(), vec![])]);
        let mut found = None;
        'bfs: while let Some((state, word)) = queue.pop_front() {
            for &gen in &gens {
                let mut next = Vec::with_capacity(state.len());
                let mut truncated = false;
                for &u in &state {
                    match f.step(&u, gen) {
                        Step::To(w) => next.push(w),
                        Step::Zero => {}
                        Step::Truncated => truncated = true,
                    }
                }
                if truncated || next.is_empty() {
                    continue;
                }
                let mut w2 = word.clone();
                w2.push(gen);
                if next.len() < state.len() {
                    found = Some(w2);
                    break 'bfs;
                }
                if seen.insert(next.clone()) {
                    queue.push_back((next, w2));
                }
            }
        }
        let Some(word) = found else {
            return Err(AlgebraError::NoSeparatingWord(
                support.iter().map(|&u| f.vertex_id(u)).collect::<Vec<_>>().join(", "),
            ));
        };
        support = support
            .iter()
            .filter_map(|u| match apply_seq(f, u, &word) {
                Step::To(w) => Some(w),
                _ => None,
            })
            .collect();
        path.extend(word);
        // keep the original coefficient bookkeeping in `x` terms
    }
    // recover which original basis vertex survived and its coefficient
    let (start, coeff) = x
        .terms()
        .find(|(u, _)| matches!(apply_seq(f, u, &path), Step::To(_)))
        .map(|(u, c)| (*u, c.clone()))
        .expect("one support element survives");
    let Step::To(result) = apply_seq(f, &start, &path) else { unreachable!() };
    let word = generators_to_word(g, f.image(start), &path);
    let element = AlgebraElement::term(coeff.inverse()?, word);
    debug_assert_eq!(field, element.field());
    Ok(SimplicityWitness { element, result })
}

/// Collapses a generator sequence acting nontrivially into a path word:
/// vertex idempotents are absorbed.
fn generators_to_word(g: &WeightedGraph, start: usize, seq: &[Generator]) -> PathWord {
    let letters: Vec<Letter> = seq
        .iter()
        .filter_map(|x| match x {
            Generator::Letter(l) => Some(*l),
            Generator::Vertex(_) => None,
        })
        .collect();
    PathWord::new(g, start, letters).expect("a word that acts nontrivially is composable")
}

/// A grading of `V_F` by length vectors, or a closed walk that obstructs one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grading {
    /// Degree of every vertex relative to vertex 0.
    Graded { degrees: Vec<DegreeVector> },
    /// A closed walk in `F_d` from vertex 0 whose image has nonzero length.
    NotGraded { witness: PathWord, length: DegreeVector },
}

impl Grading {
    pub fn is_graded(&self) -> bool {
        matches!(self, Grading::Graded { .. })
    }
}

/// Potentials along a BFS spanning tree of `F_d`, then a consistency check
/// on every edge in edge order.
pub fn grading(f: &RepresentationGraph) -> Result<Grading, AlgebraError> {
    if !f.is_connected() {
        return Err(GraphError::DisconnectedGraph.into());
    }
    let g = f.base();
    let n = g.max_weight();
    let nv = f.vertex_count();
    if nv == 0 {
        return Ok(Grading::Graded { degrees: vec![] });
    }
    let alphabet = letters(g);
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None; nv];
    let mut deg: Vec<Option<DegreeVector>> = vec![None; nv];
    deg[0] = Some(DegreeVector::zero(n));
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &l in &alphabet {
            if let Lift::To(w) = f.lift_step(u, l) {
                if deg[w].is_none() {
                    deg[w] = Some(deg[u].clone().unwrap() + DegreeVector::of_letter(n, &l));
                    parent[w] = Some((u, l));
                    queue.push_back(w);
                }
            }
        }
    }
    let deg: Vec<DegreeVector> = deg.into_iter().map(|d| d.expect("connected")).collect();
    let tree_path = |mut v: usize| -> Vec<Letter> {
        let mut ls = Vec::new();
        while let Some((p, l)) = parent[v] {
            ls.push(l);
            v = p;
        }
        ls.reverse();
        ls
    };
    for e in f.edges() {
        let unit = DegreeVector::unit(n, e.image.tag);
        if deg[e.dst].clone() - deg[e.src].clone() != unit {
            let mut ls = tree_path(e.src);
            ls.push(e.image.real());
            ls.extend(tree_path(e.dst).into_iter().rev().map(Letter::inverse));
            let witness = reduce(PathWord { source: f.image(0), letters: ls });
            let length = witness.length_vector(g);
            return Ok(Grading::NotGraded { witness, length });
        }
    }
    Ok(Grading::Graded { degrees: deg })
}

/// Cancels adjacent inverse pairs.
fn reduce(p: PathWord) -> PathWord {
    let mut out: Vec<Letter> = Vec::with_capacity(p.letters.len());
    for l in p.letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    PathWord { source: p.source, letters: out }
}

/// Result of a module-homomorphism check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCheck {
    /// First `(basis vertex, generator)` where `σ(u·x) ≠ σ(u)·x`.
    pub failure: Option<(String, String)>,
    pub checked: usize,
    pub truncated: usize,
}

impl HomCheck {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that `σ: V_F → V_G` (given on the basis of `F`) commutes with every
/// generator on every interior basis vertex.
pub fn check_module_hom(
    f: &RepresentationGraph,
    g: &RepresentationGraph,
    sigma: &[ModuleVector],
) -> Result<HomCheck, AlgebraError> {
    if f.base() != g.base() {
        return Err(crate::error::RepError::BaseMismatch.into());
    }
    if sigma.len() != f.vertex_count() {
        return Err(AlgebraError::UnknownBasis(format!(
            "map given on {} vertices, source has {}",
            sigma.len(),
            f.vertex_count()
        )));
    }
    let field = sigma.first().map(|s| s.field()).unwrap_or(Field::Rational);
    let gens = generators(f.base());
    let mut out = HomCheck {
        failure: None,
        checked: 0,
        truncated: 0,
    };
    for u in f.interior_vertices() {
        for &x in &gens {
            let lhs = match f.step(&u, x) {
                Step::To(w) => sigma[w].clone(),
                Step::Zero => ModuleVector::zero(field),
                Step::Truncated => {
                    out.truncated += 1;
                    continue;
                }
            };
            let rhs = match act_generator(g, &sigma[u], x) {
                Some(v) => v,
                None => {
                    out.truncated += 1;
                    continue;
                }
            };
            out.checked += 1;
            if lhs != rhs {
                out.failure = Some((f.vertex_id(u).to_string(), x.name(f.base())));
                return Ok(out);
            }
        }
    }
    Ok(out)
}

fn act_generator<A: RightAction>(m: &A, x: &ModuleVector<A::Basis>, gen: Generator) -> Option<ModuleVector<A::Basis>> {
    let mut out = ModuleVector::zero(x.field());
    for (b, c) in x.terms() {
        match m.step(b, gen) {
            Step::To(t) => out.add_term(t, c.clone()),
            Step::Zero => {}
            Step::Truncated => return None,
        }
    }
    Some(out)
}

/// `V_α` on the basis: `u ↦ α(u)`.
pub fn induced_hom(alpha: &RepMorphism, field: Field) -> Vec<ModuleVector> {
    alpha
        .vertex_map
        .iter()
        .map(|&w| ModuleVector::basis(field, w))
        .collect()
}

/// The tagged edge of a letter, for callers that only hold generators.
pub fn generator_edge(g: Generator) -> Option<TaggedEdge> {
    match g {
        Generator::Letter(l) => Some(l.tagged()),
        Generator::Vertex(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn vertex_idempotents_multiply() {
        let g = fixtures::excat11_base();
        let u = AlgebraElement::vertex(q(), 0);
        let v = AlgebraElement::vertex(q(), 1);
        assert_eq!(multiply(&g, &u, &u).unwrap(), u);
        assert!(multiply(&g, &u, &v).unwrap().is_zero());
    }

    #[test]
    fn mismatched_terms_drop() {
        let g = fixtures::excat11_base();
        let e1 = TaggedEdge { edge: 0, tag: 1 }.real();
        let f2 = TaggedEdge { edge: 1, tag: 2 }.real();
        let a = AlgebraElement::letter(q(), &g, e1)
            .scale(&q().from_i64(2))
            .try_add(&AlgebraElement::letter(q(), &g, f2))
            .unwrap();
        // both letters end at v; multiplying by u kills everything
        assert!(multiply(&g, &a, &AlgebraElement::vertex(q(), 0)).unwrap().is_zero());
        assert_eq!(multiply(&g, &a, &AlgebraElement::vertex(q(), 1)).unwrap(), a);
    }

    #[test]
    fn wlpa4_grading_witness() {
        let f = fixtures::wlpa4();
        match grading(&f).unwrap() {
            Grading::NotGraded { witness, .. } => assert_eq!(monomial_name(f.base(), &witness), "e[1] f[1] g[1]"),
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn relations_hold_on_f7() {
        let r = check_relations(&fixtures::f7(), q()).unwrap();
        assert_eq!(r.truncated, 0);
        assert!(r.checked > 0);
    }

    #[test]
    fn excat11_corruption_fails_at_u_e1() {
        let f = fixtures::excat11_f();
        let g = fixtures::excat11_g();
        let mut sigma = fixtures::excat11_sigma(q());
        assert!(check_module_hom(&g, &f, &sigma).unwrap().holds());
        sigma[0] = ModuleVector::basis(q(), f.vertex("u_1").unwrap());
        let c = check_module_hom(&g, &f, &sigma).unwrap();
        assert_eq!(c.failure, Some(("u".into(), "e[1]".into())));
    }
}
