//! Weighted branching systems, the interval construction, the induced action
//! on finitely supported functions, the bridge from representation graphs,
//! and reconstruction of a representation graph from an action table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{act, check_relations_on, generators, AlgebraElement, Generator, ModuleVector, RelationReport, RightAction, Step};
use crate::error::{AlgebraError, BranchingError, ReconstructError, RelationViolation};
use crate::field::{Field, FieldValue};
use crate::graph::{build_hat_graph, Dir, Letter, TaggedEdge, WeightedGraph};
use crate::rep::{RepEdge, RepresentationGraph};

/// A point of a carrier: a named element of a finite set or a rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(usize),
    Rat(BigRational),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn show_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Half-open `[lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo < hi);
        Interval { lo, hi }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x < &self.hi
    }

    pub fn len(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", show_rat(&self.lo), show_rat(&self.hi))
    }
}

/// A finite union of half-open intervals, kept sorted and merged.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalUnion(Vec<Interval>);

impl IntervalUnion {
    pub fn new(mut pieces: Vec<Interval>) -> Self {
        pieces.retain(|p| p.lo < p.hi);
        pieces.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalUnion(out)
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.0.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.0 {
            for b in &other.0 {
                let lo = (&a.lo).max(&b.lo).clone();
                let hi = (&a.hi).min(&b.hi).clone();
                if lo < hi {
                    out.push(Interval { lo, hi });
                }
            }
        }
        IntervalUnion::new(out)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut cur = self.0.clone();
        for b in &other.0 {
            let mut next = Vec::new();
            for a in cur {
                if b.hi <= a.lo || a.hi <= b.lo {
                    next.push(a);
                    continue;
                }
                if a.lo < b.lo {
                    next.push(Interval { lo: a.lo.clone(), hi: b.lo.clone() });
                }
                if b.hi < a.hi {
                    next.push(Interval { lo: b.hi.clone(), hi: a.hi.clone() });
                }
            }
            cur = next;
        }
        IntervalUnion::new(cur)
    }

    pub fn measure(&self) -> BigRational {
        self.0.iter().map(Interval::len).fold(BigRational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// A subset of the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CarrierSet {
    Points(BTreeSet<usize>),
    Intervals(IntervalUnion),
}

impl CarrierSet {
    pub fn contains(&self, x: &Point) -> bool {
        match (self, x) {
            (CarrierSet::Points(s), Point::Vertex(v)) => s.contains(v),
            (CarrierSet::Intervals(u), Point::Rat(q)) => u.contains(q),
            _ => false,
        }
    }

    fn empty_like(&self) -> CarrierSet {
        match self {
            CarrierSet::Points(_) => CarrierSet::Points(BTreeSet::new()),
            CarrierSet::Intervals(_) => CarrierSet::Intervals(IntervalUnion::default()),
        }
    }
}

/// The injection `g_{e_i}: R_{e_i} → D_{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bijection {
    Points(BTreeMap<usize, usize>),
    /// `x ↦ scale·x + offset`, `scale > 0`.
    Affine { scale: BigRational, offset: BigRational },
}

impl Bijection {
    fn apply(&self, x: &Point) -> Option<Point> {
        match (self, x) {
            (Bijection::Points(m), Point::Vertex(v)) => m.get(v).map(|&w| Point::Vertex(w)),
            (Bijection::Affine { scale, offset }, Point::Rat(q)) => Some(Point::Rat(scale * q + offset)),
            _ => None,
        }
    }

    fn invert(&self, y: &Point) -> Option<Point> {
        match (self, y) {
            (Bijection::Points(m), Point::Vertex(w)) => m.iter().find(|(_, &t)| t == *w).map(|(&s, _)| Point::Vertex(s)),
            (Bijection::Affine { scale, offset }, Point::Rat(q)) => Some(Point::Rat((q - offset) / scale)),
            _ => None,
        }
    }
}

/// An `(E, w)`-branching system with a finite or interval carrier.
#[derive(Debug, Clone)]
pub struct BranchingSystem {
    pub base: Arc<WeightedGraph>,
    pub carrier: CarrierSet,
    /// Names of finite carrier points (empty for interval carriers).
    pub point_names: Vec<String>,
    /// Finite points whose data may be incomplete (truncations).
    pub frontier: BTreeSet<usize>,
    pub d: Vec<CarrierSet>,
    pub r: BTreeMap<TaggedEdge, CarrierSet>,
    pub dtag: BTreeMap<TaggedEdge, CarrierSet>,
    pub g: BTreeMap<TaggedEdge, Bijection>,
}

impl BranchingSystem {
    pub fn point_name(&self, x: &Point) -> String {
        match x {
            Point::Vertex(v) => self.point_names.get(*v).cloned().unwrap_or_else(|| v.to_string()),
            Point::Rat(q) => show_rat(q),
        }
    }

    pub fn point(&self, name: &str) -> Option<Point> {
        match &self.carrier {
            CarrierSet::Points(_) => self.point_names.iter().position(|n| n == name).map(Point::Vertex),
            CarrierSet::Intervals(_) => parse_rat(name).map(Point::Rat),
        }
    }

    fn is_frontier(&self, x: &Point) -> bool {
        matches!(x, Point::Vertex(v) if self.frontier.contains(v))
    }

    fn vertex_of(&self, x: &Point) -> Option<usize> {
        self.d.iter().position(|s| s.contains(x))
    }

    /// Every finite point, or nothing for interval carriers.
    pub fn finite_points(&self) -> Vec<Point> {
        match &self.carrier {
            CarrierSet::Points(s) => s.iter().map(|&v| Point::Vertex(v)).collect(),
            CarrierSet::Intervals(_) => vec![],
        }
    }

    pub fn interior_points(&self) -> Vec<Point> {
        self.finite_points().into_iter().filter(|x| !self.is_frontier(x)).collect()
    }
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl RightAction for BranchingSystem {
    type Basis = Point;

    fn base(&self) -> &WeightedGraph {
        &self.base
    }

    fn step(&self, x: &Point, gen: Generator) -> Step<Point> {
        match gen {
            Generator::Vertex(v) => {
                if self.d.get(v).is_some_and(|s| s.contains(x)) {
                    Step::To(x.clone())
                } else {
                    Step::Zero
                }
            }
            Generator::Letter(l) => {
                let t = l.tagged();
                let (domain, sets) = match l.dir {
                    Dir::Real => (self.r.get(&t), &self.r),
                    Dir::Ghost => (self.dtag.get(&t), &self.dtag),
                };
                if domain.is_some_and(|s| s.contains(x)) {
                    let map = &self.g[&t];
                    let y = match l.dir {
                        Dir::Real => map.apply(x),
                        Dir::Ghost => map.invert(x),
                    };
                    return y.map_or(Step::Truncated, Step::To);
                }
                if !self.is_frontier(x) {
                    return Step::Zero;
                }
                // at a frontier point, a missing slot is unknown rather than zero
                let here = self.vertex_of(x);
                let slot_taken = sets.iter().any(|(t2, s)| {
                    s.contains(x)
                        && match l.dir {
                            Dir::Real => t2.tag == t.tag,
                            Dir::Ghost => t2.edge == t.edge,
                        }
                });
                let e = self.base.edge(t.edge);
                let relevant = match l.dir {
                    Dir::Real => here == Some(e.src) && t.tag <= self.base.vertex_weight(e.src),
                    Dir::Ghost => here == Some(e.dst),
                };
                if slot_taken || !relevant {
                    Step::Zero
                } else {
                    Step::Truncated
                }
            }
        }
    }

    fn basis_name(&self, x: &Point) -> String {
        self.point_name(x)
    }
}

fn violation(axiom: &str, subject: String, witness: String) -> BranchingError {
    BranchingError::Violation {
        axiom: axiom.to_string(),
        subject,
        witness,
    }
}

/// Checks that `parts` partition `whole`, ignoring missing coverage at
/// `relaxed` points. Returns a witness on failure.
fn check_partition(whole: &CarrierSet, parts: &[&CarrierSet], relaxed: &BTreeSet<usize>) -> Result<(), String> {
    match whole {
        CarrierSet::Points(w) => {
            let mut seen = BTreeSet::new();
            for p in parts {
                let CarrierSet::Points(s) = p else { return Err("mixed carrier kinds".into()) };
                for x in s {
                    if !w.contains(x) {
                        return Err(format!("point {x} outside the parent set"));
                    }
                    if !seen.insert(*x) {
                        return Err(format!("point {x} in two parts"));
                    }
                }
            }
            match w.iter().find(|x| !seen.contains(x) && !relaxed.contains(x)) {
                Some(x) => Err(format!("point {x} uncovered")),
                None => Ok(()),
            }
        }
        CarrierSet::Intervals(w) => {
            let mut acc = IntervalUnion::default();
            for p in parts {
                let CarrierSet::Intervals(s) = p else { return Err("mixed carrier kinds".into()) };
                let out = s.difference(w);
                if !out.is_empty() {
                    return Err(format!("{out} outside the parent set"));
                }
                let overlap = acc.intersection(s);
                if !overlap.is_empty() {
                    return Err(format!("overlap {overlap}"));
                }
                acc = acc.union(s);
            }
            let gap = w.difference(&acc);
            if gap.is_empty() {
                Ok(())
            } else {
                Err(format!("gap {gap}"))
            }
        }
    }
}

/// Verifies the three partition axioms and that every `g_{e_i}` is a
/// bijection `R_{e_i} → D_{e_i}`.
pub fn validate_branching(x: &BranchingSystem) -> Result<(), BranchingError> {
    let g = &x.base;
    let name = |id: String| id;
    let empty = x.carrier.empty_like();
    let d_refs: Vec<&CarrierSet> = x.d.iter().collect();
    // coverage of the carrier is never relaxed: every point lies over a vertex
    check_partition(&x.carrier, &d_refs, &BTreeSet::new())
        .map_err(|w| violation("vertex partition", "carrier".into(), w))?;
    let relaxed = &x.frontier;
    for v in 0..g.vertex_count() {
        for i in 1..=g.vertex_weight(v) {
            let parts: Vec<&CarrierSet> = g
                .out_edges(v)
                .iter()
                .filter(|&&e| g.edge(e).weight >= i)
                .map(|&e| x.r.get(&TaggedEdge { edge: e, tag: i }).unwrap_or(&empty))
                .collect();
            check_partition(&x.d[v], &parts, relaxed)
                .map_err(|w| violation("range partition", name(format!("{} slot {i}", g.vertex_id(v))), w))?;
        }
    }
    for (k, e) in g.edges().iter().enumerate() {
        let parts: Vec<&CarrierSet> = (1..=e.weight)
            .map(|i| x.dtag.get(&TaggedEdge { edge: k, tag: i }).unwrap_or(&empty))
            .collect();
        check_partition(&x.d[e.dst], &parts, relaxed)
            .map_err(|w| violation("domain partition", e.id.clone(), w))?;
    }
    for t in build_hat_graph(g) {
        let label = g.letter_name(&t.real());
        let r = x.r.get(&t).unwrap_or(&empty);
        let d = x.dtag.get(&t).unwrap_or(&empty);
        match (x.g.get(&t), r, d) {
            (None, r, d) if *r == empty && *d == empty => {}
            (None, _, _) => return Err(violation("bijection", label, "no map given".into())),
            (Some(Bijection::Points(m)), CarrierSet::Points(r), CarrierSet::Points(d)) => {
                let dom: BTreeSet<usize> = m.keys().copied().collect();
                let img: BTreeSet<usize> = m.values().copied().collect();
                if &dom != r {
                    return Err(violation("bijection", label, "domain differs from R".into()));
                }
                if img.len() != m.len() {
                    return Err(violation("bijection", label, "not injective".into()));
                }
                if &img != d {
                    return Err(violation("bijection", label, "image differs from D".into()));
                }
            }
            (Some(Bijection::Affine { scale, offset }), CarrierSet::Intervals(r), CarrierSet::Intervals(d)) => {
                if *scale <= BigRational::zero() {
                    return Err(violation("bijection", label, "non-positive scale".into()));
                }
                let img = IntervalUnion::new(
                    r.pieces()
                        .iter()
                        .map(|p| Interval::new(scale * &p.lo + offset, scale * &p.hi + offset))
                        .collect(),
                );
                if &img != d {
                    return Err(violation("bijection", label, format!("image {img} differs from D = {d}")));
                }
            }
            _ => return Err(violation("bijection", label, "map kind does not match carrier".into())),
        }
    }
    Ok(())
}

/// Vertex order and per-slot edge orders for [`interval_branching`].
#[derive(Debug, Clone, Default)]
pub struct IntervalOrders {
    /// Vertex indices in carrier order; default is the stored order.
    pub vertices: Option<Vec<usize>>,
    /// Order of `X^i_j` keyed by `(vertex, slot j)`; default is edge order.
    pub slots: BTreeMap<(usize, u32), Vec<usize>>,
}

/// The interval system: `D_{v^i} = [i-1, i)`, the slot-`j` range sets split
/// `D_{v^i}` evenly among `X^i_j`, and `D_{e_j}` is the `j`-th of `w(e)`
/// equal parts of `D_{r(e)}`. Each `g_{e_j}` is the increasing affine map.
pub fn interval_branching(g: &Arc<WeightedGraph>, orders: &IntervalOrders) -> Result<BranchingSystem, BranchingError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(BranchingError::EmptyGraph);
    }
    let order: Vec<usize> = orders.vertices.clone().unwrap_or_else(|| (0..n).collect());
    let mut pos = vec![0i64; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i as i64;
    }
    let unit = |i: i64| Interval::new(rat(i, 1), rat(i + 1, 1));
    let d: Vec<CarrierSet> = (0..n).map(|v| CarrierSet::Intervals(IntervalUnion::new(vec![unit(pos[v])]))).collect();
    let mut r_iv: BTreeMap<TaggedEdge, Interval> = BTreeMap::new();
    for v in 0..n {
        for j in 1..=g.vertex_weight(v) {
            let default: Vec<usize> = g.out_edges(v).iter().copied().filter(|&e| g.edge(e).weight >= j).collect();
            let slot = orders.slots.get(&(v, j)).cloned().unwrap_or(default);
            let m = slot.len() as i64;
            for (k, &e) in slot.iter().enumerate() {
                let k = k as i64;
                let lo = rat(pos[v], 1) + rat(k, m);
                let hi = rat(pos[v], 1) + rat(k + 1, m);
                r_iv.insert(TaggedEdge { edge: e, tag: j }, Interval::new(lo, hi));
            }
        }
    }
    let mut r = BTreeMap::new();
    let mut dtag = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for t in build_hat_graph(g) {
        let e = g.edge(t.edge);
        let w = e.weight as i64;
        let j = t.tag as i64;
        let base = rat(pos[e.dst], 1);
        let target = Interval::new(&base + rat(j - 1, w), &base + rat(j, w));
        let src = r_iv[&t].clone();
        let scale = target.len() / src.len();
        let offset = &target.lo - &scale * &src.lo;
        maps.insert(t, Bijection::Affine { scale, offset });
        r.insert(t, CarrierSet::Intervals(IntervalUnion::new(vec![src])));
        dtag.insert(t, CarrierSet::Intervals(IntervalUnion::new(vec![target])));
    }
    Ok(BranchingSystem {
        base: g.clone(),
        carrier: CarrierSet::Intervals(IntervalUnion::new(vec![Interval::new(rat(0, 1), rat(n as i64, 1))])),
        point_names: vec![],
        frontier: BTreeSet::new(),
        d,
        r,
        dtag,
        g: maps,
    })
}

/// The finite system on `F^0` read off a representation graph.
pub fn branching_from_rep_graph(f: &RepresentationGraph) -> BranchingSystem {
    let base = f.base_arc().clone();
    let n = f.vertex_count();
    let mut d = vec![BTreeSet::new(); base.vertex_count()];
    for u in 0..n {
        d[f.image(u)].insert(u);
    }
    let mut r: BTreeMap<TaggedEdge, BTreeSet<usize>> = BTreeMap::new();
    let mut dtag: BTreeMap<TaggedEdge, BTreeSet<usize>> = BTreeMap::new();
    let mut maps: BTreeMap<TaggedEdge, BTreeMap<usize, usize>> = BTreeMap::new();
    for t in build_hat_graph(&base) {
        r.insert(t, BTreeSet::new());
        dtag.insert(t, BTreeSet::new());
        maps.insert(t, BTreeMap::new());
    }
    for edge in f.edges() {
        r.get_mut(&edge.image).unwrap().insert(edge.src);
        dtag.get_mut(&edge.image).unwrap().insert(edge.dst);
        maps.get_mut(&edge.image).unwrap().insert(edge.src, edge.dst);
    }
    BranchingSystem {
        base,
        carrier: CarrierSet::Points((0..n).collect()),
        point_names: f.vertex_ids().to_vec(),
        frontier: f.frontier().clone(),
        d: d.into_iter().map(CarrierSet::Points).collect(),
        r: r.into_iter().map(|(k, v)| (k, CarrierSet::Points(v))).collect(),
        dtag: dtag.into_iter().map(|(k, v)| (k, CarrierSet::Points(v))).collect(),
        g: maps.into_iter().map(|(k, v)| (k, Bijection::Points(v))).collect(),
    }
}

/// `x · a` on finitely supported functions.
pub fn branching_act(
    system: &BranchingSystem,
    x: &ModuleVector<Point>,
    a: &AlgebraElement,
) -> Result<ModuleVector<Point>, BranchingError> {
    for (p, _) in x.terms() {
        if !system.carrier.contains(p) {
            return Err(BranchingError::PointOutsideCarrier(system.point_name(p)));
        }
    }
    act(system, x, a).map_err(|e| match e {
        AlgebraError::Field(f) => BranchingError::Field(f),
        AlgebraError::Truncated { vertex, .. } => BranchingError::Truncated { point: vertex },
        other => BranchingError::Violation {
            axiom: "action".into(),
            subject: "input".into(),
            witness: other.to_string(),
        },
    })
}

/// Number of random rationals drawn per interval piece.
pub const SAMPLES_PER_PIECE: usize = 16;

/// Sample points of an interval carrier. Every piece of every set in the
/// system gives its left endpoint and midpoint plus [`SAMPLES_PER_PIECE`] random
/// rationals drawn from a seeded generator.
pub fn sample_points(system: &BranchingSystem, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces: Vec<Interval> = Vec::new();
    let sets = system
        .d
        .iter()
        .chain(system.r.values())
        .chain(system.dtag.values())
        .chain(std::iter::once(&system.carrier));
    for s in sets {
        if let CarrierSet::Intervals(u) = s {
            pieces.extend(u.pieces().iter().cloned());
        }
    }
    let mut out = BTreeSet::new();
    for p in pieces {
        out.insert(p.lo.clone());
        out.insert((&p.lo + &p.hi) / rat(2, 1));
        for _ in 0..SAMPLES_PER_PIECE {
            let den: i64 = rng.gen_range(1..=997);
            let k: i64 = rng.gen_range(0..den);
            out.insert(&p.lo + p.len() * rat(k, den));
        }
    }
    out.into_iter().map(Point::Rat).collect()
}

/// Checks the defining relations under the branching action: on every
/// finite point, or on sampled points of an interval carrier.
pub fn check_branching_relations(
    system: &BranchingSystem,
    field: Field,
    seed: u64,
) -> Result<RelationReport, RelationViolation> {
    let points = match &system.carrier {
        CarrierSet::Points(_) => system.finite_points(),
        CarrierSet::Intervals(_) => sample_points(system, seed),
    };
    check_relations_on(system, points, field)
}

/// A module given by how generators move the elements of a basis `B`.
/// A missing entry is unknown; only frontier rows may have unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTable {
    pub base: Arc<WeightedGraph>,
    pub field: Field,
    pub basis: Vec<String>,
    /// `(b, x) ↦ Some(b')` for `b·x = b'`, `None` for `b·x = 0`.
    pub entries: BTreeMap<(usize, Generator), Option<usize>>,
    pub frontier: BTreeSet<usize>,
}

impl RightAction for ActionTable {
    type Basis = usize;

    fn base(&self) -> &WeightedGraph {
        &self.base
    }

    fn step(&self, b: &usize, gen: Generator) -> Step<usize> {
        match self.entries.get(&(*b, gen)) {
            Some(Some(t)) => Step::To(*t),
            Some(None) => Step::Zero,
            None => Step::Truncated,
        }
    }

    fn basis_name(&self, b: &usize) -> String {
        self.basis[*b].clone()
    }
}

/// The action table of `V_F`; entries reaching past the frontier are left out.
pub fn action_table_of(f: &RepresentationGraph, field: Field) -> ActionTable {
    let gens = generators(f.base());
    let mut entries = BTreeMap::new();
    for u in 0..f.vertex_count() {
        for &x in &gens {
            match f.step(&u, x) {
                Step::To(w) => {
                    entries.insert((u, x), Some(w));
                }
                Step::Zero => {
                    entries.insert((u, x), None);
                }
                Step::Truncated => {}
            }
        }
    }
    ActionTable {
        base: f.base_arc().clone(),
        field,
        basis: f.vertex_ids().to_vec(),
        entries,
        frontier: f.frontier().clone(),
    }
}

/// Whether the per-term vanishing test (iv) also runs in characteristic 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReconstructMode {
    /// Test (iv) only in positive characteristic.
    #[default]
    Strict,
    /// Test (iv) in every characteristic.
    Lenient,
}

/// Relation check of a table over its own field, on rows without unknowns.
pub fn check_table_relations(t: &ActionTable) -> Result<RelationReport, RelationViolation> {
    check_relations_on(t, (0..t.basis.len()).filter(|b| !t.frontier.contains(b)), t.field)
}

fn compose(t: &ActionTable, b: usize, word: &[Generator]) -> Step<usize> {
    let mut at = b;
    for &x in word {
        at = match t.step(&at, x) {
            Step::To(y) => y,
            other => return other,
        };
    }
    Step::To(at)
}

/// Builds a representation graph from a module table, or explains why the
/// table does not come from one.
pub fn reconstruct_rep_graph(t: &ActionTable, mode: ReconstructMode) -> Result<RepresentationGraph, ReconstructError> {
    let g = &t.base;
    let n = t.basis.len();
    if n == 0 {
        return Err(ReconstructError::EmptyBasis);
    }
    let gens = generators(g);
    let malformed = |b: usize, x: Generator, detail: &str| ReconstructError::Malformed {
        basis: t.basis.get(b).cloned().unwrap_or_else(|| b.to_string()),
        generator: x.name(g),
        detail: detail.to_string(),
    };
    for (&(b, x), target) in &t.entries {
        if b >= n || target.is_some_and(|y| y >= n) {
            return Err(malformed(b, x, "basis index out of range"));
        }
        if let (Generator::Vertex(_), Some(y)) = (x, target) {
            if *y != b {
                return Err(malformed(b, x, "a vertex must fix a basis element or kill it"));
            }
        }
        if let Generator::Vertex(v) = x {
            if v >= g.vertex_count() {
                return Err(malformed(b, x, "unknown vertex"));
            }
        }
    }
    for b in 0..n {
        if t.frontier.contains(&b) {
            continue;
        }
        for &x in &gens {
            if !t.entries.contains_key(&(b, x)) {
                return Err(malformed(b, x, "missing entry on a complete row"));
            }
        }
    }
    // (iii)
    for b in 0..n {
        let alive = gens.iter().any(|&x| matches!(t.entries.get(&(b, x)), Some(Some(_))));
        if !alive && !t.frontier.contains(&b) {
            return Err(ReconstructError::AssumptionIII(t.basis[b].clone()));
        }
    }
    // v-property
    let mut image = vec![0usize; n];
    for b in 0..n {
        let fixing: Vec<usize> = (0..g.vertex_count())
            .filter(|&v| t.entries.get(&(b, Generator::Vertex(v))) == Some(&Some(b)))
            .collect();
        if fixing.len() != 1 {
            return Err(ReconstructError::VPropertyViolation {
                basis: t.basis[b].clone(),
                detail: format!("fixed by {} vertices", fixing.len()),
            });
        }
        image[b] = fixing[0];
    }
    // (iv)
    if t.field.characteristic() != 0 || mode == ReconstructMode::Lenient {
        let l = |edge: usize, tag: u32, dir: Dir| Generator::Letter(Letter { edge, tag, dir });
        for b in 0..n {
            for v in 0..g.vertex_count() {
                let wv = g.vertex_weight(v);
                let out = g.out_edges(v);
                let mut words: Vec<Vec<Generator>> = Vec::new();
                for i in 1..=wv {
                    for &e in out {
                        for &f in out {
                            if e != f && g.edge(e).weight >= i && g.edge(f).weight >= i {
                                words.push(vec![l(e, i, Dir::Ghost), l(f, i, Dir::Real)]);
                            }
                        }
                    }
                }
                for &e in out {
                    for i in 1..=g.edge(e).weight {
                        for j in 1..=g.edge(e).weight {
                            if i != j {
                                words.push(vec![l(e, i, Dir::Real), l(e, j, Dir::Ghost)]);
                            }
                        }
                    }
                }
                for w in words {
                    if let Step::To(y) = compose(t, b, &w) {
                        return Err(ReconstructError::AssumptionIVViolation {
                            basis: t.basis[b].clone(),
                            word: w.iter().map(|x| x.name(g)).collect::<Vec<_>>().join(" "),
                            value: t.basis[y].clone(),
                        });
                    }
                }
            }
        }
    }
    check_table_relations(t)?;
    let mut edges = Vec::new();
    for b in 0..n {
        for te in build_hat_graph(g) {
            if let Some(Some(y)) = t.entries.get(&(b, Generator::Letter(te.real()))) {
                edges.push(RepEdge {
                    id: format!("g_{},{}", t.basis[b], g.letter_name(&te.real())),
                    src: b,
                    dst: *y,
                    image: te,
                });
            }
        }
    }
    let f = RepresentationGraph::from_indices(
        g.clone(),
        t.basis.iter().cloned().zip(image).collect(),
        edges,
        t.frontier.clone(),
    )?;
    f.validate().map_err(ReconstructError::ValidateFailed)?;
    Ok(f)
}

/// One displayed sum of the characteristic-2 example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayedSum {
    pub label: String,
    /// Value of each summand applied to the basis element.
    pub terms: Vec<FieldValue>,
    pub total: FieldValue,
    pub expected: FieldValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Char2Report {
    pub sums: Vec<DisplayedSum>,
    pub all_sums_match: bool,
    pub reconstruct: Result<(), ReconstructError>,
    pub rational_relations: Result<RelationReport, RelationViolation>,
}

/// The one-dimensional table over one vertex with loops `e`, `f` of weight
/// 2 where `e_2` and `f_1^*` kill the basis element and every other
/// generator fixes it.
pub fn char2_table(field: Field) -> ActionTable {
    let base = Arc::new(WeightedGraph::from_spec(&["v"], &[("e", "v", "v", 2), ("f", "v", "v", 2)]).unwrap());
    let mut entries = BTreeMap::new();
    for x in generators(&base) {
        let dead = matches!(x, Generator::Letter(l)
            if (l.edge == 0 && l.tag == 2 && l.dir == Dir::Real) || (l.edge == 1 && l.tag == 1 && l.dir == Dir::Ghost));
        entries.insert((0, x), if dead { None } else { Some(0) });
    }
    ActionTable {
        base,
        field,
        basis: vec!["1".into()],
        entries,
        frontier: BTreeSet::new(),
    }
}

/// Evaluates the eight displayed sums over `F_2`, runs reconstruction, and
/// checks the same table's relations over `Q`.
pub fn verify_char2_example() -> Char2Report {
    let f2 = Field::Prime(2);
    let t = char2_table(f2);
    let l = |edge: usize, tag: u32, dir: Dir| Generator::Letter(Letter { edge, tag, dir });
    let (e, f) = (0, 1);
    let (re, gh) = (Dir::Real, Dir::Ghost);
    // (label, summands, expected)
    let displayed: [(&str, [[Generator; 2]; 2], i64); 8] = [
        ("e1* e1 + e2* e2", [[l(e, 1, gh), l(e, 1, re)], [l(e, 2, gh), l(e, 2, re)]], 1),
        ("e1 e1* + f1 f1*", [[l(e, 1, re), l(e, 1, gh)], [l(f, 1, re), l(f, 1, gh)]], 1),
        ("f1* f1 + f2* f2", [[l(f, 1, gh), l(f, 1, re)], [l(f, 2, gh), l(f, 2, re)]], 1),
        ("e2 e2* + f2 f2*", [[l(e, 2, re), l(e, 2, gh)], [l(f, 2, re), l(f, 2, gh)]], 1),
        ("e1* f1 + e2* f2", [[l(e, 1, gh), l(f, 1, re)], [l(e, 2, gh), l(f, 2, re)]], 0),
        ("e1 e2* + f1 f2*", [[l(e, 1, re), l(e, 2, gh)], [l(f, 1, re), l(f, 2, gh)]], 0),
        ("f1* e1 + f2* e2", [[l(f, 1, gh), l(e, 1, re)], [l(f, 2, gh), l(e, 2, re)]], 0),
        ("e2 e1* + f2 f1*", [[l(e, 2, re), l(e, 1, gh)], [l(f, 2, re), l(f, 1, gh)]], 0),
    ];
    let mut sums = Vec::new();
    for (label, summands, expected) in displayed {
        let terms: Vec<FieldValue> = summands
            .iter()
            .map(|w| match compose(&t, 0, w) {
                Step::To(_) => f2.one(),
                _ => f2.zero(),
            })
            .collect();
        let total = terms.iter().fold(f2.zero(), |a, b| a + b.clone());
        sums.push(DisplayedSum {
            label: label.to_string(),
            terms,
            total,
            expected: f2.from_i64(expected),
        });
    }
    let all_sums_match = sums.iter().all(|s| s.total == s.expected);
    let reconstruct = reconstruct_rep_graph(&t, ReconstructMode::Strict).map(|_| ());
    let rational_relations = check_table_relations(&char2_table(Field::Rational));
    Char2Report {
        sums,
        all_sums_match,
        reconstruct,
        rational_relations,
    }
}

/// Used by the CLI to show a carrier subset.
pub fn describe_set(system: &BranchingSystem, s: &CarrierSet) -> Vec<String> {
    match s {
        CarrierSet::Points(p) => p.iter().map(|&v| system.point_name(&Point::Vertex(v))).collect(),
        CarrierSet::Intervals(u) => u.pieces().iter().map(ToString::to_string).collect(),
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(v) => write!(f, "#{v}"),
            Point::Rat(q) => write!(f, "{}", show_rat(q)),
        }
    }
}

/// `1` as a rational, for callers building affine maps.
pub fn rat_one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn two_loops() -> Arc<WeightedGraph> {
        Arc::new(WeightedGraph::from_spec(&["v"], &[("e", "v", "v", 1), ("f", "v", "v", 1)]).unwrap())
    }

    #[test]
    fn two_loop_interval_system() {
        let x = interval_branching(&two_loops(), &IntervalOrders::default()).unwrap();
        validate_branching(&x).unwrap();
        let e1 = TaggedEdge { edge: 0, tag: 1 };
        assert_eq!(x.r[&e1], CarrierSet::Intervals(IntervalUnion::new(vec![Interval::new(rat(0, 1), rat(1, 2))])));
        assert_eq!(x.g[&e1], Bijection::Affine { scale: rat(2, 1), offset: rat(0, 1) });
        let q = Field::Rational;
        let delta = |a, b| ModuleVector::basis(q, Point::Rat(rat(a, b)));
        let act_e1 = AlgebraElement::letter(q, &x.base, e1.real());
        assert_eq!(branching_act(&x, &delta(1, 4), &act_e1).unwrap(), delta(1, 2));
        assert!(branching_act(&x, &delta(1, 2), &act_e1).unwrap().is_zero());
        assert!(matches!(
            branching_act(&x, &delta(3, 2), &act_e1),
            Err(BranchingError::PointOutsideCarrier(_))
        ));
    }

    #[test]
    fn edgeless_vertex() {
        let g = Arc::new(WeightedGraph::from_spec(&["v"], &[]).unwrap());
        let x = interval_branching(&g, &IntervalOrders::default()).unwrap();
        assert!(x.r.is_empty());
        validate_branching(&x).unwrap();
    }

    #[test]
    fn moved_point_is_caught() {
        let mut x = branching_from_rep_graph(&fixtures::f5());
        let e1 = TaggedEdge { edge: 0, tag: 1 };
        let f2 = TaggedEdge { edge: 1, tag: 1 };
        // move point 0 from R_{e_1} into R_{f_1}
        if let Some(CarrierSet::Points(s)) = x.r.get_mut(&e1) {
            s.remove(&0);
        }
        x.r.insert(f2, CarrierSet::Points([0].into()));
        assert!(matches!(validate_branching(&x), Err(BranchingError::Violation { .. })));
    }

    #[test]
    fn char2_example() {
        let r = verify_char2_example();
        assert!(r.all_sums_match);
        match r.reconstruct {
            Err(ReconstructError::AssumptionIVViolation { basis, word, .. }) => {
                assert_eq!((basis.as_str(), word.as_str()), ("1", "e[1]* f[1]"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.rational_relations.is_err());
    }

    #[test]
    fn empty_table_rejected() {
        let mut t = action_table_of(&fixtures::f7(), Field::Rational);
        t.basis.clear();
        t.entries.clear();
        assert!(matches!(reconstruct_rep_graph(&t, ReconstructMode::Strict), Err(ReconstructError::EmptyBasis)));
    }
}
