//! Error types shared across the crate.

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unrecognised field `{0}` (expected `q` or `fp:<prime>`)")]
    BadSpec(String),
    #[error("{value} is not invertible in {field}")]
    NonInvertible { value: String, field: Field },
    #[error("field mismatch: {left} vs {right}")]
    Mismatch { left: Field, right: Field },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("edge `{0}` has weight 0; weights must be positive")]
    ZeroWeight(String),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("letters are not composable at position {0}")]
    NotComposable(usize),
    #[error("malformed homomorphism: {0}")]
    MalformedHomomorphism(String),
}

/// Which lifting axiom of a representation graph failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// Exactly one emitted edge per tag up to the vertex weight.
    Emit,
    /// Exactly one received edge per incoming structure edge.
    Receive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomWitness {
    Tag(u32),
    Structure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Missing,
    Duplicated,
}

/// First failure found by `RepresentationGraph::validate`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("axiom {} violated at vertex `{vertex}`: {kind:?} {witness:?}", axiom_number(*.axiom))]
pub struct Violation {
    pub axiom: Axiom,
    pub vertex: String,
    pub witness: AxiomWitness,
    pub kind: ViolationKind,
}

fn axiom_number(a: Axiom) -> u8 {
    match a {
        Axiom::Emit => 1,
        Axiom::Receive => 2,
    }
}

impl Violation {
    pub fn axiom_number(&self) -> u8 {
        axiom_number(self.axiom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge `{edge}`: tag {tag} outside 1..={weight}")]
    TagOutOfRange { edge: String, tag: u32, weight: u32 },
    #[error("edge `{edge}` is not a homomorphism: {detail}")]
    NotHomomorphism { edge: String, detail: String },
    #[error("representation graphs over different base graphs")]
    BaseMismatch,
    #[error("partition is not admissible ({condition}): `{left}` vs `{right}`")]
    NotAdmissible {
        condition: String,
        left: String,
        right: String,
    },
    #[error("partition does not cover the vertex set: {0}")]
    BadPartition(String),
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// A relation of the algebra that failed on a basis element.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("relation ({relation}) fails at `{basis}` for {indices}: lhs {lhs}, rhs {rhs}")]
pub struct RelationViolation {
    pub relation: u8,
    pub basis: String,
    pub indices: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("action of `{monomial}` on `{vertex}` reaches the truncation frontier")]
    Truncated { vertex: String, monomial: String },
    #[error("vertex `{0}` is not in the module basis")]
    UnknownBasis(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("no separating word found for support {0}")]
    NoSeparatingWord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at byte {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("tag {tag} of `{edge}` outside 1..={weight} at byte {position}")]
    TagOutOfRange {
        edge: String,
        tag: u32,
        weight: u32,
        position: usize,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChenError {
    #[error("graph has an edge of weight > 1: `{0}`")]
    NotWeightOne(String),
    #[error("cycle is empty, not closed, or not a simple (primitive) closed path")]
    NotSimpleCycle,
    #[error("vertex `{0}` is not a sink")]
    NotASink(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchingError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("point {0} lies outside the carrier")]
    PointOutsideCarrier(String),
    #[error("action on {point} reaches missing data at the truncation frontier")]
    Truncated { point: String },
    #[error("{axiom} violated for {subject}: witness {witness}")]
    Violation {
        axiom: String,
        subject: String,
        witness: String,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("empty basis: a nonempty basis is required")]
    EmptyBasis,
    #[error("table entry for `{basis}` and generator `{generator}` is malformed: {detail}")]
    Malformed {
        basis: String,
        generator: String,
        detail: String,
    },
    #[error("assumption (iii) fails: `{0}` is annihilated by every generator")]
    AssumptionIII(String),
    #[error("v-property fails at `{basis}`: {detail}")]
    VPropertyViolation { basis: String, detail: String },
    #[error("assumption (iv) fails: `{basis}`·({word}) = `{value}` is nonzero")]
    AssumptionIVViolation {
        basis: String,
        word: String,
        value: String,
    },
    #[error(transparent)]
    RelationViolation(#[from] RelationViolation),
    #[error("reconstructed graph is invalid: {0}")]
    ValidateFailed(Violation),
    #[error(transparent)]
    Rep(#[from] RepError),
}
