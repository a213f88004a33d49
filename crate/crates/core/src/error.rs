//! Error families, one per module, plus the crate-level wrapper.

use thiserror::Error;

use crate::lattice::FanReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("fan has no rays")]
    NoRays,
    #[error("rays live in a lattice of rank 0")]
    ZeroDimension,
    #[error("ray {ray} has {found} coordinates, expected {expected}")]
    RayDimension { ray: usize, expected: usize, found: usize },
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("cone {cone} has {found} rays, expected {expected}")]
    ConeSize { cone: usize, expected: usize, found: usize },
    #[error("cone {cone} repeats a ray")]
    RepeatedRay { cone: usize },
    #[error("cone {cone} references ray {index} but the fan has {rays} rays")]
    RayIndex { cone: usize, index: usize, rays: usize },
    #[error("{cone:?} is not a full-size cone of this fan")]
    BadCone { cone: Vec<usize> },
    #[error("cone {cone:?} has a singular ray matrix")]
    SingularCone { cone: Vec<usize> },
    #[error("vertex dual to cone {cone:?} is not a lattice point")]
    NonLatticeVertex { cone: Vec<usize> },
    #[error("presentation has {found} entries, the fan has {expected} rays")]
    PresentationLength { expected: usize, found: usize },
    #[error("summand {which} of the Minkowski sum is not nef")]
    NonNefSummand { which: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("fan is not smooth, complete and torus-factor free: {0:?}")]
    InvalidFan(FanReport),
    #[error("{0:?} is not a maximal cone of the fan")]
    SigmaNotMaxCone(Vec<usize>),
    #[error("exponent vector has length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("class has length {found}, expected {expected}")]
    ClassLength { expected: usize, found: usize },
    #[error("lattice point {point:?} gives a negative exponent")]
    NegativeExponent { point: Vec<i64> },
    #[error("cannot parse monomial {0:?}")]
    ParseMonomial(String),
    #[error("cannot parse divisor class {0:?}")]
    ParseClass(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("class mismatch: {left} vs {right}")]
    ClassMismatch { left: String, right: String },
    #[error("term {term} has class {found}, expected {expected}")]
    InhomogeneousTerm { term: String, found: String, expected: String },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("monomial {0} is not in the basis")]
    OutsideBasis(String),
    #[error("malformed matrix export: {0}")]
    Export(String),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SylvesterError {
    #[error("the context lacks the positivity property for the chosen cone")]
    NoPositivity,
    #[error("system has {found} polynomials, expected {expected}")]
    SystemSize { expected: usize, found: usize },
    #[error("class {nu} violates the decomposition degree condition")]
    DegreeCondition { nu: String },
    #[error("term {term} of polynomial {poly} is divisible by none of the divisors")]
    Unroutable { poly: usize, term: String },
    #[error("polytope of polynomial {index} is not full-dimensional")]
    LowerDimensional { index: usize },
    #[error("routing priority {0:?} is not a permutation of the targets")]
    BadRouting(Vec<usize>),
    #[error("monomial class {found} differs from {expected}")]
    MonomialClass { expected: String, found: String },
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EliminationError {
    #[error("degree {alpha} is not admitted: {}", reasons.join("; "))]
    NotAdmitted { alpha: String, reasons: Vec<String> },
    #[error("overdetermined construction rejected: {0}")]
    Overdetermined(String),
    #[error("system has {found} polynomials, expected at least {expected}")]
    SystemSize { expected: usize, found: usize },
    #[error("pivot set {0:?} is invalid")]
    BadPivotSet(Vec<usize>),
    #[error("no nonzero form of class {0} vanishes at the given points")]
    NoFittedForms(String),
    #[error("torus point {0} has the wrong length or a zero coordinate")]
    BadPoint(usize),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Sylvester(#[from] SylvesterError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("the last map of the strand is not surjective")]
    NotSurjective,
    #[error("no admissible minor at level {level}; the strand is not exact here")]
    Degenerate { level: usize },
    #[error("the resultant vanishes at this specialization")]
    ResultantVanishes,
    #[error("class {found} does not match the expected {expected}")]
    ClassMismatch { expected: String, found: String },
    #[error("{0} has no monomials")]
    EmptyBasis(String),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Sylvester(#[from] SylvesterError),
    #[error(transparent)]
    Elimination(#[from] EliminationError),
}

/// Any error raised by the library, tagged with the module it came from.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice: {0}")]
    Lattice(#[from] LatticeError),
    #[error("toric: {0}")]
    Toric(#[from] ToricError),
    #[error("polyalg: {0}")]
    Poly(#[from] PolyError),
    #[error("sylvester: {0}")]
    Sylvester(#[from] SylvesterError),
    #[error("elimination: {0}")]
    Elimination(#[from] EliminationError),
    #[error("resrescomplex: {0}")]
    Complex(#[from] ComplexError),
}

impl Error {
    pub fn module(&self) -> &'static str {
        match self {
            Error::Lattice(_) => "lattice",
            Error::Toric(_) => "toric",
            Error::Poly(_) => "polyalg",
            Error::Sylvester(_) => "sylvester",
            Error::Elimination(_) => "elimination",
            Error::Complex(_) => "resrescomplex",
        }
    }
}
