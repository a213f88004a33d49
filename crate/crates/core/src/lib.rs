//! Toric Sylvester forms and the elimination machinery built on them.
//!
//! The crate works in the Cox ring of a smooth complete toric variety with a
//! distinguished maximal cone `σ`. Its variables are written `x1..xn` for the
//! rays of `σ` and `z1..zr` for the remaining rays. On top of that graded
//! ring it provides:
//!
//! * [`lattice`]: fans, facet presentations and lattice-point enumeration;
//! * [`toric`]: the grading map, classes and monomial bases;
//! * [`polyalg`]: exact fields, sparse polynomials and dense linear algebra;
//! * [`sylvester`]: decompositions, Sylvester forms and duality checks;
//! * [`elimination`]: Macaulay and hybrid elimination matrices;
//! * [`resrescomplex`]: Koszul strands, sparse resultants and toric residues.
//!
//! All arithmetic is exact. Generic statements are checked by specializing
//! coefficients at random points of a field.

pub mod elimination;
pub mod error;
pub mod lattice;
pub mod polyalg;
pub mod resrescomplex;
pub mod sylvester;
pub mod toric;

pub use error::{
    ComplexError, EliminationError, Error, LatticeError, PolyError, SylvesterError, ToricError,
};
pub use lattice::{Fan, FacetPresentation, FanReport, LatticeVector};
pub use polyalg::{Field, Matrix, PrimeField, Rationals, SparsePoly};
pub use toric::{DivisorClass, GradedMonomial, ToricContext};
