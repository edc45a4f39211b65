//! Exact-arithmetic kernel for configurations of conics and quadrics
//! assigned to the vertices of a combinatorial cube so that neighbors are in
//! double contact (ring contact in space) and each face's chords of contact
//! concur.
//!
//! The crate constructs such configurations from bordered-matrix
//! subdeterminants, completes seven-vertex configurations to eight, lifts
//! plane configurations to space and slices them back, and packages the
//! classical incidence theorems (Pappus, Pascal/Braikenridge–Maclaurin,
//! Brianchon, Desargues, dual Salmon, Monge) as machine-checked instances.

pub mod completion;
pub mod conic;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod lift3d;
pub mod matrix;
pub mod poly;
pub mod projective;
pub mod roots;
pub mod scalar;
pub mod scenarios;
pub mod selftest;

pub use conic::{double_contact, pencil_degenerates, polar, ring_contact, CompleteConic, CompleteQuadric, Contact};
pub use engine::{build_lattice, IndexSet, PenroseLattice, PenroseParams};
pub use error::{Error, Result};
pub use matrix::{extract_double_line, poly_to_sym, sym_to_poly, PolyMatrix, Sign, SymMatrix};
pub use poly::{HomogeneousPoly, Monomial};
pub use projective::{concurrent, join2, meet2, Line3D, ProjHyperplane, ProjPoint};
pub use scalar::{Comparator, Mode, Scalar};
