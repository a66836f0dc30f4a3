//! Semigroups inside a pointed rational cone whose gaps lie in a dilated
//! window polytope.
//!
//! With `n` nonzero elements in `α · P`, such semigroups correspond to the
//! lattice points of `α · P_τ^{(C,P)}` over all addition tables `τ`. Each
//! `P_τ^{(C,P)}` is a union of disjoint polyhedra with mixed open and closed
//! faces: lexicographic order, nonzero-ness and "the sum leaves `P`" are not
//! convex conditions, so each is split into convex cells.

mod cone;
mod semigroup;
mod text;
mod union;
mod window;

pub use cone::Cone;
pub use semigroup::{affine_addition_table, decode_affine, enumerate_affine_oracle, AffineSemigroup};
pub use text::{parse_cone, parse_window};
pub use union::{
    all_symmetric_tables, build_affine_union, complement_decompose, count_affine, lex_decompose, piece_count,
    AffineCounter, AffinePiece, DEFAULT_PIECE_CAP,
};
pub use window::{compatibility_violation, Provenance, WindowPolytope};

use crate::polyhedra::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AffineError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone is not pointed: facet normals do not span the space")]
    NotPointed,
    #[error("generator {index} is zero or violates a facet inequality")]
    GeneratorOutsideCone { index: usize },
    #[error("apex must be a nonzero point of the cone")]
    ApexOutsideCone,
    #[error("outer cone does not contain the cone")]
    OuterDoesNotContainCone,
    #[error("w is not positive on generator {index}")]
    NotPositiveOnGenerator { index: usize },
    #[error("window constraint {constraint} is tight at the origin but is not a cone facet")]
    NoOriginNeighborhood { constraint: usize },
    #[error("window is unbounded")]
    UnboundedWindow,
    #[error("raw windows are disabled")]
    RawWindowRefused,
    #[error("{pieces} pieces exceed the cap of {cap}")]
    PieceCapExceeded { pieces: u64, cap: u64 },
    #[error("closure violated: {a:?} + {b:?} lies in the window but is not an element")]
    ClosureViolation { a: Vec<i64>, b: Vec<i64> },
    #[error("element {0:?} is zero or outside the cone or window")]
    BadElement(Vec<i64>),
    #[error("elements are not strictly lex-increasing")]
    NotLexSorted,
    #[error("invalid addition table: {0}")]
    InvalidTable(String),
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
