//! Cubical knots in the skeleta of the integer cubulation, the subdivision
//! and face-boundary exchange moves, level-set slicing of cylinders in
//! `Z^5`, and bounded search for move certificates.

pub mod engine;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod knot;
pub mod lattice;
pub mod moves;
pub mod search;
pub mod slicer;
pub mod sweep;

pub use engine::{enumerate_face_moves, MoveEngine};
pub use error::{Error, Result};
pub use knot::{
    build_neighborhood, classify_intersection, is_tubular, validate_knot, CellComplex,
    IntersectionClass, KnotDiagram, KnotReport,
};
pub use lattice::{Adjacency, LatticeCell, LatticeContext};
pub use moves::{
    apply_move, check_move, is_legal, subdivide_knot, FaceBoundaryMove, IllegalReason,
    MoveSequence, ReplayError, Step,
};
pub use search::{bfs_search, canonical_key, random_walk, replay, CanonicalKey, SearchOptions};
pub use slicer::{SlicedComplex, SquareType};
pub use sweep::{sweep, SweepOptions};
