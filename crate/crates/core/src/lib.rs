//! Toric code stabilizer states as graph states: the reduction of the toric
//! tableau to graph standard form, its star/half decomposition, logarithmic
//! depth preparation circuits, and small-scale statevector verification.
//!
//! Qubit, vertex and lattice labels are 1-based throughout. Bit containers
//! ([`gf2::BitVec`], [`gf2::BitMat`]) index from 0.

pub mod circuit;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod lattice;
pub mod sim;
pub mod standard_form;
pub mod symplectic;
pub mod verify;

pub use error::{Error, Result};
pub use gf2::{BitMat, BitVec};
pub use lattice::{Dir, LatticeParams, QubitCoord};
pub use symplectic::{PauliOp, Tableau};
