//! Exact treatment of the periodic XXZ chain on a fixed down-spin sector:
//! basis enumeration, the Hamiltonian action, symmetry reduction under the
//! shift/reflection group, and nullspace extraction of the candidate
//! eigenvector with eigenvalue -3N/4.

pub mod basis;
pub mod ground;
pub mod orbit;

pub use basis::{enumerate_sector, hamiltonian_action, SpinBasisState, SpinError};
pub use ground::{
    check_operator_symmetries, decrement_sum, ground_candidate, ground_candidate_full,
    increment_sum, GroundState, SectorVector,
};
pub use orbit::{orbit_decompose, SymmetryOrbit};
