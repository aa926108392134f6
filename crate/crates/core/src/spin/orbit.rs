//! Orbits of sector states under the dihedral group generated by the
//! shift S and the reflection R.
//!
//! The target eigenvector is invariant under both, so its components are
//! constant on orbits; reducing to one representative per orbit shrinks
//! the exact solve from `C(N, K)` unknowns to roughly `C(N, K) / 2N`.

use std::collections::HashSet;

use super::basis::{enumerate_sector, SpinBasisState};

/// One orbit: the lexicographically least member, all members, and the
/// orbit size (a divisor of 2N).
#[derive(Debug, Clone)]
pub struct SymmetryOrbit {
    pub representative: SpinBasisState,
    pub members: Vec<SpinBasisState>,
    pub size: usize,
}

/// All states reachable from `state` by shifts and reflected shifts,
/// sorted lexicographically (the first entry is the representative).
pub fn orbit_members(state: &SpinBasisState) -> Vec<SpinBasisState> {
    let mut seen: HashSet<u32> = HashSet::new();
    let mut members = Vec::new();
    let mut current = *state;
    for _ in 0..state.n() {
        for candidate in [current, current.reflect()] {
            if seen.insert(candidate.mask()) {
                members.push(candidate);
            }
        }
        current = current.shift();
    }
    members.sort_by(|a, b| a.cmp_lex(b));
    members
}

/// The lexicographically least member of the orbit of `state`.
pub fn canonical(state: &SpinBasisState) -> SpinBasisState {
    let mut best = *state;
    let mut current = *state;
    for _ in 0..state.n() {
        for candidate in [current, current.reflect()] {
            if candidate.cmp_lex(&best).is_lt() {
                best = candidate;
            }
        }
        current = current.shift();
    }
    best
}

/// Partitions the (N, K) sector into orbits, ordered by representative.
pub fn orbit_decompose(n: u32, k: u32) -> Vec<SymmetryOrbit> {
    let mut seen: HashSet<u32> = HashSet::new();
    let mut orbits = Vec::new();
    for state in enumerate_sector(n, k) {
        if seen.contains(&state.mask()) {
            continue;
        }
        let members = orbit_members(&state);
        debug_assert_eq!(members[0], canonical(&state));
        for member in &members {
            seen.insert(member.mask());
        }
        orbits.push(SymmetryOrbit {
            representative: members[0],
            size: members.len(),
            members,
        });
    }
    orbits
}
