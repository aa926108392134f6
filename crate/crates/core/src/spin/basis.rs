//! Sector basis states and the Hamiltonian action.
//!
//! A basis state of the length-N chain with K down spins is written by the
//! positions `n_1 < n_2 < ... < n_K` of the minuses. Internally a state is
//! a bitmask with bit `i` set when site `i + 1` carries a minus, which
//! keeps the shift and reflection actions cheap.

use std::fmt;

use thiserror::Error;

use crate::rational::{rat, ratio, Rational};

/// Chains longer than this do not fit the mask representation.
pub const MAX_SITES: u32 = 31;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpinError {
    #[error("chain length must be odd and between 3 and {MAX_SITES}, got {0}")]
    InvalidChainLength(u32),
    #[error("invalid minus positions: {0}")]
    InvalidPositions(String),
    #[error("expected {expected} positions, got {got}")]
    WrongCardinality { expected: u32, got: u32 },
    #[error("eigenvalue nullspace has dimension {found}, expected 1")]
    NullspaceDimension { found: usize },
    #[error("vector is not constant on symmetry orbits")]
    NotOrbitConstant,
}

/// Basis state `|n_1, ..., n_K>` of the K-minus sector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinBasisState {
    n: u32,
    mask: u32,
}

impl SpinBasisState {
    /// Builds a state from strictly increasing positions in `1..=n`.
    pub fn new(n: u32, positions: &[u32]) -> Result<Self, SpinError> {
        if n == 0 || n > MAX_SITES {
            return Err(SpinError::InvalidChainLength(n));
        }
        let mut mask = 0u32;
        let mut last = 0u32;
        for &p in positions {
            if p < 1 || p > n {
                return Err(SpinError::InvalidPositions(format!(
                    "position {p} outside 1..={n}"
                )));
            }
            if p <= last {
                return Err(SpinError::InvalidPositions(format!(
                    "positions not strictly increasing at {p}"
                )));
            }
            mask |= 1 << (p - 1);
            last = p;
        }
        Ok(SpinBasisState { n, mask })
    }

    pub fn from_mask(n: u32, mask: u32) -> Self {
        debug_assert!(n >= 1 && n <= MAX_SITES && mask < (1u32 << n));
        SpinBasisState { n, mask }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Number of minuses K.
    pub fn k(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Minus positions, ascending.
    pub fn positions(&self) -> Vec<u32> {
        (0..self.n).filter(|i| self.mask >> i & 1 == 1).map(|i| i + 1).collect()
    }

    /// Shift `S`: `|u_1, u_2, ..., u_N> -> |u_2, ..., u_N, u_1>`, so a
    /// minus at site j > 1 moves to site j - 1, and site 1 wraps to N.
    pub fn shift(&self) -> Self {
        let wrapped = (self.mask & 1) << (self.n - 1);
        SpinBasisState { n: self.n, mask: self.mask >> 1 | wrapped }
    }

    /// Reflection `R`: site i maps to N + 1 - i.
    pub fn reflect(&self) -> Self {
        let mut mask = 0u32;
        for i in 0..self.n {
            if self.mask >> i & 1 == 1 {
                mask |= 1 << (self.n - 1 - i);
            }
        }
        SpinBasisState { n: self.n, mask }
    }

    /// Spin flip `P`: swaps pluses and minuses, mapping K to N - K.
    pub fn complement(&self) -> Self {
        SpinBasisState { n: self.n, mask: !self.mask & ((1u32 << self.n) - 1) }
    }

    /// Eigenvalue of the total-spin operator: N - 2K.
    pub fn sigma_eigenvalue(&self) -> i64 {
        i64::from(self.n) - 2 * i64::from(self.k())
    }

    /// Lexicographic comparison of the position lists.
    pub fn cmp_lex(&self, other: &Self) -> std::cmp::Ordering {
        let mut a = self.mask;
        let mut b = other.mask;
        while a != 0 && b != 0 {
            let (ta, tb) = (a.trailing_zeros(), b.trailing_zeros());
            if ta != tb {
                return ta.cmp(&tb);
            }
            a &= a - 1;
            b &= b - 1;
        }
        a.count_ones().cmp(&b.count_ones())
    }
}

impl fmt::Debug for SpinBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SpinBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let positions: Vec<String> = self.positions().iter().map(u32::to_string).collect();
        write!(f, "({})", positions.join(","))
    }
}

/// All `C(n, k)` states of the sector in lexicographic position order.
pub fn enumerate_sector(n: u32, k: u32) -> Vec<SpinBasisState> {
    assert!(n >= 1 && n <= MAX_SITES && k <= n, "invalid sector ({n}, {k})");
    let mut out = Vec::new();
    let mut positions: Vec<u32> = (1..=k).collect();
    loop {
        out.push(SpinBasisState::new(n, &positions).expect("valid combination"));
        if k == 0 {
            break;
        }
        // advance to the next combination in lex order
        let mut i = k as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if positions[i] < n - (k - 1 - i as u32) {
                positions[i] += 1;
                for j in i + 1..k as usize {
                    positions[j] = positions[j - 1] + 1;
                }
                break;
            }
        }
    }
    out
}

/// Applies the XXZ Hamiltonian
/// `H = -(1/2) sum_n [ s^x_n s^x_{n+1} + s^y_n s^y_{n+1} + D s^z_n s^z_{n+1} ]`
/// with periodic boundary to a basis state.
///
/// The diagonal entry `-(D/2) sum_n mu_n mu_{n+1}` comes first, followed by
/// one `(swapped state, -1)` entry per adjacent opposite pair in site
/// order.
pub fn hamiltonian_action(
    state: &SpinBasisState,
    delta: &Rational,
) -> Vec<(SpinBasisState, Rational)> {
    let n = state.n;
    let mask = state.mask;
    let rotated = SpinBasisState { n, mask }.shift().mask;
    let opposite_pairs = (mask ^ rotated).count_ones();
    let zz_sum = i64::from(n) - 2 * i64::from(opposite_pairs);
    let diagonal = -delta / rat(2) * rat(zz_sum);
    let mut out = vec![(*state, diagonal)];
    for i in 0..n {
        let j = (i + 1) % n;
        if (mask >> i ^ mask >> j) & 1 == 1 {
            let flipped = mask ^ (1 << i) ^ (1 << j);
            out.push((SpinBasisState { n, mask: flipped }, rat(-1)));
        }
    }
    out
}

/// Anisotropy of the distinguished point: -1/2.
pub fn delta_half() -> Rational {
    ratio(-1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn state(n: u32, positions: &[u32]) -> SpinBasisState {
        SpinBasisState::new(n, positions).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(SpinBasisState::new(5, &[1, 3, 5]).is_ok());
        assert!(SpinBasisState::new(5, &[1, 1]).is_err());
        assert!(SpinBasisState::new(5, &[3, 1]).is_err());
        assert!(SpinBasisState::new(5, &[0]).is_err());
        assert!(SpinBasisState::new(5, &[6]).is_err());
    }

    #[test]
    fn enumerate_small_sectors() {
        let sector = enumerate_sector(3, 1);
        assert_eq!(
            sector,
            vec![state(3, &[1]), state(3, &[2]), state(3, &[3])]
        );
        assert_eq!(enumerate_sector(11, 5).len(), 462);
        assert_eq!(enumerate_sector(17, 8).len(), 24310);
        assert_eq!(enumerate_sector(4, 0).len(), 1);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let sector = enumerate_sector(5, 2);
        let positions: Vec<Vec<u32>> = sector.iter().map(|s| s.positions()).collect();
        assert_eq!(
            positions,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![1, 5],
                vec![2, 3],
                vec![2, 4],
                vec![2, 5],
                vec![3, 4],
                vec![3, 5],
                vec![4, 5]
            ]
        );
    }

    #[test]
    fn shift_moves_minuses_down() {
        assert_eq!(state(5, &[2, 4]).shift(), state(5, &[1, 3]));
        assert_eq!(state(5, &[1, 3]).shift(), state(5, &[2, 5]));
    }

    #[test]
    fn reflect_mirrors_positions() {
        assert_eq!(state(5, &[1, 2]).reflect(), state(5, &[4, 5]));
        assert_eq!(state(11, &[1, 3, 5, 7, 9]).reflect(), state(11, &[3, 5, 7, 9, 11]));
    }

    #[test]
    fn complement_flips_sector() {
        let s = state(5, &[1, 4]);
        assert_eq!(s.complement(), state(5, &[2, 3, 5]));
        assert_eq!(s.complement().k(), 3);
        assert_eq!(s.sigma_eigenvalue(), 1);
    }

    #[test]
    fn hamiltonian_action_n3_by_hand() {
        // state (1) at Delta = -1/2: zz sum = -1 + 1 - 1 = -1, so the
        // diagonal is -(-1/2)/2 * (-1) = -1/4; hops to (2) and (3)
        let action = hamiltonian_action(&state(3, &[1]), &delta_half());
        assert_eq!(action.len(), 3);
        assert_eq!(action[0], (state(3, &[1]), ratio(-1, 4)));
        assert_eq!(action[1], (state(3, &[2]), rat(-1)));
        assert_eq!(action[2], (state(3, &[3]), rat(-1)));
    }

    #[test]
    fn all_plus_state_is_diagonal() {
        // K = 0: only the zz term survives, eigenvalue -D N / 2
        let s = SpinBasisState::from_mask(7, 0);
        let action = hamiltonian_action(&s, &ratio(-1, 2));
        assert_eq!(action.len(), 1);
        assert_eq!(action[0], (s, ratio(7, 4)));
    }

    #[test]
    fn action_commutes_with_shift() {
        // applying H to a shifted state shifts the output list
        let s = state(7, &[1, 2, 5]);
        let direct: Vec<(SpinBasisState, Rational)> = hamiltonian_action(&s.shift(), &delta_half());
        let mut shifted: Vec<(SpinBasisState, Rational)> = hamiltonian_action(&s, &delta_half())
            .into_iter()
            .map(|(t, c)| (t.shift(), c))
            .collect();
        shifted.sort_by_key(|(t, _)| t.mask());
        let mut direct = direct;
        direct.sort_by_key(|(t, _)| t.mask());
        assert_eq!(direct, shifted);
    }

    #[test]
    fn diagonal_term_uses_zero_delta() {
        let action = hamiltonian_action(&state(4, &[1, 3]), &Rational::zero());
        assert!(action[0].1.is_zero());
        assert_eq!(action.len(), 5);
    }

    #[test]
    fn lex_comparison() {
        use std::cmp::Ordering;
        let a = state(5, &[1, 4]);
        let b = state(5, &[2, 3]);
        assert_eq!(a.cmp_lex(&b), Ordering::Less);
        assert_eq!(b.cmp_lex(&a), Ordering::Greater);
        assert_eq!(a.cmp_lex(&a), Ordering::Equal);
    }
}
