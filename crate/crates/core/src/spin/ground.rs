//! Exact extraction of the candidate eigenvector with eigenvalue -3N/4.
//!
//! For odd `N = 2M + 1` and anisotropy -1/2 the eigenvalue is imposed, not
//! searched: the solver builds `H + (3N/4) I` on the K = M sector, reduced
//! to one row per shift/reflection orbit, and extracts its nullspace. A
//! one-dimensional nullspace is the verification; the vector is then
//! normalized so the minimal component is 1. Positivity and integrality
//! of the normalized components are checked properties, never assumptions.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::linalg::SparseRationalMatrix;
use crate::rational::{is_integer, ratio, Rational};
use crate::report::CheckResult;

use super::basis::{delta_half, enumerate_sector, hamiltonian_action, SpinBasisState, SpinError};
use super::orbit::{canonical, orbit_decompose, SymmetryOrbit};

/// A shift/reflection-invariant vector on the (N, K) sector, stored as one
/// exact value per orbit representative.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorVector {
    n: u32,
    k: u32,
    values: BTreeMap<u32, Rational>,
}

impl SectorVector {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn orbit_count(&self) -> usize {
        self.values.len()
    }

    /// Component at arbitrary minus positions (any order, not necessarily
    /// an orbit representative).
    pub fn component(&self, positions: &[u32]) -> Result<Rational, SpinError> {
        if positions.len() != self.k as usize {
            return Err(SpinError::WrongCardinality {
                expected: self.k,
                got: positions.len() as u32,
            });
        }
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        let state = SpinBasisState::new(self.n, &sorted)?;
        self.component_state(&state)
    }

    pub fn component_state(&self, state: &SpinBasisState) -> Result<Rational, SpinError> {
        if state.k() != self.k || state.n() != self.n {
            return Err(SpinError::WrongCardinality {
                expected: self.k,
                got: state.k(),
            });
        }
        let rep = canonical(state);
        self.values
            .get(&rep.mask())
            .cloned()
            .ok_or(SpinError::NotOrbitConstant)
    }

    /// `(representative, value)` pairs in lexicographic representative order.
    pub fn entries(&self) -> Vec<(SpinBasisState, Rational)> {
        let mut out: Vec<(SpinBasisState, Rational)> = self
            .values
            .iter()
            .map(|(mask, v)| (SpinBasisState::from_mask(self.n, *mask), v.clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp_lex(&b.0));
        out
    }

    pub fn min_component(&self) -> Rational {
        self.values.values().min().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_component(&self) -> Rational {
        self.values.values().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// The value at every state of the sector, in `enumerate_sector` order.
    pub fn expand(&self) -> Vec<Rational> {
        enumerate_sector(self.n, self.k)
            .iter()
            .map(|s| self.component_state(s).expect("orbit covered"))
            .collect()
    }
}

/// Result of the eigenvector solve with its checked properties.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub vector: SectorVector,
    /// Dimension of the extracted nullspace (always 1 on success).
    pub nullspace_dim: usize,
    /// All normalized components strictly positive (checked, conjectural).
    pub positive: bool,
    /// All normalized components integers (checked, conjectural).
    pub integral: bool,
    /// The imposed eigenvalue -3N/4.
    pub eigenvalue: Rational,
}

fn validate_chain(n: u32) -> Result<u32, SpinError> {
    if n < 3 || n % 2 == 0 || n > super::basis::MAX_SITES {
        return Err(SpinError::InvalidChainLength(n));
    }
    Ok((n - 1) / 2)
}

/// `H + (3N/4) I` reduced to orbit representatives: apply the Hamiltonian
/// to each representative and accumulate images on their canonical orbits.
fn reduced_matrix(n: u32, orbits: &[SymmetryOrbit]) -> SparseRationalMatrix {
    let index: HashMap<u32, u32> = orbits
        .iter()
        .enumerate()
        .map(|(i, o)| (o.representative.mask(), i as u32))
        .collect();
    let shift_term = ratio(3 * i64::from(n), 4);
    let delta = delta_half();
    let mut matrix = SparseRationalMatrix::new(orbits.len());
    for orbit in orbits {
        let rep = orbit.representative;
        let mut entries: Vec<(u32, Rational)> = hamiltonian_action(&rep, &delta)
            .into_iter()
            .map(|(image, coeff)| (index[&canonical(&image).mask()], coeff))
            .collect();
        entries.push((index[&rep.mask()], shift_term.clone()));
        matrix.push_row(entries);
    }
    matrix
}

/// Normalizes so the minimal-magnitude component becomes 1 and reports the
/// positivity/integrality observations.
fn normalize(values: Vec<(u32, Rational)>) -> (BTreeMap<u32, Rational>, bool, bool) {
    let scale = values
        .iter()
        .map(|(_, v)| v)
        .filter(|v| !v.is_zero())
        .min_by(|a, b| a.abs().cmp(&b.abs()))
        .cloned()
        .unwrap_or_else(Rational::one);
    let scaled: BTreeMap<u32, Rational> = values
        .into_iter()
        .map(|(mask, v)| (mask, v / &scale))
        .collect();
    let positive = scaled.values().all(|v| v.is_positive());
    let integral = scaled.values().all(is_integer);
    (scaled, positive, integral)
}

/// Solves for the -3N/4 eigenvector on the orbit-reduced sector K = M.
pub fn ground_candidate(n: u32) -> Result<GroundState, SpinError> {
    let m = validate_chain(n)?;
    let orbits = orbit_decompose(n, m);
    let matrix = reduced_matrix(n, &orbits);
    let nullspace = matrix.nullspace();
    if nullspace.len() != 1 {
        return Err(SpinError::NullspaceDimension { found: nullspace.len() });
    }
    let raw: Vec<(u32, Rational)> = orbits
        .iter()
        .zip(&nullspace[0])
        .map(|(o, v)| (o.representative.mask(), v.clone()))
        .collect();
    let (values, positive, integral) = normalize(raw);
    Ok(GroundState {
        vector: SectorVector { n, k: m, values },
        nullspace_dim: 1,
        positive,
        integral,
        eigenvalue: ratio(-3 * i64::from(n), 4),
    })
}

/// Solves the same eigenproblem on the full sector without symmetry
/// reduction, then checks the result is constant on orbits. Exponentially
/// more expensive; used as an independent cross-check at small N.
pub fn ground_candidate_full(n: u32) -> Result<GroundState, SpinError> {
    let m = validate_chain(n)?;
    let sector = enumerate_sector(n, m);
    let index: HashMap<u32, u32> = sector
        .iter()
        .enumerate()
        .map(|(i, s)| (s.mask(), i as u32))
        .collect();
    let shift_term = ratio(3 * i64::from(n), 4);
    let delta = delta_half();
    let mut matrix = SparseRationalMatrix::new(sector.len());
    for state in &sector {
        let mut entries: Vec<(u32, Rational)> = hamiltonian_action(state, &delta)
            .into_iter()
            .map(|(image, coeff)| (index[&image.mask()], coeff))
            .collect();
        entries.push((index[&state.mask()], shift_term.clone()));
        matrix.push_row(entries);
    }
    let nullspace = matrix.nullspace();
    if nullspace.len() != 1 {
        return Err(SpinError::NullspaceDimension { found: nullspace.len() });
    }
    let full = &nullspace[0];
    let mut per_orbit: BTreeMap<u32, Rational> = BTreeMap::new();
    for (state, value) in sector.iter().zip(full) {
        let rep = canonical(state).mask();
        match per_orbit.get(&rep) {
            None => {
                per_orbit.insert(rep, value.clone());
            }
            Some(existing) if existing == value => {}
            Some(_) => return Err(SpinError::NotOrbitConstant),
        }
    }
    let (values, positive, integral) = normalize(per_orbit.into_iter().collect());
    Ok(GroundState {
        vector: SectorVector { n, k: m, values },
        nullspace_dim: 1,
        positive,
        integral,
        eigenvalue: ratio(-3 * i64::from(n), 4),
    })
}

fn base_positions(m: u32) -> Vec<u32> {
    (0..m).map(|i| 2 * i + 1).collect()
}

/// Sum of the components reached from the largest component by
/// incrementing `r` distinct indices of `(1, 3, ..., 2M-1)` by one.
pub fn increment_sum(v: &SectorVector, r: u32) -> Result<Rational, SpinError> {
    let m = v.k();
    if r > m {
        return Err(SpinError::WrongCardinality { expected: m, got: r });
    }
    let base = base_positions(m);
    let mut total = Rational::zero();
    for choice in index_subsets(m, r) {
        let mut positions = base.clone();
        for idx in choice {
            positions[idx as usize] += 1;
        }
        total += v.component(&positions)?;
    }
    Ok(total)
}

/// Same with `r` indices decremented by one; position 1 wraps to N.
pub fn decrement_sum(v: &SectorVector, r: u32) -> Result<Rational, SpinError> {
    let m = v.k();
    if r > m {
        return Err(SpinError::WrongCardinality { expected: m, got: r });
    }
    let base = base_positions(m);
    let mut total = Rational::zero();
    for choice in index_subsets(m, r) {
        let mut positions = base.clone();
        for idx in choice {
            let p = positions[idx as usize];
            positions[idx as usize] = if p == 1 { v.n() } else { p - 1 };
        }
        total += v.component(&positions)?;
    }
    Ok(total)
}

/// All r-element subsets of `0..m`, each ascending.
fn index_subsets(m: u32, r: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    enumerate_sector(m, r)
        .into_iter()
        .map(|s| s.positions().iter().map(|p| p - 1).collect())
        .collect()
}

/// Operator-level verification of the solved vector: invariance under the
/// shift and reflection, the total-spin eigenvalue, the spin-flip
/// companion in the K = M+1 sector, and the increment/decrement sum
/// symmetries.
pub fn check_operator_symmetries(gs: &GroundState) -> CheckResult {
    let mut result = CheckResult::new();
    let v = &gs.vector;
    let n = v.n();
    let k = v.k();
    let sector = enumerate_sector(n, k);
    let index: HashMap<u32, usize> = sector
        .iter()
        .enumerate()
        .map(|(i, s)| (s.mask(), i))
        .collect();
    let full = v.expand();

    let shift_ok = sector
        .iter()
        .enumerate()
        .all(|(i, s)| full[i] == full[index[&s.shift().mask()]]);
    result.push("S psi = psi", shift_ok, String::new());

    let reflect_ok = sector
        .iter()
        .enumerate()
        .all(|(i, s)| full[i] == full[index[&s.reflect().mask()]]);
    result.push("R psi = psi", reflect_ok, String::new());

    let sigma_ok = sector
        .iter()
        .all(|s| s.sigma_eigenvalue() == i64::from(n) - 2 * i64::from(k));
    result.push(
        format!("Sigma eigenvalue N - 2K = {}", i64::from(n) - 2 * i64::from(k)),
        sigma_ok,
        String::new(),
    );

    // full-sector residual of (H + 3N/4) psi
    let residual_ok = eigen_residual_is_zero(&sector, &index, &full, n);
    result.push("(H + 3N/4) psi = 0 on the full sector", residual_ok, String::new());

    // companion P psi in the K = M+1 sector solves the same eigenproblem
    let flipped_sector = enumerate_sector(n, n - k);
    let flipped_index: HashMap<u32, usize> = flipped_sector
        .iter()
        .enumerate()
        .map(|(i, s)| (s.mask(), i))
        .collect();
    let mut flipped = vec![Rational::zero(); flipped_sector.len()];
    for (i, s) in sector.iter().enumerate() {
        flipped[flipped_index[&s.complement().mask()]] = full[i].clone();
    }
    let companion_ok = eigen_residual_is_zero(&flipped_sector, &flipped_index, &flipped, n);
    result.push(
        format!("(H + 3N/4) P psi = 0 in the K = {} sector", n - k),
        companion_ok,
        String::new(),
    );

    let m = k;
    let incs: Vec<Rational> = (0..=m)
        .map(|r| increment_sum(v, r).expect("valid range"))
        .collect();
    let complement_ok = (0..=m).all(|r| incs[r as usize] == incs[(m - r) as usize]);
    result.push(
        "r-increment sums equal (M-r)-increment sums",
        complement_ok,
        format!("{:?}", incs.iter().map(Rational::to_string).collect::<Vec<_>>()),
    );

    let decrement_ok = (0..=m).all(|r| {
        decrement_sum(v, r).expect("valid range") == incs[r as usize]
    });
    result.push("decrement sums equal increment sums", decrement_ok, String::new());

    result
}

fn eigen_residual_is_zero(
    sector: &[SpinBasisState],
    index: &HashMap<u32, usize>,
    values: &[Rational],
    n: u32,
) -> bool {
    let shift_term = ratio(3 * i64::from(n), 4);
    let delta = delta_half();
    sector.iter().enumerate().all(|(i, state)| {
        let mut acc = &shift_term * &values[i];
        for (image, coeff) in hamiltonian_action(state, &delta) {
            acc += coeff * &values[index[&image.mask()]];
        }
        acc.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rejects_bad_chain_lengths() {
        for n in [0u32, 1, 2, 4, 10] {
            assert!(matches!(
                ground_candidate(n),
                Err(SpinError::InvalidChainLength(_))
            ));
        }
    }

    #[test]
    fn n3_all_components_one() {
        let gs = ground_candidate(3).unwrap();
        assert_eq!(gs.vector.orbit_count(), 1);
        assert_eq!(gs.vector.component(&[1]).unwrap(), rat(1));
        assert_eq!(gs.vector.component(&[2]).unwrap(), rat(1));
        assert_eq!(gs.vector.component(&[3]).unwrap(), rat(1));
        assert!(gs.positive && gs.integral);
        assert_eq!(gs.eigenvalue, ratio(-9, 4));
    }

    #[test]
    fn n5_component_ratio_is_two() {
        let gs = ground_candidate(5).unwrap();
        assert_eq!(gs.vector.min_component(), rat(1));
        assert_eq!(gs.vector.max_component(), rat(2));
        assert_eq!(gs.vector.component(&[1, 2]).unwrap(), rat(1));
        assert_eq!(gs.vector.component(&[1, 3]).unwrap(), rat(2));
    }

    #[test]
    fn full_solve_matches_reduced_solve() {
        for n in [3u32, 5, 7, 9, 11] {
            let reduced = ground_candidate(n).unwrap();
            let full = ground_candidate_full(n).unwrap();
            assert_eq!(reduced.vector, full.vector, "N={n}");
        }
    }

    #[test]
    fn component_validates_input() {
        let gs = ground_candidate(5).unwrap();
        assert!(matches!(
            gs.vector.component(&[1, 2, 3]),
            Err(SpinError::WrongCardinality { .. })
        ));
        assert!(gs.vector.component(&[3, 1]).is_ok(), "order-insensitive");
    }

    #[test]
    fn n7_sums_match_refined_row() {
        let gs = ground_candidate(7).unwrap();
        assert_eq!(gs.vector.max_component(), rat(7));
        let sums: Vec<Rational> = (0..=3)
            .map(|r| increment_sum(&gs.vector, r).unwrap())
            .collect();
        assert_eq!(sums, vec![rat(7), rat(14), rat(14), rat(7)]);
    }

    #[test]
    fn operator_symmetries_hold_at_n7() {
        let gs = ground_candidate(7).unwrap();
        let result = check_operator_symmetries(&gs);
        assert!(result.pass(), "{:?}", result.failures().collect::<Vec<_>>());
    }
}
