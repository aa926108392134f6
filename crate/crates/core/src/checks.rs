//! The standard verification checks, each behind the [`Check`] trait and
//! registered by name.
//!
//! `standard_registry()` wires up the full cross-check suite run by
//! `verify N`: exact checks on the alternating-sign-matrix recursion, the
//! T-Q polynomial identities, the symmetric-function relations, the
//! ground-state solve, and the numeric Bethe-root checks.

use num_traits::ToPrimitive;

use crate::asm;
use crate::bethe::{self, RootConfig, Tolerances};
use crate::rational::Rational;
use crate::report::{Check, CheckRegistry, CheckResult, Mode};
use crate::spin;
use crate::symfun;
use crate::tq;

/// Registry with every standard check, in report order.
pub fn standard_registry(config: RootConfig, tolerances: Tolerances) -> CheckRegistry {
    let mut registry = CheckRegistry::new();
    registry.register(Box::new(AsmRecursion));
    registry.register(Box::new(PhiCyclic));
    registry.register(Box::new(PhiSymmetries));
    registry.register(Box::new(PhiOde));
    registry.register(Box::new(PhiUniqueness));
    registry.register(Box::new(TqIdentity));
    registry.register(Box::new(ChiOde));
    registry.register(Box::new(AsmRelation));
    registry.register(Box::new(EnergyIdentity));
    registry.register(Box::new(ChiFieldAgreement));
    registry.register(Box::new(GroundStateSolve));
    registry.register(Box::new(IncrementSums));
    registry.register(Box::new(BetheResidual { config, tolerances }));
    registry.register(Box::new(TransferEigenvalue { config, tolerances }));
    registry.register(Box::new(BetheOracle { config, tolerances }));
    registry
}

/// Refined-count recursion sanity: palindrome, seeding, and (at small
/// orders) agreement with the brute-force enumeration.
struct AsmRecursion;

impl Check for AsmRecursion {
    fn name(&self) -> &'static str {
        "asm-recursion"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        let mut result = CheckResult::new();
        let order = m + 1;
        let row = asm::asm_row(order).expect("valid order");
        let len = row.counts.len();
        let palindrome = (0..len).all(|r| row.counts[r] == row.counts[len - 1 - r]);
        result.push(
            format!("A({order}, r) row is palindromic"),
            palindrome,
            String::new(),
        );
        if order >= 2 {
            let seed_ok = row.counts[0] == asm::asm_total(order - 1).expect("valid order");
            result.push(
                format!("A({order}, 1) = A({})", order - 1),
                seed_ok,
                format!("{}", row.counts[0]),
            );
        }
        if order <= 5 {
            let brute = asm::asm_brute_force(order).expect("valid order");
            result.push(
                format!("brute-force enumeration agrees at order {order}"),
                brute == row.counts,
                String::new(),
            );
        }
        result
    }
}

struct PhiCyclic;

impl Check for PhiCyclic {
    fn name(&self) -> &'static str {
        "phi-cyclic"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        tq::check_cyclic(&tq::build_phi(m).expect("M >= 1"))
    }
}

struct PhiSymmetries;

impl Check for PhiSymmetries {
    fn name(&self) -> &'static str {
        "phi-symmetries"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        tq::check_symmetries(&tq::build_phi(m).expect("M >= 1"))
    }
}

struct PhiOde;

impl Check for PhiOde {
    fn name(&self) -> &'static str {
        "phi-ode"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        tq::check_phi_ode(&tq::build_phi(m).expect("M >= 1"))
    }
}

/// Constructive uniqueness of the constrained solution space; the linear
/// system grows quickly, so this stays within small M.
struct PhiUniqueness;

impl Check for PhiUniqueness {
    fn name(&self) -> &'static str {
        "phi-unique"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn max_m(&self) -> Option<u32> {
        Some(4)
    }
    fn run(&self, m: u32) -> CheckResult {
        tq::check_uniqueness(m)
    }
}

struct TqIdentity;

impl Check for TqIdentity {
    fn name(&self) -> &'static str {
        "tq-identity"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        let phi = tq::build_phi(m).expect("M >= 1");
        tq::check_tq_identity(&tq::XiPolynomial::from_phi(&phi))
    }
}

struct ChiOde;

impl Check for ChiOde {
    fn name(&self) -> &'static str {
        "chi-ode"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        let chi = symfun::chi_from_esym(&symfun::elementary_sym(m).expect("M >= 1"));
        symfun::check_chi_ode(&chi)
    }
}

struct AsmRelation;

impl Check for AsmRelation {
    fn name(&self) -> &'static str {
        "asm-relation"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        symfun::check_asm_relation(m)
    }
}

struct EnergyIdentity;

impl Check for EnergyIdentity {
    fn name(&self) -> &'static str {
        "energy-identity"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        symfun::check_energy_consequence(m)
    }
}

/// Field-arithmetic extraction of chi versus the recursion.
struct ChiFieldAgreement;

impl Check for ChiFieldAgreement {
    fn name(&self) -> &'static str {
        "chi-field"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn max_m(&self) -> Option<u32> {
        Some(8)
    }
    fn run(&self, m: u32) -> CheckResult {
        let mut result = CheckResult::new();
        match tq::chi_via_field(m) {
            Err(err) => result.push("field extraction", false, err.to_string()),
            Ok(field_chi) => {
                let recursion = symfun::chi_from_esym(&symfun::elementary_sym(m).expect("M >= 1"));
                result.push(
                    format!("field-extracted chi equals recursion chi at M={m}"),
                    field_chi == recursion,
                    String::new(),
                );
            }
        }
        result
    }
}

/// The exact eigenvector solve with all operator-level consequences.
struct GroundStateSolve;

impl Check for GroundStateSolve {
    fn name(&self) -> &'static str {
        "ground-state"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        let n = 2 * m + 1;
        let mut result = CheckResult::new();
        let gs = match spin::ground_candidate(n) {
            Ok(gs) => gs,
            Err(err) => {
                result.push("eigenvector solve", false, err.to_string());
                return result;
            }
        };
        result.push("nullspace of H + 3N/4 is one-dimensional", true, String::new());
        result.push(
            "normalized components are positive",
            gs.positive,
            String::new(),
        );
        result.push(
            "normalized components are integers",
            gs.integral,
            String::new(),
        );
        let max = gs.vector.max_component();
        let expected = Rational::from_integer(asm::asm_total(m).expect("valid order"));
        result.push(
            format!("largest component equals the order-{m} matrix count"),
            max == expected,
            format!("{max} vs {expected}"),
        );
        result.merged(spin::check_operator_symmetries(&gs))
    }
}

/// Increment sums against the refined counts and the symmetric functions.
struct IncrementSums;

impl Check for IncrementSums {
    fn name(&self) -> &'static str {
        "increment-sums"
    }
    fn mode(&self) -> Mode {
        Mode::Exact
    }
    fn run(&self, m: u32) -> CheckResult {
        let n = 2 * m + 1;
        let mut result = CheckResult::new();
        let gs = match spin::ground_candidate(n) {
            Ok(gs) => gs,
            Err(err) => {
                result.push("eigenvector solve", false, err.to_string());
                return result;
            }
        };
        let refined = asm::asm_row(m + 1).expect("valid order");
        let esym = symfun::elementary_sym(m).expect("M >= 1");
        let base = spin::increment_sum(&gs.vector, 0).expect("r = 0");
        for r in 0..=m {
            let sum = spin::increment_sum(&gs.vector, r).expect("r <= M");
            let expected = Rational::from_integer(refined.counts[r as usize].clone());
            result.push(
                format!("sum over {r}-increments = A({}, {})", m + 1, r + 1),
                sum == expected,
                format!("{sum}"),
            );
            let ratio = &sum / &base;
            result.push(
                format!("{r}-increment sum over max component = e_{r}"),
                ratio == esym.values[r as usize],
                format!("{ratio}"),
            );
        }
        result
    }
}

struct BetheResidual {
    config: RootConfig,
    tolerances: Tolerances,
}

impl Check for BetheResidual {
    fn name(&self) -> &'static str {
        "bethe-residual"
    }
    fn mode(&self) -> Mode {
        Mode::Numeric
    }
    fn run(&self, m: u32) -> CheckResult {
        let mut result = CheckResult::new();
        let rs = match bethe::roots_of_chi(m, &self.config) {
            Ok(rs) => rs,
            Err(err) => {
                result.push("root finding", false, err.to_string());
                return result;
            }
        };
        match bethe::bethe_residual(&rs) {
            Err(err) => result.push("Bethe equations", false, err.to_string()),
            Ok(residual) => result.push(
                "Bethe equation residual",
                residual < self.tolerances.residual,
                format!("{residual:.3e}"),
            ),
        }
        let pairing = bethe::pairing_defect(&rs);
        result.push(
            "reciprocal pairing",
            pairing < self.tolerances.pairing,
            format!("{pairing:.3e}"),
        );
        let (round_trip, sign) = bethe::u_map_defect(&rs);
        result.push(
            "u-parameter round trip",
            round_trip < self.tolerances.residual,
            format!("{round_trip:.3e}"),
        );
        result.push(
            "u-parameter sign convention",
            sign < self.tolerances.residual,
            format!("{sign:.3e}"),
        );
        let n = 2 * m + 1;
        let energy = bethe::energy(&rs, -0.5, n);
        let expected = -3.0 * f64::from(n) / 4.0;
        let deviation = (energy - num_complex::Complex64::new(expected, 0.0)).norm();
        result.push(
            format!("energy = -3N/4 at N={n}"),
            deviation < self.tolerances.energy,
            format!("{deviation:.3e}"),
        );
        let esym = symfun::elementary_sym(m).expect("M >= 1");
        let e1: num_complex::Complex64 = rs.roots.iter().sum();
        let e1_expected = esym.values[1].to_f64().expect("small");
        result.push(
            "numeric e_1 matches the recursion",
            (e1 - num_complex::Complex64::new(e1_expected, 0.0)).norm()
                < self.tolerances.residual,
            format!("{:.12}", e1.re),
        );
        result
    }
}

struct TransferEigenvalue {
    config: RootConfig,
    tolerances: Tolerances,
}

impl Check for TransferEigenvalue {
    fn name(&self) -> &'static str {
        "transfer-eigenvalue"
    }
    fn mode(&self) -> Mode {
        Mode::Numeric
    }
    fn run(&self, m: u32) -> CheckResult {
        let mut result = CheckResult::new();
        let rs = match bethe::roots_of_chi(m, &self.config) {
            Ok(rs) => rs,
            Err(err) => {
                result.push("root finding", false, err.to_string());
                return result;
            }
        };
        let samples = bethe::transfer_samples(&rs, 20, self.config.seed);
        // the eigenvalue grows like 2^N on the sample contour, so the
        // comparison runs at extended precision on polished roots
        match bethe::transfer_eigenvalue_check_extended(&rs, &samples, 192) {
            Err(err) => result.push("transfer eigenvalue", false, err.to_string()),
            Ok(worst) => result.push(
                format!("lambda(u) = sigma^{}(u) at 20 samples", 2 * m + 1),
                worst < self.tolerances.transfer,
                format!("{worst:.3e}"),
            ),
        }
        result
    }
}

struct BetheOracle {
    config: RootConfig,
    tolerances: Tolerances,
}

impl Check for BetheOracle {
    fn name(&self) -> &'static str {
        "bethe-oracle"
    }
    fn mode(&self) -> Mode {
        Mode::Numeric
    }
    fn max_m(&self) -> Option<u32> {
        Some(6)
    }
    fn run(&self, m: u32) -> CheckResult {
        let mut result = CheckResult::new();
        match bethe::oracle_vs_exact(2 * m + 1, &self.config) {
            Err(err) => result.push("permutation oracle", false, err.to_string()),
            Ok(deviation) => result.push(
                "oracle matches exact eigenvector",
                deviation < self.tolerances.oracle_relative,
                format!("{deviation:.3e}"),
            ),
        }
        result
    }
}
