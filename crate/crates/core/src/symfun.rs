//! Elementary symmetric polynomials in the Bethe roots.
//!
//! For the chain of length `N = 2M + 1` the values `e_r` obey the ratio
//! recursion
//!
//! ```text
//! (2M - r + 1) r e_r = (M - r + 1)(M + r) e_{r-1},    e_0 = 1,
//! ```
//!
//! which pins them completely. The monic polynomial `chi(z)` with
//! coefficients `(-1)^r e_r` collects them; it satisfies a second-order
//! differential equation and the identity `e_r = A(M+1, r+1) / A(M)`
//! against the refined alternating-sign-matrix counts.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::asm;
use crate::rational::{rat, ratio, Rational};
use crate::report::CheckResult;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymfunError {
    #[error("M must be at least 1, got {0}")]
    OrderOutOfRange(u32),
}

/// The values `e_0 ... e_M` for a given M.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementarySymmetricList {
    pub m: u32,
    pub values: Vec<Rational>,
}

/// Monic polynomial of degree M with coefficient `(-1)^r e_r` at `z^(M-r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiPolynomial {
    pub m: u32,
    /// Coefficient of `z^j` at index `j`.
    pub coeffs: Vec<Rational>,
}

/// Computes `e_0 ... e_M` by the ratio recursion.
pub fn elementary_sym(m: u32) -> Result<ElementarySymmetricList, SymfunError> {
    if m < 1 {
        return Err(SymfunError::OrderOutOfRange(m));
    }
    let mi = i64::from(m);
    let mut values = vec![rat(1)];
    for r in 1..=mi {
        let prev = values.last().expect("nonempty");
        let next = prev * ratio((mi - r + 1) * (mi + r), (2 * mi - r + 1) * r);
        values.push(next);
    }
    let list = ElementarySymmetricList { m, values };
    debug_assert!(list.values[0].is_one() && list.values[m as usize].is_one());
    Ok(list)
}

impl ElementarySymmetricList {
    pub fn value(&self, r: usize) -> &Rational {
        &self.values[r]
    }
}

/// Builds `chi(z)` from a symmetric-polynomial list.
pub fn chi_from_esym(esym: &ElementarySymmetricList) -> ChiPolynomial {
    let m = esym.m as usize;
    let mut coeffs = vec![Rational::zero(); m + 1];
    for (r, e) in esym.values.iter().enumerate() {
        let signed = if r % 2 == 0 { e.clone() } else { -e.clone() };
        coeffs[m - r] = signed;
    }
    ChiPolynomial { m: esym.m, coeffs }
}

impl ChiPolynomial {
    /// Reads back `e_r = (-1)^r * coeff(z^(M-r))`.
    pub fn esym_values(&self) -> Vec<Rational> {
        (0..=self.m as usize)
            .map(|r| {
                let c = &self.coeffs[self.m as usize - r];
                if r % 2 == 0 {
                    c.clone()
                } else {
                    -c.clone()
                }
            })
            .collect()
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Verifies `e_r = A(M+1, r+1) / A(M)` exactly for `r = 0 ... M`.
pub fn check_asm_relation(m: u32) -> CheckResult {
    let mut result = CheckResult::new();
    let esym = match elementary_sym(m) {
        Ok(e) => e,
        Err(err) => {
            result.push("elementary-sym", false, err.to_string());
            return result;
        }
    };
    let total = asm::asm_total(m).expect("valid order");
    let row = asm::asm_row(m + 1).expect("valid order");
    for (r, e) in esym.values.iter().enumerate() {
        let refined = Rational::new(row.counts[r].clone(), total.clone());
        result.push(
            format!("e_{r} = A({}, {})/A({m})", m + 1, r + 1),
            *e == refined,
            format!("{e} vs {refined}"),
        );
    }
    result
}

/// Verifies `z(z+1) chi'' + 2(z - M) chi' - M(M+1) chi = 0` exactly.
pub fn check_chi_ode(chi: &ChiPolynomial) -> CheckResult {
    let m = i64::from(chi.m);
    let deriv = |p: &[Rational]| -> Vec<Rational> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * rat(j as i64))
            .collect()
    };
    let d1 = deriv(&chi.coeffs);
    let d2 = deriv(&d1);
    let degree = chi.coeffs.len() + 1;
    let mut residual = vec![Rational::zero(); degree + 1];
    // z(z+1) chi''
    for (j, c) in d2.iter().enumerate() {
        residual[j + 2] += c;
        residual[j + 1] += c;
    }
    // 2(z - M) chi'
    for (j, c) in d1.iter().enumerate() {
        residual[j + 1] += c * rat(2);
        residual[j] -= c * rat(2 * m);
    }
    // -M(M+1) chi
    for (j, c) in chi.coeffs.iter().enumerate() {
        residual[j] -= c * rat(m * (m + 1));
    }
    let mut result = CheckResult::new();
    let nonzero: Vec<String> = residual
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| format!("{c}*z^{j}"))
        .collect();
    result.push(
        format!("chi ODE residual, M={}", chi.m),
        nonzero.is_empty(),
        if nonzero.is_empty() {
            "0".to_string()
        } else {
            nonzero.join(" + ")
        },
    );
    result
}

/// Verifies that the eigenvalue identity `N/4 - M - 2 e_1 = -3N/4` holds
/// with `e_1 = (M+1)/2` and `N = 2M + 1`.
pub fn check_energy_consequence(m: u32) -> CheckResult {
    let mut result = CheckResult::new();
    let n = 2 * i64::from(m) + 1;
    let e1 = match elementary_sym(m) {
        Ok(esym) => esym.values[1].clone(),
        Err(err) => {
            result.push("elementary-sym", false, err.to_string());
            return result;
        }
    };
    result.push(
        format!("e_1 = (M+1)/2 at M={m}"),
        e1 == ratio(i64::from(m) + 1, 2),
        format!("{e1}"),
    );
    // E = N/4 + sum_k(-1 - z_k - 1/z_k) = N/4 - M - 2 e_1
    let energy = ratio(n, 4) - rat(i64::from(m)) - rat(2) * &e1;
    let expected = ratio(-3 * n, 4);
    result.push(
        format!("energy identity at N={n}"),
        energy == expected,
        format!("{energy} vs {expected}"),
    );
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn esym_values_m5() {
        let esym = elementary_sym(5).unwrap();
        assert_eq!(esym.values[0], rat(1));
        assert_eq!(esym.values[1], rat(3)); // 1287/429
        assert_eq!(esym.values[2], ratio(14, 3)); // 2002/429
        assert_eq!(esym.values[3], ratio(14, 3));
        assert_eq!(esym.values[4], rat(3));
        assert_eq!(esym.values[5], rat(1));
    }

    #[test]
    fn esym_edge_values() {
        for m in 1..=30 {
            let esym = elementary_sym(m).unwrap();
            assert_eq!(esym.values[0], rat(1), "e_0 at M={m}");
            assert_eq!(esym.values[m as usize], rat(1), "e_M at M={m}");
            assert_eq!(
                esym.values[1],
                ratio(i64::from(m) + 1, 2),
                "e_1 at M={m}"
            );
        }
        assert!(elementary_sym(0).is_err());
    }

    #[test]
    fn palindrome_up_to_30() {
        for m in 1..=30u32 {
            let esym = elementary_sym(m).unwrap();
            for r in 0..=m as usize {
                assert_eq!(
                    esym.values[r],
                    esym.values[m as usize - r],
                    "palindrome at M={m}, r={r}"
                );
            }
        }
    }

    #[test]
    fn chi_m5_coefficients() {
        let chi = chi_from_esym(&elementary_sym(5).unwrap());
        // z^5 - 3z^4 + (14/3)z^3 - (14/3)z^2 + 3z - 1
        assert_eq!(
            chi.coeffs,
            vec![
                rat(-1),
                rat(3),
                ratio(-14, 3),
                ratio(14, 3),
                rat(-3),
                rat(1)
            ]
        );
    }

    #[test]
    fn chi_is_monic_and_reciprocal() {
        for m in 1..=12u32 {
            let chi = chi_from_esym(&elementary_sym(m).unwrap());
            assert!(chi.coeffs.last().unwrap().is_one(), "monic at M={m}");
            let at_zero = &chi.coeffs[0];
            let expected = if m % 2 == 0 { rat(1) } else { rat(-1) };
            assert_eq!(*at_zero, expected, "chi(0) at M={m}");
            // z^M chi(1/z) = (-1)^M chi(z)
            for j in 0..=m as usize {
                let lhs = &chi.coeffs[m as usize - j];
                let rhs = if m % 2 == 0 {
                    chi.coeffs[j].clone()
                } else {
                    -chi.coeffs[j].clone()
                };
                assert_eq!(*lhs, rhs, "reciprocity at M={m}, j={j}");
            }
        }
    }

    #[test]
    fn chi_m2_linear_coefficient() {
        let chi = chi_from_esym(&elementary_sym(2).unwrap());
        // z^2 - (3/2) z + 1
        assert_eq!(chi.coeffs, vec![rat(1), ratio(-3, 2), rat(1)]);
    }

    #[test]
    fn asm_relation_passes() {
        for m in [1u32, 5, 6, 30] {
            let result = check_asm_relation(m);
            assert!(result.pass(), "M={m}: {:?}", result.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn asm_relation_spot_values() {
        let esym = elementary_sym(6).unwrap();
        assert_eq!(esym.values[1], ratio(7, 2)); // 26026/7436
    }

    #[test]
    fn chi_ode_passes() {
        for m in [1u32, 5, 12] {
            let chi = chi_from_esym(&elementary_sym(m).unwrap());
            assert!(check_chi_ode(&chi).pass(), "M={m}");
        }
    }

    #[test]
    fn chi_ode_m1_by_hand() {
        // chi = z - 1: residual 2(z - 1) - 2(z - 1) = 0
        let chi = chi_from_esym(&elementary_sym(1).unwrap());
        assert_eq!(chi.coeffs, vec![rat(-1), rat(1)]);
        assert!(check_chi_ode(&chi).pass());
    }

    #[test]
    fn chi_ode_detects_perturbation() {
        let mut chi = chi_from_esym(&elementary_sym(5).unwrap());
        chi.coeffs[3] += rat(1); // perturb e_2
        assert!(!check_chi_ode(&chi).pass());
    }

    #[test]
    fn energy_consequence() {
        for m in 1..=30u32 {
            assert!(check_energy_consequence(m).pass(), "M={m}");
        }
    }
}
