//! Floating-point Bethe roots and the numeric side of the verification:
//! residuals of the Bethe equations, root reciprocity, the energy formula,
//! the transfer-matrix eigenvalue, and a brute-force permutation-sum
//! eigenvector oracle for small M.
//!
//! All tolerances are configuration values with stated defaults; no
//! assertion hard-codes a threshold.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rational::{decimal_string, Rational};
use crate::spin::{self, SpinError};
use crate::symfun::{chi_from_esym, elementary_sym, ChiPolynomial};

/// Default seed for reproducible root initialization and sampling.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Error)]
pub enum BetheError {
    #[error("M must be at least 1, got {0}")]
    OrderOutOfRange(u32),
    #[error("permutation oracle is factorial; M = {0} exceeds the supported 6")]
    OracleOrderTooLarge(u32),
    #[error("root iteration did not converge within {iterations} steps")]
    NonConvergence { iterations: u32 },
    #[error("reciprocal pairing failed at root {index}: |z * z' - 1| = {deviation:e}")]
    PairingFailure { index: usize, deviation: f64 },
    #[error("Bethe equation denominator f(z_{k}, z_{l}) vanishes")]
    SingularDenominator { k: usize, l: usize },
    #[error("sample point {0} is too close to a pole")]
    PoleProximity(Complex64),
    #[error("Bethe eigenvector is numerically zero")]
    DegenerateVector,
    #[error(transparent)]
    Exact(#[from] SpinError),
}

/// Tolerances for the numeric checks (defaults match the verification
/// suite's target accuracy at double precision).
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Bethe-equation residual bound.
    pub residual: f64,
    /// Reciprocal-pairing bound on `|z_m z_{M-m+1} - 1|`.
    pub pairing: f64,
    /// Energy deviation from -3N/4.
    pub energy: f64,
    /// Transfer-eigenvalue deviation from `sigma^N(u)`.
    pub transfer: f64,
    /// Relative componentwise deviation of the eigenvector oracle.
    pub oracle_relative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-9,
            pairing: 1e-10,
            energy: 1e-9,
            transfer: 1e-8,
            oracle_relative: 1e-7,
        }
    }
}

/// Root-finder configuration.
#[derive(Debug, Clone, Copy)]
pub struct RootConfig {
    /// Convergence threshold on the simultaneous iteration step.
    pub tolerance: f64,
    pub max_iterations: u32,
    /// Seed for the initial placement on a circle.
    pub seed: u64,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tolerance: 1e-12,
            max_iterations: 500,
            seed: DEFAULT_SEED,
        }
    }
}

/// The M Bethe roots with reciprocal ordering and their u-parameters.
///
/// Roots are ordered so `z_m^-1 = z_{M-m+1}` (1-indexed), and the
/// u-parameters satisfy `u_m^-1 = -u_{M-m+1}`.
#[derive(Debug, Clone)]
pub struct BetheRootSet {
    pub m: u32,
    pub roots: Vec<Complex64>,
    pub u_params: Vec<Complex64>,
    /// Bits of working precision behind the stored roots (53 = double).
    pub precision_bits: u32,
}

fn tau_numeric() -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::PI / 3.0)
}

fn sigma_numeric(x: Complex64) -> Complex64 {
    x - 1.0 / x
}

/// `z = (t^2 u^2 - 1) / (u^2 - t^2)`, the map from u-parameters to roots.
pub fn root_from_u(u: Complex64) -> Complex64 {
    let t2 = tau_numeric().powi(2);
    (t2 * u * u - 1.0) / (u * u - t2)
}

/// Durand-Kerner simultaneous iteration on a monic polynomial given by
/// ascending coefficients (excluding the leading 1).
fn durand_kerner(
    coeffs: &[f64],
    config: &RootConfig,
) -> Result<Vec<Complex64>, BetheError> {
    let degree = coeffs.len();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let offset: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let radius = 1.0
        + coeffs
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()))
            .powf(1.0 / degree as f64);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = offset + std::f64::consts::TAU * k as f64 / degree as f64;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..config.max_iterations {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < config.tolerance {
            return Ok(roots);
        }
    }
    Err(BetheError::NonConvergence {
        iterations: config.max_iterations,
    })
}

/// Finds the roots of `chi(z)`, orders them into reciprocal pairs, and
/// solves for the u-parameters with the sign convention applied.
pub fn roots_of_chi(m: u32, config: &RootConfig) -> Result<BetheRootSet, BetheError> {
    if m < 1 {
        return Err(BetheError::OrderOutOfRange(m));
    }
    let chi = chi_from_esym(&elementary_sym(m).map_err(|_| BetheError::OrderOutOfRange(m))?);
    let coeffs: Vec<f64> = chi.coeffs[..m as usize]
        .iter()
        .map(|c| c.to_f64().expect("moderate coefficients"))
        .collect();
    let unordered = durand_kerner(&coeffs, config)?;
    let roots = pair_reciprocals(unordered, config.tolerance * 100.0)?;

    // u^2 = (z t^2 - 1)/(z - t^2); take the positive-imaginary square
    // root, then overwrite each upper partner so u_m^-1 = -u_{M-m+1}
    let t2 = tau_numeric().powi(2);
    let mut u_params: Vec<Complex64> = roots
        .iter()
        .map(|&z| {
            let u2 = (z * t2 - 1.0) / (z - t2);
            let u = u2.sqrt();
            if u.im > 0.0 || (u.im == 0.0 && u.re > 0.0) {
                u
            } else {
                -u
            }
        })
        .collect();
    let count = u_params.len();
    for i in 0..count / 2 {
        u_params[count - 1 - i] = -1.0 / u_params[i];
    }
    Ok(BetheRootSet { m, roots, u_params, precision_bits: 53 })
}

/// Greedy nearest-match pairing of `z` with `1/z`, ties broken by
/// magnitude ordering; returns roots ordered so `z_m^-1 = z_{M-m+1}`.
fn pair_reciprocals(
    mut pool: Vec<Complex64>,
    tolerance: f64,
) -> Result<Vec<Complex64>, BetheError> {
    // deterministic scan order: by argument, then by magnitude
    pool.sort_by(|a, b| {
        (a.arg(), a.norm())
            .partial_cmp(&(b.arg(), b.norm()))
            .expect("finite roots")
    });
    let mut used = vec![false; pool.len()];
    let mut front = Vec::new();
    let mut middle = Vec::new();
    let mut back = Vec::new();
    for i in 0..pool.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = 1.0 / pool[i];
        let mut best: Option<(usize, f64)> = None;
        for (j, candidate) in pool.iter().enumerate() {
            if j != i && used[j] {
                continue;
            }
            let dist = (candidate - target).norm();
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((j, dist));
            }
        }
        let (j, _) = best.expect("pool nonempty");
        let deviation = (pool[i] * pool[j] - 1.0).norm();
        if deviation > tolerance {
            return Err(BetheError::PairingFailure { index: i, deviation });
        }
        if j == i {
            middle.push(pool[i]);
        } else {
            used[j] = true;
            front.push(pool[i]);
            back.push(pool[j]);
        }
    }
    back.reverse();
    front.extend(middle);
    front.extend(back);
    Ok(front)
}

/// `f(z1, z2) = 1 - 2 D z2 + z1 z2` at `D = -1/2`.
fn bethe_f(z1: Complex64, z2: Complex64) -> Complex64 {
    1.0 + z2 + z1 * z2
}

/// Maximum residual of the Bethe equations
/// `z_k^N = (-1)^(K-1) prod_l f(z_l, z_k) / f(z_k, z_l)` with K = M,
/// N = 2M + 1, at anisotropy -1/2.
pub fn bethe_residual(rs: &BetheRootSet) -> Result<f64, BetheError> {
    let k_count = rs.roots.len();
    let n = 2 * k_count as i32 + 1;
    let sign = if (k_count - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let mut worst = 0.0f64;
    for (k, &zk) in rs.roots.iter().enumerate() {
        let mut rhs = Complex64::new(sign, 0.0);
        for (l, &zl) in rs.roots.iter().enumerate() {
            let denom = bethe_f(zk, zl);
            if denom.norm() < 1e-13 {
                return Err(BetheError::SingularDenominator { k, l });
            }
            rhs *= bethe_f(zl, zk) / denom;
        }
        worst = worst.max((zk.powi(n) - rhs).norm());
    }
    Ok(worst)
}

/// `E = -D N / 2 + sum_k (2D - z_k - 1/z_k)`.
pub fn energy(rs: &BetheRootSet, delta: f64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(-delta * f64::from(n) / 2.0, 0.0);
    for &z in &rs.roots {
        acc += 2.0 * delta - z - 1.0 / z;
    }
    acc
}

/// Generates sample points on `|u| = radius`, rejecting any that sit near
/// a pole of the transfer-eigenvalue factors.
pub fn transfer_samples(rs: &BetheRootSet, count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let u = Complex64::from_polar(2.0, angle);
        if transfer_eigenvalue(rs, u).is_ok() {
            out.push(u);
        }
    }
    out
}

/// The eigenvalue expression
/// `lambda(u) = a^N(u) prod_k U(u, z_k) + b^N(u) prod_k V(u, z_k)` with
/// `a = sigma(t u)`, `b = sigma(t^-1 u)`, `c = sigma(t^2)`.
pub fn transfer_eigenvalue(rs: &BetheRootSet, u: Complex64) -> Result<Complex64, BetheError> {
    const POLE_EPS: f64 = 1e-6;
    let tau = tau_numeric();
    let n = 2 * rs.roots.len() as u32 + 1;
    let a = sigma_numeric(tau * u);
    let b = sigma_numeric(u / tau);
    let c = sigma_numeric(tau * tau);
    let mut prod_u = Complex64::new(1.0, 0.0);
    let mut prod_v = Complex64::new(1.0, 0.0);
    for &z in &rs.roots {
        let denom_u = a * a - a * b * z;
        let denom_v = a * b - b * b * z;
        if denom_u.norm() < POLE_EPS || denom_v.norm() < POLE_EPS {
            return Err(BetheError::PoleProximity(u));
        }
        prod_u *= (a * b + (c * c - b * b) * z) / denom_u;
        prod_v *= (a * a - c * c - a * b * z) / denom_v;
    }
    Ok(a.powu(n) * prod_u + b.powu(n) * prod_v)
}

/// Maximum deviation of the transfer eigenvalue from `sigma^N(u)` over the
/// sample points.
pub fn transfer_eigenvalue_check(
    rs: &BetheRootSet,
    samples: &[Complex64],
) -> Result<f64, BetheError> {
    let n = 2 * rs.roots.len() as u32 + 1;
    let mut worst = 0.0f64;
    for &u in samples {
        let lambda = transfer_eigenvalue(rs, u)?;
        let expected = sigma_numeric(u).powu(n);
        worst = worst.max((lambda - expected).norm());
    }
    Ok(worst)
}

/// Brute-force Bethe eigenvector by the permutation sum
/// `psi^{n_1..n_K} = sum_s A_s z_{s(1)}^{n_1} ... z_{s(K)}^{n_K}` with
/// `A_s = sgn(s) prod_{k1<k2} f(z_{s(k2)}, z_{s(k1)})`.
///
/// Components come out in `enumerate_sector(n, M)` order. Factorial in M;
/// refused above M = 6.
pub fn bethe_vector_oracle(rs: &BetheRootSet, n: u32) -> Result<Vec<Complex64>, BetheError> {
    let m = rs.roots.len();
    if m > 6 {
        return Err(BetheError::OracleOrderTooLarge(rs.m));
    }
    assert_eq!(n, 2 * rs.m + 1, "chain length must be 2M + 1");
    // z_j^p for p = 0..=N
    let powers: Vec<Vec<Complex64>> = rs
        .roots
        .iter()
        .map(|&z| {
            let mut row = Vec::with_capacity(n as usize + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=n {
                row.push(acc);
                acc *= z;
            }
            row
        })
        .collect();
    let permutations = signed_permutations(m);
    let amplitudes: Vec<Complex64> = permutations
        .iter()
        .map(|(perm, sign)| {
            let mut a = Complex64::new(*sign, 0.0);
            for k2 in 0..m {
                for k1 in 0..k2 {
                    a *= bethe_f(rs.roots[perm[k2]], rs.roots[perm[k1]]);
                }
            }
            a
        })
        .collect();
    let sector = spin::enumerate_sector(n, m as u32);
    let mut out = Vec::with_capacity(sector.len());
    for state in &sector {
        let positions = state.positions();
        let mut component = Complex64::new(0.0, 0.0);
        for ((perm, _), amplitude) in permutations.iter().zip(&amplitudes) {
            let mut term = *amplitude;
            for (slot, &pos) in positions.iter().enumerate() {
                term *= powers[perm[slot]][pos as usize];
            }
            component += term;
        }
        out.push(component);
    }
    let peak = out.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
    if peak < 1e-10 {
        return Err(BetheError::DegenerateVector);
    }
    Ok(out)
}

/// All permutations of `0..m` with signs, generated by Heap's algorithm.
fn signed_permutations(m: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..m).collect();
    let mut sign = 1.0;
    let mut counters = vec![0usize; m];
    out.push((items.clone(), sign));
    let mut i = 0;
    while i < m {
        if counters[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(counters[i], i);
            }
            sign = -sign;
            out.push((items.clone(), sign));
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    out
}

/// Maximum relative componentwise deviation between the permutation-sum
/// oracle and the exact solve, after scaling both so the component that is
/// minimal in the exact vector equals 1.
pub fn oracle_vs_exact(n: u32, config: &RootConfig) -> Result<f64, BetheError> {
    let ground = spin::ground_candidate(n)?;
    let exact: Vec<Rational> = ground.vector.expand();
    let rs = roots_of_chi((n - 1) / 2, config)?;
    let oracle = bethe_vector_oracle(&rs, n)?;
    let min_index = exact
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.cmp(b))
        .map(|(i, _)| i)
        .expect("nonempty sector");
    let scale = oracle[min_index];
    if scale.norm() < 1e-12 {
        return Err(BetheError::DegenerateVector);
    }
    let mut worst = 0.0f64;
    for (c, e) in oracle.iter().zip(&exact) {
        let exact_value = e.to_f64().expect("component fits f64");
        let deviation = (c / scale - exact_value).norm() / exact_value.abs();
        worst = worst.max(deviation);
    }
    Ok(worst)
}

/// Reciprocal-pairing defect `max_m |z_m z_{M-m+1} - 1|`.
pub fn pairing_defect(rs: &BetheRootSet) -> f64 {
    let count = rs.roots.len();
    (0..count)
        .map(|i| (rs.roots[i] * rs.roots[count - 1 - i] - 1.0).norm())
        .fold(0.0, f64::max)
}

/// Round-trip defect of the u-parameter map
/// `max_k |(t^2 u_k^2 - 1)/(u_k^2 - t^2) - z_k|`, plus the sign-convention
/// defect `max_m |1/u_m + u_{M-m+1}|`.
pub fn u_map_defect(rs: &BetheRootSet) -> (f64, f64) {
    let count = rs.roots.len();
    let round_trip = rs
        .u_params
        .iter()
        .zip(&rs.roots)
        .map(|(&u, &z)| (root_from_u(u) - z).norm())
        .fold(0.0, f64::max);
    let sign = (0..count)
        .map(|i| (1.0 / rs.u_params[i] + rs.u_params[count - 1 - i]).norm())
        .fold(0.0, f64::max);
    (round_trip, sign)
}

// ---------------------------------------------------------------------
// High-precision refinement: Newton iteration on exact Gaussian-rational
// arithmetic, rounding to a dyadic grid between steps.
// ---------------------------------------------------------------------

/// A complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    fn from_f64(z: Complex64) -> Self {
        GaussianRational {
            re: Rational::from_float(z.re).expect("finite"),
            im: Rational::from_float(z.im).expect("finite"),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    fn add_rational(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re + r, im: self.im.clone() }
    }

    fn div(&self, other: &Self) -> Self {
        let norm = &other.re * &other.re + &other.im * &other.im;
        GaussianRational {
            re: (&self.re * &other.re + &self.im * &other.im) / &norm,
            im: (&self.im * &other.re - &self.re * &other.im) / &norm,
        }
    }

    fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Nearest dyadic with denominator `2^bits`.
    fn round_to_bits(&self, bits: u32) -> Self {
        GaussianRational {
            re: round_dyadic(&self.re, bits),
            im: round_dyadic(&self.im, bits),
        }
    }

    /// Decimal rendering of both parts.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (decimal_string(&self.re, digits), decimal_string(&self.im, digits))
    }
}

fn round_dyadic(r: &Rational, bits: u32) -> Rational {
    let scaled_num: BigInt = r.numer() << (bits + 1);
    let twice_den: BigInt = r.denom() * BigInt::from(2);
    let rounded = (scaled_num + r.denom()) / twice_den;
    Rational::new(rounded, BigInt::one() << bits)
}

fn eval_gaussian(chi: &ChiPolynomial, z: &GaussianRational) -> GaussianRational {
    let mut acc = GaussianRational { re: Rational::zero(), im: Rational::zero() };
    for c in chi.coeffs.iter().rev() {
        acc = acc.mul(z).add_rational(c);
    }
    acc
}

fn eval_gaussian_derivative(chi: &ChiPolynomial, z: &GaussianRational) -> GaussianRational {
    let mut acc = GaussianRational { re: Rational::zero(), im: Rational::zero() };
    for (j, c) in chi.coeffs.iter().enumerate().skip(1).rev() {
        acc = acc.mul(z).add_rational(&(c * crate::rational::rat(j as i64)));
    }
    acc
}

/// Polishes double-precision roots to `bits` bits by exact Newton steps.
pub fn refine_roots(m: u32, seeds: &[Complex64], bits: u32) -> Vec<GaussianRational> {
    let chi = chi_from_esym(&elementary_sym(m).expect("M >= 1"));
    let work_bits = bits + 24;
    let threshold = Rational::new(BigInt::one(), BigInt::one() << (2 * bits));
    seeds
        .iter()
        .map(|&seed| {
            let mut z = GaussianRational::from_f64(seed).round_to_bits(work_bits);
            for _ in 0..64 {
                let value = eval_gaussian(&chi, &z);
                let slope = eval_gaussian_derivative(&chi, &z);
                let step = value.div(&slope);
                z = z.sub(&step).round_to_bits(work_bits);
                if step.norm_sq() < threshold {
                    break;
                }
            }
            z
        })
        .collect()
}

// ---------------------------------------------------------------------
// Fixed-point complex arithmetic for the extended-precision transfer
// check: at N = 21 the two product terms of the eigenvalue reach 2^N, so
// an absolute residual bound below their f64 ulp needs wider mantissas.
// ---------------------------------------------------------------------

/// Complex number in fixed-point representation: `(re + i im) / 2^scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    re: BigInt,
    im: BigInt,
    scale: u32,
}

impl BigComplex {
    pub fn from_f64(z: Complex64, scale: u32) -> Self {
        let lift = |x: f64| {
            let r = Rational::from_float(x).expect("finite");
            (r.numer() << scale) / r.denom()
        };
        BigComplex { re: lift(z.re), im: lift(z.im), scale }
    }

    pub fn from_gaussian(g: &GaussianRational, scale: u32) -> Self {
        BigComplex {
            re: (g.re.numer() << scale) / g.re.denom(),
            im: (g.im.numer() << scale) / g.im.denom(),
            scale,
        }
    }

    /// The sixth root of unity at this precision.
    pub fn tau(scale: u32) -> Self {
        let half = BigInt::one() << (scale - 1);
        let sqrt3_half = crate::rational::isqrt_scaled(3, scale) >> 1;
        BigComplex { re: half, im: sqrt3_half, scale }
    }

    pub fn to_complex64(&self) -> Complex64 {
        let factor = 2f64.powi(-(self.scale as i32));
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN) * factor,
            self.im.to_f64().unwrap_or(f64::NAN) * factor,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.scale, other.scale);
        BigComplex {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            scale: self.scale,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.scale, other.scale);
        BigComplex {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            scale: self.scale,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.scale, other.scale);
        BigComplex {
            re: (&self.re * &other.re - &self.im * &other.im) >> self.scale,
            im: (&self.re * &other.im + &self.im * &other.re) >> self.scale,
            scale: self.scale,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        debug_assert_eq!(self.scale, other.scale);
        // multiply by the conjugate; denominator is |other|^2 at 2*scale
        let den = &other.re * &other.re + &other.im * &other.im;
        let re_num = (&self.re * &other.re + &self.im * &other.im) << self.scale;
        let im_num = (&self.im * &other.re - &self.re * &other.im) << self.scale;
        BigComplex { re: re_num / &den, im: im_num / &den, scale: self.scale }
    }

    pub fn inv(&self) -> Self {
        let one = BigComplex {
            re: BigInt::one() << self.scale,
            im: BigInt::zero(),
            scale: self.scale,
        };
        one.div(self)
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: -&self.re, im: -&self.im, scale: self.scale }
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = BigComplex {
            re: BigInt::one() << self.scale,
            im: BigInt::zero(),
            scale: self.scale,
        };
        let mut sq = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// `x - 1/x`.
    pub fn sigma(&self) -> Self {
        self.sub(&self.inv())
    }

    pub fn norm_f64(&self) -> f64 {
        self.to_complex64().norm()
    }
}

/// Extended-precision transfer-eigenvalue deviation: evaluates
/// `a^N(u) prod U + b^N(u) prod V - sigma^N(u)` in fixed-point arithmetic
/// at `scale` fractional bits, with the roots first polished to the same
/// accuracy by exact Newton steps. Needed once `2^N` outgrows the f64
/// granularity of the tolerance.
pub fn transfer_eigenvalue_check_extended(
    rs: &BetheRootSet,
    samples: &[Complex64],
    scale: u32,
) -> Result<f64, BetheError> {
    let refined = refine_roots(rs.m, &rs.roots, scale + 16);
    let roots: Vec<BigComplex> = refined
        .iter()
        .map(|g| BigComplex::from_gaussian(g, scale))
        .collect();
    let tau = BigComplex::tau(scale);
    let n = 2 * rs.roots.len() as u32 + 1;
    let mut worst = 0.0f64;
    for &sample in samples {
        let u = BigComplex::from_f64(sample, scale);
        let a = tau.mul(&u).sigma();
        let b = u.div(&tau).sigma();
        let c = tau.mul(&tau).sigma();
        let c2 = c.mul(&c);
        let ab = a.mul(&b);
        let a2 = a.mul(&a);
        let b2 = b.mul(&b);
        let mut prod_u = BigComplex {
            re: BigInt::one() << scale,
            im: BigInt::zero(),
            scale,
        };
        let mut prod_v = prod_u.clone();
        for z in &roots {
            let denom_u = a2.sub(&ab.mul(z));
            let denom_v = ab.sub(&b2.mul(z));
            if denom_u.norm_f64() < 1e-6 || denom_v.norm_f64() < 1e-6 {
                return Err(BetheError::PoleProximity(sample));
            }
            prod_u = prod_u.mul(&ab.add(&c2.sub(&b2).mul(z)).div(&denom_u));
            prod_v = prod_v.mul(&a2.sub(&c2).sub(&ab.mul(z)).div(&denom_v));
        }
        let lambda = a.powu(n).mul(&prod_u).add(&b.powu(n).mul(&prod_v));
        let expected = u.sigma().powu(n);
        worst = worst.max(lambda.sub(&expected).norm_f64());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn default_roots(m: u32) -> BetheRootSet {
        roots_of_chi(m, &RootConfig::default()).unwrap()
    }

    #[test]
    fn m1_root_and_u_parameter() {
        let rs = default_roots(1);
        assert_eq!(rs.roots.len(), 1);
        assert!((rs.roots[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((rs.u_params[0] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn m5_sum_and_product() {
        let rs = default_roots(5);
        let sum: Complex64 = rs.roots.iter().sum();
        let product: Complex64 = rs.roots.iter().product();
        assert!((sum - Complex64::new(3.0, 0.0)).norm() < 1e-10);
        assert!((product - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn reciprocal_pairing_up_to_10() {
        let tolerances = Tolerances::default();
        for m in 1..=10u32 {
            let rs = default_roots(m);
            assert!(pairing_defect(&rs) < tolerances.pairing, "M={m}");
            let (round_trip, sign) = u_map_defect(&rs);
            assert!(round_trip < 1e-9, "u map round trip at M={m}: {round_trip:e}");
            assert!(sign < 1e-9, "u sign convention at M={m}: {sign:e}");
        }
    }

    #[test]
    fn bethe_residuals_small() {
        let tolerances = Tolerances::default();
        for m in 1..=10u32 {
            let rs = default_roots(m);
            let residual = bethe_residual(&rs).unwrap();
            assert!(residual < tolerances.residual, "M={m}: {residual:e}");
        }
    }

    #[test]
    fn m1_residual_is_exact() {
        let rs = default_roots(1);
        assert!(bethe_residual(&rs).unwrap() < 1e-14);
    }

    #[test]
    fn perturbed_root_fails_equations() {
        let mut rs = default_roots(5);
        rs.roots[0] *= 1.01;
        let residual = bethe_residual(&rs).unwrap();
        assert!(residual > 1e-3, "perturbation must blow up the residual, got {residual:e}");
    }

    #[test]
    fn energies_hit_minus_three_quarters_n() {
        let tolerances = Tolerances::default();
        for m in [1u32, 5, 8, 10] {
            let rs = default_roots(m);
            let n = 2 * m + 1;
            let e = energy(&rs, -0.5, n);
            let expected = -3.0 * f64::from(n) / 4.0;
            assert!(
                (e - Complex64::new(expected, 0.0)).norm() < tolerances.energy,
                "M={m}: {e}"
            );
        }
    }

    #[test]
    fn transfer_eigenvalue_matches_sigma_power() {
        let tolerances = Tolerances::default();
        for m in [1u32, 4] {
            let rs = default_roots(m);
            let samples = transfer_samples(&rs, 20, DEFAULT_SEED);
            let worst = transfer_eigenvalue_check(&rs, &samples).unwrap();
            assert!(worst < tolerances.transfer, "M={m}: {worst:e}");
        }
    }

    #[test]
    fn transfer_rejects_pole_sample() {
        let rs = default_roots(2);
        let pole = rs.u_params[0];
        assert!(matches!(
            transfer_eigenvalue(&rs, pole),
            Err(BetheError::PoleProximity(_))
        ));
    }

    #[test]
    fn oracle_m1_is_constant() {
        let rs = default_roots(1);
        let vector = bethe_vector_oracle(&rs, 3).unwrap();
        assert_eq!(vector.len(), 3);
        for pair in vector.windows(2) {
            assert!((pair[0] - pair[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_matches_exact_solve() {
        let tolerances = Tolerances::default();
        for n in [3u32, 5, 7] {
            let deviation = oracle_vs_exact(n, &RootConfig::default()).unwrap();
            assert!(deviation < tolerances.oracle_relative, "N={n}: {deviation:e}");
        }
    }

    #[test]
    fn oracle_m5_reproduces_max_ratio() {
        let rs = default_roots(5);
        let vector = bethe_vector_oracle(&rs, 11).unwrap();
        let sector = spin::enumerate_sector(11, 5);
        let find = |positions: &[u32]| {
            let target = spin::SpinBasisState::new(11, positions).unwrap();
            sector.iter().position(|s| *s == target).unwrap()
        };
        let ratio = vector[find(&[1, 3, 5, 7, 9])] / vector[find(&[1, 2, 3, 4, 5])];
        assert!((ratio - Complex64::new(429.0, 0.0)).norm() < 429.0 * 1e-6);
    }

    #[test]
    fn oracle_refuses_large_m() {
        let rs = default_roots(7);
        assert!(matches!(
            bethe_vector_oracle(&rs, 15),
            Err(BetheError::OracleOrderTooLarge(7))
        ));
    }

    #[test]
    fn refinement_reaches_requested_bits() {
        let rs = default_roots(3);
        let refined = refine_roots(3, &rs.roots, 128);
        let chi = chi_from_esym(&elementary_sym(3).unwrap());
        for z in &refined {
            let residual = eval_gaussian(&chi, z).norm_sq();
            let bound = Rational::new(BigInt::one(), BigInt::one() << 200);
            assert!(residual < bound, "residual {residual}");
        }
    }

    #[test]
    fn refined_roots_match_doubles() {
        let rs = default_roots(4);
        let refined = refine_roots(4, &rs.roots, 80);
        for (z, g) in rs.roots.iter().zip(&refined) {
            let re = g.re.to_f64().unwrap();
            let im = g.im.to_f64().unwrap();
            assert!((z - Complex64::new(re, im)).norm() < 1e-10);
        }
    }

    #[test]
    fn bigcomplex_arithmetic_matches_f64() {
        let scale = 96;
        let x = Complex64::new(1.25, -0.5);
        let y = Complex64::new(-0.75, 2.0);
        let bx = BigComplex::from_f64(x, scale);
        let by = BigComplex::from_f64(y, scale);
        assert!((bx.mul(&by).to_complex64() - x * y).norm() < 1e-12);
        assert!((bx.div(&by).to_complex64() - x / y).norm() < 1e-12);
        assert!((bx.powu(5).to_complex64() - x.powi(5)).norm() < 1e-10);
        assert!((bx.sigma().to_complex64() - (x - 1.0 / x)).norm() < 1e-12);
        assert!((bx.neg().add(&bx)).norm_f64() < 1e-20);
    }

    #[test]
    fn bigcomplex_tau_is_a_sixth_root() {
        let scale = 128;
        let tau = BigComplex::tau(scale);
        let one = BigComplex::from_f64(Complex64::new(1.0, 0.0), scale);
        assert!(tau.powu(6).sub(&one).norm_f64() < 1e-30);
        assert!((tau.to_complex64() - tau_numeric()).norm() < 1e-15);
    }

    #[test]
    fn extended_transfer_check_reaches_tight_bounds() {
        // at M = 10 the f64 route cannot certify 1e-8 absolute because the
        // eigenvalue itself is of order 2^21; the fixed-point route can
        let rs = default_roots(10);
        let samples = transfer_samples(&rs, 20, DEFAULT_SEED);
        let worst = transfer_eigenvalue_check_extended(&rs, &samples, 192).unwrap();
        assert!(worst < Tolerances::default().transfer, "{worst:e}");
        assert!(worst < 1e-20, "{worst:e}");
    }

    #[test]
    fn extended_and_f64_checks_agree_at_small_m() {
        let rs = default_roots(2);
        let samples = transfer_samples(&rs, 5, DEFAULT_SEED);
        let coarse = transfer_eigenvalue_check(&rs, &samples).unwrap();
        let fine = transfer_eigenvalue_check_extended(&rs, &samples, 160).unwrap();
        assert!(fine <= coarse + 1e-12, "fine {fine:e} vs coarse {coarse:e}");
    }

    #[test]
    fn signed_permutation_count_and_signs() {
        let perms = signed_permutations(4);
        assert_eq!(perms.len(), 24);
        let positive: usize = perms.iter().filter(|(_, s)| *s > 0.0).count();
        assert_eq!(positive, 12);
    }

    #[test]
    fn gaussian_rounding_is_dyadic() {
        let x = GaussianRational {
            re: crate::rational::ratio(1, 3),
            im: rat(0),
        };
        let rounded = x.round_to_bits(10);
        assert_eq!(rounded.re, crate::rational::ratio(341, 1024));
    }
}
