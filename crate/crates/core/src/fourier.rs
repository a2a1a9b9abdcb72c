//! Spectral decomposition of `S(p, q)`.
//!
//! With `f_m` the indicator of `{1, …, m} ⊂ Z/nZ` and `c_n` the Ramanujan sum,
//!
//! ```text
//! S(p, q) = Σ_{k,ℓ} f̂_{2p-1}(k) f̂_{2q-1}(ℓ) c_n(kp + ℓq)
//! ```
//!
//! The `(0, 0)` term is the main term `M(p, q) = (2p-1)(2q-1)φ(n)/n²`; the
//! rest is the error term `E(p, q)`. This module evaluates the expansion and
//! checks the bounds on `E` numerically: the crude global bound, and the
//! sharper bound available outside a small exceptional set of residue
//! classes modulo `d = P^α`, where `P` is the largest prime factor of `n`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{factor_profile, gcd, mul_mod, ramanujan_table, FactorProfile};
use crate::criterion::{count_s, sweep_pairs};
use crate::error::{Error, Result};
use crate::triangle::{in_hard_window, require_hard_window, Eta};

/// Absolute tolerance for reconstructing `S` from its spectral expansion.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-6;

fn check_interval(n: u64, m: u64) -> Result<()> {
    if m == 0 || m >= n {
        return Err(Error::IntervalOutOfRange { n, m });
    }
    Ok(())
}

#[inline]
fn root_of_unity(num: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, -TAU * (num % n) as f64 / n as f64)
}

/// `f̂(k) = (1/n) Σ_{x=1}^{m} e^{-2πikx/n}` for the interval indicator of
/// length `m`, via the geometric-series closed form.
pub fn interval_hat(n: u64, m: u64, k: u64) -> Result<Complex64> {
    check_interval(n, m)?;
    Ok(interval_hat_unchecked(n, m, k % n))
}

fn interval_hat_unchecked(n: u64, m: u64, k: u64) -> Complex64 {
    let nf = n as f64;
    if k == 0 {
        return Complex64::new(m as f64 / nf, 0.0);
    }
    let step = root_of_unity(k, n);
    let tail = root_of_unity(mul_mod(k, m, n), n);
    step * (Complex64::new(1.0, 0.0) - tail) / (Complex64::new(1.0, 0.0) - step) / nf
}

/// All `n` coefficients of the length-`m` interval indicator.
pub fn interval_coefficients(n: u64, m: u64) -> Result<Vec<Complex64>> {
    check_interval(n, m)?;
    Ok((0..n).map(|k| interval_hat_unchecked(n, m, k)).collect())
}

/// `1/(2 min(k, n-k))`, the pointwise bound on `|f̂(k)|` for `k ≢ 0`.
pub fn coefficient_bound(n: u64, k: u64) -> f64 {
    let k = k % n;
    1.0 / (2.0 * k.min(n - k) as f64)
}

/// `(2p-1)(2q-1)φ(n)/n²`.
pub fn main_term(p: u64, q: u64, n: u64) -> Result<f64> {
    require_hard_window(p, q, n)?;
    let phi = factor_profile(n)?.totient;
    Ok(main_term_with(p, q, n, phi))
}

fn main_term_with(p: u64, q: u64, n: u64, phi: u64) -> f64 {
    let num = (2 * p - 1) as u128 * (2 * q - 1) as u128 * phi as u128;
    num as f64 / (n as u128 * n as u128) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDecomposition {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub s_direct: u64,
    pub main_term: f64,
    pub error_term: f64,
    pub spectral_sum: f64,
    pub residual: f64,
}

/// Evaluate the full double sum and compare it with the direct count.
/// Cost is `n²` table lookups; intended for `n` up to a few hundred.
pub fn spectral_s(p: u64, q: u64, n: u64) -> Result<SpectralDecomposition> {
    require_hard_window(p, q, n)?;
    let profile = factor_profile(n)?;
    spectral_with(p, q, &profile, &ramanujan_table(&profile))
}

/// As [`spectral_s`], sharing the factorization and `c_n` table across
/// pairs of the same denominator.
pub fn spectral_with(
    p: u64,
    q: u64,
    profile: &FactorProfile,
    table: &[i64],
) -> Result<SpectralDecomposition> {
    let n = profile.n;
    require_hard_window(p, q, n)?;
    let fp = interval_coefficients(n, 2 * p - 1)?;
    let fq = interval_coefficients(n, 2 * q - 1)?;
    let (pm, qm) = (p % n, q % n);

    let mut total = Complex64::new(0.0, 0.0);
    for (k, &a) in fp.iter().enumerate() {
        let base = mul_mod(k as u64, pm, n);
        let mut inner = Complex64::new(0.0, 0.0);
        let mut idx = base;
        for &b in &fq {
            inner += b * table[idx as usize] as f64;
            idx += qm;
            if idx >= n {
                idx -= n;
            }
        }
        total += a * inner;
    }

    let s_direct = count_s(p, q, n)?;
    let main = main_term_with(p, q, n, profile.totient);
    let residual = (total - Complex64::new(s_direct as f64, 0.0)).norm();
    if residual >= RECONSTRUCTION_TOLERANCE {
        return Err(Error::Numerical(format!(
            "spectral sum for ({p},{q})/{n} misses S = {s_direct} by {residual:e}"
        )));
    }
    Ok(SpectralDecomposition {
        p,
        q,
        n,
        s_direct,
        main_term: main,
        error_term: s_direct as f64 - main,
        spectral_sum: total.re,
        residual,
    })
}

/// `Σ_f(d; b)`: the `ℓ¹` mass of the coefficients in the class `ℓ ≡ b (mod d)`.
pub fn sigma_residue(n: u64, m: u64, d: u64, b: u64) -> Result<f64> {
    let table = sigma_table(n, m, d)?;
    table
        .get(b as usize)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("residue {b} outside [0, {d})")))
}

/// `Σ_f(d; b)` for every `b ∈ [0, d)`.
pub fn sigma_table(n: u64, m: u64, d: u64) -> Result<Vec<f64>> {
    check_interval(n, m)?;
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, n });
    }
    let mut out = vec![0.0; d as usize];
    for l in 0..n {
        out[(l % d) as usize] += interval_hat_unchecked(n, m, l).norm();
    }
    Ok(out)
}

/// `m/n + (1 + log(n/d))/d` for `b = 0`, otherwise
/// `1/(2b) + 1/(2(d-b)) + (1 + log(n/d))/d`.
pub fn sigma_residue_bound(n: u64, m: u64, d: u64, b: u64) -> f64 {
    let tail = (1.0 + (n as f64 / d as f64).ln()) / d as f64;
    if b == 0 {
        m as f64 / n as f64 + tail
    } else {
        1.0 / (2.0 * b as f64) + 1.0 / (2.0 * (d - b) as f64) + tail
    }
}

/// `1 + log n`.
pub fn log_factor(n: u64) -> f64 {
    1.0 + (n as f64).ln()
}

/// Residue classes of `p` modulo `d = P^α` on which the sharp error bound is
/// not claimed, together with the per-unit weights `S(u)` that define them.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalSet {
    pub n: u64,
    pub q: u64,
    pub r: f64,
    pub prime: u64,
    pub alpha: u32,
    pub d: u64,
    /// Units `u` mod `d` with `S(u)`, ascending in `u`.
    pub s_values: Vec<(u64, f64)>,
    /// Cut-off `7R(1 + log n)²/d`.
    pub threshold: f64,
    /// Classes `-q·u mod d` over the `u` with `S(u)` above the cut-off, sorted.
    pub members: Vec<u64>,
}

impl ExceptionalSet {
    pub fn phi_d(&self) -> u64 {
        self.s_values.len() as u64
    }

    /// `φ(d)/R`.
    pub fn size_bound(&self) -> f64 {
        self.phi_d() as f64 / self.r
    }

    pub fn mean_s(&self) -> f64 {
        self.s_values.iter().map(|&(_, s)| s).sum::<f64>() / self.phi_d() as f64
    }

    /// `7(1 + log n)²/d`.
    pub fn mean_bound(&self) -> f64 {
        7.0 * log_factor(self.n).powi(2) / self.d as f64
    }

    pub fn contains(&self, p: u64) -> bool {
        self.members.binary_search(&(p % self.d)).is_ok()
    }
}

fn largest_prime_power(profile: &FactorProfile) -> Result<(u64, u32, u64)> {
    profile
        .largest_prime_power()
        .ok_or_else(|| Error::InvalidArgument("n must be at least 2".into()))
}

fn check_r(r: f64) -> Result<()> {
    if r.is_nan() || r < 2.0 || !r.is_finite() {
        return Err(Error::ThresholdTooSmall(r));
    }
    Ok(())
}

pub fn exceptional_set(n: u64, q: u64, r: f64) -> Result<ExceptionalSet> {
    check_r(r)?;
    let profile = factor_profile(n)?;
    let (prime, alpha, d) = largest_prime_power(&profile)?;
    if q.is_multiple_of(prime) {
        return Err(Error::SharesLargestPrime { q, prime });
    }
    if q == 0 || 2 * q > n {
        return Err(Error::IntervalOutOfRange {
            n,
            m: (2 * q).saturating_sub(1),
        });
    }
    let sigma = sigma_table(n, 2 * q - 1, d)?;

    // S(u) = Σ_k w(k) Σ(d; uk) depends on k only through k mod d.
    let mut weight = vec![0.0; d as usize];
    for k in 1..n {
        weight[(k % d) as usize] += coefficient_bound(n, k);
    }

    let units: Vec<u64> = (1..d).filter(|&u| gcd(u, d) == 1).collect();
    let s_values: Vec<(u64, f64)> = units
        .par_iter()
        .map(|&u| {
            let s = weight
                .iter()
                .enumerate()
                .map(|(c, w)| w * sigma[mul_mod(u, c as u64, d) as usize])
                .sum();
            (u, s)
        })
        .collect();

    let threshold = 7.0 * r * log_factor(n).powi(2) / d as f64;
    let neg_q = (d - q % d) % d;
    let mut members: Vec<u64> = s_values
        .iter()
        .filter(|&&(_, s)| s > threshold)
        .map(|&(u, _)| mul_mod(neg_q, u, d))
        .collect();
    members.sort_unstable();

    Ok(ExceptionalSet {
        n,
        q,
        r,
        prime,
        alpha,
        d,
        s_values,
        threshold,
        members,
    })
}

/// Outcome of checking `|E(p, q)| <= 9Rφ(n)(1 + log n)²/P` over every
/// admissible `p` for fixed `(n, q, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoundReport {
    pub n: u64,
    pub q: u64,
    pub r: f64,
    pub prime: u64,
    pub d: u64,
    pub exceptional_size: usize,
    pub exceptional_bound: f64,
    pub mean_s: f64,
    pub mean_bound: f64,
    pub bound: f64,
    /// Number of `p` checked against the bound.
    pub checked: usize,
    /// Number of `p` skipped because `p mod d` is exceptional.
    pub excluded: usize,
    pub max_ratio: f64,
    pub worst_p: Option<u64>,
}

impl ErrorBoundReport {
    pub fn bound_holds(&self) -> bool {
        self.max_ratio <= 1.0
    }

    pub fn set_within_bound(&self) -> bool {
        self.exceptional_size as f64 <= self.exceptional_bound
    }

    pub fn mean_within_bound(&self) -> bool {
        self.mean_s <= self.mean_bound
    }

    pub fn pass(&self) -> bool {
        self.bound_holds() && self.set_within_bound()
    }
}

pub fn verify_error_bound(n: u64, q: u64, r: f64) -> Result<ErrorBoundReport> {
    let set = exceptional_set(n, q, r)?;
    let phi = factor_profile(n)?.totient;
    let bound = 9.0 * r * phi as f64 * log_factor(n).powi(2) / set.prime as f64;

    let candidates: Vec<u64> = (1..n)
        .take_while(|&p| 2 * (p + q) < n)
        .filter(|&p| in_hard_window(p, q, n) && p % set.prime != 0)
        .collect();
    let (checked, excluded): (Vec<u64>, Vec<u64>) =
        candidates.into_iter().partition(|&p| !set.contains(p));

    let ratios: Vec<(u64, f64)> = checked
        .par_iter()
        .map(|&p| {
            let s = count_s(p, q, n)?;
            let e = s as f64 - main_term_with(p, q, n, phi);
            Ok((p, e.abs() / bound))
        })
        .collect::<Result<_>>()?;
    let worst = ratios
        .iter()
        .copied()
        .fold(None, |acc: Option<(u64, f64)>, cur| match acc {
            Some(best) if best.1 >= cur.1 => Some(best),
            _ => Some(cur),
        });

    Ok(ErrorBoundReport {
        n,
        q,
        r,
        prime: set.prime,
        d: set.d,
        exceptional_size: set.members.len(),
        exceptional_bound: set.size_bound(),
        mean_s: set.mean_s(),
        mean_bound: set.mean_bound(),
        bound,
        checked: checked.len(),
        excluded: excluded.len(),
        max_ratio: worst.map_or(0.0, |w| w.1),
        worst_p: worst.map(|w| w.0),
    })
}

/// Outcome of checking `|E(p, q)| <= φ(n)(1 + log n)²` over all of `H_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrudeBoundReport {
    pub n: u64,
    pub pairs: usize,
    pub bound: f64,
    pub max_ratio: f64,
}

impl CrudeBoundReport {
    pub fn pass(&self) -> bool {
        self.max_ratio <= 1.0
    }
}

pub fn crude_bound_check(n: u64) -> Result<CrudeBoundReport> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "crude bound check needs n >= 5, got {n}"
        )));
    }
    let phi = factor_profile(n)?.totient;
    let bound = phi as f64 * log_factor(n).powi(2);
    let outcomes = sweep_pairs(n, Eta::ZERO);
    let max_ratio = outcomes
        .iter()
        .map(|o| (o.s_count as f64 - main_term_with(o.p, o.q, n, phi)).abs() / bound)
        .fold(0.0, f64::max);
    Ok(CrudeBoundReport {
        n,
        pairs: outcomes.len(),
        bound,
        max_ratio,
    })
}
