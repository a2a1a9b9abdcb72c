//! Exact integer primitives: factorization, totient, valuations, reduced
//! residue systems, and Ramanujan sums.
//!
//! Everything here except [`ramanujan_oracle`] is integer-only.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Least nonnegative residue of `x` modulo `n`.
#[inline]
pub fn residue(x: i64, n: u64) -> u64 {
    x.rem_euclid(n as i64) as u64
}

/// Least nonnegative residue of `a * x` modulo `n`, without overflow for
/// `a, x < 2^32`.
#[inline]
pub fn mul_mod(a: u64, x: u64, n: u64) -> u64 {
    ((a as u128 * x as u128) % n as u128) as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization of `n` with the derived arithmetic functions the rest
/// of the crate needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorProfile {
    pub n: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
    pub totient: u64,
    pub moebius: i8,
    /// `P⁺(n)`; `None` for `n = 1`.
    pub largest_prime: Option<u64>,
}

impl FactorProfile {
    /// Exponent of `p` in `n` (zero when `p` does not divide `n`).
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// `(P, α, P^α)` for the largest prime factor `P` of `n`.
    pub fn largest_prime_power(&self) -> Option<(u64, u32, u64)> {
        self.factors.last().map(|&(p, e)| (p, e, p.pow(e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Factor `n` by trial division.
pub fn factor_profile(n: u64) -> Result<FactorProfile> {
    if n == 0 {
        return Err(Error::ZeroModulus(n));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }

    let totient = factors.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1));
    let moebius = if factors.iter().any(|&(_, e)| e >= 2) {
        0
    } else if factors.len() % 2 == 0 {
        1
    } else {
        -1
    };
    let largest_prime = factors.last().map(|&(p, _)| p);
    Ok(FactorProfile {
        n,
        factors,
        totient,
        moebius,
        largest_prime,
    })
}

/// A p-adic valuation. `Infinite` is the valuation of zero and compares
/// greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn p_adic_valuation(t: i64, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(valuation_unchecked(t.unsigned_abs(), p))
}

fn valuation_unchecked(mut t: u64, p: u64) -> Valuation {
    if t == 0 {
        return Valuation::Infinite;
    }
    let mut v = 0;
    while t.is_multiple_of(p) {
        t /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// The reduced residue system modulo `n`, split into all units and the
/// usable ones (`2a ≢ 2 mod n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSet {
    pub modulus: u64,
    pub members: Vec<u64>,
    pub usable: Vec<u64>,
}

impl UnitSet {
    pub fn is_usable(&self, a: u64) -> bool {
        self.usable.binary_search(&a).is_ok()
    }
}

#[inline]
pub fn is_usable_unit(a: u64, n: u64) -> bool {
    gcd(a, n) == 1 && mul_mod(2, a, n) != 2 % n
}

pub fn unit_set(n: u64) -> Result<UnitSet> {
    if n == 0 {
        return Err(Error::ZeroModulus(n));
    }
    let members: Vec<u64> = (1..=n).filter(|&a| gcd(a, n) == 1).collect();
    let usable = members
        .iter()
        .copied()
        .filter(|&a| mul_mod(2, a, n) != 2 % n)
        .collect();
    Ok(UnitSet {
        modulus: n,
        members,
        usable,
    })
}

/// Ramanujan sum `c_n(t)`, evaluated exactly from the prime-power closed
/// form and multiplicativity.
pub fn ramanujan(n: u64, t: i64) -> Result<i64> {
    Ok(ramanujan_with(&factor_profile(n)?, t))
}

/// As [`ramanujan`], reusing a precomputed factorization of `n`.
pub fn ramanujan_with(profile: &FactorProfile, t: i64) -> i64 {
    let t = residue(t, profile.n);
    profile
        .factors
        .iter()
        .map(|&(p, k)| prime_power_ramanujan(p, k, valuation_unchecked(t, p)))
        .product()
}

/// `c_{p^k}(t)` given `v = v_p(t)`.
fn prime_power_ramanujan(p: u64, k: u32, v: Valuation) -> i64 {
    let lower = p.pow(k - 1) as i64;
    match v {
        Valuation::Finite(v) if v + 2 <= k => 0,
        Valuation::Finite(v) if v + 1 == k => -lower,
        _ => lower * (p as i64 - 1),
    }
}

/// `c_n(r)` for every residue `r ∈ [0, n)`.
pub fn ramanujan_table(profile: &FactorProfile) -> Vec<i64> {
    (0..profile.n as i64)
        .map(|r| ramanujan_with(profile, r))
        .collect()
}

/// Ramanujan sum by direct complex summation over the units, rounded to the
/// nearest integer. Fails if the rounding residual exceeds `1e-6 * n`.
pub fn ramanujan_oracle(n: u64, t: i64) -> Result<i64> {
    if n == 0 {
        return Err(Error::ZeroModulus(n));
    }
    let t = residue(t, n);
    let sum: Complex64 = (1..=n)
        .filter(|&a| gcd(a, n) == 1)
        .map(|a| Complex64::from_polar(1.0, TAU * mul_mod(a, t, n) as f64 / n as f64))
        .sum();
    let rounded = sum.re.round();
    let residual = (sum - Complex64::new(rounded, 0.0)).norm();
    if residual >= 1e-6 * n as f64 {
        return Err(Error::Numerical(format!(
            "c_{n}({t}) oracle residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// c_n(t) = Σ_{d | gcd(t, n)} d·μ(n/d), an independent route.
    fn holder(n: u64, t: i64) -> i64 {
        let g = gcd(residue(t, n), n);
        (1..=g)
            .filter(|d| g.is_multiple_of(*d))
            .map(|d| d as i64 * factor_profile(n / d).unwrap().moebius as i64)
            .sum()
    }

    #[test]
    fn factor_profile_small_cases() {
        let p = factor_profile(12).unwrap();
        assert_eq!(p.factors, vec![(2, 2), (3, 1)]);
        assert_eq!((p.totient, p.moebius, p.largest_prime), (4, 0, Some(3)));

        let p = factor_profile(1).unwrap();
        assert!(p.factors.is_empty());
        assert_eq!((p.totient, p.moebius, p.largest_prime), (1, 1, None));

        let p = factor_profile(97).unwrap();
        assert_eq!(p.factors, vec![(97, 1)]);
        assert_eq!((p.totient, p.moebius, p.largest_prime), (96, -1, Some(97)));

        assert_eq!(factor_profile(0), Err(Error::ZeroModulus(0)));
    }

    #[test]
    fn factor_profile_invariants() {
        for n in 1..=2000u64 {
            let p = factor_profile(n).unwrap();
            let prod: u64 = p.factors.iter().map(|&(q, e)| q.pow(e)).product();
            assert_eq!(prod, n);
            assert!(p.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(p.factors.iter().all(|&(q, e)| e >= 1 && is_prime(q)));
            let brute = (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64;
            assert_eq!(p.totient, brute, "phi({n})");
            assert_eq!(p.moebius == 0, !p.is_squarefree());
            assert_eq!(p.largest_prime.is_none(), n == 1);
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(12, 2), Ok(Valuation::Finite(2)));
        assert_eq!(p_adic_valuation(0, 3), Ok(Valuation::Infinite));
        assert_eq!(p_adic_valuation(35, 2), Ok(Valuation::Finite(0)));
        assert_eq!(p_adic_valuation(-24, 2), Ok(Valuation::Finite(3)));
        assert_eq!(p_adic_valuation(10, 4), Err(Error::NotPrime(4)));
        assert!(Valuation::Infinite > Valuation::Finite(u32::MAX));
    }

    #[test]
    fn unit_sets() {
        let u = unit_set(5).unwrap();
        assert_eq!(u.members, vec![1, 2, 3, 4]);
        assert_eq!(u.usable, vec![2, 3, 4]);
        let u = unit_set(12).unwrap();
        assert_eq!(u.members, vec![1, 5, 7, 11]);
        assert_eq!(u.usable, vec![5, 11]);
        let u = unit_set(2).unwrap();
        assert_eq!(u.members, vec![1]);
        assert!(u.usable.is_empty());
        assert!(unit_set(0).is_err());
    }

    #[test]
    fn non_usable_units_count() {
        for n in 1..=500u64 {
            let u = unit_set(n).unwrap();
            assert_eq!(u.members.len() as u64, factor_profile(n).unwrap().totient);
            let excluded = u.members.len() - u.usable.len();
            // 1 + n/2 is a unit exactly when 4 | n.
            let expected = if n % 4 == 0 { 2 } else { 1 };
            assert_eq!(excluded, expected, "n = {n}");
            if n % 2 == 1 && n > 1 {
                assert!(!u.is_usable(1));
                assert_eq!(u.usable.len(), u.members.len() - 1);
            }
        }
    }

    #[test]
    fn ramanujan_prime_powers() {
        assert_eq!(ramanujan(5, 0), Ok(4));
        assert_eq!(ramanujan(4, 2), Ok(-2));
        assert_eq!(ramanujan(8, 2), Ok(0));
        assert_eq!(ramanujan(6, 1), Ok(1));
        assert_eq!(ramanujan(7, 7), Ok(6));
        assert_eq!(ramanujan(6, -5), ramanujan(6, 1));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(ramanujan_oracle(8, 2), Ok(0));
        assert_eq!(ramanujan_oracle(7, 7), Ok(6));
        assert_eq!(ramanujan_oracle(6, 1), Ok(1));
    }

    #[test]
    fn closed_form_matches_oracle_and_divisor_sum() {
        for n in 1..=200u64 {
            let profile = factor_profile(n).unwrap();
            let table = ramanujan_table(&profile);
            for t in 0..n as i64 {
                let c = table[t as usize];
                assert_eq!(c, ramanujan_oracle(n, t).unwrap(), "c_{n}({t})");
                assert_eq!(c, holder(n, t), "c_{n}({t}) divisor sum");
            }
            assert_eq!(table[0], profile.totient as i64);
            assert_eq!(
                table[1 % n as usize],
                if n == 1 { 1 } else { profile.moebius as i64 }
            );
            if n >= 2 {
                assert_eq!(table.iter().sum::<i64>(), 0, "n = {n}");
            }
        }
    }

    #[test]
    fn largest_prime_power_vanishing() {
        // c_{P^α}(t) = 0 unless P^{α-1} | t.
        for n in [8u64, 9, 25, 27, 49, 121, 125] {
            let (p, a, _) = factor_profile(n).unwrap().largest_prime_power().unwrap();
            for t in 0..n as i64 {
                if t % p.pow(a - 1) as i64 != 0 {
                    assert_eq!(ramanujan(n, t), Ok(0));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_moduli(n1 in 1u64..=60, n2 in 1u64..=60, t in -5000i64..5000) {
            prop_assume!(gcd(n1, n2) == 1);
            let lhs = ramanujan(n1 * n2, t).unwrap();
            prop_assert_eq!(lhs, ramanujan(n1, t).unwrap() * ramanujan(n2, t).unwrap());
        }
    }
}
