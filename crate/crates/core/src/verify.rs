//! Invariant suites behind `hardwindow verify`. Each suite stops at the first
//! violation and reports it as a counterexample.

use std::fmt;

use crate::arith::{factor_profile, gcd, ramanujan_oracle, ramanujan_table, residue};
use crate::criterion::{find_witness, Mode};
use crate::error::Result;
use crate::fourier::{
    coefficient_bound, crude_bound_check, interval_coefficients, log_factor, sigma_residue_bound,
    sigma_table, spectral_with, verify_error_bound,
};
use crate::triangle::{hard_window_pairs, Eta};

/// Slack for comparing floating-point quantities against analytic bounds.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub checks: u64,
    pub failure: Option<String>,
    pub summary: String,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "{}: PASS  checks={}  {}",
                self.suite, self.checks, self.summary
            ),
            Some(why) => write!(f, "{}: FAIL  checks={}  {}", self.suite, self.checks, why),
        }
    }
}

struct Tally {
    suite: &'static str,
    checks: u64,
    failure: Option<String>,
}

impl Tally {
    fn new(suite: &'static str) -> Self {
        Tally {
            suite,
            checks: 0,
            failure: None,
        }
    }

    /// Record one check; returns false once a failure has been seen.
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
        self.failure.is_none()
    }

    fn finish(self, summary: String) -> SuiteOutcome {
        SuiteOutcome {
            suite: self.suite,
            checks: self.checks,
            failure: self.failure,
            summary,
        }
    }
}

/// `Σ_{d | gcd(t, n)} d·μ(n/d)`, an evaluation route independent of the
/// prime-power closed form.
pub fn ramanujan_divisor_sum(n: u64, t: i64) -> Result<i64> {
    let g = gcd(residue(t, n), n);
    let mut total = 0;
    for d in (1..=g).filter(|d| g.is_multiple_of(*d)) {
        total += d as i64 * factor_profile(n / d)?.moebius as i64;
    }
    Ok(total)
}

/// Closed-form Ramanujan sums against complex summation and the divisor sum,
/// plus `c_n(0) = φ(n)`, `c_n(1) = μ(n)` and `Σ_t c_n(t) = 0`.
pub fn ramanujan_suite(max_n: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("ramanujan");
    'outer: for n in 1..=max_n {
        let profile = factor_profile(n)?;
        let table = ramanujan_table(&profile);
        for t in 0..n as i64 {
            let c = table[t as usize];
            let oracle = ramanujan_oracle(n, t)?;
            let divisor = ramanujan_divisor_sum(n, t)?;
            if !tally.check(c == oracle && c == divisor, || {
                format!("c_{n}({t}): closed form {c}, oracle {oracle}, divisor sum {divisor}")
            }) {
                break 'outer;
            }
        }
        let mu = if n == 1 { 1 } else { profile.moebius as i64 };
        let sum: i64 = table.iter().sum();
        let ok = table[0] == profile.totient as i64
            && table[1 % n as usize] == mu
            && (n == 1 || sum == 0);
        if !tally.check(ok, || format!("n = {n}: c_n(0), c_n(1) or Σ c_n(t) wrong")) {
            break;
        }
    }
    Ok(tally.finish(format!("n <= {max_n}")))
}

fn m_grid(n: u64) -> Vec<u64> {
    let mut ms = vec![1, n / 3, n - 1];
    ms.retain(|&m| m >= 1 && m < n);
    ms.sort_unstable();
    ms.dedup();
    ms
}

/// Pointwise and total coefficient bounds for interval indicators.
pub fn coefficient_bounds_suite(max_n: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("coefficient-bounds");
    let mut worst = 0.0f64;
    'outer: for n in 2..=max_n {
        for m in m_grid(n) {
            let coeffs = interval_coefficients(n, m)?;
            for (k, c) in coeffs.iter().enumerate().skip(1) {
                let bound = coefficient_bound(n, k as u64);
                worst = worst.max(c.norm() / bound);
                if !tally.check(c.norm() <= bound + BOUND_SLACK, || {
                    format!("|f̂({k})| = {} > {bound} at n={n} m={m}", c.norm())
                }) {
                    break 'outer;
                }
            }
            let mass: f64 = coeffs.iter().map(|c| c.norm()).sum();
            let limit = log_factor(n);
            if !tally.check(mass <= limit + BOUND_SLACK, || {
                format!("Σ|f̂| = {mass} > {limit} at n={n} m={m}")
            }) {
                break 'outer;
            }
        }
    }
    Ok(tally.finish(format!("n <= {max_n}  max |f̂(k)|/bound = {worst:.6}")))
}

/// Residue-class mass bounds for every divisor `d` and class `b`.
pub fn residue_mass_suite(max_n: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("residue-mass");
    let mut worst = 0.0f64;
    'outer: for n in 2..=max_n {
        for m in m_grid(n) {
            for d in (1..=n).filter(|d| n % d == 0) {
                let table = sigma_table(n, m, d)?;
                for (b, &sigma) in table.iter().enumerate() {
                    let bound = sigma_residue_bound(n, m, d, b as u64);
                    worst = worst.max(sigma / bound);
                    if !tally.check(sigma <= bound + BOUND_SLACK, || {
                        format!("Σ(d={d}; b={b}) = {sigma} > {bound} at n={n} m={m}")
                    }) {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(tally.finish(format!("n <= {max_n}  max ratio = {worst:.6}")))
}

/// Crude error bound `|E| <= φ(n)(1 + log n)²` over all of `H_n`.
pub fn crude_bound_suite(max_n: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("crude-bound");
    let mut worst = 0.0f64;
    for n in 5..=max_n {
        let rep = crude_bound_check(n)?;
        worst = worst.max(rep.max_ratio);
        if !tally.check(rep.pass(), || {
            format!("n = {n}: max |E|/bound = {}", rep.max_ratio)
        }) {
            break;
        }
    }
    Ok(tally.finish(format!("5 <= n <= {max_n}  max ratio = {worst:.6}")))
}

/// Everything about interval coefficients: pointwise, total and per-class
/// bounds (the latter two capped at `n <= 300`), and the crude error bound.
pub fn fourier_bounds_suite(max_n: u64) -> Result<SuiteOutcome> {
    let parts = [
        coefficient_bounds_suite(max_n)?,
        residue_mass_suite(max_n.min(300))?,
        crude_bound_suite(max_n.min(300))?,
    ];
    let checks = parts.iter().map(|p| p.checks).sum();
    let failure = parts
        .iter()
        .find_map(|p| p.failure.as_ref().map(|f| format!("{}: {f}", p.suite)));
    let summary = parts
        .iter()
        .map(|p| format!("[{}: {}]", p.suite, p.summary))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(SuiteOutcome {
        suite: "fourier-bounds",
        checks,
        failure,
        summary,
    })
}

/// `count` evenly spaced elements of `items` (all of them if fewer).
pub fn evenly_spaced<T: Copy>(items: &[T], count: usize) -> Vec<T> {
    if items.len() <= count {
        return items.to_vec();
    }
    (0..count).map(|i| items[i * items.len() / count]).collect()
}

/// Spectral reconstruction of `S` for every pair of each `n`, or `sample`
/// evenly spaced pairs when given.
pub fn spectral_suite(ns: &[u64], sample: Option<usize>) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("spectral");
    let mut worst = 0.0f64;
    'outer: for &n in ns {
        let profile = factor_profile(n)?;
        let table = ramanujan_table(&profile);
        let pairs = hard_window_pairs(n, Eta::ZERO);
        let pairs = match sample {
            Some(k) => evenly_spaced(&pairs, k),
            None => pairs,
        };
        for (p, q) in pairs {
            match spectral_with(p, q, &profile, &table) {
                Ok(dec) => {
                    worst = worst.max(dec.residual);
                    tally.check(true, String::new);
                }
                Err(e) => {
                    tally.check(false, || format!("({p},{q})/{n}: {e}"));
                    break 'outer;
                }
            }
        }
    }
    Ok(tally.finish(format!("max residual = {worst:.3e}")))
}

/// Large-prime error bound, exceptional-set size and average weight for one
/// `(n, q, R)`.
pub fn error_bound_suite(n: u64, q: u64, r: f64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("error-bound");
    let rep = verify_error_bound(n, q, r)?;
    tally.check(rep.bound_holds(), || {
        format!(
            "|E({},{q})| / bound = {} > 1 (n={n}, R={r})",
            rep.worst_p.unwrap_or(0),
            rep.max_ratio
        )
    });
    tally.check(rep.set_within_bound(), || {
        format!(
            "exceptional set has {} classes > φ(d)/R = {}",
            rep.exceptional_size, rep.exceptional_bound
        )
    });
    tally.check(rep.mean_within_bound(), || {
        format!("mean S(u) = {} > {}", rep.mean_s, rep.mean_bound)
    });
    Ok(tally.finish(format!(
        "n={n} q={q} R={r} P={} d={}  checked={} excluded={}  |B|={} <= {:.3}  max_ratio={:.6}",
        rep.prime,
        rep.d,
        rep.checked,
        rep.excluded,
        rep.exceptional_size,
        rep.exceptional_bound,
        rep.max_ratio
    )))
}

/// Pairs `(p, q)` of `H_n` whose triangles belong to a known lattice family,
/// for denominators up to `max_n`.
pub fn known_family_pairs(max_n: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for n in 5..=max_n {
        out.push((1, 1, n));
    }
    // (1, 2, 2m-3)/2m is obtuse with p + q < n/2 from m = 4 on
    for n in (8..=max_n).step_by(2) {
        out.push((1, 2, n));
        out.push((2, 1, n));
    }
    if max_n >= 12 {
        out.push((1, 4, 12));
        out.push((4, 1, 12));
    }
    out.sort_unstable_by_key(|&(p, q, n)| (n, p, q));
    out
}

/// Known lattice triangles must never be ruled out, in either mode.
pub fn regression_families_suite(max_n: u64) -> Result<SuiteOutcome> {
    let mut tally = Tally::new("regression-families");
    'outer: for (p, q, n) in known_family_pairs(max_n) {
        for mode in [Mode::TwoPq, Mode::TwoOfThree] {
            let rep = find_witness(p, q, n, mode)?;
            if !tally.check(!rep.ruled_out, || {
                format!(
                    "({p},{q},{})/{n} ruled out in {mode} by a = {}",
                    n - p - q,
                    rep.witness.unwrap_or(0)
                )
            }) {
                break 'outer;
            }
        }
    }
    Ok(tally.finish(format!("denominators <= {max_n}")))
}
