//! Per-denominator density experiments and their CSV form.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{factor_profile, is_prime};
use crate::criterion::sweep_pairs;
use crate::error::{Error, Result};
use crate::fourier::exceptional_set;
use crate::triangle::{hard_window_pairs, Eta};

/// Smallest `n` for which the `log log n` thresholds are evaluated.
pub const ASYMPTOTIC_MIN_N: u64 = 16;

/// Largest `n` for which the deep audit builds exceptional sets.
pub const DEEP_AUDIT_MAX_N: u64 = 300;

pub const CSV_HEADER: &str =
    "n,p_plus,omega_plus,h_size,ruled_two_pq,ruled_two_of_three,s_ge5,in_C,q_div_P,frac_ruled";

fn log_log(n: u64) -> f64 {
    (n as f64).ln().ln()
}

fn require_asymptotic_domain(n: u64) -> Result<()> {
    if n < ASYMPTOTIC_MIN_N {
        return Err(Error::BelowAsymptoticDomain(n));
    }
    Ok(())
}

/// `P⁺(n) >= n^{1/log log n}`.
///
/// Rejects `n < 2` (outside the definition) and `2 <= n < 16`, where the
/// threshold is either meaningless or above `n` itself.
pub fn omega_plus_member(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "omega-plus needs n >= 2, got {n}"
        )));
    }
    require_asymptotic_domain(n)?;
    let threshold = (n as f64).powf(1.0 / log_log(n));
    let largest = factor_profile(n)?.largest_prime.unwrap_or(1);
    Ok(largest as f64 >= threshold)
}

/// `(2p-1)(2q-1) <= n^{2 - 1/(2 log log n)}`.
pub fn in_region_c(n: u64, p: u64, q: u64) -> Result<bool> {
    require_asymptotic_domain(n)?;
    Ok(region_c_product(p, q) as f64 <= region_c_threshold(n))
}

fn region_c_product(p: u64, q: u64) -> u64 {
    (2 * p - 1) * (2 * q - 1)
}

fn region_c_threshold(n: u64) -> f64 {
    (n as f64).powf(2.0 - 1.0 / (2.0 * log_log(n)))
}

/// Which denominators a range survey visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DenominatorFilter {
    #[default]
    All,
    Primes,
    OmegaPlus,
}

impl DenominatorFilter {
    pub fn admits(self, n: u64) -> bool {
        match self {
            DenominatorFilter::All => true,
            DenominatorFilter::Primes => is_prime(n),
            DenominatorFilter::OmegaPlus => omega_plus_member(n).unwrap_or(false),
        }
    }
}

impl FromStr for DenominatorFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(DenominatorFilter::All),
            "primes" => Ok(DenominatorFilter::Primes),
            "omega-plus" | "omega_plus" => Ok(DenominatorFilter::OmegaPlus),
            _ => Err(Error::InvalidArgument(format!("unknown filter {s:?}"))),
        }
    }
}

impl fmt::Display for DenominatorFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DenominatorFilter::All => "all",
            DenominatorFilter::Primes => "primes",
            DenominatorFilter::OmegaPlus => "omega-plus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SurveyOptions {
    /// Restrict to `min(p, q) > η·n`.
    pub eta: Eta,
    /// Also count the arithmetic exceptional region (only for `n <= 300`).
    pub deep_audit: bool,
}

/// Aggregate counts over the surveyed pairs of one denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRecord {
    pub n: u64,
    pub p_plus: u64,
    /// `None` below the asymptotic domain.
    pub omega_plus: Option<bool>,
    pub h_size: u64,
    pub ruled_two_pq: u64,
    pub ruled_two_of_three: u64,
    pub s_ge5: u64,
    /// `None` below the asymptotic domain.
    pub in_c: Option<u64>,
    pub q_div_p: u64,
    pub frac_ruled: f64,
    /// Pairs with `gcd(q, P) = 1` and either `P | p` or `p mod P^α`
    /// exceptional at `R = ⌈log n⌉`. Only filled by a deep audit.
    pub in_e: Option<u64>,
}

impl SurveyRecord {
    /// One CSV line. `audit_column` appends `in_E` (`na` when absent).
    pub fn write_csv_row<W: Write>(&self, mut w: W, audit_column: bool) -> io::Result<()> {
        let na = |v: Option<String>| v.unwrap_or_else(|| "na".to_string());
        write!(
            w,
            "{},{},{},{},{},{},{},{},{},{:.6}",
            self.n,
            self.p_plus,
            na(self.omega_plus.map(|b| b.to_string())),
            self.h_size,
            self.ruled_two_pq,
            self.ruled_two_of_three,
            self.s_ge5,
            na(self.in_c.map(|c| c.to_string())),
            self.q_div_p,
            self.frac_ruled,
        )?;
        if audit_column {
            write!(w, ",{}", na(self.in_e.map(|e| e.to_string())))?;
        }
        writeln!(w)
    }
}

fn deep_audit_count(n: u64, pairs: &[(u64, u64)]) -> Result<u64> {
    let profile = factor_profile(n)?;
    let (prime, _, _) = profile
        .largest_prime_power()
        .ok_or_else(|| Error::InvalidArgument("n must be at least 2".into()))?;
    let r = ((n as f64).ln().ceil()).max(2.0);
    let mut qs: Vec<u64> = pairs
        .iter()
        .map(|&(_, q)| q)
        .filter(|q| q % prime != 0)
        .collect();
    qs.sort_unstable();
    qs.dedup();
    let sets = qs
        .par_iter()
        .map(|&q| exceptional_set(n, q, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairs
        .iter()
        .filter(|&&(p, q)| {
            q % prime != 0 && {
                let set = &sets[qs.binary_search(&q).expect("q collected above")];
                p % prime == 0 || set.contains(p)
            }
        })
        .count() as u64)
}

pub fn survey_n(n: u64, opts: &SurveyOptions) -> Result<SurveyRecord> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "survey needs n >= 5, got {n}"
        )));
    }
    let p_plus = factor_profile(n)?.largest_prime.expect("n >= 5");
    let outcomes = sweep_pairs(n, opts.eta);
    let asymptotic = n >= ASYMPTOTIC_MIN_N;
    let count = |f: &dyn Fn(&crate::criterion::PairOutcome) -> bool| {
        outcomes.iter().filter(|o| f(o)).count() as u64
    };

    let h_size = outcomes.len() as u64;
    let ruled_two_of_three = count(&|o| o.ruled_two_of_three);
    let in_c = asymptotic.then(|| {
        let threshold = region_c_threshold(n);
        count(&|o| region_c_product(o.p, o.q) as f64 <= threshold)
    });
    let in_e = if opts.deep_audit && n <= DEEP_AUDIT_MAX_N {
        let pairs: Vec<(u64, u64)> = outcomes.iter().map(|o| (o.p, o.q)).collect();
        Some(deep_audit_count(n, &pairs)?)
    } else {
        None
    };

    Ok(SurveyRecord {
        n,
        p_plus,
        omega_plus: asymptotic.then(|| omega_plus_member(n)).transpose()?,
        h_size,
        ruled_two_pq: count(&|o| o.ruled_two_pq),
        ruled_two_of_three,
        s_ge5: count(&|o| o.s_count >= 5),
        in_c,
        q_div_p: count(&|o| o.q % p_plus == 0),
        frac_ruled: if h_size == 0 {
            0.0
        } else {
            ruled_two_of_three as f64 / h_size as f64
        },
        in_e,
    })
}

/// One record per admissible `n ∈ [n_min, n_max]`, ascending.
pub fn survey_range(
    n_min: u64,
    n_max: u64,
    filter: DenominatorFilter,
    opts: &SurveyOptions,
) -> Result<Vec<SurveyRecord>> {
    if n_min < 5 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "survey range needs 5 <= min <= max, got [{n_min}, {n_max}]"
        )));
    }
    (n_min..=n_max)
        .into_par_iter()
        .filter(|&n| filter.admits(n))
        .map(|n| survey_n(n, opts))
        .collect()
}

/// Header plus one line per record. The `in_E` column is appended only when
/// `deep_audit` is set.
pub fn write_csv<W: Write>(records: &[SurveyRecord], deep_audit: bool, mut w: W) -> io::Result<()> {
    write!(w, "{CSV_HEADER}")?;
    if deep_audit {
        write!(w, ",in_E")?;
    }
    writeln!(w)?;
    for rec in records {
        rec.write_csv_row(&mut w, deep_audit)?;
    }
    Ok(())
}

/// Number of pairs in `H_n(η)`, without running the criterion.
pub fn region_size(n: u64, eta: Eta) -> u64 {
    hard_window_pairs(n, eta).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::{find_witness, Mode};
    use crate::triangle::{classify, TriangleParams};

    #[test]
    fn omega_plus_examples() {
        assert_eq!(omega_plus_member(101), Ok(true));
        assert_eq!(omega_plus_member(1024), Ok(false));
        assert_eq!(omega_plus_member(16), Ok(false));
        assert_eq!(omega_plus_member(17), Ok(true));
        assert_eq!(omega_plus_member(15), Err(Error::BelowAsymptoticDomain(15)));
        assert!(matches!(
            omega_plus_member(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn omega_plus_thresholds() {
        let t = |n: u64| (n as f64).powf(1.0 / log_log(n));
        assert!((t(101) - 20.45).abs() < 0.05);
        assert!((t(1024) - 35.9).abs() < 0.05);
        assert!((t(16) - 15.16).abs() < 0.05);
    }

    #[test]
    fn region_c_examples() {
        assert!((region_c_threshold(100) - 2214.104828).abs() < 1e-5);
        assert_eq!(in_region_c(100, 1, 1), Ok(true));
        assert_eq!(in_region_c(100, 25, 24), Ok(false));
        for n in 16..200 {
            assert_eq!(in_region_c(n, 1, 1), Ok(true));
        }
        assert_eq!(in_region_c(15, 1, 1), Err(Error::BelowAsymptoticDomain(15)));
    }

    #[test]
    fn survey_examples() {
        let opts = SurveyOptions::default();
        let r = survey_n(23, &opts).unwrap();
        assert_eq!(r.h_size, 55);
        assert!(r.ruled_two_pq >= 1);

        let r = survey_n(5, &opts).unwrap();
        assert_eq!((r.h_size, r.ruled_two_pq, r.ruled_two_of_three), (1, 0, 0));
        assert_eq!((r.omega_plus, r.in_c), (None, None));

        let r = survey_n(12, &opts).unwrap();
        assert_eq!(r.h_size, 9);
        for (p, q) in [(1, 4), (4, 1)] {
            assert!(!find_witness(p, q, 12, Mode::TwoOfThree).unwrap().ruled_out);
        }
    }

    #[test]
    fn range_filters() {
        let opts = SurveyOptions::default();
        assert_eq!(
            survey_range(5, 30, DenominatorFilter::All, &opts)
                .unwrap()
                .len(),
            26
        );
        let primes: Vec<u64> = survey_range(5, 30, DenominatorFilter::Primes, &opts)
            .unwrap()
            .iter()
            .map(|r| r.n)
            .collect();
        assert_eq!(primes, vec![5, 7, 11, 13, 17, 19, 23, 29]);
        let omega = survey_range(5, 60, DenominatorFilter::OmegaPlus, &opts).unwrap();
        assert!(omega.iter().all(|r| r.omega_plus == Some(true)));
        assert!(survey_range(4, 30, DenominatorFilter::All, &opts).is_err());
        assert!(survey_range(30, 20, DenominatorFilter::All, &opts).is_err());
    }

    #[test]
    fn record_invariants() {
        for rec in survey_range(5, 300, DenominatorFilter::All, &SurveyOptions::default()).unwrap()
        {
            assert!(rec.ruled_two_pq <= rec.ruled_two_of_three);
            assert!(rec.ruled_two_of_three <= rec.h_size);
            assert!(rec.s_ge5 <= rec.h_size);
            assert!((0.0..=1.0).contains(&rec.frac_ruled));
            assert!(
                rec.q_div_p as f64 <= rec.h_size as f64 * 2.0 / rec.p_plus as f64 + rec.n as f64
            );
            assert_eq!(rec.h_size, region_size(rec.n, Eta::ZERO));
        }
    }

    #[test]
    fn s_ge5_pairs_are_ruled_out() {
        // S >= 5 leaves at least three usable units satisfying both inequalities.
        for n in 5..=200u64 {
            for o in sweep_pairs(n, Eta::ZERO) {
                if o.s_count >= 5 {
                    assert!(o.ruled_two_pq, "({},{})/{n}", o.p, o.q);
                }
                if o.ruled_two_of_three {
                    let t = TriangleParams::from_pair(o.p, o.q, n).unwrap();
                    assert!(!classify(&t).family.is_known_lattice());
                }
            }
        }
    }

    #[test]
    fn deep_audit_counts() {
        let opts = SurveyOptions {
            deep_audit: true,
            ..Default::default()
        };
        let rec = survey_n(202, &opts).unwrap();
        let e = rec.in_e.unwrap();
        // P | p alone already contributes; nothing with P | q is counted.
        assert!(e <= rec.h_size - rec.q_div_p);
        assert!(survey_n(302, &opts).unwrap().in_e.is_none());
    }

    #[test]
    fn csv_layout() {
        let opts = SurveyOptions::default();
        let recs = survey_range(5, 20, DenominatorFilter::All, &opts).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 10);
        assert_eq!(first[0], "5");
        assert_eq!(first[2], "na");
        assert_eq!(first[9], "0.000000");
        assert!(text.ends_with('\n'));
        assert_eq!(text.lines().count(), recs.len() + 1);

        let mut buf = Vec::new();
        let deep = SurveyOptions {
            deep_audit: true,
            ..Default::default()
        };
        write_csv(
            &survey_range(299, 302, DenominatorFilter::All, &deep).unwrap(),
            true,
            &mut buf,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().all(|l| l.split(',').count() == 11));
        assert!(text.lines().last().unwrap().ends_with(",na"));
    }
}
