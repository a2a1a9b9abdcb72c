//! The usable-unit obstruction.
//!
//! A triangle `(p, q, r)/n` in lowest terms is not a lattice triangle if some
//! usable unit `a` satisfies at least two of
//!
//! ```text
//! [a·p]_n < [2p]_n,   [a·q]_n < [2q]_n,   [a·r]_n < [2r]_n.
//! ```
//!
//! [`find_witness`] searches for such a unit one triangle at a time;
//! [`batch_survey`] evaluates every pair of a denominator at once using
//! per-column bit-vectors over the unit axis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{gcd, is_usable_unit, mul_mod};
use crate::error::{Error, Result};
use crate::triangle::{hard_window_pairs, require_hard_window, Eta, TriangleParams};

/// Which inequalities a witness must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Both the `p` and `q` inequalities.
    #[default]
    TwoPq,
    /// Any two of the three.
    TwoOfThree,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::TwoPq => "two-pq",
            Mode::TwoOfThree => "two-of-three",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-pq" | "two_pq" => Ok(Mode::TwoPq),
            "two-of-three" | "two_of_three" => Ok(Mode::TwoOfThree),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

/// Subset of `{p, q, r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Inequalities {
    pub p: bool,
    pub q: bool,
    pub r: bool,
}

impl Inequalities {
    pub fn count(&self) -> usize {
        self.p as usize + self.q as usize + self.r as usize
    }

    pub fn satisfies(&self, mode: Mode) -> bool {
        match mode {
            Mode::TwoPq => self.p && self.q,
            Mode::TwoOfThree => self.count() >= 2,
        }
    }
}

impl fmt::Display for Inequalities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.p, "p"), (self.q, "q"), (self.r, "r")]
            .into_iter()
            .filter_map(|(held, name)| held.then_some(name))
            .collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub triangle: TriangleParams,
    pub mode: Mode,
    pub ruled_out: bool,
    pub witness: Option<u64>,
    /// Inequalities satisfied by the witness (empty when there is none).
    pub inequalities_held: Inequalities,
    pub s_count: u64,
}

/// `[a·x]_n < [2x]_n`.
#[inline]
pub fn ineq_holds(a: u64, x: u64, n: u64) -> bool {
    mul_mod(a, x, n) < mul_mod(2, x, n)
}

fn check_interval_lengths(p: u64, q: u64, n: u64) -> Result<()> {
    for m in [2 * p - 1, 2 * q - 1] {
        if m >= n {
            return Err(Error::IntervalOutOfRange { n, m });
        }
    }
    Ok(())
}

/// `S(p, q)`: units `a` with `1 <= [ap]_n <= 2p-1` and `1 <= [aq]_n <= 2q-1`.
pub fn count_s(p: u64, q: u64, n: u64) -> Result<u64> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument("p and q must be positive".into()));
    }
    check_interval_lengths(p, q, n)?;
    let in_interval = |a: u64, x: u64| {
        let v = mul_mod(a, x, n);
        v >= 1 && v < 2 * x
    };
    Ok((1..n)
        .filter(|&a| gcd(a, n) == 1 && in_interval(a, p) && in_interval(a, q))
        .count() as u64)
}

/// Search for the smallest usable unit meeting `mode`'s requirement.
pub fn find_witness(p: u64, q: u64, n: u64, mode: Mode) -> Result<WitnessReport> {
    require_hard_window(p, q, n)?;
    let triangle = TriangleParams::from_pair(p, q, n)?;
    let r = triangle.r;
    let witness = (1..n).filter(|&a| is_usable_unit(a, n)).find_map(|a| {
        let held = Inequalities {
            p: ineq_holds(a, p, n),
            q: ineq_holds(a, q, n),
            r: ineq_holds(a, r, n),
        };
        held.satisfies(mode).then_some((a, held))
    });
    Ok(WitnessReport {
        triangle,
        mode,
        ruled_out: witness.is_some(),
        witness: witness.map(|(a, _)| a),
        inequalities_held: witness.map(|(_, h)| h).unwrap_or_default(),
        s_count: count_s(p, q, n)?,
    })
}

/// Verdicts for one pair from the batch sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairVerdict {
    pub ruled_out: bool,
    pub s_at_least_five: bool,
}

/// Both criterion modes plus `S` for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairOutcome {
    pub p: u64,
    pub q: u64,
    pub ruled_two_pq: bool,
    pub ruled_two_of_three: bool,
    pub s_count: u64,
}

impl PairOutcome {
    pub fn ruled(&self, mode: Mode) -> bool {
        match mode {
            Mode::TwoPq => self.ruled_two_pq,
            Mode::TwoOfThree => self.ruled_two_of_three,
        }
    }
}

/// Bit table `rows[x]`, bit `a` set iff `a` is a unit mod `n` and
/// `[a·x]_n < [2x]_n`, for `x ∈ [1, n)`.
pub struct IneqTable {
    n: u64,
    words: usize,
    bits: Vec<u64>,
    usable_mask: Vec<u64>,
}

impl IneqTable {
    pub fn new(n: u64) -> Self {
        let words = (n as usize).div_ceil(64);
        let units: Vec<u64> = (1..n).filter(|&a| gcd(a, n) == 1).collect();
        let mut usable_mask = vec![0u64; words];
        for &a in &units {
            if is_usable_unit(a, n) {
                usable_mask[a as usize / 64] |= 1 << (a % 64);
            }
        }
        let mut bits = vec![0u64; words * n as usize];
        bits.par_chunks_mut(words)
            .enumerate()
            .skip(1)
            .for_each(|(x, row)| {
                let x = x as u64;
                let bound = mul_mod(2, x, n);
                for &a in &units {
                    if mul_mod(a, x, n) < bound {
                        row[a as usize / 64] |= 1 << (a % 64);
                    }
                }
            });
        IneqTable {
            n,
            words,
            bits,
            usable_mask,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    fn row(&self, x: u64) -> &[u64] {
        let start = x as usize * self.words;
        &self.bits[start..start + self.words]
    }

    /// Evaluate both modes and `S` for `(p, q)`.
    pub fn evaluate(&self, p: u64, q: u64) -> PairOutcome {
        let r = self.n - p - q;
        let (bp, bq, br) = (self.row(p), self.row(q), self.row(r));
        let mut s_count = 0u64;
        let mut two_pq = false;
        let mut two_of_three = false;
        for i in 0..self.words {
            let pq = bp[i] & bq[i];
            // For p, q < n/2 the p and q inequalities are exactly the
            // interval conditions defining S.
            s_count += pq.count_ones() as u64;
            let mask = self.usable_mask[i];
            two_pq |= pq & mask != 0;
            two_of_three |= (pq | (bp[i] & br[i]) | (bq[i] & br[i])) & mask != 0;
        }
        PairOutcome {
            p,
            q,
            ruled_two_pq: two_pq,
            ruled_two_of_three: two_of_three,
            s_count,
        }
    }
}

/// Evaluate every pair in `H_n(η)` with one shared bit table.
pub fn sweep_pairs(n: u64, eta: Eta) -> Vec<PairOutcome> {
    let table = IneqTable::new(n);
    hard_window_pairs(n, eta)
        .into_par_iter()
        .map(|(p, q)| table.evaluate(p, q))
        .collect()
}

/// Verdict and `S >= 5` flag for every `(p, q) ∈ H_n`.
pub fn batch_survey(n: u64, mode: Mode) -> Result<BTreeMap<(u64, u64), PairVerdict>> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "batch survey needs n >= 5, got {n}"
        )));
    }
    Ok(sweep_pairs(n, Eta::ZERO)
        .into_iter()
        .map(|o| {
            (
                (o.p, o.q),
                PairVerdict {
                    ruled_out: o.ruled(mode),
                    s_at_least_five: o.s_count >= 5,
                },
            )
        })
        .collect())
}
