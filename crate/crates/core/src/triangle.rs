//! Rational triangles `(pπ/n, qπ/n, rπ/n)`, the obtuse region `H_n` and its
//! truncation, and the known obtuse lattice families.

use std::fmt;
use std::str::FromStr;

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Angle numerators over a common denominator `n = p + q + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriangleParams {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub n: u64,
    pub in_lowest_terms: bool,
}

impl TriangleParams {
    /// Build from numerators without reducing.
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::InvalidArgument(format!(
                "angle numerators must be positive, got ({p}, {q}, {r})"
            )));
        }
        Ok(TriangleParams {
            p,
            q,
            r,
            n: p + q + r,
            in_lowest_terms: gcd(gcd(p, q), r) == 1,
        })
    }

    /// The triangle determined by the pair `(p, q)` at denominator `n`.
    pub fn from_pair(p: u64, q: u64, n: u64) -> Result<Self> {
        if p + q >= n {
            return Err(Error::InvalidArgument(format!(
                "p + q = {} must be less than n = {n}",
                p + q
            )));
        }
        Self::new(p, q, n - p - q)
    }

    pub fn max_numerator(&self) -> u64 {
        self.p.max(self.q).max(self.r)
    }

    fn sorted(&self) -> [u64; 3] {
        let mut a = [self.p, self.q, self.r];
        a.sort_unstable();
        a
    }
}

impl fmt::Display for TriangleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})/{}", self.p, self.q, self.r, self.n)
    }
}

/// Divide all three numerators by their gcd.
pub fn normalize(p: u64, q: u64, r: u64) -> Result<TriangleParams> {
    let g = gcd(gcd(p, q), r);
    if g == 0 {
        return TriangleParams::new(p, q, r);
    }
    TriangleParams::new(p / g, q / g, r / g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Acute,
    Right,
    Obtuse,
}

/// Known obtuse lattice triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    None,
    /// `(1, 1, n-2)/n`
    FamilyOne,
    /// `(1, 2, 2m-3)/2m`
    FamilyTwo,
    /// `(1, 4, 7)/12`
    Hooper,
}

impl Family {
    pub fn is_known_lattice(self) -> bool {
        self != Family::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriangleClass {
    pub shape: Shape,
    /// Largest angle in `(π/2, 2π/3]`.
    pub hard_window: bool,
    pub family: Family,
}

pub fn classify(t: &TriangleParams) -> TriangleClass {
    let r_max = t.max_numerator();
    let shape = match (2 * r_max).cmp(&t.n) {
        std::cmp::Ordering::Less => Shape::Acute,
        std::cmp::Ordering::Equal => Shape::Right,
        std::cmp::Ordering::Greater => Shape::Obtuse,
    };
    let hard_window = 2 * r_max > t.n && 3 * r_max <= 2 * t.n;
    TriangleClass {
        shape,
        hard_window,
        family: match_family(t),
    }
}

fn match_family(t: &TriangleParams) -> Family {
    let reduced = match normalize(t.p, t.q, t.r) {
        Ok(r) => r,
        Err(_) => return Family::None,
    };
    let n = reduced.n;
    match reduced.sorted() {
        [1, 1, big] if big + 2 == n => Family::FamilyOne,
        [1, 2, big] if n % 2 == 0 && n >= 4 && big + 3 == n => Family::FamilyTwo,
        [1, 4, 7] => Family::Hooper,
        _ => Family::None,
    }
}

/// A nonnegative rational `num/den`, used for the truncation parameter η.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Eta {
    num: u64,
    den: u64,
}

impl Eta {
    pub const ZERO: Eta = Eta { num: 0, den: 1 };

    /// Requires `0 <= num/den < 1/6`.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || 6 * num >= den {
            return Err(Error::EtaOutOfRange { num, den });
        }
        Ok(Eta { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `x > η·n`, in integers.
    pub fn below(&self, x: u64, n: u64) -> bool {
        x as u128 * self.den as u128 > self.num as u128 * n as u128
    }
}

impl Default for Eta {
    fn default() -> Self {
        Eta::ZERO
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Eta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("eta must be NUM/DEN, got {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let num = num.parse().map_err(|_| bad())?;
        let den = den.parse().map_err(|_| bad())?;
        Eta::new(num, den)
    }
}

/// Is `(p, q)` in `H_n`: `p, q >= 1`, `p + q < n/2`, `gcd(p, q, n) = 1`.
pub fn in_hard_window(p: u64, q: u64, n: u64) -> bool {
    p >= 1 && q >= 1 && 2 * (p + q) < n && gcd(gcd(p, q), n) == 1
}

/// Check membership in `H_n`, naming the violated condition.
pub fn require_hard_window(p: u64, q: u64, n: u64) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument(format!(
            "p and q must be positive, got ({p}, {q})"
        )));
    }
    if 2 * (p + q) >= n {
        return Err(Error::NotObtuse { p, q, n });
    }
    if gcd(gcd(p, q), n) != 1 {
        return Err(Error::NotLowestTerms { p, q, n });
    }
    Ok(())
}

/// All `(p, q) ∈ H_n(η)` in lexicographic order. With η = 0 this is `H_n`.
pub fn hard_window_pairs(n: u64, eta: Eta) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in 1..n {
        if 2 * (p + 1) >= n {
            break;
        }
        if !eta.is_zero() && !eta.below(p, n) {
            continue;
        }
        for q in 1.. {
            if 2 * (p + q) >= n {
                break;
            }
            if !eta.is_zero() && !eta.below(q, n) {
                continue;
            }
            if gcd(gcd(p, q), n) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}
