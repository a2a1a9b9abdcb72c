//! Number-theoretic screening of obtuse rational triangles `(pπ/n, qπ/n, rπ/n)`
//! for the lattice (Veech) property.
//!
//! A triangle is ruled out when some usable unit `a mod n` satisfies two of
//! the three inequalities `[a·x]_n < [2x]_n` for `x ∈ {p, q, r}`. The crate
//! counts candidate units, decomposes that count into a main term and a
//! Fourier error term built from Ramanujan sums, checks the analytic bounds
//! on the error numerically, and surveys whole denominators.
//!
//! Modules, bottom-up:
//!
//! - [`arith`]: factorization, totients, units, Ramanujan sums
//! - [`triangle`]: triangle parameters, the obtuse region `H_n`, known families
//! - [`criterion`]: witness search, `S(p, q)`, bit-vector batch sweep
//! - [`fourier`]: spectral decomposition and error-bound verification
//! - [`survey`]: per-denominator statistics and CSV
//! - [`verify`] / [`cli`]: invariant suites and the command-line front end

pub mod arith;
pub mod cli;
pub mod criterion;
pub mod error;
pub mod fourier;
pub mod survey;
pub mod triangle;
pub mod verify;

pub use arith::{
    factor_profile, p_adic_valuation, ramanujan, ramanujan_oracle, unit_set, FactorProfile,
    UnitSet, Valuation,
};
pub use criterion::{
    batch_survey, count_s, find_witness, ineq_holds, Inequalities, Mode, WitnessReport,
};
pub use error::{Error, Result};
pub use fourier::{
    crude_bound_check, exceptional_set, interval_hat, main_term, sigma_residue, spectral_s,
    verify_error_bound, ExceptionalSet, SpectralDecomposition,
};
pub use survey::{
    in_region_c, omega_plus_member, survey_n, survey_range, DenominatorFilter, SurveyOptions,
    SurveyRecord,
};
pub use triangle::{
    classify, hard_window_pairs, normalize, Eta, Family, Shape, TriangleClass, TriangleParams,
};
