//! Bound-and-reduce toolkit for the Tribonacci-Lucas palindromic repdigit
//! problem: exact sequence arithmetic, certified ball reals, continued
//! fractions with Dujella-Petho and Legendre reduction, two-dimensional
//! lattice lower bounds, Matveev-type initial bounds, and a pipeline that
//! replays the whole argument and emits a verification report.

pub mod bounds;
pub mod contfrac;
pub mod lattice;
pub mod pattern;
pub mod pipeline;
pub mod real;
pub mod reduction;
pub mod report;
pub mod sequence;

pub use bounds::{
    derive_initial_bounds, gsl_shave, height_combine, length_index_relation, matveev_lower_bound,
    weil_height_rational, HeightOp, InitialBounds, LinearFormSpec,
};
pub use contfrac::{cf_expand, first_convergent_exceeding, ContinuedFraction};
pub use lattice::{
    build_linear_form_lattice, gauss_reduce, linear_form_lower_bound, lll_m_bound, Lattice2D,
    ReducedBasis2D,
};
pub use pattern::{compose, recognize, search_low_range, PatternParams, PatternSolution};
pub use pipeline::{run_full, run_full_outcome, OutputFormat, PipelineConfig, PipelineContext};
pub use real::CertifiedReal;
pub use reduction::{
    baker_davenport_reduce, legendre_bound, nearest_integer_distance, DpInstance, ReductionOutcome,
};
pub use report::VerificationReport;
pub use sequence::{
    binet_residual_check, dominant_root, growth_bounds_check, DominantRoot, TribLucasSequence,
};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A certified decision (sign, floor, nearest integer) could not be made
    /// at the working precision; callers retry with more digits.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate lattice (zero determinant)")]
    DegenerateLattice,
    #[error("no convergent with denominator exceeding {0}")]
    MissingConvergent(String),
    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Runs `f` at `start` working digits, doubling on precision exhaustion up
/// to `max` digits. Returns the result together with the precisions that
/// were exhausted along the way.
pub fn with_precision_retry<T>(
    start: u32,
    max: u32,
    mut f: impl FnMut(u32) -> Result<T>,
) -> Result<(T, Vec<u32>)> {
    let mut prec = start;
    let mut exhausted = Vec::new();
    loop {
        match f(prec) {
            Ok(v) => return Ok((v, exhausted)),
            Err(Error::PrecisionExhausted(_)) if prec < max => {
                exhausted.push(prec);
                prec = (prec * 2).min(max);
            }
            Err(e) => return Err(e),
        }
    }
}
