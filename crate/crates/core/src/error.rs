use thiserror::Error;

/// Failures raised anywhere in the model, thermodynamics or numerics layers.
///
/// Every variant maps to a short machine-readable code via [`Error::code`],
/// which the command-line front end prints as `code: detail`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dyson angle is not real for |k| >= |g| (g = {g}, k = {k})")]
    BrokenRegimeGamma { g: f64, k: f64 },

    #[error("time-dependent coupling is neither real nor imaginary: {re} + {im}i")]
    NonClassifiableMu { re: f64, im: f64 },

    #[error("real gap {gap} is not below nu = {nu}")]
    RealGapUnbounded { gap: f64, nu: f64 },

    #[error("coincidence times are not real here: {0}")]
    OutsideRealityWindow(String),

    #[error("spectrum is not bounded below: gap {gap} >= nu {nu}")]
    NonNormalizable { gap: f64, nu: f64 },

    #[error("f(a) and f(b) do not differ in sign on [{a}, {b}]")]
    NotBracketed { a: f64, b: f64 },

    #[error("no convergence after {iters} iterations (last x = {last})")]
    MaxIters { iters: usize, last: f64 },

    #[error("adaptive quadrature exceeded depth {depth} on [{a}, {b}]")]
    MaxDepth { depth: usize, a: f64, b: f64 },

    #[error("function evaluation failed at x = {x}")]
    EvaluationFailed { x: f64 },

    #[error("no root in bracket [{a}, {b}]")]
    NoRootInBracket { a: f64, b: f64 },

    #[error("isentrope branch lost at T = {t}")]
    BranchLost { t: f64 },

    #[error("isentrope is multi-valued at T = {t} ({roots} roots)")]
    MultiValued { t: f64, roots: usize },

    #[error("quadrature not converged: {0}")]
    QuadratureNotConverged(String),

    #[error("cycle infeasible: {0}")]
    CycleInfeasible(String),

    #[error("invalid volume ratio lambda2/lambda1 = {0}")]
    InvalidRatio(f64),

    #[error("lambda = {lambda} outside [{lo}, {hi}]")]
    OutOfBinodal { lambda: f64, lo: f64, hi: f64 },

    #[error("derivative roots not bracketed: {0}")]
    RootNotBracketed(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::BrokenRegimeGamma { .. } => "broken_regime_gamma",
            Error::NonClassifiableMu { .. } => "non_classifiable_mu",
            Error::RealGapUnbounded { .. } => "real_gap_unbounded",
            Error::OutsideRealityWindow(_) => "outside_reality_window",
            Error::NonNormalizable { .. } => "non_normalizable",
            Error::NotBracketed { .. } => "not_bracketed",
            Error::MaxIters { .. } => "max_iters",
            Error::MaxDepth { .. } => "max_depth",
            Error::EvaluationFailed { .. } => "evaluation_failed",
            Error::NoRootInBracket { .. } => "no_root_in_bracket",
            Error::BranchLost { .. } => "branch_lost",
            Error::MultiValued { .. } => "multi_valued",
            Error::QuadratureNotConverged(_) => "quadrature_not_converged",
            Error::CycleInfeasible(_) => "cycle_infeasible",
            Error::InvalidRatio(_) => "invalid_ratio",
            Error::OutOfBinodal { .. } => "out_of_binodal",
            Error::RootNotBracketed(_) => "root_not_bracketed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
