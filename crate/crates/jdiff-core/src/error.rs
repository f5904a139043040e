//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`Result`].  The variants
//! are deliberately fine-grained: the CLI maps them onto distinct process
//! exit codes, and tests assert on specific variants rather than message
//! strings.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A structurally invalid argument (unknown variable, mismatched
    /// ambients, out-of-range minor size, zero polynomial where nonzero is
    /// required, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Invalid combination of user inputs (containment violations, a
    /// component ideal that does not contain the intersection relations,
    /// a polynomial that does not vanish where required, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A Groebner/elimination run exceeded its resource budget.  Carries
    /// partial diagnostics (basis size, degree, pair count at abort time).
    #[error("computation aborted: {0}")]
    ComputationAborted(String),

    /// A subset enumeration or search exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Evaluation of a rational function at a point where a denominator
    /// vanishes.
    #[error("pole at point: {0}")]
    PoleAtPoint(String),

    /// A numeric denominator came closer to zero than the active tolerance.
    #[error("pole proximity: {0}")]
    PoleProximity(String),

    /// Modular polynomial level with no golden data and no oracle support.
    #[error("unsupported level: N = {0}")]
    UnsupportedLevel(u32),

    /// A jet with j′ = 0 where the ODE requires j′ ≠ 0.
    #[error("degenerate jet: {0}")]
    DegenerateJet(String),

    /// Exact evaluation of R(y) at one of its poles y ∈ {0, 1728}.
    #[error("pole of R: {0}")]
    PoleOfR(String),

    /// ∂Φ/∂Y vanishes at the modular point, so the derived linear system
    /// is singular.
    #[error("singular modular point: {0}")]
    SingularModularPoint(String),

    /// The zero matrix marks an unlinked coordinate pair; it cannot be used
    /// where an actual Moebius transformation is required.
    #[error("unlinked pair: {0}")]
    UnlinkedPair(String),

    /// Geodesic data not associated with the j-special data, or cycle
    /// inconsistent.
    #[error("invalid geodesic: {0}")]
    InvalidGeodesic(String),

    /// No canonical D-special closure exists (some j-block of the variety
    /// is not itself D-special).
    #[error("no canonical closure: {0}")]
    NoCanonicalClosure(String),

    /// A point claimed to lie on a variety does not.
    #[error("point not on variety: {0}")]
    PointNotOnVariety(String),

    /// Analytic evaluation requested outside the certified domain
    /// Im τ ≥ 0.8.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Integer recognition failed at the working precision.
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    /// A derivation-space dimension check failed, indicating non-radical
    /// generators or a singular presentation.
    #[error("non-radical or singular generators: {0}")]
    NonRadicalOrSingularGenerators(String),

    /// Every y′ vanishes on the variety, so the Λ constraints degenerate.
    #[error("degenerate jet locus: {0}")]
    DegenerateJetLocus(String),

    /// Component selection inside minor stabilization needs a finer
    /// decomposition than square-free factor splitting provides.
    #[error("needs decomposition: {0}")]
    NeedsDecomposition(String),

    /// A rational function has a denominator vanishing identically on the
    /// component under consideration.
    #[error("pole on component: {0}")]
    PoleOnComponent(String),

    /// Text that does not parse under the polynomial/document grammar.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 0 success, 2 unsupported,
    /// 3 invalid input, 4 domain error, 5 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            UnsupportedLevel(_) => 2,
            OutOfDomain(_) | PoleAtPoint(_) | PoleProximity(_) | PoleOfR(_)
            | DegenerateJet(_) | SingularModularPoint(_) | DegenerateJetLocus(_)
            | PoleOnComponent(_) => 4,
            ComputationAborted(_) | BudgetExceeded(_) | PrecisionInsufficient(_)
            | NeedsDecomposition(_) => 5,
            _ => 3,
        }
    }
}
