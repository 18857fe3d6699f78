use thiserror::Error;

/// Errors produced by the exact-arithmetic and verification layers.
#[derive(Error, Debug)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cotangent pole: m \u{2261} 0 mod p")]
    CotangentPole,
    #[error("oracle too large: p^(k-1) = {0} exceeds {1}")]
    OracleTooLarge(u128, u128),
    #[error("realness violation: imaginary residue {0} above precision floor")]
    RealnessViolation(String),
    #[error("even character: formula yields zero")]
    EvenCharacter,
    #[error("principal character pole at s=1")]
    PrincipalCharacterPole,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("slow convergence: tolerance {tolerance} not reached at X = {x_max}; partial estimate {partial}")]
    SlowConvergence {
        partial: f64,
        tolerance: f64,
        x_max: u64,
    },
    #[error("formula inconsistency: dimension bound is not an integer for p={0}, k={1}")]
    FormulaInconsistency(u32, u32),
    #[error("theorem violation: observed dim {dim} below proven bound {bound} for p={p}, k={k}")]
    TheoremViolation {
        p: u32,
        k: u32,
        dim: usize,
        bound: usize,
    },
    #[error("precision insufficient: residual {0} above 1e-10 in class number rounding")]
    PrecisionInsufficient(String),
    #[error("corollary inapplicable: {0}")]
    CorollaryInapplicable(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
