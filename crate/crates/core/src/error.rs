use thiserror::Error;

/// Conditions whose failure makes a coproduct ansatz impossible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Square of a generator's coproduct must vanish.
    Nilpotency,
    /// The commutator [E, F] must be respected.
    Commutator,
    /// Coassociativity up to the associator.
    Coassociativity,
    /// Counit normalization of the coefficients.
    Counit,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Condition::Nilpotency => "nilpotency",
            Condition::Commutator => "commutator",
            Condition::Coassociativity => "coassociativity",
            Condition::Counit => "counit",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("twist is not counit-normalized: {0}")]
    NotNormalized(String),
    #[error("no R-matrix present")]
    MissingR,
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(String),
    #[error("{condition} condition violated: {detail}")]
    ConditionViolated { condition: Condition, detail: String },
    #[error("map is not an algebra automorphism: {0}")]
    NotAutomorphism(String),
    #[error("fusion product {0} is not determined by the available rules")]
    UnsupportedPair(String),
    #[error("lifts disagree after induction: {0}")]
    LiftInconsistency(String),
    #[error("structure constants are not associative or unital: {0}")]
    NotAssociative(String),
    #[error("map is not an algebra homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("class does not decompose into projectives: {0}")]
    NotProjectiveClass(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
