use crate::arith::matrix::DimensionError;
use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(Rational),
    #[error("resource cap `{cap}` = {limit} exceeded: {context}")]
    ResourceCap { cap: &'static str, limit: u64, context: String },
    #[error("exact orbit point {k} needs about {bits} bits, over the budget of {budget}")]
    BitBudget { k: u64, bits: u64, budget: u64 },
    #[error("the limit set is empty")]
    EmptyLimitSet,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = OrbitError> = std::result::Result<T, E>;
