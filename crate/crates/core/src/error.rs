use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("partition is not a congruence: {0}")]
    NotACongruence(String),
    #[error("term clone exceeded budget of {budget} elements at arity {arity}")]
    CloneBudgetExceeded { arity: usize, budget: usize },
    #[error("congruence lattice exceeded budget of {0} elements")]
    LatticeBudgetExceeded(usize),
    #[error("carrier size {size} exceeds the lattice enumeration cap {cap}")]
    LatticeSizeCap { size: usize, cap: usize },
    #[error("triple {0:?} lies outside the declared domain")]
    Domain((usize, usize, usize)),
    #[error("not an associative Maltsev operation: {0}")]
    NotAHerd(String),
    #[error("torsor carrier is empty")]
    EmptyTorsor,
    #[error("term is not a Maltsev operation: {0}")]
    NotMaltsev(String),
    #[error("algebra is not abelian")]
    NotAbelian,
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("bad extension diagram: {0}")]
    Diagram(String),
    #[error("derivation enumeration exceeded budget of {0} candidates")]
    DerBudgetExceeded(usize),
    #[error("search space exceeds budget: {0}")]
    SearchBudgetExceeded(String),
    #[error("counterexample check failed: {0}")]
    CounterexampleBroken(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Budget exhaustion is inconclusive rather than a negative answer.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::CloneBudgetExceeded { .. }
                | Error::LatticeBudgetExceeded(_)
                | Error::LatticeSizeCap { .. }
                | Error::DerBudgetExceeded(_)
                | Error::SearchBudgetExceeded(_)
        )
    }
}
