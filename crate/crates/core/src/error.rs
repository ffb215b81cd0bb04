use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported type label `{0}`")]
    UnsupportedType(String),
    #[error("Weyl group of order {order} exceeds the enumeration budget {budget}")]
    RankTooLarge { order: u64, budget: u64 },
    #[error("not a root: {0}")]
    NotARoot(String),
    #[error("not a coroot of a positive root outside the Levi: {0}")]
    NotACoroot(String),
    #[error("vector is not dominant: {0}")]
    NotDominant(String),
    #[error("elements belong to different root data")]
    DatumMismatch,
    #[error("permutation is not a diagram automorphism: {0}")]
    NotDiagramAutomorphism(String),
    #[error("translation part is not a Weyl conjugate of the given coweight")]
    NotInOrbit,
    #[error("element is not admissible: {0}")]
    NotAdmissible(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("could not normalize b into the Levi: {0}")]
    NormalizationFailed(String),
    #[error("X(lambda, b) is empty")]
    EmptyX,
    #[error("leaf is empty for x = {0}")]
    LeafEmpty(String),
    #[error("root system is not simply laced")]
    NotSimplyLaced,
    #[error("(lambda, b) is not Hodge-Newton irreducible")]
    NotIrreducible,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
