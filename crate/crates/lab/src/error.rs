use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("config: {0}")]
    ConfigParse(String),
    #[error("{0}")]
    Cell(String),
    #[error("empty instance universe for `{0}`")]
    EmptyUniverse(String),
    #[error(transparent)]
    Core(#[from] adlv_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type LabResult<T> = Result<T, LabError>;
