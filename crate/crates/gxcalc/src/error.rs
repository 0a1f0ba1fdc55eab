use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("AllZeroMatrix: no entry exceeds the dedup tolerance")]
    AllZeroMatrix,
    #[error("ShapeMismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("NonConvergent: power iteration did not converge for label {0}")]
    NonConvergent(String),
    #[error("NotClosed: {0}")]
    NotClosed(String),
    #[error("DegenerateBicharacter: {0}")]
    DegenerateBicharacter(String),
    #[error("UnknownName: {0}")]
    UnknownName(String),
    #[error("MissingSymbol: {0}")]
    MissingSymbol(String),
    #[error("NoConvergence: best residual {residual:.3e}")]
    NoConvergence { residual: f64 },
    #[error("NotFixedPoint: {0}")]
    NotFixedPoint(String),
    #[error("SyntaxError at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("AdmissibilityError: {0}")]
    Admissibility(String),
    #[error("SectorError: {0}")]
    Sector(String),
    #[error("NonConfluent: strategies differ by {0:.3e}")]
    NonConfluent(f64),
    #[error("UnsupportedConfiguration: {0}")]
    UnsupportedConfiguration(String),
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Short variant name used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::AllZeroMatrix => "AllZeroMatrix",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::NonConvergent(_) => "NonConvergent",
            Error::NotClosed(_) => "NotClosed",
            Error::DegenerateBicharacter(_) => "DegenerateBicharacter",
            Error::UnknownName(_) => "UnknownName",
            Error::MissingSymbol(_) => "MissingSymbol",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotFixedPoint(_) => "NotFixedPoint",
            Error::Parse { .. } => "SyntaxError",
            Error::Admissibility(_) => "AdmissibilityError",
            Error::Sector(_) => "SectorError",
            Error::NonConfluent(_) => "NonConfluent",
            Error::UnsupportedConfiguration(_) => "UnsupportedConfiguration",
            Error::Domain(_) => "DomainError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
