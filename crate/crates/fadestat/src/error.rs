use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operation needs at least {needed} interferers, got {got}")]
    InvalidArity { needed: usize, got: usize },

    #[error("interferers {first} and {second} share the largest power-variance product but differ")]
    DegenerateTie { first: usize, second: usize },

    #[error("interferers {n} and {q} have indistinguishable epsilon values")]
    NearDegenerate { n: usize, q: usize },

    #[error("threshold {gamma_th} is below the validity bound {bound}")]
    ValidityRange { gamma_th: f64, bound: f64 },

    #[error("interferers are not in canonical order")]
    NotCanonical,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("mean SINR diverges: {0}")]
    Divergent(String),

    #[error("level crossing rate underflows to zero at threshold {0}")]
    DivisionDomain(f64),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
