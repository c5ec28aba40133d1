use thiserror::Error;

/// Which idempotent component an error refers to (1 or 2).
pub type Component = u8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by a zero divisor: {0}")]
    NullCone(String),

    #[error("gamma pole at {0}")]
    Pole(String),

    #[error("series did not converge: {0}")]
    NoConvergence(String),

    #[error("quadrature failure: {message} (achieved error estimate {estimate:e})")]
    QuadratureFailure { message: String, estimate: f64 },

    #[error("contour error: {0}")]
    Contour(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("series divergence: {0}")]
    SeriesDivergence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("component {component}: {source}")]
    InComponent {
        component: Component,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_component(self, component: Component) -> Error {
        match self {
            e @ Error::InComponent { .. } => e,
            e => Error::InComponent {
                component,
                source: Box::new(e),
            },
        }
    }

    /// The error with any component label stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InComponent { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for validation failures (bad parameters, guards, zero divisors, grids, parsing).
    pub fn is_validation(&self) -> bool {
        matches!(
            self.root(),
            Error::Domain(_)
                | Error::NullCone(_)
                | Error::Pole(_)
                | Error::Contour(_)
                | Error::Grid(_)
                | Error::Parse(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
