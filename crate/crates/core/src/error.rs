use thiserror::Error;

/// Errors raised by the numerical routines and the verification lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    #[error("invalid `{name}` = {value}: requires {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A partial sum or mean asked for an order beyond the stored coefficients.
    #[error("order {order} exceeds series degree {degree}")]
    DegreeExceeded { order: usize, degree: usize },

    #[error("coefficient vectors differ in length: a has {a}, b has {b}")]
    LengthMismatch { a: usize, b: usize },

    /// Too few samples for the requested degree; the discrete coefficients would alias.
    #[error("{samples} samples cannot resolve degree {degree}: requires samples >= 2*degree + 2")]
    Aliasing { degree: usize, samples: usize },

    #[error("unknown corpus function `{0}`")]
    UnknownFunction(String),

    #[error("invalid index sequence: {0}")]
    InvalidIndices(String),

    #[error("empty grid for `{0}`")]
    EmptyGrid(&'static str),

    /// A weight scheme whose support cannot be truncated within the stored degree.
    #[error("cannot certify truncation: {0}")]
    Truncation(String),

    /// A sweep configuration violates the hypotheses of the inequality under test.
    #[error("{id}: {detail}")]
    Hypothesis { id: String, detail: String },

    #[error("{0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(
    ok: bool,
    name: &'static str,
    value: f64,
    constraint: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}
