use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("argument {value} outside the domain [{lower}, {upper}]")]
    OutOfDomain { value: f64, lower: f64, upper: f64 },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    pub(crate) fn check_range(value: f64, lower: f64, upper: f64) -> Result<()> {
        if value >= lower && value <= upper {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                value,
                lower,
                upper,
            })
        }
    }
}
