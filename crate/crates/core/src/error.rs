use thiserror::Error;

/// Errors raised by the pricing engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    /// An input violated its domain; `field` names the offending parameter.
    #[error("invalid {field}: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("invalid dates: expiry {expiry} must be after purchase {purchase}")]
    InvalidDates { purchase: String, expiry: String },

    #[error("singular tridiagonal system: pivot {pivot:e} at row {row}")]
    SingularMatrix { row: usize, pivot: f64 },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("spot {spot} lies outside the grid [0, {s_max}]")]
    OutOfDomain { spot: f64, s_max: f64 },

    #[error("requested {requested} path entries exceeds the cap of {cap}")]
    Capacity { requested: u128, cap: u128 },
}

impl PricingError {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        PricingError::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// The field an input error refers to, if any.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            PricingError::Domain { field, .. } => Some(field),
            PricingError::InvalidDates { .. } => Some("expiry_date"),
            PricingError::OutOfDomain { .. } => Some("spot"),
            _ => None,
        }
    }

    /// `true` for failures caused by bad inputs, `false` for numerical or
    /// resource failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            PricingError::Domain { .. } | PricingError::InvalidDates { .. } | PricingError::OutOfDomain { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, PricingError>;
