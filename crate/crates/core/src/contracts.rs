//! Contract terms, validation, ACT/365 day counting and expiry payoffs.

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{PricingError, Result};

/// Days per year under the ACT/365 fixed convention.
pub const DAYS_PER_YEAR: f64 = 365.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

impl OptionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OptionKind::Call => "call",
            OptionKind::Put => "put",
        }
    }
}

impl fmt::Display for OptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OptionKind {
    type Err = PricingError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "call" | "0" => Ok(OptionKind::Call),
            "put" | "1" => Ok(OptionKind::Put),
            other => Err(PricingError::domain(
                "option_type",
                format!("expected call or put, got {other:?}"),
            )),
        }
    }
}

// Accepts "call" | "put" as well as the numeric codes 0 (call) and 1 (put).
impl<'de> Deserialize<'de> for OptionKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Code(u8),
            Name(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Code(0) => Ok(OptionKind::Call),
            Repr::Code(1) => Ok(OptionKind::Put),
            Repr::Code(n) => Err(serde::de::Error::custom(format!(
                "option type code must be 0 (call) or 1 (put), got {n}"
            ))),
            Repr::Name(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A European vanilla option on a non-dividend-paying asset.
///
/// All rates are continuously compounded decimals; `maturity_years` is the
/// remaining life of the contract.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionContract {
    #[serde(rename = "option_type")]
    pub kind: OptionKind,
    pub spot: f64,
    pub strike: f64,
    pub rate: f64,
    pub sigma: f64,
    #[serde(rename = "maturity_years")]
    pub maturity: f64,
}

impl OptionContract {
    /// Builds and validates a contract.
    pub fn new(kind: OptionKind, spot: f64, strike: f64, rate: f64, sigma: f64, maturity: f64) -> Result<Self> {
        validate_contract(OptionContract {
            kind,
            spot,
            strike,
            rate,
            sigma,
            maturity,
        })
    }

    /// Same terms with a different option kind.
    pub fn with_kind(self, kind: OptionKind) -> Self {
        OptionContract { kind, ..self }
    }

    pub fn with_spot(self, spot: f64) -> Self {
        OptionContract { spot, ..self }
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        OptionContract { sigma, ..self }
    }

    /// e^{-r τ} over the remaining life.
    pub fn discount_factor(&self) -> f64 {
        discount_factor(self.rate, self.maturity)
    }

    /// E·e^{-r τ}.
    pub fn discounted_strike(&self) -> f64 {
        self.strike * self.discount_factor()
    }

    /// Expiry value of this contract at asset price `s`.
    pub fn payoff(&self, s: f64) -> f64 {
        payoff(self.kind, s, self.strike)
    }
}

/// e^{-r τ}. Shared by every method so boundary values agree bit for bit.
pub fn discount_factor(rate: f64, tau: f64) -> f64 {
    (-rate * tau).exp()
}

/// Returns the contract unchanged if every field lies in its domain.
pub fn validate_contract(c: OptionContract) -> Result<OptionContract> {
    fn finite(field: &'static str, v: f64) -> Result<()> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(PricingError::domain(field, format!("must be finite, got {v}")))
        }
    }
    finite("spot", c.spot)?;
    finite("strike", c.strike)?;
    finite("rate", c.rate)?;
    finite("sigma", c.sigma)?;
    finite("maturity", c.maturity)?;
    if c.spot < 0.0 {
        return Err(PricingError::domain("spot", format!("must be >= 0, got {}", c.spot)));
    }
    if c.strike <= 0.0 {
        return Err(PricingError::domain("strike", format!("must be > 0, got {}", c.strike)));
    }
    if c.sigma <= 0.0 {
        return Err(PricingError::domain("sigma", format!("must be > 0, got {}", c.sigma)));
    }
    if c.maturity <= 0.0 {
        return Err(PricingError::domain(
            "maturity",
            format!("must be > 0, got {}", c.maturity),
        ));
    }
    Ok(c)
}

/// Purchase and expiry dates of a contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatePair {
    purchase: NaiveDate,
    expiry: NaiveDate,
}

impl DatePair {
    pub fn new(purchase: NaiveDate, expiry: NaiveDate) -> Result<Self> {
        if expiry <= purchase {
            return Err(PricingError::InvalidDates {
                purchase: purchase.to_string(),
                expiry: expiry.to_string(),
            });
        }
        Ok(DatePair { purchase, expiry })
    }

    /// Parses two ISO-8601 `YYYY-MM-DD` dates.
    pub fn parse(purchase: &str, expiry: &str) -> Result<Self> {
        let parse = |field: &'static str, s: &str| {
            NaiveDate::parse_from_str(s, "%Y-%m-%d")
                .map_err(|e| PricingError::domain(field, format!("{s:?} is not a YYYY-MM-DD date: {e}")))
        };
        DatePair::new(parse("purchase_date", purchase)?, parse("expiry_date", expiry)?)
    }

    pub fn purchase(&self) -> NaiveDate {
        self.purchase
    }

    pub fn expiry(&self) -> NaiveDate {
        self.expiry
    }

    /// Calendar days from purchase to expiry (always >= 1).
    pub fn days(&self) -> i64 {
        (self.expiry - self.purchase).num_days()
    }
}

/// ACT/365 fixed year fraction between the two dates.
pub fn year_fraction(d: &DatePair) -> f64 {
    d.days() as f64 / DAYS_PER_YEAR
}

/// Expiry value: max(s - e, 0) for calls, max(e - s, 0) for puts.
pub fn payoff(kind: OptionKind, s: f64, e: f64) -> f64 {
    match kind {
        OptionKind::Call => (s - e).max(0.0),
        OptionKind::Put => (e - s).max(0.0),
    }
}
