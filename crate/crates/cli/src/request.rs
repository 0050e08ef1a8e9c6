//! JSON request and response schemas of the pricing service.
//!
//! The HTTP layer takes percentages and calendar dates; they are converted
//! here to the decimal, year-fraction terms of [`OptionContract`].

use serde::{Deserialize, Serialize};
use serde_json::Value;

use optionforge::pde::{GridSpec, Smoothing};
use optionforge::{year_fraction, DatePair, Diagnostics, Method, OptionContract, OptionKind, PriceQuote, PricingError};

use crate::pricing::{display_price, price_contract, PricingOptions};

/// Optional overrides of the finite-difference lattice.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    pub n_space: Option<usize>,
    pub n_time: Option<usize>,
    pub s_max: Option<f64>,
    pub theta: Option<f64>,
    pub smoothing: Option<Smoothing>,
}

impl GridOverrides {
    pub fn apply(&self, mut g: GridSpec) -> GridSpec {
        if let Some(m) = self.n_space {
            g.n_space = m;
        }
        if let Some(n) = self.n_time {
            g.n_time = n;
        }
        if self.s_max.is_some() {
            g.s_max = self.s_max;
        }
        if let Some(t) = self.theta {
            g.theta = t;
        }
        if let Some(s) = self.smoothing {
            g.smoothing = s;
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceRequest {
    pub option_type: OptionKind,
    pub spot: f64,
    pub strike: f64,
    pub rate_pct: f64,
    pub vol_pct: f64,
    pub purchase_date: String,
    pub expiry_date: String,
    #[serde(default)]
    pub method: Option<Method>,
    #[serde(default)]
    pub grid: Option<GridOverrides>,
}

/// Echo of the request terms plus their converted forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputsEcho {
    pub option_type: OptionKind,
    pub spot: f64,
    pub strike: f64,
    pub rate_pct: f64,
    pub vol_pct: f64,
    pub rate: f64,
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purchase_date: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expiry_date: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_days: Option<i64>,
    pub maturity_years: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceResponse {
    pub price: f64,
    pub price_display: String,
    pub method: Method,
    pub inputs: InputsEcho,
    pub diagnostics: Diagnostics,
}

impl PriceResponse {
    pub fn new(quote: PriceQuote, inputs: InputsEcho) -> Self {
        PriceResponse {
            price: quote.price,
            price_display: display_price(quote.price),
            method: quote.method,
            inputs,
            diagnostics: quote.diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Why a pricing request produced no price.
#[derive(Debug, Clone, PartialEq)]
pub enum RequestError {
    /// Malformed or out-of-domain input, one entry per offending field.
    Invalid(Vec<FieldError>),
    /// A valid request whose numerics failed.
    Numeric(String),
}

impl From<PricingError> for RequestError {
    fn from(e: PricingError) -> Self {
        if e.is_validation() {
            let field = match e.field().unwrap_or("request") {
                "sigma" => "vol_pct",
                "rate" => "rate_pct",
                "maturity" => "expiry_date",
                "n_space" | "n_time" | "s_max" | "theta" => "grid",
                other => other,
            };
            RequestError::Invalid(vec![FieldError::new(field, e.to_string())])
        } else {
            RequestError::Numeric(e.to_string())
        }
    }
}

/// Parses a JSON document into a request, naming the offending field on failure.
pub fn parse_request(body: &[u8]) -> Result<PriceRequest, RequestError> {
    let value: Value = serde_json::from_slice(body)
        .map_err(|e| RequestError::Invalid(vec![FieldError::new("body", format!("malformed JSON: {e}"))]))?;
    serde_json::from_value(value).map_err(|e| {
        let message = e.to_string();
        // serde names fields between backticks: "unknown field `x`", "missing field `y`".
        let field = message
            .split('`')
            .nth(1)
            .filter(|_| message.contains("field"))
            .unwrap_or("body")
            .to_string();
        RequestError::Invalid(vec![FieldError::new(field, message)])
    })
}

/// A fully converted request, ready to price.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRequest {
    pub contract: OptionContract,
    pub method: Method,
    pub options: PricingOptions,
    pub inputs: InputsEcho,
}

impl PriceRequest {
    /// Converts percentages and dates, reporting every invalid field at once.
    pub fn resolve(&self) -> Result<ResolvedRequest, RequestError> {
        let mut errors = Vec::new();
        let mut check = |ok: bool, field: &str, msg: String| {
            if !ok {
                errors.push(FieldError::new(field, msg));
            }
        };
        check(
            self.spot.is_finite() && self.spot >= 0.0,
            "spot",
            format!("must be >= 0, got {}", self.spot),
        );
        check(
            self.strike.is_finite() && self.strike > 0.0,
            "strike",
            format!("must be > 0, got {}", self.strike),
        );
        check(
            self.rate_pct.is_finite(),
            "rate_pct",
            format!("must be finite, got {}", self.rate_pct),
        );
        check(
            self.vol_pct.is_finite() && self.vol_pct > 0.0,
            "vol_pct",
            format!("must be > 0, got {}", self.vol_pct),
        );
        let dates = match DatePair::parse(&self.purchase_date, &self.expiry_date) {
            Ok(d) => Some(d),
            Err(e) => {
                let field = e.field().unwrap_or("expiry_date");
                errors.push(FieldError::new(field, e.to_string()));
                None
            }
        };
        let Some(dates) = dates.filter(|_| errors.is_empty()) else {
            return Err(RequestError::Invalid(errors));
        };

        let rate = self.rate_pct / 100.0;
        let sigma = self.vol_pct / 100.0;
        let maturity = year_fraction(&dates);
        let contract = OptionContract::new(self.option_type, self.spot, self.strike, rate, sigma, maturity)?;

        let mut options = PricingOptions::default();
        if let Some(g) = &self.grid {
            options.grid = g.apply(options.grid);
            options.grid.validate(&contract)?;
        }
        let inputs = InputsEcho {
            option_type: self.option_type,
            spot: self.spot,
            strike: self.strike,
            rate_pct: self.rate_pct,
            vol_pct: self.vol_pct,
            rate,
            sigma,
            purchase_date: Some(dates.purchase().to_string()),
            expiry_date: Some(dates.expiry().to_string()),
            time_days: Some(dates.days()),
            maturity_years: maturity,
        };
        Ok(ResolvedRequest {
            contract,
            method: self.method.unwrap_or(Method::Analytic),
            options,
            inputs,
        })
    }
}

/// Converts, prices and wraps a request.
pub fn price_request(req: &PriceRequest) -> Result<PriceResponse, RequestError> {
    let resolved = req.resolve()?;
    let quote = price_contract(&resolved.contract, resolved.method, &resolved.options)?;
    Ok(PriceResponse::new(quote, resolved.inputs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn calculator(kind: &str, vol_pct: f64) -> serde_json::Value {
        json!({
            "option_type": kind,
            "spot": 100.0,
            "strike": 120.0,
            "rate_pct": 2.0,
            "vol_pct": vol_pct,
            "purchase_date": "2014-02-06",
            "expiry_date": "2014-05-06"
        })
    }

    fn request(v: serde_json::Value) -> PriceRequest {
        parse_request(v.to_string().as_bytes()).unwrap()
    }

    #[test]
    fn calculator_call() {
        let resp = price_request(&request(calculator("call", 50.0))).unwrap();
        assert!((resp.price - 3.72).abs() < 5e-3);
        assert_eq!(resp.inputs.time_days, Some(89));
        assert_eq!(resp.method, Method::Analytic);
        assert_eq!(resp.price_display, display_price(resp.price));
    }

    #[test]
    fn calculator_put_at_half_percent_vol() {
        let resp = price_request(&request(calculator("put", 0.5))).unwrap();
        assert!((resp.price - 19.4162).abs() < 5e-4);
        assert_eq!(resp.price_display, "19.42");
    }

    #[test]
    fn negative_vol_names_the_field() {
        let err = price_request(&request(calculator("call", -5.0))).unwrap_err();
        let RequestError::Invalid(errors) = err else { panic!() };
        assert_eq!(errors[0].field, "vol_pct");
    }

    #[test]
    fn several_bad_fields_are_all_reported() {
        let mut v = calculator("call", -5.0);
        v["strike"] = json!(0.0);
        v["expiry_date"] = json!("2014-02-06");
        let RequestError::Invalid(errors) = request(v).resolve().unwrap_err() else {
            panic!()
        };
        let fields: Vec<&str> = errors.iter().map(|e| e.field.as_str()).collect();
        assert_eq!(fields, ["strike", "vol_pct", "expiry_date"]);
    }

    #[test]
    fn unknown_and_missing_fields() {
        let mut v = calculator("call", 50.0);
        v["dividend"] = json!(1.0);
        let RequestError::Invalid(e) = parse_request(v.to_string().as_bytes()).unwrap_err() else {
            panic!()
        };
        assert_eq!(e[0].field, "dividend");

        let mut v = calculator("call", 50.0);
        v.as_object_mut().unwrap().remove("spot");
        let RequestError::Invalid(e) = parse_request(v.to_string().as_bytes()).unwrap_err() else {
            panic!()
        };
        assert_eq!(e[0].field, "spot");

        assert!(parse_request(b"{not json").is_err());
    }

    #[test]
    fn numeric_option_codes_and_method_aliases() {
        let mut v = calculator("call", 50.0);
        v["option_type"] = json!(1);
        v["method"] = json!("heat");
        let resp = price_request(&request(v)).unwrap();
        assert_eq!(resp.inputs.option_type, OptionKind::Put);
        assert_eq!(resp.method, Method::HeatKernel);
    }

    #[test]
    fn grid_overrides_are_validated() {
        let mut v = calculator("call", 50.0);
        v["method"] = json!("crank_nicolson");
        v["grid"] = json!({"n_space": 2});
        let RequestError::Invalid(e) = price_request(&request(v)).unwrap_err() else {
            panic!()
        };
        assert_eq!(e[0].field, "grid");

        let mut v = calculator("call", 50.0);
        v["method"] = json!("cn");
        v["grid"] = json!({"n_space": 200, "n_time": 100, "smoothing": "rannacher"});
        let resp = price_request(&request(v)).unwrap();
        let dims = resp.diagnostics.grid.unwrap();
        assert_eq!((dims.n_space, dims.n_time), (200, 100));
    }

    #[test]
    fn echo_round_trips_to_the_same_contract() {
        let req = request(calculator("call", 37.5));
        let resolved = req.resolve().unwrap();
        let echo = &resolved.inputs;
        let again = PriceRequest {
            option_type: echo.option_type,
            spot: echo.spot,
            strike: echo.strike,
            rate_pct: echo.rate_pct,
            vol_pct: echo.vol_pct,
            purchase_date: echo.purchase_date.clone().unwrap(),
            expiry_date: echo.expiry_date.clone().unwrap(),
            method: None,
            grid: None,
        };
        assert_eq!(again.resolve().unwrap().contract, resolved.contract);
    }
}
