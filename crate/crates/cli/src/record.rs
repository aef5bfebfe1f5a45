use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use twisted_hurwitz::factorization::HurwitzQuery;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Symgroup,
    Tropical,
    Feynman,
    Fock,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Symgroup => "symgroup",
            Method::Tropical => "tropical",
            Method::Feynman => "feynman",
            Method::Fock => "fock",
        }
    }
}

/// One computed value with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: Method,
    pub query: HurwitzQuery,
    pub numerator: String,
    pub denominator: String,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization_reading: Option<String>,
    pub tool_version: String,
}

impl RunRecord {
    pub fn new(
        method: Method,
        query: HurwitzQuery,
        value: &BigRational,
        wall_time_ms: u64,
        normalization_reading: Option<String>,
    ) -> Self {
        // BigRational is always reduced with a positive denominator
        Self {
            method,
            query,
            numerator: value.numer().to_string(),
            denominator: value.denom().to_string(),
            wall_time_ms,
            normalization_reading,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn value(&self) -> Option<BigRational> {
        let n = self.numerator.parse().ok()?;
        let d: num_bigint::BigInt = self.denominator.parse().ok()?;
        if d <= num_bigint::BigInt::from(0) {
            return None;
        }
        let value = BigRational::new(n, d);
        // stored values are reduced; anything else was not written by us
        (value.numer().to_string() == self.numerator && value.denom().to_string() == self.denominator)
            .then_some(value)
    }

    pub fn value_string(&self) -> String {
        if self.denominator == "1" {
            self.numerator.clone()
        } else {
            format!("{}/{}", self.numerator, self.denominator)
        }
    }

    pub const CSV_HEADER: &'static str =
        "method,d,g,connected,numerator,denominator,wall_time_ms,normalization_reading,tool_version";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.method.name(),
            self.query.d,
            self.query.g,
            self.query.connected,
            self.numerator,
            self.denominator,
            self.wall_time_ms,
            self.normalization_reading.as_deref().unwrap_or(""),
            self.tool_version
        )
    }

    pub fn plain(&self) -> String {
        let mut out = format!(
            "{}\nmethod={} d={} g={} connected={} wall_time_ms={} tool_version={}",
            self.value_string(),
            self.method.name(),
            self.query.d,
            self.query.g,
            self.query.connected,
            self.wall_time_ms,
            self.tool_version
        );
        if let Some(r) = &self.normalization_reading {
            out.push_str(&format!(" normalization_reading={r}"));
        }
        out
    }
}
