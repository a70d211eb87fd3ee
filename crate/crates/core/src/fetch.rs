//! Optional download of defining polynomials from a number-field database
//! with an LMFDB-style JSON API.

use std::path::Path;
use std::time::Duration;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::{write_atomic, FieldFile};

pub const ENDPOINT_VAR: &str = "ZETA_QSM_DB_ENDPOINT";
pub const DEFAULT_ENDPOINT: &str = "https://www.lmfdb.org/api/nf_fields/";

/// Whether `label` has the shape `degree.signature.discriminant.index`.
pub fn is_valid_label(label: &str) -> bool {
    let parts: Vec<&str> = label.split('.').collect();
    parts.len() == 4 && parts.iter().all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

pub fn endpoint() -> String {
    std::env::var(ENDPOINT_VAR).unwrap_or_else(|_| DEFAULT_ENDPOINT.to_string())
}

pub fn query_url(endpoint: &str, label: &str) -> String {
    let sep = if endpoint.contains('?') { '&' } else { '?' };
    format!("{endpoint}{sep}label={label}&_format=json&_fields=label,coeffs")
}

/// Extracts the coefficient list of the first record in `{"data": [...]}`.
pub fn parse_response(label: &str, body: &str) -> Result<FieldFile> {
    let v: Value = serde_json::from_str(body).map_err(|e| Error::Network(format!("malformed response: {e}")))?;
    let record = v
        .get("data")
        .and_then(Value::as_array)
        .and_then(|d| d.first())
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    let coeffs = record
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Network("response record has no coeffs".into()))?;
    let poly = coeffs
        .iter()
        .map(|c| {
            c.as_i64()
                .or_else(|| c.as_str().and_then(|s| s.parse().ok()))
                .ok_or_else(|| Error::Network(format!("coefficient {c} is not a 64-bit integer")))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(FieldFile { label: label.to_string(), poly, overrides: Default::default() })
}

/// Fetches `label` from `endpoint`, checks the polynomial defines a field,
/// and writes the field file atomically. Returns the query URL.
pub fn fetch_field(endpoint: &str, label: &str, out: &Path) -> Result<String> {
    if !is_valid_label(label) {
        return Err(Error::UnknownLabel(label.to_string()));
    }
    let url = query_url(endpoint, label);
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(30)))
        .build()
        .into();
    let body = match agent.get(&url).call() {
        Ok(mut resp) => resp
            .body_mut()
            .read_to_string()
            .map_err(|e| Error::Network(e.to_string()))?,
        Err(ureq::Error::StatusCode(404)) => return Err(Error::UnknownLabel(label.to_string())),
        Err(e) => return Err(Error::Network(e.to_string())),
    };
    let file = parse_response(label, &body)?;
    file.to_field()?;
    write_atomic(out, &file.to_json())?;
    Ok(url)
}
