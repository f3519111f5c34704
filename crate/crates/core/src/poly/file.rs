//! Coefficient files: one coefficient per line in ascending degree, each line
//! `R` or `R,I` with decimal or `num/den` literals; `#` starts a comment line.

use std::path::Path;

use rug::Rational;

use super::dense::{dense_oracle, CoefficientList};
use super::{PolyError, PolynomialOracle, Provenance};
use crate::numerics::parse_rational;

pub fn parse_poly_str(text: &str) -> Result<CoefficientList, PolyError> {
    let mut coeffs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| PolyError::FormatError { line: idx + 1, message };
        let mut parts = line.split(',');
        let re = parts.next().unwrap_or("");
        let im = parts.next();
        if parts.next().is_some() {
            return Err(err("expected `R` or `R,I`".into()));
        }
        let re = parse_rational(re).map_err(|e| err(e.to_string()))?;
        let im = match im {
            Some(s) => parse_rational(s).map_err(|e| err(e.to_string()))?,
            None => Rational::new(),
        };
        coeffs.push((re, im));
    }
    CoefficientList::from_complex_rationals(coeffs)
}

/// Dense oracle over the exact rational coefficients in `path`.
pub fn parse_poly_file(path: &Path) -> Result<PolynomialOracle, PolyError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PolyError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let coeffs = parse_poly_str(&text)?;
    Ok(dense_oracle(coeffs).with_provenance(Provenance::File(path.to_path_buf())))
}
