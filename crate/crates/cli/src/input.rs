//! Element syntax: `diag:a,b,...` (coefficients on the canonical frame),
//! `vec:x1,...,xd` (raw coordinates) and `rand` (seeded, uniform in [-1, 1]).

use jordan_orbit::linalg;
use jordan_orbit::orbit::dual_from_frame;
use jordan_orbit::spectral::default_variant;
use jordan_orbit::{CatalogEntry, DualElement, Element, Error, Result};
use nalgebra::DVector;

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("not a number: {t:?}")))
        })
        .collect()
}

fn raw(entry: &CatalogEntry, values: Vec<f64>) -> Result<DVector<f64>> {
    if values.len() != entry.dim() {
        return Err(Error::DimensionMismatch {
            expected: entry.dim(),
            found: values.len(),
        });
    }
    Ok(DVector::from_vec(values))
}

fn frame_coefficients(entry: &CatalogEntry, s: &str) -> Result<Vec<f64>> {
    let lambda = parse_list(s)?;
    if entry.canonical_frame.is_empty() {
        return Err(Error::InvalidInput(format!("{} has no canonical frame; use vec:", entry.name)));
    }
    if lambda.len() != entry.canonical_frame.len() {
        return Err(Error::InvalidInput(format!(
            "diag: expects {} coefficients for {}, got {}",
            entry.canonical_frame.len(),
            entry.name,
            lambda.len()
        )));
    }
    Ok(lambda)
}

pub fn parse_element(entry: &CatalogEntry, s: &str, seed: u64) -> Result<Element> {
    if let Some(rest) = s.strip_prefix("diag:") {
        let lambda = frame_coefficients(entry, rest)?;
        let x = entry
            .canonical_frame
            .iter()
            .zip(&lambda)
            .fold(DVector::zeros(entry.dim()), |acc, (c, l)| acc + c.coords() * *l);
        return Ok(Element(x));
    }
    if let Some(rest) = s.strip_prefix("vec:") {
        return Ok(Element(raw(entry, parse_list(rest)?)?));
    }
    if s == "rand" {
        let mut rng = linalg::prng(seed);
        return Ok(Element(linalg::random_vector(&mut rng, entry.dim(), -1.0, 1.0)));
    }
    Err(Error::InvalidInput(format!("unrecognised element {s:?}; expected diag:, vec: or rand")))
}

/// `diag:` goes through the flat map of the default trace form.
pub fn parse_dual(entry: &CatalogEntry, s: &str, seed: u64) -> Result<DualElement> {
    if let Some(rest) = s.strip_prefix("diag:") {
        let lambda = frame_coefficients(entry, rest)?;
        return dual_from_frame(entry, &entry.canonical_frame, &lambda, default_variant(entry));
    }
    parse_element(entry, s, seed).map(|x| DualElement(x.0))
}

pub fn parse_covector(entry: &CatalogEntry, s: &str, seed: u64) -> Result<DVector<f64>> {
    if s.starts_with("diag:") {
        return Err(Error::InvalidInput("covectors take vec: or rand".into()));
    }
    parse_element(entry, s, seed).map(|x| x.0)
}
