//! JSON input files read by the command line.

use crate::algebra::{NComplex, Variant};
use crate::contour::PiecewisePath;
use crate::error::{Error, Result};
use crate::polyfactor::NPolynomial;
use crate::series::NPowerSeries;
use serde::Deserialize;

/// A coefficient given either as a scalar or as all `n` components.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Scalar(f64),
    Components(Vec<f64>),
}

impl Coefficient {
    fn to_ncomplex(&self, variant: Variant, n: usize) -> Result<NComplex> {
        match self {
            Coefficient::Scalar(c) => NComplex::one(variant, n)?.scale(*c),
            Coefficient::Components(x) if x.len() == n => NComplex::new(variant, x.clone()),
            Coefficient::Components(x) => Err(Error::DimensionMismatch {
                left: format!("n={n}"),
                right: format!("{} components", x.len()),
            }),
        }
    }
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// `{"variant": .., "n": .., "coefficients": [[..], ..]}`, coefficient `l` of `u^l`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub variant: Variant,
    pub n: usize,
    pub coefficients: Vec<Coefficient>,
}

impl SeriesFile {
    pub fn from_json(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn to_series(&self) -> Result<NPowerSeries> {
        let c = self
            .coefficients
            .iter()
            .map(|a| a.to_ncomplex(self.variant, self.n))
            .collect::<Result<Vec<_>>>()?;
        NPowerSeries::new(self.variant, self.n, c)
    }
}

/// Monic polynomial `u^m + a_1 u^(m-1) + ... + a_m`; `coefficients` lists `a_1..a_m`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialFile {
    pub variant: Variant,
    pub n: usize,
    pub coefficients: Vec<Coefficient>,
}

impl PolynomialFile {
    pub fn from_json(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn to_polynomial(&self) -> Result<NPolynomial> {
        let c = self
            .coefficients
            .iter()
            .map(|a| a.to_ncomplex(self.variant, self.n))
            .collect::<Result<Vec<_>>>()?;
        NPolynomial::new(self.variant, self.n, c)
    }
}

/// `{"vertices": [[..], ..], "closed": true}`. Variant defaults to polar.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    #[serde(default)]
    pub variant: Option<Variant>,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default)]
    pub closed: bool,
}

impl PathFile {
    pub fn from_json(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn to_path(&self) -> Result<PiecewisePath> {
        let variant = self.variant.unwrap_or(Variant::Polar);
        let v = self
            .vertices
            .iter()
            .map(|x| NComplex::new(variant, x.clone()))
            .collect::<Result<Vec<_>>>()?;
        PiecewisePath::new(v, self.closed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_with_scalar_and_vector_coefficients() {
        let f = PolynomialFile::from_json(r#"{"variant":"polar","n":4,"coefficients":[0,[-1,0,0,0]]}"#).unwrap();
        let p = f.to_polynomial().unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.coefficients()[1].components(), &[-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = PolynomialFile::from_json(r#"{"variant":"polar","n":2,"coefficients":[1],"x":1}"#).unwrap_err();
        assert_eq!(e.name(), "Parse");
        let e = PathFile::from_json(r#"{"vertices":[[0,0]],"closed":true,"extra":0}"#).unwrap_err();
        assert_eq!(e.name(), "Parse");
    }

    #[test]
    fn wrong_component_count() {
        let f = SeriesFile::from_json(r#"{"variant":"planar","n":4,"coefficients":[[1,2]]}"#).unwrap();
        assert_eq!(f.to_series().unwrap_err().name(), "DimensionMismatch");
    }

    #[test]
    fn path_defaults_to_polar() {
        let f = PathFile::from_json(r#"{"vertices":[[0,0,0],[1,0,0],[0,1,0]],"closed":true}"#).unwrap();
        let p = f.to_path().unwrap();
        assert_eq!(p.variant(), Variant::Polar);
        assert!(p.is_closed());
    }
}
