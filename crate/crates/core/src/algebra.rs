//! Polar and planar n-complex numbers and their ring operations.
//!
//! A number `u = x_0 + h_1 x_1 + ... + h_{n-1} x_{n-1}` is stored as its
//! component list. The polar bases multiply as `h_j h_k = h_{(j+k) mod n}`;
//! the planar bases pick up a factor `-1` whenever `j + k >= n`.

use crate::error::{Error, Result};
use crate::spectral::{Slot, Spectrum};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Polar,
    Planar,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Polar => "polar",
            Variant::Planar => "planar",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "polar" => Ok(Variant::Polar),
            "planar" => Ok(Variant::Planar),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

/// Product of two basis elements: `h_j h_k = sign * h_index`.
pub fn basis_product(variant: Variant, n: usize, j: usize, k: usize) -> (i8, usize) {
    debug_assert!(j < n && k < n, "basis index out of range");
    let s = j + k;
    let index = s % n;
    let sign = match variant {
        Variant::Planar if s >= n => -1,
        _ => 1,
    };
    (sign, index)
}

/// Product of two raw component lists under the given multiplication rule.
///
/// Unlike [`NComplex::mul`] this accepts odd dimensions for the planar rule,
/// which is needed to check the odd-dimensional equivalence map.
pub fn rule_product(variant: Variant, x: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), y.len(), "component lists must have equal length");
    let n = x.len();
    let mut out = vec![0.0; n];
    for (j, &a) in x.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (k, &b) in y.iter().enumerate() {
            let (sign, l) = basis_product(variant, n, j, k);
            out[l] += f64::from(sign) * a * b;
        }
    }
    out
}

/// An n-complex number of either variant. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NComplexRepr", into = "NComplexRepr")]
pub struct NComplex {
    variant: Variant,
    x: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NComplexRepr {
    variant: Variant,
    n: usize,
    x: Vec<f64>,
}

impl TryFrom<NComplexRepr> for NComplex {
    type Error = Error;

    fn try_from(r: NComplexRepr) -> Result<Self> {
        if r.n != r.x.len() {
            return Err(Error::Parse(format!(
                "declared n={} but {} components given",
                r.n,
                r.x.len()
            )));
        }
        NComplex::new(r.variant, r.x)
    }
}

impl From<NComplex> for NComplexRepr {
    fn from(u: NComplex) -> Self {
        NComplexRepr {
            variant: u.variant,
            n: u.x.len(),
            x: u.x,
        }
    }
}

impl NComplex {
    /// Builds a number from its components. The dimension is `x.len()`.
    pub fn new(variant: Variant, x: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(Error::domain(format!("dimension must be at least 2, got {n}")));
        }
        if variant == Variant::Planar && n % 2 == 1 {
            return Err(Error::domain(format!(
                "planar numbers need an even dimension, got {n}"
            )));
        }
        if let Some(p) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("component x_{p} is not finite")));
        }
        Ok(NComplex { variant, x })
    }

    pub fn zero(variant: Variant, n: usize) -> Result<Self> {
        Self::new(variant, vec![0.0; n])
    }

    pub fn one(variant: Variant, n: usize) -> Result<Self> {
        Self::basis(variant, n, 0)
    }

    /// The basis element `h_k`.
    pub fn basis(variant: Variant, n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::domain(format!("basis index {k} out of range for n={n}")));
        }
        let mut x = vec![0.0; n];
        x[k] = 1.0;
        Self::new(variant, x)
    }

    /// Same dimension and variant as `self`, with new components.
    /// Components must be finite.
    pub(crate) fn with_components(&self, x: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(x.len(), self.x.len());
        Self::new(self.variant, x)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn components(&self) -> &[f64] {
        &self.x
    }

    pub fn into_components(self) -> Vec<f64> {
        self.x
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|&v| v == 0.0)
    }

    fn check_compatible(&self, other: &NComplex) -> Result<()> {
        if self.n() != other.n() || self.variant != other.variant {
            return Err(Error::DimensionMismatch {
                left: format!("{}:n={}", self.variant, self.n()),
                right: format!("{}:n={}", other.variant, other.n()),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NComplex) -> Result<NComplex> {
        self.check_compatible(other)?;
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect();
        self.with_components(x)
    }

    pub fn sub(&self, other: &NComplex) -> Result<NComplex> {
        self.check_compatible(other)?;
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect();
        self.with_components(x)
    }

    pub fn neg(&self) -> NComplex {
        NComplex {
            variant: self.variant,
            x: self.x.iter().map(|v| -v).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Result<NComplex> {
        self.with_components(self.x.iter().map(|v| v * c).collect())
    }

    /// Ring product, computed directly from the basis multiplication table.
    pub fn mul(&self, other: &NComplex) -> Result<NComplex> {
        self.check_compatible(other)?;
        self.with_components(rule_product(self.variant, &self.x, &other.x))
    }

    /// Euclidean norm `d` of the component vector.
    pub fn modulus(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// The determinant `nu` of the multiplication matrix, from the spectral coordinates.
    pub fn determinant(&self) -> f64 {
        Spectrum::of(self).determinant()
    }

    /// Multiplicative inverse, obtained by inverting every spectral coordinate.
    pub fn inverse(&self, tol: &Tolerances) -> Result<NComplex> {
        let s = Spectrum::of(self);
        let vanishing = s.vanishing_slots(tol.node_threshold(self.modulus()));
        if !vanishing.is_empty() {
            return Err(Error::NonInvertible { slots: vanishing });
        }
        s.map(|v| Ok(1.0 / v), |z| Ok(z.inv()))?.to_ncomplex()
    }

    /// Spectral coordinates that vanish under the tolerance's nodal test.
    pub fn nodal_slots(&self, tol: &Tolerances) -> Vec<Slot> {
        Spectrum::of(self).vanishing_slots(tol.node_threshold(self.modulus()))
    }

    /// Integer power by repeated multiplication (square-and-multiply).
    pub fn powi_by_mul(&self, m: u32) -> Result<NComplex> {
        let mut acc = NComplex::one(self.variant, self.n())?;
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Distance `|self - other|`.
    pub fn distance(&self, other: &NComplex) -> Result<f64> {
        Ok(self.sub(other)?.modulus())
    }

    /// Parses the textual literal form `polar:n=4:[1,0,2,-3]`.
    pub fn parse_literal(s: &str) -> Result<NComplex> {
        s.parse()
    }
}

impl fmt::Display for NComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={}:[", self.variant, self.n())?;
        for (i, v) in self.x.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            // `-0` prints as `-0`; normalize it for stable output.
            let v = if *v == 0.0 { 0.0 } else { *v };
            let a = v.abs();
            if a != 0.0 && !(1e-4..1e16).contains(&a) {
                write!(f, "{v:e}")?;
            } else {
                write!(f, "{v}")?;
            }
        }
        f.write_str("]")
    }
}

impl FromStr for NComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut parts = s.splitn(3, ':');
        let (Some(variant), Some(dim), Some(body)) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::Parse(format!(
                "expected `<variant>:n=<dim>:[x0,...]`, got `{s}`"
            )));
        };
        let variant: Variant = variant.parse()?;
        let n: usize = dim
            .trim()
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("expected `n=<dim>`, got `{dim}`")))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension `{dim}`: {e}")))?;
        let body = body.trim();
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("components must be bracketed, got `{body}`")))?;
        let x = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad component `{}`: {e}", c.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        if x.len() != n {
            return Err(Error::Parse(format!(
                "declared n={n} but {} components given",
                x.len()
            )));
        }
        NComplex::new(variant, x)
    }
}

/// Maps an odd-dimensional number written with the planar rule onto the
/// equivalent polar number.
///
/// The relabeling is `x'_l = x_{2l}` for `l = 0..=(n-1)/2` and
/// `x'_{(n-1)/2+m} = -x_{2m-1}` for `m = 1..=(n-1)/2`.
pub fn odd_planar_as_polar(x: &[f64]) -> Result<NComplex> {
    let n = x.len();
    if n % 2 == 0 {
        return Err(Error::domain(format!(
            "the planar/polar equivalence map needs an odd dimension, got {n}"
        )));
    }
    let half = (n - 1) / 2;
    let mut y = vec![0.0; n];
    for l in 0..=half {
        y[l] = x[2 * l];
    }
    for m in 1..=half {
        y[half + m] = -x[2 * m - 1];
    }
    NComplex::new(Variant::Polar, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar(x: &[f64]) -> NComplex {
        NComplex::new(Variant::Polar, x.to_vec()).unwrap()
    }

    fn planar(x: &[f64]) -> NComplex {
        NComplex::new(Variant::Planar, x.to_vec()).unwrap()
    }

    #[test]
    fn basis_product_table() {
        assert_eq!(basis_product(Variant::Polar, 4, 2, 3), (1, 1));
        assert_eq!(basis_product(Variant::Planar, 4, 2, 3), (-1, 1));
        assert_eq!(basis_product(Variant::Polar, 8, 0, 5), (1, 5));
        assert_eq!(basis_product(Variant::Planar, 8, 0, 5), (1, 5));
        assert_eq!(basis_product(Variant::Planar, 4, 1, 2), (1, 3));
    }

    #[test]
    fn addition() {
        assert_eq!(polar(&[1.0, 0.0]).add(&polar(&[0.0, 1.0])).unwrap(), polar(&[1.0, 1.0]));
        let u = polar(&[1.0, 2.0, 3.0]);
        assert_eq!(u.add(&polar(&[3.0, 2.0, 1.0])).unwrap(), polar(&[4.0, 4.0, 4.0]));
        assert_eq!(u.add(&NComplex::zero(Variant::Polar, 3).unwrap()).unwrap(), u);
    }

    #[test]
    fn mismatched_operands() {
        let e = polar(&[1.0, 2.0]).add(&planar(&[1.0, 2.0])).unwrap_err();
        assert_eq!(e.name(), "DimensionMismatch");
        let e = polar(&[1.0, 2.0]).mul(&polar(&[1.0, 2.0, 3.0])).unwrap_err();
        assert_eq!(e.name(), "DimensionMismatch");
    }

    #[test]
    fn two_dimensional_products() {
        let (a, b, c, d) = (1.5, -2.0, 0.25, 3.0);
        let p = polar(&[a, b]).mul(&polar(&[c, d])).unwrap();
        assert_eq!(p.components(), &[a * c + b * d, a * d + b * c]);
        let q = planar(&[a, b]).mul(&planar(&[c, d])).unwrap();
        assert_eq!(q.components(), &[a * c - b * d, a * d + b * c]);
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(polar(&[3.0, 4.0]).modulus(), 5.0);
        assert_eq!(planar(&[3.0, 4.0]).modulus(), 5.0);
        assert_eq!(NComplex::zero(Variant::Polar, 5).unwrap().modulus(), 0.0);
    }

    #[test]
    fn determinant_examples() {
        assert!((NComplex::one(Variant::Planar, 6).unwrap().determinant() - 1.0).abs() < 1e-14);
        // v_+ = 0
        assert_eq!(polar(&[1.0, -1.0, 1.0, -1.0]).determinant().abs(), 0.0);
        // ordinary complex numbers: |z|^2
        assert!((planar(&[3.0, 4.0]).determinant() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_examples() {
        let tol = Tolerances::default();
        let one = NComplex::one(Variant::Polar, 5).unwrap();
        let inv = one.inverse(&tol).unwrap();
        assert!(inv.distance(&one).unwrap() < 1e-15);

        let i = planar(&[0.0, 1.0]);
        let inv = i.inverse(&tol).unwrap();
        assert!(inv.distance(&planar(&[0.0, -1.0])).unwrap() < 1e-15);

        let err = polar(&[1.0, 1.0]).inverse(&tol).unwrap_err();
        assert_eq!(err, Error::NonInvertible { slots: vec![Slot::Minus] });
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(NComplex::new(Variant::Planar, vec![1.0, 2.0, 3.0]).is_err());
        assert!(NComplex::new(Variant::Polar, vec![1.0]).is_err());
        assert!(NComplex::new(Variant::Polar, vec![1.0, f64::NAN]).is_err());
        assert!(NComplex::new(Variant::Polar, vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let u: NComplex = "polar:n=4:[1,0,2,-3]".parse().unwrap();
        assert_eq!(u, polar(&[1.0, 0.0, 2.0, -3.0]));
        assert_eq!(u.to_string(), "polar:n=4:[1,0,2,-3]");
        let v: NComplex = " planar:n=2:[ 0.5 , -1e-3 ] ".parse().unwrap();
        assert_eq!(v, planar(&[0.5, -1e-3]));
        assert_eq!(v.to_string().parse::<NComplex>().unwrap(), v);
    }

    #[test]
    fn literal_errors() {
        for bad in [
            "polar:n=3:[1,2]",
            "complex:n=2:[1,2]",
            "polar:4:[1,2,3,4]",
            "polar:n=2:1,2",
            "polar:n=2:[1,x]",
            "planar:n=3:[1,2,3]",
        ] {
            assert!(bad.parse::<NComplex>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn json_form() {
        let u = polar(&[1.0, 0.0, 2.0, -3.0]);
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"{"variant":"polar","n":4,"x":[1.0,0.0,2.0,-3.0]}"#);
        let back: NComplex = serde_json::from_str(r#"{"variant":"polar","n":4,"x":[1,0,2,-3]}"#).unwrap();
        assert_eq!(back, u);
        assert!(serde_json::from_str::<NComplex>(r#"{"variant":"polar","n":3,"x":[1,0]}"#).is_err());
        assert!(
            serde_json::from_str::<NComplex>(r#"{"variant":"polar","n":2,"x":[1,0],"y":1}"#).is_err()
        );
    }

    #[test]
    fn odd_planar_map_examples() {
        assert_eq!(odd_planar_as_polar(&[1.0, 0.0, 0.0]).unwrap(), polar(&[1.0, 0.0, 0.0]));
        assert_eq!(odd_planar_as_polar(&[0.0, 1.0, 0.0]).unwrap(), polar(&[0.0, 0.0, -1.0]));
        assert_eq!(
            odd_planar_as_polar(&[1.0, 2.0, 3.0, 4.0]).unwrap_err().name(),
            "DomainError"
        );
    }

    #[test]
    fn odd_planar_map_is_multiplicative_on_bases() {
        for n in [3usize, 5, 7] {
            for j in 0..n {
                for k in 0..n {
                    let mut a = vec![0.0; n];
                    let mut b = vec![0.0; n];
                    a[j] = 1.0;
                    b[k] = 1.0;
                    let lhs = odd_planar_as_polar(&rule_product(Variant::Planar, &a, &b)).unwrap();
                    let rhs = odd_planar_as_polar(&a)
                        .unwrap()
                        .mul(&odd_planar_as_polar(&b).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs, "n={n} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn powi_by_mul_matches_naive() {
        let u = planar(&[0.3, -0.2, 0.7, 0.1]);
        let naive = u.mul(&u).unwrap().mul(&u).unwrap().mul(&u).unwrap().mul(&u).unwrap();
        assert!(u.powi_by_mul(5).unwrap().distance(&naive).unwrap() < 1e-15);
        assert_eq!(u.powi_by_mul(0).unwrap(), NComplex::one(Variant::Planar, 4).unwrap());
    }
}
