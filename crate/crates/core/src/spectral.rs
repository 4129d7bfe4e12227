//! Spectral coordinates, the canonical idempotent bases and the geometric
//! variables of an n-complex number.
//!
//! The spectral coordinates are cosine/sine sums of the components:
//!
//! * polar: `v_+ = sum x_p`, `v_- = sum (-1)^p x_p` (even `n` only) and, for
//!   `k = 1..=(n-1)/2`, `v_k + i v~_k = sum x_p exp(2 pi i k p / n)`;
//! * planar: for `k = 1..=n/2`, `v_k + i v~_k = sum x_p exp(i pi (2k-1) p / n)`.
//!
//! Multiplication acts slot by slot: the real slots multiply as reals and
//! each pair `(v_k, v~_k)` multiplies as an ordinary complex number.

use crate::algebra::{NComplex, Variant};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;

/// One spectral coordinate slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Plus,
    Minus,
    /// Pair `k`, 1-based.
    Pair(usize),
}

impl Slot {
    pub fn is_real(self) -> bool {
        !matches!(self, Slot::Pair(_))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Plus => f.write_str("v_plus"),
            Slot::Minus => f.write_str("v_minus"),
            Slot::Pair(k) => write!(f, "rho_{k}"),
        }
    }
}

impl Serialize for Slot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Number of `(v_k, v~_k)` pairs: `(n-1)/2` for polar, `n/2` for planar.
pub fn pair_count(variant: Variant, n: usize) -> usize {
    match variant {
        Variant::Polar => (n - 1) / 2,
        Variant::Planar => n / 2,
    }
}

fn has_minus(variant: Variant, n: usize) -> bool {
    variant == Variant::Polar && n % 2 == 0
}

/// All slots of the algebra in canonical order: `v_+`, `v_-`, then the pairs.
pub fn slots(variant: Variant, n: usize) -> Vec<Slot> {
    let mut out = Vec::new();
    if variant == Variant::Polar {
        out.push(Slot::Plus);
        if n % 2 == 0 {
            out.push(Slot::Minus);
        }
    }
    out.extend((1..=pair_count(variant, n)).map(Slot::Pair));
    out
}

/// `(cos, sin)` of the angle attached to pair `k` and component `p`.
///
/// The integer part of the angle is reduced before scaling so that large
/// products `k p` do not lose accuracy.
pub(crate) fn pair_trig(variant: Variant, n: usize, k: usize, p: usize) -> (f64, f64) {
    let angle = match variant {
        Variant::Polar => TAU * ((k * p) % n) as f64 / n as f64,
        Variant::Planar => PI * (((2 * k - 1) * p) % (2 * n)) as f64 / n as f64,
    };
    (angle.cos(), angle.sin())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: usize,
    variant: Variant,
    v_plus: Option<f64>,
    v_minus: Option<f64>,
    pairs: Vec<(f64, f64)>,
}

impl Spectrum {
    pub fn new(
        variant: Variant,
        n: usize,
        v_plus: Option<f64>,
        v_minus: Option<f64>,
        pairs: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let want_plus = variant == Variant::Polar;
        let want_minus = has_minus(variant, n);
        if n < 2 || (variant == Variant::Planar && n % 2 == 1) {
            return Err(Error::domain(format!("no {variant} algebra in dimension {n}")));
        }
        if v_plus.is_some() != want_plus
            || v_minus.is_some() != want_minus
            || pairs.len() != pair_count(variant, n)
        {
            return Err(Error::domain(format!(
                "spectrum shape does not match a {variant} algebra of dimension {n}"
            )));
        }
        Ok(Spectrum {
            n,
            variant,
            v_plus,
            v_minus,
            pairs,
        })
    }

    /// Forward transform of a number's components.
    pub fn of(u: &NComplex) -> Spectrum {
        let n = u.n();
        let variant = u.variant();
        let x = u.components();
        let v_plus = (variant == Variant::Polar).then(|| x.iter().sum());
        let v_minus = has_minus(variant, n).then(|| {
            x.iter()
                .enumerate()
                .map(|(p, v)| if p % 2 == 0 { *v } else { -v })
                .sum()
        });
        let pairs = (1..=pair_count(variant, n))
            .map(|k| {
                x.iter().enumerate().fold((0.0, 0.0), |(c, s), (p, v)| {
                    let (cs, sn) = pair_trig(variant, n, k, p);
                    (c + v * cs, s + v * sn)
                })
            })
            .collect();
        Spectrum {
            n,
            variant,
            v_plus,
            v_minus,
            pairs,
        }
    }

    /// Spectrum of the multiplicative identity: every coordinate equal to 1.
    pub fn identity(variant: Variant, n: usize) -> Result<Spectrum> {
        Ok(Spectrum::of(&NComplex::one(variant, n)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn v_plus(&self) -> Option<f64> {
        self.v_plus
    }

    pub fn v_minus(&self) -> Option<f64> {
        self.v_minus
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// `rho_k` for 1-based `k`.
    pub fn rho(&self, k: usize) -> f64 {
        let (v, w) = self.pairs[k - 1];
        v.hypot(w)
    }

    pub fn slots(&self) -> Vec<Slot> {
        slots(self.variant, self.n)
    }

    /// Slot values as complex numbers (real slots have zero imaginary part).
    pub fn values(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.pairs.len() + 2);
        out.extend(self.v_plus.map(|v| Complex64::new(v, 0.0)));
        out.extend(self.v_minus.map(|v| Complex64::new(v, 0.0)));
        out.extend(self.pairs.iter().map(|&(v, w)| Complex64::new(v, w)));
        out
    }

    /// Inverse of [`Spectrum::values`]. Imaginary parts in real slots are dropped.
    pub fn from_values(variant: Variant, n: usize, values: &[Complex64]) -> Result<Spectrum> {
        let slots = slots(variant, n);
        if values.len() != slots.len() {
            return Err(Error::domain(format!(
                "expected {} slot values, got {}",
                slots.len(),
                values.len()
            )));
        }
        let mut v_plus = None;
        let mut v_minus = None;
        let mut pairs = Vec::new();
        for (slot, z) in slots.iter().zip(values) {
            match slot {
                Slot::Plus => v_plus = Some(z.re),
                Slot::Minus => v_minus = Some(z.re),
                Slot::Pair(_) => pairs.push((z.re, z.im)),
            }
        }
        Spectrum::new(variant, n, v_plus, v_minus, pairs)
    }

    pub fn value(&self, slot: Slot) -> Option<Complex64> {
        match slot {
            Slot::Plus => self.v_plus.map(|v| Complex64::new(v, 0.0)),
            Slot::Minus => self.v_minus.map(|v| Complex64::new(v, 0.0)),
            Slot::Pair(k) => self
                .pairs
                .get(k.wrapping_sub(1))
                .map(|&(v, w)| Complex64::new(v, w)),
        }
    }

    /// Applies `real` to each real slot and `pair` to each complex pair.
    pub fn map<R, P>(&self, mut real: R, mut pair: P) -> Result<Spectrum>
    where
        R: FnMut(f64) -> Result<f64>,
        P: FnMut(Complex64) -> Result<Complex64>,
    {
        let v_plus = self.v_plus.map(&mut real).transpose()?;
        let v_minus = self.v_minus.map(&mut real).transpose()?;
        let pairs = self
            .pairs
            .iter()
            .map(|&(v, w)| pair(Complex64::new(v, w)).map(|z| (z.re, z.im)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum {
            n: self.n,
            variant: self.variant,
            v_plus,
            v_minus,
            pairs,
        })
    }

    /// Slot-wise product; equals the spectrum of the algebra product.
    pub fn mul(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.n != other.n || self.variant != other.variant {
            return Err(Error::DimensionMismatch {
                left: format!("{}:n={}", self.variant, self.n),
                right: format!("{}:n={}", other.variant, other.n),
            });
        }
        let a = self.values();
        let b = other.values();
        let prod: Vec<_> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Spectrum::from_values(self.variant, self.n, &prod)
    }

    /// `nu = v_+ v_- prod rho_k^2` (polar) or `prod rho_k^2` (planar).
    pub fn determinant(&self) -> f64 {
        let pairs: f64 = self.pairs.iter().map(|&(v, w)| v * v + w * w).product();
        self.v_plus.unwrap_or(1.0) * self.v_minus.unwrap_or(1.0) * pairs
    }

    /// Slots whose magnitude is at most `threshold`.
    pub fn vanishing_slots(&self, threshold: f64) -> Vec<Slot> {
        self.slots()
            .into_iter()
            .zip(self.values())
            .filter(|(_, z)| z.norm() <= threshold)
            .map(|(s, _)| s)
            .collect()
    }

    /// Inverse transform back to components.
    pub fn to_ncomplex(&self) -> Result<NComplex> {
        let n = self.n;
        let nf = n as f64;
        let x = (0..n)
            .map(|p| {
                let mut acc = self.v_plus.map_or(0.0, |v| v / nf);
                if let Some(v) = self.v_minus {
                    acc += if p % 2 == 0 { v / nf } else { -v / nf };
                }
                for (i, &(v, w)) in self.pairs.iter().enumerate() {
                    let (c, s) = pair_trig(self.variant, n, i + 1, p);
                    acc += 2.0 / nf * (v * c + w * s);
                }
                acc
            })
            .collect::<Vec<_>>();
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow("spectral coordinates are not finite".into()));
        }
        NComplex::new(self.variant, x)
    }

    /// Coordinates in the rotated orthonormal frame:
    /// `xi_+ = v_+/sqrt(n)`, `xi_- = v_-/sqrt(n)`, `(xi_k, eta_k) = sqrt(2/n) (v_k, v~_k)`.
    pub fn unitary_coordinates(&self) -> Vec<f64> {
        let nf = self.n as f64;
        let mut out = Vec::with_capacity(self.n);
        out.extend(self.v_plus.map(|v| v / nf.sqrt()));
        out.extend(self.v_minus.map(|v| v / nf.sqrt()));
        let f = (2.0 / nf).sqrt();
        for &(v, w) in &self.pairs {
            out.push(v * f);
            out.push(w * f);
        }
        out
    }

    /// Projection `(xi_k, eta_k)` onto the plane of pair `k` (1-based).
    pub fn projection(&self, k: usize) -> (f64, f64) {
        let f = (2.0 / self.n as f64).sqrt();
        let (v, w) = self.pairs[k - 1];
        (v * f, w * f)
    }
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    v_plus: Option<f64>,
    v_minus: Option<f64>,
    pairs: &'a [(f64, f64)],
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumJson {
            v_plus: self.v_plus,
            v_minus: self.v_minus,
            pairs: &self.pairs,
        }
        .serialize(s)
    }
}

pub fn to_spectrum(u: &NComplex) -> Spectrum {
    Spectrum::of(u)
}

pub fn from_spectrum(s: &Spectrum) -> Result<NComplex> {
    s.to_ncomplex()
}

/// Unit vectors (in component space) along the `xi_k` and `eta_k` axes.
pub fn plane_axes(variant: Variant, n: usize, k: usize) -> Result<(NComplex, NComplex)> {
    let basis = canonical_basis(n, variant)?;
    if k == 0 || k > basis.e.len() {
        return Err(Error::domain(format!("no pair {k} in {variant} dimension {n}")));
    }
    let f = (n as f64 / 2.0).sqrt();
    Ok((basis.e[k - 1].scale(f)?, basis.e_tilde[k - 1].scale(f)?))
}

/// The idempotent basis `e_+, e_-, e_k, e~_k` written in the `h_p` basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalBasis {
    pub e_plus: Option<NComplex>,
    pub e_minus: Option<NComplex>,
    pub e: Vec<NComplex>,
    pub e_tilde: Vec<NComplex>,
}

impl CanonicalBasis {
    /// Element with a single unit spectral coordinate in `slot`
    /// (`imag` selects `e~_k` instead of `e_k` for pair slots).
    pub fn element(&self, slot: Slot, imag: bool) -> Option<&NComplex> {
        match (slot, imag) {
            (Slot::Plus, false) => self.e_plus.as_ref(),
            (Slot::Minus, false) => self.e_minus.as_ref(),
            (Slot::Pair(k), false) => self.e.get(k.wrapping_sub(1)),
            (Slot::Pair(k), true) => self.e_tilde.get(k.wrapping_sub(1)),
            _ => None,
        }
    }
}

pub fn canonical_basis(n: usize, variant: Variant) -> Result<CanonicalBasis> {
    if variant == Variant::Planar && n % 2 == 1 {
        return Err(Error::domain(format!(
            "planar canonical basis needs an even dimension, got {n}"
        )));
    }
    let nf = n as f64;
    let build = |f: &dyn Fn(usize) -> f64| NComplex::new(variant, (0..n).map(f).collect());
    let e_plus = (variant == Variant::Polar)
        .then(|| build(&|_| 1.0 / nf))
        .transpose()?;
    let e_minus = has_minus(variant, n)
        .then(|| build(&|p| if p % 2 == 0 { 1.0 / nf } else { -1.0 / nf }))
        .transpose()?;
    let k_max = pair_count(variant, n);
    let e = (1..=k_max)
        .map(|k| build(&|p| 2.0 / nf * pair_trig(variant, n, k, p).0))
        .collect::<Result<Vec<_>>>()?;
    let e_tilde = (1..=k_max)
        .map(|k| build(&|p| 2.0 / nf * pair_trig(variant, n, k, p).1))
        .collect::<Result<Vec<_>>>()?;
    Ok(CanonicalBasis {
        e_plus,
        e_minus,
        e,
        e_tilde,
    })
}

/// Modulus, amplitude and angular variables of a number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricForm {
    pub d: f64,
    /// `nu^(1/n)`; absent for polar numbers with `nu <= 0`.
    pub rho: Option<f64>,
    pub nu: f64,
    /// `rho_k`, k = 1..K.
    pub rho_k: Vec<f64>,
    /// Azimuthal angles in `[0, 2 pi)`.
    pub phi: Vec<f64>,
    /// Planar angles `psi_1 .. psi_{K-1}` in `[0, pi/2]`, `tan psi_{k-1} = rho_1 / rho_k`.
    pub psi: Vec<f64>,
    /// `tan theta_+ = sqrt(2) rho_1 / v_+`, in `[0, pi]`. Polar only, needs a pair.
    pub theta_plus: Option<f64>,
    /// Same with `v_-`; polar even `n` only.
    pub theta_minus: Option<f64>,
    /// 1 for even `n`, 0 for odd.
    pub f_n: u8,
}

impl GeometricForm {
    pub fn amplitude(&self) -> Result<f64> {
        self.rho.ok_or(Error::AmplitudeUndefined { nu: self.nu })
    }
}

/// Reduces an angle into `[0, 2 pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub fn geometric_form(u: &NComplex, tol: &Tolerances) -> Result<GeometricForm> {
    let s = Spectrum::of(u);
    let d = u.modulus();
    let threshold = tol.node_threshold(d);
    let rho_k: Vec<f64> = (1..=s.pairs.len()).map(|k| s.rho(k)).collect();
    if let Some(k) = rho_k.iter().position(|&r| r <= threshold) {
        return Err(Error::DegenerateAngle { k: k + 1 });
    }
    let phi = s.pairs.iter().map(|&(v, w)| wrap_angle(w.atan2(v))).collect();
    let psi = rho_k
        .iter()
        .skip(1)
        .map(|&r| rho_k[0].atan2(r))
        .collect::<Vec<_>>();
    let r1 = rho_k.first().copied();
    let theta = |v: Option<f64>| match (v, r1) {
        (Some(v), Some(r1)) => Some((SQRT_2 * r1).atan2(v)),
        _ => None,
    };
    let theta_plus = theta(s.v_plus);
    let theta_minus = theta(s.v_minus);
    let nu = s.determinant();
    let n = u.n();
    let rho = match u.variant() {
        Variant::Planar => Some(nu.max(0.0).powf(1.0 / n as f64)),
        Variant::Polar => (nu > 0.0).then(|| nu.powf(1.0 / n as f64)),
    };
    Ok(GeometricForm {
        d,
        rho,
        nu,
        rho_k,
        phi,
        psi,
        theta_plus,
        theta_minus,
        f_n: u8::from(n % 2 == 0),
    })
}
