//! Power series in one n-complex variable, their convergence cylinders, and
//! a finite-difference check of the analyticity relations.

use crate::algebra::{basis_product, NComplex, Variant};
use crate::error::{Error, Result};
use crate::spectral::{Slot, Spectrum};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// Default number of trailing ratios averaged by [`convergence_radii`].
pub const DEFAULT_WINDOW: usize = 8;

/// `|u v| <= factor * |u| |v|`.
pub fn product_bound_factor(variant: Variant, n: usize) -> f64 {
    match variant {
        Variant::Polar => (n as f64).sqrt(),
        Variant::Planar => (n as f64 / 2.0).sqrt(),
    }
}

/// Truncated series `a_0 + a_1 u + ... + a_L u^L`.
#[derive(Debug, Clone, PartialEq)]
pub struct NPowerSeries {
    variant: Variant,
    n: usize,
    coefficients: Vec<NComplex>,
}

impl NPowerSeries {
    pub fn new(variant: Variant, n: usize, coefficients: Vec<NComplex>) -> Result<Self> {
        for c in &coefficients {
            if c.n() != n || c.variant() != variant {
                return Err(Error::DimensionMismatch {
                    left: format!("{variant}:n={n}"),
                    right: format!("{}:n={}", c.variant(), c.n()),
                });
            }
        }
        // validates (variant, n) even for an empty list
        NComplex::zero(variant, n)?;
        Ok(NPowerSeries {
            variant,
            n,
            coefficients,
        })
    }

    /// Scalar coefficients `c_l` times the unit.
    pub fn scalar(variant: Variant, n: usize, c: &[f64]) -> Result<Self> {
        let one = NComplex::one(variant, n)?;
        let coefficients = c.iter().map(|&v| one.scale(v)).collect::<Result<_>>()?;
        Self::new(variant, n, coefficients)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[NComplex] {
        &self.coefficients
    }

    fn check(&self, u: &NComplex) -> Result<()> {
        if u.n() != self.n || u.variant() != self.variant {
            return Err(Error::DimensionMismatch {
                left: format!("{}:n={}", self.variant, self.n),
                right: format!("{}:n={}", u.variant(), u.n()),
            });
        }
        Ok(())
    }

    /// Partial sum of the first `terms` terms, slot by slot.
    pub fn evaluate(&self, u: &NComplex, terms: usize) -> Result<NComplex> {
        self.check(u)?;
        let terms = terms.min(self.coefficients.len());
        let z = Spectrum::of(u).values();
        let mut acc = vec![Complex64::new(0.0, 0.0); z.len()];
        for a in self.coefficients[..terms].iter().rev() {
            let av = Spectrum::of(a).values();
            for ((s, zi), ai) in acc.iter_mut().zip(&z).zip(&av) {
                *s = *s * zi + ai;
            }
        }
        Spectrum::from_values(self.variant, self.n, &acc)?.to_ncomplex()
    }

    /// Same partial sum by Horner's rule with algebra multiplication.
    pub fn evaluate_horner(&self, u: &NComplex, terms: usize) -> Result<NComplex> {
        self.check(u)?;
        let terms = terms.min(self.coefficients.len());
        let mut acc = NComplex::zero(self.variant, self.n)?;
        for a in self.coefficients[..terms].iter().rev() {
            acc = acc.mul(u)?.add(a)?;
        }
        Ok(acc)
    }
}

/// Radii of the convergence cylinder; `f64::INFINITY` when unbounded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceCylinder {
    #[serde(serialize_with = "ser_radius_opt")]
    pub c_plus: Option<f64>,
    #[serde(serialize_with = "ser_radius_opt")]
    pub c_minus: Option<f64>,
    #[serde(serialize_with = "ser_radii")]
    pub c: Vec<f64>,
}

fn radius_json(r: f64) -> serde_json::Value {
    if r.is_infinite() {
        serde_json::Value::from("inf")
    } else {
        serde_json::Value::from(r)
    }
}

fn ser_radius_opt<S: Serializer>(r: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    r.map(radius_json).serialize(s)
}

fn ser_radii<S: Serializer>(r: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    r.iter().map(|&v| radius_json(v)).collect::<Vec<_>>().serialize(s)
}

/// Windowed ratio estimate of `lim m_l / m_{l+1}`.
///
/// Entries flagged zero are skipped and gaps are bridged with
/// `(m_i / m_j)^(1/(j-i))`. Ratios growing like a power of `l` (factorial
/// decay of the coefficients) give an infinite radius.
fn ratio_limit(m: &[f64], zero: &[bool], window: usize) -> f64 {
    let start = m.len().saturating_sub(window + 1);
    let idx: Vec<usize> = (start..m.len()).filter(|&i| !zero[i]).collect();
    if idx.len() < 2 {
        return f64::INFINITY;
    }
    let pts: Vec<(f64, f64)> = idx
        .windows(2)
        .map(|w| {
            let (i, j) = (w[0], w[1]);
            let r = (m[i] / m[j]).ln() / (j - i) as f64;
            (((i + j) as f64 / 2.0).max(1.0).ln(), r)
        })
        .collect();
    if pts.len() >= 3 {
        // slope of ln(ratio) against ln(l)
        let ratios: Vec<f64> = pts.iter().map(|p| p.1.exp()).collect();
        if ratios.iter().all(|&r| r > 0.0) {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
            let k = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / k;
            let my = ys.iter().sum::<f64>() / k;
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            if sxx > 0.0 && sxy / sxx > 0.5 {
                return f64::INFINITY;
            }
        }
    }
    let mean = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    mean.exp()
}

/// Convergence cylinder from the spectral coefficient magnitudes.
pub fn convergence_radii(series: &NPowerSeries, window: usize) -> Result<ConvergenceCylinder> {
    if series.coefficients.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 coefficients, got {}",
            series.coefficients.len()
        )));
    }
    if window == 0 {
        return Err(Error::InsufficientData("window must be at least 1".into()));
    }
    let spectra: Vec<Vec<f64>> = series
        .coefficients
        .iter()
        .map(|a| Spectrum::of(a).values().iter().map(|z| z.norm()).collect())
        .collect();
    // a slot is treated as empty when it is rounding noise next to the others
    let zero_of = |l: usize, s: usize| {
        let scale = spectra[l].iter().cloned().fold(0.0, f64::max);
        spectra[l][s] <= 1e-12 * scale || spectra[l][s] == 0.0
    };
    let slot_list = crate::spectral::slots(series.variant, series.n);
    let mut radii = Vec::with_capacity(slot_list.len());
    for s in 0..slot_list.len() {
        let m: Vec<f64> = spectra.iter().map(|v| v[s]).collect();
        let zero: Vec<bool> = (0..m.len()).map(|l| zero_of(l, s)).collect();
        radii.push(ratio_limit(&m, &zero, window));
    }
    let mut c_plus = None;
    let mut c_minus = None;
    let mut c = Vec::new();
    for (slot, r) in slot_list.into_iter().zip(radii) {
        match slot {
            Slot::Plus => c_plus = Some(r),
            Slot::Minus => c_minus = Some(r),
            Slot::Pair(_) => c.push(r),
        }
    }
    Ok(ConvergenceCylinder { c_plus, c_minus, c })
}

/// `lim |a_l| / (f |a_{l+1}|)` with `f` the product bound factor; the series
/// converges for `|u|` below it.
pub fn crude_radius(series: &NPowerSeries, window: usize) -> Result<f64> {
    if series.coefficients.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 coefficients, got {}",
            series.coefficients.len()
        )));
    }
    let m: Vec<f64> = series.coefficients.iter().map(|a| a.modulus()).collect();
    let zero: Vec<bool> = m.iter().map(|&v| v == 0.0).collect();
    Ok(ratio_limit(&m, &zero, window) / product_bound_factor(series.variant, series.n))
}

/// Residuals of the first and second order analyticity relations at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiemannReport {
    pub h: f64,
    /// `J[k][l] = dP_k / dx_l`.
    pub jacobian: Vec<Vec<f64>>,
    /// Max deviation of the first-order chains, relative to `max(1, max|J|)`.
    pub first_order: f64,
    /// Max deviation of the second-order chains, relative to `max(1, max|H|)`.
    pub second_order: f64,
}

impl RiemannReport {
    pub fn max_residual(&self) -> f64 {
        self.first_order.max(self.second_order)
    }

    pub fn is_analytic(&self, threshold: f64) -> bool {
        self.max_residual() < threshold
    }
}

/// Default stencil step `1e-4 * max(1, |u0|)`.
pub fn default_step(u0: &NComplex) -> f64 {
    1e-4 * u0.modulus().max(1.0)
}

/// Central-difference check that `f` behaves like a function of `u` alone:
/// `dP/dx_l = h_l dP/dx_0` and `d2P/dx_a dx_b = h_a h_b d2P/dx_0^2`.
pub fn check_riemann_relations<F>(f: F, u0: &NComplex, h: f64) -> Result<RiemannReport>
where
    F: Fn(&NComplex) -> Result<NComplex>,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    let n = u0.n();
    let variant = u0.variant();
    let at = |shifts: &[(usize, f64)]| -> Result<Vec<f64>> {
        let mut x = u0.components().to_vec();
        for &(i, d) in shifts {
            x[i] += d;
        }
        Ok(f(&NComplex::new(variant, x)?)?.into_components())
    };

    // jacobian[k][l]
    let mut jac = vec![vec![0.0; n]; n];
    for l in 0..n {
        let p = at(&[(l, h)])?;
        let m = at(&[(l, -h)])?;
        for k in 0..n {
            jac[k][l] = (p[k] - m[k]) / (2.0 * h);
        }
    }
    let jscale = jac.iter().flatten().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut first = 0.0f64;
    for l in 0..n {
        for k in 0..n {
            let (sign, idx) = basis_product(variant, n, k, l);
            let dev = (f64::from(sign) * jac[idx][l] - jac[k][0]).abs();
            first = first.max(dev / jscale);
        }
    }

    // hess[a][b][k]
    let center = at(&[])?;
    let mut hess = vec![vec![vec![0.0; n]; n]; n];
    for a in 0..n {
        for b in a..n {
            let d = if a == b {
                let p = at(&[(a, h)])?;
                let m = at(&[(a, -h)])?;
                (0..n)
                    .map(|k| (p[k] - 2.0 * center[k] + m[k]) / (h * h))
                    .collect::<Vec<_>>()
            } else {
                let pp = at(&[(a, h), (b, h)])?;
                let pm = at(&[(a, h), (b, -h)])?;
                let mp = at(&[(a, -h), (b, h)])?;
                let mm = at(&[(a, -h), (b, -h)])?;
                (0..n)
                    .map(|k| (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h))
                    .collect()
            };
            hess[a][b] = d.clone();
            hess[b][a] = d;
        }
    }
    let hscale = hess.iter().flatten().flatten().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let mut second = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let (sign, c) = basis_product(variant, n, a, b);
            for k in 0..n {
                let dev = (f64::from(sign) * hess[a][b][k] - hess[0][c][k]).abs();
                second = second.max(dev / hscale);
            }
        }
    }
    Ok(RiemannReport {
        h,
        jacobian: jac,
        first_order: first,
        second_order: second,
    })
}
