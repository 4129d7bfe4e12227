//! Exponential, logarithm and real powers, plus the exponential and
//! trigonometric presentations of a number.
//!
//! exp/log/pow act slot by slot on the spectrum. The two "forms" are
//! presentation only and go through the geometric angles.

use crate::algebra::{NComplex, Variant};
use crate::error::{Error, Result};
use crate::spectral::{canonical_basis, geometric_form, pair_trig, wrap_angle, Spectrum};
use crate::tolerances::Tolerances;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::SQRT_2;

/// Largest spectral coordinate accepted by [`exp`].
pub const EXP_GUARD: f64 = 700.0;

fn guarded_exp(v: f64) -> Result<f64> {
    if v > EXP_GUARD {
        return Err(Error::Overflow(format!("exp of spectral coordinate {v}")));
    }
    Ok(v.exp())
}

pub fn exp(u: &NComplex) -> Result<NComplex> {
    Spectrum::of(u)
        .map(guarded_exp, |z| {
            let r = guarded_exp(z.re)?;
            Ok(Complex64::from_polar(r, z.im))
        })?
        .to_ncomplex()
}

/// Checks the logarithm domain; the message names the failing condition.
fn check_log_domain(s: &Spectrum, d: f64, tol: &Tolerances) -> Result<()> {
    if let Some(v) = s.v_plus() {
        if v <= 0.0 {
            return Err(Error::domain(format!("logarithm needs v_plus > 0, got {v}")));
        }
    }
    if let Some(v) = s.v_minus() {
        if v <= 0.0 {
            return Err(Error::domain(format!("logarithm needs v_minus > 0, got {v}")));
        }
    }
    let threshold = tol.node_threshold(d);
    for k in 1..=s.pairs().len() {
        let r = s.rho(k);
        if r <= threshold {
            return Err(Error::domain(format!("logarithm needs rho_{k} > 0, got {r}")));
        }
    }
    Ok(())
}

/// Principal logarithm, azimuthal angles in `[0, 2 pi)`.
pub fn log(u: &NComplex, tol: &Tolerances) -> Result<NComplex> {
    let s = Spectrum::of(u);
    check_log_domain(&s, u.modulus(), tol)?;
    s.map(
        |v| Ok(v.ln()),
        |z| Ok(Complex64::new(z.norm().ln(), wrap_angle(z.arg()))),
    )?
    .to_ncomplex()
}

/// `u^m`. Integer exponents use repeated multiplication (inverse first when
/// negative); other exponents take the principal branch.
pub fn pow(u: &NComplex, m: f64, tol: &Tolerances) -> Result<NComplex> {
    if !m.is_finite() {
        return Err(Error::domain(format!("exponent must be finite, got {m}")));
    }
    if m.fract() == 0.0 && m.abs() <= u32::MAX as f64 {
        let e = m.abs() as u32;
        return if m >= 0.0 {
            u.powi_by_mul(e)
        } else {
            u.inverse(tol)?.powi_by_mul(e)
        };
    }
    let s = Spectrum::of(u);
    check_log_domain(&s, u.modulus(), tol)?;
    s.map(
        |v| Ok(v.powf(m)),
        |z| {
            let phi = wrap_angle(z.arg());
            Ok(Complex64::from_polar(z.norm().powf(m), m * phi))
        },
    )?
    .to_ncomplex()
}

/// `sum_k phi_k e~_k`.
pub fn phase_element(variant: Variant, n: usize, phi: &[f64]) -> Result<NComplex> {
    let basis = canonical_basis(n, variant)?;
    if phi.len() != basis.e_tilde.len() {
        return Err(Error::domain(format!(
            "expected {} azimuthal angles, got {}",
            basis.e_tilde.len(),
            phi.len()
        )));
    }
    let mut acc = NComplex::zero(variant, n)?;
    for (e, &p) in basis.e_tilde.iter().zip(phi) {
        acc = acc.add(&e.scale(p)?)?;
    }
    Ok(acc)
}

/// `u = rho * exp(sum_{p>=1} c_p h_p + sum_k phi_k e~_k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentialForm {
    pub variant: Variant,
    pub n: usize,
    pub rho: f64,
    /// `c_1 .. c_{n-1}`; the `h_0` coefficient is always zero.
    pub h_coefficients: Vec<f64>,
    pub phi: Vec<f64>,
}

impl ExponentialForm {
    /// The exponent `sum c_p h_p + sum phi_k e~_k`.
    pub fn exponent(&self) -> Result<NComplex> {
        let mut x = vec![0.0; self.n];
        x[1..].copy_from_slice(&self.h_coefficients);
        NComplex::new(self.variant, x)?.add(&phase_element(self.variant, self.n, &self.phi)?)
    }

    pub fn reassemble(&self) -> Result<NComplex> {
        exp(&self.exponent()?)?.scale(self.rho)
    }
}

fn needs_pairs(u: &NComplex) -> Result<()> {
    if u.variant() == Variant::Polar && u.n() == 2 {
        // no azimuthal pair, so the angles referring to rho_1 do not exist
        return Err(Error::DegenerateAngle { k: 1 });
    }
    Ok(())
}

pub fn exponential_form(u: &NComplex, tol: &Tolerances) -> Result<ExponentialForm> {
    needs_pairs(u)?;
    let s = Spectrum::of(u);
    check_log_domain(&s, u.modulus(), tol)?;
    let g = geometric_form(u, tol)?;
    let rho = g.amplitude()?;
    let n = u.n();
    let nf = n as f64;
    let log_tan = |a: f64, k: usize| -> Result<f64> {
        let t = a.tan().ln();
        if t.is_finite() {
            Ok(t)
        } else {
            Err(Error::DegenerateAngle { k })
        }
    };
    let lp = g.theta_plus.map(|t| log_tan(t, 1).map(|l| 0.5 * 2f64.ln() - l)).transpose()?;
    let lm = g.theta_minus.map(|t| log_tan(t, 1).map(|l| 0.5 * 2f64.ln() - l)).transpose()?;
    let lpsi = g
        .psi
        .iter()
        .enumerate()
        .map(|(i, &a)| log_tan(a, i + 2))
        .collect::<Result<Vec<_>>>()?;
    let h_coefficients = (1..n)
        .map(|p| {
            let mut c = lp.map_or(0.0, |l| l / nf);
            if let Some(l) = lm {
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                c += sign * l / nf;
            }
            for (i, l) in lpsi.iter().enumerate() {
                let (cos, _) = pair_trig(u.variant(), n, i + 2, p);
                c -= 2.0 / nf * cos * l;
            }
            c
        })
        .collect();
    Ok(ExponentialForm {
        variant: u.variant(),
        n,
        rho,
        h_coefficients,
        phi: g.phi,
    })
}

/// `u = scalar * direction * exp(phase)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigonometricForm {
    pub scalar: f64,
    pub direction: NComplex,
    pub phase: NComplex,
}

impl TrigonometricForm {
    pub fn reassemble(&self) -> Result<NComplex> {
        self.direction.mul(&exp(&self.phase)?)?.scale(self.scalar)
    }
}

pub fn trigonometric_form(u: &NComplex, tol: &Tolerances) -> Result<TrigonometricForm> {
    needs_pairs(u)?;
    if u.is_zero() {
        return Err(Error::DegenerateAngle { k: 1 });
    }
    let g = geometric_form(u, tol)?;
    let n = u.n();
    let variant = u.variant();
    let basis = canonical_basis(n, variant)?;
    let cot = |a: f64| a.cos() / a.sin();

    let mut norm = 1.0;
    let mut direction = basis.e[0].clone();
    for (t, e) in [(g.theta_plus, &basis.e_plus), (g.theta_minus, &basis.e_minus)] {
        if let (Some(t), Some(e)) = (t, e) {
            let c = cot(t);
            norm += c * c;
            direction = direction.add(&e.scale(SQRT_2 * c)?)?;
        }
    }
    for (a, e) in g.psi.iter().zip(&basis.e[1..]) {
        let c = cot(*a);
        norm += c * c;
        direction = direction.add(&e.scale(c)?)?;
    }
    let scalar = g.d * (n as f64 / 2.0).sqrt() / norm.sqrt();
    Ok(TrigonometricForm {
        scalar,
        direction,
        phase: phase_element(variant, n, &g.phi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn num(variant: Variant, x: &[f64]) -> NComplex {
        NComplex::new(variant, x.to_vec()).unwrap()
    }

    fn dist(a: &NComplex, b: &NComplex) -> f64 {
        a.distance(b).unwrap()
    }

    #[test]
    fn exp_of_zero_and_euler() {
        let one = NComplex::one(Variant::Polar, 5).unwrap();
        assert!(dist(&exp(&NComplex::zero(Variant::Polar, 5).unwrap()).unwrap(), &one) < 1e-15);
        let e = exp(&num(Variant::Planar, &[0.0, PI])).unwrap();
        assert!(dist(&e, &num(Variant::Planar, &[-1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn exp_overflow_guard() {
        let err = exp(&num(Variant::Polar, &[800.0, 0.0, 0.0])).unwrap_err();
        assert_eq!(err.name(), "Overflow");
    }

    #[test]
    fn log_examples() {
        let z = log(&NComplex::one(Variant::Polar, 4).unwrap(), &tol()).unwrap();
        assert!(z.modulus() < 1e-15);
        let l = log(&num(Variant::Planar, &[0.0, 1.0]), &tol()).unwrap();
        assert!(dist(&l, &num(Variant::Planar, &[0.0, FRAC_PI_2])) < 1e-15);
        let err = log(&num(Variant::Polar, &[-2.0, 0.0]), &tol()).unwrap_err();
        assert_eq!(err.name(), "DomainError");
        assert!(err.to_string().contains("v_plus"));
    }

    #[test]
    fn log_uses_upper_branch() {
        let l = log(&num(Variant::Planar, &[0.0, -1.0]), &tol()).unwrap();
        assert!((l.components()[1] - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn pow_integer_and_fractional() {
        let u = num(Variant::Polar, &[1.5, 0.2, -0.3, 0.1]);
        assert_eq!(pow(&u, 1.0, &tol()).unwrap(), u);
        assert!(dist(&pow(&u, 0.0, &tol()).unwrap(), &NComplex::one(Variant::Polar, 4).unwrap()) < 1e-15);
        let cube = u.mul(&u).unwrap().mul(&u).unwrap();
        assert!(dist(&pow(&u, 3.0, &tol()).unwrap(), &cube) < 1e-13);
        let half = pow(&u, 0.5, &tol()).unwrap();
        assert!(dist(&half.mul(&half).unwrap(), &u) < 1e-13);
        let inv = pow(&u, -2.0, &tol()).unwrap();
        assert!(dist(&inv.mul(&u.mul(&u).unwrap()).unwrap(), &NComplex::one(Variant::Polar, 4).unwrap()) < 1e-13);
    }

    #[test]
    fn pow_square_of_phase_units_is_minus_one() {
        let b = canonical_basis(4, Variant::Planar).unwrap();
        let u = b.e_tilde[0].add(&b.e_tilde[1]).unwrap();
        let sq = pow(&u, 2.0, &tol()).unwrap();
        assert!(dist(&sq, &NComplex::one(Variant::Planar, 4).unwrap().neg()) < 1e-15);
    }

    #[test]
    fn exponential_form_two_dimensional_planar() {
        let (r, phi) = (2.5f64, 2.0f64);
        let u = num(Variant::Planar, &[r * phi.cos(), r * phi.sin()]);
        let f = exponential_form(&u, &tol()).unwrap();
        assert!((f.rho - r).abs() < 1e-14);
        assert!((f.phi[0] - phi).abs() < 1e-14);
        assert!(f.h_coefficients[0].abs() < 1e-14);
    }

    #[test]
    fn exponential_form_of_positive_scalar() {
        let u = NComplex::one(Variant::Polar, 4).unwrap().scale(3.0).unwrap();
        let f = exponential_form(&u, &tol()).unwrap();
        assert!((f.rho - 3.0).abs() < 1e-14);
        assert!(f.h_coefficients.iter().all(|c| c.abs() < 1e-14));
        assert!(dist(&f.reassemble().unwrap(), &u) < 1e-13);
    }

    #[test]
    fn forms_reassemble() {
        let cases = [
            num(Variant::Polar, &[2.0, 0.3, -0.4, 0.2]),
            num(Variant::Polar, &[2.0, 0.3, -0.4, 0.2, 0.7]),
            num(Variant::Planar, &[0.4, -1.1, 0.3, 0.9, -0.2, 0.5]),
        ];
        for u in &cases {
            let e = exponential_form(u, &tol()).unwrap();
            assert!(dist(&e.reassemble().unwrap(), u) < 1e-12, "{u}");
            let t = trigonometric_form(u, &tol()).unwrap();
            assert!(dist(&t.reassemble().unwrap(), u) < 1e-12, "{u}");
        }
    }

    #[test]
    fn trigonometric_form_is_homogeneous() {
        let u = num(Variant::Polar, &[0.5, -0.3, 1.1, 0.2]);
        let a = trigonometric_form(&u, &tol()).unwrap();
        let b = trigonometric_form(&u.scale(4.0).unwrap(), &tol()).unwrap();
        assert!((b.scalar - 4.0 * a.scalar).abs() < 1e-13);
        assert!(dist(&a.direction, &b.direction) < 1e-13);
        assert!(dist(&a.phase, &b.phase) < 1e-13);
    }

    #[test]
    fn trigonometric_form_planar_two() {
        let u = num(Variant::Planar, &[-1.0, 2.0]);
        let t = trigonometric_form(&u, &tol()).unwrap();
        assert!((t.scalar - 5f64.sqrt()).abs() < 1e-14);
        assert!(dist(&t.direction, &NComplex::one(Variant::Planar, 2).unwrap()) < 1e-15);
    }

    #[test]
    fn polar_two_has_no_angular_forms() {
        let u = num(Variant::Polar, &[2.0, 0.5]);
        assert_eq!(exponential_form(&u, &tol()).unwrap_err().name(), "DegenerateAngle");
        assert_eq!(trigonometric_form(&u, &tol()).unwrap_err().name(), "DegenerateAngle");
    }

    #[test]
    fn multivalued_logarithm() {
        let u = num(Variant::Planar, &[0.3, 1.2, -0.5, 0.8]);
        let l = log(&u, &tol()).unwrap();
        let b = canonical_basis(4, Variant::Planar).unwrap();
        for e in &b.e_tilde {
            let shifted = l.add(&e.scale(2.0 * PI).unwrap()).unwrap();
            assert!(dist(&exp(&shifted).unwrap(), &u) < 1e-13);
        }
    }
}
