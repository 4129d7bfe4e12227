//! Polar (`g_nk`) and planar (`f_nk`) cosexponential functions.
//!
//! `g_nk(y) = sum_p y^(k+pn) / (k+pn)!` and `f_nk` is the same series with
//! alternating signs `(-1)^p`. They are the components of `exp(h_1 y)` and
//! reduce to `cosh/sinh` and `cos/sin` for `n = 2`.
//!
//! The closed form (a finite sum of `n` exponential-trigonometric terms) is
//! the production path. The power series is kept as an oracle and is summed
//! in double-double arithmetic so that cancellation at negative arguments
//! does not swamp the comparison.

use crate::algebra::{NComplex, Variant};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Largest `|y|` accepted by the series path.
pub const Y_GUARD: f64 = 700.0;

const MAX_TERMS: usize = 1_000_000;

/// Selects `g_nk` (polar) or `f_nk` (planar) in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosexpFamily {
    n: usize,
    variant: Variant,
}

impl CosexpFamily {
    /// Any `n >= 1`; the planar closed form holds for odd `n` too.
    pub fn new(n: usize, variant: Variant) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cosexponential dimension must be at least 1"));
        }
        Ok(CosexpFamily { n, variant })
    }

    pub fn polar(n: usize) -> Result<Self> {
        Self::new(n, Variant::Polar)
    }

    pub fn planar(n: usize) -> Result<Self> {
        Self::new(n, Variant::Planar)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Angle of the `l`-th exponential term in the closed form.
    fn node_angle(&self, l: usize) -> f64 {
        match self.variant {
            Variant::Polar => TAU * l as f64 / self.n as f64,
            Variant::Planar => PI * (2 * l + 1) as f64 / self.n as f64,
        }
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::domain(format!("index {k} out of range for n={}", self.n)));
        }
        Ok(())
    }

    /// Closed form: `(1/n) sum_l exp(y cos a_l) cos(y sin a_l - k a_l)`,
    /// with `a_l = 2 pi l / n` (polar) or `pi (2l+1) / n` (planar).
    pub fn eval_closed(&self, k: usize, y: f64) -> f64 {
        debug_assert!(k < self.n);
        let n = self.n;
        let mut acc = 0.0;
        for l in 0..n {
            let a = self.node_angle(l);
            // k*a reduced exactly in integer arithmetic first
            let ka = match self.variant {
                Variant::Polar => TAU * ((k * l) % n) as f64 / n as f64,
                Variant::Planar => PI * ((k * (2 * l + 1)) % (2 * n)) as f64 / n as f64,
            };
            acc += (y * a.cos()).exp() * (y * a.sin() - ka).cos();
        }
        acc / n as f64
    }

    /// Sum of the moduli of the closed-form terms; bounds every `|g_nk(y)|`.
    pub fn magnitude_bound(&self, y: f64) -> f64 {
        (0..self.n)
            .map(|l| (y * self.node_angle(l).cos()).exp())
            .sum::<f64>()
            / self.n as f64
    }

    /// All components `k = 0..n-1` from the closed form.
    pub fn vector(&self, y: f64) -> Vec<f64> {
        (0..self.n).map(|k| self.eval_closed(k, y)).collect()
    }

    /// Power-series oracle.
    pub fn eval_series(&self, k: usize, y: f64, tol: &Tolerances) -> Result<f64> {
        self.check_index(k)?;
        if !y.is_finite() || y.abs() > Y_GUARD {
            return Err(Error::Overflow(format!("|y| = {} exceeds {Y_GUARD}", y.abs())));
        }
        let n = self.n;
        let alternate = self.variant == Variant::Planar;
        // term = y^k / k!
        let mut term = DoubleDouble::from(1.0);
        for j in 1..=k {
            term = term.mul_f64(y).div_f64(j as f64);
        }
        let mut sum = term;
        let mut index = k;
        for p in 1..MAX_TERMS {
            for _ in 0..n {
                index += 1;
                term = term.mul_f64(y).div_f64(index as f64);
            }
            let signed = if alternate && p % 2 == 1 { term.neg() } else { term };
            sum = sum.add(signed);
            let t = term.hi.abs();
            if index as f64 > y.abs() && t < tol.series_eps * sum.hi.abs().max(1.0) {
                return Ok(sum.hi + sum.lo);
            }
            if t == 0.0 {
                return Ok(sum.hi + sum.lo);
            }
        }
        Err(Error::NotConverged {
            what: "cosexponential series".into(),
            iterations: MAX_TERMS,
        })
    }
}

/// `g_nk(y)` via the closed form.
pub fn g(n: usize, k: usize, y: f64) -> f64 {
    CosexpFamily { n, variant: Variant::Polar }.eval_closed(k, y)
}

/// `f_nk(y)` via the closed form.
pub fn f(n: usize, k: usize, y: f64) -> f64 {
    CosexpFamily { n, variant: Variant::Planar }.eval_closed(k, y)
}

/// Analytic continuation of the polar closed form to complex arguments:
/// `g_nk(z) = (1/n) sum_l exp(z w_l) w_l^(-k)`, `w_l = exp(2 pi i l / n)`.
fn g_complex(n: usize, k: usize, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..n {
        let w = Complex64::from_polar(1.0, TAU * l as f64 / n as f64);
        let wk = Complex64::from_polar(1.0, -TAU * ((k * l) % n) as f64 / n as f64);
        acc += (z * w).exp() * wk;
    }
    acc / n as f64
}

/// `f_nk(y)` obtained from the polar function at the rotated argument:
/// `f_nk(y) = exp(-i pi k / n) g_nk(exp(i pi / n) y)`.
///
/// Returns the real part; the imaginary part is zero up to rounding.
pub fn planar_from_polar_continuation(n: usize, k: usize, y: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, PI / n as f64);
    let phase = Complex64::from_polar(1.0, -PI * k as f64 / n as f64);
    (phase * g_complex(n, k, rot * y)).re
}

/// `exp(h_k y)` as an n-complex number, assembled from cosexponential values.
///
/// The `p`-th function lands on component `kp mod n`; for the planar rule it
/// carries the sign `(-1)^floor(kp/n)`. Planar even `k` uses the polar
/// functions, odd `k` the planar ones.
pub fn exp_basis(variant: Variant, n: usize, k: usize, y: f64) -> Result<NComplex> {
    if k == 0 || k >= n {
        return Err(Error::domain(format!("basis index {k} must lie in 1..{n}")));
    }
    if variant == Variant::Planar && n % 2 == 1 {
        return Err(Error::domain(format!("planar numbers need an even dimension, got {n}")));
    }
    let family = match variant {
        Variant::Polar => CosexpFamily::polar(n)?,
        Variant::Planar if k % 2 == 0 => CosexpFamily::polar(n)?,
        Variant::Planar => CosexpFamily::planar(n)?,
    };
    let mut x = vec![0.0; n];
    for p in 0..n {
        let idx = (k * p) % n;
        let sign = if variant == Variant::Planar && ((k * p) / n) % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        x[idx] += sign * family.eval_closed(p, y);
    }
    NComplex::new(variant, x)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DoubleDouble { hi, lo }
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        // remainder self - q1*b, exactly up to the lo term
        let p = q1 * b;
        let pe = q1.mul_add(b, -p);
        let (s, e) = two_sum(self.hi, -p);
        let r = s + (e - pe + self.lo);
        let q2 = r / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }
}
