//! Seeded property checks over random samples, one group per acceptance
//! criterion. Shared by the `verify` command and the acceptance tests.

use crate::algebra::{odd_planar_as_polar, rule_product, NComplex, Variant};
use crate::contour::{self, Builtin, NFunction, PiecewisePath, QuadSpec};
use crate::cosexp::{self, CosexpFamily};
use crate::elementary;
use crate::error::Result;
use crate::matrix_rep::{matrix_exp, represent};
use crate::polyfactor::{self, Factorization, NPolynomial};
use crate::series::{self, NPowerSeries};
use crate::spectral::{canonical_basis, pair_count, plane_axes, slots, Spectrum};
use crate::tolerances::Tolerances;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub dims: Vec<usize>,
    pub tol: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 7,
            samples: 200,
            dims: vec![2, 3, 4, 5, 6, 8],
            tol: Tolerances::default(),
        }
    }
}

impl VerifyConfig {
    /// Drops dimensions above `n_max`.
    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.dims.retain(|&n| n <= n_max);
        self
    }

    fn rng(&self, criterion: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ criterion.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    /// `(variant, n)` pairs; planar only for even `n`.
    fn algebras(&self) -> Vec<(Variant, usize)> {
        let mut out = Vec::new();
        for &n in &self.dims {
            out.push((Variant::Polar, n));
            if n % 2 == 0 {
                out.push((Variant::Planar, n));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Comparison {
    fn holds(self, measured: f64, threshold: f64) -> bool {
        match self {
            Comparison::Below => measured < threshold,
            Comparison::AtMost => measured <= threshold,
            Comparison::AtLeast => measured >= threshold,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparison::Below => "<",
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub id: String,
    pub name: String,
    pub measured: f64,
    pub comparison: Comparison,
    pub threshold: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<3} {}: measured {:.3e} {} {:e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.comparison.symbol(),
            self.threshold
        )?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

fn outcome(
    criterion: u8,
    id: &str,
    name: &str,
    cmp: Comparison,
    threshold: f64,
    measured: Result<f64>,
) -> CheckOutcome {
    let (measured, detail) = match measured {
        Ok(m) if m.is_nan() => (f64::INFINITY, Some("non-finite measurement".to_string())),
        Ok(m) => (m, None),
        Err(e) => (f64::INFINITY, Some(format!("{}: {e}", e.name()))),
    };
    CheckOutcome {
        criterion,
        id: id.to_string(),
        name: name.to_string(),
        measured,
        comparison: cmp,
        threshold,
        passed: detail.is_none() && cmp.holds(measured, threshold),
        detail,
    }
}

/// Running maximum that treats NaN as a failure.
#[derive(Default)]
struct Worst(f64);

impl Worst {
    fn push(&mut self, v: f64) {
        self.0 = if v.is_nan() { f64::INFINITY } else { self.0.max(v) };
    }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, a: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-a..=a)).collect()
}

fn random_number(rng: &mut ChaCha8Rng, variant: Variant, n: usize, a: f64) -> Result<NComplex> {
    NComplex::new(variant, random_vec(rng, n, a))
}

/// Number with prescribed spectral magnitudes: real slots in `real`
/// (random sign unless `positive`), pair moduli in `modulus`, any phase.
fn random_spectral(
    rng: &mut ChaCha8Rng,
    variant: Variant,
    n: usize,
    real: (f64, f64),
    modulus: (f64, f64),
    positive: bool,
) -> Result<NComplex> {
    let values: Vec<Complex64> = slots(variant, n)
        .into_iter()
        .map(|s| {
            if s.is_real() {
                let v = rng.gen_range(real.0..=real.1);
                let sign = if positive || rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                Complex64::new(sign * v, 0.0)
            } else {
                let r = rng.gen_range(modulus.0..=modulus.1);
                Complex64::from_polar(r, rng.gen_range(0.0..TAU))
            }
        })
        .collect();
    Spectrum::from_values(variant, n, &values)?.to_ncomplex()
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(f64::MIN_POSITIVE)
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    (1..=10).flat_map(|c| run_criterion(c, cfg)).collect()
}

pub fn run_criterion(criterion: u8, cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    match criterion {
        1 => arithmetic_oracle(cfg),
        2 => exponential_oracle(cfg),
        3 => cosexp_identities(cfg),
        4 => two_dimensional(cfg),
        5 => elementary_round_trips(cfg),
        6 => analyticity(cfg),
        7 => residues(cfg),
        8 => factorization(cfg),
        9 => power_series(cfg),
        10 => odd_planar(cfg),
        _ => Vec::new(),
    }
}

fn arithmetic_oracle(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(1);
    let measured = (|| {
        let mut worst = Worst::default();
        for (variant, n) in cfg.algebras() {
            for _ in 0..cfg.samples {
                let u = random_number(&mut rng, variant, n, 2.0)?;
                let v = random_number(&mut rng, variant, n, 2.0)?;
                let (ru, rv) = (represent(&u), represent(&v));
                let prod = ru.matmul(&rv);
                let diff = represent(&u.mul(&v)?).sub(&prod).frobenius_norm();
                worst.push(rel(diff, ru.frobenius_norm() * rv.frobenius_norm()));
                let sum = represent(&u.add(&v)?).sub(&ru.add(&rv)).frobenius_norm();
                worst.push(rel(sum, ru.frobenius_norm() + rv.frobenius_norm()));
            }
        }
        Ok(worst.0)
    })();
    vec![outcome(1, "1", "rep(u v) = rep(u) rep(v)", Comparison::Below, 1e-12, measured)]
}

fn exponential_oracle(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(2);
    let measured = (|| {
        let mut worst = Worst::default();
        for (variant, n) in cfg.algebras() {
            for _ in 0..cfg.samples {
                let u = random_spectral(&mut rng, variant, n, (0.0, 20.0), (0.0, 20.0), false)?;
                let want = matrix_exp(&represent(&u), 1e-17)?;
                let got = represent(&elementary::exp(&u)?);
                worst.push(rel(got.sub(&want).frobenius_norm(), want.frobenius_norm()));
            }
        }
        Ok(worst.0)
    })();
    vec![outcome(2, "2", "rep(exp u) = matrix_exp(rep u)", Comparison::Below, 1e-9, measured)]
}

fn cosexp_sign(variant: Variant) -> f64 {
    match variant {
        Variant::Polar => 1.0,
        Variant::Planar => -1.0,
    }
}

/// `sum_k (-1)^k g_nk^2` in closed form: `(2/n){1 + cos 2y + 2 sum_{l=1}^{n/4-1} cos[2y cos(2 pi l/n)]}`.
pub fn polar_alternating_square_sum(n: usize, y: f64) -> f64 {
    let inner: f64 = (1..n / 4)
        .map(|l| (2.0 * y * (TAU * l as f64 / n as f64).cos()).cos())
        .sum();
    2.0 / n as f64 * (1.0 + (2.0 * y).cos() + 2.0 * inner)
}

/// `sum_k (-1)^k f_nk^2 = (4/n) sum_{l=1}^{n/4} cos[2y cos(pi (2l-1)/n)]`.
pub fn planar_alternating_square_sum(n: usize, y: f64) -> f64 {
    4.0 / n as f64
        * (1..=n / 4)
            .map(|l| (2.0 * y * (PI * (2 * l - 1) as f64 / n as f64).cos()).cos())
            .sum::<f64>()
}

/// `(1/n) sum_l exp(2 y cos a_l)`, the square sum of a cosexponential family.
pub fn square_sum_closed(fam: &CosexpFamily, y: f64) -> f64 {
    fam.magnitude_bound(2.0 * y)
}

fn cosexp_identities(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(3);
    let tol = cfg.tol;
    let families = || {
        cfg.dims.iter().flat_map(|&n| {
            [Variant::Polar, Variant::Planar]
                .into_iter()
                .map(move |v| CosexpFamily::new(n, v).expect("n >= 1"))
        })
    };
    let mut out = Vec::new();

    let m = (|| {
        let mut worst = Worst::default();
        for fam in families() {
            for _ in 0..cfg.samples {
                let y = rng.gen_range(-20.0..=20.0);
                let scale = fam.magnitude_bound(y);
                for k in 0..fam.n() {
                    let s = fam.eval_series(k, y, &tol)?;
                    let c = fam.eval_closed(k, y);
                    worst.push(rel((s - c).abs(), scale.max(s.abs())));
                }
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(3, "3a", "cosexp series vs closed form", Comparison::Below, 1e-12, m));

    let m = (|| {
        let mut worst = Worst::default();
        for &n in &cfg.dims {
            let fam = CosexpFamily::polar(n)?;
            for _ in 0..cfg.samples {
                let y: f64 = rng.gen_range(-20.0..=20.0);
                let g = fam.vector(y);
                let abs: f64 = g.iter().map(|v| v.abs()).sum();
                let sum: f64 = g.iter().sum();
                worst.push(rel((sum - y.exp()).abs(), abs.max(y.exp())));
                if n % 2 == 0 {
                    let alt: f64 = g.iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -v }).sum();
                    worst.push(rel((alt - (-y).exp()).abs(), abs.max((-y).exp())));
                }
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(3, "3b", "cosexp sum identities", Comparison::Below, 1e-12, m));

    let m = (|| {
        let mut worst = Worst::default();
        for fam in families() {
            for _ in 0..cfg.samples {
                let y = rng.gen_range(-20.0..=20.0);
                let lhs: f64 = fam.vector(y).iter().map(|v| v * v).sum();
                let rhs = square_sum_closed(&fam, y);
                worst.push(rel((lhs - rhs).abs(), rhs));
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(3, "3c", "cosexp square-sum identities", Comparison::Below, 1e-11, m));

    let m = (|| {
        let mut worst = Worst::default();
        for fam in families().filter(|f| f.n() % 4 == 0) {
            for _ in 0..cfg.samples {
                let y = rng.gen_range(-20.0..=20.0);
                let v = fam.vector(y);
                let lhs: f64 = v.iter().enumerate().map(|(k, g)| if k % 2 == 0 { g * g } else { -g * g }).sum();
                let rhs = match fam.variant() {
                    Variant::Polar => polar_alternating_square_sum(fam.n(), y),
                    Variant::Planar => planar_alternating_square_sum(fam.n(), y),
                };
                let scale: f64 = v.iter().map(|g| g * g).sum();
                worst.push(rel((lhs - rhs).abs(), scale.max(1.0)));
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(3, "3d", "cosexp alternating square sums (n = 4, 8)", Comparison::Below, 1e-10, m));

    let m = (|| {
        let mut worst = Worst::default();
        for fam in families() {
            let n = fam.n();
            let sigma = cosexp_sign(fam.variant());
            for _ in 0..cfg.samples {
                let y = rng.gen_range(-10.0..=10.0);
                let z = rng.gen_range(-10.0..=10.0);
                let (gy, gz) = (fam.vector(y), fam.vector(z));
                for k in 0..n {
                    let mut rhs = 0.0;
                    let mut abs = 0.0;
                    for j in 0..n {
                        let (term, sign) = if j <= k { (gy[j] * gz[k - j], 1.0) } else { (gy[j] * gz[n + k - j], sigma) };
                        rhs += sign * term;
                        abs += term.abs();
                    }
                    let lhs = fam.eval_closed(k, y + z);
                    worst.push(rel((lhs - rhs).abs(), abs.max(fam.magnitude_bound(y + z))));
                }
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(3, "3e", "cosexp addition theorems", Comparison::Below, 1e-11, m));

    let m = (|| {
        let h = 1e-5;
        let mut worst = Worst::default();
        for fam in families() {
            let n = fam.n();
            let sigma = cosexp_sign(fam.variant());
            for _ in 0..cfg.samples {
                let y = rng.gen_range(-20.0..=20.0);
                let (p, q) = (fam.vector(y + h), fam.vector(y - h));
                let g = fam.vector(y);
                let scale = fam.magnitude_bound(y).max(1.0);
                for k in 0..n {
                    let fd = (p[k] - q[k]) / (2.0 * h);
                    let exact = if k == 0 { sigma * g[n - 1] } else { g[k - 1] };
                    worst.push((fd - exact).abs() / scale);
                }
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(3, "3f", "cosexp derivative chains", Comparison::Below, 1e-7, m));

    let m = (|| {
        let mut worst = Worst::default();
        for &n in &cfg.dims {
            for variant in [Variant::Polar, Variant::Planar] {
                if variant == Variant::Planar && n % 2 == 1 {
                    continue;
                }
                for _ in 0..cfg.samples / 4 {
                    let y = rng.gen_range(-5.0..=5.0);
                    let l = rng.gen_range(2..=4u32);
                    let v = cosexp::exp_basis(variant, n, 1, y)?;
                    let want = cosexp::exp_basis(variant, n, 1, l as f64 * y)?;
                    let got = v.powi_by_mul(l)?;
                    let fam = CosexpFamily::new(n, variant)?;
                    worst.push(rel(got.distance(&want)?, fam.magnitude_bound(l as f64 * y)));
                }
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(3, "3g", "cosexp power identity", Comparison::Below, 1e-11, m));
    out
}

fn two_dimensional(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(4);
    let tol = cfg.tol;
    let m = (|| {
        let mut worst = Worst::default();
        let g = CosexpFamily::polar(2)?;
        let f = CosexpFamily::planar(2)?;
        for _ in 0..cfg.samples {
            let y: f64 = rng.gen_range(-20.0..=20.0);
            let c = y.cosh();
            worst.push(rel((g.eval_closed(0, y) - y.cosh()).abs(), c));
            worst.push(rel((g.eval_closed(1, y) - y.sinh()).abs(), c));
            worst.push((f.eval_closed(0, y) - y.cos()).abs());
            worst.push((f.eval_closed(1, y) - y.sin()).abs());
            worst.push(rel((g.eval_series(0, y, &tol)? - y.cosh()).abs(), c));
            worst.push(rel((g.eval_series(1, y, &tol)? - y.sinh()).abs(), c));
            worst.push((f.eval_series(0, y, &tol)? - y.cos()).abs());
            worst.push((f.eval_series(1, y, &tol)? - y.sin()).abs());
        }
        Ok(worst.0)
    })();
    let a = outcome(4, "4a", "n = 2 cosexponentials are cosh/sinh and cos/sin", Comparison::Below, 1e-13, m);

    let m = (|| {
        let mut worst = Worst::default();
        let z_of = |u: &NComplex| Complex64::new(u.components()[0], u.components()[1]);
        for _ in 0..cfg.samples {
            let u = random_number(&mut rng, Variant::Planar, 2, 3.0)?;
            let v = random_number(&mut rng, Variant::Planar, 2, 3.0)?;
            let (zu, zv) = (z_of(&u), z_of(&v));
            worst.push(rel((z_of(&u.mul(&v)?) - zu * zv).norm(), zu.norm() * zv.norm()));
            worst.push(rel((z_of(&u.inverse(&tol)?) - zu.inv()).norm(), zu.inv().norm()));
            worst.push(rel((z_of(&elementary::exp(&u)?) - zu.exp()).norm(), zu.exp().norm()));
            worst.push(rel((u.modulus() - zu.norm()).abs(), zu.norm()));
            worst.push(rel((u.determinant() - zu.norm_sqr()).abs(), zu.norm_sqr()));
        }
        Ok(worst.0)
    })();
    let b = outcome(4, "4b", "planar n = 2 algebra is the complex field", Comparison::Below, 1e-13, m);
    vec![a, b]
}

fn elementary_round_trips(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(5);
    let tol = cfg.tol;
    let mut out = Vec::new();

    let m = (|| {
        let mut worst = Worst::default();
        for (variant, n) in cfg.algebras() {
            for _ in 0..cfg.samples {
                let u = random_spectral(&mut rng, variant, n, (0.1, 5.0), (0.1, 5.0), true)?;
                let back = elementary::exp(&elementary::log(&u, &tol)?)?;
                worst.push(rel(back.distance(&u)?, u.modulus()));
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(5, "5a", "exp(log u) = u", Comparison::Below, 1e-10, m));

    let m = (|| {
        let mut worst = Worst::default();
        for (variant, n) in cfg.algebras() {
            for i in 0..cfg.samples {
                let mut u = random_number(&mut rng, variant, n, 1.0)?;
                if i % 2 == 1 {
                    // put u on a nodal hypersurface
                    let s = Spectrum::of(&u);
                    let mut vals = s.values();
                    let j = rng.gen_range(0..vals.len());
                    vals[j] = Complex64::new(0.0, 0.0);
                    u = Spectrum::from_values(variant, n, &vals)?.to_ncomplex()?;
                }
                let m = rng.gen_range(0..=5u32);
                let mut naive = NComplex::one(variant, n)?;
                for _ in 0..m {
                    naive = naive.mul(&u)?;
                }
                let got = elementary::pow(&u, m as f64, &tol)?;
                worst.push(rel(got.distance(&naive)?, naive.modulus().max(u.modulus().powi(m as i32))));
            }
            for _ in 0..cfg.samples / 2 {
                let u = random_spectral(&mut rng, variant, n, (0.5, 2.0), (0.5, 2.0), false)?;
                let m = rng.gen_range(1..=4u32);
                let mut naive = NComplex::one(variant, n)?;
                for _ in 0..m {
                    naive = naive.mul(&u)?;
                }
                let inv = elementary::pow(&u, -(m as f64), &tol)?;
                let one = NComplex::one(variant, n)?;
                worst.push(inv.mul(&naive)?.distance(&one)?);
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(5, "5b", "pow(u, m) = repeated multiplication", Comparison::Below, 1e-12, m));

    let with_pairs = cfg
        .algebras()
        .into_iter()
        .filter(|&(v, n)| !(v == Variant::Polar && n == 2))
        .collect::<Vec<_>>();

    let m = (|| {
        let mut worst = Worst::default();
        for &(variant, n) in &with_pairs {
            for _ in 0..cfg.samples {
                let u = random_spectral(&mut rng, variant, n, (0.2, 3.0), (0.2, 3.0), true)?;
                let f = elementary::exponential_form(&u, &tol)?;
                worst.push(rel(f.reassemble()?.distance(&u)?, u.modulus()));
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(5, "5c", "exponential form reassembles u", Comparison::Below, 1e-10, m));

    let m = (|| {
        let mut worst = Worst::default();
        for &(variant, n) in &with_pairs {
            for _ in 0..cfg.samples {
                let u = random_spectral(&mut rng, variant, n, (0.2, 3.0), (0.2, 3.0), false)?;
                let f = elementary::trigonometric_form(&u, &tol)?;
                worst.push(rel(f.reassemble()?.distance(&u)?, u.modulus()));
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(5, "5d", "trigonometric form reassembles u", Comparison::Below, 1e-10, m));
    out
}

fn analyticity(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(6);
    let h = 1e-4;
    let samples = (cfg.samples / 10).max(1);
    let square = |u: &NComplex| u.mul(u);
    let cube = |u: &NComplex| u.mul(u)?.mul(u);
    let flip = |u: &NComplex| {
        let mut x = u.components().to_vec();
        x[1] = -x[1];
        NComplex::new(u.variant(), x)
    };
    let mut analytic = Worst::default();
    let mut broken = f64::INFINITY;
    let run: Result<()> = (|| {
        for (variant, n) in cfg.algebras() {
            for _ in 0..samples {
                let u0 = random_number(&mut rng, variant, n, 1.0)?;
                for f in [&square as &dyn Fn(&NComplex) -> Result<NComplex>, &cube, &elementary::exp] {
                    analytic.push(series::check_riemann_relations(f, &u0, h)?.max_residual());
                }
                broken = broken.min(series::check_riemann_relations(flip, &u0, h)?.max_residual());
            }
        }
        Ok(())
    })();
    let (a, b) = match run {
        Ok(()) => (Ok(analytic.0), Ok(broken)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    vec![
        outcome(6, "6a", "analyticity relations for u^2, u^3, exp", Comparison::Below, 1e-6, a),
        outcome(6, "6b", "non-analytic map is flagged", Comparison::AtLeast, 1e-2, b),
    ]
}

/// Loop with unit radius in the chosen planes and a point `u0` placed inside
/// or outside each plane's circle. Returns `(path, u0, expected winding)`.
fn residue_setup(
    variant: Variant,
    n: usize,
    radii: &[f64],
    inside: &[bool],
    rng: &mut ChaCha8Rng,
    segments: usize,
) -> Result<(PiecewisePath, NComplex, Vec<i64>)> {
    let zero = NComplex::zero(variant, n)?;
    let path = PiecewisePath::spectral_loop(&zero, radii, segments)?;
    let basis = canonical_basis(n, variant)?;
    // real slots of u - u0 stay at 0.7 in magnitude
    let mut u0 = zero.clone();
    for e in basis.e_plus.iter().chain(basis.e_minus.iter()) {
        u0 = u0.add(&e.scale(-0.7)?)?;
    }
    let mut expected = Vec::new();
    for (k, (&r, &ins)) in radii.iter().zip(inside).enumerate() {
        let (x, y) = plane_axes(variant, n, k + 1)?;
        let a = rng.gen_range(0.0..TAU);
        let d = if r == 0.0 {
            1.0
        } else if ins {
            rng.gen_range(0.1..0.5) * r
        } else {
            rng.gen_range(1.6..2.5) * r
        };
        u0 = u0.add(&x.scale(d * a.cos())?)?.add(&y.scale(d * a.sin())?)?;
        expected.push(i64::from(ins && r > 0.0));
    }
    Ok((path, u0, expected))
}

fn residues(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(7);
    let tol = cfg.tol;
    let quad = QuadSpec {
        tol: 1e-9,
        max_segments: 4096,
        max_levels: 12,
    };
    let segments = 64;
    let algebras: Vec<_> = cfg
        .algebras()
        .into_iter()
        .filter(|&(v, n)| pair_count(v, n) > 0)
        .collect();
    let mut winding_mismatch = 0usize;
    let m = (|| {
        let mut worst = Worst::default();
        for &(variant, n) in &algebras {
            let planes = pair_count(variant, n);
            let mut cases: Vec<(Vec<f64>, Vec<bool>)> = Vec::new();
            // one circle per plane, inside and outside
            for k in 0..planes {
                for ins in [true, false] {
                    let mut radii = vec![0.0; planes];
                    radii[k] = 1.0;
                    let mut inside = vec![false; planes];
                    inside[k] = ins;
                    cases.push((radii, inside));
                }
            }
            // circles in all planes at once, every inside/outside pattern
            if planes > 1 {
                for mask in 0..(1u32 << planes) {
                    let inside = (0..planes).map(|k| mask >> k & 1 == 1).collect();
                    cases.push((vec![1.0; planes], inside));
                }
            }
            for (radii, inside) in cases {
                let (path, u0, expected) = residue_setup(variant, n, &radii, &inside, &mut rng, segments)?;
                for f in [Builtin::Const(NComplex::one(variant, n)?), Builtin::Exp] {
                    let cert = contour::residue_check(&f, &u0, &path, &quad, &tol)?;
                    if cert.winding != expected {
                        winding_mismatch += 1;
                    }
                    worst.push(cert.max_abs_error);
                }
            }
        }
        Ok(worst.0)
    })();
    let detail = (winding_mismatch > 0).then(|| format!("{winding_mismatch} winding mismatches"));
    let mut a = outcome(7, "7a", "residue formula on spectral loops", Comparison::Below, 1e-6, m);
    if let Some(d) = detail {
        a.passed = false;
        a.detail = Some(d);
    }

    let quad = QuadSpec {
        tol: 1e-12,
        max_segments: 4096,
        max_levels: 12,
    };
    let m = (|| {
        let mut worst = Worst::default();
        for &(variant, n) in &algebras {
            let planes = pair_count(variant, n);
            let center = random_number(&mut rng, variant, n, 0.5)?;
            let radii: Vec<f64> = (0..planes).map(|_| rng.gen_range(0.5..1.5)).collect();
            let path = PiecewisePath::spectral_loop(&center, &radii, segments)?;
            let square = |u: &NComplex| u.mul(u);
            let fs: [&dyn NFunction; 3] = [&Builtin::Identity, &Builtin::Exp, &square];
            for f in fs {
                worst.push(contour::integrate(f, &path, &quad, &tol)?.modulus());
            }
        }
        Ok(worst.0)
    })();
    let b = outcome(7, "7b", "loop integral of analytic functions vanishes", Comparison::Below, 1e-10, m);
    vec![a, b]
}

fn expected_count(variant: Variant, n: usize) -> u128 {
    match variant {
        Variant::Polar if n % 2 == 0 => 1 << (n / 2),
        Variant::Polar => 1 << ((n - 1) / 2),
        Variant::Planar => 1 << (n / 2 - 1),
    }
}

/// Minimum distance between roots of any slot polynomial of the product.
fn slot_separation(roots: &[NComplex]) -> f64 {
    let spectra: Vec<Vec<Complex64>> = roots.iter().map(|r| Spectrum::of(r).values()).collect();
    let mut best = f64::INFINITY;
    for s in 0..spectra[0].len() {
        for i in 0..roots.len() {
            for j in 0..i {
                best = best.min((spectra[i][s] - spectra[j][s]).norm());
            }
        }
    }
    best
}

fn factorization(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(8);
    let tol = cfg.tol;
    let limit = polyfactor::DEFAULT_LIMIT;
    let mut out = Vec::new();
    let mut root_residual = Worst::default();

    let m = (|| {
        let mut mismatches = 0.0;
        for (variant, n) in cfg.algebras() {
            let c = if variant == Variant::Polar { -1.0 } else { 1.0 };
            let p = NPolynomial::scalar(variant, n, &[0.0, c])?;
            let r = polyfactor::roots(&p, &tol)?;
            let count = polyfactor::count_factorizations(&r, limit)?;
            if count.count != expected_count(variant, n) || !count.exact {
                mismatches += 1.0;
            }
            for f in polyfactor::factorizations(&r, limit) {
                for u in &f?.linear_roots {
                    root_residual.push(p.eval(u)?.modulus());
                }
            }
        }
        Ok(mismatches)
    })();
    out.push(outcome(8, "8a", "root-set counts for u^2 - 1 and u^2 + 1", Comparison::Below, 0.5, m));

    let mut round_trip = Worst::default();
    let run: Result<()> = (|| {
        for (variant, n) in cfg.algebras() {
            let mut done = 0;
            while done < cfg.samples / 4 {
                let m = rng.gen_range(1..=5usize);
                let roots = (0..m)
                    .map(|_| random_number(&mut rng, variant, n, 2.0))
                    .collect::<Result<Vec<_>>>()?;
                if m > 1 && slot_separation(&roots) < 0.1 {
                    continue;
                }
                done += 1;
                let f = Factorization {
                    linear_roots: roots,
                    quadratic_factors: vec![],
                    ordering_id: 0,
                    mixed: false,
                };
                let p = polyfactor::expand(&f, variant, n)?;
                let r = polyfactor::roots(&p, &tol)?;
                let scale = p.coefficients().iter().map(|a| a.modulus()).fold(1.0, f64::max);
                for (i, g) in polyfactor::factorizations(&r, 4).enumerate() {
                    let g = g?;
                    for u in &g.linear_roots {
                        root_residual.push(rel(p.eval(u)?.modulus(), p.eval_scale(u)));
                    }
                    if i == 0 {
                        let back = polyfactor::expand(&g, variant, n)?;
                        for (a, b) in back.coefficients().iter().zip(p.coefficients()) {
                            round_trip.push(a.distance(b)? / scale);
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    let (res, rt) = match run {
        Ok(()) => (Ok(root_residual.0), Ok(round_trip.0)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    out.push(outcome(8, "8b", "enumerated roots satisfy P(u_p) = 0", Comparison::Below, 1e-8, res));
    out.push(outcome(8, "8c", "expand(factorize(P)) = P", Comparison::Below, 1e-8, rt));
    out
}

fn power_series(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(9);
    let mut out = Vec::new();

    let m = (|| {
        let mut worst = Worst::default();
        for (variant, n) in cfg.algebras() {
            let slot_list = slots(variant, n);
            let basis = canonical_basis(n, variant)?;
            for _ in 0..cfg.samples / 10 {
                // each slot gets radius r or is left empty
                let radii: Vec<Option<f64>> = slot_list
                    .iter()
                    .map(|_| rng.gen_bool(0.8).then(|| rng.gen_range(0.5..3.0)))
                    .collect();
                let coeffs = (0..13)
                    .map(|l| {
                        let mut a = NComplex::zero(variant, n)?;
                        for (slot, r) in slot_list.iter().zip(&radii) {
                            if let Some(r) = r {
                                let e = basis.element(*slot, false).expect("slot element");
                                let w = (1.0 + 1.0 / (l as f64 + 1.0)) * r.powi(-l);
                                a = a.add(&e.scale(w)?)?;
                            }
                        }
                        Ok(a)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let s = NPowerSeries::new(variant, n, coeffs)?;
                let cyl = series::convergence_radii(&s, series::DEFAULT_WINDOW)?;
                let mut got = Vec::new();
                got.extend(cyl.c_plus);
                got.extend(cyl.c_minus);
                got.extend(&cyl.c);
                for (g, r) in got.iter().zip(&radii) {
                    match r {
                        Some(r) => worst.push((g - r).abs() / r),
                        None if g.is_infinite() => {}
                        None => worst.push(f64::INFINITY),
                    }
                }
            }
            // 1/l! has no finite radius
            let mut fact = vec![1.0];
            for l in 1..30 {
                fact.push(fact[l - 1] / l as f64);
            }
            let cyl = series::convergence_radii(&NPowerSeries::scalar(variant, n, &fact)?, 8)?;
            if cyl.c.iter().chain(cyl.c_plus.iter()).chain(cyl.c_minus.iter()).any(|r| r.is_finite()) {
                worst.push(f64::INFINITY);
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(9, "9a", "convergence radii of constructed series", Comparison::Below, 0.05, m));

    let m = (|| {
        let mut worst = Worst::default();
        for (variant, n) in cfg.algebras() {
            for _ in 0..cfg.samples {
                let coeffs = (0..10)
                    .map(|_| random_number(&mut rng, variant, n, 1.0))
                    .collect::<Result<Vec<_>>>()?;
                let s = NPowerSeries::new(variant, n, coeffs)?;
                let u = random_number(&mut rng, variant, n, 0.5)?;
                let a = s.evaluate(&u, 10)?;
                let b = s.evaluate_horner(&u, 10)?;
                worst.push(rel(a.distance(&b)?, b.modulus().max(1.0)));
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(9, "9b", "spectral evaluation vs Horner", Comparison::Below, 1e-10, m));

    let m = (|| {
        let mut worst = Worst::default();
        for (variant, n) in cfg.algebras() {
            let factor = series::product_bound_factor(variant, n);
            let basis = canonical_basis(n, variant)?;
            let mut pool: Vec<NComplex> = basis.e_plus.iter().chain(basis.e_minus.iter()).cloned().collect();
            pool.extend(basis.e.iter().cloned());
            pool.extend(basis.e_tilde.iter().cloned());
            for _ in 0..cfg.samples {
                pool.push(random_number(&mut rng, variant, n, 1.0)?);
            }
            for u in &pool {
                for v in pool.iter().take(16) {
                    let bound = factor * u.modulus() * v.modulus();
                    if bound > 0.0 {
                        worst.push(u.mul(v)?.modulus() / bound);
                    }
                }
            }
        }
        Ok(worst.0)
    })();
    out.push(outcome(
        9,
        "9c",
        "|u v| <= bound factor |u| |v| (max ratio)",
        Comparison::AtMost,
        1.0 + 1e-12,
        m,
    ));
    out
}

fn odd_planar(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = cfg.rng(10);
    let m = (|| {
        let mut worst = Worst::default();
        for n in [3, 5] {
            for _ in 0..cfg.samples {
                let x = random_vec(&mut rng, n, 2.0);
                let y = random_vec(&mut rng, n, 2.0);
                let xy = rule_product(Variant::Planar, &x, &y);
                let lhs = odd_planar_as_polar(&xy)?;
                let rhs = odd_planar_as_polar(&x)?.mul(&odd_planar_as_polar(&y)?)?;
                let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
                worst.push(rel(lhs.distance(&rhs)?, norm(&x) * norm(&y)));
                let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                let add = odd_planar_as_polar(&sum)?.distance(&odd_planar_as_polar(&x)?.add(&odd_planar_as_polar(&y)?)?)?;
                worst.push(rel(add, norm(&x) + norm(&y)));
                // isometry, hence injective
                worst.push(rel((odd_planar_as_polar(&x)?.modulus() - norm(&x)).abs(), norm(&x)));
            }
        }
        Ok(worst.0)
    })();
    vec![outcome(10, "10", "odd planar to polar map is an isomorphism", Comparison::Below, 1e-12, m)]
}

/// True if all outcomes passed.
pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_line_format() {
        let o = outcome(3, "3a", "demo", Comparison::Below, 1e-12, Ok(2e-15));
        assert!(o.passed);
        assert_eq!(o.to_string(), "[PASS] 3a  demo: measured 2.000e-15 < 1e-12");
        let o = outcome(3, "3a", "demo", Comparison::Below, 1e-12, Err(crate::error::Error::domain("x")));
        assert!(!o.passed);
        assert!(o.to_string().contains("DomainError"));
    }

    #[test]
    fn n_max_filters_dimensions() {
        let c = VerifyConfig::default().with_n_max(4);
        assert_eq!(c.dims, vec![2, 3, 4]);
    }

    #[test]
    fn alternating_square_sums_match_series_at_small_y() {
        let tol = Tolerances::default();
        for n in [4, 8, 12] {
            for &y in &[0.3, 1.3, 2.9] {
                let g = CosexpFamily::polar(n).unwrap();
                let lhs: f64 = (0..n)
                    .map(|k| {
                        let v = g.eval_series(k, y, &tol).unwrap();
                        if k % 2 == 0 { v * v } else { -v * v }
                    })
                    .sum();
                assert!((lhs - polar_alternating_square_sum(n, y)).abs() < 1e-13, "n={n} y={y}");
                let f = CosexpFamily::planar(n).unwrap();
                let lhs: f64 = (0..n)
                    .map(|k| {
                        let v = f.eval_series(k, y, &tol).unwrap();
                        if k % 2 == 0 { v * v } else { -v * v }
                    })
                    .sum();
                assert!((lhs - planar_alternating_square_sum(n, y)).abs() < 1e-13, "n={n} y={y}");
            }
        }
    }
}
