//! Line integrals along polygonal paths, winding numbers in the projected
//! planes, and the residue formula.

use crate::algebra::{NComplex, Variant};
use crate::elementary;
use crate::error::{Error, Result};
use crate::spectral::{canonical_basis, pair_count, pair_trig, plane_axes, Spectrum};
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// A pole `(u - center)^(-order)` carried by a function.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub center: NComplex,
    pub order: u32,
}

/// A function of one n-complex variable, with optional singularity data.
pub trait NFunction {
    fn eval(&self, u: &NComplex) -> Result<NComplex>;

    fn poles(&self) -> Vec<Pole> {
        Vec::new()
    }
}

impl<F> NFunction for F
where
    F: Fn(&NComplex) -> Result<NComplex>,
{
    fn eval(&self, u: &NComplex) -> Result<NComplex> {
        self(u)
    }
}

/// Functions selectable by name from the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Const(NComplex),
    Identity,
    Exp,
    Reciprocal { center: NComplex, order: u32 },
}

impl NFunction for Builtin {
    fn eval(&self, u: &NComplex) -> Result<NComplex> {
        match self {
            Builtin::Const(c) => Ok(c.clone()),
            Builtin::Identity => Ok(u.clone()),
            Builtin::Exp => elementary::exp(u),
            Builtin::Reciprocal { center, order } => u
                .sub(center)?
                .inverse(&Tolerances::default())?
                .powi_by_mul(*order),
        }
    }

    fn poles(&self) -> Vec<Pole> {
        match self {
            Builtin::Reciprocal { center, order } => vec![Pole {
                center: center.clone(),
                order: *order,
            }],
            _ => Vec::new(),
        }
    }
}

/// `f(u) / (u - u0)`.
struct OverLinear<'a, F: ?Sized> {
    f: &'a F,
    u0: &'a NComplex,
}

impl<F: NFunction + ?Sized> NFunction for OverLinear<'_, F> {
    fn eval(&self, u: &NComplex) -> Result<NComplex> {
        let inv = u.sub(self.u0)?.inverse(&Tolerances::default())?;
        self.f.eval(u)?.mul(&inv)
    }

    fn poles(&self) -> Vec<Pole> {
        let mut p = self.f.poles();
        p.push(Pole {
            center: self.u0.clone(),
            order: 1,
        });
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewisePath {
    variant: Variant,
    n: usize,
    vertices: Vec<NComplex>,
    closed: bool,
}

impl PiecewisePath {
    pub fn new(vertices: Vec<NComplex>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::domain("a path needs at least 2 vertices"));
        }
        let (variant, n) = (vertices[0].variant(), vertices[0].n());
        for v in &vertices {
            if v.variant() != variant || v.n() != n {
                return Err(Error::DimensionMismatch {
                    left: format!("{variant}:n={n}"),
                    right: format!("{}:n={}", v.variant(), v.n()),
                });
            }
        }
        Ok(PiecewisePath {
            variant,
            n,
            vertices,
            closed,
        })
    }

    /// Polygon approximating `center + sum_k r_k (cos t X_k + sin t Y_k)`,
    /// where `X_k, Y_k` are the unit axes of plane `k`. A zero radius keeps
    /// the loop fixed in that plane.
    pub fn spectral_loop(center: &NComplex, radii: &[f64], segments: usize) -> Result<Self> {
        let (variant, n) = (center.variant(), center.n());
        let planes = pair_count(variant, n);
        if radii.len() != planes {
            return Err(Error::domain(format!(
                "expected {planes} radii, got {}",
                radii.len()
            )));
        }
        if segments < 3 {
            return Err(Error::domain("a loop needs at least 3 segments"));
        }
        let axes = (1..=planes)
            .map(|k| plane_axes(variant, n, k))
            .collect::<Result<Vec<_>>>()?;
        let vertices = (0..segments)
            .map(|j| {
                let t = TAU * j as f64 / segments as f64;
                let mut v = center.clone();
                for ((x, y), &r) in axes.iter().zip(radii) {
                    v = v.add(&x.scale(r * t.cos())?)?.add(&y.scale(r * t.sin())?)?;
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, true)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[NComplex] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Edges as `(start, end)` pairs, including the closing edge.
    pub fn edges(&self) -> Vec<(&NComplex, &NComplex)> {
        let v = &self.vertices;
        let mut e: Vec<_> = v.windows(2).map(|w| (&w[0], &w[1])).collect();
        if self.closed {
            e.push((&v[v.len() - 1], &v[0]));
        }
        e
    }
}

/// Refinement controls for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSpec {
    /// Stop when successive extrapolated estimates differ by less than this.
    pub tol: f64,
    /// Cap on the total number of sub-segments (edges times subdivisions).
    pub max_segments: usize,
    pub max_levels: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            tol: 1e-10,
            max_segments: 4096,
            max_levels: 16,
        }
    }
}

fn check_sample<F: NFunction + ?Sized>(
    f: &F,
    poles: &[Pole],
    u: &NComplex,
    sample: usize,
    tol: &Tolerances,
) -> Result<NComplex> {
    for pole in poles {
        let z = u.sub(&pole.center)?;
        let threshold = tol.node_threshold(z.modulus());
        if let Some(&slot) = Spectrum::of(&z).vanishing_slots(threshold).first() {
            return Err(Error::SingularPath { sample, slot });
        }
    }
    f.eval(u)
}

/// Composite midpoint rule with `subdivisions` pieces per edge.
pub fn midpoint_estimate<F: NFunction + ?Sized>(
    f: &F,
    path: &PiecewisePath,
    subdivisions: usize,
) -> Result<NComplex> {
    midpoint_checked(f, path, subdivisions, &Tolerances::default())
}

fn midpoint_checked<F: NFunction + ?Sized>(
    f: &F,
    path: &PiecewisePath,
    subdivisions: usize,
    tol: &Tolerances,
) -> Result<NComplex> {
    let s = subdivisions.max(1);
    let poles = f.poles();
    let mut total = NComplex::zero(path.variant, path.n)?;
    let mut sample = 0;
    for (a, b) in path.edges() {
        let d = b.sub(a)?;
        let mut acc = NComplex::zero(path.variant, path.n)?;
        for j in 0..s {
            let t = (j as f64 + 0.5) / s as f64;
            let u = a.add(&d.scale(t)?)?;
            acc = acc.add(&check_sample(f, &poles, &u, sample, tol)?)?;
            sample += 1;
        }
        total = total.add(&acc.mul(&d)?.scale(1.0 / s as f64)?)?;
    }
    Ok(total)
}

/// `integral f(u) du` along the path, refined by doubling the subdivisions
/// and Richardson extrapolation of the midpoint sums.
pub fn integrate<F: NFunction + ?Sized>(
    f: &F,
    path: &PiecewisePath,
    quad: &QuadSpec,
    tol: &Tolerances,
) -> Result<NComplex> {
    let edges = path.edges().len();
    let mut s = 1;
    let mut coarse = midpoint_checked(f, path, s, tol)?;
    let mut prev: Option<NComplex> = None;
    for _ in 0..quad.max_levels {
        if edges * s * 2 > quad.max_segments {
            break;
        }
        s *= 2;
        let fine = midpoint_checked(f, path, s, tol)?;
        let extrap = fine.scale(4.0 / 3.0)?.sub(&coarse.scale(1.0 / 3.0)?)?;
        if let Some(p) = &prev {
            if extrap.distance(p)? < quad.tol {
                return Ok(extrap);
            }
        }
        if fine.distance(&coarse)? < quad.tol * 1e-3 {
            return Ok(extrap);
        }
        prev = Some(extrap);
        coarse = fine;
    }
    Err(Error::NotConverged {
        what: "path integral".into(),
        iterations: edges * s,
    })
}

/// Signed winding number of the path's projection onto plane `k` around the
/// projection of `center`.
pub fn winding_number(
    path: &PiecewisePath,
    center: &NComplex,
    k: usize,
    tol: &Tolerances,
) -> Result<i64> {
    if !path.closed {
        return Err(Error::domain("winding number needs a closed path"));
    }
    if k == 0 || k > pair_count(path.variant, path.n) {
        return Err(Error::domain(format!("no plane {k} in {} dimension {}", path.variant, path.n)));
    }
    let (cx, cy) = Spectrum::of(center).projection(k);
    let pts: Vec<(f64, f64)> = path
        .vertices
        .iter()
        .map(|v| {
            let (x, y) = Spectrum::of(v).projection(k);
            (x - cx, y - cy)
        })
        .collect();
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p.0.hypot(p.1)));
    let margin = tol.node_eps * scale;
    let mut total = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        if segment_distance(a, b) <= margin {
            return Err(Error::OnCurve { k });
        }
        let cross = a.0 * b.1 - a.1 * b.0;
        let dot = a.0 * b.0 + a.1 * b.1;
        total += cross.atan2(dot);
    }
    Ok((total / TAU).round() as i64)
}

/// Distance from the origin to the segment `ab`.
fn segment_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = (b.0 - a.0, b.1 - a.1);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (-(a.0 * d.0 + a.1 * d.1) / len2).clamp(0.0, 1.0)
    };
    (a.0 + t * d.0).hypot(a.1 + t * d.1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueCertificate {
    pub integral: NComplex,
    pub predicted: NComplex,
    /// Signed winding per plane `k = 1..K`.
    pub winding: Vec<i64>,
    pub max_abs_error: f64,
    /// Set when some winding is neither 0 nor 1.
    pub out_of_domain: bool,
}

/// Compares `integral f(u) du / (u - u0)` with `2 pi f(u0) sum_k e~_k w_k`.
pub fn residue_check<F: NFunction + ?Sized>(
    f: &F,
    u0: &NComplex,
    path: &PiecewisePath,
    quad: &QuadSpec,
    tol: &Tolerances,
) -> Result<ResidueCertificate> {
    let g = OverLinear { f, u0 };
    let integral = integrate(&g, path, quad, tol)?;
    let planes = pair_count(path.variant, path.n);
    let winding = (1..=planes)
        .map(|k| winding_number(path, u0, k, tol))
        .collect::<Result<Vec<_>>>()?;
    let basis = canonical_basis(path.n, path.variant)?;
    let mut sum = NComplex::zero(path.variant, path.n)?;
    for (e, &w) in basis.e_tilde.iter().zip(&winding) {
        sum = sum.add(&e.scale(w as f64)?)?;
    }
    let predicted = f.eval(u0)?.mul(&sum)?.scale(TAU)?;
    let max_abs_error = integral
        .components()
        .iter()
        .zip(predicted.components())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let out_of_domain = winding.iter().any(|&w| w != 0 && w != 1);
    Ok(ResidueCertificate {
        integral,
        predicted,
        winding,
        max_abs_error,
        out_of_domain,
    })
}

/// Split of `du / (u - u0)` into single-valued and cyclic differentials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlogDecomposition {
    /// `du * (u - u0)^(-1)`.
    pub whole: NComplex,
    /// `d rho / rho`.
    pub radial: f64,
    /// Coefficients of `h_1 .. h_{n-1}` built from the log-tangent differentials.
    pub h_coefficients: Vec<f64>,
    /// `d phi_k`, each in `(-pi, pi]`.
    pub dphi: Vec<f64>,
    pub single_valued: NComplex,
    pub cyclic: NComplex,
    /// `|whole - single_valued - cyclic|`.
    pub residual: f64,
}

/// Logarithms of the geometric variables at a point.
struct LogVars {
    ln_rho: f64,
    ln_plus: Option<f64>,
    ln_minus: Option<f64>,
    ln_rho_k: Vec<f64>,
    phi: Vec<f64>,
}

fn log_vars(z: &NComplex, tol: &Tolerances) -> Result<LogVars> {
    let s = Spectrum::of(z);
    let vanishing = s.vanishing_slots(tol.node_threshold(z.modulus()));
    if !vanishing.is_empty() {
        return Err(Error::NonInvertible { slots: vanishing });
    }
    let ln_rho_k: Vec<f64> = (1..=s.pairs().len()).map(|k| s.rho(k).ln()).collect();
    let phi = s.pairs().iter().map(|&(v, w)| w.atan2(v)).collect();
    Ok(LogVars {
        ln_rho: s.determinant().abs().ln() / z.n() as f64,
        ln_plus: s.v_plus().map(|v| v.abs().ln()),
        ln_minus: s.v_minus().map(|v| v.abs().ln()),
        ln_rho_k,
        phi,
    })
}

fn wrap_pm_pi(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// Decomposes `du / (u - u0)` using differences of the geometric variables
/// between `u - u0 - du/2` and `u - u0 + du/2`.
pub fn dlog_decomposition(
    u: &NComplex,
    u0: &NComplex,
    du: &NComplex,
    tol: &Tolerances,
) -> Result<DlogDecomposition> {
    let z = u.sub(u0)?;
    let whole = du.mul(&z.inverse(tol)?)?;
    let half = du.scale(0.5)?;
    let a = log_vars(&z.sub(&half)?, tol)?;
    let b = log_vars(&z.add(&half)?, tol)?;
    let (variant, n) = (u.variant(), u.n());
    let nf = n as f64;

    // log(sqrt2 / tan theta) = ln|v| - ln rho_1, log tan psi_{k-1} = ln rho_1 - ln rho_k;
    // without pairs rho_1 is taken as 1
    let r1 = |v: &LogVars| v.ln_rho_k.first().copied().unwrap_or(0.0);
    let d_theta = |pa: Option<f64>, pb: Option<f64>| match (pa, pb) {
        (Some(x), Some(y)) => Some((y - r1(&b)) - (x - r1(&a))),
        _ => None,
    };
    let dt_plus = d_theta(a.ln_plus, b.ln_plus);
    let dt_minus = d_theta(a.ln_minus, b.ln_minus);
    let d_psi: Vec<f64> = (1..a.ln_rho_k.len())
        .map(|k| (r1(&b) - b.ln_rho_k[k]) - (r1(&a) - a.ln_rho_k[k]))
        .collect();
    let h_coefficients: Vec<f64> = (1..n)
        .map(|p| {
            let mut c = dt_plus.map_or(0.0, |d| d / nf);
            if let Some(d) = dt_minus {
                c += if p % 2 == 0 { d / nf } else { -d / nf };
            }
            for (i, d) in d_psi.iter().enumerate() {
                c -= 2.0 / nf * pair_trig(variant, n, i + 2, p).0 * d;
            }
            c
        })
        .collect();
    let radial = b.ln_rho - a.ln_rho;
    let dphi: Vec<f64> = a.phi.iter().zip(&b.phi).map(|(x, y)| wrap_pm_pi(y - x)).collect();

    let mut x = vec![radial; 1];
    x.extend(&h_coefficients);
    let single_valued = NComplex::new(variant, x)?;
    let cyclic = elementary::phase_element(variant, n, &dphi)?;
    let residual = whole.distance(&single_valued.add(&cyclic)?)?;
    Ok(DlogDecomposition {
        whole,
        radial,
        h_coefficients,
        dphi,
        single_valued,
        cyclic,
        residual,
    })
}
