//! Matrix representations of n-complex numbers.
//!
//! Polar numbers map to circulant matrices with first row `x_0..x_{n-1}`;
//! planar numbers to the sign-twisted circulants whose entries below the
//! diagonal are negated. Both maps are ring homomorphisms, so this module
//! doubles as an independent oracle for multiplication, the exponential and
//! the determinant.

use crate::algebra::{NComplex, Variant};
use crate::error::{Error, Result};
use crate::spectral::Spectrum;
use num_complex::Complex64;

/// Dense `n x n` real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RepMatrix {
    pub fn zeros(n: usize) -> Self {
        RepMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix rows must form a square"));
        }
        Ok(RepMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn add(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.n, other.n);
        RepMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.n, other.n);
        RepMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> RepMatrix {
        RepMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn matmul(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        RepMatrix { n, data: out }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .unwrap();
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(M - lambda I)` at a complex point.
    pub fn char_poly_at(&self, lambda: Complex64) -> Complex64 {
        let n = self.n;
        let mut a: Vec<Complex64> = self.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for i in 0..n {
            a[i * n + i] -= lambda;
        }
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap();
            if a[pivot * n + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                for j in col..n {
                    let t = a[col * n + j];
                    a[r * n + j] -= factor * t;
                }
            }
        }
        det
    }

    /// Reads the number back from the first row (valid for both variants).
    pub fn to_ncomplex(&self, variant: Variant) -> Result<NComplex> {
        NComplex::new(variant, self.row(0).to_vec())
    }
}

/// Matrix of multiplication by `u`: row `i` holds the components of `h_i u`.
pub fn represent(u: &NComplex) -> RepMatrix {
    let n = u.n();
    let x = u.components();
    let planar = u.variant() == Variant::Planar;
    let mut m = RepMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = x[(j + n - i) % n];
            m.data[i * n + j] = if planar && j < i { -v } else { v };
        }
    }
    m
}

/// Block-diagonal form: real scalars `v_+`, `v_-` and 2x2 blocks
/// `V_k = [[v_k, v~_k], [-v~_k, v_k]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm {
    pub diag_scalars: Vec<f64>,
    pub blocks: Vec<[[f64; 2]; 2]>,
}

impl BlockForm {
    pub fn determinant(&self) -> f64 {
        let d: f64 = self.diag_scalars.iter().product();
        let b: f64 = self
            .blocks
            .iter()
            .map(|m| m[0][0] * m[1][1] - m[0][1] * m[1][0])
            .product();
        d * b
    }

    /// Block-wise product.
    pub fn mul(&self, other: &BlockForm) -> BlockForm {
        let mm = |a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]| {
            let mut c = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            c
        };
        BlockForm {
            diag_scalars: self
                .diag_scalars
                .iter()
                .zip(&other.diag_scalars)
                .map(|(a, b)| a * b)
                .collect(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| mm(a, b)).collect(),
        }
    }

    /// Expands to a dense block-diagonal matrix.
    pub fn to_matrix(&self) -> RepMatrix {
        let n = self.diag_scalars.len() + 2 * self.blocks.len();
        let mut m = RepMatrix::zeros(n);
        for (i, &v) in self.diag_scalars.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        let off = self.diag_scalars.len();
        for (b, blk) in self.blocks.iter().enumerate() {
            let r = off + 2 * b;
            for i in 0..2 {
                for j in 0..2 {
                    m.data[(r + i) * n + r + j] = blk[i][j];
                }
            }
        }
        m
    }
}

pub fn block_form(u: &NComplex) -> BlockForm {
    let s = Spectrum::of(u);
    BlockForm {
        diag_scalars: s.v_plus().into_iter().chain(s.v_minus()).collect(),
        blocks: s.pairs().iter().map(|&(v, w)| [[v, w], [-w, v]]).collect(),
    }
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// `tol` is the relative size of the last Taylor term kept.
pub fn matrix_exp(m: &RepMatrix, tol: f64) -> Result<RepMatrix> {
    if m.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix entries must be finite"));
    }
    let norm = m.norm_inf();
    if norm > 700.0 * m.n as f64 {
        return Err(Error::Overflow(format!("matrix norm {norm} too large for exp")));
    }
    // Scale so that the kernel argument has norm at most 1/2.
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = m.scale(0.5f64.powi(squarings as i32));
    let mut sum = RepMatrix::identity(m.n);
    let mut term = RepMatrix::identity(m.n);
    let tol = tol.max(f64::EPSILON / 4.0);
    for k in 1..=40 {
        term = term.matmul(&a).scale(1.0 / k as f64);
        sum = sum.add(&term);
        if term.frobenius_norm() <= tol * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    if sum.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow("matrix exponential overflowed".into()));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(variant: Variant, x: &[f64]) -> NComplex {
        NComplex::new(variant, x.to_vec()).unwrap()
    }

    #[test]
    fn two_dimensional_representations() {
        let (a, b) = (2.0, -3.0);
        let m = represent(&num(Variant::Polar, &[a, b]));
        assert_eq!(m, RepMatrix::from_rows(&[vec![a, b], vec![b, a]]).unwrap());
        let m = represent(&num(Variant::Planar, &[a, b]));
        assert_eq!(m, RepMatrix::from_rows(&[vec![a, b], vec![-b, a]]).unwrap());
    }

    #[test]
    fn identity_maps_to_identity() {
        for (variant, n) in [(Variant::Polar, 5), (Variant::Planar, 6)] {
            assert_eq!(represent(&NComplex::one(variant, n).unwrap()), RepMatrix::identity(n));
        }
    }

    #[test]
    fn planar_rows_follow_sign_pattern() {
        let m = represent(&num(Variant::Planar, &[1.0, 2.0, 3.0, 4.0]));
        assert_eq!(m.row(0), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.row(1), &[-4.0, 1.0, 2.0, 3.0]);
        assert_eq!(m.row(3), &[-2.0, -3.0, -4.0, 1.0]);
    }

    #[test]
    fn lu_determinant_small_cases() {
        let m = RepMatrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 1.0]]).unwrap();
        assert_eq!(m.determinant(), -6.0);
        assert_eq!(RepMatrix::identity(4).determinant(), 1.0);
        let sing = RepMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(sing.determinant(), 0.0);
    }

    #[test]
    fn block_form_of_identity() {
        let b = block_form(&NComplex::one(Variant::Polar, 6).unwrap());
        for v in &b.diag_scalars {
            assert!((v - 1.0).abs() < 1e-15);
        }
        for blk in &b.blocks {
            assert!((blk[0][0] - 1.0).abs() < 1e-15 && blk[0][1].abs() < 1e-15);
            assert!(blk[1][0].abs() < 1e-15 && (blk[1][1] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn matrix_exp_basics() {
        let z = matrix_exp(&RepMatrix::zeros(3), 1e-16).unwrap();
        assert_eq!(z, RepMatrix::identity(3));
        let theta = 1.2345;
        let r = matrix_exp(&represent(&num(Variant::Planar, &[0.0, theta])), 1e-16).unwrap();
        let want = RepMatrix::from_rows(&[
            vec![theta.cos(), theta.sin()],
            vec![-theta.sin(), theta.cos()],
        ])
        .unwrap();
        assert!(r.sub(&want).frobenius_norm() < 1e-14);
        let big = RepMatrix::identity(2).scale(1e6);
        assert_eq!(matrix_exp(&big, 1e-16).unwrap_err().name(), "Overflow");
    }

    #[test]
    fn char_poly_vanishes_at_spectral_values() {
        let u = num(Variant::Polar, &[0.3, -1.1, 0.4, 2.0, 0.7]);
        let m = represent(&u);
        let s = Spectrum::of(&u);
        for z in s.values() {
            assert!(m.char_poly_at(z).norm() < 1e-10);
            assert!(m.char_poly_at(z.conj()).norm() < 1e-10);
        }
        assert!(m.char_poly_at(Complex64::new(17.0, 0.0)).norm() > 1.0);
    }
}
