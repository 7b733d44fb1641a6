//! Dense row-major complex matrices and the bilinear forms on them.
//!
//! Everything here is sized for desk-scale problems (n up to ~100), so the
//! storage is a plain `Vec<Complex64>` and products are the textbook triple
//! loop. The arithmetic operators panic on shape mismatch, like `ndarray`;
//! the named operations (`hs_inner`, `metric_g`, ...) return `Result`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidLength {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::InvalidLength {
                expected: m,
                actual: bad.len(),
            });
        }
        Self::new(n, m, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Builds a real matrix from row-major `f64` entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = other.row(k);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    /// `self† · other` without materialising the adjoint.
    pub fn adjoint_mul(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch {
                op: "adjoint_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_fn(self.cols, other.cols, |i, j| {
            (0..self.rows).map(|k| self[(k, i)].conj() * other[(k, j)]).sum()
        }))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖A − A†‖_F; zero for Hermitian matrices. Panics if not square.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square(), "hermitian_residual on non-square matrix");
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// ‖A + A†‖_F; zero for anti-Hermitian matrices. Panics if not square.
    pub fn anti_hermitian_residual(&self) -> f64 {
        assert!(self.is_square(), "anti_hermitian_residual on non-square matrix");
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] + self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square(), "hermitian_part on non-square matrix");
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Largest entrywise distance, for exact-shape comparisons in checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape() && self.max_abs_diff(other) <= tol
    }

    /// Frobenius norm of the difference.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "distance shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for (j, z) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(
                    self.shape(),
                    rhs.shape(),
                    concat!(stringify!($method), ": shape mismatch")
                );
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }

        impl $trait for ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Complex64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

fn same_shape(op: &'static str, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            op,
            left: x.shape(),
            right: y.shape(),
        });
    }
    Ok(())
}

fn same_square(op: &'static str, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    same_shape(op, a, b)?;
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    Ok(())
}

/// Hilbert–Schmidt product Tr(X†Y).
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
    same_shape("hs_inner", x, y)?;
    Ok(x.data.iter().zip(&y.data).map(|(a, b)| a.conj() * b).sum())
}

/// Riemannian metric G(X, Y) = ħ Tr(X†Y + Y†X) = 2ħ Re Tr(X†Y).
pub fn metric_g(x: &ComplexMatrix, y: &ComplexMatrix, hbar: f64) -> Result<f64> {
    Ok(2.0 * hbar * hs_inner(x, y)?.re)
}

/// Symplectic form Ω(X, Y) = −iħ Tr(X†Y − Y†X) = 2ħ Im Tr(X†Y).
pub fn form_omega(x: &ComplexMatrix, y: &ComplexMatrix, hbar: f64) -> Result<f64> {
    Ok(2.0 * hbar * hs_inner(x, y)?.im)
}

/// AB − BA
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    same_square("commutator", a, b)?;
    Ok(&(a * b) - &(b * a))
}

/// AB + BA
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    same_square("anticommutator", a, b)?;
    Ok(&(a * b) + &(b * a))
}

/// The three Pauli matrices.
pub fn pauli() -> [ComplexMatrix; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, c(-1.0, 0.0)]]).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hs_inner_examples() {
        let [sx, sy, _] = pauli();
        let id = ComplexMatrix::identity(2);
        assert_eq!(hs_inner(&id, &id).unwrap(), c(2.0, 0.0));
        assert_eq!(hs_inner(&sx, &sy).unwrap(), ZERO);
        let isx = sx.scale(I);
        assert_eq!(hs_inner(&sx, &isx).unwrap(), c(0.0, 2.0));
    }

    #[test]
    fn metric_and_form_examples() {
        let [sx, sy, _] = pauli();
        let zero = ComplexMatrix::zeros(2, 2);
        assert_eq!(metric_g(&zero, &sy, 1.0).unwrap(), 0.0);
        assert_eq!(metric_g(&sx, &sy, 1.0).unwrap(), 0.0);
        assert_eq!(form_omega(&sx, &sx, 1.0).unwrap(), 0.0);
        assert_eq!(form_omega(&sx, &sx.scale(I), 1.0).unwrap(), 4.0);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = ComplexMatrix::zeros(2, 2);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hs_inner(&a, &b), Err(Error::ShapeMismatch { .. })));
        assert!(metric_g(&a, &b, 1.0).is_err());
        assert!(form_omega(&a, &b, 1.0).is_err());
        assert!(commutator(&a, &b).is_err());
        assert!(matches!(anticommutator(&b, &b), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ZERO; 3]),
            Err(Error::InvalidLength { expected: 4, actual: 3 })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![ZERO, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn pauli_algebra() {
        let [sx, sy, sz] = pauli();
        let comm = commutator(&sx, &sy).unwrap();
        assert!(comm.approx_eq(&sz.scale(c(0.0, 2.0)), 0.0));
        let anti = anticommutator(&sx, &sy).unwrap();
        assert!(anti.approx_eq(&ComplexMatrix::zeros(2, 2), 0.0));
        let self_comm = commutator(&sz, &sz).unwrap();
        assert_eq!(self_comm.frobenius_norm(), 0.0);
    }

    #[test]
    fn adjoint_mul_matches_explicit_product() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let b = ComplexMatrix::from_fn(3, 4, |i, j| c((i * j) as f64, 1.0 / (1 + i + j) as f64));
        let expected = &a.adjoint() * &b;
        assert!(a.adjoint_mul(&b).unwrap().approx_eq(&expected, 1e-15));
    }

    fn arb_pair() -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix, f64)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, k)| {
            let n = 2 * r * k;
            (
                proptest::collection::vec(-3.0f64..3.0, n),
                proptest::collection::vec(-3.0f64..3.0, n),
                0.1f64..4.0,
            )
                .prop_map(move |(u, v, hbar)| {
                    let build =
                        |w: &[f64]| ComplexMatrix::new(r, k, w.chunks(2).map(|p| c(p[0], p[1])).collect()).unwrap();
                    (build(&u), build(&v), hbar)
                })
        })
    }

    proptest! {
        #[test]
        fn polar_identity((x, y, hbar) in arb_pair()) {
            let g = metric_g(&x, &y, hbar).unwrap();
            let w = form_omega(&x, &y, hbar).unwrap();
            let h = hs_inner(&x, &y).unwrap().norm_sqr();
            let scale = 4.0 * hbar * hbar * (x.frobenius_norm() * y.frobenius_norm()).powi(2);
            prop_assert!((g * g + w * w - 4.0 * hbar * hbar * h).abs() <= 1e-12 * scale.max(1e-300));
        }

        #[test]
        fn g_symmetric_omega_antisymmetric((x, y, hbar) in arb_pair()) {
            let gxy = metric_g(&x, &y, hbar).unwrap();
            let gyx = metric_g(&y, &x, hbar).unwrap();
            let wxy = form_omega(&x, &y, hbar).unwrap();
            let wyx = form_omega(&y, &x, hbar).unwrap();
            prop_assert!((gxy - gyx).abs() <= 1e-12 * (1.0 + gxy.abs()));
            prop_assert!((wxy + wyx).abs() <= 1e-12 * (1.0 + wxy.abs()));
        }
    }
}
