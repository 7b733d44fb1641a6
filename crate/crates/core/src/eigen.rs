//! Cyclic Jacobi diagonalization of complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

/// Sweeps allowed before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Input Hermiticity tolerance, relative to ‖H‖_F.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Target for the off-diagonal Frobenius norm, relative to ‖H‖_F.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

const PHASE_FIX_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, matching `values`.
    pub vectors: ComplexMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiStats {
    pub sweeps: usize,
    pub rotations: usize,
    /// Off-diagonal Frobenius norm of the rotated matrix at exit.
    pub off_diagonal: f64,
    /// ‖H‖_F of the symmetrized input.
    pub norm: f64,
}

impl EigenDecomposition {
    /// V · diag(values) · V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        let scaled = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * self.values[j]);
        &scaled * &v.adjoint()
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with_stats(h).map(|(d, _)| d)
}

/// Diagonalizes `h` with row-cyclic Jacobi sweeps.
///
/// Eigenvalues come back in descending order. Each eigenvector is rephased so
/// that its first component of modulus above 1e-12 is real and positive;
/// equal eigenvalues keep their original column order.
pub fn hermitian_eig_with_stats(h: &ComplexMatrix) -> Result<(EigenDecomposition, JacobiStats)> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let n = h.rows();
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL * h.frobenius_norm() {
        return Err(Error::NotHermitian { residual });
    }

    let mut a = h.hermitian_part();
    let norm = a.frobenius_norm();
    let mut v = ComplexMatrix::identity(n);
    let mut stats = JacobiStats {
        sweeps: 0,
        rotations: 0,
        off_diagonal: off_norm(&a),
        norm,
    };

    while stats.off_diagonal > OFF_DIAGONAL_TOL * norm {
        if stats.sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        stats.sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == ZERO {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let mag = apq.norm();
                // Late in the iteration an element below the diagonals' ulp is
                // just noise; drop it.
                if stats.sweeps > 4 && app.abs() + 100.0 * mag == app.abs() && aqq.abs() + 100.0 * mag == aqq.abs() {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                rotate(&mut a, &mut v, p, q, app, aqq, apq);
                stats.rotations += 1;
            }
        }
        stats.off_diagonal = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable: ties keep their original column order.
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));

    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let phase = col
            .iter()
            .find(|z| z.norm() > PHASE_FIX_THRESHOLD)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(Complex64::new(1.0, 0.0));
        for (i, z) in col.into_iter().enumerate() {
            vectors[(i, dst)] = z * phase;
        }
    }

    Ok((EigenDecomposition { values, vectors }, stats))
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// The rotation is V = D·R where D = diag(1, e^{-iφ}) on (p, q) makes the
/// pivot real (φ = arg a_pq) and R is the classical real Jacobi rotation of
/// the resulting real symmetric 2×2 block. A ← V†AV, vectors ← vectors·V.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, app: f64, aqq: f64, apq: Complex64) {
    let n = a.rows();
    let mag = apq.norm();
    let phase = apq.conj() / mag; // e^{-iφ}

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let vpp = Complex64::new(c, 0.0);
    let vpq = Complex64::new(s, 0.0);
    let vqp = phase * (-s);
    let vqq = phase * c;

    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * vpp + arq * vqp;
        a[(r, q)] = arp * vpq + arq * vqq;

        let wrp = v[(r, p)];
        let wrq = v[(r, q)];
        v[(r, p)] = wrp * vpp + wrq * vqp;
        v[(r, q)] = wrp * vpq + wrq * vqq;
    }
    for r in 0..n {
        let apr = a[(p, r)];
        let aqr = a[(q, r)];
        a[(p, r)] = vpp.conj() * apr + vqp.conj() * aqr;
        a[(q, r)] = vpq.conj() * apr + vqq.conj() * aqr;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
