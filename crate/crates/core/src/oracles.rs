//! Reference computations that share no code path with the main routines.
//!
//! These exist so that tests and the `verify` battery can compare the
//! production implementation against something computed a different way.
//! They are slow and only meant for small matrices.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;

/// Number of eigenvalues of Hermitian `h` strictly below `lambda`.
///
/// Runs Gaussian elimination without pivoting on H − λI. The pivots are
/// ratios of consecutive leading principal minors, i.e. of the characteristic
/// polynomials of the leading submatrices, so counting negative pivots is the
/// Sturm sign-change count (Sylvester's law of inertia).
pub fn count_eigenvalues_below(h: &ComplexMatrix, lambda: f64) -> usize {
    let n = h.rows();
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
                    if i == j {
                        z - lambda
                    } else {
                        z
                    }
                })
                .collect()
        })
        .collect();
    let tiny = f64::EPSILON * (1.0 + h.frobenius_norm() + lambda.abs()) * 1e-3;
    let mut negatives = 0;
    for k in 0..n {
        let mut pivot = m[k][k].re;
        if pivot.abs() < tiny {
            // Exact zero pivot: nudge, equivalent to evaluating at λ + ε.
            pivot = -tiny;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let factor = row[k] / pivot;
            for (x, p) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                *x -= factor * p;
            }
        }
    }
    negatives
}

/// All eigenvalues of Hermitian `h`, descending, each bracketed by bisection
/// on the inertia count to absolute width `tol`.
pub fn hermitian_eigenvalues_by_bisection(h: &ComplexMatrix, tol: f64) -> Vec<f64> {
    let n = h.rows();
    // Gershgorin disc bound.
    let radius = (0..n)
        .map(|i| (0..n).map(|j| h[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let mut out = Vec::with_capacity(n);
    // The j-th smallest eigenvalue is the smallest λ with count(λ) > j.
    for j in 0..n {
        let (mut lo, mut hi) = (-radius, radius);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if count_eigenvalues_below(h, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out.reverse();
    out
}

/// Tr(M)
pub fn trace(m: &ComplexMatrix) -> Complex64 {
    (0..m.rows()).map(|i| m[(i, i)]).sum()
}

/// Tr(A·ρ), written as an explicit double sum.
pub fn expectation(a: &ComplexMatrix, rho: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * rho[(k, i)];
        }
    }
    acc
}

/// ½Tr((AB + BA)ρ) − Tr(Aρ)Tr(Bρ)
pub fn symmetrized_covariance(a: &ComplexMatrix, b: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    let ab = a * b;
    let ba = b * a;
    0.5 * (expectation(&ab, rho) + expectation(&ba, rho)).re - expectation(a, rho).re * expectation(b, rho).re
}

/// Tr([A, B]ρ); purely imaginary for Hermitian A, B.
pub fn commutator_expectation(a: &ComplexMatrix, b: &ComplexMatrix, rho: &ComplexMatrix) -> Complex64 {
    expectation(&(a * b), rho) - expectation(&(b * a), rho)
}
