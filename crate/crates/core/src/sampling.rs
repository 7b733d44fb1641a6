//! Seeded random states, observables and unitaries.
//!
//! All randomness flows through [`SampleRng`] (ChaCha20, RFC 7539 block
//! function, as implemented by `rand_chacha`). A run is identified by a
//! `u64` seed; independent work items draw from separate ChaCha streams of
//! the same key so results do not depend on evaluation order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::bundle::{DensityOperator, Spectrum, DEFAULT_DEGENERACY_TOL, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::observables::Observable;

pub type SampleRng = ChaCha20Rng;

/// Spectra with a smallest weight below this are redrawn.
pub const MIN_SAMPLED_WEIGHT: f64 = 1e3 * DEFAULT_RANK_TOL;

/// ChaCha20 keyed by `seed`, positioned on stream `stream`.
pub fn seeded_rng(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian, E|z|² = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed n×n unitary.
///
/// Orthonormalizes a Ginibre matrix column by column with modified
/// Gram–Schmidt (two passes per column). The implied triangular factor has a
/// real positive diagonal, which is the phase convention that makes the
/// Q factor Haar distributed.
pub fn sample_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "sample_unitary needs n >= 1");
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| (0..n).map(|_| complex_gaussian(rng)).collect())
            .collect();
        let mut ok = true;
        for j in 0..n {
            let (done, rest) = cols.split_at_mut(j);
            let v = &mut rest[0];
            for _ in 0..2 {
                for q in done.iter() {
                    let r: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= r * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            // A rank-deficient Gaussian draw has probability zero; redraw if
            // floating point ever produces one.
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
        }
        if ok {
            return ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Block-diagonal Haar unitary in U(σ) = U(m₁) × … × U(m_l).
pub fn sample_gauge_unitary<R: Rng + ?Sized>(spectrum: &Spectrum, rng: &mut R) -> ComplexMatrix {
    let k = spectrum.rank();
    let mut u = ComplexMatrix::zeros(k, k);
    for b in spectrum.blocks() {
        let block = sample_unitary(b.len(), rng);
        for (bi, i) in b.clone().enumerate() {
            for (bj, j) in b.clone().enumerate() {
                u[(i, j)] = block[(bi, bj)];
            }
        }
    }
    u
}

/// ρ = U·diag(σ, 0, …, 0)·U† with Haar U.
pub fn sample_density<R: Rng + ?Sized>(spectrum: &Spectrum, n: usize, rng: &mut R) -> Result<DensityOperator> {
    let k = spectrum.rank();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "spectrum rank {k} exceeds dimension {n}"
        )));
    }
    let u = sample_unitary(n, rng);
    let p = spectrum.eigenvalues();
    let rho = ComplexMatrix::from_fn(n, n, |i, j| (0..k).map(|m| u[(i, m)] * p[m] * u[(j, m)].conj()).sum());
    DensityOperator::new(rho.hermitian_part())
}

/// (M + M†)/2 with M Ginibre.
pub fn sample_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Observable {
    let m = ginibre(n, n, rng);
    Observable::new(m.hermitian_part()).expect("hermitian part is Hermitian")
}

/// Uniform (Dirichlet(1, …, 1)) probabilities of the given rank, sorted.
///
/// Draws whose neighbouring weights fall within the default degeneracy
/// tolerance, or whose smallest weight is below [`MIN_SAMPLED_WEIGHT`], are
/// rejected; the second return value counts rejections.
pub fn sample_spectrum<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> (Spectrum, usize) {
    assert!(rank >= 1, "sample_spectrum needs rank >= 1");
    let mut rejected = 0;
    loop {
        let mut w: Vec<f64> = (0..rank).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        w.sort_by(|a, b| b.total_cmp(a));
        let separated = w.windows(2).all(|p| p[0] - p[1] > DEFAULT_DEGENERACY_TOL * w[0]);
        if separated && w[rank - 1] >= MIN_SAMPLED_WEIGHT {
            if let Ok(s) = Spectrum::new(&w) {
                return (s, rejected);
            }
        }
        rejected += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::spectrum_of;

    #[test]
    fn unitary_examples() {
        let mut rng = seeded_rng(1, 0);
        let u = sample_unitary(1, &mut rng);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
        for n in 2..=8 {
            for _ in 0..5 {
                let u = sample_unitary(n, &mut rng);
                let gram = u.adjoint_mul(&u).unwrap();
                assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-10);
            }
        }
    }

    #[test]
    fn haar_second_moment() {
        // E|U₁₁|² = 1/n
        let mut rng = seeded_rng(2024, 0);
        let n = 4;
        let trials = 10_000;
        let mean = (0..trials)
            .map(|_| sample_unitary(n, &mut rng)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 0.25).abs() < 0.02, "{mean}");
    }

    #[test]
    fn density_examples() {
        let mut rng = seeded_rng(7, 0);
        let pure = sample_density(&Spectrum::new(&[1.0]).unwrap(), 2, &mut rng).unwrap();
        let s = spectrum_of(&pure, 1e-12, 1e-8).unwrap();
        assert_eq!(s.rank(), 1);

        let sigma = Spectrum::new(&[0.75, 0.25]).unwrap();
        let rho = sample_density(&sigma, 2, &mut rng).unwrap();
        let s = spectrum_of(&rho, 1e-12, 1e-8).unwrap();
        assert!((s.eigenvalues()[0] - 0.75).abs() < 1e-12);

        let sigma = Spectrum::new(&[0.5, 0.3, 0.2]).unwrap();
        for _ in 0..20 {
            let rho = sample_density(&sigma, 4, &mut rng).unwrap();
            let s = spectrum_of(&rho, 1e-12, 1e-8).unwrap();
            assert_eq!(s.rank(), 3);
            for (x, y) in s.eigenvalues().iter().zip(sigma.eigenvalues()) {
                assert!((x - y).abs() < 1e-9);
            }
        }

        assert!(sample_density(&sigma, 2, &mut rng).is_err());
    }

    #[test]
    fn hermitian_examples() {
        let mut rng = seeded_rng(8, 0);
        let n = 3;
        let trials = 10_000;
        let mut trace_sum = 0.0;
        for i in 0..trials {
            let h = sample_hermitian(n, &mut rng);
            assert_eq!(h.matrix().hermitian_residual(), 0.0);
            trace_sum += h.matrix().trace().re;
            if i < 100 {
                let d = crate::eigen::hermitian_eig(h.matrix()).unwrap();
                assert!(d.values.iter().all(|v| v.is_finite()));
            }
        }
        let mean = trace_sum / trials as f64;
        assert!(mean.abs() < 0.05 * (2.0 * n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn spectra_are_valid_and_separated() {
        let mut rng = seeded_rng(9, 0);
        for k in 1..=6 {
            for _ in 0..50 {
                let (s, _) = sample_spectrum(k, &mut rng);
                assert_eq!(s.rank(), k);
                assert_eq!(s.multiplicities().len(), k);
                assert!((s.eigenvalues().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gauge_unitaries_commute_with_p() {
        let mut rng = seeded_rng(10, 0);
        let s = Spectrum::new(&[0.3, 0.3, 0.2, 0.2]).unwrap();
        let p = s.p_matrix();
        for _ in 0..10 {
            let u = sample_gauge_unitary(&s, &mut rng);
            assert!((&u * &p).max_abs_diff(&(&p * &u)) <= 1e-15);
            assert!(u.adjoint_mul(&u).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| seeded_rng(42, 3).random()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = seeded_rng(42, 3).random();
        let y: u64 = seeded_rng(42, 4).random();
        assert_ne!(x, y);
    }
}
