//! Expectation functions, Hamiltonian vector fields and the two brackets.
//!
//! For an observable Â the field X_Â(Ψ) = ÂΨ/(iħ) on the lift manifold
//! projects onto the Hamiltonian field of A(ρ) = Tr(Âρ). Its connection form
//! ξ_A carries the part of the field that the quotient forgets; the
//! horizontal remainder defines the Riemannian and Poisson brackets.

use num_complex::Complex64;
use serde::Serialize;

use crate::bundle::{inertia_inner, standard_lift, DensityOperator, GaugeAlgebraElement, Lift, Spectrum};
use crate::error::{Error, Result};
use crate::matrix::{form_omega, metric_g, ComplexMatrix};

const OBSERVABLE_HERMITIAN_TOL: f64 = 1e-12;
const EXPECTATION_IMAG_TOL: f64 = 1e-10;

/// A Hermitian operator on the state space, in physical units.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let residual = matrix.hermitian_residual();
        if residual > OBSERVABLE_HERMITIAN_TOL * matrix.frobenius_norm() {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            matrix: self.matrix.scale_real(c),
        }
    }

    fn check_dimension(&self, n: usize) -> Result<()> {
        if self.dimension() != n {
            return Err(Error::ShapeMismatch {
                op: "observable",
                left: self.matrix.shape(),
                right: (n, n),
            });
        }
        Ok(())
    }
}

/// Riemannian and Poisson brackets of two expectation functions at one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BracketPair {
    /// {A, B}_g
    pub riemann: f64,
    /// {A, B}_ω
    pub poisson: f64,
}

/// A(ρ) = Tr(Âρ)
pub fn expected_value(a: &Observable, rho: &DensityOperator) -> Result<f64> {
    a.check_dimension(rho.dimension())?;
    let z = trace_product(a.matrix(), rho.matrix());
    if z.im.abs() > EXPECTATION_IMAG_TOL * a.matrix().frobenius_norm().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "expectation has imaginary residue {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Tr(AB) without forming the product.
pub(crate) fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// X_Â(Ψ) = ÂΨ/(iħ)
pub fn ham_field(a: &Observable, lift: &Lift) -> Result<ComplexMatrix> {
    a.check_dimension(lift.dimension())?;
    let inv_ihbar = Complex64::new(0.0, -1.0 / lift.hbar());
    Ok((a.matrix() * lift.psi()).scale(inv_ihbar))
}

/// ξ_A at Ψ: the connection form of the Hamiltonian field.
pub fn xi_field(a: &Observable, lift: &Lift) -> Result<GaugeAlgebraElement> {
    lift.connection_form(&ham_field(a, lift)?)
}

/// χ = 1_k / (i√(2ħ)), the unit-norm generator of the central u(1).
pub fn chi_element(k: usize, hbar: f64) -> GaugeAlgebraElement {
    let c = Complex64::new(0.0, -1.0 / (2.0 * hbar).sqrt());
    GaugeAlgebraElement::from_trusted(ComplexMatrix::identity(k).scale(c))
}

/// ξ − (χ·ξ)χ, the part of ξ orthogonal to χ.
pub fn xi_perp(xi: &GaugeAlgebraElement, spectrum: &Spectrum, hbar: f64) -> Result<GaugeAlgebraElement> {
    let chi = chi_element(spectrum.rank(), hbar);
    let along = inertia_inner(&chi, xi, spectrum, hbar)?;
    Ok(xi.sub(&chi.scaled(along)))
}

/// Everything the pair quantities need about one observable at one lift.
#[derive(Clone, Debug)]
pub struct FieldGeometry {
    pub field: ComplexMatrix,
    pub horizontal: ComplexMatrix,
    pub xi: GaugeAlgebraElement,
    pub xi_perp: GaugeAlgebraElement,
}

impl FieldGeometry {
    pub fn at(a: &Observable, lift: &Lift) -> Result<Self> {
        let field = ham_field(a, lift)?;
        let xi = lift.connection_form(&field)?;
        let vertical = lift.generator(&xi)?;
        let horizontal = &field - &vertical;
        let xi_perp = xi_perp(&xi, lift.spectrum(), lift.hbar())?;
        Ok(Self {
            field,
            horizontal,
            xi,
            xi_perp,
        })
    }

    pub fn brackets_with(&self, other: &Self, hbar: f64) -> Result<BracketPair> {
        Ok(BracketPair {
            riemann: metric_g(&self.horizontal, &other.horizontal, hbar)?,
            poisson: form_omega(&self.horizontal, &other.horizontal, hbar)?,
        })
    }
}

/// Brackets evaluated through horizontal lifts at the given Ψ.
pub fn brackets_at(a: &Observable, b: &Observable, lift: &Lift) -> Result<BracketPair> {
    let fa = FieldGeometry::at(a, lift)?;
    let fb = FieldGeometry::at(b, lift)?;
    fa.brackets_with(&fb, lift.hbar())
}

/// Brackets at ρ, evaluated through its standard lift.
pub fn brackets(a: &Observable, b: &Observable, rho: &DensityOperator, hbar: f64) -> Result<BracketPair> {
    a.check_dimension(rho.dimension())?;
    b.check_dimension(rho.dimension())?;
    brackets_at(a, b, &standard_lift(rho, hbar)?)
}

/// (ħ/2)({A,B}_g + ξ_A⊥·ξ_B⊥) at the given lift.
pub fn sym_covariance_at(a: &Observable, b: &Observable, lift: &Lift) -> Result<f64> {
    let fa = FieldGeometry::at(a, lift)?;
    let fb = FieldGeometry::at(b, lift)?;
    let hbar = lift.hbar();
    let br = fa.brackets_with(&fb, hbar)?;
    let perp = inertia_inner(&fa.xi_perp, &fb.xi_perp, lift.spectrum(), hbar)?;
    Ok(0.5 * hbar * (br.riemann + perp))
}

/// Symmetrized covariance (A,B) − AB, computed from the geometry.
pub fn sym_covariance(a: &Observable, b: &Observable, rho: &DensityOperator, hbar: f64) -> Result<f64> {
    a.check_dimension(rho.dimension())?;
    b.check_dimension(rho.dimension())?;
    sym_covariance_at(a, b, &standard_lift(rho, hbar)?)
}
