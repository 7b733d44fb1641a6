//! The purification bundle over an isospectral orbit of density operators.
//!
//! A lift Ψ is an n×k matrix with Ψ†Ψ = P(σ); it projects to ρ = ΨΨ†. The
//! gauge group U(σ) (unitaries commuting with P(σ)) acts on the right without
//! moving ρ. The mechanical connection splits every tangent vector at Ψ into
//! a vertical part Ψξ, ξ ∈ u(σ), and a G-orthogonal horizontal remainder.

use std::ops::Range;

use num_complex::Complex64;

use crate::eigen::{hermitian_eig, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{metric_g, ComplexMatrix};

/// Relative cut below which eigenvalues of ρ are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;
/// Relative (to p₁) gap at or below which neighbouring eigenvalues merge.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

const SPECTRUM_SUM_TOL: f64 = 1e-10;
const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
const DENSITY_TRACE_TOL: f64 = 1e-10;
const DENSITY_MIN_EIGENVALUE: f64 = -1e-10;
const LIFT_TOL: f64 = 1e-10;
const GAUGE_TOL: f64 = 1e-10;
const ALGEBRA_ANTI_HERMITIAN_TOL: f64 = 1e-12;
const ALGEBRA_BLOCK_TOL: f64 = 1e-10;
/// Tangency residuals above this (relative) are errors.
const TANGENCY_ERROR_TOL: f64 = 1e-6;
/// Tangency residuals above this (relative) are logged.
const TANGENCY_WARN_TOL: f64 = 1e-9;

/// Decreasing positive eigenvalues of a density operator, grouped by
/// (tolerance-controlled) degeneracy.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    degeneracy_tolerance: f64,
}

impl Spectrum {
    /// Spectrum from explicit probabilities using the default degeneracy
    /// tolerance.
    pub fn new(values: &[f64]) -> Result<Self> {
        Self::with_tolerance(values, DEFAULT_DEGENERACY_TOL)
    }

    /// `values` must be positive, non-increasing and sum to one. Neighbours
    /// closer than `deg_tol · p₁` are merged and replaced by their mean.
    pub fn with_tolerance(values: &[f64], deg_tol: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty".into()));
        }
        if !(deg_tol.is_finite() && deg_tol >= 0.0) {
            return Err(Error::InvalidSpectrum(format!("bad degeneracy tolerance {deg_tol}")));
        }
        if let Some(p) = values.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidSpectrum(format!("eigenvalue {p} is not positive")));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidSpectrum("eigenvalues are not non-increasing".into()));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::InvalidSpectrum(format!("eigenvalues sum to {sum}, not 1")));
        }
        Ok(Self::grouped(values, deg_tol * values[0]))
    }

    fn grouped(sorted: &[f64], abs_tol: f64) -> Self {
        let mut clusters: Vec<Vec<f64>> = vec![vec![sorted[0]]];
        for w in sorted.windows(2) {
            if w[0] - w[1] <= abs_tol {
                clusters.last_mut().unwrap().push(w[1]);
            } else {
                clusters.push(vec![w[1]]);
            }
        }
        let mut eigenvalues = Vec::with_capacity(sorted.len());
        let mut multiplicities = Vec::with_capacity(clusters.len());
        for c in &clusters {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            eigenvalues.extend(std::iter::repeat_n(mean, c.len()));
            multiplicities.push(c.len());
        }
        Self {
            eigenvalues,
            multiplicities,
            degeneracy_tolerance: abs_tol,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Absolute grouping threshold that was applied.
    pub fn degeneracy_tolerance(&self) -> f64 {
        self.degeneracy_tolerance
    }

    /// k, the number of positive eigenvalues counted with multiplicity.
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.multiplicities.iter().any(|&m| m > 1)
    }

    /// Index ranges of the multiplicity blocks.
    pub fn blocks(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.multiplicities
            .iter()
            .map(|&m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }

    /// The diagonal k×k matrix P(σ).
    pub fn p_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&self.eigenvalues)
    }

    pub fn block_projectors(&self) -> BlockProjectors {
        let k = self.rank();
        let projectors = self
            .blocks()
            .into_iter()
            .map(|b| {
                let diag: Vec<f64> = (0..k).map(|i| if b.contains(&i) { 1.0 } else { 0.0 }).collect();
                ComplexMatrix::from_real_diag(&diag)
            })
            .collect();
        BlockProjectors { projectors }
    }

    /// Block-diagonal part Σ_j E_j M E_j of a k×k matrix.
    pub fn block_diagonal_part(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let k = self.rank();
        let mut out = ComplexMatrix::zeros(k, k);
        for b in self.blocks() {
            for i in b.clone() {
                for j in b.clone() {
                    out[(i, j)] = m[(i, j)];
                }
            }
        }
        out
    }

    /// Frobenius norm of the entries of `m` outside the diagonal blocks.
    pub fn off_block_norm(&self, m: &ComplexMatrix) -> f64 {
        m.distance(&self.block_diagonal_part(m))
    }

    fn check_square(&self, op: &'static str, m: &ComplexMatrix) -> Result<()> {
        let k = self.rank();
        if m.shape() != (k, k) {
            return Err(Error::ShapeMismatch {
                op,
                left: m.shape(),
                right: (k, k),
            });
        }
        Ok(())
    }
}

/// The diagonal 0/1 projectors E_j onto the multiplicity blocks.
#[derive(Clone, Debug)]
pub struct BlockProjectors {
    pub projectors: Vec<ComplexMatrix>,
}

impl BlockProjectors {
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.projectors.iter()
    }
}

/// A Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let residual = matrix.hermitian_residual();
        if residual > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (residual {residual:e})")));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace is {trace}, not 1")));
        }
        let matrix = matrix.hermitian_part();
        let eig = hermitian_eig(&matrix)?;
        let min = *eig.values.last().unwrap();
        if min < DENSITY_MIN_EIGENVALUE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(Self { matrix })
    }

    /// Diagonal density operator diag(p).
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(p))
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }
}

pub fn spectrum_of(rho: &DensityOperator, rank_tol: f64, deg_tol: f64) -> Result<Spectrum> {
    spectral_frame(rho, rank_tol, deg_tol).map(|(s, _)| s)
}

/// Spectrum together with the eigen decomposition it was read from.
fn spectral_frame(rho: &DensityOperator, rank_tol: f64, deg_tol: f64) -> Result<(Spectrum, EigenDecomposition)> {
    let eig = hermitian_eig(rho.matrix())?;
    let cut = rank_tol * rho.matrix().trace().re;
    let kept: Vec<f64> = eig
        .values
        .iter()
        .copied()
        .take_while(|&p| p >= cut && p > 0.0)
        .collect();
    if kept.is_empty() {
        return Err(Error::ZeroRank);
    }
    Ok((Spectrum::grouped(&kept, deg_tol * kept[0]), eig))
}

/// Σ_j E_j ξ E_j = ξ and ξ† = −ξ, checked against a spectrum on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeAlgebraElement {
    xi: ComplexMatrix,
}

impl GaugeAlgebraElement {
    pub fn new(xi: ComplexMatrix, spectrum: &Spectrum) -> Result<Self> {
        spectrum.check_square("gauge algebra element", &xi)?;
        let scale = xi.frobenius_norm().max(1.0);
        let ah = xi.anti_hermitian_residual();
        if ah > ALGEBRA_ANTI_HERMITIAN_TOL * scale {
            return Err(Error::NotInGaugeAlgebra(format!(
                "not anti-Hermitian (residual {ah:e})"
            )));
        }
        let off = spectrum.off_block_norm(&xi);
        if off > ALGEBRA_BLOCK_TOL * scale {
            return Err(Error::NotInGaugeAlgebra(format!(
                "does not commute with P(sigma) (off-block norm {off:e})"
            )));
        }
        Ok(Self { xi })
    }

    pub fn zero(k: usize) -> Self {
        Self {
            xi: ComplexMatrix::zeros(k, k),
        }
    }

    pub(crate) fn from_trusted(xi: ComplexMatrix) -> Self {
        Self { xi }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.xi
    }

    pub fn dimension(&self) -> usize {
        self.xi.rows()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            xi: self.xi.scale_real(c),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            xi: &self.xi - &other.xi,
        }
    }
}

/// ξ·η = ħ Tr((ξ†η + η†ξ) P(σ)), the metric induced on u(σ) by the moment of
/// inertia; equals G(Ψξ, Ψη) at every lift Ψ with this spectrum.
pub fn inertia_inner(
    xi: &GaugeAlgebraElement,
    eta: &GaugeAlgebraElement,
    spectrum: &Spectrum,
    hbar: f64,
) -> Result<f64> {
    spectrum.check_square("inertia_inner", xi.matrix())?;
    spectrum.check_square("inertia_inner", eta.matrix())?;
    let (x, y) = (xi.matrix(), eta.matrix());
    let p = spectrum.eigenvalues();
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        // (ξ†η)_ii = Σ_j conj(ξ_ji) η_ji
        let diag: Complex64 = (0..p.len()).map(|j| x[(j, i)].conj() * y[(j, i)]).sum();
        acc += pi * diag.re;
    }
    Ok(2.0 * hbar * acc)
}

/// Vertical and horizontal parts of a tangent vector.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub vertical: ComplexMatrix,
    pub horizontal: ComplexMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Zero,
    Vertical,
    Horizontal,
    Mixed,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Zero => "zero",
            Direction::Vertical => "vertical",
            Direction::Horizontal => "horizontal",
            Direction::Mixed => "mixed",
        }
    }
}

impl Splitting {
    /// Vertical if the horizontal part is negligible relative to the whole,
    /// horizontal if the vertical part is.
    pub fn classify(&self, tol: f64) -> Direction {
        let v = self.vertical.frobenius_norm();
        let h = self.horizontal.frobenius_norm();
        let total = (v * v + h * h).sqrt();
        if total == 0.0 {
            Direction::Zero
        } else if h <= tol * total {
            Direction::Vertical
        } else if v <= tol * total {
            Direction::Horizontal
        } else {
            Direction::Mixed
        }
    }
}

/// A point Ψ of S(σ) = {Ψ : Ψ†Ψ = P(σ)}.
#[derive(Clone, Debug)]
pub struct Lift {
    psi: ComplexMatrix,
    spectrum: Spectrum,
    hbar: f64,
}

impl Lift {
    pub fn new(psi: ComplexMatrix, spectrum: Spectrum, hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        let k = spectrum.rank();
        if psi.cols() != k || psi.rows() < k {
            return Err(Error::InvalidLift(format!(
                "psi is {}x{}, spectrum has rank {k}",
                psi.rows(),
                psi.cols()
            )));
        }
        let gram = psi.adjoint_mul(&psi)?;
        let residual = gram.max_abs_diff(&spectrum.p_matrix());
        if residual > LIFT_TOL {
            return Err(Error::InvalidLift(format!(
                "psi^dagger psi differs from P(sigma) by {residual:e}"
            )));
        }
        Ok(Self { psi, spectrum, hbar })
    }

    pub fn psi(&self) -> &ComplexMatrix {
        &self.psi
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// n, the Hilbert space dimension.
    pub fn dimension(&self) -> usize {
        self.psi.rows()
    }

    pub fn rank(&self) -> usize {
        self.psi.cols()
    }

    /// π(Ψ) = ΨΨ†
    pub fn project(&self) -> DensityOperator {
        DensityOperator::from_trusted(&self.psi * &self.psi.adjoint())
    }

    /// Right action Ψ ↦ ΨU of U ∈ U(σ).
    pub fn gauge_transform(&self, u: &ComplexMatrix) -> Result<Lift> {
        self.spectrum.check_square("gauge_transform", u)?;
        let k = self.rank();
        let unitarity = u.adjoint_mul(u)?.max_abs_diff(&ComplexMatrix::identity(k));
        if unitarity > GAUGE_TOL {
            return Err(Error::NotUnitary { residual: unitarity });
        }
        let p = self.spectrum.p_matrix();
        let commute = (u * &p).max_abs_diff(&(&p * u));
        if commute > GAUGE_TOL {
            return Err(Error::NotInGaugeGroup { residual: commute });
        }
        Ok(Lift {
            psi: &self.psi * u,
            spectrum: self.spectrum.clone(),
            hbar: self.hbar,
        })
    }

    /// The infinitesimal generator ξ ↦ Ψξ.
    pub fn generator(&self, xi: &GaugeAlgebraElement) -> Result<ComplexMatrix> {
        self.spectrum.check_square("generator", xi.matrix())?;
        Ok(&self.psi * xi.matrix())
    }

    fn check_tangent_shape(&self, op: &'static str, x: &ComplexMatrix) -> Result<()> {
        if x.shape() != self.psi.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: x.shape(),
                right: self.psi.shape(),
            });
        }
        Ok(())
    }

    /// ‖Ψ†X + X†Ψ‖_F / (‖Ψ‖_F ‖X‖_F); zero exactly for tangent X.
    pub fn tangency_residual(&self, x: &ComplexMatrix) -> Result<f64> {
        self.check_tangent_shape("tangency_residual", x)?;
        let scale = self.psi.frobenius_norm() * x.frobenius_norm();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let m = self.psi.adjoint_mul(x)?;
        Ok(m.anti_hermitian_residual() / scale)
    }

    /// A_Ψ(X) = Σ_j E_j Ψ†X E_j P(σ)⁻¹.
    pub fn connection_form(&self, x: &ComplexMatrix) -> Result<GaugeAlgebraElement> {
        let residual = self.tangency_residual(x)?;
        if residual > TANGENCY_ERROR_TOL {
            return Err(Error::NotTangent { residual });
        }
        if residual > TANGENCY_WARN_TOL {
            log::warn!("connection_form: tangency residual {residual:e} above {TANGENCY_WARN_TOL:e}");
        }
        let m = self.psi.adjoint_mul(x)?;
        let p = self.spectrum.eigenvalues();
        let k = self.rank();
        let mut out = ComplexMatrix::zeros(k, k);
        for b in self.spectrum.blocks() {
            // P(σ) is the scalar p_j on block j
            let inv = 1.0 / p[b.start];
            for i in b.clone() {
                for j in b.clone() {
                    out[(i, j)] = m[(i, j)] * inv;
                }
            }
        }
        Ok(GaugeAlgebraElement::from_trusted(out))
    }

    /// X = ΨA_Ψ(X) + (X − ΨA_Ψ(X)).
    pub fn split(&self, x: &ComplexMatrix) -> Result<Splitting> {
        let a = self.connection_form(x)?;
        let vertical = &self.psi * a.matrix();
        let horizontal = x - &vertical;
        Ok(Splitting { vertical, horizontal })
    }

    /// J_Ψ(X)·ξ = G(X, Ψξ)
    pub fn moment_pairing(&self, x: &ComplexMatrix, xi: &GaugeAlgebraElement) -> Result<f64> {
        self.check_tangent_shape("moment_pairing", x)?;
        let v = self.generator(xi)?;
        metric_g(x, &v, self.hbar)
    }

    /// I_Ψξ·η = G(Ψξ, Ψη), evaluated through the lift.
    pub fn inertia_at(&self, xi: &GaugeAlgebraElement, eta: &GaugeAlgebraElement) -> Result<f64> {
        metric_g(&self.generator(xi)?, &self.generator(eta)?, self.hbar)
    }
}

/// Ψ = V·diag(√p) from the eigenvectors of ρ belonging to its positive
/// eigenvalues.
pub fn standard_lift(rho: &DensityOperator, hbar: f64) -> Result<Lift> {
    standard_lift_with(rho, hbar, DEFAULT_RANK_TOL, DEFAULT_DEGENERACY_TOL)
}

pub fn standard_lift_with(rho: &DensityOperator, hbar: f64, rank_tol: f64, deg_tol: f64) -> Result<Lift> {
    let (spectrum, eig) = spectral_frame(rho, rank_tol, deg_tol)?;
    let n = rho.dimension();
    let k = spectrum.rank();
    let roots: Vec<f64> = spectrum.eigenvalues().iter().map(|p| p.sqrt()).collect();
    let psi = ComplexMatrix::from_fn(n, k, |i, j| eig.vectors[(i, j)] * roots[j]);
    Lift::new(psi, spectrum, hbar)
}

/// Anti-Hermitian, block-diagonal projection of an arbitrary k×k matrix.
pub fn project_to_algebra(m: &ComplexMatrix, spectrum: &Spectrum) -> Result<GaugeAlgebraElement> {
    spectrum.check_square("project_to_algebra", m)?;
    let anti = (m - &m.adjoint()).scale_real(0.5);
    Ok(GaugeAlgebraElement::from_trusted(spectrum.block_diagonal_part(&anti)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{form_omega, pauli, I, ZERO};
    use crate::sampling::{sample_density, sample_gauge_unitary, sample_hermitian, seeded_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sx_field(p: &[f64]) -> ComplexMatrix {
        // (1/2i)[[0, √p₂], [√p₁, 0]]
        let half_over_i = c(0.0, -0.5);
        ComplexMatrix::from_rows(&[
            vec![ZERO, half_over_i * p[1].sqrt()],
            vec![half_over_i * p[0].sqrt(), ZERO],
        ])
        .unwrap()
    }

    #[test]
    fn spectrum_of_examples() {
        let s = spectrum_of(&DensityOperator::diagonal(&[0.75, 0.25]).unwrap(), 1e-12, 1e-8).unwrap();
        assert_eq!(s.eigenvalues(), &[0.75, 0.25]);
        assert_eq!(s.multiplicities(), &[1, 1]);

        let s = spectrum_of(&DensityOperator::diagonal(&[0.5, 0.5]).unwrap(), 1e-12, 1e-8).unwrap();
        assert_eq!(s.eigenvalues(), &[0.5, 0.5]);
        assert_eq!(s.multiplicities(), &[2]);

        let s = spectrum_of(&DensityOperator::diagonal(&[0.6, 0.4, 0.0]).unwrap(), 1e-12, 1e-8).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.eigenvalues(), &[0.6, 0.4]);
    }

    #[test]
    fn near_degenerate_eigenvalues_merge_to_their_mean() {
        let s = Spectrum::new(&[0.5 + 1e-12, 0.5 - 1e-12]).unwrap();
        assert_eq!(s.multiplicities(), &[2]);
        assert!((s.eigenvalues()[0] - 0.5).abs() < 1e-16);
        let s = Spectrum::new(&[0.5 + 1e-7, 0.5 - 1e-7]).unwrap();
        assert_eq!(s.multiplicities(), &[1, 1]);
    }

    #[test]
    fn spectrum_validation() {
        assert!(Spectrum::new(&[]).is_err());
        assert!(Spectrum::new(&[0.25, 0.75]).is_err());
        assert!(Spectrum::new(&[0.5, 0.4]).is_err());
        assert!(Spectrum::new(&[1.0, 0.0]).is_err());
        let s = Spectrum::new(&[0.4, 0.3, 0.3]).unwrap();
        assert_eq!(s.blocks(), vec![0..1, 1..3]);
        let e = s.block_projectors();
        assert_eq!(e.len(), 2);
        let sum = &e.projectors[0] + &e.projectors[1];
        assert!(sum.approx_eq(&ComplexMatrix::identity(3), 0.0));
        for ej in e.iter() {
            assert!((ej * ej).approx_eq(ej, 0.0));
        }
    }

    #[test]
    fn zero_operator_has_no_spectrum() {
        let rho = DensityOperator::from_trusted(ComplexMatrix::zeros(2, 2));
        assert_eq!(spectrum_of(&rho, 1e-12, 1e-8), Err(Error::ZeroRank));
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityOperator::diagonal(&[1.2, -0.2]).is_err());
        let mut m = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.0, 0.1);
        assert!(DensityOperator::new(m.clone()).is_err());
        m[(1, 0)] = c(0.0, -0.1);
        assert!(DensityOperator::new(m).is_ok());
        assert!(DensityOperator::new(ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn standard_lift_of_diagonal_state() {
        let lift = standard_lift(&DensityOperator::diagonal(&[0.75, 0.25]).unwrap(), 1.0).unwrap();
        let expected = ComplexMatrix::from_real_diag(&[0.75f64.sqrt(), 0.5]);
        assert!(lift.psi().approx_eq(&expected, 1e-15));
        assert!(lift
            .project()
            .matrix()
            .approx_eq(&ComplexMatrix::from_real_diag(&[0.75, 0.25]), 1e-15));
    }

    #[test]
    fn standard_lift_of_pure_state_is_the_vector() {
        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        let rho = ComplexMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj());
        let lift = standard_lift(&DensityOperator::new(rho).unwrap(), 1.0).unwrap();
        assert_eq!(lift.rank(), 1);
        assert!(lift.psi()[(0, 0)].approx_eq_c(v[0], 1e-14));
        assert!(lift.psi()[(1, 0)].approx_eq_c(v[1], 1e-14));
    }

    trait ApproxC {
        fn approx_eq_c(&self, other: Complex64, tol: f64) -> bool;
    }
    impl ApproxC for Complex64 {
        fn approx_eq_c(&self, other: Complex64, tol: f64) -> bool {
            (self - other).norm() <= tol
        }
    }

    #[test]
    fn standard_lift_of_random_state() {
        let mut rng = seeded_rng(3, 0);
        let spectrum = Spectrum::new(&[0.5, 0.3, 0.2]).unwrap();
        for _ in 0..20 {
            let rho = sample_density(&spectrum, 3, &mut rng).unwrap();
            let lift = standard_lift(&rho, 1.0).unwrap();
            let gram = lift.psi().adjoint_mul(lift.psi()).unwrap();
            assert!(gram.max_abs_diff(&spectrum.p_matrix()) <= 1e-10);
            assert!(lift.project().matrix().max_abs_diff(rho.matrix()) <= 1e-10);
        }
    }

    #[test]
    fn lift_validation() {
        let s = Spectrum::new(&[0.75, 0.25]).unwrap();
        assert!(Lift::new(ComplexMatrix::identity(2), s.clone(), 1.0).is_err());
        assert!(Lift::new(ComplexMatrix::zeros(2, 1), s.clone(), 1.0).is_err());
        let psi = ComplexMatrix::from_real_diag(&[0.75f64.sqrt(), 0.5]);
        assert!(Lift::new(psi.clone(), s.clone(), 0.0).is_err());
        assert!(Lift::new(psi, s, 1.0).is_ok());
    }

    #[test]
    fn gauge_transform_examples() {
        let lift = standard_lift(&DensityOperator::diagonal(&[0.75, 0.25]).unwrap(), 1.0).unwrap();
        let same = lift.gauge_transform(&ComplexMatrix::identity(2)).unwrap();
        assert!(same.psi().approx_eq(lift.psi(), 0.0));

        let u = ComplexMatrix::from_diag(&[Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, -1.1)]);
        let moved = lift.gauge_transform(&u).unwrap();
        assert!((moved.psi()[(0, 0)] - lift.psi()[(0, 0)] * u[(0, 0)]).norm() < 1e-15);
        assert!(moved.project().matrix().max_abs_diff(lift.project().matrix()) <= 1e-12);

        // Off-diagonal unitaries are not in U(σ) for distinct eigenvalues.
        let [sx, _, _] = pauli();
        assert!(matches!(lift.gauge_transform(&sx), Err(Error::NotInGaugeGroup { .. })));
        assert!(matches!(
            lift.gauge_transform(&ComplexMatrix::from_real_diag(&[2.0, 1.0])),
            Err(Error::NotUnitary { .. })
        ));

        // ...but any unitary is for a degenerate qubit spectrum.
        let mixed = standard_lift(&DensityOperator::diagonal(&[0.5, 0.5]).unwrap(), 1.0).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_rows(&[vec![c(r, 0.0), c(0.0, r)], vec![c(0.0, r), c(r, 0.0)]]).unwrap();
        let moved = mixed.gauge_transform(&h).unwrap();
        assert!(moved.project().matrix().max_abs_diff(mixed.project().matrix()) <= 1e-12);
    }

    #[test]
    fn connection_examples() {
        let p = [0.75, 0.25];
        let lift = standard_lift(&DensityOperator::diagonal(&p).unwrap(), 1.0).unwrap();
        let a = lift.connection_form(&sx_field(&p)).unwrap();
        assert!(a.matrix().frobenius_norm() < 1e-16);

        let p = [0.5, 0.5];
        let lift = standard_lift(&DensityOperator::diagonal(&p).unwrap(), 1.0).unwrap();
        let a = lift.connection_form(&sx_field(&p)).unwrap();
        // (1/2i)[[0,1],[1,0]]
        let expected = pauli()[0].scale(c(0.0, -0.5));
        assert!(a.matrix().approx_eq(&expected, 1e-15), "{:?}", a.matrix());

        let s = lift.split(&sx_field(&p)).unwrap();
        assert!(s.vertical.approx_eq(&sx_field(&p), 1e-15));
        assert!(s.horizontal.frobenius_norm() < 1e-15);
        assert_eq!(s.classify(1e-10), Direction::Vertical);
    }

    #[test]
    fn connection_rejects_non_tangent_and_bad_shapes() {
        let lift = standard_lift(&DensityOperator::diagonal(&[0.75, 0.25]).unwrap(), 1.0).unwrap();
        // Ψ itself is normal to S(σ): Ψ†Ψ + Ψ†Ψ = 2P ≠ 0.
        assert!(matches!(
            lift.connection_form(&lift.psi().clone()),
            Err(Error::NotTangent { .. })
        ));
        assert!(matches!(
            lift.connection_form(&ComplexMatrix::zeros(2, 1)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn reproducing_property_and_split_of_vertical() {
        let mut rng = seeded_rng(11, 0);
        let spectrum = Spectrum::new(&[0.4, 0.2, 0.2, 0.2]).unwrap();
        for _ in 0..20 {
            let rho = sample_density(&spectrum, 5, &mut rng).unwrap();
            let lift = standard_lift(&rho, 0.7).unwrap();
            let h = sample_hermitian(4, &mut rng);
            let xi = project_to_algebra(&h.matrix().scale(I), lift.spectrum()).unwrap();
            let x = lift.generator(&xi).unwrap();
            let a = lift.connection_form(&x).unwrap();
            assert!(a.matrix().max_abs_diff(xi.matrix()) <= 1e-12);
            let s = lift.split(&x).unwrap();
            assert!(s.horizontal.frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn gauge_algebra_validation() {
        let s = Spectrum::new(&[0.75, 0.25]).unwrap();
        let ok = ComplexMatrix::from_diag(&[c(0.0, 1.0), c(0.0, -2.0)]);
        assert!(GaugeAlgebraElement::new(ok, &s).is_ok());
        assert!(GaugeAlgebraElement::new(ComplexMatrix::identity(2), &s).is_err());
        let off = pauli()[0].scale(I);
        assert!(GaugeAlgebraElement::new(off.clone(), &s).is_err());
        let degenerate = Spectrum::new(&[0.5, 0.5]).unwrap();
        assert!(GaugeAlgebraElement::new(off, &degenerate).is_ok());
        assert!(GaugeAlgebraElement::new(ComplexMatrix::zeros(3, 3), &s).is_err());
    }

    #[test]
    fn inertia_examples() {
        let hbar: f64 = 0.3;
        let s = Spectrum::new(&[0.5, 0.3, 0.2]).unwrap();
        let chi =
            GaugeAlgebraElement::from_trusted(ComplexMatrix::identity(3).scale(c(0.0, -1.0 / (2.0 * hbar).sqrt())));
        assert!((inertia_inner(&chi, &chi, &s, hbar).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(
            inertia_inner(&chi, &GaugeAlgebraElement::zero(3), &s, hbar).unwrap(),
            0.0
        );
        assert!(inertia_inner(&chi, &GaugeAlgebraElement::zero(2), &s, hbar).is_err());
    }

    #[test]
    fn inertia_matches_realization_at_random_lifts() {
        let mut rng = seeded_rng(5, 0);
        let spectrum = Spectrum::new(&[0.4, 0.4, 0.2]).unwrap();
        let hbar = 1.7;
        let make = |rng: &mut _| {
            let h = sample_hermitian(3, rng);
            project_to_algebra(&h.matrix().scale(I), &spectrum).unwrap()
        };
        let xi = make(&mut rng);
        let eta = make(&mut rng);
        let expected = inertia_inner(&xi, &eta, &spectrum, hbar).unwrap();
        for _ in 0..10 {
            let rho = sample_density(&spectrum, 4, &mut rng).unwrap();
            let lift = standard_lift(&rho, hbar).unwrap();
            let got = lift.inertia_at(&xi, &eta).unwrap();
            assert!(
                (got - expected).abs() <= 1e-10 * expected.abs().max(1e-300),
                "{got} vs {expected}"
            );
        }
    }

    #[test]
    fn mechanical_connection_identity_and_split_orthogonality() {
        let mut rng = seeded_rng(9, 0);
        let spectrum = Spectrum::new(&[0.35, 0.35, 0.2, 0.1]).unwrap();
        for _ in 0..30 {
            let rho = sample_density(&spectrum, 5, &mut rng).unwrap();
            let lift = standard_lift(&rho, 1.3).unwrap();
            let h = sample_hermitian(5, &mut rng);
            let x = (h.matrix() * lift.psi()).scale(c(0.0, -1.0 / 1.3));
            let xi = project_to_algebra(&sample_hermitian(4, &mut rng).matrix().scale(I), &spectrum).unwrap();

            let a = lift.connection_form(&x).unwrap();
            let lhs = lift.moment_pairing(&x, &xi).unwrap();
            let rhs = inertia_inner(&a, &xi, &spectrum, 1.3).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));

            let s = lift.split(&x).unwrap();
            let xn = x.frobenius_norm();
            assert!(metric_g(&s.vertical, &s.horizontal, 1.3).unwrap().abs() <= 1e-9 * xn);
            assert!(form_omega(&s.vertical, &s.horizontal, 1.3).unwrap().abs() <= 1e-9 * xn * xn);
            assert!((&s.vertical + &s.horizontal).max_abs_diff(&x) <= 1e-15 * xn.max(1.0));

            let again = lift.split(&s.horizontal).unwrap();
            assert!(again.vertical.frobenius_norm() <= 1e-12 * xn);
            assert!(again.horizontal.max_abs_diff(&s.horizontal) <= 1e-12 * xn);

            // horizontal vectors pair to zero with every ξ
            assert!(lift.moment_pairing(&s.horizontal, &xi).unwrap().abs() <= 1e-10 * xn);

            // equivariance: A_{ΨU}(XU) = U†A_Ψ(X)U
            let u = sample_gauge_unitary(&spectrum, &mut rng);
            let moved = lift.gauge_transform(&u).unwrap();
            let au = moved.connection_form(&(&x * &u)).unwrap();
            let expected = &(&u.adjoint() * a.matrix()) * &u;
            assert!(au.matrix().max_abs_diff(&expected) <= 1e-10);
            assert!(moved.project().matrix().max_abs_diff(rho.matrix()) <= 1e-12);
        }
    }
}
