//! Geometry of isospectral orbits of density operators and the geometric
//! uncertainty relation for mixed quantum states.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`] and [`eigen`]: dense complex linear algebra, the bilinear
//!   forms G and Ω, and a cyclic Jacobi Hermitian eigensolver.
//! - [`bundle`]: spectra, density operators, lifts Ψ with Ψ†Ψ = P(σ), the
//!   gauge action and the mechanical connection.
//! - [`observables`]: Hamiltonian vector fields, the Riemannian and Poisson
//!   brackets and the covariance identity.
//! - [`uncertainty`]: variance bound, Cauchy–Schwarz estimate, the geometric
//!   bound and the Robertson–Schrödinger baseline.
//! - [`sampling`], [`verify`], [`spin`]: seeded sampling, the invariant
//!   battery and the spin-½ example.

pub mod bundle;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod observables;
pub mod oracles;
pub mod sampling;
pub mod spin;
pub mod uncertainty;
pub mod verify;

pub use bundle::{
    inertia_inner, spectrum_of, standard_lift, standard_lift_with, BlockProjectors, DensityOperator, Direction,
    GaugeAlgebraElement, Lift, Spectrum, Splitting,
};
pub use eigen::{hermitian_eig, EigenDecomposition};
pub use error::{Error, Result};
pub use matrix::{anticommutator, commutator, form_omega, hs_inner, metric_g, ComplexMatrix};
pub use num_complex::Complex64;
pub use observables::{
    brackets, chi_element, expected_value, ham_field, sym_covariance, xi_field, xi_perp, BracketPair, Observable,
};
pub use spin::{spin_demo, spin_observables, DemoCheck, SpinDemo};
pub use uncertainty::{
    analyze_pair, cauchy_schwarz_check, geometric_bound, rs_bound, variance, variance_bound_check, BoundWinner,
    UncertaintyReport,
};
pub use verify::{run_battery, InvariantOutcome, VerifyConfig};
