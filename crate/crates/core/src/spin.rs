//! The spin-½ ensemble: ρ = diag(p₁, p₂) with the spin components
//! Ŝ = (ħ/2)σ. Closed forms for every reported quantity are known, which
//! makes it the reference regression case.

use serde::Serialize;

use crate::bundle::{standard_lift, DensityOperator, Direction, Lift, DEFAULT_DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{pauli, ComplexMatrix};
use crate::observables::{ham_field, BracketPair, Observable};
use crate::uncertainty::{PairAnalysis, UncertaintyReport, RELATION_TOL};

/// [Ŝx, Ŝy, Ŝz] = (ħ/2)[σx, σy, σz]
pub fn spin_observables(hbar: f64) -> [Observable; 3] {
    pauli().map(|s| Observable::new(s.scale_real(0.5 * hbar)).expect("Pauli matrices are Hermitian"))
}

/// One reproduced value against its closed form.
#[derive(Clone, Debug, Serialize)]
pub struct DemoCheck {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SpinDemo {
    pub p1: f64,
    pub p2: f64,
    pub hbar: f64,
    pub rho: DensityOperator,
    pub lift: Lift,
    pub field_x: ComplexMatrix,
    pub field_y: ComplexMatrix,
    pub direction_x: Direction,
    pub direction_y: Direction,
    pub brackets: BracketPair,
    pub report: UncertaintyReport,
    pub checks: Vec<DemoCheck>,
}

impl SpinDemo {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the spin example at `p1` and compares against closed forms to `tol`
/// (absolute, scaled by max(1, ħ²)).
pub fn spin_demo(p1: f64, hbar: f64, tol: f64) -> Result<SpinDemo> {
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(Error::InvalidArgument(format!("p1 must lie in (0, 1), got {p1}")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
    }
    let p2 = 1.0 - p1;
    let rho = DensityOperator::diagonal(&[p1, p2])?;
    let lift = standard_lift(&rho, hbar)?;
    let [sx, sy, _] = spin_observables(hbar);

    let field_x = ham_field(&sx, &lift)?;
    let field_y = ham_field(&sy, &lift)?;
    let direction_x = lift.split(&field_x)?.classify(1e-10);
    let direction_y = lift.split(&field_y)?.classify(1e-10);

    let analysis = PairAnalysis::at(&sx, &sy, &rho, &lift)?;
    let report = analysis.report(RELATION_TOL)?;
    let brackets = analysis.brackets;

    let degenerate = (p1 - p2).abs() <= DEFAULT_DEGENERACY_TOL * p1.max(p2);
    let gap = if degenerate { 0.0 } else { p1 - p2 };
    let quarter = 0.25 * hbar * hbar;
    let tol = tol * (hbar * hbar).max(1.0);
    let expected_direction = if degenerate {
        Direction::Vertical
    } else {
        Direction::Horizontal
    };

    let mut checks = Vec::new();
    let mut check = |name, value: f64, expected: f64| {
        checks.push(DemoCheck {
            name,
            value,
            expected,
            passed: (value - expected).abs() <= tol,
        });
    };
    check("riemann", brackets.riemann, 0.0);
    check("poisson", brackets.poisson, 0.5 * hbar * gap);
    check("deltaSx", report.delta_a, 0.5 * hbar);
    check("deltaSy", report.delta_b, 0.5 * hbar);
    check("product", report.product, quarter);
    check("geometric_bound", report.geometric_bound, quarter * gap.abs());
    check("rs_bound", report.rs_bound, quarter * (p1 - p2).abs());
    let dir_ok = |d: Direction| if d == expected_direction { 1.0 } else { 0.0 };
    check("direction_x", dir_ok(direction_x), 1.0);
    check("direction_y", dir_ok(direction_y), 1.0);

    Ok(SpinDemo {
        p1,
        p2,
        hbar,
        rho,
        lift,
        field_x,
        field_y,
        direction_x,
        direction_y,
        brackets,
        report,
        checks,
    })
}
