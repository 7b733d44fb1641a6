//! Variance bound, Cauchy–Schwarz estimate and the geometric uncertainty
//! relation ΔA·ΔB ≥ (ħ/2)√({A,B}_g² + {A,B}_ω²), with the
//! Robertson–Schrödinger bound alongside for comparison.

use serde::Serialize;

use crate::bundle::{inertia_inner, standard_lift, DensityOperator, Lift};
use crate::error::{Error, Result};
use crate::observables::{expected_value, trace_product, BracketPair, FieldGeometry, Observable};

/// Allowed violation of an inequality before it is reported as a fault.
pub const RELATION_TOL: f64 = 1e-9;
/// Negative variances down to this are rounding noise and clamp to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;
/// Bounds closer than this count as a tie.
pub const TIE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundWinner {
    Geometric,
    RobertsonSchrodinger,
    Tie,
}

impl BoundWinner {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundWinner::Geometric => "geometric",
            BoundWinner::RobertsonSchrodinger => "robertson_schrodinger",
            BoundWinner::Tie => "tie",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UncertaintyReport {
    #[serde(rename = "deltaA")]
    pub delta_a: f64,
    #[serde(rename = "deltaB")]
    pub delta_b: f64,
    pub product: f64,
    pub riemann: f64,
    pub poisson: f64,
    pub geometric_bound: f64,
    pub rs_bound: f64,
    pub slack_geometric: f64,
    pub slack_rs: f64,
    pub bound_winner: BoundWinner,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceBound {
    /// ΔA²
    pub lhs: f64,
    /// (ħ/2){A,A}_g
    pub rhs: f64,
    pub gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchySchwarz {
    /// {A,A}_g{B,B}_g
    pub lhs: f64,
    /// {A,B}_g² + {A,B}_ω²
    pub rhs: f64,
}

fn clamp_variance(v: f64) -> f64 {
    if (-VARIANCE_CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// ΔA² = Tr(Â²ρ) − Tr(Âρ)²
pub fn variance(a: &Observable, rho: &DensityOperator) -> Result<f64> {
    let mean = expected_value(a, rho)?;
    let second = trace_product(&(a.matrix() * a.matrix()), rho.matrix()).re;
    Ok(clamp_variance(second - mean * mean))
}

/// ½Tr((ÂB̂ + B̂Â)ρ) − Tr(Âρ)Tr(B̂ρ), from traces.
pub fn trace_covariance(a: &Observable, b: &Observable, rho: &DensityOperator) -> Result<f64> {
    let ma = expected_value(a, rho)?;
    let mb = expected_value(b, rho)?;
    let ab = trace_product(&(a.matrix() * b.matrix()), rho.matrix()).re;
    Ok(ab - ma * mb)
}

pub fn variance_bound_check(a: &Observable, rho: &DensityOperator, hbar: f64) -> Result<VarianceBound> {
    let lift = standard_lift(rho, hbar)?;
    let fa = FieldGeometry::at(a, &lift)?;
    variance_bound_from(a, rho, &fa, hbar)
}

fn variance_bound_from(a: &Observable, rho: &DensityOperator, fa: &FieldGeometry, hbar: f64) -> Result<VarianceBound> {
    let lhs = variance(a, rho)?;
    let rhs = 0.5 * hbar * fa.brackets_with(fa, hbar)?.riemann;
    Ok(VarianceBound {
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

pub fn cauchy_schwarz_check(a: &Observable, b: &Observable, rho: &DensityOperator, hbar: f64) -> Result<CauchySchwarz> {
    let lift = standard_lift(rho, hbar)?;
    let fa = FieldGeometry::at(a, &lift)?;
    let fb = FieldGeometry::at(b, &lift)?;
    cauchy_schwarz_from(&fa, &fb, hbar)
}

fn cauchy_schwarz_from(fa: &FieldGeometry, fb: &FieldGeometry, hbar: f64) -> Result<CauchySchwarz> {
    let aa = fa.brackets_with(fa, hbar)?.riemann;
    let bb = fb.brackets_with(fb, hbar)?.riemann;
    let ab = fa.brackets_with(fb, hbar)?;
    Ok(CauchySchwarz {
        lhs: aa * bb,
        rhs: ab.riemann * ab.riemann + ab.poisson * ab.poisson,
    })
}

fn bound_from_brackets(br: &BracketPair, hbar: f64) -> f64 {
    0.5 * hbar * br.riemann.hypot(br.poisson)
}

/// (ħ/2)√({A,B}_g² + {A,B}_ω²)
pub fn geometric_bound(a: &Observable, b: &Observable, rho: &DensityOperator, hbar: f64) -> Result<f64> {
    let br = crate::observables::brackets(a, b, rho, hbar)?;
    Ok(bound_from_brackets(&br, hbar))
}

/// √((½|Im Tr([Â,B̂]ρ)|)² + cov(A,B)²), the mixed-state Robertson–Schrödinger
/// bound.
pub fn rs_bound(a: &Observable, b: &Observable, rho: &DensityOperator) -> Result<f64> {
    let cov = trace_covariance(a, b, rho)?;
    let ab = trace_product(&(a.matrix() * b.matrix()), rho.matrix());
    let ba = trace_product(&(b.matrix() * a.matrix()), rho.matrix());
    let comm = 0.5 * (ab - ba).im.abs();
    Ok(comm.hypot(cov))
}

pub fn analyze_pair(a: &Observable, b: &Observable, rho: &DensityOperator, hbar: f64) -> Result<UncertaintyReport> {
    analyze_pair_with(a, b, rho, hbar, RELATION_TOL)
}

/// Like [`analyze_pair`], with an explicit tolerance for the relation
/// assertions (scaled by max(1, ΔAΔB)).
pub fn analyze_pair_with(
    a: &Observable,
    b: &Observable,
    rho: &DensityOperator,
    hbar: f64,
    relation_tol: f64,
) -> Result<UncertaintyReport> {
    let lift = standard_lift(rho, hbar)?;
    PairAnalysis::at(a, b, rho, &lift)?.report(relation_tol)
}

/// All pair quantities at one lift, computed once.
#[derive(Clone, Debug)]
pub struct PairAnalysis {
    pub hbar: f64,
    pub field_a: FieldGeometry,
    pub field_b: FieldGeometry,
    pub brackets: BracketPair,
    pub variance_a: f64,
    pub variance_b: f64,
    pub covariance: f64,
    pub rs_bound: f64,
}

impl PairAnalysis {
    pub fn at(a: &Observable, b: &Observable, rho: &DensityOperator, lift: &Lift) -> Result<Self> {
        let hbar = lift.hbar();
        let field_a = FieldGeometry::at(a, lift)?;
        let field_b = FieldGeometry::at(b, lift)?;
        let brackets = field_a.brackets_with(&field_b, hbar)?;
        Ok(Self {
            hbar,
            brackets,
            variance_a: variance(a, rho)?,
            variance_b: variance(b, rho)?,
            covariance: trace_covariance(a, b, rho)?,
            rs_bound: rs_bound(a, b, rho)?,
            field_a,
            field_b,
        })
    }

    pub fn geometric_bound(&self) -> f64 {
        bound_from_brackets(&self.brackets, self.hbar)
    }

    /// (ħ/2)({A,B}_g + ξ_A⊥·ξ_B⊥)
    pub fn geometric_covariance(&self, lift: &Lift) -> Result<f64> {
        let perp = inertia_inner(&self.field_a.xi_perp, &self.field_b.xi_perp, lift.spectrum(), self.hbar)?;
        Ok(0.5 * self.hbar * (self.brackets.riemann + perp))
    }

    pub fn variance_bound_a(&self) -> Result<VarianceBound> {
        let rhs = 0.5 * self.hbar * self.field_a.brackets_with(&self.field_a, self.hbar)?.riemann;
        Ok(VarianceBound {
            lhs: self.variance_a,
            rhs,
            gap: self.variance_a - rhs,
        })
    }

    pub fn cauchy_schwarz(&self) -> Result<CauchySchwarz> {
        cauchy_schwarz_from(&self.field_a, &self.field_b, self.hbar)
    }

    pub fn report(&self, relation_tol: f64) -> Result<UncertaintyReport> {
        let delta_a = self.variance_a.max(0.0).sqrt();
        let delta_b = self.variance_b.max(0.0).sqrt();
        let product = delta_a * delta_b;
        let geometric_bound = self.geometric_bound();
        let rs_bound = self.rs_bound;
        let slack_geometric = product - geometric_bound;
        let slack_rs = product - rs_bound;
        let tol = relation_tol * product.max(1.0);
        if slack_geometric < -tol {
            return Err(Error::RelationViolated {
                relation: "geometric uncertainty relation",
                slack: slack_geometric,
            });
        }
        if slack_rs < -tol {
            return Err(Error::RelationViolated {
                relation: "Robertson-Schrodinger relation",
                slack: slack_rs,
            });
        }
        let bound_winner = if (geometric_bound - rs_bound).abs() <= TIE_TOL {
            BoundWinner::Tie
        } else if geometric_bound > rs_bound {
            BoundWinner::Geometric
        } else {
            BoundWinner::RobertsonSchrodinger
        };
        Ok(UncertaintyReport {
            delta_a,
            delta_b,
            product,
            riemann: self.brackets.riemann,
            poisson: self.brackets.poisson,
            geometric_bound,
            rs_bound,
            slack_geometric,
            slack_rs,
            bound_winner,
        })
    }
}
