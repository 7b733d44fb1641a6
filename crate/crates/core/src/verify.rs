//! Randomized invariant battery.
//!
//! Every invariant is reduced to a non-negative residual that must stay at or
//! below its tolerance (times a global scale factor). Failures to evaluate
//! count as infinite residuals.

use std::fmt;

use serde::Serialize;

use crate::bundle::{inertia_inner, project_to_algebra, standard_lift, DensityOperator, Direction, Spectrum};
use crate::eigen::hermitian_eig_with_stats;
use crate::error::Result;
use crate::matrix::{form_omega, hs_inner, metric_g, ComplexMatrix, I};
use crate::observables::{brackets_at, chi_element, FieldGeometry, Observable};
use crate::oracles;
use crate::sampling::{
    ginibre, sample_density, sample_gauge_unitary, sample_hermitian, sample_spectrum, seeded_rng, SampleRng,
};
use crate::spin::spin_observables;
use crate::uncertainty::{PairAnalysis, RELATION_TOL};

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    /// Multiplies every tolerance.
    pub tolerance_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub first_error: Option<String>,
}

impl fmt::Display for InvariantOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<44} trials {:>6}  worst {:.3e}  tol {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.trials,
            self.worst_residual,
            self.tolerance
        )?;
        if let Some(e) = &self.first_error {
            write!(f, "  ({e})")?;
        }
        Ok(())
    }
}

struct Tracker {
    name: &'static str,
    tolerance: f64,
    trials: usize,
    worst: f64,
    first_error: Option<String>,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            trials: 0,
            worst: 0.0,
            first_error: None,
        }
    }

    fn record(&mut self, residual: Result<f64>) {
        self.trials += 1;
        match residual {
            Ok(r) if r.is_nan() => self.worst = f64::INFINITY,
            Ok(r) => self.worst = self.worst.max(r),
            Err(e) => {
                self.worst = f64::INFINITY;
                self.first_error.get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn finish(self) -> InvariantOutcome {
        InvariantOutcome {
            name: self.name,
            trials: self.trials,
            worst_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.worst <= self.tolerance,
            first_error: self.first_error,
        }
    }
}

/// |a − b| / max(1, |b|)
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

macro_rules! trackers {
    ($scale:expr; $($field:ident = ($name:expr, $tol:expr)),* $(,)?) => {
        struct Trackers { $($field: Tracker),* }
        impl Trackers {
            fn new(scale: f64) -> Self {
                Self { $($field: Tracker::new($name, $tol * scale)),* }
            }
            fn finish(self) -> Vec<InvariantOutcome> {
                vec![$(self.$field.finish()),*]
            }
        }
    };
}

trackers! { scale;
    polar = ("matrix: polar identity G²+Ω²=4ħ²|<X,Y>|²", 1e-12),
    eig_moments = ("eigen: trace and squared-norm sums", 1e-10),
    eig_orthonormal = ("eigen: orthonormal eigenvectors", 1e-12),
    eig_reconstruct = ("eigen: reconstruction", 1e-10),
    eig_offdiag = ("eigen: Jacobi off-diagonal residual", 1e-14),
    eig_oracle = ("eigen: bisection oracle agreement", 1e-9),
    lift_roundtrip = ("bundle: standard lift projects to rho", 1e-10),
    project_gauge = ("bundle: projection is gauge invariant", 1e-12),
    equivariance = ("bundle: connection gauge equivariance", 1e-10),
    reproducing = ("bundle: A(Psi xi) = xi", 1e-12),
    split_g = ("bundle: split is G-orthogonal", 1e-9),
    split_omega = ("bundle: split is Omega-orthogonal", 1e-9),
    split_idempotent = ("bundle: split is idempotent", 1e-12),
    inertia = ("bundle: inertia equals G(Psi xi, Psi eta)", 1e-10),
    moment = ("bundle: moment map J = I(A(X))", 1e-10),
    degenerate_vertical = ("bundle: degenerate spin fields vertical", 1e-10),
    bracket_gauge = ("observables: brackets gauge invariant", 1e-9),
    pythagoras_g = ("observables: G Pythagoras", 1e-9),
    pythagoras_omega = ("observables: Omega Pythagoras", 1e-9),
    total_forms = ("observables: total-form trace identities", 1e-10),
    expectation = ("observables: expectation via chi", 1e-10),
    covariance = ("observables: covariance identity", 1e-9),
    pure_covariance = ("observables: pure-state covariance", 1e-10),
    relation_geometric = ("uncertainty: geometric relation", RELATION_TOL),
    relation_rs = ("uncertainty: Robertson-Schrodinger relation", RELATION_TOL),
    variance_slack = ("uncertainty: variance slack = vertical norm", 1e-9),
    cauchy_schwarz = ("uncertainty: Cauchy-Schwarz estimate", 1e-9),
    pure_bounds = ("uncertainty: pure-state bounds coincide", 1e-9),
    unit_scaling = ("uncertainty: linear scaling of bounds", 1e-10),
}

const HBARS: [f64; 3] = [1.0, 0.5, 2.0];
const GAUGE_TRIALS: usize = 5;

/// Runs every invariant over `samples` random instances at `dim`.
///
/// Sample `i` uses ChaCha stream `i`, rank `1 + i mod dim`, and every fourth
/// sample of rank ≥ 2 has its two largest weights merged into a degenerate
/// block so the non-abelian gauge groups are exercised.
pub fn run_battery(cfg: &VerifyConfig) -> Vec<InvariantOutcome> {
    assert!(cfg.dim >= 1);
    let mut t = Trackers::new(cfg.tolerance_scale);
    for i in 0..cfg.samples {
        let mut rng = seeded_rng(cfg.seed, i as u64);
        let rank = 1 + i % cfg.dim;
        let hbar = HBARS[i % HBARS.len()];
        let spectrum = battery_spectrum(rank, i % 4 == 3, &mut rng);
        sample_checks(&mut t, cfg.dim, &spectrum, hbar, &mut rng);
    }
    if cfg.dim >= 2 {
        t.degenerate_vertical.record(degenerate_spin_residual(cfg.dim));
    }
    t.finish()
}

fn battery_spectrum(rank: usize, degenerate: bool, rng: &mut SampleRng) -> Spectrum {
    let (s, _) = sample_spectrum(rank, rng);
    if degenerate && rank >= 2 {
        let mut p = s.eigenvalues().to_vec();
        let mean = 0.5 * (p[0] + p[1]);
        p[0] = mean;
        p[1] = mean;
        // p[2] < old p[1] ≤ mean keeps the order
        return Spectrum::new(&p).expect("merged spectrum is valid");
    }
    s
}

fn sample_checks(t: &mut Trackers, n: usize, spectrum: &Spectrum, hbar: f64, rng: &mut SampleRng) {
    let k = spectrum.rank();

    // matrix-core
    let x = ginibre(n, k, rng);
    let y = ginibre(n, k, rng);
    t.polar.record((|| {
        let g = metric_g(&x, &y, hbar)?;
        let w = form_omega(&x, &y, hbar)?;
        let h = hs_inner(&x, &y)?.norm_sqr();
        let scale = 4.0 * hbar * hbar * (x.frobenius_norm() * y.frobenius_norm()).powi(2);
        Ok((g * g + w * w - 4.0 * hbar * hbar * h).abs() / scale)
    })());

    let h = sample_hermitian(n, rng);
    match hermitian_eig_with_stats(h.matrix()) {
        Ok((d, stats)) => {
            let norm = h.matrix().frobenius_norm();
            let sum: f64 = d.values.iter().sum();
            let sum_sq: f64 = d.values.iter().map(|v| v * v).sum();
            t.eig_moments
                .record(Ok(rel(sum, h.matrix().trace().re).max(rel(sum_sq, norm * norm))));
            let gram = d
                .vectors
                .adjoint_mul(&d.vectors)
                .map(|g| g.max_abs_diff(&ComplexMatrix::identity(n)));
            t.eig_orthonormal.record(gram);
            t.eig_reconstruct
                .record(Ok(h.matrix().distance(&d.reconstruct()) / norm));
            t.eig_offdiag.record(Ok(stats.off_diagonal / norm));
            let oracle = oracles::hermitian_eigenvalues_by_bisection(h.matrix(), 1e-13);
            let worst = d
                .values
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            t.eig_oracle.record(Ok(worst));
        }
        Err(e) => {
            for tr in [
                &mut t.eig_moments,
                &mut t.eig_orthonormal,
                &mut t.eig_reconstruct,
                &mut t.eig_offdiag,
                &mut t.eig_oracle,
            ] {
                tr.record(Err(e.clone()));
            }
        }
    }

    // state and lift
    let rho = match sample_density(spectrum, n, rng) {
        Ok(r) => r,
        Err(e) => {
            t.lift_roundtrip.record(Err(e));
            return;
        }
    };
    let lift = match standard_lift(&rho, hbar) {
        Ok(l) => l,
        Err(e) => {
            t.lift_roundtrip.record(Err(e));
            return;
        }
    };
    t.lift_roundtrip
        .record(Ok(lift.project().matrix().max_abs_diff(rho.matrix())));
    let spectrum = lift.spectrum().clone();

    let a = sample_hermitian(n, rng);
    let b = sample_hermitian(n, rng);
    let random_xi = |rng: &mut SampleRng| {
        let h = sample_hermitian(k, rng);
        project_to_algebra(&h.matrix().scale(I), &spectrum)
    };

    // bundle
    let tangent = (sample_hermitian(n, rng).matrix() * lift.psi()).scale(I);
    let xi = random_xi(rng);
    let eta = random_xi(rng);
    for _ in 0..GAUGE_TRIALS {
        let u = sample_gauge_unitary(&spectrum, rng);
        t.equivariance.record((|| {
            let moved = lift.gauge_transform(&u)?;
            let a0 = lift.connection_form(&tangent)?;
            let a1 = moved.connection_form(&(&tangent * &u))?;
            let expected = &(&u.adjoint() * a0.matrix()) * &u;
            Ok(a1.matrix().max_abs_diff(&expected) / a0.matrix().max_abs().max(1.0))
        })());
        t.project_gauge.record((|| {
            let moved = lift.gauge_transform(&u)?;
            Ok(moved.project().matrix().max_abs_diff(rho.matrix()))
        })());
        t.bracket_gauge.record((|| {
            let moved = lift.gauge_transform(&u)?;
            let b0 = brackets_at(&a, &b, &lift)?;
            let b1 = brackets_at(&a, &b, &moved)?;
            Ok(rel(b1.riemann, b0.riemann).max(rel(b1.poisson, b0.poisson)))
        })());
    }
    t.reproducing.record((|| {
        let xi = xi.clone()?;
        let back = lift.connection_form(&lift.generator(&xi)?)?;
        Ok(back.matrix().max_abs_diff(xi.matrix()) / xi.matrix().max_abs().max(1.0))
    })());
    match lift.split(&tangent) {
        Ok(s) => {
            let xn = tangent.frobenius_norm().max(1e-300);
            t.split_g
                .record(metric_g(&s.vertical, &s.horizontal, hbar).map(|g| g.abs() / xn));
            t.split_omega
                .record(form_omega(&s.vertical, &s.horizontal, hbar).map(|w| w.abs() / (xn * xn)));
            t.split_idempotent.record(lift.split(&s.horizontal).map(|again| {
                let sum_err = (&s.vertical + &s.horizontal).max_abs_diff(&tangent);
                (again.vertical.frobenius_norm() / xn)
                    .max(again.horizontal.max_abs_diff(&s.horizontal) / xn)
                    .max(sum_err / xn)
            }));
        }
        Err(e) => {
            t.split_g.record(Err(e.clone()));
            t.split_omega.record(Err(e.clone()));
            t.split_idempotent.record(Err(e));
        }
    }
    t.inertia.record((|| {
        let (xi, eta) = (xi.clone()?, eta.clone()?);
        Ok(rel(
            lift.inertia_at(&xi, &eta)?,
            inertia_inner(&xi, &eta, &spectrum, hbar)?,
        ))
    })());
    t.moment.record((|| {
        let xi = xi.clone()?;
        let a = lift.connection_form(&tangent)?;
        Ok(rel(
            lift.moment_pairing(&tangent, &xi)?,
            inertia_inner(&a, &xi, &spectrum, hbar)?,
        ))
    })());

    // observables and uncertainty
    let analysis = (|| {
        let pa = PairAnalysis::at(&a, &b, &rho, &lift)?;
        Ok((pa.report(f64::INFINITY)?, pa))
    })();
    let (report, pa) = match analysis {
        Ok(v) => v,
        Err(e) => {
            t.covariance.record(Err(e));
            return;
        }
    };
    let r = rho.matrix();
    let (fa, fb) = (&pa.field_a, &pa.field_b);

    t.pythagoras_g.record((|| {
        let total = metric_g(&fa.field, &fb.field, hbar)?;
        Ok(rel(
            total,
            pa.brackets.riemann + inertia_inner(&fa.xi, &fb.xi, &spectrum, hbar)?,
        ))
    })());
    t.pythagoras_omega.record((|| {
        let total = form_omega(&fa.field, &fb.field, hbar)?;
        let vertical = form_omega(&lift.generator(&fa.xi)?, &lift.generator(&fb.xi)?, hbar)?;
        Ok(rel(total, pa.brackets.poisson + vertical))
    })());
    t.total_forms.record((|| {
        let g = metric_g(&fa.field, &fb.field, hbar)?;
        let w = form_omega(&fa.field, &fb.field, hbar)?;
        let anti = (oracles::expectation(&(a.matrix() * b.matrix()), r)
            + oracles::expectation(&(b.matrix() * a.matrix()), r))
        .re / hbar;
        let comm = oracles::commutator_expectation(a.matrix(), b.matrix(), r).im / hbar;
        Ok(rel(g, anti).max(rel(w, comm)))
    })());
    t.expectation.record((|| {
        let chi = chi_element(k, hbar);
        let ev = (0.5 * hbar).sqrt() * inertia_inner(&chi, &fa.xi, &spectrum, hbar)?;
        Ok((ev - oracles::expectation(a.matrix(), r).re).abs())
    })());
    let cov_oracle = oracles::symmetrized_covariance(a.matrix(), b.matrix(), r);
    t.covariance
        .record(pa.geometric_covariance(&lift).map(|c| rel(c, cov_oracle)));
    if k == 1 {
        t.pure_covariance.record((|| {
            let aa = fa.brackets_with(fa, hbar)?;
            let var = oracles::symmetrized_covariance(a.matrix(), a.matrix(), r);
            Ok(rel(0.5 * hbar * aa.riemann, var).max(fa.xi_perp.matrix().frobenius_norm()))
        })());
        t.pure_bounds
            .record(Ok((report.geometric_bound - report.rs_bound).abs()));
    }

    t.relation_geometric.record(Ok((-report.slack_geometric).max(0.0)));
    t.relation_rs.record(Ok((-report.slack_rs).max(0.0)));
    t.variance_slack.record((|| {
        let vb = pa.variance_bound_a()?;
        let perp = inertia_inner(&fa.xi_perp, &fa.xi_perp, &spectrum, hbar)?;
        Ok(rel(vb.gap, 0.5 * hbar * perp).max((-vb.gap).max(0.0)))
    })());
    t.cauchy_schwarz.record(
        pa.cauchy_schwarz()
            .map(|cs| (cs.rhs - cs.lhs).max(0.0) / cs.lhs.max(1.0)),
    );
    t.unit_scaling.record((|| {
        let c = 2.5;
        let scaled = PairAnalysis::at(&a.scaled(c), &b, &rho, &lift)?.report(f64::INFINITY)?;
        Ok(rel(scaled.delta_a, c * report.delta_a)
            .max(rel(scaled.geometric_bound, c * report.geometric_bound))
            .max(rel(scaled.rs_bound, c * report.rs_bound)))
    })());
}

/// Spin fields in a maximally mixed qubit block are purely vertical.
fn degenerate_spin_residual(n: usize) -> Result<f64> {
    let mut p = vec![0.0; n];
    p[0] = 0.5;
    p[1] = 0.5;
    let rho = DensityOperator::diagonal(&p)?;
    let lift = standard_lift(&rho, 1.0)?;
    let embed = |o: &Observable| {
        Observable::new(ComplexMatrix::from_fn(n, n, |i, j| {
            if i < 2 && j < 2 {
                o.matrix()[(i, j)]
            } else {
                Default::default()
            }
        }))
    };
    let [sx, sy, _] = spin_observables(1.0);
    let (sx, sy) = (embed(&sx)?, embed(&sy)?);
    let mut worst: f64 = 0.0;
    for obs in [&sx, &sy] {
        let f = FieldGeometry::at(obs, &lift)?;
        let s = lift.split(&f.field)?;
        if s.classify(1e-10) != Direction::Vertical {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(s.horizontal.frobenius_norm());
    }
    let br = brackets_at(&sx, &sy, &lift)?;
    Ok(worst.max(br.riemann.abs()).max(br.poisson.abs()))
}
