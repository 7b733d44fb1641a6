use std::fmt::Write as _;

use log::warn;
use phasegeo::uncertainty::{analyze_pair_with, RELATION_TOL};
use phasegeo::{run_battery, spin_demo, DemoCheck, UncertaintyReport, VerifyConfig};
use serde::Serialize;

use crate::input::{matrix_to_json, parse_observables, parse_state};
use crate::{CliError, Outcome, EXIT_OK, EXIT_VIOLATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Absolute tolerance for the spin demo's closed-form comparison.
pub const DEMO_TOL: f64 = 1e-10;

#[derive(Serialize)]
struct DemoJson<'a> {
    p1: f64,
    p2: f64,
    hbar: f64,
    rho: Vec<Vec<[f64; 2]>>,
    lift: Vec<Vec<[f64; 2]>>,
    field_sx: Vec<Vec<[f64; 2]>>,
    field_sy: Vec<Vec<[f64; 2]>>,
    direction_sx: &'static str,
    direction_sy: &'static str,
    riemann: f64,
    poisson: f64,
    report: &'a UncertaintyReport,
    checks: &'a [DemoCheck],
    passed: bool,
}

pub fn demo_spin(p1: f64, hbar: f64, format: Format, tolerance_scale: f64) -> Result<Outcome, CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage("demo supports text or json output".into()));
    }
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(CliError::Usage(format!("--p1 must lie in (0, 1), got {p1}")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(CliError::Usage(format!("--hbar must be positive, got {hbar}")));
    }
    let d = spin_demo(p1, hbar, DEMO_TOL * tolerance_scale).map_err(CliError::from_core)?;
    let passed = d.passed();
    let output = match format {
        Format::Json => {
            let j = DemoJson {
                p1: d.p1,
                p2: d.p2,
                hbar: d.hbar,
                rho: matrix_to_json(d.rho.matrix()),
                lift: matrix_to_json(d.lift.psi()),
                field_sx: matrix_to_json(&d.field_x),
                field_sy: matrix_to_json(&d.field_y),
                direction_sx: d.direction_x.as_str(),
                direction_sy: d.direction_y.as_str(),
                riemann: d.brackets.riemann,
                poisson: d.brackets.poisson,
                report: &d.report,
                checks: &d.checks,
                passed,
            };
            serde_json::to_string_pretty(&j).expect("demo serializes") + "\n"
        }
        _ => {
            let mut s = String::new();
            let r = &d.report;
            let _ = writeln!(s, "spin-1/2 ensemble  p1 = {}  p2 = {}  hbar = {}", d.p1, d.p2, d.hbar);
            let _ = write!(s, "\nrho =\n{}", d.rho.matrix());
            let _ = write!(s, "\nlift Psi =\n{}", d.lift.psi());
            let _ = write!(
                s,
                "\nX_Sx = (Sx/i hbar) Psi  [{}]\n{}",
                d.direction_x.as_str(),
                d.field_x
            );
            let _ = write!(
                s,
                "\nX_Sy = (Sy/i hbar) Psi  [{}]\n{}",
                d.direction_y.as_str(),
                d.field_y
            );
            let _ = writeln!(s);
            let rows: [(&str, String); 9] = [
                ("{Sx,Sy}_g", d.brackets.riemann.to_string()),
                ("{Sx,Sy}_omega", d.brackets.poisson.to_string()),
                ("deltaSx", r.delta_a.to_string()),
                ("deltaSy", r.delta_b.to_string()),
                ("product", r.product.to_string()),
                ("geometric bound", r.geometric_bound.to_string()),
                ("RS bound", r.rs_bound.to_string()),
                ("winner", r.bound_winner.as_str().to_string()),
                ("all checks", if passed { "pass".into() } else { "FAIL".into() }),
            ];
            for (label, value) in rows {
                let _ = writeln!(s, "{label:<16}= {value}");
            }
            let _ = writeln!(s);
            for c in &d.checks {
                let _ = writeln!(
                    s,
                    "[{}] {:<16} {:>24}  expected {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.expected
                );
            }
            s
        }
    };
    Ok(Outcome {
        output,
        code: if passed { EXIT_OK } else { EXIT_VIOLATION },
    })
}

#[derive(Serialize)]
pub struct PairReport {
    pub a: String,
    pub b: String,
    #[serde(flatten)]
    pub report: UncertaintyReport,
}

#[derive(Serialize)]
struct AnalyzeJson<'a> {
    dimension: usize,
    hbar: f64,
    observables: Vec<&'a str>,
    pairs: &'a [PairReport],
}

pub const ANALYZE_CSV_COLUMNS: [&str; 12] = [
    "a",
    "b",
    "deltaA",
    "deltaB",
    "product",
    "riemann",
    "poisson",
    "geometric_bound",
    "rs_bound",
    "slack_geometric",
    "slack_rs",
    "bound_winner",
];

/// Reports for every pair i < j of observables in the file.
pub fn analyze(state_text: &str, observables_text: &str, format: Format) -> Result<Outcome, CliError> {
    let state = parse_state(state_text)?;
    let obs = parse_observables(observables_text, state.dimension)?;
    if obs.len() < 2 {
        warn!("{} observable(s) given; no pairs to analyze", obs.len());
    }
    let mut pairs = Vec::new();
    for i in 0..obs.len() {
        for j in i + 1..obs.len() {
            let report = analyze_pair_with(
                &obs[i].observable,
                &obs[j].observable,
                &state.rho,
                state.hbar,
                RELATION_TOL,
            )
            .map_err(|e| match CliError::from_core(e) {
                CliError::Violation(m) => CliError::Violation(format!("({}, {}): {m}", obs[i].name, obs[j].name)),
                other => other,
            })?;
            pairs.push(PairReport {
                a: obs[i].name.clone(),
                b: obs[j].name.clone(),
                report,
            });
        }
    }
    let output = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(ANALYZE_CSV_COLUMNS).expect("in-memory write");
            for p in &pairs {
                let r = &p.report;
                w.write_record([
                    p.a.clone(),
                    p.b.clone(),
                    r.delta_a.to_string(),
                    r.delta_b.to_string(),
                    r.product.to_string(),
                    r.riemann.to_string(),
                    r.poisson.to_string(),
                    r.geometric_bound.to_string(),
                    r.rs_bound.to_string(),
                    r.slack_geometric.to_string(),
                    r.slack_rs.to_string(),
                    r.bound_winner.as_str().to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
        }
        _ => {
            let j = AnalyzeJson {
                dimension: state.dimension,
                hbar: state.hbar,
                observables: obs.iter().map(|o| o.name.as_str()).collect(),
                pairs: &pairs,
            };
            serde_json::to_string_pretty(&j).expect("report serializes") + "\n"
        }
    };
    Ok(Outcome { output, code: EXIT_OK })
}

pub fn verify(dim: usize, samples: usize, seed: u64, tolerance_scale: f64) -> Result<Outcome, CliError> {
    if dim < 2 {
        return Err(CliError::Usage(format!("--dim must be at least 2, got {dim}")));
    }
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let outcomes = run_battery(&VerifyConfig {
        dim,
        samples,
        seed,
        tolerance_scale,
    });
    let mut s = String::new();
    let _ = writeln!(
        s,
        "invariant battery  dim {dim}  samples {samples}  seed {seed}  tolerance scale {tolerance_scale}"
    );
    for o in &outcomes {
        let _ = writeln!(s, "{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(s, "{} of {} invariants passed", outcomes.len() - failed, outcomes.len());
    Ok(Outcome {
        output: s,
        code: if failed == 0 { EXIT_OK } else { EXIT_VIOLATION },
    })
}
