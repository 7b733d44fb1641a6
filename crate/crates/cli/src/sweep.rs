//! Seeded Monte Carlo sweeps over random (Â, B̂, ρ) triples.
//!
//! Stream 0 of the seed draws the spectrum; sample `i` draws its state and
//! observables from stream `i + 1`. Samples are evaluated in parallel and
//! collected in index order, so output bytes depend only on the arguments.

use phasegeo::sampling::{sample_density, sample_hermitian, sample_spectrum, seeded_rng};
use phasegeo::uncertainty::{analyze_pair_with, RELATION_TOL};
use phasegeo::{BoundWinner, DensityOperator, Observable, Spectrum, UncertaintyReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub dim: usize,
    pub rank: usize,
    pub samples: usize,
    pub seed: u64,
    pub hbar: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.dim == 0 || self.rank == 0 || self.rank > self.dim {
            return Err(CliError::Usage(format!(
                "need 1 <= rank <= dim, got dim {} rank {}",
                self.dim, self.rank
            )));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("samples must be at least 1".into()));
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(CliError::Usage(format!("hbar must be positive, got {}", self.hbar)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    pub sample_index: usize,
    pub seed: u64,
    pub dimension: usize,
    pub rank: usize,
    #[serde(flatten)]
    pub report: UncertaintyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub min_slack_geometric: f64,
    pub min_slack_rs: f64,
    /// Fraction of samples with geometric bound > RS bound beyond the tie tolerance.
    pub geometric_wins_fraction: f64,
    pub ties_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutput {
    pub seed: u64,
    pub dimension: usize,
    pub rank: usize,
    pub samples: usize,
    pub hbar: f64,
    pub spectrum: Vec<f64>,
    pub spectrum_rejections: usize,
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

/// The spectrum shared by every sample of a sweep, with its rejection count.
pub fn sweep_spectrum(seed: u64, rank: usize) -> (Spectrum, usize) {
    sample_spectrum(rank, &mut seeded_rng(seed, 0))
}

/// The state and observable pair of sample `index`.
pub fn sweep_triple(
    spectrum: &Spectrum,
    dim: usize,
    seed: u64,
    index: usize,
) -> Result<(DensityOperator, Observable, Observable), CliError> {
    let mut rng = seeded_rng(seed, index as u64 + 1);
    let rho = sample_density(spectrum, dim, &mut rng).map_err(CliError::from_core)?;
    let a = sample_hermitian(dim, &mut rng);
    let b = sample_hermitian(dim, &mut rng);
    Ok((rho, a, b))
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, CliError> {
    cfg.validate()?;
    let (spectrum, rejections) = sweep_spectrum(cfg.seed, cfg.rank);
    let records = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let (rho, a, b) = sweep_triple(&spectrum, cfg.dim, cfg.seed, i)?;
            let report = analyze_pair_with(&a, &b, &rho, cfg.hbar, RELATION_TOL).map_err(CliError::from_core)?;
            Ok(SweepRecord {
                sample_index: i,
                seed: cfg.seed,
                dimension: cfg.dim,
                rank: cfg.rank,
                report,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let summary = summarize(&records);
    Ok(SweepOutput {
        seed: cfg.seed,
        dimension: cfg.dim,
        rank: cfg.rank,
        samples: cfg.samples,
        hbar: cfg.hbar,
        spectrum: spectrum.eigenvalues().to_vec(),
        spectrum_rejections: rejections,
        records,
        summary,
    })
}

fn summarize(records: &[SweepRecord]) -> SweepSummary {
    let n = records.len() as f64;
    let count = |w: BoundWinner| records.iter().filter(|r| r.report.bound_winner == w).count() as f64 / n;
    SweepSummary {
        min_slack_geometric: records
            .iter()
            .map(|r| r.report.slack_geometric)
            .fold(f64::INFINITY, f64::min),
        min_slack_rs: records.iter().map(|r| r.report.slack_rs).fold(f64::INFINITY, f64::min),
        geometric_wins_fraction: count(BoundWinner::Geometric),
        ties_fraction: count(BoundWinner::Tie),
    }
}

pub const CSV_COLUMNS: [&str; 14] = [
    "sample_index",
    "seed",
    "dimension",
    "rank",
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

pub fn to_json(out: &SweepOutput) -> String {
    let mut s = serde_json::to_string_pretty(out).expect("sweep output serializes");
    s.push('\n');
    s
}

/// Records only; the caller reports the summary separately.
pub fn to_csv(out: &SweepOutput) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in &out.records {
        let p = &r.report;
        w.write_record([
            r.sample_index.to_string(),
            r.seed.to_string(),
            r.dimension.to_string(),
            r.rank.to_string(),
            p.delta_a.to_string(),
            p.delta_b.to_string(),
            p.product.to_string(),
            p.riemann.to_string(),
            p.poisson.to_string(),
            p.geometric_bound.to_string(),
            p.rs_bound.to_string(),
            p.slack_geometric.to_string(),
            p.slack_rs.to_string(),
            p.bound_winner.as_str().to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize, rank: usize, samples: usize, seed: u64) -> SweepConfig {
        SweepConfig {
            dim,
            rank,
            samples,
            seed,
            hbar: 1.0,
        }
    }

    #[test]
    fn pure_qubit_sweep_has_coinciding_bounds() {
        let out = run_sweep(&cfg(2, 1, 50, 3)).unwrap();
        for r in &out.records {
            assert!((r.report.geometric_bound - r.report.rs_bound).abs() <= 1e-9);
            assert!((r.report.slack_geometric - r.report.slack_rs).abs() <= 1e-9);
        }
    }

    #[test]
    fn relation_holds_on_a_mixed_sweep() {
        let out = run_sweep(&cfg(4, 3, 200, 11)).unwrap();
        assert_eq!(out.records.len(), 200);
        assert!(out.summary.min_slack_geometric >= -1e-9);
        assert!(out.records.iter().enumerate().all(|(i, r)| r.sample_index == i));
    }

    #[test]
    fn output_depends_only_on_arguments() {
        let a = to_json(&run_sweep(&cfg(3, 2, 40, 5)).unwrap());
        let b = to_json(&run_sweep(&cfg(3, 2, 40, 5)).unwrap());
        assert_eq!(a, b);
        let c = to_json(&run_sweep(&cfg(3, 2, 40, 6)).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn sample_prefixes_agree() {
        let short = run_sweep(&cfg(3, 2, 5, 9)).unwrap();
        let long = run_sweep(&cfg(3, 2, 20, 9)).unwrap();
        for (x, y) in short.records.iter().zip(&long.records) {
            assert_eq!(x.report.product, y.report.product);
        }
    }

    #[test]
    fn csv_has_fixed_header_and_one_row_per_sample() {
        let text = to_csv(&run_sweep(&cfg(2, 2, 7, 1)).unwrap());
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.count(), 7);
    }

    #[test]
    fn json_records_are_flat() {
        let text = to_json(&run_sweep(&cfg(2, 2, 2, 1)).unwrap());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let r = &v["records"][0];
        assert!(r["deltaA"].is_f64());
        assert!(r["sample_index"].is_u64());
        assert!(v["summary"]["min_slack_geometric"].is_f64());
    }

    #[test]
    fn invalid_shapes_are_usage_errors() {
        assert!(matches!(run_sweep(&cfg(2, 3, 1, 0)), Err(CliError::Usage(_))));
        assert!(matches!(run_sweep(&cfg(2, 0, 1, 0)), Err(CliError::Usage(_))));
        assert!(matches!(run_sweep(&cfg(2, 1, 0, 0)), Err(CliError::Usage(_))));
    }
}
