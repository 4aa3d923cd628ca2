//! Puncture-and-square experiment: for each key, delete one column at a
//! time and compute the dimension of the square of the punctured code.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::square::{puncture, square_code_dimension, Classification};
use super::AnalysisError;
use crate::gf::Field;
use crate::grs::GrsCode;
use crate::rlce::{keygen, RlceParams};

/// Which generator each trial examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeySource {
    /// A fresh RLCE public key.
    Rlce,
    /// The bare `[n, k]` GRS generator, as a control group.
    Grs,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub params: RlceParams,
    pub trials: usize,
    /// Puncture only this many uniformly chosen columns per key.
    pub sample_columns: Option<usize>,
    pub source: KeySource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PunctureRecord {
    pub trial: usize,
    pub column: usize,
    pub k: usize,
    /// Length after puncturing.
    pub n: usize,
    pub square_dim: usize,
    pub bound: usize,
    pub classification: Classification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExperimentReport {
    pub records: Vec<PunctureRecord>,
}

pub const CSV_HEADER: &str = "trial_id,punctured_column,k,N,square_dim,bound,classification";

impl ExperimentReport {
    pub fn fraction_random_like(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        let hits = self
            .records
            .iter()
            .filter(|r| r.classification == Classification::RandomLike)
            .count();
        hits as f64 / self.records.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.trial, r.column, r.k, r.n, r.square_dim, r.bound, r.classification
            );
        }
        out
    }
}

/// Runs `config.trials` independent trials in parallel. Each trial gets
/// its own generator seeded from `rng`, so the report depends only on
/// `rng` and not on scheduling.
pub fn distinguisher_experiment<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<ExperimentReport, AnalysisError> {
    let seeds: Vec<[u8; 32]> = (0..config.trials).map(|_| rng.random()).collect();
    let per_trial: Vec<Vec<PunctureRecord>> = seeds
        .into_par_iter()
        .enumerate()
        .map(|(trial, seed)| run_trial(config, trial, seed))
        .collect::<Result<_, _>>()?;
    Ok(ExperimentReport {
        records: per_trial.into_iter().flatten().collect(),
    })
}

fn run_trial(
    config: &ExperimentConfig,
    trial: usize,
    seed: [u8; 32],
) -> Result<Vec<PunctureRecord>, AnalysisError> {
    let mut rng = ChaCha20Rng::from_seed(seed);
    let params = &config.params;
    let g = match config.source {
        KeySource::Rlce => keygen(params, false, &mut rng)?.0.generator().clone(),
        KeySource::Grs => {
            let field = Arc::new(Field::new(params.m).map_err(crate::rlce::RlceError::from)?);
            GrsCode::random(&field, params.n, params.k, &mut rng)
                .map_err(|e| AnalysisError::InvalidParameters(e.to_string()))?
                .generator_matrix()
        }
    };
    let columns: Vec<usize> = match config.sample_columns {
        Some(s) if s < g.cols() => {
            let mut c = index::sample(&mut rng, g.cols(), s).into_vec();
            c.sort_unstable();
            c
        }
        _ => (0..g.cols()).collect(),
    };
    columns
        .into_par_iter()
        .map(|column| {
            let report = square_code_dimension(&puncture(&g, column)?);
            Ok(PunctureRecord {
                trial,
                column,
                k: report.k,
                n: report.n,
                square_dim: report.square_dim,
                bound: report.bound,
                classification: report.classification,
            })
        })
        .collect()
}
