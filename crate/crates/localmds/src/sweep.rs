//! Batch experiments written as CSV.

use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use localmds_core::oracle::is_dominating;

use crate::format::format_rational;
use crate::runner::{generate, ratio_if_solvable, run_algorithm, sweep_params, AlgoParams, Algorithm};

pub const HEADER: [&str; 10] = [
    "n", "m", "family", "algorithm", "params", "output", "gamma", "ratio", "rounds", "wall_ms",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub family: String,
    pub algorithm: String,
    pub params: String,
    pub output: usize,
    pub gamma: Option<usize>,
    pub ratio: Option<String>,
    pub rounds: Option<u32>,
    pub wall_ms: f64,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let na = || "NA".to_string();
        vec![
            self.n.to_string(),
            self.m.to_string(),
            self.family.clone(),
            self.algorithm.clone(),
            self.params.clone(),
            self.output.to_string(),
            self.gamma.map_or_else(na, |g| g.to_string()),
            self.ratio.clone().unwrap_or_else(na),
            self.rounds.map_or_else(na, |r| r.to_string()),
            format!("{:.3}", self.wall_ms),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: String,
    pub sizes: Vec<usize>,
    pub algorithm: Algorithm,
    pub params: AlgoParams,
    pub seed: u64,
}

/// One row per size, in size order. Fails if any output does not dominate.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &size in &config.sizes {
        let params = sweep_params(&config.family, size)?;
        let generated = generate(&config.family, &params, config.seed)?;
        let g = &generated.graph;
        let start = Instant::now();
        let outcome = run_algorithm(g, config.algorithm, &config.params)
            .with_context(|| format!("{} on {}", config.algorithm, generated.info.family))?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        anyhow::ensure!(
            is_dominating(g, &outcome.set)?,
            "{} output on {} does not dominate",
            config.algorithm,
            generated.info.family
        );
        let solved = ratio_if_solvable(g, &outcome.set)?;
        rows.push(SweepRow {
            n: g.n(),
            m: g.m(),
            family: generated.info.family.clone(),
            algorithm: config.algorithm.to_string(),
            params: config.params.describe(config.algorithm),
            output: outcome.set.len(),
            gamma: solved.map(|(g, _)| g),
            ratio: solved.map(|(_, r)| format_rational(r)),
            rounds: outcome.rounds,
            wall_ms,
        });
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}
