use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate;
use super::generate::GeneratorSpec;
use super::run::{run_instance, Mode, RunConfig};
use crate::sinr::{range, SinrParams};
use crate::verifier::VerifierConfig;
use crate::Result;

/// Cartesian grid of generated runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n: Vec<usize>,
    pub n_labels: Vec<u32>,
    /// Target mean degree; sets the arena side.
    pub density: Vec<f64>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_params")]
    pub params: SinrParams,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub family_seed: u64,
    #[serde(default = "default_c_msg")]
    pub c_msg: u64,
}

fn default_params() -> SinrParams {
    SinrParams::default()
}

fn default_mode() -> Mode {
    Mode::Certified
}

fn default_c_msg() -> u64 {
    crate::protocol::EngineConfig::default().c_msg
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub n_labels: u32,
    pub density: f64,
    pub seed: u64,
    pub delta: usize,
    pub rounds_used: u64,
    pub busy_rounds: u64,
    /// `rounds_used / (Δ·(lg₂ N)²)`.
    pub c_r: f64,
    pub leaders: usize,
    pub helpers: usize,
    pub certified: bool,
    pub all_pass: bool,
}

impl SweepGrid {
    pub fn cells(&self) -> Vec<(usize, u32, f64, u64)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &nl in &self.n_labels {
                for &d in &self.density {
                    for &s in &self.seeds {
                        out.push((n, nl, d, s));
                    }
                }
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Runs every cell in parallel; rows come back in grid order.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    let r = range(&grid.params)?;
    grid.cells()
        .into_par_iter()
        .map(|(n, n_labels, density, seed)| {
            let arena = GeneratorSpec::arena_for_degree(n, density, r);
            let spec = GeneratorSpec::new(n, arena, n_labels, seed);
            let inst = generate::generate(&spec, &grid.params)?;
            let cfg = RunConfig {
                params: grid.params,
                family_seed: grid.family_seed,
                mode: grid.mode,
                verifier: VerifierConfig::default(),
                c_msg: grid.c_msg,
                ..RunConfig::generated(spec)
            };
            let out = run_instance(inst, &cfg)?;
            let rep = &out.report;
            Ok(SweepRow {
                n,
                n_labels,
                density,
                seed,
                delta: rep.instance.max_degree,
                rounds_used: rep.rounds_used,
                busy_rounds: rep.stats.busy_rounds,
                c_r: rep.rounds_ratio,
                leaders: rep.backbone.leaders.len(),
                helpers: rep.backbone.helpers.len(),
                certified: rep.certified,
                all_pass: rep.all_pass,
            })
        })
        .collect()
}

/// Comma-separated table with a header row.
pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| crate::Error::Parse(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Spread of fitted `C_r` values: `(min, median, max)`.
pub fn c_r_spread(rows: &[SweepRow]) -> Option<(f64, f64, f64)> {
    let mut v: Vec<f64> = rows.iter().map(|r| r.c_r).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = if v.len() % 2 == 1 {
        v[v.len() / 2]
    } else {
        (v[v.len() / 2 - 1] + v[v.len() / 2]) / 2.0
    };
    Some((v[0], mid, v[v.len() - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::run::run;

    #[test]
    fn one_cell_matches_a_direct_run() {
        let grid = SweepGrid {
            n: vec![12],
            n_labels: vec![64],
            density: vec![5.0],
            seeds: vec![9],
            params: SinrParams::default(),
            mode: Mode::Certified,
            family_seed: 0,
            c_msg: default_c_msg(),
        };
        let rows = sweep(&grid).unwrap();
        assert_eq!(rows.len(), 1);
        let arena = GeneratorSpec::arena_for_degree(12, 5.0, 1.0);
        let direct = run(&RunConfig::generated(GeneratorSpec::new(12, arena, 64, 9))).unwrap();
        assert_eq!(rows[0].rounds_used, direct.report.rounds_used);
        assert_eq!(rows[0].delta, direct.report.instance.max_degree);
        let csv = to_csv(&rows).unwrap();
        assert!(csv.starts_with("n,n_labels,density,seed,delta,rounds_used"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn grid_file_defaults() {
        let g =
            SweepGrid::from_json(r#"{"n":[10],"n_labels":[64,256],"density":[4.0],"seeds":[1,2]}"#)
                .unwrap();
        assert_eq!(g.cells().len(), 4);
        assert_eq!(g.mode, Mode::Certified);
    }
}
