use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::sinr::{CommGraph, PhysicalInstance, SinrParams, Station};
use crate::{Error, Result};

/// Seeded random placement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    /// Side of the square arena `[0, arena)²`, in meters.
    pub arena: f64,
    /// Smallest allowed distance between two stations.
    pub min_spacing: f64,
    pub n_labels: u32,
    pub seed: u64,
    /// Whole placements tried before giving up.
    pub max_attempts: u32,
}

impl GeneratorSpec {
    pub fn new(n: usize, arena: f64, n_labels: u32, seed: u64) -> Self {
        GeneratorSpec {
            n,
            arena,
            min_spacing: 1e-3,
            n_labels,
            seed,
            max_attempts: 10_000,
        }
    }

    /// Arena side giving about `mean_degree` neighbours per station for a
    /// range of `r`: `n·π·r² / side² = mean_degree`.
    pub fn arena_for_degree(n: usize, mean_degree: f64, r: f64) -> f64 {
        (n as f64 * std::f64::consts::PI * r * r / mean_degree).sqrt()
    }
}

const POINT_TRIES: u32 = 1_000;

/// Uniform placement with distinct labels drawn from `[1..N]`, retried until
/// the communication graph is connected.
pub fn generate(spec: &GeneratorSpec, params: &SinrParams) -> Result<PhysicalInstance> {
    params.validate()?;
    if spec.n == 0 || !spec.arena.is_finite() || spec.arena <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and a positive arena (n={}, arena={})",
            spec.n, spec.arena
        )));
    }
    if spec.n as u64 > u64::from(spec.n_labels) {
        return Err(Error::InvalidArgument(format!(
            "{} stations cannot get distinct labels from [1..{}]",
            spec.n, spec.n_labels
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let min2 = spec.min_spacing * spec.min_spacing;
    let mut placed_ok = 0;
    for _ in 0..spec.max_attempts {
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(spec.n);
        'points: while pts.len() < spec.n {
            for _ in 0..POINT_TRIES {
                let p = (
                    rng.gen_range(0.0..spec.arena),
                    rng.gen_range(0.0..spec.arena),
                );
                if pts
                    .iter()
                    .all(|q| (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2) >= min2)
                {
                    pts.push(p);
                    continue 'points;
                }
            }
            break;
        }
        let labels = sample(&mut rng, spec.n_labels as usize, spec.n);
        if pts.len() < spec.n {
            continue;
        }
        placed_ok += 1;
        let stations: Vec<Station> = labels
            .iter()
            .zip(&pts)
            .map(|(l, &(x, y))| Station::new(l as u32 + 1, x, y))
            .collect();
        let inst = PhysicalInstance::new(stations, *params, spec.n_labels)?;
        if CommGraph::from_instance(&inst)?.is_connected() {
            return Ok(inst);
        }
    }
    Err(Error::RetryCap {
        attempts: spec.max_attempts,
        accepted: placed_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sinr::build_graph;
    use std::collections::BTreeSet;

    #[test]
    fn single_station() {
        let i = generate(&GeneratorSpec::new(1, 10.0, 8, 0), &SinrParams::default()).unwrap();
        assert_eq!(i.n(), 1);
    }

    #[test]
    fn deterministic_connected_distinct() {
        let spec = GeneratorSpec::new(30, 4.0, 64, 42);
        let a = generate(&spec, &SinrParams::default()).unwrap();
        let b = generate(&spec, &SinrParams::default()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(build_graph(&a).is_ok());
        let labels: BTreeSet<u32> = a.stations().iter().map(|s| s.label.get()).collect();
        assert_eq!(labels.len(), 30);
        assert!(labels.iter().all(|&l| (1..=64).contains(&l)));
        let other = generate(&GeneratorSpec { seed: 43, ..spec }, &SinrParams::default()).unwrap();
        assert_ne!(a.to_json().unwrap(), other.to_json().unwrap());
    }

    #[test]
    fn sparse_arena_hits_the_cap() {
        let spec = GeneratorSpec {
            max_attempts: 5,
            ..GeneratorSpec::new(10, 1000.0, 64, 1)
        };
        assert!(matches!(
            generate(&spec, &SinrParams::default()),
            Err(Error::RetryCap {
                attempts: 5,
                accepted: 5
            })
        ));
    }

    #[test]
    fn bad_arguments() {
        assert!(generate(&GeneratorSpec::new(0, 1.0, 8, 0), &SinrParams::default()).is_err());
        assert!(generate(&GeneratorSpec::new(9, 1.0, 8, 0), &SinrParams::default()).is_err());
        assert!(generate(&GeneratorSpec::new(2, -1.0, 8, 0), &SinrParams::default()).is_err());
    }
}
