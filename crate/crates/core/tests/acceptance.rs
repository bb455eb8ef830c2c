//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria 1-5, 7, 9 and 10 run on 200 seeded connected instances with
//! `n ∈ [2, 60]` over 64 labels in certified mode. Run with `--nocapture` to
//! see the lines.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use backbone::family::{construct_ssf_with, CertifyConfig};
use backbone::pipeline::{
    c_r_spread, construction_for, run, sweep, to_csv, GeneratorSpec, Mode, RunConfig, RunOutcome,
    SweepGrid, SweepRow, C_CAP,
};
use backbone::protocol::EngineConfig;
use backbone::sinr::{
    derive_dilution, distance, grid_box, range, receives, BoxCoord, PhysicalInstance, SinrParams,
    Station, BOX_TRANSMITTER_CAP,
};
use backbone::verifier::Verdict;
use backbone::Label;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INSTANCES: u64 = 200;
const N_LABELS: u32 = 64;
const PLACEMENTS: u64 = 1000;
const C_R_TOLERANCE: f64 = 0.25;
const SIZE_CAP_N: usize = 14;

fn config_for(seed: u64) -> RunConfig {
    let n = 2 + (seed as usize * 7919) % 59;
    let mean_degree = 6.0 + (seed % 10) as f64;
    let arena = GeneratorSpec::arena_for_degree(n, mean_degree, 1.0);
    RunConfig {
        family_seed: seed,
        ..RunConfig::generated(GeneratorSpec::new(n, arena, N_LABELS, seed))
    }
}

fn outcomes() -> &'static [RunOutcome] {
    static CELL: OnceLock<Vec<RunOutcome>> = OnceLock::new();
    CELL.get_or_init(|| {
        (0..INSTANCES)
            .map(|s| run(&config_for(s)).expect("run succeeds"))
            .collect()
    })
}

fn verdict<'a>(o: &'a RunOutcome, check: &str) -> &'a Verdict {
    o.report
        .verdicts
        .iter()
        .find(|v| v.check == check)
        .unwrap_or_else(|| panic!("no {check} verdict"))
}

/// Seeds whose verdict for `check` failed.
fn failures(check: &str) -> Vec<u64> {
    outcomes()
        .iter()
        .zip(0..)
        .filter(|(o, _)| !verdict(o, check).pass)
        .map(|(_, s)| s)
        .collect()
}

fn line(criterion: u32, pass: bool, detail: String) {
    println!(
        "criterion {criterion}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_leader_election() {
    let bad_dom = failures("leader-election");
    let bad_grid = failures("leader-grid");
    let n_range = outcomes().iter().map(|o| o.report.instance.n);
    let (lo, hi) = (n_range.clone().min().unwrap(), n_range.max().unwrap());
    let pass = bad_dom.is_empty() && bad_grid.is_empty();
    line(1, pass, format!("instances={INSTANCES} n=[{lo},{hi}] domination_violations={bad_dom:?} box_violations={bad_grid:?}"));
    assert!(outcomes()
        .iter()
        .all(|o| o.instance.n() >= 2 && o.instance.n() <= 60));
    assert!(pass);
}

#[test]
fn criterion_02_claim_one_per_bucket() {
    let bad = failures("claim-one");
    let checked: f64 = outcomes()
        .iter()
        .map(|o| verdict(o, "claim-one").metrics["assertions"])
        .sum();
    line(
        2,
        bad.is_empty(),
        format!("assertions={checked} violations={bad:?}"),
    );
    assert!(bad.is_empty());
}

#[test]
fn criterion_03_two_hop_helpers() {
    let bad = failures("two-hop");
    let pairs: f64 = outcomes()
        .iter()
        .map(|o| verdict(o, "two-hop").metrics["pairs"])
        .sum();
    line(
        3,
        bad.is_empty(),
        format!("leader_pairs={pairs} mismatches={bad:?}"),
    );
    assert!(bad.is_empty());
    assert!(pairs > 0.0, "no distance-2 leader pair exercised");
}

#[test]
fn criterion_04_three_hop_helpers() {
    let bad = failures("three-hop");
    let pairs: f64 = outcomes()
        .iter()
        .map(|o| verdict(o, "three-hop").metrics["pairs"])
        .sum();
    line(
        4,
        bad.is_empty(),
        format!("leader_pairs={pairs} mismatches={bad:?}"),
    );
    assert!(bad.is_empty());
    assert!(pairs > 0.0, "no distance-3 leader pair exercised");
}

/// Every message a token holder transmits reaches every listening neighbour,
/// read from the recorded delivery pairs.
fn token_delivery_gaps(o: &RunOutcome) -> usize {
    let g = backbone::sinr::build_graph(&o.instance).unwrap();
    let mut gaps = 0;
    for t in o.run.traces.iter().filter(|t| {
        t.phase.starts_with("three-hop/reports") || t.phase.starts_with("three-hop/pairs")
    }) {
        let senders: Vec<Label> = t.transmitters.iter().map(|x| x.label).collect();
        for &s in &senders {
            for w in g.neighbor_labels(s) {
                if !senders.contains(&w) && t.deliveries.binary_search(&(s, w)).is_err() {
                    gaps += 1;
                }
            }
        }
    }
    gaps
}

#[test]
fn criterion_05_token_passing() {
    let bad = failures("token-passing");
    let max_box = outcomes()
        .iter()
        .map(|o| verdict(o, "token-passing").metrics["max_holders_per_box"])
        .fold(0.0, f64::max);
    let gaps: usize = outcomes().iter().map(token_delivery_gaps).sum();
    let pass = bad.is_empty() && gaps == 0 && max_box <= f64::from(BOX_TRANSMITTER_CAP);
    line(
        5,
        pass,
        format!("max_holders_per_box={max_box} delivery_gaps={gaps} violations={bad:?}"),
    );
    assert!(pass);
}

/// Random placement with at most 21 stations per pivotal box; every station
/// is an intended transmitter.
fn capped_placement(
    rng: &mut ChaCha8Rng,
    params: &SinrParams,
    max_n: usize,
    side: (f64, f64),
) -> PhysicalInstance {
    let x = range(params).unwrap() / std::f64::consts::SQRT_2;
    let arena = rng.gen_range(side.0..side.1);
    let target = rng.gen_range(2..=max_n);
    let mut per_box: BTreeMap<BoxCoord, u32> = BTreeMap::new();
    let mut stations = Vec::new();
    for _ in 0..target * 50 {
        if stations.len() == target {
            break;
        }
        let (px, py) = (rng.gen_range(0.0..arena), rng.gen_range(0.0..arena));
        let b = per_box
            .entry(grid_box(backbone::sinr::Point { x: px, y: py }, x))
            .or_default();
        if *b < BOX_TRANSMITTER_CAP {
            *b += 1;
            stations.push(Station::new(stations.len() as u32 + 1, px, py));
        }
    }
    let n = stations.len() as u32;
    PhysicalInstance::new(stations, *params, n.max(N_LABELS)).unwrap()
}

/// Transmitters in one round that fail to reach some station within range.
fn round_failures(inst: &PhysicalInstance, transmitters: &[Label], r: f64) -> usize {
    let mut bad = 0;
    for &s in transmitters {
        let ps = inst.position(s).unwrap();
        for t in inst.stations() {
            if t.label != s
                && !transmitters.contains(&t.label)
                && distance(ps, t.position()) <= r
                && !receives(s, t.label, transmitters, inst).unwrap()
            {
                bad += 1;
            }
        }
    }
    bad
}

#[test]
fn criterion_06_dilution() {
    let params = SinrParams::default();
    let r = range(&params).unwrap();
    let dil = derive_dilution(&params, BOX_TRANSMITTER_CAP).unwrap();
    let x = r / std::f64::consts::SQRT_2;
    let mut rng = ChaCha8Rng::seed_from_u64(6);

    // Certified ssf rounds as used in certified runs.
    let c = dil.c.min(C_CAP);
    let ssf = construct_ssf_with(
        u64::from(N_LABELS),
        c,
        6,
        &construction_for(Mode::Certified, N_LABELS, true),
    )
    .unwrap();
    assert!(ssf.is_certified());
    let (mut ssf_fail, mut ssf_tx) = (0, 0);
    for _ in 0..PLACEMENTS {
        let inst = capped_placement(&mut rng, &params, N_LABELS as usize, (0.5, 4.0));
        for j in 0..ssf.len() {
            let tx: Vec<Label> = inst
                .labels()
                .filter(|&l| ssf.contains(j, ssf.element_of_label(l.0)))
                .collect();
            ssf_tx += tx.len();
            ssf_fail += round_failures(&inst, &tx, r);
        }
    }

    // Concurrent transmitters: one slot per box rank, boxes congruent mod 2d+1.
    let period = i64::from(2 * dil.d + 1);
    let (mut dil_fail, mut dil_tx, mut max_concurrent) = (0, 0, 0);
    for _ in 0..PLACEMENTS {
        let inst = capped_placement(&mut rng, &params, 600, (6.0, 24.0));
        let mut rank: BTreeMap<BoxCoord, usize> = BTreeMap::new();
        let mut rounds: BTreeMap<(usize, i64, i64), Vec<Label>> = BTreeMap::new();
        for s in inst.stations() {
            let b = grid_box(s.position(), x);
            let k = rank.entry(b).or_default();
            rounds
                .entry((*k, b.0.rem_euclid(period), b.1.rem_euclid(period)))
                .or_default()
                .push(s.label);
            *k += 1;
        }
        for tx in rounds.values() {
            dil_tx += tx.len();
            max_concurrent = max_concurrent.max(tx.len());
            dil_fail += round_failures(&inst, tx, r);
        }
    }
    let pass = ssf_fail == 0 && dil_fail == 0 && max_concurrent > 1;
    line(
        6,
        pass,
        format!(
            "placements={PLACEMENTS}x2 d={} c={} ssf_len={} ssf_transmissions={ssf_tx} diluted_transmissions={dil_tx} max_concurrent={max_concurrent} failures={}",
            dil.d,
            c,
            ssf.len(),
            ssf_fail + dil_fail
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_07_backbone_properties() {
    let hard = [
        "dominating",
        "connected-backbone",
        "constant-degree",
        "diameter",
    ];
    let bad: Vec<(u64, &str)> = hard
        .iter()
        .flat_map(|c| failures(c).into_iter().map(move |s| (s, *c)))
        .collect();
    let small: Vec<&RunOutcome> = outcomes()
        .iter()
        .filter(|o| o.report.instance.n <= SIZE_CAP_N)
        .collect();
    let c_s = small
        .iter()
        .map(|o| verdict(o, "size-ratio").metrics["size_ratio"])
        .fold(0.0, f64::max);
    assert!(small
        .iter()
        .all(|o| verdict(o, "size-ratio").metrics["exact"] == 1.0));
    let max_deg = outcomes()
        .iter()
        .map(|o| verdict(o, "constant-degree").metrics["max_degree"])
        .fold(0.0, f64::max);
    let diam = outcomes()
        .iter()
        .map(|o| verdict(o, "diameter").metrics["diameter_ratio"])
        .fold(0.0, f64::max);
    line(
        7,
        bad.is_empty(),
        format!("violations={bad:?} max_backbone_degree={max_deg} max_diameter_ratio={diam:.3} exact_cds_instances={} C_s={c_s:.3}", small.len()),
    );
    assert!(bad.is_empty());
}

fn sweep_grid() -> SweepGrid {
    SweepGrid {
        n: vec![8, 16, 30],
        n_labels: vec![64, 256, 1024],
        density: vec![3.0, 6.0, 12.0, 18.0],
        seeds: vec![0, 1, 2],
        params: SinrParams::default(),
        mode: Mode::Certified,
        family_seed: 0,
        c_msg: EngineConfig::default().c_msg,
    }
}

fn sweep_rows() -> &'static [SweepRow] {
    static CELL: OnceLock<Vec<SweepRow>> = OnceLock::new();
    CELL.get_or_init(|| {
        sweep(&sweep_grid())
            .expect("sweep runs")
            .into_iter()
            .filter(|r| (4..=24).contains(&r.delta))
            .collect()
    })
}

#[test]
fn criterion_08_round_complexity() {
    let rows = sweep_rows();
    let (lo, med, hi) = c_r_spread(rows).expect("non-empty sweep");
    let deltas = rows.iter().map(|r| r.delta);
    let (dlo, dhi) = (deltas.clone().min().unwrap(), deltas.max().unwrap());
    let mut by_labels: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    for r in rows {
        let e = by_labels.entry(r.n_labels).or_insert((f64::INFINITY, 0.0));
        *e = (e.0.min(r.c_r), e.1.max(r.c_r));
    }
    let pass = lo >= (1.0 - C_R_TOLERANCE) * med && hi <= (1.0 + C_R_TOLERANCE) * med;
    let per: Vec<String> = by_labels
        .iter()
        .map(|(n, (a, b))| format!("N={n}:[{a:.1},{b:.1}]"))
        .collect();
    line(
        8,
        pass,
        format!(
            "cells={} delta=[{dlo},{dhi}] C_r min={lo:.1} median={med:.1} max={hi:.1} {}",
            rows.len(),
            per.join(" ")
        ),
    );
    assert!(rows.iter().all(|r| r.all_pass), "sweep runs must verify");
    assert!(pass, "C_r spread exceeds ±25% of the median");
}

#[test]
fn criterion_09_family_certification() {
    let exhaustive = CertifyConfig {
        force_exhaustive: true,
        ..Default::default()
    };
    let mut bad = Vec::new();
    let mut checked = 0;
    for (o, s) in outcomes().iter().zip(0u64..) {
        for (role, cert) in o.families.recertify(&exhaustive) {
            checked += 1;
            if !cert.certified() {
                bad.push(format!("{s}:{role}"));
            }
        }
    }
    let sweep_bad: Vec<(u32, u64)> = sweep_rows()
        .iter()
        .filter(|r| !r.certified)
        .map(|r| (r.n_labels, r.seed))
        .collect();
    let pass = bad.is_empty() && sweep_bad.is_empty();
    line(
        9,
        pass,
        format!("families_rechecked={checked} uncertified={bad:?} sweep_uncertified={sweep_bad:?}"),
    );
    assert!(pass);
}

fn read_all(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    [
        "instance.json",
        "trace.jsonl",
        "backbone.json",
        "report.json",
    ]
    .iter()
    .map(|f| (f.to_string(), std::fs::read(dir.join(f)).unwrap()))
    .collect()
}

#[test]
fn criterion_10_determinism() {
    let mut differing = Vec::new();
    for seed in [3u64, 57, 141] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for dir in [&a, &b] {
            run(&RunConfig {
                out_dir: Some(dir.path().to_path_buf()),
                ..config_for(seed)
            })
            .unwrap();
        }
        let (fa, fb) = (read_all(a.path()), read_all(b.path()));
        for (name, bytes) in &fa {
            if bytes.is_empty() || fb[name] != *bytes {
                differing.push(format!("{seed}:{name}"));
            }
        }
    }
    let grid = SweepGrid {
        n_labels: vec![64],
        seeds: vec![0, 1],
        ..sweep_grid()
    };
    let csv_same =
        to_csv(&sweep(&grid).unwrap()).unwrap() == to_csv(&sweep(&grid).unwrap()).unwrap();
    let pass = differing.is_empty() && csv_same;
    line(
        10,
        pass,
        format!("runs=3x2 differing={differing:?} sweep_csv_identical={csv_same}"),
    );
    assert!(pass);
}
