//! Ground-truth checks of each protocol stage's postconditions.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use super::Verdict;
use crate::protocol::{ProtocolRun, Route, Status, TokenPassingReport};
use crate::sinr::{CommGraph, GridIndex, PhysicalInstance, BOX_TRANSMITTER_CAP};
use crate::{Label, Result};

fn nbrs(g: &CommGraph, l: Label) -> BTreeSet<Label> {
    g.neighbor_labels(l).into_iter().collect()
}

/// Leader pairs `(a, b)`, `a < b`, at hop distance exactly `hops`.
pub fn leader_pairs_at(
    g: &CommGraph,
    leaders: &BTreeSet<Label>,
    hops: usize,
) -> Vec<(Label, Label)> {
    let mut out = Vec::new();
    for &a in leaders {
        let dist = g.bfs(g.index_of(a).expect("leader in graph"));
        for &b in leaders.range(a..).skip(1) {
            if dist[g.index_of(b).expect("leader in graph")] == Some(hops) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Expected two-hop helper for every leader pair at distance 2: the least
/// common neighbour.
pub fn two_hop_oracle(g: &CommGraph, leaders: &BTreeSet<Label>) -> BTreeMap<(Label, Label), Route> {
    leader_pairs_at(g, leaders, 2)
        .into_iter()
        .map(|(a, b)| {
            let h = *nbrs(g, a)
                .intersection(&nbrs(g, b))
                .next()
                .expect("distance-2 pair has a common neighbour");
            ((a, b), Route::new(vec![a, h, b]))
        })
        .collect()
}

/// Expected route for every leader pair at distance 3: the least label `m`
/// on any three-hop path, joined with its least neighbour adjacent to the
/// far leader.
pub fn three_hop_oracle(
    g: &CommGraph,
    leaders: &BTreeSet<Label>,
) -> BTreeMap<(Label, Label), Route> {
    let mut out = BTreeMap::new();
    for (a, b) in leader_pairs_at(g, leaders, 3) {
        let (na, nb) = (nbrs(g, a), nbrs(g, b));
        let mut inner = BTreeSet::new();
        for &x in &na {
            for &y in &nb {
                if g.has_edge(x, y) {
                    inner.insert(x);
                    inner.insert(y);
                }
            }
        }
        let m = *inner.first().expect("distance-3 pair has a path");
        let route = if na.contains(&m) {
            let y = *nbrs(g, m)
                .intersection(&nb)
                .next()
                .expect("m continues to b");
            vec![a, m, y, b]
        } else {
            let x = *nbrs(g, m)
                .intersection(&na)
                .next()
                .expect("m continues to a");
            vec![a, x, m, b]
        };
        out.insert((a, b), Route::new(route));
    }
    out
}

/// Every station is a leader or next to one, and no two leaders are adjacent,
/// at the end of leader election.
pub fn check_leader_election(run: &ProtocolRun, g: &CommGraph) -> Verdict {
    let Some(last) = run.election.last() else {
        return Verdict::fail("leader-election", json!({ "reason": "no phases ran" }));
    };
    let is_leader = |l: &Label| last.statuses.get(l) == Some(&Status::Leader);
    let uncovered: Vec<Label> = g
        .labels()
        .iter()
        .copied()
        .filter(|l| !is_leader(l) && !g.neighbor_labels(*l).iter().any(is_leader))
        .collect();
    let adjacent: Vec<(Label, Label)> = g
        .edges()
        .into_iter()
        .filter(|(a, b)| is_leader(a) && is_leader(b))
        .collect();
    let witness = if !uncovered.is_empty() {
        Some(json!({ "uncovered": uncovered }))
    } else if !adjacent.is_empty() {
        Some(json!({ "adjacent_leaders": adjacent }))
    } else {
        None
    };
    let leaders = last
        .statuses
        .values()
        .filter(|s| **s == Status::Leader)
        .count();
    Verdict::from_witness("leader-election", witness).metric("leaders", leaders as f64)
}

/// After phase `i`, stations of degree at least `⌈Δ/2^{i+1}⌉` are leaders or
/// next to one.
pub fn check_claim_one(run: &ProtocolRun, g: &CommGraph) -> Verdict {
    let delta = g.max_degree() as u64;
    let mut checked = 0usize;
    for phase in &run.election {
        let i = phase.params.i;
        let floor = delta.div_ceil(1u64 << (i + 1)) as usize;
        let is_leader = |l: &Label| phase.statuses.get(l) == Some(&Status::Leader);
        for (k, &l) in g.labels().iter().enumerate() {
            if g.degree(k) < floor {
                continue;
            }
            checked += 1;
            if !is_leader(&l) && !g.neighbor_labels(l).iter().any(is_leader) {
                return Verdict::fail(
                    "claim-one",
                    json!({ "phase": i, "station": l, "degree": g.degree(k), "floor": floor }),
                );
            }
        }
    }
    Verdict::pass("claim-one")
        .metric("phases", run.election.len() as f64)
        .metric("assertions", checked as f64)
}

fn routes_between(run: &ProtocolRun, holder: Label, ends: (Label, Label)) -> Vec<&Route> {
    run.views[&holder]
        .helper_assignments
        .iter()
        .filter(|r| r.ends() == ends)
        .collect()
}

fn check_routes(
    name: &str,
    run: &ProtocolRun,
    oracle: &BTreeMap<(Label, Label), Route>,
    len: usize,
) -> Verdict {
    for (&(a, b), want) in oracle {
        for end in [a, b] {
            let got = routes_between(run, end, (a, b));
            if got.len() != 1 || got[0] != want {
                return Verdict::fail(
                    name,
                    json!({ "pair": [a, b], "at": end, "expected": want, "found": got }),
                );
            }
        }
        if let Some(h) = want
            .helpers()
            .iter()
            .find(|h| !run.result.helpers.contains(h))
        {
            return Verdict::fail(name, json!({ "pair": [a, b], "helper_not_marked": h }));
        }
    }
    // No leader records a route of this length for any other pair.
    for v in run.views.values().filter(|v| v.is_leader()) {
        if let Some(r) = v
            .helper_assignments
            .iter()
            .find(|r| r.0.len() == len && !oracle.contains_key(&r.ends()))
        {
            return Verdict::fail(name, json!({ "unexpected_route": r, "at": v.label }));
        }
    }
    Verdict::pass(name).metric("pairs", oracle.len() as f64)
}

/// Every leader pair at distance 2 shares exactly the least common neighbour
/// as helper, recorded at both leaders.
pub fn check_two_hop(run: &ProtocolRun, g: &CommGraph) -> Verdict {
    check_routes("two-hop", run, &two_hop_oracle(g, &run.result.leaders), 3)
}

/// Every leader pair at distance 3 agrees on the oracle's two helpers.
pub fn check_three_hop(run: &ProtocolRun, g: &CommGraph) -> Verdict {
    check_routes(
        "three-hop",
        run,
        &three_hop_oracle(g, &run.result.leaders),
        4,
    )
}

fn token_violation(
    rep: &TokenPassingReport,
    run: &ProtocolRun,
    g: &CommGraph,
    grid: &GridIndex,
) -> (Option<serde_json::Value>, usize) {
    let mut max = 0;
    for (gi, holders) in &rep.holders {
        for (b, &count) in &grid.count_per_box(holders) {
            max = max.max(count);
            if count > BOX_TRANSMITTER_CAP as usize {
                return (
                    Some(json!({ "ssf": gi, "box": [b.0, b.1], "holders": count })),
                    max,
                );
            }
        }
    }
    for v in run.views.values().filter(|v| !v.is_leader()) {
        if !rep.transmitted.contains(&v.label) {
            return (Some(json!({ "never_transmitted": v.label })), max);
        }
        for w in g.neighbor_labels(v.label) {
            let heard = rep
                .received
                .get(&w)
                .is_some_and(|got| got.iter().any(|(s, _)| *s == v.label));
            if !heard {
                return (Some(json!({ "sender": v.label, "missed_by": w })), max);
            }
        }
    }
    (None, max)
}

/// At most 21 token holders per pivotal box in each execution, and every
/// non-leader's message reached all of its neighbours, in both rounds of
/// token passing.
pub fn check_token_passing(
    run: &ProtocolRun,
    inst: &PhysicalInstance,
    g: &CommGraph,
) -> Result<Verdict> {
    let grid = GridIndex::pivotal(inst)?;
    let mut max = 0;
    for (name, rep) in [
        ("reports", &run.three_hop.first),
        ("pairs", &run.three_hop.second),
    ] {
        let (w, m) = token_violation(rep, run, g, &grid);
        max = max.max(m);
        if let Some(mut w) = w {
            w["run"] = json!(name);
            return Ok(Verdict::fail("token-passing", w).metric("max_holders_per_box", max as f64));
        }
    }
    Ok(Verdict::pass("token-passing").metric("max_holders_per_box", max as f64))
}

/// Every expected reception happened and every message respected the size bound.
pub fn check_deliveries(run: &ProtocolRun) -> Verdict {
    let s = &run.stats;
    let witness = if let Some(m) = run.misses.first() {
        Some(json!({ "miss": m, "total_misses": run.misses.len() }))
    } else if s.max_message_bits > s.message_limit_bits {
        Some(json!({ "max_message_bits": s.max_message_bits, "limit": s.message_limit_bits }))
    } else {
        None
    };
    Verdict::from_witness("deliveries", witness)
        .metric("misses", run.misses.len() as f64)
        .metric("max_message_bits", s.max_message_bits as f64)
        .metric("message_limit_bits", s.message_limit_bits as f64)
}
