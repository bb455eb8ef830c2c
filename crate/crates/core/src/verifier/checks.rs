use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use super::cds::{greedy_cds, min_cds, EXACT_CDS_CAP};
use super::Verdict;
use crate::protocol::BackboneResult;
use crate::sinr::{pivotal_offsets_within_hops, CommGraph, GridIndex, PhysicalInstance};
use crate::{Error, Label, Result};

fn member_mask(result: &BackboneResult, g: &CommGraph) -> Vec<bool> {
    let m = result.members();
    g.labels().iter().map(|l| m.contains(l)).collect()
}

/// Every station is in the backbone or adjacent to a leader.
pub fn check_dominating(result: &BackboneResult, g: &CommGraph) -> Verdict {
    let members = result.members();
    let undominated: Vec<Label> = g
        .labels()
        .iter()
        .copied()
        .filter(|l| {
            !members.contains(l)
                && !g
                    .neighbor_labels(*l)
                    .iter()
                    .any(|w| result.leaders.contains(w))
        })
        .collect();
    let overlap: Vec<Label> = result
        .leaders
        .intersection(&result.helpers)
        .copied()
        .collect();
    let witness = if !undominated.is_empty() {
        Some(json!({ "undominated": undominated }))
    } else if !overlap.is_empty() {
        Some(json!({ "leader_and_helper": overlap }))
    } else {
        None
    };
    Verdict::from_witness("dominating", witness).metric("undominated", undominated.len() as f64)
}

/// Backbone edges are communication edges and the backbone (with all edges
/// induced among its members) is connected.
pub fn check_connected_backbone(result: &BackboneResult, g: &CommGraph) -> Verdict {
    let bad: Vec<(Label, Label)> = result
        .edges
        .iter()
        .copied()
        .filter(|&(a, b)| !g.has_edge(a, b))
        .collect();
    if !bad.is_empty() {
        return Verdict::fail("connected-backbone", json!({ "non_edges": bad }));
    }
    let mask = member_mask(result, g);
    let Some(start) = mask.iter().position(|&m| m) else {
        return Verdict::fail("connected-backbone", json!({ "empty_backbone": true }));
    };
    let dist = g.bfs_within(start, &mask);
    let unreached: Vec<Label> = (0..g.n())
        .filter(|&i| mask[i] && dist[i].is_none())
        .map(|i| g.label(i))
        .collect();
    let witness = (!unreached.is_empty())
        .then(|| json!({ "reached_from": g.label(start), "unreached": unreached }));
    Verdict::from_witness("connected-backbone", witness)
        .metric("members", result.members().len() as f64)
}

/// `B(3) × 2`: pivotal boxes within three hops (each holds at most one
/// leader) times the helpers a leader pair can add.
pub fn default_degree_bound() -> usize {
    pivotal_offsets_within_hops(3).len() * 2
}

/// Largest degree inside the backbone is at most `bound`.
pub fn check_constant_degree(result: &BackboneResult, g: &CommGraph, bound: usize) -> Verdict {
    let mask = member_mask(result, g);
    let mut worst: Option<(Label, usize)> = None;
    for i in (0..g.n()).filter(|&i| mask[i]) {
        let d = g.neighbors(i).iter().filter(|&&j| mask[j]).count();
        if worst.is_none_or(|(_, w)| d > w) {
            worst = Some((g.label(i), d));
        }
    }
    let max = worst.map_or(0, |w| w.1);
    let witness = worst
        .filter(|w| w.1 > bound)
        .map(|(l, d)| json!({ "station": l, "degree": d }));
    Verdict::from_witness("constant-degree", witness)
        .metric("max_degree", max as f64)
        .metric("bound", bound as f64)
}

/// Backbone hop diameter at most `factor · D + slack`.
pub fn check_diameter(
    result: &BackboneResult,
    g: &CommGraph,
    factor: f64,
    slack: usize,
) -> Verdict {
    let d = g.diameter();
    let mask = member_mask(result, g);
    let b = g.induced_diameter(&mask);
    let (Some(d), Some(b)) = (d, b) else {
        return Verdict::fail(
            "diameter",
            json!({ "graph_diameter": d, "backbone_diameter": b, "reason": "disconnected" }),
        );
    };
    let limit = factor * d as f64 + slack as f64;
    let witness = (b as f64 > limit)
        .then(|| json!({ "graph_diameter": d, "backbone_diameter": b, "limit": limit }));
    let ratio = if d == 0 { 1.0 } else { b as f64 / d as f64 };
    Verdict::from_witness("diameter", witness)
        .metric("graph_diameter", d as f64)
        .metric("backbone_diameter", b as f64)
        .metric("diameter_ratio", ratio)
        .metric("limit", limit)
}

/// `|backbone| <= size_factor · |minimum CDS|`, exact for `n <= 14`.
/// Larger graphs report the ratio to a greedy CDS and pass unless
/// `force_exact` is set, which is an error.
pub fn check_size_ratio(
    result: &BackboneResult,
    g: &CommGraph,
    size_factor: f64,
    force_exact: bool,
) -> Result<Verdict> {
    let size = result.members().len();
    if g.n() <= EXACT_CDS_CAP {
        let opt = min_cds(g)?;
        let ratio = size as f64 / opt.len() as f64;
        let witness = (ratio > size_factor).then(|| {
            json!({ "backbone_size": size, "min_cds": opt.iter().map(|&i| g.label(i)).collect::<Vec<_>>() })
        });
        return Ok(Verdict::from_witness("size-ratio", witness)
            .metric("exact", 1.0)
            .metric("backbone_size", size as f64)
            .metric("min_cds_size", opt.len() as f64)
            .metric("size_ratio", ratio)
            .metric("size_factor", size_factor));
    }
    if force_exact {
        return Err(Error::ExactTooLarge {
            n: g.n(),
            cap: EXACT_CDS_CAP,
        });
    }
    let greedy = greedy_cds(g).len();
    Ok(Verdict::pass("size-ratio")
        .metric("exact", 0.0)
        .metric("backbone_size", size as f64)
        .metric("greedy_cds_size", greedy as f64)
        .metric("size_ratio", size as f64 / greedy as f64)
        .metric("size_factor", size_factor))
}

/// No pivotal-grid box holds two leaders (ground-truth positions).
pub fn check_leader_grid(leaders: &BTreeSet<Label>, inst: &PhysicalInstance) -> Result<Verdict> {
    let grid = GridIndex::pivotal(inst)?;
    let mut per_box: BTreeMap<(i64, i64), Vec<Label>> = BTreeMap::new();
    for &l in leaders {
        if let Some(b) = grid.box_of(l) {
            per_box.entry(b).or_default().push(l);
        }
    }
    let crowded = per_box.iter().find(|(_, ls)| ls.len() > 1);
    let witness = crowded.map(|(b, ls)| json!({ "box": [b.0, b.1], "leaders": ls }));
    let max = per_box.values().map(Vec::len).max().unwrap_or(0);
    Ok(Verdict::from_witness("leader-grid", witness).metric("max_leaders_per_box", max as f64))
}
