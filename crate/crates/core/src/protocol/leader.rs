use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::engine::Engine;
use super::families::ProtocolFamilies;
use super::message::Message;
use super::view::{Status, Views};
use crate::{Label, Result};

/// Parameters of one outer iteration `i` of leader election.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseParams {
    pub i: u32,
    /// Selector `(k, m, N)`.
    pub k: u64,
    pub m: u64,
    /// Degree bucket `[⌈Δ/(21·2^{i+1})⌉, ⌈Δ/2^i⌉]`.
    pub degree_low: usize,
    pub degree_high: usize,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// `⌈lg Δ⌉`, taken as 0 for `Δ <= 1`.
pub fn ceil_lg(delta: usize) -> u32 {
    if delta <= 1 {
        0
    } else {
        usize::BITS - (delta - 1).leading_zeros()
    }
}

/// Phases `i = 0..=⌈lg Δ⌉`.
pub fn election_phases(delta: usize) -> Vec<PhaseParams> {
    let d = delta as u64;
    (0..=ceil_lg(delta))
        .map(|i| {
            let p = 1u64 << i;
            PhaseParams {
                i,
                k: ceil_div(d, p) + 1,
                m: ceil_div(41 * d, 42 * p) + 2,
                degree_low: ceil_div(d, 21 * 2 * p) as usize,
                degree_high: ceil_div(d, p) as usize,
            }
        })
        .collect()
}

/// What happened in one phase, with the statuses at its end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElectionPhase {
    pub params: PhaseParams,
    pub selector_len: usize,
    pub elected: Vec<Label>,
    pub statuses: BTreeMap<Label, Status>,
}

/// Leader election. Each selector round is expanded into one execution of
/// the ssf, in which the round's candidates announce themselves.
pub fn leader_election(
    views: &mut Views,
    fam: &ProtocolFamilies,
    engine: &mut Engine,
) -> Result<Vec<ElectionPhase>> {
    let delta = views.values().next().map_or(0, |v| v.delta);
    let ssf_len = fam.ssf.len() as u64;
    let mut phases = Vec::new();
    for (params, sel) in election_phases(delta).into_iter().zip(&fam.selectors) {
        let phase = format!("leader-election/i={}", params.i);
        let start = engine.round();
        // Rounds in which a station is selected alone in its closed
        // neighbourhood; decided from the shared selector and its neighbour list.
        let mut chances: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
        for v in views.values() {
            let deg = v.degree();
            if v.status() != Status::Active || deg < params.degree_low || deg > params.degree_high {
                continue;
            }
            for j in sel.rounds_of(sel.element_of_label(v.label.get())) {
                if v.neighbors
                    .iter()
                    .all(|w| !sel.contains(j, sel.element_of_label(w.get())))
                {
                    chances.entry(j).or_default().push(v.label);
                }
            }
        }
        let mut elected = Vec::new();
        for (j, labels) in chances {
            let candidates: Vec<Label> = labels
                .into_iter()
                .filter(|l| views[l].status() == Status::Active)
                .collect();
            if candidates.is_empty() {
                continue;
            }
            engine.advance_to(start + j as u64 * ssf_len)?;
            let msgs: BTreeMap<Label, Message> = candidates
                .iter()
                .map(|&l| (l, Message::LeaderAnnounce { leader: l }))
                .collect();
            let out = engine.run_ssf(&phase, &fam.ssf, &msgs)?;
            for &c in &candidates {
                views
                    .get_mut(&c)
                    .expect("candidate has a view")
                    .set_status(Status::Leader)?;
                elected.push(c);
            }
            for (r, heard) in &out.inbox {
                let v = views.get_mut(r).expect("receiver has a view");
                for (s, m) in heard {
                    if matches!(m, Message::LeaderAnnounce { .. })
                        && v.neighbors.binary_search(s).is_ok()
                    {
                        v.leader_neighbors.insert(*s);
                        if v.status() == Status::Active {
                            v.set_status(Status::Inactive)?;
                        }
                    }
                }
            }
            for &c in &candidates {
                let nbrs = views[&c].neighbors.clone();
                engine.expect(&phase, "leader-announce", &out, c, &nbrs, false)?;
            }
        }
        engine.advance_to(start + sel.len() as u64 * ssf_len)?;
        phases.push(ElectionPhase {
            params,
            selector_len: sel.len(),
            elected,
            statuses: views.iter().map(|(&l, v)| (l, v.status())).collect(),
        });
    }
    Ok(phases)
}

/// Labels of stations that ended as leaders.
pub fn leaders(views: &Views) -> BTreeSet<Label> {
    views
        .values()
        .filter(|v| v.is_leader())
        .map(|v| v.label)
        .collect()
}
