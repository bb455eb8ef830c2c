use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::engine::Engine;
use super::families::ProtocolFamilies;
use super::message::{Hop3Report, Message};
use super::token::{token_passing, TokenPassingReport};
use super::view::{Route, Status, Views};
use crate::{Label, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeHopReport {
    pub first: TokenPassingReport,
    pub second: TokenPassingReport,
    /// Per leader, the `(x, y, b)` triples it announced.
    pub choices: BTreeMap<Label, Vec<(Label, Label, Label)>>,
}

/// Choice rule for one far leader given the pairs `⟨x, y⟩` (`x` adjacent to
/// the deciding leader, `y` adjacent to the far one). Take the smallest label
/// among all `x` and `y`; if it is an `x`, pair it with its smallest `y`,
/// otherwise pair the `y` with its smallest `x`.
pub fn choose_pair(pairs: &[(Label, Label)]) -> Option<(Label, Label)> {
    let min_x = pairs.iter().map(|p| p.0).min()?;
    let min_y = pairs.iter().map(|p| p.1).min()?;
    if min_x <= min_y {
        let y = pairs.iter().filter(|p| p.0 == min_x).map(|p| p.1).min()?;
        Some((min_x, y))
    } else {
        let x = pairs.iter().filter(|p| p.1 == min_y).map(|p| p.0).min()?;
        Some((x, min_y))
    }
}

fn non_leader_messages(views: &Views, f: impl Fn(Label) -> Hop3Report) -> BTreeMap<Label, Message> {
    views
        .values()
        .filter(|v| !v.is_leader())
        .map(|v| {
            (
                v.label,
                Message::Hop3Report {
                    node: v.label,
                    report: f(v.label),
                },
            )
        })
        .collect()
}

pub fn three_hop_connection(
    views: &mut Views,
    fam: &ProtocolFamilies,
    engine: &mut Engine,
) -> Result<ThreeHopReport> {
    let first_msgs = non_leader_messages(views, |u| {
        Hop3Report::NeighborLeaders(views[&u].leader_neighbors.iter().copied().collect())
    });
    let first = token_passing("three-hop/reports", views, &first_msgs, fam, engine)?;

    // Each non-leader keeps, per leader b it heard of, the least reporter y.
    let mut chosen: BTreeMap<Label, Vec<(Label, Label)>> = BTreeMap::new();
    for v in views.values().filter(|v| !v.is_leader()) {
        let mut best: BTreeMap<Label, Label> = BTreeMap::new();
        for (y, m) in first.received.get(&v.label).into_iter().flatten() {
            if let Message::Hop3Report {
                report: Hop3Report::NeighborLeaders(ls),
                ..
            } = m
            {
                for &b in ls {
                    let e = best.entry(b).or_insert(*y);
                    *e = (*e).min(*y);
                }
            }
        }
        chosen.insert(v.label, best.into_iter().map(|(b, y)| (y, b)).collect());
    }
    let second_msgs = non_leader_messages(views, |u| Hop3Report::ChosenPairs(chosen[&u].clone()));
    let second = token_passing("three-hop/pairs", views, &second_msgs, fam, engine)?;

    let mut choices: BTreeMap<Label, Vec<(Label, Label, Label)>> = BTreeMap::new();
    for v in views.values_mut().filter(|v| v.is_leader()) {
        let connected: BTreeSet<Label> = v
            .helper_assignments
            .iter()
            .flat_map(|r| {
                let (a, b) = r.ends();
                [a, b]
            })
            .collect();
        let mut candidates: BTreeMap<Label, Vec<(Label, Label)>> = BTreeMap::new();
        for (x, m) in second.received.get(&v.label).into_iter().flatten() {
            if let Message::Hop3Report {
                report: Hop3Report::ChosenPairs(ps),
                ..
            } = m
            {
                for &(y, b) in ps {
                    if b != v.label && !connected.contains(&b) {
                        candidates.entry(b).or_default().push((*x, y));
                    }
                }
            }
        }
        let mut triples = Vec::new();
        for (b, pairs) in candidates {
            if let Some((x, y)) = choose_pair(&pairs) {
                triples.push((x, y, b));
                v.helper_assignments
                    .insert(Route::new(vec![v.label, x, y, b]));
            }
        }
        choices.insert(v.label, triples);
    }

    let phase = "three-hop/choice";
    let msgs: BTreeMap<Label, Message> = choices
        .iter()
        .map(|(&l, t)| {
            (
                l,
                Message::Hop3Choice {
                    leader: l,
                    triples: t.clone(),
                },
            )
        })
        .collect();
    let out = engine.run_ssf(phase, &fam.ssf, &msgs)?;
    for (r, heard) in &out.inbox {
        let v = views.get_mut(r).expect("receiver has a view");
        if v.is_leader() {
            continue;
        }
        let me = v.label;
        for (_, m) in heard {
            if let Message::Hop3Choice { leader, triples } = m {
                for &(x, y, b) in triples.iter().filter(|t| t.0 == me) {
                    v.set_status(Status::Helper)?;
                    v.helper_assignments
                        .insert(Route::new(vec![*leader, x, y, b]));
                }
            }
        }
    }
    for &l in msgs.keys() {
        let nbrs = views[&l].neighbors.clone();
        engine.expect(phase, "hop3-choice", &out, l, &nbrs, false)?;
    }
    Ok(ThreeHopReport {
        first,
        second,
        choices,
    })
}
