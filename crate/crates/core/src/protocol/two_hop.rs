use std::collections::BTreeMap;

use super::engine::Engine;
use super::families::ProtocolFamilies;
use super::message::Message;
use super::view::{Route, Status, Views};
use crate::family::pair_element;
use crate::{Label, Result};

/// For `i = 1..=Δ` every leader announces its `i`-th neighbour; non-leaders
/// collect `N_v` for each neighbouring leader `v`.
pub fn neighborhood_inform(
    views: &mut Views,
    fam: &ProtocolFamilies,
    engine: &mut Engine,
) -> Result<()> {
    let delta = views.values().next().map_or(0, |v| v.delta);
    for i in 1..=delta {
        let phase = format!("neighborhood-inform/i={i}");
        let msgs: BTreeMap<Label, Message> = views
            .values()
            .filter(|v| v.is_leader())
            .filter_map(|v| {
                v.ith_neighbor(i).map(|nb| {
                    (
                        v.label,
                        Message::NeighborOfLeader {
                            leader: v.label,
                            neighbor: nb,
                        },
                    )
                })
            })
            .collect();
        let out = engine.run_ssf(&phase, &fam.ssf, &msgs)?;
        for (r, heard) in &out.inbox {
            let v = views.get_mut(r).expect("receiver has a view");
            if v.is_leader() {
                continue;
            }
            for (_, m) in heard {
                if let Message::NeighborOfLeader { leader, neighbor } = m {
                    let list = v.learned_neighborhoods.entry(*leader).or_default();
                    if !list.contains(neighbor) {
                        list.push(*neighbor);
                    }
                }
            }
        }
        for &l in msgs.keys() {
            let nbrs = views[&l].neighbors.clone();
            engine.expect(&phase, "neighbor-of-leader", &out, l, &nbrs, false)?;
        }
    }
    Ok(())
}

fn sorted(v: &[Label]) -> Vec<Label> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

/// Smallest label in `N_s ∩ N_t`.
fn min_common(a: &[Label], b: &[Label]) -> Option<Label> {
    let b = sorted(b);
    sorted(a).into_iter().find(|x| b.binary_search(x).is_ok())
}

/// Neighbourhood inform, then one execution of the pair ssf in which the
/// least common neighbour of each pair of leaders `s < t` claims the pair.
pub fn two_hop_connection(
    views: &mut Views,
    fam: &ProtocolFamilies,
    engine: &mut Engine,
) -> Result<()> {
    neighborhood_inform(views, fam, engine)?;
    let phase = "two-hop/pairs";
    let base = u64::from(views.values().next().map_or(1, |v| v.n_labels));
    let mut entries = Vec::new();
    let mut pair_of: BTreeMap<u64, (Label, Label)> = BTreeMap::new();
    for v in views.values().filter(|v| !v.is_leader()) {
        let known: Vec<(&Label, &Vec<Label>)> = v.learned_neighborhoods.iter().collect();
        for (a, (s, ns)) in known.iter().enumerate() {
            for (t, nt) in &known[a + 1..] {
                if min_common(ns, nt) == Some(v.label) {
                    let e = pair_element(u64::from(s.get()), u64::from(t.get()), base);
                    entries.push((v.label, e));
                    pair_of.insert(e, (**s, **t));
                }
            }
        }
    }
    let out = engine.run_family(phase, &fam.pair_ssf, &entries, |helper, es| {
        Message::HelperClaim {
            helper,
            pairs: es.iter().map(|e| pair_of[e]).collect(),
        }
    })?;
    let mut claims: BTreeMap<Label, Vec<(Label, Label)>> = BTreeMap::new();
    for &(u, e) in &entries {
        claims.entry(u).or_default().push(pair_of[&e]);
    }
    for (&u, pairs) in &claims {
        let v = views.get_mut(&u).expect("helper has a view");
        v.set_status(Status::Helper)?;
        for &(s, t) in pairs {
            v.helper_assignments.insert(Route::new(vec![s, u, t]));
        }
    }
    for (r, heard) in &out.inbox {
        let v = views.get_mut(r).expect("receiver has a view");
        if !v.is_leader() {
            continue;
        }
        for (_, m) in heard {
            if let Message::HelperClaim { helper, pairs } = m {
                for &(s, t) in pairs.iter().filter(|(s, t)| *s == v.label || *t == v.label) {
                    v.helper_assignments.insert(Route::new(vec![s, *helper, t]));
                }
            }
        }
    }
    for (&u, pairs) in &claims {
        for &(s, t) in pairs {
            engine.expect(phase, "helper-claim", &out, u, &[s, t], false)?;
        }
    }
    Ok(())
}
