use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::engine::Engine;
use super::families::ProtocolFamilies;
use super::message::Message;
use super::view::Views;
use crate::{Label, Result};

/// Observations from one token-passing run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenPassingReport {
    /// Per ssf execution `g` (1-based) in which tokens were held, the holders
    /// that transmitted.
    pub holders: Vec<(usize, Vec<Label>)>,
    /// Per listener, `(sender, message)` heard in message slots.
    pub received: BTreeMap<Label, Vec<(Label, Message)>>,
    /// Stations that transmitted their message at least once.
    pub transmitted: BTreeSet<Label>,
    pub grants: usize,
}

/// Token passing over `4Δ` ssf executions `g = 1..=4Δ`.
///
/// Leaders grant a token to their `i`-th neighbour in execution `4i − 2` and
/// stay silent otherwise. A non-leader's iteration `j` covers executions
/// `2j − 1` (transmit its message if it holds tokens) and `2j` (return the
/// tokens, or listen for one).
pub fn token_passing(
    name: &str,
    views: &Views,
    msgs: &BTreeMap<Label, Message>,
    fam: &ProtocolFamilies,
    engine: &mut Engine,
) -> Result<TokenPassingReport> {
    let delta = views.values().next().map_or(0, |v| v.delta);
    let mut report = TokenPassingReport::default();
    let mut holding: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
    for g in 1..=4 * delta {
        let phase = format!("{name}/g={g}");
        match g % 4 {
            2 => {
                let i = (g + 2) / 4;
                let grants: BTreeMap<Label, Message> = views
                    .values()
                    .filter(|v| v.is_leader())
                    .filter_map(|v| {
                        v.ith_neighbor(i).map(|h| {
                            (
                                v.label,
                                Message::TokenGrant {
                                    leader: v.label,
                                    holder: h,
                                },
                            )
                        })
                    })
                    .collect();
                let out = engine.run_ssf(&phase, &fam.ssf, &grants)?;
                for (r, heard) in &out.inbox {
                    for (_, m) in heard {
                        if let Message::TokenGrant { leader, holder } = m {
                            if holder == r && !views[r].is_leader() {
                                holding.entry(*r).or_default().insert(*leader);
                            }
                        }
                    }
                }
                for (&l, m) in &grants {
                    if let Message::TokenGrant { holder, .. } = m {
                        engine.expect(&phase, "token-grant", &out, l, &[*holder], true)?;
                    }
                }
                report.grants += grants.len();
            }
            0 => {
                let returns: BTreeMap<Label, Message> = holding
                    .iter()
                    .map(|(&h, ls)| {
                        (
                            h,
                            Message::TokenReturn {
                                holder: h,
                                leaders: ls.iter().copied().collect(),
                            },
                        )
                    })
                    .collect();
                let out = engine.run_ssf(&phase, &fam.ssf, &returns)?;
                for (&h, ls) in &holding {
                    let to: Vec<Label> = ls.iter().copied().collect();
                    engine.expect(&phase, "token-return", &out, h, &to, false)?;
                }
                holding.clear();
            }
            _ => {
                let sending: BTreeMap<Label, Message> = holding
                    .keys()
                    .filter_map(|h| msgs.get(h).map(|m| (*h, m.clone())))
                    .collect();
                if !sending.is_empty() {
                    report.holders.push((g, sending.keys().copied().collect()));
                }
                let out = engine.run_ssf(&phase, &fam.ssf, &sending)?;
                for (r, heard) in &out.inbox {
                    let got = report.received.entry(*r).or_default();
                    for (s, m) in heard {
                        if !got.iter().any(|(s2, m2)| s2 == s && m2 == m) {
                            got.push((*s, m.clone()));
                        }
                    }
                }
                for (&h, m) in &sending {
                    let nbrs = views[&h].neighbors.clone();
                    engine.expect(&phase, m.kind(), &out, h, &nbrs, false)?;
                    report.transmitted.insert(h);
                }
            }
        }
    }
    Ok(report)
}
