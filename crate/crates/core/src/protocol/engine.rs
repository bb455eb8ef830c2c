use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::message::{message_limit, Message};
use crate::family::SelectionFamily;
use crate::sinr::{distance, received_power, receives, sinr_from_parts, PhysicalInstance};
use crate::{Error, Label, Result};

/// What a station does in one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intent {
    Listen,
    Transmit(Message),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transmission {
    pub label: Label,
    pub payload: Message,
}

/// One simulated round. Stations absent from `transmitters` listened.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: u64,
    pub phase: String,
    pub transmitters: Vec<Transmission>,
    /// `[sender, receiver]` pairs, ascending.
    pub deliveries: Vec<(Label, Label)>,
}

impl RoundTrace {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("round trace serializes")
    }
}

/// Adjudicates a single round directly with [`receives`]. Stations without
/// an intent listen.
pub fn run_round(
    round: u64,
    phase: &str,
    intents: &[(Label, Intent)],
    inst: &PhysicalInstance,
) -> Result<RoundTrace> {
    let mut seen = BTreeSet::new();
    let mut transmitters = Vec::new();
    for (label, intent) in intents {
        if inst.index_of(*label).is_none() {
            return Err(Error::InvalidArgument(format!(
                "intent for unknown station {label}"
            )));
        }
        if !seen.insert(*label) {
            return Err(Error::DoubleRole(*label));
        }
        if let Intent::Transmit(m) = intent {
            transmitters.push(Transmission {
                label: *label,
                payload: m.clone(),
            });
        }
    }
    transmitters.sort_by_key(|t| t.label);
    let senders: Vec<Label> = transmitters.iter().map(|t| t.label).collect();
    let mut deliveries = Vec::new();
    for &s in &senders {
        for r in inst.labels() {
            if senders.binary_search(&r).is_err() && receives(s, r, &senders, inst)? {
                deliveries.push((s, r));
            }
        }
    }
    Ok(RoundTrace {
        round,
        phase: phase.to_string(),
        transmitters,
        deliveries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Messages must fit in `c_msg · ⌈lg₂ N⌉` bits.
    pub c_msg: u64,
    pub record_traces: bool,
    /// Fail on the first expected delivery that does not happen, instead of
    /// collecting it as a miss.
    pub strict_delivery: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            c_msg: 64,
            record_traces: true,
            strict_delivery: true,
        }
    }
}

/// An expected reception that did not happen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeliveryMiss {
    pub phase: String,
    pub kind: String,
    pub sender: Label,
    pub receiver: Label,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStats {
    pub busy_rounds: u64,
    pub transmissions: u64,
    pub max_transmitters_per_round: usize,
    pub max_message_bits: u64,
    pub message_limit_bits: u64,
}

/// Result of one selection-family execution.
#[derive(Clone, Debug, Default)]
pub struct SsfOutcome {
    /// Per receiver, `(sender, message)` in order of first reception.
    pub inbox: BTreeMap<Label, Vec<(Label, Message)>>,
    pub delivered: BTreeSet<(Label, Label)>,
}

impl SsfOutcome {
    pub fn heard(&self, receiver: Label) -> &[(Label, Message)] {
        self.inbox.get(&receiver).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Global-clock round engine over a physical instance.
///
/// Powers are cached per ordered pair with the same arithmetic as
/// [`crate::sinr::sinr`], and interference is summed in ascending label
/// order, so adjudication matches [`run_round`] bit for bit. Rounds with no
/// transmitter advance the clock without being simulated or traced.
pub struct Engine<'a> {
    inst: &'a PhysicalInstance,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    power: Vec<Vec<f64>>,
    audible: Vec<Vec<usize>>,
    round: u64,
    cfg: EngineConfig,
    limit: u64,
    traces: Vec<RoundTrace>,
    misses: Vec<DeliveryMiss>,
    stats: EngineStats,
}

impl<'a> Engine<'a> {
    pub fn new(inst: &'a PhysicalInstance, cfg: EngineConfig) -> Self {
        let params = inst.params();
        let st = inst.stations();
        let labels: Vec<Label> = st.iter().map(|s| s.label).collect();
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut power = vec![vec![0.0; st.len()]; st.len()];
        let mut audible = vec![Vec::new(); st.len()];
        let threshold = params.weak_threshold();
        for (i, a) in st.iter().enumerate() {
            for (j, b) in st.iter().enumerate() {
                if i != j {
                    let p = received_power(params, distance(a.position(), b.position()));
                    power[i][j] = p;
                    if p >= threshold {
                        audible[i].push(j);
                    }
                }
            }
        }
        let limit = message_limit(cfg.c_msg, inst.n_labels());
        Engine {
            inst,
            labels,
            index,
            power,
            audible,
            round: 0,
            cfg,
            limit,
            traces: Vec::new(),
            misses: Vec::new(),
            stats: EngineStats {
                message_limit_bits: limit,
                ..Default::default()
            },
        }
    }

    pub fn instance(&self) -> &PhysicalInstance {
        self.inst
    }

    /// Rounds elapsed so far.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    pub fn traces(&self) -> &[RoundTrace] {
        &self.traces
    }

    pub fn misses(&self) -> &[DeliveryMiss] {
        &self.misses
    }

    pub fn into_parts(self) -> (Vec<RoundTrace>, Vec<DeliveryMiss>, EngineStats) {
        (self.traces, self.misses, self.stats)
    }

    /// Moves the clock forward to `round`.
    pub fn advance_to(&mut self, round: u64) -> Result<()> {
        if round < self.round {
            return Err(Error::InvalidArgument(format!(
                "clock cannot move back from {} to {round}",
                self.round
            )));
        }
        self.round = round;
        Ok(())
    }

    /// Simulates the current round with the given transmitters and advances
    /// the clock by one. Returns the deliveries.
    pub fn step(
        &mut self,
        phase: &str,
        mut txs: Vec<(Label, Message)>,
    ) -> Result<Vec<(Label, Label)>> {
        txs.sort_by_key(|t| t.0);
        let mut ids = Vec::with_capacity(txs.len());
        for w in txs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DoubleRole(w[0].0));
            }
        }
        for (l, m) in &txs {
            let i = *self.index.get(l).ok_or_else(|| {
                Error::InvalidArgument(format!("transmission from unknown station {l}"))
            })?;
            ids.push(i);
            let bits = m.size_bits(self.inst.n_labels());
            self.stats.max_message_bits = self.stats.max_message_bits.max(bits);
            if bits > self.limit {
                return Err(Error::MessageTooLarge {
                    bits,
                    limit: self.limit,
                });
            }
        }
        let params = self.inst.params();
        let threshold = params.weak_threshold();
        let mut deliveries = Vec::new();
        for &s in &ids {
            for &r in &self.audible[s] {
                if ids.contains(&r) {
                    continue;
                }
                let signal = self.power[s][r];
                let interference = ids.iter().filter(|&&t| t != s).map(|&t| self.power[t][r]);
                let ratio = sinr_from_parts(signal, params.noise, interference)?;
                if ratio >= params.beta && signal >= threshold {
                    deliveries.push((self.labels[s], self.labels[r]));
                }
            }
        }
        deliveries.sort_unstable();
        if !txs.is_empty() {
            self.stats.busy_rounds += 1;
            self.stats.transmissions += txs.len() as u64;
            self.stats.max_transmitters_per_round =
                self.stats.max_transmitters_per_round.max(txs.len());
            if self.cfg.record_traces {
                self.traces.push(RoundTrace {
                    round: self.round,
                    phase: phase.to_string(),
                    transmitters: txs
                        .into_iter()
                        .map(|(label, payload)| Transmission { label, payload })
                        .collect(),
                    deliveries: deliveries.clone(),
                });
            }
        }
        self.round += 1;
        Ok(deliveries)
    }

    /// One full execution of `family`. `entries` lists `(station, element)`;
    /// a station transmits in every round whose set contains one of its
    /// elements, with the message built by `compose` from the selected
    /// elements. Advances the clock by exactly `family.len()` rounds.
    pub fn run_family<F>(
        &mut self,
        phase: &str,
        family: &SelectionFamily,
        entries: &[(Label, u64)],
        mut compose: F,
    ) -> Result<SsfOutcome>
    where
        F: FnMut(Label, &[u64]) -> Message,
    {
        let start = self.round;
        let mut by_round: BTreeMap<usize, BTreeMap<Label, Vec<u64>>> = BTreeMap::new();
        for &(label, e) in entries {
            for j in family.rounds_of(e) {
                by_round
                    .entry(j)
                    .or_default()
                    .entry(label)
                    .or_default()
                    .push(e);
            }
        }
        let mut out = SsfOutcome::default();
        for (j, senders) in by_round {
            self.advance_to(start + j as u64)?;
            let txs: Vec<(Label, Message)> =
                senders.iter().map(|(&l, es)| (l, compose(l, es))).collect();
            let sent: BTreeMap<Label, Message> = txs.iter().cloned().collect();
            for (s, r) in self.step(phase, txs)? {
                out.delivered.insert((s, r));
                let msg = &sent[&s];
                let inbox = out.inbox.entry(r).or_default();
                if !inbox.iter().any(|(from, m)| *from == s && m == msg) {
                    inbox.push((s, msg.clone()));
                }
            }
        }
        self.advance_to(start + family.len() as u64)?;
        Ok(out)
    }

    /// Execution where each listed station sends one fixed message.
    pub fn run_ssf(
        &mut self,
        phase: &str,
        family: &SelectionFamily,
        msgs: &BTreeMap<Label, Message>,
    ) -> Result<SsfOutcome> {
        let entries: Vec<(Label, u64)> = msgs
            .keys()
            .map(|&l| (l, family.element_of_label(l.get())))
            .collect();
        self.run_family(phase, family, &entries, |l, _| msgs[&l].clone())
    }

    /// Checks that `sender` reached each of `receivers`; a miss is an error
    /// when `hard` or in strict mode, otherwise it is recorded.
    pub fn expect(
        &mut self,
        phase: &str,
        kind: &'static str,
        outcome: &SsfOutcome,
        sender: Label,
        receivers: &[Label],
        hard: bool,
    ) -> Result<()> {
        for &r in receivers {
            if !outcome.delivered.contains(&(sender, r)) {
                if hard || self.cfg.strict_delivery {
                    return Err(Error::DeliveryFailure {
                        phase: phase.to_string(),
                        kind,
                        sender,
                        receiver: r,
                    });
                }
                self.misses.push(DeliveryMiss {
                    phase: phase.to_string(),
                    kind: kind.to_string(),
                    sender,
                    receiver: r,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::construct_ssf;
    use crate::sinr::{SinrParams, Station};

    fn inst(points: &[(u32, f64, f64)]) -> PhysicalInstance {
        let st = points
            .iter()
            .map(|&(l, x, y)| Station::new(l, x, y))
            .collect();
        PhysicalInstance::new(st, SinrParams::default(), 64).unwrap()
    }

    fn announce(l: u32) -> Message {
        Message::LeaderAnnounce { leader: Label(l) }
    }

    #[test]
    fn silent_round_delivers_nothing() {
        let i = inst(&[(1, 0.0, 0.0), (2, 0.5, 0.0)]);
        let t = run_round(
            0,
            "t",
            &[(Label(1), Intent::Listen), (Label(2), Intent::Listen)],
            &i,
        )
        .unwrap();
        assert!(t.deliveries.is_empty());
        assert!(t.transmitters.is_empty());
    }

    #[test]
    fn lone_transmitter_reaches_neighbours_only() {
        let i = inst(&[(1, 0.0, 0.0), (2, 0.9, 0.0), (3, 1.2, 0.0)]);
        let t = run_round(0, "t", &[(Label(1), Intent::Transmit(announce(1)))], &i).unwrap();
        assert_eq!(t.deliveries, vec![(Label(1), Label(2))]);
    }

    #[test]
    fn double_role_is_rejected() {
        let i = inst(&[(1, 0.0, 0.0), (2, 0.5, 0.0)]);
        let intents = [
            (Label(1), Intent::Transmit(announce(1))),
            (Label(1), Intent::Listen),
        ];
        assert!(matches!(
            run_round(0, "t", &intents, &i),
            Err(Error::DoubleRole(Label(1)))
        ));
        let mut e = Engine::new(&i, EngineConfig::default());
        assert!(matches!(
            e.step("t", vec![(Label(2), announce(2)), (Label(2), announce(2))]),
            Err(Error::DoubleRole(_))
        ));
    }

    #[test]
    fn diluted_transmitters_both_deliver() {
        // Boxes of side 1/√2; transmitters 9 boxes apart (2d+1 with d = 4),
        // each with a listener at distance √2·x = 1 across a box boundary.
        let x = 1.0 / 2f64.sqrt();
        let far = 9.0 * x;
        let i = inst(&[
            (1, 0.1, 0.1),
            (2, 0.1 + 0.99, 0.1),
            (3, far + 0.1, 0.1),
            (4, far + 0.1 - 0.99, 0.1),
        ]);
        let intents = [
            (Label(1), Intent::Transmit(announce(1))),
            (Label(3), Intent::Transmit(announce(3))),
        ];
        let t = run_round(0, "t", &intents, &i).unwrap();
        assert_eq!(
            t.deliveries,
            vec![(Label(1), Label(2)), (Label(3), Label(4))]
        );
    }

    #[test]
    fn engine_matches_direct_adjudication() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for trial in 0..40 {
            let pts: Vec<(u32, f64, f64)> = (1..=14)
                .map(|l| (l, rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)))
                .collect();
            let i = inst(&pts);
            let mut e = Engine::new(&i, EngineConfig::default());
            let k = 1 + trial % 5;
            let txs: Vec<(Label, Message)> = (1..=k as u32)
                .map(|l| (Label(l * 2), announce(l * 2)))
                .collect();
            let intents: Vec<(Label, Intent)> = txs
                .iter()
                .map(|(l, m)| (*l, Intent::Transmit(m.clone())))
                .collect();
            let direct = run_round(0, "t", &intents, &i).unwrap();
            let cached = e.step("t", txs).unwrap();
            assert_eq!(direct.deliveries, cached, "trial {trial}");
        }
    }

    #[test]
    fn family_execution_advances_by_its_length() {
        let i = inst(&[(1, 0.0, 0.0), (2, 0.5, 0.0), (3, 0.0, 0.5)]);
        let f = construct_ssf(64, 64, 0).unwrap();
        let mut e = Engine::new(&i, EngineConfig::default());
        let msgs: BTreeMap<Label, Message> =
            [(Label(2), announce(2)), (Label(3), announce(3))].into();
        let out = e.run_ssf("t", &f, &msgs).unwrap();
        assert_eq!(e.round(), 64);
        assert_eq!(e.traces().len(), 2);
        assert_eq!(e.traces()[0].round, 1);
        assert_eq!(e.traces()[1].round, 2);
        assert_eq!(out.heard(Label(1)).len(), 2);
        assert!(out.delivered.contains(&(Label(2), Label(3))));
        e.expect(
            "t",
            "leader-announce",
            &out,
            Label(2),
            &[Label(1), Label(3)],
            true,
        )
        .unwrap();
    }

    #[test]
    fn oversized_messages_are_rejected() {
        let i = inst(&[(1, 0.0, 0.0), (2, 0.5, 0.0)]);
        let mut e = Engine::new(
            &i,
            EngineConfig {
                c_msg: 1,
                ..Default::default()
            },
        );
        let big = Message::TokenReturn {
            holder: Label(1),
            leaders: vec![Label(2); 4],
        };
        assert!(matches!(
            e.step("t", vec![(Label(1), big)]),
            Err(Error::MessageTooLarge { .. })
        ));
    }

    #[test]
    fn lenient_mode_records_misses() {
        let i = inst(&[(1, 0.0, 0.0), (2, 3.0, 0.0)]);
        let f = construct_ssf(64, 64, 0).unwrap();
        let mut e = Engine::new(
            &i,
            EngineConfig {
                strict_delivery: false,
                ..Default::default()
            },
        );
        let msgs: BTreeMap<Label, Message> = [(Label(1), announce(1))].into();
        let out = e.run_ssf("t", &f, &msgs).unwrap();
        e.expect("t", "leader-announce", &out, Label(1), &[Label(2)], false)
            .unwrap();
        assert_eq!(e.misses().len(), 1);
        assert!(e
            .expect("t", "token-grant", &out, Label(1), &[Label(2)], true)
            .is_err());
    }
}
