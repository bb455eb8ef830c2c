use serde::{Deserialize, Serialize};

use crate::label::label_bits;
use crate::Label;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hop3Report {
    /// Leaders adjacent to the reporting station.
    NeighborLeaders(Vec<Label>),
    /// `(y, b)`: the chosen neighbour `y` of the reporter that is adjacent to leader `b`.
    ChosenPairs(Vec<(Label, Label)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Message {
    LeaderAnnounce {
        leader: Label,
    },
    NeighborOfLeader {
        leader: Label,
        neighbor: Label,
    },
    /// Helper for each listed leader pair selected in this round.
    HelperClaim {
        helper: Label,
        pairs: Vec<(Label, Label)>,
    },
    TokenGrant {
        leader: Label,
        holder: Label,
    },
    TokenReturn {
        holder: Label,
        leaders: Vec<Label>,
    },
    Hop3Report {
        node: Label,
        report: Hop3Report,
    },
    /// `(x, y, b)`: neighbour `x` of the leader, `y` adjacent to `x` and leader `b`.
    Hop3Choice {
        leader: Label,
        triples: Vec<(Label, Label, Label)>,
    },
}

const KIND_BITS: u64 = 3;

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::LeaderAnnounce { .. } => "leader-announce",
            Message::NeighborOfLeader { .. } => "neighbor-of-leader",
            Message::HelperClaim { .. } => "helper-claim",
            Message::TokenGrant { .. } => "token-grant",
            Message::TokenReturn { .. } => "token-return",
            Message::Hop3Report { .. } => "hop3-report",
            Message::Hop3Choice { .. } => "hop3-choice",
        }
    }

    /// Fixed labels plus, for each variable-length list, a length field of
    /// one label width.
    fn label_slots(&self) -> u64 {
        let len = |n: usize, per: u64| 1 + n as u64 * per;
        match self {
            Message::LeaderAnnounce { .. } => 1,
            Message::NeighborOfLeader { .. } | Message::TokenGrant { .. } => 2,
            Message::HelperClaim { pairs, .. } => 1 + len(pairs.len(), 2),
            Message::TokenReturn { leaders, .. } => 1 + len(leaders.len(), 1),
            Message::Hop3Report {
                report: Hop3Report::NeighborLeaders(v),
                ..
            } => 1 + len(v.len(), 1),
            Message::Hop3Report {
                report: Hop3Report::ChosenPairs(v),
                ..
            } => 1 + len(v.len(), 2),
            Message::Hop3Choice { triples, .. } => 1 + len(triples.len(), 3),
        }
    }

    /// Encoded size: kind tag, report variant bit, labels of `lg N` bits.
    pub fn size_bits(&self, n_labels: u32) -> u64 {
        let variant = u64::from(matches!(self, Message::Hop3Report { .. }));
        KIND_BITS + variant + self.label_slots() * u64::from(label_bits(n_labels))
    }
}

/// `C_msg · ⌈lg₂ N⌉` with `N` floored at 2.
pub fn message_limit(c_msg: u64, n_labels: u32) -> u64 {
    let lg = u32::BITS - (n_labels.max(2) - 1).leading_zeros();
    c_msg * u64::from(lg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let a = Message::LeaderAnnounce { leader: Label(3) };
        assert_eq!(a.size_bits(64), 3 + 7);
        let c = Message::Hop3Choice {
            leader: Label(1),
            triples: vec![(Label(2), Label(3), Label(4)); 2],
        };
        assert_eq!(c.size_bits(1024), 3 + (1 + 1 + 6) * 11);
        let r = Message::Hop3Report {
            node: Label(1),
            report: Hop3Report::ChosenPairs(vec![]),
        };
        assert_eq!(r.size_bits(16), 3 + 1 + 2 * 5);
    }

    #[test]
    fn limit_uses_log_of_label_space() {
        assert_eq!(message_limit(10, 64), 60);
        assert_eq!(message_limit(10, 65), 70);
        assert_eq!(message_limit(10, 1), 10);
    }

    #[test]
    fn json_is_tagged() {
        let m = Message::TokenGrant {
            leader: Label(2),
            holder: Label(5),
        };
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"kind":"token-grant","leader":2,"holder":5}"#
        );
    }
}
