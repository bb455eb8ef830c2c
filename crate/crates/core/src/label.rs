use std::fmt;

use serde::{Deserialize, Serialize};

/// A station label drawn from `[1..N]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl Label {
    pub const fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for Label {
    fn from(v: u32) -> Self {
        Label(v)
    }
}

/// Number of bits needed to write one label of `[1..n_labels]`.
pub fn label_bits(n_labels: u32) -> u32 {
    (u32::BITS - n_labels.max(1).leading_zeros()).max(1)
}
