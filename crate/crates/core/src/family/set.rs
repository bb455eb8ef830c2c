use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

/// What selection property a family is meant to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `(N,c)`-strongly-selective family.
    Ssf { c: u64 },
    /// `(k,m,N)`-selector with `m <= k`.
    Selector { k: u64, m: u64 },
}

impl FamilyKind {
    pub fn describe(&self) -> String {
        match self {
            FamilyKind::Ssf { c } => format!("ssf(c={c})"),
            FamilyKind::Selector { k, m } => format!("selector(k={k},m={m})"),
        }
    }
}

/// How protocol-level labels map onto family elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelEncoding {
    /// Element `e` is station label `e`.
    Direct,
    /// Element of the ordered pair `(s, t)` of labels from `[1..base]` is
    /// `s·base + t − base` (row-major, 1-based).
    RowMajorPairs { base: u64 },
}

/// Row-major pair element of `(s, t)` for labels in `[1..base]`.
pub fn pair_element(s: u64, t: u64, base: u64) -> u64 {
    s * base + t - base
}

#[derive(Clone, Debug)]
pub(crate) enum SetStore {
    /// `{1}, {2}, …, {N}` in order.
    Singletons,
    /// Set `j` contains `e` iff `mix(seed, j, e) <= threshold`.
    Hashed { len: usize, threshold: u64 },
    Explicit {
        sets: Vec<Vec<u64>>,
        members: Vec<HashSet<u64>>,
        rounds: HashMap<u64, Vec<usize>>,
    },
}

/// An ordered family of subsets of `[1..label_space]`.
#[derive(Clone, Debug)]
pub struct SelectionFamily {
    pub(crate) kind: FamilyKind,
    pub(crate) label_space: u64,
    pub(crate) seed: u64,
    pub(crate) encoding: LabelEncoding,
    pub(crate) store: SetStore,
    pub(crate) certified: bool,
}

const MIX_SET: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_ELEM: u64 = 0xD1B5_4A32_D192_ED03;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn mix(seed: u64, set: u64, elem: u64) -> u64 {
    splitmix64(splitmix64(seed ^ set.wrapping_mul(MIX_SET)) ^ elem.wrapping_mul(MIX_ELEM))
}

/// Inclusion threshold giving probability `1/den` per element.
pub(crate) fn threshold_for(den: u64) -> u64 {
    if den <= 1 {
        u64::MAX
    } else {
        u64::MAX / den
    }
}

impl SelectionFamily {
    pub(crate) fn singletons(
        kind: FamilyKind,
        label_space: u64,
        seed: u64,
        encoding: LabelEncoding,
    ) -> Self {
        SelectionFamily {
            kind,
            label_space,
            seed,
            encoding,
            store: SetStore::Singletons,
            certified: false,
        }
    }

    pub(crate) fn hashed(
        kind: FamilyKind,
        label_space: u64,
        seed: u64,
        encoding: LabelEncoding,
        len: usize,
        den: u64,
    ) -> Self {
        SelectionFamily {
            kind,
            label_space,
            seed,
            encoding,
            store: SetStore::Hashed {
                len,
                threshold: threshold_for(den),
            },
            certified: false,
        }
    }

    /// Family from explicit sets. Sets are sorted and deduplicated.
    pub fn from_sets(
        kind: FamilyKind,
        label_space: u64,
        seed: u64,
        encoding: LabelEncoding,
        sets: Vec<Vec<u64>>,
    ) -> Self {
        let sets: Vec<Vec<u64>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let members = sets.iter().map(|s| s.iter().copied().collect()).collect();
        let mut rounds: HashMap<u64, Vec<usize>> = HashMap::new();
        for (j, s) in sets.iter().enumerate() {
            for &e in s {
                rounds.entry(e).or_default().push(j);
            }
        }
        SelectionFamily {
            kind,
            label_space,
            seed,
            encoding,
            store: SetStore::Explicit {
                sets,
                members,
                rounds,
            },
            certified: false,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn label_space(&self) -> u64 {
        self.label_space
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn encoding(&self) -> LabelEncoding {
        self.encoding
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub(crate) fn set_certified(&mut self, v: bool) {
        self.certified = v;
    }

    /// Number of sets `t`, i.e. rounds per execution.
    pub fn len(&self) -> usize {
        match &self.store {
            SetStore::Singletons => self.label_space as usize,
            SetStore::Hashed { len, .. } => *len,
            SetStore::Explicit { sets, .. } => sets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_singleton_family(&self) -> bool {
        matches!(self.store, SetStore::Singletons)
    }

    /// Whether set `j` contains element `e`.
    pub fn contains(&self, j: usize, e: u64) -> bool {
        if e == 0 || e > self.label_space || j >= self.len() {
            return false;
        }
        match &self.store {
            SetStore::Singletons => e == j as u64 + 1,
            SetStore::Hashed { threshold, .. } => mix(self.seed, j as u64, e) <= *threshold,
            SetStore::Explicit { members, .. } => members[j].contains(&e),
        }
    }

    /// Indices of the sets containing `e`, ascending.
    pub fn rounds_of(&self, e: u64) -> Vec<usize> {
        if e == 0 || e > self.label_space {
            return Vec::new();
        }
        match &self.store {
            SetStore::Singletons => vec![(e - 1) as usize],
            SetStore::Hashed { len, threshold } => (0..*len)
                .filter(|&j| mix(self.seed, j as u64, e) <= *threshold)
                .collect(),
            SetStore::Explicit { rounds, .. } => rounds.get(&e).cloned().unwrap_or_default(),
        }
    }

    /// Elements of set `j`, ascending.
    pub fn set(&self, j: usize) -> Vec<u64> {
        match &self.store {
            SetStore::Singletons => vec![j as u64 + 1],
            SetStore::Hashed { threshold, .. } => (1..=self.label_space)
                .filter(|&e| mix(self.seed, j as u64, e) <= *threshold)
                .collect(),
            SetStore::Explicit { sets, .. } => sets[j].clone(),
        }
    }

    /// Element for a station label (direct encoding only).
    pub fn element_of_label(&self, label: u32) -> u64 {
        u64::from(label)
    }

    /// Element for the ordered pair `(s, t)` (pair encoding only).
    pub fn element_of_pair(&self, s: u32, t: u32) -> u64 {
        match self.encoding {
            LabelEncoding::RowMajorPairs { base } => pair_element(u64::from(s), u64::from(t), base),
            LabelEncoding::Direct => panic!("family is not defined over label pairs"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_encoding_is_a_bijection() {
        let base = 7;
        let mut seen = HashSet::new();
        for s in 1..=base {
            for t in 1..=base {
                let e = pair_element(s, t, base);
                assert!((1..=base * base).contains(&e));
                assert!(seen.insert(e));
            }
        }
        assert_eq!(pair_element(1, 1, base), 1);
        assert_eq!(pair_element(base, base, base), base * base);
    }

    #[test]
    fn hashed_membership_is_stable() {
        let f =
            SelectionFamily::hashed(FamilyKind::Ssf { c: 2 }, 16, 9, LabelEncoding::Direct, 8, 2);
        for j in 0..8 {
            let s = f.set(j);
            for e in 1..=16 {
                assert_eq!(s.contains(&e), f.contains(j, e));
                assert_eq!(f.rounds_of(e).contains(&j), f.contains(j, e));
            }
        }
    }

    #[test]
    fn singleton_membership() {
        let f = SelectionFamily::singletons(FamilyKind::Ssf { c: 4 }, 4, 0, LabelEncoding::Direct);
        assert_eq!(f.len(), 4);
        assert!(f.contains(0, 1));
        assert!(!f.contains(0, 2));
        assert_eq!(f.rounds_of(3), vec![2]);
        assert!(!f.contains(0, 5));
    }
}
