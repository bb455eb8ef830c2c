use serde::{Deserialize, Serialize};

use super::leader::election_phases;
use crate::family::{
    certify_with, construct_pair_ssf, construct_selector_with, construct_ssf_with,
    ConstructionConfig, SelectionFamily,
};
use crate::Result;

/// The pre-shared families every station uses.
#[derive(Clone, Debug)]
pub struct ProtocolFamilies {
    /// `(N, c)`-ssf expanding every logical transmission.
    pub ssf: SelectionFamily,
    /// `(N·N, c·c)`-ssf over leader pairs.
    pub pair_ssf: SelectionFamily,
    /// One selector per leader-election phase.
    pub selectors: Vec<SelectionFamily>,
}

/// Summary line for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub role: String,
    pub kind: String,
    pub label_space: u64,
    pub size: usize,
    pub certified: bool,
    pub singleton: bool,
}

fn derive_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0xA076_1D64_78BD_642F).rotate_left(17)
}

impl ProtocolFamilies {
    pub fn build(
        n_labels: u32,
        delta: usize,
        c: u64,
        seed: u64,
        cfg: &ConstructionConfig,
    ) -> Result<Self> {
        let n = u64::from(n_labels);
        let ssf = construct_ssf_with(n, c.min(n).max(1), derive_seed(seed, 1), cfg)?;
        let pair_ssf = construct_pair_ssf(n, c, derive_seed(seed, 2), cfg)?;
        let selectors = election_phases(delta)
            .iter()
            .map(|p| {
                construct_selector_with(p.k, p.m, n, derive_seed(seed, 3 + u64::from(p.i)), cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProtocolFamilies {
            ssf,
            pair_ssf,
            selectors,
        })
    }

    pub fn all(&self) -> impl Iterator<Item = (String, &SelectionFamily)> {
        [
            ("ssf".to_string(), &self.ssf),
            ("pair-ssf".to_string(), &self.pair_ssf),
        ]
        .into_iter()
        .chain(
            self.selectors
                .iter()
                .enumerate()
                .map(|(i, f)| (format!("selector-{i}"), f)),
        )
    }

    pub fn all_certified(&self) -> bool {
        self.all().all(|(_, f)| f.is_certified())
    }

    pub fn summaries(&self) -> Vec<FamilySummary> {
        self.all()
            .map(|(role, f)| FamilySummary {
                role,
                kind: f.kind().describe(),
                label_space: f.label_space(),
                size: f.len(),
                certified: f.is_certified(),
                singleton: f.is_singleton_family(),
            })
            .collect()
    }

    /// Re-runs certification on every family with the given settings.
    pub fn recertify(
        &self,
        cfg: &crate::family::CertifyConfig,
    ) -> Vec<(String, crate::family::Certification)> {
        self.all()
            .map(|(role, f)| (role, certify_with(f, cfg)))
            .collect()
    }
}
