//! Ground-truth verification of a finished run.

mod cds;
mod checks;
mod invariants;
mod verdict;

use serde::{Deserialize, Serialize};

pub use cds::{greedy_cds, min_cds, min_cds_size_by_masks, min_dominating_set, EXACT_CDS_CAP};
pub use checks::{
    check_connected_backbone, check_constant_degree, check_diameter, check_dominating,
    check_leader_grid, check_size_ratio, default_degree_bound,
};
pub use invariants::{
    check_claim_one, check_deliveries, check_leader_election, check_three_hop, check_token_passing,
    check_two_hop, leader_pairs_at, three_hop_oracle, two_hop_oracle,
};
pub use verdict::Verdict;

use crate::protocol::ProtocolRun;
use crate::sinr::{CommGraph, PhysicalInstance};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierConfig {
    /// Backbone degree bound; `None` uses [`default_degree_bound`].
    pub degree_bound: Option<usize>,
    pub diameter_factor: f64,
    pub diameter_slack: usize,
    /// `C_s` in `|backbone| <= C_s · |minimum CDS|`.
    pub size_factor: f64,
    /// Demand the exact minimum CDS even above the size cap (an error there).
    pub force_exact: bool,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        VerifierConfig {
            degree_bound: None,
            diameter_factor: 3.0,
            diameter_slack: 4,
            size_factor: 6.0,
            force_exact: false,
        }
    }
}

/// All backbone and stage checks, in a fixed order.
pub fn verify_run(
    run: &ProtocolRun,
    inst: &PhysicalInstance,
    g: &CommGraph,
    cfg: &VerifierConfig,
) -> Result<Vec<Verdict>> {
    let r = &run.result;
    Ok(vec![
        check_dominating(r, g),
        check_connected_backbone(r, g),
        check_constant_degree(r, g, cfg.degree_bound.unwrap_or_else(default_degree_bound)),
        check_diameter(r, g, cfg.diameter_factor, cfg.diameter_slack),
        check_size_ratio(r, g, cfg.size_factor, cfg.force_exact)?,
        check_leader_grid(&r.leaders, inst)?,
        check_leader_election(run, g),
        check_claim_one(run, g),
        check_two_hop(run, g),
        check_three_hop(run, g),
        check_token_passing(run, inst, g)?,
        check_deliveries(run),
    ])
}
