use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::engine::{DeliveryMiss, Engine, EngineConfig, EngineStats, RoundTrace};
use super::families::ProtocolFamilies;
use super::leader::{leader_election, ElectionPhase};
use super::three_hop::{three_hop_connection, ThreeHopReport};
use super::two_hop::two_hop_connection;
use super::view::{initial_views, Status, Views};
use crate::family::ConstructionConfig;
use crate::sinr::{build_graph, PhysicalInstance};
use crate::{Label, Result};

/// The chosen backbone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackboneResult {
    pub leaders: BTreeSet<Label>,
    pub helpers: BTreeSet<Label>,
    /// Leader–helper and helper–helper edges of every recorded route.
    pub edges: BTreeSet<(Label, Label)>,
    pub rounds_used: u64,
}

impl BackboneResult {
    pub fn members(&self) -> BTreeSet<Label> {
        self.leaders.union(&self.helpers).copied().collect()
    }
}

/// Everything a run produced, for verification and reporting.
#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub result: BackboneResult,
    pub views: Views,
    pub election: Vec<ElectionPhase>,
    pub three_hop: ThreeHopReport,
    /// Clock value at the end of each stage.
    pub stage_rounds: BTreeMap<String, u64>,
    pub traces: Vec<RoundTrace>,
    pub misses: Vec<DeliveryMiss>,
    pub stats: EngineStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Strength of the `(N, c)`-ssf; the pair family uses `c·c`.
    pub c: u64,
    pub seed: u64,
    pub construction: ConstructionConfig,
    pub engine: EngineConfig,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            c: 2048,
            seed: 0,
            construction: ConstructionConfig::default(),
            engine: EngineConfig::default(),
        }
    }
}

/// Builds the families for `inst` and runs the whole protocol.
pub fn backbone_creation(inst: &PhysicalInstance, cfg: &ProtocolConfig) -> Result<ProtocolRun> {
    let graph = build_graph(inst)?;
    let fam = ProtocolFamilies::build(
        inst.n_labels(),
        graph.max_degree(),
        cfg.c,
        cfg.seed,
        &cfg.construction,
    )?;
    run_protocol(inst, &fam, &cfg.engine)
}

/// Leader election, two-hop and three-hop connection with given families.
pub fn run_protocol(
    inst: &PhysicalInstance,
    fam: &ProtocolFamilies,
    cfg: &EngineConfig,
) -> Result<ProtocolRun> {
    let graph = build_graph(inst)?;
    let mut views = initial_views(&graph, inst.n_labels());
    let mut engine = Engine::new(inst, *cfg);
    let mut stage_rounds = BTreeMap::new();

    let election = leader_election(&mut views, fam, &mut engine)?;
    stage_rounds.insert("leader-election".to_string(), engine.round());
    two_hop_connection(&mut views, fam, &mut engine)?;
    stage_rounds.insert("two-hop-connection".to_string(), engine.round());
    let three_hop = three_hop_connection(&mut views, fam, &mut engine)?;
    stage_rounds.insert("three-hop-connection".to_string(), engine.round());

    let pick = |s: Status| {
        views
            .values()
            .filter(|v| v.status() == s)
            .map(|v| v.label)
            .collect()
    };
    let edges = views
        .values()
        .flat_map(|v| v.helper_assignments.iter().flat_map(|r| r.edges()))
        .collect();
    let result = BackboneResult {
        leaders: pick(Status::Leader),
        helpers: pick(Status::Helper),
        edges,
        rounds_used: engine.round(),
    };
    let (traces, misses, stats) = engine.into_parts();
    Ok(ProtocolRun {
        result,
        views,
        election,
        three_hop,
        stage_rounds,
        traces,
        misses,
        stats,
    })
}
