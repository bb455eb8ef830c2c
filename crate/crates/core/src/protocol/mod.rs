//! Synchronous round engine and the station protocols.
//!
//! Decision code sees only [`NodeView`]s and the shared families; physical
//! positions stay inside the [`Engine`], which adjudicates every round.

mod backbone;
mod engine;
mod families;
mod leader;
mod message;
mod three_hop;
mod token;
mod two_hop;
mod view;

pub use backbone::{backbone_creation, run_protocol, BackboneResult, ProtocolConfig, ProtocolRun};
pub use engine::{
    run_round, DeliveryMiss, Engine, EngineConfig, EngineStats, Intent, RoundTrace, SsfOutcome,
    Transmission,
};
pub use families::{FamilySummary, ProtocolFamilies};
pub use leader::{ceil_lg, election_phases, leader_election, leaders, ElectionPhase, PhaseParams};
pub use message::{message_limit, Hop3Report, Message};
pub use three_hop::{choose_pair, three_hop_connection, ThreeHopReport};
pub use token::{token_passing, TokenPassingReport};
pub use two_hop::{neighborhood_inform, two_hop_connection};
pub use view::{initial_views, NodeView, Route, Status, Views};
