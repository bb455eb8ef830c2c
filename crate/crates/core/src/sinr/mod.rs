//! Ground-truth physical layer.
//!
//! Everything here may look at station coordinates. Protocol code never
//! does; it only receives what the round engine delivers.

mod dilution;
mod graph;
mod grid;
mod instance;
mod params;
mod physics;

pub use dilution::{
    derive_dilution, dilution_feasible, ring_interference_bound, DilutionConstants,
    BOX_TRANSMITTER_CAP, DILUTION_SEARCH_CAP,
};
pub use graph::{build_graph, CommGraph};
pub use grid::{grid_box, pivotal_offsets_within_hops, BoxCoord, GridIndex};
pub use instance::{PhysicalInstance, Point, Station};
pub use params::SinrParams;
pub use physics::{distance, range, received_power, receives, sinr, sinr_from_parts};
