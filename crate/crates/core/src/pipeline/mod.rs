//! Instance generation, single runs with artifacts, and parameter sweeps.

mod generate;
mod run;
mod sweep;

pub use generate::{generate, GeneratorSpec};
pub use run::{
    construction_for, load_instance, rounds_ratio, run, run_instance, write_artifacts,
    InstanceSource, InstanceSummary, Mode, RunConfig, RunOutcome, RunReport, C_CAP, DEMO_SAMPLES,
    FORCE_EXACT_LABELS,
};
pub use sweep::{c_r_spread, sweep, to_csv, SweepGrid, SweepRow};
