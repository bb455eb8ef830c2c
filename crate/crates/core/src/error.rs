use thiserror::Error;

use crate::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid SINR parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("stations {0} and {1} are at distance zero")]
    DegenerateDistance(Label, Label),

    #[error("SINR undefined: zero noise and no interfering transmitter")]
    UndefinedRatio,

    #[error("range is unbounded when ambient noise is zero")]
    UnboundedRange,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("communication graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("no dilution constant d <= {cap} satisfies the ring interference bound")]
    NoDilution { cap: u32 },

    #[error("no certified {kind} over [1..{n_labels}] within {cap} sets")]
    FamilySizeCap {
        kind: String,
        n_labels: u64,
        cap: usize,
    },

    #[error("schedule exhausted: cursor {cursor} of {len}")]
    ScheduleExhausted { cursor: usize, len: usize },

    #[error("station {0} has both a transmit and a listen intent")]
    DoubleRole(Label),

    #[error("{phase}: {kind} from {sender} was not received by {receiver}")]
    DeliveryFailure {
        phase: String,
        kind: &'static str,
        sender: Label,
        receiver: Label,
    },

    #[error("message of {bits} bits exceeds the {limit}-bit bound")]
    MessageTooLarge { bits: u64, limit: u64 },

    #[error("station {label}: illegal status transition {from} -> {to}")]
    InvalidTransition {
        label: Label,
        from: &'static str,
        to: &'static str,
    },

    #[error("exact minimum CDS is limited to n <= {cap}, instance has n = {n}")]
    ExactTooLarge { n: usize, cap: usize },

    #[error("generator gave up after {attempts} attempts ({accepted} placements accepted)")]
    RetryCap { attempts: u32, accepted: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code for reports and process exit handling.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid-params",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DegenerateDistance(..) => "degenerate-distance",
            Error::UndefinedRatio => "undefined-ratio",
            Error::UnboundedRange => "unbounded-range",
            Error::InvalidInstance(_) => "invalid-instance",
            Error::Disconnected { .. } => "disconnected-instance",
            Error::NoDilution { .. } => "no-dilution",
            Error::FamilySizeCap { .. } => "family-size-cap",
            Error::ScheduleExhausted { .. } => "schedule-exhausted",
            Error::DoubleRole(_) => "double-role",
            Error::DeliveryFailure { .. } => "delivery-failure",
            Error::MessageTooLarge { .. } => "message-too-large",
            Error::InvalidTransition { .. } => "invalid-transition",
            Error::ExactTooLarge { .. } => "exact-too-large",
            Error::RetryCap { .. } => "retry-cap",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// Process exit status for this error. Status 1 is reserved for failed verdicts.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::Disconnected { .. } => 3,
            Error::InvalidParams(_)
            | Error::InvalidArgument(_)
            | Error::InvalidInstance(_)
            | Error::Parse(_)
            | Error::Json(_) => 2,
            Error::Io(_) => 4,
            Error::NoDilution { .. } | Error::FamilySizeCap { .. } | Error::RetryCap { .. } => 5,
            _ => 6,
        }
    }
}
