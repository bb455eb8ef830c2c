//! Pre-shared selection families: `(N,c)`-strongly-selective families and
//! `(k,m,N)`-selectors, their construction by seeded search with
//! certification, and per-round scheduling.

mod certify;
mod construct;
mod format;
mod schedule;
mod set;

pub use certify::{certify, certify_with, Certification, CertifyConfig, CertifyMethod};
pub use construct::{
    construct_pair_ssf, construct_selector, construct_selector_with, construct_ssf,
    construct_ssf_with, ConstructionConfig,
};
pub use schedule::RoundSchedule;
pub use set::{pair_element, FamilyKind, LabelEncoding, SelectionFamily};
