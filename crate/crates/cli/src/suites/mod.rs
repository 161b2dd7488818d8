//! One suite per CLI verb.

mod cwt;
mod fock;
mod frame;
mod qpt;
mod semigroup;
mod star;
mod twirl;

pub use cwt::cwt;
pub use fock::fock_demo;
pub use frame::frame_check;
pub use qpt::qpt_check;
pub use semigroup::semigroup_run;
pub use star::star_demo;
pub use twirl::twirl_product;

use crate::report::Report;

/// Result of running a suite.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    /// Data that goes to `--out` in place of the report; the report is then
    /// written next to it as `<stem>.report.json`.
    pub primary: Option<Vec<u8>>,
    /// Side artifacts written next to `--out` as `<stem>.<suffix>`.
    pub extras: Vec<(&'static str, Vec<u8>)>,
}

impl Outcome {
    fn report_only(report: Report) -> Self {
        Outcome {
            report,
            primary: None,
            extras: Vec::new(),
        }
    }
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn min(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}
