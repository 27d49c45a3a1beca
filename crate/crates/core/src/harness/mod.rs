// SPDX-License-Identifier: Apache-2.0

//! Accuracy and timing measurements emitted as CSV.
//!
//! Every report starts with a `#`-prefixed metadata block followed by a
//! header row and comma-separated data rows with `.` as decimal point.

mod accuracy;
mod bench;
mod report;

pub use accuracy::{run_accuracy, AccuracyReport, AccuracyRow};
pub use bench::{
    content_variation, run_bench, time_strategy, BenchPlan, TimingReport, TimingRow, TimingSample,
    BASELINE,
};
pub use report::{machine_descriptor, report_date, ReportMetadata};

pub(crate) fn tile_label(spacing: [usize; 3]) -> String {
    format!("{}x{}x{}", spacing[0], spacing[1], spacing[2])
}
