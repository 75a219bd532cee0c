//! Corpus generation, verification suites and report output.

pub mod corpus;
pub mod report;
pub mod suites;

pub use corpus::{build_corpus, random_interval_union, CorpusMember, Family, RandomSetSpec};
pub use report::{emit_report, render_report, CheckResult, ReportFormat, VerificationReport};
pub use suites::{run_suite, Suite, SuiteConfig};
