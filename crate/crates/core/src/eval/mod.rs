//! Evaluation: metrics, stratified fold plans, and the base / stream / test
//! comparison protocol.

mod folds;
mod metrics;
mod protocol;
mod report;

pub use folds::{assign_folds, split_folds, FoldPlan, FoldSplit};
pub use metrics::{evaluate, Confusion, Metrics};
pub use protocol::{
    run_protocol, select_alpha, BaseTrainer, FoldResult, Method, MethodResult, ProtocolConfig,
    ProtocolResult, DEFAULT_ALPHA_GRID,
};
pub use report::{report_csv, summary_table, text_report, timing_csv, MethodSummary};
