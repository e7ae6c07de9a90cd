//! Simulated-user evaluation: metrics, question categories, Unlimit-K runs
//! and threshold search for a question budget.

mod budget;
mod eval;
mod ranks;
mod report;
mod user;

pub use budget::{budget_search, BudgetError, BudgetResult, DEFAULT_TOLERANCE};
pub use eval::{evaluate, q_r_percent, recount, unlimit_run, EvalConfig, EvalReport, EvalRun, ExampleRow, HarnessError};
pub use ranks::{gold_ranks, RankError};
pub use report::{render_table, write_rows_csv};
pub use user::{same_value, SimUser, DEFAULT_PATIENCE};
