//! Monte-Carlo simulation of strategies over grids of initial sizes.

pub mod event;
pub mod fit;
pub mod run;
pub mod script;
pub mod stats;
pub mod strategy;

pub use event::{SafetyEvent, SizeExpr};
pub use fit::{fit_exponent, fit_exponent_tail};
pub use run::{audit_trace, run_once, trial_rng, BranchSampler, RunOptions, RunTrace, TermOutcome};
pub use script::{compile_script, CompiledScript, ScriptedStrategy};
pub use stats::{estimate_event, estimate_statistics, SimConfig, SimStats};
pub use strategy::{Strategy, StrategyError};
