//! Termination analysis for VASS Markov decision processes.
//!
//! Models are read from JSON (see [`model::parse_model`]). The analysis
//! decides whether termination time is linear in the initial counter size
//! under a demonic or angelic controller and backs each verdict with
//! checkable evidence. The `sim` module runs models under arbitrary strategies.

pub mod cli;
pub mod corpus;
pub mod decision;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod models;
pub mod oracle;
pub mod rational;
pub mod scheme;
pub mod sim;
