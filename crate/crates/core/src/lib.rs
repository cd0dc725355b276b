//! Interview scheduling for two-sided matching markets in which agents learn
//! their values for a partner only by interviewing it.
//!
//! The engines are [`sequential::run_sequential`], [`hybrid::run_hybrid`] and
//! [`hybrid::run_fully_parallel`]. Each returns a [`run::RunResult`] whose
//! matching can be audited with [`stability::check_interim_stability`].

pub mod da;
pub mod error;
pub mod grid;
pub mod harness;
pub mod hybrid;
pub mod ids;
pub mod interim;
pub mod model;
pub mod run;
pub mod sequential;
pub mod stability;
pub mod state;

pub use error::{Error, Result};
pub use grid::Grid;
pub use ids::{AgentId, ApplicantId, PositionId, Side};
pub use model::{FourPointParams, Instance, ModelKind, Utility, ValueModel};
pub use run::{Metrics, RunOptions, RunResult, SelectionRule};
pub use stability::{check_interim_stability, StabilityReport};
pub use state::{InterviewLedger, InterviewRecord, Matching, RejectionSet};
