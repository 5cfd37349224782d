//! Beetle antennae search (BAS), a single-agent derivative-free optimizer,
//! together with benchmark objectives, brute-force oracles and a seeded
//! multi-trial experiment harness.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod objectives;
pub mod oracle;
pub mod search;

pub use bounds::{Interval, SearchBox};
pub use error::{BasError, Result};
pub use objectives::{lookup_objective, Objective};
pub use search::{run, BasConfig, Direction, Init, Position, RunResult, ScheduleSpec};
