//! Estimates how much CO2 map-search users could save by switching to
//! eco-friendly transport modes without increasing their own travel time.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! 1. [`ingest`] parses query, display and click logs and joins them into
//!    per-user search sessions.
//! 2. [`modes`] recovers which transport means each opaque mode id stands
//!    for, using speeds and displayed prices.
//! 3. [`optimizer`] assigns every session the mode that minimizes a
//!    weighted CO2 + travel-time objective, subject to each user keeping
//!    at most their clicked travel time.
//! 4. [`report`] and [`impact`] summarize the assignment: emission and
//!    time comparisons, a mode-change matrix, per-session examples, and
//!    national / health extrapolations.
//!
//! [`synth`] generates seeded synthetic corpora with known ground truth,
//! and [`cli`] wires everything into the `ecomode` binary.

pub mod cli;
pub mod digest;
pub mod emission;
pub mod error;
pub mod impact;
pub mod ingest;
pub mod modes;
pub mod optimizer;
pub mod report;
pub mod synth;

pub use emission::EmissionTable;
pub use error::{Error, Result};
pub use impact::{estimate_impact, CyclingDenominator, ImpactEstimate, ImpactInputs};
pub use ingest::{join_sessions, parse_clicks, parse_plans, parse_queries, ModeId, Session};
pub use modes::{infer_mapping, FareSchedule, ModeMapping, TransportMeans};
pub use optimizer::{build_instance, solve, Assignment, Instance, Solution};
pub use report::{build_report, SimulationReport};
pub use synth::{generate, SynthConfig};
