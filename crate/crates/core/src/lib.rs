//! Boolean automata networks.
//!
//! The crate covers the whole pipeline around a network of `n` two-state
//! automata: parsing local transition functions, updating configurations,
//! describing update schedules, building and analysing transition graphs,
//! Markov semantics with a per-automaton update rate, inferring local
//! transition functions back from observed transitions, and a delay-based
//! (Thomas-style) semantics with a discrete-event simulator.
//!
//! Configurations are bit vectors with automaton `0` stored in the least
//! significant bit, so a configuration doubles as an index into tables of
//! size `2^n`.

pub mod configuration;
pub mod delay;
pub mod error;
pub mod expr;
pub mod infer;
pub mod io;
pub mod limits;
pub mod minimize;
pub mod network;
pub mod schedule;
pub mod stochastic;
pub mod tgraph;

pub use configuration::{AutomataSet, Configuration};
pub use error::{Error, Result};
pub use expr::Expr;
pub use network::{InteractionGraph, Network, TransitionClass};
pub use schedule::UpdateSchedule;
pub use tgraph::{AttractorReport, GraphKind, TransitionGraph};
