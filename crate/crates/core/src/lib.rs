//! Büchi automata reduction with lookahead simulations.
//!
//! The crate covers the whole pipeline: an explicit automaton model with a
//! `.ba` text format, simulation and lookahead-simulation preorders computed
//! as fixpoints of game predecessor operators, quotienting and transition
//! pruning, the Heavy-k / Light-k minimization drivers, a staged language
//! inclusion checker, and a Tabakov-Vardi random automaton generator.
//!
//! ```
//! use buchi_min::{ba::parse_ba, reduce::{heavy, MinimizeConfig}};
//!
//! let a = parse_ba("[p]\na,[p]->[q]\na,[q]->[q]\na,[p]->[p]\n[q]\n").unwrap();
//! let (m, _stats) = heavy(&a, &MinimizeConfig::heavy(12));
//! assert_eq!(m.num_states(), 1);
//! ```

pub mod automaton;
pub mod ba;
pub mod error;
pub mod graph;
pub mod inclusion;
pub mod lasso;
pub mod randgen;
pub mod reduce;
pub mod relation;
pub mod sim;

pub use automaton::{disjoint_union, Automaton, AutomatonBuilder, State, Symbol, TransitionRef};
pub use error::Error;
pub use lasso::Lasso;
pub use relation::Relation;
pub use sim::SimVariant;
