//! Quotienting, transition pruning and the Heavy-k / Light-k drivers.

mod driver;
mod prune;
mod quotient;

pub use driver::{heavy, light, minimize, Method, MinimizeConfig, MinimizeStats, StepStats};
pub use prune::{
    build_prune_relation, prune, prune_unchecked, Endpoint, PruneKind, PruneSpec, RelTag,
};
pub use quotient::{quotient, quotient_with_classes};
