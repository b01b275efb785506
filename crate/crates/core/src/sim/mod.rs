//! Simulation preorders.
//!
//! All relations are computed by one engine, the k-lookahead game: in each
//! round Spoiler reveals an attack of up to `k` transitions and Duplicator
//! answers with a matching prefix of length `1..=k`. With `k = 1` this is the
//! ordinary simulation game. Spoiler's winning region is the least (or, for
//! delayed and fair conditions, a nested) fixpoint of a predecessor
//! operator; the relation is its complement.

mod game;
pub mod mediated;
pub mod oracle;

use crate::automaton::Automaton;
use crate::relation::Relation;

pub use mediated::mediated_preorder;
pub use oracle::{trace_inclusion, TraceDirection};

/// Direction in which a simulation game walks the transition graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// Winning condition of a simulation game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimVariant {
    /// Whenever Spoiler is accepting, so is Duplicator.
    Direct,
    /// Every accepting Spoiler state is eventually answered by an accepting
    /// Duplicator state.
    Delayed,
    /// If Spoiler is accepting infinitely often, so is Duplicator.
    Fair,
    /// Backward game; accepting and initial states must be matched
    /// pointwise.
    Backward,
    /// Backward game; only initial states must be matched.
    BackwardInit,
    /// Backward game; initial states are matched pointwise and, within every
    /// round, Duplicator must have seen at least as many accepting states as
    /// Spoiler after each step.
    BackwardCount,
}

impl SimVariant {
    pub fn direction(self) -> Direction {
        match self {
            SimVariant::Direct | SimVariant::Delayed | SimVariant::Fair => Direction::Forward,
            _ => Direction::Backward,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SimVariant::Direct => "di",
            SimVariant::Delayed => "de",
            SimVariant::Fair => "f",
            SimVariant::Backward => "bw",
            SimVariant::BackwardInit => "bw-minus",
            SimVariant::BackwardCount => "bw-count",
        }
    }

    pub const ALL: [SimVariant; 6] = [
        SimVariant::Direct,
        SimVariant::Delayed,
        SimVariant::Fair,
        SimVariant::Backward,
        SimVariant::BackwardInit,
        SimVariant::BackwardCount,
    ];
}

/// The k-lookahead simulation `⊑k-x`. Reflexive, but in general not
/// transitive for `k > 1`.
pub fn lookahead_sim(a: &Automaton, v: SimVariant, k: usize) -> Relation {
    assert!(k >= 1, "lookahead must be at least 1");
    game::Game::new(a, v, k, None).solve()
}

/// Ordinary (one-step) simulation; transitive.
pub fn ordinary_sim(a: &Automaton, v: SimVariant) -> Relation {
    lookahead_sim(a, v, 1)
}

/// The preorder `⪯k-x`: transitive closure of [`lookahead_sim`].
pub fn lookahead_preorder(a: &Automaton, v: SimVariant, k: usize) -> Relation {
    let r = lookahead_sim(a, v, k);
    if k == 1 {
        r
    } else {
        r.transitive_closure()
    }
}

/// k-lookahead fair simulation in which Duplicator may, before each step,
/// jump from her current state `q` to any `q'` with `q jump q'`. A step
/// counts as accepting for Duplicator when some accepting `q''` lies between
/// `q` and `q'` in the jump order. With the identity as `jump` this is
/// [`lookahead_sim`] with [`SimVariant::Fair`].
pub fn jumping_lookahead_fair_sim(a: &Automaton, jump: &Relation, k: usize) -> Relation {
    assert!(k >= 1, "lookahead must be at least 1");
    assert_eq!(jump.size(), a.num_states());
    debug_assert!(jump.is_preorder(), "jump relation must be a preorder");
    game::Game::new(a, SimVariant::Fair, k, Some(jump)).solve()
}
