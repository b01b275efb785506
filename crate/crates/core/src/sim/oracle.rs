//! Exact trace inclusions for very small automata, by a subset game.
//!
//! Duplicator's position is the set of all states that could still be
//! matching Spoiler's trace. Spoiler wins when she can drive that set empty
//! with a finite trace. This decides the finite-trace version of the
//! inclusions, which also bounds the infinite-trace one for automata
//! without dead ends.

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::relation::Relation;

pub const DEFAULT_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceDirection {
    /// Forward traces, accepting states matched pointwise.
    ForwardDirect,
    /// Backward traces, accepting and initial states matched pointwise.
    Backward,
}

pub fn trace_inclusion(a: &Automaton, dir: TraceDirection, cap: usize) -> Result<Relation> {
    let n = a.num_states();
    if n > cap || n > 20 {
        return Err(Error::TooLarge {
            states: n,
            cap: cap.min(20),
        });
    }
    let backward = dir == TraceDirection::Backward;
    let acc = a.accepting_mask();
    let init = a.initial_mask();
    let ok = |p: State, r: State| {
        (!acc[p] || acc[r]) && (!backward || !init[p] || init[r])
    };
    let moves = |p: State, sym: usize| if backward { a.pred(p, sym) } else { a.succ(p, sym) };
    let filter = |p: State, set: u32| -> u32 {
        let mut out = 0;
        for r in 0..n {
            if set >> r & 1 == 1 && ok(p, r) {
                out |= 1 << r;
            }
        }
        out
    };
    let post = |set: u32, sym: usize| -> u32 {
        let mut out = 0;
        for q in 0..n {
            if set >> q & 1 == 1 {
                for &r in moves(q, sym) {
                    out |= 1 << r;
                }
            }
        }
        out
    };

    let size = 1usize << n;
    let mut win = vec![false; n * size];
    for p in 0..n {
        win[p * size] = true;
    }
    loop {
        let mut changed = false;
        for p in 0..n {
            for set in 1..size as u32 {
                if win[p * size + set as usize] {
                    continue;
                }
                let wins = (0..a.num_symbols()).any(|sym| {
                    let next = post(set, sym);
                    moves(p, sym)
                        .iter()
                        .any(|&p2| win[p2 * size + filter(p2, next) as usize])
                });
                if wins {
                    win[p * size + set as usize] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Relation::from_fn(n, |p, q| {
        !win[p * size + filter(p, 1 << q) as usize]
    }))
}
