//! Ultimately periodic words `u v^ω`: exact membership and bounded
//! enumeration of accepted lassos.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use crate::automaton::{Automaton, State, Symbol};
use crate::error::{Error, Result};
use crate::graph;

/// The word `u v^ω`; `v` is never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    pub u: Vec<Symbol>,
    pub v: Vec<Symbol>,
}

impl Lasso {
    pub fn new(u: Vec<Symbol>, v: Vec<Symbol>) -> Lasso {
        assert!(!v.is_empty(), "lasso cycle must be nonempty");
        Lasso { u, v }
    }

    /// Builds a lasso from symbol labels, resolving them against `alphabet`.
    pub fn from_labels(alphabet: &[String], u: &[&str], v: &[&str]) -> Result<Lasso> {
        let resolve = |w: &[&str]| -> Result<Vec<Symbol>> {
            w.iter()
                .map(|l| {
                    alphabet
                        .iter()
                        .position(|s| s == l)
                        .ok_or_else(|| Error::UnknownSymbol(l.to_string()))
                })
                .collect()
        };
        let v = resolve(v)?;
        if v.is_empty() {
            return Err(Error::Precondition("lasso cycle must be nonempty".into()));
        }
        Ok(Lasso { u: resolve(u)?, v })
    }

    pub fn labels<'a>(&self, alphabet: &'a [String]) -> (Vec<&'a str>, Vec<&'a str>) {
        let f = |w: &[Symbol]| w.iter().map(|&s| alphabet[s].as_str()).collect();
        (f(&self.u), f(&self.v))
    }

    /// Human-readable form `u(v)^ω` with labels separated by spaces when any
    /// label is longer than one character.
    pub fn display<'a>(&'a self, alphabet: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Lasso, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let sep = if self.1.iter().any(|l| l.chars().count() > 1) { " " } else { "" };
                let (u, v) = self.0.labels(self.1);
                write!(f, "{}({})^w", u.join(sep), v.join(sep))
            }
        }
        D(self, alphabet)
    }
}

/// States reachable from `from` by reading `w`.
pub fn post_word(a: &Automaton, from: &[bool], w: &[Symbol]) -> Vec<bool> {
    let mut cur = from.to_vec();
    for &s in w {
        let mut next = vec![false; a.num_states()];
        for q in 0..a.num_states() {
            if cur[q] {
                for &r in a.succ(q, s) {
                    next[r] = true;
                }
            }
        }
        cur = next;
    }
    cur
}

/// Edges of the `v`-step graph from `q`: each target `r` reachable by
/// reading `v` from `q`, flagged when some such path visits an accepting
/// state (including `q` and `r`).
fn v_step(a: &Automaton, q: State, v: &[Symbol]) -> Vec<(State, bool)> {
    let n = a.num_states();
    let mut cur = vec![0u8; n]; // bit 0: present, bit 1: accepting seen
    cur[q] = 1 | if a.is_accepting(q) { 2 } else { 0 };
    for &s in v {
        let mut next = vec![0u8; n];
        for p in 0..n {
            if cur[p] == 0 {
                continue;
            }
            for &r in a.succ(p, s) {
                let f = cur[p] | 1 | if a.is_accepting(r) { 2 } else { 0 };
                next[r] |= f;
            }
        }
        cur = next;
    }
    (0..n)
        .filter(|&r| cur[r] != 0)
        .map(|r| (r, cur[r] & 2 != 0))
        .collect()
}

/// Decides `u v^ω ∈ L(a)` exactly.
pub fn member_lasso(a: &Automaton, w: &Lasso) -> bool {
    member_from(a, &post_word(a, a.initial_mask(), &w.u), &w.v)
}

/// Decides whether `v^ω` is accepted from some state in `start`.
pub fn member_from(a: &Automaton, start: &[bool], v: &[Symbol]) -> bool {
    let n = a.num_states();
    if n == 0 || v.is_empty() {
        return false;
    }
    let edges: Vec<Vec<(State, bool)>> = (0..n).map(|q| v_step(a, q, v)).collect();
    let succ: Vec<Vec<State>> = edges
        .iter()
        .map(|es| es.iter().map(|&(r, _)| r).collect())
        .collect();
    let reach = graph::reachable(&succ, (0..n).filter(|&q| start[q]));
    let comp = graph::strongly_connected_components(&succ);
    (0..n).any(|q| {
        reach[q]
            && edges[q]
                .iter()
                .any(|&(r, acc)| acc && comp.id[r] == comp.id[q])
    })
}

/// Every lasso `(u, v)` with `|u| ≤ max_u`, `1 ≤ |v| ≤ max_v` such that an
/// initial `u`-trace ends in a state `q` carrying a `v`-cycle through an
/// accepting state. Ordered by `|u|`, `u`, `|v|`, `v`.
pub fn enumerate_accepting_lassos(a: &Automaton, max_u: usize, max_v: usize) -> Vec<Lasso> {
    let n = a.num_states();
    let s = a.num_symbols();
    let mut out = Vec::new();
    if n == 0 || s == 0 || max_v == 0 {
        return out;
    }
    for lu in 0..=max_u {
        for_each_word(s, lu, |u| {
            let ends = post_word(a, a.initial_mask(), u);
            if !ends.iter().any(|&b| b) {
                return true;
            }
            for lv in 1..=max_v {
                for_each_word(s, lv, |v| {
                    if has_accepting_cycle(a, &ends, v) {
                        out.push(Lasso::new(u.to_vec(), v.to_vec()));
                    }
                    true
                });
            }
            true
        });
    }
    out
}

/// True iff some `q` in `at` reads `v` back to itself through an accepting
/// state.
fn has_accepting_cycle(a: &Automaton, at: &[bool], v: &[Symbol]) -> bool {
    (0..a.num_states())
        .filter(|&q| at[q])
        .any(|q| v_step(a, q, v).iter().any(|&(r, acc)| r == q && acc))
}

/// Calls `f` on every word of length `len` in lexicographic order until it
/// returns `false`.
fn for_each_word(s: usize, len: usize, mut f: impl FnMut(&[Symbol]) -> bool) {
    let mut w = vec![0; len];
    loop {
        if !f(&w) {
            return;
        }
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < s {
                break;
            }
            w[i] = 0;
        }
    }
}

/// Limits for [`counterexample_search`].
#[derive(Clone, Debug)]
pub struct SearchBounds {
    pub max_u: usize,
    pub max_v: usize,
    pub deadline: Option<Instant>,
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Found(Lasso),
    Exhausted,
    TimedOut,
}

/// First lasso (in the canonical order) accepted by `a` but not by `b`.
/// Both automata must share an alphabet.
pub fn counterexample_search(a: &Automaton, b: &Automaton, bounds: &SearchBounds) -> Search {
    assert_eq!(a.alphabet(), b.alphabet(), "alphabets must agree");
    let s = a.num_symbols();
    if a.num_states() == 0 || s == 0 || bounds.max_v == 0 {
        return Search::Exhausted;
    }
    // Stems are visited by length, then lexicographically. A stem whose pair
    // of reached state sets was already seen behaves exactly like the earlier
    // stem, as do all its extensions, so it is skipped.
    let mut seen: HashSet<(Vec<bool>, Vec<bool>)> = HashSet::new();
    let mut level: Vec<Vec<Symbol>> = vec![Vec::new()];
    for lu in 0..=bounds.max_u {
        let mut next_level = Vec::new();
        for u in &level {
            let sa = post_word(a, a.initial_mask(), u);
            if !sa.iter().any(|&x| x) {
                continue;
            }
            let sb = post_word(b, b.initial_mask(), u);
            if !seen.insert((sa.clone(), sb.clone())) {
                continue;
            }
            for lv in 1..=bounds.max_v {
                let mut found = None;
                let mut timed_out = false;
                for_each_word(s, lv, |v| {
                    if found.is_some() || timed_out {
                        return false;
                    }
                    if let Some(d) = bounds.deadline {
                        if Instant::now() > d {
                            timed_out = true;
                            return false;
                        }
                    }
                    if member_from(a, &sa, v) && !member_from(b, &sb, v) {
                        found = Some(v.to_vec());
                    }
                    true
                });
                if let Some(v) = found {
                    let w = Lasso::new(u.clone(), v);
                    debug_assert!(member_lasso(a, &w) && !member_lasso(b, &w));
                    return Search::Found(w);
                }
                if timed_out {
                    return Search::TimedOut;
                }
            }
            if lu < bounds.max_u {
                for sym in 0..s {
                    let mut e = u.clone();
                    e.push(sym);
                    next_level.push(e);
                }
            }
        }
        level = next_level;
    }
    Search::Exhausted
}
