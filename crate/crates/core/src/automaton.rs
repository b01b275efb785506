//! Explicit Büchi automata over a finite, label-indexed alphabet.
//!
//! States are dense indices `0..n`; every state keeps the name it was created
//! with. Transitions are stored twice, as forward and backward adjacency
//! lists indexed by `[state][symbol]`, both sorted and duplicate-free.
//! Automata may be incomplete: a state can lack successors (or predecessors)
//! for any symbol.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::graph;

/// Index of a state.
pub type State = usize;
/// Index of a symbol in [`Automaton::alphabet`].
pub type Symbol = usize;

/// A single transition `src --sym--> dst`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionRef {
    pub src: State,
    pub sym: Symbol,
    pub dst: State,
}

impl TransitionRef {
    pub fn new(src: State, sym: Symbol, dst: State) -> Self {
        TransitionRef { src, sym, dst }
    }
}

/// A nondeterministic Büchi automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Vec<String>,
    names: Vec<String>,
    initial: Vec<bool>,
    accepting: Vec<bool>,
    fwd: Vec<Vec<Vec<State>>>,
    bwd: Vec<Vec<Vec<State>>>,
}

/// Incremental constructor for [`Automaton`].
///
/// The alphabet is kept sorted by label, so two automata over the same set of
/// labels always agree on symbol indices.
#[derive(Clone, Debug, Default)]
pub struct AutomatonBuilder {
    alphabet: BTreeSet<String>,
    names: Vec<String>,
    initial: BTreeSet<State>,
    accepting: BTreeSet<State>,
    transitions: Vec<(State, String, State)>,
}

impl AutomatonBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a symbol even if no transition uses it.
    pub fn symbol(&mut self, label: &str) -> &mut Self {
        self.alphabet.insert(label.to_string());
        self
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> State {
        self.names.push(name.into());
        self.names.len() - 1
    }

    /// Adds `count` states named by their index.
    pub fn add_states(&mut self, count: usize) -> std::ops::Range<State> {
        let start = self.names.len();
        for i in 0..count {
            self.names.push((start + i).to_string());
        }
        start..start + count
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&mut self, q: State) -> &mut Self {
        self.initial.insert(q);
        self
    }

    pub fn accepting(&mut self, q: State) -> &mut Self {
        self.accepting.insert(q);
        self
    }

    pub fn transition(&mut self, src: State, label: &str, dst: State) -> &mut Self {
        self.alphabet.insert(label.to_string());
        self.transitions.push((src, label.to_string(), dst));
        self
    }

    pub fn build(&self) -> Automaton {
        let n = self.names.len();
        let alphabet: Vec<String> = self.alphabet.iter().cloned().collect();
        let index: BTreeMap<&str, Symbol> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut initial = vec![false; n];
        for &q in &self.initial {
            assert!(q < n, "initial state {q} out of range");
            initial[q] = true;
        }
        let mut accepting = vec![false; n];
        for &q in &self.accepting {
            assert!(q < n, "accepting state {q} out of range");
            accepting[q] = true;
        }
        let edges: Vec<_> = self
            .transitions
            .iter()
            .map(|(p, s, q)| {
                assert!(*p < n && *q < n, "transition endpoint out of range");
                TransitionRef::new(*p, index[s.as_str()], *q)
            })
            .collect();
        drop(index);
        Automaton::from_parts(alphabet, self.names.clone(), initial, accepting, edges)
    }
}

impl Automaton {
    /// Assembles an automaton from raw parts. Adjacency lists are sorted and
    /// deduplicated here, so `edges` may contain repeats.
    pub(crate) fn from_parts(
        alphabet: Vec<String>,
        names: Vec<String>,
        initial: Vec<bool>,
        accepting: Vec<bool>,
        edges: impl IntoIterator<Item = TransitionRef>,
    ) -> Automaton {
        let n = names.len();
        let s = alphabet.len();
        let mut fwd = vec![vec![Vec::new(); s]; n];
        let mut bwd = vec![vec![Vec::new(); s]; n];
        for t in edges {
            fwd[t.src][t.sym].push(t.dst);
            bwd[t.dst][t.sym].push(t.src);
        }
        for lists in fwd.iter_mut().chain(bwd.iter_mut()) {
            for l in lists.iter_mut() {
                l.sort_unstable();
                l.dedup();
            }
        }
        Automaton {
            alphabet,
            names,
            initial,
            accepting,
            fwd,
            bwd,
        }
    }

    /// The automaton with no states over the given alphabet.
    pub fn empty(alphabet: Vec<String>) -> Automaton {
        let alphabet: Vec<String> = alphabet
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Automaton::from_parts(alphabet, Vec::new(), Vec::new(), Vec::new(), [])
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.fwd.iter().flatten().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbol_index(&self, label: &str) -> Option<Symbol> {
        self.alphabet.binary_search_by(|s| s.as_str().cmp(label)).ok()
    }

    pub fn name(&self, q: State) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_initial(&self, q: State) -> bool {
        self.initial[q]
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q]
    }

    pub fn initial_mask(&self) -> &[bool] {
        &self.initial
    }

    pub fn accepting_mask(&self) -> &[bool] {
        &self.accepting
    }

    pub fn initial_states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.num_states()).filter(|&q| self.initial[q])
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    /// Successors of `q` on `sym`, sorted.
    pub fn succ(&self, q: State, sym: Symbol) -> &[State] {
        &self.fwd[q][sym]
    }

    /// Predecessors of `q` on `sym`, sorted.
    pub fn pred(&self, q: State, sym: Symbol) -> &[State] {
        &self.bwd[q][sym]
    }

    pub(crate) fn forward_lists(&self) -> &[Vec<Vec<State>>] {
        &self.fwd
    }

    pub(crate) fn backward_lists(&self) -> &[Vec<Vec<State>>] {
        &self.bwd
    }

    pub fn has_transition(&self, t: TransitionRef) -> bool {
        t.src < self.num_states()
            && t.sym < self.num_symbols()
            && self.fwd[t.src][t.sym].binary_search(&t.dst).is_ok()
    }

    /// All transitions ordered by `(src, sym, dst)`.
    pub fn transitions(&self) -> impl Iterator<Item = TransitionRef> + '_ {
        self.fwd.iter().enumerate().flat_map(|(p, lists)| {
            lists
                .iter()
                .enumerate()
                .flat_map(move |(s, l)| l.iter().map(move |&q| TransitionRef::new(p, s, q)))
        })
    }

    /// True iff `q` has no outgoing transition at all.
    pub fn is_forward_deadlocked(&self, q: State) -> bool {
        self.fwd[q].iter().all(Vec::is_empty)
    }

    /// True iff `q` has no incoming transition at all.
    pub fn is_backward_deadlocked(&self, q: State) -> bool {
        self.bwd[q].iter().all(Vec::is_empty)
    }

    /// Keeps the states with `keep[q]` set, renumbering them in index order.
    pub fn restrict(&self, keep: &[bool]) -> Automaton {
        assert_eq!(keep.len(), self.num_states());
        let mut map = vec![usize::MAX; self.num_states()];
        let mut next = 0;
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = next;
                next += 1;
            }
        }
        let pick = |v: &Vec<bool>| (0..v.len()).filter(|&q| keep[q]).map(|q| v[q]).collect();
        let names = (0..self.num_states())
            .filter(|&q| keep[q])
            .map(|q| self.names[q].clone())
            .collect();
        let edges = self
            .transitions()
            .filter(|t| keep[t.src] && keep[t.dst])
            .map(|t| TransitionRef::new(map[t.src], t.sym, map[t.dst]))
            .collect::<Vec<_>>();
        Automaton::from_parts(
            self.alphabet.clone(),
            names,
            pick(&self.initial),
            pick(&self.accepting),
            edges,
        )
    }

    /// Keeps exactly the transitions for which `keep` holds.
    pub fn retain_transitions(&self, mut keep: impl FnMut(TransitionRef) -> bool) -> Automaton {
        let edges: Vec<_> = self.transitions().filter(|&t| keep(t)).collect();
        Automaton::from_parts(
            self.alphabet.clone(),
            self.names.clone(),
            self.initial.clone(),
            self.accepting.clone(),
            edges,
        )
    }

    /// Re-indexes the alphabet onto `alphabet`, which must contain every
    /// label of `self` and be sorted.
    pub fn with_alphabet(&self, alphabet: &[String]) -> Automaton {
        let map: Vec<Symbol> = self
            .alphabet
            .iter()
            .map(|l| {
                alphabet
                    .binary_search(l)
                    .unwrap_or_else(|_| panic!("label {l:?} missing from target alphabet"))
            })
            .collect();
        let edges: Vec<_> = self
            .transitions()
            .map(|t| TransitionRef::new(t.src, map[t.sym], t.dst))
            .collect();
        Automaton::from_parts(
            alphabet.to_vec(),
            self.names.clone(),
            self.initial.clone(),
            self.accepting.clone(),
            edges,
        )
    }

    /// Checks the structural invariants: mirrored adjacency, sorted and
    /// duplicate-free lists, indices in range.
    pub fn audit(&self) -> Result<(), String> {
        let n = self.num_states();
        let s = self.num_symbols();
        if self.initial.len() != n || self.accepting.len() != n || self.bwd.len() != n {
            return Err("per-state vectors disagree on state count".into());
        }
        if self.alphabet.windows(2).any(|w| w[0] >= w[1]) {
            return Err("alphabet not strictly sorted".into());
        }
        for (dir, lists) in [("fwd", &self.fwd), ("bwd", &self.bwd)] {
            for (q, per_sym) in lists.iter().enumerate() {
                if per_sym.len() != s {
                    return Err(format!("{dir}[{q}] has {} symbol slots", per_sym.len()));
                }
                for l in per_sym {
                    if l.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(format!("{dir}[{q}] not sorted/deduplicated"));
                    }
                    if l.iter().any(|&r| r >= n) {
                        return Err(format!("{dir}[{q}] references a missing state"));
                    }
                }
            }
        }
        for t in self.transitions() {
            if self.bwd[t.dst][t.sym].binary_search(&t.src).is_err() {
                return Err(format!("missing mirror for {t:?}"));
            }
        }
        let back: usize = self.bwd.iter().flatten().map(Vec::len).sum();
        if back != self.num_transitions() {
            return Err("backward adjacency has extra entries".into());
        }
        Ok(())
    }

    /// Compares automata by state names rather than indices: same alphabet,
    /// same named states, initial and accepting sets and transitions.
    pub fn same_structure(&self, other: &Automaton) -> bool {
        if self.alphabet != other.alphabet || self.num_states() != other.num_states() {
            return false;
        }
        fn key(a: &Automaton) -> (BTreeMap<&str, (bool, bool)>, BTreeSet<(&str, Symbol, &str)>) {
            let states: BTreeMap<&str, (bool, bool)> = (0..a.num_states())
                .map(|q| (a.name(q), (a.initial[q], a.accepting[q])))
                .collect();
            let edges: BTreeSet<(&str, Symbol, &str)> = a
                .transitions()
                .map(|t| (a.name(t.src), t.sym, a.name(t.dst)))
                .collect();
            (states, edges)
        }
        key(self) == key(other)
    }

    /// Graph of all transitions with labels forgotten.
    pub(crate) fn successor_graph(&self) -> Vec<Vec<State>> {
        self.fwd
            .iter()
            .map(|lists| {
                let mut all: Vec<State> = lists.iter().flatten().copied().collect();
                all.sort_unstable();
                all.dedup();
                all
            })
            .collect()
    }

    /// Removes every state that is unreachable from an initial state or that
    /// cannot reach a cycle through an accepting state.
    pub fn remove_dead(&self) -> Automaton {
        let live = self.live_states();
        if live.iter().all(|&b| b) {
            return self.clone();
        }
        if !live.iter().any(|&b| b) {
            return Automaton::empty(self.alphabet.clone());
        }
        self.restrict(&live)
    }

    /// Live-state mask used by [`Automaton::remove_dead`].
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let succ = self.successor_graph();
        let reach = graph::reachable(&succ, self.initial_states());
        let comp = graph::strongly_connected_components(&succ);
        let mut good_comp = vec![false; comp.count];
        for p in 0..n {
            if !self.accepting[p] {
                continue;
            }
            let c = comp.id[p];
            // accepting state on a cycle: nontrivial SCC or self-loop
            if comp.size[c] > 1 || succ[p].binary_search(&p).is_ok() {
                good_comp[c] = true;
            }
        }
        let mut pred = vec![Vec::new(); n];
        for (p, out) in succ.iter().enumerate() {
            for &q in out {
                pred[q].push(p);
            }
        }
        let seeds = (0..n).filter(|&q| good_comp[comp.id[q]]);
        let coreach = graph::reachable(&pred, seeds);
        (0..n).map(|q| reach[q] && coreach[q]).collect()
    }

    /// True iff no path leads from `t.dst` back to `t.src`, so any run uses
    /// `t` at most once.
    pub fn is_transient(&self, t: TransitionRef) -> bool {
        debug_assert!(self.has_transition(t));
        let comp = graph::strongly_connected_components(&self.successor_graph());
        comp.id[t.src] != comp.id[t.dst]
    }

    /// Transience for every transition at once, keyed by [`TransitionRef`].
    pub fn transient_transitions(&self) -> HashSet<TransitionRef> {
        let comp = graph::strongly_connected_components(&self.successor_graph());
        self.transitions()
            .filter(|t| comp.id[t.src] != comp.id[t.dst])
            .collect()
    }
}

/// Places `b` next to `a`. States of `a` keep their indices, states of `b`
/// are shifted by `a.num_states()`; the returned offset is that shift.
/// Symbols are matched by label over the union of both alphabets. Names of
/// `b` that clash with names in `a` get a `'` suffix.
pub fn disjoint_union(a: &Automaton, b: &Automaton) -> (Automaton, usize) {
    let alphabet: Vec<String> = a
        .alphabet
        .iter()
        .chain(b.alphabet.iter())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let a2 = a.with_alphabet(&alphabet);
    let b2 = b.with_alphabet(&alphabet);
    let offset = a.num_states();
    let mut taken: HashSet<String> = a.names.iter().cloned().collect();
    let mut names = a.names.clone();
    for name in &b.names {
        let mut candidate = name.clone();
        while taken.contains(&candidate) {
            candidate.push('\'');
        }
        taken.insert(candidate.clone());
        names.push(candidate);
    }
    let initial = a2.initial.iter().chain(b2.initial.iter()).copied().collect();
    let accepting = a2
        .accepting
        .iter()
        .chain(b2.accepting.iter())
        .copied()
        .collect();
    let edges: Vec<_> = a2
        .transitions()
        .chain(
            b2.transitions()
                .map(|t| TransitionRef::new(t.src + offset, t.sym, t.dst + offset)),
        )
        .collect();
    (
        Automaton::from_parts(alphabet, names, initial, accepting, edges),
        offset,
    )
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::ba::serialize_ba(self))
    }
}
