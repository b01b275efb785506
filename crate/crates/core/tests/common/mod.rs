//! Shared helpers for the integration tests: independent reference
//! implementations and the fixture automata.
#![allow(dead_code)]

use buchi_min::automaton::{Automaton, AutomatonBuilder, State};
use buchi_min::ba::parse_ba;
use buchi_min::randgen::{derive_seed, tabakov_vardi, RandomSpec};
use buchi_min::relation::Relation;
use buchi_min::sim::SimVariant;
use buchi_min::Lasso;

// ---------------------------------------------------------------------------
// parity games (max priority seen infinitely often even: player 0 wins)

pub struct ParityGame {
    pub owner: Vec<u8>,
    pub prio: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
}

impl ParityGame {
    pub fn new() -> Self {
        ParityGame {
            owner: Vec::new(),
            prio: Vec::new(),
            succ: Vec::new(),
        }
    }

    pub fn node(&mut self, owner: u8, prio: u32) -> usize {
        self.owner.push(owner);
        self.prio.push(prio);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn edge(&mut self, a: usize, b: usize) {
        self.succ[a].push(b);
    }

    fn attractor(&self, alive: &[bool], target: &[bool], player: u8) -> Vec<bool> {
        let n = self.owner.len();
        let mut attr = target.to_vec();
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] || attr[v] {
                    continue;
                }
                let moves: Vec<usize> = self.succ[v].iter().copied().filter(|&w| alive[w]).collect();
                let pulled = if self.owner[v] == player {
                    moves.iter().any(|&w| attr[w])
                } else {
                    !moves.is_empty() && moves.iter().all(|&w| attr[w])
                };
                if pulled {
                    attr[v] = true;
                    changed = true;
                }
            }
            if !changed {
                return attr;
            }
        }
    }

    /// Zielonka's recursive algorithm; every node must have a successor
    /// inside `alive`. Returns the winning region of player 0.
    fn zielonka(&self, alive: &[bool]) -> Vec<bool> {
        let n = self.owner.len();
        let Some(d) = (0..n).filter(|&v| alive[v]).map(|v| self.prio[v]).max() else {
            return vec![false; n];
        };
        let i = (d % 2) as u8;
        let top: Vec<bool> = (0..n).map(|v| alive[v] && self.prio[v] == d).collect();
        let a = self.attractor(alive, &top, i);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let w0 = self.zielonka(&rest);
        let w_opp: Vec<bool> = (0..n)
            .map(|v| rest[v] && if i == 0 { !w0[v] } else { w0[v] })
            .collect();
        if !w_opp.iter().any(|&b| b) {
            // player i wins everything
            return (0..n).map(|v| alive[v] && i == 0).collect();
        }
        let b = self.attractor(alive, &w_opp, 1 - i);
        let rest2: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let w0b = self.zielonka(&rest2);
        (0..n)
            .map(|v| {
                if !alive[v] {
                    false
                } else if b[v] {
                    i == 1
                } else {
                    w0b[v]
                }
            })
            .collect()
    }

    pub fn solve(&self) -> Vec<bool> {
        assert!(self.succ.iter().all(|s| !s.is_empty()), "dead end in game");
        self.zielonka(&vec![true; self.owner.len()])
    }
}

/// Paths of `len` steps from `p` as (symbols, states after each step).
fn paths(moves: &dyn Fn(State, usize) -> Vec<State>, s: usize, p: State, len: usize) -> Vec<(Vec<usize>, Vec<State>)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for _ in 0..len {
        let mut next = Vec::new();
        for (w, st) in &out {
            let last = *st.last().unwrap_or(&p);
            for sym in 0..s {
                for r in moves(last, sym) {
                    let mut w2 = w.clone();
                    w2.push(sym);
                    let mut st2 = st.clone();
                    st2.push(r);
                    next.push((w2, st2));
                }
            }
        }
        out = next;
    }
    out
}

/// The k-lookahead simulation game built explicitly round by round and
/// solved as a parity game. Exponential; for tiny automata only.
pub fn explicit_lookahead_sim(a: &Automaton, v: SimVariant, k: usize) -> Relation {
    let n = a.num_states();
    let s = a.num_symbols();
    let backward = matches!(
        v,
        SimVariant::Backward | SimVariant::BackwardInit | SimVariant::BackwardCount
    );
    let moves = |q: State, sym: usize| -> Vec<State> {
        if backward {
            a.pred(q, sym).to_vec()
        } else {
            a.succ(q, sym).to_vec()
        }
    };
    let f = |q: State| a.is_accepting(q);
    let i = |q: State| a.is_initial(q);
    let pointwise_bad = |p: State, q: State| match v {
        SimVariant::Direct => f(p) && !f(q),
        SimVariant::Backward | SimVariant::BackwardCount => (f(p) && !f(q)) || (i(p) && !i(q)),
        SimVariant::BackwardInit => i(p) && !i(q),
        _ => false,
    };
    let delayed = v == SimVariant::Delayed;
    let bits = if delayed { 2 } else { 1 };

    let mut g = ParityGame::new();
    let dup_sink = g.node(0, 0);
    g.edge(dup_sink, dup_sink);
    let spo_sink = g.node(1, 1);
    g.edge(spo_sink, spo_sink);
    // Spoiler nodes (p, q, obligation)
    let spo: Vec<usize> = (0..n * n * bits).map(|_| g.node(1, 0)).collect();
    let id = |p: State, q: State, b: usize| (p * n + q) * bits + b;
    let mut round_end = std::collections::HashMap::new();
    for p in 0..n {
        for q in 0..n {
            for b in 0..bits {
                let me = spo[id(p, q, b)];
                if pointwise_bad(p, q) {
                    g.edge(me, spo_sink);
                    continue;
                }
                // attacks: length k, or shorter ending in a stuck state
                let mut attacks = Vec::new();
                for len in 1..=k {
                    for (w, st) in paths(&moves, s, p, len) {
                        let last = *st.last().unwrap();
                        let stuck = (0..s).all(|sym| moves(last, sym).is_empty());
                        if len == k || stuck {
                            attacks.push((w, st));
                        }
                    }
                }
                if attacks.is_empty() {
                    g.edge(me, dup_sink);
                    continue;
                }
                for (w, st) in attacks {
                    let d = g.node(0, 0);
                    g.edge(me, d);
                    let mut any = false;
                    for m in 1..=w.len() {
                        // Duplicator paths reading w[..m]
                        let mut reps: Vec<Vec<State>> = vec![vec![]];
                        for j in 0..m {
                            let mut next = Vec::new();
                            for r in &reps {
                                let last = *r.last().unwrap_or(&q);
                                for x in moves(last, w[j]) {
                                    let mut r2 = r.clone();
                                    r2.push(x);
                                    next.push(r2);
                                }
                            }
                            reps = next;
                        }
                        for r in reps {
                            let mut ok = true;
                            let mut surplus: i32 = 0;
                            let mut dacc = false;
                            let mut sacc = false;
                            let mut ob = b == 1;
                            let mut ob_free = false;
                            for j in 0..m {
                                let (pj, qj) = (st[j], r[j]);
                                match v {
                                    SimVariant::Direct | SimVariant::Backward | SimVariant::BackwardInit => {
                                        if pointwise_bad(pj, qj) {
                                            ok = false;
                                        }
                                    }
                                    SimVariant::BackwardCount => {
                                        if i(pj) && !i(qj) {
                                            ok = false;
                                        }
                                        surplus += f(qj) as i32 - f(pj) as i32;
                                        if surplus < 0 {
                                            ok = false;
                                        }
                                    }
                                    SimVariant::Fair => {
                                        dacc |= f(qj);
                                        sacc |= f(pj);
                                    }
                                    SimVariant::Delayed => {
                                        if f(qj) {
                                            ob = false;
                                        } else if f(pj) {
                                            ob = true;
                                        }
                                        ob_free |= !ob;
                                    }
                                }
                            }
                            if !ok {
                                continue;
                            }
                            any = true;
                            let (pm, qm) = (st[m - 1], r[m - 1]);
                            let prio = match v {
                                SimVariant::Fair => {
                                    if dacc {
                                        2
                                    } else if sacc {
                                        1
                                    } else {
                                        0
                                    }
                                }
                                SimVariant::Delayed => {
                                    if ob_free {
                                        2
                                    } else {
                                        1
                                    }
                                }
                                _ => 0,
                            };
                            let target = spo[id(pm, qm, if delayed { ob as usize } else { 0 })];
                            let e = *round_end.entry((target, prio)).or_insert_with(|| {
                                let e = g.node(0, prio);
                                e
                            });
                            g.edge(d, e);
                        }
                    }
                    if !any {
                        g.edge(d, spo_sink);
                    }
                }
            }
        }
    }
    for ((target, _), e) in round_end {
        g.edge(e, target);
    }
    let win = g.solve();
    Relation::from_fn(n, |p, q| {
        let b = (delayed && f(p) && !f(q)) as usize;
        win[spo[id(p, q, b)]]
    })
}

// ---------------------------------------------------------------------------
// lassos

/// Membership of `u v^ω` by Büchi emptiness of the product with the lasso's
/// own deterministic automaton.
pub fn member_by_product(a: &Automaton, w: &Lasso) -> bool {
    let len = w.u.len() + w.v.len();
    let letter = |i: usize| if i < w.u.len() { w.u[i] } else { w.v[i - w.u.len()] };
    let next = |i: usize| if i + 1 < len { i + 1 } else { w.u.len() };
    let n = a.num_states();
    let idx = |q: State, i: usize| q * len + i;
    let mut succ = vec![Vec::new(); n * len];
    for q in 0..n {
        for i in 0..len {
            for &r in a.succ(q, letter(i)) {
                succ[idx(q, i)].push(idx(r, next(i)));
            }
        }
    }
    // reachable product states
    let mut seen = vec![false; n * len];
    let mut stack: Vec<usize> = a.initial_states().map(|q| idx(q, 0)).collect();
    for &x in &stack {
        seen[x] = true;
    }
    while let Some(x) = stack.pop() {
        for &y in &succ[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    // some reachable accepting product state lies on a cycle
    (0..n * len).any(|x| {
        if !seen[x] || !a.is_accepting(x / len) {
            return false;
        }
        let mut vis = vec![false; n * len];
        let mut st = succ[x].clone();
        while let Some(y) = st.pop() {
            if y == x {
                return true;
            }
            if !vis[y] {
                vis[y] = true;
                st.extend(succ[y].iter().copied());
            }
        }
        false
    })
}

/// All lassos over `s` symbols with `|u| ≤ max_u`, `1 ≤ |v| ≤ max_v`.
pub fn all_lassos(s: usize, max_u: usize, max_v: usize) -> Vec<Lasso> {
    let words = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..s).map(move |x| {
                        let mut w2 = w.clone();
                        w2.push(x);
                        w2
                    })
                })
                .collect();
        }
        out
    };
    let mut out = Vec::new();
    for lu in 0..=max_u {
        for u in words(lu) {
            for lv in 1..=max_v {
                for v in words(lv) {
                    out.push(Lasso::new(u.clone(), v));
                }
            }
        }
    }
    out
}

/// Bit vector of memberships of every lasso within bounds.
pub fn lasso_language(a: &Automaton, lassos: &[Lasso]) -> Vec<bool> {
    lassos.iter().map(|w| buchi_min::lasso::member_lasso(a, w)).collect()
}

/// First lasso on which the two automata disagree, if any. Both must share
/// an alphabet.
pub fn language_difference(a: &Automaton, b: &Automaton, lassos: &[Lasso]) -> Option<Lasso> {
    assert_eq!(a.alphabet(), b.alphabet());
    lassos
        .iter()
        .find(|w| buchi_min::lasso::member_lasso(a, w) != buchi_min::lasso::member_lasso(b, w))
        .cloned()
}

// ---------------------------------------------------------------------------
// corpora

pub fn random(n: usize, s: usize, td: f64, ad: f64, seed: u64) -> Automaton {
    tabakov_vardi(&RandomSpec {
        states: n,
        symbols: s,
        td,
        ad,
        seed,
    })
}

/// Deterministic corpus of `count` small automata with sizes in
/// `min_n..=max_n` and densities drawn from `tds`.
pub fn corpus(count: usize, min_n: usize, max_n: usize, tds: &[f64], base: u64) -> Vec<Automaton> {
    (0..count)
        .map(|i| {
            let seed = derive_seed(base, i as u64);
            let n = min_n + (seed % (max_n - min_n + 1) as u64) as usize;
            let td = tds[(seed >> 8) as usize % tds.len()];
            random(n, 2, td.min(n as f64), 0.5, seed)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// fixtures

pub fn state(a: &Automaton, name: &str) -> State {
    a.names().iter().position(|x| x == name).unwrap_or_else(|| panic!("no state {name}"))
}

pub fn sym(a: &Automaton, label: &str) -> usize {
    a.symbol_index(label).unwrap()
}

pub fn word(a: &Automaton, labels: &str) -> Vec<usize> {
    labels.chars().map(|c| sym(a, &c.to_string())).collect()
}

pub fn lasso(a: &Automaton, u: &str, v: &str) -> Lasso {
    Lasso::new(word(a, u), word(a, v))
}

fn build(initial: &[&str], accepting: &[&str], edges: &[(&str, &str, &str)]) -> Automaton {
    let mut b = AutomatonBuilder::new();
    let mut names: Vec<String> = Vec::new();
    let mut get = |b: &mut AutomatonBuilder, x: &str| {
        if let Some(i) = names.iter().position(|y| y == x) {
            i
        } else {
            names.push(x.to_string());
            b.add_state(x)
        }
    };
    for x in initial {
        let q = get(&mut b, x);
        b.initial(q);
    }
    for (p, labels, q) in edges {
        let (p, q) = (get(&mut b, p), get(&mut b, q));
        for l in labels.split(',') {
            b.transition(p, l, q);
        }
    }
    for x in accepting {
        let q = get(&mut b, x);
        b.accepting(q);
    }
    b.build()
}

/// Forward/backward pruning counterexample: dashed transitions
/// `p0 -a-> q0` and `r1 -a-> s1`.
pub fn two_sided_pruning() -> Automaton {
    build(
        &["i"],
        &["f"],
        &[
            ("i", "a", "p0"),
            ("i", "c", "x0"),
            ("i", "b", "r0"),
            ("p0", "a", "q0"),
            ("q0", "a", "r0"),
            ("r0", "a", "s0"),
            ("s0", "a,d", "f"),
            ("x0", "a", "y0"),
            ("y0", "a", "r0"),
            ("i", "a,c", "p1"),
            ("p1", "a", "q1"),
            ("q1", "a", "x1"),
            ("q1", "b", "f"),
            ("q1", "a", "r1"),
            ("r1", "a", "s1"),
            ("s1", "a", "f"),
            ("x1", "a", "y1"),
            ("y1", "d", "f"),
            ("f", "e", "f"),
        ],
    )
}

/// Union counterexample.
pub fn pruning_union() -> Automaton {
    build(
        &["p"],
        &["s"],
        &[
            ("p", "a", "q"),
            ("q", "a,b", "s"),
            ("p", "a,b", "r"),
            ("r", "a", "s"),
            ("s", "c", "s"),
        ],
    )
}

/// Delayed-simulation counterexample.
pub fn delayed_pruning() -> Automaton {
    build(&["p"], &["q"], &[("p", "a", "q"), ("p", "a,b", "p"), ("q", "a", "q")])
}

/// Transient-rule counterexample.
pub fn transient_pruning() -> Automaton {
    build(
        &["p", "q"],
        &["r"],
        &[("p", "a", "q"), ("q", "a,b", "r"), ("p", "a,b", "p"), ("r", "a", "r")],
    )
}

/// Non-transitivity of lookahead simulation; every state accepting.
pub fn nontransitive() -> Automaton {
    let text = "\
[p0]
[q0]
[r0]
a,[p0]->[p0]
b,[p0]->[p0]
a,[q0]->[q1]
b,[q0]->[q1]
a,[q0]->[q2]
b,[q0]->[q2]
a,[q1]->[q0]
b,[q2]->[q0]
a,[r0]->[r1]
b,[r0]->[r1]
a,[r0]->[r2]
b,[r0]->[r2]
a,[r1]->[r1]
a,[r1]->[r2]
b,[r2]->[r2]
b,[r2]->[r1]
";
    parse_ba(text).unwrap()
}
