//! The k-lookahead simulation game.
//!
//! Spoiler's winning region is computed as a fixpoint of a predecessor
//! operator. `CPre(X, Y, Z)` holds at `(p, q)` iff Spoiler has an attack
//! `p = p0 → p1 → … → pk` such that every Duplicator reply
//! `q = q0 → … → qm` (`1 ≤ m ≤ k`) ends in a pair that lies
//!
//! * in `X`, if Spoiler saw an accepting state and Duplicator did not,
//! * in `Y`, if Duplicator saw no accepting state,
//! * in `Z` in any case.
//!
//! For direct and backward conditions only `Z` is used, and replies that
//! violate the condition on the way are discarded. Attacks are explored
//! depth-first and a prefix is abandoned as soon as Duplicator can answer
//! it; replies are grown one step at a time alongside the attack, so every
//! reply length is tried in increasing order.
//!
//! Attack prefixes reached along different paths often end in the same
//! state with the same Duplicator positions; their outcome is cached until
//! one of the sets changes.
//!
//! An attack may stop before `k` steps only in a state without moves. A
//! Spoiler state without any move loses immediately.

use std::collections::HashMap;

use crate::automaton::{Automaton, State};
use crate::relation::Relation;

use super::{Direction, SimVariant};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Pointwise condition; tags unused.
    Safety,
    /// Tag is Duplicator's accepting-visit surplus within the round.
    Count,
    /// Tag is 1 iff Duplicator has seen an accepting state in the round.
    Flags,
    /// Tag is 1 iff every accepting Spoiler state of the round so far was
    /// answered by an accepting Duplicator state at the same or a later
    /// position.
    Pending,
}

/// Attack prefix: last Spoiler state, depth, whether Spoiler has seen an
/// accepting state (kept only where it matters), Duplicator's positions.
type Node = (State, u8, bool, Box<[(State, u8)]>);

/// Entries kept before the cache is dropped wholesale.
const MEMO_LIMIT: usize = 1 << 22;

/// Sets read by one predecessor evaluation.
struct Sets<'r> {
    x: &'r Relation,
    y: &'r Relation,
    z: &'r Relation,
}

#[derive(Clone)]
pub(super) struct Game<'a> {
    n: usize,
    s: usize,
    k: usize,
    variant: SimVariant,
    mode: Mode,
    spoiler: &'a [Vec<Vec<State>>],
    dup: Vec<Vec<Vec<(State, bool)>>>,
    acc: &'a [bool],
    init: &'a [bool],
    stuck: Vec<bool>,
    best: Vec<i16>,
    touched: Vec<State>,
    memo: HashMap<Node, bool>,
}

impl<'a> Game<'a> {
    pub(super) fn new(
        a: &'a Automaton,
        variant: SimVariant,
        k: usize,
        jump: Option<&Relation>,
    ) -> Game<'a> {
        let n = a.num_states();
        let s = a.num_symbols();
        let spoiler = match variant.direction() {
            Direction::Forward => a.forward_lists(),
            Direction::Backward => a.backward_lists(),
        };
        let mode = match variant {
            SimVariant::Delayed | SimVariant::Fair => Mode::Flags,
            SimVariant::BackwardCount => Mode::Count,
            _ => Mode::Safety,
        };
        let dup = match jump {
            None => spoiler
                .iter()
                .map(|l| l.iter().map(|v| v.iter().map(|&r| (r, false)).collect()).collect())
                .collect(),
            Some(j) => jump_moves(a, j),
        };
        let stuck = (0..n).map(|p| spoiler[p].iter().all(Vec::is_empty)).collect();
        Game {
            n,
            s,
            k,
            variant,
            mode,
            spoiler,
            dup,
            acc: a.accepting_mask(),
            init: a.initial_mask(),
            stuck,
            best: vec![-1; n],
            touched: Vec::new(),
            memo: HashMap::new(),
        }
    }

    /// Pointwise violation of the winning condition by the pair `(p, q)`
    /// inside a round.
    fn violates(&self, p: State, q: State) -> bool {
        let f = self.acc[p] && !self.acc[q];
        let i = self.init[p] && !self.init[q];
        match self.variant {
            SimVariant::Direct => f,
            SimVariant::Backward => f || i,
            SimVariant::BackwardInit | SimVariant::BackwardCount => i,
            SimVariant::Delayed | SimVariant::Fair => false,
        }
    }

    /// Violation at the very start of the game.
    fn violates_initially(&self, p: State, q: State) -> bool {
        match self.variant {
            SimVariant::BackwardCount => {
                (self.acc[p] && !self.acc[q]) || (self.init[p] && !self.init[q])
            }
            _ => self.violates(p, q),
        }
    }

    /// Duplicator's positions after Spoiler moved to `p2` on `sym`.
    fn extend(&mut self, front: &[(State, u8)], sym: usize, p2: State) -> Vec<(State, u8)> {
        for &(q, tag) in front {
            for &(r, jumped) in &self.dup[q][sym] {
                let t = match self.mode {
                    Mode::Safety => {
                        if self.violates(p2, r) {
                            continue;
                        }
                        0
                    }
                    Mode::Count => {
                        if self.violates(p2, r) {
                            continue;
                        }
                        let t = tag as i16 + self.acc[r] as i16 - self.acc[p2] as i16;
                        if t < 0 {
                            continue;
                        }
                        t
                    }
                    Mode::Flags => (tag != 0 || jumped || self.acc[r]) as i16,
                    Mode::Pending => (self.acc[r] || (tag != 0 && !self.acc[p2])) as i16,
                };
                if self.best[r] < 0 {
                    self.touched.push(r);
                }
                if t > self.best[r] {
                    self.best[r] = t;
                }
            }
        }
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for r in self.touched.drain(..) {
            out.push((r, self.best[r] as u8));
            self.best[r] = -1;
        }
        out
    }

    /// Duplicator can end her reply at `p2` against one of `front`.
    fn defended(&self, p2: State, front: &[(State, u8)], sacc: bool, sets: &Sets) -> bool {
        match self.mode {
            Mode::Flags => front.iter().any(|&(q, d)| {
                !sets.z.get(p2, q) && (d != 0 || (!sets.y.get(p2, q) && (!sacc || !sets.x.get(p2, q))))
            }),
            Mode::Pending => front
                .iter()
                .any(|&(q, clean)| !sets.z.get(p2, q) && (clean != 0 || !sets.x.get(p2, q))),
            _ => front.iter().any(|&(q, _)| !sets.z.get(p2, q)),
        }
    }

    /// True iff some extension of the current attack prefix (ending in `p`
    /// at depth `d`, Duplicator positions `front`) wins for Spoiler.
    fn attack(&mut self, p: State, d: usize, sacc: bool, front: &[(State, u8)], sets: &Sets) -> bool {
        if d == 0 {
            return self.attack_from(p, d, sacc, front, sets);
        }
        let key: Node = (p, d as u8, sacc && self.mode == Mode::Flags, front.into());
        if let Some(&won) = self.memo.get(&key) {
            return won;
        }
        let won = self.attack_from(p, d, sacc, front, sets);
        if self.memo.len() >= MEMO_LIMIT {
            self.memo.clear();
        }
        self.memo.insert(key, won);
        won
    }

    fn attack_from(&mut self, p: State, d: usize, sacc: bool, front: &[(State, u8)], sets: &Sets) -> bool {
        for sym in 0..self.s {
            let succs = &self.spoiler[p][sym];
            for i in 0..succs.len() {
                let p2 = self.spoiler[p][sym][i];
                let sacc2 = sacc || self.acc[p2];
                let next = self.extend(front, sym, p2);
                if next.is_empty() {
                    return true;
                }
                if self.defended(p2, &next, sacc2, sets) {
                    continue;
                }
                if d + 1 == self.k || self.stuck[p2] {
                    return true;
                }
                if self.attack(p2, d + 1, sacc2, &next, sets) {
                    return true;
                }
            }
        }
        false
    }

    fn spoiler_wins(&mut self, p: State, q: State, sets: &Sets) -> bool {
        if self.stuck[p] {
            return false;
        }
        let tag = match self.mode {
            Mode::Flags => self.acc[q] as u8,
            Mode::Pending => !(self.acc[p] && !self.acc[q]) as u8,
            _ => 0,
        };
        self.attack(p, 0, self.acc[p], &[(q, tag)], sets)
    }

    /// Grows `w` with pairs satisfying `wins` until stable (least fixpoint).
    /// The diagonal never enters a least fixpoint, since Duplicator can copy.
    fn grow(&mut self, w: &mut Relation, mut eval: impl FnMut(&mut Self, State, State, &Relation) -> bool) {
        self.memo.clear();
        loop {
            let mut changed = false;
            for p in 0..self.n {
                let mut add = Vec::new();
                for q in 0..self.n {
                    if p != q && !w.get(p, q) && eval(self, p, q, w) {
                        add.push(q);
                    }
                }
                if !add.is_empty() {
                    changed = true;
                    self.memo.clear();
                }
                for q in add {
                    w.set(p, q, true);
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Shrinks `x` to pairs satisfying `keep` until stable (greatest
    /// fixpoint from the current value).
    fn shrink(&mut self, x: &mut Relation, mut keep: impl FnMut(&mut Self, State, State, &Relation) -> bool) {
        self.memo.clear();
        loop {
            let mut changed = false;
            for p in 0..self.n {
                let mut drop = Vec::new();
                for q in 0..self.n {
                    if x.get(p, q) && !keep(self, p, q, x) {
                        drop.push(q);
                    }
                }
                if !drop.is_empty() {
                    changed = true;
                    self.memo.clear();
                }
                for q in drop {
                    x.set(p, q, false);
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Spoiler's winning region.
    fn spoiler_region(&mut self) -> Relation {
        let n = self.n;
        match self.variant {
            SimVariant::Delayed => self.delayed_region(),
            SimVariant::Fair => self.fair_region(),
            _ => {
                let mut w = Relation::from_fn(n, |p, q| self.violates_initially(p, q));
                let known = if self.k > 1 {
                    let mut one = self.clone();
                    one.k = 1;
                    Some(one.spoiler_region())
                } else {
                    None
                };
                // Pairs Duplicator wins with one step of lookahead stay won.
                self.grow(&mut w, |g, p, q, w| {
                    if let Some(k1) = &known {
                        if !k1.get(p, q) {
                            return false;
                        }
                    }
                    g.spoiler_wins(p, q, &Sets { x: w, y: w, z: w })
                });
                w
            }
        }
    }

    /// `µZ. νX. µY. CPre(X, Y, Z)`
    fn fair_region(&mut self) -> Relation {
        let n = self.n;
        let mut z = Relation::empty(n);
        loop {
            let mut x = Relation::full(n);
            loop {
                let mut y = z.clone();
                self.grow(&mut y, |g, p, q, y| {
                    g.spoiler_wins(p, q, &Sets { x: &x, y, z: &z })
                });
                if y == x {
                    break;
                }
                x = y;
            }
            if x == z {
                return z;
            }
            z = x;
        }
    }

    /// `µW. CPre'(A, W)` with `A = νX. CPre(X, X, W)`: Spoiler wins once
    /// she ends a round with an unanswered accepting visit in a position
    /// from which Duplicator can be kept away from accepting states forever.
    /// `CPre'(A, W)` asks every reply to end in `W`, or in `A` with such a
    /// pending visit. Counting Duplicator's visits anywhere in the round, as
    /// `CPre(A, W, W)` does, would let an early accepting Duplicator state
    /// answer a later Spoiler visit once `k > 1`.
    fn delayed_region(&mut self) -> Relation {
        let n = self.n;
        let mut w = Relation::empty(n);
        loop {
            self.mode = Mode::Flags;
            let mut a = Relation::full(n);
            self.shrink(&mut a, |g, p, q, a| {
                // pairs of W are irrelevant in A: any reply ending there
                // already loses through the Z component
                w.get(p, q) || g.spoiler_wins(p, q, &Sets { x: a, y: a, z: &w })
            });
            let before = w.count();
            self.mode = Mode::Pending;
            self.grow(&mut w, |g, p, q, w| {
                g.spoiler_wins(p, q, &Sets { x: &a, y: w, z: w })
            });
            if w.count() == before {
                return w;
            }
        }
    }

    pub(super) fn solve(mut self) -> Relation {
        let w = self.spoiler_region();
        Relation::from_fn(self.n, |p, q| !w.get(p, q))
    }
}

/// Duplicator moves in the jumping game: from `q` on `sym`, every successor
/// of every `q'` with `q jump q'`, flagged when some accepting `q''` sits
/// between `q` and `q'`.
fn jump_moves(a: &Automaton, jump: &Relation) -> Vec<Vec<Vec<(State, bool)>>> {
    let n = a.num_states();
    let s = a.num_symbols();
    let acc = a.accepting_mask();
    let mut out = vec![vec![Vec::new(); s]; n];
    let mut best = vec![-1i8; n];
    for q in 0..n {
        let ups: Vec<(State, bool)> = jump
            .related_to(q)
            .map(|q1| {
                let between = jump.related_to(q).any(|m| acc[m] && jump.get(m, q1));
                (q1, between)
            })
            .collect();
        for sym in 0..s {
            let mut touched = Vec::new();
            for &(q1, flag) in &ups {
                for &r in a.succ(q1, sym) {
                    if best[r] < 0 {
                        touched.push(r);
                    }
                    best[r] = best[r].max(flag as i8);
                }
            }
            touched.sort_unstable();
            out[q][sym] = touched.iter().map(|&r| (r, best[r] == 1)).collect();
            for r in touched {
                best[r] = -1;
            }
        }
    }
    out
}
