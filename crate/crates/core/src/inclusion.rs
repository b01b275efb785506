//! Language inclusion `L(A) ⊆ L(B)` in stages.
//!
//! 1. Minimize both automata with Heavy-k, prune `A` against `B` and drop
//!    the part of `B` the product with `A` cannot reach, repeating while
//!    anything changes; after each step, look for a fair lookahead
//!    simulation matching every initial state of `A` with one of `B`.
//! 2. Try the same matching with a jumping fair lookahead simulation.
//! 3. Search for a short lasso in `L(A) \ L(B)`.
//!
//! When none of these succeeds the verdict is `Unknown`.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::automaton::{disjoint_union, Automaton, AutomatonBuilder, TransitionRef};
use crate::error::{Error, Result};
use crate::lasso::{counterexample_search, member_lasso, Lasso, Search, SearchBounds};
use crate::reduce::{heavy, MinimizeConfig};
use crate::relation::Relation;
use crate::sim::{jumping_lookahead_fair_sim, lookahead_preorder, SimVariant};

pub const DEFAULT_K: usize = 12;
pub const MAX_K: usize = 15;

#[derive(Clone, Debug)]
pub struct InclusionConfig {
    pub k: usize,
    /// Stem bound for the counterexample search; by default twice the
    /// number of states of the reduced `A`, at most 12.
    pub max_u: Option<usize>,
    /// Cycle bound, same default as `max_u`.
    pub max_v: Option<usize>,
    /// Wall-clock budget of the counterexample search.
    pub timeout: Option<Duration>,
}

impl Default for InclusionConfig {
    fn default() -> Self {
        InclusionConfig {
            k: DEFAULT_K,
            max_u: None,
            max_v: None,
            timeout: Some(Duration::from_secs(10)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Included,
    NotIncluded,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// Matching found after minimization.
    #[serde(rename = "1a")]
    Minimized,
    /// Matching found after pruning `A` against `B`.
    #[serde(rename = "1b")]
    Pruned,
    /// Jumping fair simulation.
    #[serde(rename = "2")]
    Jumping,
    /// Counterexample search.
    #[serde(rename = "3")]
    Counterexample,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StageTimes {
    pub stage1: f64,
    pub stage2: f64,
    pub stage3: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Sizes {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "A'")]
    pub a_reduced: usize,
    #[serde(rename = "B'")]
    pub b_reduced: usize,
}

#[derive(Clone, Debug)]
pub struct InclusionVerdict {
    pub outcome: Outcome,
    pub stage: Option<Stage>,
    /// Counterexample for `NotIncluded`, accepted by `A` and not by `B`.
    pub witness: Option<Lasso>,
    /// For `Included`: every initial state of the reduced `A` (by name)
    /// with a simulating initial state of the reduced `B`.
    pub matching: Vec<(String, String)>,
    pub times_ms: StageTimes,
    pub sizes: Sizes,
}

impl InclusionVerdict {
    fn not_included(a: &Automaton, b: &Automaton, w: Lasso) -> InclusionVerdict {
        assert!(
            member_lasso(a, &w) && !member_lasso(b, &w),
            "counterexample failed re-verification"
        );
        InclusionVerdict {
            outcome: Outcome::NotIncluded,
            stage: Some(Stage::Counterexample),
            witness: Some(w),
            matching: Vec::new(),
            times_ms: StageTimes::default(),
            sizes: Sizes::default(),
        }
    }
}

fn check_alphabets(a: &Automaton, b: &Automaton) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().to_vec(),
            right: b.alphabet().to_vec(),
        });
    }
    Ok(())
}

/// Matches every initial state of `a` with an initial state of `b` it is
/// related to under `rel`, a relation on the union `a ⊎ b` with `b` shifted
/// by `offset`.
fn initial_matching(a: &Automaton, b: &Automaton, rel: &Relation, offset: usize) -> Option<Vec<(String, String)>> {
    a.initial_states()
        .map(|p| {
            b.initial_states()
                .find(|&q| rel.get(p, q + offset))
                .map(|q| (a.name(p).to_string(), b.name(q).to_string()))
        })
        .collect()
}

/// The GFI check with `⪯k-f` on the union.
fn fair_matching(a: &Automaton, b: &Automaton, k: usize) -> Option<Vec<(String, String)>> {
    let (u, off) = disjoint_union(a, b);
    initial_matching(a, b, &lookahead_preorder(&u, SimVariant::Fair, k), off)
}

/// Removes every transition of `a` dominated by a transition of `b` under
/// `P(⪯k-bw⁻, ⪯k-f)`, computed on the union. Inclusion in `b` is unaffected:
/// `L(a) ⊆ L(b)` iff `L(result) ⊆ L(b)`.
pub fn prune_a_wrt_b(a: &Automaton, b: &Automaton, k: usize) -> Automaton {
    if a.is_empty() || b.num_transitions() == 0 {
        return a.clone();
    }
    let (u, off) = disjoint_union(a, b);
    let bw = lookahead_preorder(&u, SimVariant::BackwardInit, k);
    let fw = lookahead_preorder(&u, SimVariant::Fair, k);
    // the union may carry a larger alphabet; map symbols by label
    let sym_u: Vec<usize> = a
        .alphabet()
        .iter()
        .map(|l| u.symbol_index(l).expect("label in union alphabet"))
        .collect();
    a.retain_transitions(|t: TransitionRef| {
        let s = sym_u[t.sym];
        !bw.related_to(t.src).filter(|&p2| p2 >= off).any(|p2| {
            u.succ(p2, s).iter().any(|&r2| fw.get(t.dst, r2))
        })
    })
}

/// Restricts `b` to the states occurring in pairs of the product `a × b`
/// reachable from the initial pairs.
pub fn restrict_b_to_product(a: &Automaton, b: &Automaton) -> Automaton {
    let na = a.num_states();
    let nb = b.num_states();
    if nb == 0 {
        return b.clone();
    }
    let sym_b: Vec<Option<usize>> = a.alphabet().iter().map(|l| b.symbol_index(l)).collect();
    let mut seen = vec![false; na * nb];
    let mut keep = vec![false; nb];
    let mut todo = Vec::new();
    for p in a.initial_states() {
        for q in b.initial_states() {
            seen[p * nb + q] = true;
            todo.push((p, q));
        }
    }
    for q in b.initial_states() {
        keep[q] = true;
    }
    while let Some((p, q)) = todo.pop() {
        keep[q] = true;
        for s in 0..a.num_symbols() {
            let Some(sb) = sym_b[s] else { continue };
            for &p2 in a.succ(p, s) {
                for &q2 in b.succ(q, sb) {
                    if !seen[p2 * nb + q2] {
                        seen[p2 * nb + q2] = true;
                        todo.push((p2, q2));
                    }
                }
            }
        }
    }
    if keep.iter().all(|&x| x) {
        b.clone()
    } else {
        b.restrict(&keep)
    }
}

/// Runs the staged inclusion check.
pub fn check_inclusion(a: &Automaton, b: &Automaton, cfg: &InclusionConfig) -> Result<InclusionVerdict> {
    check_alphabets(a, b)?;
    let k = cfg.k.clamp(1, MAX_K);
    let mut times = StageTimes::default();
    let mut sizes = Sizes {
        a: a.num_states(),
        b: b.num_states(),
        ..Sizes::default()
    };
    let included = |stage, matching, times: &StageTimes, sizes: &Sizes| InclusionVerdict {
        outcome: Outcome::Included,
        stage: Some(stage),
        witness: None,
        matching,
        times_ms: times.clone(),
        sizes: sizes.clone(),
    };

    let t1 = Instant::now();
    let mcfg = MinimizeConfig::heavy(k);
    let mut a1 = a.clone();
    let mut b1 = b.clone();
    loop {
        let a2 = heavy(&a1, &mcfg).0;
        let b2 = heavy(&b1, &mcfg).0;
        sizes.a_reduced = a2.num_states();
        sizes.b_reduced = b2.num_states();
        if a2.initial_states().next().is_none() {
            times.stage1 = ms(t1);
            return Ok(included(Stage::Minimized, Vec::new(), &times, &sizes));
        }
        if let Some(m) = fair_matching(&a2, &b2, k) {
            times.stage1 = ms(t1);
            return Ok(included(Stage::Minimized, m, &times, &sizes));
        }
        let a3 = prune_a_wrt_b(&a2, &b2, k).remove_dead();
        let b3 = restrict_b_to_product(&a3, &b2);
        sizes.a_reduced = a3.num_states();
        sizes.b_reduced = b3.num_states();
        if a3.initial_states().next().is_none() {
            times.stage1 = ms(t1);
            return Ok(included(Stage::Pruned, Vec::new(), &times, &sizes));
        }
        if let Some(m) = fair_matching(&a3, &b3, k) {
            times.stage1 = ms(t1);
            return Ok(included(Stage::Pruned, m, &times, &sizes));
        }
        let done = a3 == a1 && b3 == b1;
        a1 = a3;
        b1 = b3;
        if done {
            break;
        }
    }
    times.stage1 = ms(t1);

    let t2 = Instant::now();
    let (u, off) = disjoint_union(&a1, &b1);
    let bwc = lookahead_preorder(&b1, SimVariant::BackwardCount, k);
    let jump = Relation::from_fn(u.num_states(), |p, q| {
        p == q || (p >= off && q >= off && bwc.get(p - off, q - off))
    });
    let jfair = jumping_lookahead_fair_sim(&u, &jump, k);
    times.stage2 = ms(t2);
    if let Some(m) = initial_matching(&a1, &b1, &jfair, off) {
        return Ok(included(Stage::Jumping, m, &times, &sizes));
    }

    let t3 = Instant::now();
    let default_bound = (2 * a1.num_states()).min(12);
    let bounds = SearchBounds {
        max_u: cfg.max_u.unwrap_or(default_bound),
        max_v: cfg.max_v.unwrap_or(default_bound).max(1),
        deadline: cfg.timeout.map(|d| t3 + d),
    };
    let found = match counterexample_search(&a1, &b1, &bounds) {
        Search::Found(w) if member_lasso(a, &w) && !member_lasso(b, &w) => Some(w),
        Search::Found(_) => match counterexample_search(a, b, &bounds) {
            Search::Found(w) => Some(w),
            _ => None,
        },
        _ => None,
    };
    times.stage3 = ms(t3);
    Ok(match found {
        Some(w) => {
            let mut v = InclusionVerdict::not_included(a, b, w);
            v.times_ms = times;
            v.sizes = sizes;
            v
        }
        None => InclusionVerdict {
            outcome: Outcome::Unknown,
            stage: None,
            witness: None,
            matching: Vec::new(),
            times_ms: times,
            sizes,
        },
    })
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

/// A one-state automaton with a self-loop on every symbol of `alphabet`,
/// accepting iff `accepting`.
pub fn universal(alphabet: &[&str], accepting: bool) -> Automaton {
    let mut b = AutomatonBuilder::new();
    let q = b.add_state("q");
    b.initial(q);
    if accepting {
        b.accepting(q);
    }
    for l in alphabet {
        b.transition(q, l, q);
    }
    b.build()
}
