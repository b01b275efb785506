use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::automaton::Automaton;
use crate::relation::Relation;
use crate::sim::{lookahead_preorder, SimVariant};

use super::prune::{build_with, prune, PruneKind};
use super::quotient::quotient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Heavy,
    Light,
}

#[derive(Clone, Debug)]
pub struct MinimizeConfig {
    pub k: usize,
    pub method: Method,
    /// Prunings applied by Heavy-k; ignored by Light-k.
    pub prunings: Vec<PruneKind>,
    /// Safety net for the Heavy-k loop.
    pub max_iterations: usize,
}

impl MinimizeConfig {
    pub fn heavy(k: usize) -> MinimizeConfig {
        MinimizeConfig {
            k,
            method: Method::Heavy,
            prunings: PruneKind::ALL.to_vec(),
            max_iterations: 50,
        }
    }

    pub fn light(k: usize) -> MinimizeConfig {
        MinimizeConfig {
            k,
            method: Method::Light,
            prunings: Vec::new(),
            max_iterations: 1,
        }
    }
}

/// One technique application.
#[derive(Clone, Debug, Serialize)]
pub struct StepStats {
    pub pass: usize,
    pub technique: String,
    pub states_before: usize,
    pub states_after: usize,
    pub transitions_before: usize,
    pub transitions_after: usize,
    /// Pairs in the state relation the technique used, if any.
    pub relation_pairs: Option<usize>,
    pub ms: f64,
    /// Set when a technique was skipped because its precondition failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimizeStats {
    pub method: Method,
    pub k: usize,
    pub input_states: usize,
    pub input_transitions: usize,
    pub output_states: usize,
    pub output_transitions: usize,
    pub passes: usize,
    pub hit_iteration_cap: bool,
    pub total_ms: f64,
    pub steps: Vec<StepStats>,
}

/// Preorders of the current automaton; dropped whenever it changes.
struct Cache {
    of: Option<Automaton>,
    rels: HashMap<(SimVariant, usize), Relation>,
}

impl Cache {
    fn get(&mut self, a: &Automaton, v: SimVariant, k: usize) -> Relation {
        if self.of.as_ref() != Some(a) {
            self.of = Some(a.clone());
            self.rels.clear();
        }
        self.rels
            .entry((v, k))
            .or_insert_with(|| lookahead_preorder(a, v, k))
            .clone()
    }
}

struct Run<'c> {
    cfg: &'c MinimizeConfig,
    cache: Cache,
    stats: MinimizeStats,
    pass: usize,
}

impl Run<'_> {
    fn record(&mut self, technique: &str, before: &Automaton, after: &Automaton, rel: Option<usize>, t: Instant, skipped: Option<String>) {
        self.stats.steps.push(StepStats {
            pass: self.pass,
            technique: technique.to_string(),
            states_before: before.num_states(),
            states_after: after.num_states(),
            transitions_before: before.num_transitions(),
            transitions_after: after.num_transitions(),
            relation_pairs: rel,
            ms: t.elapsed().as_secs_f64() * 1000.0,
            skipped,
        });
    }

    fn remove_dead(&mut self, a: Automaton) -> Automaton {
        let t = Instant::now();
        let b = a.remove_dead();
        self.record("remove-dead", &a, &b, None, t, None);
        b
    }

    fn quotient(&mut self, a: Automaton, v: SimVariant, k: usize) -> Automaton {
        if a.is_empty() {
            return a;
        }
        let t = Instant::now();
        let r = self.cache.get(&a, v, k);
        let b = quotient(&a, &r);
        let name = format!("quotient-{}{}", v.short_name(), if k > 1 { format!("-{k}") } else { String::new() });
        self.record(&name, &a, &b, Some(r.count()), t, None);
        b
    }

    fn prune(&mut self, a: Automaton, kind: PruneKind) -> Automaton {
        if a.is_empty() || !self.cfg.prunings.contains(&kind) {
            return a;
        }
        let t = Instant::now();
        let cache = &mut self.cache;
        let spec = build_with(&a, kind, self.cfg.k, &mut |v, k| cache.get(&a, v, k));
        let pairs = spec.backward().relation().count() + spec.forward().relation().count();
        match prune(&a, &spec) {
            Ok(b) => {
                self.record(kind.name(), &a, &b, Some(pairs), t, None);
                b
            }
            Err(e) => {
                self.record(kind.name(), &a, &a, Some(pairs), t, Some(e.to_string()));
                a
            }
        }
    }

    fn heavy_pass(&mut self, mut a: Automaton) -> Automaton {
        let k = self.cfg.k;
        a = self.remove_dead(a);
        loop {
            let before = a.num_states();
            a = self.quotient(a, SimVariant::Backward, 1);
            if a.num_states() == before {
                break;
            }
        }
        a = self.prune(a, PruneKind::BwsimDi);
        a = self.quotient(a, SimVariant::Delayed, k);
        a = self.prune(a, PruneKind::IdDi);
        a = self.prune(a, PruneKind::TransientFair);
        a = self.quotient(a, SimVariant::Backward, k);
        a = self.prune(a, PruneKind::BwId);
        a = self.prune(a, PruneKind::BwDisim);
        self.remove_dead(a)
    }
}

fn start<'c>(a: &Automaton, cfg: &'c MinimizeConfig) -> Run<'c> {
    assert!(cfg.k >= 1, "lookahead must be at least 1");
    Run {
        cfg,
        cache: Cache {
            of: None,
            rels: HashMap::new(),
        },
        stats: MinimizeStats {
            method: cfg.method,
            k: cfg.k,
            input_states: a.num_states(),
            input_transitions: a.num_transitions(),
            output_states: 0,
            output_transitions: 0,
            passes: 0,
            hit_iteration_cap: false,
            total_ms: 0.0,
            steps: Vec::new(),
        },
        pass: 0,
    }
}

fn finish(mut run: Run, out: Automaton, t: Instant) -> (Automaton, MinimizeStats) {
    run.stats.output_states = out.num_states();
    run.stats.output_transitions = out.num_transitions();
    run.stats.total_ms = t.elapsed().as_secs_f64() * 1000.0;
    (out, run.stats)
}

/// Heavy-k: repeats remove-dead, pruning and quotienting until a whole pass
/// changes nothing.
pub fn heavy(a: &Automaton, cfg: &MinimizeConfig) -> (Automaton, MinimizeStats) {
    let t = Instant::now();
    let mut run = start(a, cfg);
    let mut cur = a.clone();
    loop {
        if run.pass == cfg.max_iterations {
            run.stats.hit_iteration_cap = true;
            break;
        }
        run.pass += 1;
        run.stats.passes = run.pass;
        let next = run.heavy_pass(cur.clone());
        if next == cur {
            break;
        }
        cur = next;
    }
    finish(run, cur, t)
}

/// Light-k: remove dead states, then quotient once with `⪯k-de`.
pub fn light(a: &Automaton, k: usize) -> (Automaton, MinimizeStats) {
    let t = Instant::now();
    let cfg = MinimizeConfig::light(k);
    let mut run = start(a, &cfg);
    run.pass = 1;
    run.stats.passes = 1;
    let b = run.remove_dead(a.clone());
    let b = run.quotient(b, SimVariant::Delayed, k);
    finish(run, b, t)
}

pub fn minimize(a: &Automaton, cfg: &MinimizeConfig) -> (Automaton, MinimizeStats) {
    match cfg.method {
        Method::Heavy => heavy(a, cfg),
        Method::Light => light(a, cfg.k),
    }
}
