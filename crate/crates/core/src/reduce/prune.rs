use std::fmt;

use crate::automaton::{Automaton, TransitionRef};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::sim::{lookahead_preorder, ordinary_sim, SimVariant};

/// How a state relation was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelTag {
    /// `None` for the identity.
    pub variant: Option<SimVariant>,
    /// Lookahead; 1 for ordinary simulation.
    pub k: usize,
    /// Asymmetric restriction of the preorder.
    pub strict: bool,
}

impl RelTag {
    pub const IDENTITY: RelTag = RelTag {
        variant: None,
        k: 1,
        strict: false,
    };

    pub fn preorder(v: SimVariant, k: usize) -> RelTag {
        RelTag {
            variant: Some(v),
            k,
            strict: false,
        }
    }

    pub fn strict(v: SimVariant, k: usize) -> RelTag {
        RelTag {
            variant: Some(v),
            k,
            strict: true,
        }
    }
}

impl fmt::Display for RelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            None => write!(f, "id"),
            Some(v) => {
                let op = if self.strict { "<" } else { "<=" };
                if self.k == 1 {
                    write!(f, "{op}{}", v.short_name())
                } else {
                    write!(f, "{op}{}-{}", self.k, v.short_name())
                }
            }
        }
    }
}

/// A state relation together with its provenance.
#[derive(Clone, Debug)]
pub struct Endpoint {
    tag: RelTag,
    rel: Relation,
}

impl Endpoint {
    pub fn identity(n: usize) -> Endpoint {
        Endpoint {
            tag: RelTag::IDENTITY,
            rel: Relation::identity(n),
        }
    }

    /// Computes `⪯k-x` (or `≺k-x` when `strict`) on `a`.
    pub fn compute(a: &Automaton, v: SimVariant, k: usize, strict: bool) -> Endpoint {
        Endpoint::from_preorder(lookahead_preorder(a, v, k), v, k, strict)
    }

    /// Wraps an already computed preorder `⪯k-x`.
    pub fn from_preorder(pre: Relation, v: SimVariant, k: usize, strict: bool) -> Endpoint {
        debug_assert!(pre.is_preorder());
        if strict {
            let rel = pre.strict();
            debug_assert!(rel.is_strict_order());
            Endpoint {
                tag: RelTag::strict(v, k),
                rel,
            }
        } else {
            Endpoint {
                tag: RelTag::preorder(v, k),
                rel: pre,
            }
        }
    }

    pub fn tag(&self) -> RelTag {
        self.tag
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }
}

/// The admissible pruning relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PruneKind {
    /// `P(id, ≺k-di)`
    IdDi,
    /// `P(≺k-bw, id)`
    BwId,
    /// `P(≺bw, ⪯k-di)`; needs an automaton without distinct
    /// backward-simulation-equivalent states.
    BwsimDi,
    /// `P(⪯k-bw, ≺di)`
    BwDisim,
    /// Transitions `(p,σ,r)` dominated by a transient `(p,σ,r')` with
    /// `r ≺k-f r'`.
    TransientFair,
}

impl PruneKind {
    pub const ALL: [PruneKind; 5] = [
        PruneKind::IdDi,
        PruneKind::BwId,
        PruneKind::BwsimDi,
        PruneKind::BwDisim,
        PruneKind::TransientFair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PruneKind::IdDi => "id-di",
            PruneKind::BwId => "bw-id",
            PruneKind::BwsimDi => "bwsim-di",
            PruneKind::BwDisim => "bw-disim",
            PruneKind::TransientFair => "transient-fair",
        }
    }
}

/// A validated transition pruning relation `P(Rb, Rf)`: a transition
/// `(p,σ,r)` is removed when some other transition `(p',σ,r')` has
/// `p Rb p'` and `r Rf r'`.
#[derive(Clone, Debug)]
pub struct PruneSpec {
    kind: PruneKind,
    rb: Endpoint,
    rf: Endpoint,
}

fn illegal(rb: RelTag, rf: RelTag, why: &str) -> Error {
    Error::IllegalPrune(format!("P({rb}, {rf}): {why}"))
}

impl PruneSpec {
    /// Accepts exactly the combinations known to preserve the language.
    pub fn new(rb: Endpoint, rf: Endpoint) -> Result<PruneSpec> {
        let (b, f) = (rb.tag, rf.tag);
        if rb.rel.size() != rf.rel.size() {
            return Err(illegal(b, f, "relations have different sizes"));
        }
        let kind = match (b.variant, f.variant) {
            (None, None) => return Err(illegal(b, f, "identity on both sides removes nothing sound")),
            (None, Some(SimVariant::Direct)) if f.strict => PruneKind::IdDi,
            (None, Some(SimVariant::Direct)) => {
                return Err(illegal(b, f, "forward relation must be strict"))
            }
            (None, Some(SimVariant::Delayed)) | (Some(_), Some(SimVariant::Delayed)) => {
                return Err(illegal(b, f, "delayed simulation is not good for pruning"))
            }
            (_, Some(SimVariant::Fair)) => {
                return Err(illegal(
                    b,
                    f,
                    "fair simulation is only admissible through the transient rule",
                ))
            }
            (Some(SimVariant::Backward), None) if b.strict => PruneKind::BwId,
            (Some(SimVariant::Backward), None) => {
                return Err(illegal(b, f, "backward relation must be strict"))
            }
            (Some(SimVariant::Backward), Some(SimVariant::Direct)) => {
                if b.strict && b.k == 1 {
                    PruneKind::BwsimDi
                } else if f.strict && f.k == 1 {
                    PruneKind::BwDisim
                } else if !b.strict && !f.strict {
                    return Err(illegal(b, f, "one side must be strict"));
                } else {
                    return Err(illegal(
                        b,
                        f,
                        "strict lookahead relations on both sides approximate strict trace \
                         inclusions, whose combination is not good for pruning",
                    ));
                }
            }
            _ => return Err(illegal(b, f, "unsupported relation pair")),
        };
        Ok(PruneSpec { kind, rb, rf })
    }

    /// The transient rule for a strict fair relation `≺k-f`.
    pub fn transient(rf: Endpoint) -> Result<PruneSpec> {
        let f = rf.tag;
        if f.variant != Some(SimVariant::Fair) || !f.strict {
            return Err(illegal(
                RelTag::IDENTITY,
                f,
                "transient rule needs a strict fair relation",
            ));
        }
        let n = rf.rel.size();
        Ok(PruneSpec {
            kind: PruneKind::TransientFair,
            rb: Endpoint::identity(n),
            rf,
        })
    }

    pub fn kind(&self) -> PruneKind {
        self.kind
    }

    pub fn backward(&self) -> &Endpoint {
        &self.rb
    }

    pub fn forward(&self) -> &Endpoint {
        &self.rf
    }
}

/// Computes the relations of `kind` on `a` with lookahead `k`.
pub fn build_prune_relation(a: &Automaton, kind: PruneKind, k: usize) -> PruneSpec {
    build_with(a, kind, k, &mut |v, k| lookahead_preorder(a, v, k))
}

/// [`build_prune_relation`] drawing preorders `⪯k-x` from `pre`.
pub(crate) fn build_with(
    a: &Automaton,
    kind: PruneKind,
    k: usize,
    pre: &mut dyn FnMut(SimVariant, usize) -> Relation,
) -> PruneSpec {
    let n = a.num_states();
    let mut ep = |v, k, strict| Endpoint::from_preorder(pre(v, k), v, k, strict);
    let spec = match kind {
        PruneKind::IdDi => PruneSpec::new(Endpoint::identity(n), ep(SimVariant::Direct, k, true)),
        PruneKind::BwId => PruneSpec::new(ep(SimVariant::Backward, k, true), Endpoint::identity(n)),
        PruneKind::BwsimDi => {
            let b = ep(SimVariant::Backward, 1, true);
            PruneSpec::new(b, ep(SimVariant::Direct, k, false))
        }
        PruneKind::BwDisim => {
            let b = ep(SimVariant::Backward, k, false);
            PruneSpec::new(b, ep(SimVariant::Direct, 1, true))
        }
        PruneKind::TransientFair => PruneSpec::transient(ep(SimVariant::Fair, k, true)),
    };
    spec.expect("built-in pruning relations are admissible")
}

/// Removes, in parallel, every transition dominated under `spec`.
pub fn prune(a: &Automaton, spec: &PruneSpec) -> Result<Automaton> {
    let n = a.num_states();
    if spec.rb.rel.size() != n {
        return Err(Error::Precondition(format!(
            "relation over {} states used on automaton with {n}",
            spec.rb.rel.size()
        )));
    }
    if spec.kind == PruneKind::BwsimDi {
        let bw = ordinary_sim(a, SimVariant::Backward);
        if let Some((p, q)) = bw.symmetric_part().pairs().find(|&(p, q)| p != q) {
            return Err(Error::Precondition(format!(
                "states {} and {} are backward-simulation equivalent; quotient first",
                a.name(p),
                a.name(q)
            )));
        }
    }
    Ok(prune_unchecked(
        a,
        &spec.rb.rel,
        &spec.rf.rel,
        spec.kind == PruneKind::TransientFair,
    ))
}

/// Removes every transition `(p,σ,r)` for which a different transition
/// `(p',σ,r')` exists with `p rb p'` and `r rf r'`; with `transient_only`,
/// `p' = p` and `(p,σ,r')` must be transient. No admissibility check is
/// made, so this can change the language.
pub fn prune_unchecked(a: &Automaton, rb: &Relation, rf: &Relation, transient_only: bool) -> Automaton {
    let transient = transient_only.then(|| a.transient_transitions());
    let dominated = |t: TransitionRef| {
        let sources: Vec<usize> = if transient_only {
            vec![t.src]
        } else {
            rb.related_to(t.src).collect()
        };
        sources.into_iter().any(|p2| {
            a.succ(p2, t.sym).iter().any(|&r2| {
                let other = TransitionRef::new(p2, t.sym, r2);
                other != t
                    && rf.get(t.dst, r2)
                    && transient.as_ref().is_none_or(|tr| tr.contains(&other))
            })
        })
    };
    let doomed: Vec<bool> = a.transitions().map(dominated).collect();
    let mut i = 0;
    a.retain_transitions(|_| {
        i += 1;
        !doomed[i - 1]
    })
}
