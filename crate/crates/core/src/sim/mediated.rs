use crate::automaton::Automaton;
use crate::relation::Relation;

use super::{ordinary_sim, SimVariant};

/// The largest `M ⊆ ⊑di ∘ (⊑bw)⁻¹` with `M ∘ ⊑di ⊆ M`.
pub fn mediated_preorder(a: &Automaton) -> Relation {
    let di = ordinary_sim(a, SimVariant::Direct);
    let bw = ordinary_sim(a, SimVariant::Backward);
    mediated_from(&di, &bw)
}

/// Same as [`mediated_preorder`] from precomputed direct and backward
/// simulations.
pub fn mediated_from(di: &Relation, bw: &Relation) -> Relation {
    let mut m = di.compose(&bw.inverse());
    loop {
        let bad: Vec<(usize, usize)> = m
            .pairs()
            .filter(|&(x, y)| di.related_to(y).any(|w| !m.get(x, w)))
            .collect();
        if bad.is_empty() {
            return m;
        }
        for (x, y) in bad {
            m.set(x, y, false);
        }
    }
}
