use crate::automaton::{Automaton, TransitionRef};
use crate::relation::Relation;

/// Merges the states of every class of `pre ∩ pre⁻¹`. A class is initial
/// (accepting) when one of its members is; transitions are induced
/// element-wise. Classes are numbered by their lowest member, whose name
/// they inherit.
pub fn quotient(a: &Automaton, pre: &Relation) -> Automaton {
    quotient_with_classes(a, pre).0
}

/// [`quotient`] together with the class index of every original state.
pub fn quotient_with_classes(a: &Automaton, pre: &Relation) -> (Automaton, Vec<usize>) {
    let n = a.num_states();
    assert_eq!(pre.size(), n, "relation size does not match automaton");
    // union of mutually related states; equals the equivalence classes when
    // `pre` is a preorder
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in 0..n {
        for q in pre.related_to(p) {
            if q > p && pre.get(q, p) {
                let (rp, rq) = (find(&mut parent, p), find(&mut parent, q));
                if rp != rq {
                    let (lo, hi) = (rp.min(rq), rp.max(rq));
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut class = vec![usize::MAX; n];
    let mut names = Vec::new();
    for q in 0..n {
        let root = find(&mut parent, q);
        if class[root] == usize::MAX {
            class[root] = names.len();
            names.push(a.name(q).to_string());
        }
        class[q] = class[root];
    }
    let m = names.len();
    if m == n {
        return (a.clone(), (0..n).collect());
    }
    let mut initial = vec![false; m];
    let mut accepting = vec![false; m];
    for q in 0..n {
        initial[class[q]] |= a.is_initial(q);
        accepting[class[q]] |= a.is_accepting(q);
    }
    let edges: Vec<_> = a
        .transitions()
        .map(|t| TransitionRef::new(class[t.src], t.sym, class[t.dst]))
        .collect();
    (
        Automaton::from_parts(a.alphabet().to_vec(), names, initial, accepting, edges),
        class,
    )
}
