//! Plain directed-graph helpers over adjacency lists.

/// Strongly connected components: `id[v]` is the component of `v`, and
/// components are numbered in reverse topological order (sinks first).
#[derive(Clone, Debug)]
pub struct Components {
    pub id: Vec<usize>,
    pub size: Vec<usize>,
    pub count: usize,
}

/// Tarjan's algorithm, iterative so deep graphs do not overflow the stack.
pub fn strongly_connected_components(succ: &[Vec<usize>]) -> Components {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut id = vec![UNSEEN; n];
    let mut size = Vec::new();
    let mut next = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let c = size.len();
                let mut count = 0;
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    id[w] = c;
                    count += 1;
                    if w == v {
                        break;
                    }
                }
                size.push(count);
            }
        }
    }
    Components {
        id,
        count: size.len(),
        size,
    }
}

/// Vertices reachable from `seeds` (seeds included).
pub fn reachable(succ: &[Vec<usize>], seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut todo = Vec::new();
    for s in seeds {
        if !seen[s] {
            seen[s] = true;
            todo.push(s);
        }
    }
    while let Some(v) = todo.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}
