//! The `.ba` text format.
//!
//! ```text
//! [init]            initial states, one per line
//! a,[init]->[q]     transitions LABEL,[SRC]->[DST]
//! [q]               accepting states, one per line
//! ```
//!
//! Brackets around state names are optional. Without leading state lines the
//! source of the first transition is initial; without trailing state lines
//! every state is accepting. A file without any transition lists states that
//! are both initial and accepting.

use std::collections::HashMap;

use crate::automaton::{Automaton, AutomatonBuilder, State};
use crate::error::{Error, Result};

fn state_name(raw: &str, line: usize) -> Result<String> {
    let s = raw.trim();
    let s = s.strip_prefix('[').unwrap_or(s);
    let s = s.strip_suffix(']').unwrap_or(s).trim();
    if s.is_empty() {
        return Err(Error::Parse {
            line,
            msg: "empty state name".into(),
        });
    }
    Ok(s.to_string())
}

struct Names {
    index: HashMap<String, State>,
    builder: AutomatonBuilder,
}

impl Names {
    fn get(&mut self, name: String) -> State {
        if let Some(&q) = self.index.get(&name) {
            return q;
        }
        let q = self.builder.add_state(name.clone());
        self.index.insert(name, q);
        q
    }
}

pub fn parse_ba(text: &str) -> Result<Automaton> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    let is_edge = |l: &str| l.contains("->");
    let first = lines.iter().position(|(_, l)| is_edge(l));
    let last = lines.iter().rposition(|(_, l)| is_edge(l));

    let mut names = Names {
        index: HashMap::new(),
        builder: AutomatonBuilder::new(),
    };

    let (Some(first), Some(last)) = (first, last) else {
        for &(no, l) in &lines {
            let q = names.get(state_name(l, no)?);
            names.builder.initial(q).accepting(q);
        }
        return Ok(names.builder.build());
    };

    for &(no, l) in &lines[..first] {
        let q = names.get(state_name(l, no)?);
        names.builder.initial(q);
    }
    for &(no, l) in &lines[first..=last] {
        if !is_edge(l) {
            return Err(Error::Parse {
                line: no,
                msg: format!("expected a transition, found {l:?}"),
            });
        }
        let (lhs, rhs) = l.split_once("->").expect("checked above");
        let Some((label, src)) = lhs.split_once(',') else {
            return Err(Error::Parse {
                line: no,
                msg: "transition without ',' between label and source".into(),
            });
        };
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::Parse {
                line: no,
                msg: "empty symbol label".into(),
            });
        }
        let p = names.get(state_name(src, no)?);
        let q = names.get(state_name(rhs, no)?);
        names.builder.transition(p, label, q);
    }
    if first == 0 {
        let (_, l) = lines[0];
        let src = l.split_once("->").unwrap().0.split_once(',').unwrap().1;
        let p = names.index[&state_name(src, lines[0].0)?];
        names.builder.initial(p);
    }
    let trailing = &lines[last + 1..];
    if trailing.is_empty() {
        for q in 0..names.builder.num_states() {
            names.builder.accepting(q);
        }
    } else {
        for &(no, l) in trailing {
            let q = names.get(state_name(l, no)?);
            names.builder.accepting(q);
        }
    }
    Ok(names.builder.build())
}

/// Writes initial states, then transitions sorted by (symbol, source,
/// target), then accepting states. An automaton without transitions is
/// written as its initial-state lines only.
pub fn serialize_ba(a: &Automaton) -> String {
    let mut out = String::new();
    for q in a.initial_states() {
        out.push_str(&format!("[{}]\n", a.name(q)));
    }
    if a.num_transitions() == 0 {
        return out;
    }
    let mut ts: Vec<_> = a.transitions().collect();
    ts.sort_by_key(|t| (t.sym, t.src, t.dst));
    for t in ts {
        out.push_str(&format!(
            "{},[{}]->[{}]\n",
            a.alphabet()[t.sym],
            a.name(t.src),
            a.name(t.dst)
        ));
    }
    for q in a.accepting_states() {
        out.push_str(&format!("[{}]\n", a.name(q)));
    }
    out
}
