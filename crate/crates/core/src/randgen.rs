//! Tabakov-Vardi random automata and the probability that such an automaton
//! is complete.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Automaton, TransitionRef};

/// Parameters of the Tabakov-Vardi model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub states: usize,
    pub symbols: usize,
    /// Transitions per symbol, relative to the number of states.
    pub td: f64,
    /// Accepting states, relative to the number of states.
    pub ad: f64,
    pub seed: u64,
}

/// `x` rounded to the nearest integer, ties up. Products like `100 * 1.4`
/// are not exact in floating point, so values within 1e-9 of a tie count as
/// ties.
fn round_half_up(x: f64) -> usize {
    (x + 0.5 + 1e-9).floor().max(0.0) as usize
}

/// Number of transitions per symbol: `round(n · td)`.
pub fn transitions_per_symbol(n: usize, td: f64) -> usize {
    round_half_up(n as f64 * td)
}

/// Number of accepting states: `round(n · ad)`, at least 1.
pub fn accepting_count(n: usize, ad: f64) -> usize {
    round_half_up(n as f64 * ad).clamp(1, n.max(1))
}

/// Labels `a`, `b`, … for up to 26 symbols, else zero-padded `x00`, `x01`, …
/// so that label order equals index order.
pub fn symbol_labels(s: usize) -> Vec<String> {
    if s <= 26 {
        (0..s).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        let width = (s - 1).to_string().len();
        (0..s).map(|i| format!("x{i:0width$}")).collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent ChaCha8 stream number `stream` for `seed`. Streams `0..s` draw
/// the transitions of each symbol, stream `s` the accepting states.
fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(stream)))
}

/// Derives the seed of sample `i` from a base seed.
pub fn derive_seed(base: u64, i: u64) -> u64 {
    splitmix64(base.wrapping_add(splitmix64(i ^ 0x5bd1_e995)))
}

/// Draws an automaton: for every symbol, `round(n·td)` distinct transitions
/// uniformly from the `n × n` grid; `max(1, round(n·ad))` distinct accepting
/// states; state 0 initial. States are named `0 … n-1`.
pub fn tabakov_vardi(spec: &RandomSpec) -> Automaton {
    let n = spec.states;
    let s = spec.symbols;
    assert!(n >= 1 && s >= 1, "need at least one state and one symbol");
    assert!(spec.td >= 0.0 && spec.ad > 0.0 && spec.ad <= 1.0, "densities out of range");
    let t = transitions_per_symbol(n, spec.td);
    assert!(t <= n * n, "transition density exceeds the number of states");
    let mut edges = Vec::with_capacity(t * s);
    let mut cells: Vec<usize> = Vec::with_capacity(n * n);
    for sym in 0..s {
        cells.clear();
        cells.extend(0..n * n);
        let mut rng = stream(spec.seed, sym as u64);
        let (chosen, _) = cells.partial_shuffle(&mut rng, t);
        edges.extend(chosen.iter().map(|&c| TransitionRef::new(c / n, sym, c % n)));
    }
    let mut states: Vec<usize> = (0..n).collect();
    let mut rng = stream(spec.seed, s as u64);
    let (acc, _) = states.partial_shuffle(&mut rng, accepting_count(n, spec.ad));
    let mut accepting = vec![false; n];
    for &q in acc.iter() {
        accepting[q] = true;
    }
    let mut initial = vec![false; n];
    initial[0] = true;
    Automaton::from_parts(
        symbol_labels(s),
        (0..n).map(|q| q.to_string()).collect(),
        initial,
        accepting,
        edges,
    )
}

/// `C(n, k)`, zero when `k < 0` or `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Probability that a Tabakov-Vardi automaton with `n` states, `s` symbols
/// and `T = round(n·td)` transitions per symbol has, for every symbol, an
/// outgoing transition from every state:
///
/// `U = (α/β)^s`, `β = C(n², T)`,
/// `α = Σ_{m=n}^{n²} C(m−n, T−n) · Σ_{i=0}^{n} (−1)^i C(n,i) C(m−in−1, n−1)`.
pub fn saturation_probability(n: usize, s: usize, td: f64) -> BigRational {
    let t = transitions_per_symbol(n, td);
    saturation_probability_exact(n, s, t)
}

/// [`saturation_probability`] for an explicit transition count `t`.
pub fn saturation_probability_exact(n: usize, s: usize, t: usize) -> BigRational {
    if n == 0 || t < n || t > n * n {
        return BigRational::zero();
    }
    let (n_i, t_i) = (n as i64, t as i64);
    let nn = n_i * n_i;
    // c_n_i[i] = C(n, i); b[j] = C(j, n-1)
    let c_n_i: Vec<BigInt> = (0..=n_i).map(|i| binomial(n_i, i)).collect();
    let mut b = vec![BigInt::zero(); nn as usize + 1];
    b[(n_i - 1) as usize] = BigInt::one();
    for j in n_i..=nn {
        let prev = &b[(j - 1) as usize];
        b[j as usize] = prev * j / (j - n_i + 1);
    }
    let c_b = |j: i64| -> &BigInt {
        static ZERO: std::sync::OnceLock<BigInt> = std::sync::OnceLock::new();
        if j < 0 {
            ZERO.get_or_init(BigInt::zero)
        } else {
            &b[j as usize]
        }
    };
    let mut alpha = BigInt::zero();
    // outer = C(m − n, T − n), nonzero from m = T on
    let mut outer = BigInt::one();
    for m in t_i..=nn {
        if m > t_i {
            outer = outer * (m - n_i) / (m - t_i);
        }
        let mut inner = BigInt::zero();
        for i in 0..=n_i {
            let j = m - i * n_i - 1;
            if j < n_i - 1 {
                break;
            }
            let term = &c_n_i[i as usize] * c_b(j);
            if i % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        alpha += &outer * inner;
    }
    let beta = binomial(nn, t_i);
    let u = BigRational::new(alpha, beta);
    Pow::pow(u, s as u32)
}

/// Decimal approximation of a rational.
pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(x) = r.to_f64() {
        return x;
    }
    let (num, den) = (r.numer(), r.denom());
    let shift = den.bits() as i64 - 900;
    let scale = |x: &BigInt| x.to_f64().unwrap_or(f64::INFINITY);
    if shift > 0 {
        scale(&(num >> shift as usize)) / scale(&(den >> shift as usize))
    } else {
        f64::NAN
    }
}
