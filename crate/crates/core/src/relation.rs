//! Binary relations over state indices, stored as a dense bit matrix.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        let words = n.div_ceil(64);
        Relation {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Relation {
        let mut r = Relation::empty(n);
        for p in 0..n {
            r.set(p, p, true);
        }
        r
    }

    pub fn full(n: usize) -> Relation {
        let mut r = Relation::empty(n);
        for p in 0..n {
            for q in 0..n {
                r.set(p, q, true);
            }
        }
        r
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Relation {
        let mut r = Relation::empty(n);
        for p in 0..n {
            for q in 0..n {
                if f(p, q) {
                    r.set(p, q, true);
                }
            }
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Relation {
        let mut r = Relation::empty(n);
        for (p, q) in pairs {
            r.set(p, q, true);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> bool {
        debug_assert!(p < self.n && q < self.n);
        self.bits[p * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, p: usize, q: usize, v: bool) {
        debug_assert!(p < self.n && q < self.n);
        let w = &mut self.bits[p * self.words + q / 64];
        if v {
            *w |= 1 << (q % 64);
        } else {
            *w &= !(1 << (q % 64));
        }
    }

    fn row(&self, p: usize) -> &[u64] {
        &self.bits[p * self.words..(p + 1) * self.words]
    }

    /// Number of related pairs.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Related pairs in index order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |p| self.related_to(p).map(move |q| (p, q)))
    }

    /// All `q` with `p R q`, ascending.
    pub fn related_to(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(p);
        row.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        assert_eq!(self.n, other.n);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        let mut r = self.clone();
        r.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a |= b);
        r
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        let mut r = self.clone();
        r.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a &= b);
        r
    }

    pub fn inverse(&self) -> Relation {
        let mut r = Relation::empty(self.n);
        for (p, q) in self.pairs() {
            r.set(q, p, true);
        }
        r
    }

    /// `self ∘ other`: `p` relates to `r` iff `p self q` and `q other r`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        let mut r = Relation::empty(self.n);
        for p in 0..self.n {
            let start = p * self.words;
            for q in self.related_to(p).collect::<Vec<_>>() {
                let src = other.row(q);
                for (i, w) in src.iter().enumerate() {
                    r.bits[start + i] |= w;
                }
            }
        }
        r
    }

    /// Smallest transitive superset (Warshall with word-parallel rows).
    pub fn transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        let w = self.words;
        for k in 0..self.n {
            let row_k: Vec<u64> = r.row(k).to_vec();
            for p in 0..self.n {
                if r.get(p, k) {
                    for (i, x) in row_k.iter().enumerate() {
                        r.bits[p * w + i] |= x;
                    }
                }
            }
        }
        r
    }

    /// `self \ self⁻¹`.
    pub fn strict(&self) -> Relation {
        let inv = self.inverse();
        let mut r = self.clone();
        r.bits.iter_mut().zip(&inv.bits).for_each(|(a, b)| *a &= !b);
        r
    }

    /// `self ∩ self⁻¹`.
    pub fn symmetric_part(&self) -> Relation {
        self.intersection(&self.inverse())
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|p| self.get(p, p))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|p| !self.get(p, p))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    pub fn is_asymmetric(&self) -> bool {
        self.pairs().all(|(p, q)| !self.get(q, p))
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    /// Irreflexive, asymmetric and transitive.
    pub fn is_strict_order(&self) -> bool {
        self.is_asymmetric() && self.is_transitive()
    }

    /// Restriction to indices where `keep` holds, renumbered in order.
    pub fn restrict(&self, keep: &[bool]) -> Relation {
        assert_eq!(keep.len(), self.n);
        let idx: Vec<usize> = (0..self.n).filter(|&p| keep[p]).collect();
        Relation::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, q) in self.pairs() {
            writeln!(f, "{p} {q}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({}, {:?})", self.n, self.pairs().collect::<Vec<_>>())
    }
}
