//! The symmetric group `S_n` viewed as the Weyl group of `SL(n)`.
//!
//! Permutations are written in one-line notation `[w(1) … w(n)]` with 1-based
//! values. Reflections are transpositions of *values*, so `s_α ∘ w` swaps the
//! two values `a` and `b` wherever they sit in the array.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` supported by the bitmask representation of [`IndexSet`].
pub const MAX_RANK: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation {
    entries: Vec<u8>,
}

impl Permutation {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if !(1..=MAX_RANK).contains(&n) {
            return Err(Error::InvalidPermutation(entries));
        }
        let mut seen = 0u32;
        for &v in &entries {
            if v == 0 || v as usize > n || seen & (1 << (v - 1)) != 0 {
                return Err(Error::InvalidPermutation(entries));
            }
            seen |= 1 << (v - 1);
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n as u8).collect(),
        }
    }

    /// All of `S_n` in lexicographic order of the one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Self::identity(n).entries;
        loop {
            out.push(Self {
                entries: cur.clone(),
            });
            // next lexicographic permutation
            let Some(p) = (0..n.saturating_sub(1)).rev().find(|&p| cur[p] < cur[p + 1]) else {
                break;
            };
            let q = (p + 1..n).rev().find(|&q| cur[q] > cur[p]).unwrap();
            cur.swap(p, q);
            cur[p + 1..].reverse();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// `w(p)` for a 1-based position `p`.
    pub fn at(&self, p: usize) -> u8 {
        self.entries[p - 1]
    }

    /// 1-based position of value `v`.
    pub fn position(&self, v: u8) -> usize {
        self.entries.iter().position(|&x| x == v).unwrap() + 1
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let e = &self.entries;
        let mut count = 0;
        for p in 0..e.len() {
            for q in p + 1..e.len() {
                if e[p] > e[q] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `s_α ∘ w`: swap the values `a` and `b`.
    pub fn left_multiply(&self, root: PositiveRoot) -> Permutation {
        let entries = self
            .entries
            .iter()
            .map(|&v| root.apply(v))
            .collect::<Vec<_>>();
        Self { entries }
    }

    /// `self ∘ other` as maps on `{1..n}`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let entries = other.entries.iter().map(|&v| self.at(v as usize)).collect();
        Self { entries }
    }

    /// `w ∘ π` with `π` a permutation of positions.
    pub fn right_multiply(&self, pi: &Permutation) -> Permutation {
        self.compose(pi)
    }

    pub fn inverse(&self) -> Permutation {
        let mut entries = vec![0u8; self.n()];
        for (p, &v) in self.entries.iter().enumerate() {
            entries[v as usize - 1] = p as u8 + 1;
        }
        Self { entries }
    }

    /// `{w(1), …, w(i)}`, the weight `w·ω_i`.
    pub fn prefix_set(&self, i: usize) -> IndexSet {
        IndexSet::from_values(&self.entries[..i])
    }

    /// Sign of the permutation sorting `w(1), …, w(i)` into increasing order.
    pub fn prefix_sign(&self, i: usize) -> i8 {
        let e = &self.entries[..i];
        let mut inv = 0usize;
        for p in 0..e.len() {
            for q in p + 1..e.len() {
                if e[p] > e[q] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Self {
        p.entries
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let sep = if self.n() > 9 { " " } else { "" };
        for (k, v) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, "{sep}")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Positive root of type `A_{n-1}`, identified with the transposition `(a b)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 2]", into = "[u8; 2]")]
pub struct PositiveRoot {
    a: u8,
    b: u8,
}

impl PositiveRoot {
    pub fn new(a: u8, b: u8) -> Result<Self> {
        if a == 0 || a >= b || b as usize > MAX_RANK {
            return Err(Error::InvalidRoot { a, b, n: MAX_RANK });
        }
        Ok(Self { a, b })
    }

    /// The root for the transposition of two distinct values, in either order.
    pub fn from_pair(u: u8, v: u8) -> Result<Self> {
        Self::new(u.min(v), u.max(v))
    }

    /// `β_c` with `s_β = (c, c+1)`.
    pub fn simple(c: u8) -> Self {
        Self { a: c, b: c + 1 }
    }

    /// All positive roots of `A_{n-1}` ordered by `(a, b)`.
    pub fn all(n: usize) -> Vec<PositiveRoot> {
        let n = n as u8;
        (1..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| Self { a, b }))
            .collect()
    }

    pub fn a(self) -> u8 {
        self.a
    }

    pub fn b(self) -> u8 {
        self.b
    }

    pub fn is_simple(self) -> bool {
        self.b == self.a + 1
    }

    pub fn check(self, n: usize) -> Result<Self> {
        if self.b as usize > n {
            Err(Error::InvalidRoot {
                a: self.a,
                b: self.b,
                n,
            })
        } else {
            Ok(self)
        }
    }

    /// Image of a value under the transposition.
    pub fn apply(self, v: u8) -> u8 {
        if v == self.a {
            self.b
        } else if v == self.b {
            self.a
        } else {
            v
        }
    }

    pub fn support(self) -> u32 {
        (1 << (self.a - 1)) | (1 << (self.b - 1))
    }

    pub fn is_orthogonal(self, other: PositiveRoot) -> bool {
        self.support() & other.support() == 0
    }

    /// The root `u(α)` for a permutation `u`, i.e. the transposition `u s_α u⁻¹`.
    pub fn image_under(self, u: &Permutation) -> PositiveRoot {
        let x = u.at(self.a as usize);
        let y = u.at(self.b as usize);
        Self {
            a: x.min(y),
            b: x.max(y),
        }
    }

    /// Image under a product of (commuting or not) transpositions applied right to left.
    pub fn reflect_by(self, roots: &[PositiveRoot]) -> PositiveRoot {
        let mut x = self.a;
        let mut y = self.b;
        for r in roots.iter().rev() {
            x = r.apply(x);
            y = r.apply(y);
        }
        Self {
            a: x.min(y),
            b: x.max(y),
        }
    }
}

impl TryFrom<[u8; 2]> for PositiveRoot {
    type Error = Error;

    fn try_from(v: [u8; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<PositiveRoot> for [u8; 2] {
    fn from(r: PositiveRoot) -> Self {
        [r.a, r.b]
    }
}

impl fmt::Display for PositiveRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl fmt::Debug for PositiveRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A subset of `{1..n}` stored as a bitmask (bit `v-1` for value `v`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct IndexSet(u32);

impl IndexSet {
    pub fn from_values(values: &[u8]) -> Self {
        Self(values.iter().fold(0, |m, &v| m | (1 << (v - 1))))
    }

    pub fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn level(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: u8) -> bool {
        self.0 & (1 << (v - 1)) != 0
    }

    pub fn elements(self) -> Vec<u8> {
        (1..=32u8).filter(|&v| self.contains(v)).collect()
    }

    /// Apply a transposition to every element.
    pub fn reflect(self, root: PositiveRoot) -> IndexSet {
        let (a, b) = (self.contains(root.a), self.contains(root.b));
        if a == b {
            self
        } else {
            Self(self.0 ^ root.support())
        }
    }

    /// All `i`-element subsets of `{1..n}`, ordered lexicographically by sorted elements.
    pub fn all(n: usize, i: usize) -> Vec<IndexSet> {
        let mut out: Vec<IndexSet> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == i)
            .map(IndexSet)
            .collect();
        out.sort();
        out
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexSet {
    /// For sets of equal size this is lexicographic on sorted elements
    /// (`{1,2} < {1,3} < {2,3}`).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits()).reverse()
    }
}

impl TryFrom<Vec<u8>> for IndexSet {
    type Error = Error;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        if v.iter().any(|&x| x == 0 || x as usize > MAX_RANK) {
            return Err(Error::Parse(format!("bad index set {v:?}")));
        }
        let s = Self::from_values(&v);
        if s.level() != v.len() {
            return Err(Error::Parse(format!("repeated index in {v:?}")));
        }
        Ok(s)
    }
}

impl From<IndexSet> for Vec<u8> {
    fn from(s: IndexSet) -> Self {
        s.elements()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.elements().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn check_level(n: usize, i: usize) -> Result<()> {
    if i == 0 || i >= n {
        Err(Error::InvalidLevel { level: i, n })
    } else {
        Ok(())
    }
}

/// Array criterion for `w ⋖ s_α w`: `a` sits left of `b`, and no value strictly
/// between them in the array lies in the numerical interval `[a, b]`.
pub fn bruhat_covers(w: &Permutation, root: PositiveRoot) -> bool {
    let pa = w.position(root.a);
    let pb = w.position(root.b);
    if pa > pb {
        return false;
    }
    w.entries[pa..pb - 1]
        .iter()
        .all(|&c| c < root.a || c > root.b)
}

/// `(w ω_i | α)`, computed as `[a ∈ S] − [b ∈ S]` with `S = {w(1..i)}`.
pub fn pairing(w: &Permutation, i: usize, root: PositiveRoot) -> i8 {
    set_pairing(w.prefix_set(i), root)
}

/// Pairing of the weight represented by `set` against `root`.
pub fn set_pairing(set: IndexSet, root: PositiveRoot) -> i8 {
    set.contains(root.a) as i8 - set.contains(root.b) as i8
}

/// `(α | α′)` for positive roots of type A.
pub fn root_pairing(x: PositiveRoot, y: PositiveRoot) -> i8 {
    if x == y {
        2
    } else if x.a == y.a || x.b == y.b {
        1
    } else if x.a == y.b || x.b == y.a {
        -1
    } else {
        0
    }
}

/// `s_α · {w(1..i)}`.
pub fn reflect_weight(root: PositiveRoot, w: &Permutation, i: usize) -> IndexSet {
    w.prefix_set(i).reflect(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u8]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn r(a: u8, b: u8) -> PositiveRoot {
        PositiveRoot::new(a, b).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(p(&[1, 2, 3, 4]).length(), 0);
        assert_eq!(p(&[3, 2, 1]).length(), 3);
        assert_eq!(p(&[3, 4, 1, 2]).length(), 4);
    }

    #[test]
    fn left_multiplication_swaps_values() {
        assert_eq!(p(&[1, 2, 3]).left_multiply(r(1, 3)), p(&[3, 2, 1]));
        assert_eq!(p(&[1, 2]).left_multiply(r(1, 2)), p(&[2, 1]));
        assert_eq!(
            p(&[3, 4, 7, 2, 6, 5, 1]).left_multiply(r(4, 6)),
            p(&[3, 6, 7, 2, 4, 5, 1])
        );
    }

    #[test]
    fn cover_examples() {
        assert!(bruhat_covers(&p(&[3, 4, 7, 2, 6, 5, 1]), r(4, 6)));
        assert!(!bruhat_covers(&p(&[7, 4, 1, 5, 6, 2, 3]), r(4, 6)));
        assert!(bruhat_covers(&p(&[1, 2]), r(1, 2)));
        assert!(!bruhat_covers(&p(&[2, 1]), r(1, 2)));
    }

    #[test]
    fn pairings() {
        for n in 2..=5 {
            let id = Permutation::identity(n);
            for i in 1..n {
                for c in 1..n as u8 {
                    let expect = if c as usize == i { 1 } else { 0 };
                    assert_eq!(pairing(&id, i, PositiveRoot::simple(c)), expect);
                }
            }
        }
        assert_eq!(pairing(&p(&[2, 1]), 1, r(1, 2)), -1);
        assert_eq!(root_pairing(r(1, 2), r(1, 2)), 2);
        assert_eq!(root_pairing(r(1, 2), r(3, 4)), 0);
        assert_eq!(root_pairing(r(1, 2), r(2, 3)), -1);
        assert_eq!(root_pairing(r(1, 3), r(2, 3)), 1);
    }

    #[test]
    fn reflect_weight_examples() {
        assert_eq!(IndexSet::from_values(&[1]).reflect(r(1, 2)), IndexSet::from_values(&[2]));
        assert_eq!(
            IndexSet::from_values(&[1, 2]).reflect(r(1, 2)),
            IndexSet::from_values(&[1, 2])
        );
        assert_eq!(
            reflect_weight(r(2, 4), &p(&[1, 2, 3, 4]), 2),
            IndexSet::from_values(&[1, 4])
        );
    }

    #[test]
    fn invalid_inputs() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!(PositiveRoot::new(2, 2).is_err());
        assert!(PositiveRoot::new(3, 1).is_err());
    }

    #[test]
    fn enumerate_all() {
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
        let all = Permutation::all(5);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn prefix_sign() {
        assert_eq!(p(&[1, 3, 2]).prefix_sign(2), 1);
        assert_eq!(p(&[2, 1, 3]).prefix_sign(2), -1);
        assert_eq!(p(&[3, 2, 1]).prefix_sign(3), -1);
    }

    #[test]
    fn index_set_order() {
        let sets = IndexSet::all(4, 2);
        let lists: Vec<Vec<u8>> = sets.iter().map(|s| s.elements()).collect();
        assert_eq!(
            lists,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn json_forms() {
        let w = p(&[2, 3, 1]);
        assert_eq!(serde_json::to_string(&w).unwrap(), "[2,3,1]");
        let back: Permutation = serde_json::from_str("[2,3,1]").unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<Permutation>("[2,2,1]").is_err());
        assert_eq!(serde_json::to_string(&r(1, 3)).unwrap(), "[1,3]");
        assert!(serde_json::from_str::<PositiveRoot>("[3,1]").is_err());
    }
}
