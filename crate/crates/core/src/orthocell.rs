//! Orthocells `⟨s_{α_1}, …, s_{α_d}⟩ w` of `S_n`: canonical form,
//! monogressivity, effectiveness, enumeration and the `ij`-normal form used to
//! count them.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::{bruhat_covers, check_level, pairing, Permutation, PositiveRoot};

/// A right coset of the subgroup generated by reflections in pairwise
/// orthogonal positive roots, stored with its minimal-length representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCell")]
pub struct Orthocell {
    n: usize,
    roots: Vec<PositiveRoot>,
    w: Permutation,
}

#[derive(Deserialize)]
struct RawCell {
    n: usize,
    roots: Vec<PositiveRoot>,
    w: Permutation,
}

impl TryFrom<RawCell> for Orthocell {
    type Error = Error;

    fn try_from(raw: RawCell) -> Result<Self> {
        make_cell(raw.n, &raw.roots, &raw.w)
    }
}

fn root_key(r: &PositiveRoot) -> (u8, u8) {
    (r.b(), r.a())
}

/// `s_L w` for the subset `L` encoded as a bitmask over `roots`.
pub fn apply_subset(roots: &[PositiveRoot], mask: u32, w: &Permutation) -> Permutation {
    let mut out = w.clone();
    for (k, r) in roots.iter().enumerate() {
        if mask & (1 << k) != 0 {
            out = out.left_multiply(*r);
        }
    }
    out
}

fn validate_roots(n: usize, roots: &[PositiveRoot]) -> Result<()> {
    for (k, r) in roots.iter().enumerate() {
        r.check(n)?;
        for s in &roots[..k] {
            if r == s {
                return Err(Error::DuplicateRoot(r.a(), r.b()));
            }
            if !r.is_orthogonal(*s) {
                return Err(Error::NonOrthogonalRoots(s.a(), s.b(), r.a(), r.b()));
            }
        }
    }
    Ok(())
}

/// Canonical orthocell of the coset `⟨s_roots⟩ w`.
pub fn make_cell(n: usize, roots: &[PositiveRoot], w: &Permutation) -> Result<Orthocell> {
    if w.n() != n || n < 2 {
        return Err(Error::InvalidPermutation(w.entries().to_vec()));
    }
    validate_roots(n, roots)?;
    let mut roots = roots.to_vec();
    roots.sort_by_key(root_key);
    let best = (0..1u32 << roots.len())
        .map(|m| apply_subset(&roots, m, w))
        .min_by(|x, y| x.length().cmp(&y.length()).then_with(|| x.cmp(y)))
        .unwrap();
    Ok(Orthocell { n, roots, w: best })
}

impl Orthocell {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[PositiveRoot] {
        &self.roots
    }

    pub fn w(&self) -> &Permutation {
        &self.w
    }

    /// `s_L w`, with `L` a bitmask over [`Self::roots`].
    pub fn element(&self, mask: u32) -> Permutation {
        apply_subset(&self.roots, mask, &self.w)
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.rank()) - 1
    }

    /// All `s_L w` indexed by `L` in binary order.
    pub fn coset_elements(&self) -> Vec<Permutation> {
        (0..1u32 << self.rank()).map(|m| self.element(m)).collect()
    }

    /// `ℓ(s_L w) = ℓ(w) + |L|` for every subset `L`.
    pub fn is_monogressive(&self) -> bool {
        monogressive_at(&self.roots, &self.w)
    }

    /// The array form of the criterion, evaluated on `w` directly: each `a_k`
    /// sits left of `b_k`, nothing strictly between them lies in `[a_k, b_k]`,
    /// and a root with an endpoint between them has both endpoints outside.
    pub fn is_monogressive_by_array(&self) -> bool {
        let w = &self.w;
        self.roots.iter().all(|r| {
            let (pa, pb) = (w.position(r.a()), w.position(r.b()));
            if pa > pb {
                return false;
            }
            let outside = |c: u8| c < r.a() || c > r.b();
            w.entries()[pa..pb - 1].iter().all(|&c| {
                outside(c)
                    && self
                        .roots
                        .iter()
                        .filter(|s| s.a() == c || s.b() == c)
                        .all(|s| outside(s.a()) && outside(s.b()))
            })
        })
    }

    /// Bitmask of the roots moving `{w(1..i)}`.
    pub fn effective_mask(&self, i: usize) -> u32 {
        self.roots
            .iter()
            .enumerate()
            .filter(|(_, r)| i > 0 && i < self.n && pairing(&self.w, i, **r) != 0)
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    pub fn is_effective(&self, i: usize) -> bool {
        self.effective_mask(i) == self.full_mask()
    }

    pub fn is_ij_effective(&self, i: usize, j: usize) -> bool {
        self.is_effective(i) && self.is_effective(j)
    }

    /// Representative of the class of cells sharing `e_C^{ij}` up to sign.
    ///
    /// Roots are ordered by `b_1 < … < b_d`, the `a_k` fill positions
    /// `lo-d+1..lo`, the `b_k` fill `hi+d..hi+1` (reversed), and the remaining
    /// entries of the three blocks `[1..lo]`, `[lo+1..hi]`, `[hi+1..n]` are
    /// sorted decreasingly. Here `lo = min(i,j)`, `hi = max(i,j)`.
    pub fn ij_normalize(&self, i: usize, j: usize) -> Result<Orthocell> {
        check_level(self.n, i)?;
        check_level(self.n, j)?;
        if !self.is_monogressive() {
            return Err(Error::NotMonogressive(self.to_string()));
        }
        if !self.is_ij_effective(i, j) {
            return Err(Error::NotEffective {
                cell: self.to_string(),
                i,
                j,
            });
        }
        Ok(self.normal_form(i.min(j), i.max(j)))
    }

    fn normal_form(&self, lo: usize, hi: usize) -> Orthocell {
        let mut roots = self.roots.clone();
        roots.sort_by_key(|r| r.b());
        let is_a = |v: u8| roots.iter().any(|r| r.a() == v);
        let is_b = |v: u8| roots.iter().any(|r| r.b() == v);
        let e = self.w.entries();
        let desc = |mut v: Vec<u8>| {
            v.sort_unstable_by(|x, y| y.cmp(x));
            v
        };
        let first = desc(e[..lo].iter().copied().filter(|&v| !is_a(v)).collect());
        let middle = desc(e[lo..hi].to_vec());
        let last = desc(e[hi..].iter().copied().filter(|&v| !is_b(v)).collect());
        let mut entries = first;
        entries.extend(roots.iter().map(|r| r.a()));
        entries.extend(middle);
        entries.extend(roots.iter().rev().map(|r| r.b()));
        entries.extend(last);
        let w = Permutation::new(entries).expect("normal form is a permutation");
        let cell = make_cell(self.n, &roots, &w).expect("roots unchanged");
        debug_assert_eq!(cell.w, w, "normal form must be the minimal representative");
        cell
    }
}

fn monogressive_at(roots: &[PositiveRoot], w: &Permutation) -> bool {
    // cheap necessary condition first: each single reflection goes up
    if !roots.iter().all(|r| w.position(r.a()) < w.position(r.b())) {
        return false;
    }
    let base = w.length();
    (1..1u32 << roots.len()).all(|m| apply_subset(roots, m, w).length() == base + m.count_ones() as usize)
}

impl fmt::Display for Orthocell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C(")?;
        if self.roots.is_empty() {
            write!(f, "∅")?;
        }
        for (k, r) in self.roots.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ";{})", self.w)
    }
}

impl fmt::Debug for Orthocell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All sets of `d` pairwise disjoint transpositions of `{1..n}`, each sorted
/// by `(b, a)`.
pub fn matchings(n: usize, d: usize) -> Vec<Vec<PositiveRoot>> {
    fn go(free: u32, n: u8, d: usize, cur: &mut Vec<PositiveRoot>, out: &mut Vec<Vec<PositiveRoot>>) {
        if cur.len() == d {
            let mut m = cur.clone();
            m.sort_by_key(root_key);
            out.push(m);
            return;
        }
        // smallest free value either stays unmatched or is matched upward
        let Some(a) = (1..=n).find(|&v| free & (1 << (v - 1)) != 0) else {
            return;
        };
        let rest = free & !(1 << (a - 1));
        go(rest, n, d, cur, out);
        for b in a + 1..=n {
            if rest & (1 << (b - 1)) != 0 {
                cur.push(PositiveRoot::new(a, b).unwrap());
                go(rest & !(1 << (b - 1)), n, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go((1u32 << n) - 1, n as u8, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Monogressive orthocells of `S_n` of the given rank (or all ranks), sorted
/// by `(roots, w)`.
pub fn enumerate_monogressive(n: usize, rank: Option<usize>) -> Vec<Orthocell> {
    let ranks: Vec<usize> = match rank {
        Some(d) => vec![d],
        None => (0..=n / 2).collect(),
    };
    let perms = Permutation::all(n);
    let root_sets: Vec<Vec<PositiveRoot>> = ranks.iter().flat_map(|&d| matchings(n, d)).collect();
    let mut cells: Vec<Orthocell> = root_sets
        .par_iter()
        .flat_map_iter(|roots| {
            perms
                .iter()
                .filter(|w| monogressive_at(roots, w))
                .map(|w| Orthocell {
                    n,
                    roots: roots.clone(),
                    w: w.clone(),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    cells.sort();
    cells
}

/// Every orthocell of `S_n` of the given rank (or all ranks), monogressive or
/// not, sorted by `(roots, w)`.
pub fn enumerate_orthocells(n: usize, rank: Option<usize>) -> Vec<Orthocell> {
    let ranks: Vec<usize> = match rank {
        Some(d) => vec![d],
        None => (0..=n / 2).collect(),
    };
    let perms = Permutation::all(n);
    let root_sets: Vec<Vec<PositiveRoot>> = ranks.iter().flat_map(|&d| matchings(n, d)).collect();
    let mut cells: Vec<Orthocell> = root_sets
        .par_iter()
        .flat_map_iter(|roots| {
            perms
                .iter()
                .filter_map(|w| {
                    let c = make_cell(n, roots, w).expect("matching roots are orthogonal");
                    (&c.w == w).then_some(c)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    cells.sort();
    cells
}

/// Every monogressive `ij`-effective cell, without identifying cells that
/// share `e_C^{ij}` up to sign.
pub fn enumerate_effective_cells(n: usize, i: usize, j: usize) -> Vec<Orthocell> {
    enumerate_monogressive(n, None)
        .into_iter()
        .filter(|c| c.is_ij_effective(i, j))
        .collect()
}

/// Monogressive `ij`-effective cells modulo the redundancy `w ↦ wπ`,
/// `π ∈ S_lo × S_{hi-lo} × S_{n-hi}`: one `ij`-normal representative per class.
pub fn enumerate_effective(n: usize, i: usize, j: usize) -> Vec<Orthocell> {
    normal_forms(n, i.min(j), i.max(j)).into_iter().collect()
}

fn normal_forms(n: usize, lo: usize, hi: usize) -> BTreeSet<Orthocell> {
    // Generalized effectiveness for 0 ≤ lo ≤ hi ≤ n: a_k ∈ {w(1..lo)} and
    // b_k ∉ {w(1..hi)}; at the boundary levels no root qualifies.
    let max_rank = lo.min(n - hi);
    (0..=max_rank)
        .flat_map(|d| enumerate_monogressive(n, Some(d)))
        .filter(|c| {
            let (s_lo, s_hi) = (c.w.prefix_set(lo), c.w.prefix_set(hi));
            c.roots.iter().all(|r| s_lo.contains(r.a()) && !s_hi.contains(r.b()))
        })
        .map(|c| c.normal_form(lo, hi))
        .collect()
}

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || k > n || n < 0 {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, t| acc * (n - t) as u64 / (t + 1) as u64)
}

/// `C(n,i) C(n,j) − C(n,i−1) C(n,j+1)` for `i ≤ j` (arguments swapped otherwise).
pub fn dim_formula(n: usize, i: usize, j: usize) -> u64 {
    let (i, j) = (i.min(j) as i64, i.max(j) as i64);
    let n = n as i64;
    binom(n, i) * binom(n, j) - binom(n, i - 1) * binom(n, j + 1)
}

/// Number of distinct `ij`-normal cells, for `0 ≤ i, j ≤ n`.
pub fn count_ij_normal(n: usize, i: usize, j: usize) -> usize {
    normal_forms(n, i.min(j), i.max(j)).len()
}

/// Subcells `C(ℓ; s_L w)` with `ℓ` a set of roots disjoint from `{α_k : k ∈ L}`,
/// as `(L, retained mask, canonical cell)` triples.
pub fn subcell_data(c: &Orthocell) -> Vec<(u32, u32, Orthocell)> {
    let mut out = Vec::new();
    for l in 0..1u32 << c.rank() {
        let base = c.element(l);
        let free = c.full_mask() & !l;
        let mut sub = free;
        loop {
            let roots: Vec<PositiveRoot> = c
                .roots
                .iter()
                .enumerate()
                .filter(|(k, _)| sub & (1 << k) != 0)
                .map(|(_, r)| *r)
                .collect();
            let cell = make_cell(c.n, &roots, &base).expect("subset of orthogonal roots");
            out.push((l, sub, cell));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    out
}

/// Distinct subcells of `c`, sorted.
pub fn subcells(c: &Orthocell) -> Vec<Orthocell> {
    let set: BTreeSet<Orthocell> = subcell_data(c).into_iter().map(|(_, _, s)| s).collect();
    set.into_iter().collect()
}

/// Direct check of `w ⋖ s_α w` by lengths, for cross-validation of the array criterion.
pub fn covers_by_length(w: &Permutation, root: PositiveRoot) -> bool {
    w.left_multiply(root).length() == w.length() + 1
}

/// The array criterion, re-exported for convenience.
pub fn covers_by_array(w: &Permutation, root: PositiveRoot) -> bool {
    bruhat_covers(w, root)
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
    fn make_cell_examples() {
        let c = make_cell(2, &[r(1, 2)], &p(&[2, 1])).unwrap();
        assert_eq!(c.roots(), &[r(1, 2)]);
        assert_eq!(c.w(), &p(&[1, 2]));
        let c = make_cell(4, &[r(3, 4), r(1, 2)], &p(&[1, 2, 3, 4])).unwrap();
        assert_eq!(c.roots(), &[r(1, 2), r(3, 4)]);
        assert_eq!(c.w(), &p(&[1, 2, 3, 4]));
        assert_eq!(
            make_cell(3, &[r(1, 2), r(2, 3)], &p(&[1, 2, 3])).unwrap_err(),
            Error::NonOrthogonalRoots(1, 2, 2, 3)
        );
        assert_eq!(
            make_cell(4, &[r(1, 2), r(1, 2)], &p(&[1, 2, 3, 4])).unwrap_err(),
            Error::DuplicateRoot(1, 2)
        );
    }

    #[test]
    fn all_orthocells_n3() {
        assert_eq!(enumerate_orthocells(3, Some(0)).len(), 6);
        let rank1 = enumerate_orthocells(3, Some(1));
        assert_eq!(rank1.len(), 9);
        let mono = rank1.iter().filter(|c| c.is_monogressive()).count();
        assert_eq!(mono, enumerate_monogressive(3, Some(1)).len());
        // 4! / 4 cosets for each of the 3 perfect matchings
        assert_eq!(enumerate_orthocells(4, Some(2)).len(), 18);
    }

    #[test]
    fn canonical_root_order_is_by_b_then_a() {
        let c = make_cell(4, &[r(2, 3), r(1, 4)], &p(&[1, 4, 2, 3])).unwrap();
        assert_eq!(c.roots(), &[r(2, 3), r(1, 4)]);
    }

    #[test]
    fn coset_examples() {
        let c = make_cell(3, &[], &p(&[2, 3, 1])).unwrap();
        assert_eq!(c.coset_elements(), vec![p(&[2, 3, 1])]);
        let c = make_cell(2, &[r(1, 2)], &p(&[1, 2])).unwrap();
        assert_eq!(c.coset_elements(), vec![p(&[1, 2]), p(&[2, 1])]);
        let c = make_cell(4, &[r(1, 2), r(3, 4)], &p(&[1, 2, 3, 4])).unwrap();
        assert_eq!(
            c.coset_elements(),
            vec![p(&[1, 2, 3, 4]), p(&[2, 1, 3, 4]), p(&[1, 2, 4, 3]), p(&[2, 1, 4, 3])]
        );
    }

    #[test]
    fn monogressive_examples() {
        let c = make_cell(4, &[r(1, 2), r(3, 4)], &p(&[1, 2, 3, 4])).unwrap();
        assert!(c.is_monogressive() && c.is_monogressive_by_array());
        let c = make_cell(3, &[r(1, 3)], &p(&[1, 2, 3])).unwrap();
        assert!(!c.is_monogressive() && !c.is_monogressive_by_array());
        let c = make_cell(5, &[], &p(&[5, 3, 1, 2, 4])).unwrap();
        assert!(c.is_monogressive());
        for (roots, w) in [
            (vec![r(1, 2), r(3, 4)], p(&[1, 3, 2, 4])),
            (vec![r(1, 3), r(2, 4)], p(&[2, 4, 1, 3])),
            (vec![r(1, 4), r(2, 3)], p(&[1, 4, 2, 3])),
        ] {
            let c = make_cell(4, &roots, &w).unwrap();
            assert_eq!(c.w(), &w);
            assert!(c.is_monogressive_by_array(), "{c}");
        }
    }

    #[test]
    fn effectiveness_examples() {
        let c = make_cell(3, &[], &p(&[2, 1, 3])).unwrap();
        assert!(c.is_ij_effective(1, 2));
        let c = make_cell(2, &[r(1, 2)], &p(&[1, 2])).unwrap();
        assert!(c.is_ij_effective(1, 1));
        let c = make_cell(3, &[r(1, 2)], &p(&[1, 3, 2])).unwrap();
        assert!(c.is_ij_effective(1, 2));
        let c = make_cell(3, &[r(1, 2)], &p(&[1, 2, 3])).unwrap();
        assert!(c.is_effective(1) && !c.is_effective(2));
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_monogressive(4, Some(1)).len(), 58);
        assert_eq!(enumerate_monogressive(4, Some(2)).len(), 11);
        assert_eq!(enumerate_monogressive(3, Some(1)).len(), 8);
        assert!(enumerate_monogressive(3, Some(2)).is_empty());
    }

    #[test]
    fn n4_rank2_list_matches() {
        let got: Vec<(Vec<PositiveRoot>, Permutation)> = enumerate_monogressive(4, Some(2))
            .into_iter()
            .map(|c| (c.roots().to_vec(), c.w().clone()))
            .collect();
        let mut want = Vec::new();
        for w in [[1, 2, 3, 4], [3, 4, 1, 2], [1, 3, 2, 4], [3, 1, 4, 2], [1, 3, 4, 2], [3, 1, 2, 4]] {
            want.push((vec![r(1, 2), r(3, 4)], p(&w)));
        }
        for w in [[1, 3, 2, 4], [2, 4, 1, 3]] {
            want.push((vec![r(1, 3), r(2, 4)], p(&w)));
        }
        for w in [[1, 4, 2, 3], [2, 3, 1, 4], [2, 1, 4, 3]] {
            want.push((vec![r(2, 3), r(1, 4)], p(&w)));
        }
        want.sort();
        let mut got = got;
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn effective_enumeration_examples() {
        let cells = enumerate_effective(2, 1, 1);
        assert_eq!(cells.len(), 3);
        let raw: BTreeSet<String> = enumerate_effective_cells(2, 1, 1).iter().map(|c| c.to_string()).collect();
        let want: BTreeSet<String> = ["C(∅;[12])", "C(∅;[21])", "C((1,2);[12])"].iter().map(|s| s.to_string()).collect();
        assert_eq!(raw, want);
        assert_eq!(enumerate_effective(3, 1, 2).len(), 8);
        assert_eq!(enumerate_effective_cells(3, 1, 2).len(), 8);
        // repeated levels identify cells sharing a prefix set
        assert!(enumerate_effective_cells(3, 1, 1).len() > dim_formula(3, 1, 1) as usize);
        assert_eq!(enumerate_effective(3, 1, 1).len(), 6);
    }

    #[test]
    fn dim_formula_examples() {
        assert_eq!(dim_formula(2, 1, 1), 3);
        assert_eq!(dim_formula(3, 1, 2), 8);
        assert_eq!(dim_formula(3, 2, 1), 8);
        assert_eq!(dim_formula(4, 2, 2), 20);
        assert_eq!(dim_formula(3, 1, 1), 6);
        assert_eq!(dim_formula(4, 1, 1), 10);
        assert_eq!(dim_formula(4, 1, 3), 15);
    }

    #[test]
    fn normal_form_of_rank_zero_sorts_blocks() {
        let c = make_cell(5, &[], &p(&[1, 2, 3, 4, 5])).unwrap();
        let nf = c.ij_normalize(2, 3).unwrap();
        assert_eq!(nf.w(), &p(&[2, 1, 3, 5, 4]));
        assert_eq!(nf.ij_normalize(2, 3).unwrap(), nf);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        let c = make_cell(3, &[r(1, 3)], &p(&[1, 2, 3])).unwrap();
        assert!(matches!(c.ij_normalize(1, 2), Err(Error::NotMonogressive(_))));
        let c = make_cell(3, &[r(1, 2)], &p(&[1, 2, 3])).unwrap();
        assert!(matches!(c.ij_normalize(1, 2), Err(Error::NotEffective { .. })));
    }

    #[test]
    fn subcell_examples() {
        let c = make_cell(3, &[], &p(&[1, 2, 3])).unwrap();
        assert_eq!(subcells(&c), vec![c.clone()]);
        let c = make_cell(2, &[r(1, 2)], &p(&[1, 2])).unwrap();
        let subs: BTreeSet<String> = subcells(&c).iter().map(|s| s.to_string()).collect();
        let want: BTreeSet<String> = ["C((1,2);[12])", "C(∅;[12])", "C(∅;[21])"].iter().map(|s| s.to_string()).collect();
        assert_eq!(subs, want);
    }

    #[test]
    fn matchings_count() {
        // telephone numbers
        let total: Vec<usize> = (1..=6).map(|n| (0..=n / 2).map(|d| matchings(n, d).len()).sum()).collect();
        assert_eq!(total, vec![1, 2, 4, 10, 26, 76]);
    }

    #[test]
    fn json_canonicalizes() {
        let c: Orthocell = serde_json::from_str(r#"{"n":4,"roots":[[3,4],[1,2]],"w":[2,1,3,4]}"#).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"n":4,"roots":[[1,2],[3,4]],"w":[1,2,3,4]}"#);
        assert!(serde_json::from_str::<Orthocell>(r#"{"n":3,"roots":[[1,2],[2,3]],"w":[1,2,3]}"#).is_err());
    }
}
