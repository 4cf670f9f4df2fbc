//! The minuscule modules `V^i = Λ^i C^n` of `U_q(sl_n)`, their tensor products
//! under the comultiplication, and operator-level checks of the defining
//! relations.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::Laurent;
use crate::weyl::{set_pairing, IndexSet, Permutation, PositiveRoot, MAX_RANK};

/// Sorted exterior basis element `e_{j_1} ∧ … ∧ e_{j_i}` and the sign relating
/// `e_{w(1)} ∧ … ∧ e_{w(i)}` to it.
pub fn signed_basis(w: &Permutation, i: usize) -> (IndexSet, i8) {
    (w.prefix_set(i), w.prefix_sign(i))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum GenKind {
    K,
    Kinv,
    X,
    Y,
}

/// `K_β`, `K_β^{-1}`, `X_β` or `Y_β` for the simple root `β = (c, c+1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: GenKind,
    c: u8,
}

impl Generator {
    pub fn new(kind: GenKind, beta: PositiveRoot) -> Result<Self> {
        if !beta.is_simple() {
            return Err(Error::NonSimpleRoot(beta.a(), beta.b()));
        }
        Ok(Self { kind, c: beta.a() })
    }

    pub fn simple(kind: GenKind, c: u8) -> Self {
        Self { kind, c }
    }

    pub fn index(self) -> u8 {
        self.c
    }

    pub fn beta(self) -> PositiveRoot {
        PositiveRoot::simple(self.c)
    }

    /// The `4(n-1)` generators in the order `K, K^{-1}, X, Y` per simple root.
    pub fn all(n: usize) -> Vec<Generator> {
        (1..n as u8)
            .flat_map(|c| [GenKind::K, GenKind::Kinv, GenKind::X, GenKind::Y].map(|kind| Self { kind, c }))
            .collect()
    }

    fn check(self, n: usize) -> Result<()> {
        if self.c == 0 || self.c as usize >= n {
            return Err(Error::NonSimpleRoot(self.c, self.c + 1));
        }
        Ok(())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GenKind::K => "K",
            GenKind::Kinv => "K^-1",
            GenKind::X => "X",
            GenKind::Y => "Y",
        };
        write!(f, "{name}_{}", self.c)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Action of a generator on a single sorted basis element: the image basis
/// element and the power of `q` it is multiplied by.
pub fn act_basis(g: Generator, s: IndexSet) -> Option<(IndexSet, i32)> {
    let p = set_pairing(s, g.beta()) as i32;
    let beta = g.beta();
    match g.kind {
        GenKind::K => Some((s, p)),
        GenKind::Kinv => Some((s, -p)),
        // c and c+1 are adjacent values, so swapping them never reorders the wedge
        GenKind::X if p == -1 => Some((s.reflect(beta), 0)),
        GenKind::Y if p == 1 => Some((s.reflect(beta), 0)),
        _ => None,
    }
}

/// Packed weight of a basis tuple: the multiplicity of each value `v` sits in
/// bits `4(v-1)..4v`.
pub fn weight_key(sets: &[IndexSet]) -> u64 {
    let mut key = 0u64;
    for s in sets {
        let mut bits = s.bits();
        while bits != 0 {
            let v = bits.trailing_zeros();
            key += 1 << (4 * v);
            bits &= bits - 1;
        }
    }
    key
}

/// Element of `V^{i_1} ⊗ … ⊗ V^{i_m}` in the sorted tensor basis.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorVector {
    n: usize,
    levels: Vec<usize>,
    terms: BTreeMap<Vec<IndexSet>, Laurent>,
}

/// Element of a single `V^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector {
    n: usize,
    level: usize,
    terms: BTreeMap<IndexSet, Laurent>,
}

fn check_levels(n: usize, levels: &[usize]) -> Result<()> {
    if !(2..=MAX_RANK).contains(&n) {
        return Err(Error::InvalidRank(n));
    }
    for &l in levels {
        if l > n {
            return Err(Error::InvalidLevel { level: l, n });
        }
    }
    Ok(())
}

impl ModuleVector {
    pub fn zero(n: usize, level: usize) -> Result<Self> {
        check_levels(n, &[level])?;
        Ok(Self {
            n,
            level,
            terms: BTreeMap::new(),
        })
    }

    pub fn basis(n: usize, s: IndexSet) -> Result<Self> {
        let mut v = Self::zero(n, s.level())?;
        if s.bits() >> n != 0 {
            return Err(Error::Parse(format!("{s} is not a subset of 1..{n}")));
        }
        v.terms.insert(s, Laurent::one());
        Ok(v)
    }

    /// `e_w^i = e_{w(1)} ∧ … ∧ e_{w(i)}`.
    pub fn from_permutation(w: &Permutation, i: usize) -> Result<Self> {
        let (s, sign) = signed_basis(w, i);
        let mut v = Self::zero(w.n(), i)?;
        v.terms.insert(s, Laurent::from_int(sign as i64));
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<IndexSet, Laurent> {
        &self.terms
    }

    pub fn coefficient(&self, s: IndexSet) -> Laurent {
        self.terms.get(&s).cloned().unwrap_or_else(Laurent::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: IndexSet, c: &Laurent) {
        add_into(&mut self.terms, s, c);
    }

    pub fn to_tensor(&self) -> TensorVector {
        TensorVector {
            n: self.n,
            levels: vec![self.level],
            terms: self.terms.iter().map(|(s, c)| (vec![*s], c.clone())).collect(),
        }
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Laurent>, key: K, c: &Laurent) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl TensorVector {
    pub fn zero(n: usize, levels: &[usize]) -> Result<Self> {
        check_levels(n, levels)?;
        Ok(Self {
            n,
            levels: levels.to_vec(),
            terms: BTreeMap::new(),
        })
    }

    /// A single basis tuple with coefficient 1.
    pub fn basis(n: usize, sets: &[IndexSet]) -> Result<Self> {
        let levels: Vec<usize> = sets.iter().map(|s| s.level()).collect();
        let mut v = Self::zero(n, &levels)?;
        if sets.iter().any(|s| s.bits() >> n != 0) {
            return Err(Error::DimensionMismatch);
        }
        v.terms.insert(sets.to_vec(), Laurent::one());
        Ok(v)
    }

    /// `e_{w_1}^{i_1} ⊗ … ⊗ e_{w_m}^{i_m}` with signs from [`signed_basis`].
    pub fn pure(factors: &[(&Permutation, usize)]) -> Result<Self> {
        let n = factors.first().map(|(w, _)| w.n()).ok_or(Error::DimensionMismatch)?;
        let mut sign = 1i64;
        let mut key = Vec::with_capacity(factors.len());
        for (w, i) in factors {
            if w.n() != n {
                return Err(Error::DimensionMismatch);
            }
            let (s, e) = signed_basis(w, *i);
            sign *= e as i64;
            key.push(s);
        }
        let levels: Vec<usize> = factors.iter().map(|f| f.1).collect();
        let mut v = Self::zero(n, &levels)?;
        v.terms.insert(key, Laurent::from_int(sign));
        Ok(v)
    }

    /// Tensor product of single-module vectors.
    pub fn product(factors: &[&ModuleVector]) -> Result<Self> {
        let n = factors.first().map(|f| f.n).ok_or(Error::DimensionMismatch)?;
        let levels: Vec<usize> = factors.iter().map(|f| f.level).collect();
        let mut out = Self::zero(n, &levels)?;
        let mut acc: Vec<(Vec<IndexSet>, Laurent)> = vec![(Vec::new(), Laurent::one())];
        for f in factors {
            if f.n != n {
                return Err(Error::DimensionMismatch);
            }
            acc = acc
                .iter()
                .flat_map(|(k, c)| {
                    f.terms.iter().map(move |(s, d)| {
                        let mut k2 = k.clone();
                        k2.push(*s);
                        (k2, c * d)
                    })
                })
                .collect();
        }
        for (k, c) in acc {
            add_into(&mut out.terms, k, &c);
        }
        Ok(out)
    }

    /// Every basis tuple of `V^{levels[0]} ⊗ …`, in lexicographic order.
    pub fn basis_tuples(n: usize, levels: &[usize]) -> Vec<Vec<IndexSet>> {
        let mut out: Vec<Vec<IndexSet>> = vec![Vec::new()];
        for &l in levels {
            let sets = IndexSet::all(n, l);
            out = out
                .into_iter()
                .flat_map(|k| {
                    sets.iter().map(move |s| {
                        let mut k2 = k.clone();
                        k2.push(*s);
                        k2
                    })
                })
                .collect();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn terms(&self) -> &BTreeMap<Vec<IndexSet>, Laurent> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &[IndexSet]) -> Laurent {
        self.terms.get(key).cloned().unwrap_or_else(Laurent::zero)
    }

    pub fn add_term(&mut self, key: Vec<IndexSet>, c: &Laurent) {
        debug_assert_eq!(key.len(), self.levels.len());
        add_into(&mut self.terms, key, c);
    }

    pub fn add_scaled(&mut self, other: &TensorVector, c: &Laurent) {
        debug_assert_eq!(self.levels, other.levels);
        if c.is_zero() {
            return;
        }
        for (k, d) in &other.terms {
            add_into(&mut self.terms, k.clone(), &(c * d));
        }
    }

    pub fn scaled(&self, c: &Laurent) -> TensorVector {
        let mut out = TensorVector {
            n: self.n,
            levels: self.levels.clone(),
            terms: BTreeMap::new(),
        };
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &TensorVector) -> TensorVector {
        let mut out = self.clone();
        out.add_scaled(other, &Laurent::from_int(-1));
        out
    }

    /// The distinct weights occurring in the vector.
    pub fn weights(&self) -> Vec<u64> {
        let mut w: Vec<u64> = self.terms.keys().map(|k| weight_key(k)).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Splits off factor `pos`: `v = Σ_T v_T ⊗_pos e_T`, returned as `(T, v_T)`.
    pub fn slices(&self, pos: usize) -> BTreeMap<IndexSet, TensorVector> {
        let mut levels = self.levels.clone();
        levels.remove(pos);
        let mut out: BTreeMap<IndexSet, TensorVector> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut rest = k.clone();
            let t = rest.remove(pos);
            out.entry(t)
                .or_insert_with(|| TensorVector {
                    n: self.n,
                    levels: levels.clone(),
                    terms: BTreeMap::new(),
                })
                .add_term(rest, c);
        }
        out
    }

    /// Inverse of [`Self::slices`]: inserts `t` as factor `pos` of every term of `v`.
    pub fn insert_factor(&mut self, v: &TensorVector, pos: usize, t: IndexSet) {
        for (k, c) in &v.terms {
            let mut key = k.clone();
            key.insert(pos, t);
            add_into(&mut self.terms, key, c);
        }
    }

    /// Groups terms by the factors outside positions `pos, pos+1`, returning
    /// the two-factor vector attached to each outer key.
    pub fn pair_slices(&self, pos: usize) -> BTreeMap<Vec<IndexSet>, TensorVector> {
        let inner_levels = vec![self.levels[pos], self.levels[pos + 1]];
        let mut out: BTreeMap<Vec<IndexSet>, TensorVector> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut outer = k.clone();
            let inner: Vec<IndexSet> = outer.drain(pos..pos + 2).collect();
            out.entry(outer)
                .or_insert_with(|| TensorVector {
                    n: self.n,
                    levels: inner_levels.clone(),
                    terms: BTreeMap::new(),
                })
                .add_term(inner, c);
        }
        out
    }

    /// Adds `c · (outer with inner spliced in at pos)` for every term of `inner`.
    pub fn add_pair_slice(&mut self, outer: &[IndexSet], pos: usize, inner: &TensorVector, c: &Laurent) {
        for (k, d) in &inner.terms {
            let mut key = outer.to_vec();
            key.splice(pos..pos, k.iter().copied());
            add_into(&mut self.terms, key, &(c * d));
        }
    }

    /// Evaluates all coefficients at `q = q0`.
    pub fn eval(&self, q0: &crate::scalars::Rational) -> Result<BTreeMap<Vec<IndexSet>, crate::scalars::Rational>> {
        let mut out = BTreeMap::new();
        for (k, c) in &self.terms {
            let x = c.eval(q0)?;
            if x != crate::scalars::Rational::from_integer(0.into()) {
                out.insert(k.clone(), x);
            }
        }
        Ok(out)
    }

    /// Parses the list-of-terms JSON encoding.
    pub fn from_json(n: usize, s: &str) -> Result<Self> {
        let raw: Vec<RawTerm> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let levels: Vec<usize> = match raw.first() {
            Some(t) => t.basis.iter().map(|s| s.level()).collect(),
            None => return Err(Error::Parse("empty tensor has no levels".into())),
        };
        let mut v = Self::zero(n, &levels)?;
        for t in raw {
            let l: Vec<usize> = t.basis.iter().map(|s| s.level()).collect();
            if l != levels || t.basis.iter().any(|s| s.bits() >> n != 0) {
                return Err(Error::DimensionMismatch);
            }
            v.add_term(t.basis, &t.coeff);
        }
        Ok(v)
    }
}

#[derive(Deserialize, Serialize)]
struct RawTerm {
    basis: Vec<IndexSet>,
    coeff: Laurent,
}

impl Serialize for TensorVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&RawTerm {
                basis: k.clone(),
                coeff: c.clone(),
            })?;
        }
        seq.end()
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let basis: Vec<String> = k.iter().map(|s| format!("e{s}")).collect();
            if c.is_one() {
                write!(f, "{}", basis.join("⊗"))?;
            } else {
                write!(f, "({c})·{}", basis.join("⊗"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_tensor(), f)
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `g · v` on a single module.
pub fn act(g: Generator, v: &ModuleVector) -> Result<ModuleVector> {
    g.check(v.n)?;
    let mut out = ModuleVector {
        n: v.n,
        level: v.level,
        terms: BTreeMap::new(),
    };
    for (s, c) in &v.terms {
        if let Some((t, e)) = act_basis(g, *s) {
            out.add_term(t, &c.shift(e));
        }
    }
    Ok(out)
}

/// Image of one basis tuple under the iterated coproduct of `g`:
/// `Δ X = X⊗1 + K⊗X` and `Δ Y = Y⊗K^{-1} + 1⊗Y`, extended to any number of
/// factors (the result is independent of the grouping).
pub fn act_tuple(g: Generator, key: &[IndexSet]) -> Vec<(Vec<IndexSet>, i32)> {
    let beta = g.beta();
    let p: Vec<i32> = key.iter().map(|s| set_pairing(*s, beta) as i32).collect();
    match g.kind {
        GenKind::K => vec![(key.to_vec(), p.iter().sum())],
        GenKind::Kinv => vec![(key.to_vec(), -p.iter().sum::<i32>())],
        GenKind::X => (0..key.len())
            .filter_map(|pos| {
                act_basis(g, key[pos]).map(|(t, _)| {
                    let mut k = key.to_vec();
                    k[pos] = t;
                    (k, p[..pos].iter().sum())
                })
            })
            .collect(),
        GenKind::Y => (0..key.len())
            .filter_map(|pos| {
                act_basis(g, key[pos]).map(|(t, _)| {
                    let mut k = key.to_vec();
                    k[pos] = t;
                    (k, -p[pos + 1..].iter().sum::<i32>())
                })
            })
            .collect(),
    }
}

/// `g · v` on a tensor product through the comultiplication.
pub fn act_tensor(g: Generator, v: &TensorVector) -> Result<TensorVector> {
    g.check(v.n)?;
    let mut out = TensorVector {
        n: v.n,
        levels: v.levels.clone(),
        terms: BTreeMap::new(),
    };
    for (k, c) in &v.terms {
        for (k2, e) in act_tuple(g, k) {
            add_into(&mut out.terms, k2, &c.shift(e));
        }
    }
    Ok(out)
}

/// Applies a word of generators, rightmost first.
pub fn act_word(word: &[Generator], v: &TensorVector) -> Result<TensorVector> {
    let mut cur = v.clone();
    for g in word.iter().rev() {
        cur = act_tensor(*g, &cur)?;
    }
    Ok(cur)
}

/// An element of `{1, K, K^{-1}, X, Y}` used to spell out coproducts symbolically.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Op {
    One,
    Gen(Generator),
}

/// `Δ(op)` as a list of elementary tensors.
pub fn coproduct(op: Op) -> Vec<(Op, Op)> {
    match op {
        Op::One => vec![(Op::One, Op::One)],
        Op::Gen(g) => {
            let k = Op::Gen(Generator::simple(GenKind::K, g.c));
            let kinv = Op::Gen(Generator::simple(GenKind::Kinv, g.c));
            match g.kind {
                GenKind::K | GenKind::Kinv => vec![(op, op)],
                GenKind::X => vec![(op, Op::One), (k, op)],
                GenKind::Y => vec![(op, kinv), (Op::One, op)],
            }
        }
    }
}

/// Elementary tensors of `(Δ⊗id)Δ(g)` (`left = true`) or `(id⊗Δ)Δ(g)`.
pub fn triple_coproduct(g: Generator, left: bool) -> Vec<[Op; 3]> {
    let mut out = Vec::new();
    for (a, b) in coproduct(Op::Gen(g)) {
        if left {
            for (a1, a2) in coproduct(a) {
                out.push([a1, a2, b]);
            }
        } else {
            for (b1, b2) in coproduct(b) {
                out.push([a, b1, b2]);
            }
        }
    }
    out
}

/// Applies an elementary tensor of operators factor by factor.
pub fn apply_ops(ops: &[Op], v: &TensorVector) -> Result<TensorVector> {
    let mut out = TensorVector::zero(v.n, &v.levels)?;
    for (k, c) in &v.terms {
        let mut key = k.clone();
        let mut e = 0;
        let mut alive = true;
        for (pos, op) in ops.iter().enumerate() {
            if let Op::Gen(g) = op {
                g.check(v.n)?;
                match act_basis(*g, key[pos]) {
                    Some((t, x)) => {
                        key[pos] = t;
                        e += x;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
        }
        if alive {
            out.add_term(key, &c.shift(e));
        }
    }
    Ok(out)
}

/// One failing instance of a defining relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub relation: String,
    pub basis: String,
}

/// Outcome of [`verify_relations`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

type Check = (String, Box<dyn Fn(&TensorVector) -> Result<bool> + Send + Sync>);

fn relation_checks(n: usize) -> Vec<Check> {
    use GenKind::*;
    let g = |kind, c: u8| Generator::simple(kind, c);
    let mut checks: Vec<Check> = Vec::new();
    let word_eq = |lhs: Vec<Generator>, rhs: Vec<Generator>, scale: Laurent| {
        Box::new(move |v: &TensorVector| {
            let a = act_word(&lhs, v)?;
            let b = act_word(&rhs, v)?.scaled(&scale);
            Ok(a == b)
        }) as Box<dyn Fn(&TensorVector) -> Result<bool> + Send + Sync>
    };
    for c in 1..n as u8 {
        checks.push((format!("K_{c}K_{c}^-1=1"), word_eq(vec![g(K, c), g(Kinv, c)], vec![], Laurent::one())));
        checks.push((format!("K_{c}^-1K_{c}=1"), word_eq(vec![g(Kinv, c), g(K, c)], vec![], Laurent::one())));
        for d in 1..n as u8 {
            let a = crate::weyl::root_pairing(PositiveRoot::simple(c), PositiveRoot::simple(d)) as i32;
            if c < d {
                checks.push((format!("K_{c}K_{d}=K_{d}K_{c}"), word_eq(vec![g(K, c), g(K, d)], vec![g(K, d), g(K, c)], Laurent::one())));
            }
            checks.push((
                format!("K_{c}X_{d}K_{c}^-1=q^{a}X_{d}"),
                word_eq(vec![g(K, c), g(X, d), g(Kinv, c)], vec![g(X, d)], Laurent::q_pow(a)),
            ));
            checks.push((
                format!("K_{c}Y_{d}K_{c}^-1=q^{}Y_{d}", -a),
                word_eq(vec![g(K, c), g(Y, d), g(Kinv, c)], vec![g(Y, d)], Laurent::q_pow(-a)),
            ));
            let (x, y) = (g(X, c), g(Y, d));
            let (kc, kci) = (g(K, c), g(Kinv, c));
            checks.push((
                format!("[X_{c},Y_{d}]=δ(K-K^-1)/(q-q^-1)"),
                Box::new(move |v: &TensorVector| {
                    let lhs = act_word(&[x, y], v)?.sub(&act_word(&[y, x], v)?);
                    let mut rhs = TensorVector::zero(v.n, &v.levels)?;
                    if c == d {
                        let diff = act_tensor(kc, v)?.sub(&act_tensor(kci, v)?);
                        let den = Laurent::q() - Laurent::q_pow(-1);
                        for (k, coeff) in diff.terms() {
                            rhs.add_term(k.clone(), &coeff.exact_div(&den)?);
                        }
                    }
                    Ok(lhs == rhs)
                }),
            ));
            if c.abs_diff(d) == 1 {
                for kind in [X, Y] {
                    let (e, f) = (g(kind, c), g(kind, d));
                    let name = if kind == X { "X" } else { "Y" };
                    checks.push((
                        format!("Serre {name}_{c}^2{name}_{d}"),
                        Box::new(move |v: &TensorVector| {
                            let mut s = act_word(&[e, e, f], v)?;
                            s.add_scaled(&act_word(&[e, f, e], v)?, &-(Laurent::q() + Laurent::q_pow(-1)));
                            s.add_scaled(&act_word(&[f, e, e], v)?, &Laurent::one());
                            Ok(s.is_zero())
                        }),
                    ));
                }
            } else if c < d && d - c > 1 {
                checks.push((format!("X_{c}X_{d}=X_{d}X_{c}"), word_eq(vec![g(X, c), g(X, d)], vec![g(X, d), g(X, c)], Laurent::one())));
                checks.push((format!("Y_{c}Y_{d}=Y_{d}Y_{c}"), word_eq(vec![g(Y, c), g(Y, d)], vec![g(Y, d), g(Y, c)], Laurent::one())));
            }
        }
    }
    checks
}

/// Checks every defining relation of `U_q(sl_n)` as an operator identity on
/// the full basis of `V^{levels[0]} ⊗ …`.
pub fn verify_relations(n: usize, levels: &[usize]) -> Result<RelationReport> {
    check_levels(n, levels)?;
    if levels.is_empty() || levels.iter().any(|&l| l == 0 || l >= n) {
        return Err(Error::InvalidLevel {
            level: levels.iter().copied().find(|&l| l == 0 || l >= n).unwrap_or(0),
            n,
        });
    }
    let checks = relation_checks(n);
    let tuples = TensorVector::basis_tuples(n, levels);
    let results: Vec<Result<(usize, Vec<Violation>)>> = tuples
        .par_iter()
        .map(|key| {
            let v = TensorVector::basis(n, key)?;
            let mut bad = Vec::new();
            for (name, check) in &checks {
                if !check(&v)? {
                    bad.push(Violation {
                        relation: name.clone(),
                        basis: v.to_string(),
                    });
                }
            }
            Ok((checks.len(), bad))
        })
        .collect();
    let mut report = RelationReport::default();
    for r in results {
        let (count, bad) = r?;
        report.checked += count;
        report.violations.extend(bad);
    }
    Ok(report)
}

/// Compares the two groupings of the triple coproduct with each other and with
/// [`act_tensor`] on every basis tuple of a triple tensor product.
pub fn verify_coassociativity(n: usize, levels: [usize; 3]) -> Result<RelationReport> {
    check_levels(n, &levels)?;
    let mut report = RelationReport::default();
    for key in TensorVector::basis_tuples(n, &levels) {
        let v = TensorVector::basis(n, &key)?;
        for g in Generator::all(n) {
            let mut left = TensorVector::zero(n, &levels)?;
            for ops in triple_coproduct(g, true) {
                left.add_scaled(&apply_ops(&ops, &v)?, &Laurent::one());
            }
            let mut right = TensorVector::zero(n, &levels)?;
            for ops in triple_coproduct(g, false) {
                right.add_scaled(&apply_ops(&ops, &v)?, &Laurent::one());
            }
            let direct = act_tensor(g, &v)?;
            report.checked += 1;
            if left != right || left != direct {
                report.violations.push(Violation {
                    relation: format!("coassociativity of Δ({g})"),
                    basis: v.to_string(),
                });
            }
        }
    }
    Ok(report)
}

/// Annihilated by every `X_β` and an eigenvector of every `K_β`.
pub fn is_highest_weight(v: &TensorVector) -> bool {
    if v.is_zero() {
        return false;
    }
    (1..v.n as u8).all(|c| {
        let x = act_tensor(Generator::simple(GenKind::X, c), v).expect("valid generator");
        let k = act_tensor(Generator::simple(GenKind::K, c), v).expect("valid generator");
        x.is_zero() && is_multiple(&k, v)
    })
}

/// Whether `a = λ b` for a Laurent scalar `λ` that is a unit (as happens for
/// `K`-eigenvalues).
fn is_multiple(a: &TensorVector, b: &TensorVector) -> bool {
    let Some((k, c)) = b.terms.iter().next() else {
        return a.is_zero();
    };
    let Ok(lambda) = a.coefficient(k).exact_div(c) else {
        return false;
    };
    *a == b.scaled(&lambda)
}

/// `e_{1..i}`, the highest weight vector of `V^i`.
pub fn highest_weight_vector(n: usize, levels: &[usize]) -> Result<TensorVector> {
    let key: Vec<IndexSet> = levels.iter().map(|&l| IndexSet::from_bits((1u32 << l) - 1)).collect();
    TensorVector::basis(n, &key)
}

pub fn is_highest_weight_module(v: &ModuleVector) -> bool {
    is_highest_weight(&v.to_tensor())
}
