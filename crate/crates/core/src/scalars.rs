//! Laurent polynomials in `q` over arbitrary-precision rationals, their
//! fraction field, and exact linear algebra (rank, membership, kernels).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// Element of `Q[q, q⁻¹]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<i32, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(e: i32) -> Self {
        Self::monomial(Rational::one(), e)
    }

    pub fn monomial(c: Rational, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, c);
        }
        out
    }

    pub fn from_int_terms(pairs: &[(i32, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(e, c)| (e, Rational::from_integer(c.into()))))
    }

    pub fn add_term(&mut self, e: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Units of the Laurent ring are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coefficient(&self, e: i32) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, k: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, x)| (e + k, x * c)).collect(),
        }
    }

    /// `q ↦ q⁻¹`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Exact quotient in the Laurent ring.
    pub fn exact_div(&self, y: &Laurent) -> Result<Laurent> {
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if y.is_unit() {
            let (&e, c) = y.terms.iter().next().unwrap();
            return Ok(self.mul_monomial(&c.recip(), -e));
        }
        let (xs, x) = self.to_poly();
        let (ys, yp) = y.to_poly();
        let (quot, rem) = poly_divrem(&x, &yp);
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(self.to_string(), y.to_string()));
        }
        Ok(Self::from_poly(&quot, xs - ys))
    }

    /// Evaluate at a nonzero rational.
    pub fn eval(&self, q0: &Rational) -> Result<Rational> {
        if q0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = q0.recip();
        let mut acc = Rational::zero();
        for (&e, c) in &self.terms {
            let base = if e >= 0 { q0 } else { &inv };
            acc += c * pow(base, e.unsigned_abs());
        }
        Ok(acc)
    }

    /// Dense coefficients after factoring out `q^min`, low degree first.
    fn to_poly(&self) -> (i32, Vec<Rational>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut v = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (&e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_poly(p: &[Rational], shift: i32) -> Self {
        Self {
            terms: p
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i32 + shift, c.clone()))
                .collect(),
        }
    }

    /// Associate normalized to lowest exponent 0 and leading coefficient 1.
    /// Two elements are associates iff their normal forms coincide.
    pub fn normalized(&self) -> Laurent {
        match (self.min_exp(), self.leading_coefficient()) {
            (Some(lo), Some(lc)) => self.mul_monomial(&lc.recip(), -lo),
            _ => Self::zero(),
        }
    }

    /// The unit `c q^k` with `self = unit · self.normalized()`.
    pub fn unit_part(&self) -> Laurent {
        match (self.min_exp(), self.leading_coefficient()) {
            (Some(lo), Some(lc)) => Laurent::monomial(lc.clone(), lo),
            _ => Self::zero(),
        }
    }

    /// Normalized greatest common divisor.
    pub fn gcd(&self, other: &Laurent) -> Laurent {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        if self.is_unit() || other.is_unit() {
            return Laurent::one();
        }
        let (_, mut a) = self.to_poly();
        let (_, mut b) = other.to_poly();
        while b.iter().any(|c| !c.is_zero()) {
            let (_, r) = poly_divrem(&a, &b);
            a = b;
            b = trim(r);
        }
        Self::from_poly(&a, 0).normalized()
    }
}

fn pow(base: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Polynomial long division of dense coefficient vectors (low degree first).
fn poly_divrem(x: &[Rational], y: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let y = trim(y.to_vec());
    let dy = y.len() - 1;
    let lead = y[dy].clone();
    let mut rem = trim(x.to_vec());
    if rem.len() <= dy {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - dy];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dy] / &lead;
        if !c.is_zero() {
            for (t, yc) in y.iter().enumerate() {
                rem[k + t] -= &c * yc;
            }
        }
        quot[k] = c;
    }
    rem.truncate(dy.max(1));
    (quot, trim(rem))
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if var.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{a}*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            m.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut out = Laurent::zero();
        for (e, c) in raw {
            let e: i32 = e.parse().map_err(D::Error::custom)?;
            let c = parse_rational(&c).map_err(D::Error::custom)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl Add<&Laurent> for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&Laurent> for Laurent {
    fn sub_assign(&mut self, rhs: &Laurent) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, -c);
        }
    }
}

impl Sub<&Laurent> for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(mut self, rhs: Laurent) -> Laurent {
        self -= &rhs;
        self
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl Mul<&Laurent> for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut out = Laurent::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

pub fn lp_add(x: &Laurent, y: &Laurent) -> Laurent {
    x + y
}

pub fn lp_neg(x: &Laurent) -> Laurent {
    -x
}

pub fn lp_mul(x: &Laurent, y: &Laurent) -> Laurent {
    x * y
}

pub fn lp_exact_div(x: &Laurent, y: &Laurent) -> Result<Laurent> {
    x.exact_div(y)
}

pub fn lp_eval(x: &Laurent, q0: &Rational) -> Result<Rational> {
    x.eval(q0)
}

/// Element of the fraction field `Q(q)`, kept in lowest terms with a
/// normalized denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fraction {
    num: Laurent,
    den: Laurent,
}

impl Fraction {
    pub fn new(num: Laurent, den: Laurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g)?;
        let mut den = den.exact_div(&g)?;
        let u = den.unit_part();
        num = num.exact_div(&u)?;
        den = den.exact_div(&u)?;
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Self {
            num: Laurent::zero(),
            den: Laurent::one(),
        }
    }

    pub fn from_laurent(x: Laurent) -> Self {
        Self {
            num: x,
            den: Laurent::one(),
        }
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial this fraction equals, if any.
    pub fn as_laurent(&self) -> Option<Laurent> {
        self.den.is_one().then(|| self.num.clone())
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Laurent>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Laurent::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<Laurent>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Laurent {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Laurent) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Laurent] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Rank over `Q(q)` by Bareiss fraction-free elimination.
    ///
    /// Pivots are chosen among the remaining rows and columns by smallest
    /// support size, ties broken by `(row, col)`. Every intermediate entry is a
    /// minor of the input, so each update divides exactly by the previous pivot.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut row_live = vec![true; m.rows];
        let mut col_live = vec![true; m.cols];
        let mut prev = Laurent::one();
        let mut rank = 0;
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for r in (0..m.rows).filter(|&r| row_live[r]) {
                for c in (0..m.cols).filter(|&c| col_live[c]) {
                    let s = m.get(r, c).support_size();
                    if s > 0 && best.is_none_or(|(bs, _, _)| s < bs) {
                        best = Some((s, r, c));
                    }
                }
            }
            let Some((_, pr, pc)) = best else { break };
            rank += 1;
            row_live[pr] = false;
            col_live[pc] = false;
            let pivot = m.get(pr, pc).clone();
            for r in (0..m.rows).filter(|&r| row_live[r]) {
                let factor = m.get(r, pc).clone();
                for c in (0..m.cols).filter(|&c| col_live[c]) {
                    let mut x = m.get(r, c) * &pivot;
                    if !factor.is_zero() {
                        x -= &(&factor * m.get(pr, c));
                    }
                    let x = x
                        .exact_div(&prev)
                        .expect("Bareiss update must divide exactly");
                    m.set(r, c, x);
                }
                m.set(r, pc, Laurent::zero());
            }
            prev = pivot;
        }
        rank
    }
}

/// Rank over the fraction field of a list of coordinate vectors.
pub fn span_rank(vectors: &[Vec<Laurent>]) -> Result<usize> {
    Ok(ScalarMatrix::from_rows(vectors)?.rank())
}

fn row_content(row: &[Laurent]) -> Laurent {
    let mut g = Laurent::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

fn make_primitive(row: &mut [Laurent]) {
    let g = row_content(row);
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = x.exact_div(&g).expect("content divides every entry");
    }
}

/// Fraction-free Gauss–Jordan reduction with row content removal.
///
/// Pivots are searched only in columns `< pivot_cols`. After reduction, each
/// pivot column is nonzero in exactly one row.
struct Reduced {
    rows: Vec<Vec<Laurent>>,
    /// `(row, col)` of each pivot, in the order found.
    pivots: Vec<(usize, usize)>,
}

fn gauss_jordan(mut rows: Vec<Vec<Laurent>>, pivot_cols: usize) -> Reduced {
    let nrows = rows.len();
    let mut row_done = vec![false; nrows];
    let mut col_done = vec![false; pivot_cols];
    let mut pivots = Vec::new();
    for row in rows.iter_mut() {
        make_primitive(row);
    }
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate().filter(|(r, _)| !row_done[*r]) {
            for (c, x) in row[..pivot_cols].iter().enumerate() {
                let s = x.support_size();
                if s > 0 && !col_done[c] && best.is_none_or(|(bs, _, _)| s < bs) {
                    best = Some((s, r, c));
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        row_done[pr] = true;
        col_done[pc] = true;
        pivots.push((pr, pc));
        let pivot_row = rows[pr].clone();
        let pivot = pivot_row[pc].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let factor = row[pc].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                let mut v = &*x * &pivot;
                if !y.is_zero() {
                    v -= &(&factor * y);
                }
                *x = v;
            }
            make_primitive(row);
        }
    }
    Reduced { rows, pivots }
}

/// Normalize so that the first nonzero coordinate becomes 1 when it is a unit,
/// and has leading coefficient 1 otherwise.
pub fn normalize_vector(v: &mut [Laurent]) {
    make_primitive(v);
    if let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() {
        let u = first.unit_part();
        for x in v.iter_mut() {
            *x = x.exact_div(&u).unwrap();
        }
    }
}

/// Basis of `{x : M x = 0}` for the matrix whose rows are `rows`.
///
/// Each returned vector is primitive and normalized with [`normalize_vector`].
pub fn nullspace(rows: &[Vec<Laurent>], ncols: usize) -> Result<Vec<Vec<Laurent>>> {
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch);
    }
    let red = gauss_jordan(rows.to_vec(), ncols);
    let mut pivot_of_col = vec![None; ncols];
    for &(r, c) in &red.pivots {
        pivot_of_col[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| pivot_of_col[c].is_none()) {
        // x_free = L, x_c = -L * M[r][free] / M[r][c] for each pivot (r, c)
        let mut l = Laurent::one();
        for &(r, c) in &red.pivots {
            if !red.rows[r][free].is_zero() {
                let p = &red.rows[r][c];
                let g = l.gcd(p);
                l = (&l * p).exact_div(&g)?;
            }
        }
        let mut x = vec![Laurent::zero(); ncols];
        x[free] = l.clone();
        for &(r, c) in &red.pivots {
            let f = &red.rows[r][free];
            if !f.is_zero() {
                let scale = l.exact_div(&red.rows[r][c])?;
                x[c] = -(f * &scale);
            }
        }
        normalize_vector(&mut x);
        out.push(x);
    }
    Ok(out)
}

/// Precomputed reduction of an independent basis, answering repeated
/// membership and coordinate queries.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    dim: usize,
    /// Reduced basis rows `R = T·B`, with pivot `(col, value)` per row.
    reduced: Vec<Vec<Laurent>>,
    transform: Vec<Vec<Laurent>>,
    pivot: Vec<(usize, Laurent)>,
    basis_len: usize,
}

impl SpanSolver {
    pub fn new(basis: &[Vec<Laurent>], dim: usize) -> Result<Self> {
        if basis.iter().any(|b| b.len() != dim) {
            return Err(Error::DimensionMismatch);
        }
        let m = basis.len();
        let rows: Vec<Vec<Laurent>> = basis
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let mut row = b.clone();
                row.extend((0..m).map(|t| if t == k { Laurent::one() } else { Laurent::zero() }));
                row
            })
            .collect();
        let red = gauss_jordan(rows, dim);
        if red.pivots.len() != m {
            return Err(Error::DependentBasis);
        }
        let mut reduced = Vec::with_capacity(m);
        let mut transform = Vec::with_capacity(m);
        let mut pivot = Vec::with_capacity(m);
        for &(r, c) in &red.pivots {
            let row = &red.rows[r];
            reduced.push(row[..dim].to_vec());
            transform.push(row[dim..].to_vec());
            pivot.push((c, row[c].clone()));
        }
        Ok(Self {
            dim,
            reduced,
            transform,
            pivot,
            basis_len: m,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.basis_len
    }

    pub fn is_empty(&self) -> bool {
        self.basis_len == 0
    }

    /// Coordinates of `v` in the basis, or `None` when `v` is outside the span.
    pub fn express(&self, v: &[Laurent]) -> Result<Option<Vec<Fraction>>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch);
        }
        // L v = Σ_k v[c_k] (L / p_k) R_k must hold exactly.
        let mut l = Laurent::one();
        for (c, p) in &self.pivot {
            if !v[*c].is_zero() {
                let g = l.gcd(p);
                l = (&l * p).exact_div(&g)?;
            }
        }
        let mut residual: Vec<Laurent> = v.iter().map(|x| x * &l).collect();
        let mut weights = Vec::with_capacity(self.pivot.len());
        for (k, (c, p)) in self.pivot.iter().enumerate() {
            if v[*c].is_zero() {
                weights.push(Laurent::zero());
                continue;
            }
            let wk = &v[*c] * &l.exact_div(p)?;
            for (x, y) in residual.iter_mut().zip(&self.reduced[k]) {
                if !y.is_zero() {
                    *x -= &(&wk * y);
                }
            }
            weights.push(wk);
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut coeffs = Vec::with_capacity(self.basis_len);
        for j in 0..self.basis_len {
            let mut num = Laurent::zero();
            for (k, wk) in weights.iter().enumerate() {
                let t = &self.transform[k][j];
                if !wk.is_zero() && !t.is_zero() {
                    num += &(wk * t);
                }
            }
            coeffs.push(Fraction::new(num, l.clone())?);
        }
        Ok(Some(coeffs))
    }
}

/// Coordinates of `v` in `basis` over `Q(q)`, or `None` when outside the span.
pub fn express(v: &[Laurent], basis: &[Vec<Laurent>]) -> Result<Option<Vec<Fraction>>> {
    SpanSolver::new(basis, v.len())?.express(v)
}

/// Reduced row echelon span over `Q`, for numerically specialized checks.
#[derive(Clone, Debug)]
pub struct RationalSpan {
    dim: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RationalSpan {
    pub fn new(vectors: &[Vec<Rational>], dim: usize) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch);
        }
        let mut span = Self {
            dim,
            rows: Vec::new(),
        };
        for v in vectors {
            span.insert(v.clone());
        }
        Ok(span)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (c, row) in &self.rows {
            if !v[*c].is_zero() {
                let f = v[*c].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    /// Add a vector; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut v = self.reduce(v);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let p = v[c].clone();
        for x in v.iter_mut() {
            *x /= &p;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((c, v));
        true
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.dim && self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i32, i64)]) -> Laurent {
        Laurent::from_int_terms(pairs)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(lp_mul(&Laurent::q(), &Laurent::q_pow(-1)), Laurent::one());
        assert_eq!(lp_mul(&lp(&[(0, 1), (1, 1)]), &lp(&[(0, 1), (1, -1)])), lp(&[(0, 1), (2, -1)]));
        assert_eq!(lp_add(&lp(&[(1, 1), (-1, 1)]), &lp(&[(1, -1)])), Laurent::q_pow(-1));
        assert!(lp_add(&Laurent::q(), &lp_neg(&Laurent::q())).is_zero());
    }

    #[test]
    fn division_examples() {
        let x = lp(&[(2, 1), (-2, -1)]);
        let y = lp(&[(1, 1), (-1, -1)]);
        assert_eq!(lp_exact_div(&x, &y).unwrap(), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(lp_exact_div(&x, &Laurent::one()).unwrap(), x);
        assert_eq!(lp_exact_div(&lp(&[(2, 1), (0, 1)]), &Laurent::q()).unwrap(), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(lp_exact_div(&x, &Laurent::zero()), Err(Error::DivisionByZero));
        assert!(matches!(
            lp_exact_div(&lp(&[(2, 1), (0, 1)]), &lp(&[(1, 1), (0, 1)])),
            Err(Error::NotDivisible(..))
        ));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(lp_eval(&lp(&[(1, 1), (-1, 1)]), &rat(2, 1)).unwrap(), rat(5, 2));
        assert_eq!(lp_eval(&Laurent::one(), &rat(7, 3)).unwrap(), rat(1, 1));
        assert_eq!(lp_eval(&lp(&[(2, 1), (0, 1)]), &rat(1, 2)).unwrap(), rat(5, 4));
        assert_eq!(lp_eval(&Laurent::q(), &rat(0, 1)), Err(Error::DivisionByZero));
    }

    #[test]
    fn rank_examples() {
        let one = Laurent::one;
        let zero = Laurent::zero;
        assert_eq!(span_rank(&[vec![one(), zero()], vec![zero(), one()]]).unwrap(), 2);
        let q = Laurent::q();
        let q2 = Laurent::q_pow(2);
        assert_eq!(span_rank(&[vec![one(), q.clone()], vec![q.clone(), q2]]).unwrap(), 1);
        assert_eq!(span_rank(&[]).unwrap(), 0);
        assert!(span_rank(&[vec![one()], vec![one(), one()]]).is_err());
    }

    #[test]
    fn express_examples() {
        let q = Laurent::q();
        let basis = vec![vec![Laurent::one(), q.clone()]];
        let c = express(&[q.clone(), Laurent::q_pow(2)], &basis).unwrap().unwrap();
        assert_eq!(c[0].as_laurent(), Some(q.clone()));
        let zero = express(&[Laurent::zero(), Laurent::zero()], &basis).unwrap().unwrap();
        assert!(zero.iter().all(|c| c.is_zero()));
        let ortho = vec![vec![Laurent::zero(), Laurent::one()]];
        assert!(express(&[Laurent::one(), Laurent::zero()], &ortho).unwrap().is_none());
        let dep = vec![vec![Laurent::one(), q.clone()], vec![q.clone(), Laurent::q_pow(2)]];
        assert_eq!(express(&[Laurent::one(), q], &dep).unwrap_err(), Error::DependentBasis);
    }

    #[test]
    fn express_with_fraction_coefficients() {
        // (1, 0) = 1/(1+q) * (1+q, q) - q/(1+q) * (0, 1)
        let basis = vec![vec![lp(&[(0, 1), (1, 1)]), Laurent::q()], vec![Laurent::zero(), Laurent::one()]];
        let c = express(&[Laurent::one(), Laurent::zero()], &basis).unwrap().unwrap();
        assert_eq!(c[0].numerator(), &Laurent::one());
        assert_eq!(c[0].denominator(), &lp(&[(0, 1), (1, 1)]));
        assert_eq!(c[1].numerator(), &-Laurent::q());
        assert!(c[0].as_laurent().is_none());
    }

    #[test]
    fn nullspace_of_sl2_e_vectors() {
        // rows e1⊗e1, e2⊗e2, e2⊗e1 + q e1⊗e2 in the basis (11, 12, 21, 22)
        let o = Laurent::one;
        let z = Laurent::zero;
        let rows = vec![
            vec![o(), z(), z(), z()],
            vec![z(), z(), z(), o()],
            vec![z(), Laurent::q(), o(), z()],
        ];
        let ns = nullspace(&rows, 4).unwrap();
        assert_eq!(ns, vec![vec![z(), o(), -Laurent::q(), z()]]);
    }

    #[test]
    fn gcd_and_fraction() {
        let a = lp(&[(0, 1), (2, -1)]); // 1 - q^2
        let b = lp(&[(0, 1), (1, 1)]); // 1 + q
        assert_eq!(a.gcd(&b), b);
        let f = Fraction::new(a, b.shift(3)).unwrap();
        assert_eq!(f.as_laurent(), Some(lp(&[(-3, 1), (-2, -1)])));
    }

    #[test]
    fn display_and_json() {
        let x = lp(&[(2, 1), (0, 1)]);
        assert_eq!(x.to_string(), "q^2 + 1");
        assert_eq!(lp(&[(-1, -1)]).to_string(), "-q^-1");
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"0":"1","2":"1"}"#);
        let y: Laurent = serde_json::from_str(r#"{"-1":"3/2","1":"1"}"#).unwrap();
        assert_eq!(y, Laurent::from_terms([(-1, rat(3, 2)), (1, rat(1, 1))]));
        assert_eq!(Laurent::monomial(rat(2, 3), 1).to_string(), "2/3*q");
    }

    #[test]
    fn rational_span_membership() {
        let v = |a: i64, b: i64| vec![rat(a, 1), rat(b, 1)];
        let span = RationalSpan::new(&[v(1, 2)], 2).unwrap();
        assert!(span.contains(&v(3, 6)));
        assert!(!span.contains(&v(1, 0)));
        assert_eq!(span.rank(), 1);
    }
}
