//! Points of the components `E(C)`, their Plücker and Segre images, the
//! automorphisms `σ_i` as coordinate scalings, and sampling checks of the
//! statement that Segre images span `V^{ij}`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagbasis::{e_tensor, FlagCache};
use crate::orthocell::{enumerate_monogressive, make_cell, subcell_data, Orthocell};
use crate::report::CheckReport;
use crate::scalars::{parse_rational, rat, Laurent, Rational, RationalSpan};
use crate::uqrep::{signed_basis, ModuleVector, TensorVector};
use crate::weyl::{check_level, pairing, IndexSet, PositiveRoot};

/// A specialization `q = q0` at a rational that is not a root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QValue(Rational);

impl QValue {
    pub fn new(q0: Rational) -> Result<Self> {
        if q0.is_zero() || q0 == Rational::one() || q0 == -Rational::one() {
            return Err(Error::InvalidQ(q0.to_string()));
        }
        Ok(Self(q0))
    }

    /// Parses `NUM/DEN` or an integer.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl Default for QValue {
    fn default() -> Self {
        Self(rat(2, 1))
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of `E(C)` in the homogeneous coordinates `(x_k : y_k)`, one pair
/// per defining root of the cell, in the cell's root order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct CellPoint {
    cell: Orthocell,
    coords: Vec<(Rational, Rational)>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawPoint {
    cell: Orthocell,
    coords: Vec<[String; 2]>,
}

impl TryFrom<RawPoint> for CellPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        let coords = raw
            .coords
            .iter()
            .map(|[x, y]| Ok((parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>>>()?;
        CellPoint::new(raw.cell, coords)
    }
}

impl From<CellPoint> for RawPoint {
    fn from(p: CellPoint) -> Self {
        RawPoint {
            cell: p.cell,
            coords: p.coords.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect(),
        }
    }
}

impl CellPoint {
    pub fn new(cell: Orthocell, coords: Vec<(Rational, Rational)>) -> Result<Self> {
        if coords.len() != cell.rank() {
            return Err(Error::InvalidPoint(format!(
                "{} coordinate pairs for a cell of rank {}",
                coords.len(),
                cell.rank()
            )));
        }
        if let Some(k) = coords.iter().position(|(x, y)| x.is_zero() && y.is_zero()) {
            return Err(Error::InvalidPoint(format!("coordinate pair {} is (0:0)", k + 1)));
        }
        Ok(Self { cell, coords })
    }

    /// Convenience constructor from integer pairs.
    pub fn from_ints(cell: Orthocell, coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(cell, coords.iter().map(|&(x, y)| (rat(x, 1), rat(y, 1))).collect())
    }

    pub fn cell(&self) -> &Orthocell {
        &self.cell
    }

    pub fn coords(&self) -> &[(Rational, Rational)] {
        &self.coords
    }

    /// Draws each pair uniformly from `[-9, 9]²` minus the origin.
    pub fn random<R: Rng>(cell: &Orthocell, rng: &mut R) -> Self {
        let coords = (0..cell.rank())
            .map(|_| loop {
                let (x, y): (i64, i64) = (rng.gen_range(-9..=9), rng.gen_range(-9..=9));
                if (x, y) != (0, 0) {
                    break (rat(x, 1), rat(y, 1));
                }
            })
            .collect();
        Self {
            cell: cell.clone(),
            coords,
        }
    }
}

/// `Σ_L x_{L̄} y_L e^i_{s_L w}`, the sum running over subsets `L` of the
/// `i`-effective roots and `L̄` being the complement within them.
pub fn pluecker(p: &CellPoint, i: usize) -> Result<ModuleVector> {
    let c = &p.cell;
    check_level(c.n(), i)?;
    let eff = c.effective_mask(i);
    let mut v = ModuleVector::zero(c.n(), i)?;
    let mut l = eff;
    loop {
        let mut coef = Rational::one();
        for (k, (x, y)) in p.coords.iter().enumerate() {
            if eff & (1 << k) != 0 {
                coef *= if l & (1 << k) != 0 { y } else { x };
            }
        }
        if !coef.is_zero() {
            let (s, sign) = signed_basis(&c.element(l), i);
            v.add_term(s, &Laurent::constant(coef * rat(sign as i64, 1)));
        }
        if l == 0 {
            break;
        }
        l = (l - 1) & eff;
    }
    Ok(v)
}

/// `σ_i` on homogeneous coordinates: `(x_k : y_k) ↦ (x_k : q0 y_k)` on the
/// `i`-effective directions, identity on the others.
pub fn sigma(p: &CellPoint, i: usize, q: &QValue) -> CellPoint {
    let eff = p.cell.effective_mask(i);
    let coords = p
        .coords
        .iter()
        .enumerate()
        .map(|(k, (x, y))| {
            if eff & (1 << k) != 0 {
                (x.clone(), y * q.value())
            } else {
                (x.clone(), y.clone())
            }
        })
        .collect();
    CellPoint {
        cell: p.cell.clone(),
        coords,
    }
}

/// `Pl^i(p) ⊗ Pl^j(σ_i p)`.
pub fn segre_pair(p: &CellPoint, i: usize, j: usize, q: &QValue) -> Result<TensorVector> {
    let left = pluecker(p, i)?;
    let right = pluecker(&sigma(p, i, q), j)?;
    TensorVector::product(&[&left, &right])
}

/// Dense rational coordinates of `v` at `q = q0`.
fn dense_at(v: &TensorVector, q: &QValue, index: &HashMap<Vec<IndexSet>, usize>) -> Result<Vec<Rational>> {
    let mut row = vec![Rational::zero(); index.len()];
    for (k, c) in v.eval(q.value())? {
        row[index[&k]] = c;
    }
    Ok(row)
}

/// The cells `C(α_I; s_J s_{L'} s_{M'} w)` whose `e`-vectors occur in the
/// expansion of the Segre image of a point of `E(C)`. `I, J` are disjoint
/// subsets of the roots effective for both levels, `L'` of those effective
/// for `i` only and `M'` of those effective for `j` only.
fn expansion_cells(c: &Orthocell, i: usize, j: usize, r: &mut CheckReport) -> Result<Vec<Orthocell>> {
    let (ei, ej) = (c.effective_mask(i), c.effective_mask(j));
    let both = ei & ej;
    let free = (ei | ej) & !both;
    let mut out = Vec::new();
    for imask in submasks(both) {
        for jmask in submasks(both & !imask) {
            for lm in submasks(free) {
                let base = c.element(jmask | lm);
                let roots: Vec<PositiveRoot> = mask_roots(c.roots(), imask);
                let cell = make_cell(c.n(), &roots, &base)?;
                r.expect(cell.w() == &base, || format!("{base} is not minimal in {cell}"));
                r.expect(cell.is_monogressive(), || format!("{cell} is not monogressive"));
                r.expect(cell.is_ij_effective(i, j), || format!("{cell} is not {i}{j}-effective"));
                out.push(cell);
            }
        }
    }
    Ok(out)
}

fn submasks(m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            return out;
        }
        s = (s - 1) & m;
    }
}

fn mask_roots(roots: &[PositiveRoot], mask: u32) -> Vec<PositiveRoot> {
    roots.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, r)| *r).collect()
}

/// Samples `samples` points on every monogressive cell and checks that each
/// Segre image lies in the span of the `e_C^{ij}` at `q = q0`, lies in the
/// span of the cells of its own expansion, and is killed by every type (I)
/// relation at `q0`.
///
/// The generator for the `k`-th cell is seeded with `seed` on stream `k`,
/// so results do not depend on scheduling.
pub fn check_spanned(cache: &FlagCache, i: usize, j: usize, samples: usize, seed: u64, q: &QValue) -> Result<CheckReport> {
    let n = cache.n();
    let span = cache.span(i, j)?;
    let tuples = TensorVector::basis_tuples(n, &[i, j]);
    let index: HashMap<Vec<IndexSet>, usize> = tuples.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
    let rows = span.vectors.iter().map(|v| dense_at(v, q, &index)).collect::<Result<Vec<_>>>()?;
    let e_span = RationalSpan::new(&rows, tuples.len())?;
    let relations: Vec<Vec<(usize, Rational)>> = cache
        .type_i(i, j)?
        .iter()
        .map(|x| Ok(dense_at(x, q, &index)?.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()))
        .collect::<Result<Vec<_>>>()?;

    let mut report = CheckReport::default();
    report.expect(e_span.rank() == span.dim(), || {
        format!("e-span at q0={q} has rank {} < {}", e_span.rank(), span.dim())
    });

    let cells = enumerate_monogressive(n, None);
    let parts = cells
        .par_iter()
        .enumerate()
        .map(|(k, c)| -> Result<CheckReport> {
            let mut r = CheckReport::default();
            r.count(if c.is_ij_effective(i, j) { "effective cells" } else { "non-effective cells" });
            let named = expansion_cells(c, i, j, &mut r)?;
            let named_rows = named
                .iter()
                .map(|d| dense_at(&e_tensor(d, i, j), q, &index))
                .collect::<Result<Vec<_>>>()?;
            let local = RationalSpan::new(&named_rows, tuples.len())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            for _ in 0..samples {
                let p = CellPoint::random(c, &mut rng);
                let image = dense_at(&segre_pair(&p, i, j, q)?, q, &index)?;
                r.count("samples");
                r.expect(e_span.contains(&image), || format!("Segre image of {p:?} is outside the e-span"));
                r.expect(local.contains(&image), || {
                    format!("Segre image of a point of {c} is outside the span of its expansion cells")
                });
                let nonzero = relations
                    .iter()
                    .position(|xi| !xi.iter().map(|(t, a)| a * &image[*t]).sum::<Rational>().is_zero());
                r.expect(nonzero.is_none(), || {
                    format!("relation {} does not vanish on a point of {c}", nonzero.unwrap_or_default())
                });
            }
            Ok(r)
        })
        .collect::<Vec<_>>();
    for part in parts {
        report.merge(part?);
    }
    Ok(report)
}

/// For each rank-1 monogressive cell of `S_3`, the factors by which `σ_1`
/// and `σ_2` scale the affine coordinate `y/x`; sorted.
pub fn component_ratios(q: &QValue) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = enumerate_monogressive(3, Some(1))
        .into_iter()
        .map(|c| {
            let p = CellPoint::from_ints(c, &[(1, 1)]).expect("rank one");
            let ratio = |i| {
                let (x, y) = &sigma(&p, i, q).coords[0];
                y / x
            };
            (ratio(1), ratio(2))
        })
        .collect();
    out.sort();
    out
}

/// Compares [`component_ratios`] with `{(1,q)×3, (q,1)×3, (q,q)×2}`.
pub fn check_component_ratios(q: &QValue) -> CheckReport {
    let one = Rational::one();
    let qv = q.value().clone();
    let mut expected = [vec![(one.clone(), qv.clone()); 3], vec![(qv.clone(), one); 3], vec![(qv.clone(), qv); 2]].concat();
    expected.sort();
    let got = component_ratios(q);
    let mut r = CheckReport::default();
    r.expect(got.len() == 8, || format!("{} components instead of 8", got.len()));
    r.expect(got == expected, || format!("ratio multiset {got:?} differs from {expected:?}"));
    let mut classes = got.clone();
    classes.dedup();
    r.stats.insert("ratio classes".into(), classes.len());
    r
}

/// On every subcell `C(ℓ; s_L w)`, the pairing of each retained root with
/// `s_L w ω_i` equals its pairing with `w ω_i`.
pub fn gluing_check(c: &Orthocell, i: usize) -> CheckReport {
    let mut r = CheckReport::default();
    for (l, retained, sub) in subcell_data(c) {
        let base = c.element(l);
        for root in mask_roots(c.roots(), retained) {
            let (a, b) = (pairing(&base, i, root), pairing(c.w(), i, root));
            r.expect(a == b, || format!("{root} pairs to {a} on subcell {sub} of {c} but to {b} on the cell"));
        }
    }
    r
}

/// [`gluing_check`] for every monogressive cell and every level.
pub fn check_gluing(n: usize) -> CheckReport {
    let cells = enumerate_monogressive(n, None);
    let parts: Vec<CheckReport> = cells
        .par_iter()
        .map(|c| {
            let mut r = CheckReport::default();
            for i in 1..n {
                r.merge(gluing_check(c, i));
            }
            r
        })
        .collect();
    let mut out = CheckReport::default();
    for p in parts {
        out.merge(p);
    }
    out.stats.insert("cells".into(), cells.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::Permutation;

    fn r(a: u8, b: u8) -> PositiveRoot {
        PositiveRoot::new(a, b).unwrap()
    }

    fn p(v: &[u8]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn set(v: &[u8]) -> IndexSet {
        IndexSet::from_values(v)
    }

    fn lc(x: i64) -> Laurent {
        Laurent::from_int(x)
    }

    #[test]
    fn pluecker_n2() {
        let c = make_cell(2, &[r(1, 2)], &p(&[1, 2])).unwrap();
        let pt = CellPoint::from_ints(c, &[(3, 5)]).unwrap();
        let v = pluecker(&pt, 1).unwrap();
        assert_eq!(v.coefficient(set(&[1])), lc(3));
        assert_eq!(v.coefficient(set(&[2])), lc(5));
    }

    #[test]
    fn pluecker_rank_zero() {
        let c = make_cell(3, &[], &p(&[2, 1, 3])).unwrap();
        let pt = CellPoint::from_ints(c, &[]).unwrap();
        let v = pluecker(&pt, 2).unwrap();
        // e_2 ∧ e_1 = -e_{12}
        assert_eq!(v.terms().len(), 1);
        assert_eq!(v.coefficient(set(&[1, 2])), lc(-1));
    }

    #[test]
    fn pluecker_n4_two_roots() {
        let c = make_cell(4, &[r(1, 2), r(3, 4)], &p(&[1, 3, 2, 4])).unwrap();
        assert_eq!(c.effective_mask(2), 0b11);
        let pt = CellPoint::from_ints(c, &[(2, 3), (5, 7)]).unwrap();
        let v = pluecker(&pt, 2).unwrap();
        // roots are stored as (1,2), (3,4); prefixes {1,3}, {2,3}, {1,4}, {2,4}
        assert_eq!(v.terms().len(), 4);
        assert_eq!(v.coefficient(set(&[1, 3])), lc(10));
        assert_eq!(v.coefficient(set(&[2, 3])), lc(15));
        assert_eq!(v.coefficient(set(&[1, 4])), lc(14));
        assert_eq!(v.coefficient(set(&[2, 4])), lc(21));
    }

    #[test]
    fn sigma_rules() {
        let q = QValue::default();
        let c = make_cell(3, &[r(1, 2)], &p(&[1, 2, 3])).unwrap();
        let pt = CellPoint::from_ints(c, &[(1, 1)]).unwrap();
        assert_eq!(sigma(&pt, 1, &q).coords()[0], (rat(1, 1), rat(2, 1)));
        // (1,2) does not move {1,2}
        assert_eq!(sigma(&pt, 2, &q).coords()[0], (rat(1, 1), rat(1, 1)));
        assert_eq!(sigma(&sigma(&pt, 1, &q), 2, &q), sigma(&sigma(&pt, 2, &q), 1, &q));
    }

    #[test]
    fn segre_n2() {
        let q = QValue::parse("3").unwrap();
        let c = make_cell(2, &[r(1, 2)], &p(&[1, 2])).unwrap();
        let pt = CellPoint::from_ints(c, &[(2, 5)]).unwrap();
        let v = segre_pair(&pt, 1, 1, &q).unwrap();
        let (e1, e2) = (set(&[1]), set(&[2]));
        assert_eq!(v.coefficient(&[e1, e1]), lc(4));
        assert_eq!(v.coefficient(&[e1, e2]), lc(30));
        assert_eq!(v.coefficient(&[e2, e1]), lc(10));
        assert_eq!(v.coefficient(&[e2, e2]), lc(75));
    }

    #[test]
    fn point_json_round_trip() {
        let c = make_cell(4, &[r(1, 2), r(3, 4)], &p(&[1, 3, 2, 4])).unwrap();
        let pt = CellPoint::new(c, vec![(rat(1, 2), rat(0, 1)), (rat(-3, 1), rat(1, 1))]).unwrap();
        let s = serde_json::to_string(&pt).unwrap();
        assert!(s.contains(r#""coords":[["1/2","0"],["-3","1"]]"#), "{s}");
        let back: CellPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, pt);
        let c = make_cell(2, &[r(1, 2)], &p(&[1, 2])).unwrap();
        assert!(CellPoint::from_ints(c.clone(), &[(0, 0)]).is_err());
        assert!(CellPoint::from_ints(c, &[]).is_err());
    }

    #[test]
    fn q_values() {
        assert!(QValue::parse("1").is_err());
        assert!(QValue::parse("-1").is_err());
        assert!(QValue::parse("0").is_err());
        assert_eq!(QValue::parse("3/2").unwrap().value(), &rat(3, 2));
    }

    #[test]
    fn ratios_n3() {
        let q = QValue::default();
        let rep = check_component_ratios(&q);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.stats["ratio classes"], 3);
    }

    #[test]
    fn gluing_examples() {
        let c = make_cell(4, &[], &p(&[1, 2, 3, 4])).unwrap();
        assert_eq!(gluing_check(&c, 2).checked, 0);
        let c = make_cell(4, &[r(1, 2), r(3, 4)], &p(&[1, 2, 3, 4])).unwrap();
        assert!(gluing_check(&c, 1).passed());
        assert!(check_gluing(4).passed());
    }

    #[test]
    fn spanned_small() {
        let q = QValue::default();
        let cache = FlagCache::new(2).unwrap();
        let rep = check_spanned(&cache, 1, 1, 100, 42, &q).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.stats["samples"], 300);
        let cache = FlagCache::new(3).unwrap();
        let rep = check_spanned(&cache, 1, 2, 100, 42, &q).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.stats["non-effective cells"] > 0);
    }
}
