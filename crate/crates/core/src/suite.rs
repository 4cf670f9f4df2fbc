//! The verification suites behind the command line and the Python bindings,
//! each producing a [`RunReport`] with one named check per parameter choice.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flagbasis::{
    check_closure, check_k_eigenvalues, check_w_submodule, format_sl2_relation, level_pairs, verify_braid,
    verify_case_tables, verify_intertwiner, verify_normal_forms, weight_span_rank, e_tensor, FlagCache,
};
use crate::geometry::{check_component_ratios, check_gluing, check_spanned, QValue};
use crate::orthocell::{count_ij_normal, dim_formula, enumerate_effective};
use crate::report::{CheckReport, RunReport};
use crate::uqrep::{verify_coassociativity, verify_relations};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Relations,
    Ijinv,
    Tables,
    Intertwiner,
    Braid,
    Spanned,
    Gluing,
    Normalform,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Relations,
        Suite::Ijinv,
        Suite::Tables,
        Suite::Intertwiner,
        Suite::Braid,
        Suite::Spanned,
        Suite::Gluing,
        Suite::Normalform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Ijinv => "ijinv",
            Suite::Tables => "tables",
            Suite::Intertwiner => "intertwiner",
            Suite::Braid => "braid",
            Suite::Spanned => "spanned",
            Suite::Gluing => "gluing",
            Suite::Normalform => "normalform",
            Suite::All => "all",
        }
    }

    /// Whether the suite works over `Q[q, q⁻¹]` rather than at a sampled `q0`.
    pub fn is_algebraic(self) -> bool {
        !matches!(self, Suite::Spanned | Suite::Gluing)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Sampling parameters for the geometric checks.
#[derive(Clone, Debug)]
pub struct Options {
    pub samples: usize,
    pub seed: u64,
    pub q: QValue,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            samples: 100,
            seed: 42,
            q: QValue::default(),
        }
    }
}

impl Options {
    fn parameters(&self, n: usize) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("n".to_string(), n.to_string()),
            ("samples".to_string(), self.samples.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("q".to_string(), self.q.to_string()),
        ])
    }
}

fn unordered_pairs(n: usize) -> Vec<(usize, usize)> {
    level_pairs(n).into_iter().filter(|(i, j)| i <= j).collect()
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..n {
        for j in 1..n {
            for k in 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// One row of the dimension table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimRow {
    pub i: usize,
    pub j: usize,
    /// `D_{n;i,j}` from the binomial formula.
    pub formula: u64,
    /// Number of `ij`-normal cells.
    pub cells: usize,
    /// Rank of the span of their `e`-vectors.
    pub rank: usize,
    pub matches: bool,
}

/// `D_{n;i,j}`, the normal cell count and the span rank for every `i ≤ j`.
pub fn dims(n: usize) -> Result<Vec<DimRow>> {
    crate::flagbasis::FlagCache::new(n)?;
    unordered_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let cells = enumerate_effective(n, i, j);
            let vectors: Vec<_> = cells.iter().map(|c| e_tensor(c, i, j)).collect();
            let rank = weight_span_rank(&vectors)?;
            let formula = dim_formula(n, i, j);
            Ok(DimRow {
                i,
                j,
                formula,
                cells: cells.len(),
                rank,
                matches: cells.len() as u64 == formula && rank as u64 == formula,
            })
        })
        .collect()
}

/// `D_{n;i,j} = D_{n-1;i-1,j-1} + D_{n-1;i-1,j} + D_{n-1;i,j-1} + D_{n-1;i,j}`
/// on normal cell counts, for all `0 ≤ i ≤ j ≤ n`. Vacuous for `n < 3`.
///
/// The recursion is in terms of the unsymmetrized count, which vanishes for
/// `i > j`: with `i = j` there is no slot strictly between `w(i)` and `w(j)`
/// for the new largest value, so the `(i, j-1)` term contributes nothing.
pub fn check_recursion(n: usize) -> CheckReport {
    let mut r = CheckReport::default();
    if n < 3 {
        return r;
    }
    let m = n - 1;
    let prev = |i: usize, j: usize| if i <= j && j <= m { count_ij_normal(m, i, j) } else { 0 };
    for j in 0..=n {
        for i in 0..=j {
            let lhs = count_ij_normal(n, i, j);
            let mut rhs = prev(i, j);
            if i > 0 {
                rhs += prev(i - 1, j);
            }
            if j > 0 {
                rhs += prev(i, j - 1);
            }
            if i > 0 && j > 0 {
                rhs += prev(i - 1, j - 1);
            }
            r.expect(lhs == rhs, || format!("D_{{{n};{i},{j}}} = {lhs} but the recursion gives {rhs}"));
            if i >= 1 && j < n {
                let f = dim_formula(n, i, j) as usize;
                r.expect(lhs == f, || format!("count {lhs} ≠ formula {f} at ({i},{j})"));
            }
        }
    }
    r
}

fn add_suite(report: &mut RunReport, cache: &FlagCache, suite: Suite, opts: &Options) {
    let n = cache.n();
    match suite {
        Suite::All => {
            for s in Suite::EACH {
                add_suite(report, cache, s, opts);
            }
        }
        Suite::Relations => {
            for i in 1..n {
                report.run(&format!("relations V^{i}"), || Ok(verify_relations(n, &[i])?.into()));
            }
            for (i, j) in level_pairs(n) {
                report.run(&format!("relations V^{i}⊗V^{j}"), || Ok(verify_relations(n, &[i, j])?.into()));
            }
            if n <= 3 {
                for (i, j, k) in triples(n) {
                    report.run(&format!("coassociativity V^{i}⊗V^{j}⊗V^{k}"), || {
                        Ok(verify_coassociativity(n, [i, j, k])?.into())
                    });
                }
            }
        }
        Suite::Ijinv => {
            for (i, j) in level_pairs(n) {
                report.run(&format!("span V^{i}{j}"), || {
                    let span = cache.span(i, j)?;
                    let mut r = CheckReport::default();
                    r.expect(span.dim() as u64 == dim_formula(n, i, j), || "dimension mismatch".into());
                    r.stats.insert("dim".into(), span.dim());
                    Ok(r)
                });
                report.run(&format!("closure V^{i}{j}"), || check_closure(cache, i, j));
                report.run(&format!("K eigenvalues V^{i}{j}"), || check_k_eigenvalues(cache, i, j));
            }
        }
        Suite::Tables => {
            for (i, j) in level_pairs(n) {
                report.run(&format!("case tables ({i},{j})"), || verify_case_tables(n, i, j));
            }
        }
        Suite::Intertwiner => {
            for (i, j) in level_pairs(n) {
                report.run(&format!("intertwiner R^{j}{i}"), || verify_intertwiner(cache, i, j));
            }
        }
        Suite::Braid => {
            for (i, j, k) in triples(n) {
                report.run(&format!("W^{i}{j}{k}"), || check_w_submodule(cache, i, j, k));
            }
            for (i, j, k) in triples(n) {
                report.run(&format!("braid ({i},{j},{k})"), || verify_braid(cache, i, j, k));
            }
        }
        Suite::Spanned => {
            for (i, j) in level_pairs(n) {
                report.run(&format!("spanned V^{i}{j}"), || {
                    check_spanned(cache, i, j, opts.samples, opts.seed, &opts.q)
                });
            }
        }
        Suite::Gluing => report.run("gluing", || Ok(check_gluing(n))),
        Suite::Normalform => {
            for (i, j) in level_pairs(n) {
                report.run(&format!("normal forms ({i},{j})"), || verify_normal_forms(n, i, j));
            }
            report.run("D recursion", || Ok(check_recursion(n)));
        }
    }
}

/// Runs one suite (or all of them) for `n`.
pub fn verify(n: usize, suite: Suite, opts: &Options) -> Result<RunReport> {
    let cache = FlagCache::new(n)?;
    let mut params = opts.parameters(n);
    params.insert("suite".into(), suite.name().into());
    let mut report = RunReport::new("verify", params);
    add_suite(&mut report, &cache, suite, opts);
    Ok(report)
}

/// The dimension table as a single check.
pub fn dims_check(n: usize) -> Result<CheckReport> {
    let mut r = CheckReport::default();
    for row in dims(n)? {
        r.expect(row.matches, || {
            format!(
                "({},{}): D = {}, {} cells, rank {}",
                row.i, row.j, row.formula, row.cells, row.rank
            )
        });
    }
    Ok(r)
}

/// The relation `x⊗y - q·y⊗x` spans the type (I) relations for `n = 2`.
pub fn sl2_check() -> Result<CheckReport> {
    let cache = FlagCache::new(2)?;
    let rels = cache.type_i(1, 1)?;
    let mut r = CheckReport::default();
    r.expect(rels.len() == 1, || format!("{} type (I) relations instead of 1", rels.len()));
    if let Some(xi) = rels.first() {
        let s = format_sl2_relation(xi);
        r.expect(s == "x⊗y - q·y⊗x", || format!("relation reads {s}"));
    }
    Ok(r)
}

/// Every suite, the dimension table, the `n = 3` ratio check and, for
/// `n = 2`, the recovered relation.
pub fn full_report(n: usize, opts: &Options) -> Result<RunReport> {
    let cache = FlagCache::new(n)?;
    let mut report = RunReport::new("report", opts.parameters(n));
    report.run("dimensions", || dims_check(n));
    add_suite(&mut report, &cache, Suite::All, opts);
    report.run("component ratios (n=3)", || Ok(check_component_ratios(&opts.q)));
    if n == 2 {
        report.run("sl2 relation", sl2_check);
    }
    Ok(report)
}
