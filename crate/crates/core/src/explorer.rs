//! Enumeration of all representations of a given dimension, predicate
//! searches over them, and classification tables.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::discrepancy::{classify, DeltaValue, SingularityClass, SingularityReport};
use crate::error::{Error, Result};
use crate::rep::{Prime, Representation};

pub const DEFAULT_MAX_PARTITIONS: u128 = 1_000_000;
pub const MAX_PARTITIONS_ENV: &str = "PSING_MAX_PARTITIONS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorerConfig {
    /// Largest number of partitions allowed in a single `(p, d)` cell.
    pub max_partitions: u128,
}

impl Default for ExplorerConfig {
    fn default() -> Self {
        ExplorerConfig { max_partitions: DEFAULT_MAX_PARTITIONS }
    }
}

impl ExplorerConfig {
    /// Default config, with the cap overridden by `PSING_MAX_PARTITIONS` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_PARTITIONS_ENV) {
            Ok(raw) => {
                let max_partitions = raw.trim().parse::<u128>().map_err(|_| {
                    Error::InvalidQuery(format!("{MAX_PARTITIONS_ENV} must be a non-negative integer, got {raw:?}"))
                })?;
                Ok(ExplorerConfig { max_partitions })
            }
            Err(_) => Ok(ExplorerConfig::default()),
        }
    }
}

/// Number of partitions of `d` with every part at most `max_part`,
/// saturating at `u128::MAX`.
pub fn restricted_partition_count(d: u64, max_part: u64) -> u128 {
    let d = d as usize;
    let mut ways = vec![0u128; d + 1];
    ways[0] = 1;
    for part in 1..=(max_part as usize).min(d) {
        for total in part..=d {
            ways[total] = ways[total].saturating_add(ways[total - part]);
        }
    }
    ways[d]
}

/// Partitions of `d` into parts `<= p`, in reverse-lexicographic order of the
/// non-increasing part list.
#[derive(Debug, Clone)]
pub struct RepIter {
    p: Prime,
    next: Option<Vec<u64>>,
}

pub fn enumerate_reps(p: Prime, d: u64) -> RepIter {
    let next = if d == 0 {
        None
    } else {
        let top = p.get().min(d);
        let mut first = vec![top; (d / top) as usize];
        if !d.is_multiple_of(top) {
            first.push(d % top);
        }
        Some(first)
    };
    RepIter { p, next }
}

impl Iterator for RepIter {
    type Item = Representation;

    fn next(&mut self) -> Option<Representation> {
        let current = self.next.take()?;
        self.next = successor(&current);
        // parts are in [1, p] by construction
        Some(Representation::new(self.p, current).expect("enumerated partition is valid"))
    }
}

fn successor(parts: &[u64]) -> Option<Vec<u64>> {
    let pivot = parts.iter().rposition(|&x| x > 1)?;
    let ones = (parts.len() - pivot - 1) as u64;
    let size = parts[pivot] - 1;
    let mut rest = ones + parts[pivot];
    let mut out = parts[..pivot].to_vec();
    while rest >= size {
        out.push(size);
        rest -= size;
    }
    if rest > 0 {
        out.push(rest);
    }
    Some(out)
}

fn checked_cell(p: Prime, d: u64, cfg: &ExplorerConfig) -> Result<Vec<Representation>> {
    let count = restricted_partition_count(d, p.get());
    if count > cfg.max_partitions {
        return Err(Error::EnumerationCap { p: p.get(), d, count, cap: cfg.max_partitions });
    }
    Ok(enumerate_reps(p, d).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub rep: Representation,
    pub d: i128,
    pub l: i128,
    pub codim: i128,
    #[serde(rename = "D")]
    pub d_v: i128,
    pub delta: DeltaValue,
    pub class: SingularityClass,
    pub cm: bool,
    pub maximizers: Vec<u64>,
}

impl From<SingularityReport> for TableRow {
    fn from(r: SingularityReport) -> Self {
        TableRow {
            p: r.p,
            rep: r.rep,
            d: r.invariants.dim,
            l: r.invariants.fixed_dim,
            codim: r.invariants.codim,
            d_v: r.invariants.d_v,
            delta: r.delta,
            class: r.class,
            cm: r.invariants.cohen_macaulay,
            maximizers: r.maximizers,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    None,
    /// Per prime, keep only the rows at the smallest dimension with a match.
    MinimizeDim,
}

/// Conjunction of atoms; `None` means "no constraint".
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Predicate {
    pub classes: Option<BTreeSet<SingularityClass>>,
    pub cm: Option<bool>,
    pub d_v_min: Option<i128>,
    pub d_v_max: Option<i128>,
    /// Bounds on finite `δ`. `-∞` satisfies a range with no lower end;
    /// `Smooth` satisfies no range.
    pub delta_min: Option<i128>,
    pub delta_max: Option<i128>,
}

impl Predicate {
    pub fn matches(&self, row: &TableRow) -> bool {
        if let Some(classes) = &self.classes {
            if !classes.contains(&row.class) {
                return false;
            }
        }
        if self.cm.is_some_and(|cm| cm != row.cm) {
            return false;
        }
        if self.d_v_min.is_some_and(|m| row.d_v < m) || self.d_v_max.is_some_and(|m| row.d_v > m) {
            return false;
        }
        if self.delta_min.is_none() && self.delta_max.is_none() {
            return true;
        }
        match row.delta {
            DeltaValue::Smooth => false,
            DeltaValue::NegativeInfinity => self.delta_min.is_none(),
            DeltaValue::Finite(v) => self.delta_min.is_none_or(|m| v >= m) && self.delta_max.is_none_or(|m| v <= m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchQuery {
    pub primes: Vec<Prime>,
    pub d_min: u64,
    pub d_max: u64,
    pub predicate: Predicate,
    pub objective: Objective,
}

impl SearchQuery {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::InvalidQuery("at least one prime is required".into()));
        }
        if self.d_min < 1 {
            return Err(Error::InvalidQuery("d_min must be at least 1".into()));
        }
        if self.d_max < self.d_min {
            return Err(Error::InvalidQuery(format!("d_max = {} is below d_min = {}", self.d_max, self.d_min)));
        }
        Ok(())
    }
}

fn sorted_primes(primes: &[Prime]) -> Vec<Prime> {
    let set: BTreeSet<Prime> = primes.iter().copied().collect();
    set.into_iter().collect()
}

fn classify_cell(p: Prime, d: u64, cfg: &ExplorerConfig) -> Result<Vec<TableRow>> {
    checked_cell(p, d, cfg)?.par_iter().map(|rep| classify(rep).map(TableRow::from)).collect()
}

fn search_prime(p: Prime, q: &SearchQuery, cfg: &ExplorerConfig) -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for d in q.d_min..=q.d_max {
        let hits: Vec<TableRow> =
            classify_cell(p, d, cfg)?.into_iter().filter(|row| q.predicate.matches(row)).collect();
        let found = !hits.is_empty();
        out.extend(hits);
        if found && q.objective == Objective::MinimizeDim {
            break;
        }
    }
    Ok(out)
}

/// Rows of every enumerated representation satisfying the predicate, ordered
/// by `p`, then `d`, then canonical part order.
pub fn run_search(q: &SearchQuery, cfg: &ExplorerConfig) -> Result<Vec<TableRow>> {
    q.validate()?;
    let per_prime: Vec<Result<Vec<TableRow>>> =
        sorted_primes(&q.primes).into_par_iter().map(|p| search_prime(p, q, cfg)).collect();
    let mut rows = Vec::new();
    for chunk in per_prime {
        rows.extend(chunk?);
    }
    Ok(rows)
}

pub fn build_table(primes: &[Prime], d_max: u64, cfg: &ExplorerConfig) -> Result<Vec<TableRow>> {
    if d_max < 1 {
        return Err(Error::InvalidQuery("d_max must be at least 1".into()));
    }
    run_search(
        &SearchQuery {
            primes: primes.to_vec(),
            d_min: 1,
            d_max,
            predicate: Predicate::default(),
            objective: Objective::None,
        },
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn parts_of(p: u64, d: u64) -> Vec<Vec<u64>> {
        enumerate_reps(prime(p), d).map(|r| r.parts().collect()).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(parts_of(5, 4), vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(parts_of(2, 6), vec![vec![2, 2, 2], vec![2, 2, 1, 1], vec![2, 1, 1, 1, 1], vec![1; 6]]);
        assert_eq!(parts_of(2, 1), vec![vec![1]]);
        assert!(parts_of(3, 0).is_empty());
    }

    #[test]
    fn count_examples() {
        assert_eq!(restricted_partition_count(4, 5), 5);
        assert_eq!(restricted_partition_count(6, 2), 4);
        assert_eq!(restricted_partition_count(0, 3), 1);
        assert_eq!(restricted_partition_count(100, 100), 190_569_292);
    }

    #[test]
    fn enumeration_is_strictly_decreasing_in_canonical_order() {
        for p in [2, 3, 5, 7] {
            for d in 1..=12 {
                let reps: Vec<_> = enumerate_reps(prime(p), d).collect();
                assert!(reps.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(reps.len() as u128, restricted_partition_count(d, p));
            }
        }
    }

    fn terminal_not_cm() -> Predicate {
        Predicate { classes: Some([SingularityClass::Terminal].into()), cm: Some(false), ..Predicate::default() }
    }

    #[test]
    fn search_examples() {
        let cfg = ExplorerConfig::default();
        let q = SearchQuery {
            primes: vec![prime(5)],
            d_min: 1,
            d_max: 4,
            predicate: terminal_not_cm(),
            objective: Objective::MinimizeDim,
        };
        let rows = run_search(&q, &cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].rep.to_string(), rows[0].d), ("4".to_string(), 4));

        let q = SearchQuery { primes: vec![prime(2)], d_max: 8, ..q };
        let rows = run_search(&q, &cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].rep.to_string(), rows[0].d), ("2^3".to_string(), 6));

        let q = SearchQuery {
            primes: vec![prime(5)],
            d_min: 1,
            d_max: 3,
            predicate: Predicate { classes: Some([SingularityClass::Terminal].into()), ..Predicate::default() },
            objective: Objective::None,
        };
        assert!(run_search(&q, &cfg).unwrap().is_empty());
    }

    #[test]
    fn table_examples() {
        let cfg = ExplorerConfig::default();
        let rows = build_table(&[prime(2)], 2, &cfg).unwrap();
        let reps: Vec<String> = rows.iter().map(|r| r.rep.to_string()).collect();
        assert_eq!(reps, vec!["1", "2", "1^2"]);
        assert!(rows.iter().all(|r| r.class == SingularityClass::Smooth));

        let rows = build_table(&[prime(3)], 3, &cfg).unwrap();
        let row = rows.iter().find(|r| r.rep.to_string() == "3").unwrap();
        assert_eq!((row.delta, row.class, row.cm), (DeltaValue::Finite(0), SingularityClass::CanonicalStrict, true));

        let rows = build_table(&[prime(5)], 4, &cfg).unwrap();
        let row = rows.iter().find(|r| r.rep.to_string() == "4").unwrap();
        assert_eq!((row.delta, row.cm), (DeltaValue::Finite(1), false));
    }

    #[test]
    fn table_is_sorted_by_prime_then_canonical_order() {
        let rows = build_table(&[prime(5), prime(2), prime(3), prime(2)], 5, &ExplorerConfig::default()).unwrap();
        assert!(rows.windows(2).all(|w| w[0].rep < w[1].rep));
        let expected: u128 =
            [2, 3, 5].iter().map(|&p| (1..=5).map(|d| restricted_partition_count(d, p)).sum::<u128>()).sum();
        assert_eq!(rows.len() as u128, expected);
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = ExplorerConfig { max_partitions: 4 };
        let err = build_table(&[prime(5)], 4, &cfg).unwrap_err();
        assert_eq!(err, Error::EnumerationCap { p: 5, d: 4, count: 5, cap: 4 });
    }

    #[test]
    fn invalid_queries() {
        let cfg = ExplorerConfig::default();
        let base = SearchQuery {
            primes: vec![prime(3)],
            d_min: 1,
            d_max: 3,
            predicate: Predicate::default(),
            objective: Objective::None,
        };
        assert!(run_search(&SearchQuery { primes: vec![], ..base.clone() }, &cfg).is_err());
        assert!(run_search(&SearchQuery { d_min: 0, ..base.clone() }, &cfg).is_err());
        assert!(run_search(&SearchQuery { d_min: 4, ..base }, &cfg).is_err());
    }

    #[test]
    fn delta_range_semantics() {
        let rows = build_table(&[prime(5)], 5, &ExplorerConfig::default()).unwrap();
        let upper_only = Predicate { delta_max: Some(0), ..Predicate::default() };
        let both = Predicate { delta_min: Some(-1), delta_max: Some(0), ..Predicate::default() };
        for row in &rows {
            let expect_upper =
                matches!(row.delta, DeltaValue::NegativeInfinity) || row.delta.finite().is_some_and(|v| v <= 0);
            assert_eq!(upper_only.matches(row), expect_upper, "{}", row.rep);
            let expect_both = row.delta.finite().is_some_and(|v| (-1..=0).contains(&v));
            assert_eq!(both.matches(row), expect_both, "{}", row.rep);
        }
    }
}
