//! Exhaustive self-check over every representation in a `(primes, d_max)`
//! range: the shift-number identities, agreement of the independent
//! discrepancy computations, the bound sandwich and the threshold
//! classification.

use rayon::prelude::*;
use serde::Serialize;

use crate::discrepancy::{bounds, classify, delta_oracle, DeltaValue, Rational, SingularityClass};
use crate::error::{Error, Result};
use crate::explorer::{enumerate_reps, restricted_partition_count, ExplorerConfig};
use crate::rep::{Prime, Representation};
use crate::shift::{check_lemma_sht, check_lemma_upper, nu_stratum, sht};

/// Property names, in reporting order.
pub const PROPERTIES: [&str; 9] = [
    "shift-reflection-identity",
    "shift-upper-bound",
    "shift-periodicity",
    "nu-two-forms",
    "delta-two-forms",
    "delta-oracle-agreement",
    "bound-sandwich",
    "class-thresholds",
    "canonical-when-D-ge-p",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub property: &'static str,
    pub instances: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub property: &'static str,
    pub p: u64,
    pub rep: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub reps_checked: u64,
    pub properties: Vec<PropertyTally>,
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

type Tally = [u64; PROPERTIES.len()];

struct Checker<'a> {
    rep: &'a Representation,
    tally: Tally,
}

impl<'a> Checker<'a> {
    /// Records one instance of property `idx`. `Ok(Err(_))` is a counterexample;
    /// internal-consistency errors from the library count as counterexamples too.
    fn check(
        &mut self,
        idx: usize,
        outcome: Result<bool>,
        detail: impl FnOnce() -> String,
    ) -> Result<std::result::Result<(), Counterexample>> {
        let fail = |detail: String| Counterexample {
            property: PROPERTIES[idx],
            p: self.rep.p(),
            rep: self.rep.to_string(),
            detail,
        };
        match outcome {
            Ok(true) => {
                self.tally[idx] += 1;
                Ok(Ok(()))
            }
            Ok(false) => Ok(Err(fail(detail()))),
            Err(Error::Internal(msg)) => Ok(Err(fail(msg))),
            Err(e) => Err(e),
        }
    }
}

macro_rules! check {
    ($checker:expr, $idx:expr, $outcome:expr, $($fmt:tt)+) => {
        if let Err(cx) = $checker.check($idx, $outcome, || format!($($fmt)+))? {
            return Ok(Err(cx));
        }
    };
}

fn check_rep(rep: &Representation, n_max: u64) -> Result<std::result::Result<Tally, Counterexample>> {
    let mut c = Checker { rep, tally: [0; PROPERTIES.len()] };
    let inv = rep.invariants()?;
    let p = rep.p();
    let pi = p as i128;

    for s in 1..p {
        check!(c, 0, check_lemma_sht(rep, s), "reflection identity fails at s = {s}");
        check!(c, 1, check_lemma_upper(rep, s), "p*sht(s) > (s-1)*D_V at s = {s}");
        for n in 1..=n_max {
            let outcome = (|| {
                let lhs = sht(rep, n * p + s)?;
                Ok(lhs == n as i128 * inv.d_v + sht(rep, s)?)
            })();
            check!(c, 2, outcome, "sht({}) != {n}*D_V + sht({s})", n * p + s);
        }
    }
    for j in (1..=3 * p).filter(|j| j % p != 0) {
        check!(c, 3, nu_stratum(rep, j).map(|_| true), "nu_stratum failed at j = {j}");
    }

    if inv.d_v < 2 {
        return Ok(Ok(c.tally));
    }

    // classify() evaluates both closed forms and cross-checks the thresholds;
    // an internal error from it is a counterexample for both properties.
    let report = match classify(rep) {
        Ok(r) => r,
        Err(Error::Internal(msg)) => {
            let property = if msg.contains("class") { PROPERTIES[7] } else { PROPERTIES[4] };
            return Ok(Err(Counterexample { property, p, rep: rep.to_string(), detail: msg }));
        }
        Err(e) => return Err(e),
    };
    if inv.d_v >= pi - 1 {
        check!(c, 4, Ok(report.delta.finite().is_some()), "delta should be finite, got {}", report.delta);
    }
    for n in 1..=n_max {
        let oracle = delta_oracle(rep, n);
        let outcome = oracle.clone().map(|v| v == report.delta);
        check!(c, 5, outcome, "oracle(n_max = {n}) = {:?}, delta = {}", oracle, report.delta);
    }
    if let DeltaValue::Finite(v) = report.delta {
        let b = bounds(rep)?;
        let ok = v <= b.upper && b.lower.is_none_or(|lo| Rational::from_integer(v) >= lo);
        check!(c, 6, Ok(ok), "delta {v} outside [{:?}, {}]", b.lower, b.upper);
    }
    let by_delta = SingularityClass::from_delta(report.delta);
    let by_threshold = SingularityClass::from_thresholds(inv.d_v, p);
    let outcome = by_delta.clone().map(|k| k == by_threshold);
    check!(c, 7, outcome, "class {:?} from delta, {by_threshold} from D_V", by_delta);
    if inv.d_v >= pi {
        check!(c, 8, Ok(report.delta.finite().is_some_and(|v| v >= 0)), "delta = {}", report.delta);
    }
    Ok(Ok(c.tally))
}

/// Runs every property over all representations of dimension `1..=d_max`
/// for each prime. Stops at the first counterexample in canonical order.
pub fn verify_sweep(primes: &[Prime], d_max: u64, n_max: u64, cfg: &ExplorerConfig) -> Result<VerifyReport> {
    if primes.is_empty() {
        return Err(Error::InvalidQuery("at least one prime is required".into()));
    }
    if n_max < 1 {
        return Err(Error::InvalidQuery("n_max must be at least 1".into()));
    }
    let mut primes = primes.to_vec();
    primes.sort();
    primes.dedup();

    let mut totals: Tally = [0; PROPERTIES.len()];
    let mut reps_checked = 0u64;
    for &p in &primes {
        for d in 1..=d_max {
            let count = restricted_partition_count(d, p.get());
            if count > cfg.max_partitions {
                return Err(Error::EnumerationCap { p: p.get(), d, count, cap: cfg.max_partitions });
            }
            let reps: Vec<Representation> = enumerate_reps(p, d).collect();
            let outcomes: Vec<_> = reps.par_iter().map(|r| check_rep(r, n_max)).collect();
            for outcome in outcomes {
                match outcome? {
                    Ok(tally) => {
                        reps_checked += 1;
                        for (total, t) in totals.iter_mut().zip(tally) {
                            *total += t;
                        }
                    }
                    Err(cx) => {
                        return Ok(VerifyReport {
                            reps_checked,
                            properties: tallies(&totals),
                            counterexample: Some(cx),
                        });
                    }
                }
            }
        }
    }
    Ok(VerifyReport { reps_checked, properties: tallies(&totals), counterexample: None })
}

fn tallies(totals: &Tally) -> Vec<PropertyTally> {
    PROPERTIES.iter().zip(totals).map(|(&property, &instances)| PropertyTally { property, instances }).collect()
}
