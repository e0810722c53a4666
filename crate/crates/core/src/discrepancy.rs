//! The discrepancy `δ(X)` of `X = V/(Z/p)` and the classification it drives.
//!
//! For `D_V >= p - 1` the value is computed twice, as
//! `d - 1 - l - max_s {s - sht_V(s)}` and as
//! `D_V - 1 - max_s {sht_V(p - s) + s}`, and the two must agree.
//! [`delta_oracle`] recomputes it a third way from the strata dimensions
//! `ν(M_j)` without using the residue profile.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::rep::{Invariants, Representation};
use crate::shift::{nu_stratum, shift_profile, ShiftProfile};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaValue {
    Finite(i128),
    NegativeInfinity,
    /// `D_V <= 1`: the quotient is again an affine space.
    Smooth,
}

impl DeltaValue {
    pub fn finite(self) -> Option<i128> {
        match self {
            DeltaValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for DeltaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaValue::Finite(v) => v.fmt(f),
            DeltaValue::NegativeInfinity => f.write_str("-inf"),
            DeltaValue::Smooth => f.write_str("smooth"),
        }
    }
}

impl Serialize for DeltaValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DeltaValue::Finite(v) => serializer.serialize_i128(*v),
            other => serializer.collect_str(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingularityClass {
    Smooth,
    Terminal,
    CanonicalStrict,
    LogCanonicalStrict,
    NotLogCanonical,
}

impl SingularityClass {
    pub const ALL: [SingularityClass; 5] = [
        SingularityClass::Smooth,
        SingularityClass::Terminal,
        SingularityClass::CanonicalStrict,
        SingularityClass::LogCanonicalStrict,
        SingularityClass::NotLogCanonical,
    ];

    pub fn from_delta(delta: DeltaValue) -> Result<Self> {
        Ok(match delta {
            DeltaValue::Smooth => SingularityClass::Smooth,
            DeltaValue::NegativeInfinity => SingularityClass::NotLogCanonical,
            DeltaValue::Finite(v) if v > 0 => SingularityClass::Terminal,
            DeltaValue::Finite(0) => SingularityClass::CanonicalStrict,
            DeltaValue::Finite(-1) => SingularityClass::LogCanonicalStrict,
            DeltaValue::Finite(v) => {
                return Err(Error::Internal(format!("finite discrepancy {v} below -1")));
            }
        })
    }

    /// Classification read off `D_V` alone: terminal iff `D_V > p`, canonical
    /// iff `D_V >= p`, log canonical iff `D_V >= p - 1`.
    pub fn from_thresholds(d_v: i128, p: u64) -> Self {
        let p = p as i128;
        if d_v <= 1 {
            SingularityClass::Smooth
        } else if d_v > p {
            SingularityClass::Terminal
        } else if d_v == p {
            SingularityClass::CanonicalStrict
        } else if d_v == p - 1 {
            SingularityClass::LogCanonicalStrict
        } else {
            SingularityClass::NotLogCanonical
        }
    }

    // The three predicates below are false for `Smooth`, where no
    // discrepancy is defined.

    pub fn is_terminal(self) -> bool {
        self == SingularityClass::Terminal
    }

    pub fn is_canonical(self) -> bool {
        self.is_terminal() || self == SingularityClass::CanonicalStrict
    }

    pub fn is_log_canonical(self) -> bool {
        self.is_canonical() || self == SingularityClass::LogCanonicalStrict
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SingularityClass::Smooth => "smooth",
            SingularityClass::Terminal => "terminal",
            SingularityClass::CanonicalStrict => "canonical-strict",
            SingularityClass::LogCanonicalStrict => "log-canonical-strict",
            SingularityClass::NotLogCanonical => "not-log-canonical",
        }
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for SingularityClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Formats a rational as `num/den`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn serialize_opt_rational<S: Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(r) => serializer.serialize_str(&format_rational(r)),
        None => serializer.serialize_none(),
    }
}

/// `D_V - p <= δ(X)`, and `δ(X) >= 2 D_V / p - 2` when `D_V >= p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub upper: i128,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lower: Option<Rational>,
}

/// Which hypothesis gates the rational lower bound for centre-restricted
/// discrepancies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LowerBoundPolicy {
    /// Lower bound only when `D_V >= p`.
    #[default]
    Proven,
    /// Lower bound whenever `D_V >= p - 1`.
    RemarkLiteral,
}

/// Bounds on the discrepancy of divisors whose centre lies in a closed
/// subset `C` of the singular locus, `dim C <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CenterBounds {
    pub dim_c: u64,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lower: Option<Rational>,
    pub upper: i128,
    /// Set when `D_V = p - 1`: the rational lower bound is not established
    /// there, and if emitted (literal policy) it exceeds `upper`.
    pub lower_hypothesis_gap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub p: u64,
    pub rep: Representation,
    #[serde(flatten)]
    pub invariants: Invariants,
    pub delta: DeltaValue,
    #[serde(rename = "class")]
    pub class: SingularityClass,
    /// Residues `s` attaining `max_s {s - sht_V(s)}`; empty unless `δ` is finite.
    pub maximizers: Vec<u64>,
    pub upper_bound: Option<i128>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lower_bound: Option<Rational>,
}

struct Evaluation {
    delta: DeltaValue,
    maximizers: Vec<u64>,
}

fn evaluate(rep: &Representation, inv: &Invariants) -> Result<Evaluation> {
    let p = rep.p() as i128;
    if inv.d_v <= 1 {
        return Ok(Evaluation { delta: DeltaValue::Smooth, maximizers: Vec::new() });
    }
    if inv.d_v < p - 1 {
        return Ok(Evaluation { delta: DeltaValue::NegativeInfinity, maximizers: Vec::new() });
    }
    let profile = shift_profile(rep)?;
    let (via_jump, maximizers) = delta_from_jumps(&profile, inv)?;
    let via_reflected = delta_from_reflected(&profile, inv)?;
    if via_jump != via_reflected {
        return Err(Error::Internal(format!(
            "discrepancy of {rep} over p = {p}: jump form {via_jump} != reflected form {via_reflected}"
        )));
    }
    Ok(Evaluation { delta: DeltaValue::Finite(via_jump), maximizers })
}

/// `d - 1 - l - max_s {s - sht_V(s)}` with the set of maximising `s`.
fn delta_from_jumps(profile: &ShiftProfile, inv: &Invariants) -> Result<(i128, Vec<u64>)> {
    let best =
        profile.jump_values().iter().copied().max().ok_or_else(|| Error::Internal("empty shift profile".into()))?;
    let maximizers = profile.residues().filter(|&s| profile.jump_at(s) == best).collect();
    let value = arith::sub(arith::sub(inv.codim, 1, "delta")?, best, "delta")?;
    Ok((value, maximizers))
}

/// `D_V - 1 - max_s {sht_V(p - s) + s}`.
fn delta_from_reflected(profile: &ShiftProfile, inv: &Invariants) -> Result<i128> {
    let p = profile.rep().p();
    let mut best: Option<i128> = None;
    for s in profile.residues() {
        let v = arith::add(profile.sht_at(p - s), s as i128, "delta")?;
        best = Some(best.map_or(v, |b| b.max(v)));
    }
    let best = best.ok_or_else(|| Error::Internal("empty shift profile".into()))?;
    arith::sub(arith::sub(inv.d_v, 1, "delta")?, best, "delta")
}

pub fn delta(rep: &Representation) -> Result<DeltaValue> {
    let inv = rep.invariants()?;
    Ok(evaluate(rep, &inv)?.delta)
}

pub fn classify(rep: &Representation) -> Result<SingularityReport> {
    let inv = rep.invariants()?;
    let eval = evaluate(rep, &inv)?;
    let class = SingularityClass::from_delta(eval.delta)?;
    let by_threshold = SingularityClass::from_thresholds(inv.d_v, rep.p());
    if class != by_threshold {
        return Err(Error::Internal(format!(
            "{rep} over p = {}: class {class} from delta {} but {by_threshold} from D_V = {}",
            rep.p(),
            eval.delta,
            inv.d_v
        )));
    }
    let (upper_bound, lower_bound) = if inv.d_v >= 2 {
        let b = bounds(rep)?;
        (Some(b.upper), b.lower)
    } else {
        (None, None)
    };
    Ok(SingularityReport {
        p: rep.p(),
        rep: rep.clone(),
        invariants: inv,
        delta: eval.delta,
        class,
        maximizers: eval.maximizers,
        upper_bound,
        lower_bound,
    })
}

/// `d - 1 - sup_j ν(M_j)` over `j ∈ {0} ∪ {0 < j < (n_max + 1)·p, p ∤ j}`.
///
/// Reports `-∞` as soon as a stratum with `n = 1` beats every stratum with
/// `n = 0`, since `ν(M_{np+s})` is affine in `n` with slope `p - 1 - D_V`.
pub fn delta_oracle(rep: &Representation, n_max: u64) -> Result<DeltaValue> {
    let inv = rep.invariants()?;
    if inv.d_v < 2 {
        return Err(Error::Precondition(format!("delta_oracle needs D_V >= 2, got {}", inv.d_v)));
    }
    if n_max < 1 {
        return Err(Error::Precondition("delta_oracle needs n_max >= 1".into()));
    }
    let p = rep.p();
    let mut best_base = nu_stratum(rep, 0)?;
    for j in 1..p {
        best_base = best_base.max(nu_stratum(rep, j)?);
    }
    let mut best_all = best_base;
    for n in 1..=n_max {
        let start = n.checked_mul(p).ok_or(Error::Overflow("oracle scan"))?;
        for j in (start + 1)..(start + p) {
            let nu = nu_stratum(rep, j)?;
            if n == 1 && nu > best_base {
                return Ok(DeltaValue::NegativeInfinity);
            }
            best_all = best_all.max(nu);
        }
    }
    let value = arith::sub(arith::sub(inv.dim, 1, "oracle")?, best_all, "oracle")?;
    Ok(DeltaValue::Finite(value))
}

pub fn bounds(rep: &Representation) -> Result<Bounds> {
    let inv = rep.invariants()?;
    if inv.d_v < 2 {
        return Err(Error::Precondition(format!("bounds need D_V >= 2, got {}", inv.d_v)));
    }
    let p = rep.p() as i128;
    let upper = arith::sub(inv.d_v, p, "upper bound")?;
    let lower = if inv.d_v >= p { Some(lower_rational(inv.d_v, p)?) } else { None };
    Ok(Bounds { upper, lower })
}

/// `2 D_V / p - 2` as an exact rational.
fn lower_rational(d_v: i128, p: i128) -> Result<Rational> {
    let twice = arith::mul(2, d_v, "lower bound")?;
    let shifted = arith::sub(twice, arith::mul(2, p, "lower bound")?, "lower bound")?;
    Ok(Rational::new(shifted, p))
}

pub fn center_bounds(rep: &Representation, dim_c: u64, policy: LowerBoundPolicy) -> Result<CenterBounds> {
    let inv = rep.invariants()?;
    let p = rep.p() as i128;
    if inv.d_v < 2 || inv.d_v < p - 1 {
        return Err(Error::Precondition(format!(
            "center bounds need D_V >= max(2, p - 1), got D_V = {} with p = {p}",
            inv.d_v
        )));
    }
    if dim_c as i128 > inv.fixed_dim {
        return Err(Error::CenterDimOutOfRange { dim_c, l: inv.fixed_dim as u64 });
    }
    let offset = inv.fixed_dim - dim_c as i128;
    let upper = arith::add(arith::sub(inv.d_v, p, "center bound")?, offset, "center bound")?;
    let gap = inv.d_v == p - 1;
    let emit_lower = match policy {
        LowerBoundPolicy::Proven => inv.d_v >= p,
        LowerBoundPolicy::RemarkLiteral => true,
    };
    let lower = if emit_lower { Some(lower_rational(inv.d_v, p)? + Rational::from_integer(offset)) } else { None };
    Ok(CenterBounds { dim_c, lower, upper, lower_hypothesis_gap: gap })
}
