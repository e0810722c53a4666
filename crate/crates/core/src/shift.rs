//! Shift numbers `sht_V(j) = Σ_λ Σ_{i=1}^{d_λ-1} ⌊ij/p⌋` and the strata
//! dimensions built from them.

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::rep::Representation;

/// Largest `p` for which [`shift_profile`] will materialise all `p - 1` entries.
pub const DEFAULT_PROFILE_CAP: u64 = 10_000_000;

/// `Σ_{i=1}^{m} ⌊i·a/p⌋`, computed with the Euclidean-like reduction in
/// `O(log max(a, p))` steps.
pub fn floor_sum(m: u128, a: u128, p: u128) -> Result<u128> {
    if p == 0 {
        return Err(Error::Precondition("floor_sum needs p >= 1".into()));
    }
    // Σ_{i=1}^{m} ⌊ia/p⌋ = Σ_{i=0}^{m-1} ⌊(a·i + a)/p⌋
    floor_sum_affine(m, a, a, p)
}

/// `Σ_{i=0}^{n-1} ⌊(slope·i + offset)/modulus⌋`.
fn floor_sum_affine(mut n: u128, mut slope: u128, mut offset: u128, mut modulus: u128) -> Result<u128> {
    const WHAT: &str = "floor_sum";
    let ovf = || Error::Overflow(WHAT);
    let mut acc: u128 = 0;
    if n == 0 {
        return Ok(0);
    }
    loop {
        if slope >= modulus {
            // n(n-1)/2 without overflowing the intermediate product
            let tri = if n.is_multiple_of(2) { (n / 2).checked_mul(n - 1) } else { n.checked_mul((n - 1) / 2) }
                .ok_or_else(ovf)?;
            let term = tri.checked_mul(slope / modulus).ok_or_else(ovf)?;
            acc = acc.checked_add(term).ok_or_else(ovf)?;
            slope %= modulus;
        }
        if offset >= modulus {
            let term = n.checked_mul(offset / modulus).ok_or_else(ovf)?;
            acc = acc.checked_add(term).ok_or_else(ovf)?;
            offset %= modulus;
        }
        let top = slope.checked_mul(n).and_then(|v| v.checked_add(offset)).ok_or_else(ovf)?;
        if top < modulus {
            return Ok(acc);
        }
        n = top / modulus;
        offset = top % modulus;
        std::mem::swap(&mut slope, &mut modulus);
    }
}

/// A jump `j = n·p + s` with `p ∤ j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JumpIndex {
    pub j: u64,
    pub n: u64,
    pub s: u64,
}

impl JumpIndex {
    pub fn new(j: u64, p: u64) -> Result<Self> {
        if j.is_multiple_of(p) {
            return Err(Error::DivisibleJump { j, p });
        }
        Ok(JumpIndex { j, n: j / p, s: j % p })
    }
}

/// `sht_V(j)` for `p ∤ j`.
pub fn sht(rep: &Representation, j: u64) -> Result<i128> {
    let p = rep.p();
    JumpIndex::new(j, p)?;
    sht_unchecked(rep, j)
}

fn sht_unchecked(rep: &Representation, j: u64) -> Result<i128> {
    let p = rep.p() as u128;
    rep.groups().iter().try_fold(0i128, |acc, &(size, mult)| {
        let inner = floor_sum(size as u128 - 1, j as u128, p)?;
        let part = arith::mul(arith::to_i128(inner, "sht")?, mult as i128, "sht")?;
        arith::add(acc, part, "sht")
    })
}

/// `sht_V(s)` and `s - sht_V(s)` for every residue `s = 1..p-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftProfile {
    rep: Representation,
    sht: Vec<i128>,
    jump: Vec<i128>,
}

impl ShiftProfile {
    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    /// Entries for `s = 1..p-1`; index 0 holds `s = 1`.
    pub fn sht_values(&self) -> &[i128] {
        &self.sht
    }

    pub fn jump_values(&self) -> &[i128] {
        &self.jump
    }

    /// `sht_V(s)` for `1 <= s <= p - 1`.
    pub fn sht_at(&self, s: u64) -> i128 {
        self.sht[s as usize - 1]
    }

    pub fn jump_at(&self, s: u64) -> i128 {
        self.jump[s as usize - 1]
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> {
        1..self.rep.p()
    }
}

pub fn shift_profile(rep: &Representation) -> Result<ShiftProfile> {
    shift_profile_with_cap(rep, DEFAULT_PROFILE_CAP)
}

pub fn shift_profile_with_cap(rep: &Representation, cap: u64) -> Result<ShiftProfile> {
    let p = rep.p();
    if p > cap {
        return Err(Error::PrimeTooLarge { p, cap });
    }
    let sht = (1..p).map(|s| sht_unchecked(rep, s)).collect::<Result<Vec<_>>>()?;
    let jump = sht.iter().zip(1..p).map(|(&v, s)| arith::sub(s as i128, v, "jump")).collect::<Result<Vec<_>>>()?;
    Ok(ShiftProfile { rep: rep.clone(), sht, jump })
}

/// Dimension `ν(M_j)` of the stratum of arcs with ramification jump `j`.
///
/// `j = 0` gives `l`. For `p ∤ j` the value is taken both from the integral
/// exponent `l + j - 1 - ⌊j/p⌋ - sht_V(j)` (plus one for the `L - 1` factor)
/// and from the reduced form `l + (p - 1 - D_V)·n + s - sht_V(s)`; a mismatch
/// is reported as an internal error.
pub fn nu_stratum(rep: &Representation, j: u64) -> Result<i128> {
    let inv = rep.invariants()?;
    if j == 0 {
        return Ok(inv.fixed_dim);
    }
    let idx = JumpIndex::new(j, rep.p())?;
    let p = rep.p() as i128;
    let what = "nu";

    let exponent = arith::sub(
        arith::sub(arith::add(inv.fixed_dim, j as i128 - 1, what)?, idx.n as i128, what)?,
        sht_unchecked(rep, j)?,
        what,
    )?;
    let from_exponent = arith::add(exponent, 1, what)?;

    let slope = arith::sub(p - 1, inv.d_v, what)?;
    let from_residue = arith::sub(
        arith::add(arith::add(inv.fixed_dim, arith::mul(slope, idx.n as i128, what)?, what)?, idx.s as i128, what)?,
        sht_unchecked(rep, idx.s)?,
        what,
    )?;

    if from_exponent != from_residue {
        return Err(Error::Internal(format!(
            "nu({rep}, j = {j}) over p = {p}: exponent form {from_exponent} != residue form {from_residue}"
        )));
    }
    Ok(from_exponent)
}

fn check_residue(rep: &Representation, s: u64) -> Result<()> {
    if s == 0 || s >= rep.p() {
        return Err(Error::ResidueOutOfRange { s, p: rep.p() });
    }
    Ok(())
}

/// Whether `s - sht_V(s) = sht_V(p - s) + s + d - l - D_V`.
pub fn check_lemma_sht(rep: &Representation, s: u64) -> Result<bool> {
    check_residue(rep, s)?;
    let inv = rep.invariants()?;
    let what = "shift identity";
    let lhs = arith::sub(s as i128, sht_unchecked(rep, s)?, what)?;
    let rhs = arith::sub(
        arith::add(arith::add(sht_unchecked(rep, rep.p() - s)?, s as i128, what)?, inv.codim, what)?,
        inv.d_v,
        what,
    )?;
    Ok(lhs == rhs)
}

/// Whether `p·sht_V(s) <= (s - 1)·D_V`.
pub fn check_lemma_upper(rep: &Representation, s: u64) -> Result<bool> {
    check_residue(rep, s)?;
    let inv = rep.invariants()?;
    let what = "shift upper bound";
    let lhs = arith::mul(rep.p() as i128, sht_unchecked(rep, s)?, what)?;
    let rhs = arith::mul(s as i128 - 1, inv.d_v, what)?;
    Ok(lhs <= rhs)
}
