//! Linear representations of Z/p in characteristic p.
//!
//! A representation is a prime `p` together with the sizes of its
//! indecomposable summands `V_1, ..., V_p`. Sizes are stored grouped as
//! `(size, multiplicity)` pairs with strictly decreasing sizes, so
//! `V_2^{⊕3} ⊕ V_1^{⊕2}` is `[(2, 3), (1, 2)]` and prints as `2^3,1^2`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if arith::is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    p: Prime,
    groups: Vec<(u64, u64)>,
}

/// Elementary invariants of a representation `V = ⊕ V_{d_λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Invariants {
    /// Total dimension `d = Σ d_λ`.
    #[serde(rename = "d")]
    pub dim: i128,
    /// Dimension `l` of the fixed locus, i.e. the number of summands.
    #[serde(rename = "l")]
    pub fixed_dim: i128,
    /// Codimension `d - l` of the fixed locus.
    pub codim: i128,
    /// `D_V = Σ (d_λ - 1) d_λ / 2`.
    #[serde(rename = "D")]
    pub d_v: i128,
    /// The quotient is Cohen-Macaulay exactly when `codim <= 2`.
    #[serde(rename = "cm")]
    pub cohen_macaulay: bool,
}

impl Representation {
    pub fn new(p: Prime, parts: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::from_groups(p, parts.into_iter().map(|size| (size, 1)))
    }

    /// Builds a representation from `(size, multiplicity)` pairs in any order.
    /// Repeated sizes are merged; zero multiplicities are rejected.
    pub fn from_groups(p: Prime, groups: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut merged: Vec<(u64, u64)> = Vec::new();
        for (size, mult) in groups {
            if size < 1 {
                return Err(Error::PartBelowOne(size));
            }
            if size > p.get() {
                return Err(Error::PartExceedsP { part: size, p: p.get() });
            }
            if mult == 0 {
                continue;
            }
            merged.push((size, mult));
        }
        if merged.is_empty() {
            return Err(Error::EmptyParts);
        }
        merged.sort_unstable_by_key(|g| std::cmp::Reverse(g.0));
        let mut groups: Vec<(u64, u64)> = Vec::with_capacity(merged.len());
        for (size, mult) in merged {
            match groups.last_mut() {
                Some(last) if last.0 == size => {
                    last.1 = last.1.checked_add(mult).ok_or(Error::Overflow("multiplicity"))?;
                }
                _ => groups.push((size, mult)),
            }
        }
        Ok(Representation { p, groups })
    }

    /// Parses the textual form `term ("," term)*` with `term := size ("^" multiplicity)?`.
    pub fn parse(p: u64, text: &str) -> Result<Self> {
        let prime = Prime::new(p)?;
        let groups = parse_terms(text)?;
        Self::from_groups(prime, groups)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn p(&self) -> u64 {
        self.p.get()
    }

    /// `(size, multiplicity)` pairs, sizes strictly decreasing.
    pub fn groups(&self) -> &[(u64, u64)] {
        &self.groups
    }

    /// Part sizes in non-increasing order, with repetition.
    pub fn parts(&self) -> impl Iterator<Item = u64> + '_ {
        self.groups.iter().flat_map(|&(size, mult)| std::iter::repeat_n(size, mult as usize))
    }

    pub fn num_parts(&self) -> u128 {
        self.groups.iter().map(|&(_, m)| m as u128).sum()
    }

    /// The direct sum `self ⊕ other`; both sides must share the same prime.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if self.p != other.p {
            return Err(Error::Precondition(format!(
                "direct sum of representations over p = {} and p = {}",
                self.p, other.p
            )));
        }
        Self::from_groups(self.p, self.groups.iter().chain(&other.groups).copied())
    }

    pub fn invariants(&self) -> Result<Invariants> {
        let mut dim = 0i128;
        let mut fixed_dim = 0i128;
        let mut d_v = 0i128;
        for &(size, mult) in &self.groups {
            let (size, mult) = (size as i128, mult as i128);
            dim = arith::add(dim, arith::mul(size, mult, "dimension")?, "dimension")?;
            fixed_dim = arith::add(fixed_dim, mult, "fixed dimension")?;
            // (size - 1) * size is a product of consecutive integers, hence even.
            let tri = arith::mul(size - 1, size, "D_V")? / 2;
            d_v = arith::add(d_v, arith::mul(tri, mult, "D_V")?, "D_V")?;
        }
        let codim = dim - fixed_dim;
        Ok(Invariants { dim, fixed_dim, codim, d_v, cohen_macaulay: codim <= 2 })
    }
}

/// `parse_representation(p, parts)`: validates and canonicalises a part list.
pub fn parse_representation(p: u64, parts: &[u64]) -> Result<Representation> {
    let prime = Prime::new(p)?;
    Representation::new(prime, parts.iter().copied())
}

fn parse_terms(text: &str) -> Result<Vec<(u64, u64)>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let syntax = |reason: String| Error::Syntax { input: text.to_string(), reason };
    if compact.is_empty() {
        return Err(Error::EmptyParts);
    }
    let number = |s: &str, what: &str| -> Result<u64> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax(format!("expected a decimal {what}, found {s:?}")));
        }
        s.parse::<u64>().map_err(|_| syntax(format!("{what} {s} does not fit in 64 bits")))
    };
    compact
        .split(',')
        .map(|term| {
            let (size, mult) = match term.split_once('^') {
                Some((size, mult)) => (number(size, "size")?, number(mult, "multiplicity")?),
                None => (number(term, "size")?, 1),
            };
            if mult == 0 {
                return Err(syntax("multiplicity must be at least 1".into()));
            }
            Ok((size, mult))
        })
        .collect()
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(size, mult)) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if mult == 1 {
                write!(f, "{size}")?;
            } else {
                write!(f, "{size}^{mult}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Representation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Canonical order: by `p`, then total dimension, then reverse-lexicographic
/// on the non-increasing part list (so `[4]` precedes `[3,1]`).
impl Ord for Representation {
    fn cmp(&self, other: &Self) -> Ordering {
        let dim = |r: &Representation| -> u128 { r.groups.iter().map(|&(s, m)| s as u128 * m as u128).sum() };
        self.p
            .cmp(&other.p)
            .then_with(|| dim(self).cmp(&dim(other)))
            .then_with(|| cmp_parts(&self.groups, &other.groups).reverse())
    }
}

impl PartialOrd for Representation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic comparison of the expanded part lists without expanding them.
fn cmp_parts(a: &[(u64, u64)], b: &[(u64, u64)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    let (mut left_a, mut left_b) = (a.first().map_or(0, |g| g.1), b.first().map_or(0, |g| g.1));
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(&(sa, _)), Some(&(sb, _))) => {
                if sa != sb {
                    return sa.cmp(&sb);
                }
                let step = left_a.min(left_b);
                left_a -= step;
                left_b -= step;
                if left_a == 0 {
                    i += 1;
                    left_a = a.get(i).map_or(0, |g| g.1);
                }
                if left_b == 0 {
                    j += 1;
                    left_b = b.get(j).map_or(0, |g| g.1);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rep(p: u64, parts: &[u64]) -> Representation {
        parse_representation(p, parts).unwrap()
    }

    #[test]
    fn validation_errors() {
        assert_eq!(rep(5, &[4]).parts().collect::<Vec<_>>(), vec![4]);
        assert_eq!(parse_representation(5, &[6]), Err(Error::PartExceedsP { part: 6, p: 5 }));
        assert_eq!(parse_representation(4, &[2]), Err(Error::NotPrime(4)));
        assert_eq!(parse_representation(1, &[1]), Err(Error::NotPrime(1)));
        assert_eq!(parse_representation(5, &[]), Err(Error::EmptyParts));
        assert_eq!(parse_representation(5, &[0]), Err(Error::PartBelowOne(0)));
    }

    #[test]
    fn indecomposable_table() {
        let d: Vec<i128> = (1..=5).map(|n| rep(5, &[n]).invariants().unwrap().d_v).collect();
        assert_eq!(d, vec![0, 1, 3, 6, 10]);
    }

    #[test]
    fn invariants_examples() {
        let inv = rep(5, &[4]).invariants().unwrap();
        assert_eq!((inv.dim, inv.fixed_dim, inv.codim, inv.d_v, inv.cohen_macaulay), (4, 1, 3, 6, false));
        let inv = rep(2, &[2, 2]).invariants().unwrap();
        assert_eq!((inv.dim, inv.fixed_dim, inv.codim, inv.d_v, inv.cohen_macaulay), (4, 2, 2, 2, true));
    }

    #[test]
    fn small_d_characterisations() {
        assert_eq!(rep(7, &[1, 1, 1]).invariants().unwrap().d_v, 0);
        assert_eq!(rep(7, &[2, 1, 1]).invariants().unwrap().d_v, 1);
        assert_eq!(rep(7, &[2, 2]).invariants().unwrap().d_v, 2);
    }

    #[test]
    fn text_grammar() {
        let r = Representation::parse(2, " 2^3 , 1^2 ").unwrap();
        assert_eq!(r.parts().collect::<Vec<_>>(), vec![2, 2, 2, 1, 1]);
        assert_eq!(r.to_string(), "2^3,1^2");
        assert_eq!(Representation::parse(5, "1,4,1").unwrap().to_string(), "4,1^2");
        assert_eq!(Representation::parse(5, "2,2^2").unwrap().to_string(), "2^3");
        assert!(matches!(Representation::parse(5, "2^0"), Err(Error::Syntax { .. })));
        assert!(matches!(Representation::parse(5, "2,,1"), Err(Error::Syntax { .. })));
        assert!(matches!(Representation::parse(5, "a"), Err(Error::Syntax { .. })));
        assert!(matches!(Representation::parse(5, "-1"), Err(Error::Syntax { .. })));
        assert_eq!(Representation::parse(5, "  "), Err(Error::EmptyParts));
        assert_eq!(Representation::parse(5, "7"), Err(Error::PartExceedsP { part: 7, p: 5 }));
    }

    #[test]
    fn huge_multiplicity_stays_grouped() {
        let r = Representation::parse(3, "3^1000000000000").unwrap();
        let inv = r.invariants().unwrap();
        assert_eq!(inv.d_v, 3_000_000_000_000);
        assert_eq!(inv.fixed_dim, 1_000_000_000_000);
    }

    #[test]
    fn overflow_is_reported() {
        let p = 18_446_744_073_709_551_557;
        let r = Representation::parse(p, &format!("{p}^{}", u64::MAX)).unwrap();
        assert!(matches!(r.invariants(), Err(Error::Overflow(_))));
    }

    #[test]
    fn canonical_order() {
        let order = [rep(5, &[4]), rep(5, &[3, 1]), rep(5, &[2, 2]), rep(5, &[2, 1, 1]), rep(5, &[1, 1, 1, 1])];
        for w in order.windows(2) {
            assert!(w[0] < w[1], "{} < {}", w[0], w[1]);
        }
        assert!(rep(5, &[5]) > rep(5, &[1, 1, 1, 1]));
        assert!(rep(2, &[2, 2, 2]) < rep(3, &[1]));
    }

    fn arb_rep(p: u64) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(1..=p, 1..8)
    }

    proptest! {
        #[test]
        fn d_is_additive((a, b) in (arb_rep(7), arb_rep(7))) {
            let ra = rep(7, &a);
            let rb = rep(7, &b);
            let sum = ra.direct_sum(&rb).unwrap();
            prop_assert_eq!(
                sum.invariants().unwrap().d_v,
                ra.invariants().unwrap().d_v + rb.invariants().unwrap().d_v
            );
        }

        #[test]
        fn permutation_invariant(mut parts in arb_rep(11), seed in any::<u64>()) {
            let a = rep(11, &parts);
            let n = parts.len();
            parts.rotate_left((seed as usize) % n);
            parts.reverse();
            let b = rep(11, &parts);
            prop_assert_eq!(a.invariants().unwrap(), b.invariants().unwrap());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn d_matches_naive_double_loop(parts in arb_rep(13)) {
            let r = rep(13, &parts);
            let naive: i128 = parts.iter().map(|&d| (1..d).map(|i| i as i128).sum::<i128>()).sum();
            prop_assert_eq!(r.invariants().unwrap().d_v, naive);
        }

        #[test]
        fn display_round_trips(parts in arb_rep(5)) {
            let r = rep(5, &parts);
            prop_assert_eq!(Representation::parse(5, &r.to_string()).unwrap(), r);
        }

        #[test]
        fn order_matches_expanded_parts(a in arb_rep(5), b in arb_rep(5)) {
            let (ra, rb) = (rep(5, &a), rep(5, &b));
            let ea: Vec<u64> = ra.parts().collect();
            let eb: Vec<u64> = rb.parts().collect();
            let expected = ea.iter().sum::<u64>().cmp(&eb.iter().sum::<u64>())
                .then_with(|| ea.cmp(&eb).reverse());
            prop_assert_eq!(ra.cmp(&rb), expected);
        }
    }
}
