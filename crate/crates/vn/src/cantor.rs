//! Exact arithmetic on the n-ary Cantor set `K_n`.
//!
//! Points of `K_n` are infinite words over `{0, .., n-1}`; the points we can
//! name exactly are the eventually periodic ones, `u v v v ...` for finite
//! words `u`, `v`. Clopen subsets are finite unions of elementary intervals
//! `K_a` (all infinite words extending the finite address `a`) and are kept
//! in a canonical antichain form, so set equality is structural equality.
//!
//! The "length" of `K_a` is `n^(-depth(a))`. The standard embedding of `K_n`
//! in `[0,1]` leaves gaps between intervals, so several inequivalent length
//! conventions exist; everything downstream only compares lengths against
//! thresholds of the form `n^(-k)`, which is insensitive to the choice.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest supported arity. Addresses print as digit strings, so digits must
/// stay single characters.
pub const MAX_ARITY: u8 = 9;

/// Depth bound for metric neighborhoods (`n^depth` must fit in a u128 anyway;
/// in practice depths stay tiny).
pub const MAX_DEPTH: usize = 96;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CantorError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(u8, u8),
    #[error("digit {digit} out of range for arity {arity}")]
    DigitOutOfRange { digit: u8, arity: u8 },
    #[error("arity must be between 2 and {MAX_ARITY}, got {0}")]
    BadArity(u8),
    #[error("epsilon must satisfy 0 < epsilon <= 1")]
    BadEpsilon,
    #[error("the period of a point must be nonempty")]
    EmptyPeriod,
    #[error("neighborhood depth exceeds the supported maximum")]
    DepthOverflow,
}

fn check_arity(a: u8, b: u8) -> Result<(), CantorError> {
    if a == b {
        Ok(())
    } else {
        Err(CantorError::ArityMismatch(a, b))
    }
}

/// A finite word over `{0, .., n-1}`, naming the elementary interval `K_a`.
///
/// The empty address names the whole of `K_n`. The derived `Ord` is
/// lexicographic on digits, under which a prefix sorts before its extensions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Address {
    arity: u8,
    digits: Vec<u8>,
}

impl Address {
    pub fn new(arity: u8, digits: Vec<u8>) -> Result<Self, CantorError> {
        if !(2..=MAX_ARITY).contains(&arity) {
            return Err(CantorError::BadArity(arity));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= arity) {
            return Err(CantorError::DigitOutOfRange { digit: d, arity });
        }
        Ok(Address { arity, digits })
    }

    pub fn root(arity: u8) -> Self {
        Address {
            arity,
            digits: Vec::new(),
        }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn is_root(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        self.arity == other.arity && other.digits.starts_with(&self.digits)
    }

    pub fn is_strict_prefix_of(&self, other: &Address) -> bool {
        self.is_prefix_of(other) && self.depth() < other.depth()
    }

    pub fn child(&self, digit: u8) -> Address {
        debug_assert!(digit < self.arity);
        let mut digits = self.digits.clone();
        digits.push(digit);
        Address {
            arity: self.arity,
            digits,
        }
    }

    pub fn concat(&self, suffix: &[u8]) -> Address {
        debug_assert!(suffix.iter().all(|&d| d < self.arity));
        let mut digits = self.digits.clone();
        digits.extend_from_slice(suffix);
        Address {
            arity: self.arity,
            digits,
        }
    }

    /// Parent together with the digit this address hangs off it by.
    pub fn parent(&self) -> Option<(Address, u8)> {
        let (&last, rest) = self.digits.split_last()?;
        Some((
            Address {
                arity: self.arity,
                digits: rest.to_vec(),
            },
            last,
        ))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "e");
        }
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address({self})")
    }
}

/// An eventually periodic point `preperiod . period^infinity` of `K_n`,
/// stored in canonical form: the period is primitive and the preperiod is as
/// short as possible. Two canonical forms are equal iff they name the same
/// point, so derived equality is point equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CantorPoint {
    arity: u8,
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl CantorPoint {
    pub fn new(arity: u8, preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self, CantorError> {
        if !(2..=MAX_ARITY).contains(&arity) {
            return Err(CantorError::BadArity(arity));
        }
        if period.is_empty() {
            return Err(CantorError::EmptyPeriod);
        }
        for &d in preperiod.iter().chain(period.iter()) {
            if d >= arity {
                return Err(CantorError::DigitOutOfRange { digit: d, arity });
            }
        }
        let mut p = CantorPoint {
            arity,
            preperiod,
            period,
        };
        p.canonicalize();
        Ok(p)
    }

    /// The constant point `d^infinity`.
    pub fn constant(arity: u8, digit: u8) -> Result<Self, CantorError> {
        CantorPoint::new(arity, Vec::new(), vec![digit])
    }

    fn canonicalize(&mut self) {
        // Primitive period: shortest d | len with period = block^(len/d).
        let len = self.period.len();
        for d in 1..len {
            if len.is_multiple_of(d) && self.period.chunks(d).all(|c| c == &self.period[..d]) {
                self.period.truncate(d);
                break;
            }
        }
        // Absorb the preperiod tail into a rotation of the period:
        // u x . (w x)^inf  =  u . (x w)^inf.
        while let (Some(&last), Some(&plast)) = (self.preperiod.last(), self.period.last()) {
            if last != plast {
                break;
            }
            self.preperiod.pop();
            let l = self.period.pop().unwrap();
            self.period.insert(0, l);
        }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// The i-th digit of the infinite expansion.
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Removes the first `k` digits.
    pub fn strip_prefix(&self, k: usize) -> CantorPoint {
        let mut p = if k <= self.preperiod.len() {
            CantorPoint {
                arity: self.arity,
                preperiod: self.preperiod[k..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let shift = (k - self.preperiod.len()) % self.period.len();
            let mut period = self.period[shift..].to_vec();
            period.extend_from_slice(&self.period[..shift]);
            CantorPoint {
                arity: self.arity,
                preperiod: Vec::new(),
                period,
            }
        };
        p.canonicalize();
        p
    }

    /// Prepends finite digits, recanonicalizing.
    pub fn with_prefix(&self, prefix: &[u8]) -> CantorPoint {
        let mut preperiod = prefix.to_vec();
        preperiod.extend_from_slice(&self.preperiod);
        let mut p = CantorPoint {
            arity: self.arity,
            preperiod,
            period: self.period.clone(),
        };
        p.canonicalize();
        p
    }

    /// True iff `a` is a prefix of the infinite expansion.
    pub fn starts_with(&self, a: &Address) -> bool {
        self.arity == a.arity()
            && a.digits()
                .iter()
                .enumerate()
                .all(|(i, &d)| self.digit(i) == d)
    }

    /// The first `k` digits as an address.
    pub fn truncate(&self, k: usize) -> Address {
        Address {
            arity: self.arity,
            digits: (0..k).map(|i| self.digit(i)).collect(),
        }
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.preperiod {
            write!(f, "{d}")?;
        }
        write!(f, "(")?;
        for d in &self.period {
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CantorPoint({self})")
    }
}

/// A clopen subset of `K_n` as a canonical finite antichain of addresses:
/// no member is a prefix of another, and no complete family of n siblings
/// survives unmerged. Canonical forms of equal sets are identical.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClopenSet {
    arity: u8,
    intervals: Vec<Address>,
}

impl ClopenSet {
    pub fn empty(arity: u8) -> Self {
        ClopenSet {
            arity,
            intervals: Vec::new(),
        }
    }

    pub fn whole(arity: u8) -> Self {
        ClopenSet {
            arity,
            intervals: vec![Address::root(arity)],
        }
    }

    /// Canonicalizes an arbitrary list of same-arity addresses.
    pub fn from_intervals(arity: u8, intervals: Vec<Address>) -> Result<Self, CantorError> {
        for a in &intervals {
            check_arity(arity, a.arity())?;
        }
        Ok(ClopenSet {
            arity,
            intervals: canonicalize(arity, intervals),
        })
    }

    pub fn from_interval(a: Address) -> Self {
        ClopenSet {
            arity: a.arity(),
            intervals: vec![a],
        }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn intervals(&self) -> &[Address] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].is_root()
    }

    /// True iff `K_a` is entirely contained in the set.
    pub fn contains_interval(&self, a: &Address) -> bool {
        self.intervals.iter().any(|i| i.is_prefix_of(a))
    }

    pub fn contains_point(&self, p: &CantorPoint) -> bool {
        self.arity == p.arity() && self.intervals.iter().any(|i| p.starts_with(i))
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet, CantorError> {
        check_arity(self.arity, other.arity)?;
        let mut v = self.intervals.clone();
        v.extend(other.intervals.iter().cloned());
        Ok(ClopenSet {
            arity: self.arity,
            intervals: canonicalize(self.arity, v),
        })
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet, CantorError> {
        check_arity(self.arity, other.arity)?;
        let mut v = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if a.is_prefix_of(b) {
                    v.push(b.clone());
                } else if b.is_prefix_of(a) {
                    v.push(a.clone());
                }
            }
        }
        Ok(ClopenSet {
            arity: self.arity,
            intervals: canonicalize(self.arity, v),
        })
    }

    pub fn complement(&self) -> ClopenSet {
        let mut acc = ClopenSet::whole(self.arity);
        for a in &self.intervals {
            let single = ClopenSet {
                arity: self.arity,
                intervals: address_complement(a),
            };
            acc = acc.intersect(&single).expect("same arity");
        }
        acc
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet, CantorError> {
        check_arity(self.arity, other.arity)?;
        self.intersect(&other.complement())
    }

    pub fn is_subset_of(&self, other: &ClopenSet) -> Result<bool, CantorError> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint_from(&self, other: &ClopenSet) -> Result<bool, CantorError> {
        Ok(self.intersect(other)?.is_empty())
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClopenSet({self})")
    }
}

/// The complement of a single elementary interval: one off-path sibling
/// family member for every digit along the address.
fn address_complement(a: &Address) -> Vec<Address> {
    let n = a.arity();
    let mut out = Vec::new();
    for i in 0..a.depth() {
        let prefix = &a.digits()[..i];
        for d in 0..n {
            if d != a.digits()[i] {
                let mut digits = prefix.to_vec();
                digits.push(d);
                out.push(Address { arity: n, digits });
            }
        }
    }
    out
}

/// Canonical antichain form: sort, drop prefix-dominated members, merge
/// complete sibling families, repeat until stable.
fn canonicalize(arity: u8, mut v: Vec<Address>) -> Vec<Address> {
    let n = arity as usize;
    loop {
        v.sort();
        v.dedup();
        let mut antichain: Vec<Address> = Vec::new();
        for a in v {
            if antichain.last().is_some_and(|p| p.is_prefix_of(&a)) {
                continue;
            }
            antichain.push(a);
        }
        let mut merged = false;
        let mut out: Vec<Address> = Vec::with_capacity(antichain.len());
        let mut i = 0;
        while i < antichain.len() {
            if i + n <= antichain.len() && full_sibling_family(&antichain[i..i + n]) {
                out.push(antichain[i].parent().expect("non-root").0);
                merged = true;
                i += n;
            } else {
                out.push(antichain[i].clone());
                i += 1;
            }
        }
        if !merged {
            return out;
        }
        v = out;
    }
}

/// In a sorted antichain the n children of a common parent are consecutive.
fn full_sibling_family(window: &[Address]) -> bool {
    let Some((parent, first_digit)) = window[0].parent() else {
        return false;
    };
    if first_digit != 0 {
        return false;
    }
    window.iter().enumerate().all(|(d, a)| {
        a.parent()
            .is_some_and(|(p, digit)| p == parent && digit as usize == d)
    })
}

/// An exact positive rational `num/den <= 1` used as a metric threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self, CantorError> {
        if num == 0 || den == 0 || num > den {
            return Err(CantorError::BadEpsilon);
        }
        Ok(Epsilon { num, den })
    }

    /// `n^(-k)`.
    pub fn inv_power(arity: u8, k: u32) -> Result<Self, CantorError> {
        let den = (arity as u64)
            .checked_pow(k)
            .ok_or(CantorError::DepthOverflow)?;
        Epsilon::new(1, den)
    }

    pub fn one() -> Self {
        Epsilon { num: 1, den: 1 }
    }

    /// Minimal depth d with `n^(-d) < epsilon`.
    fn min_depth(&self, arity: u8) -> Result<usize, CantorError> {
        let n = arity as u128;
        let num = self.num as u128;
        let den = self.den as u128;
        let mut pw: u128 = 1;
        for d in 0..=MAX_DEPTH {
            if pw * num > den {
                return Ok(d);
            }
            pw = pw.checked_mul(n).ok_or(CantorError::DepthOverflow)?;
        }
        Err(CantorError::DepthOverflow)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The maximal elementary interval `I` with `p` in `I` and `length(I) <
/// epsilon`: the depth-d prefix of `p` for the minimal d with `n^(-d) <
/// epsilon`.
pub fn neighborhood_point(p: &CantorPoint, eps: Epsilon) -> Result<Address, CantorError> {
    let d = eps.min_depth(p.arity())?;
    Ok(p.truncate(d))
}

/// `N_eps(S)`: the canonicalized union of the per-point neighborhoods.
pub fn neighborhood(points: &[CantorPoint], eps: Epsilon, arity: u8) -> Result<ClopenSet, CantorError> {
    let mut v = Vec::with_capacity(points.len());
    for p in points {
        check_arity(arity, p.arity())?;
        v.push(neighborhood_point(p, eps)?);
    }
    ClopenSet::from_intervals(arity, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(arity: u8, s: &str) -> Address {
        let digits = s.bytes().map(|b| b - b'0').collect();
        Address::new(arity, digits).unwrap()
    }

    fn clopen(arity: u8, items: &[&str]) -> ClopenSet {
        ClopenSet::from_intervals(arity, items.iter().map(|s| addr(arity, s)).collect()).unwrap()
    }

    fn point(arity: u8, pre: &str, per: &str) -> CantorPoint {
        CantorPoint::new(
            arity,
            pre.bytes().map(|b| b - b'0').collect(),
            per.bytes().map(|b| b - b'0').collect(),
        )
        .unwrap()
    }

    /// Membership-table oracle: the depth-k intervals contained in the set.
    fn table(s: &ClopenSet, k: usize) -> Vec<Vec<u8>> {
        let n = s.arity();
        let mut out = Vec::new();
        let mut stack = vec![Vec::new()];
        while let Some(digits) = stack.pop() {
            if digits.len() == k {
                let a = Address::new(n, digits.clone()).unwrap();
                if s.contains_interval(&a) {
                    out.push(digits);
                }
                continue;
            }
            for d in 0..n {
                let mut next = digits.clone();
                next.push(d);
                stack.push(next);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn prefix_absorption() {
        assert_eq!(clopen(2, &["0", "01"]), clopen(2, &["0"]));
    }

    #[test]
    fn sibling_merge_to_root() {
        let s = clopen(2, &["0", "10", "11"]);
        assert!(s.is_whole());
    }

    #[test]
    fn derived_normalization() {
        // {00, 01, 11} -> {0, 11}, cross-checked by a depth-2 membership table.
        let s = clopen(2, &["00", "01", "11"]);
        assert_eq!(s, clopen(2, &["0", "11"]));
        assert_eq!(table(&s, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn mixed_arity_rejected() {
        let a = addr(2, "0");
        assert_eq!(
            ClopenSet::from_intervals(3, vec![a]),
            Err(CantorError::ArityMismatch(3, 2))
        );
    }

    #[test]
    fn union_trivial() {
        let u = clopen(2, &["0"]).union(&clopen(2, &["1"])).unwrap();
        assert!(u.is_whole());
    }

    #[test]
    fn intersect_trivial() {
        let i = clopen(2, &["0"]).intersect(&clopen(2, &["01"])).unwrap();
        assert_eq!(i, clopen(2, &["01"]));
    }

    #[test]
    fn difference_derived() {
        let d = ClopenSet::whole(2).difference(&clopen(2, &["10"])).unwrap();
        assert_eq!(d, clopen(2, &["0", "11"]));
    }

    #[test]
    fn point_canonical_forms() {
        // u v . v^inf and u . (v v)^inf collapse to u . v^inf.
        let p = point(2, "", "10");
        assert_eq!(point(2, "1", "01"), p);
        assert_eq!(point(2, "", "1010"), p);
        assert_eq!(point(2, "10", "10"), p);
        assert_ne!(point(2, "1", "10"), p);
    }

    #[test]
    fn point_membership() {
        assert!(clopen(2, &["0"]).contains_point(&point(2, "", "0")));
        assert!(clopen(2, &["10"]).contains_point(&point(2, "1", "0")));
        // (10)^inf expands as 1010..., which does not start with 100.
        assert!(!clopen(2, &["100"]).contains_point(&point(2, "", "10")));
    }

    #[test]
    fn neighborhood_examples() {
        let quarter = Epsilon::new(1, 4).unwrap();
        let p0 = point(2, "", "0");
        assert_eq!(neighborhood_point(&p0, quarter).unwrap(), addr(2, "000"));
        let p1 = point(2, "", "1");
        assert_eq!(neighborhood_point(&p1, Epsilon::one()).unwrap(), addr(2, "1"));
        let half = Epsilon::new(1, 2).unwrap();
        let s = neighborhood(&[p0, p1], half, 2).unwrap();
        assert_eq!(s, clopen(2, &["00", "11"]));
    }

    #[test]
    fn neighborhood_properties() {
        // Contains the point; length < eps; parent length >= eps.
        for k in 1..6u32 {
            let eps = Epsilon::inv_power(2, k).unwrap();
            let p = point(2, "011", "10");
            let a = neighborhood_point(&p, eps).unwrap();
            assert!(p.starts_with(&a));
            assert_eq!(a.depth(), k as usize + 1);
        }
    }

    #[test]
    fn bad_epsilon() {
        assert_eq!(Epsilon::new(0, 4), Err(CantorError::BadEpsilon));
        assert_eq!(Epsilon::new(3, 2), Err(CantorError::BadEpsilon));
    }
}
