//! Elements of `V_n` as tree pair diagrams.
//!
//! An element is a triple `(A, B, sigma)`: two complete antichains of
//! addresses (the leaf sets of two finite n-ary trees) of equal size and a
//! bijection between them. The element acts on `K_n` by prefix substitution:
//! the leaf `d` of the domain antichain is carried onto the leaf `sigma(d)`
//! of the range antichain.
//!
//! Composition is written left-to-right: `compose(f, g)` applies `f` first.
//! Composition never reduces automatically; reduction is explicit so that
//! revealing-pair bookkeeping stays predictable.

use crate::cantor::{Address, CantorError, CantorPoint, ClopenSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElementError {
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("domain and range must have the same number of leaves")]
    LeafCountMismatch,
    #[error("leaves do not form a complete antichain of K_n")]
    NotAPartition,
    #[error("perm is not a bijection between the leaf sets")]
    BadPermutation,
    #[error("leaf budget must be at least 1")]
    BadLeafBudget,
}

/// A (not necessarily reduced) tree pair diagram.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreePair {
    arity: u8,
    domain: Vec<Address>, // sorted complete antichain
    range: Vec<Address>,  // sorted complete antichain
    perm: Vec<usize>,     // domain[k] maps onto range[perm[k]]
}

fn is_complete_antichain(arity: u8, sorted: &[Address]) -> bool {
    if sorted.is_empty() {
        return false;
    }
    for w in sorted.windows(2) {
        if w[0].is_prefix_of(&w[1]) {
            return false;
        }
    }
    match ClopenSet::from_intervals(arity, sorted.to_vec()) {
        Ok(s) => s.is_whole(),
        Err(_) => false,
    }
}

impl TreePair {
    pub fn new(
        arity: u8,
        mut domain: Vec<Address>,
        mut range: Vec<Address>,
        perm: Vec<usize>,
    ) -> Result<Self, ElementError> {
        if domain.len() != range.len() || perm.len() != domain.len() {
            return Err(ElementError::LeafCountMismatch);
        }
        for a in domain.iter().chain(range.iter()) {
            if a.arity() != arity {
                return Err(CantorError::ArityMismatch(arity, a.arity()).into());
            }
        }
        domain.sort();
        range.sort();
        if !is_complete_antichain(arity, &domain) || !is_complete_antichain(arity, &range) {
            return Err(ElementError::NotAPartition);
        }
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if i >= perm.len() || seen[i] {
                return Err(ElementError::BadPermutation);
            }
            seen[i] = true;
        }
        Ok(TreePair {
            arity,
            domain,
            range,
            perm,
        })
    }

    /// Builds from explicit (domain, range) leaf pairs.
    pub fn from_pieces(arity: u8, pieces: Vec<(Address, Address)>) -> Result<Self, ElementError> {
        let mut doms: Vec<Address> = pieces.iter().map(|p| p.0.clone()).collect();
        let mut rngs: Vec<Address> = pieces.iter().map(|p| p.1.clone()).collect();
        doms.sort();
        rngs.sort();
        let mut perm = Vec::with_capacity(pieces.len());
        let mut sorted = pieces;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, r) in &sorted {
            let i = rngs.binary_search(r).map_err(|_| ElementError::BadPermutation)?;
            perm.push(i);
        }
        TreePair::new(arity, doms, rngs, perm)
    }

    pub fn identity(arity: u8) -> Self {
        TreePair {
            arity,
            domain: vec![Address::root(arity)],
            range: vec![Address::root(arity)],
            perm: vec![0],
        }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn domain(&self) -> &[Address] {
        &self.domain
    }

    pub fn range(&self) -> &[Address] {
        &self.range
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.len()
    }

    /// The range leaf the domain leaf at `idx` maps onto.
    pub fn image_leaf(&self, idx: usize) -> &Address {
        &self.range[self.perm[idx]]
    }

    /// Iterates (domain leaf, range leaf) pairs in domain order.
    pub fn pieces(&self) -> impl Iterator<Item = (&Address, &Address)> {
        self.domain
            .iter()
            .enumerate()
            .map(|(k, d)| (d, &self.range[self.perm[k]]))
    }

    pub fn is_identity(&self) -> bool {
        self.pieces().all(|(d, r)| d == r)
    }

    /// Index of the unique domain leaf whose interval contains the point.
    fn leaf_containing(&self, p: &CantorPoint) -> usize {
        let max_depth = self.domain.iter().map(Address::depth).max().unwrap_or(0);
        let key = p.truncate(max_depth);
        // The containing leaf is the last leaf <= key in lex order.
        let idx = self.domain.partition_point(|a| *a <= key);
        debug_assert!(idx > 0 && self.domain[idx - 1].is_prefix_of(&key));
        idx - 1
    }

    /// The action on an exact point.
    pub fn apply(&self, p: &CantorPoint) -> Result<CantorPoint, ElementError> {
        if p.arity() != self.arity {
            return Err(CantorError::ArityMismatch(self.arity, p.arity()).into());
        }
        let k = self.leaf_containing(p);
        let d = &self.domain[k];
        let r = self.image_leaf(k);
        Ok(p.strip_prefix(d.depth()).with_prefix(r.digits()))
    }

    /// The exact image of a clopen set, canonicalized.
    pub fn map_clopen(&self, s: &ClopenSet) -> Result<ClopenSet, ElementError> {
        if s.arity() != self.arity {
            return Err(CantorError::ArityMismatch(self.arity, s.arity()).into());
        }
        let mut out = Vec::new();
        for a in s.intervals() {
            for (d, r) in self.pieces() {
                if d.is_prefix_of(a) {
                    out.push(r.concat(&a.digits()[d.depth()..]));
                } else if a.is_strict_prefix_of(d) {
                    out.push(r.clone());
                }
            }
        }
        Ok(ClopenSet::from_intervals(self.arity, out)?)
    }

    /// `g o f` where `f = self` is applied first.
    pub fn compose(&self, g: &TreePair) -> Result<TreePair, ElementError> {
        if g.arity != self.arity {
            return Err(CantorError::ArityMismatch(self.arity, g.arity).into());
        }
        let inv = self.inverse_perm();
        let mut pieces: Vec<(Address, Address)> = Vec::new();
        for (j, r) in self.range.iter().enumerate() {
            let back = &self.domain[inv[j]];
            for (k, d) in g.domain.iter().enumerate() {
                let rng = &g.range[g.perm[k]];
                if d.is_prefix_of(r) {
                    // K_r sits inside the g-leaf d.
                    pieces.push((back.clone(), rng.concat(&r.digits()[d.depth()..])));
                } else if r.is_strict_prefix_of(d) {
                    // Refine r down to d and pull the refinement back through f.
                    let suffix = &d.digits()[r.depth()..];
                    pieces.push((back.concat(suffix), rng.clone()));
                }
            }
        }
        TreePair::from_pieces(self.arity, pieces)
    }

    fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (k, &i) in self.perm.iter().enumerate() {
            inv[i] = k;
        }
        inv
    }

    pub fn inverse(&self) -> TreePair {
        TreePair {
            arity: self.arity,
            domain: self.range.clone(),
            range: self.domain.clone(),
            perm: self.inverse_perm(),
        }
    }

    /// Collapses carets until minimal. The result is the unique minimal
    /// diagram for this element.
    pub fn reduce(&self) -> ReducedTreePair {
        let n = self.arity as usize;
        let mut pieces: Vec<(Address, Address)> = self
            .pieces()
            .map(|(d, r)| (d.clone(), r.clone()))
            .collect();
        'outer: loop {
            pieces.sort_by(|a, b| a.0.cmp(&b.0));
            for i in 0..pieces.len().saturating_sub(n - 1) {
                let window = &pieces[i..i + n];
                if let Some((dp, rp)) = collapsible(window) {
                    pieces.splice(i..i + n, [(dp, rp)]);
                    continue 'outer;
                }
            }
            break;
        }
        let pair = TreePair::from_pieces(self.arity, pieces).expect("collapse preserves validity");
        ReducedTreePair(pair)
    }

    /// Reduce-and-compare equality. Agrees with the depth-k action oracle.
    pub fn equal(&self, other: &TreePair) -> Result<bool, ElementError> {
        if other.arity != self.arity {
            return Err(CantorError::ArityMismatch(self.arity, other.arity).into());
        }
        Ok(self.reduce().0 == other.reduce().0)
    }

    /// `self^k` for any integer k, reducing along the way.
    pub fn power(&self, k: i64) -> TreePair {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = TreePair::identity(self.arity);
        let mut sq = base.reduce().into_inner();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq).expect("same arity").reduce().into_inner();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq).expect("same arity").reduce().into_inner();
            }
        }
        acc
    }

    /// True iff the element is the identity on every interval of `s`.
    pub fn is_identity_on(&self, s: &ClopenSet) -> Result<bool, ElementError> {
        if s.arity() != self.arity {
            return Err(CantorError::ArityMismatch(self.arity, s.arity()).into());
        }
        for a in s.intervals() {
            for (d, r) in self.pieces() {
                if d.is_prefix_of(a) {
                    // K_a inside leaf d: identity iff a maps to itself.
                    if r.concat(&a.digits()[d.depth()..]) != *a {
                        return Ok(false);
                    }
                } else if a.is_strict_prefix_of(d) && d != r {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn collapsible(window: &[(Address, Address)]) -> Option<(Address, Address)> {
    let (dp, d0) = window[0].0.parent()?;
    if d0 != 0 {
        return None;
    }
    let (rp, r0) = window[0].1.parent()?;
    if r0 != 0 {
        return None;
    }
    for (i, (d, r)) in window.iter().enumerate() {
        let (dpp, dd) = d.parent()?;
        let (rpp, rd) = r.parent()?;
        if dpp != dp || rpp != rp || dd as usize != i || rd as usize != i {
            return None;
        }
    }
    Some((dp, rp))
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V {} :", self.arity)?;
        for a in &self.domain {
            write!(f, " {a}")?;
        }
        write!(f, " ->")?;
        for a in &self.range {
            write!(f, " {a}")?;
        }
        write!(f, " perm [")?;
        for (i, p) in self.perm.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreePair({self})")
    }
}

/// A tree pair in minimal form: no collapsible caret remains.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedTreePair(TreePair);

impl ReducedTreePair {
    pub fn as_pair(&self) -> &TreePair {
        &self.0
    }

    pub fn into_inner(self) -> TreePair {
        self.0
    }
}

impl fmt::Display for ReducedTreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic pseudo-random element: two uniformly grown trees with the
/// same leaf count (at most `leaf_budget`) and a uniform leaf bijection.
pub fn random_element(seed: u64, arity: u8, leaf_budget: usize) -> Result<TreePair, ElementError> {
    if leaf_budget == 0 {
        return Err(ElementError::BadLeafBudget);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_element_with(&mut rng, arity, leaf_budget)
}

/// Same as [`random_element`] but drawing from a caller-owned stream.
pub fn random_element_with<R: Rng>(
    rng: &mut R,
    arity: u8,
    leaf_budget: usize,
) -> Result<TreePair, ElementError> {
    if leaf_budget == 0 {
        return Err(ElementError::BadLeafBudget);
    }
    let n = arity as usize;
    let max_splits = (leaf_budget - 1) / (n - 1);
    let splits = rng.gen_range(0..=max_splits);
    let domain = random_tree(rng, arity, splits);
    let range = random_tree(rng, arity, splits);
    let mut perm: Vec<usize> = (0..domain.len()).collect();
    // Fisher-Yates
    for i in (1..perm.len()).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    TreePair::new(arity, domain, range, perm)
}

fn random_tree<R: Rng>(rng: &mut R, arity: u8, splits: usize) -> Vec<Address> {
    let mut leaves = vec![Address::root(arity)];
    for _ in 0..splits {
        let i = rng.gen_range(0..leaves.len());
        let leaf = leaves.swap_remove(i);
        for d in 0..arity {
            leaves.push(leaf.child(d));
        }
    }
    leaves.sort();
    leaves
}

/// Depth-k action table: the image of `a . 0^inf` for every depth-k address
/// `a` in lexicographic order. Two elements whose reduced diagrams have
/// leaves of depth < k are equal iff their tables agree, which the tests use
/// as an oracle independent of reduce/compose.
pub fn action_table(f: &TreePair, depth: usize) -> Vec<CantorPoint> {
    let n = f.arity();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(digits) = stack.pop() {
        if digits.len() == depth {
            let p = CantorPoint::new(n, digits, vec![0]).expect("valid digits");
            out.push(f.apply(&p).expect("same arity"));
            continue;
        }
        // Push in reverse so the traversal pops in lexicographic order.
        for d in (0..n).rev() {
            let mut next = digits.clone();
            next.push(d);
            stack.push(next);
        }
    }
    out
}
