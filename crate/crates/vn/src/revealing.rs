//! Revealing pairs and exact dynamics.
//!
//! For a tree pair (A, B, sigma), write X for the closure of A - B (vertices
//! of the domain tree missing from the range tree) and Y for the closure of
//! B - A. Component roots of X are leaves of B interior to A; component
//! roots of Y are leaves of A interior to B. The pair is *revealing* when
//! every X-root is a repeller (its backward chain lands strictly below it)
//! and every Y-root is an attractor (forward chain strictly below it). A
//! revealing pair exposes the element's complete dynamics: finitely many
//! attracting and repelling periodic points, their basins, and a clopen part
//! on which the element has finite order.

use crate::cantor::{Address, CantorError, CantorPoint, ClopenSet};
use crate::element::{ElementError, TreePair};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RevealingError {
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("rolling did not stabilize within {0} augmentations (implementation bug)")]
    CapExceeded(usize),
    #[error("revealing invariant violated: {0}")]
    MalformedRevealing(String),
}

/// A tree pair whose X/Y component roots satisfy the repeller/attractor
/// conditions; produced by [`to_revealing`] and consumed by
/// [`classify_leaves`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevealingPair {
    base: TreePair,
    x_roots: Vec<Address>,
    y_roots: Vec<Address>,
}

impl RevealingPair {
    pub fn base(&self) -> &TreePair {
        &self.base
    }

    /// Roots of components of X = closure(A - B): leaves of B interior to A.
    pub fn x_roots(&self) -> &[Address] {
        &self.x_roots
    }

    /// Roots of components of Y = closure(B - A): leaves of A interior to B.
    pub fn y_roots(&self) -> &[Address] {
        &self.y_roots
    }

    /// Vertices of the X-component below `root` (leaves of A under it).
    pub fn x_component(&self, root: &Address) -> Vec<Address> {
        subtree_leaves(self.base.domain(), root)
    }

    /// Vertices of the Y-component below `root` (leaves of B under it).
    pub fn y_component(&self, root: &Address) -> Vec<Address> {
        subtree_leaves(self.base.range(), root)
    }
}

fn subtree_leaves(leaves: &[Address], root: &Address) -> Vec<Address> {
    leaves
        .iter()
        .filter(|l| root.is_strict_prefix_of(l))
        .cloned()
        .collect()
}

/// Leaves of `tree` that `a` is a strict prefix of exist iff `a` is an
/// interior vertex of the tree spanned by the (sorted) leaves.
fn is_interior(sorted_leaves: &[Address], a: &Address) -> bool {
    let idx = sorted_leaves.partition_point(|l| l < a);
    sorted_leaves.get(idx).is_some_and(|l| a.is_strict_prefix_of(l))
}

struct Sigma {
    fwd: BTreeMap<Address, Address>,
    bwd: BTreeMap<Address, Address>,
}

impl Sigma {
    fn of(pair: &TreePair) -> Sigma {
        let mut fwd = BTreeMap::new();
        let mut bwd = BTreeMap::new();
        for (d, r) in pair.pieces() {
            fwd.insert(d.clone(), r.clone());
            bwd.insert(r.clone(), d.clone());
        }
        Sigma { fwd, bwd }
    }
}

fn component_roots(pair: &TreePair) -> (Vec<Address>, Vec<Address>) {
    let x = pair
        .range()
        .iter()
        .filter(|l| is_interior(pair.domain(), l))
        .cloned()
        .collect();
    let y = pair
        .domain()
        .iter()
        .filter(|l| is_interior(pair.range(), l))
        .cloned()
        .collect();
    (x, y)
}

/// The maximal chain `g^i(leaf)` through neutral vertices, `i = -r ..= s`,
/// or the full neutral cycle.
enum Chain {
    /// The sigma-orbit of a neutral leaf returned to its start.
    Cycle(Vec<Address>),
    /// Acyclic: `nodes[r]` is the original leaf, `nodes[0]` the backward
    /// endpoint (a leaf of A only), `nodes[r + s]` the forward endpoint
    /// (a leaf of B only).
    Path { nodes: Vec<Address>, r: usize },
}

fn chain_through(pair: &TreePair, sigma: &Sigma, leaf: &Address) -> Chain {
    let in_domain = |a: &Address| pair.domain().binary_search(a).is_ok();
    let in_range = |a: &Address| pair.range().binary_search(a).is_ok();
    // Forward while the current vertex is a leaf of A.
    let mut fwd = Vec::new();
    let mut cur = leaf.clone();
    while in_domain(&cur) {
        cur = sigma.fwd[&cur].clone();
        if cur == *leaf {
            let mut cycle = vec![leaf.clone()];
            cycle.extend(fwd);
            return Chain::Cycle(cycle);
        }
        fwd.push(cur.clone());
    }
    // Backward while the current vertex is a leaf of B. sigma is injective,
    // so no cycle can appear that the forward pass missed.
    let mut bwd = Vec::new();
    let mut cur = leaf.clone();
    while in_range(&cur) {
        cur = sigma.bwd[&cur].clone();
        bwd.push(cur.clone());
    }
    bwd.reverse();
    let r = bwd.len();
    let mut nodes = bwd;
    nodes.push(leaf.clone());
    nodes.extend(fwd);
    Chain::Path { nodes, r }
}

/// Extends a reduced tree pair to a revealing pair for the same element by
/// Brin's rolling procedure: while some Y-root's forward chain does not land
/// strictly below it, refine that root (and its image) by the component's
/// subtree shape, and dually for X-roots through backward chains.
pub fn to_revealing(f: &TreePair, iteration_cap: usize) -> Result<RevealingPair, RevealingError> {
    let mut pair = f.reduce().into_inner();
    for _ in 0..=iteration_cap {
        let sigma = Sigma::of(&pair);
        let (x_roots, y_roots) = component_roots(&pair);
        let mut bad: Option<(Address, bool)> = None;
        for root in &y_roots {
            let Chain::Path { nodes, .. } = chain_through(&pair, &sigma, root) else {
                unreachable!("a Y-root is not a leaf of B, so its chain cannot cycle")
            };
            if !root.is_strict_prefix_of(nodes.last().unwrap()) {
                bad = Some((root.clone(), false));
                break;
            }
        }
        if bad.is_none() {
            for root in &x_roots {
                let Chain::Path { nodes, .. } = chain_through(&pair, &sigma, root) else {
                    unreachable!("an X-root is not a leaf of A, so its chain cannot cycle")
                };
                if !root.is_strict_prefix_of(&nodes[0]) {
                    bad = Some((root.clone(), true));
                    break;
                }
            }
        }
        let Some((root, is_x)) = bad else {
            return Ok(RevealingPair {
                base: pair,
                x_roots,
                y_roots,
            });
        };
        pair = if is_x {
            // Refine the range leaf `root` by the component shape of A
            // below it, pulling the shape back through sigma^-1.
            let shape: Vec<Vec<u8>> = subtree_leaves(pair.domain(), &root)
                .iter()
                .map(|l| l.digits()[root.depth()..].to_vec())
                .collect();
            let pre = sigma.bwd[&root].clone();
            augment(&pair, &pre, &root, &shape)?
        } else {
            let shape: Vec<Vec<u8>> = subtree_leaves(pair.range(), &root)
                .iter()
                .map(|l| l.digits()[root.depth()..].to_vec())
                .collect();
            let img = sigma.fwd[&root].clone();
            augment(&pair, &root, &img, &shape)?
        };
    }
    Err(RevealingError::CapExceeded(iteration_cap))
}

/// Replaces the piece `dom -> rng` by the refined family `dom.w -> rng.w`
/// over the subtree shape `w`.
fn augment(
    pair: &TreePair,
    dom: &Address,
    rng: &Address,
    shape: &[Vec<u8>],
) -> Result<TreePair, RevealingError> {
    let mut pieces: Vec<(Address, Address)> = pair
        .pieces()
        .filter(|(d, _)| *d != dom)
        .map(|(d, r)| (d.clone(), r.clone()))
        .collect();
    for w in shape {
        pieces.push((dom.concat(w), rng.concat(w)));
    }
    Ok(TreePair::from_pieces(pair.arity(), pieces)?)
}

/// Sanity checker for the revealing-pair definition, used as the tests'
/// independent gate on [`to_revealing`] output.
pub fn check_revealing(rp: &RevealingPair) -> Result<(), RevealingError> {
    let (x_roots, y_roots) = component_roots(&rp.base);
    if x_roots != rp.x_roots || y_roots != rp.y_roots {
        return Err(RevealingError::MalformedRevealing(
            "stored component roots disagree with the base pair".into(),
        ));
    }
    let sigma = Sigma::of(&rp.base);
    for root in &rp.x_roots {
        match chain_through(&rp.base, &sigma, root) {
            Chain::Path { nodes, .. } if root.is_strict_prefix_of(&nodes[0]) => {}
            _ => {
                return Err(RevealingError::MalformedRevealing(format!(
                    "X-root {root} is not a repeller"
                )))
            }
        }
    }
    for root in &rp.y_roots {
        match chain_through(&rp.base, &sigma, root) {
            Chain::Path { nodes, .. } if root.is_strict_prefix_of(nodes.last().unwrap()) => {}
            _ => {
                return Err(RevealingError::MalformedRevealing(format!(
                    "Y-root {root} is not an attractor"
                )))
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeafKind {
    /// Neutral leaf on a sigma-cycle of length `period`.
    NeutralPeriodic { period: usize },
    /// On the chain of the attractor rooted at `root`; `s` forward and `r`
    /// backward steps remain from this leaf to the chain endpoints.
    Attractor { root: Address, s: usize, r: usize },
    /// On the chain of the repeller rooted at `root`.
    Repeller { root: Address, s: usize, r: usize },
    /// Flows from (under) the X-root `source` to (under) the Y-root
    /// `target` without meeting a periodic orbit.
    Transient { source: Address, target: Address },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafClass {
    pub leaf: Address,
    pub kind: LeafKind,
    /// The full chain through the leaf: the cycle for neutral-periodic
    /// leaves, otherwise `g^{-r}(leaf) ..= g^{s}(leaf)`.
    pub iac: Vec<Address>,
}

/// Finds the component root whose subtree contains `a`.
fn root_above<'a>(roots: &'a [Address], a: &Address) -> Option<&'a Address> {
    roots.iter().find(|r| r.is_strict_prefix_of(a))
}

/// Classifies every leaf of A union B into exactly one of the four kinds.
pub fn classify_leaves(rp: &RevealingPair) -> Result<Vec<LeafClass>, RevealingError> {
    check_revealing(rp)?;
    let pair = &rp.base;
    let sigma = Sigma::of(pair);
    let mut all: BTreeSet<Address> = pair.domain().iter().cloned().collect();
    all.extend(pair.range().iter().cloned());
    let mut out = Vec::new();
    for leaf in all {
        let class = match chain_through(pair, &sigma, &leaf) {
            Chain::Cycle(cycle) => LeafClass {
                kind: LeafKind::NeutralPeriodic {
                    period: cycle.len(),
                },
                iac: cycle,
                leaf,
            },
            Chain::Path { nodes, r } => {
                let s = nodes.len() - 1 - r;
                let back = &nodes[0];
                let front = nodes.last().unwrap();
                let kind = if rp.x_roots.contains(front) {
                    LeafKind::Repeller {
                        root: front.clone(),
                        s,
                        r,
                    }
                } else if rp.y_roots.contains(back) {
                    LeafKind::Attractor {
                        root: back.clone(),
                        s,
                        r,
                    }
                } else {
                    let source = root_above(&rp.x_roots, back).ok_or_else(|| {
                        RevealingError::MalformedRevealing(format!(
                            "backward endpoint {back} lies under no X-root"
                        ))
                    })?;
                    let target = root_above(&rp.y_roots, front).ok_or_else(|| {
                        RevealingError::MalformedRevealing(format!(
                            "forward endpoint {front} lies under no Y-root"
                        ))
                    })?;
                    LeafKind::Transient {
                        source: source.clone(),
                        target: target.clone(),
                    }
                };
                LeafClass {
                    leaf,
                    kind,
                    iac: nodes,
                }
            }
        };
        out.push(class);
    }
    Ok(out)
}

/// The complete exact dynamical picture of an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicalData {
    /// Union of the periodic neutral intervals; the element has finite
    /// order on `u`.
    pub u: ClopenSet,
    /// Complement of `u`; carries the attracting-repelling dynamics.
    pub v: ClopenSet,
    /// Attracting periodic points with their (minimal) periods, sorted.
    pub att: Vec<(CantorPoint, usize)>,
    /// Repelling periodic points with their periods, sorted.
    pub rep: Vec<(CantorPoint, usize)>,
    /// lcm of the neutral cycle lengths; `g^this` is the identity on `u`.
    pub finite_order_on_u: u64,
}

impl DynamicalData {
    pub fn per0(&self) -> Vec<CantorPoint> {
        let mut pts: Vec<CantorPoint> = self
            .att
            .iter()
            .chain(self.rep.iter())
            .map(|(p, _)| p.clone())
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn att_points(&self) -> Vec<CantorPoint> {
        self.att.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn rep_points(&self) -> Vec<CantorPoint> {
        self.rep.iter().map(|(p, _)| p.clone()).collect()
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Default rolling cap used by [`dynamics`]: generous versus everything
/// observed; exceeding it signals a bug, not bad input.
pub fn default_cap(f: &TreePair) -> usize {
    10 * f.leaf_count() * f.leaf_count()
}

/// Computes the exact dynamics of `f` through a revealing pair.
pub fn dynamics(f: &TreePair) -> Result<DynamicalData, RevealingError> {
    let reduced = f.reduce().into_inner();
    let rp = to_revealing(&reduced, default_cap(&reduced))?;
    let classes = classify_leaves(&rp)?;
    let g = rp.base();
    let ginv = g.inverse();
    let arity = g.arity();

    let mut u_intervals = Vec::new();
    let mut order: u64 = 1;
    let mut att = Vec::new();
    let mut rep = Vec::new();
    for c in &classes {
        match &c.kind {
            LeafKind::NeutralPeriodic { period } => {
                u_intervals.push(c.leaf.clone());
                order = lcm(order, *period as u64);
            }
            LeafKind::Attractor { root, s, r } if *r == 0 && c.leaf == *root => {
                // Forward endpoint root.u: g^s contracts K_root onto
                // K_root.u, fixing root.u^inf.
                let endpoint = c.iac.last().unwrap();
                let u_suffix = &endpoint.digits()[root.depth()..];
                let period = *s;
                let mut p = CantorPoint::new(arity, root.digits().to_vec(), u_suffix.to_vec())?;
                for _ in 0..period {
                    att.push((p.clone(), period));
                    p = g.apply(&p)?;
                }
                debug_assert_eq!(p, att[att.len() - period].0);
            }
            LeafKind::Repeller { root, s, r } if *s == 0 && c.leaf == *root => {
                // Backward endpoint root.u: g^-r contracts K_root onto
                // K_root.u; root.u^inf repels forward.
                let endpoint = &c.iac[0];
                let u_suffix = &endpoint.digits()[root.depth()..];
                let period = *r;
                let mut p = CantorPoint::new(arity, root.digits().to_vec(), u_suffix.to_vec())?;
                for _ in 0..period {
                    rep.push((p.clone(), period));
                    p = ginv.apply(&p)?;
                }
                debug_assert_eq!(p, rep[rep.len() - period].0);
            }
            _ => {}
        }
    }
    att.sort();
    att.dedup();
    rep.sort();
    rep.dedup();
    let u = ClopenSet::from_intervals(arity, u_intervals)?;
    let v = u.complement();
    Ok(DynamicalData {
        u,
        v,
        att,
        rep,
        finite_order_on_u: order,
    })
}

/// Independent dynamics oracle: reads periodic behavior directly off the
/// reduced powers `f^k`, `k <= steps`, with no revealing-pair machinery. A
/// piece `d -> d` of `f^k` is pointwise fixed; `d -> d.u` pins the
/// attracting point `d.u^inf`; `r.u -> r` pins the repelling point
/// `r.u^inf`. Minimal periods fall out as the first `k` detecting a point.
/// `depth` bounds the leaf depth examined (pieces deeper than `depth` are
/// ignored, so `depth` must dominate the element's leaf depths across the
/// first `steps` powers for exact agreement).
pub fn brute_dynamics(f: &TreePair, depth: usize, steps: usize) -> DynamicalData {
    let arity = f.arity();
    let mut att: BTreeMap<CantorPoint, usize> = BTreeMap::new();
    let mut rep: BTreeMap<CantorPoint, usize> = BTreeMap::new();
    let mut u_intervals: Vec<Address> = Vec::new();
    let mut order: u64 = 1;
    let mut seen_fixed: BTreeSet<Address> = BTreeSet::new();
    let base = f.reduce().into_inner();
    let mut power = base.clone();
    for k in 1..=steps {
        for (d, r) in power.pieces() {
            if d.depth() > depth || r.depth() > depth {
                continue;
            }
            if d == r {
                if seen_fixed.insert(d.clone()) {
                    u_intervals.push(d.clone());
                    order = lcm(order, k as u64);
                }
            } else if d.is_strict_prefix_of(r) {
                let u_suffix = &r.digits()[d.depth()..];
                if let Ok(p) = CantorPoint::new(arity, d.digits().to_vec(), u_suffix.to_vec()) {
                    att.entry(p).or_insert(k);
                }
            } else if r.is_strict_prefix_of(d) {
                let u_suffix = &d.digits()[r.depth()..];
                if let Ok(p) = CantorPoint::new(arity, r.digits().to_vec(), u_suffix.to_vec()) {
                    rep.entry(p).or_insert(k);
                }
            }
        }
        if k < steps {
            power = power
                .compose(&base)
                .expect("same arity")
                .reduce()
                .into_inner();
        }
    }
    let u = ClopenSet::from_intervals(arity, u_intervals).expect("intervals share the arity");
    let v = u.complement();
    DynamicalData {
        u,
        v,
        att: att.into_iter().collect(),
        rep: rep.into_iter().collect(),
        finite_order_on_u: order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::random_element;
    use crate::fixtures;

    fn addr(s: &str) -> Address {
        Address::new(2, s.bytes().map(|b| b - b'0').collect()).unwrap()
    }

    fn pt(pre: &str, per: &str) -> CantorPoint {
        CantorPoint::new(
            2,
            pre.bytes().map(|b| b - b'0').collect(),
            per.bytes().map(|b| b - b'0').collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_revealing() {
        let rp = to_revealing(&TreePair::identity(2), 10).unwrap();
        assert!(rp.x_roots().is_empty());
        assert!(rp.y_roots().is_empty());
        assert_eq!(rp.base().leaf_count(), 1);
        let classes = classify_leaves(&rp).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(matches!(
            classes[0].kind,
            LeafKind::NeutralPeriodic { period: 1 }
        ));
    }

    #[test]
    fn f0_revealing_structure() {
        let f0 = fixtures::f0();
        let rp = to_revealing(&f0, default_cap(&f0)).unwrap();
        check_revealing(&rp).unwrap();
        assert_eq!(rp.x_roots(), &[addr("1")]);
        assert_eq!(rp.y_roots(), &[addr("0")]);
        let classes = classify_leaves(&rp).unwrap();
        let of = |a: &str| {
            classes
                .iter()
                .find(|c| c.leaf == addr(a))
                .unwrap()
                .kind
                .clone()
        };
        assert!(matches!(of("0"), LeafKind::Attractor { s: 1, r: 0, .. }));
        assert!(matches!(of("1"), LeafKind::Repeller { s: 0, r: 1, .. }));
        assert!(matches!(of("10"), LeafKind::Transient { .. }));
    }

    #[test]
    fn swap_revealing_is_neutral() {
        let s = fixtures::swap();
        let rp = to_revealing(&s, default_cap(&s)).unwrap();
        assert!(rp.x_roots().is_empty() && rp.y_roots().is_empty());
        for c in classify_leaves(&rp).unwrap() {
            assert!(matches!(c.kind, LeafKind::NeutralPeriodic { period: 2 }));
        }
    }

    #[test]
    fn rolling_fixes_a_bad_pair() {
        // D={00,01,1} -> R={0,10,11} with 00->0, 01->10, 1->11: the Y-root
        // 1's chain ends at 10, not below 1... it does lie below 1; build
        // the crossed variant instead: 00->10, 01->11, 1->0.
        let pair = TreePair::from_pieces(
            2,
            vec![
                (addr("00"), addr("10")),
                (addr("01"), addr("11")),
                (addr("1"), addr("0")),
            ],
        )
        .unwrap();
        // This reduces to swap, which is already revealing with A = B.
        let rp = to_revealing(&pair, 100).unwrap();
        check_revealing(&rp).unwrap();
        assert!(pair.equal(rp.base()).unwrap());
    }

    #[test]
    fn dynamics_f0() {
        let d = dynamics(&fixtures::f0()).unwrap();
        assert!(d.u.is_empty());
        assert!(d.v.is_whole());
        assert_eq!(d.att, vec![(pt("", "0"), 1)]);
        assert_eq!(d.rep, vec![(pt("", "1"), 1)]);
        assert_eq!(d.finite_order_on_u, 1);
    }

    #[test]
    fn dynamics_identity_and_swap() {
        let id = dynamics(&TreePair::identity(2)).unwrap();
        assert!(id.u.is_whole() && id.att.is_empty() && id.rep.is_empty());
        assert_eq!(id.finite_order_on_u, 1);
        let sw = dynamics(&fixtures::swap()).unwrap();
        assert!(sw.u.is_whole() && sw.att.is_empty() && sw.rep.is_empty());
        assert_eq!(sw.finite_order_on_u, 2);
    }

    #[test]
    fn dynamics_showcase_inventory() {
        // One fixed attractor, a period-4 attracting orbit, a period-2
        // repelling orbit.
        let d = dynamics(&fixtures::showcase()).unwrap();
        assert!(d.u.is_empty());
        assert_eq!(
            d.att,
            vec![
                (pt("", "1"), 1),
                (pt("1", "0"), 4),
                (pt("101", "0"), 4),
                (pt("110", "0"), 4),
                (pt("1110", "0"), 4),
            ]
        );
        assert_eq!(d.rep, vec![(pt("", "0"), 2), (pt("01", "0"), 2)]);
    }

    #[test]
    fn brute_dynamics_examples() {
        let bf = brute_dynamics(&fixtures::f0(), 8, 64);
        assert_eq!(bf.att, vec![(pt("", "0"), 1)]);
        assert_eq!(bf.rep, vec![(pt("", "1"), 1)]);
        let bi = brute_dynamics(&TreePair::identity(2), 4, 4);
        assert!(bi.u.is_whole() && bi.att.is_empty());
        assert_eq!(bi.finite_order_on_u, 1);
        let bs = brute_dynamics(&fixtures::swap(), 4, 8);
        assert!(bs.u.is_whole() && bs.att.is_empty() && bs.rep.is_empty());
        assert_eq!(bs.finite_order_on_u, 2);
    }

    #[test]
    fn dynamics_agrees_with_brute_on_fixtures_and_random() {
        let mut elements = vec![
            fixtures::f0(),
            fixtures::h(),
            fixtures::swap(),
            fixtures::c4(),
            fixtures::showcase(),
        ];
        for seed in 0..60 {
            elements.push(random_element(seed, 2, 8).unwrap());
            elements.push(random_element(seed, 3, 8).unwrap());
        }
        for e in &elements {
            let d = dynamics(e).unwrap();
            let b = brute_dynamics(e, 16, 64);
            assert_eq!(d.att, b.att, "attractors differ for {e}");
            assert_eq!(d.rep, b.rep, "repellers differ for {e}");
            assert_eq!(d.u, b.u, "U differs for {e}");
            assert_eq!(
                d.finite_order_on_u, b.finite_order_on_u,
                "order differs for {e}"
            );
        }
    }

    #[test]
    fn finite_order_on_u_is_identity_there() {
        for seed in 0..40 {
            let e = random_element(seed, 2, 9).unwrap();
            let d = dynamics(&e).unwrap();
            if d.u.is_empty() {
                continue;
            }
            let p = e.power(d.finite_order_on_u as i64);
            assert!(p.is_identity_on(&d.u).unwrap());
        }
    }

    #[test]
    fn revealing_definition_holds_on_random_elements() {
        for seed in 0..150 {
            for arity in [2u8, 3] {
                let e = random_element(seed + 7 * arity as u64, arity, 10).unwrap();
                let rp = to_revealing(&e, default_cap(&e)).unwrap();
                check_revealing(&rp).unwrap();
                assert!(rp.base().equal(&e).unwrap());
                classify_leaves(&rp).unwrap();
            }
        }
    }
}
