//! The group `Vbar_2`: binary tree pair diagrams whose pieces may reverse
//! orientation, plus the doubling embedding into `V_2`.
//!
//! A piece `(d -> r, +)` acts by plain prefix substitution; a piece
//! `(d -> r, -)` sends `d.x` to `r.comp(x)` where `comp` complements every
//! digit. The reflection (single negative root piece) is the involution
//! `x -> 1 - x` of the Cantor set.

use crate::cantor::{Address, CantorPoint};
use crate::element::{ElementError, TreePair};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// Digit-wise complement of a binary address.
pub fn complement_address(a: &Address) -> Address {
    Address::new(2, a.digits().iter().map(|&d| 1 - d).collect()).expect("binary")
}

/// Digit-wise complement of a binary point.
pub fn complement_point(p: &CantorPoint) -> CantorPoint {
    CantorPoint::new(
        2,
        p.preperiod().iter().map(|&d| 1 - d).collect(),
        p.period().iter().map(|&d| 1 - d).collect(),
    )
    .expect("binary")
}

/// A binary tree pair with a sign per domain leaf (in sorted domain order).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedTreePair {
    pair: TreePair,
    signs: Vec<Sign>,
}

impl SignedTreePair {
    pub fn new(pair: TreePair, signs: Vec<Sign>) -> Result<Self, ElementError> {
        if pair.arity() != 2 {
            return Err(crate::cantor::CantorError::ArityMismatch(2, pair.arity()).into());
        }
        if signs.len() != pair.leaf_count() {
            return Err(ElementError::LeafCountMismatch);
        }
        Ok(SignedTreePair { pair, signs })
    }

    pub fn from_signed_pieces(
        pieces: Vec<(Address, Address, Sign)>,
    ) -> Result<Self, ElementError> {
        let mut sorted = pieces;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let signs = sorted.iter().map(|p| p.2).collect();
        let pair =
            TreePair::from_pieces(2, sorted.into_iter().map(|(d, r, _)| (d, r)).collect())?;
        SignedTreePair::new(pair, signs)
    }

    pub fn positive(pair: TreePair) -> Result<Self, ElementError> {
        let signs = vec![Sign::Pos; pair.leaf_count()];
        SignedTreePair::new(pair, signs)
    }

    pub fn identity() -> Self {
        SignedTreePair::positive(TreePair::identity(2)).unwrap()
    }

    /// The involution `x -> 1 - x`.
    pub fn reflection() -> Self {
        SignedTreePair {
            pair: TreePair::identity(2),
            signs: vec![Sign::Neg],
        }
    }

    pub fn pair(&self) -> &TreePair {
        &self.pair
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn leaf_count(&self) -> usize {
        self.pair.leaf_count()
    }

    /// (domain leaf, range leaf, sign) triples in domain order.
    pub fn signed_pieces(&self) -> impl Iterator<Item = (&Address, &Address, Sign)> {
        self.pair
            .pieces()
            .zip(self.signs.iter())
            .map(|((d, r), &s)| (d, r, s))
    }

    pub fn is_identity(&self) -> bool {
        self.signed_pieces().all(|(d, r, s)| d == r && s == Sign::Pos)
    }
}

impl fmt::Display for SignedTreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} signs [", self.pair)?;
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for SignedTreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedTreePair({self})")
    }
}

pub fn signed_apply(f: &SignedTreePair, p: &CantorPoint) -> Result<CantorPoint, ElementError> {
    if p.arity() != 2 {
        return Err(crate::cantor::CantorError::ArityMismatch(2, p.arity()).into());
    }
    for (d, r, s) in f.signed_pieces() {
        if p.starts_with(d) {
            let tail = p.strip_prefix(d.depth());
            let tail = match s {
                Sign::Pos => tail,
                Sign::Neg => complement_point(&tail),
            };
            return Ok(tail.with_prefix(r.digits()));
        }
    }
    unreachable!("domain leaves partition K_2")
}

/// `g o f` with `f` applied first, via common refinement. Pulling a
/// refinement back through a negative piece complements the digits; signs
/// multiply along matched pieces.
pub fn signed_compose(
    f: &SignedTreePair,
    g: &SignedTreePair,
) -> Result<SignedTreePair, ElementError> {
    let mut pieces: Vec<(Address, Address, Sign)> = Vec::new();
    for (d, r, sf) in f.signed_pieces() {
        for (gd, gr, sg) in g.signed_pieces() {
            if gd.is_prefix_of(r) {
                // K_r sits wholly inside the g-piece: r = gd.u,
                // d.x -> r.sf(x) = gd.(u' where u' = u.sf(x) viewed from gd)
                // -> gr.sg(u.sf(x)).
                let u = &r.digits()[gd.depth()..];
                let image = match sg {
                    Sign::Pos => gr.concat(u),
                    Sign::Neg => gr.concat(&u.iter().map(|&x| 1 - x).collect::<Vec<_>>()),
                };
                pieces.push((d.clone(), image, sf * sg));
            } else if r.is_strict_prefix_of(gd) {
                // Refine r down to gd = r.v; the matching sub-domain is
                // d.sf(v) since sf is an involution on digit strings.
                let v = &gd.digits()[r.depth()..];
                let w: Vec<u8> = match sf {
                    Sign::Pos => v.to_vec(),
                    Sign::Neg => v.iter().map(|&x| 1 - x).collect(),
                };
                pieces.push((d.concat(&w), gr.clone(), sf * sg));
            }
        }
    }
    SignedTreePair::from_signed_pieces(pieces)
}

pub fn signed_inverse(f: &SignedTreePair) -> SignedTreePair {
    // comp is an involution, so (d -> r, s) inverts to (r -> d, s).
    let pieces = f
        .signed_pieces()
        .map(|(d, r, s)| (r.clone(), d.clone(), s))
        .collect();
    SignedTreePair::from_signed_pieces(pieces).expect("inverse of valid pair")
}

/// Collapses carets: siblings `p0, p1` merge into `p` when both carry the
/// same sign and their ranges are the children of one vertex in the order
/// dictated by that sign (straight for `+`, crossed for `-`).
pub fn signed_reduce(f: &SignedTreePair) -> SignedTreePair {
    let mut pieces: Vec<(Address, Address, Sign)> = f
        .signed_pieces()
        .map(|(d, r, s)| (d.clone(), r.clone(), s))
        .collect();
    'outer: loop {
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        for i in 0..pieces.len().saturating_sub(1) {
            let (d0, r0, s0) = &pieces[i];
            let (d1, r1, s1) = &pieces[i + 1];
            if s0 != s1 {
                continue;
            }
            let Some((dp, dd0)) = d0.parent() else { continue };
            let Some((dp1, dd1)) = d1.parent() else { continue };
            if dp != dp1 || dd0 != 0 || dd1 != 1 {
                continue;
            }
            let Some((rp0, rd0)) = r0.parent() else { continue };
            let Some((rp1, rd1)) = r1.parent() else { continue };
            if rp0 != rp1 {
                continue;
            }
            let ok = match s0 {
                Sign::Pos => rd0 == 0 && rd1 == 1,
                Sign::Neg => rd0 == 1 && rd1 == 0,
            };
            if ok {
                let s = *s0;
                pieces.splice(i..i + 2, [(dp, rp0, s)]);
                continue 'outer;
            }
        }
        break;
    }
    SignedTreePair::from_signed_pieces(pieces).expect("collapse preserves validity")
}

pub fn signed_equal(f: &SignedTreePair, g: &SignedTreePair) -> bool {
    signed_reduce(f) == signed_reduce(g)
}

/// Deterministic pseudo-random signed element.
pub fn random_signed(seed: u64, leaf_budget: usize) -> Result<SignedTreePair, ElementError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = crate::element::random_element_with(&mut rng, 2, leaf_budget)?;
    let signs = (0..pair.leaf_count())
        .map(|_| if rng.gen::<bool>() { Sign::Pos } else { Sign::Neg })
        .collect();
    SignedTreePair::new(pair, signs)
}

/// The doubling embedding into `V_2`. The doubled Cantor set is modeled by
/// one extra leading digit: prefix `0` carries the original copy, prefix `1`
/// the mirrored copy (related by digit-wise complement). Each piece
/// `(I -> J, s)` of `f` contributes two pieces:
///
/// - `s = +`:  `0.I -> 0.J` and `1.comp(I) -> 1.comp(J)`
/// - `s = -`:  `0.I -> 1.comp(J)` and `1.comp(I) -> 0.J`
///
/// `phi` is a homomorphism and injective; it does not reduce its input, and
/// refinement invariance (phi of a refined diagram reduces to the same
/// element) is covered by tests.
pub fn phi(f: &SignedTreePair) -> TreePair {
    let mut pieces: Vec<(Address, Address)> = Vec::new();
    for (d, r, s) in f.signed_pieces() {
        let d0 = Address::new(2, std::iter::once(0).chain(d.digits().iter().copied()).collect())
            .unwrap();
        let d1 = Address::new(
            2,
            std::iter::once(1)
                .chain(d.digits().iter().map(|&x| 1 - x))
                .collect(),
        )
        .unwrap();
        let r0 = Address::new(2, std::iter::once(0).chain(r.digits().iter().copied()).collect())
            .unwrap();
        let r1 = Address::new(
            2,
            std::iter::once(1)
                .chain(r.digits().iter().map(|&x| 1 - x))
                .collect(),
        )
        .unwrap();
        match s {
            Sign::Pos => {
                pieces.push((d0, r0));
                pieces.push((d1, r1));
            }
            Sign::Neg => {
                pieces.push((d0, r1));
                pieces.push((d1, r0));
            }
        }
    }
    TreePair::from_pieces(2, pieces).expect("doubled pieces partition K_2")
}
