//! Constructive Tits alternative for finitely generated subgroups of `V_n`:
//! search for either a finite orbit or a ping-pong witness of a free
//! subgroup, returning a certificate that is re-verified exactly and
//! independently of how the search found it.
//!
//! The searches are bounded (the dichotomy theorem guarantees a certificate
//! exists but gives no computable bound), so `Undecided` is an honest
//! outcome at any finite budget.

use crate::cantor::{Address, CantorError, CantorPoint, ClopenSet, Epsilon};
use crate::element::{ElementError, TreePair};
use crate::revealing::{dynamics, DynamicalData, RevealingError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TitsError {
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error(transparent)]
    Revealing(#[from] RevealingError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("a subgroup needs at least one generator")]
    EmptyGenerators,
    #[error("step weights must be positive, one per generator and inverse")]
    BadWeights,
}

/// Failures of the bounded searches; none of them disprove anything.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchFailure {
    #[error("the hypothesis fails: the moved set meets the original")]
    NotDisjoint,
    #[error("the ping-pong table X was empty at every tested epsilon")]
    EmptyPingPongTable,
    #[error("U_f and U_g overlap on the working domain")]
    HypothesisFailed,
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error(transparent)]
    Internal(#[from] TitsError),
}

impl From<ElementError> for SearchFailure {
    fn from(e: ElementError) -> Self {
        SearchFailure::Internal(e.into())
    }
}

impl From<RevealingError> for SearchFailure {
    fn from(e: RevealingError) -> Self {
        SearchFailure::Internal(e.into())
    }
}

impl From<CantorError> for SearchFailure {
    fn from(e: CantorError) -> Self {
        SearchFailure::Internal(e.into())
    }
}

/// A finitely generated subgroup, given by its generator list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    arity: u8,
    generators: Vec<TreePair>,
}

impl Subgroup {
    pub fn new(generators: Vec<TreePair>) -> Result<Self, TitsError> {
        let Some(first) = generators.first() else {
            return Err(TitsError::EmptyGenerators);
        };
        let arity = first.arity();
        for g in &generators {
            if g.arity() != arity {
                return Err(CantorError::ArityMismatch(arity, g.arity()).into());
            }
        }
        Ok(Subgroup { arity, generators })
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn generators(&self) -> &[TreePair] {
        &self.generators
    }
}

/// A word in the subgroup generators; letters act left to right, matching
/// `TreePair::compose`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenWord(pub Vec<(usize, i64)>);

impl GenWord {
    pub fn identity() -> GenWord {
        GenWord(Vec::new())
    }

    pub fn gen(i: usize) -> GenWord {
        GenWord(vec![(i, 1)])
    }

    pub fn inverse(&self) -> GenWord {
        GenWord(self.0.iter().rev().map(|&(i, e)| (i, -e)).collect())
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        GenWord(v).simplify()
    }

    pub fn power(&self, k: i64) -> GenWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::new();
        for _ in 0..k.unsigned_abs() {
            v.extend(base.0.iter().cloned());
        }
        GenWord(v).simplify()
    }

    fn simplify(self) -> GenWord {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (i, e) in self.0 {
            if e == 0 {
                continue;
            }
            if let Some(last) = out.last_mut() {
                if last.0 == i {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            out.push((i, e));
        }
        GenWord(out)
    }

    pub fn eval(&self, group: &Subgroup) -> Result<TreePair, TitsError> {
        let mut acc = TreePair::identity(group.arity());
        for &(i, e) in &self.0 {
            let g = group
                .generators
                .get(i)
                .ok_or(TitsError::EmptyGenerators)?
                .power(e);
            acc = acc.compose(&g)?.reduce().into_inner();
        }
        Ok(acc)
    }

    /// Total letter count.
    pub fn len(&self) -> usize {
        self.0.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &(i, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "g{i}")?;
            } else {
                write!(f, "g{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A point whose finite orbit is closed under every generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteOrbitCert {
    pub point: CantorPoint,
    pub orbit: Vec<CantorPoint>,
}

impl FiniteOrbitCert {
    /// Exact replay: the point lies in the orbit and every generator maps
    /// the orbit into itself (hence, by finiteness, onto itself).
    pub fn verify(&self, group: &Subgroup) -> Result<(), String> {
        let set: BTreeSet<&CantorPoint> = self.orbit.iter().collect();
        if !set.contains(&self.point) {
            return Err("the base point is missing from the orbit".into());
        }
        for (gi, g) in group.generators().iter().enumerate() {
            for p in &self.orbit {
                let q = g.apply(p).map_err(|e| e.to_string())?;
                if !set.contains(&q) {
                    return Err(format!("generator g{gi} moves {p} out of the orbit"));
                }
            }
        }
        Ok(())
    }
}

/// One replayable clopen inclusion: `eval(word)(source) subset target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inclusion {
    pub word: GenWord,
    pub source: ClopenSet,
    pub target: ClopenSet,
}

/// Ping-pong data for `<u, v>` free: four pairwise disjoint basins plus a
/// nonempty starting set `X` disjoint from them, and the four inclusions
/// stating that each of `u, u^-1, v, v^-1` maps everything except its
/// opposite basin into its own basin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeCert {
    pub u_word: GenWord,
    pub v_word: GenWord,
    pub x: ClopenSet,
    pub u_plus: ClopenSet,
    pub u_minus: ClopenSet,
    pub v_plus: ClopenSet,
    pub v_minus: ClopenSet,
    /// epsilon = n^-k used when the basins were built (informational).
    pub epsilon_k: u32,
    /// exponent applied to the base pair (informational).
    pub m: usize,
    pub inclusions: Vec<Inclusion>,
}

fn expected_inclusions(cert: &FreeCert) -> Result<Vec<Inclusion>, CantorError> {
    let x = &cert.x;
    let up = &cert.u_plus;
    let um = &cert.u_minus;
    let vp = &cert.v_plus;
    let vm = &cert.v_minus;
    let all_but = |skip: &ClopenSet| -> Result<ClopenSet, CantorError> {
        let mut s = x.clone();
        for b in [up, um, vp, vm] {
            if b != skip {
                s = s.union(b)?;
            }
        }
        Ok(s)
    };
    Ok(vec![
        Inclusion {
            word: cert.u_word.clone(),
            source: all_but(um)?,
            target: up.clone(),
        },
        Inclusion {
            word: cert.u_word.inverse(),
            source: all_but(up)?,
            target: um.clone(),
        },
        Inclusion {
            word: cert.v_word.clone(),
            source: all_but(vm)?,
            target: vp.clone(),
        },
        Inclusion {
            word: cert.v_word.inverse(),
            source: all_but(vp)?,
            target: vm.clone(),
        },
    ])
}

impl FreeCert {
    /// Exact replay, trusting nothing from the search: rebuilds the four
    /// required inclusions from the stored sets, demands the stored list
    /// match, and re-checks every inclusion and disjointness with
    /// `map_clopen`. Passing implies `<eval(u_word), eval(v_word)>` is free
    /// by the ping-pong lemma.
    pub fn verify(&self, group: &Subgroup) -> Result<(), String> {
        if self.x.is_empty() {
            return Err("X is empty".into());
        }
        if self.u_word.is_empty() || self.v_word.is_empty() {
            return Err("u and v must be nonempty words".into());
        }
        let basins = [&self.u_plus, &self.u_minus, &self.v_plus, &self.v_minus];
        for (i, a) in basins.iter().enumerate() {
            if a.is_empty() {
                return Err(format!("basin {i} is empty"));
            }
            if !self.x.is_disjoint_from(a).map_err(|e| e.to_string())? {
                return Err(format!("X meets basin {i}"));
            }
            for b in basins.iter().skip(i + 1) {
                if !a.is_disjoint_from(b).map_err(|e| e.to_string())? {
                    return Err("basins overlap".into());
                }
            }
        }
        let expected = expected_inclusions(self).map_err(|e| e.to_string())?;
        if expected != self.inclusions {
            return Err("stored inclusions do not match the required ping-pong table".into());
        }
        for (i, inc) in self.inclusions.iter().enumerate() {
            let elem = inc.word.eval(group).map_err(|e| e.to_string())?;
            let image = elem.map_clopen(&inc.source).map_err(|e| e.to_string())?;
            if !image.is_subset_of(&inc.target).map_err(|e| e.to_string())? {
                return Err(format!("inclusion {i} fails on replay"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    FiniteOrbit(FiniteOrbitCert),
    FreeSubgroup(FreeCert),
    Undecided { word_budget: usize, orbit_budget: usize },
}

impl Certificate {
    pub fn verify(&self, group: &Subgroup) -> Result<(), String> {
        match self {
            Certificate::FiniteOrbit(c) => c.verify(group),
            Certificate::FreeSubgroup(c) => c.verify(group),
            Certificate::Undecided { .. } => Err("nothing to verify".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideConfig {
    /// Maximum length of generator words enumerated by the searches.
    pub word_budget: usize,
    /// Maximum orbit size before an orbit enumeration gives up.
    pub orbit_budget: usize,
    /// Maximum exponent tried in the contraction searches.
    pub m_cap: usize,
    /// epsilon schedule: n^-k for k in eps_min_k ..= eps_max_k.
    pub eps_min_k: u32,
    pub eps_max_k: u32,
    /// Seed for the Monte-Carlo diagnostic candidates.
    pub seed: u64,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            word_budget: 6,
            orbit_budget: 4096,
            m_cap: 64,
            eps_min_k: 2,
            eps_max_k: 8,
            seed: 0,
        }
    }
}

fn nbhd(points: &[CantorPoint], k: u32, arity: u8) -> Result<ClopenSet, CantorError> {
    crate::cantor::neighborhood(points, Epsilon::inv_power(arity, k)?, arity)
}

fn leftmost(a: &Address) -> CantorPoint {
    CantorPoint::new(a.arity(), a.digits().to_vec(), vec![0]).expect("digit 0 is always valid")
}

/// Forward closure of `p` under the generators, up to `cap` points. When it
/// closes up it equals the full group orbit (each generator permutes a
/// finite invariant set).
pub fn orbit_closure(
    group: &Subgroup,
    p: &CantorPoint,
    cap: usize,
) -> Result<Option<Vec<CantorPoint>>, TitsError> {
    let mut seen: BTreeSet<CantorPoint> = BTreeSet::new();
    let mut queue: VecDeque<CantorPoint> = VecDeque::new();
    seen.insert(p.clone());
    queue.push_back(p.clone());
    while let Some(q) = queue.pop_front() {
        for g in group.generators() {
            let r = g.apply(&q)?;
            if seen.insert(r.clone()) {
                if seen.len() > cap {
                    return Ok(None);
                }
                queue.push_back(r);
            }
        }
    }
    Ok(Some(seen.into_iter().collect()))
}

/// All reduced generator words of length 1..=max_len, shortest first, in a
/// fixed deterministic order.
pub fn enumerate_words(gen_count: usize, max_len: usize) -> Vec<GenWord> {
    let letters: Vec<(usize, i64)> = (0..gen_count).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<(usize, i64)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &(i, e) in &letters {
                if w.last().is_some_and(|&(j, d)| j == i && d == -e) {
                    continue;
                }
                let mut v = w.clone();
                v.push((i, e));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(|v| GenWord(v).simplify()));
        frontier = next;
    }
    out
}

pub enum MoverOutcome {
    /// `h(F)` is disjoint from `F`.
    Mover { word: GenWord, element: TreePair },
    FiniteOrbit(FiniteOrbitCert),
    Exhausted,
}

/// Looks for an element moving the finite set `F` off itself. Orbit
/// tracking runs first: a point of `F` with a finite orbit settles the
/// whole question, so it takes priority over any mover.
pub fn disjoint_mover(
    group: &Subgroup,
    f_set: &[CantorPoint],
    depth_budget: usize,
    orbit_budget: usize,
) -> Result<MoverOutcome, TitsError> {
    for p in f_set {
        if let Some(orbit) = orbit_closure(group, p, orbit_budget)? {
            return Ok(MoverOutcome::FiniteOrbit(FiniteOrbitCert {
                point: p.clone(),
                orbit,
            }));
        }
    }
    let base: BTreeSet<&CantorPoint> = f_set.iter().collect();
    for word in enumerate_words(group.generators().len(), depth_budget) {
        let h = word.eval(group)?;
        let mut disjoint = true;
        for p in f_set {
            if base.contains(&h.apply(p)?) {
                disjoint = false;
                break;
            }
        }
        if disjoint {
            return Ok(MoverOutcome::Mover { word, element: h });
        }
    }
    Ok(MoverOutcome::Exhausted)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicParams {
    pub walk_length: usize,
    pub samples: usize,
    pub cell_depth: usize,
    pub seed: u64,
}

impl Default for HarmonicParams {
    fn default() -> Self {
        HarmonicParams {
            walk_length: 100,
            samples: 10_000,
            cell_depth: 3,
            seed: 0,
        }
    }
}

/// Monte-Carlo estimate of the averaged push-forward
/// `(1/l) sum_i mu^i * delta_p` at clopen resolution `cell_depth`, where mu
/// weights the generators and their inverses. Diagnostic only: heavy cells
/// locate candidate points with small orbits.
pub fn harmonic_estimate(
    group: &Subgroup,
    step_weights: &[f64],
    basepoint: &[CantorPoint],
    params: &HarmonicParams,
) -> Result<Vec<(Vec<Address>, f64)>, TitsError> {
    let gens = group.generators();
    if step_weights.len() != 2 * gens.len() || step_weights.iter().any(|&w| w <= 0.0) {
        return Err(TitsError::BadWeights);
    }
    let steps: Vec<TreePair> = gens
        .iter()
        .flat_map(|g| [g.clone(), g.inverse()])
        .collect();
    let total: f64 = step_weights.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut tally: BTreeMap<Vec<Address>, usize> = BTreeMap::new();
    for _ in 0..params.samples {
        let hops = rng.gen_range(0..params.walk_length.max(1));
        let mut tuple: Vec<CantorPoint> = basepoint.to_vec();
        for _ in 0..hops {
            let mut pick = rng.gen::<f64>() * total;
            let mut idx = 0;
            for (i, &w) in step_weights.iter().enumerate() {
                pick -= w;
                if pick <= 0.0 {
                    idx = i;
                    break;
                }
            }
            for p in tuple.iter_mut() {
                *p = steps[idx].apply(p)?;
            }
        }
        let cell: Vec<Address> = tuple.iter().map(|p| p.truncate(params.cell_depth)).collect();
        *tally.entry(cell).or_default() += 1;
    }
    Ok(tally
        .into_iter()
        .map(|(c, n)| (c, n as f64 / params.samples as f64))
        .collect())
}

/// lcm of the finite order on U with every periodic-point period: raising
/// to this power fixes U pointwise and turns every periodic point into a
/// fixed point, as the ping-pong arguments assume.
fn stabilizing_power(d: &DynamicalData) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut t = d.finite_order_on_u;
    for (_, s) in d.att.iter().chain(d.rep.iter()) {
        let s = *s as u64;
        t = t / gcd(t, s) * s;
    }
    t
}

fn points_in(points: &[CantorPoint], c: &ClopenSet) -> Vec<CantorPoint> {
    points
        .iter()
        .filter(|p| c.contains_point(p))
        .cloned()
        .collect()
}

/// Ping-pong witness search for `f` and its conjugate `g = h f h^-1`.
///
/// Requires `h` to move `Per0(f) union U_f` off itself; then `f` and `g`
/// have disjoint periodic structure and suitable powers play ping-pong on
/// the complement. The returned certificate carries `u = f^(t m)` and
/// `v = (h f h^-1)^(t m)` as generator words, where `t` fixes all periodic
/// data pointwise.
pub fn pingpong_certificate(
    group: &Subgroup,
    f: &TreePair,
    f_word: &GenWord,
    h: &TreePair,
    h_word: &GenWord,
    cfg: &DecideConfig,
) -> Result<FreeCert, SearchFailure> {
    let arity = group.arity();
    let df = dynamics(f)?;
    // Disjointness hypothesis: h(Per0(f) union U_f) misses Per0(f) union U_f.
    let per0: BTreeSet<CantorPoint> = df.per0().into_iter().collect();
    let hu = h.map_clopen(&df.u)?;
    if !hu.is_disjoint_from(&df.u)? {
        return Err(SearchFailure::NotDisjoint);
    }
    for p in &per0 {
        let q = h.apply(p)?;
        if per0.contains(&q) || df.u.contains_point(&q) || hu.contains_point(p) {
            return Err(SearchFailure::NotDisjoint);
        }
    }
    if df.u.is_whole() && per0.is_empty() {
        return Err(SearchFailure::NotDisjoint);
    }
    // g = h f h^-1 as a function: apply h^-1, then f, then h.
    let g = h
        .inverse()
        .compose(f)?
        .compose(h)?
        .reduce()
        .into_inner();
    let dg = dynamics(&g)?;
    let t = {
        let a = stabilizing_power(&df);
        let b = stabilizing_power(&dg);
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        a / gcd(a, b) * b
    };
    if t > cfg.m_cap as u64 {
        return Err(SearchFailure::BudgetExceeded);
    }
    let ff = f.power(t as i64);
    let gg = g.power(t as i64);
    let dff = dynamics(&ff)?;
    let dgg = dynamics(&gg)?;
    let att_f = dff.att_points();
    let rep_f = dff.rep_points();
    let att_g = dgg.att_points();
    let rep_g = dgg.rep_points();
    if att_f.is_empty() || rep_f.is_empty() || att_g.is_empty() || rep_g.is_empty() {
        return Err(SearchFailure::NotDisjoint);
    }
    let mut saw_nonempty_x = false;
    for k in cfg.eps_min_k..=cfg.eps_max_k {
        let u_plus = nbhd(&att_f, k, arity)?;
        let u_minus = nbhd(&rep_f, k, arity)?;
        let v_plus = nbhd(&att_g, k, arity)?;
        let v_minus = nbhd(&rep_g, k, arity)?;
        let basins = [&u_plus, &u_minus, &v_plus, &v_minus];
        let mut ok = true;
        for (i, a) in basins.iter().enumerate() {
            for b in basins.iter().skip(i + 1) {
                if !a.is_disjoint_from(b)? {
                    ok = false;
                }
            }
            if !a.is_disjoint_from(&dff.u)? || !a.is_disjoint_from(&dgg.u)? {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let x = dff
            .u
            .union(&dgg.u)?
            .union(&nbhd(&dff.per0(), k, arity)?)?
            .union(&nbhd(&dgg.per0(), k, arity)?)?
            .complement();
        if x.is_empty() {
            continue;
        }
        saw_nonempty_x = true;
        let mut u = ff.clone();
        let mut v = gg.clone();
        for m in 1..=cfg.m_cap {
            let cert = FreeCert {
                u_word: f_word.power(t as i64 * m as i64),
                v_word: h_word
                    .inverse()
                    .concat(f_word)
                    .concat(h_word)
                    .power(t as i64 * m as i64),
                x: x.clone(),
                u_plus: u_plus.clone(),
                u_minus: u_minus.clone(),
                v_plus: v_plus.clone(),
                v_minus: v_minus.clone(),
                epsilon_k: k,
                m,
                inclusions: Vec::new(),
            };
            let expected = expected_inclusions(&cert)?;
            let elems = [u.clone(), u.inverse(), v.clone(), v.inverse()];
            let pass = expected
                .iter()
                .zip(elems.iter())
                .all(|(inc, e)| {
                    e.map_clopen(&inc.source)
                        .and_then(|img| Ok(img.is_subset_of(&inc.target)?))
                        .unwrap_or(false)
                });
            if pass {
                let cert = FreeCert {
                    inclusions: expected,
                    ..cert
                };
                // The search checked the inclusions on the evaluated
                // elements; replay through the words must agree.
                debug_assert!(cert.verify(group).is_ok());
                return Ok(cert);
            }
            if m < cfg.m_cap {
                u = u.compose(&ff)?.reduce().into_inner();
                v = v.compose(&gg)?.reduce().into_inner();
            }
        }
    }
    if saw_nonempty_x {
        Err(SearchFailure::BudgetExceeded)
    } else {
        Err(SearchFailure::EmptyPingPongTable)
    }
}

/// Output of [`w_epsilon`]: an element of the form `g^m1 f^m2` (f applied
/// first) whose periodic data collapses into small neighborhoods of
/// `Per0(f) union Per0(g)`, plus the invariant contracting set `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WEpsilonData {
    pub w: TreePair,
    pub w_word: GenWord,
    pub m1: usize,
    pub m2: usize,
    pub eps0_k: u32,
    pub eps1_k: u32,
    pub x: ClopenSet,
}

/// Searches for `w = g^m1 f^m2` with, exactly verified on the working
/// domain `C` (the whole Cantor set when `domain` is `None`):
///
/// 1. invariance `w(X) subset X`, and
/// 2. contraction `w(C - N_eps0(Rep f union Rep g)) subset X`,
///
/// where `X = N_eps0(Att f) union N_eps0(Att g - Rep f) union A` and `A` is
/// the annulus `N_eps0(Att g intersect Rep f) - N_eps1(...)`; afterwards the
/// periodic data of `w` inside `C` is checked to sit in
/// `N_eps0(Per0 f union Per0 g)`.
#[allow(clippy::too_many_arguments)]
pub fn w_epsilon(
    group: &Subgroup,
    f: &TreePair,
    f_word: &GenWord,
    g: &TreePair,
    g_word: &GenWord,
    eps_k: u32,
    domain: Option<&ClopenSet>,
    cfg: &DecideConfig,
) -> Result<WEpsilonData, SearchFailure> {
    let arity = group.arity();
    let whole = ClopenSet::whole(arity);
    let c = domain.unwrap_or(&whole).clone();
    if c.is_empty() {
        return Err(SearchFailure::HypothesisFailed);
    }
    let df0 = dynamics(f)?;
    let dg0 = dynamics(g)?;
    if !df0.u.intersect(&dg0.u)?.is_disjoint_from(&c)? {
        return Err(SearchFailure::HypothesisFailed);
    }
    let t = {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let a = stabilizing_power(&df0);
        let b = stabilizing_power(&dg0);
        a / gcd(a, b) * b
    };
    if t > cfg.m_cap as u64 {
        return Err(SearchFailure::BudgetExceeded);
    }
    let ff = f.power(t as i64);
    let gg = g.power(t as i64);
    // Both factors must preserve the working domain.
    if ff.map_clopen(&c)? != c || gg.map_clopen(&c)? != c {
        return Err(SearchFailure::HypothesisFailed);
    }
    let dff = dynamics(&ff)?;
    let dgg = dynamics(&gg)?;
    let att_f = points_in(&dff.att_points(), &c);
    let rep_f: BTreeSet<CantorPoint> = points_in(&dff.rep_points(), &c).into_iter().collect();
    let att_g = points_in(&dgg.att_points(), &c);
    let rep_g = points_in(&dgg.rep_points(), &c);
    let att_g_minus_rep_f: Vec<CantorPoint> = att_g
        .iter()
        .filter(|p| !rep_f.contains(p))
        .cloned()
        .collect();
    let att_g_cap_rep_f: Vec<CantorPoint> = att_g
        .iter()
        .filter(|p| rep_f.contains(p))
        .cloned()
        .collect();
    let rep_f: Vec<CantorPoint> = rep_f.into_iter().collect();
    let per_union: Vec<CantorPoint> = {
        let mut v = points_in(&dff.per0(), &c);
        v.extend(points_in(&dgg.per0(), &c));
        v.sort();
        v.dedup();
        v
    };
    let mut rep_both = rep_f.clone();
    rep_both.extend(rep_g.iter().cloned());
    rep_both.sort();
    rep_both.dedup();

    // Powers of the two factors, extended lazily.
    let mut f_pows: Vec<TreePair> = vec![TreePair::identity(arity), ff.clone()];
    let mut g_pows: Vec<TreePair> = vec![TreePair::identity(arity), gg.clone()];
    let pow = |pows: &mut Vec<TreePair>, base: &TreePair, m: usize| -> Result<TreePair, SearchFailure> {
        while pows.len() <= m {
            let next = pows.last().unwrap().compose(base)?.reduce().into_inner();
            pows.push(next);
        }
        Ok(pows[m].clone())
    };

    for k1 in (eps_k + 1)..=cfg.eps_max_k.max(eps_k + 1) {
        let annulus = nbhd(&att_g_cap_rep_f, eps_k, arity)?
            .difference(&nbhd(&att_g_cap_rep_f, k1, arity)?)?;
        let x = nbhd(&att_f, eps_k, arity)?
            .union(&nbhd(&att_g_minus_rep_f, eps_k, arity)?)?
            .union(&annulus)?
            .intersect(&c)?;
        if x.is_empty() {
            continue;
        }
        let contract_src = c.difference(&nbhd(&rep_both, eps_k, arity)?)?;
        for total in 2..=(2 * cfg.m_cap) {
            for m2 in 1..total.min(cfg.m_cap + 1) {
                let m1 = total - m2;
                if m1 == 0 || m1 > cfg.m_cap {
                    continue;
                }
                let fp = pow(&mut f_pows, &ff, m2)?;
                let gp = pow(&mut g_pows, &gg, m1)?;
                let w = fp.compose(&gp)?.reduce().into_inner();
                if !w.map_clopen(&x)?.is_subset_of(&x)? {
                    continue;
                }
                if !w.map_clopen(&contract_src)?.is_subset_of(&x)? {
                    continue;
                }
                // Final gate: the periodic data of w inside C collapses
                // into the target neighborhood.
                let dw = dynamics(&w)?;
                let target = nbhd(&per_union, eps_k, arity)?;
                let u_ok = dw.u.intersect(&c)?.is_subset_of(&target)?;
                let pts_ok = points_in(&dw.per0(), &c)
                    .iter()
                    .all(|p| target.contains_point(p));
                if u_ok && pts_ok {
                    let w_word = f_word
                        .power((t * m2 as u64) as i64)
                        .concat(&g_word.power((t * m1 as u64) as i64));
                    return Ok(WEpsilonData {
                        w,
                        w_word,
                        m1,
                        m2,
                        eps0_k: eps_k,
                        eps1_k: k1,
                        x,
                    });
                }
            }
        }
    }
    Err(SearchFailure::BudgetExceeded)
}

/// Result of the inductive reduction over a generator subset `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KfData {
    pub h: TreePair,
    pub h_word: GenWord,
    /// The accumulated finite set `S_F` (union of the Per0 sets).
    pub s_f: Vec<CantorPoint>,
    /// `K_F`: intersection of the `U` sets over `F`.
    pub k_f: ClopenSet,
}

/// Builds `h` with all periodic data inside `K_F union N_eps(S_F)` and with
/// `K_F` fixed pointwise, by induction over the member list (the result
/// depends on the list order).
pub fn kf_reduce(
    group: &Subgroup,
    members: &[(TreePair, GenWord)],
    eps_k: u32,
    cfg: &DecideConfig,
) -> Result<KfData, SearchFailure> {
    let arity = group.arity();
    let Some((first, first_word)) = members.first() else {
        return Err(SearchFailure::Internal(TitsError::EmptyGenerators));
    };
    let d0 = dynamics(first)?;
    let t0 = stabilizing_power(&d0);
    if t0 > cfg.m_cap as u64 {
        return Err(SearchFailure::BudgetExceeded);
    }
    let mut h = first.power(t0 as i64);
    let mut h_word = first_word.power(t0 as i64);
    let mut s_f = d0.per0();
    let mut k_f = d0.u.clone();
    for (g, g_word) in &members[1..] {
        let dg = dynamics(g)?;
        let dh = dynamics(&h)?;
        let overlap = dh.u.intersect(&dg.u)?;
        let c = overlap.complement();
        s_f.extend(dg.per0());
        s_f.sort();
        s_f.dedup();
        k_f = k_f.intersect(&dg.u)?;
        if c.is_empty() {
            // Both have finite order everywhere; a common power is the
            // identity, which trivially satisfies the invariants.
            let tg = stabilizing_power(&dg);
            let t = t0.max(tg); // both already fix everything pointwise at lcm
            let _ = t;
            h = TreePair::identity(arity);
            h_word = GenWord::identity();
            continue;
        }
        let data = w_epsilon(group, &h, &h_word, g, g_word, eps_k, Some(&c), cfg)?;
        h = data.w;
        h_word = data.w_word;
    }
    // Exact final verification of the two contract clauses.
    let dh = dynamics(&h)?;
    let target = k_f.union(&nbhd(&s_f, eps_k, arity)?)?;
    if !dh.u.is_subset_of(&target)? {
        return Err(SearchFailure::BudgetExceeded);
    }
    if !dh.per0().iter().all(|p| target.contains_point(p)) {
        return Err(SearchFailure::BudgetExceeded);
    }
    if !h.is_identity_on(&k_f)? {
        return Err(SearchFailure::BudgetExceeded);
    }
    Ok(KfData {
        h,
        h_word,
        s_f,
        k_f,
    })
}

/// Bounded search for a finite orbit: candidate points are the leftmost
/// points of `K_S = intersection of U_g` intervals, every periodic point of
/// every budgeted word, and the heavy cells of the Monte-Carlo diagnostic.
pub fn finite_orbit_search(
    group: &Subgroup,
    cfg: &DecideConfig,
) -> Result<Option<FiniteOrbitCert>, TitsError> {
    let mut tried: BTreeSet<CantorPoint> = BTreeSet::new();
    let try_point = |group: &Subgroup,
                         p: CantorPoint,
                         tried: &mut BTreeSet<CantorPoint>|
     -> Result<Option<FiniteOrbitCert>, TitsError> {
        if !tried.insert(p.clone()) {
            return Ok(None);
        }
        Ok(orbit_closure(group, &p, cfg.orbit_budget)?.map(|orbit| FiniteOrbitCert {
            point: p,
            orbit,
        }))
    };
    let mut k_s = ClopenSet::whole(group.arity());
    let mut seen: HashSet<TreePair> = HashSet::new();
    for word in enumerate_words(group.generators().len(), cfg.word_budget) {
        let e = word.eval(group)?;
        if !seen.insert(e.clone()) {
            continue;
        }
        let d = dynamics(&e)?;
        k_s = k_s.intersect(&d.u)?;
        for p in d.per0() {
            if let Some(cert) = try_point(group, p, &mut tried)? {
                return Ok(Some(cert));
            }
        }
        for a in k_s.intervals().to_vec() {
            if let Some(cert) = try_point(group, leftmost(&a), &mut tried)? {
                return Ok(Some(cert));
            }
        }
    }
    // Monte-Carlo heavy cells as a last candidate source.
    let weights = vec![1.0; 2 * group.generators().len()];
    let base = vec![leftmost(&Address::root(group.arity()))];
    let params = HarmonicParams {
        walk_length: 50,
        samples: 2000,
        cell_depth: 3,
        seed: cfg.seed,
    };
    let mut cells = harmonic_estimate(group, &weights, &base, &params)?;
    cells.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    for (cell, mass) in cells.into_iter().take(4) {
        if mass <= 0.05 {
            break;
        }
        for a in cell {
            if let Some(cert) = try_point(group, leftmost(&a), &mut tried)? {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// The decision procedure: finite-orbit search first, then the
/// free-subgroup pipeline (candidate `f` with attracting-repelling part,
/// mover `h`, ping-pong on `f` and `h f h^-1`), then a `w_epsilon`
/// escalation that shrinks periodic sets when `U`-sets block the direct
/// route. Deterministic given the config.
pub fn decide(group: &Subgroup, cfg: &DecideConfig) -> Result<Certificate, TitsError> {
    if let Some(cert) = finite_orbit_search(group, cfg)? {
        debug_assert!(cert.verify(group).is_ok());
        return Ok(Certificate::FiniteOrbit(cert));
    }
    // Candidate f's: budgeted words with nonempty attracting-repelling part.
    let mut seen: HashSet<TreePair> = HashSet::new();
    let mut candidates: Vec<(TreePair, GenWord, DynamicalData)> = Vec::new();
    for word in enumerate_words(group.generators().len(), cfg.word_budget) {
        let e = word.eval(group)?;
        if !seen.insert(e.clone()) {
            continue;
        }
        let d = dynamics(&e)?;
        if !d.v.is_empty() && !d.att.is_empty() && !d.rep.is_empty() {
            candidates.push((e, word, d));
        }
    }
    for (f, f_word, d) in &candidates {
        let mut f_set = d.per0();
        for a in d.u.intervals() {
            f_set.push(leftmost(a));
        }
        f_set.sort();
        f_set.dedup();
        match disjoint_mover(group, &f_set, cfg.word_budget, cfg.orbit_budget)? {
            MoverOutcome::FiniteOrbit(cert) => {
                debug_assert!(cert.verify(group).is_ok());
                return Ok(Certificate::FiniteOrbit(cert));
            }
            MoverOutcome::Mover { word, element } => {
                match pingpong_certificate(group, f, f_word, &element, &word, cfg) {
                    Ok(cert) => return Ok(Certificate::FreeSubgroup(cert)),
                    Err(SearchFailure::Internal(e)) => return Err(e),
                    Err(_) => {}
                }
            }
            MoverOutcome::Exhausted => {}
        }
    }
    // Escalation: collapse periodic data of a pair with disjoint U-sets via
    // w_epsilon, then retry the pipeline on the collapsed element.
    let mut attempts = 0usize;
    for i in 0..candidates.len() {
        for j in 0..candidates.len() {
            if i == j || attempts >= 12 {
                continue;
            }
            let (f, f_word, df) = &candidates[i];
            let (g, g_word, dg) = &candidates[j];
            if !df.u.is_disjoint_from(&dg.u)? {
                continue;
            }
            attempts += 1;
            let Ok(data) = w_epsilon(
                group,
                f,
                f_word,
                g,
                g_word,
                cfg.eps_min_k,
                None,
                cfg,
            ) else {
                continue;
            };
            let dw = dynamics(&data.w)?;
            if dw.att.is_empty() || dw.rep.is_empty() {
                continue;
            }
            let mut f_set = dw.per0();
            for a in dw.u.intervals() {
                f_set.push(leftmost(a));
            }
            f_set.sort();
            f_set.dedup();
            match disjoint_mover(group, &f_set, cfg.word_budget, cfg.orbit_budget)? {
                MoverOutcome::FiniteOrbit(cert) => {
                    return Ok(Certificate::FiniteOrbit(cert));
                }
                MoverOutcome::Mover { word, element } => {
                    match pingpong_certificate(group, &data.w, &data.w_word, &element, &word, cfg)
                    {
                        Ok(cert) => return Ok(Certificate::FreeSubgroup(cert)),
                        Err(SearchFailure::Internal(e)) => return Err(e),
                        Err(_) => {}
                    }
                }
                MoverOutcome::Exhausted => {}
            }
        }
    }
    Ok(Certificate::Undecided {
        word_budget: cfg.word_budget,
        orbit_budget: cfg.orbit_budget,
    })
}

/// Smoke test implied by a free certificate: every short nonempty reduced
/// word in `u, v` is a nontrivial element.
pub fn free_words_nontrivial(
    cert: &FreeCert,
    group: &Subgroup,
    max_len: usize,
) -> Result<bool, TitsError> {
    let u = cert.u_word.eval(group)?;
    let v = cert.v_word.eval(group)?;
    let pair_group = Subgroup::new(vec![u, v])?;
    for word in enumerate_words(2, max_len) {
        let e = word.eval(&pair_group)?;
        if e.reduce().as_pair().is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::revealing::brute_dynamics;

    fn pt(pre: &str, per: &str) -> CantorPoint {
        CantorPoint::new(
            2,
            pre.bytes().map(|b| b - b'0').collect(),
            per.bytes().map(|b| b - b'0').collect(),
        )
        .unwrap()
    }

    fn fast_cfg() -> DecideConfig {
        DecideConfig {
            word_budget: 4,
            orbit_budget: 512,
            m_cap: 24,
            ..DecideConfig::default()
        }
    }

    #[test]
    fn genword_algebra() {
        let g = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        let w = GenWord::gen(0).concat(&GenWord::gen(1)).concat(&GenWord::gen(0).inverse());
        let e = w.eval(&g).unwrap();
        let direct = fixtures::f0()
            .compose(&fixtures::h())
            .unwrap()
            .compose(&fixtures::f0().inverse())
            .unwrap();
        assert!(e.equal(&direct).unwrap());
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(GenWord::gen(0).power(3).len(), 3);
        assert_eq!(w.to_string(), "g0 g1 g0^-1");
    }

    #[test]
    fn orbit_closure_examples() {
        let swap = Subgroup::new(vec![fixtures::swap()]).unwrap();
        let orbit = orbit_closure(&swap, &pt("", "0"), 16).unwrap().unwrap();
        assert_eq!(orbit, vec![pt("", "0"), pt("1", "0")]);
        let c4 = Subgroup::new(vec![fixtures::c4()]).unwrap();
        let orbit = orbit_closure(&c4, &pt("", "0"), 16).unwrap().unwrap();
        assert_eq!(orbit.len(), 4);
        let free = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        assert!(orbit_closure(&free, &pt("", "0"), 64).unwrap().is_none());
    }

    #[test]
    fn disjoint_mover_examples() {
        let just_f0 = Subgroup::new(vec![fixtures::f0()]).unwrap();
        match disjoint_mover(&just_f0, &[pt("", "0")], 3, 64).unwrap() {
            MoverOutcome::FiniteOrbit(c) => {
                assert_eq!(c.orbit, vec![pt("", "0")]);
                c.verify(&just_f0).unwrap();
            }
            _ => panic!("expected a finite orbit"),
        }
        let fh = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        match disjoint_mover(&fh, &[pt("", "0"), pt("", "1")], 3, 64).unwrap() {
            MoverOutcome::Mover { word, element } => {
                assert_eq!(word, GenWord::gen(1));
                assert!(element.equal(&fixtures::h()).unwrap());
            }
            _ => panic!("expected a mover"),
        }
        let swap = Subgroup::new(vec![fixtures::swap()]).unwrap();
        match disjoint_mover(&swap, &[pt("", "0")], 3, 64).unwrap() {
            MoverOutcome::FiniteOrbit(c) => assert_eq!(c.orbit.len(), 2),
            _ => panic!("orbit tracking must win over the mover"),
        }
    }

    #[test]
    fn harmonic_swap_is_half_half() {
        let swap = Subgroup::new(vec![fixtures::swap()]).unwrap();
        let cells = harmonic_estimate(
            &swap,
            &[1.0, 1.0],
            &[pt("", "0")],
            &HarmonicParams {
                cell_depth: 1,
                ..HarmonicParams::default()
            },
        )
        .unwrap();
        assert_eq!(cells.len(), 2);
        for (_, mass) in cells {
            assert!((mass - 0.5).abs() < 0.05, "mass {mass} too far from 1/2");
        }
    }

    #[test]
    fn harmonic_identity_is_dirac() {
        let id = Subgroup::new(vec![TreePair::identity(2)]).unwrap();
        let cells = harmonic_estimate(
            &id,
            &[1.0, 1.0],
            &[pt("", "1")],
            &HarmonicParams::default(),
        )
        .unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].1, 1.0);
    }

    #[test]
    fn harmonic_f0_drifts_to_attractor() {
        let g = Subgroup::new(vec![fixtures::f0()]).unwrap();
        // Heavily forward-biased walk accumulates at the attractor (0).
        let cells = harmonic_estimate(
            &g,
            &[0.95, 0.05],
            &[pt("10", "0")],
            &HarmonicParams {
                cell_depth: 2,
                ..HarmonicParams::default()
            },
        )
        .unwrap();
        let top = cells
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_eq!(top.0[0].digits(), &[0, 0]);
    }

    #[test]
    fn pingpong_f0_h() {
        let group = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        let cert = pingpong_certificate(
            &group,
            &fixtures::f0(),
            &GenWord::gen(0),
            &fixtures::h(),
            &GenWord::gen(1),
            &DecideConfig::default(),
        )
        .unwrap();
        cert.verify(&group).unwrap();
        assert!(free_words_nontrivial(&cert, &group, 4).unwrap());
    }

    #[test]
    fn pingpong_rejects_degenerate_h() {
        let group = Subgroup::new(vec![fixtures::f0()]).unwrap();
        let id = TreePair::identity(2);
        assert_eq!(
            pingpong_certificate(
                &group,
                &fixtures::f0(),
                &GenWord::gen(0),
                &id,
                &GenWord::identity(),
                &DecideConfig::default(),
            )
            .unwrap_err(),
            SearchFailure::NotDisjoint
        );
        assert_eq!(
            pingpong_certificate(
                &group,
                &id,
                &GenWord::identity(),
                &fixtures::f0(),
                &GenWord::gen(0),
                &DecideConfig::default(),
            )
            .unwrap_err(),
            SearchFailure::NotDisjoint
        );
    }

    /// f acts as an f0-copy inside K_1 and fixes K_0; g mirrors it.
    fn split_pair() -> (TreePair, TreePair) {
        let a = |s: &str| Address::new(2, s.bytes().map(|b| b - b'0').collect()).unwrap();
        let f = TreePair::from_pieces(
            2,
            vec![
                (a("0"), a("0")),
                (a("10"), a("100")),
                (a("110"), a("101")),
                (a("111"), a("11")),
            ],
        )
        .unwrap();
        let g = TreePair::from_pieces(
            2,
            vec![
                (a("1"), a("1")),
                (a("00"), a("000")),
                (a("010"), a("001")),
                (a("011"), a("01")),
            ],
        )
        .unwrap();
        (f, g)
    }

    #[test]
    fn w_epsilon_disjoint_u_sets() {
        let (f, g) = split_pair();
        let group = Subgroup::new(vec![f.clone(), g.clone()]).unwrap();
        let cfg = DecideConfig::default();
        let data = w_epsilon(
            &group,
            &f,
            &GenWord::gen(0),
            &g,
            &GenWord::gen(1),
            2,
            None,
            &cfg,
        )
        .unwrap();
        // All periodic data of w sits near Per0(f) union Per0(g).
        let dw = dynamics(&data.w).unwrap();
        let df = dynamics(&f).unwrap();
        let dg = dynamics(&g).unwrap();
        let mut per = df.per0();
        per.extend(dg.per0());
        let target = nbhd(&per, 2, 2).unwrap();
        assert!(dw.u.is_subset_of(&target).unwrap());
        for p in dw.per0() {
            assert!(target.contains_point(&p));
        }
        assert!(data.w_word.eval(&group).unwrap().equal(&data.w).unwrap());
    }

    #[test]
    fn w_epsilon_conjugate_f0() {
        // f0 and its conjugate by h: both U = empty, trivially disjoint.
        let f0 = fixtures::f0();
        let h = fixtures::h();
        let g = h
            .inverse()
            .compose(&f0)
            .unwrap()
            .compose(&h)
            .unwrap()
            .reduce()
            .into_inner();
        let group = Subgroup::new(vec![f0.clone(), h]).unwrap();
        let data = w_epsilon(
            &group,
            &f0,
            &GenWord::gen(0),
            &g,
            &GenWord::gen(1).inverse().concat(&GenWord::gen(0)).concat(&GenWord::gen(1)),
            2,
            None,
            &DecideConfig::default(),
        )
        .unwrap();
        assert!(data.m1 >= 1 && data.m2 >= 1);
    }

    #[test]
    fn w_epsilon_rejects_overlapping_u() {
        let sw = fixtures::swap();
        let group = Subgroup::new(vec![sw.clone()]).unwrap();
        assert_eq!(
            w_epsilon(
                &group,
                &sw,
                &GenWord::gen(0),
                &sw,
                &GenWord::gen(0),
                2,
                None,
                &DecideConfig::default(),
            )
            .unwrap_err(),
            SearchFailure::HypothesisFailed
        );
    }

    #[test]
    fn kf_reduce_base_case() {
        let group = Subgroup::new(vec![fixtures::f0()]).unwrap();
        let data = kf_reduce(
            &group,
            &[(fixtures::f0(), GenWord::gen(0))],
            3,
            &DecideConfig::default(),
        )
        .unwrap();
        assert_eq!(data.s_f, vec![pt("", "0"), pt("", "1")]);
        assert!(data.k_f.is_empty());
        assert!(data.h.equal(&fixtures::f0()).unwrap());
    }

    #[test]
    fn kf_reduce_two_steps() {
        let (f, g) = split_pair();
        let group = Subgroup::new(vec![f.clone(), g.clone()]).unwrap();
        let data = kf_reduce(
            &group,
            &[(f, GenWord::gen(0)), (g, GenWord::gen(1))],
            2,
            &DecideConfig::default(),
        )
        .unwrap();
        assert!(data.k_f.is_empty());
        assert!(data.h_word.eval(&group).unwrap().equal(&data.h).unwrap());
    }

    #[test]
    fn kf_reduce_all_finite_order() {
        let group = Subgroup::new(vec![fixtures::swap(), fixtures::c4()]).unwrap();
        let data = kf_reduce(
            &group,
            &[
                (fixtures::swap(), GenWord::gen(0)),
                (fixtures::c4(), GenWord::gen(1)),
            ],
            2,
            &DecideConfig::default(),
        )
        .unwrap();
        assert!(data.k_f.is_whole());
        assert!(data.h.is_identity());
    }

    #[test]
    fn finite_orbit_search_examples() {
        let swap = Subgroup::new(vec![fixtures::swap()]).unwrap();
        let cert = finite_orbit_search(&swap, &fast_cfg()).unwrap().unwrap();
        assert_eq!(cert.orbit.len(), 2);
        cert.verify(&swap).unwrap();
        let c4 = Subgroup::new(vec![fixtures::c4()]).unwrap();
        let cert = finite_orbit_search(&c4, &fast_cfg()).unwrap().unwrap();
        assert_eq!(cert.orbit.len(), 4);
        cert.verify(&c4).unwrap();
        let free = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        let cfg = DecideConfig {
            word_budget: 2,
            orbit_budget: 256,
            ..DecideConfig::default()
        };
        assert!(finite_orbit_search(&free, &cfg).unwrap().is_none());
    }

    #[test]
    fn decide_finite_orbit_groups() {
        for gens in [vec![fixtures::swap()], vec![fixtures::c4()], vec![fixtures::swap(), fixtures::c4()]] {
            let group = Subgroup::new(gens).unwrap();
            match decide(&group, &fast_cfg()).unwrap() {
                Certificate::FiniteOrbit(c) => c.verify(&group).unwrap(),
                other => panic!("expected a finite orbit, got {other:?}"),
            }
        }
    }

    #[test]
    fn decide_free_group() {
        let group = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        match decide(&group, &fast_cfg()).unwrap() {
            Certificate::FreeSubgroup(c) => {
                c.verify(&group).unwrap();
                assert!(free_words_nontrivial(&c, &group, 4).unwrap());
            }
            other => panic!("expected a free subgroup, got {other:?}"),
        }
    }

    #[test]
    fn certificate_mutations_fail_verification() {
        let group = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        let cert = pingpong_certificate(
            &group,
            &fixtures::f0(),
            &GenWord::gen(0),
            &fixtures::h(),
            &GenWord::gen(1),
            &DecideConfig::default(),
        )
        .unwrap();
        cert.verify(&group).unwrap();
        let a = |s: &str| Address::new(2, s.bytes().map(|b| b - b'0').collect()).unwrap();
        // Shrinking a target, growing a source, or emptying X must all be
        // caught by replay.
        let mut broken = cert.clone();
        broken.inclusions[0].target = ClopenSet::from_interval(a("10"));
        assert!(broken.verify(&group).is_err());
        let mut broken = cert.clone();
        broken.inclusions[1].source = ClopenSet::whole(2);
        assert!(broken.verify(&group).is_err());
        let mut broken = cert.clone();
        broken.x = ClopenSet::empty(2);
        assert!(broken.verify(&group).is_err());
        let mut broken = cert.clone();
        broken.u_plus = broken.u_plus.union(&broken.u_minus).unwrap();
        assert!(broken.verify(&group).is_err());
        let mut broken = cert.clone();
        broken.u_word = cert.v_word.clone();
        assert!(broken.verify(&group).is_err());
    }

    #[test]
    fn undecided_on_tiny_budget() {
        // The free pair under a budget too small to find any mover or
        // candidate still terminates, honestly undecided or certified.
        let group = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        let cfg = DecideConfig {
            word_budget: 1,
            orbit_budget: 8,
            m_cap: 1,
            eps_max_k: 2,
            ..DecideConfig::default()
        };
        match decide(&group, &cfg).unwrap() {
            Certificate::Undecided { .. } => {}
            Certificate::FreeSubgroup(c) => c.verify(&group).unwrap(),
            Certificate::FiniteOrbit(_) => panic!("free group cannot have a finite orbit"),
        }
    }

    #[test]
    fn brute_force_agrees_on_decide_inputs() {
        // Spot-check that the certificate's u, v really have the dynamics
        // the basins suggest, via the independent oracle.
        let group = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
        let cert = pingpong_certificate(
            &group,
            &fixtures::f0(),
            &GenWord::gen(0),
            &fixtures::h(),
            &GenWord::gen(1),
            &DecideConfig::default(),
        )
        .unwrap();
        let u = cert.u_word.eval(&group).unwrap();
        let b = brute_dynamics(&u, 16, 8);
        for p in b.att_points() {
            assert!(cert.u_plus.contains_point(&p));
        }
        for p in b.rep_points() {
            assert!(cert.u_minus.contains_point(&p));
        }
    }
}
