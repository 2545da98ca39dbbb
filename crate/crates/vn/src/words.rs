//! Free-group word combinatorics: reduction, the power invariant `c(w)`,
//! automorphism norms with Cooper's cancellation bound, and the surface
//! group word problem via Dehn's algorithm.
//!
//! The alphabet splits into surface letters (`a0`, `b1`, ...) and the
//! prefix-indexed family `x_I` subject to `x_I = x_{I0} x_{I1}`. Projection
//! to the surface group kills every `x` letter.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {0} does not belong to the genus-{1} surface alphabet")]
    AlphabetMismatch(String, u32),
    #[error("inverse map is not inverse to the forward map on generator {0}")]
    BadInverse(String),
    #[error("automorphism image missing for generator {0}")]
    MissingImage(String),
    #[error("expansion depth {0} exceeds the supported maximum {1}")]
    DepthOverflow(usize, usize),
    #[error("x index must be a binary string, got digit {0}")]
    BadXIndex(u8),
}

const MAX_X_DEPTH: usize = 32;

/// A generator symbol: a named letter or an indexed `x_I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    Sym(String),
    X(Vec<u8>),
}

impl Gen {
    pub fn sym(s: &str) -> Gen {
        Gen::Sym(s.to_string())
    }

    pub fn x(index: &[u8]) -> Result<Gen, WordError> {
        if let Some(&d) = index.iter().find(|&&d| d > 1) {
            return Err(WordError::BadXIndex(d));
        }
        Ok(Gen::X(index.to_vec()))
    }

    pub fn is_x(&self) -> bool {
        matches!(self, Gen::X(_))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Sym(s) => f.write_str(s),
            Gen::X(ix) => {
                f.write_str("x")?;
                for d in ix {
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Gen,
    pub exp: i8, // +1 or -1
}

impl Letter {
    pub fn new(gen: Gen, exp: i8) -> Letter {
        debug_assert!(exp == 1 || exp == -1);
        Letter { gen, exp }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            exp: -self.exp,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}^-1", self.gen)
        }
    }
}

/// A word over the alphabet; not automatically reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn power(&self, k: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            v.extend(self.0.iter().cloned());
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Free reduction: cancels adjacent inverse pairs.
pub fn reduce(w: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for l in &w.0 {
        if stack.last().is_some_and(|t| t.cancels(l)) {
            stack.pop();
        } else {
            stack.push(l.clone());
        }
    }
    Word(stack)
}

/// Writes `w = u . core . u^-1` with `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let mut core = reduce(w).0;
    let mut conj = Vec::new();
    while core.len() >= 2 && core[0].cancels(core.last().unwrap()) {
        conj.push(core.remove(0));
        core.pop();
    }
    (Word(conj), Word(core))
}

/// Length of the longest common prefix of two reduced words.
pub fn co(w: &Word, w2: &Word) -> usize {
    w.0.iter().zip(w2.0.iter()).take_while(|(a, b)| a == b).count()
}

/// Members of the standard basis `X_n`: indices ending in 0 (plus the whole
/// family of derived symbols); kept as a thin wrapper so basis membership is
/// explicit at call sites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XGenerator {
    pub index: Vec<u8>,
}

impl XGenerator {
    pub fn new(index: Vec<u8>) -> Result<Self, WordError> {
        if let Some(&d) = index.iter().find(|&&d| d > 1) {
            return Err(WordError::BadXIndex(d));
        }
        Ok(XGenerator { index })
    }

    /// Basis rule: the index ends in 0.
    pub fn is_basis(&self) -> bool {
        self.index.last() == Some(&0)
    }
}

/// An automorphism of the free group on a declared basis, given by its
/// images and a verified inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeAutomorphism {
    forward: BTreeMap<Gen, Word>,
    backward: BTreeMap<Gen, Word>,
}

impl FreeAutomorphism {
    pub fn new(
        forward: BTreeMap<Gen, Word>,
        backward: BTreeMap<Gen, Word>,
    ) -> Result<Self, WordError> {
        if forward.len() != backward.len()
            || forward.keys().zip(backward.keys()).any(|(a, b)| a != b)
        {
            return Err(WordError::MissingImage(
                forward
                    .keys()
                    .chain(backward.keys())
                    .next()
                    .map(|g| g.to_string())
                    .unwrap_or_default(),
            ));
        }
        let auto = FreeAutomorphism { forward, backward };
        for g in auto.forward.keys() {
            let single = Word(vec![Letter::new(g.clone(), 1)]);
            let round = auto.apply_map(&auto.apply_map(&single, false)?, true)?;
            let round2 = auto.apply_map(&auto.apply_map(&single, true)?, false)?;
            if reduce(&round) != single || reduce(&round2) != single {
                return Err(WordError::BadInverse(g.to_string()));
            }
        }
        Ok(auto)
    }

    pub fn identity(basis: &[Gen]) -> Self {
        let map: BTreeMap<Gen, Word> = basis
            .iter()
            .map(|g| (g.clone(), Word(vec![Letter::new(g.clone(), 1)])))
            .collect();
        FreeAutomorphism {
            forward: map.clone(),
            backward: map,
        }
    }

    pub fn basis(&self) -> impl Iterator<Item = &Gen> {
        self.forward.keys()
    }

    fn apply_map(&self, w: &Word, backward: bool) -> Result<Word, WordError> {
        let map = if backward { &self.backward } else { &self.forward };
        let mut out = Vec::new();
        for l in &w.0 {
            let img = map
                .get(&l.gen)
                .ok_or_else(|| WordError::MissingImage(l.gen.to_string()))?;
            if l.exp == 1 {
                out.extend(img.0.iter().cloned());
            } else {
                out.extend(img.0.iter().rev().map(Letter::inverse));
            }
        }
        Ok(Word(out))
    }

    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        Ok(reduce(&self.apply_map(w, false)?))
    }

    pub fn apply_inverse(&self, w: &Word) -> Result<Word, WordError> {
        Ok(reduce(&self.apply_map(w, true)?))
    }
}

/// `Lambda(f)`: the longest image of a basis generator under `f` or `f^-1`.
pub fn lambda(f: &FreeAutomorphism) -> usize {
    f.forward
        .values()
        .chain(f.backward.values())
        .map(|w| reduce(w).len())
        .max()
        .unwrap_or(1)
        .max(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CooperOutcome {
    /// All tested pairs satisfied the bound; `max_observed <= bound`.
    Pass { bound: usize, max_observed: usize },
    /// A violating pair (would indicate an implementation bug).
    Counterexample { w: Word, w2: Word, observed: usize },
}

/// Exhaustively checks `co(f(w), f(w')) <= Lambda(f)^2` over all reduced
/// pairs of length <= `length_bound` with `co(w, w') = 0`.
pub fn cooper_check(f: &FreeAutomorphism, length_bound: usize) -> Result<CooperOutcome, WordError> {
    let basis: Vec<Gen> = f.basis().cloned().collect();
    let words = enumerate_reduced(&basis, length_bound);
    let images: Vec<Word> = words
        .iter()
        .map(|w| f.apply(w))
        .collect::<Result<_, _>>()?;
    let bound = lambda(f) * lambda(f);
    let mut max_observed = 0;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            if co(&words[i], &words[j]) != 0 {
                continue;
            }
            let c = co(&images[i], &images[j]);
            if c > bound {
                return Ok(CooperOutcome::Counterexample {
                    w: words[i].clone(),
                    w2: words[j].clone(),
                    observed: c,
                });
            }
            max_observed = max_observed.max(c);
        }
    }
    Ok(CooperOutcome::Pass {
        bound,
        max_observed,
    })
}

/// All reduced words of length <= `max_len` (including the empty word).
pub fn enumerate_reduced(basis: &[Gen], max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = basis
        .iter()
        .flat_map(|g| [Letter::new(g.clone(), 1), Letter::new(g.clone(), -1)])
        .collect();
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                if w.0.last().is_some_and(|t| t.cancels(l)) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l.clone());
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The standard genus-g presentation: trivial group for g = 0, `Z^2` with
/// alphabet {a0, a1} for g = 1, and for g >= 2 the alphabet
/// {a1, b1, ..., ag, bg} with the commutator relator of length 4g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePresentation {
    pub genus: u32,
}

impl SurfacePresentation {
    pub fn new(genus: u32) -> Self {
        SurfacePresentation { genus }
    }

    pub fn alphabet(&self) -> Vec<Gen> {
        match self.genus {
            0 => Vec::new(),
            1 => vec![Gen::sym("a0"), Gen::sym("a1")],
            g => (1..=g)
                .flat_map(|i| [Gen::sym(&format!("a{i}")), Gen::sym(&format!("b{i}"))])
                .collect(),
        }
    }

    /// `[a1,b1][a2,b2]...[ag,bg]`, cyclically reduced, length 4g (g >= 2).
    pub fn relator(&self) -> Word {
        let mut v = Vec::new();
        for i in 1..=self.genus {
            let a = Gen::sym(&format!("a{i}"));
            let b = Gen::sym(&format!("b{i}"));
            v.push(Letter::new(a.clone(), 1));
            v.push(Letter::new(b.clone(), 1));
            v.push(Letter::new(a, -1));
            v.push(Letter::new(b, -1));
        }
        Word(v)
    }

    fn contains(&self, g: &Gen) -> bool {
        self.alphabet().contains(g)
    }
}

/// Kills every `x` letter and freely reduces: the projection to the surface
/// alphabet.
pub fn project_surface(w: &Word) -> Word {
    reduce(&Word(
        w.0.iter().filter(|l| !l.gen.is_x()).cloned().collect(),
    ))
}

/// Whether the projection of `w` is nontrivial in the genus-g surface group.
///
/// Genus 0 is the trivial target; genus 1 is decided by abelianization;
/// genus >= 2 by Dehn's algorithm with the commutator relator, complete
/// because the relator satisfies C'(1/6) small cancellation.
pub fn surface_nontrivial(w: &Word, genus: u32) -> Result<bool, WordError> {
    // The sphere kills everything; any alphabet projects to the trivial group.
    if genus == 0 {
        return Ok(false);
    }
    let sp = SurfacePresentation::new(genus);
    let proj = project_surface(w);
    for l in &proj.0 {
        if !sp.contains(&l.gen) {
            return Err(WordError::AlphabetMismatch(l.gen.to_string(), genus));
        }
    }
    match genus {
        0 => Ok(false),
        1 => {
            let mut sums: BTreeMap<&Gen, i64> = BTreeMap::new();
            for l in &proj.0 {
                *sums.entry(&l.gen).or_default() += l.exp as i64;
            }
            Ok(sums.values().any(|&s| s != 0))
        }
        _ => Ok(!dehn_trivial(&proj, &sp)),
    }
}

fn dehn_trivial(w: &Word, sp: &SurfacePresentation) -> bool {
    let relator = sp.relator();
    let rl = relator.len();
    // All cyclic rotations of R and R^-1.
    let mut rotations: Vec<Vec<Letter>> = Vec::with_capacity(2 * rl);
    for base in [relator.clone(), relator.inverse()] {
        for i in 0..rl {
            let mut rot = base.0[i..].to_vec();
            rot.extend_from_slice(&base.0[..i]);
            rotations.push(rot);
        }
    }
    let (_, mut core) = cyclic_reduce(w);
    loop {
        if core.is_empty() {
            return true;
        }
        // Search the doubled word for a cyclic subword longer than half the
        // relator that is a prefix of some rotation; replace it by the
        // shorter complement.
        let n = core.len();
        let doubled: Vec<Letter> = core.0.iter().chain(core.0.iter()).cloned().collect();
        let mut replaced = false;
        'search: for start in 0..n {
            for rot in &rotations {
                let mut m = 0;
                while m < n.min(rl) && doubled[start + m] == rot[m] {
                    m += 1;
                }
                if m > rl / 2 {
                    // subword u = rot[..m]; u = complement^-1 in the group,
                    // complement = rot[m..], so u is replaced by
                    // inverse(rot[m..]).
                    let complement = Word(rot[m..].to_vec()).inverse();
                    let mut rest: Vec<Letter> = Vec::new();
                    // Remaining letters of the cyclic word after the subword.
                    for k in 0..(n - m) {
                        rest.push(doubled[(start + m + k) % (2 * n).max(1)].clone());
                    }
                    let mut next = complement.0;
                    next.extend(rest);
                    let (_, c) = cyclic_reduce(&Word(next));
                    core = c;
                    replaced = true;
                    break 'search;
                }
            }
        }
        if !replaced {
            return false;
        }
    }
}

/// The largest k such that the reduced word contains a contiguous k-th power
/// of a block whose projection is nontrivial in the genus-g surface group.
/// Blocks are taken at letter granularity.
pub fn c_word(w: &Word, genus: u32) -> Result<usize, WordError> {
    let w = reduce(w);
    let n = w.len();
    let mut best = 0;
    let mut nontrivial_cache: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for start in 0..n {
        for period in 1..=(n - start) {
            // Count contiguous repeats of w[start..start+period].
            let mut k = 1;
            while start + (k + 1) * period <= n
                && w.0[start..start + period]
                    == w.0[start + k * period..start + (k + 1) * period]
            {
                k += 1;
            }
            if k <= best {
                continue;
            }
            let nontrivial = match nontrivial_cache.get(&(start, period)) {
                Some(&b) => b,
                None => {
                    let block = Word(w.0[start..start + period].to_vec());
                    let b = surface_nontrivial(&block, genus)?;
                    nontrivial_cache.insert((start, period), b);
                    b
                }
            };
            if nontrivial {
                best = k;
            }
        }
    }
    Ok(best)
}

/// `c` of the conjugacy class: the maximum of [`c_word`] over all cyclic
/// rotations of the cyclic reduction.
pub fn c_class(w: &Word, genus: u32) -> Result<usize, WordError> {
    let (_, core) = cyclic_reduce(w);
    if core.is_empty() {
        return Ok(0);
    }
    let mut best = 0;
    for i in 0..core.len() {
        let mut rot = core.0[i..].to_vec();
        rot.extend_from_slice(&core.0[..i]);
        best = best.max(c_word(&Word(rot), genus)?);
    }
    Ok(best)
}

/// Rewrites every `x_I` with `|I| < target_depth` by `x_I = x_{I0} x_{I1}`
/// until all x indices reach the target depth; other letters pass through.
pub fn expand_x(w: &Word, target_depth: usize) -> Result<Word, WordError> {
    if target_depth > MAX_X_DEPTH {
        return Err(WordError::DepthOverflow(target_depth, MAX_X_DEPTH));
    }
    let mut out = Vec::new();
    for l in &w.0 {
        match &l.gen {
            Gen::X(ix) if ix.len() < target_depth => {
                let expanded = expand_one(ix, target_depth);
                if l.exp == 1 {
                    out.extend(expanded);
                } else {
                    out.extend(expanded.into_iter().rev().map(|x| Letter::new(x.gen, -1)));
                }
            }
            _ => out.push(l.clone()),
        }
    }
    Ok(Word(out))
}

fn expand_one(ix: &[u8], target: usize) -> Vec<Letter> {
    if ix.len() >= target {
        return vec![Letter::new(Gen::X(ix.to_vec()), 1)];
    }
    let mut left = ix.to_vec();
    left.push(0);
    let mut right = ix.to_vec();
    right.push(1);
    let mut out = expand_one(&left, target);
    out.extend(expand_one(&right, target));
    out
}

/// Greedy inverse of [`expand_x`]: repeatedly merges adjacent `x_{I0} x_{I1}`
/// (deepest indices first) back into `x_I`.
pub fn collapse_x(w: &Word) -> Word {
    let mut v = reduce(w).0;
    loop {
        let deepest = v
            .iter()
            .filter_map(|l| match &l.gen {
                Gen::X(ix) => Some(ix.len()),
                _ => None,
            })
            .max();
        let Some(depth) = deepest else { break };
        if depth == 0 {
            break;
        }
        let mut merged = false;
        for i in 0..v.len().saturating_sub(1) {
            let (a, b) = (&v[i], &v[i + 1]);
            if a.exp == 1 && b.exp == 1 {
                if let (Gen::X(ia), Gen::X(ib)) = (&a.gen, &b.gen) {
                    if ia.len() == depth
                        && ib.len() == depth
                        && ia[..depth - 1] == ib[..depth - 1]
                        && ia[depth - 1] == 0
                        && ib[depth - 1] == 1
                    {
                        let parent = ia[..depth - 1].to_vec();
                        v.splice(i..i + 2, [Letter::new(Gen::X(parent), 1)]);
                        merged = true;
                        break;
                    }
                }
            }
            // Inverted pair: x_{I1}^-1 x_{I0}^-1 = x_I^-1.
            if a.exp == -1 && b.exp == -1 {
                if let (Gen::X(ia), Gen::X(ib)) = (&a.gen, &b.gen) {
                    if ia.len() == depth
                        && ib.len() == depth
                        && ia[..depth - 1] == ib[..depth - 1]
                        && ia[depth - 1] == 1
                        && ib[depth - 1] == 0
                    {
                        let parent = ia[..depth - 1].to_vec();
                        v.splice(i..i + 2, [Letter::new(Gen::X(parent), -1)]);
                        merged = true;
                        break;
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }
    Word(v)
}
