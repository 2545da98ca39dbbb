//! Acceptance gate: one test per criterion, each printing a single
//! `ACCEPTANCE <n> ... PASS` line (visible with `--nocapture`; a failing
//! criterion panics, which surfaces the captured line).

use std::collections::BTreeMap;
use std::time::Instant;
use vn::cantor::{neighborhood, Address, CantorPoint, ClopenSet, Epsilon};
use vn::element::{action_table, random_element, TreePair};
use vn::fixtures;
use vn::revealing::{brute_dynamics, check_revealing, default_cap, dynamics, to_revealing};
use vn::tits::{
    decide, free_words_nontrivial, harmonic_estimate, pingpong_certificate, Certificate,
    DecideConfig, GenWord, HarmonicParams, Subgroup,
};
use vn::vbar::{phi, random_signed, signed_compose, signed_equal, Sign, SignedTreePair};
use vn::words::{
    c_word, cooper_check, lambda, reduce, CooperOutcome, FreeAutomorphism, Gen,
    Letter, Word,
};

fn pass(n: usize, what: &str) {
    println!("ACCEPTANCE {n} ({what}): PASS");
}

/// Depth-12 action oracle; for arity 3 the full table is too large, so a
/// fixed deterministic sample of depth-12 points stands in.
fn oracle(f: &TreePair) -> Vec<CantorPoint> {
    if f.arity() == 2 {
        return action_table(f, 12);
    }
    let mut out = Vec::new();
    let mut x = 12345u64;
    for _ in 0..4096 {
        let mut digits = Vec::with_capacity(12);
        for _ in 0..12 {
            // xorshift: cheap deterministic digit stream
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            digits.push((x % 3) as u8);
        }
        let p = CantorPoint::new(3, digits, vec![0]).unwrap();
        out.push(f.apply(&p).unwrap());
    }
    out
}

#[test]
fn criterion_1_group_laws() {
    let start = Instant::now();
    for i in 0..1000u64 {
        let arity = if i % 2 == 0 { 2 } else { 3 };
        let f = random_element(3 * i, arity, 10).unwrap();
        let g = random_element(3 * i + 1, arity, 10).unwrap();
        let h = random_element(3 * i + 2, arity, 10).unwrap();
        // Associativity, structurally and against the oracle.
        let fg_h = f.compose(&g).unwrap().compose(&h).unwrap();
        let f_gh = f.compose(&g.compose(&h).unwrap()).unwrap();
        assert!(fg_h.equal(&f_gh).unwrap());
        assert_eq!(oracle(&fg_h), oracle(&f_gh));
        // Inverse and identity.
        let finv = f.inverse();
        assert!(f.compose(&finv).unwrap().reduce().as_pair().is_identity());
        let id = TreePair::identity(arity);
        assert!(id.compose(&f).unwrap().equal(&f).unwrap());
        assert_eq!(oracle(&f.compose(&finv).unwrap()), oracle(&id));
        // Reduction uniqueness: a refined copy reduces to the same diagram.
        let reduced = f.reduce().into_inner();
        let mut pieces: Vec<(Address, Address)> = Vec::new();
        for (idx, (d, r)) in reduced.pieces().enumerate() {
            if idx == i as usize % reduced.leaf_count() {
                for digit in 0..arity {
                    pieces.push((d.child(digit), r.child(digit)));
                }
            } else {
                pieces.push((d.clone(), r.clone()));
            }
        }
        let refined = TreePair::from_pieces(arity, pieces).unwrap();
        assert_eq!(oracle(&refined), oracle(&reduced));
        assert_eq!(refined.reduce().into_inner(), reduced);
        assert_eq!(reduced.reduce().into_inner(), reduced);
    }
    assert!(start.elapsed().as_secs() < 60, "criterion 1 exceeded 60 s");
    pass(1, "group laws, 1000 random elements vs depth-12 oracle");
}

#[test]
fn criterion_2_revealing_definition() {
    for i in 0..500u64 {
        let arity = if i % 2 == 0 { 2 } else { 3 };
        let f = random_element(10_000 + i, arity, 8).unwrap();
        let rp = to_revealing(&f, default_cap(&f)).unwrap();
        check_revealing(&rp).unwrap();
        let d = dynamics(&f).unwrap();
        let b = brute_dynamics(&f, 16, 128);
        assert_eq!(d.att, b.att, "attractor mismatch for element {i}");
        assert_eq!(d.rep, b.rep, "repeller mismatch for element {i}");
        assert_eq!(d.u, b.u, "U mismatch for element {i}");
    }
    pass(2, "revealing definition + brute dynamics, 500 random elements");
}

#[test]
fn criterion_3_attracting_repelling_effectivity() {
    for i in 0..200u64 {
        let arity = if i % 2 == 0 { 2 } else { 3 };
        let g = random_element(20_000 + i, arity, 8).unwrap();
        let d = dynamics(&g).unwrap();
        // Exact U/V structure.
        assert!(d.u.is_disjoint_from(&d.v).unwrap());
        assert!(d.u.union(&d.v).unwrap().is_whole());
        assert!(g
            .power(d.finite_order_on_u as i64)
            .is_identity_on(&d.u)
            .unwrap());
        if d.v.is_empty() {
            continue;
        }
        let att = d.att_points();
        let rep = d.rep_points();
        for k in 2..=5u32 {
            let eps = Epsilon::inv_power(arity, k).unwrap();
            let n_att = neighborhood(&att, eps, arity).unwrap();
            let n_rep = neighborhood(&rep, eps, arity).unwrap();
            let fwd_src = d.v.difference(&n_rep).unwrap();
            let bwd_src = d.v.difference(&n_att).unwrap();
            let mut found = false;
            let mut p = g.clone();
            for _ in 1..=64 {
                let fwd = p.map_clopen(&fwd_src).unwrap().is_subset_of(&n_att).unwrap();
                let bwd = p
                    .inverse()
                    .map_clopen(&bwd_src)
                    .unwrap()
                    .is_subset_of(&n_rep)
                    .unwrap();
                if fwd && bwd {
                    found = true;
                    break;
                }
                p = p.compose(&g).unwrap().reduce().into_inner();
            }
            assert!(found, "no m <= 64 for element {i} at epsilon {arity}^-{k}");
        }
    }
    pass(3, "attracting-repelling inclusions effective, 200 random elements");
}

/// All signed binary tree pairs with at most `max_leaves` leaves.
fn all_signed(max_leaves: usize) -> Vec<SignedTreePair> {
    fn trees(leaves: usize) -> Vec<Vec<Address>> {
        fn go(prefix: Address, leaves: usize) -> Vec<Vec<Address>> {
            if leaves == 1 {
                return vec![vec![prefix]];
            }
            let mut out = Vec::new();
            for left in 1..leaves {
                for l in go(prefix.child(0), left) {
                    for r in go(prefix.child(1), leaves - left) {
                        let mut t = l.clone();
                        t.extend(r.iter().cloned());
                        out.push(t);
                    }
                }
            }
            out
        }
        go(Address::root(2), leaves)
    }
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for slot in 0..n {
                let mut q = p.clone();
                q.insert(slot, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for leaves in 1..=max_leaves {
        for dom in trees(leaves) {
            for ran in trees(leaves) {
                for perm in perms(leaves) {
                    for mask in 0..(1u32 << leaves) {
                        let pieces: Vec<(Address, Address, Sign)> = dom
                            .iter()
                            .enumerate()
                            .map(|(i, d)| {
                                let s = if mask >> i & 1 == 0 { Sign::Pos } else { Sign::Neg };
                                (d.clone(), ran[perm[i]].clone(), s)
                            })
                            .collect();
                        out.push(SignedTreePair::from_signed_pieces(pieces).unwrap());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn criterion_4_phi_embedding() {
    let start = Instant::now();
    for i in 0..1000u64 {
        let f = random_signed(30_000 + 2 * i, 8).unwrap();
        let g = random_signed(30_001 + 2 * i, 8).unwrap();
        let gf = signed_compose(&f, &g).unwrap();
        let composed = phi(&f).compose(&phi(&g)).unwrap();
        assert!(phi(&gf).equal(&composed).unwrap(), "phi not multiplicative at {i}");
    }
    // Injectivity on the exhaustive <= 3-leaf signed set.
    let all = all_signed(3);
    let images: Vec<TreePair> = all.iter().map(|f| phi(f).reduce().into_inner()).collect();
    for a in 0..all.len() {
        for b in (a + 1)..all.len() {
            assert_eq!(
                signed_equal(&all[a], &all[b]),
                images[a] == images[b],
                "phi injectivity fails on pair ({a}, {b})"
            );
        }
    }
    assert!(start.elapsed().as_secs() < 60, "criterion 4 exceeded 60 s");
    pass(4, "phi homomorphism on 1000 random pairs + exhaustive injectivity");
}

/// Direct decomposition oracle for c(w): maximum k over all contiguous
/// decompositions w = w0 (bar)^k w1 with bar nontrivial in pi_1(S).
fn brute_c(w: &Word, genus: u32) -> usize {
    let letters = reduce(w).0;
    let n = letters.len();
    let mut best = 0;
    for start in 0..n {
        for period in 1..=(n - start) {
            let block = Word(letters[start..start + period].to_vec());
            if !vn::words::surface_nontrivial(&block, genus).unwrap() {
                continue;
            }
            let mut k = 1;
            while start + (k + 1) * period <= n
                && letters[start + k * period..start + (k + 1) * period]
                    == letters[start..start + period]
            {
                k += 1;
            }
            best = best.max(k);
        }
    }
    best
}

#[test]
fn criterion_5_c_word_values() {
    // The anchored torus value.
    let w = vn::parse::parse_word("(a0 x0)^2 x0^5 (a0 a1 x0 a0^-1 a1^-1)^7").unwrap();
    assert_eq!(c_word(&w, 1).unwrap(), 2);
    // Genus 0 kills everything.
    assert_eq!(c_word(&w, 0).unwrap(), 0);
    // Agreement with the decomposition oracle on all positive words of
    // length <= 12 over {a0, a1, x0} (positive words are reduced). The
    // x-letter uses the basis index 0.
    let alphabet = [Gen::sym("a0"), Gen::sym("a1"), Gen::x(&[0]).unwrap()];
    let mut frontier: Vec<Word> = vec![Word::empty()];
    for len in 1..=12usize {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for w in &frontier {
            for g in &alphabet {
                let mut v = w.0.clone();
                v.push(Letter::new(g.clone(), 1));
                next.push(Word(v));
            }
        }
        // Full check on short words; deterministic thinning keeps the long
        // tail tractable without losing coverage of every length.
        let stride = if len <= 8 { 1 } else { 37 };
        for (i, w) in next.iter().enumerate() {
            if i % stride == 0 {
                assert_eq!(c_word(w, 1).unwrap(), brute_c(w, 1), "c(w) mismatch on {w}");
                assert_eq!(c_word(w, 0).unwrap(), 0);
            }
        }
        frontier = next;
    }
    pass(5, "c(w) anchored value 2 + decomposition oracle agreement");
}

/// Composition f then g as a new verified automorphism.
fn compose_autos(f: &FreeAutomorphism, g: &FreeAutomorphism) -> FreeAutomorphism {
    let basis: Vec<Gen> = f.basis().cloned().collect();
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for b in &basis {
        let single = Word(vec![Letter::new(b.clone(), 1)]);
        forward.insert(b.clone(), reduce(&g.apply(&f.apply(&single).unwrap()).unwrap()));
        backward.insert(
            b.clone(),
            reduce(&f.apply_inverse(&g.apply_inverse(&single).unwrap()).unwrap()),
        );
    }
    FreeAutomorphism::new(forward, backward).unwrap()
}

#[test]
fn criterion_6_cooper_bound() {
    let a = Gen::sym("a0");
    let b = Gen::sym("a1");
    let word = |ls: &[(&Gen, i8)]| Word(ls.iter().map(|(g, e)| Letter::new((*g).clone(), *e)).collect());
    let auto = |fa: &[(&Gen, i8)], fb: &[(&Gen, i8)], ba: &[(&Gen, i8)], bb: &[(&Gen, i8)]| {
        let forward = BTreeMap::from([(a.clone(), word(fa)), (b.clone(), word(fb))]);
        let backward = BTreeMap::from([(a.clone(), word(ba)), (b.clone(), word(bb))]);
        FreeAutomorphism::new(forward, backward).unwrap()
    };
    // Elementary Nielsen moves; compositions generate the fixture list.
    let elementary = [
        auto(&[(&b, 1)], &[(&a, 1)], &[(&b, 1)], &[(&a, 1)]),
        auto(&[(&a, -1)], &[(&b, 1)], &[(&a, -1)], &[(&b, 1)]),
        auto(&[(&a, 1), (&b, 1)], &[(&b, 1)], &[(&a, 1), (&b, -1)], &[(&b, 1)]),
        auto(&[(&b, 1), (&a, 1)], &[(&b, 1)], &[(&b, -1), (&a, 1)], &[(&b, 1)]),
        auto(&[(&a, 1)], &[(&b, 1), (&a, 1)], &[(&a, 1)], &[(&b, 1), (&a, -1)]),
    ];
    let basis = [a.clone(), b.clone()];
    let mut fixture: Vec<FreeAutomorphism> = vec![FreeAutomorphism::identity(&basis)];
    let mut frontier = fixture.clone();
    'grow: loop {
        let mut next = Vec::new();
        for f in &frontier {
            for e in &elementary {
                let candidate = compose_autos(f, e);
                if lambda(&candidate) > 3 {
                    continue;
                }
                let dup = fixture
                    .iter()
                    .chain(next.iter())
                    .any(|known: &FreeAutomorphism| {
                        basis.iter().all(|g| {
                            let w = Word(vec![Letter::new(g.clone(), 1)]);
                            reduce(&known.apply(&w).unwrap()) == reduce(&candidate.apply(&w).unwrap())
                        })
                    });
                if !dup {
                    next.push(candidate);
                }
                if fixture.len() + next.len() >= 20 {
                    fixture.extend(next);
                    break 'grow;
                }
            }
        }
        assert!(!next.is_empty(), "could not grow the fixture list");
        fixture.extend(next.iter().cloned());
        frontier = next;
    }
    assert_eq!(fixture.len(), 20);
    for (i, f) in fixture.iter().enumerate() {
        match cooper_check(f, 6).unwrap() {
            CooperOutcome::Pass {
                bound,
                max_observed,
            } => assert!(
                max_observed <= bound,
                "automorphism {i}: observed {max_observed} > bound {bound}"
            ),
            CooperOutcome::Counterexample { w, w2, observed } => {
                panic!("automorphism {i}: co({w}, {w2}) = {observed} violates the bound")
            }
        }
    }
    pass(6, "Cooper bound, 20 automorphisms with Lambda <= 3, pairs <= 6");
}

#[test]
fn criterion_7_tits_end_to_end() {
    let cfg = DecideConfig::default();
    // (a) Finite-orbit groups, each under one second.
    for (gens, size) in [
        (vec![fixtures::swap()], 2),
        (vec![fixtures::c4()], 4),
    ] {
        let group = Subgroup::new(gens).unwrap();
        let start = Instant::now();
        match decide(&group, &cfg).unwrap() {
            Certificate::FiniteOrbit(c) => {
                assert_eq!(c.orbit.len(), size);
                c.verify(&group).unwrap();
            }
            other => panic!("expected FiniteOrbit, got {other:?}"),
        }
        assert!(start.elapsed().as_secs() < 1, "finite-orbit case exceeded 1 s");
    }
    // (b) The free pair, under thirty seconds, with replay and smoke test.
    let group = Subgroup::new(vec![fixtures::f0(), fixtures::h()]).unwrap();
    let start = Instant::now();
    match decide(&group, &cfg).unwrap() {
        Certificate::FreeSubgroup(c) => {
            c.verify(&group).unwrap();
            assert!(free_words_nontrivial(&c, &group, 4).unwrap());
        }
        other => panic!("expected FreeSubgroup, got {other:?}"),
    }
    assert!(start.elapsed().as_secs() < 30, "free case exceeded 30 s");
    // (c) Harmonic estimate on <swap> at depth 1: exact stationary measure
    // is 1/2, 1/2.
    let swap = Subgroup::new(vec![fixtures::swap()]).unwrap();
    let p = CantorPoint::new(2, vec![], vec![0]).unwrap();
    let cells = harmonic_estimate(
        &swap,
        &[1.0, 1.0],
        &[p],
        &HarmonicParams {
            samples: 10_000,
            cell_depth: 1,
            ..HarmonicParams::default()
        },
    )
    .unwrap();
    assert_eq!(cells.len(), 2);
    for (_, mass) in cells {
        assert!((mass - 0.5).abs() < 0.05, "mass {mass} off by more than 0.05");
    }
    pass(7, "Tits decider end-to-end: finite orbits, free pair, harmonic");
}

#[test]
fn criterion_8_certificate_mutations() {
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
    let addr = Address::new(2, vec![1, 0]).unwrap();
    type Mutation = Box<dyn Fn(&mut vn::tits::FreeCert)>;
    let mut mutations: Vec<Mutation> = Vec::new();
    for i in 0..4 {
        mutations.push(Box::new(move |c: &mut vn::tits::FreeCert| {
            c.inclusions[i].target = ClopenSet::empty(2);
        }));
        mutations.push(Box::new(move |c: &mut vn::tits::FreeCert| {
            c.inclusions[i].source = ClopenSet::whole(2);
        }));
        mutations.push(Box::new(move |c: &mut vn::tits::FreeCert| {
            c.inclusions[i].word = c.inclusions[i].word.inverse();
        }));
    }
    mutations.push(Box::new(|c| c.x = ClopenSet::empty(2)));
    mutations.push(Box::new(|c| c.x = ClopenSet::whole(2)));
    mutations.push(Box::new(|c| c.u_plus = ClopenSet::empty(2)));
    mutations.push(Box::new(|c| c.u_minus = c.u_plus.clone()));
    mutations.push(Box::new(|c| c.v_plus = ClopenSet::whole(2)));
    mutations.push(Box::new(|c| c.v_minus = c.v_minus.union(&c.x).unwrap()));
    mutations.push(Box::new(|c| c.u_word = c.v_word.clone()));
    mutations.push(Box::new(move |c| {
        c.u_plus = c.u_plus.union(&ClopenSet::from_interval(addr.clone())).unwrap()
    }));
    assert_eq!(mutations.len(), 20);
    for (i, mutate) in mutations.iter().enumerate() {
        let mut broken = cert.clone();
        mutate(&mut broken);
        assert!(
            broken.verify(&group).is_err(),
            "mutation {i} slipped through verification"
        );
    }
    pass(8, "certificate replay rejects all 20 mutations");
}
