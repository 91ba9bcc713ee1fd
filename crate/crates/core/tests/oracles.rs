mod common;

use common::*;
use pac_core::code::{calculate_s_values, ChunkPolicy, NodeType};
use pac_core::decoder::{
    handle_rate0, handle_rate1, handle_rep, handle_type_iv, ChunkContext,
};
use pac_core::polar::{polar_encode, update_llr, LlrBuffer};
use pac_core::precoder::{ConnPoly, ConvState};
use pac_core::{pac_encode, AllowedTypes};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pac_encode_matches_dense_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, k) in [(6, 57), (7, 99), (7, 64), (4, 11)] {
        let spec = rm_code(n, k);
        for _ in 0..50 {
            let d = random_bits(&mut rng, k);
            let v = spec.embed(&d).unwrap();
            let expect = dense_polar(&dense_precode(&v, spec.poly()));
            assert_eq!(pac_encode(&d, &spec).unwrap(), expect);
        }
    }
}

#[test]
fn polar_transform_matches_dense_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for len in [2, 8, 64, 256] {
        let u = random_bits(&mut rng, len);
        assert_eq!(polar_encode(&u).unwrap(), dense_polar(&u));
    }
}

fn walk_matches_naive(seed: u64, n: u32, policy: ChunkPolicy) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = 1usize << n;
    let profile: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.6)).collect();
    let s = calculate_s_values(&profile);
    let y: Vec<f64> = (0..len).map(|_| rng.gen_range(-6.0..6.0)).collect();
    let u = random_bits(&mut rng, len);
    let mut buf = LlrBuffer::new(len);
    let mut i = 0;
    while i < len {
        let r = update_llr(&y, &mut buf, i, &u, &s, &policy);
        assert_eq!(r.chunk.start, i);
        let got = &buf.as_slice()[r.llr_range.clone()];
        let expect = naive_node(&y, &u, i, r.chunk.len());
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-9, "n={n} i={i}: {a} vs {b}");
        }
        i = r.chunk.end;
    }
}

#[test]
fn update_llr_matches_naive_sc() {
    for seed in 0..40 {
        for n in 1..=6 {
            walk_matches_naive(seed, n, ChunkPolicy::LEAVES);
            walk_matches_naive(seed, n, ChunkPolicy::default());
        }
    }
}

proptest! {
    #[test]
    fn update_llr_random_policy(seed in any::<u64>(), n in 1u32..=6, max_chunk in 1usize..=64, mask in 0u8..16) {
        let allowed = AllowedTypes { rate0: mask & 1 != 0, rep: mask & 2 != 0, type_iv: mask & 4 != 0, rate1: mask & 8 != 0 };
        walk_matches_naive(seed, n, ChunkPolicy { allowed, max_chunk });
    }
}

#[test]
fn type_iv_matches_enumeration() {
    let poly = ConnPoly::default_pac();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let profiles: Vec<Vec<bool>> = vec![
        vec![true, true],
        vec![false, false, true, true],
        vec![false, true, false, true],
        vec![true, false, false, true],
    ];
    for trial in 0..1000 {
        let profile = &profiles[trial % profiles.len()];
        let d = draw(&mut rng, profile.len(), &poly, trial % 2 == 1);
        let ctx = context(&poly, profile, &d.e0, &d.gamma, &d.r, 8);
        let parent = rng.gen_range(-5.0..5.0);
        let got = handle_type_iv(parent, d.st, &ctx);
        let info: Vec<usize> = (0..profile.len()).filter(|&i| profile[i]).collect();
        let limit = d.gamma[info[0]] + d.gamma[info[1]];
        let expect = enumerate_chunk(&poly, profile, d.st, &d.r, &d.e0);
        // enumeration order is 00, p1, p2, both
        let expect: Vec<_> = expect
            .into_iter()
            .filter(|c| c.m[info[0]] + c.m[info[1]] > limit)
            .collect();
        assert_eq!(got.len(), expect.len());
        for (g, e) in got.iter().zip(&expect) {
            assert_eq!(g.v, e.v);
            assert_eq!(g.u, e.u);
            assert_eq!(g.st, e.st);
            assert!((g.metric - (parent + e.sum())).abs() < 1e-9);
        }
    }
}

#[test]
fn rate1_matches_enumeration() {
    let poly = ConnPoly::default_pac();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for trial in 0..1000 {
        let size = [1, 2, 4][trial % 3];
        let profile = vec![true; size];
        let pruned = trial % 2 == 1;
        let d = draw(&mut rng, size, &poly, pruned);
        let ctx = context(&poly, &profile, &d.e0, &d.gamma, &d.r, 1 << size);
        let parent = rng.gen_range(-5.0..5.0);
        let (got, stats) = handle_rate1(parent, d.st, &ctx);
        // every leaf is accounted for, counting from one
        assert!(stats.count >= 1u128 << size);

        // a node word survives iff every position clears its threshold
        let mut expect: Vec<_> = enumerate_chunk(&poly, &profile, d.st, &d.r, &d.e0)
            .into_iter()
            .filter(|c| {
                let x = dense_polar(&c.u);
                (0..size).all(|j| pac_core::decoder::bit_metric(d.r[j], x[j], d.e0[j]) > d.gamma[j])
            })
            .collect();
        expect.sort_by(|a, b| b.sum().total_cmp(&a.sum()));
        assert_eq!(got.len(), expect.len());
        let mut got_sorted = got.clone();
        got_sorted.sort_by(|a, b| a.v.cmp(&b.v));
        let mut exp_sorted = expect.clone();
        exp_sorted.sort_by(|a, b| a.v.cmp(&b.v));
        for (g, e) in got_sorted.iter().zip(&exp_sorted) {
            assert_eq!(g.v, e.v);
            assert_eq!(g.u, e.u);
            assert_eq!(g.st, e.st);
            assert!((g.metric - (parent + e.sum())).abs() < 1e-9);
        }
        // best first
        assert!(got.windows(2).all(|w| w[0].metric >= w[1].metric));
    }
}

#[test]
fn rate1_three_leaves_gives_all_eight() {
    let poly = ConnPoly::default_pac();
    let profile = vec![true; 4];
    let r = [0.3, -1.2, 2.5, 0.8];
    let e0 = [0.1, 0.2, 0.3, 0.4];
    let gamma = [f64::NEG_INFINITY; 4];
    let st = ConvState::zero(10);
    let ctx = ChunkContext {
        poly: &poly,
        rate_profile: &profile[..3],
        e0: &e0,
        gamma: &gamma,
        chunk: 0..3,
        r: &r[..3],
        capacity: 8,
    };
    let (got, stats) = handle_rate1(0.0, st, &ctx);
    assert_eq!(got.len(), 8);
    assert_eq!(stats.completed, 8);
    let mut expect: Vec<f64> = enumerate_chunk(&poly, &profile[..3], st, &r[..3], &e0[..3])
        .iter()
        .map(Candidate::sum)
        .collect();
    expect.sort_by(|a, b| b.total_cmp(a));
    for (g, e) in got.iter().zip(&expect) {
        assert!((g.metric - e).abs() < 1e-12);
    }
}

#[test]
fn rate0_and_rep_are_subsets_of_enumeration() {
    let poly = ConnPoly::default_pac();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for trial in 0..1000 {
        let size = [1, 2, 4][trial % 3];
        let d = draw(&mut rng, size, &poly, trial % 2 == 1);
        let parent = rng.gen_range(-5.0..5.0);

        let frozen = vec![false; size];
        let ctx = context(&poly, &frozen, &d.e0, &d.gamma, &d.r, 8);
        let child = handle_rate0(parent, d.st, &ctx);
        let all = enumerate_chunk(&poly, &frozen, d.st, &d.r, &d.e0);
        assert_eq!(all.len(), 1);
        assert_eq!(child.u, all[0].u);
        assert!((child.metric - (parent + all[0].sum())).abs() < 1e-9);

        let p = rng.gen_range(0..size);
        let mut rep = vec![false; size];
        rep[p] = true;
        let ctx = context(&poly, &rep, &d.e0, &d.gamma, &d.r, 8);
        let got = handle_rep(parent, d.st, &ctx);
        let expect: Vec<_> = enumerate_chunk(&poly, &rep, d.st, &d.r, &d.e0)
            .into_iter()
            .filter(|c| c.m[p] > d.gamma[p])
            .collect();
        assert_eq!(got.len(), expect.len());
        for (g, e) in got.iter().zip(&expect) {
            assert_eq!((&g.v, &g.u, g.st), (&e.v, &e.u, e.st));
            assert!((g.metric - (parent + e.sum())).abs() < 1e-9);
        }
    }
}

#[test]
fn fast_with_leaf_chunks_equals_stack() {
    assert_eq!(leaf_policy_mismatches(6, 57, 3.0, 8, 256, 200, 31), 0);
    assert_eq!(leaf_policy_mismatches(7, 99, 2.5, 64, 1024, 100, 32), 0);
    assert_eq!(leaf_policy_mismatches(4, 8, 0.0, 2, 64, 300, 33), 0);
}

#[test]
fn node_types_along_rm_64_57() {
    let spec = rm_code(6, 57);
    let s = spec.segment_counts();
    let y = vec![5.0; 64];
    let u = vec![0u8; 64];
    let mut buf = LlrBuffer::new(64);
    let mut i = 0;
    let mut kinds = Vec::new();
    while i < 64 {
        let r = update_llr(&y, &mut buf, i, &u, &s, &ChunkPolicy::default());
        kinds.push((r.chunk.clone(), r.node_type));
        i = r.chunk.end;
    }
    assert_eq!(kinds.len(), 15);
    assert!(kinds.iter().all(|(_, t)| *t != NodeType::NotSpecial));
}
