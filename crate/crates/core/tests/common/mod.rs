#![allow(dead_code)]

use pac_core::decoder::bit_metric;
use pac_core::polar::{f_combine, g_combine};
use pac_core::precoder::{ConnPoly, ConvState};
use pac_core::code::ChunkPolicy;
use pac_core::decoder::{ChunkContext, DecodeOptions};
use pac_core::{
    build_tables, fast_stack_decode, pac_encode, stack_decode, ConstructionTables, PacCodeSpec,
    ThresholdCombine,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;

pub fn rm_code(n: u32, k: usize) -> PacCodeSpec {
    PacCodeSpec::reed_muller(n, k, ConnPoly::default_pac()).unwrap()
}

pub fn sigma_at(ebn0_db: f64, spec: &PacCodeSpec) -> f64 {
    let rate = spec.k().max(1) as f64 / spec.len() as f64;
    pac_core::channel::ebn0_to_sigma(ebn0_db, rate).unwrap()
}

pub fn tables(spec: &PacCodeSpec, sigma: f64, p_th: Option<f64>) -> ConstructionTables {
    build_tables(sigma, spec.n(), p_th, ThresholdCombine::Min).unwrap()
}

/// Plain `x = u G` with `G` the n-fold Kronecker power of [[1,0],[1,1]],
/// built as a dense matrix.
pub fn dense_polar(u: &[u8]) -> Vec<u8> {
    let len = u.len();
    let mut g = vec![vec![1u8]];
    while g.len() < len {
        let m = g.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for r in 0..m {
            for c in 0..m {
                next[r][c] = g[r][c];
                next[r + m][c] = g[r][c];
                next[r + m][c + m] = g[r][c];
            }
        }
        g = next;
    }
    (0..len)
        .map(|c| (0..len).fold(0u8, |acc, r| acc ^ (u[r] & g[r][c])))
        .collect()
}

/// Convolution of `v` with the polynomial taps, written as a sum.
pub fn dense_precode(v: &[u8], poly: &ConnPoly) -> Vec<u8> {
    let c = poly.coeffs();
    (0..v.len())
        .map(|i| {
            (0..c.len())
                .filter(|&j| j <= i && c[j])
                .fold(0u8, |acc, j| acc ^ v[i - j])
        })
        .collect()
}

/// LLRs of the width-`w` node covering leaves `start..start + w`, computed
/// from scratch by walking down from the channel with the decided bits
/// `u[..start]`.
pub fn naive_node(y: &[f64], u: &[u8], start: usize, w: usize) -> Vec<f64> {
    if y.len() == w {
        return y.to_vec();
    }
    let h = y.len() / 2;
    let (l, r) = y.split_at(h);
    if start < h {
        let next: Vec<f64> = l.iter().zip(r).map(|(&a, &b)| f_combine(a, b)).collect();
        naive_node(&next, &u[..h], start, w)
    } else {
        let p = dense_polar(&u[..h]);
        let next: Vec<f64> = l
            .iter()
            .zip(r)
            .zip(&p)
            .map(|((&a, &b), &s)| g_combine(a, b, s))
            .collect();
        naive_node(&next, &u[h..], start - h, w)
    }
}

pub fn random_bits<R: Rng>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..2u8)).collect()
}

/// One enumerated chunk candidate.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub v: Vec<u8>,
    pub u: Vec<u8>,
    pub st: ConvState,
    /// Node-level metric per chunk position.
    pub m: Vec<f64>,
}

impl Candidate {
    pub fn sum(&self) -> f64 {
        self.m.iter().sum()
    }
}

/// Every input chunk that is zero on the frozen positions, precoded from
/// `st` and scored against the node LLRs `r`.
pub fn enumerate_chunk(
    poly: &ConnPoly,
    profile: &[bool],
    st: ConvState,
    r: &[f64],
    e0: &[f64],
) -> Vec<Candidate> {
    let info: Vec<usize> = (0..profile.len()).filter(|&i| profile[i]).collect();
    (0..1usize << info.len())
        .map(|mask| {
            let mut v = vec![0u8; profile.len()];
            for (b, &p) in info.iter().enumerate() {
                v[p] = (mask >> b & 1) as u8;
            }
            let mut s = st;
            let u: Vec<u8> = v.iter().map(|&x| poly.step(x, &mut s)).collect();
            let x = dense_polar(&u);
            let m = x
                .iter()
                .zip(r)
                .zip(e0)
                .map(|((&b, &l), &e)| bit_metric(l, b, e))
                .collect();
            Candidate { v, u, st: s, m }
        })
        .collect()
}

/// Leaf LLR of bit `i` along the true path, by full recomputation.
pub fn genie_leaf(y: &[f64], u: &[u8], i: usize) -> f64 {
    naive_node(y, u, i, 1)[0]
}

/// Decodes a batch of noisy frames with both decoders and requires equal
/// results, bit for bit.
pub fn leaf_policy_mismatches(n: u32, k: usize, ebn0: f64, cap: usize, cycles: usize, frames: usize, seed: u64) -> usize {
    let spec = rm_code(n, k);
    let sigma = sigma_at(ebn0, &spec);
    let t = tables(&spec, sigma, Some(1e-3));
    let mut opts = DecodeOptions::new(cap, cycles, true);
    let stack_opts = opts.clone();
    opts.policy = ChunkPolicy { max_chunk: 1, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    for _ in 0..frames {
        let d = random_bits(&mut rng, k);
        let x = pac_encode(&d, &spec).unwrap();
        let y = pac_core::channel::awgn_transmit(&x, sigma, &mut rng).unwrap();
        let a = stack_decode(&spec, &t, &y, &stack_opts).unwrap();
        let b = fast_stack_decode(&spec, &t, &y, &opts).unwrap();
        let same = a.v_hat == b.v_hat
            && a.status == b.status
            && a.counters == b.counters
            && a.metric.map(f64::to_bits) == b.metric.map(f64::to_bits);
        mismatches += !same as usize;
    }
    mismatches
}

pub fn context<'a>(
    poly: &'a ConnPoly,
    profile: &'a [bool],
    e0: &'a [f64],
    gamma: &'a [f64],
    r: &'a [f64],
    capacity: usize,
) -> ChunkContext<'a> {
    ChunkContext {
        poly,
        rate_profile: profile,
        e0,
        gamma,
        chunk: 0..profile.len(),
        r,
        capacity,
    }
}

pub struct Draw {
    pub st: ConvState,
    pub r: Vec<f64>,
    pub e0: Vec<f64>,
    pub gamma: Vec<f64>,
}

pub fn draw(rng: &mut ChaCha8Rng, size: usize, poly: &ConnPoly, pruned: bool) -> Draw {
    let mut st = ConvState::zero(poly.degree());
    for _ in 0..rng.gen_range(0..20) {
        poly.step(rng.gen_range(0..2), &mut st);
    }
    let r = (0..size).map(|_| rng.gen_range(-8.0..8.0)).collect();
    let e0 = (0..size).map(|_| rng.gen_range(0.0..1.0)).collect();
    let gamma = (0..size)
        .map(|_| if pruned { -(rng.gen_range(0..6) as f64) } else { f64::NEG_INFINITY })
        .collect();
    Draw { st, r, e0, gamma }
}
