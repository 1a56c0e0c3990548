//! Seeded random data for property checks and pointwise verification.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exterior::{Field, Kind};
use crate::poly::{Chart, Poly, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sample `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Random polynomial with small integer coefficients and total degree `≤ max_degree`.
pub fn poly(rng: &mut SampleRng, chart: &Arc<Chart>, max_degree: u32, max_terms: usize) -> Poly {
    let n = rng.gen_range(0..=max_terms);
    let terms = (0..n).map(|_| {
        let mut budget = rng.gen_range(0..=max_degree);
        let mut exps = vec![0u32; chart.dim()];
        while budget > 0 {
            let i = rng.gen_range(0..chart.dim());
            exps[i] += 1;
            budget -= 1;
        }
        let c: i64 = rng.gen_range(-3..=3);
        (exps, Rational::from_integer(BigInt::from(c)))
    });
    Poly::from_terms(chart, terms.collect::<Vec<_>>()).expect("exponent vectors sized to chart")
}

/// Random field of a given grade with random polynomial coefficients.
pub fn field<K: Kind>(
    rng: &mut SampleRng,
    chart: &Arc<Chart>,
    grade: usize,
    max_degree: u32,
) -> Field<K> {
    let gens = chart.dim() + K::EXTENDED as usize;
    let mut out = Field::<K>::zero(chart, grade);
    for mask in 0u32..(1 << gens) {
        if mask.count_ones() as usize != grade || rng.gen_bool(0.4) {
            continue;
        }
        let c = poly(rng, chart, max_degree, 3);
        out.alt.insert(mask, c);
    }
    out
}

/// Random nonzero rational `a/b` with `a ∈ [-20, 20] \ {0}`, `b ∈ [1, 7]`.
pub fn nonzero_rational(rng: &mut SampleRng) -> Rational {
    let mut a: i64 = 0;
    while a == 0 {
        a = rng.gen_range(-20..=20);
    }
    let b: i64 = rng.gen_range(1..=7);
    Rational::new(BigInt::from(a), BigInt::from(b))
}

pub fn point(rng: &mut SampleRng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| nonzero_rational(rng)).collect()
}

/// All points of `{1, …, side}^dim`.
pub fn grid(dim: usize, side: u32) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * side as usize);
        for p in &out {
            for v in 1..=side {
                let mut q = p.clone();
                q.push(Rational::from_integer(BigInt::from(v)));
                next.push(q);
            }
        }
        out = next;
    }
    out
}
