#![allow(dead_code)]

use std::collections::BTreeMap;

use hodgekit::hodge::{Bidegree, HodgeDecomposition};
use hodgekit::linalg::{rational, GaussianRational, QiMatrix, Subspace};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut StdRng) -> hodgekit::linalg::Rational {
    let den = if rng.random_bool(0.25) { rng.random_range(2..=3) } else { 1 };
    rational(rng.random_range(-3..=3), den)
}

pub fn gaussian(rng: &mut StdRng) -> GaussianRational {
    GaussianRational::new(small_rational(rng), small_rational(rng))
}

pub fn real(rng: &mut StdRng) -> GaussianRational {
    GaussianRational::real(small_rational(rng))
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> QiMatrix {
    let entries = (0..rows).map(|_| (0..cols).map(|_| gaussian(rng)).collect()).collect();
    QiMatrix::from_rows(entries, cols).unwrap()
}

pub fn random_invertible(rng: &mut StdRng, n: usize) -> QiMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

fn conj_vec(v: &[GaussianRational]) -> Vec<GaussianRational> {
    v.iter().map(GaussianRational::conj).collect()
}

/// Hodge numbers `h^{p,q}` (symmetric) for a structure of the given weight
/// and rank; odd weight needs even rank.
fn random_hodge_numbers(rng: &mut StdRng, weight: i64, rank: usize) -> BTreeMap<Bidegree, usize> {
    let mut h = BTreeMap::new();
    let mut left = rank;
    let lowest_upper = weight.div_euclid(2) + 1;
    while left > 0 {
        if weight % 2 == 0 && (left == 1 || rng.random_bool(0.3)) {
            *h.entry(Bidegree::new(weight / 2, weight / 2)).or_insert(0) += 1;
            left -= 1;
        } else {
            let p = lowest_upper + rng.random_range(0..3);
            let key = Bidegree::new(p, weight - p);
            *h.entry(key).or_insert(0) += 1;
            *h.entry(key.swapped()).or_insert(0) += 1;
            left -= 2;
        }
    }
    h
}

/// A random valid pure structure: blocks above the diagonal get random
/// Gaussian-rational vectors, their conjugates fill the mirror blocks, and
/// the middle block is real.
pub fn random_structure(rng: &mut StdRng, max_rank: usize, weights: std::ops::RangeInclusive<i64>) -> HodgeDecomposition {
    loop {
        let weight = rng.random_range(weights.clone());
        let rank = if weight % 2 == 0 {
            rng.random_range(1..=max_rank)
        } else {
            2 * rng.random_range(1..=max_rank / 2)
        };
        let h = random_hodge_numbers(rng, weight, rank);
        let mut blocks = BTreeMap::new();
        for (&key, &dim) in &h {
            if key.p < key.q {
                continue;
            }
            let vectors: Vec<Vec<GaussianRational>> = (0..dim)
                .map(|_| {
                    (0..rank)
                        .map(|_| if key.p == key.q { real(rng) } else { gaussian(rng) })
                        .collect()
                })
                .collect();
            if key.p != key.q {
                let mirrored: Vec<_> = vectors.iter().map(|v| conj_vec(v)).collect();
                blocks.insert(key.swapped(), Subspace::span(rank, &mirrored).unwrap());
            }
            blocks.insert(key, Subspace::span(rank, &vectors).unwrap());
        }
        if blocks.iter().any(|(k, s)| s.dim() != h[k]) {
            continue;
        }
        if let Ok(d) = HodgeDecomposition::new(weight, rank, blocks) {
            return d;
        }
    }
}

/// Hodge numbers of `Λ^k` from block dimensions alone: choose `k_b` vectors
/// from each block `b` with `Σ k_b = k`, weighted by `Π C(h_b, k_b)`.
pub fn wedge_hodge_numbers(h: &BTreeMap<Bidegree, usize>, k: usize) -> BTreeMap<Bidegree, usize> {
    fn binom(n: usize, r: usize) -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    // poly[j] maps a bidegree to the count of j-element choices.
    let mut poly: Vec<BTreeMap<Bidegree, usize>> = vec![BTreeMap::new(); k + 1];
    poly[0].insert(Bidegree::new(0, 0), 1);
    for (&key, &dim) in h {
        let mut next: Vec<BTreeMap<Bidegree, usize>> = vec![BTreeMap::new(); k + 1];
        for (j, terms) in poly.iter().enumerate() {
            for (&deg, &count) in terms {
                for take in 0..=dim.min(k - j) {
                    let c = binom(dim, take);
                    if c == 0 {
                        continue;
                    }
                    let shifted = Bidegree::new(deg.p + key.p * take as i64, deg.q + key.q * take as i64);
                    *next[j + take].entry(shifted).or_insert(0) += count * c;
                }
            }
        }
        poly = next;
    }
    poly.pop().unwrap()
}
