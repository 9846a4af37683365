#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use siegel_toroidal::cone::{sym_dim, GroupElement, MarkedCone, SymIntMat};
use siegel_toroidal::linalg::int_det;

pub fn s(rows: &[&[i64]]) -> SymIntMat {
    SymIntMat::from_i64(rows).unwrap()
}

/// `v vᵀ` for an integer vector.
pub fn outer(v: &[i64]) -> SymIntMat {
    let rows: Vec<Vec<BigInt>> = v
        .iter()
        .map(|a| v.iter().map(|b| BigInt::from(a * b)).collect())
        .collect();
    SymIntMat::new(rows).unwrap()
}

/// `B Bᵀ` with `B` a random `g × r` integer matrix, entries in `[-2, 2]`.
pub fn random_psd(rng: &mut impl Rng, g: usize, r: usize) -> SymIntMat {
    let b: Vec<Vec<i64>> = (0..g)
        .map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect())
        .collect();
    let rows = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| BigInt::from((0..r).map(|k| b[i][k] * b[j][k]).sum::<i64>()))
                .collect()
        })
        .collect();
    SymIntMat::new(rows).unwrap()
}

fn sum(ms: &[SymIntMat]) -> SymIntMat {
    let g = ms[0].g();
    let rows = (0..g)
        .map(|i| (0..g).map(|j| ms.iter().map(|m| m.get(i, j).clone()).sum()).collect())
        .collect();
    SymIntMat::new(rows).unwrap()
}

/// Top-dimensional PSD cone of full rank whose generator sum is positive definite.
pub fn random_top_cone(rng: &mut impl Rng, g: usize) -> MarkedCone {
    let n = sym_dim(g);
    loop {
        let gens: Vec<SymIntMat> = (0..n)
            .map(|_| {
                let r = rng.gen_range(1..=g);
                random_psd(rng, g, r)
            })
            .collect();
        if gens.iter().any(SymIntMat::is_zero) {
            continue;
        }
        let coords: Vec<Vec<BigInt>> = gens.iter().map(SymIntMat::delta_coords).collect();
        if int_det(&coords).is_zero() || !sum(&gens).is_positive_definite() {
            continue;
        }
        if let Ok(c) = MarkedCone::new(g, BigInt::one(), gens, None) {
            return c;
        }
    }
}

/// Product of random elementary unimodular matrices.
pub fn random_unimodular(rng: &mut impl Rng, g: usize, steps: usize) -> GroupElement {
    let mut m: Vec<Vec<i64>> = (0..g)
        .map(|i| (0..g).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..g);
        let j = rng.gen_range(0..g);
        match rng.gen_range(0..3) {
            0 if i != j => {
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                for c in 0..g {
                    m[i][c] += sign * m[j][c];
                }
            }
            1 => m.swap(i, j),
            _ => {
                for c in 0..g {
                    m[i][c] = -m[i][c];
                }
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    GroupElement::new(rows).unwrap()
}

/// Symmetric `g × g` integer matrix with entries in `[-bound, bound]`.
pub fn random_symmetric(rng: &mut impl Rng, g: usize, bound: i64) -> SymIntMat {
    let mut rows = vec![vec![BigInt::zero(); g]; g];
    for i in 0..g {
        for j in i..g {
            let v = BigInt::from(rng.gen_range(-bound..=bound));
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    SymIntMat::new(rows).unwrap()
}

/// `N` independent symmetric integer matrices.
pub fn random_pencil(rng: &mut impl Rng, g: usize, bound: i64) -> Vec<SymIntMat> {
    let n = sym_dim(g);
    loop {
        let mats: Vec<SymIntMat> = (0..n).map(|_| random_symmetric(rng, g, bound)).collect();
        let coords: Vec<Vec<BigInt>> = mats.iter().map(SymIntMat::delta_coords).collect();
        if !int_det(&coords).is_zero() {
            return mats;
        }
    }
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Farey triangles around the principal cone: primitive vectors `v ↦ v vᵀ`.
pub const FAREY_G2: [[[i64; 2]; 3]; 4] = [
    [[1, 0], [0, 1], [1, -1]],
    [[1, 0], [0, 1], [1, 1]],
    [[1, 0], [1, -1], [2, -1]],
    [[0, 1], [1, -1], [1, -2]],
];

pub fn farey_fan() -> Vec<MarkedCone> {
    FAREY_G2
        .iter()
        .map(|tri| {
            MarkedCone::new(2, BigInt::one(), tri.iter().map(|v| outer(v)).collect(), None).unwrap()
        })
        .collect()
}

/// Distinct rays of [`FAREY_G2`], in first-appearance order.
pub fn farey_rays() -> Vec<[i64; 2]> {
    let mut rays: Vec<[i64; 2]> = Vec::new();
    for tri in FAREY_G2 {
        for v in tri {
            if !rays.contains(&v) {
                rays.push(v);
            }
        }
    }
    rays
}
