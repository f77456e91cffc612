//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use nlgames::channels::{FiniteChannel, Povm};
use nlgames::games::FiniteGame;
use nlgames::linalg::{self, herm_eig, kron, ComplexMatrix, HermitianOperator, C64, ZERO};
use rand::{RngExt, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::SplitMix64;

pub type Rng = SplitMix64;

pub fn rng(seed: u64) -> Rng {
    SplitMix64::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    ComplexMatrix::new(rows, cols, (0..rows * cols).map(|_| gaussian(rng)).collect()).unwrap()
}

pub fn random_state(n: usize, rng: &mut Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = linalg::vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// Gram-Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = random_matrix(d, d, rng);
    let mut u = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let mut v = g.column(j);
        for k in 0..j {
            let q = u.column(k);
            let c = linalg::inner(&q, &v);
            for (vi, qi) in v.iter_mut().zip(&q) {
                *vi -= qi * c;
            }
        }
        let n = linalg::vec_norm(&v);
        u.set_column(j, &v.into_iter().map(|z| z / n).collect::<Vec<_>>());
    }
    u
}

/// `E_a = S^{-1/2} G_a S^{-1/2}` with random positive `G_a` and `S = sum G_a`.
pub fn random_povm(d: usize, k: usize, rng: &mut Rng) -> Povm {
    let gs: Vec<HermitianOperator> = (0..k)
        .map(|_| {
            let a = random_matrix(d, d, rng);
            HermitianOperator::new(&a * &a.adjoint()).unwrap()
        })
        .collect();
    let s = gs.iter().fold(HermitianOperator::zeros(d), |acc, g| acc.add(g));
    let inv_sqrt = linalg::spectral_map(&herm_eig(&s).unwrap(), |v| 1.0 / v.sqrt());
    Povm::new(gs.iter().map(|g| g.conjugate_by(inv_sqrt.matrix())).collect()).unwrap()
}

pub fn random_channel(d: usize, inputs: usize, k: usize, rng: &mut Rng) -> FiniteChannel {
    FiniteChannel::new((0..inputs).map(|_| random_povm(d, k, rng)).collect()).unwrap()
}

pub fn lift_left(e: &Povm, other: usize) -> Povm {
    let id = ComplexMatrix::identity(other);
    Povm::new(
        e.effects()
            .iter()
            .map(|m| HermitianOperator::new(kron(m.matrix(), &id)).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn lift_right(e: &Povm, other: usize) -> Povm {
    let id = ComplexMatrix::identity(other);
    Povm::new(
        e.effects()
            .iter()
            .map(|m| HermitianOperator::new(kron(&id, m.matrix())).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn conjugate(e: &Povm, u: &ComplexMatrix) -> Povm {
    Povm::new(e.effects().iter().map(|m| m.conjugate_by(&u.adjoint())).collect()).unwrap()
}

/// Random predicate with a random full-support question distribution.
pub fn random_game(nx: usize, ny: usize, na: usize, nb: usize, rng: &mut Rng) -> FiniteGame {
    let raw: Vec<f64> = (0..nx * ny).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let dist = raw.iter().map(|v| v / total).collect();
    let pred = (0..nx * ny * na * nb).map(|_| rng.random_bool(0.5)).collect();
    FiniteGame::new(nx, ny, na, nb, pred, dist).unwrap()
}

pub fn random_binary_game(rng: &mut Rng) -> FiniteGame {
    random_game(2, 2, 2, 2, rng)
}

fn decode(mut idx: usize, len: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    out
}

/// Local value by trying every pair of deterministic strategies.
pub fn brute_force_local(g: &FiniteGame) -> f64 {
    let (nx, ny, na, nb) = g.shape();
    let mut best: f64 = 0.0;
    for fi in 0..na.pow(nx as u32) {
        let f = decode(fi, nx, na);
        for gi in 0..nb.pow(ny as u32) {
            let h = decode(gi, ny, nb);
            let mut v = 0.0;
            for x in 0..nx {
                for y in 0..ny {
                    if g.wins(x, y, f[x], h[y]) {
                        v += g.prob(x, y);
                    }
                }
            }
            best = best.max(v);
        }
    }
    best
}

/// Tensor product state `sum_l sqrt(w_l) |l>|l>` on `C^n ⊗ C^n`.
pub fn correlated_state(weights: &[f64]) -> Vec<C64> {
    let n = weights.len();
    let mut psi = vec![ZERO; n * n];
    for (l, w) in weights.iter().enumerate() {
        psi[l * n + l] = C64::new(w.sqrt(), 0.0);
    }
    psi
}

/// Diagonal POVMs `E_a^x = sum_l q_l(a|x) |l><l|`.
pub fn diagonal_channel(tables: &[Vec<Vec<f64>>]) -> FiniteChannel {
    let inputs = tables[0].len();
    let outcomes = tables[0][0].len();
    let povms = (0..inputs)
        .map(|x| {
            Povm::new(
                (0..outcomes)
                    .map(|a| HermitianOperator::from_diag(&tables.iter().map(|t| t[x][a]).collect::<Vec<_>>()))
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    FiniteChannel::new(povms).unwrap()
}

pub fn random_stochastic(inputs: usize, outcomes: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    (0..inputs)
        .map(|_| {
            let raw: Vec<f64> = (0..outcomes).map(|_| rng.random_range(0.0..1.0)).collect();
            let t: f64 = raw.iter().sum();
            raw.iter().map(|v| v / t).collect()
        })
        .collect()
}
