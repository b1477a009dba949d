#![allow(dead_code)]

use std::sync::Arc;

use chainmap::algebra::{Matrix, Rational};
use chainmap::complexes::{Simplex, SimplicialComplex};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random face-closed complex on at most `max_vertices` vertices with at most
/// `max_simplices` simplices.
pub fn random_complex(rng: &mut ChaCha8Rng, max_vertices: usize, max_simplices: usize) -> SimplicialComplex {
    loop {
        let nv = rng.random_range(1..=max_vertices);
        let facets = rng.random_range(1..=4);
        let mut simplices: Vec<Simplex> = (0..nv).map(Simplex::vertex).collect();
        for _ in 0..facets {
            let size = rng.random_range(1..=nv.min(3));
            let mut vs: Vec<usize> = (0..nv).collect();
            for i in 0..size {
                let j = rng.random_range(i..nv);
                vs.swap(i, j);
            }
            vs.truncate(size);
            vs.sort_unstable();
            simplices.push(Simplex::new(vs).unwrap());
        }
        let k = SimplicialComplex::closure_of(simplices);
        if k.len() <= max_simplices {
            return k;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn arc(k: SimplicialComplex) -> Arc<SimplicialComplex> {
    Arc::new(k)
}

/// A five-decimal map from octagon chains (columns) to square chains (rows)
/// whose largest row sum exceeds one.
pub const OCTAGON_TO_SQUARE: [[f64; 16]; 8] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.66667, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.33333, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.33333, 0.0, 1.0, 0.33333, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.66667, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.66667, 1.0, 0.66667, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.33333, 1.0, 1.0],
];

/// Rank by fraction-free elimination on a dense copy.
pub fn dense_rank(m: &Matrix<Rational>) -> usize {
    let mut a: Vec<Vec<BigInt>> = {
        let d = m.to_dense();
        // clear denominators row by row
        d.into_iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
                row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    };
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                a[i][j] = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Betti numbers from dense ranks of the boundary matrices.
pub fn oracle_betti(k: &SimplicialComplex) -> Vec<usize> {
    let Some(top) = k.dim() else { return Vec::new() };
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|d| if d == 0 || d > top { 0 } else { dense_rank(&k.boundary_matrix::<Rational>(d).unwrap()) })
        .collect();
    (0..=top).map(|d| k.count(d) - ranks[d] - ranks[d + 1]).collect()
}

