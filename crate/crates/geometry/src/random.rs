//! Seeded instance generation. Every random draw in the crate goes through a
//! ChaCha stream keyed by an explicit seed, so results are reproducible across
//! platforms.

use cq_core::{Matrix, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a sub-task, so that retries and
/// per-entry draws do not shift each other.
pub fn substream(seed: u64, tag: u64) -> SeededRng {
    let mut base = rng(seed);
    base.set_stream(tag);
    base
}

/// A rational `a/b` with `|a| <= 3`, `b` in `1..=2`.
pub fn small_rat(rng: &mut SeededRng) -> Rat {
    Rat::new(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

pub fn small_nonzero_int(rng: &mut SeededRng) -> Rat {
    let v: i64 = rng.gen_range(1..=3);
    Rat::from_int(if rng.gen_bool(0.5) { v } else { -v })
}

pub fn int_matrix(rng: &mut SeededRng, rows: usize, cols: usize, bound: i64) -> Matrix<Rat> {
    Matrix::from_fn(rows, cols, |_, _| Rat::from_int(rng.gen_range(-bound..=bound)))
}

/// A matrix of the given shape with full column rank.
pub fn full_rank_int_matrix(rng: &mut SeededRng, rows: usize, cols: usize, bound: i64) -> Matrix<Rat> {
    loop {
        let m = int_matrix(rng, rows, cols, bound);
        if m.rank() == rows.min(cols) {
            return m;
        }
    }
}

pub fn invertible_small_rat_matrix(rng: &mut SeededRng, n: usize) -> Matrix<Rat> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| small_rat(rng));
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// A random symmetric integer matrix.
pub fn symmetric_int_matrix(rng: &mut SeededRng, n: usize, bound: i64) -> Matrix<Rat> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = Rat::from_int(rng.gen_range(-bound..=bound));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}
