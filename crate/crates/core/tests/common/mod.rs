#![allow(dead_code)]

use eptrap_core::linalg::c;
use eptrap_core::{Matrix, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cnum(r: &mut impl Rng) -> C64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn random_matrix(r: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, |_, _| cnum(r)).unwrap()
}

pub fn random_symmetric(r: &mut impl Rng, n: usize) -> Matrix {
    let a = random_matrix(r, n);
    Matrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)]) * 0.5).unwrap().certify_symmetric().unwrap()
}

/// Closed-form eigenvalues of `[[a, b], [d, e]]`.
pub fn two_by_two(m: &Matrix) -> [C64; 2] {
    let (a, b, d, e) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mean = (a + e) / 2.0;
    let half = ((a - e) * (a - e) / 4.0 + b * d).sqrt();
    [mean + half, mean - half]
}

/// Minimum over both pairings of the larger eigenvalue error.
pub fn pair_error(got: [C64; 2], want: [C64; 2]) -> f64 {
    let straight = (got[0] - want[0]).norm().max((got[1] - want[1]).norm());
    let crossed = (got[0] - want[1]).norm().max((got[1] - want[0]).norm());
    straight.min(crossed)
}
