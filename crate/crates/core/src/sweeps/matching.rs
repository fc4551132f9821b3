//! Assignment of eigenvectors between neighbouring samples.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{cdot, hdot, C64};

/// Overlap `|l_i . r_j| / sqrt(|l_i . r_i| |l_j . r_j|)` between tracked
/// vectors (left `l_prev`, right `r_prev`) and fresh modes.
pub fn overlap_matrix(
    l_prev: &[Vec<C64>],
    r_prev: &[Vec<C64>],
    l_next: &[Vec<C64>],
    r_next: &[Vec<C64>],
) -> Vec<Vec<f64>> {
    let n = l_prev.len();
    let dp: Vec<f64> = (0..n).map(|i| cdot(&l_prev[i], &r_prev[i]).norm()).collect();
    let dn: Vec<f64> = (0..r_next.len()).map(|j| cdot(&l_next[j], &r_next[j]).norm()).collect();
    (0..n)
        .map(|i| {
            (0..r_next.len())
                .map(|j| {
                    let d = (dp[i] * dn[j]).sqrt();
                    if d > 0.0 {
                        cdot(&l_prev[i], &r_next[j]).norm() / d
                    } else {
                        // fully self-orthogonal vectors: fall back to the Hermitian angle
                        hdot(&r_prev[i], &r_next[j]).norm()
                    }
                })
                .collect()
        })
        .collect()
}

/// Largest-entry-first assignment; `assign[i]` is the column for row `i`.
pub fn greedy(o: &[Vec<f64>]) -> Vec<usize> {
    let n = o.len();
    let mut entries: Vec<(f64, usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (o[i][j], i, j)).collect();
    entries.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (_, i, j) in entries {
        if assign[i] == usize::MAX && !used[j] {
            assign[i] = j;
            used[j] = true;
        }
    }
    assign
}

/// Maximum-total-weight assignment (Hungarian method with potentials).
pub fn hungarian(o: &[Vec<f64>]) -> Vec<usize> {
    let n = o.len();
    let big = o.iter().flatten().copied().fold(0.0, f64::max);
    // minimize cost = big - o, 1-based arrays as in the classic formulation
    let cost = |i: usize, j: usize| big - o[i - 1][j - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    assign
}

pub fn total(o: &[Vec<f64>], assign: &[usize]) -> f64 {
    assign.iter().enumerate().map(|(i, &j)| o[i][j]).sum()
}

/// True when swapping the targets of two rows changes the total overlap by
/// less than `tol`.
pub fn is_ambiguous(o: &[Vec<f64>], assign: &[usize], tol: f64) -> bool {
    let n = assign.len();
    for a in 0..n {
        for b in (a + 1)..n {
            let now = o[a][assign[a]] + o[b][assign[b]];
            let swapped = o[a][assign[b]] + o[b][assign[a]];
            if (now - swapped).abs() < tol {
                return true;
            }
        }
    }
    false
}

/// Greedy with optimal fallback when any greedy overlap falls below `floor`.
pub fn assign(o: &[Vec<f64>], floor: f64) -> Vec<usize> {
    let g = greedy(o);
    if g.iter().enumerate().all(|(i, &j)| o[i][j] >= floor) {
        g
    } else {
        let h = hungarian(o);
        if total(o, &h) > total(o, &g) {
            h
        } else {
            g
        }
    }
}
