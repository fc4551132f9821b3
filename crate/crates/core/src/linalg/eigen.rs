#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use super::{cdot, hessenberg, norm2, Matrix, C64, EPS};
use crate::error::{Error, Result};

/// Solver knobs. Defaults: `eig_tol = 1e-10`, `max_qr_iters = 30 n^2`.
#[derive(Clone, Copy, Debug)]
pub struct EigOptions {
    /// Residual bound relative to the Frobenius norm.
    pub eig_tol: f64,
    /// Total QR sweeps allowed before giving up; `None` means `30 n^2`.
    pub max_qr_iters: Option<usize>,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self { eig_tol: 1e-10, max_qr_iters: None }
    }
}

/// One eigenvalue with its right and left eigenvectors.
///
/// `right` satisfies `m right = value right`; `left` is a row vector with
/// `left m = value left`. As returned by [`eig`] the right vector has unit
/// Euclidean norm and `residual = ||m right - value right||_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: C64,
    pub right: Vec<C64>,
    pub left: Vec<C64>,
    pub residual: f64,
}

impl EigenPair {
    /// Decay width `-2 Im z`.
    pub fn width(&self) -> f64 {
        -2.0 * self.value.im
    }

    /// Position `Re z`.
    pub fn energy(&self) -> f64 {
        self.value.re
    }

    /// Biorthogonal pairing `left . right`.
    pub fn c_product(&self) -> C64 {
        cdot(&self.left, &self.right)
    }
}

/// Complex Schur form `m = Z T Z^H`.
#[derive(Clone, Debug)]
pub struct Schur {
    pub t: Matrix,
    pub z: Matrix,
    pub iterations: usize,
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with `c` real,
/// chosen so that `G [x; y] = [r; 0]`.
#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    fn new(x: C64, y: C64) -> Self {
        let ax = x.norm();
        let ay = y.norm();
        if ay == 0.0 {
            return Self { c: 1.0, s: C64::new(0.0, 0.0) };
        }
        if ax == 0.0 {
            return Self { c: 0.0, s: y.conj() / ay };
        }
        let r = ax.hypot(ay);
        Self { c: ax / r, s: (x / ax) * y.conj() / r }
    }

    /// Rows `k, k+1`, columns `from..n`.
    fn apply_left(&self, h: &mut Matrix, k: usize, from: usize) {
        let n = h.dim();
        for j in from..n {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = a * self.c + self.s * b;
            h[(k + 1, j)] = -self.s.conj() * a + b * self.c;
        }
    }

    /// Columns `k, k+1` of rows `0..to` multiplied by `G^H`.
    fn apply_right(&self, h: &mut Matrix, k: usize, to: usize) {
        for i in 0..to {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * self.c + b * self.s.conj();
            h[(i, k + 1)] = -a * self.s + b * self.c;
        }
    }
}

fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalue of the trailing 2x2 block `[[a, b], [c, d]]` nearest to `d`.
fn wilkinson_shift(a: C64, b: C64, cc: C64, d: C64) -> C64 {
    let t = (a - d) * 0.5;
    let bc = b * cc;
    let disc = (t * t + bc).sqrt();
    let p = t + disc;
    let m = t - disc;
    let den = if p.norm() >= m.norm() { p } else { m };
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

/// Complex Schur decomposition by Hessenberg reduction and implicitly
/// shifted single-shift QR with Wilkinson shifts.
pub fn schur(m: &Matrix, max_iters: Option<usize>) -> Result<Schur> {
    let n = m.dim();
    let (mut h, mut z) = hessenberg(m)?;
    let max_total = max_iters.unwrap_or(30 * n * n);
    let unfl = f64::MIN_POSITIVE;
    let smlnum = unfl * (n as f64 / EPS);
    let mut total = 0usize;

    let mut ihi = n - 1;
    let mut its = 0usize;
    while ihi > 0 {
        // locate the active unreduced block [l, ihi]
        let mut l = ihi;
        while l > 0 {
            let sub = abs1(h[(l, l - 1)]);
            if sub <= smlnum {
                break;
            }
            let mut tst = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if tst == 0.0 {
                if l >= 2 {
                    tst += h[(l - 1, l - 2)].re.abs();
                }
                if l + 1 <= ihi {
                    tst += h[(l + 1, l)].re.abs();
                }
            }
            if sub <= EPS * tst {
                break;
            }
            l -= 1;
        }
        if l > 0 {
            h[(l, l - 1)] = C64::new(0.0, 0.0);
        }
        if l == ihi {
            ihi -= 1;
            its = 0;
            continue;
        }
        if total >= max_total {
            return Err(Error::Convergence { iterations: total, partial: h });
        }

        let shift = if its == 10 || its == 20 {
            // exceptional shift breaks rare cycles
            let s = 0.75 * h[(ihi, ihi - 1)].re.abs() + h[(ihi, ihi)].re.abs();
            h[(ihi, ihi)] + C64::new(s, 0.0)
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };

        let mut x = h[(l, l)] - shift;
        let mut y = h[(l + 1, l)];
        for k in l..ihi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let g = Givens::new(x, y);
            let from = if k > l { k - 1 } else { l };
            g.apply_left(&mut h, k, from);
            let to = (k + 3).min(ihi + 1);
            g.apply_right(&mut h, k, to);
            g.apply_right(&mut z, k, n);
            if k > l {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
        }
        its += 1;
        total += 1;
    }

    // strictly lower part is zero by construction of the sweeps; make it exact
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(Schur { t: h, z, iterations: total })
}

/// Eigenvector `x` of upper triangular `t` for `t[k][k]`, with `x_k = 1`.
fn triangular_right(t: &Matrix, k: usize, smin: f64) -> Vec<C64> {
    let n = t.dim();
    let lambda = t[(k, k)];
    let mut x = vec![C64::new(0.0, 0.0); n];
    x[k] = C64::new(1.0, 0.0);
    for j in (0..k).rev() {
        let mut s = C64::new(0.0, 0.0);
        for i in (j + 1)..=k {
            s += t[(j, i)] * x[i];
        }
        let mut d = t[(j, j)] - lambda;
        if d.norm() < smin {
            d = C64::new(smin, 0.0);
        }
        x[j] = -safe_div(s, d);
        rescale_if_large(&mut x);
    }
    x
}

/// Row eigenvector `u` of upper triangular `t` (`u t = t[k][k] u`).
fn triangular_left(t: &Matrix, k: usize, smin: f64) -> Vec<C64> {
    let n = t.dim();
    let lambda = t[(k, k)];
    let mut u = vec![C64::new(0.0, 0.0); n];
    u[k] = C64::new(1.0, 0.0);
    for j in (k + 1)..n {
        let mut s = C64::new(0.0, 0.0);
        for i in k..j {
            s += u[i] * t[(i, j)];
        }
        let mut d = lambda - t[(j, j)];
        if d.norm() < smin {
            d = C64::new(smin, 0.0);
        }
        u[j] = safe_div(s, d);
        rescale_if_large(&mut u);
    }
    u
}

// avoids the underflowing |d|^2 of the library division when d is tiny
fn safe_div(a: C64, d: C64) -> C64 {
    let dn = d.norm();
    (a / dn) * (d.conj() / dn)
}

fn rescale_if_large(v: &mut [C64]) {
    let big = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if big > 1e100 {
        for z in v.iter_mut() {
            *z /= big;
        }
    }
}

fn normalized(mut v: Vec<C64>) -> Vec<C64> {
    let nv = norm2(&v);
    if nv > 0.0 {
        for z in v.iter_mut() {
            *z /= nv;
        }
    }
    v
}

/// Full eigendecomposition with default options.
pub fn eig(m: &Matrix) -> Result<Vec<EigenPair>> {
    eig_with(m, &EigOptions::default())
}

/// Eigenvalues with right and left eigenvectors, sorted by `(Re z, Im z)`.
///
/// Right vectors come from back-substitution on the Schur form. Left
/// vectors are transposes of the right ones when `m` carries the
/// complex-symmetric flag, and come from forward substitution on the same
/// Schur form otherwise.
pub fn eig_with(m: &Matrix, opts: &EigOptions) -> Result<Vec<EigenPair>> {
    let n = m.dim();
    let Schur { t, z, .. } = schur(m, opts.max_qr_iters)?;
    let norm = m.frobenius_norm();
    let tnorm = t.frobenius_norm().max(f64::MIN_POSITIVE);
    let smin = (EPS * tnorm).max(f64::MIN_POSITIVE * 1e10);
    let bound = opts.eig_tol * norm.max(f64::MIN_POSITIVE);

    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let value = t[(k, k)];
        let x = triangular_right(&t, k, smin);
        let right = normalized(z.mul_vec(&x));
        let left = if m.is_symmetric() {
            right.clone()
        } else {
            // u Z^H  =>  (u Z^H)_j = sum_i u_i conj(Z_ji)
            let u = triangular_left(&t, k, smin);
            let mut l = vec![C64::new(0.0, 0.0); n];
            for (j, lj) in l.iter_mut().enumerate() {
                *lj = (0..n).map(|i| u[i] * z[(j, i)].conj()).sum();
            }
            normalized(l)
        };
        let mr = m.mul_vec(&right);
        let diff: Vec<C64> = mr.iter().zip(&right).map(|(a, b)| a - value * b).collect();
        let residual = norm2(&diff);
        if !(residual <= bound) && norm > 0.0 {
            return Err(Error::Residual { index: k, residual, bound });
        }
        pairs.push(EigenPair { value, right, left, residual });
    }
    pairs.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.value.im.partial_cmp(&b.value.im).unwrap_or(core::cmp::Ordering::Equal))
    });
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, norm2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let m = Matrix::diag(&[c(1.0, 0.0), c(2.0, -0.5)]).unwrap();
        let p = eig(&m).unwrap();
        assert_eq!(p[0].value, c(1.0, 0.0));
        assert_eq!(p[1].value, c(2.0, -0.5));
        assert!((p[0].right[0].norm() - 1.0).abs() < 1e-15 && p[0].right[1].norm() < 1e-15);
        assert!((p[1].right[1].norm() - 1.0).abs() < 1e-15 && p[1].right[0].norm() < 1e-15);
    }

    #[test]
    fn two_level_degenerate_energies() {
        let m = Matrix::from_rows(&[vec![c(0.0, 0.0), c(0.5, 0.0)], vec![c(0.5, 0.0), c(0.0, 0.0)]])
            .unwrap()
            .certify_symmetric()
            .unwrap();
        let p = eig(&m).unwrap();
        assert!((p[0].value - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((p[1].value - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn residuals_trace_and_left_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=24 {
            let m = random(n, &mut rng);
            let p = eig(&m).unwrap();
            let sum: C64 = p.iter().map(|e| e.value).sum();
            assert!((sum - m.trace()).norm() <= 1e-10 * m.frobenius_norm());
            for e in &p {
                assert!(e.residual <= 1e-10 * m.frobenius_norm());
                let lm = m.vec_mul(&e.left);
                let d: Vec<C64> = lm.iter().zip(&e.left).map(|(a, b)| a - e.value * b).collect();
                assert!(norm2(&d) <= 1e-9 * m.frobenius_norm(), "left residual n={n}");
            }
        }
    }

    #[test]
    fn symmetric_flag_matches_general_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=12 {
            let a = random(n, &mut rng);
            let s = a.add(&a.transpose()).unwrap().certify_symmetric().unwrap();
            let fast = eig(&s).unwrap();
            let general = eig(&s.clone().without_symmetric_flag()).unwrap();
            for (f, g) in fast.iter().zip(&general) {
                assert!((f.value - g.value).norm() <= 1e-10);
                // general left vector is parallel to the transpose of the right one
                let cos = crate::linalg::hdot(&g.left, &f.right).norm();
                assert!((cos - 1.0).abs() < 1e-8, "n={n} cos={cos}");
            }
        }
    }

    #[test]
    fn convergence_error_carries_partial_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random(8, &mut rng);
        let opts = EigOptions { max_qr_iters: Some(2), ..EigOptions::default() };
        match eig_with(&m, &opts) {
            Err(Error::Convergence { partial, iterations }) => {
                assert_eq!(partial.dim(), 8);
                assert_eq!(iterations, 2);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
