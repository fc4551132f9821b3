use alloc::vec::Vec;

use super::{argmax_modulus, cdot, norm2, EigenPair, C64};
use crate::error::{Error, Result};

/// Flips the overall sign so the largest-modulus component of `v` has
/// argument in `(-pi/2, pi/2]`. Returns the factor applied (`+1` or `-1`).
pub fn fix_phase_gauge(v: &mut [C64]) -> f64 {
    if v.is_empty() {
        return 1.0;
    }
    let z = v[argmax_modulus(v)];
    // arg in (-pi/2, pi/2]  <=>  re > 0, or re == 0 with im > 0
    let keep = z.re > 0.0 || (z.re == 0.0 && z.im >= 0.0);
    if keep {
        1.0
    } else {
        for x in v.iter_mut() {
            *x = -*x;
        }
        -1.0
    }
}

/// Biorthogonal normalization of one eigenpair: `left . right = 1`.
///
/// Complex-symmetric pairs (`left` equal to `right`) become
/// `right / sqrt(right . right)` with the sign fixed by
/// [`fix_phase_gauge`]. General pairs are first balanced to equal Euclidean
/// norms, then both divided by `sqrt(left . right)`. The residual is
/// rescaled with the right vector.
pub fn c_normalize_pair(pair: &EigenPair) -> Result<EigenPair> {
    let nr = norm2(&pair.right);
    let nl = norm2(&pair.left);
    if nr == 0.0 || nl == 0.0 {
        return Err(Error::Contract("zero eigenvector".into()));
    }
    let self_dual = pair.left == pair.right;
    let mut right: Vec<C64> = pair.right.iter().map(|z| z / nr).collect();
    let mut left: Vec<C64> = if self_dual {
        right.clone()
    } else {
        pair.left.iter().map(|z| z / nl).collect()
    };
    let d = cdot(&left, &right);
    if d.norm() == 0.0 {
        return Err(Error::IllConditioned { pairs: alloc::vec![] });
    }
    let s = d.sqrt();
    for z in right.iter_mut() {
        *z /= s;
    }
    if self_dual {
        fix_phase_gauge(&mut right);
        left = right.clone();
    } else {
        for z in left.iter_mut() {
            *z /= s;
        }
        if fix_phase_gauge(&mut right) < 0.0 {
            for z in left.iter_mut() {
                *z = -*z;
            }
        }
    }
    let residual = pair.residual / nr * norm2(&right);
    Ok(EigenPair { value: pair.value, right, left, residual })
}

/// c-normalizes a whole spectrum, refusing pairs whose eigenvalues are
/// within `degeneracy_gap` of each other (those belong to the Jordan
/// solver).
pub fn c_normalize(pairs: &[EigenPair], degeneracy_gap: f64) -> Result<Vec<EigenPair>> {
    let mut bad = Vec::new();
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            if (pairs[i].value - pairs[j].value).norm() <= degeneracy_gap {
                bad.push((i, j));
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::IllConditioned { pairs: bad });
    }
    pairs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            c_normalize_pair(p).map_err(|e| match e {
                Error::IllConditioned { .. } => Error::IllConditioned { pairs: alloc::vec![(k, k)] },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, eig, hdot, Matrix};
    use alloc::vec;

    fn two_level(e1: C64, e2: C64, w: C64) -> Matrix {
        Matrix::from_rows(&[vec![e1, w], vec![w, e2]]).unwrap().certify_symmetric().unwrap()
    }

    #[test]
    fn hermitian_limit_is_euclidean() {
        let m = two_level(c(1.0, 0.0), c(2.0, 0.0), c(0.3, 0.0));
        let n = c_normalize(&eig(&m).unwrap(), 1e-8).unwrap();
        for p in &n {
            assert!((hdot(&p.right, &p.right).re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn biorthogonal_near_ep_while_norm_grows() {
        // EP at omega = delta for eps = +-i delta
        let delta = 0.5;
        let m = two_level(c(0.0, delta), c(0.0, -delta), c(delta + 1e-3, 0.0));
        let n = c_normalize(&eig(&m).unwrap(), 1e-8 * m.frobenius_norm()).unwrap();
        for k in 0..2 {
            for l in 0..2 {
                let v = cdot(&n[k].left, &n[l].right);
                let want = if k == l { 1.0 } else { 0.0 };
                assert!((v - c(want, 0.0)).norm() < 1e-10, "({k},{l}) {v}");
            }
            assert!(hdot(&n[k].right, &n[k].right).re > 10.0);
        }
    }

    #[test]
    fn permutation_equivariant() {
        let m = two_level(c(0.2, -0.1), c(1.0, -0.4), c(0.3, 0.1));
        let p = eig(&m).unwrap();
        let a = c_normalize(&p, 1e-8).unwrap();
        let b = c_normalize(&[p[1].clone(), p[0].clone()], 1e-8).unwrap();
        assert_eq!(a[0], b[1]);
        assert_eq!(a[1], b[0]);
    }

    #[test]
    fn refuses_near_degenerate_pairs() {
        let m = Matrix::diag(&[c(1.0, 0.0), c(1.0, 1e-12), c(3.0, 0.0)]).unwrap();
        match c_normalize(&eig(&m).unwrap(), 1e-8) {
            Err(Error::IllConditioned { pairs }) => assert_eq!(pairs, vec![(0, 1)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn general_pairs_balance_norms() {
        let m = Matrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.5)], vec![c(-0.3, 0.0), c(0.0, -1.0)]])
            .unwrap();
        let n = c_normalize(&eig(&m).unwrap(), 1e-8).unwrap();
        for p in &n {
            assert!((p.c_product() - c(1.0, 0.0)).norm() < 1e-12);
            assert!((norm2(&p.left) - norm2(&p.right)).abs() < 1e-12);
        }
    }
}
