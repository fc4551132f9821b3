mod common;

use common::*;
use eptrap_core::linalg::{c, c_normalize, cdot, eig, hessenberg, jordan_chain, norm2, Matrix};
use eptrap_core::Error;
use proptest::prelude::*;

fn trace_and_residuals(m: &Matrix) {
    let pairs = eig(m).unwrap();
    let f = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let sum: eptrap_core::C64 = pairs.iter().map(|p| p.value).sum();
    assert!((sum - m.trace()).norm() <= 1e-10 * f, "trace {}", (sum - m.trace()).norm() / f);
    for p in &pairs {
        assert!(p.residual <= 1e-10 * f, "residual {}", p.residual / f);
        let lm = m.vec_mul(&p.left);
        let d: f64 = lm.iter().zip(&p.left).map(|(a, b)| (a - p.value * b).norm()).fold(0.0, f64::max);
        assert!(d <= 1e-8 * f * norm2(&p.left), "left residual {d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_rule_and_residuals(seed in any::<u64>(), n in 1usize..=64) {
        let mut r = rng(seed);
        trace_and_residuals(&random_matrix(&mut r, n));
    }

    #[test]
    fn closed_form_two_by_two(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, 2);
        let p = eig(&m).unwrap();
        prop_assert!(pair_error([p[0].value, p[1].value], two_by_two(&m)) < 1e-12);
    }

    #[test]
    fn symmetric_path_agrees_with_general(seed in any::<u64>(), n in 2usize..=24) {
        let mut r = rng(seed);
        let m = random_symmetric(&mut r, n);
        let mut fast: Vec<_> = eig(&m).unwrap().into_iter().map(|p| p.value).collect();
        let mut slow: Vec<_> = eig(&m.clone().without_symmetric_flag()).unwrap().into_iter().map(|p| p.value).collect();
        let key = |a: &eptrap_core::C64, b: &eptrap_core::C64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
        fast.sort_by(key);
        slow.sort_by(key);
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!((a - b).norm() < 1e-10 * m.frobenius_norm());
        }
        // self-duality of the symmetric path
        for p in eig(&m).unwrap() {
            let d: f64 = p.left.iter().zip(&p.right).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(d < 1e-12);
        }
    }

    #[test]
    fn biorthogonal_after_normalization(seed in any::<u64>(), n in 1usize..=16) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, n);
        let pairs = c_normalize(&eig(&m).unwrap(), 1e-8 * m.frobenius_norm()).unwrap();
        for (k, a) in pairs.iter().enumerate() {
            for (l, b) in pairs.iter().enumerate() {
                let want = if k == l { 1.0 } else { 0.0 };
                prop_assert!((cdot(&a.left, &b.right) - c(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn hessenberg_reconstructs(seed in any::<u64>(), n in 1usize..=20) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, n);
        let (h, q) = hessenberg(&m).unwrap();
        let back = q.matmul(&h).unwrap().matmul(&q.conj_transpose()).unwrap();
        prop_assert!(back.sub(&m).unwrap().frobenius_norm() <= 1e-12 * m.frobenius_norm());
        for i in 0..n {
            for j in 0..i.saturating_sub(1) {
                prop_assert!(h[(i, j)].norm() == 0.0);
            }
        }
    }
}

#[test]
fn scalar_and_diagonal() {
    let m = Matrix::diag(&[c(1.0, 0.0), c(2.0, -0.5)]).unwrap();
    let p = eig(&m).unwrap();
    let mut v: Vec<_> = p.iter().map(|p| p.value).collect();
    v.sort_by(|a, b| a.re.total_cmp(&b.re));
    assert_eq!(v, vec![c(1.0, 0.0), c(2.0, -0.5)]);
    let one = Matrix::from_rows(&[vec![c(2.0, 1.0)]]).unwrap();
    let (h, q) = hessenberg(&one).unwrap();
    assert_eq!(h[(0, 0)], c(2.0, 1.0));
    assert_eq!(q[(0, 0)], c(1.0, 0.0));
}

#[test]
fn jordan_block_and_rejection() {
    let j = Matrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
    let s = jordan_chain(&j, c(0.0, 0.0)).unwrap();
    assert!((s.eigenvector[0].norm() - 1.0).abs() < 1e-12 && s.eigenvector[1].norm() < 1e-12);
    assert!(s.defect_residual < 1e-12);
    let d = Matrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
    assert!(matches!(jordan_chain(&d, c(1.5, 0.0)), Err(Error::NotAnEp(_))));
}
