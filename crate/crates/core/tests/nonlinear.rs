use eptrap_core::linalg::{c, eig, hdot, norm2, Matrix, C64};
use eptrap_core::models::TwoLevelSpec;
use eptrap_core::nonlinear::{solve_nonlinear, source_term, Bracket, NonlinearOptions};
use eptrap_core::{solve_modes, ModelSpec, Overrides};

fn herm3() -> Matrix {
    Matrix::from_rows(&[
        vec![c(-1.0, 0.0), c(0.2, 0.0), c(0.0, 0.0)],
        vec![c(0.2, 0.0), c(0.0, 0.0), c(0.1, 0.0)],
        vec![c(0.0, 0.0), c(0.1, 0.0), c(1.2, 0.0)],
    ])
    .unwrap()
    .certify_symmetric()
    .unwrap()
}

fn distance_up_to_phase(a: &[C64], b: &[C64]) -> f64 {
    let ov = hdot(b, a);
    let g = if ov.norm() > 0.0 { ov / ov.norm() } else { c(1.0, 0.0) };
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y * g).collect();
    norm2(&d) / norm2(a)
}

// eigenvector of H0 - s <phi0|W|phi0> diag|phi0|^2 closest to phi0
fn first_order_state(h0: &Matrix, w: &Matrix, phi0: &[C64]) -> Vec<C64> {
    let s = hdot(phi0, &w.mul_vec(phi0));
    let mut m = h0.clone().without_symmetric_flag();
    for (i, p) in phi0.iter().enumerate() {
        m[(i, i)] -= s * p.norm_sqr();
    }
    let pairs = eig(&m).unwrap();
    let best = pairs.iter().max_by(|a, b| hdot(phi0, &a.right).norm().total_cmp(&hdot(phi0, &b.right).norm())).unwrap();
    best.right.clone()
}

#[test]
fn continuity_with_linear_theory() {
    let h0 = herm3();
    let ms = solve_modes(&h0).unwrap();
    let w0 = Matrix::from_fn(3, |i, j| c(0.3 + 0.1 * (i * j) as f64, 0.0)).unwrap();
    let mut prev: Option<f64> = None;
    for k in 0..4 {
        let s = 1e-2 / 2f64.powi(k);
        let w = w0.scaled(c(s, 0.0));
        let r = solve_nonlinear(&h0, &w, 1, &NonlinearOptions::default()).unwrap();
        assert!(r.converged);
        let d = distance_up_to_phase(&r.state, &first_order_state(&h0, &w, &ms.modes[1].right));
        assert!(d < 10.0 * s * s, "s {s}: {d}");
        if let Some(p) = prev {
            // halving s divides the distance by about four
            assert!(d < 0.3 * p, "{d} vs {p}");
        }
        prev = Some(d);
    }
}

#[test]
fn source_dominates_projection_near_ep() {
    let delta = 0.5;
    let w = Matrix::from_fn(2, |i, j| c(if i == j { 0.2 } else { 0.05 }, 0.0)).unwrap();
    let mut last = 0.0;
    for k in 1..=5 {
        let d = 10f64.powi(-k);
        let h = ModelSpec::TwoLevel(TwoLevelSpec { eps1: c(0.0, delta), eps2: c(0.0, -delta), omega: c(delta + d, 0.0) })
            .build(&Overrides::new())
            .unwrap();
        let ms = solve_modes(&h).unwrap();
        let phi = &ms.modes[0].right;
        let src = norm2(&source_term(phi, &w, &ms, Bracket::Hermitian).unwrap());
        // the same expansion with A_k = 1 and B = 0
        let wphi = w.mul_vec(phi);
        let mut proj = vec![c(0.0, 0.0); 2];
        for m in &ms.modes {
            let a = hdot(&m.right, &wphi);
            for (p, x) in proj.iter_mut().zip(&m.right) {
                *p += a * x;
            }
        }
        let ratio = src / norm2(&proj);
        assert!(ratio > last, "distance {d}: ratio {ratio} not growing");
        last = ratio;
    }
    assert!(last > 100.0, "{last}");
}
