//! Annotated spectra: biorthogonal modes, overlaps and phase rigidity.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{
    all_finite, c_normalize_pair, cdot, eig_with, fix_phase_gauge, hdot, norm2, EigOptions, EigenPair, Matrix,
    C64,
};

#[derive(Clone, Copy, Debug)]
pub struct SpectraOptions {
    pub eig: EigOptions,
    /// Pairs closer than `degeneracy_gap * ||H||_F` are flagged, not normalized.
    pub degeneracy_gap: f64,
}

impl Default for SpectraOptions {
    fn default() -> Self {
        SpectraOptions { eig: EigOptions::default(), degeneracy_gap: 1e-8 }
    }
}

/// Eigenmodes of one matrix with their overlap diagnostics.
///
/// Modes are ordered by `Re z`. `a_k = <phi_k|phi_k>` and `r_k = 1/a_k` for
/// every mode. Modes that belong to a flagged pair keep unit Euclidean norm
/// and their `r_k` is still the scale-free rigidity, so `a_k` may be large
/// or infinite there.
#[derive(Clone, Debug)]
pub struct ModeSet {
    pub modes: Vec<EigenPair>,
    pub a_k: Vec<f64>,
    /// `b_kl[k][l] = <phi_l|phi_k>` for `k != l`, zero on the diagonal.
    pub b_kl: Vec<Vec<C64>>,
    pub r_k: Vec<f64>,
    pub ep_pairs: Vec<(usize, usize)>,
    pub normalized: Vec<bool>,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn ep_flag(&self, k: usize, l: usize) -> bool {
        let (a, b) = if k < l { (k, l) } else { (l, k) };
        self.ep_pairs.contains(&(a, b))
    }

    pub fn widths(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.width()).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.energy()).collect()
    }

    pub fn min_rigidity(&self) -> f64 {
        self.r_k.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn solve_modes(m: &Matrix) -> Result<ModeSet> {
    solve_modes_with(m, &SpectraOptions::default())
}

pub fn solve_modes_with(m: &Matrix, opts: &SpectraOptions) -> Result<ModeSet> {
    let mut pairs = eig_with(m, &opts.eig)?;
    pairs.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    let n = pairs.len();
    let gap = opts.degeneracy_gap * m.frobenius_norm();
    let mut ep_pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if (pairs[i].value - pairs[j].value).norm() <= gap {
                ep_pairs.push((i, j));
            }
        }
    }
    let mut normalized = alloc::vec![true; n];
    for &(i, j) in &ep_pairs {
        normalized[i] = false;
        normalized[j] = false;
    }
    let mut modes = Vec::with_capacity(n);
    let mut r_k = Vec::with_capacity(n);
    for (k, p) in pairs.into_iter().enumerate() {
        let q = if normalized[k] {
            match c_normalize_pair(&p) {
                Ok(q) => q,
                Err(_) => {
                    normalized[k] = false;
                    unit_gauged(p)
                }
            }
        } else {
            unit_gauged(p)
        };
        r_k.push(phase_rigidity(&q)?);
        modes.push(q);
    }
    let a_k = r_k.iter().map(|&r| 1.0 / r).collect();
    let b_kl = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| if k == l { C64::new(0.0, 0.0) } else { hdot(&modes[l].right, &modes[k].right) })
                .collect()
        })
        .collect();
    Ok(ModeSet { modes, a_k, b_kl, r_k, ep_pairs, normalized })
}

fn unit_gauged(mut p: EigenPair) -> EigenPair {
    let nr = norm2(&p.right);
    let nl = norm2(&p.left);
    for z in p.right.iter_mut() {
        *z /= nr;
    }
    for z in p.left.iter_mut() {
        *z /= nl;
    }
    if fix_phase_gauge(&mut p.right) < 0.0 {
        for z in p.left.iter_mut() {
            *z = -*z;
        }
    }
    p.residual /= nr;
    p
}

/// `|left . right| / (||left|| ||right||)`, equal to `1/A_k` for a
/// c-normalized mode and independent of the normalization otherwise.
pub fn phase_rigidity(mode: &EigenPair) -> Result<f64> {
    let nr = norm2(&mode.right);
    let nl = norm2(&mode.left);
    if !(nr > 0.0 && nl > 0.0) || !all_finite(&mode.right) || !all_finite(&mode.left) {
        return Err(Error::Contract("phase rigidity of a zero or non-finite mode".into()));
    }
    let l: Vec<C64> = mode.left.iter().map(|z| z / nl).collect();
    let r: Vec<C64> = mode.right.iter().map(|z| z / nr).collect();
    Ok(cdot(&l, &r).norm().min(1.0))
}

/// `|v . v| / <v|v>` for a single vector (complex-symmetric rigidity).
pub fn vector_rigidity(v: &[C64]) -> Result<f64> {
    let nv = norm2(v);
    if !(nv > 0.0) || !all_finite(v) {
        return Err(Error::Contract("rigidity of a zero or non-finite vector".into()));
    }
    let u: Vec<C64> = v.iter().map(|z| z / nv).collect();
    Ok(cdot(&u, &u).norm().min(1.0))
}

/// Distance from the chiral relation `phi_1 = +-i phi_2`.
///
/// Both right vectors are scaled to unit Euclidean norm (keeping their
/// phase) and the smaller of `||phi_1 - i phi_2||`, `||phi_1 + i phi_2||`
/// is returned.
pub fn chirality_defect(a: &EigenPair, b: &EigenPair) -> f64 {
    let na = norm2(&a.right);
    let nb = norm2(&b.right);
    if na == 0.0 || nb == 0.0 || a.right.len() != b.right.len() {
        return f64::NAN;
    }
    let i = C64::new(0.0, 1.0);
    let dist = |s: f64| {
        let d: Vec<C64> = a.right.iter().zip(&b.right).map(|(x, y)| x / na - i * s * y / nb).collect();
        norm2(&d)
    };
    dist(1.0).min(dist(-1.0))
}

/// Checks the ModeSet invariants; used by the self-test.
pub fn check_modeset(ms: &ModeSet, tol: f64) -> Result<()> {
    for k in 0..ms.len() {
        if ms.normalized[k] && ms.a_k[k] < 1.0 - tol {
            return Err(Error::Contract(format!("a_{k} = {} < 1", ms.a_k[k])));
        }
        if !(0.0..=1.0).contains(&ms.r_k[k]) {
            return Err(Error::Contract(format!("r_{k} = {} outside [0, 1]", ms.r_k[k])));
        }
        if ms.normalized[k] && (ms.r_k[k] * ms.a_k[k] - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!("r_{k} a_{k} != 1")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::models::{ModelSpec, Overrides, ToyChainSpec, TwoLevelSpec};
    use alloc::vec;

    fn two_level(e1: C64, e2: C64, w: C64) -> Matrix {
        ModelSpec::TwoLevel(TwoLevelSpec { eps1: e1, eps2: e2, omega: w }).build(&Overrides::new()).unwrap()
    }

    #[test]
    fn hermitian_limit() {
        let ms = solve_modes(&two_level(c(0.3, 0.0), c(-1.0, 0.0), c(0.4, 0.0))).unwrap();
        for k in 0..2 {
            assert!((ms.a_k[k] - 1.0).abs() < 1e-12);
            assert!((ms.r_k[k] - 1.0).abs() < 1e-12);
        }
        assert!(ms.b_kl[0][1].norm() < 1e-12);
    }

    #[test]
    fn rigidity_drops_near_ep() {
        let d = 0.5;
        let ms = solve_modes(&two_level(c(0.0, d), c(0.0, -d), c(d + 1e-3, 0.0))).unwrap();
        assert!(ms.min_rigidity() < 0.1);
        assert!(ms.ep_pairs.is_empty());
        check_modeset(&ms, 1e-10).unwrap();
        // b is antisymmetric for two modes
        assert!((ms.b_kl[0][1] + ms.b_kl[1][0]).norm() < 1e-10 * ms.b_kl[0][1].norm().max(1.0));
    }

    #[test]
    fn closed_toy_chain() {
        let spec = ModelSpec::ToyChain(ToyChainSpec::equally_spaced(3, 1.0, 0.0));
        let ms = solve_modes(&spec.build(&Overrides::new()).unwrap()).unwrap();
        for (k, m) in ms.modes.iter().enumerate() {
            assert!(m.width().abs() < 1e-14);
            assert!((m.right[k].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rigidity_examples() {
        let one = vector_rigidity(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
        assert!(vector_rigidity(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap() < 1e-15);
        let r = vector_rigidity(&[c(1.0, 0.0), c(0.0, 0.5)]).unwrap();
        assert!((r - 0.6).abs() < 1e-15);
        assert!(matches!(vector_rigidity(&[c(0.0, 0.0)]), Err(Error::Contract(_))));
    }

    #[test]
    fn chirality_examples() {
        let mk = |v: Vec<C64>| EigenPair { value: c(0.0, 0.0), left: v.clone(), right: v, residual: 0.0 };
        let a = mk(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let b = mk(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((chirality_defect(&a, &b) - 2.0_f64.sqrt()).abs() < 1e-15);
        let a = mk(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let b = mk(vec![c(0.0, -1.0), c(1.0, 0.0)]);
        assert!(chirality_defect(&a, &b) < 1e-15);
        let d = 0.5;
        let ms = solve_modes(&two_level(c(0.0, d), c(0.0, -d), c(d + 1e-6, 0.0))).unwrap();
        assert!(chirality_defect(&ms.modes[0], &ms.modes[1]) < 1e-2);
    }
}
