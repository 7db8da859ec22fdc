//! Gaussian bipartite entanglement measures and physicality checks.
//!
//! Works on covariance matrices in the vacuum-variance-1/2 normalization:
//! a two-mode Gaussian state with 4×4 covariance block
//! `V = [[Θ, β], [βᵀ, η]]` is entangled iff the smallest symplectic
//! eigenvalue `Ξ` of its partial transpose is below 1/2, equivalently iff
//! the Simon determinant inequality `4·det V < Σ − 1/4` holds, where
//! `Σ = det Θ + det η − 2 det β`. The logarithmic negativity is
//! `E_N = max(0, −ln 2Ξ)`.
//!
//! `Ξ² = (Σ − √(Σ² − 4 det V))/2` is evaluated in the algebraically
//! equivalent form `2·det V / (Σ + √(Σ² − 4 det V))`: the textbook
//! difference cancels catastrophically for strongly entangled states
//! (already at squeezing r ≈ 3 it costs eight digits).

use crate::linalg::{eigenvalues, Mat};
use crate::lyapunov::CovarianceMatrix;
use crate::{math, CoreError, Result};
use alloc::vec::Vec;

/// Everything measured about one mode pair.
#[derive(Clone, Debug)]
pub struct EntanglementReport {
    /// Mode indices (0 = mirror, then cavities in chain order).
    pub pair: (usize, usize),
    /// Σ = det Θ + det η − 2 det β.
    pub sigma: f64,
    /// Smallest symplectic eigenvalue of the partial transpose.
    pub xi: f64,
    /// Logarithmic negativity, ≥ 0.
    pub e_n: f64,
    /// Simon criterion verdict: 4 det V < Σ − 1/4.
    pub simon_entangled: bool,
    /// (det Θ, det η, det β).
    pub block_dets: (f64, f64, f64),
}

/// Physicality verdict for a full covariance matrix.
#[derive(Clone, Copy, Debug)]
pub struct PhysicalityReport {
    pub physical: bool,
    /// Smallest symplectic eigenvalue of the full matrix.
    pub min_symplectic: f64,
}

/// Uncertainty-principle slack tolerated by [`physicality_check`].
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Threshold guard: `Ξ = 1/2` maps to `E_N = 0` exactly, and raw
/// negativities below this are snapped to zero so boundary states (an
/// undriven cavity, say) do not flicker at the last ulp.
pub const E_N_SNAP: f64 = 1e-12;

/// Extract the 4×4 covariance block of modes `(i, j)` from a 2M×2M matrix.
///
/// Rows/columns are ordered `(q_i, p_i, q_j, p_j)`.
pub fn extract_pair(v: &Mat, i: usize, j: usize) -> Result<Mat> {
    let modes = v.nrows() / 2;
    for idx in [i, j] {
        if idx >= modes {
            return Err(CoreError::IndexOutOfRange { index: idx, modes });
        }
    }
    if i == j {
        return Err(CoreError::IndexOutOfRange { index: j, modes });
    }
    Ok(v.submatrix(&[2 * i, 2 * i + 1, 2 * j, 2 * j + 1]))
}

fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a * d - b * c
}

/// Entanglement measures of one 4×4 two-mode covariance block.
///
/// A discriminant `Σ² − 4 det V` below `−ε` with `ε = 1e−12·Σ²` means the
/// block has a complex symplectic spectrum and is rejected as unphysical;
/// values in `[−ε, 0)` are clamped to zero so sweep curves stay smooth
/// where `E_N` touches zero.
pub fn log_negativity(v4: &Mat) -> Result<EntanglementReport> {
    assert_eq!(v4.nrows(), 4, "two-mode block expected");
    let det_theta = det2(v4[(0, 0)], v4[(0, 1)], v4[(1, 0)], v4[(1, 1)]);
    let det_eta = det2(v4[(2, 2)], v4[(2, 3)], v4[(3, 2)], v4[(3, 3)]);
    let det_beta = det2(v4[(0, 2)], v4[(0, 3)], v4[(1, 2)], v4[(1, 3)]);
    let sigma = det_theta + det_eta - 2.0 * det_beta;
    let det_v = v4.det();

    let eps_num = 1e-12 * sigma * sigma;
    let mut disc = sigma * sigma - 4.0 * det_v;
    if disc < -eps_num {
        return Err(CoreError::UnphysicalCovariance { discriminant: disc });
    }
    if disc < 0.0 {
        disc = 0.0;
    }
    let xi2 = 2.0 * det_v / (sigma + math::sqrt(disc));
    if !xi2.is_finite() || xi2 <= 0.0 {
        return Err(CoreError::UnphysicalCovariance { discriminant: xi2 });
    }
    let xi = math::sqrt(xi2);
    let raw = -math::ln(2.0 * xi);
    let e_n = if raw > E_N_SNAP { raw } else { 0.0 };
    // The determinant inequality gets the matching ulp-scale guard so both
    // verdicts agree at the separability boundary.
    let guard = E_N_SNAP * (math::abs(sigma) + 4.0 * math::abs(det_v) + 1.0);
    let simon_entangled = 4.0 * det_v < sigma - 0.25 - guard;
    Ok(EntanglementReport {
        pair: (0, 1),
        sigma,
        xi,
        e_n,
        simon_entangled,
        block_dets: (det_theta, det_eta, det_beta),
    })
}

/// Measure the pair `(i, j)` of a full covariance matrix.
pub fn measure_pair(cov: &CovarianceMatrix, i: usize, j: usize) -> Result<EntanglementReport> {
    let block = extract_pair(&cov.v, i, j)?;
    let mut report = log_negativity(&block)?;
    report.pair = (i, j);
    Ok(report)
}

/// Symplectic eigenvalues of a full 2M×2M covariance matrix, ascending.
///
/// These are the moduli of the eigenvalues of `iΩV` (each appears twice in
/// the spectrum of `ΩV`; one copy per mode is returned), with `Ω` the
/// block-diagonal symplectic form in `(q, p)` ordering.
pub fn symplectic_eigenvalues(v: &Mat) -> Result<Vec<f64>> {
    let dim = v.nrows();
    assert!(dim.is_multiple_of(2), "covariance dimension must be even");
    let modes = dim / 2;
    // ΩV: rows (2k, 2k+1) of Ω pick (row 2k+1, −row 2k) of V.
    let omega_v = Mat::from_fn(dim, dim, |i, j| {
        if i % 2 == 0 {
            v[(i + 1, j)]
        } else {
            -v[(i - 1, j)]
        }
    });
    let eigs = eigenvalues(&omega_v)?;
    let mut mods: Vec<f64> = eigs.iter().map(|z| math::hypot(z.re, z.im)).collect();
    mods.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    // Pairs (±iν) sit adjacent after sorting; keep one of each.
    Ok((0..modes).map(|k| mods[2 * k]).collect())
}

/// Check that a covariance matrix describes a valid Gaussian state:
/// every symplectic eigenvalue at least `1/2 − `[`PHYSICALITY_TOL`].
pub fn physicality_check(v: &Mat) -> Result<PhysicalityReport> {
    let nus = symplectic_eigenvalues(v)?;
    let min_symplectic = nus.first().copied().unwrap_or(f64::INFINITY);
    Ok(PhysicalityReport {
        physical: min_symplectic >= 0.5 - PHYSICALITY_TOL,
        min_symplectic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lyapunov::CovarianceSource;

    /// Two-mode squeezed vacuum block: the analytic oracle family.
    pub(crate) fn tmsv(r: f64) -> Mat {
        let c = (2.0 * r).cosh() / 2.0;
        let s = (2.0 * r).sinh() / 2.0;
        Mat::from_rows(
            4,
            4,
            &[
                c, 0.0, s, 0.0,
                0.0, c, 0.0, -s,
                s, 0.0, c, 0.0,
                0.0, -s, 0.0, c,
            ],
        )
    }

    #[test]
    fn vacuum_has_no_entanglement() {
        let v = Mat::identity(4).scale(0.5);
        let r = log_negativity(&v).unwrap();
        assert_eq!(r.e_n, 0.0, "vacuum E_N must be exactly zero");
        assert!((r.sigma - 0.5).abs() < 1e-15);
        assert!((r.xi - 0.5).abs() < 1e-15);
        assert!(!r.simon_entangled);
    }

    #[test]
    fn tmsv_closed_form() {
        // Ξ = e^{−2r}/2, E_N = 2r.
        for k in 0..=30 {
            let r = 0.1 * k as f64;
            let rep = log_negativity(&tmsv(r)).unwrap();
            assert!(
                (rep.e_n - 2.0 * r).abs() < 1e-10,
                "E_N({r}) = {} (err {:e})",
                rep.e_n,
                (rep.e_n - 2.0 * r).abs()
            );
            let want_xi = (-2.0 * r).exp() / 2.0;
            assert!((rep.xi - want_xi).abs() < 1e-10 * want_xi.max(1e-3));
            assert_eq!(rep.simon_entangled, r > 0.0);
        }
    }

    #[test]
    fn tmsv_purity() {
        // det V = 1/16 for the pure family; f64 entry rounding costs
        // ~cosh²(2r)·ε, so the strict bound applies through r = 2.
        for k in 0..=20 {
            let r = 0.1 * k as f64;
            let d = tmsv(r).det();
            assert!((d - 1.0 / 16.0).abs() < 1e-12, "det V at r={r}: {d}");
        }
        for k in 21..=30 {
            let r = 0.1 * k as f64;
            let d = tmsv(r).det();
            let floor = 4.0 * f64::EPSILON * (2.0 * r).cosh().powi(2) / 16.0;
            assert!((d - 1.0 / 16.0).abs() < 1e-12_f64.max(8.0 * floor));
        }
    }

    #[test]
    fn extraction_identity_and_block_zeroing() {
        let v = tmsv(0.7);
        let same = extract_pair(&v, 0, 1).unwrap();
        assert_eq!(same, v, "extracting (0,1) from a 4×4 is the identity");

        // Block-diagonal (uncoupled) covariance: β block extracts as zero
        // and a product state carries no entanglement.
        let mut big = Mat::identity(6).scale(0.5);
        big[(0, 0)] = 0.6;
        big[(1, 1)] = 0.6;
        big[(0, 1)] = 0.1;
        big[(1, 0)] = 0.1;
        big[(4, 4)] = 0.7;
        big[(5, 5)] = 0.7;
        let block = extract_pair(&big, 0, 2).unwrap();
        assert_eq!(block[(0, 2)], 0.0);
        assert_eq!(block[(1, 3)], 0.0);
        let rep = log_negativity(&block).unwrap();
        assert_eq!(rep.block_dets.2, 0.0);
        assert_eq!(rep.e_n, 0.0);
        assert!(!rep.simon_entangled);
    }

    #[test]
    fn extraction_bounds() {
        let v = Mat::identity(6).scale(0.5);
        assert!(matches!(
            extract_pair(&v, 0, 3),
            Err(CoreError::IndexOutOfRange { index: 3, modes: 3 })
        ));
        assert!(extract_pair(&v, 1, 1).is_err());
    }

    #[test]
    fn unphysical_discriminant_is_rejected() {
        // Indefinite symmetric input with Σ² < 4 det V: complex symplectic
        // spectrum, disc = (a−b)²[(a+b)² − 4c²] = −0.3328 here.
        let (a, b, c) = (1.0, 0.2, 0.7);
        let v = Mat::from_rows(
            4,
            4,
            &[
                a, 0.0, c, 0.0,
                0.0, a, 0.0, c,
                c, 0.0, b, 0.0,
                0.0, c, 0.0, b,
            ],
        );
        assert!(matches!(
            log_negativity(&v),
            Err(CoreError::UnphysicalCovariance { .. })
        ));

        // Negative det V is also rejected (negative Ξ²).
        let v = Mat::from_diag(&[1.0, -1.0, 1.0, 1.0]);
        assert!(matches!(
            log_negativity(&v),
            Err(CoreError::UnphysicalCovariance { .. })
        ));
    }

    #[test]
    fn simon_and_negativity_agree() {
        use crate::rng::SplitMix64;
        let mut rng = SplitMix64::new(0x51A0);
        let mut checked = 0;
        for _ in 0..2000 {
            // Random physical-ish covariance: V = L·Lᵀ/2 + vacuum floor.
            let l = Mat::from_fn(4, 4, |_, _| 0.4 * rng.next_standard_normal());
            let mut v = l.matmul(&l.transpose()).scale(0.5);
            for i in 0..4 {
                v[(i, i)] += 0.5;
            }
            let Ok(rep) = log_negativity(&v) else { continue };
            // Three-way equivalence with a guard band at the threshold.
            if (rep.xi - 0.5).abs() < 1e-10 {
                continue;
            }
            assert_eq!(rep.e_n > 0.0, rep.xi < 0.5);
            assert_eq!(rep.e_n > 0.0, rep.simon_entangled);
            checked += 1;
        }
        assert!(checked > 1500, "guard band swallowed too many cases");
    }

    #[test]
    fn symplectic_spectrum_of_vacuum_and_thermal() {
        let v = Mat::identity(6).scale(0.5);
        let nus = symplectic_eigenvalues(&v).unwrap();
        assert_eq!(nus.len(), 3);
        for nu in &nus {
            assert!((nu - 0.5).abs() < 1e-12);
        }
        let rep = physicality_check(&v).unwrap();
        assert!(rep.physical);
        assert!((rep.min_symplectic - 0.5).abs() < 1e-12);

        // Below-vacuum isotropic matrix is unphysical.
        let rep = physicality_check(&Mat::identity(4).scale(0.25)).unwrap();
        assert!(!rep.physical);

        // Thermal mode: ν = n̄ + 1/2.
        let v = Mat::from_diag(&[2.5, 2.5, 0.5, 0.5]);
        let nus = symplectic_eigenvalues(&v).unwrap();
        assert!((nus[0] - 0.5).abs() < 1e-12);
        assert!((nus[1] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn measure_pair_sets_indices() {
        let cov = CovarianceMatrix {
            v: tmsv(0.3),
            source: CovarianceSource::Lyapunov,
            residual: 0.0,
        };
        let rep = measure_pair(&cov, 0, 1).unwrap();
        assert_eq!(rep.pair, (0, 1));
        assert!((rep.e_n - 0.6).abs() < 1e-10);
    }
}
