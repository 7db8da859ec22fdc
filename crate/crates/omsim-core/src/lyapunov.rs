//! Steady-state covariance from the Lyapunov equation, with two
//! independent oracles.
//!
//! The production path solves `AV + VAᵀ = −D` by vectorization: with
//! column stacking, `(I⊗A + A⊗I)·vec(V) = −vec(D)` is a dense linear
//! system of at most a few hundred unknowns, solved by partial-pivot LU.
//! This trades the elegance of Schur-based methods for bit-reproducible
//! simplicity at the problem sizes that occur here.
//!
//! Validation paths:
//!
//! * [`integral_oracle`] integrates `V̇ = AV + VAᵀ + D` from `V(0) = 0` to
//!   stationarity with an adaptive step-doubling RK4 — the time-domain form
//!   of the quadrature `V = ∫₀^∞ e^{Aτ} D e^{Aᵀτ} dτ`.
//! * [`stochastic_oracle`] runs an Euler–Maruyama ensemble of the linear
//!   Langevin equation and time-averages second moments.
//!
//! All three must agree on stable models; the validation suite checks that
//! triangle.

use crate::linalg::Mat;
use crate::model::LinearModel;
use crate::rng::{Xoshiro256PlusPlus, Ziggurat};
use crate::stability::spectral_stable;
use crate::{math, CoreError, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Which path produced a covariance matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovarianceSource {
    Lyapunov,
    IntegralOracle,
    StochasticOracle,
}

/// Steady-state symmetrized covariance matrix of the quadrature vector.
#[derive(Clone, Debug)]
pub struct CovarianceMatrix {
    /// Symmetric 2M×2M matrix, dimensionless (vacuum variance 1/2).
    pub v: Mat,
    pub source: CovarianceSource,
    /// Quality figure of the producing path: relative Lyapunov residual,
    /// final relative rate for the integrator, or the largest standard
    /// error relative to `max|V|` for the Monte Carlo path.
    pub residual: f64,
}

/// Relative residual bound every Lyapunov solution must satisfy.
pub const RESIDUAL_BOUND: f64 = 1e-10;

fn lyapunov_residual(a: &Mat, v: &Mat, d_diag: &[f64]) -> f64 {
    let av = a.matmul(v);
    let mut r = av.add(&av.transpose());
    for i in 0..d_diag.len() {
        r[(i, i)] += d_diag[i];
    }
    let denom = Mat::from_diag(d_diag)
        .frobenius()
        .max(a.frobenius() * v.frobenius());
    if denom == 0.0 {
        r.frobenius()
    } else {
        r.frobenius() / denom
    }
}

/// Solve `AV + VAᵀ = −D` for a stable model.
///
/// Fails rather than returning a pseudo-solution: an unstable or marginal
/// model is an error, as is a residual above [`RESIDUAL_BOUND`].
pub fn solve_lyapunov(model: &LinearModel) -> Result<CovarianceMatrix> {
    let spectral = spectral_stable(&model.a)?;
    if !spectral.stable {
        return Err(CoreError::UnstableModel { max_real_eig: spectral.max_real_eig });
    }
    let n = model.dim();
    // Work on A/s, D/s: same solution V, better-scaled pivots.
    let s = model.a.max_abs();
    if s == 0.0 {
        return Err(CoreError::UnstableModel { max_real_eig: 0.0 });
    }
    let a = model.a.scale(1.0 / s);
    let dd: Vec<f64> = model.d.iter().map(|x| x / s).collect();

    let nn = n * n;
    let mut k = Mat::zeros(nn, nn);
    // Row (i,j) of the system is equation d/dt V[i,j] = 0; unknown x[(k,l)]
    // is V[k,l] with column-stacked index l·n + k.
    for i in 0..n {
        for j in 0..n {
            let row = j * n + i;
            for l in 0..n {
                // (AV)[i,j] = Σ_l A[i,l] V[l,j]
                k[(row, j * n + l)] += a[(i, l)];
                // (VAᵀ)[i,j] = Σ_l V[i,l] A[j,l]
                k[(row, l * n + i)] += a[(j, l)];
            }
        }
    }
    let mut rhs = vec![0.0; nn];
    for i in 0..n {
        rhs[i * n + i] = -dd[i];
    }
    let x = k.solve(&rhs).map_err(|_| CoreError::SingularSystem {
        context: "vectorized Lyapunov system (marginal spectrum)",
    })?;
    let mut v = Mat::from_fn(n, n, |i, j| x[j * n + i]);
    v.symmetrize();
    if !v.is_finite() {
        return Err(CoreError::NonFinite { what: "Lyapunov solution" });
    }
    let residual = lyapunov_residual(&model.a, &v, &model.d);
    if residual > RESIDUAL_BOUND {
        return Err(CoreError::ResidualTooLarge { residual, bound: RESIDUAL_BOUND });
    }
    Ok(CovarianceMatrix { v, source: CovarianceSource::Lyapunov, residual })
}

fn lyapunov_rhs(a: &Mat, d_diag: &[f64], v: &Mat) -> Mat {
    let av = a.matmul(v);
    let mut f = av.add(&av.transpose());
    for i in 0..d_diag.len() {
        f[(i, i)] += d_diag[i];
    }
    f
}

/// Integrate `V̇ = AV + VAᵀ + D` from `V(0) = 0` until stationary.
///
/// Classical RK4 with step doubling (local order 5 via Richardson
/// extrapolation), run in normalized time `τ = t·max|A|` so the stopping
/// rule is scale-free. Integration stops once the relative rate
/// `‖V̇‖_F/‖V‖_F` (in normalized time) is below `rtol` *and* the estimated
/// remaining transient `‖V̇‖_F/(2|λ_max|·‖V‖_F)` is below `rtol/20`; the
/// second bound is what actually controls the error of the returned `V`,
/// and the margin leaves entrywise comparisons at the `rtol` scale intact.
///
/// `horizon` is in seconds; exceeding it before convergence is an error
/// carrying the last residual.
pub fn integral_oracle(model: &LinearModel, horizon: f64, rtol: f64) -> Result<CovarianceMatrix> {
    let spectral = spectral_stable(&model.a)?;
    if !spectral.stable {
        return Err(CoreError::UnstableModel { max_real_eig: spectral.max_real_eig });
    }
    let s = model.a.max_abs();
    let a = model.a.scale(1.0 / s);
    let dd: Vec<f64> = model.d.iter().map(|x| x / s).collect();
    let slow_rate = -spectral.max_real_eig / s; // > 0, normalized units

    let n = model.dim();
    if dd.iter().all(|&x| x == 0.0) {
        // No noise: V = 0 solves the equation exactly.
        return Ok(CovarianceMatrix {
            v: Mat::zeros(n, n),
            source: CovarianceSource::IntegralOracle,
            residual: 0.0,
        });
    }
    let horizon_norm = horizon * s;
    let mut v = Mat::zeros(n, n);
    let mut t = 0.0_f64;
    let mut h = 1e-3_f64;
    let max_steps = 20_000_000usize;

    let rk4_step = |v: &Mat, h: f64| -> Mat {
        let k1 = lyapunov_rhs(&a, &dd, v);
        let k2 = lyapunov_rhs(&a, &dd, &v.add(&k1.scale(0.5 * h)));
        let k3 = lyapunov_rhs(&a, &dd, &v.add(&k2.scale(0.5 * h)));
        let k4 = lyapunov_rhs(&a, &dd, &v.add(&k3.scale(h)));
        v.add(
            &k1.add(&k2.scale(2.0))
                .add(&k3.scale(2.0))
                .add(&k4)
                .scale(h / 6.0),
        )
    };

    // Local error budget per unit time: the transient lasts O(40/slow_rate)
    // normalized time units, so this keeps the accumulated stepping error an
    // order of magnitude below the stopping bound.
    let d_norm = Mat::from_diag(&dd).frobenius();
    let rate_budget = 0.1 * rtol * slow_rate / 40.0;

    let mut residual = f64::INFINITY;
    for step in 0..max_steps {
        if step.is_multiple_of(8) {
            let rate = lyapunov_rhs(&a, &dd, &v).frobenius();
            let scale = v.frobenius();
            if scale > 0.0 {
                residual = rate / scale;
                // The remaining transient obeys ‖V − V_∞‖ ≤ ‖V̇‖/(2|λ|);
                // demand a 20× margin under rtol so entrywise comparisons
                // at the rtol·‖V‖ scale have headroom.
                let remaining = residual / (2.0 * slow_rate);
                if residual < rtol && remaining < 0.05 * rtol {
                    v.symmetrize();
                    return Ok(CovarianceMatrix {
                        v,
                        source: CovarianceSource::IntegralOracle,
                        residual,
                    });
                }
            }
        }
        if t >= horizon_norm {
            return Err(CoreError::HorizonExhausted { residual, rtol });
        }

        let h_try = h.min(horizon_norm - t);
        let full = rk4_step(&v, h_try);
        let half = rk4_step(&rk4_step(&v, 0.5 * h_try), 0.5 * h_try);
        let err = full.sub(&half).frobenius() / 15.0;
        let tol_step = rate_budget * (v.frobenius() + d_norm) * h_try;
        if err <= tol_step || h_try <= 1e-12 * horizon_norm {
            v = half.add(&half.sub(&full).scale(1.0 / 15.0));
            t += h_try;
            let ratio = if err > 0.0 { tol_step / err } else { 1024.0 };
            h = (h_try * (0.9 * fifth_root(ratio)).clamp(0.2, 4.0)).min(5.0);
        } else {
            h = h_try * (0.9 * fifth_root(tol_step / err)).max(0.1);
        }
        if !v.is_finite() {
            return Err(CoreError::NonFinite { what: "integral oracle state" });
        }
    }
    Err(CoreError::HorizonExhausted { residual, rtol })
}

/// x^{1/5} for positive x.
fn fifth_root(x: f64) -> f64 {
    math::exp(math::ln(x.max(1e-300)) / 5.0)
}

/// Monte Carlo estimate of the steady covariance with per-entry standard
/// errors.
#[derive(Clone, Debug)]
pub struct StochasticCovariance {
    pub cov: CovarianceMatrix,
    /// Per-entry standard error of the ensemble mean.
    pub stderr: Mat,
}

/// Euler–Maruyama ensemble average of the linear Langevin dynamics.
///
/// Each step draws independent Gaussian increments with covariance `D·dt`,
/// matching the symmetrized correlator convention in which the stationary
/// second moments solve `AV + VAᵀ = −D`. Second moments are averaged over
/// the final half of the horizon and across the ensemble; trajectory
/// streams depend only on `(seed, trajectory index)`, so the result is
/// independent of scheduling.
pub fn stochastic_oracle(
    model: &LinearModel,
    seed: u64,
    ensemble_size: usize,
    dt: f64,
    horizon: f64,
) -> Result<StochasticCovariance> {
    let spectral = spectral_stable(&model.a)?;
    if !spectral.stable {
        return Err(CoreError::UnstableModel { max_real_eig: spectral.max_real_eig });
    }
    let n = model.dim();
    let anorm = model.a.frobenius();
    if !dt.is_finite() || dt <= 0.0 || dt * anorm >= 0.1 {
        return Err(CoreError::InvalidParams {
            field: "dt",
            reason: alloc::format!("dt·‖A‖ = {} must be positive and < 0.1", dt * anorm),
        });
    }
    if ensemble_size == 0 {
        return Err(CoreError::InvalidParams {
            field: "ensemble_size",
            reason: alloc::string::String::from("must be positive"),
        });
    }
    let steps = (horizon / dt) as usize;
    let window_start = steps / 2;
    let window_len = steps - window_start;
    if window_len == 0 {
        return Err(CoreError::InvalidParams {
            field: "horizon",
            reason: alloc::string::String::from("horizon shorter than one step"),
        });
    }

    // Propagator of the deterministic part, flattened row-major.
    let mut prop = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            prop[i * n + j] = dt * model.a[(i, j)] + if i == j { 1.0 } else { 0.0 };
        }
    }
    let noise_scale: Vec<f64> = model.d.iter().map(|&d| math::sqrt(d * dt)).collect();

    let zig = Ziggurat::new();
    let mut sum = vec![0.0; n * n];
    let mut sumsq = vec![0.0; n * n];
    let mut mu = vec![0.0; n];
    let mut mu_next = vec![0.0; n];
    let mut acc = vec![0.0; n * n];

    for traj in 0..ensemble_size {
        let mut rng = Xoshiro256PlusPlus::for_stream(seed, traj as u64);
        mu.iter_mut().for_each(|x| *x = 0.0);
        acc.iter_mut().for_each(|x| *x = 0.0);
        for step in 0..steps {
            for i in 0..n {
                let row = &prop[i * n..(i + 1) * n];
                let mut s = 0.0;
                for (p, m) in row.iter().zip(mu.iter()) {
                    s += p * m;
                }
                mu_next[i] = s
                    + if noise_scale[i] > 0.0 {
                        noise_scale[i] * zig.sample(&mut rng)
                    } else {
                        0.0
                    };
            }
            core::mem::swap(&mut mu, &mut mu_next);
            if step >= window_start {
                for i in 0..n {
                    let mi = mu[i];
                    for j in i..n {
                        acc[i * n + j] += mi * mu[j];
                    }
                }
            }
        }
        if !mu.iter().all(|x| x.is_finite()) {
            return Err(CoreError::NonFiniteTrajectory { step: steps });
        }
        let inv = 1.0 / window_len as f64;
        for i in 0..n {
            for j in i..n {
                let m = acc[i * n + j] * inv;
                sum[i * n + j] += m;
                sumsq[i * n + j] += m * m;
            }
        }
    }

    let ne = ensemble_size as f64;
    let mut v = Mat::zeros(n, n);
    let mut stderr = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mean = sum[i * n + j] / ne;
            let var = (sumsq[i * n + j] / ne - mean * mean).max(0.0);
            let se = if ensemble_size > 1 {
                math::sqrt(var / (ne - 1.0))
            } else {
                f64::INFINITY
            };
            v[(i, j)] = mean;
            v[(j, i)] = mean;
            stderr[(i, j)] = se;
            stderr[(j, i)] = se;
        }
    }
    let maxv = v.max_abs();
    let rel = if maxv > 0.0 { stderr.max_abs() / maxv } else { 0.0 };
    Ok(StochasticCovariance {
        cov: CovarianceMatrix { v, source: CovarianceSource::StochasticOracle, residual: rel },
        stderr,
    })
}
