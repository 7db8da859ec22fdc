//! Eigenvalues of small dense real matrices.
//!
//! Classic dense path: diagonal balancing, Householder reduction to upper
//! Hessenberg form, then Francis double-shift QR iteration (the
//! EISPACK/JAMA `hqr` scheme, eigenvalues only). Accuracy is the usual
//! backward-stable bound for this family: each eigenvalue of the computed
//! set is an exact eigenvalue of `A + E` with `‖E‖ = O(ε)·‖A‖`.
//!
//! The iteration is capped at [`MAX_ITER_PER_EIGENVALUE`] QR sweeps per
//! deflated eigenvalue; exceeding the cap is reported as an error rather
//! than returning garbage for defective inputs.

use crate::math;
use crate::{CoreError, Mat, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// QR sweeps allowed per eigenvalue before declaring non-convergence.
/// Exceptional shifts fire every tenth sweep; virtually everything
/// converges within three of them, but badly graded spectra from extreme
/// parameter draws occasionally need more.
pub const MAX_ITER_PER_EIGENVALUE: usize = 100;

const EPS: f64 = f64::EPSILON;

/// All eigenvalues of a square real matrix, sorted by `(re, im)`.
pub fn eigenvalues(a: &Mat) -> Result<Vec<Complex64>> {
    assert!(a.is_square(), "eigenvalues need a square matrix");
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    if !h.is_finite() {
        return Err(CoreError::NonFinite { what: "eigenvalue input" });
    }
    balance(&mut h);
    hessenberg(&mut h);
    let mut eigs = hqr(&mut h)?;
    eigs.sort_by(|p, q| {
        p.re.partial_cmp(&q.re)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(p.im.partial_cmp(&q.im).unwrap_or(core::cmp::Ordering::Equal))
    });
    Ok(eigs)
}

/// Parlett–Reinsch balancing: diagonal similarity scaling by powers of two,
/// so eigenvalues are preserved exactly in floating point.
fn balance(a: &mut Mat) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += math::abs(a[(j, i)]);
                    r += math::abs(a[(i, j)]);
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                let mut c2 = c;
                while c2 < g {
                    f *= RADIX;
                    c2 *= sqrdx;
                }
                g = r * RADIX;
                while c2 > g {
                    f /= RADIX;
                    c2 /= sqrdx;
                }
                if (c2 + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= ginv;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form (in place).
fn hessenberg(h: &mut Mat) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n];
    let high = n - 1;
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += math::abs(h[(i, m - 1)]);
        }
        if scale == 0.0 {
            continue;
        }
        let mut hsum = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hsum += ort[i] * ort[i];
        }
        let mut g = math::sqrt(hsum);
        if ort[m] > 0.0 {
            g = -g;
        }
        hsum -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hsum;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hsum;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
    }
    // Clear sub-subdiagonal remnants of the Householder vectors.
    for i in 2..n {
        for j in 0..(i - 1) {
            h[(i, j)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
fn hqr(h: &mut Mat) -> Result<Vec<Complex64>> {
    let nn = h.nrows();
    let mut eigs: Vec<Complex64> = Vec::with_capacity(nn);

    let mut anorm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            anorm += math::abs(h[(i, j)]);
        }
    }
    if anorm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); nn]);
    }

    let mut n: isize = nn as isize - 1;
    let mut exshift = 0.0;
    let mut iter = 0usize;

    while n >= 0 {
        let un = n as usize;
        // Look for a single small subdiagonal element.
        let mut l = un;
        while l > 0 {
            let mut s = math::abs(h[(l - 1, l - 1)]) + math::abs(h[(l, l)]);
            if s == 0.0 {
                s = anorm;
            }
            if math::abs(h[(l, l - 1)]) < EPS * s {
                h[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }

        if l == un {
            // One real root found.
            eigs.push(Complex64::new(h[(un, un)] + exshift, 0.0));
            n -= 1;
            iter = 0;
        } else if l + 1 == un {
            // A 2×2 block has decoupled: one real pair or one complex pair.
            let w = h[(un, un - 1)] * h[(un - 1, un)];
            let p = (h[(un - 1, un - 1)] - h[(un, un)]) / 2.0;
            let q = p * p + w;
            let z = math::sqrt(math::abs(q));
            let x = h[(un, un)] + exshift;
            if q >= 0.0 {
                let z = if p >= 0.0 { p + z } else { p - z };
                let e1 = x + z;
                let e2 = if z != 0.0 { x - w / z } else { e1 };
                eigs.push(Complex64::new(e1, 0.0));
                eigs.push(Complex64::new(e2, 0.0));
            } else {
                eigs.push(Complex64::new(x + p, z));
                eigs.push(Complex64::new(x + p, -z));
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet: perform one double QR sweep.
            if iter == MAX_ITER_PER_EIGENVALUE {
                return Err(CoreError::EigenNoConvergence {
                    index: un,
                    max_iter: MAX_ITER_PER_EIGENVALUE,
                });
            }
            let mut x = h[(un, un)];
            let mut y = h[(un - 1, un - 1)];
            let mut w = h[(un, un - 1)] * h[(un - 1, un)];
            if iter > 0 && iter.is_multiple_of(10) {
                // Exceptional shift.
                exshift += x;
                for i in l..=un {
                    h[(i, i)] -= x;
                }
                let s = math::abs(h[(un, un - 1)]) + math::abs(h[(un - 1, un - 2)]);
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            iter += 1;

            // Two consecutive small subdiagonals let the sweep start late;
            // (p, q, r) at the break point seed the first Householder column.
            let mut p;
            let mut q;
            let mut r;
            let mut m = un - 2;
            loop {
                let z = h[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - rr - ss;
                r = h[(m + 2, m + 1)];
                let scale = math::abs(p) + math::abs(q) + math::abs(r);
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break;
                }
                let u = math::abs(h[(m, m - 1)]) * (math::abs(q) + math::abs(r));
                let v = math::abs(p)
                    * (math::abs(h[(m - 1, m - 1)]) + math::abs(z) + math::abs(h[(m + 1, m + 1)]));
                if u < EPS * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=un {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Double QR step on rows l..=n, columns m..=n.
            for k in m..un {
                let notlast = k != un - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = math::abs(p) + math::abs(q) + math::abs(r);
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                let mut s = math::sqrt(p * p + q * q + r * r);
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[(k, k - 1)] = -s * x;
                } else if l != m {
                    h[(k, k - 1)] = -h[(k, k - 1)];
                }
                p += s;
                let xx = p / s;
                let yy = q / s;
                let zz = r / s;
                q /= p;
                r /= p;

                // Row modification.
                for j in k..=un {
                    let mut pp = h[(k, j)] + q * h[(k + 1, j)];
                    if notlast {
                        pp += r * h[(k + 2, j)];
                        h[(k + 2, j)] -= pp * zz;
                    }
                    h[(k, j)] -= pp * xx;
                    h[(k + 1, j)] -= pp * yy;
                }
                // Column modification.
                let imax = if un < k + 3 { un } else { k + 3 };
                for i in l..=imax {
                    let mut pp = xx * h[(i, k)] + yy * h[(i, k + 1)];
                    if notlast {
                        pp += zz * h[(i, k + 2)];
                        h[(i, k + 2)] -= pp * r;
                    }
                    h[(i, k)] -= pp;
                    h[(i, k + 1)] -= pp * q;
                }
            }
        }
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_spectrum(a: &Mat, expected: &mut [Complex64], tol: f64) {
        let mut got = eigenvalues(a).unwrap();
        expected.sort_by(|p, q| {
            p.re.partial_cmp(&q.re)
                .unwrap()
                .then(p.im.partial_cmp(&q.im).unwrap())
        });
        got.sort_by(|p, q| {
            p.re.partial_cmp(&q.re)
                .unwrap()
                .then(p.im.partial_cmp(&q.im).unwrap())
        });
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(expected.iter()) {
            assert!(
                (g - e).norm() < tol,
                "eigenvalue mismatch: got {g}, expected {e}"
            );
        }
    }

    #[test]
    fn diagonal_matrix() {
        let a = Mat::from_diag(&[-1.0, -2.0, -3.0, -4.0]);
        let mut exp: Vec<Complex64> =
            [-1.0, -2.0, -3.0, -4.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert_spectrum(&a, &mut exp, 1e-14);
    }

    #[test]
    fn rotation_block_is_purely_imaginary() {
        let w = 3.5;
        let a = Mat::from_rows(2, 2, &[0.0, w, -w, 0.0]);
        let eigs = eigenvalues(&a).unwrap();
        for z in &eigs {
            assert_eq!(z.re, 0.0);
            assert!((z.im.abs() - w).abs() < 1e-14);
        }
    }

    #[test]
    fn companion_matrix_of_known_quartic() {
        // (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24
        let a = Mat::from_rows(
            4,
            4,
            &[
                10.0, -35.0, 50.0, -24.0,
                1.0, 0.0, 0.0, 0.0,
                0.0, 1.0, 0.0, 0.0,
                0.0, 0.0, 1.0, 0.0,
            ],
        );
        let mut exp: Vec<Complex64> =
            [1.0, 2.0, 3.0, 4.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert_spectrum(&a, &mut exp, 1e-10);
    }

    #[test]
    fn complex_pair_with_known_values() {
        // Block diag of [[−1, 2],[−2, −1]] (eigs −1±2i) and [[5]]
        let a = Mat::from_rows(3, 3, &[-1.0, 2.0, 0.0, -2.0, -1.0, 0.0, 0.0, 0.0, 5.0]);
        let mut exp = vec![
            Complex64::new(-1.0, 2.0),
            Complex64::new(-1.0, -2.0),
            Complex64::new(5.0, 0.0),
        ];
        assert_spectrum(&a, &mut exp, 1e-12);
    }

    #[test]
    fn defective_jordan_block_converges() {
        // Jordan block with eigenvalue 2 (defective); QR still converges on it.
        let mut a = Mat::zeros(4, 4);
        for i in 0..4 {
            a[(i, i)] = 2.0;
            if i + 1 < 4 {
                a[(i, i + 1)] = 1.0;
            }
        }
        let eigs = eigenvalues(&a).unwrap();
        for z in eigs {
            assert!((z - Complex64::new(2.0, 0.0)).norm() < 1e-3);
        }
    }

    #[test]
    fn badly_scaled_matrix_benefits_from_balancing() {
        // Similarity-scaled version of a simple matrix: eigenvalues unchanged.
        let d = [1e8, 1.0, 1e-8];
        let base = Mat::from_rows(3, 3, &[-2.0, 1.0, 0.5, 1.0, -3.0, 1.0, 0.5, 1.0, -5.0]);
        let scaled = Mat::from_fn(3, 3, |i, j| base[(i, j)] * d[i] / d[j]);
        let mut exp = eigenvalues(&base).unwrap();
        assert_spectrum(&scaled, &mut exp, 1e-8);
    }

    #[test]
    fn determinant_residual_bound_on_random_matrices() {
        use crate::rng::SplitMix64;
        let mut rng = SplitMix64::new(0xE16E);
        for trial in 0..200 {
            let n = 2 + (trial % 7);
            let a = Mat::from_fn(n, n, |_, _| rng.next_standard_normal());
            let eigs = eigenvalues(&a).unwrap();
            let scale = a.frobenius().max(1.0);
            let bound = 1e-8 * crate::math::powi(scale, n as i32);
            for z in eigs {
                let res = a.char_residual(z);
                assert!(
                    res < bound,
                    "det residual {res:e} exceeds {bound:e} for n={n} trial={trial}"
                );
            }
        }
    }

    #[test]
    fn large_dimension_within_contract() {
        use crate::rng::SplitMix64;
        let mut rng = SplitMix64::new(7);
        let n = 24;
        let a = Mat::from_fn(n, n, |_, _| rng.next_standard_normal());
        let eigs = eigenvalues(&a).unwrap();
        assert_eq!(eigs.len(), n);
        // Spectrum of a real matrix is closed under conjugation.
        let sum_im: f64 = eigs.iter().map(|z| z.im).sum();
        assert!(sum_im.abs() < 1e-9 * a.frobenius());
    }
}
