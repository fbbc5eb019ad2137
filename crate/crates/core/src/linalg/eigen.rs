use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{phase_normalize, ComplexMatrix};
use crate::tolerances::TAU_EXACT;

/// Result of a Hermitian eigendecomposition: real eigenvalues sorted
/// descending with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Hermitian eigendecomposition via cyclic complex Jacobi rotations.
///
/// Eigenvalues come out sorted descending; each eigenvector's first
/// component with modulus above 1e-12 is made real and positive so repeated
/// runs produce identical output. Fails with `NonHermitian` when the input
/// deviates from Hermiticity by more than 1e-9 in any entry; smaller
/// deviations are symmetrized away before decomposing.
pub fn eigh(m: &ComplexMatrix) -> Result<Eigh> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let deviation = m.hermiticity_deviation();
    if deviation > TAU_EXACT {
        return Err(Error::NonHermitian { deviation });
    }
    let sym = m.add(&m.adjoint()).scale(0.5);
    let (mut values, mut vectors) = jacobi(&sym);

    // Sort descending; stable so degenerate eigenvalues keep sweep order.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    values = order.iter().map(|&k| values[k]).collect();
    let n = vectors.rows();
    let mut sorted = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut column: Vec<Complex64> = (0..n).map(|r| vectors[(r, old_col)]).collect();
        phase_normalize(&mut column);
        for r in 0..n {
            sorted[(r, new_col)] = column[r];
        }
    }
    vectors = sorted;

    Ok(Eigh { values, vectors })
}

const MAX_SWEEPS: usize = 100;

/// Eigenvalues only, for a small Hermitian matrix held in a flat row-major
/// buffer of length n*n. Cyclic Jacobi without eigenvector accumulation or
/// allocation; the buffer is destroyed. Output order is unspecified.
pub(crate) fn hermitian_eigenvalues_inplace(a: &mut [Complex64], n: usize, out: &mut [f64]) {
    debug_assert!(a.len() >= n * n && out.len() >= n);
    if n == 1 {
        out[0] = a[0].re;
        return;
    }
    let scale = a
        .iter()
        .take(n * n)
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let stop = scale * 1e-15;
    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let abs_g = g.norm();
                if abs_g <= scale * 1e-18 {
                    continue;
                }
                let w = g / abs_g;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * abs_g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let wc = w.conj();
                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = arp * c - arq * (wc * s);
                    a[r * n + q] = arp * s + arq * (wc * c);
                }
                for col in 0..n {
                    let apc = a[p * n + col];
                    let aqc = a[q * n + col];
                    a[p * n + col] = apc * c - aqc * (w * s);
                    a[q * n + col] = apc * s + aqc * (w * c);
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
            }
        }
    }
    for (k, slot) in out.iter_mut().take(n).enumerate() {
        *slot = a[k * n + k].re;
    }
}

/// Cyclic Jacobi for a Hermitian matrix. Returns unsorted eigenvalues and
/// the accumulated unitary (eigenvectors in columns).
fn jacobi(input: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = input.rows();
    if n == 1 {
        return (vec![input[(0, 0)].re], ComplexMatrix::identity(1));
    }
    let mut a = input.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let stop = scale * 1e-15;

    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }

    let values = (0..n).map(|i| a[(i, i)].re).collect();
    (values, v)
}

/// One complex Jacobi rotation zeroing the (p, q) entry.
///
/// With g = a_pq = |g| w, the unitary acting on the (p, q) plane is
/// J = diag(1, conj(w)) * [[c, s], [-s, c]] where (c, s) diagonalize the
/// phase-stripped real 2x2 block.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let g = a[(p, q)];
    let abs_g = g.norm();
    if abs_g <= scale * 1e-18 {
        return;
    }
    let w = g / abs_g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * abs_g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    // Right multiplication by J: col_p <- c*col_p - s*conj(w)*col_q,
    //                            col_q <- s*col_p + c*conj(w)*col_q.
    let wc = w.conj();
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * c - arq * (wc * s);
        a[(r, q)] = arp * s + arq * (wc * c);
    }
    // Left multiplication by J^H: row_p <- c*row_p - s*w*row_q,
    //                             row_q <- s*row_p + c*w*row_q.
    for col in 0..n {
        let apc = a[(p, col)];
        let aqc = a[(q, col)];
        a[(p, col)] = apc * c - aqc * (w * s);
        a[(q, col)] = apc * s + aqc * (w * c);
    }
    // Pin the rotated entries to their exact values.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * c - vrq * (wc * s);
        v[(r, q)] = vrp * s + vrq * (wc * c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(e: &Eigh) -> ComplexMatrix {
        let n = e.values.len();
        let mut diag = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            diag[(i, i)] = c(e.values[i], 0.0);
        }
        e.vectors.mul(&diag).mul(&e.vectors.adjoint())
    }

    #[test]
    fn identity_spectrum() {
        let e = eigh(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(e.vectors.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn already_diagonal() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(if i == 0 { 0.75 } else { 0.25 }, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let e = eigh(&m).unwrap();
        assert!((e.values[0] - 0.75).abs() < 1e-15);
        assert!((e.values[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_spectral_pair() {
        let x = ComplexMatrix::from_fn(2, 2, |i, j| c(if i != j { 1.0 } else { 0.0 }, 0.0));
        let e = eigh(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] + 1.0).abs() < 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((e.vectors[(0, 0)] - c(s, 0.0)).norm() < 1e-12);
        assert!((e.vectors[(1, 0)] - c(s, 0.0)).norm() < 1e-12);
        assert!((e.vectors[(0, 1)] - c(s, 0.0)).norm() < 1e-12);
        assert!((e.vectors[(1, 1)] + c(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| c((i * 2 + j) as f64, 0.0));
        assert!(matches!(eigh(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn reconstructs_random_hermitian() {
        // Deterministic pseudo-random Hermitian matrices up to dim 16.
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for n in [2usize, 3, 5, 8, 16] {
            let raw = ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()));
            let h = raw.add(&raw.adjoint()).scale(0.5);
            let e = eigh(&h).unwrap();
            assert!(
                reconstruct(&e).max_abs_diff(&h) < 1e-10,
                "reconstruction failed for dim {n}"
            );
            // Orthonormal columns.
            let gram = e.vectors.adjoint().mul(&e.vectors);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
            // Descending order.
            for w in e.values.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
            // Phase convention.
            for col in 0..n {
                let first = (0..n)
                    .map(|r| e.vectors[(r, col)])
                    .find(|z| z.norm() > 1e-12)
                    .unwrap();
                assert!(first.re > 0.0 && first.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_spectrum_stays_orthonormal() {
        // Projector onto a 2-dim subspace of dim 4: eigenvalues {1,1,0,0}.
        let v1 = [c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        let v2 = [c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)];
        let m = ComplexMatrix::outer(&v1).add(&ComplexMatrix::outer(&v2));
        let e = eigh(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        assert!(e.values[2].abs() < 1e-12);
        let gram = e.vectors.adjoint().mul(&e.vectors);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
    }
}
