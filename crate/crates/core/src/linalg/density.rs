use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::eigen::{eigh, Eigh};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::pure::PureState;
use crate::linalg::space::HilbertSpace;
use crate::tolerances::{EIG_CLIP, TAU_EXACT};

/// Positive semidefinite unit-trace operator on a registered multi-subsystem
/// space; the universal state carrier.
///
/// Construction validates Hermiticity and trace to 1e-9 and positivity to a
/// floor of -1e-10; eigenvalues in `[-1e-10, 0)` are clipped to zero, anything
/// below is rejected. The clipped spectrum (sorted descending) is computed
/// once and stored.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: HilbertSpace,
    mat: ComplexMatrix,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(space: HilbertSpace, mat: ComplexMatrix) -> Result<Self> {
        let d = space.total_dim();
        if mat.rows() != d || mat.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but the space has total dimension {}",
                mat.rows(),
                mat.cols(),
                d
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TAU_EXACT || trace.im.abs() > TAU_EXACT {
            return Err(Error::NonUnitTrace { trace: trace.re });
        }
        let decomposition = eigh(&mat)?; // also enforces Hermiticity
        let spectrum = clip_spectrum(&decomposition.values)?;
        Ok(Self { space, mat, spectrum })
    }

    /// Projector onto a pure state. Infallible; the spectrum is (1, 0, ...).
    pub fn from_pure(psi: &PureState) -> Self {
        let mat = ComplexMatrix::outer(psi.amplitudes());
        let mut spectrum = vec![0.0; psi.space().total_dim()];
        spectrum[0] = 1.0;
        Self {
            space: psi.space().clone(),
            mat,
            spectrum,
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Eigenvalues sorted descending, negatives within the clip floor mapped
    /// to zero.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Number of eigenvalues above the purification cutoff.
    pub fn rank(&self) -> usize {
        self.spectrum
            .iter()
            .filter(|&&l| l > crate::tolerances::PURIFY_RANK_CUTOFF)
            .count()
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.iter().map(|l| l * l).sum()
    }

    /// Full eigendecomposition with the clipped spectrum.
    pub fn eigen(&self) -> Eigh {
        let mut e = eigh(&self.mat).expect("validated at construction");
        e.values = clip_spectrum(&e.values).expect("validated at construction");
        e
    }

    /// Reinterpret the subsystem structure without touching the matrix; the
    /// new dimensions must multiply to the same total.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let space = HilbertSpace::new(dims)?;
        if space.total_dim() != self.space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot reinterpret total dimension {} as {:?}",
                self.space.total_dim(),
                space.dims()
            )));
        }
        Ok(Self {
            space,
            mat: self.mat.clone(),
            spectrum: self.spectrum.clone(),
        })
    }

    /// Trace out every subsystem not in `keep`. The result lives on the kept
    /// subsystems in their original order; keeping everything returns the
    /// state unchanged.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = self.space.checked_selection(keep)?;
        let traced: Vec<usize> = (0..self.space.subsystem_count())
            .filter(|k| !keep.contains(k))
            .collect();
        if traced.is_empty() {
            return Ok(self.clone());
        }
        let kept_offsets = self.space.offsets(&keep);
        let traced_offsets = self.space.offsets(&traced);
        let kept_dims: Vec<usize> = keep.iter().map(|&k| self.space.dims()[k]).collect();
        let k = kept_offsets.len();

        let mut out = ComplexMatrix::zeros(k, k);
        for (i, &oi) in kept_offsets.iter().enumerate() {
            for (j, &oj) in kept_offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for &ot in &traced_offsets {
                    acc += self.mat[(oi + ot, oj + ot)];
                }
                out[(i, j)] = acc;
            }
        }
        DensityMatrix::new(HilbertSpace::new(kept_dims)?, out)
    }

    /// Reorder subsystems; `perm[k]` is the current index that moves to
    /// position `k`.
    pub fn permuted(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let map = permutation_index_map(&self.space, perm)?;
        let d = self.space.total_dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] = self.mat[(map[i], map[j])];
            }
        }
        let dims: Vec<usize> = perm.iter().map(|&k| self.space.dims()[k]).collect();
        DensityMatrix::new(HilbertSpace::new(dims)?, out)
    }
}

/// For each flat index of the permuted space, the flat index it came from.
pub(crate) fn permutation_index_map(space: &HilbertSpace, perm: &[usize]) -> Result<Vec<usize>> {
    let n = space.subsystem_count();
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation has {} entries for {} subsystems",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        space.check_subsystem(p)?;
        if seen[p] {
            return Err(Error::BadSubsystemIndex { index: p, count: n });
        }
        seen[p] = true;
    }
    let old_strides = space.strides();
    let new_dims: Vec<usize> = perm.iter().map(|&k| space.dims()[k]).collect();
    let total = space.total_dim();
    let mut map = vec![0usize; total];
    for new_flat in 0..total {
        let mut rem = new_flat;
        let mut old_flat = 0;
        for pos in (0..n).rev() {
            let digit = rem % new_dims[pos];
            rem /= new_dims[pos];
            old_flat += digit * old_strides[perm[pos]];
        }
        map[new_flat] = old_flat;
    }
    Ok(map)
}

fn clip_spectrum(values: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(values.len());
    for &l in values {
        if l < -EIG_CLIP {
            return Err(Error::NonPositive { min_eigenvalue: l });
        }
        out.push(l.max(0.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tensor;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_density() -> DensityMatrix {
        let s = 1.0 / 2.0_f64.sqrt();
        let amps = vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let psi = PureState::new(HilbertSpace::qubits(2).unwrap(), amps).unwrap();
        DensityMatrix::from_pure(&psi)
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell_density();
        let a = rho.partial_trace(&[0]).unwrap();
        let expected = ComplexMatrix::identity(2).scale(0.5);
        assert!(a.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn product_state_marginal() {
        let pa = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(if i == 0 { 0.7 } else { 0.3 }, 0.0)
            } else {
                c(0.05, 0.02 * if i < j { 1.0 } else { -1.0 })
            }
        });
        let pb = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(0.5, 0.0)
            } else {
                c(0.1, 0.0)
            }
        });
        let rho = DensityMatrix::new(HilbertSpace::qubits(2).unwrap(), tensor(&pa, &pb)).unwrap();
        let back = rho.partial_trace(&[0]).unwrap();
        assert!(back.matrix().max_abs_diff(&pa) < 1e-12);
        let other = rho.partial_trace(&[1]).unwrap();
        assert!(other.matrix().max_abs_diff(&pb) < 1e-12);
    }

    #[test]
    fn keep_everything_is_identity() {
        let rho = bell_density();
        let same = rho.partial_trace(&[0, 1]).unwrap();
        assert!(same.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn bad_subsystem_index() {
        let rho = bell_density();
        assert!(matches!(
            rho.partial_trace(&[3]),
            Err(Error::BadSubsystemIndex { .. })
        ));
        assert!(rho.partial_trace(&[]).is_err());
    }

    #[test]
    fn rejects_bad_trace_and_negativity() {
        let space = HilbertSpace::new(vec![2]).unwrap();
        let double = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(space.clone(), double),
            Err(Error::NonUnitTrace { .. })
        ));
        let mut ind = ComplexMatrix::zeros(2, 2);
        ind[(0, 0)] = c(1.5, 0.0);
        ind[(1, 1)] = c(-0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(space, ind),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn permutation_swaps_subsystems() {
        // rho_A (x) rho_B permuted to (B, A).
        let pa = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(if i == 0 { 0.9 } else { 0.1 }, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let pb = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(0.5, 0.0)
            } else {
                c(0.0, 0.1 * if i < j { 1.0 } else { -1.0 })
            }
        });
        let rho = DensityMatrix::new(HilbertSpace::qubits(2).unwrap(), tensor(&pa, &pb)).unwrap();
        let swapped = rho.permuted(&[1, 0]).unwrap();
        let expected = tensor(&pb, &pa);
        assert!(swapped.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn spectrum_is_descending_and_clipped() {
        let rho = bell_density();
        assert!((rho.spectrum()[0] - 1.0).abs() < 1e-12);
        for &l in &rho.spectrum()[1..] {
            assert!((0.0..=1e-12).contains(&l));
        }
        assert_eq!(rho.rank(), 1);
    }
}
