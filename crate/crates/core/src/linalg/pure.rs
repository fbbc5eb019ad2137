use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::density::{permutation_index_map, DensityMatrix};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::phase_normalize;
use crate::linalg::space::HilbertSpace;
use crate::tolerances::{PURIFY_RANK_CUTOFF, TAU_EXACT};

/// Normalized state vector on a registered multi-subsystem space.
///
/// The global phase is fixed so the first amplitude with modulus above 1e-12
/// is real and positive.
#[derive(Clone, Debug)]
pub struct PureState {
    space: HilbertSpace,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validates the 2-norm to 1e-9 and applies the phase convention.
    pub fn new(space: HilbertSpace, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of total dimension {}",
                amps.len(),
                space.total_dim()
            )));
        }
        let norm = vec_norm(&amps);
        if (norm - 1.0).abs() > TAU_EXACT {
            return Err(Error::NonUnitNorm { norm });
        }
        let mut amps = amps;
        phase_normalize(&mut amps);
        Ok(Self { space, amps })
    }

    /// Normalize then construct; fails only on (near-)zero vectors.
    pub fn normalized(space: HilbertSpace, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of total dimension {}",
                amps.len(),
                space.total_dim()
            )));
        }
        let norm = vec_norm(&amps);
        if norm < 1e-12 {
            return Err(Error::NonUnitNorm { norm });
        }
        for z in amps.iter_mut() {
            *z /= norm;
        }
        phase_normalize(&mut amps);
        Ok(Self { space, amps })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Projector |psi><psi|. Only sensible for registered-size spaces; large
    /// purifications should be reduced with [`PureState::partial_trace`]
    /// instead.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Marginal on the kept subsystems, computed directly from the
    /// amplitudes without forming the full projector.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = self.space.checked_selection(keep)?;
        let traced: Vec<usize> = (0..self.space.subsystem_count())
            .filter(|k| !keep.contains(k))
            .collect();
        let kept_dims: Vec<usize> = keep.iter().map(|&k| self.space.dims()[k]).collect();
        if traced.is_empty() {
            return self.density().with_dims(kept_dims);
        }
        let kept_offsets = self.space.offsets(&keep);
        let traced_offsets = self.space.offsets(&traced);
        let k = kept_offsets.len();
        let mut out = ComplexMatrix::zeros(k, k);
        for (i, &oi) in kept_offsets.iter().enumerate() {
            for (j, &oj) in kept_offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for &ot in &traced_offsets {
                    acc += self.amps[oi + ot] * self.amps[oj + ot].conj();
                }
                out[(i, j)] = acc;
            }
        }
        DensityMatrix::new(HilbertSpace::new(kept_dims)?, out)
    }

    /// Reorder subsystems; `perm[k]` is the current index that moves to
    /// position `k`.
    pub fn permuted(&self, perm: &[usize]) -> Result<PureState> {
        let map = permutation_index_map(&self.space, perm)?;
        let amps: Vec<Complex64> = map.iter().map(|&old| self.amps[old]).collect();
        let dims: Vec<usize> = perm.iter().map(|&k| self.space.dims()[k]).collect();
        PureState::new(HilbertSpace::new(dims)?, amps)
    }
}

/// Canonical purification: |Psi> = sum_i sqrt(lambda_i) |v_i>|i> over the
/// eigenpairs with lambda_i > 1e-12, eigenvalues descending. The ancilla is
/// appended as the least significant subsystem with dimension rank(rho), so
/// tracing it out returns the input.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let eig = rho.eigen();
    let d = rho.space().total_dim();
    let rank = eig
        .values
        .iter()
        .filter(|&&l| l > PURIFY_RANK_CUTOFF)
        .count()
        .max(1);
    let mut amps = vec![Complex64::new(0.0, 0.0); d * rank];
    for (i, &l) in eig.values.iter().take(rank).enumerate() {
        if l <= PURIFY_RANK_CUTOFF {
            continue;
        }
        let w = l.sqrt();
        for x in 0..d {
            amps[x * rank + i] = eig.vectors[(x, i)] * w;
        }
    }
    let mut dims = rho.space().dims().to_vec();
    dims.push(rank);
    PureState::normalized(HilbertSpace::unchecked(dims), amps)
        .expect("purification of a unit-trace state has unit norm")
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit_space(n: usize) -> HilbertSpace {
        HilbertSpace::qubits(n).unwrap()
    }

    #[test]
    fn norm_is_validated() {
        let bad = PureState::new(qubit_space(1), vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(bad, Err(Error::NonUnitNorm { .. })));
    }

    #[test]
    fn phase_convention_applied() {
        let s = 1.0 / 2.0_f64.sqrt();
        let psi = PureState::new(
            qubit_space(1),
            vec![c(0.0, -s), c(s, 0.0)], // leading amplitude has phase -i
        )
        .unwrap();
        assert!(psi.amplitudes()[0].re > 0.0);
        assert!(psi.amplitudes()[0].im.abs() < 1e-15);
    }

    #[test]
    fn purify_pure_input_gets_trivial_ancilla() {
        let psi = PureState::new(qubit_space(1), vec![c(0.6, 0.0), c(0.8, 0.0)]).unwrap();
        let rho = psi.density();
        let purified = purify(&rho);
        assert_eq!(purified.space().dims(), &[2, 1]);
        let back = purified.partial_trace(&[0]).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn purify_maximally_mixed_qubit() {
        let mat = ComplexMatrix::identity(2).scale(0.5);
        let rho = DensityMatrix::new(qubit_space(1), mat).unwrap();
        let purified = purify(&rho);
        assert_eq!(purified.space().dims(), &[2, 2]);
        // Both marginals are maximally mixed: a two-qubit maximally
        // entangled state.
        let a = purified.partial_trace(&[0]).unwrap();
        let b = purified.partial_trace(&[1]).unwrap();
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(a.matrix().max_abs_diff(&half) < 1e-10);
        assert!(b.matrix().max_abs_diff(&half) < 1e-10);
    }

    #[test]
    fn permuted_reorders_amplitudes() {
        // |01> on (A, B) becomes |10> on (B, A).
        let psi = PureState::new(
            qubit_space(2),
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let swapped = psi.permuted(&[1, 0]).unwrap();
        assert!((swapped.amplitudes()[2].re - 1.0).abs() < 1e-15);
    }
}
