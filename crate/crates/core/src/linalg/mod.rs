//! Dense complex-matrix substrate with an explicit subsystem convention.
//!
//! Subsystem 0 is the most significant tensor factor: a basis vector of a
//! space with dimensions `(d0, d1, ...)` has flat index
//! `i0 * d1 * d2 * ... + i1 * d2 * ... + ...` (row-major). Every operation in
//! the crate relies on this single convention.

mod density;
mod eigen;
mod matrix;
mod pure;
mod space;

pub use density::DensityMatrix;
pub(crate) use eigen::hermitian_eigenvalues_inplace;
pub use eigen::{eigh, Eigh};
pub use matrix::{tensor, ComplexMatrix};
pub use pure::{purify, PureState};
pub use space::HilbertSpace;

use num_complex::Complex64;

/// Multiply by a global phase so the first component with modulus above
/// 1e-12 becomes real and positive. Applied to eigenvectors and pure states
/// so outputs are reproducible across runs.
pub(crate) fn phase_normalize(v: &mut [Complex64]) {
    if let Some(k) = v.iter().position(|z| z.norm() > 1e-12) {
        let phase = v[k] / v[k].norm();
        let correction = phase.conj();
        for z in v.iter_mut() {
            *z *= correction;
        }
        // Kill the residual imaginary dust on the anchor component.
        v[k] = Complex64::new(v[k].re, 0.0);
    }
}
