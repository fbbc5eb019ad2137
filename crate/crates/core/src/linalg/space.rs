use crate::error::{Error, Result};
use crate::tolerances::MAX_REGISTERED_DIM;

/// An ordered list of subsystem dimensions. Subsystem 0 is the most
/// significant tensor factor.
///
/// Registered spaces are capped at total dimension 64; purifying ancillas
/// constructed internally may exceed the cap (a rank-64 purification lives on
/// a 4096-dimensional space). Dimension-1 subsystems are permitted so that
/// rank-1 states purify with a trivial ancilla.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    dims: Vec<usize>,
}

impl HilbertSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch(
                "a space needs at least one subsystem".to_string(),
            ));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(
                "subsystem dimensions must be positive".to_string(),
            ));
        }
        let total: usize = dims.iter().product();
        if total > MAX_REGISTERED_DIM {
            return Err(Error::DimTooLarge {
                total,
                max: MAX_REGISTERED_DIM,
            });
        }
        Ok(Self { dims })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// Internal constructor for purification and sampling spaces that may
    /// exceed the registered cap.
    pub(crate) fn unchecked(dims: Vec<usize>) -> Self {
        debug_assert!(!dims.is_empty() && dims.iter().all(|&d| d > 0));
        Self { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: subsystem 0 owns the largest stride.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    pub(crate) fn check_subsystem(&self, index: usize) -> Result<()> {
        if index >= self.dims.len() {
            Err(Error::BadSubsystemIndex {
                index,
                count: self.dims.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Validate a subsystem selection: indices in range, no duplicates,
    /// nonempty. Returns the selection sorted ascending.
    pub(crate) fn checked_selection(&self, indices: &[usize]) -> Result<Vec<usize>> {
        if indices.is_empty() {
            return Err(Error::BadSubsystemIndex {
                index: 0,
                count: self.dims.len(),
            });
        }
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::BadSubsystemIndex {
                    index: pair[0],
                    count: self.dims.len(),
                });
            }
        }
        for &i in &sorted {
            self.check_subsystem(i)?;
        }
        Ok(sorted)
    }

    /// Flat offsets of every multi-index running over the given subsystems,
    /// other indices fixed at zero. Ordering is lexicographic in the
    /// selection's own order.
    pub(crate) fn offsets(&self, subsystems: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let sel_dims: Vec<usize> = subsystems.iter().map(|&k| self.dims[k]).collect();
        let count: usize = sel_dims.iter().product();
        let mut out = Vec::with_capacity(count);
        for mut flat in 0..count {
            let mut offset = 0;
            for pos in (0..subsystems.len()).rev() {
                let digit = flat % sel_dims[pos];
                flat /= sel_dims[pos];
                offset += digit * strides[subsystems[pos]];
            }
            out.push(offset);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_are_row_major() {
        let s = HilbertSpace::new(vec![2, 3, 4]).unwrap();
        assert_eq!(s.strides(), vec![12, 4, 1]);
        assert_eq!(s.total_dim(), 24);
    }

    #[test]
    fn rejects_oversized_spaces() {
        assert!(matches!(
            HilbertSpace::new(vec![2; 7]),
            Err(Error::DimTooLarge { total: 128, .. })
        ));
        assert!(HilbertSpace::new(vec![2; 6]).is_ok());
    }

    #[test]
    fn offsets_enumerate_selected_subsystems() {
        let s = HilbertSpace::new(vec![2, 2, 2]).unwrap();
        assert_eq!(s.offsets(&[0]), vec![0, 4]);
        assert_eq!(s.offsets(&[2]), vec![0, 1]);
        assert_eq!(s.offsets(&[0, 2]), vec![0, 1, 4, 5]);
    }

    #[test]
    fn selection_validation() {
        let s = HilbertSpace::new(vec![2, 2]).unwrap();
        assert!(s.checked_selection(&[0, 1]).is_ok());
        assert!(s.checked_selection(&[1, 0]).unwrap() == vec![0, 1]);
        assert!(s.checked_selection(&[]).is_err());
        assert!(s.checked_selection(&[0, 0]).is_err());
        assert!(s.checked_selection(&[2]).is_err());
    }
}
