use std::ops::{Index, IndexMut};

use num_complex::Complex64;

/// Dense complex matrix, entries stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from a flat row-major entry list; `data.len()` must equal
    /// `rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, data }
    }

    /// Rank-1 projector |v><v|.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(other.data.iter()) {
            *z += w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(other.data.iter()) {
            *z -= w;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise deviation from Hermiticity, max |m_ij - conj(m_ji)|.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Kronecker product with `self` as the most significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        tensor(self, other)
    }
}

/// Kronecker product; subsystem 0 (the left factor) is the most significant
/// index block.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a[(ia, ja)];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_of_identities() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = tensor(&i2, &i2);
        assert_eq!(i4.max_abs_diff(&ComplexMatrix::identity(4)), 0.0);
    }

    #[test]
    fn tensor_of_basis_projectors() {
        // diag(1,0) (x) diag(0,1) = diag(0,1,0,0)
        let p0 = ComplexMatrix::from_fn(2, 2, |i, j| {
            c(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0)
        });
        let p1 = ComplexMatrix::from_fn(2, 2, |i, j| {
            c(if i == 1 && j == 1 { 1.0 } else { 0.0 }, 0.0)
        });
        let t = tensor(&p0, &p1);
        let expected = ComplexMatrix::from_fn(4, 4, |i, j| {
            c(if i == 1 && j == 1 { 1.0 } else { 0.0 }, 0.0)
        });
        assert_eq!(t.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn tensor_of_pauli_z() {
        let z = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                c(0.0, 0.0)
            } else if i == 0 {
                c(1.0, 0.0)
            } else {
                c(-1.0, 0.0)
            }
        });
        let zz = tensor(&z, &z);
        let expected: [f64; 4] = [1.0, -1.0, -1.0, 1.0];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(zz[(i, i)], c(*e, 0.0));
        }
    }

    #[test]
    fn adjoint_and_hermiticity() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| c((i + j) as f64, (2 * i + j) as f64));
        let h = m.add(&m.adjoint()).scale(0.5);
        assert!(h.hermiticity_deviation() < 1e-15);
        assert!(m.hermiticity_deviation() > 0.5);
    }
}
