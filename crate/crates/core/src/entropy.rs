//! Entropy functionals, post-measurement states, and the memory-assisted
//! uncertainty bound.
//!
//! Everything is in bits. The measured subsystem is always index 0; callers
//! permute subsystems beforehand when a different party is measured.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, DensityMatrix};
use crate::tolerances::TAU_EXACT;

/// Von Neumann entropy S = -sum lambda_i log2 lambda_i over the clipped
/// spectrum, with 0 log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_bits(rho.spectrum())
}

/// Shannon entropy in bits of a nonnegative weight vector.
pub(crate) fn shannon_bits(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Binary entropy h(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

/// Conditional entropy S(of | given) = S(rho_{of+given}) - S(rho_given).
///
/// `of` and `given` are disjoint subsystem selections; an empty `given`
/// reduces to the marginal entropy of `of`.
pub fn conditional_entropy(rho: &DensityMatrix, of: &[usize], given: &[usize]) -> Result<f64> {
    for o in of {
        if given.contains(o) {
            return Err(Error::BadSubsystemIndex {
                index: *o,
                count: rho.space().subsystem_count(),
            });
        }
    }
    if given.is_empty() {
        return Ok(von_neumann_entropy(&rho.partial_trace(of)?));
    }
    let mut joint = of.to_vec();
    joint.extend_from_slice(given);
    let s_joint = von_neumann_entropy(&rho.partial_trace(&joint)?);
    let s_given = von_neumann_entropy(&rho.partial_trace(given)?);
    Ok(s_joint - s_given)
}

/// Quantum mutual information I(a:b) = S(rho_a) + S(rho_b) - S(rho_ab).
pub fn mutual_information(rho: &DensityMatrix, a: usize, b: usize) -> Result<f64> {
    if a == b {
        return Err(Error::BadSubsystemIndex {
            index: b,
            count: rho.space().subsystem_count(),
        });
    }
    let s_a = von_neumann_entropy(&rho.partial_trace(&[a])?);
    let s_b = von_neumann_entropy(&rho.partial_trace(&[b])?);
    let s_ab = von_neumann_entropy(&rho.partial_trace(&[a, b])?);
    Ok(s_a + s_b - s_ab)
}

/// Check that `basis` is a complete orthonormal basis for dimension `dim`.
fn validate_basis(basis: &[Vec<Complex64>], dim: usize) -> Result<()> {
    if basis.len() != dim || basis.iter().any(|v| v.len() != dim) {
        return Err(Error::IncompleteBasis);
    }
    for (k, vk) in basis.iter().enumerate() {
        for (l, vl) in basis.iter().enumerate() {
            let inner: Complex64 = vk.iter().zip(vl.iter()).map(|(a, b)| a.conj() * b).sum();
            let expected = if k == l { 1.0 } else { 0.0 };
            if (inner - Complex64::new(expected, 0.0)).norm() > TAU_EXACT {
                return Err(Error::IncompleteBasis);
            }
        }
    }
    Ok(())
}

/// Two orthonormal eigenbases on the measured subsystem together with their
/// complementarity c = max_{k,l} |<q_k|r_l>|^2.
#[derive(Clone, Debug)]
pub struct ObservablePair {
    basis_q: Vec<Vec<Complex64>>,
    basis_r: Vec<Vec<Complex64>>,
    complementarity: f64,
}

impl ObservablePair {
    pub fn new(basis_q: Vec<Vec<Complex64>>, basis_r: Vec<Vec<Complex64>>) -> Result<Self> {
        if basis_q.len() != basis_r.len() {
            return Err(Error::IncompleteBasis);
        }
        let dim = basis_q.len();
        validate_basis(&basis_q, dim)?;
        validate_basis(&basis_r, dim)?;
        let mut c: f64 = 0.0;
        for q in &basis_q {
            for r in &basis_r {
                let overlap: Complex64 = q.iter().zip(r.iter()).map(|(a, b)| a.conj() * b).sum();
                c = c.max(overlap.norm_sqr());
            }
        }
        Ok(Self {
            basis_q,
            basis_r,
            complementarity: c,
        })
    }

    /// The default pair: Pauli-Z and Pauli-X eigenbases (c = 1/2, maximal
    /// complementarity for a qubit).
    pub fn pauli_zx() -> Self {
        Self::new(pauli_basis('Z'), pauli_basis('X')).expect("built-in bases are orthonormal")
    }

    /// Qubit eigenbases by axis name, e.g. `("Z", "X")`.
    pub fn from_names(q: &str, r: &str) -> Result<Self> {
        let parse = |name: &str| -> Result<Vec<Vec<Complex64>>> {
            match name {
                "Z" => Ok(pauli_basis('Z')),
                "X" => Ok(pauli_basis('X')),
                "Y" => Ok(pauli_basis('Y')),
                other => Err(Error::SpecParse(format!(
                    "unknown observable {other:?}, expected Z, X, or Y"
                ))),
            }
        };
        Self::new(parse(q)?, parse(r)?)
    }

    pub fn dim(&self) -> usize {
        self.basis_q.len()
    }

    pub fn basis_q(&self) -> &[Vec<Complex64>] {
        &self.basis_q
    }

    pub fn basis_r(&self) -> &[Vec<Complex64>] {
        &self.basis_r
    }

    pub fn complementarity(&self) -> f64 {
        self.complementarity
    }
}

fn pauli_basis(axis: char) -> Vec<Vec<Complex64>> {
    let s = 1.0 / 2.0_f64.sqrt();
    let c = Complex64::new;
    match axis {
        'Z' => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        'X' => vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]],
        'Y' => vec![vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]],
        _ => unreachable!("internal axis name"),
    }
}

/// Dephase subsystem 0 in the given basis:
/// rho -> sum_k (P_k (x) 1) rho (P_k (x) 1).
///
/// The output is block-diagonal in the measurement basis and has the same
/// trace and marginals on the unmeasured subsystems.
pub fn post_measurement_state(
    rho: &DensityMatrix,
    basis: &[Vec<Complex64>],
) -> Result<DensityMatrix> {
    let dims = rho.space().dims();
    let d0 = dims[0];
    validate_basis(basis, d0)?;
    let rest: usize = dims[1..].iter().product::<usize>().max(1);
    let eye = ComplexMatrix::identity(rest);
    let mut acc = ComplexMatrix::zeros(rho.space().total_dim(), rho.space().total_dim());
    for v in basis {
        let projector = tensor(&ComplexMatrix::outer(v), &eye);
        acc = acc.add(&projector.mul(rho.matrix()).mul(&projector));
    }
    DensityMatrix::new(rho.space().clone(), acc)
}

/// Both sides of the memory-assisted uncertainty relation for one state and
/// one observable pair, all in bits.
#[derive(Clone, Copy, Debug)]
pub struct UncertaintyReport {
    /// S(Q|B) of the post-measurement state.
    pub s_q_given_b: f64,
    /// S(R|B) of the post-measurement state.
    pub s_r_given_b: f64,
    /// S(Q|B) + S(R|B).
    pub lhs: f64,
    /// log2(1/c) + S(A|B), the uncertainty bound.
    pub ub: f64,
    /// Conditional entropy S(A|B) of the input state.
    pub s_a_given_b: f64,
    /// lhs - ub; nonnegative up to numerical error.
    pub slack: f64,
}

/// Evaluate the uncertainty relation on a bipartite state with the measured
/// subsystem at index 0 and the memory being everything else.
pub fn uncertainty_report(rho_ab: &DensityMatrix, obs: &ObservablePair) -> Result<UncertaintyReport> {
    let dims = rho_ab.space().dims();
    if dims.len() < 2 {
        return Err(Error::DimensionMismatch(
            "the uncertainty relation needs a measured subsystem and a memory".to_string(),
        ));
    }
    if obs.dim() != dims[0] {
        return Err(Error::DimensionMismatch(format!(
            "observables act on dimension {}, measured subsystem has dimension {}",
            obs.dim(),
            dims[0]
        )));
    }
    let memory: Vec<usize> = (1..dims.len()).collect();
    let s_a_given_b = conditional_entropy(rho_ab, &[0], &memory)?;

    let rho_qb = post_measurement_state(rho_ab, obs.basis_q())?;
    let s_q_given_b = conditional_entropy(&rho_qb, &[0], &memory)?;
    let rho_rb = post_measurement_state(rho_ab, obs.basis_r())?;
    let s_r_given_b = conditional_entropy(&rho_rb, &[0], &memory)?;

    let lhs = s_q_given_b + s_r_given_b;
    let ub = (1.0 / obs.complementarity()).log2() + s_a_given_b;
    Ok(UncertaintyReport {
        s_q_given_b,
        s_r_given_b,
        lhs,
        ub,
        s_a_given_b,
        slack: lhs - ub,
    })
}
