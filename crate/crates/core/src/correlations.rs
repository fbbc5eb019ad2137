//! Optimization-based correlation measures: classical correlation J, quantum
//! discord D, the one-way unlocalizable duals, entanglement of formation
//! (two-qubit closed form), and entanglement of assistance.
//!
//! The measured party is always subsystem 0 and must be a qubit. The
//! measurement family is rank-1 projective, parametrized by two Bloch angles;
//! every optimized quantity uses the same deterministic 64x128 grid scan
//! followed by simplex refinement.

use num_complex::Complex64;

use crate::entropy::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::linalg::{eigh, hermitian_eigenvalues_inplace, ComplexMatrix, DensityMatrix, PureState};
use crate::optimize::{minimize_over_angles, GridSpec, RawOptimum};
use crate::tolerances::{OUTCOME_PROB_CUTOFF, TAU_EXACT, TAU_OPT};

/// Rank-1 projective measurement on a qubit, parametrized by Bloch angles.
/// The outcome vectors are `(cos(theta/2), e^{i phi} sin(theta/2))` and its
/// orthogonal complement.
#[derive(Clone, Copy, Debug)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    /// Angles are folded into theta in [0, pi], phi in [0, 2 pi).
    pub fn new(theta: f64, phi: f64) -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        let mut theta = theta.rem_euclid(tau);
        let mut phi = phi;
        if theta > std::f64::consts::PI {
            theta = tau - theta;
            phi += std::f64::consts::PI;
        }
        Self {
            theta,
            phi: phi.rem_euclid(tau),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn vector(&self) -> [Complex64; 2] {
        let half = self.theta * 0.5;
        [
            Complex64::new(half.cos(), 0.0),
            Complex64::from_polar(half.sin(), self.phi),
        ]
    }

    pub fn orthogonal_vector(&self) -> [Complex64; 2] {
        let [v0, v1] = self.vector();
        [-v1.conj(), v0]
    }

    pub fn projectors(&self) -> (ComplexMatrix, ComplexMatrix) {
        (
            ComplexMatrix::outer(&self.vector()),
            ComplexMatrix::outer(&self.orthogonal_vector()),
        )
    }
}

/// Outcome of one measurement optimization.
#[derive(Clone, Copy, Debug)]
pub struct OptimizerResult {
    /// Refined objective value in bits.
    pub value: f64,
    /// The extremizing measurement.
    pub basis: MeasurementBasis,
    /// Best value on the coarse grid, before refinement.
    pub grid_value: f64,
    /// value - grid_value; nonnegative for maximizations, nonpositive for
    /// minimizations.
    pub refinement_delta: f64,
    /// Whether the simplex collapsed below the angle tolerance.
    pub converged: bool,
}

/// Tolerance tier attached to a reported quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceTier {
    /// Closed-form: entropies, two-qubit entanglement of formation.
    Exact,
    /// Contains a measurement optimization.
    Optimizer,
}

impl ToleranceTier {
    pub fn bound(&self) -> f64 {
        match self {
            ToleranceTier::Exact => TAU_EXACT,
            ToleranceTier::Optimizer => TAU_OPT,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ToleranceTier::Exact => "exact",
            ToleranceTier::Optimizer => "opt",
        }
    }
}

// ---------------------------------------------------------------------------
// Measurement objective on density matrices
// ---------------------------------------------------------------------------

/// sum_k p_k S(rho_{B|k}) for a rank-1 projective measurement on the qubit
/// at subsystem 0, evaluated directly on the raw matrix. This is the single
/// objective behind J, D, the unlocalizable duals, and the density-matrix
/// route to entanglement of assistance.
pub(crate) struct MeasuredObjective<'a> {
    mat: &'a ComplexMatrix,
    d_b: usize,
}

impl<'a> MeasuredObjective<'a> {
    pub(crate) fn new(rho: &'a DensityMatrix) -> Result<Self> {
        let dims = rho.space().dims();
        if dims.len() < 2 {
            return Err(Error::DimensionMismatch(
                "measured conditional entropy needs at least two subsystems".to_string(),
            ));
        }
        if dims[0] != 2 {
            return Err(Error::NotAQubit { dim: dims[0] });
        }
        Ok(Self {
            mat: rho.matrix(),
            d_b: rho.space().total_dim() / 2,
        })
    }

    pub(crate) fn eval(&self, theta: f64, phi: f64) -> f64 {
        let half = theta * 0.5;
        let v0 = Complex64::new(half.cos(), 0.0);
        let v1 = Complex64::from_polar(half.sin(), phi);
        self.outcome_term(v0, v1) + self.outcome_term(-v1.conj(), v0)
    }

    /// p_k S(rho_{B|k}) for the outcome vector (w0, w1); outcomes with
    /// probability below the cutoff contribute zero.
    fn outcome_term(&self, w0: Complex64, w1: Complex64) -> f64 {
        let d = self.d_b;
        let m = self.mat;
        if d == 2 {
            // B-block entries of <w| rho |w>, contracted over the measured qubit.
            let block = |i: usize, j: usize| -> Complex64 {
                w0.conj() * m[(i, j)] * w0
                    + w0.conj() * m[(i, 2 + j)] * w1
                    + w1.conj() * m[(2 + i, j)] * w0
                    + w1.conj() * m[(2 + i, 2 + j)] * w1
            };
            let m00 = block(0, 0).re;
            let m11 = block(1, 1).re;
            let m01 = block(0, 1);
            let p = m00 + m11;
            if p < OUTCOME_PROB_CUTOFF {
                return 0.0;
            }
            p * entropy_of_2x2_block(m00, m11, m01, p)
        } else {
            let mut block = vec![Complex64::new(0.0, 0.0); d * d];
            let mut p = 0.0;
            for i in 0..d {
                for j in 0..d {
                    block[i * d + j] = w0.conj() * m[(i, j)] * w0
                        + w0.conj() * m[(i, d + j)] * w1
                        + w1.conj() * m[(d + i, j)] * w0
                        + w1.conj() * m[(d + i, d + j)] * w1;
                }
                p += block[i * d + i].re;
            }
            if p < OUTCOME_PROB_CUTOFF {
                return 0.0;
            }
            p * entropy_of_small_block(&mut block, d, p)
        }
    }
}

/// Entropy of a small PSD block (trace p) via the values-only eigensolver;
/// destroys the buffer.
fn entropy_of_small_block(block: &mut [Complex64], d: usize, p: f64) -> f64 {
    let mut values = [0.0f64; 64];
    hermitian_eigenvalues_inplace(block, d, &mut values);
    let mut s = 0.0;
    for &l in values.iter().take(d) {
        let x = (l / p).clamp(0.0, 1.0);
        if x > 0.0 {
            s -= x * x.log2();
        }
    }
    s
}

/// Entropy of a 2x2 PSD block with trace p, via the closed-form spectrum.
fn entropy_of_2x2_block(m00: f64, m11: f64, m01: Complex64, p: f64) -> f64 {
    let mean = 0.5 * (m00 + m11);
    let disc = (0.25 * (m00 - m11) * (m00 - m11) + m01.norm_sqr()).sqrt();
    let x1 = ((mean + disc) / p).clamp(0.0, 1.0);
    let x2 = ((mean - disc) / p).clamp(0.0, 1.0);
    let mut s = 0.0;
    if x1 > 0.0 {
        s -= x1 * x1.log2();
    }
    if x2 > 0.0 {
        s -= x2 * x2.log2();
    }
    s
}

pub(crate) fn measured_min(rho: &DensityMatrix) -> Result<RawOptimum> {
    let obj = MeasuredObjective::new(rho)?;
    Ok(minimize_over_angles(
        &|t, p| obj.eval(t, p),
        GridSpec::DEFAULT,
    ))
}

pub(crate) fn measured_max(rho: &DensityMatrix) -> Result<RawOptimum> {
    let obj = MeasuredObjective::new(rho)?;
    let raw = minimize_over_angles(&|t, p| -obj.eval(t, p), GridSpec::DEFAULT);
    Ok(RawOptimum {
        grid_value: -raw.grid_value,
        value: -raw.value,
        ..raw
    })
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// S(B|{measurement}) = sum_k p_k S(rho_{B|k}) for one fixed measurement on
/// the qubit at subsystem 0.
pub fn conditional_entropy_after_measurement(
    rho_ab: &DensityMatrix,
    m: &MeasurementBasis,
) -> Result<f64> {
    let obj = MeasuredObjective::new(rho_ab)?;
    Ok(obj.eval(m.theta(), m.phi()))
}

fn unmeasured_selection(rho: &DensityMatrix) -> Vec<usize> {
    (1..rho.space().subsystem_count()).collect()
}

/// Classical correlation J(B|A) = S(rho_B) - min_m S(B|m), maximal
/// information about the unmeasured side gained by measuring the qubit A.
pub fn classical_correlation(rho_ab: &DensityMatrix) -> Result<OptimizerResult> {
    let raw = measured_min(rho_ab)?;
    let s_b = von_neumann_entropy(&rho_ab.partial_trace(&unmeasured_selection(rho_ab))?);
    let value = s_b - raw.value;
    let grid_value = s_b - raw.grid_value;
    Ok(OptimizerResult {
        value,
        basis: MeasurementBasis::new(raw.theta, raw.phi),
        grid_value,
        refinement_delta: value - grid_value,
        converged: raw.converged,
    })
}

/// Quantum discord D(B|A) = I(A:B) - J(B|A), both sides sharing the same
/// measurement optimization.
pub fn quantum_discord(rho_ab: &DensityMatrix) -> Result<OptimizerResult> {
    let raw = measured_min(rho_ab)?;
    let s_a = von_neumann_entropy(&rho_ab.partial_trace(&[0])?);
    let s_ab = von_neumann_entropy(rho_ab);
    let value = s_a - s_ab + raw.value;
    let grid_value = s_a - s_ab + raw.grid_value;
    Ok(OptimizerResult {
        value,
        basis: MeasurementBasis::new(raw.theta, raw.phi),
        grid_value,
        refinement_delta: value - grid_value,
        converged: raw.converged,
    })
}

/// One-way unlocalizable discord, the min-to-max dual of discord over the
/// same measurement family:
/// delta_u = S(rho_A) - S(rho_AB) + max_m S(B|m).
pub fn unlocalizable_discord(rho_ab: &DensityMatrix) -> Result<OptimizerResult> {
    let raw = measured_max(rho_ab)?;
    let s_a = von_neumann_entropy(&rho_ab.partial_trace(&[0])?);
    let s_ab = von_neumann_entropy(rho_ab);
    let value = s_a - s_ab + raw.value;
    let grid_value = s_a - s_ab + raw.grid_value;
    Ok(OptimizerResult {
        value,
        basis: MeasurementBasis::new(raw.theta, raw.phi),
        grid_value,
        refinement_delta: value - grid_value,
        converged: raw.converged,
    })
}

/// One-way unlocalizable entanglement retained on the kept side when the
/// qubit at subsystem 0 is measured:
/// E_u = S(rho_B) - max_m sum_k p_k S(rho_{B|k}).
pub fn unlocalizable_entanglement(rho_ab: &DensityMatrix) -> Result<f64> {
    let raw = measured_max(rho_ab)?;
    let s_b = von_neumann_entropy(&rho_ab.partial_trace(&unmeasured_selection(rho_ab))?);
    Ok(s_b - raw.value)
}

// ---------------------------------------------------------------------------
// Two-qubit closed forms
// ---------------------------------------------------------------------------

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.space().dims() != [2, 2] {
        return Err(Error::NotTwoQubits {
            dims: rho.space().dims().to_vec(),
        });
    }
    Ok(())
}

/// (sigma_y (x) sigma_y), the spin-flip kernel.
fn spin_flip_kernel() -> ComplexMatrix {
    let mut yy = ComplexMatrix::zeros(4, 4);
    yy[(0, 3)] = Complex64::new(-1.0, 0.0);
    yy[(1, 2)] = Complex64::new(1.0, 0.0);
    yy[(2, 1)] = Complex64::new(1.0, 0.0);
    yy[(3, 0)] = Complex64::new(-1.0, 0.0);
    yy
}

/// Two-qubit concurrence C = max(0, l1 - l2 - l3 - l4), where the l_i are
/// the descending square roots of the eigenvalues of
/// rho (Y(x)Y) conj(rho) (Y(x)Y). Computed on the Hermitian form
/// sqrt(rho) rho~ sqrt(rho), which has the same spectrum.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let yy = spin_flip_kernel();
    let rho_tilde = yy.mul(&rho.matrix().conjugate()).mul(&yy);
    let eig = rho.eigen();
    let mut sqrt_rho = ComplexMatrix::zeros(4, 4);
    for (k, &l) in eig.values.iter().enumerate() {
        let w = l.max(0.0).sqrt();
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho[(i, j)] += eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() * w;
            }
        }
    }
    let m = sqrt_rho.mul(&rho_tilde).mul(&sqrt_rho);
    let roots = eigh(&m)?;
    let ls: Vec<f64> = roots.values.iter().map(|l| l.max(0.0).sqrt()).collect();
    Ok((ls[0] - ls[1] - ls[2] - ls[3]).max(0.0))
}

/// Two-qubit entanglement of formation via the concurrence closed form:
/// E_f = h((1 + sqrt(1 - C^2)) / 2).
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?;
    Ok(crate::entropy::binary_entropy(
        0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()),
    ))
}

// ---------------------------------------------------------------------------
// Entanglement of assistance on pure tripartite states
// ---------------------------------------------------------------------------

/// Objective for assistance: the helper qubit is measured, each outcome
/// leaves the remaining pair pure, and the entropy of the first remaining
/// subsystem's marginal is the entanglement handed to the pair.
pub(crate) struct AssistanceObjective<'a> {
    psi: &'a [Complex64],
    helper_offsets: Vec<usize>,
    rest_offsets: Vec<usize>,
    d_first: usize,
    d_second: usize,
}

impl<'a> AssistanceObjective<'a> {
    pub(crate) fn new(psi: &'a PureState, helper: usize) -> Result<Self> {
        let space = psi.space();
        space.check_subsystem(helper)?;
        if space.subsystem_count() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "assistance needs a tripartite pure state, got {} subsystems",
                space.subsystem_count()
            )));
        }
        if space.dims()[helper] != 2 {
            return Err(Error::NotAQubit {
                dim: space.dims()[helper],
            });
        }
        let rest: Vec<usize> = (0..3).filter(|&k| k != helper).collect();
        Ok(Self {
            psi: psi.amplitudes(),
            helper_offsets: space.offsets(&[helper]),
            rest_offsets: space.offsets(&rest),
            d_first: space.dims()[rest[0]],
            d_second: space.dims()[rest[1]],
        })
    }

    pub(crate) fn eval(&self, theta: f64, phi: f64) -> f64 {
        let half = theta * 0.5;
        let v0 = Complex64::new(half.cos(), 0.0);
        let v1 = Complex64::from_polar(half.sin(), phi);
        self.outcome_term(v0, v1) + self.outcome_term(-v1.conj(), v0)
    }

    fn outcome_term(&self, w0: Complex64, w1: Complex64) -> f64 {
        let h0 = self.helper_offsets[0];
        let h1 = self.helper_offsets[1];
        let collapsed: Vec<Complex64> = self
            .rest_offsets
            .iter()
            .map(|&r| w0.conj() * self.psi[h0 + r] + w1.conj() * self.psi[h1 + r])
            .collect();
        let p: f64 = collapsed.iter().map(|z| z.norm_sqr()).sum();
        if p < OUTCOME_PROB_CUTOFF {
            return 0.0;
        }
        // Marginal of the first remaining subsystem; the outcome state on the
        // pair is pure, so this entropy is its entanglement.
        let (du, dv) = (self.d_first, self.d_second);
        if du == 2 {
            let mut m00 = 0.0;
            let mut m11 = 0.0;
            let mut m01 = Complex64::new(0.0, 0.0);
            for y in 0..dv {
                let a = collapsed[y];
                let b = collapsed[dv + y];
                m00 += a.norm_sqr();
                m11 += b.norm_sqr();
                m01 += a * b.conj();
            }
            p * entropy_of_2x2_block(m00, m11, m01, p)
        } else {
            let mut block = vec![Complex64::new(0.0, 0.0); du * du];
            for x1 in 0..du {
                for x2 in 0..du {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for y in 0..dv {
                        acc += collapsed[x1 * dv + y] * collapsed[x2 * dv + y].conj();
                    }
                    block[x1 * du + x2] = acc;
                }
            }
            p * entropy_of_small_block(&mut block, du, p)
        }
    }
}

/// Entanglement of assistance E_a(rho_pair): the maximum average
/// entanglement left on `pair` when the `helper` qubit of a pure tripartite
/// state is measured projectively.
pub fn entanglement_of_assistance(
    psi_abc: &PureState,
    pair: (usize, usize),
    helper: usize,
) -> Result<OptimizerResult> {
    if pair.0 == pair.1 || pair.0 == helper || pair.1 == helper {
        return Err(Error::DimensionMismatch(
            "pair and helper must name three distinct subsystems".to_string(),
        ));
    }
    psi_abc.space().check_subsystem(pair.0)?;
    psi_abc.space().check_subsystem(pair.1)?;
    let obj = AssistanceObjective::new(psi_abc, helper)?;
    let raw = minimize_over_angles(&|t, p| -obj.eval(t, p), GridSpec::DEFAULT);
    let value = -raw.value;
    let grid_value = -raw.grid_value;
    Ok(OptimizerResult {
        value,
        basis: MeasurementBasis::new(raw.theta, raw.phi),
        grid_value,
        refinement_delta: value - grid_value,
        converged: raw.converged,
    })
}

// ---------------------------------------------------------------------------
// Bundled report
// ---------------------------------------------------------------------------

/// The full correlation bundle for a tripartite pure state with the measured
/// qubit at subsystem 0: J(B|A), D(B|A), E_f of the unmeasured pair (when it
/// is two qubits), E_a of the unmeasured pair with A as helper, and the
/// unlocalizable duals E_u and delta_u for (B, A).
#[derive(Clone, Debug)]
pub struct CorrelationReport {
    pub j: f64,
    pub d: f64,
    pub e_f: Option<f64>,
    pub e_a: f64,
    pub e_u: f64,
    pub delta_u: f64,
    /// Minimizing measurement shared by J and D.
    pub j_basis: MeasurementBasis,
    /// Maximizing measurement for E_a.
    pub e_a_basis: MeasurementBasis,
    /// Maximizing measurement shared by delta_u and E_u.
    pub delta_u_basis: MeasurementBasis,
}

impl CorrelationReport {
    /// Tolerance tier of each reported field.
    pub fn tiers() -> [(&'static str, ToleranceTier); 6] {
        [
            ("j", ToleranceTier::Optimizer),
            ("d", ToleranceTier::Optimizer),
            ("e_f", ToleranceTier::Exact),
            ("e_a", ToleranceTier::Optimizer),
            ("e_u", ToleranceTier::Optimizer),
            ("delta_u", ToleranceTier::Optimizer),
        ]
    }
}

/// Compute the correlation bundle from a tripartite pure state; subsystem 0
/// is the measured qubit A, subsystem 1 is B, subsystem 2 is C.
pub fn correlation_report(psi_abc: &PureState) -> Result<CorrelationReport> {
    if psi_abc.space().subsystem_count() != 3 {
        return Err(Error::DimensionMismatch(
            "the correlation report needs a tripartite pure state".to_string(),
        ));
    }
    let rho_ab = psi_abc.partial_trace(&[0, 1])?;
    let rho_bc = psi_abc.partial_trace(&[1, 2])?;

    let raw_min = measured_min(&rho_ab)?;
    let raw_max = measured_max(&rho_ab)?;
    let s_a = von_neumann_entropy(&rho_ab.partial_trace(&[0])?);
    let s_b = von_neumann_entropy(&rho_ab.partial_trace(&[1])?);
    let s_ab = von_neumann_entropy(&rho_ab);

    let e_f = if rho_bc.space().dims() == [2, 2] {
        Some(entanglement_of_formation(&rho_bc)?)
    } else {
        None
    };
    let e_a = entanglement_of_assistance(psi_abc, (1, 2), 0)?;

    Ok(CorrelationReport {
        j: s_b - raw_min.value,
        d: s_a - s_ab + raw_min.value,
        e_f,
        e_a: e_a.value,
        e_u: s_b - raw_max.value,
        delta_u: s_a - s_ab + raw_max.value,
        j_basis: MeasurementBasis::new(raw_min.theta, raw_min.phi),
        e_a_basis: e_a.basis,
        delta_u_basis: MeasurementBasis::new(raw_max.theta, raw_max.phi),
    })
}
