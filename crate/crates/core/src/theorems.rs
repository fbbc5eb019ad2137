//! Executable audits of the identities, inequalities, and propositions that
//! tie entropies and correlation measures together, plus the two quantitative
//! landmarks: the sweep crossing near theta/pi = 0.182 and the Werner
//! threshold near r = 0.7476.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::{
    entanglement_of_assistance, entanglement_of_formation, measured_max, measured_min,
    unlocalizable_entanglement,
};
use crate::entropy::{conditional_entropy, uncertainty_report, von_neumann_entropy, ObservablePair};
use crate::error::{Error, Result};
use crate::linalg::{purify, DensityMatrix, PureState};
use crate::states::{
    sample_haar_pure_stream, sample_random_mixed_stream, w_purification, werner, BuiltState,
    FactorizedState, StateFamily, StateSpec,
};
use crate::tolerances::{TAU_EXACT, TAU_OPT, UNCERTAINTY_SLACK_TOL};

/// Identifier of one runtime-checked claim. The `EQn` numbering is the audit
/// catalog's own, stable across releases; `PROP1`/`PROP2` are the two
/// conditional claims gated on a negative conditional entropy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimId {
    /// Memory-assisted uncertainty relation: lhs >= bound.
    Eq1Slack,
    /// S(A|B) + S(A|C) >= 0 on tripartite states.
    Eq2,
    /// sum_i S(A|X_i) >= 0 for every single-party memory X_i.
    Eq3,
    /// E_f(BC) + J(B|A) = S(rho_B) on pure tripartite states.
    Eq6,
    /// D(B|A) + S(B|A) = E_f(BC) on pure tripartite states.
    Eq7,
    /// S(rho_B) + E_f(CA) <= S(rho_C) + E_f(AB), gated on S(A|B) < 0.
    Eq8,
    /// D(B|A) + J(C|A) = D(C|A) + J(B|A) = S(rho_A).
    Eq9,
    /// E_f(AC) <= D(A|B) <= E_f(AB), gated on S(A|B) < 0.
    Eq10,
    /// S(A|B) = D(C|A) - D(B|A).
    Eq11,
    /// E_a(BC) + E_u(BA) = S(rho_B).
    Eq14,
    /// delta_u(BA) + S(B|A) = E_a(BC).
    Eq15,
    /// Araki-Lieb: S(rho_AB) >= |S(rho_A) - S(rho_B)|.
    Eq16,
    /// Factorized-state consequences; see [`check_factorization_case`].
    Eq17Case,
    /// D, J, E_f between A and B all exceed those between A and C, gated on
    /// S(A|B) < 0.
    Prop1,
    /// E_u and delta_u between B and A exceed those between C and A, gated
    /// on S(A|B) < 0.
    Prop2,
}

impl ClaimId {
    pub const ALL: [ClaimId; 15] = [
        ClaimId::Eq1Slack,
        ClaimId::Eq2,
        ClaimId::Eq3,
        ClaimId::Eq6,
        ClaimId::Eq7,
        ClaimId::Eq8,
        ClaimId::Eq9,
        ClaimId::Eq10,
        ClaimId::Eq11,
        ClaimId::Eq14,
        ClaimId::Eq15,
        ClaimId::Eq16,
        ClaimId::Eq17Case,
        ClaimId::Prop1,
        ClaimId::Prop2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClaimId::Eq1Slack => "EQ1_SLACK",
            ClaimId::Eq2 => "EQ2",
            ClaimId::Eq3 => "EQ3",
            ClaimId::Eq6 => "EQ6",
            ClaimId::Eq7 => "EQ7",
            ClaimId::Eq8 => "EQ8",
            ClaimId::Eq9 => "EQ9",
            ClaimId::Eq10 => "EQ10",
            ClaimId::Eq11 => "EQ11",
            ClaimId::Eq14 => "EQ14",
            ClaimId::Eq15 => "EQ15",
            ClaimId::Eq16 => "EQ16",
            ClaimId::Eq17Case => "EQ17_CASE",
            ClaimId::Prop1 => "PROP1",
            ClaimId::Prop2 => "PROP2",
        }
    }

    /// Whether the claim asserts an equality (residual is |lhs - rhs|) or an
    /// inequality (residual is the signed slack).
    pub fn is_equality(&self) -> bool {
        matches!(
            self,
            ClaimId::Eq6
                | ClaimId::Eq7
                | ClaimId::Eq9
                | ClaimId::Eq11
                | ClaimId::Eq14
                | ClaimId::Eq15
                | ClaimId::Eq17Case
        )
    }

    /// Tolerance the claim is audited at.
    pub fn tolerance(&self) -> f64 {
        match self {
            ClaimId::Eq1Slack => UNCERTAINTY_SLACK_TOL,
            ClaimId::Eq2 | ClaimId::Eq3 | ClaimId::Eq16 => TAU_EXACT,
            _ => TAU_OPT,
        }
    }

    /// Default sampling dimensions for random batch audits.
    pub fn default_dims(&self) -> Vec<usize> {
        match self {
            ClaimId::Eq1Slack | ClaimId::Eq16 | ClaimId::Eq17Case => vec![2, 2],
            ClaimId::Eq3 => vec![2, 2, 2, 2],
            _ => vec![2, 2, 2],
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::SpecParse(format!("unknown claim id {s:?}")))
    }
}

/// One audited claim on one state.
#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub claim: ClaimId,
    pub lhs: f64,
    pub rhs: f64,
    /// |lhs - rhs| for equalities (worst part for compound claims), signed
    /// slack for inequalities.
    pub residual: f64,
    pub pass: bool,
    pub tolerance: f64,
    pub spec: StateSpec,
}

impl ClaimResult {
    fn equality(claim: ClaimId, lhs: f64, rhs: f64, residual: f64, spec: StateSpec) -> Self {
        let tolerance = claim.tolerance();
        Self {
            claim,
            lhs,
            rhs,
            residual,
            pass: residual <= tolerance,
            tolerance,
            spec,
        }
    }

    fn inequality(claim: ClaimId, lhs: f64, rhs: f64, slack: f64, spec: StateSpec) -> Self {
        let tolerance = claim.tolerance();
        Self {
            claim,
            lhs,
            rhs,
            residual: slack,
            pass: slack >= -tolerance,
            tolerance,
            spec,
        }
    }
}

/// State handed to an audit: pure states keep their vector form so the
/// assistance route stays independent of the density-matrix route.
#[derive(Clone, Copy, Debug)]
pub enum AuditInput<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

/// Marginals of a tripartite pure state, each with the measured party A at
/// subsystem 0 of the pair.
struct TripartiteViews {
    rho_ab: DensityMatrix,
    rho_ac: DensityMatrix,
    rho_bc: DensityMatrix,
    s_a: f64,
    s_b: f64,
    s_c: f64,
}

impl TripartiteViews {
    fn build(psi: &PureState) -> Result<Self> {
        if psi.space().subsystem_count() != 3 {
            return Err(Error::NotApplicable(format!(
                "claim needs a tripartite pure state, got {} subsystems",
                psi.space().subsystem_count()
            )));
        }
        let rho_ab = psi.partial_trace(&[0, 1])?;
        let rho_ac = psi.partial_trace(&[0, 2])?;
        let rho_bc = psi.partial_trace(&[1, 2])?;
        let s_a = von_neumann_entropy(&rho_ab.partial_trace(&[0])?);
        let s_b = von_neumann_entropy(&rho_ab.partial_trace(&[1])?);
        let s_c = von_neumann_entropy(&rho_ac.partial_trace(&[1])?);
        Ok(Self {
            rho_ab,
            rho_ac,
            rho_bc,
            s_a,
            s_b,
            s_c,
        })
    }

    /// S(A|B) = S(rho_AB) - S(rho_B).
    fn s_a_given_b(&self) -> f64 {
        von_neumann_entropy(&self.rho_ab) - self.s_b
    }

    /// (J, D) for measuring A on the given pair marginal, sharing one
    /// optimization.
    fn j_and_d(&self, pair: &DensityMatrix, s_other: f64) -> Result<(f64, f64)> {
        let raw = measured_min(pair)?;
        let j = s_other - raw.value;
        let d = self.s_a - von_neumann_entropy(pair) + raw.value;
        Ok((j, d))
    }

    fn require_pair_of_qubits(&self, pair: &DensityMatrix) -> Result<()> {
        if pair.space().dims() != [2, 2] {
            return Err(Error::NotApplicable(format!(
                "claim needs qubit pairs, got dims {:?}",
                pair.space().dims()
            )));
        }
        Ok(())
    }

    /// Gate for the conditional claims: the bound on A must actually be
    /// reduced by the memory B.
    fn gate_negative_conditional_entropy(&self) -> Result<()> {
        let s = self.s_a_given_b();
        if s >= -TAU_OPT {
            return Err(Error::NotApplicable(format!(
                "gate S(A|B) < -{TAU_OPT} not met (S(A|B) = {s})"
            )));
        }
        Ok(())
    }
}

fn expect_pure<'a>(input: &AuditInput<'a>) -> Result<&'a PureState> {
    match input {
        AuditInput::Pure(psi) => Ok(psi),
        AuditInput::Mixed(_) => Err(Error::NotApplicable(
            "claim needs a pure state input".to_string(),
        )),
    }
}

fn input_density(input: &AuditInput<'_>) -> DensityMatrix {
    match input {
        AuditInput::Pure(psi) => psi.density(),
        AuditInput::Mixed(rho) => (*rho).clone(),
    }
}

/// Audit a single claim on a single state. Inequality gates that fail report
/// `NotApplicable` rather than a vacuous pass.
pub fn audit_claim(
    claim: ClaimId,
    input: AuditInput<'_>,
    obs: Option<&ObservablePair>,
    spec: StateSpec,
) -> Result<ClaimResult> {
    match claim {
        ClaimId::Eq1Slack => {
            let rho = input_density(&input);
            if rho.space().subsystem_count() < 2 {
                return Err(Error::DimensionMismatch(
                    "the uncertainty audit needs a bipartite state".to_string(),
                ));
            }
            let default_obs;
            let obs = match obs {
                Some(o) => o,
                None => {
                    default_obs = ObservablePair::pauli_zx();
                    &default_obs
                }
            };
            let report = uncertainty_report(&rho, obs)?;
            Ok(ClaimResult::inequality(
                claim,
                report.lhs,
                report.ub,
                report.slack,
                spec,
            ))
        }
        ClaimId::Eq2 => {
            let rho = input_density(&input);
            if rho.space().subsystem_count() != 3 {
                return Err(Error::DimensionMismatch(
                    "the pairwise conditional-entropy audit needs three subsystems".to_string(),
                ));
            }
            let s_ab = conditional_entropy(&rho, &[0], &[1])?;
            let s_ac = conditional_entropy(&rho, &[0], &[2])?;
            Ok(ClaimResult::inequality(
                claim,
                s_ab + s_ac,
                0.0,
                s_ab + s_ac,
                spec,
            ))
        }
        ClaimId::Eq3 => {
            let rho = input_density(&input);
            let n = rho.space().subsystem_count();
            if n < 3 {
                return Err(Error::DimensionMismatch(
                    "the multiplayer audit needs at least two memories".to_string(),
                ));
            }
            let mut total = 0.0;
            for memory in 1..n {
                total += conditional_entropy(&rho, &[0], &[memory])?;
            }
            Ok(ClaimResult::inequality(claim, total, 0.0, total, spec))
        }
        ClaimId::Eq16 => {
            let rho = input_density(&input);
            if rho.space().subsystem_count() != 2 {
                return Err(Error::DimensionMismatch(
                    "the subadditivity audit needs a bipartite state".to_string(),
                ));
            }
            let s_a = von_neumann_entropy(&rho.partial_trace(&[0])?);
            let s_b = von_neumann_entropy(&rho.partial_trace(&[1])?);
            let s_ab = von_neumann_entropy(&rho);
            let lhs = (s_a - s_b).abs();
            Ok(ClaimResult::inequality(claim, lhs, s_ab, s_ab - lhs, spec))
        }
        ClaimId::Eq6 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            views.require_pair_of_qubits(&views.rho_bc)?;
            let e_f_bc = entanglement_of_formation(&views.rho_bc)?;
            let (j_ba, _) = views.j_and_d(&views.rho_ab, views.s_b)?;
            let lhs = e_f_bc + j_ba;
            Ok(ClaimResult::equality(
                claim,
                lhs,
                views.s_b,
                (lhs - views.s_b).abs(),
                spec,
            ))
        }
        ClaimId::Eq7 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            views.require_pair_of_qubits(&views.rho_bc)?;
            let e_f_bc = entanglement_of_formation(&views.rho_bc)?;
            let (_, d_ba) = views.j_and_d(&views.rho_ab, views.s_b)?;
            let s_b_given_a = von_neumann_entropy(&views.rho_ab) - views.s_a;
            let lhs = d_ba + s_b_given_a;
            Ok(ClaimResult::equality(
                claim,
                lhs,
                e_f_bc,
                (lhs - e_f_bc).abs(),
                spec,
            ))
        }
        ClaimId::Eq8 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            views.gate_negative_conditional_entropy()?;
            views.require_pair_of_qubits(&views.rho_ab)?;
            views.require_pair_of_qubits(&views.rho_ac)?;
            let e_f_ab = entanglement_of_formation(&views.rho_ab)?;
            let e_f_ca = entanglement_of_formation(&views.rho_ac)?;
            let lhs = views.s_b + e_f_ca;
            let rhs = views.s_c + e_f_ab;
            Ok(ClaimResult::inequality(claim, lhs, rhs, rhs - lhs, spec))
        }
        ClaimId::Eq9 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            let (j_ba, d_ba) = views.j_and_d(&views.rho_ab, views.s_b)?;
            let (j_ca, d_ca) = views.j_and_d(&views.rho_ac, views.s_c)?;
            let first = d_ba + j_ca;
            let second = d_ca + j_ba;
            let r1 = (first - views.s_a).abs();
            let r2 = (second - views.s_a).abs();
            let (lhs, residual) = if r1 >= r2 { (first, r1) } else { (second, r2) };
            Ok(ClaimResult::equality(claim, lhs, views.s_a, residual, spec))
        }
        ClaimId::Eq10 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            views.gate_negative_conditional_entropy()?;
            views.require_pair_of_qubits(&views.rho_ab)?;
            views.require_pair_of_qubits(&views.rho_ac)?;
            let e_f_ab = entanglement_of_formation(&views.rho_ab)?;
            let e_f_ac = entanglement_of_formation(&views.rho_ac)?;
            // D(A|B): B becomes the measured party.
            let rho_ba = views.rho_ab.permuted(&[1, 0])?;
            let raw = measured_min(&rho_ba)?;
            let d_ab = views.s_b - von_neumann_entropy(&rho_ba) + raw.value;
            let lower = d_ab - e_f_ac;
            let upper = e_f_ab - d_ab;
            let (lhs, rhs, slack) = if lower <= upper {
                (e_f_ac, d_ab, lower)
            } else {
                (d_ab, e_f_ab, upper)
            };
            Ok(ClaimResult::inequality(claim, lhs, rhs, slack, spec))
        }
        ClaimId::Eq11 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            let (_, d_ba) = views.j_and_d(&views.rho_ab, views.s_b)?;
            let (_, d_ca) = views.j_and_d(&views.rho_ac, views.s_c)?;
            let lhs = views.s_a_given_b();
            let rhs = d_ca - d_ba;
            Ok(ClaimResult::equality(claim, lhs, rhs, (lhs - rhs).abs(), spec))
        }
        ClaimId::Eq14 => {
            let psi = expect_pure(&input)?;
            let views = TripartiteViews::build(psi)?;
            let e_a = entanglement_of_assistance(psi, (1, 2), 0)?.value;
            let e_u = unlocalizable_entanglement(&views.rho_ab)?;
            let lhs = e_a + e_u;
            Ok(ClaimResult::equality(
                claim,
                lhs,
                views.s_b,
                (lhs - views.s_b).abs(),
                spec,
            ))
        }
        ClaimId::Eq15 => {
            let psi = expect_pure(&input)?;
            let views = TripartiteViews::build(psi)?;
            let e_a = entanglement_of_assistance(psi, (1, 2), 0)?.value;
            let raw = measured_max(&views.rho_ab)?;
            let delta_u = views.s_a - von_neumann_entropy(&views.rho_ab) + raw.value;
            let s_b_given_a = von_neumann_entropy(&views.rho_ab) - views.s_a;
            let lhs = delta_u + s_b_given_a;
            Ok(ClaimResult::equality(claim, lhs, e_a, (lhs - e_a).abs(), spec))
        }
        ClaimId::Eq17Case => Err(Error::NotApplicable(
            "factorization metadata required; use check_factorization_case".to_string(),
        )),
        ClaimId::Prop1 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            views.gate_negative_conditional_entropy()?;
            views.require_pair_of_qubits(&views.rho_ab)?;
            views.require_pair_of_qubits(&views.rho_ac)?;
            let (j_ba, d_ba) = views.j_and_d(&views.rho_ab, views.s_b)?;
            let (j_ca, d_ca) = views.j_and_d(&views.rho_ac, views.s_c)?;
            let e_f_ab = entanglement_of_formation(&views.rho_ab)?;
            let e_f_ac = entanglement_of_formation(&views.rho_ac)?;
            let gaps = [d_ba - d_ca, j_ba - j_ca, e_f_ab - e_f_ac];
            let slack = gaps.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(ClaimResult::inequality(
                claim,
                slack,
                0.0,
                slack,
                spec,
            ))
        }
        ClaimId::Prop2 => {
            let views = TripartiteViews::build(expect_pure(&input)?)?;
            views.gate_negative_conditional_entropy()?;
            // E_u and delta_u on each side share one maximization.
            let raw_b = measured_max(&views.rho_ab)?;
            let raw_c = measured_max(&views.rho_ac)?;
            let e_u_ba = views.s_b - raw_b.value;
            let e_u_ca = views.s_c - raw_c.value;
            let delta_ba = views.s_a - von_neumann_entropy(&views.rho_ab) + raw_b.value;
            let delta_ca = views.s_a - von_neumann_entropy(&views.rho_ac) + raw_c.value;
            let gaps = [e_u_ba - e_u_ca, delta_ba - delta_ca];
            let slack = gaps.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(ClaimResult::inequality(claim, slack, 0.0, slack, spec))
        }
    }
}

/// Verify the factorized-state consequences: S(A|B) = -S(rho_A) at the exact
/// tier, and on the canonical purification D(B|A) = J(B|A) = S(rho_A) with
/// D(C|A) = J(C|A) = 0 at the optimizer tier.
pub fn check_factorization_case(fs: &FactorizedState, spec: StateSpec) -> Result<ClaimResult> {
    let rho_ab = &fs.rho_ab;
    let s_a = von_neumann_entropy(&rho_ab.partial_trace(&[0])?);
    let s_a_given_b = conditional_entropy(rho_ab, &[0], &[1])?;
    let exact_part = (s_a_given_b + s_a).abs();

    let psi = purify(rho_ab);
    let rho_ac = psi.partial_trace(&[0, 2])?;
    let s_b = von_neumann_entropy(&rho_ab.partial_trace(&[1])?);
    let s_c = von_neumann_entropy(&rho_ac.partial_trace(&[1])?);

    let raw_ab = measured_min(rho_ab)?;
    let j_ba = s_b - raw_ab.value;
    let d_ba = s_a - von_neumann_entropy(rho_ab) + raw_ab.value;
    let raw_ac = measured_min(&rho_ac)?;
    let j_ca = s_c - raw_ac.value;
    let d_ca = s_a - von_neumann_entropy(&rho_ac) + raw_ac.value;

    let opt_part = [
        (d_ba - s_a).abs(),
        (j_ba - s_a).abs(),
        d_ca.abs(),
        j_ca.abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let pass = exact_part <= TAU_EXACT && opt_part <= TAU_OPT;
    Ok(ClaimResult {
        claim: ClaimId::Eq17Case,
        lhs: d_ba,
        rhs: s_a,
        residual: exact_part.max(opt_part),
        pass,
        tolerance: TAU_OPT,
        spec,
    })
}

// ---------------------------------------------------------------------------
// Batch audits
// ---------------------------------------------------------------------------

/// Aggregate of one claim over many seeded samples. `worst_residual` is the
/// largest residual for equality claims and the smallest slack for
/// inequality claims, with `worst_spec` reproducing that sample.
#[derive(Clone, Debug)]
pub struct BatchSummary {
    pub claim: ClaimId,
    pub n: usize,
    pub passes: usize,
    pub failures: usize,
    pub not_applicable: usize,
    pub worst_residual: Option<f64>,
    pub worst_spec: Option<StateSpec>,
}

enum SampleOutcome {
    Done(ClaimResult),
    NotApplicable,
}

fn sample_for_claim(
    claim: ClaimId,
    dims: &[usize],
    seed: u64,
    index: usize,
) -> Result<(BuiltState, StateSpec)> {
    let stream = index as u64;
    let total: usize = dims.iter().product();
    let pure_spec = StateSpec::haar_pure(dims, seed, stream);
    let mixed_spec = StateSpec::random_mixed(dims, total, seed, stream);
    match claim {
        // Pure tripartite claims.
        ClaimId::Eq6
        | ClaimId::Eq7
        | ClaimId::Eq8
        | ClaimId::Eq9
        | ClaimId::Eq10
        | ClaimId::Eq11
        | ClaimId::Eq14
        | ClaimId::Eq15
        | ClaimId::Prop1
        | ClaimId::Prop2 => Ok((
            BuiltState::Pure(sample_haar_pure_stream(dims, seed, stream)?),
            pure_spec,
        )),
        // Alternating pure and full-rank mixed samples.
        ClaimId::Eq1Slack | ClaimId::Eq2 | ClaimId::Eq3 => {
            if index % 2 == 0 {
                Ok((
                    BuiltState::Pure(sample_haar_pure_stream(dims, seed, stream)?),
                    pure_spec,
                ))
            } else {
                Ok((
                    BuiltState::Mixed(sample_random_mixed_stream(dims, total, seed, stream)?),
                    mixed_spec,
                ))
            }
        }
        ClaimId::Eq16 => Ok((
            BuiltState::Mixed(sample_random_mixed_stream(dims, total, seed, stream)?),
            mixed_spec,
        )),
        ClaimId::Eq17Case => {
            let spec = StateSpec {
                seed: Some(seed),
                stream: Some(stream),
                ..StateSpec::family(StateFamily::Factorized)
            };
            Ok((spec.realize()?, spec))
        }
    }
}

fn run_one_sample(claim: ClaimId, dims: &[usize], seed: u64, index: usize) -> Result<SampleOutcome> {
    let (built, spec) = sample_for_claim(claim, dims, seed, index)?;
    let result = match &built {
        BuiltState::Factorized(fs) => check_factorization_case(fs, spec),
        BuiltState::Pure(psi) => audit_claim(claim, AuditInput::Pure(psi), None, spec),
        BuiltState::Mixed(rho) => audit_claim(claim, AuditInput::Mixed(rho), None, spec),
    };
    match result {
        Ok(res) => Ok(SampleOutcome::Done(res)),
        Err(Error::NotApplicable(_)) => Ok(SampleOutcome::NotApplicable),
        Err(e) => Err(e),
    }
}

/// Audit one claim over `n_samples` seeded random states. Samples run in
/// parallel; aggregation is by sample index, so the summary is independent
/// of scheduling.
pub fn audit_random_batch(
    claim: ClaimId,
    n_samples: usize,
    dims: &[usize],
    seed: u64,
) -> Result<BatchSummary> {
    if n_samples == 0 {
        return Err(Error::ParamOutOfRange(
            "batch audits need at least one sample".to_string(),
        ));
    }
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|index| run_one_sample(claim, dims, seed, index))
        .collect::<Result<Vec<_>>>()?;

    let mut summary = BatchSummary {
        claim,
        n: n_samples,
        passes: 0,
        failures: 0,
        not_applicable: 0,
        worst_residual: None,
        worst_spec: None,
    };
    for outcome in outcomes {
        match outcome {
            SampleOutcome::NotApplicable => summary.not_applicable += 1,
            SampleOutcome::Done(result) => {
                if result.pass {
                    summary.passes += 1;
                } else {
                    summary.failures += 1;
                }
                let worse = match summary.worst_residual {
                    None => true,
                    Some(current) => {
                        if claim.is_equality() {
                            result.residual > current
                        } else {
                            result.residual < current
                        }
                    }
                };
                if worse {
                    summary.worst_residual = Some(result.residual);
                    summary.worst_spec = Some(result.spec.clone());
                }
            }
        }
    }
    Ok(summary)
}

// ---------------------------------------------------------------------------
// Sweep and threshold landmarks
// ---------------------------------------------------------------------------

/// One point of the theta sweep over the generalized W family.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub theta_over_pi: f64,
    pub s_a_given_b: f64,
    pub d_b_given_a: f64,
    pub d_c_given_a: f64,
    /// Central-difference derivative of D(B|A) with respect to theta/pi.
    pub derivative_d_b: f64,
    /// Central-difference derivative of D(C|A) with respect to theta/pi.
    pub derivative_d_c: f64,
}

/// Sweep theta/pi over [0, 1] on a uniform grid for the generalized W family
/// at fixed phi, computing S(A|B), both discords, and the discord
/// derivatives. Points are computed in parallel and returned in grid order.
pub fn sweep_w_family(phi: f64, n_points: usize) -> Result<Vec<SweepPoint>> {
    if n_points < 16 {
        return Err(Error::ParamOutOfRange(format!(
            "sweep needs at least 16 points, got {n_points}"
        )));
    }
    let step = 1.0 / (n_points - 1) as f64;
    let raw: Vec<(f64, f64, f64, f64)> = (0..n_points)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64, f64, f64)> {
            let x = k as f64 * step;
            let psi = w_purification(x * std::f64::consts::PI, phi);
            let rho_ab = psi.partial_trace(&[0, 1])?;
            let rho_ac = psi.partial_trace(&[0, 2])?;
            let s = conditional_entropy(&rho_ab, &[0], &[1])?;
            let s_a = von_neumann_entropy(&rho_ab.partial_trace(&[0])?);
            let raw_ab = measured_min(&rho_ab)?;
            let d_b = s_a - von_neumann_entropy(&rho_ab) + raw_ab.value;
            let raw_ac = measured_min(&rho_ac)?;
            let d_c = s_a - von_neumann_entropy(&rho_ac) + raw_ac.value;
            Ok((x, s, d_b, d_c))
        })
        .collect::<Result<Vec<_>>>()?;

    let derivative = |values: &dyn Fn(usize) -> f64, k: usize| -> f64 {
        if k == 0 {
            (values(1) - values(0)) / step
        } else if k == n_points - 1 {
            (values(k) - values(k - 1)) / step
        } else {
            (values(k + 1) - values(k - 1)) / (2.0 * step)
        }
    };

    Ok((0..n_points)
        .map(|k| SweepPoint {
            theta_over_pi: raw[k].0,
            s_a_given_b: raw[k].1,
            d_b_given_a: raw[k].2,
            d_c_given_a: raw[k].3,
            derivative_d_b: derivative(&|i| raw[i].2, k),
            derivative_d_c: derivative(&|i| raw[i].3, k),
        })
        .collect())
}

/// Locate the landmark where the discord derivative curves intersect on
/// theta/pi in (0, 0.5): the sign change of d S(A|B) / d(theta/pi), which by
/// the competition identity is the same crossing. Returns the bracketing
/// grid interval.
pub fn detect_crossing(points: &[SweepPoint]) -> Option<(f64, f64)> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len();
    let ds = |k: usize| -> f64 {
        if k == 0 {
            (points[1].s_a_given_b - points[0].s_a_given_b)
                / (points[1].theta_over_pi - points[0].theta_over_pi)
        } else if k == n - 1 {
            (points[k].s_a_given_b - points[k - 1].s_a_given_b)
                / (points[k].theta_over_pi - points[k - 1].theta_over_pi)
        } else {
            (points[k + 1].s_a_given_b - points[k - 1].s_a_given_b)
                / (points[k + 1].theta_over_pi - points[k - 1].theta_over_pi)
        }
    };
    for k in 0..n - 1 {
        let x0 = points[k].theta_over_pi;
        let x1 = points[k + 1].theta_over_pi;
        if x0 <= 0.0 || x1 >= 0.5 {
            continue;
        }
        if ds(k) > 0.0 && ds(k + 1) <= 0.0 {
            return Some((x0, x1));
        }
    }
    None
}

/// Result of the Werner-threshold search.
#[derive(Clone, Copy, Debug)]
pub struct WernerThreshold {
    pub r_star: f64,
    /// |S(A|B)| at the returned mixing weight.
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection for the mixing weight where S(A|B) of the Werner family crosses
/// zero, to the default interval tolerance 1e-6.
pub fn find_werner_threshold() -> WernerThreshold {
    find_werner_threshold_with_tolerance(1e-6)
}

/// Bisection on r in [0.5, 1] for S(A|B) = 0 to the given interval width.
/// The conditional entropy is positive at 0.5 and negative at 1 and crosses
/// once in between.
pub fn find_werner_threshold_with_tolerance(tol: f64) -> WernerThreshold {
    let s_ab = |r: f64| -> f64 {
        let rho = werner(r).expect("r within [0.5, 1]");
        conditional_entropy(&rho, &[0], &[1]).expect("two qubits")
    };
    let mut lo = 0.5;
    let mut hi = 1.0;
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if s_ab(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let r_star = 0.5 * (lo + hi);
    WernerThreshold {
        r_star,
        residual: s_ab(r_star).abs(),
        iterations,
    }
}
