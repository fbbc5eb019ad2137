//! Constructors for the named state families plus seeded random-state
//! sampling.
//!
//! Sampling uses a counter-based generator (ChaCha12) with one stream per
//! sample index, so parallel and serial audit runs produce identical states
//! and identical `(family, params, seed, stream)` specs rebuild identical
//! states bit for bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::linalg::{tensor, ComplexMatrix, DensityMatrix, HilbertSpace, PureState};
use crate::tolerances::MAX_REGISTERED_DIM;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// (|00> + |11>) / sqrt(2).
pub fn bell() -> PureState {
    let s = 1.0 / 2.0_f64.sqrt();
    PureState::new(
        HilbertSpace::qubits(2).expect("two qubits fit"),
        vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)],
    )
    .expect("normalized")
}

/// (|000> + |111>) / sqrt(2).
pub fn ghz() -> PureState {
    let s = 1.0 / 2.0_f64.sqrt();
    let mut amps = vec![c(0.0, 0.0); 8];
    amps[0] = c(s, 0.0);
    amps[7] = c(s, 0.0);
    PureState::new(HilbertSpace::qubits(3).expect("three qubits fit"), amps).expect("normalized")
}

/// The symmetric W state (|011> + |101> + |110>) / sqrt(3), i.e. the
/// generalized W with equal amplitudes.
pub fn w_state() -> PureState {
    w_purification(2.0_f64.sqrt().atan(), std::f64::consts::FRAC_PI_4)
}

/// Generalized W state
/// sin(theta) cos(phi) |011> + sin(theta) sin(phi) |101> + cos(theta) |110>.
/// Tracing out subsystem 2 reproduces [`w_marginal`] with the same angles.
pub fn w_purification(theta: f64, phi: f64) -> PureState {
    let mut amps = vec![c(0.0, 0.0); 8];
    amps[0b011] = c(theta.sin() * phi.cos(), 0.0);
    amps[0b101] = c(theta.sin() * phi.sin(), 0.0);
    amps[0b110] = c(theta.cos(), 0.0);
    PureState::new(HilbertSpace::qubits(3).expect("three qubits fit"), amps)
        .expect("trigonometric amplitudes are normalized")
}

/// Rank-2 two-qubit mixture
/// sin^2(theta) |Phi><Phi| + cos^2(theta) |11><11| with
/// |Phi> = cos(phi)|01> + sin(phi)|10>; the bipartite marginal of the
/// generalized W family.
pub fn w_marginal(theta: f64, phi: f64) -> DensityMatrix {
    let sin2 = theta.sin() * theta.sin();
    let cos2 = 1.0 - sin2;
    let branch = [c(0.0, 0.0), c(phi.cos(), 0.0), c(phi.sin(), 0.0), c(0.0, 0.0)];
    let mut mat = ComplexMatrix::outer(&branch).scale(sin2);
    mat[(3, 3)] += cos2;
    DensityMatrix::new(HilbertSpace::qubits(2).expect("two qubits fit"), mat)
        .expect("convex mixture of projectors")
}

/// Werner state r |Phi+><Phi+| + (1 - r) I/4 with
/// |Phi+> = (|00> + |11>) / sqrt(2); eigenvalues (1+3r)/4 and (1-r)/4
/// (threefold).
pub fn werner(r: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::ParamOutOfRange(format!(
            "werner mixing weight r = {r} outside [0, 1]"
        )));
    }
    let mat = ComplexMatrix::outer(bell().amplitudes())
        .scale(r)
        .add(&ComplexMatrix::identity(4).scale((1.0 - r) / 4.0));
    DensityMatrix::new(HilbertSpace::qubits(2).expect("two qubits fit"), mat)
}

/// The qubit-qudit example on dimensions (2, 4):
/// (|00>+|12>)(<00|+<12|)/4 + (|01>+|13>)(<01|+<13|)/4.
/// Its conditional entropy S(A|B) equals -1 exactly.
pub fn qubit_qudit_example() -> DensityMatrix {
    let d = 8;
    let mut mat = ComplexMatrix::zeros(d, d);
    // Flat indices on (2, 4): |mu nu> -> mu * 4 + nu.
    for (x, y) in [(0usize, 6usize), (1, 7)] {
        mat[(x, x)] += 0.25;
        mat[(x, y)] += 0.25;
        mat[(y, x)] += 0.25;
        mat[(y, y)] += 0.25;
    }
    DensityMatrix::new(
        HilbertSpace::new(vec![2, 4]).expect("dims (2, 4) fit"),
        mat,
    )
    .expect("two orthogonal branches of weight 1/2")
}

/// A state built as |psi><psi|_{A,BL} (x) rho_BR with the B factors merged
/// into one subsystem; keeps the construction pieces so the factorization
/// consequences can be checked later.
#[derive(Clone, Debug)]
pub struct FactorizedState {
    pub rho_ab: DensityMatrix,
    pub pure_part: PureState,
    pub mixed_part: DensityMatrix,
}

/// Build |psi><psi| (x) rho_br on dimensions (d_A, d_BL * d_BR). The merged
/// B side satisfies S(rho_B) - S(rho_A) = S(rho_AB) exactly, which forces
/// S(A|B) = -S(rho_A).
pub fn factorized(psi_abl: &PureState, rho_br: &DensityMatrix) -> Result<FactorizedState> {
    if psi_abl.space().subsystem_count() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "the pure factor must be bipartite, got {} subsystems",
            psi_abl.space().subsystem_count()
        )));
    }
    if rho_br.space().subsystem_count() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "the mixed factor must be a single subsystem, got {}",
            rho_br.space().subsystem_count()
        )));
    }
    let (d_a, d_bl) = (psi_abl.space().dims()[0], psi_abl.space().dims()[1]);
    let d_br = rho_br.space().dims()[0];
    let mat = tensor(
        &ComplexMatrix::outer(psi_abl.amplitudes()),
        rho_br.matrix(),
    );
    let rho_ab = DensityMatrix::new(HilbertSpace::new(vec![d_a, d_bl * d_br])?, mat)?;
    Ok(FactorizedState {
        rho_ab,
        pure_part: psi_abl.clone(),
        mixed_part: rho_br.clone(),
    })
}

// ---------------------------------------------------------------------------
// Seeded sampling
// ---------------------------------------------------------------------------

pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_vector(n: usize, rng: &mut ChaCha12Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c(re, im)
        })
        .collect()
}

fn check_registered(dims: &[usize]) -> Result<usize> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || total == 0 {
        return Err(Error::DimensionMismatch(
            "sampling needs at least one positive subsystem dimension".to_string(),
        ));
    }
    if total > MAX_REGISTERED_DIM {
        return Err(Error::DimTooLarge {
            total,
            max: MAX_REGISTERED_DIM,
        });
    }
    Ok(total)
}

/// Haar-random pure state on stream 0; see
/// [`sample_haar_pure_stream`] for the stream-indexed variant.
pub fn sample_haar_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    sample_haar_pure_stream(dims, seed, 0)
}

/// Haar-random pure state: a normalized complex-Gaussian vector. Identical
/// (dims, seed, stream) gives bit-identical output.
pub fn sample_haar_pure_stream(dims: &[usize], seed: u64, stream: u64) -> Result<PureState> {
    let total = check_registered(dims)?;
    let mut rng = rng_for(seed, stream);
    let amps = gaussian_vector(total, &mut rng);
    PureState::normalized(HilbertSpace::new(dims.to_vec())?, amps)
}

/// Random mixed state on stream 0; see [`sample_random_mixed_stream`].
pub fn sample_random_mixed(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    sample_random_mixed_stream(dims, rank, seed, 0)
}

/// Random mixed state of the given rank: the partial trace of a Haar-random
/// pure state over a rank-dimensional ancilla. Deterministic per
/// (dims, rank, seed, stream).
pub fn sample_random_mixed_stream(
    dims: &[usize],
    rank: usize,
    seed: u64,
    stream: u64,
) -> Result<DensityMatrix> {
    let total = check_registered(dims)?;
    if rank == 0 || rank > total {
        return Err(Error::ParamOutOfRange(format!(
            "rank {rank} outside 1..={total}"
        )));
    }
    let mut rng = rng_for(seed, stream);
    let mut extended = dims.to_vec();
    extended.push(rank);
    let amps = gaussian_vector(total * rank, &mut rng);
    let psi = PureState::normalized(HilbertSpace::unchecked(extended), amps)?;
    let keep: Vec<usize> = (0..dims.len()).collect();
    psi.partial_trace(&keep)
}

// ---------------------------------------------------------------------------
// State specs
// ---------------------------------------------------------------------------

/// The named state families a [`StateSpec`] can request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateFamily {
    Bell,
    Ghz,
    WGeneralized,
    WMarginal,
    Werner,
    QubitQuditFactorized,
    Factorized,
    HaarPure,
    RandomMixed,
}

impl StateFamily {
    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Bell => "bell",
            StateFamily::Ghz => "ghz",
            StateFamily::WGeneralized => "w_generalized",
            StateFamily::WMarginal => "w_marginal",
            StateFamily::Werner => "werner",
            StateFamily::QubitQuditFactorized => "qubit_qudit_factorized",
            StateFamily::Factorized => "factorized",
            StateFamily::HaarPure => "haar_pure",
            StateFamily::RandomMixed => "random_mixed",
        }
    }
}

impl FromStr for StateFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(StateFamily::Bell),
            "ghz" => Ok(StateFamily::Ghz),
            "w_generalized" => Ok(StateFamily::WGeneralized),
            "w_marginal" => Ok(StateFamily::WMarginal),
            "werner" => Ok(StateFamily::Werner),
            "qubit_qudit_factorized" => Ok(StateFamily::QubitQuditFactorized),
            "factorized" => Ok(StateFamily::Factorized),
            "haar_pure" => Ok(StateFamily::HaarPure),
            "random_mixed" => Ok(StateFamily::RandomMixed),
            other => Err(Error::SpecParse(format!("unknown state family {other:?}"))),
        }
    }
}

/// A parseable description of a state: family plus named parameters. The
/// plain-text form is `family=werner r=0.8`; angles accept a trailing `pi`
/// (e.g. `theta=0.25pi`), dims are written `2x2x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    pub family: StateFamily,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub r: Option<f64>,
    pub dims: Option<Vec<usize>>,
    pub rank: Option<usize>,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
}

impl StateSpec {
    pub fn family(family: StateFamily) -> Self {
        Self {
            family,
            theta: None,
            phi: None,
            r: None,
            dims: None,
            rank: None,
            seed: None,
            stream: None,
        }
    }

    pub fn haar_pure(dims: &[usize], seed: u64, stream: u64) -> Self {
        Self {
            dims: Some(dims.to_vec()),
            seed: Some(seed),
            stream: Some(stream),
            ..Self::family(StateFamily::HaarPure)
        }
    }

    pub fn random_mixed(dims: &[usize], rank: usize, seed: u64, stream: u64) -> Self {
        Self {
            dims: Some(dims.to_vec()),
            rank: Some(rank),
            seed: Some(seed),
            stream: Some(stream),
            ..Self::family(StateFamily::RandomMixed)
        }
    }

    pub fn w_family(theta: f64, phi: f64) -> Self {
        Self {
            theta: Some(theta),
            phi: Some(phi),
            ..Self::family(StateFamily::WGeneralized)
        }
    }

    /// Parse one `key=value` token into this spec.
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "theta" => self.theta = Some(parse_angle(value)?),
            "phi" => self.phi = Some(parse_angle(value)?),
            "r" => self.r = Some(parse_float(value)?),
            "dims" => self.dims = Some(parse_dims(value)?),
            "rank" => self.rank = Some(parse_int(value)? as usize),
            "seed" => self.seed = Some(parse_int(value)?),
            "stream" => self.stream = Some(parse_int(value)?),
            other => {
                return Err(Error::SpecParse(format!(
                    "unknown state parameter {other:?}"
                )))
            }
        }
        Ok(())
    }

    fn require(&self, have: bool, what: &str) -> Result<()> {
        if have {
            Ok(())
        } else {
            Err(Error::SpecParse(format!(
                "family {} needs parameter {what}",
                self.family.name()
            )))
        }
    }

    fn forbid_extras(&self, allowed: &[&str]) -> Result<()> {
        let offered: [(&str, bool); 7] = [
            ("theta", self.theta.is_some()),
            ("phi", self.phi.is_some()),
            ("r", self.r.is_some()),
            ("dims", self.dims.is_some()),
            ("rank", self.rank.is_some()),
            ("seed", self.seed.is_some()),
            ("stream", self.stream.is_some()),
        ];
        for (name, present) in offered {
            if present && !allowed.contains(&name) {
                return Err(Error::SpecParse(format!(
                    "family {} does not take parameter {name}",
                    self.family.name()
                )));
            }
        }
        Ok(())
    }

    /// Build the state this spec describes.
    pub fn realize(&self) -> Result<BuiltState> {
        match self.family {
            StateFamily::Bell => {
                self.forbid_extras(&[])?;
                Ok(BuiltState::Pure(bell()))
            }
            StateFamily::Ghz => {
                self.forbid_extras(&[])?;
                Ok(BuiltState::Pure(ghz()))
            }
            StateFamily::WGeneralized => {
                self.forbid_extras(&["theta", "phi"])?;
                self.require(self.theta.is_some(), "theta")?;
                self.require(self.phi.is_some(), "phi")?;
                Ok(BuiltState::Pure(w_purification(
                    self.theta.unwrap(),
                    self.phi.unwrap(),
                )))
            }
            StateFamily::WMarginal => {
                self.forbid_extras(&["theta", "phi"])?;
                self.require(self.theta.is_some(), "theta")?;
                self.require(self.phi.is_some(), "phi")?;
                Ok(BuiltState::Mixed(w_marginal(
                    self.theta.unwrap(),
                    self.phi.unwrap(),
                )))
            }
            StateFamily::Werner => {
                self.forbid_extras(&["r"])?;
                self.require(self.r.is_some(), "r")?;
                Ok(BuiltState::Mixed(werner(self.r.unwrap())?))
            }
            StateFamily::QubitQuditFactorized => {
                self.forbid_extras(&[])?;
                Ok(BuiltState::Mixed(qubit_qudit_example()))
            }
            StateFamily::Factorized => {
                self.forbid_extras(&["theta", "r", "seed", "stream"])?;
                if let Some(seed) = self.seed {
                    // Random variant: Haar pure part on (2, 2), random rank-2
                    // mixed part on one qubit.
                    let stream = self.stream.unwrap_or(0);
                    let psi = sample_haar_pure_stream(&[2, 2], seed, stream)?;
                    let br = sample_random_mixed_stream(&[2], 2, seed, stream.wrapping_add(1 << 32))?;
                    Ok(BuiltState::Factorized(factorized(&psi, &br)?))
                } else {
                    // Deterministic variant: Schmidt angle theta (default
                    // pi/4, a Bell pair) and diagonal mixed part diag(r, 1-r)
                    // (default maximally mixed).
                    let theta = self.theta.unwrap_or(std::f64::consts::FRAC_PI_4);
                    let r = self.r.unwrap_or(0.5);
                    if !(0.0..=1.0).contains(&r) {
                        return Err(Error::ParamOutOfRange(format!(
                            "factorized weight r = {r} outside [0, 1]"
                        )));
                    }
                    let amps = vec![c(theta.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(theta.sin(), 0.0)];
                    let psi = PureState::new(HilbertSpace::qubits(2)?, amps)?;
                    let mut mat = ComplexMatrix::zeros(2, 2);
                    mat[(0, 0)] = c(r, 0.0);
                    mat[(1, 1)] = c(1.0 - r, 0.0);
                    let br = DensityMatrix::new(HilbertSpace::new(vec![2])?, mat)?;
                    Ok(BuiltState::Factorized(factorized(&psi, &br)?))
                }
            }
            StateFamily::HaarPure => {
                self.forbid_extras(&["dims", "seed", "stream"])?;
                self.require(self.dims.is_some(), "dims")?;
                self.require(self.seed.is_some(), "seed")?;
                Ok(BuiltState::Pure(sample_haar_pure_stream(
                    self.dims.as_ref().unwrap(),
                    self.seed.unwrap(),
                    self.stream.unwrap_or(0),
                )?))
            }
            StateFamily::RandomMixed => {
                self.forbid_extras(&["dims", "rank", "seed", "stream"])?;
                self.require(self.dims.is_some(), "dims")?;
                self.require(self.rank.is_some(), "rank")?;
                self.require(self.seed.is_some(), "seed")?;
                Ok(BuiltState::Mixed(sample_random_mixed_stream(
                    self.dims.as_ref().unwrap(),
                    self.rank.unwrap(),
                    self.seed.unwrap(),
                    self.stream.unwrap_or(0),
                )?))
            }
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    /// Parse the whitespace-separated `key=value` form; the `family` key is
    /// mandatory, e.g. `family=werner r=0.8`.
    fn from_str(s: &str) -> Result<Self> {
        let mut family = None;
        let mut pairs = Vec::new();
        for token in s.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(|| {
                Error::SpecParse(format!("expected key=value, got {token:?}"))
            })?;
            if key == "family" {
                family = Some(StateFamily::from_str(value)?);
            } else {
                pairs.push((key.to_string(), value.to_string()));
            }
        }
        let family =
            family.ok_or_else(|| Error::SpecParse("missing family=<name>".to_string()))?;
        let mut spec = StateSpec::family(family);
        for (key, value) in pairs {
            spec.set(&key, &value)?;
        }
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.family.name())?;
        if let Some(theta) = self.theta {
            write!(f, " theta={}", sig12(theta))?;
        }
        if let Some(phi) = self.phi {
            write!(f, " phi={}", sig12(phi))?;
        }
        if let Some(r) = self.r {
            write!(f, " r={}", sig12(r))?;
        }
        if let Some(dims) = &self.dims {
            let text: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
            write!(f, " dims={}", text.join("x"))?;
        }
        if let Some(rank) = self.rank {
            write!(f, " rank={rank}")?;
        }
        if let Some(seed) = self.seed {
            write!(f, " seed={seed}")?;
        }
        if let Some(stream) = self.stream {
            write!(f, " stream={stream}")?;
        }
        Ok(())
    }
}

/// A realized state: pure, mixed, or factorized-with-metadata.
#[derive(Clone, Debug)]
pub enum BuiltState {
    Pure(PureState),
    Mixed(DensityMatrix),
    Factorized(FactorizedState),
}

impl BuiltState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            BuiltState::Pure(psi) => psi.density(),
            BuiltState::Mixed(rho) => rho.clone(),
            BuiltState::Factorized(fs) => fs.rho_ab.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            BuiltState::Pure(psi) => Some(psi),
            _ => None,
        }
    }
}

/// Parse a float that may carry a trailing `pi`, e.g. `0.25pi` or `pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    if let Some(prefix) = s.strip_suffix("pi") {
        let factor = if prefix.is_empty() {
            1.0
        } else {
            parse_float(prefix)?
        };
        Ok(factor * std::f64::consts::PI)
    } else {
        parse_float(s)
    }
}

fn parse_float(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::SpecParse(format!("expected a number, got {s:?}")))
}

fn parse_int(s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| Error::SpecParse(format!("expected an integer, got {s:?}")))
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split('x')
        .map(|part| {
            part.parse::<usize>()
                .map_err(|_| Error::SpecParse(format!("bad dims component {part:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{binary_entropy, conditional_entropy, von_neumann_entropy};

    #[test]
    fn w_marginal_matches_direct_mixture() {
        // theta = pi/4 gives equal weights on the two branches.
        let theta = std::f64::consts::FRAC_PI_4;
        let phi = std::f64::consts::FRAC_PI_4;
        let rho = w_marginal(theta, phi);
        let spectrum = rho.spectrum();
        assert!((spectrum[0] - 0.5).abs() < 1e-12);
        assert!((spectrum[1] - 0.5).abs() < 1e-12);
        assert_eq!(rho.rank(), 2);

        // Pure branch at theta = pi/2.
        let pure = w_marginal(std::f64::consts::FRAC_PI_2, phi);
        assert_eq!(pure.rank(), 1);

        // theta = 0 pins |11>.
        let pinned = w_marginal(0.0, phi);
        assert!((pinned.matrix()[(3, 3)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn w_purification_traces_to_the_marginal() {
        for (i, theta) in [0.0, 0.25 * std::f64::consts::PI, 1.3, 2.9].iter().enumerate() {
            for (j, phi) in [0.3, std::f64::consts::FRAC_PI_4, 2.0, 5.5].iter().enumerate() {
                let psi = w_purification(*theta, *phi);
                let traced = psi.partial_trace(&[0, 1]).unwrap();
                let direct = w_marginal(*theta, *phi);
                assert!(
                    traced.matrix().max_abs_diff(direct.matrix()) < 1e-10,
                    "marginal mismatch at grid point ({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn w_state_has_equal_amplitudes() {
        let psi = w_state();
        let expected = 1.0 / 3.0_f64.sqrt();
        for idx in [0b011, 0b101, 0b110] {
            assert!((psi.amplitudes()[idx].re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_limits_and_spectrum() {
        let bell_like = werner(1.0).unwrap();
        assert!(bell_like
            .matrix()
            .max_abs_diff(&ComplexMatrix::outer(bell().amplitudes()))
            < 1e-12);
        let mixed = werner(0.0).unwrap();
        assert!(mixed
            .matrix()
            .max_abs_diff(&ComplexMatrix::identity(4).scale(0.25))
            < 1e-12);
        let r = 0.6;
        let spectrum = werner(r).unwrap().spectrum().to_vec();
        assert!((spectrum[0] - (1.0 + 3.0 * r) / 4.0).abs() < 1e-12);
        for &l in &spectrum[1..] {
            assert!((l - (1.0 - r) / 4.0).abs() < 1e-12);
        }
        assert!(werner(1.5).is_err());
    }

    #[test]
    fn qubit_qudit_example_properties() {
        let rho = qubit_qudit_example();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert_eq!(rho.rank(), 2);
        let s = conditional_entropy(&rho, &[0], &[1]).unwrap();
        assert!((s + 1.0).abs() < 1e-9);
    }

    #[test]
    fn factorized_state_entropy_identity() {
        // Schmidt weights (0.75, 0.25) and diag(0.6, 0.4) mixed part:
        // S(A|B) = -h(0.75).
        let theta = 0.75_f64.sqrt().acos();
        let spec: StateSpec = format!("family=factorized theta={theta} r=0.6")
            .parse()
            .unwrap();
        let BuiltState::Factorized(fs) = spec.realize().unwrap() else {
            panic!("expected factorized")
        };
        let s_ab = conditional_entropy(&fs.rho_ab, &[0], &[1]).unwrap();
        assert!((s_ab + binary_entropy(0.75)).abs() < 1e-9);

        let s_a = von_neumann_entropy(&fs.rho_ab.partial_trace(&[0]).unwrap());
        let s_b = von_neumann_entropy(&fs.rho_ab.partial_trace(&[1]).unwrap());
        let s_joint = von_neumann_entropy(&fs.rho_ab);
        assert!((s_b - s_a - s_joint).abs() < 1e-9);
    }

    #[test]
    fn factorized_bell_half_reproduces_qubit_qudit_example() {
        // Bell pure part with a maximally mixed qubit attached matches the
        // (2, 4) example up to basis relabeling: same spectrum, same
        // conditional entropy.
        let spec: StateSpec = "family=factorized".parse().unwrap();
        let BuiltState::Factorized(fs) = spec.realize().unwrap() else {
            panic!("expected factorized")
        };
        assert_eq!(fs.rho_ab.space().dims(), &[2, 4]);
        let s = conditional_entropy(&fs.rho_ab, &[0], &[1]).unwrap();
        assert!((s + 1.0).abs() < 1e-9);
        let example = qubit_qudit_example();
        for (a, b) in fs
            .rho_ab
            .spectrum()
            .iter()
            .zip(example.spectrum().iter())
        {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_sampling_is_deterministic() {
        let a = sample_haar_pure(&[2, 2], 7).unwrap();
        let b = sample_haar_pure(&[2, 2], 7).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        let c = sample_haar_pure_stream(&[2, 2], 7, 1).unwrap();
        assert_ne!(a.amplitudes(), c.amplitudes());
        let norm: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_marginal_moment() {
        // Mean of |amplitude_0|^2 over a single qubit is 1/2.
        let n = 10_000;
        let mut total = 0.0;
        for stream in 0..n {
            let psi = sample_haar_pure_stream(&[2], 99, stream).unwrap();
            total += psi.amplitudes()[0].norm_sqr();
        }
        let mean = total / n as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean was {mean}");
    }

    #[test]
    fn random_mixed_rank_and_determinism() {
        let rho = sample_random_mixed(&[2, 2], 1, 3).unwrap();
        assert_eq!(rho.rank(), 1);
        let again = sample_random_mixed(&[2, 2], 1, 3).unwrap();
        assert!(rho.matrix().max_abs_diff(again.matrix()) == 0.0);
        assert!(sample_random_mixed(&[2, 2], 5, 3).is_err());
        assert!(sample_random_mixed(&[2; 7], 2, 3).is_err());
    }

    #[test]
    fn random_mixed_purity_matches_induced_measure() {
        // Full-rank induced measure on dimension d has mean purity
        // 2d / (d^2 + 1); Monte Carlo over seeded streams as the oracle.
        let d = 2;
        let n = 4000;
        let mut total = 0.0;
        for stream in 0..n {
            let rho = sample_random_mixed_stream(&[2], d, 1234, stream).unwrap();
            total += rho.purity();
        }
        let mean = total / n as f64;
        let expected = 2.0 * d as f64 / ((d * d) as f64 + 1.0);
        assert!((mean - expected).abs() < 0.02, "mean purity {mean}");
    }

    #[test]
    fn spec_round_trip_and_errors() {
        let spec: StateSpec = "family=haar_pure dims=2x2x2 seed=42 stream=17"
            .parse()
            .unwrap();
        let text = spec.to_string();
        let back: StateSpec = text.parse().unwrap();
        assert_eq!(spec, back);

        assert!("family=nope".parse::<StateSpec>().is_err());
        assert!("noequals".parse::<StateSpec>().is_err());
        assert!("family=werner".parse::<StateSpec>().unwrap().realize().is_err());
        assert!("family=bell r=0.5"
            .parse::<StateSpec>()
            .unwrap()
            .realize()
            .is_err());
        assert!("family=werner r=2.0"
            .parse::<StateSpec>()
            .unwrap()
            .realize()
            .is_err());
    }

    #[test]
    fn angle_suffix_parsing() {
        assert!((parse_angle("0.25pi").unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((parse_angle("pi").unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!((parse_angle("1.5").unwrap() - 1.5).abs() < 1e-15);
        assert!(parse_angle("xpi").is_err());
    }

    #[test]
    fn spec_realize_matches_direct_constructors() {
        let spec: StateSpec = "family=w_generalized theta=0.25pi phi=0.25pi".parse().unwrap();
        let BuiltState::Pure(psi) = spec.realize().unwrap() else {
            panic!("expected pure")
        };
        let direct = w_purification(std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4);
        assert_eq!(psi.amplitudes(), direct.amplitudes());
    }
}
