//! Single-mode truncated Fock space toys.
//!
//! The regularized Hamiltonian is
//!
//! `H(ε) = ω(n̂ + ½) + g(ε)·V(a + a†) + c(ε)·I`
//!
//! on the span of `|0⟩ … |N−1⟩`. Transition probabilities come from exact
//! spectral evolution; [`dyson_partial_sums`] computes the perturbation series
//! in `g` for comparison. The coupling `g` and counterterm `c` are
//! [`GenNumber`]s, so they may grow without bound as ε → 0.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::{classify_samples, AsymptoticClass, EpsilonGrid, Samples, Thresholds, Verdict};
use crate::error::{Error, Result};
use crate::gf::{Epsilon, GenNumber};

pub type C64 = Complex<f64>;

/// Probabilities may leave [0, 1] by at most this much before it is an error.
pub const PROBABILITY_SLACK: f64 = 1e-12;
pub const MAX_DYSON_ORDER: usize = 16;
pub const MIN_TIME_STEPS: usize = 1000;
pub const MAX_POTENTIAL_DEGREE: usize = 6;
const NORM_TOL: f64 = 1e-12;
const DIVERGENCE_FACTOR: f64 = 10.0;
const EIGEN_MAX_ITER: usize = 100_000;

/// `(a, a†)` on the first `n` number states.
pub fn ladder_matrices(n: usize) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Fock dimension must be at least 2, got {n}")));
    }
    let lowering = DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let raising = lowering.adjoint();
    Ok((lowering, raising))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSpec {
    dimension: usize,
    omega: f64,
}

impl FockSpec {
    /// `omega = 0` is allowed: it leaves only the interaction (two-level Rabi).
    pub fn new(dimension: usize, omega: f64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidArgument(format!("Fock dimension must be at least 2, got {dimension}")));
        }
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::InvalidArgument(format!("omega must be finite and non-negative, got {omega}")));
        }
        Ok(Self { dimension, omega })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `Σ c_k X^k` with `X = a + a†`, computed on the truncated matrices.
    Polynomial(Vec<f64>),
    /// Entries `(i, j, v)`; the mirrored entry `(j, i)` is implied.
    Explicit(Vec<(usize, usize, f64)>),
}

impl Potential {
    pub fn position() -> Self {
        Potential::Polynomial(vec![0.0, 1.0])
    }

    pub fn quartic() -> Self {
        Potential::Polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0])
    }

    /// Couples levels 0 and 1 only.
    pub fn two_level() -> Self {
        Potential::Explicit(vec![(0, 1, 1.0)])
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Potential::Polynomial(c) => c.iter().rposition(|&v| v != 0.0),
            Potential::Explicit(_) => None,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Potential::Polynomial(c) => {
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidArgument("potential coefficients must be finite".into()));
                }
                if let Some(d) = self.degree() {
                    if d > MAX_POTENTIAL_DEGREE {
                        return Err(Error::InvalidArgument(format!(
                            "potential degree {d} exceeds {MAX_POTENTIAL_DEGREE}"
                        )));
                    }
                }
            }
            Potential::Explicit(entries) => {
                for &(i, j, v) in entries {
                    if i >= n || j >= n {
                        return Err(Error::InvalidArgument(format!(
                            "potential entry ({i}, {j}) outside dimension {n}"
                        )));
                    }
                    if !v.is_finite() {
                        return Err(Error::InvalidArgument(format!("potential entry ({i}, {j}) is {v}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self, n: usize) -> Result<DMatrix<C64>> {
        self.validate(n)?;
        let zero = C64::new(0.0, 0.0);
        match self {
            Potential::Polynomial(coeffs) => {
                let (a, ad) = ladder_matrices(n)?;
                let x = a + ad;
                let mut acc = DMatrix::from_element(n, n, zero);
                let top = self.degree().unwrap_or(0);
                for &c in coeffs[..=top.min(coeffs.len().saturating_sub(1))].iter().rev() {
                    acc = &acc * &x;
                    for i in 0..n {
                        acc[(i, i)] += c;
                    }
                }
                Ok(acc)
            }
            Potential::Explicit(entries) => {
                let mut m = DMatrix::from_element(n, n, zero);
                for &(i, j, v) in entries {
                    m[(i, j)] += v;
                    if i != j {
                        m[(j, i)] += v;
                    }
                }
                Ok(m)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct InteractionSpec {
    pub potential: Potential,
    pub coupling: GenNumber,
    pub counterterm: Option<GenNumber>,
}

impl InteractionSpec {
    pub fn new(potential: Potential, coupling: GenNumber) -> Self {
        Self { potential, coupling, counterterm: None }
    }

    pub fn with_counterterm(mut self, counterterm: GenNumber) -> Self {
        self.counterterm = Some(counterterm);
        self
    }

    fn scalars(&self, eps: Epsilon) -> Result<(f64, f64)> {
        let g = finite_scalar("coupling", &self.coupling, eps)?;
        let c = match &self.counterterm {
            Some(ct) => finite_scalar("counterterm", ct, eps)?,
            None => 0.0,
        };
        Ok((g, c))
    }
}

fn finite_scalar(what: &'static str, g: &GenNumber, eps: Epsilon) -> Result<f64> {
    let value = g.at(eps)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteCoupling { what, eps: eps.value(), value })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Amplitudes must already have unit norm.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(amplitudes)?;
        let norm = state.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(Self { amplitudes: state.amplitudes.unscale(norm) })
    }

    pub fn basis(dimension: usize, n: usize) -> Result<Self> {
        if n >= dimension {
            return Err(Error::InvalidArgument(format!("basis state {n} outside dimension {dimension}")));
        }
        let mut amplitudes = DVector::from_element(dimension, C64::new(0.0, 0.0));
        amplitudes[n] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    fn unchecked(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state has no amplitudes".into()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("state amplitudes must be finite".into()));
        }
        Ok(Self { amplitudes: DVector::from_vec(amplitudes) })
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Zero-padded, or truncated when the dropped amplitudes are all zero.
    pub fn resized(&self, dimension: usize) -> Result<Self> {
        let n = self.dimension();
        if dimension < n && self.amplitudes.rows(dimension, n - dimension).iter().any(|a| a.norm() != 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate state to dimension {dimension} without losing amplitude"
            )));
        }
        let amplitudes = DVector::from_fn(dimension, |i, _| {
            if i < n {
                self.amplitudes[i]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Ok(Self { amplitudes })
    }
}

#[derive(Debug, Clone)]
pub struct TransitionProblem {
    fock: FockSpec,
    interaction: InteractionSpec,
    initial: StateVector,
    final_state: StateVector,
    time: f64,
}

impl TransitionProblem {
    pub fn new(
        fock: FockSpec,
        interaction: InteractionSpec,
        initial: StateVector,
        final_state: StateVector,
        time: f64,
    ) -> Result<Self> {
        let n = fock.dimension();
        if initial.dimension() != n || final_state.dimension() != n {
            return Err(Error::InvalidArgument(format!(
                "state dimensions {} and {} do not match Fock dimension {n}",
                initial.dimension(),
                final_state.dimension()
            )));
        }
        if !time.is_finite() {
            return Err(Error::InvalidArgument(format!("time must be finite, got {time}")));
        }
        interaction.potential.validate(n)?;
        Ok(Self { fock, interaction, initial, final_state, time })
    }

    /// Two-level Rabi problem `H = g σx` embedded at `dimension`, |0⟩ → |1⟩.
    pub fn rabi(g: f64, time: f64, dimension: usize) -> Result<Self> {
        Self::new(
            FockSpec::new(dimension, 0.0)?,
            InteractionSpec::new(Potential::two_level(), GenNumber::constant(g)),
            StateVector::basis(dimension, 0)?,
            StateVector::basis(dimension, 1)?,
            time,
        )
    }

    /// `V = a + a†`, vacuum persistence.
    pub fn displaced_oscillator(dimension: usize, omega: f64, g: f64, time: f64) -> Result<Self> {
        Self::vacuum_problem(dimension, omega, Potential::position(), GenNumber::constant(g), time)
    }

    /// `V = (a + a†)^4`, vacuum persistence.
    pub fn quartic(dimension: usize, omega: f64, coupling: GenNumber, time: f64) -> Result<Self> {
        Self::vacuum_problem(dimension, omega, Potential::quartic(), coupling, time)
    }

    fn vacuum_problem(
        dimension: usize,
        omega: f64,
        potential: Potential,
        coupling: GenNumber,
        time: f64,
    ) -> Result<Self> {
        Self::new(
            FockSpec::new(dimension, omega)?,
            InteractionSpec::new(potential, coupling),
            StateVector::basis(dimension, 0)?,
            StateVector::basis(dimension, 0)?,
            time,
        )
    }

    pub fn fock(&self) -> FockSpec {
        self.fock
    }

    pub fn interaction(&self) -> &InteractionSpec {
        &self.interaction
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn final_state(&self) -> &StateVector {
        &self.final_state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_counterterm(mut self, counterterm: GenNumber) -> Self {
        self.interaction.counterterm = Some(counterterm);
        self
    }

    pub fn with_time(mut self, time: f64) -> Result<Self> {
        if !time.is_finite() {
            return Err(Error::InvalidArgument(format!("time must be finite, got {time}")));
        }
        self.time = time;
        Ok(self)
    }

    pub fn with_final_state(mut self, final_state: StateVector) -> Result<Self> {
        if final_state.dimension() != self.fock.dimension() {
            return Err(Error::InvalidArgument("final state dimension mismatch".into()));
        }
        self.final_state = final_state;
        Ok(self)
    }

    pub fn with_dimension(&self, dimension: usize) -> Result<Self> {
        Self::new(
            FockSpec::new(dimension, self.fock.omega())?,
            self.interaction.clone(),
            self.initial.resized(dimension)?,
            self.final_state.resized(dimension)?,
            self.time,
        )
    }
}

fn symmetrize(h: DMatrix<C64>) -> DMatrix<C64> {
    let adj = h.adjoint();
    (h + adj) * C64::new(0.5, 0.0)
}

/// Diagonal of the free part, `ω(n + ½) + c(ε)`.
fn free_energies(fock: &FockSpec, counterterm: f64) -> Vec<f64> {
    (0..fock.dimension()).map(|n| fock.omega() * (n as f64 + 0.5) + counterterm).collect()
}

pub fn build_hamiltonian(fock: &FockSpec, interaction: &InteractionSpec, eps: Epsilon) -> Result<DMatrix<C64>> {
    let (g, c) = interaction.scalars(eps)?;
    let mut h = interaction.potential.matrix(fock.dimension())? * C64::new(g, 0.0);
    for (i, e) in free_energies(fock, c).into_iter().enumerate() {
        h[(i, i)] += e;
    }
    Ok(symmetrize(h))
}

/// Eigendecomposition of a Hermitian matrix, reusable across times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Propagator {
    pub fn new(h: &DMatrix<C64>) -> Result<Self> {
        let n = h.nrows();
        if n == 0 || h.ncols() != n {
            return Err(Error::InvalidArgument(format!("Hamiltonian must be square, got {}x{}", n, h.ncols())));
        }
        let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, EIGEN_MAX_ITER).ok_or(Error::Eigensolver(n))?;
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::Eigensolver(n));
        }
        Ok(Self { eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors })
    }

    /// Unsorted, in the eigensolver's order.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues.min()
    }

    /// `exp(−iHt)·ψ₀`
    pub fn evolve(&self, t: f64, psi0: &StateVector) -> Result<StateVector> {
        if psi0.dimension() != self.eigenvalues.len() {
            return Err(Error::InvalidArgument(format!(
                "state dimension {} does not match Hamiltonian dimension {}",
                psi0.dimension(),
                self.eigenvalues.len()
            )));
        }
        if t == 0.0 {
            return Ok(psi0.clone());
        }
        let mut c = self.eigenvectors.ad_mul(psi0.amplitudes());
        for (ck, &lambda) in c.iter_mut().zip(self.eigenvalues.iter()) {
            *ck *= C64::from_polar(1.0, -lambda * t);
        }
        Ok(StateVector { amplitudes: &self.eigenvectors * c })
    }
}

pub fn evolve(h: &DMatrix<C64>, t: f64, psi0: &StateVector) -> Result<StateVector> {
    Propagator::new(h)?.evolve(t, psi0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub amplitude: C64,
    pub probability: f64,
    /// `|‖ψ(t)‖ − ‖ψ(0)‖|`
    pub unitarity_defect: f64,
}

fn evolved(problem: &TransitionProblem, eps: Epsilon) -> Result<(StateVector, f64)> {
    let h = build_hamiltonian(&problem.fock, &problem.interaction, eps)?;
    let psi = Propagator::new(&h)?.evolve(problem.time, &problem.initial)?;
    let defect = (psi.norm() - problem.initial.norm()).abs();
    Ok((psi, defect))
}

fn checked_probability(p: f64) -> Result<f64> {
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

pub fn transition(problem: &TransitionProblem, eps: Epsilon) -> Result<Transition> {
    let (psi, unitarity_defect) = evolved(problem, eps)?;
    let amplitude = problem.final_state.inner(&psi);
    let probability = checked_probability(amplitude.norm_sqr())?;
    Ok(Transition { amplitude, probability, unitarity_defect })
}

pub fn transition_probability(problem: &TransitionProblem, eps: Epsilon) -> Result<f64> {
    Ok(transition(problem, eps)?.probability)
}

/// Probability of each number state at the final time.
pub fn final_distribution(problem: &TransitionProblem, eps: Epsilon) -> Result<Vec<f64>> {
    let (psi, _) = evolved(problem, eps)?;
    psi.amplitudes.iter().map(|a| checked_probability(a.norm_sqr())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DysonOrder {
    pub order: usize,
    pub amplitude: C64,
    /// `|partial sum|²`, deliberately unclamped.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DysonSeries {
    pub partial_sums: Vec<DysonOrder>,
    pub exact_amplitude: C64,
    pub exact_probability: f64,
    /// First order whose partial sum exceeds 10× the exact amplitude in
    /// modulus or gives a probability above 1.
    pub first_divergence_order: Option<usize>,
    pub time_steps: usize,
}

/// Partial sums of the Dyson series for `⟨final| e^{−iHt} |initial⟩` in powers
/// of the coupling.
///
/// The free part `H₀ = ω(n + ½) + c(ε)` is diagonal, so the interaction
/// picture is a matter of phases. Each order is obtained from the previous one
/// by `ψ_k(t) = −i ∫₀ᵗ Ṽ(s) ψ_{k−1}(s) ds` with cumulative trapezoidal
/// integration on `time_steps` uniform steps; the error is `O(Δt²)` per order.
pub fn dyson_partial_sums(
    problem: &TransitionProblem,
    eps: Epsilon,
    max_order: usize,
    time_steps: usize,
) -> Result<DysonSeries> {
    if max_order > MAX_DYSON_ORDER {
        return Err(Error::InvalidArgument(format!("order {max_order} exceeds {MAX_DYSON_ORDER}")));
    }
    if time_steps < MIN_TIME_STEPS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_TIME_STEPS} time steps, got {time_steps}")));
    }
    let exact = transition(problem, eps)?;
    let n = problem.fock.dimension();
    let (g, c) = problem.interaction.scalars(eps)?;
    let v = symmetrize(problem.interaction.potential.matrix(n)? * C64::new(g, 0.0));
    let energies = free_energies(&problem.fock, c);
    let t = problem.time;
    let dt = t / time_steps as f64;

    // e^{iE s_j}, one vector per grid point
    let phases: Vec<DVector<C64>> = (0..=time_steps)
        .map(|j| {
            let s = j as f64 * dt;
            DVector::from_iterator(n, energies.iter().map(|&e| C64::from_polar(1.0, e * s)))
        })
        .collect();
    let minus_i = C64::new(0.0, -1.0);
    let zero = DVector::from_element(n, C64::new(0.0, 0.0));

    // back to the Schrödinger picture at t before projecting
    let project = |psi_t: &DVector<C64>| -> C64 {
        let back = psi_t.component_mul(&phases[time_steps].map(|p| p.conj()));
        problem.final_state.amplitudes.dotc(&back)
    };

    let mut previous: Vec<DVector<C64>> = vec![problem.initial.amplitudes.clone(); time_steps + 1];
    let mut total = problem.initial.amplitudes.clone();
    let mut partial_sums = Vec::with_capacity(max_order + 1);
    let mut record = |order: usize, total: &DVector<C64>| {
        let amplitude = project(total);
        partial_sums.push(DysonOrder { order, amplitude, probability: amplitude.norm_sqr() });
    };
    record(0, &total);

    for order in 1..=max_order {
        let integrand: Vec<DVector<C64>> = previous
            .iter()
            .zip(&phases)
            .map(|(psi, ph)| {
                let w = psi.component_mul(&ph.map(|p| p.conj()));
                (&v * w).component_mul(ph) * minus_i
            })
            .collect();
        let mut current = Vec::with_capacity(time_steps + 1);
        current.push(zero.clone());
        for j in 1..=time_steps {
            let next = &current[j - 1] + (&integrand[j - 1] + &integrand[j]) * C64::new(0.5 * dt, 0.0);
            if next.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
                return Err(Error::DysonNonFinite { order });
            }
            current.push(next);
        }
        total += &current[time_steps];
        record(order, &total);
        previous = current;
    }

    let bound = DIVERGENCE_FACTOR * exact.amplitude.norm();
    let first_divergence_order =
        partial_sums.iter().find(|s| s.amplitude.norm() > bound || s.probability > 1.0).map(|s| s.order);
    Ok(DysonSeries {
        partial_sums,
        exact_amplitude: exact.amplitude,
        exact_probability: exact.probability,
        first_divergence_order,
        time_steps,
    })
}

/// The transition probability as an ε-indexed number.
pub fn probability_number(problem: &TransitionProblem) -> GenNumber {
    let p = problem.clone();
    GenNumber::new(format!("P(eps), N = {}", problem.fock.dimension()), move |e| transition_probability(&p, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSweep {
    pub samples: Samples,
    pub class: AsymptoticClass,
    pub limit_exists: bool,
}

impl EpsilonSweep {
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, p)| (lo.min(p), hi.max(p)));
        hi - lo
    }
}

pub fn sweep_epsilon(problem: &TransitionProblem, grid: &EpsilonGrid, thresholds: &Thresholds) -> Result<EpsilonSweep> {
    let samples = grid
        .epsilons()
        .into_iter()
        .map(|e| Ok((e.value(), transition_probability(problem, e)?)))
        .collect::<Result<Samples>>()?;
    let class = classify_samples(samples.clone(), thresholds);
    let limit_exists = matches!(class.verdict, Verdict::FiniteLimit { .. } | Verdict::DecaysWithOrder { .. });
    Ok(EpsilonSweep { samples, class, limit_exists })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRow {
    pub dimension: usize,
    pub probability: f64,
    /// Change from the previous row.
    pub difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationStudy {
    pub rows: Vec<TruncationRow>,
}

impl TruncationStudy {
    /// Smallest dimension whose difference from the previous row is below `tol`.
    pub fn first_converged(&self, tol: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.difference.is_some_and(|d| d < tol)).map(|r| r.dimension)
    }
}

pub fn truncation_study(problem: &TransitionProblem, eps: Epsilon, dims: &[usize]) -> Result<TruncationStudy> {
    if dims.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("dimensions must be strictly increasing".into()));
    }
    let mut rows: Vec<TruncationRow> = Vec::with_capacity(dims.len());
    for &dimension in dims {
        let probability = transition_probability(&problem.with_dimension(dimension)?, eps)?;
        let difference = rows.last().map(|r| (probability - r.probability).abs());
        rows.push(TruncationRow { dimension, probability, difference });
    }
    Ok(TruncationStudy { rows })
}

/// Dense Hermitian matrix with entries uniform in the unit square.
pub fn random_hermitian(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    symmetrize(m)
}

pub fn random_state(n: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StateVector::normalized((0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
}
