//! Composite atom⊗field states and their dynamics.
//!
//! Two models live here. The effective degenerate-Raman Hamiltonian acts on
//! the two degenerate lower levels `|g⟩, |e⟩` after the far-detuned upper
//! level has been eliminated: every photon-number sector `n` carries the
//! 2×2 block `βn(I + σ_flip)`, combining the Stark shifts with the
//! effective flip coupling. The full Λ model keeps the upper level `|f⟩`
//! explicitly: both lower levels sit at energy 0 in the rotating frame,
//! `|f⟩` sits at the detuning Δ, and one photon is exchanged against each
//! leg with equal coupling λ. Comparing the two is how the elimination is
//! certified.
//!
//! Joint amplitudes are stored level-major: the flattened index of
//! `(level, n)` is `level * field_dim + n`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Error;
use crate::hilbert::{coherent_amplitudes, DenseOperator, FockVector, TruncationConfig};
use crate::Result;

/// Operators handed to the propagator must be Hermitian to this bound,
/// max entrywise.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Mode frequency, level frequencies, coupling and detuning (ħ = 1).
///
/// The upper-level frequency is derived so that
/// `omega_f - omega0 = delta + omega` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    omega: f64,
    omega0: f64,
    omega_f: f64,
    lambda_c: f64,
    delta: f64,
}

impl PhysicalParams {
    /// Build from mode frequency, lower-level frequency, detuning and
    /// coupling. The detuning must be nonzero and finite.
    pub fn new(omega: f64, omega0: f64, delta: f64, lambda_c: f64) -> Result<Self> {
        if delta == 0.0 || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "detuning must be nonzero and finite, got {delta}"
            )));
        }
        if !(omega.is_finite() && omega0.is_finite() && lambda_c.is_finite()) {
            return Err(Error::InvalidParameter(
                "frequencies and coupling must be finite".into(),
            ));
        }
        Ok(Self {
            omega,
            omega0,
            omega_f: omega0 + delta + omega,
            lambda_c,
            delta,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_f(&self) -> f64 {
        self.omega_f
    }

    pub fn lambda_c(&self) -> f64 {
        self.lambda_c
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Effective atom-field coupling `β = -λ²/Δ`.
    pub fn beta(&self) -> f64 {
        -self.lambda_c * self.lambda_c / self.delta
    }

    /// Interaction time `t* = π / (2|β|)` at which the coherent label is
    /// mapped onto `-α`. Infinite when the coupling vanishes.
    pub fn protocol_time(&self) -> f64 {
        std::f64::consts::PI / (2.0 * self.beta().abs())
    }
}

/// Amplitudes of the degenerate two-level atom, `c_g|g⟩ + c_e|e⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomQubit {
    c_g: Complex64,
    c_e: Complex64,
}

impl AtomQubit {
    /// Requires `|c_g|² + |c_e|² = 1` within 1e-12.
    pub fn new(c_g: Complex64, c_e: Complex64) -> Result<Self> {
        let norm_sqr = c_g.norm_sqr() + c_e.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "atom amplitudes must be normalized: |c_g|^2 + |c_e|^2 = {norm_sqr}"
            )));
        }
        Ok(Self { c_g, c_e })
    }

    /// Normalize arbitrary (non-zero) amplitudes.
    pub fn normalized(c_g: Complex64, c_e: Complex64) -> Result<Self> {
        let norm = (c_g.norm_sqr() + c_e.norm_sqr()).sqrt();
        if norm < 1e-150 {
            return Err(Error::InvalidParameter(
                "atom amplitudes cannot both vanish".into(),
            ));
        }
        Ok(Self {
            c_g: c_g / norm,
            c_e: c_e / norm,
        })
    }

    pub fn ground() -> Self {
        Self {
            c_g: Complex64::new(1.0, 0.0),
            c_e: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            c_g: Complex64::new(0.0, 0.0),
            c_e: Complex64::new(1.0, 0.0),
        }
    }

    pub fn c_g(&self) -> Complex64 {
        self.c_g
    }

    pub fn c_e(&self) -> Complex64 {
        self.c_e
    }

    /// `c₊ = (c_e + c_g)/2`.
    pub fn c_plus(&self) -> Complex64 {
        (self.c_e + self.c_g) / 2.0
    }

    /// `c₋ = (c_e - c_g)/2`.
    pub fn c_minus(&self) -> Complex64 {
        (self.c_e - self.c_g) / 2.0
    }
}

/// Three-level amplitudes for the full Λ model; adds the upper level `|f⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelAtom {
    c_g: Complex64,
    c_e: Complex64,
    c_f: Complex64,
}

impl ThreeLevelAtom {
    pub fn new(c_g: Complex64, c_e: Complex64, c_f: Complex64) -> Result<Self> {
        let norm_sqr = c_g.norm_sqr() + c_e.norm_sqr() + c_f.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "atom amplitudes must be normalized: total = {norm_sqr}"
            )));
        }
        Ok(Self { c_g, c_e, c_f })
    }

    /// Embed a two-level state with the upper level unpopulated.
    pub fn from_qubit(q: &AtomQubit) -> Self {
        Self {
            c_g: q.c_g,
            c_e: q.c_e,
            c_f: Complex64::new(0.0, 0.0),
        }
    }

    pub fn c_g(&self) -> Complex64 {
        self.c_g
    }

    pub fn c_e(&self) -> Complex64 {
        self.c_e
    }

    pub fn c_f(&self) -> Complex64 {
        self.c_f
    }
}

/// Atomic levels indexed into [`JointState`] rows.
pub const LEVEL_G: usize = 0;
/// See [`LEVEL_G`].
pub const LEVEL_E: usize = 1;
/// Upper level, present only in 3-row states.
pub const LEVEL_F: usize = 2;

/// Composite atom⊗field amplitude matrix, one row per atomic level.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    amps: DMatrix<Complex64>,
    normalized: bool,
}

impl JointState {
    /// Wrap an amplitude matrix (2 or 3 rows). When `normalized` is set the
    /// total squared norm must be 1 within 1e-10.
    pub fn from_matrix(amps: DMatrix<Complex64>, normalized: bool) -> Result<Self> {
        if amps.nrows() != 2 && amps.nrows() != 3 {
            return Err(Error::InvalidParameter(format!(
                "joint state needs 2 or 3 atomic rows, got {}",
                amps.nrows()
            )));
        }
        if amps.ncols() == 0 {
            return Err(Error::InvalidParameter(
                "joint state needs at least one field column".into(),
            ));
        }
        let state = Self { amps, normalized };
        if normalized && (state.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "normalized flag set but squared norm is {}",
                state.norm_sqr()
            )));
        }
        Ok(state)
    }

    /// Product state of a two-level atom and a field vector.
    pub fn product(atom: &AtomQubit, field: &FockVector) -> Self {
        let dim = field.dim();
        let mut amps = DMatrix::zeros(2, dim);
        for n in 0..dim {
            amps[(LEVEL_G, n)] = atom.c_g * field.amplitude(n);
            amps[(LEVEL_E, n)] = atom.c_e * field.amplitude(n);
        }
        Self::flag_normalized(amps)
    }

    /// Product state of a three-level atom and a field vector.
    pub fn product_three(atom: &ThreeLevelAtom, field: &FockVector) -> Self {
        let dim = field.dim();
        let mut amps = DMatrix::zeros(3, dim);
        for n in 0..dim {
            amps[(LEVEL_G, n)] = atom.c_g * field.amplitude(n);
            amps[(LEVEL_E, n)] = atom.c_e * field.amplitude(n);
            amps[(LEVEL_F, n)] = atom.c_f * field.amplitude(n);
        }
        Self::flag_normalized(amps)
    }

    fn flag_normalized(amps: DMatrix<Complex64>) -> Self {
        let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        Self {
            amps,
            normalized: (total - 1.0).abs() <= 1e-10,
        }
    }

    pub fn atom_dim(&self) -> usize {
        self.amps.nrows()
    }

    pub fn field_dim(&self) -> usize {
        self.amps.ncols()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn amplitude(&self, level: usize, n: usize) -> Complex64 {
        self.amps[(level, n)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Occupation of one atomic level, summed over photon numbers.
    pub fn population(&self, level: usize) -> f64 {
        self.amps.row(level).iter().map(|a| a.norm_sqr()).sum()
    }

    /// Field amplitudes attached to one atomic level (unnormalized).
    pub fn field_row(&self, level: usize) -> FockVector {
        let amps = DVector::from_iterator(self.field_dim(), self.amps.row(level).iter().copied());
        FockVector::from_amplitudes(amps).expect("row of a valid state is non-empty")
    }

    /// Expectation of photon number plus upper-level occupation, the
    /// conserved excitation of the full Λ model.
    pub fn total_excitation(&self) -> f64 {
        let mut total = 0.0;
        for level in 0..self.atom_dim() {
            for n in 0..self.field_dim() {
                let weight = n as f64 + if level == LEVEL_F { 1.0 } else { 0.0 };
                total += weight * self.amps[(level, n)].norm_sqr();
            }
        }
        total
    }

    /// Flatten level-major into a single vector.
    pub fn to_vector(&self) -> DVector<Complex64> {
        let (rows, cols) = (self.atom_dim(), self.field_dim());
        DVector::from_fn(rows * cols, |i, _| self.amps[(i / cols, i % cols)])
    }

    /// Rebuild from a level-major flattened vector.
    pub fn from_vector(
        v: &DVector<Complex64>,
        atom_dim: usize,
        field_dim: usize,
        normalized: bool,
    ) -> Result<Self> {
        if v.len() != atom_dim * field_dim {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: atom_dim * field_dim,
            });
        }
        let amps = DMatrix::from_fn(atom_dim, field_dim, |l, n| v[l * field_dim + n]);
        Self::from_matrix(amps, normalized)
    }
}

/// Effective degenerate-Raman Hamiltonian on the `2 × (n_max+1)` space.
///
/// Block-diagonal in photon number; the atomic block at photon number `n`
/// is `βn (I + σ_flip)`, i.e. every one of the four entries equals `βn`.
/// Eigenvalues per block are `{0, 2βn}`.
pub fn build_effective_hamiltonian(p: &PhysicalParams, cfg: &TruncationConfig) -> DenseOperator {
    let dim = cfg.dim();
    let beta = p.beta();
    let mut mat = DMatrix::zeros(2 * dim, 2 * dim);
    for n in 0..dim {
        let v = Complex64::new(beta * n as f64, 0.0);
        for level_a in [LEVEL_G, LEVEL_E] {
            for level_b in [LEVEL_G, LEVEL_E] {
                mat[(level_a * dim + n, level_b * dim + n)] = v;
            }
        }
    }
    DenseOperator::from_matrix(mat).expect("square by construction")
}

/// Full Λ-model Hamiltonian on the `3 × (n_max+1)` space.
///
/// Rotating frame with both lower levels at 0 and `|f⟩` at Δ; each lower
/// level exchanges one photon with `|f⟩` at coupling λ:
/// `H = Δ|f⟩⟨f| + λ(â|f⟩⟨g| + â|f⟩⟨e| + h.c.)`.
/// Total excitation (photon number + f-occupancy) is conserved.
pub fn build_full_hamiltonian(p: &PhysicalParams, cfg: &TruncationConfig) -> DenseOperator {
    let dim = cfg.dim();
    let lambda = p.lambda_c();
    let mut mat = DMatrix::zeros(3 * dim, 3 * dim);
    for n in 0..dim {
        mat[(LEVEL_F * dim + n, LEVEL_F * dim + n)] = Complex64::new(p.delta(), 0.0);
    }
    for n in 1..dim {
        let v = Complex64::new(lambda * (n as f64).sqrt(), 0.0);
        for lower in [LEVEL_G, LEVEL_E] {
            // |f, n-1><lower, n| absorbs a photon while climbing to |f>.
            mat[(LEVEL_F * dim + (n - 1), lower * dim + n)] = v;
            mat[(lower * dim + n, LEVEL_F * dim + (n - 1))] = v;
        }
    }
    DenseOperator::from_matrix(mat).expect("square by construction")
}

/// Exact evolution generated by a Hermitian operator, factored through its
/// eigendecomposition so one build serves any number of times.
///
/// Any scheme reaching local error below 1e-10 per application conforms;
/// diagonalization reaches rounding error and is reused across time grids.
pub struct Propagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Propagator {
    /// Diagonalize a Hermitian operator. Rejects operators whose
    /// hermiticity deviation exceeds [`HERMITICITY_TOL`].
    pub fn new(h: &DenseOperator) -> Result<Self> {
        let deviation = h.hermiticity_deviation();
        if deviation > HERMITICITY_TOL {
            return Err(Error::NonHermitianInput { deviation });
        }
        // Symmetrize before factoring so rounding asymmetry cannot leak in.
        let sym = (h.matrix() + h.matrix().adjoint()) * Complex64::new(0.5, 0.0);
        let eig = sym.symmetric_eigen();
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Apply `exp(-iHt)` to a flattened amplitude vector.
    pub fn evolve_vec(&self, v: &DVector<Complex64>, t: f64) -> Result<DVector<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        let mut coeffs = self.eigenvectors.adjoint() * v;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
        }
        Ok(&self.eigenvectors * coeffs)
    }

    /// Apply `exp(-iHt)` to a joint state.
    pub fn evolve(&self, state: &JointState, t: f64) -> Result<JointState> {
        let out = self.evolve_vec(&state.to_vector(), t)?;
        JointState::from_vector(&out, state.atom_dim(), state.field_dim(), state.normalized)
    }

    /// Materialize `exp(-iHt)` as a dense operator.
    pub fn unitary(&self, t: f64) -> DenseOperator {
        let dim = self.dim();
        let mut phases = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            phases[(k, k)] = Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
        }
        let mat = &self.eigenvectors * phases * self.eigenvectors.adjoint();
        DenseOperator::from_matrix(mat).expect("square by construction")
    }
}

/// Closed-form evolution of `(c_g|g⟩ + c_e|e⟩) ⊗ |α⟩` under the effective
/// Hamiltonian for a time `t`.
///
/// The field component attached to `|g⟩` is `c₊|α'⟩ - c₋|α⟩` and the one
/// attached to `|e⟩` is `c₊|α'⟩ + c₋|α⟩`, with `α' = e^{-2iβt} α`. The
/// truncated coherent expansion is normalized before the (exactly unitary)
/// phase factors are applied, so the output norm is 1 to rounding.
pub fn evolve_analytic(
    atom: &AtomQubit,
    alpha: Complex64,
    p: &PhysicalParams,
    t: f64,
    cfg: &TruncationConfig,
) -> Result<JointState> {
    let coh = coherent_amplitudes(alpha, cfg)?.normalized()?;
    let beta = p.beta();
    let c_plus = atom.c_plus();
    let c_minus = atom.c_minus();
    let dim = coh.dim();
    let mut amps = DMatrix::zeros(2, dim);
    for n in 0..dim {
        let phase = Complex64::from_polar(1.0, -2.0 * n as f64 * beta * t);
        amps[(LEVEL_G, n)] = (c_plus * phase - c_minus) * coh.amplitude(n);
        amps[(LEVEL_E, n)] = (c_plus * phase + c_minus) * coh.amplitude(n);
    }
    JointState::from_matrix(amps, true)
}

/// Evolve a joint state under an arbitrary Hermitian operator for time `t`.
///
/// One-shot wrapper around [`Propagator`]; build the propagator directly
/// when evolving to many times.
pub fn evolve_numeric(initial: &JointState, h: &DenseOperator, t: f64) -> Result<JointState> {
    Propagator::new(h)?.evolve(initial, t)
}

/// Maximum upper-level population reached when `|g⟩ ⊗ |α⟩` evolves under
/// the full Λ Hamiltonian, sampled on a uniform grid of `samples` points
/// over `[0, t_max]`. Certifies the quality of the adiabatic elimination.
///
/// Truncation is auto-sized from `alpha`; the full model only moves
/// probability toward lower photon numbers, so the coherent sizing rule
/// covers the whole trajectory.
pub fn f_population_ceiling(
    alpha: Complex64,
    p: &PhysicalParams,
    t_max: f64,
    samples: usize,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_max must be finite and non-negative, got {t_max}"
        )));
    }
    let cfg = TruncationConfig::auto(alpha);
    let field = coherent_amplitudes(alpha, &cfg)?.normalized()?;
    let atom = ThreeLevelAtom::from_qubit(&AtomQubit::ground());
    let initial = JointState::product_three(&atom, &field);
    let propagator = Propagator::new(&build_full_hamiltonian(p, &cfg))?;
    let mut ceiling = 0.0f64;
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        let state = propagator.evolve(&initial, t)?;
        ceiling = ceiling.max(state.population(LEVEL_F));
    }
    Ok(ceiling)
}
