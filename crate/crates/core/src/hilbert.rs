//! Truncated single-mode Fock space.
//!
//! States are complex amplitude vectors over the photon-number basis
//! `|0⟩ .. |n_max⟩`. The truncated raising operator maps `|n_max⟩` to zero
//! (no wraparound); the leakage this introduces is monitored by the tail
//! checks in [`coherent_amplitudes`] rather than hidden.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Photon-number cutoff plus the admissible probability mass beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    n_max: usize,
    tail_tolerance: f64,
}

impl TruncationConfig {
    /// Create a configuration with cutoff `n_max >= 1` and a tail tolerance
    /// in `(0, 1)`.
    pub fn new(n_max: usize, tail_tolerance: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail_tolerance must lie in (0, 1), got {tail_tolerance}"
            )));
        }
        Ok(Self {
            n_max,
            tail_tolerance,
        })
    }

    /// Auto-size the cutoff for a coherent label: `n_max = ceil(|α|² + 10|α| + 20)`.
    ///
    /// This keeps the Poisson tail below 1e-12 for `|α| <= 4`, so the
    /// tolerance is fixed at 1e-12.
    pub fn auto(alpha: Complex64) -> Self {
        let a = alpha.norm();
        let n_max = (a * a + 10.0 * a + 20.0).ceil() as usize;
        Self {
            n_max,
            tail_tolerance: 1e-12,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Dimension of the truncated space, `n_max + 1`.
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Complex amplitude vector over the photon-number basis.
///
/// Physical states carry squared norm within the tail tolerance of 1;
/// operations that produce unnormalized intermediates (projections, raw
/// superpositions) say so and hand back something to renormalize.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: DVector<Complex64>,
}

impl FockVector {
    /// Wrap raw amplitudes. The vector must be non-empty.
    pub fn from_amplitudes(amps: DVector<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter(
                "Fock vector needs at least one amplitude".into(),
            ));
        }
        Ok(Self { amps })
    }

    /// The vacuum state `|0⟩` in a space of the given dimension.
    pub fn vacuum(dim: usize) -> Self {
        let mut amps = DVector::zeros(dim.max(1));
        amps[0] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// Basis state `|n⟩`.
    pub fn basis_state(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {n} outside dimension {dim}"
            )));
        }
        let mut amps = DVector::zeros(dim);
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit-norm copy. Fails on (numerically) zero vectors.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-150 {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero vector".into(),
            ));
        }
        Ok(Self {
            amps: &self.amps / Complex64::new(n, 0.0),
        })
    }

    /// Expectation of the number operator against the normalized state.
    pub fn mean_photon_number(&self) -> f64 {
        let raw: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum();
        raw / self.norm_sqr()
    }

    /// Form `Σ coeff_i · vec_i`. All terms must share a dimension.
    pub fn linear_combination(terms: &[(Complex64, &FockVector)]) -> Result<Self> {
        let dim = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?
            .1
            .dim();
        let mut amps = DVector::zeros(dim);
        for (coeff, vec) in terms {
            if vec.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: vec.dim(),
                });
            }
            amps += &vec.amps * *coeff;
        }
        Ok(Self { amps })
    }

    /// Copy scaled by a complex factor.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amps: &self.amps * factor,
        }
    }
}

/// Dense complex square matrix acting on a truncated state space.
///
/// Hamiltonian-role operators are Hermitian to 1e-12 entrywise;
/// evolution-role operators are unitary to 1e-10 in max norm. The
/// constructors in this crate meet those bounds, [`hermiticity_deviation`]
/// and [`unitarity_deviation`] measure them.
///
/// [`hermiticity_deviation`]: DenseOperator::hermiticity_deviation
/// [`unitarity_deviation`]: DenseOperator::unitarity_deviation
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    mat: DMatrix<Complex64>,
}

impl DenseOperator {
    /// Wrap a square matrix.
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "operator must be square and non-empty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    /// Apply to a raw amplitude vector.
    pub fn apply_vec(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        Ok(&self.mat * v)
    }

    /// Apply to a Fock vector.
    pub fn apply(&self, f: &FockVector) -> Result<FockVector> {
        Ok(FockVector {
            amps: self.apply_vec(&f.amps)?,
        })
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(DenseOperator {
            mat: &self.mat * &other.mat,
        })
    }

    /// Max entrywise magnitude of `H - H†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Max entrywise magnitude of `U†U - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = self.mat.adjoint() * &self.mat;
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let expected = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((gram[(i, j)] - expected).norm());
            }
        }
        worst
    }

    /// Max entrywise magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        let mut worst = 0.0f64;
        for (a, b) in self.mat.iter().zip(other.mat.iter()) {
            worst = worst.max((a - b).norm());
        }
        worst
    }
}

/// Truncated expansion of the coherent state `|α⟩`.
///
/// Amplitudes follow the stable recurrence
/// `amp_{n+1} = amp_n · α / sqrt(n+1)` from `amp_0 = exp(-|α|²/2)`, so no
/// factorials are formed. Fails with [`Error::TruncationTooSmall`] when the
/// discarded tail mass exceeds the configured tolerance.
pub fn coherent_amplitudes(alpha: Complex64, cfg: &TruncationConfig) -> Result<FockVector> {
    let dim = cfg.dim();
    let mut amps = DVector::zeros(dim);
    let mut amp = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        amps[n] = amp;
        amp *= alpha / ((n + 1) as f64).sqrt();
    }
    let captured: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let tail = (1.0 - captured).max(0.0);
    if tail > cfg.tail_tolerance() {
        return Err(Error::TruncationTooSmall {
            n_max: cfg.n_max(),
            tail,
            tolerance: cfg.tail_tolerance(),
        });
    }
    Ok(FockVector { amps })
}

/// Inner product `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner_product(a: &FockVector, b: &FockVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Ladder and number operators `(â, â†, n̂)` on the truncated space.
///
/// `â|n⟩ = √n |n-1⟩` and `n̂` is diagonal with entries `0..n_max`. The
/// truncated `â†` maps `|n_max⟩` to zero, so `â â†` misses the `n_max + 1`
/// it would produce in the full space: that corner is the truncation
/// leakage; `â†â` still reproduces `n̂` on every basis state.
pub fn ladder_operators(cfg: &TruncationConfig) -> (DenseOperator, DenseOperator, DenseOperator) {
    let dim = cfg.dim();
    let mut lower = DMatrix::zeros(dim, dim);
    let mut number = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        lower[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    for n in 0..dim {
        number[(n, n)] = Complex64::new(n as f64, 0.0);
    }
    let raise = lower.adjoint();
    (
        DenseOperator { mat: lower },
        DenseOperator { mat: raise },
        DenseOperator { mat: number },
    )
}
