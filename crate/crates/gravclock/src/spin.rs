//! Spin-j Hilbert space primitives: basis, coherent states, overlaps, state
//! vectors, density matrices, and the Husimi Q function.
//!
//! Basis convention: the spin-j space is labeled by the excitation count
//! k = 0..2j (energy ladder ascending), so the usual Z eigenvalue m maps to
//! k = j − m. A coherent state at polar angles (θ, φ) has amplitudes
//!
//! ```text
//! ⟨k|θ,φ⟩ = √C(2j,k) · cos^(2j−k)(θ/2) · sin^k(θ/2) · e^(ikφ)
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::numeric::{ln_factorial_table, reduce_angle};
use crate::{Error, Result};

/// Tolerance on state-vector norms.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on density-matrix Hermiticity and trace.
pub const DENSITY_TOL: f64 = 1e-10;

/// A spin-j Hilbert space, stored as 2j so half-integer spins stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinSpace {
    two_j: u32,
}

impl SpinSpace {
    pub fn new(two_j: u32) -> Self {
        Self { two_j }
    }

    /// The space holding a `dim`-level system; `dim` must be ≥ 1.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("spin space dimension must be at least 1"));
        }
        Ok(Self { two_j: (dim - 1) as u32 })
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

/// A point on the Bloch sphere labelling a spin coherent state.
///
/// θ ∈ [0, π]; φ is reduced into [0, 2π) on construction so azimuthal binning
/// has a canonical branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    theta: f64,
    phi: f64,
    space: SpinSpace,
}

impl CoherentLabel {
    pub fn new(theta: f64, phi: f64, space: SpinSpace) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::domain(format!("theta must lie in [0, pi], got {theta}")));
        }
        if !phi.is_finite() {
            return Err(Error::domain("phi must be finite"));
        }
        Ok(Self { theta, phi: reduce_angle(phi), space })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn space(&self) -> SpinSpace {
        self.space
    }
}

/// Dense complex pure state over a (product of) spin basis, unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Wrap amplitudes that are already normalized (within [`NORM_TOL`]).
    pub fn new(amps: DVector<Complex64>) -> Result<Self> {
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Normalize arbitrary amplitudes; errors on the zero vector.
    pub fn normalized(mut amps: DVector<Complex64>) -> Result<Self> {
        let norm = amps.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        amps /= Complex64::new(norm, 0.0);
        Ok(Self { amps })
    }

    pub fn from_slice(amps: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amps))
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amps[k]
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// Tensor product, `self` as the most significant factor.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amps = DVector::zeros(self.dim() * other.dim());
        for (i, a) in self.amps.iter().enumerate() {
            for (k, b) in other.amps.iter().enumerate() {
                amps[i * other.dim() + k] = a * b;
            }
        }
        StateVector { amps }
    }

    /// The projector |ψ⟩⟨ψ| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for k in 0..n {
                m[(i, k)] = self.amps[i] * self.amps[k].conj();
            }
        }
        DensityMatrix { m }
    }
}

/// Dense complex Hermitian unit-trace matrix (a quantum state or a reduced
/// subsystem state).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates squareness, Hermiticity and unit trace (within
    /// [`DENSITY_TOL`]). Positivity is checked on demand via
    /// [`DensityMatrix::min_eigenvalue`].
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        let n = m.nrows();
        for i in 0..n {
            for k in i..n {
                let d = m[(i, k)] - m[(k, i)].conj();
                if d.norm() > DENSITY_TOL {
                    return Err(Error::NotHermitian);
                }
            }
        }
        let tr = (0..n).map(|i| m[(i, i)].re).sum::<f64>();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotUnitTrace(tr));
        }
        Ok(Self { m })
    }

    /// Convex mixture Σ wᵢ |ψᵢ⟩⟨ψᵢ| of pure states.
    pub fn mixture(parts: &[(f64, StateVector)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("mixture of zero states"));
        }
        let dim = parts[0].1.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (w, psi) in parts {
            if *w < -1e-15 {
                return Err(Error::domain(format!("mixture weight {w} is negative")));
            }
            if psi.dim() != dim {
                return Err(Error::DimensionMismatch(psi.dim(), dim));
            }
            let a = psi.amplitudes();
            for i in 0..dim {
                for k in 0..dim {
                    m[(i, k)] += Complex64::new(*w, 0.0) * a[i] * a[k].conj();
                }
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, k: usize) -> Complex64 {
        self.m[(i, k)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    /// Tr ρ² (Frobenius norm squared for a Hermitian matrix).
    pub fn purity(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.m.clone().symmetric_eigenvalues();
        let mut vals: Vec<f64> = eig.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Maximally mixed state I/n.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        Self { m }
    }
}

/// Build the spin coherent state |θ, φ, j⟩.
///
/// Binomial weights go through log space so large j (beyond j ≈ 150, where
/// C(2j, j) overflows a double) stays finite.
pub fn coherent_state(label: &CoherentLabel) -> StateVector {
    let two_j = label.space().two_j() as usize;
    let dim = two_j + 1;
    let half = label.theta() / 2.0;
    let (c, s) = (half.cos(), half.sin());
    let mut amps = DVector::zeros(dim);
    if s == 0.0 {
        amps[0] = Complex64::new(1.0, 0.0);
        return StateVector { amps };
    }
    if c == 0.0 {
        amps[two_j] = Complex64::from_polar(1.0, reduce_angle(two_j as f64 * label.phi()));
        return StateVector { amps };
    }
    let lnf = ln_factorial_table(two_j);
    let (ln_c, ln_s) = (c.abs().ln(), s.abs().ln());
    for k in 0..dim {
        let ln_binom = lnf[two_j] - lnf[k] - lnf[two_j - k];
        let mag = (0.5 * ln_binom + (two_j - k) as f64 * ln_c + k as f64 * ln_s).exp();
        amps[k] = Complex64::from_polar(mag, reduce_angle(k as f64 * label.phi()));
    }
    // θ ∈ [0, π] keeps cos(θ/2) and sin(θ/2) nonnegative; magnitudes are exact
    // up to rounding, so only renormalize the residual.
    StateVector::normalized(amps).expect("coherent state has positive norm")
}

/// Inner product ⟨a|b⟩.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.amplitudes().dotc(b.amplitudes()))
}

/// Husimi Q function of `rho` at (θ, φ): ⟨θ,φ|ρ|θ,φ⟩ ∈ [0, 1].
///
/// `rho` must live on a single spin space; the spin is inferred from the
/// dimension.
pub fn husimi_q(rho: &DensityMatrix, theta: f64, phi: f64) -> Result<f64> {
    let space = SpinSpace::from_dim(rho.dim())?;
    let v = coherent_state(&CoherentLabel::new(theta, phi, space)?);
    let a = v.amplitudes();
    let mut acc = Complex64::default();
    for i in 0..rho.dim() {
        for k in 0..rho.dim() {
            acc += a[i].conj() * rho.entry(i, k) * a[k];
        }
    }
    Ok(acc.re)
}

/// Diagonal energies E_k = k·ΔE for k = 0..2j (nonnegative spectrum with
/// E_0 = 0).
pub fn z_energy_ladder(space: SpinSpace, de: f64) -> Result<Vec<f64>> {
    if !de.is_finite() || de < 0.0 {
        return Err(Error::domain(format!("energy gap must be nonnegative, got {de}")));
    }
    Ok((0..space.dim()).map(|k| k as f64 * de).collect())
}
