//! Clock specifications, clock networks, and their diagonal Hamiltonians.
//!
//! Every term — internal ladders and pairwise couplings — is a function of the
//! excitation numbers alone, so the joint Hamiltonian is diagonal in the
//! product energy basis and is stored as one real energy per basis label. The
//! pairwise coupling carries a minus sign: in dimensionless form
//!
//! ```text
//! E(k) = Σ_a k_a ε_a − Σ_{a<b} k_a k_b ε_a ε_b / ξ_ab
//! ```

use crate::evolution::partial_trace_state;
use crate::spin::{SpinSpace, StateVector};
use crate::{Error, Result};

/// One clock: its spin space and dimensionless energy gap ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSpec {
    space: SpinSpace,
    eps: f64,
}

impl ClockSpec {
    pub fn new(space: SpinSpace, eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::domain(format!("energy gap must be nonnegative, got {eps}")));
        }
        Ok(Self { space, eps })
    }

    /// Two-level clock with gap ε.
    pub fn qubit(eps: f64) -> Result<Self> {
        Self::new(SpinSpace::new(1), eps)
    }

    pub fn space(&self) -> SpinSpace {
        self.space
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// Pairwise coordinate distances, either one common ξ or a full symmetric
/// matrix.
#[derive(Debug, Clone, PartialEq)]
enum Distances {
    Common(f64),
    Matrix(Vec<f64>), // row-major n×n, diagonal unused
}

/// An ordered collection of clocks plus their pairwise coordinate distances
/// (dimensionless ξ, in Planck lengths).
#[derive(Debug, Clone, PartialEq)]
pub struct ClockNetwork {
    clocks: Vec<ClockSpec>,
    distances: Distances,
}

impl ClockNetwork {
    /// All pairs share one distance ξ.
    pub fn with_common_distance(clocks: Vec<ClockSpec>, xi: f64) -> Result<Self> {
        if clocks.is_empty() {
            return Err(Error::domain("a clock network needs at least one clock"));
        }
        if !xi.is_finite() || xi <= 0.0 {
            return Err(Error::domain(format!("distance must be positive, got {xi}")));
        }
        Ok(Self { clocks, distances: Distances::Common(xi) })
    }

    /// Heterogeneous distances; `xi[a][b]` must be symmetric and strictly
    /// positive off the diagonal.
    pub fn with_distances(clocks: Vec<ClockSpec>, xi: &[Vec<f64>]) -> Result<Self> {
        let n = clocks.len();
        if n == 0 {
            return Err(Error::domain("a clock network needs at least one clock"));
        }
        if xi.len() != n || xi.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(xi.len(), n));
        }
        let mut flat = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let v = xi[a][b];
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::domain(format!("distance ({a},{b}) must be positive, got {v}")));
                }
                if (v - xi[b][a]).abs() > 1e-12 * v.abs() {
                    return Err(Error::domain(format!("distance matrix not symmetric at ({a},{b})")));
                }
                flat[a * n + b] = v;
            }
        }
        Ok(Self { clocks, distances: Distances::Matrix(flat) })
    }

    pub fn len(&self) -> usize {
        self.clocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clocks.is_empty()
    }

    pub fn clocks(&self) -> &[ClockSpec] {
        &self.clocks
    }

    /// Distance between clocks a and b.
    pub fn xi(&self, a: usize, b: usize) -> f64 {
        debug_assert!(a != b);
        match &self.distances {
            Distances::Common(x) => *x,
            Distances::Matrix(m) => m[a * self.len() + b],
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.clocks.iter().map(|c| c.space().dim()).collect()
    }

    pub fn product_dim(&self) -> usize {
        self.clocks.iter().map(|c| c.space().dim()).product()
    }
}

/// Above this product dimension energies are computed per label on demand
/// instead of being materialized.
const DENSE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
enum Energies {
    Dense(Vec<f64>),
    Lazy {
        gaps: Vec<f64>,
        /// coupling[a*n+b] = ε_a ε_b / ξ_ab for a < b, else 0
        coupling: Vec<f64>,
    },
}

/// A joint Hamiltonian that is diagonal in the product energy basis.
///
/// Basis labels are mixed-radix indices over the per-clock dimensions with
/// clock 0 as the most significant digit, matching [`StateVector::kron`]
/// composition order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    dims: Vec<usize>,
    energies: Energies,
}

impl DiagonalHamiltonian {
    /// Wrap an explicit diagonal (one finite energy per product-basis label).
    pub fn from_energies(dims: Vec<usize>, energies: Vec<f64>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != energies.len() {
            return Err(Error::DimensionMismatch(total, energies.len()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::domain("energies must be finite"));
        }
        Ok(Self { dims, energies: Energies::Dense(energies) })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn product_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Energy of the flattened product-basis label.
    pub fn energy(&self, index: usize) -> f64 {
        match &self.energies {
            Energies::Dense(e) => e[index],
            Energies::Lazy { gaps, coupling } => {
                let n = self.dims.len();
                let mut k = vec![0usize; n];
                let mut rem = index;
                for a in (0..n).rev() {
                    k[a] = rem % self.dims[a];
                    rem /= self.dims[a];
                }
                let mut e = 0.0;
                for a in 0..n {
                    e += k[a] as f64 * gaps[a];
                }
                for a in 0..n {
                    for b in (a + 1)..n {
                        e -= k[a] as f64 * k[b] as f64 * coupling[a * n + b];
                    }
                }
                e
            }
        }
    }

    /// Energy of an explicit label k⃗ (one excitation count per clock).
    pub fn energy_of_labels(&self, k: &[usize]) -> Result<f64> {
        if k.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(k.len(), self.dims.len()));
        }
        let mut index = 0usize;
        for (a, &ka) in k.iter().enumerate() {
            if ka >= self.dims[a] {
                return Err(Error::IndexOutOfRange { index: ka, count: self.dims[a] });
            }
            index = index * self.dims[a] + ka;
        }
        Ok(self.energy(index))
    }
}

/// The internal Hamiltonian of a single clock: diag(k·ε).
pub fn internal_hamiltonian(clock: &ClockSpec) -> DiagonalHamiltonian {
    let dim = clock.space().dim();
    let energies = (0..dim).map(|k| k as f64 * clock.eps()).collect();
    DiagonalHamiltonian { dims: vec![dim], energies: Energies::Dense(energies) }
}

/// The joint network Hamiltonian: sum of internal ladders minus all pairwise
/// products scaled by 1/ξ_ab.
pub fn network_hamiltonian(net: &ClockNetwork) -> Result<DiagonalHamiltonian> {
    let n = net.len();
    let dims = net.dims();
    let mut coupling = vec![0.0; n * n];
    for a in 0..n {
        for b in (a + 1)..n {
            coupling[a * n + b] = net.clocks()[a].eps() * net.clocks()[b].eps() / net.xi(a, b);
        }
    }
    let gaps: Vec<f64> = net.clocks().iter().map(|c| c.eps()).collect();
    let total: usize = dims.iter().product();
    if total > DENSE_LIMIT {
        return Ok(DiagonalHamiltonian { dims, energies: Energies::Lazy { gaps, coupling } });
    }
    let mut energies = vec![0.0; total];
    let mut k = vec![0usize; n];
    for (index, slot) in energies.iter_mut().enumerate() {
        let mut rem = index;
        for a in (0..n).rev() {
            k[a] = rem % dims[a];
            rem /= dims[a];
        }
        let mut e = 0.0;
        for a in 0..n {
            e += k[a] as f64 * gaps[a];
            for b in (a + 1)..n {
                e -= k[a] as f64 * k[b] as f64 * coupling[a * n + b];
            }
        }
        *slot = e;
    }
    Ok(DiagonalHamiltonian { dims, energies: Energies::Dense(energies) })
}

/// Per-clock mean-field time dilation factors for a product state:
/// factor_b = 1 − Σ_{a≠b} ⟨H_a⟩ / ξ_ab.
///
/// The expectation values only factorize for product inputs, so an entangled
/// state is rejected (reduced purity below 1 − 1e-9 on any clock).
pub fn semiclassical_dilation_factors(net: &ClockNetwork, psi: &StateVector) -> Result<Vec<f64>> {
    let dims = net.dims();
    let total: usize = dims.iter().product();
    if psi.dim() != total {
        return Err(Error::DimensionMismatch(psi.dim(), total));
    }
    let n = net.len();
    let mut mean_energy = vec![0.0; n];
    for a in 0..n {
        let rho = partial_trace_state(psi, &dims, &[a])?;
        let purity = rho.purity();
        if purity < 1.0 - 1e-9 {
            return Err(Error::NotProductState { clock: a, purity });
        }
        mean_energy[a] = (0..dims[a]).map(|k| k as f64 * net.clocks()[a].eps() * rho.entry(k, k).re).sum();
    }
    let mut factors = vec![1.0; n];
    for b in 0..n {
        for a in 0..n {
            if a != b {
                factors[b] -= mean_energy[a] / net.xi(a, b);
            }
        }
    }
    Ok(factors)
}
