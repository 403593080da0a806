//! Simulator and analysis toolkit for gravitationally interacting quantum clocks.
//!
//! A clock here is a spin-`j` system whose excitation ladder doubles as a
//! mass-energy ladder. Pairs of clocks couple through a product of their
//! internal Hamiltonians scaled by `-G/(c^4 x)`, which leaves the joint
//! Hamiltonian diagonal in the product energy basis and makes exact evolution,
//! reduced states, and the associated decoherence timescales cheap to compute.
//!
//! Module map:
//!
//! * [`units`] — physical constants, Planck units, SI ↔ dimensionless bridges.
//! * [`spin`] — spin spaces, coherent states, state vectors, density matrices,
//!   the Husimi Q function.
//! * [`hamiltonian`] — clock specs, clock networks, diagonal Hamiltonians and
//!   semiclassical (mean-field) dilation factors.
//! * [`evolution`] — exact diagonal evolution, partial traces, closed-form
//!   reduced states, semiclassical evolution, purity scans.
//! * [`metrics`] — visibility, characteristic timescales, decoherence maps,
//!   observer-distance bounds, entanglement entropy.
//! * [`measurement`] — coarse-grained azimuthal-bin POVM, pointer operator and
//!   its statistics, orthogonalisation time.
//! * [`master_eq`] — reduced non-Markovian master equation integrator and the
//!   comparison against exact reduced dynamics.
//! * [`numeric`] — small shared numeric helpers (log-space combinatorics,
//!   angle reduction, scalar minimisation, log-spaced grids).
//!
//! All physics internals are dimensionless (Planck units, ħ = 1): times `τ`,
//! energy gaps `ε`, distances `ξ`. SI values appear only at the boundary via
//! [`units::PhysicalScales`].

pub mod evolution;
pub mod hamiltonian;
pub mod master_eq;
pub mod measurement;
pub mod metrics;
pub mod numeric;
pub mod spin;
pub mod units;

pub use evolution::Trajectory;
pub use hamiltonian::{ClockNetwork, ClockSpec, DiagonalHamiltonian};
pub use spin::{CoherentLabel, DensityMatrix, SpinSpace, StateVector};
pub use units::{DimensionlessParams, PhysicalScales};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("state is not a product state: reduced purity {purity} on clock {clock}")]
    NotProductState { clock: usize, purity: f64 },
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("matrix trace differs from 1 beyond tolerance (trace = {0})")]
    NotUnitTrace(f64),
    #[error("state vector norm differs from 1 beyond tolerance (norm = {0})")]
    NotNormalized(f64),
    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
