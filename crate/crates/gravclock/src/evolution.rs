//! Exact evolution under diagonal Hamiltonians, partial traces, closed-form
//! reduced states, semiclassical (mean-field) evolution, and purity scans.
//!
//! The N-clock closed form is stored in the interaction picture (free ladder
//! phases removed); comparisons against full-picture evolution therefore go
//! through coherence magnitudes, which the free phases drop out of.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::hamiltonian::{semiclassical_dilation_factors, ClockNetwork, DiagonalHamiltonian};
use crate::numeric::{ln_factorial_table, ln_half_one_plus_cos, reduce_angle};
use crate::spin::{coherent_state, CoherentLabel, DensityMatrix, SpinSpace, StateVector};
use crate::{Error, Result};

/// Time-ordered snapshots of some quantity along an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    times: Vec<f64>,
    samples: Vec<T>,
}

impl<T> Trajectory<T> {
    /// Times must be strictly increasing and match the samples in length.
    pub fn new(times: Vec<f64>, samples: Vec<T>) -> Result<Self> {
        if times.len() != samples.len() {
            return Err(Error::DimensionMismatch(times.len(), samples.len()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("trajectory times must be strictly increasing"));
        }
        Ok(Self { times, samples })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &T)> {
        self.times.iter().copied().zip(self.samples.iter())
    }
}

/// Apply exp(−iτH) to a state; H is diagonal, so each amplitude picks up a
/// phase exp(−iτE_k). Phase arguments are reduced mod 2π before exponentiation.
pub fn evolve_exact(psi: &StateVector, h: &DiagonalHamiltonian, tau: f64) -> Result<StateVector> {
    if psi.dim() != h.product_dim() {
        return Err(Error::DimensionMismatch(psi.dim(), h.product_dim()));
    }
    let mut amps = psi.amplitudes().clone();
    for (k, a) in amps.iter_mut().enumerate() {
        let phase = reduce_angle(tau * h.energy(k));
        *a *= Complex64::from_polar(1.0, -phase);
    }
    StateVector::new(amps)
}

fn check_subsystems(dims: &[usize], total: usize, keep: &[usize]) -> Result<Vec<usize>> {
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimensionMismatch(prod, total));
    }
    if keep.is_empty() {
        return Err(Error::domain("keep set must name at least one subsystem"));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() {
        return Err(Error::domain("keep set contains duplicate indices"));
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i >= dims.len()) {
        return Err(Error::IndexOutOfRange { index: bad, count: dims.len() });
    }
    Ok(sorted)
}

/// Trace a pure state down to the subsystems in `keep` (ascending order).
pub fn partial_trace_state(psi: &StateVector, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let keep = check_subsystems(dims, psi.dim(), keep)?;
    let keep_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let rest_dim = psi.dim() / keep_dim;

    // amplitude matrix M[kept, traced]; ρ_kept = M·M†
    let mut m = DMatrix::<Complex64>::zeros(keep_dim, rest_dim);
    let n = dims.len();
    let mut digits = vec![0usize; n];
    for (alpha, amp) in psi.amplitudes().iter().enumerate() {
        let mut rem = alpha;
        for a in (0..n).rev() {
            digits[a] = rem % dims[a];
            rem /= dims[a];
        }
        let mut ki = 0usize;
        for &a in &keep {
            ki = ki * dims[a] + digits[a];
        }
        let mut ri = 0usize;
        for a in 0..n {
            if !keep.contains(&a) {
                ri = ri * dims[a] + digits[a];
            }
        }
        m[(ki, ri)] = *amp;
    }
    let rho = &m * m.adjoint();
    DensityMatrix::new(rho)
}

/// Trace a density matrix down to the subsystems in `keep`.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let keep = check_subsystems(dims, rho.dim(), keep)?;
    let n = dims.len();
    let rest: Vec<usize> = (0..n).filter(|a| !keep.contains(a)).collect();
    let keep_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let rest_dim: usize = rest.iter().map(|&i| dims[i]).product();

    // compose a full index from kept digits and traced digits
    let compose = |ki: usize, ri: usize| -> usize {
        let mut kd = vec![0usize; keep.len()];
        let mut rem = ki;
        for (slot, &a) in keep.iter().enumerate().rev() {
            kd[slot] = rem % dims[a];
            rem /= dims[a];
        }
        let mut rd = vec![0usize; rest.len()];
        let mut rem = ri;
        for (slot, &a) in rest.iter().enumerate().rev() {
            rd[slot] = rem % dims[a];
            rem /= dims[a];
        }
        let mut alpha = 0usize;
        for a in 0..n {
            let d = if let Some(pos) = keep.iter().position(|&x| x == a) {
                kd[pos]
            } else {
                let pos = rest.iter().position(|&x| x == a).unwrap();
                rd[pos]
            };
            alpha = alpha * dims[a] + d;
        }
        alpha
    };

    let mut out = DMatrix::<Complex64>::zeros(keep_dim, keep_dim);
    for ki in 0..keep_dim {
        for kj in 0..keep_dim {
            let mut acc = Complex64::default();
            for ri in 0..rest_dim {
                acc += rho.entry(compose(ki, ri), compose(kj, ri));
            }
            out[(ki, kj)] = acc;
        }
    }
    DensityMatrix::new(out)
}

/// Interaction-picture reduced state of one qubit clock among N+1, all with
/// gap ε and common distance ξ:
///
/// ```text
/// ρ = 1/2 [ 1                  ((1+e^{−iθ})/2)^n ]      θ = τ ε²/ξ
///         [ ((1+e^{iθ})/2)^n   1                 ]
/// ```
///
/// `n` is the number of partner clocks; powers go through log space so n can
/// be macroscopic (1e23) without underflow-by-iteration.
pub fn reduced_qubit_closed_form(n: f64, tau: f64, eps: f64, xi: f64) -> Result<DensityMatrix> {
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::domain(format!("partner count must be >= 1, got {n}")));
    }
    if !xi.is_finite() || xi <= 0.0 {
        return Err(Error::domain(format!("xi must be positive, got {xi}")));
    }
    let theta = reduce_angle(tau * eps * eps / xi);
    let z = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -theta)) / 2.0;
    // z^n in log space: |z|^n via ln[(1+cosθ)/2]/2, arg scaled and re-reduced
    let ln_mag = 0.5 * ln_half_one_plus_cos(theta);
    let mag = (n * ln_mag).exp();
    let off = if mag == 0.0 {
        Complex64::default()
    } else {
        Complex64::from_polar(0.5 * mag, reduce_angle(n * z.arg()))
    };
    let mut m = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
    m[(0, 1)] = off;
    m[(1, 0)] = off.conj();
    DensityMatrix::new(m)
}

/// Binomially weighted phases of the branches in the two-spin reduced states:
/// φ_k = −τ ε_slow (1 − k ε_fast / ξ).
fn branch_phases(two_j: u32, eps_front: f64, eps_dilating: f64, xi: f64, tau: f64) -> Vec<(f64, f64)> {
    let lnf = ln_factorial_table(two_j as usize);
    let ln4j = two_j as f64 * 2f64.ln(); // ln 2^(2j) = ln 4^j
    (0..=two_j as usize)
        .map(|k| {
            let w = (lnf[two_j as usize] - lnf[k] - lnf[two_j as usize - k] - ln4j).exp();
            let phi = -tau * eps_front * (1.0 - k as f64 * eps_dilating / xi);
            (w, phi)
        })
        .collect()
}

/// Reduced state of a spin-j_B clock gravitationally coupled to a spin-j_A
/// clock, both starting at (π/2, 0): a binomial mixture of equatorial coherent
/// states with phases φ_k = −τ ε_B (1 − k ε_A/ξ).
pub fn reduced_b_coherent_closed_form(
    two_j_a: u32,
    two_j_b: u32,
    eps_a: f64,
    eps_b: f64,
    xi: f64,
    tau: f64,
) -> Result<DensityMatrix> {
    if !xi.is_finite() || xi <= 0.0 {
        return Err(Error::domain(format!("xi must be positive, got {xi}")));
    }
    let space_b = SpinSpace::new(two_j_b);
    let parts: Vec<(f64, StateVector)> = branch_phases(two_j_a, eps_b, eps_a, xi, tau)
        .into_iter()
        .map(|(w, phi)| {
            let label = CoherentLabel::new(FRAC_PI_2, phi, space_b)?;
            Ok((w, coherent_state(&label)))
        })
        .collect::<Result<_>>()?;
    DensityMatrix::mixture(&parts)
}

/// Reduced state of the qubit clock A coupled to a spin-j_B clock: the same
/// binomial mixture with the roles of the spins swapped,
/// φ_k = −τ ε_A (1 − k ε_B/ξ).
pub fn reduced_a_qubit_mixture(two_j_b: u32, eps_a: f64, eps_b: f64, xi: f64, tau: f64) -> Result<DensityMatrix> {
    if !xi.is_finite() || xi <= 0.0 {
        return Err(Error::domain(format!("xi must be positive, got {xi}")));
    }
    let qubit = SpinSpace::new(1);
    let parts: Vec<(f64, StateVector)> = branch_phases(two_j_b, eps_a, eps_b, xi, tau)
        .into_iter()
        .map(|(w, phi)| {
            let label = CoherentLabel::new(FRAC_PI_2, phi, qubit)?;
            Ok((w, coherent_state(&label)))
        })
        .collect::<Result<_>>()?;
    DensityMatrix::mixture(&parts)
}

/// Mean-field evolution: each clock precesses under its own ladder scaled by
/// the dilation factor from the other clocks' mean energies. The generator is
/// a product of per-clock terms, so a product input stays a product for all
/// times and no entanglement is ever created.
pub fn evolve_semiclassical(net: &ClockNetwork, psi0: &StateVector, tau: f64) -> Result<StateVector> {
    let factors = semiclassical_dilation_factors(net, psi0)?;
    let dims = net.dims();
    let n = dims.len();
    let mut amps = psi0.amplitudes().clone();
    let mut digits = vec![0usize; n];
    for (alpha, a) in amps.iter_mut().enumerate() {
        let mut rem = alpha;
        for i in (0..n).rev() {
            digits[i] = rem % dims[i];
            rem /= dims[i];
        }
        let mut e = 0.0;
        for (i, &k) in digits.iter().enumerate() {
            e += factors[i] * k as f64 * net.clocks()[i].eps();
        }
        *a *= Complex64::from_polar(1.0, -reduce_angle(tau * e));
    }
    StateVector::new(amps)
}

/// Purity of the reduced first clock along a time grid (two-clock networks).
pub fn purity_revival_scan(
    psi0: &StateVector,
    h: &DiagonalHamiltonian,
    tau_grid: &[f64],
) -> Result<Trajectory<f64>> {
    if h.dims().len() != 2 {
        return Err(Error::domain("purity scan expects a two-clock network"));
    }
    let mut purities = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let psi = evolve_exact(psi0, h, tau)?;
        let rho = partial_trace_state(&psi, h.dims(), &[0])?;
        purities.push(rho.purity());
    }
    Trajectory::new(tau_grid.to_vec(), purities)
}
