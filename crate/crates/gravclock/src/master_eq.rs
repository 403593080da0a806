//! Reduced dynamics of a clock coupled to a spin-j_A partner: the
//! time-local second-order master equation and its comparison against the
//! exact reduced evolution.
//!
//! The generator is diagonal in the energy basis of the evolving clock, so
//! each matrix element obeys a scalar equation
//!
//! ```text
//! dρ_mn/dτ = [ i ω_mn (1 + g) − κ² ω_mn² q_mn(τ) ] ρ_mn
//! ```
//!
//! with ω_mn = (m−n)ε, drift dilation g = j_A ε/ξ, kernel strength
//! κ = |λ|·ΔE_A (λ = −1/ξ, ΔE_A = √(j_A/2)·ε the partner's energy spread),
//! and the analytic memory kernel q_mn(τ) = ∫₀^τ e^{−isω_mn} ds
//! = (1 − e^{−iω_mn τ})/(iω_mn), with the ω → 0 limit τ. The state under the
//! integral is read at the current time (time-local form). Populations are
//! untouched and the trace is conserved exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::evolution::{reduced_b_coherent_closed_form, Trajectory};
use crate::numeric::fit_slope;
use crate::spin::DensityMatrix;
use crate::{Error, Result};

/// Parameters of the reduced evolution: the partner spin j_A, the common gap
/// ε, the separation ξ, and the derived coupling/mean/spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterEqParams {
    two_j_a: u32,
    eps: f64,
    xi: f64,
    coupling: f64,
    mean_energy_a: f64,
    energy_spread_a: f64,
}

impl MasterEqParams {
    /// Standard setup: partner starts in the equatorial coherent state, so
    /// Ē_A = j_A ε and ΔE_A² = j_A ε²/2 (binomial variance).
    pub fn new(two_j_a: u32, eps: f64, xi: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::domain(format!("energy gap must be nonnegative, got {eps}")));
        }
        if !xi.is_finite() || xi <= 0.0 {
            return Err(Error::domain(format!("xi must be positive, got {xi}")));
        }
        let j_a = two_j_a as f64 / 2.0;
        Ok(Self {
            two_j_a,
            eps,
            xi,
            coupling: -1.0 / xi,
            mean_energy_a: j_a * eps,
            energy_spread_a: (j_a / 2.0).sqrt() * eps,
        })
    }

    /// Override the partner's energy spread (e.g. zero, to probe the purely
    /// unitary limit where the variance vanishes).
    pub fn with_energy_spread(mut self, spread: f64) -> Self {
        self.energy_spread_a = spread;
        self
    }

    pub fn two_j_a(&self) -> u32 {
        self.two_j_a
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// λ = −1/ξ (dimensionless form of −G/(c⁴x)).
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Ē_A = j_A ε.
    pub fn mean_energy_a(&self) -> f64 {
        self.mean_energy_a
    }

    /// ΔE_A = √(j_A/2) ε.
    pub fn energy_spread_a(&self) -> f64 {
        self.energy_spread_a
    }

    /// The drift dilation factor 1 + j_A ε/ξ = 1 − λ Ē_A.
    pub fn dilation_factor(&self) -> f64 {
        1.0 - self.coupling * self.mean_energy_a
    }

    /// Branch-separation time τ* = ξ/(√(2 j_A) ε²).
    pub fn tau_star(&self) -> f64 {
        crate::metrics::tau_star(self.two_j_a as f64 / 2.0, self.eps, self.xi)
    }
}

fn rk4_step<F>(rhs: &F, t: f64, h: f64, rho: &DMatrix<Complex64>) -> DMatrix<Complex64>
where
    F: Fn(f64, &DMatrix<Complex64>) -> DMatrix<Complex64>,
{
    let k1 = rhs(t, rho);
    let k2 = rhs(t + 0.5 * h, &(rho + &k1 * Complex64::new(0.5 * h, 0.0)));
    let k3 = rhs(t + 0.5 * h, &(rho + &k2 * Complex64::new(0.5 * h, 0.0)));
    let k4 = rhs(t + h, &(rho + &k3 * Complex64::new(h, 0.0)));
    rho + (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
        * Complex64::new(h / 6.0, 0.0)
}

fn integrate_impl(
    rho0: &DensityMatrix,
    params: &MasterEqParams,
    tau_grid: &[f64],
    forced_substep: Option<f64>,
) -> Result<Trajectory<DensityMatrix>> {
    if tau_grid.is_empty() || tau_grid[0] != 0.0 {
        return Err(Error::domain("time grid must start at 0"));
    }
    let dim = rho0.dim();
    let eps = params.eps;
    let g = params.dilation_factor();
    let kappa_sq = (params.coupling * params.energy_spread_a).powi(2);

    // Rotating frame: σ_mn(τ) = ρ_mn(τ) e^{−iω(1+g)τ} removes the drift
    // exactly, so the stepped equation is σ' = −κ² ω² q(τ) σ and the unitary
    // part can never leak into coherence magnitudes.
    let omega = |m: usize, n: usize| (m as f64 - n as f64) * eps;
    let rhs = move |t: f64, sigma: &DMatrix<Complex64>| {
        DMatrix::from_fn(dim, dim, |m, n| {
            let w = omega(m, n);
            if w == 0.0 {
                // populations (and any degenerate pair) are frozen
                return Complex64::default();
            }
            let q = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -w * t))
                / Complex64::new(0.0, w);
            -q * (kappa_sq * w * w) * sigma[(m, n)]
        })
    };

    // resolve both the fastest kernel phase and the branch-separation scale
    let step = forced_substep.unwrap_or_else(|| {
        let w_max = (dim as f64 - 1.0) * eps;
        let period = if w_max > 0.0 { TAU / w_max } else { f64::INFINITY };
        let scale = period.min(params.tau_star());
        if scale.is_finite() {
            scale / 200.0
        } else {
            let span = tau_grid.last().unwrap() - tau_grid[0];
            (span / 200.0).max(f64::MIN_POSITIVE)
        }
    });

    let unrotate = |sigma: &DMatrix<Complex64>, t: f64| {
        DMatrix::from_fn(dim, dim, |m, n| {
            sigma[(m, n)] * Complex64::from_polar(1.0, crate::numeric::reduce_angle(omega(m, n) * g * t))
        })
    };

    let mut sigma = rho0.matrix().clone();
    let mut samples = vec![rho0.clone()];
    for w in tau_grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let n_sub = (((t1 - t0) / step).ceil() as usize).max(1);
        let h = (t1 - t0) / n_sub as f64;
        let mut t = t0;
        for _ in 0..n_sub {
            sigma = rk4_step(&rhs, t, h, &sigma);
            t += h;
        }
        samples.push(DensityMatrix::new(unrotate(&sigma, t1))?);
    }
    Trajectory::new(tau_grid.to_vec(), samples)
}

/// Integrate the reduced master equation from `rho0` over an ascending grid
/// starting at 0. Snapshots are validated (Hermitian, unit trace) as they are
/// produced.
pub fn integrate_master_equation(
    rho0: &DensityMatrix,
    params: &MasterEqParams,
    tau_grid: &[f64],
) -> Result<Trajectory<DensityMatrix>> {
    integrate_impl(rho0, params, tau_grid, None)
}

/// Same integrator with an explicit substep, for convergence studies.
pub fn integrate_with_fixed_substep(
    rho0: &DensityMatrix,
    params: &MasterEqParams,
    tau_grid: &[f64],
    substep: f64,
) -> Result<Trajectory<DensityMatrix>> {
    if !(substep > 0.0) {
        return Err(Error::domain("substep must be positive"));
    }
    integrate_impl(rho0, params, tau_grid, Some(substep))
}

/// One row of the master-equation/exact comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub tau: f64,
    /// |ρ₀₁| from the exact reduced dynamics (closed form).
    pub exact: f64,
    /// |ρ₀₁| from the master equation.
    pub master: f64,
    pub rel_err: f64,
}

/// The master-equation error table plus the fitted log-log growth exponent of
/// the error.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterEqComparison {
    pub rows: Vec<ComparisonRow>,
    /// Slope of ln(rel_err) against ln(τ); NaN when there are fewer than two
    /// usable points.
    pub growth_exponent: f64,
}

/// Evolve clock B (spin j_B, starting at the equatorial coherent state) both
/// ways and compare the |ρ₀₁| coherence magnitudes. Comparing magnitudes
/// makes the result frame-independent.
pub fn compare_master_vs_exact(
    params: &MasterEqParams,
    two_j_b: u32,
    tau_grid: &[f64],
) -> Result<MasterEqComparison> {
    use crate::spin::{coherent_state, CoherentLabel, SpinSpace};
    let space = SpinSpace::new(two_j_b);
    let rho0 = coherent_state(&CoherentLabel::new(
        std::f64::consts::FRAC_PI_2,
        0.0,
        space,
    )?)
    .density();
    let traj = integrate_master_equation(&rho0, params, tau_grid)?;
    let mut rows = Vec::with_capacity(tau_grid.len());
    for (tau, rho_me) in traj.iter() {
        let rho_exact =
            reduced_b_coherent_closed_form(params.two_j_a, two_j_b, params.eps, params.eps, params.xi, tau)?;
        let exact = rho_exact.entry(0, 1).norm();
        let master = rho_me.entry(0, 1).norm();
        let rel_err = (master - exact).abs() / exact.max(f64::MIN_POSITIVE);
        rows.push(ComparisonRow { tau, exact, master, rel_err });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.tau > 0.0 && r.rel_err > 1e-14)
        .map(|r| (r.tau.ln(), r.rel_err.ln()))
        .collect();
    let growth_exponent = if pts.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        fit_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    Ok(MasterEqComparison { rows, growth_exponent })
}
