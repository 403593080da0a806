//! Coherence diagnostics, characteristic timescales, the decoherence-time map,
//! observer-distance bounds, and entanglement entropy.
//!
//! Scalar timescales come in two forms: dimensionless (Planck units, `tau_*`)
//! and SI (`t_*`, taking a [`PhysicalScales`]). The SI formulas are evaluated
//! directly; intermediate magnitudes like ħc⁴ stay well inside double range.

use crate::numeric::{ln_half_one_plus_cos, reduce_angle};
use crate::spin::DensityMatrix;
use crate::units::PhysicalScales;
use crate::{Error, Result};

/// Interferometric visibility of a qubit state: 2|ρ₀₁|.
pub fn visibility(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(rho.dim(), 2));
    }
    Ok(2.0 * rho.entry(0, 1).norm())
}

/// The N-partner visibility law [(1 + cos(τε²/ξ))/2]^n, evaluated in log
/// space so macroscopic n (10²³) cannot underflow term by term.
///
/// Note: the coherence of the reduced qubit state
/// [`crate::evolution::reduced_qubit_closed_form`] obeys
/// `visibility(ρ)² = visibility_law`, i.e. the law is the squared state
/// visibility; the decoherence time [`t_d`] is calibrated against this law.
pub fn visibility_law(n: f64, tau: f64, eps: f64, xi: f64) -> f64 {
    let theta = reduce_angle(tau * eps * eps / xi);
    (n * ln_half_one_plus_cos(theta)).exp()
}

/// Short-time Gaussian form of the visibility law: exp(−(√n τ ε²/(2ξ))²).
pub fn visibility_gaussian_approx(n: f64, tau: f64, eps: f64, xi: f64) -> f64 {
    let a = n.sqrt() * tau * eps * eps / (2.0 * xi);
    (-a * a).exp()
}

/// Two-clock maximal-mixing time in Planck units: τ_mix = πξ/ε².
pub fn tau_mix(eps: f64, xi: f64) -> f64 {
    std::f64::consts::PI * xi / (eps * eps)
}

/// Two-clock maximal-mixing time in seconds: t_mix = πħc⁴x/(G ΔE²).
pub fn t_mix(de: f64, x: f64, scales: &PhysicalScales) -> f64 {
    std::f64::consts::PI * scales.hbar() * scales.c().powi(4) * x / (scales.g() * de * de)
}

/// N-partner decoherence time in Planck units: τ_d = 2ξ/(√n ε²).
pub fn tau_d(n: f64, eps: f64, xi: f64) -> f64 {
    2.0 * xi / (n.sqrt() * eps * eps)
}

/// N-partner decoherence time in seconds: t_d = 2ħc⁴x/(√n G ΔE²).
pub fn t_d(n: f64, de: f64, x: f64, scales: &PhysicalScales) -> f64 {
    2.0 * scales.hbar() * scales.c().powi(4) * x / (n.sqrt() * scales.g() * de * de)
}

/// Classical-limit branch-separation time in Planck units:
/// τ* = ξ/(√(2 j_A) ε²).
pub fn tau_star(j_a: f64, eps: f64, xi: f64) -> f64 {
    xi / ((2.0 * j_a).sqrt() * eps * eps)
}

/// Classical-limit branch-separation time in seconds:
/// t* = ħc⁴x/(G √(2 j_A) ΔE²).
pub fn t_star(j_a: f64, de: f64, x: f64, scales: &PhysicalScales) -> f64 {
    scales.hbar() * scales.c().powi(4) * x / (scales.g() * (2.0 * j_a).sqrt() * de * de)
}

/// Effective angular separation of the coherent-state branches at time t:
/// Δφ_eff = G √(2 j_A) ΔE² t/(ħc⁴x) = t/t*.
pub fn effective_phase_spread(j_a: f64, de: f64, x: f64, t: f64, scales: &PhysicalScales) -> f64 {
    scales.g() * (2.0 * j_a).sqrt() * de * de * t / (scales.hbar() * scales.c().powi(4) * x)
}

/// Dimensionless form of [`effective_phase_spread`]: √(2 j_A) ε² τ/ξ.
pub fn effective_phase_spread_dimensionless(j_a: f64, eps: f64, xi: f64, tau: f64) -> f64 {
    (2.0 * j_a).sqrt() * eps * eps * tau / xi
}

/// The orthogonalisation-time / dilation-uncertainty pair of a clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyProduct {
    /// t⊥ = πħ/ΔE, seconds.
    pub t_perp: f64,
    /// Δt = t·G·ΔE/(c⁴x), seconds.
    pub delta_t: f64,
    /// t⊥·Δt = πħGt/(c⁴x), seconds²; independent of the energy gap.
    pub product: f64,
}

/// Evaluate the trade-off between clock precision and induced dilation
/// uncertainty. The product is computed from its gap-free closed form so a
/// vanishing gap cannot poison it with inf·0.
pub fn heuristic_uncertainty_product(de: f64, x: f64, t: f64, scales: &PhysicalScales) -> UncertaintyProduct {
    let t_perp = std::f64::consts::PI * scales.hbar() / de;
    let delta_t = t * scales.g() * de / (scales.c().powi(4) * x);
    let product = std::f64::consts::PI * scales.hbar() * scales.g() * t / (scales.c().powi(4) * x);
    UncertaintyProduct { t_perp, delta_t, product }
}

/// Schwarzschild radius of the total clock energy: r = 2GM/c², M = nΔE/c².
pub fn schwarzschild_radius(n: f64, de: f64, scales: &PhysicalScales) -> f64 {
    2.0 * scales.g() * n * de / scales.c().powi(4)
}

/// Log-spaced grids over the energy gap (J) and separation (m) for the
/// decoherence-time map, plus the partner count.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceMapConfig {
    de_grid: Vec<f64>,
    x_grid: Vec<f64>,
    n: f64,
}

impl DecoherenceMapConfig {
    pub fn new(de_grid: Vec<f64>, x_grid: Vec<f64>, n: f64) -> Result<Self> {
        for (name, grid) in [("de_grid", &de_grid), ("x_grid", &x_grid)] {
            if grid.is_empty() {
                return Err(Error::domain(format!("{name} must be nonempty")));
            }
            if grid.iter().any(|&v| !v.is_finite() || v <= 0.0) {
                return Err(Error::domain(format!("{name} must be strictly positive")));
            }
            if grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::domain(format!("{name} must be strictly ascending")));
            }
        }
        if !(n >= 1.0) {
            return Err(Error::domain(format!("partner count must be >= 1, got {n}")));
        }
        Ok(Self { de_grid, x_grid, n })
    }

    pub fn de_grid(&self) -> &[f64] {
        &self.de_grid
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

/// Decoherence time on a (ΔE, x) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceMap {
    cfg: DecoherenceMapConfig,
    /// row-major: values[ix * n_de + ide]
    values: Vec<f64>,
}

impl DecoherenceMap {
    pub fn config(&self) -> &DecoherenceMapConfig {
        &self.cfg
    }

    /// t_d at (x index, ΔE index).
    pub fn value(&self, ix: usize, ide: usize) -> f64 {
        self.values[ix * self.cfg.de_grid.len() + ide]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iso-contour t_d = level: one (ΔE, x) point per grid column where the
    /// level is bracketed, interpolated linearly in log-log coordinates
    /// (exact for the pure power law t_d ∝ x).
    pub fn contour(&self, level: f64) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        let lnl = level.ln();
        for (ide, &de) in self.cfg.de_grid.iter().enumerate() {
            for ix in 0..self.cfg.x_grid.len() - 1 {
                let (t0, t1) = (self.value(ix, ide), self.value(ix + 1, ide));
                let (l0, l1) = (t0.ln(), t1.ln());
                if (l0 - lnl) * (l1 - lnl) <= 0.0 && l0 != l1 {
                    let s = (lnl - l0) / (l1 - l0);
                    let lx = self.cfg.x_grid[ix].ln() + s * (self.cfg.x_grid[ix + 1].ln() - self.cfg.x_grid[ix].ln());
                    pts.push((de, lx.exp()));
                    break;
                }
            }
        }
        pts
    }
}

/// Evaluate t_d over the whole grid.
pub fn decoherence_map(cfg: &DecoherenceMapConfig, scales: &PhysicalScales) -> DecoherenceMap {
    let mut values = Vec::with_capacity(cfg.x_grid.len() * cfg.de_grid.len());
    for &x in &cfg.x_grid {
        for &de in &cfg.de_grid {
            values.push(t_d(cfg.n, de, x, scales));
        }
    }
    DecoherenceMap { cfg: cfg.clone(), values }
}

/// Squared overlap of the far observer's clock states conditioned on the two
/// extreme energy configurations of the observed pair:
/// (1/4^j)(1 + cos arg)^{2j} with arg = 2GΔEε_C t/(ħc⁴r).
pub fn observer_overlap(two_j: u32, eps_c: f64, de: f64, t: f64, r: f64, scales: &PhysicalScales) -> f64 {
    let arg = observer_phase_arg(eps_c, de, t, r, scales);
    observer_overlap_from_arg(two_j, arg)
}

/// Dimensionless variant: arg = 2 ε ε_C τ / ξ_r.
pub fn observer_overlap_dimensionless(two_j: u32, eps_c: f64, eps: f64, tau: f64, xi_r: f64) -> f64 {
    observer_overlap_from_arg(two_j, 2.0 * eps * eps_c * tau / xi_r)
}

/// The relative phase accumulated between the two observer-clock branches.
pub fn observer_phase_arg(eps_c: f64, de: f64, t: f64, r: f64, scales: &PhysicalScales) -> f64 {
    2.0 * scales.g() * de * eps_c * t / (scales.hbar() * scales.c().powi(4) * r)
}

/// Core of the overlap formula, stable for large j and tiny arguments.
pub fn observer_overlap_from_arg(two_j: u32, arg: f64) -> f64 {
    (two_j as f64 * ln_half_one_plus_cos(reduce_angle(arg))).exp()
}

/// Leading-order expansion of the overlap, 1 − 2j·arg².
pub fn observer_overlap_quadratic(two_j: u32, arg: f64) -> f64 {
    1.0 - two_j as f64 * arg * arg
}

/// Distance beyond which the observer cannot distinguish the two extreme
/// energy configurations at accuracy δ: r > 2√(2j) GΔEε_C t/(ħc⁴√δ).
pub fn min_observer_distance(
    delta: f64,
    two_j: u32,
    eps_c: f64,
    de: f64,
    t: f64,
    scales: &PhysicalScales,
) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    Ok(2.0 * (two_j as f64).sqrt() * scales.g() * de * eps_c * t
        / (scales.hbar() * scales.c().powi(4) * delta.sqrt()))
}

/// Von Neumann entropy in bits: −Σ λ log₂ λ over the spectrum of ρ.
pub fn entanglement_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.log2())
        .sum()
}
