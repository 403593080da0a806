//! Physical constants, Planck units, and conversion between SI quantities and
//! the dimensionless variables (τ, ε, ξ) used by the evolution code.

use crate::{Error, Result};

/// CODATA 2018 gravitational constant, m³ kg⁻¹ s⁻².
pub const CODATA_G: f64 = 6.674_30e-11;
/// Speed of light, m/s (exact).
pub const CODATA_C: f64 = 299_792_458.0;
/// CODATA 2018 reduced Planck constant, J·s.
pub const CODATA_HBAR: f64 = 1.054_571_817e-34;

/// Electronvolt in joules (exact, SI 2019).
pub const EV: f64 = 1.602_176_634e-19;

/// The constants (G, c, ħ) and the Planck units derived from them.
///
/// `l_p = √(ħG/c³)`, `t_p = l_p/c`, `e_p = ħ/t_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    g: f64,
    c: f64,
    hbar: f64,
    l_p: f64,
    t_p: f64,
    e_p: f64,
}

impl PhysicalScales {
    /// Build scales from explicit constants. All must be finite and positive.
    pub fn new(g: f64, c: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("G", g), ("c", c), ("hbar", hbar)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(format!("constant {name} must be positive, got {v}")));
            }
        }
        let l_p = (hbar * g / c.powi(3)).sqrt();
        let t_p = l_p / c;
        let e_p = hbar / t_p;
        Ok(Self { g, c, hbar, l_p, t_p, e_p })
    }

    /// CODATA 2018 values.
    pub fn codata() -> Self {
        Self::new(CODATA_G, CODATA_C, CODATA_HBAR).expect("CODATA constants are positive")
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Planck length in meters.
    pub fn planck_length(&self) -> f64 {
        self.l_p
    }

    /// Planck time in seconds.
    pub fn planck_time(&self) -> f64 {
        self.t_p
    }

    /// Planck energy in joules.
    pub fn planck_energy(&self) -> f64 {
        self.e_p
    }
}

impl Default for PhysicalScales {
    fn default() -> Self {
        Self::codata()
    }
}

/// Time, energy gap and distance in Planck units: τ = t/t_P, ε = ΔE/E_P,
/// ξ = x/l_P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub tau: f64,
    pub epsilon: f64,
    pub xi: f64,
}

impl DimensionlessParams {
    /// Validates ξ > 0, ε ≥ 0, τ ≥ 0.
    pub fn new(tau: f64, epsilon: f64, xi: f64) -> Result<Self> {
        if !xi.is_finite() || xi <= 0.0 {
            return Err(Error::domain(format!("xi must be positive, got {xi}")));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::domain(format!("epsilon must be nonnegative, got {epsilon}")));
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::domain(format!("tau must be nonnegative, got {tau}")));
        }
        Ok(Self { tau, epsilon, xi })
    }
}

/// Convert SI (seconds, joules, meters) into Planck-unit form.
pub fn to_dimensionless(t: f64, de: f64, x: f64, scales: &PhysicalScales) -> Result<DimensionlessParams> {
    DimensionlessParams::new(t / scales.planck_time(), de / scales.planck_energy(), x / scales.planck_length())
}

/// Convert Planck-unit form back into SI `(seconds, joules, meters)`.
pub fn from_dimensionless(p: &DimensionlessParams, scales: &PhysicalScales) -> (f64, f64, f64) {
    (
        p.tau * scales.planck_time(),
        p.epsilon * scales.planck_energy(),
        p.xi * scales.planck_length(),
    )
}
