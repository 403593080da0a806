//! Coarse-grained time measurement: the azimuthal-bin POVM, bin
//! probabilities, the pointer operator, and the derived timescales.
//!
//! Matrix elements are analytic. In the excitation basis the coherent-state
//! projector factorizes into a θ part and a φ part:
//!
//! ```text
//! ⟨m|θ,φ⟩⟨θ,φ|n⟩ = √(C(2j,m)C(2j,n)) cos^{4j−m−n}(θ/2) sin^{m+n}(θ/2) e^{i(m−n)φ}
//! ```
//!
//! so ∫ sinθ dθ reduces to a Beta function on each (m,n) and the φ integrals
//! over a bin (or weighted by φ) close in elementary form. Quadrature exists
//! only as a test oracle.
//!
//! All quantities are dimensionless (ħ = 1): gaps are ε in Planck energies,
//! pointer readings are τ in Planck times. The azimuthal branch cut sits at
//! φ = 0; states straddling it are outside the pointer operator's faithful
//! regime.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::numeric::{ln_beta_half, ln_factorial_table, reduce_angle};
use crate::spin::{DensityMatrix, SpinSpace};
use crate::units::PhysicalScales;
use crate::{Error, Result};

/// Θ(m,n) = √(C(2j,m)C(2j,n)) · 2·B((m+n)/2 + 1, 2j − (m+n)/2 + 1), the
/// θ-integral common to every azimuthal operator on the space.
fn theta_integral_matrix(space: SpinSpace) -> DMatrix<f64> {
    let two_j = space.two_j() as usize;
    let dim = space.dim();
    let lnf = ln_factorial_table(two_j.max(1));
    let ln_binom = |k: usize| lnf[two_j] - lnf[k] - lnf[two_j - k];
    DMatrix::from_fn(dim, dim, |m, n| {
        // 2a = (m+n) + 2, 2b = (4j − m − n) + 2 with 4j = 2·two_j
        let two_a = (m + n + 2) as u64;
        let two_b = (2 * two_j - (m + n) + 2) as u64;
        (0.5 * (ln_binom(m) + ln_binom(n)) + ln_beta_half(two_a, two_b)).exp() * 2.0
    })
}

/// The azimuthal-bin POVM: `num_bins` positive operators tiling φ ∈ [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct BinPOVM {
    space: SpinSpace,
    bin_width: f64,
    elements: Vec<DMatrix<Complex64>>,
}

impl BinPOVM {
    pub fn space(&self) -> SpinSpace {
        self.space
    }

    /// The recomputed bin width 2π / num_bins.
    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn num_bins(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, k: usize) -> &DMatrix<Complex64> {
        &self.elements[k]
    }

    pub fn elements(&self) -> &[DMatrix<Complex64>] {
        &self.elements
    }

    /// Center angle of bin k (bins are [kR, (k+1)R)).
    pub fn bin_center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.bin_width
    }

    /// Which bin an angle falls into.
    pub fn bin_of_angle(&self, phi: f64) -> usize {
        let k = (reduce_angle(phi) / self.bin_width) as usize;
        k.min(self.num_bins() - 1)
    }

    /// Σ_k M_k, which must resolve the identity.
    pub fn completeness_sum(&self) -> DMatrix<Complex64> {
        let dim = self.space.dim();
        let mut s = DMatrix::zeros(dim, dim);
        for m in &self.elements {
            s += m;
        }
        s
    }
}

/// Build the POVM with resolution `r`. 2π/r is rounded to the nearest
/// integer bin count and the width recomputed accordingly.
pub fn build_povm(space: SpinSpace, r: f64) -> Result<BinPOVM> {
    if !r.is_finite() || r <= 0.0 || r > TAU {
        return Err(Error::domain(format!("bin width must lie in (0, 2π], got {r}")));
    }
    let num_bins = (TAU / r).round().max(1.0) as usize;
    let width = TAU / num_bins as f64;
    let theta = theta_integral_matrix(space);
    let dim = space.dim();
    let prefactor = (space.two_j() as f64 + 1.0) / (4.0 * PI);
    let mut elements = Vec::with_capacity(num_bins);
    for k in 0..num_bins {
        let (lo, hi) = (k as f64 * width, (k as f64 + 1.0) * width);
        let m = DMatrix::from_fn(dim, dim, |mi, ni| {
            let d = mi as i64 - ni as i64;
            let phi_int = if d == 0 {
                Complex64::new(width, 0.0)
            } else {
                let df = d as f64;
                (Complex64::from_polar(1.0, df * hi) - Complex64::from_polar(1.0, df * lo))
                    / Complex64::new(0.0, df)
            };
            phi_int * (prefactor * theta[(mi, ni)])
        });
        elements.push(m);
    }
    Ok(BinPOVM { space, bin_width: width, elements })
}

/// p_k = Tr(M_k ρ) for every bin.
pub fn bin_probabilities(rho: &DensityMatrix, povm: &BinPOVM) -> Result<Vec<f64>> {
    if rho.dim() != povm.space.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), povm.space.dim()));
    }
    let dim = rho.dim();
    Ok(povm
        .elements
        .iter()
        .map(|m| {
            let mut tr = Complex64::default();
            for i in 0..dim {
                for k in 0..dim {
                    tr += m[(i, k)] * rho.entry(k, i);
                }
            }
            tr.re
        })
        .collect())
}

/// The pointer-position operator: φ-weighted integral of coherent projectors,
/// scaled to carry time units, T = (2j+1)/(4πε) ∫ sinθ dθ ∫ φ |θ,φ⟩⟨θ,φ| dφ.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerOperator {
    space: SpinSpace,
    eps: f64,
    matrix: DMatrix<Complex64>,
}

impl PointerOperator {
    pub fn space(&self) -> SpinSpace {
        self.space
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Build the pointer operator for a clock with gap ε (Planck energies).
/// The reading is in Planck times.
pub fn pointer_operator(space: SpinSpace, eps: f64) -> Result<PointerOperator> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::domain(format!(
            "pointer time scale undefined for energy gap {eps}"
        )));
    }
    let theta = theta_integral_matrix(space);
    let dim = space.dim();
    let prefactor = (space.two_j() as f64 + 1.0) / (4.0 * PI * eps);
    let matrix = DMatrix::from_fn(dim, dim, |mi, ni| {
        let d = mi as i64 - ni as i64;
        // ∫₀^{2π} φ e^{idφ} dφ = 2π² for d = 0, else 2π/(id)
        let phi_moment = if d == 0 {
            Complex64::new(2.0 * PI * PI, 0.0)
        } else {
            Complex64::new(0.0, -TAU / d as f64) // 2π/(id) = −2πi/d
        };
        phi_moment * (prefactor * theta[(mi, ni)])
    });
    Ok(PointerOperator { space, eps, matrix })
}

/// Mean and standard deviation of the pointer reading on a state:
/// (Tr(Tρ), √(Tr(T²ρ) − mean²)).
pub fn pointer_statistics(rho: &DensityMatrix, t: &PointerOperator) -> Result<(f64, f64)> {
    if rho.dim() != t.space.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), t.space.dim()));
    }
    let t_rho = &t.matrix * rho.matrix();
    let dim = rho.dim();
    let mut mean = Complex64::default();
    for i in 0..dim {
        mean += t_rho[(i, i)];
    }
    let t2_rho = &t.matrix * &t_rho;
    let mut second = Complex64::default();
    for i in 0..dim {
        second += t2_rho[(i, i)];
    }
    let var = (second.re - mean.re * mean.re).max(0.0);
    Ok((mean.re, var.sqrt()))
}

/// Orthogonalisation time of a two-level clock, t⊥ = πħ/ΔE (seconds).
pub fn orthogonalisation_time(de: f64, scales: &PhysicalScales) -> f64 {
    PI * scales.hbar() / de
}

/// Dimensionless orthogonalisation time: τ⊥ = π/ε.
pub fn tau_perp(eps: f64) -> f64 {
    PI / eps
}

/// Time for the qubit clock's mean pointer reading to shift by its own
/// spread, ħ/ΔE (seconds).
pub fn pointer_resolution_time(de: f64, scales: &PhysicalScales) -> f64 {
    scales.hbar() / de
}

/// Dimensionless form of [`pointer_resolution_time`]: 1/ε.
pub fn tau_pointer_resolution(eps: f64) -> f64 {
    1.0 / eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{coherent_state, CoherentLabel, StateVector};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    fn equatorial(phi: f64, two_j: u32) -> StateVector {
        coherent_state(&CoherentLabel::new(FRAC_PI_2, phi, SpinSpace::new(two_j)).unwrap())
    }

    fn max_norm(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn single_bin_povm_is_identity() {
        let povm = build_povm(SpinSpace::new(9), TAU).unwrap();
        assert_eq!(povm.num_bins(), 1);
        let eye = DMatrix::<Complex64>::identity(10, 10);
        assert!(max_norm(&(povm.element(0) - eye)) < 1e-12);
    }

    #[test]
    fn completeness_across_spins_and_bins() {
        for &two_j in &[1u32, 10, 100, 200] {
            for &bins in &[4usize, 16, 64] {
                let space = SpinSpace::new(two_j);
                let povm = build_povm(space, TAU / bins as f64).unwrap();
                let eye = DMatrix::<Complex64>::identity(space.dim(), space.dim());
                let dev = max_norm(&(povm.completeness_sum() - eye));
                assert!(dev < 1e-10, "2j={two_j} bins={bins}: deviation {dev}");
            }
        }
    }

    #[test]
    fn povm_diagonals_are_uniform() {
        // every diagonal entry of every element is R/(2π)
        let povm = build_povm(SpinSpace::new(13), TAU / 8.0).unwrap();
        for m in povm.elements() {
            for i in 0..14 {
                assert_abs_diff_eq!(m[(i, i)].re, 1.0 / 8.0, epsilon = 1e-12);
                assert_abs_diff_eq!(m[(i, i)].im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn povm_elements_are_positive() {
        for &two_j in &[1u32, 11, 100] {
            let povm = build_povm(SpinSpace::new(two_j), TAU / 16.0).unwrap();
            for m in povm.elements() {
                let min = m
                    .clone()
                    .symmetric_eigenvalues()
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min);
                assert!(min > -1e-10, "2j={two_j}: min eigenvalue {min}");
            }
        }
    }

    #[test]
    fn bin_count_rounding() {
        // 2π/R = 6.9 rounds to 7 bins with recomputed width
        let povm = build_povm(SpinSpace::new(3), TAU / 6.9).unwrap();
        assert_eq!(povm.num_bins(), 7);
        assert_abs_diff_eq!(povm.bin_width(), TAU / 7.0, epsilon = 1e-15);
        assert!(build_povm(SpinSpace::new(3), 0.0).is_err());
        assert!(build_povm(SpinSpace::new(3), 7.0).is_err());
    }

    #[test]
    fn mixed_state_bins_uniformly() {
        let space = SpinSpace::new(21);
        let povm = build_povm(space, TAU / 16.0).unwrap();
        let p = bin_probabilities(&DensityMatrix::maximally_mixed(space.dim()), &povm).unwrap();
        for &pk in &p {
            assert_abs_diff_eq!(pk, 1.0 / 16.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn centered_coherent_state_occupies_one_bin() {
        // j = 100 and 16 bins: > 0.95 in the central bin
        let space = SpinSpace::new(200);
        let povm = build_povm(space, TAU / 16.0).unwrap();
        let rho = equatorial(povm.bin_center(3), 200).density();
        let p = bin_probabilities(&rho, &povm).unwrap();
        assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        assert!(p[3] > 0.95, "central bin holds {}", p[3]);
        let others: f64 = p.iter().enumerate().filter(|(k, _)| *k != 3).map(|(_, v)| v).sum();
        assert!(others < 0.05);
    }

    #[test]
    fn probabilities_ignore_global_phase() {
        let space = SpinSpace::new(40);
        let povm = build_povm(space, TAU / 8.0).unwrap();
        let psi = equatorial(1.9, 40);
        let mut rotated = psi.amplitudes().clone();
        rotated *= Complex64::from_polar(1.0, 0.77);
        let a = bin_probabilities(&psi.density(), &povm).unwrap();
        let b = bin_probabilities(&StateVector::new(rotated).unwrap().density(), &povm).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-13);
        }
    }

    #[test]
    fn pointer_mean_on_mixed_state_is_half_period() {
        // ⟨T⟩ = π/ε on the maximally mixed state (φ uniform on [0, 2π))
        let eps = 0.25;
        let t = pointer_operator(SpinSpace::new(30), eps).unwrap();
        let (mean, _) = pointer_statistics(&DensityMatrix::maximally_mixed(31), &t).unwrap();
        assert_relative_eq!(mean, PI / eps, max_relative = 1e-10);
        assert!(pointer_operator(SpinSpace::new(4), 0.0).is_err());
    }

    #[test]
    fn pointer_is_hermitian() {
        let t = pointer_operator(SpinSpace::new(17), 0.3).unwrap();
        let m = t.matrix();
        for i in 0..m.nrows() {
            for k in 0..m.ncols() {
                assert_abs_diff_eq!((m[(i, k)] - m[(k, i)].conj()).norm(), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn pointer_reads_coherent_phase_at_large_j() {
        // ⟨T⟩ → φ₀/ε; at j = 200 the φ₀ = π/2 reading is within 2%
        let eps = 0.2;
        let t = pointer_operator(SpinSpace::new(400), eps).unwrap();
        let rho = equatorial(FRAC_PI_2, 400).density();
        let (mean, _) = pointer_statistics(&rho, &t).unwrap();
        assert!(
            (mean - FRAC_PI_2 / eps).abs() / (FRAC_PI_2 / eps) < 0.02,
            "⟨T⟩ = {mean}, want ≈ {}",
            FRAC_PI_2 / eps
        );
    }

    #[test]
    fn pointer_phase_error_decreases_with_j() {
        // monotone decrease until the error hits the floating-point floor of
        // the trace sums (hence the absolute slack)
        let eps = 1.0;
        for &phi0 in &[0.7, 1.5, 3.0, 5.5] {
            let mut last = f64::INFINITY;
            for &two_j in &[20u32, 80, 320] {
                let t = pointer_operator(SpinSpace::new(two_j), eps).unwrap();
                let (mean, _) = pointer_statistics(&equatorial(phi0, two_j).density(), &t).unwrap();
                let err = (mean - phi0).abs();
                assert!(
                    err <= last + 1e-11,
                    "phi0={phi0} 2j={two_j}: error {err} grew past {last}"
                );
                last = err;
            }
        }
    }

    #[test]
    fn pointer_spread_shrinks_against_bin_width() {
        let eps = 1.0;
        let bin = TAU / 16.0;
        let mut last = f64::INFINITY;
        for &two_j in &[20u32, 80, 320] {
            let t = pointer_operator(SpinSpace::new(two_j), eps).unwrap();
            let (_, sd) = pointer_statistics(&equatorial(2.5, two_j).density(), &t).unwrap();
            let ratio = sd * eps / bin; // spread in angle units over bin width
            assert!(ratio < last);
            last = ratio;
        }
        assert!(last < 0.2, "spread/bin ratio at j=160 is {last}");
    }

    #[test]
    fn pointer_spread_on_isotropic_state() {
        // uniform φ on [0, 2π) has σ = π/√3 in angle, so σ_T → π/(√3 ε).
        // Smoothing across the φ = 0 cut biases the spread low by O(j^{−1/2}),
        // so convergence to the uniform moments is slow: check the value at
        // j = 200 together with the j^{−1/2} shrink rate of the deviation.
        let eps = 0.5;
        let want = PI / 3f64.sqrt() / eps;
        let dev = |two_j: u32| {
            let t = pointer_operator(SpinSpace::new(two_j), eps).unwrap();
            let (_, sd) =
                pointer_statistics(&DensityMatrix::maximally_mixed(two_j as usize + 1), &t).unwrap();
            assert!(sd < want, "cut smoothing can only reduce the spread");
            (want - sd) / want
        };
        let (d50, d200) = (dev(100), dev(400));
        assert!(d200 < 0.05, "relative deviation at j = 200 is {d200}");
        assert!((d50 / d200 - 2.0).abs() < 0.3, "deviation ratio {} not ≈ 2", d50 / d200);
    }

    #[test]
    fn two_branch_mixture_spread_converges() {
        // equal mixture at φ₀, φ₁ → σ_T → |φ₁ − φ₀|/(2ε) as j grows
        let eps = 0.4;
        let (phi0, phi1) = (1.2, 2.6);
        let want = (phi1 - phi0) / (2.0 * eps);
        let mut last = f64::INFINITY;
        for &two_j in &[40u32, 160, 400] {
            let t = pointer_operator(SpinSpace::new(two_j), eps).unwrap();
            let rho = DensityMatrix::mixture(&[
                (0.5, equatorial(phi0, two_j)),
                (0.5, equatorial(phi1, two_j)),
            ])
            .unwrap();
            let (_, sd) = pointer_statistics(&rho, &t).unwrap();
            let err = (sd - want).abs() / want;
            assert!(err < last);
            last = err;
        }
        assert!(last < 0.05, "relative deviation at j = 200 is {last}");
    }

    #[test]
    fn coarse_measurement_barely_disturbs_localized_states() {
        // Lüders update with √M_k on a j = 100 state inside a 2π/8 bin
        let two_j = 200u32;
        let space = SpinSpace::new(two_j);
        let povm = build_povm(space, TAU / 8.0).unwrap();
        let psi = equatorial(povm.bin_center(2), two_j);
        let p = bin_probabilities(&psi.density(), &povm).unwrap();
        let k = 2;
        // √M via eigendecomposition
        let eig = povm.element(k).clone().symmetric_eigen();
        let mut sqrt_m = DMatrix::<Complex64>::zeros(space.dim(), space.dim());
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(i);
            let s = l.max(0.0).sqrt();
            for a in 0..space.dim() {
                for b in 0..space.dim() {
                    sqrt_m[(a, b)] += Complex64::new(s, 0.0) * v[a] * v[b].conj();
                }
            }
        }
        let updated = &sqrt_m * psi.amplitudes();
        let fidelity = psi.amplitudes().dotc(&updated).norm_sqr() / p[k];
        assert!(fidelity > 0.99, "post-measurement fidelity {fidelity}");
    }

    #[test]
    fn orthogonalisation_and_resolution_times() {
        let s = PhysicalScales::codata();
        assert_relative_eq!(
            orthogonalisation_time(s.planck_energy(), &s),
            PI * s.planck_time(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            orthogonalisation_time(2.0 * s.planck_energy(), &s),
            0.5 * PI * s.planck_time(),
            max_relative = 1e-12
        );
        assert_relative_eq!(pointer_resolution_time(s.planck_energy(), &s), s.planck_time(), max_relative = 1e-12);
        assert_abs_diff_eq!(tau_perp(0.5), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(tau_pointer_resolution(0.5), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn evolved_clock_is_orthogonal_at_t_perp() {
        // (|0⟩+|1⟩)/√2 evolved for τ⊥ = π/ε lands on (|0⟩−|1⟩)/√2
        use crate::evolution::evolve_exact;
        use crate::hamiltonian::{internal_hamiltonian, ClockSpec};
        let eps = 0.7;
        let h = internal_hamiltonian(&ClockSpec::qubit(eps).unwrap());
        let psi0 = equatorial(0.0, 1);
        let psi = evolve_exact(&psi0, &h, tau_perp(eps)).unwrap();
        let ov = crate::spin::overlap(&psi0, &psi).unwrap();
        assert!(ov.norm() < 1e-12, "overlap at t⊥ is {}", ov.norm());
    }
}
