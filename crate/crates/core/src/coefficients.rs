//! Roughness intensity and the homogenized Poiseuille/Couette coefficients.
//!
//! With `N` the roughness intensity and
//!
//! ```text
//! I1(N) = ∫0^1 exp(N s²/2) ds
//! I2(N) = ∫0^1 exp(-N t²/2) dt
//! I3(N) = ∫0^1 ∫0^s exp(N (s² - t²)/2) dt ds
//! ```
//!
//! the coefficients are
//!
//! ```text
//! A(N) = (12/N) (e^{N/2} I2 - 1) - (12/N) (e^{N/2} - 1) I3 / I1
//! B(N) = (e^{N/2} - 1) / (N I1)
//! ```
//!
//! Both have removable singularities at `N = 0`, where `A = 1` and `B = 1/2`
//! (the classical Reynolds equation). `A` is evaluated through one of two
//! algebraically equivalent rearrangements so that neither the `12/N` prefactor
//! at small `N` nor the `e^{N/2}` growth at large `N` cancels away the digits.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{self, Anchor};

/// Largest supported roughness intensity; `e^{N/2}` stays far from overflow.
pub const N_MAX: f64 = 700.0;

/// Below this intensity the coefficients use their first-order Taylor expansions.
pub const N_SWITCH: f64 = 1e-6;

/// Crossover between the `expm1` rearrangement of `A` and the scaled one.
const N_SCALED: f64 = 4.0;

const KERNEL_TOL: f64 = 1e-13;

/// Cell-averaged squared gradient of the oscillating part of the gap.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct RoughnessIntensity(f64);

impl RoughnessIntensity {
    pub const SMOOTH: RoughnessIntensity = RoughnessIntensity(0.0);

    pub fn new(value: f64) -> Result<Self> {
        check_intensity(value)?;
        Ok(RoughnessIntensity(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn coefficients(self) -> Result<CoefficientPair> {
        CoefficientPair::at(self.0)
    }
}

/// Poiseuille correction `a` and Couette correction `b` at one intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientPair {
    pub a: f64,
    pub b: f64,
}

impl CoefficientPair {
    pub const CLASSICAL: CoefficientPair = CoefficientPair { a: 1.0, b: 0.5 };

    pub fn at(n: f64) -> Result<Self> {
        Ok(CoefficientPair {
            a: coeff_a(n)?,
            b: coeff_b(n)?,
        })
    }
}

fn check_intensity(n: f64) -> Result<()> {
    if n.is_finite() && (0.0..=N_MAX).contains(&n) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "roughness intensity",
            value: n,
            expected: "0 <= N <= 700",
        })
    }
}

/// `∫0^1 exp(n s²/2) ds`
pub fn kernel_i1(n: f64) -> Result<f64> {
    check_intensity(n)?;
    if n == 0.0 {
        return Ok(1.0);
    }
    quadrature::integrate(|s| (0.5 * n * s * s).exp(), 0.0, 1.0, KERNEL_TOL)
}

/// `∫0^1 exp(-n t²/2) dt`
pub fn kernel_i2(n: f64) -> Result<f64> {
    check_intensity(n)?;
    if n == 0.0 {
        return Ok(1.0);
    }
    quadrature::integrate(|t| (-0.5 * n * t * t).exp(), 0.0, 1.0, KERNEL_TOL)
}

/// `∫0^1 ∫0^s exp(n (s² - t²)/2) dt ds`, computed as `∫0^1 e^{n s²/2} G(s) ds`
/// with `G(s) = ∫0^s e^{-n t²/2} dt` accumulated on the outer grid.
pub fn kernel_i3(n: f64) -> Result<f64> {
    check_intensity(n)?;
    if n == 0.0 {
        return Ok(0.5);
    }
    iterated_kernel(n, Anchor::Lower)
}

/// Upper-triangle companion of `kernel_i3`: `∫0^1 ∫s^1 exp(-n (t² - s²)/2) dt ds`.
/// Bounded by 1/2 for every `n`.
fn kernel_tail(n: f64) -> Result<f64> {
    iterated_kernel(n, Anchor::Upper)
}

fn iterated_kernel(n: f64, anchor: Anchor) -> Result<f64> {
    let outer = |s: f64| (0.5 * n * s * s).exp();
    let inner = |t: f64| (-0.5 * n * t * t).exp();
    quadrature::refine(
        |panels| quadrature::iterated(&outer, &inner, 0.0, 1.0, panels, anchor),
        KERNEL_TOL,
    )
}

/// `e^{-n/2} I1(n) = ∫0^1 exp(-n (1 - s²)/2) ds`
fn kernel_i1_scaled(n: f64) -> Result<f64> {
    quadrature::integrate(|s| (-0.5 * n * (1.0 - s * s)).exp(), 0.0, 1.0, KERNEL_TOL)
}

/// `e^{n/2} I2(n) - 1 = ∫0^1 expm1(n (1 - t²)/2) dt`
fn kernel_i2_excess(n: f64) -> Result<f64> {
    quadrature::integrate(|t| (0.5 * n * (1.0 - t * t)).exp_m1(), 0.0, 1.0, KERNEL_TOL)
}

/// Poiseuille coefficient `A(n)`.
pub fn coeff_a(n: f64) -> Result<f64> {
    check_intensity(n)?;
    if n < N_SWITCH {
        return Ok(1.0 + n / 20.0);
    }
    let i1 = kernel_i1(n)?;
    let i3 = kernel_i3(n)?;
    let bracket = if n <= N_SCALED {
        // (e^{n/2} I2 - 1) - (e^{n/2} - 1) I3/I1, both terms O(n)
        kernel_i2_excess(n)? - (0.5 * n).exp_m1() * i3 / i1
    } else {
        // e^{n/2} (I1 I2 - I3) / I1 collapses to tail / (e^{-n/2} I1)
        kernel_tail(n)? / kernel_i1_scaled(n)? + i3 / i1 - 1.0
    };
    Ok(12.0 * bracket / n)
}

/// Couette coefficient `B(n)`.
pub fn coeff_b(n: f64) -> Result<f64> {
    check_intensity(n)?;
    if n < N_SWITCH {
        return Ok(0.5 + n / 24.0);
    }
    Ok((0.5 * n).exp_m1() / n / kernel_i1(n)?)
}

/// Intensity of the ripple `amplitude · cos(2π · wavenumber · X₁)` over a fully
/// rough unit cell.
pub fn n_psi_cosine(amplitude: f64, wavenumber: u32) -> Result<f64> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::Domain {
            what: "rugosity amplitude",
            value: amplitude,
            expected: "amplitude >= 0",
        });
    }
    if wavenumber < 1 {
        return Err(Error::Domain {
            what: "rugosity wavenumber",
            value: wavenumber as f64,
            expected: "wavenumber >= 1",
        });
    }
    let k = 2.0 * PI * wavenumber as f64;
    Ok(0.5 * amplitude * amplitude * k * k)
}

/// Intensity from gradient samples on a uniform periodic grid of the unit cell.
///
/// `shape` gives the point count per torus direction, `gradients` the gradient
/// vector at every grid point (any fixed ordering). The periodic trapezoid rule
/// reduces to the plain average of `|∇h₂|²` since the cell has unit volume.
pub fn n_psi_tabulated(shape: &[usize], gradients: &[Vec<f64>]) -> Result<f64> {
    if shape.is_empty() || gradients.is_empty() {
        return Err(Error::Shape("empty gradient sample grid".into()));
    }
    if let Some(&bad) = shape.iter().find(|&&m| m < 2) {
        return Err(Error::Shape(format!(
            "need at least 2 samples per direction, got {bad}"
        )));
    }
    let expected: usize = shape.iter().product();
    if gradients.len() != expected {
        return Err(Error::Shape(format!(
            "grid shape {shape:?} needs {expected} samples, got {}",
            gradients.len()
        )));
    }
    if let Some(g) = gradients.iter().find(|g| g.len() != shape.len()) {
        return Err(Error::Shape(format!(
            "gradient vectors must have {} components, found {}",
            shape.len(),
            g.len()
        )));
    }
    let sum: f64 = gradients
        .iter()
        .map(|g| g.iter().map(|c| c * c).sum::<f64>())
        .sum();
    Ok(sum / expected as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_at_zero() {
        assert_eq!(kernel_i1(0.0).unwrap(), 1.0);
        assert_eq!(kernel_i2(0.0).unwrap(), 1.0);
        assert_eq!(kernel_i3(0.0).unwrap(), 0.5);
        let separable = kernel_i1(0.0).unwrap() * kernel_i2(0.0).unwrap() / 2.0;
        assert_eq!(kernel_i3(0.0).unwrap(), separable);
    }

    #[test]
    fn kernels_reject_out_of_domain() {
        for n in [-1.0, 700.5, f64::NAN, f64::INFINITY] {
            assert!(matches!(kernel_i1(n), Err(Error::Domain { .. })));
            assert!(matches!(kernel_i2(n), Err(Error::Domain { .. })));
            assert!(matches!(kernel_i3(n), Err(Error::Domain { .. })));
            assert!(coeff_a(n).is_err());
            assert!(coeff_b(n).is_err());
        }
    }

    #[test]
    fn i2_stays_in_unit_interval() {
        let v = kernel_i2(50.0).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn classical_limit_is_exact() {
        assert_eq!(coeff_a(0.0).unwrap(), 1.0);
        assert_eq!(coeff_b(0.0).unwrap(), 0.5);
        assert_eq!(CoefficientPair::at(0.0).unwrap(), CoefficientPair::CLASSICAL);
    }

    #[test]
    fn calibration_at_two() {
        let a = coeff_a(2.0).unwrap();
        let b = coeff_b(2.0).unwrap();
        assert!((a - 1.08696).abs() <= 5e-5, "a = {a}");
        assert!((b - 0.58739).abs() <= 5e-5, "b = {b}");
    }

    #[test]
    fn b_near_removable_singularity() {
        let b = coeff_b(1e-8).unwrap();
        assert!((b - 0.5).abs() < 1e-9);
    }

    #[test]
    fn continuous_across_small_n_switch() {
        let below = N_SWITCH * (1.0 - 1e-9);
        let a_jump = (coeff_a(below).unwrap() - coeff_a(N_SWITCH).unwrap()).abs();
        let b_jump = (coeff_b(below).unwrap() - coeff_b(N_SWITCH).unwrap()).abs();
        assert!(a_jump <= 1e-9, "A jump {a_jump:e}");
        assert!(b_jump <= 1e-9, "B jump {b_jump:e}");
    }

    #[test]
    fn rearrangements_of_a_agree_at_crossover() {
        let n = N_SCALED;
        let i1 = kernel_i1(n).unwrap();
        let i3 = kernel_i3(n).unwrap();
        let small = kernel_i2_excess(n).unwrap() - (0.5 * n).exp_m1() * i3 / i1;
        let large = kernel_tail(n).unwrap() / kernel_i1_scaled(n).unwrap() + i3 / i1 - 1.0;
        assert!((12.0 * (small - large) / n).abs() < 1e-11);
    }

    #[test]
    fn a_positive_and_b_above_half_on_sweep() {
        for k in 0..=1000 {
            let n = 0.1 * k as f64;
            let CoefficientPair { a, b } = CoefficientPair::at(n).unwrap();
            assert!(a > 0.0, "A({n}) = {a}");
            if n > 0.0 {
                assert!(b > 0.5, "B({n}) = {b}");
            } else {
                assert_eq!(b, 0.5);
            }
        }
    }

    #[test]
    fn finite_at_domain_edge() {
        let CoefficientPair { a, b } = CoefficientPair::at(N_MAX).unwrap();
        assert!(a.is_finite() && a > 0.0);
        assert!(b.is_finite() && b > 0.5 && b < 1.0);
    }

    #[test]
    fn cosine_intensity() {
        assert_eq!(n_psi_cosine(0.0, 3).unwrap(), 0.0);
        assert!((n_psi_cosine(1.0 / PI, 1).unwrap() - 2.0).abs() < 1e-14);
        assert!((n_psi_cosine(1.0, 2).unwrap() - 8.0 * PI * PI).abs() < 1e-12);
        assert!(n_psi_cosine(-0.1, 1).is_err());
        assert!(n_psi_cosine(0.1, 0).is_err());
    }

    #[test]
    fn tabulated_intensity() {
        let zero = vec![vec![0.0]; 16];
        assert_eq!(n_psi_tabulated(&[16], &zero).unwrap(), 0.0);

        let g = vec![0.3, -1.2];
        let constant = vec![g.clone(); 12];
        let expected = 0.3 * 0.3 + 1.2 * 1.2;
        assert!((n_psi_tabulated(&[3, 4], &constant).unwrap() - expected).abs() < 1e-15);

        let amplitude = 0.37;
        let m = 256;
        let sampled: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let x = i as f64 / m as f64;
                vec![-2.0 * PI * amplitude * (2.0 * PI * x).sin()]
            })
            .collect();
        let v = n_psi_tabulated(&[m], &sampled).unwrap();
        assert!((v - n_psi_cosine(amplitude, 1).unwrap()).abs() < 1e-10);
        assert!((v - amplitude * amplitude * 2.0 * PI * PI).abs() < 1e-10);
    }

    #[test]
    fn tabulated_shape_errors() {
        assert!(matches!(n_psi_tabulated(&[], &[]), Err(Error::Shape(_))));
        assert!(matches!(n_psi_tabulated(&[4], &[]), Err(Error::Shape(_))));
        assert!(matches!(
            n_psi_tabulated(&[1], &[vec![0.0]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            n_psi_tabulated(&[2], &[vec![0.0], vec![0.0, 1.0]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            n_psi_tabulated(&[3], &[vec![0.0], vec![0.0]]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn tabulated_converges_for_smooth_periodic_profile() {
        // h2(X) = exp(sin 2πX): not a trigonometric polynomial.
        let grad = |x: f64| {
            let w = 2.0 * PI;
            vec![w * (w * x).cos() * (w * x).sin().exp()]
        };
        let sample = |m: usize| {
            let g: Vec<Vec<f64>> = (0..m).map(|i| grad(i as f64 / m as f64)).collect();
            n_psi_tabulated(&[m], &g).unwrap()
        };
        let reference = sample(4096);
        let mut previous = f64::INFINITY;
        for m in [4, 8, 16, 32] {
            let err = (sample(m) - reference).abs();
            assert!(err <= previous / 4.0 || err < 1e-12, "m={m} err={err:e}");
            previous = err;
        }
    }
}
