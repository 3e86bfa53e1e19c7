//! Brute-force reference quadratures, independent of the library's
//! Gauss–Legendre kernels.
#![allow(dead_code)]

use roughfilm::geometry::{LateralBoundary, RegionIntensity, RoughRegion, RoughnessSpec};
use roughfilm::{GapProfile, ScenarioConfig};

pub const SIMPSON_PANELS: usize = 1 << 16;

pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * k as f64);
    }
    sum * h / 3.0
}

pub fn i1_oracle(n: f64) -> f64 {
    simpson(|s| (0.5 * n * s * s).exp(), 0.0, 1.0, SIMPSON_PANELS)
}

pub fn i2_oracle(n: f64) -> f64 {
    simpson(|t| (-0.5 * n * t * t).exp(), 0.0, 1.0, SIMPSON_PANELS)
}

/// Iterated Simpson over the triangle `0 ≤ t ≤ s ≤ 1` of the unseparated
/// integrand `exp(n (s² − t²)/2)`.
pub fn i3_oracle(n: f64) -> f64 {
    simpson(
        |s| {
            if s == 0.0 {
                0.0
            } else {
                simpson(|t| (0.5 * n * (s * s - t * t)).exp(), 0.0, s, 1 << 12)
            }
        },
        0.0,
        1.0,
        1 << 13,
    )
}

/// Poiseuille coefficient from the textbook formula with oracle kernels.
pub fn a_oracle(n: f64) -> f64 {
    let e = (0.5 * n).exp();
    12.0 / n * (e * i2_oracle(n) - 1.0) - 12.0 / n * (e - 1.0) * i3_oracle(n) / i1_oracle(n)
}

pub fn b_oracle(n: f64) -> f64 {
    ((0.5 * n).exp() - 1.0) / n / i1_oracle(n)
}

pub fn relative_error(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

/// y-independent scenario solved with natural lateral conditions.
pub fn strip_config(nx: usize, gap: GapProfile, roughness: RoughnessSpec, u_bx: f64, q_e: f64) -> ScenarioConfig {
    ScenarioConfig {
        nx,
        ny: 4,
        gap,
        roughness,
        u_b: [u_bx, 0.0],
        q_e,
        tol: 1e-12,
        lateral: LateralBoundary::Natural,
        ..ScenarioConfig::default()
    }
}

pub fn band(x0: f64, x1: f64, n: f64) -> RoughnessSpec {
    RoughnessSpec {
        regions: vec![RoughRegion {
            x0,
            y0: 0.0,
            x1,
            y1: 1.0,
            intensity: RegionIntensity::Direct(n),
        }],
    }
}

/// Reads `x,p` rows of a golden file.
pub fn read_golden(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .map(|l| {
            let (x, p) = l.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect()
}
