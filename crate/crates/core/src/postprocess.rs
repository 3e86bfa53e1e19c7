//! Through-gap velocity reconstruction, flux cross-checks and smooth/rough
//! pressure comparison.

use crate::coefficients::{self, N_MAX};
use crate::error::{Error, Result};
use crate::geometry::{CoefficientFields, Grid};
use crate::solver::PressureSolution;

/// Default number of `Z` intervals for velocity profiles.
pub const DEFAULT_Z_COUNT: usize = 64;

/// Finest spacing of the cumulative `Z` quadrature grid.
const Z_QUADRATURE_STEP: f64 = 1.0 / 4096.0;

/// Horizontal velocity `u⁰(x, Z)` sampled across the rescaled gap `Z ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityProfile {
    pub location: Option<(f64, f64)>,
    pub z: Vec<f64>,
    pub u: Vec<[f64; 2]>,
    pub n_psi: f64,
    pub h1: f64,
    pub grad_p: [f64; 2],
}

/// Volumetric flux `∫0^1 h₁ u⁰ dZ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxVector(pub [f64; 2]);

impl FluxVector {
    pub fn distance(&self, other: &FluxVector) -> f64 {
        let dx = self.0[0] - other.0[0];
        let dy = self.0[1] - other.0[1];
        dx.hypot(dy)
    }
}

fn check_inputs(h1: f64, n: f64, vectors: [[f64; 2]; 2]) -> Result<()> {
    if !(n.is_finite() && (0.0..=N_MAX).contains(&n)) {
        return Err(Error::Domain {
            what: "roughness intensity",
            value: n,
            expected: "0 <= N <= 700",
        });
    }
    if !(h1.is_finite() && h1 > 0.0) {
        return Err(Error::Domain {
            what: "gap height",
            value: h1,
            expected: "h1 > 0",
        });
    }
    if let Some(&v) = vectors.iter().flatten().find(|v| !v.is_finite()) {
        return Err(Error::Domain {
            what: "velocity or pressure gradient component",
            value: v,
            expected: "finite",
        });
    }
    Ok(())
}

/// Evaluates the reconstructed velocity on `z_count + 1` equispaced `Z` values.
///
/// The incomplete integrals `∫0^Z e^{Ns²/2} ds` and
/// `∫0^Z ∫0^s e^{N(s²−t²)/2} dt ds` are accumulated with composite Simpson on a
/// refinement of the sample grid; their values at `Z = 1` normalize the profile,
/// so the boundary values `u(0) = U_b`, `u(1) = 0` hold exactly.
pub fn velocity_profile(
    h1: f64,
    n: f64,
    grad_p: [f64; 2],
    u_b: [f64; 2],
    z_count: usize,
) -> Result<VelocityProfile> {
    check_inputs(h1, n, [grad_p, u_b])?;
    if z_count < 8 {
        return Err(Error::Shape(format!("need at least 8 Z intervals, got {z_count}")));
    }

    // mid grid: `per_sample` (even) intervals per sample interval
    let per_sample = {
        let m = ((1.0 / (z_count as f64 * Z_QUADRATURE_STEP)).ceil() as usize).max(2);
        m + m % 2
    };
    let mid_count = z_count * per_sample;
    let delta = 1.0 / mid_count as f64;
    let grow = |s: f64| (0.5 * n * s * s).exp();
    let decay = |t: f64| (-0.5 * n * t * t).exp();

    // G(s) = ∫0^s decay, one Simpson panel per mid interval
    let mut g = Vec::with_capacity(mid_count + 1);
    g.push(0.0);
    for k in 0..mid_count {
        let a = k as f64 * delta;
        let b = (k + 1) as f64 * delta;
        let panel = delta / 6.0 * (decay(a) + 4.0 * decay(0.5 * (a + b)) + decay(b));
        g.push(g[k] + panel);
    }
    let e: Vec<f64> = (0..=mid_count).map(|k| grow(k as f64 * delta)).collect();

    let mut weight_sum = Vec::with_capacity(z_count + 1); // ∫0^Z e^{Ns²/2}
    let mut nested = Vec::with_capacity(z_count + 1); // ∫0^Z e^{Ns²/2} G(s)
    weight_sum.push(0.0);
    nested.push(0.0);
    let (mut ew, mut fw) = (0.0, 0.0);
    for k in (0..mid_count).step_by(2) {
        ew += delta / 3.0 * (e[k] + 4.0 * e[k + 1] + e[k + 2]);
        fw += delta / 3.0 * (e[k] * g[k] + 4.0 * e[k + 1] * g[k + 1] + e[k + 2] * g[k + 2]);
        if (k + 2) % per_sample == 0 {
            weight_sum.push(ew);
            nested.push(fw);
        }
    }
    let (e_end, f_end) = (ew, fw);

    let h1_sq = h1 * h1;
    let mut z = Vec::with_capacity(z_count + 1);
    let mut u = Vec::with_capacity(z_count + 1);
    for i in 0..=z_count {
        let ratio = weight_sum[i] / e_end;
        let poiseuille = h1_sq * (nested[i] - f_end * ratio);
        let couette = 1.0 - ratio;
        z.push(i as f64 / z_count as f64);
        u.push([
            poiseuille * grad_p[0] + couette * u_b[0],
            poiseuille * grad_p[1] + couette * u_b[1],
        ]);
    }
    Ok(VelocityProfile {
        location: None,
        z,
        u,
        n_psi: n,
        h1,
        grad_p,
    })
}

/// Composite Simpson on uniform samples, closing an odd interval count with the
/// 3/8 rule on the last three intervals.
fn simpson_samples(values: &[f64], h: f64) -> f64 {
    let intervals = values.len() - 1;
    let (even, tail) = if intervals.is_multiple_of(2) {
        (intervals, 0)
    } else {
        (intervals - 3, 3)
    };
    let mut sum = 0.0;
    for k in (0..even).step_by(2) {
        sum += h / 3.0 * (values[k] + 4.0 * values[k + 1] + values[k + 2]);
    }
    if tail == 3 {
        let k = even;
        sum += 3.0 * h / 8.0 * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
    }
    sum
}

/// `h₁ ∫0^1 u dZ` from a sampled profile.
pub fn flux_from_velocity(profile: &VelocityProfile) -> Result<FluxVector> {
    let count = profile.z.len();
    if count < 9 || profile.u.len() != count {
        return Err(Error::Shape(format!(
            "profile needs at least 9 matching samples, has {} Z and {} u",
            count,
            profile.u.len()
        )));
    }
    let h = 1.0 / (count - 1) as f64;
    let uniform = profile
        .z
        .iter()
        .enumerate()
        .all(|(i, &z)| (z - i as f64 * h).abs() <= 1e-12);
    if !uniform {
        return Err(Error::Shape("profile samples must be equispaced on [0, 1]".into()));
    }
    let component = |d: usize| {
        let values: Vec<f64> = profile.u.iter().map(|u| u[d]).collect();
        profile.h1 * simpson_samples(&values, h)
    };
    Ok(FluxVector([component(0), component(1)]))
}

/// `h₁ B U_b − (h₁³ A / 12) ∇p`.
pub fn flux_from_coefficients(h1: f64, n: f64, grad_p: [f64; 2], u_b: [f64; 2]) -> Result<FluxVector> {
    check_inputs(h1, n, [grad_p, u_b])?;
    let couette = h1 * coefficients::coeff_b(n)?;
    let poiseuille = h1 * h1 * h1 * coefficients::coeff_a(n)? / 12.0;
    Ok(FluxVector([
        couette * u_b[0] - poiseuille * grad_p[0],
        couette * u_b[1] - poiseuille * grad_p[1],
    ]))
}

fn check_matches(solution: &PressureSolution, grid: &Grid) -> Result<()> {
    if solution.nx != grid.nx || solution.ny != grid.ny || solution.values.len() != grid.node_count() {
        return Err(Error::Shape(format!(
            "solution on {}x{} ({} values) does not match grid {}x{}",
            solution.nx,
            solution.ny,
            solution.values.len(),
            grid.nx,
            grid.ny
        )));
    }
    Ok(())
}

/// Gradient of the P1 pressure in the triangle containing `(x, y)`.
pub fn gradient_at(solution: &PressureSolution, grid: &Grid, x: f64, y: f64) -> Result<[f64; 2]> {
    check_matches(solution, grid)?;
    for (what, v) in [("x", x), ("y", y)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                what,
                value: v,
                expected: "point inside [0,1]x[0,1]",
            });
        }
    }
    let sx = x * grid.nx as f64;
    let sy = y * grid.ny as f64;
    let i = (sx.floor() as usize).min(grid.nx - 1);
    let j = (sy.floor() as usize).min(grid.ny - 1);
    let (fx, fy) = (sx - i as f64, sy - j as f64);
    let p = |di: usize, dj: usize| solution.at_node(i + di, j + dj);
    let (dx, dy) = (grid.dx(), grid.dy());
    Ok(if fy <= fx {
        [(p(1, 0) - p(0, 0)) / dx, (p(1, 1) - p(1, 0)) / dy]
    } else {
        [(p(1, 1) - p(0, 1)) / dx, (p(0, 1) - p(0, 0)) / dy]
    })
}

/// Norms of the difference between two pressure fields on the same grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    pub l2: f64,
    pub linf: f64,
    /// L2 norm over cells outside every rough region.
    pub l2_outside_rough: f64,
}

/// Compares two solutions; `fields` supplies the rough-cell mask.
pub fn compare_fields(
    p_smooth: &PressureSolution,
    p_rough: &PressureSolution,
    grid: &Grid,
    fields: &CoefficientFields,
) -> Result<ComparisonReport> {
    check_matches(p_smooth, grid)?;
    check_matches(p_rough, grid)?;
    if fields.rough.len() != grid.cell_count() {
        return Err(Error::Shape(format!(
            "rough mask has {} cells, grid has {}",
            fields.rough.len(),
            grid.cell_count()
        )));
    }
    let diff: Vec<f64> = p_rough
        .values
        .iter()
        .zip(&p_smooth.values)
        .map(|(r, s)| r - s)
        .collect();
    let linf = diff.iter().fold(0.0, |m: f64, d| m.max(d.abs()));
    let area = 0.5 * grid.dx() * grid.dy();
    let (mut total, mut outside) = (0.0, 0.0);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let d = |di: usize, dj: usize| diff[grid.node_index(i + di, j + dj)];
            let mut cell = 0.0;
            for tri in [[d(0, 0), d(1, 0), d(1, 1)], [d(0, 0), d(1, 1), d(0, 1)]] {
                // exact ∫ u² for P1: area/12 (Σu_i² + (Σu_i)²)
                let sum: f64 = tri.iter().sum();
                let squares: f64 = tri.iter().map(|v| v * v).sum();
                cell += area / 12.0 * (squares + sum * sum);
            }
            total += cell;
            if !fields.rough[grid.cell_index(i, j)] {
                outside += cell;
            }
        }
    }
    Ok(ComparisonReport {
        l2: total.sqrt(),
        linf,
        l2_outside_rough: outside.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_fields, ScenarioConfig};

    fn max_diff(a: [f64; 2], b: [f64; 2]) -> f64 {
        (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
    }

    #[test]
    fn endpoints_are_exact() {
        let p = velocity_profile(1.3, 4.0, [0.4, -1.1], [1.0, 0.5], 32).unwrap();
        assert_eq!(p.z.len(), 33);
        assert_eq!(p.u[0], [1.0, 0.5]);
        assert!(max_diff(p.u[32], [0.0, 0.0]) <= 1e-12);
    }

    #[test]
    fn classical_profile_at_zero_intensity() {
        let (h1, gp, ub) = (1.0, [1.0, 0.0], [0.0, 0.0]);
        let p = velocity_profile(h1, 0.0, gp, ub, 16).unwrap();
        assert!(max_diff(p.u[8], [-0.125, 0.0]) <= 1e-12, "{:?}", p.u[8]);
        let (h1, gp, ub) = (0.7, [0.3, -2.0], [1.0, 0.25]);
        let p = velocity_profile(h1, 0.0, gp, ub, 20).unwrap();
        for (z, u) in p.z.iter().zip(&p.u) {
            let poiseuille = 0.5 * h1 * h1 * (z * z - z);
            let expected = [
                poiseuille * gp[0] + (1.0 - z) * ub[0],
                poiseuille * gp[1] + (1.0 - z) * ub[1],
            ];
            assert!(max_diff(*u, expected) <= 1e-12);
        }
    }

    #[test]
    fn shear_only_profile_at_two() {
        // 1 - ∫0^{1/2} e^{s²} / ∫0^1 e^{s²}, Simpson with 2^16 panels
        let simpson = |b: f64| {
            let m = 1 << 16;
            let h = b / m as f64;
            let f = |s: f64| (s * s).exp();
            let mut sum = f(0.0) + f(b);
            for k in 1..m {
                sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
            }
            sum * h / 3.0
        };
        let expected = 1.0 - simpson(0.5) / simpson(1.0);
        let p = velocity_profile(1.0, 2.0, [0.0, 0.0], [1.0, 0.0], 16).unwrap();
        assert!((p.u[8][0] - expected).abs() <= 1e-9);
        assert_eq!(p.u[8][1], 0.0);
    }

    #[test]
    fn classical_flux() {
        let p = velocity_profile(1.0, 0.0, [1.0, 0.0], [1.0, 0.0], 64).unwrap();
        let q = flux_from_velocity(&p).unwrap();
        assert!((q.0[0] - (0.5 - 1.0 / 12.0)).abs() < 1e-13);
        assert!(q.0[1].abs() < 1e-15);
        let zero = velocity_profile(1.0, 3.0, [0.0, 0.0], [0.0, 0.0], 64).unwrap();
        assert_eq!(flux_from_velocity(&zero).unwrap(), FluxVector([0.0, 0.0]));
    }

    #[test]
    fn odd_interval_count_uses_three_eighths_tail() {
        let p = velocity_profile(1.0, 0.0, [1.0, 0.0], [1.0, 0.0], 9).unwrap();
        let q = flux_from_velocity(&p).unwrap();
        assert!((q.0[0] - (0.5 - 1.0 / 12.0)).abs() < 1e-13);
    }

    #[test]
    fn coefficient_flux_values() {
        let q = flux_from_coefficients(1.0, 2.0, [0.0, 0.0], [1.0, 0.0]).unwrap();
        assert!((q.0[0] - 0.58739).abs() < 5e-5);
        assert_eq!(q.0[1], 0.0);
        let (h1, gp, ub) = (0.8, [0.5, -1.5], [1.0, 2.0]);
        let q = flux_from_coefficients(h1, 0.0, gp, ub).unwrap();
        for d in 0..2 {
            let expected = h1 * ub[d] / 2.0 - h1.powi(3) * gp[d] / 12.0;
            assert!((q.0[d] - expected).abs() < 1e-15);
        }
        assert_eq!(
            flux_from_coefficients(1.0, 0.0, [0.0, 0.0], [0.0, 0.0]).unwrap(),
            FluxVector([0.0, 0.0])
        );
        assert!(flux_from_coefficients(0.0, 1.0, [0.0, 0.0], [0.0, 0.0]).is_err());
        assert!(flux_from_coefficients(1.0, -1.0, [0.0, 0.0], [0.0, 0.0]).is_err());
    }

    #[test]
    fn bad_profile_inputs() {
        assert!(velocity_profile(1.0, 1.0, [0.0; 2], [0.0; 2], 7).is_err());
        assert!(velocity_profile(1.0, 701.0, [0.0; 2], [0.0; 2], 8).is_err());
        let mut p = velocity_profile(1.0, 1.0, [0.0; 2], [1.0, 0.0], 8).unwrap();
        p.u.pop();
        assert!(matches!(flux_from_velocity(&p), Err(Error::Shape(_))));
    }

    fn nodal_field(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> PressureSolution {
        PressureSolution {
            nx: grid.nx,
            ny: grid.ny,
            values: (0..grid.node_count())
                .map(|k| {
                    let (x, y) = grid.node_coords(k);
                    f(x, y)
                })
                .collect(),
            iterations: 0,
            relative_residual: 0.0,
        }
    }

    #[test]
    fn gradient_of_linear_fields() {
        let grid = Grid::new(5, 3).unwrap();
        let zero = nodal_field(&grid, |_, _| 0.0);
        assert_eq!(gradient_at(&zero, &grid, 0.3, 0.3).unwrap(), [0.0, 0.0]);
        let px = nodal_field(&grid, |x, _| x);
        for (x, y) in [(0.1, 0.9), (0.55, 0.2), (1.0, 1.0), (0.0, 0.0)] {
            let g = gradient_at(&px, &grid, x, y).unwrap();
            assert!(max_diff(g, [1.0, 0.0]) < 1e-12);
        }
        let plane = nodal_field(&grid, |x, y| 2.0 - 3.0 * x + 0.5 * y);
        let g = gradient_at(&plane, &grid, 0.47, 0.61).unwrap();
        assert!(max_diff(g, [-3.0, 0.5]) < 1e-12);
        assert!(gradient_at(&px, &grid, 1.5, 0.5).is_err());
        assert!(gradient_at(&px, &Grid::new(4, 3).unwrap(), 0.5, 0.5).is_err());
    }

    #[test]
    fn comparison_metrics() {
        let config = ScenarioConfig {
            nx: 4,
            ny: 4,
            ..ScenarioConfig::default()
        };
        let (grid, mut fields) = build_fields(&config).unwrap();
        let a = nodal_field(&grid, |x, y| x * y);
        let r = compare_fields(&a, &a, &grid, &fields).unwrap();
        assert_eq!(r, ComparisonReport { l2: 0.0, linf: 0.0, l2_outside_rough: 0.0 });

        // difference ≡ 1: L2 = 1 over the square, outside = sqrt(area outside)
        let b = nodal_field(&grid, |x, y| x * y + 1.0);
        for c in 0..grid.cell_count() {
            fields.rough[c] = grid.barycenter(c).0 > 0.5;
        }
        let r = compare_fields(&a, &b, &grid, &fields).unwrap();
        assert!((r.l2 - 1.0).abs() < 1e-14);
        assert!((r.linf - 1.0).abs() < 1e-14);
        assert!((r.l2_outside_rough - 0.5f64.sqrt()).abs() < 1e-14);

        let other = nodal_field(&Grid::new(3, 4).unwrap(), |_, _| 0.0);
        assert!(compare_fields(&a, &other, &grid, &fields).is_err());
    }
}
