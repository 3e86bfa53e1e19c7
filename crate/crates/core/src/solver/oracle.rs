//! Closed-form reference for scenarios that depend on `x` only.
//!
//! In one dimension the flux `(h₁³A/12) p′ − h₁B u` is constant and equal to
//! `Q_e`, so `p(x) = −∫_x^1 12 (Q_e + h₁ B u) / (h₁³ A) ds` with `p(1) = 0`.

use crate::coefficients::CoefficientPair;
use crate::error::{Error, Result};
use crate::geometry::{GapProfile, RoughnessSpec};

const MIN_PANELS: usize = 1 << 14;

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * k as f64);
    }
    sum * h / 3.0
}

/// Samples the exact 1D pressure at `samples + 1` equispaced points of `[0, 1]`.
pub fn oracle_1d(
    gap: &GapProfile,
    roughness: &RoughnessSpec,
    u_bx: f64,
    q_e: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if !gap.is_y_independent() {
        return Err(Error::Validation {
            key: "gap".into(),
            message: "1D reference needs a gap that does not vary in y".into(),
        });
    }
    if !roughness.is_y_independent() {
        return Err(Error::Validation {
            key: "rough".into(),
            message: "1D reference needs rough regions spanning 0 <= y <= 1".into(),
        });
    }
    if samples == 0 {
        return Err(Error::Shape("need at least one sample interval".into()));
    }
    roughness.validate()?;

    let pairs = roughness
        .regions
        .iter()
        .map(|r| r.intensity.n_psi().and_then(CoefficientPair::at))
        .collect::<Result<Vec<_>>>()?;
    let mut breaks: Vec<f64> = roughness
        .regions
        .iter()
        .flat_map(|r| [r.x0, r.x1])
        .filter(|&x| x > 0.0 && x < 1.0)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // p' on one piece; the coefficient pair is fixed by the piece midpoint
    let slope_on = |a: f64, b: f64| {
        let pair = roughness
            .region_at(0.5 * (a + b), 0.5)
            .map_or(CoefficientPair::CLASSICAL, |k| pairs[k]);
        move |s: f64| {
            let h = gap.evaluate(s, 0.5).expect("gap validated positive");
            12.0 * (q_e + h * pair.b * u_bx) / (h * h * h * pair.a)
        }
    };
    for k in 0..=samples {
        gap.evaluate(k as f64 / samples as f64, 0.5)?;
    }

    let per_interval = MIN_PANELS.div_ceil(samples).max(2);
    let mut values = vec![(1.0, 0.0)];
    let mut p = 0.0;
    for k in (0..samples).rev() {
        let (a, b) = (k as f64 / samples as f64, (k + 1) as f64 / samples as f64);
        let mut cuts = vec![a];
        cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
        cuts.push(b);
        for w in cuts.windows(2) {
            let f = slope_on(w[0], w[1]);
            p -= simpson(&f, w[0], w[1], per_interval);
        }
        values.push((a, p));
    }
    values.reverse();
    Ok(values)
}
