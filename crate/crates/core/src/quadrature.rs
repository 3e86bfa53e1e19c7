//! Composite Gauss–Legendre rules with panel doubling.
//!
//! Every integrand handled here is entire, so a fixed 16-point rule per panel
//! converges geometrically once the panel width resolves the exponential scale.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const ORDER: usize = 16;
const MAX_PANELS: usize = 1 << 14;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    /// Nodes on [-1, 1], ascending.
    pub nodes: [f64; ORDER],
    pub weights: [f64; ORDER],
}

impl GaussLegendre {
    fn compute() -> Self {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            // Chebyshev-like initial guess for the i-th root, then Newton.
            let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn get() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(GaussLegendre::compute)
    }

    /// Single-panel estimate of `∫_a^b f`.
    pub fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Physical nodes and weights of the panel [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule with `panels` equal panels on [a, b].
pub fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = GaussLegendre::get();
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|j| {
            let lo = a + h * j as f64;
            rule.panel(f, lo, lo + h)
        })
        .sum()
}

/// Doubles the panel count of `estimate` until two successive values differ by
/// at most `tol · |value|`.
pub fn refine<E: FnMut(usize) -> f64>(mut estimate: E, tol: f64) -> Result<f64> {
    let mut panels = 1;
    let mut previous = estimate(panels);
    let mut delta = f64::INFINITY;
    while panels < MAX_PANELS {
        panels *= 2;
        let current = estimate(panels);
        delta = (current - previous).abs();
        if delta <= tol * current.abs() {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::Quadrature { panels, delta })
}

/// `∫_a^b f` by composite Gauss–Legendre with panel doubling.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    refine(|panels| composite(&f, a, b, panels), tol)
}

/// Which end the inner integral of an iterated integral is anchored to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// `∫_a^b outer(s) ∫_a^s inner(t) dt ds`
    Lower,
    /// `∫_a^b outer(s) ∫_s^b inner(t) dt ds`
    Upper,
}

/// Iterated integral of a separable integrand on `panels` panels.
///
/// The inner antiderivative is accumulated panel by panel; inside a panel it is
/// completed at each outer node with a 16-point rule on the partial interval, so
/// the inner values live on the same grid as the outer nodes.
pub fn iterated<F, G>(outer: &F, inner: &G, a: f64, b: f64, panels: usize, anchor: Anchor) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let rule = GaussLegendre::get();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    let mut carried = 0.0;
    let panel_range: Box<dyn Iterator<Item = usize>> = match anchor {
        Anchor::Lower => Box::new(0..panels),
        Anchor::Upper => Box::new((0..panels).rev()),
    };
    for j in panel_range {
        let lo = a + h * j as f64;
        let hi = if j + 1 == panels { b } else { lo + h };
        for (s, w) in rule.mapped(lo, hi) {
            let partial = match anchor {
                Anchor::Lower => rule.panel(inner, lo, s),
                Anchor::Upper => rule.panel(inner, s, hi),
            };
            total += w * outer(s) * (carried + partial);
        }
        carried += rule.panel(inner, lo, hi);
    }
    total
}
