//! P1 finite-element discretization of the modified Reynolds equation
//!
//! ```text
//! ∫ (h₁³A/12) ∇p·∇q − ∫ h₁B U_b·∇q + ∫_{x=0} Q_e q = 0
//! ```
//!
//! for all `q` vanishing on the Dirichlet boundary, with `p = 0` there.

mod oracle;
pub mod sparse;

use crate::error::{Error, Result};
use crate::geometry::{build_fields, CoefficientFields, Grid, NodeTag, ScenarioConfig};

pub use oracle::oracle_1d;
pub use sparse::CsrMatrix;

/// Discrete system on the free (non-Dirichlet) nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Grid node of each unknown.
    pub free_nodes: Vec<usize>,
    /// Unknown index of each grid node, `None` on Dirichlet nodes.
    pub node_to_free: Vec<Option<usize>>,
}

impl LinearSystem {
    pub fn dim(&self) -> usize {
        self.free_nodes.len()
    }

    /// Free-node values extracted from a full nodal vector.
    pub fn restrict(&self, nodal: &[f64]) -> Vec<f64> {
        self.free_nodes.iter().map(|&n| nodal[n]).collect()
    }

    /// Full nodal vector with zeros on Dirichlet nodes.
    pub fn extend(&self, free: &[f64]) -> Vec<f64> {
        let mut nodal = vec![0.0; self.node_to_free.len()];
        for (&node, &v) in self.free_nodes.iter().zip(free) {
            nodal[node] = v;
        }
        nodal
    }
}

/// Nodal pressure with solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureSolution {
    pub nx: usize,
    pub ny: usize,
    /// One value per grid node, row-major with `y` outer.
    pub values: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

impl PressureSolution {
    pub fn at_node(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// The two triangles of a cell, split along the lower-left to upper-right
/// diagonal, as counter-clockwise `(i, j)` offsets.
const TRIANGLES: [[(usize, usize); 3]; 2] = [[(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 1), (0, 1)]];

/// Area and hat-function gradients of a triangle given by its vertices.
fn p1_element(v: [(f64, f64); 3]) -> (f64, [[f64; 2]; 3]) {
    let det = (v[1].0 - v[0].0) * (v[2].1 - v[0].1) - (v[2].0 - v[0].0) * (v[1].1 - v[0].1);
    let mut grads = [[0.0; 2]; 3];
    for k in 0..3 {
        let (a, b) = (v[(k + 1) % 3], v[(k + 2) % 3]);
        grads[k] = [(a.1 - b.1) / det, (b.0 - a.0) / det];
    }
    (0.5 * det, grads)
}

/// Assembles the stiffness matrix and load vector, eliminating Dirichlet nodes.
pub fn assemble(grid: &Grid, fields: &CoefficientFields, u_b: [f64; 2], q_e: f64) -> Result<LinearSystem> {
    if !fields.matches_cells(grid.cell_count()) {
        return Err(Error::Shape(format!(
            "{} coefficient cells for a {}x{} grid",
            fields.len(),
            grid.nx,
            grid.ny
        )));
    }

    let mut node_to_free = vec![None; grid.node_count()];
    let mut free_nodes = Vec::new();
    for (node, slot) in node_to_free.iter_mut().enumerate() {
        if grid.node_tag(node) != NodeTag::Dirichlet {
            *slot = Some(free_nodes.len());
            free_nodes.push(node);
        }
    }

    let mut triplets = Vec::with_capacity(grid.cell_count() * 18);
    let mut rhs = vec![0.0; free_nodes.len()];
    let (dx, dy) = (grid.dx(), grid.dy());

    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let cell = grid.cell_index(i, j);
            let k = fields.poiseuille(cell);
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::Ellipticity { cell, value: k });
            }
            let c = fields.couette(cell);
            for tri in TRIANGLES {
                let nodes = tri.map(|(di, dj)| grid.node_index(i + di, j + dj));
                let coords = tri.map(|(di, dj)| ((i + di) as f64 * dx, (j + dj) as f64 * dy));
                let (area, grads) = p1_element(coords);
                for a in 0..3 {
                    let Some(row) = node_to_free[nodes[a]] else {
                        continue;
                    };
                    rhs[row] += c * area * (u_b[0] * grads[a][0] + u_b[1] * grads[a][1]);
                    for b in 0..3 {
                        if let Some(col) = node_to_free[nodes[b]] {
                            let g = grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1];
                            triplets.push((row, col, k * area * g));
                        }
                    }
                }
            }
        }
    }

    // ∫_{x=0} Q_e φ over each inlet edge, trapezoid-exact for P1
    for j in 0..grid.ny {
        for node in [grid.node_index(0, j), grid.node_index(0, j + 1)] {
            if let Some(row) = node_to_free[node] {
                rhs[row] -= q_e * 0.5 * dy;
            }
        }
    }

    Ok(LinearSystem {
        matrix: CsrMatrix::from_triplets(free_nodes.len(), triplets),
        rhs,
        free_nodes,
        node_to_free,
    })
}

/// Solves the assembled system and reinstates the Dirichlet zeros.
pub fn solve_linear(grid: &Grid, system: &LinearSystem, tol: f64, max_iter: usize) -> Result<PressureSolution> {
    let outcome = sparse::conjugate_gradient(&system.matrix, &system.rhs, tol, max_iter)?;
    Ok(PressureSolution {
        nx: grid.nx,
        ny: grid.ny,
        values: system.extend(&outcome.x),
        iterations: outcome.iterations,
        relative_residual: outcome.relative_residual,
    })
}

/// Relative residual of a nodal solution against a system.
pub fn residual_check(system: &LinearSystem, solution: &PressureSolution) -> f64 {
    sparse::relative_residual(&system.matrix, &system.restrict(&solution.values), &system.rhs)
}

/// All intermediate products of one scenario run.
#[derive(Debug, Clone)]
pub struct SolvedScenario {
    pub grid: Grid,
    pub fields: CoefficientFields,
    pub system: LinearSystem,
    pub solution: PressureSolution,
}

pub fn solve_scenario(config: &ScenarioConfig) -> Result<SolvedScenario> {
    config.validate()?;
    let (grid, fields) = build_fields(config)?;
    let system = assemble(&grid, &fields, config.u_b, config.q_e)?;
    let max_iter = config.max_iter.unwrap_or(10 * system.dim().max(1));
    let solution = solve_linear(&grid, &system, config.tol, max_iter)?;
    Ok(SolvedScenario {
        grid,
        fields,
        system,
        solution,
    })
}

/// Builds coefficient fields, assembles and solves one scenario.
pub fn solve_reynolds(config: &ScenarioConfig) -> Result<PressureSolution> {
    solve_scenario(config).map(|s| s.solution)
}
