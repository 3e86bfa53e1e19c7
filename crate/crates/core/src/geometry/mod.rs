//! Horizontal domain `[0,1]²`, gap profile, rough regions and the structured
//! grid on which the coefficient fields are sampled.

mod config;

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::coefficients::{self, CoefficientPair};
use crate::error::{Error, Result};

pub use config::{load_config, load_config_file, load_config_with_base, ScenarioConfig};

/// Leading-order gap height `h₁(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GapProfile {
    /// `c0 · (2x − 1)² + c1`
    QuadraticChannel { c0: f64, c1: f64 },
    Constant { c0: f64 },
    Tabulated(GapTable),
}

impl Default for GapProfile {
    fn default() -> Self {
        GapProfile::QuadraticChannel { c0: 1.0, c1: 0.5 }
    }
}

/// Gap heights on a uniform grid of `[0,1]²`, row-major with `y` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct GapTable {
    pub columns: usize,
    pub rows: usize,
    pub values: Vec<f64>,
    /// File the table was read from, if any.
    pub source: Option<PathBuf>,
}

impl GapTable {
    pub fn new(columns: usize, rows: usize, values: Vec<f64>) -> Result<Self> {
        if columns < 2 || rows < 2 {
            return Err(Error::Shape(format!(
                "gap table needs at least 2x2 points, got {columns}x{rows}"
            )));
        }
        if values.len() != columns * rows {
            return Err(Error::Shape(format!(
                "gap table {columns}x{rows} needs {} values, got {}",
                columns * rows,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Shape(format!("gap table contains non-finite value {v}")));
        }
        Ok(GapTable {
            columns,
            rows,
            values,
            source: None,
        })
    }

    /// Reads comma- or whitespace-separated rows; the first row is `y = 0`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        message: format!("{}: bad number `{s}`: {e}", path.display()),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let columns = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != columns) {
            return Err(Error::Shape(format!(
                "{}: ragged gap table",
                path.display()
            )));
        }
        let n_rows = rows.len();
        let mut table = GapTable::new(columns, n_rows, rows.into_iter().flatten().collect())?;
        table.source = Some(path.to_path_buf());
        Ok(table)
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.columns + i]
    }

    fn bilinear(&self, x: f64, y: f64) -> f64 {
        let locate = |t: f64, points: usize| {
            let scaled = t * (points - 1) as f64;
            let k = (scaled.floor() as usize).min(points - 2);
            (k, scaled - k as f64)
        };
        let (i, fx) = locate(x, self.columns);
        let (j, fy) = locate(y, self.rows);
        let bottom = self.at(i, j) * (1.0 - fx) + self.at(i + 1, j) * fx;
        let top = self.at(i, j + 1) * (1.0 - fx) + self.at(i + 1, j + 1) * fx;
        bottom * (1.0 - fy) + top * fy
    }

    fn is_y_independent(&self) -> bool {
        let first = &self.values[..self.columns];
        self.values.chunks(self.columns).all(|row| row == first)
    }
}

fn check_in_domain(x: f64, y: f64) -> Result<()> {
    for (what, v) in [("x", x), ("y", y)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                what,
                value: v,
                expected: "point inside [0,1]x[0,1]",
            });
        }
    }
    Ok(())
}

impl GapProfile {
    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        check_in_domain(x, y)?;
        let h = match self {
            GapProfile::QuadraticChannel { c0, c1 } => {
                let s = 2.0 * x - 1.0;
                c0 * s * s + c1
            }
            GapProfile::Constant { c0 } => *c0,
            GapProfile::Tabulated(table) => table.bilinear(x, y),
        };
        if h > 0.0 {
            Ok(h)
        } else {
            Err(Error::NonPositiveGap { x, y, value: h })
        }
    }

    pub fn is_y_independent(&self) -> bool {
        match self {
            GapProfile::Tabulated(table) => table.is_y_independent(),
            _ => true,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GapProfile::QuadraticChannel { .. } => "quadratic_channel",
            GapProfile::Constant { .. } => "constant",
            GapProfile::Tabulated(_) => "tabulated",
        }
    }
}

/// `h₁(x, y)` for the given profile.
pub fn evaluate_gap(profile: &GapProfile, x: f64, y: f64) -> Result<f64> {
    profile.evaluate(x, y)
}

/// How a rough region's intensity is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionIntensity {
    Direct(f64),
    Cosine { amplitude: f64, wavenumber: u32 },
}

impl RegionIntensity {
    pub fn n_psi(&self) -> Result<f64> {
        match *self {
            RegionIntensity::Direct(n) => coefficients::RoughnessIntensity::new(n).map(|r| r.value()),
            RegionIntensity::Cosine {
                amplitude,
                wavenumber,
            } => coefficients::n_psi_cosine(amplitude, wavenumber),
        }
    }
}

/// Axis-aligned rough rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughRegion {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub intensity: RegionIntensity,
}

impl RoughRegion {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }

    fn overlaps(&self, other: &RoughRegion) -> bool {
        self.x0 < other.x1 && other.x0 < self.x1 && self.y0 < other.y1 && other.y0 < self.y1
    }

    fn spans_y(&self) -> bool {
        self.y0 <= 0.0 && self.y1 >= 1.0
    }
}

/// The rough part of the upper surface. Points outside every region are smooth.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoughnessSpec {
    pub regions: Vec<RoughRegion>,
}

impl RoughnessSpec {
    pub fn smooth() -> Self {
        RoughnessSpec::default()
    }

    pub fn is_smooth(&self) -> bool {
        self.regions.is_empty()
    }

    /// Checks that regions are non-degenerate, inside the domain, disjoint, and
    /// carry a valid intensity. The error names the 1-based region index.
    pub fn validate(&self) -> Result<()> {
        for (k, r) in self.regions.iter().enumerate() {
            let key = format!("rough.region.{}", k + 1);
            let coords = [r.x0, r.y0, r.x1, r.y1];
            if coords.iter().any(|c| !c.is_finite() || !(0.0..=1.0).contains(c)) {
                return Err(Error::Validation {
                    key,
                    message: "rectangle must lie within [0,1]x[0,1]".into(),
                });
            }
            if r.x0 >= r.x1 || r.y0 >= r.y1 {
                return Err(Error::Validation {
                    key,
                    message: "rectangle needs x0 < x1 and y0 < y1".into(),
                });
            }
            if let Err(e) = r.intensity.n_psi() {
                return Err(Error::Validation {
                    key,
                    message: e.to_string(),
                });
            }
            if let Some(j) = self.regions[..k].iter().position(|o| o.overlaps(r)) {
                return Err(Error::Validation {
                    key,
                    message: format!("overlaps rough.region.{}", j + 1),
                });
            }
        }
        Ok(())
    }

    /// Index of the first region containing `(x, y)`.
    pub fn region_at(&self, x: f64, y: f64) -> Option<usize> {
        self.regions.iter().position(|r| r.contains(x, y))
    }

    pub fn is_y_independent(&self) -> bool {
        self.regions.iter().all(RoughRegion::spans_y)
    }
}

/// Treatment of the lateral sides `y = 0` and `y = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LateralBoundary {
    /// Homogeneous Dirichlet pressure.
    #[default]
    Dirichlet,
    /// Natural (zero-flux) condition; only used to compare against the 1D
    /// first-integral solution.
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeTag {
    Interior,
    /// `x = 0`, carries the inlet flux.
    Inlet,
    /// Pressure fixed to zero.
    Dirichlet,
    /// Free node on `y = 0` or `y = 1` under [`LateralBoundary::Natural`].
    Lateral,
}

/// Uniform `nx × ny` cell grid on `[0,1]²`.
///
/// Nodes are numbered row-major with `y` outer: node `(i, j)` has index
/// `j · (nx + 1) + i`. Cells follow the same convention with `nx` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub lateral: LateralBoundary,
}

impl Grid {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        Grid::with_lateral(nx, ny, LateralBoundary::Dirichlet)
    }

    pub fn with_lateral(nx: usize, ny: usize, lateral: LateralBoundary) -> Result<Self> {
        for (key, n) in [("grid.nx", nx), ("grid.ny", ny)] {
            if n < 2 {
                return Err(Error::Validation {
                    key: key.into(),
                    message: format!("need at least 2 cells, got {n}"),
                });
            }
        }
        Ok(Grid { nx, ny, lateral })
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    pub fn node_count(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    pub fn node_ij(&self, node: usize) -> (usize, usize) {
        (node % (self.nx + 1), node / (self.nx + 1))
    }

    pub fn node_coords(&self, node: usize) -> (f64, f64) {
        let (i, j) = self.node_ij(node);
        (i as f64 / self.nx as f64, j as f64 / self.ny as f64)
    }

    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn barycenter(&self, cell: usize) -> (f64, f64) {
        let (i, j) = (cell % self.nx, cell / self.nx);
        (
            (i as f64 + 0.5) / self.nx as f64,
            (j as f64 + 0.5) / self.ny as f64,
        )
    }

    /// Boundary tag of node `(i, j)`. Dirichlet wins at corners.
    pub fn tag(&self, i: usize, j: usize) -> NodeTag {
        let lateral = j == 0 || j == self.ny;
        if i == self.nx {
            return NodeTag::Dirichlet;
        }
        match (lateral, self.lateral) {
            (true, LateralBoundary::Dirichlet) => NodeTag::Dirichlet,
            (true, LateralBoundary::Natural) if i == 0 => NodeTag::Inlet,
            (true, LateralBoundary::Natural) => NodeTag::Lateral,
            (false, _) if i == 0 => NodeTag::Inlet,
            (false, _) => NodeTag::Interior,
        }
    }

    pub fn node_tag(&self, node: usize) -> NodeTag {
        let (i, j) = self.node_ij(node);
        self.tag(i, j)
    }
}

/// Per-cell coefficient samples at cell barycenters.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFields {
    pub n_psi: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub h1_bar: Vec<f64>,
    /// Whether the barycenter lies in a rough region (even one of zero intensity).
    pub rough: Vec<bool>,
}

impl CoefficientFields {
    pub fn len(&self) -> usize {
        self.n_psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_psi.is_empty()
    }

    /// Every per-cell array has exactly `cells` entries.
    pub fn matches_cells(&self, cells: usize) -> bool {
        [
            self.n_psi.len(),
            self.a.len(),
            self.b.len(),
            self.h1_bar.len(),
            self.rough.len(),
        ]
        .iter()
        .all(|&len| len == cells)
    }

    /// `h₁³ A / 12` in cell `c`.
    pub fn poiseuille(&self, c: usize) -> f64 {
        self.h1_bar[c].powi(3) * self.a[c] / 12.0
    }

    /// `h₁ B` in cell `c`.
    pub fn couette(&self, c: usize) -> f64 {
        self.h1_bar[c] * self.b[c]
    }
}

/// Samples `N_ψ`, `A`, `B` and `h₁` at every cell barycenter.
pub fn build_fields(config: &ScenarioConfig) -> Result<(Grid, CoefficientFields)> {
    let grid = config.grid()?;
    config.roughness.validate()?;

    for node in 0..grid.node_count() {
        let (x, y) = grid.node_coords(node);
        config.gap.evaluate(x, y)?;
    }

    // Each region carries one intensity; evaluate its coefficients once.
    let mut per_region: HashMap<usize, (f64, CoefficientPair)> = HashMap::new();
    let cells = grid.cell_count();
    let mut fields = CoefficientFields {
        n_psi: Vec::with_capacity(cells),
        a: Vec::with_capacity(cells),
        b: Vec::with_capacity(cells),
        h1_bar: Vec::with_capacity(cells),
        rough: Vec::with_capacity(cells),
    };
    for cell in 0..cells {
        let (x, y) = grid.barycenter(cell);
        let (n, pair) = match config.roughness.region_at(x, y) {
            Some(k) => match per_region.get(&k) {
                Some(&v) => v,
                None => {
                    let n = config.roughness.regions[k].intensity.n_psi()?;
                    let v = (n, CoefficientPair::at(n)?);
                    per_region.insert(k, v);
                    v
                }
            },
            None => (0.0, CoefficientPair::CLASSICAL),
        };
        fields.n_psi.push(n);
        fields.a.push(pair.a);
        fields.b.push(pair.b);
        fields.h1_bar.push(config.gap.evaluate(x, y)?);
        fields.rough.push(config.roughness.region_at(x, y).is_some());
    }
    Ok((grid, fields))
}
