//! Command implementations behind the `roughfilm` binary: scenario presets,
//! solver runs and plot-ready CSV exporters.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::coefficients;
use crate::error::Error;
use crate::geometry::{RegionIntensity, RoughRegion, RoughnessSpec, ScenarioConfig};
use crate::postprocess::{self, ComparisonReport};
use crate::solver::{self, PressureSolution, SolvedScenario};

pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const PRESETS: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

fn rough_band(x0: f64, x1: f64) -> RoughnessSpec {
    RoughnessSpec {
        regions: vec![RoughRegion {
            x0,
            y0: 0.0,
            x1,
            y1: 1.0,
            intensity: RegionIntensity::Direct(2.0),
        }],
    }
}

/// Channel scenarios: smooth (`fig2`), right half rough (`fig3`), left half
/// rough (`fig4`) and a narrow central strip (`fig5`), all at `N = 2`.
pub fn preset(name: &str) -> CliResult<ScenarioConfig> {
    let roughness = match name {
        "fig2" => RoughnessSpec::smooth(),
        "fig3" => rough_band(0.5, 1.0),
        "fig4" => rough_band(0.0, 0.5),
        "fig5" => rough_band(0.45, 0.55),
        other => {
            return Err(CliError::Input(format!(
                "unknown scenario `{other}` (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(ScenarioConfig {
        roughness,
        ..ScenarioConfig::default()
    })
}

/// Where a run's configuration comes from.
#[derive(Debug, Clone, Default)]
pub struct ScenarioSource {
    pub config: Option<PathBuf>,
    pub scenario: Option<String>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
}

impl ScenarioSource {
    /// Preset (if any), then config file keys, then grid overrides.
    pub fn resolve(&self) -> CliResult<(String, ScenarioConfig)> {
        if self.config.is_none() && self.scenario.is_none() {
            return Err(CliError::Input("missing --config <path> (or --scenario)".into()));
        }
        let mut config = match &self.scenario {
            Some(name) => preset(name)?,
            None => ScenarioConfig::default(),
        };
        if let Some(path) = &self.config {
            config = config.apply_file(path)?;
        }
        if let Some(nx) = self.nx {
            config.nx = nx;
        }
        if let Some(ny) = self.ny {
            config.ny = ny;
        }
        config.validate()?;
        let name = match (&self.scenario, &self.config) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => p
                .file_stem()
                .map_or("custom".into(), |s| s.to_string_lossy().into_owned()),
            (None, None) => unreachable!(),
        };
        Ok((name, config))
    }
}

/// Formats `v` with six significant digits, keeping trailing zeros.
fn six_significant(v: f64) -> String {
    if v == 0.0 {
        return "0.00000".into();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // rounding may carry into a new leading digit
    if exponent < 5 && s.trim_start_matches('-').starts_with("10") && decimals > 0 {
        format!("{v:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// `N=<n> A=<a> B=<b>`, coefficients to six significant digits.
pub fn cmd_coeffs(n: f64) -> CliResult<String> {
    let pair = coefficients::CoefficientPair::at(n)?;
    Ok(format!(
        "N={n} A={} B={}",
        six_significant(pair.a),
        six_significant(pair.b)
    ))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn pressure_csv(solution: &PressureSolution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# nx={} ny={}", solution.nx, solution.ny);
    out.push_str("x,y,p\n");
    for j in 0..=solution.ny {
        for i in 0..=solution.nx {
            let x = i as f64 / solution.nx as f64;
            let y = j as f64 / solution.ny as f64;
            let _ = writeln!(out, "{},{},{}", num(x), num(y), num(solution.at_node(i, j)));
        }
    }
    out
}

pub fn fields_csv(run: &SolvedScenario) -> String {
    let mut out = String::from("x,y,n_psi,a,b,h1\n");
    let f = &run.fields;
    for c in 0..run.grid.cell_count() {
        let (x, y) = run.grid.barycenter(c);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(x),
            num(y),
            num(f.n_psi[c]),
            num(f.a[c]),
            num(f.b[c]),
            num(f.h1_bar[c])
        );
    }
    out
}

pub fn metrics_text(report: &ComparisonReport) -> String {
    format!(
        "l2={}\nlinf={}\nl2_outside_rough={}\n",
        num(report.l2),
        num(report.linf),
        num(report.l2_outside_rough)
    )
}

/// Solver diagnostics of one solve within a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveDiagnostics {
    pub label: String,
    pub iterations: usize,
    pub relative_residual: f64,
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: &'static str,
    pub scenario: String,
    pub config: ScenarioConfig,
    /// Written files, relative to the output directory.
    pub outputs: Vec<String>,
    pub diagnostics: Vec<SolveDiagnostics>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command={}", self.command);
        let _ = writeln!(out, "scenario={}", self.scenario);
        let _ = writeln!(out, "outputs={}", self.outputs.join(","));
        for d in &self.diagnostics {
            let _ = writeln!(out, "{}.iterations={}", d.label, d.iterations);
            let _ = writeln!(out, "{}.relative_residual={:e}", d.label, d.relative_residual);
        }
        let _ = writeln!(out, "wall_time_s={:.6}", self.wall_time_s);
        out.push_str("[config]\n");
        out.push_str(&self.config.to_document());
        out
    }

    /// Output file names listed in a rendered manifest.
    pub fn parse_outputs(text: &str) -> Vec<String> {
        text.lines()
            .find_map(|l| l.strip_prefix("outputs="))
            .map(|v| v.split(',').filter(|s| !s.is_empty()).map(String::from).collect())
            .unwrap_or_default()
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io { path, source: e })?;
    Ok(())
}

fn prepare_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

fn diagnostics(label: &str, solution: &PressureSolution) -> SolveDiagnostics {
    SolveDiagnostics {
        label: label.into(),
        iterations: solution.iterations,
        relative_residual: solution.relative_residual,
    }
}

/// Solves one scenario and writes `pressure.csv`, `fields.csv` and `manifest.txt`.
pub fn cmd_solve(source: &ScenarioSource, out_dir: Option<&Path>) -> CliResult<RunManifest> {
    let start = Instant::now();
    let (scenario, config) = source.resolve()?;
    let out_dir = out_dir.map_or_else(|| config.output_dir.clone(), Path::to_path_buf);
    let run = solver::solve_scenario(&config)?;

    prepare_dir(&out_dir)?;
    write_file(&out_dir, "pressure.csv", &pressure_csv(&run.solution))?;
    write_file(&out_dir, "fields.csv", &fields_csv(&run))?;
    let manifest = RunManifest {
        command: "solve",
        scenario,
        config,
        outputs: vec!["pressure.csv".into(), "fields.csv".into()],
        diagnostics: vec![diagnostics("solve", &run.solution)],
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_file(&out_dir, "manifest.txt", &manifest.render())?;
    Ok(manifest)
}

/// Solves the smooth and rough variants of a scenario and writes both fields,
/// their difference and the comparison metrics.
pub fn cmd_compare(source: &ScenarioSource, out_dir: Option<&Path>) -> CliResult<(RunManifest, ComparisonReport)> {
    let start = Instant::now();
    let (scenario, config) = source.resolve()?;
    if config.roughness.is_smooth() {
        return Err(CliError::Input(
            "compare needs at least one rough.region.K entry".into(),
        ));
    }
    let out_dir = out_dir.map_or_else(|| config.output_dir.clone(), Path::to_path_buf);
    let smooth = solver::solve_scenario(&config.without_roughness())?;
    let rough = solver::solve_scenario(&config)?;
    let report = postprocess::compare_fields(&smooth.solution, &rough.solution, &rough.grid, &rough.fields)?;

    let difference = PressureSolution {
        values: rough
            .solution
            .values
            .iter()
            .zip(&smooth.solution.values)
            .map(|(r, s)| r - s)
            .collect(),
        iterations: 0,
        relative_residual: 0.0,
        ..rough.solution.clone()
    };

    prepare_dir(&out_dir)?;
    write_file(&out_dir, "pressure_smooth.csv", &pressure_csv(&smooth.solution))?;
    write_file(&out_dir, "pressure_rough.csv", &pressure_csv(&rough.solution))?;
    write_file(&out_dir, "difference.csv", &pressure_csv(&difference))?;
    write_file(&out_dir, "metrics.txt", &metrics_text(&report))?;
    let manifest = RunManifest {
        command: "compare",
        scenario,
        config,
        outputs: ["pressure_smooth.csv", "pressure_rough.csv", "difference.csv", "metrics.txt"]
            .map(String::from)
            .to_vec(),
        diagnostics: vec![
            diagnostics("smooth", &smooth.solution),
            diagnostics("rough", &rough.solution),
        ],
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_file(&out_dir, "manifest.txt", &manifest.render())?;
    Ok((manifest, report))
}

/// Velocity profile at `(x, y)` as `Z,ux,uy` CSV.
pub fn cmd_velocity(source: &ScenarioSource, x: f64, y: f64, nz: usize) -> CliResult<String> {
    let (_, config) = source.resolve()?;
    let outside = |v: f64| !(v > 0.0 && v < 1.0);
    if outside(x) || outside(y) {
        return Err(CliError::Input(format!(
            "velocity location ({x}, {y}) must be interior to the unit square"
        )));
    }
    if nz < 8 {
        return Err(CliError::Input(format!("--nz must be at least 8, got {nz}")));
    }
    let run = solver::solve_scenario(&config)?;
    let grad_p = postprocess::gradient_at(&run.solution, &run.grid, x, y)?;
    let n = match config.roughness.region_at(x, y) {
        Some(k) => config.roughness.regions[k].intensity.n_psi()?,
        None => 0.0,
    };
    let h1 = config.gap.evaluate(x, y)?;
    let profile = postprocess::velocity_profile(h1, n, grad_p, config.u_b, nz)?;

    let mut out = String::from("Z,ux,uy\n");
    for (z, u) in profile.z.iter().zip(&profile.u) {
        let _ = writeln!(out, "{},{},{}", num(*z), num(u[0]), num(u[1]));
    }
    Ok(out)
}
