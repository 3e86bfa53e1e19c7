use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{GapProfile, GapTable, Grid, LateralBoundary, RegionIntensity, RoughRegion, RoughnessSpec};
use crate::error::{Error, Result};

/// Everything needed to set up and solve one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub nx: usize,
    pub ny: usize,
    pub gap: GapProfile,
    pub roughness: RoughnessSpec,
    /// Bottom-surface velocity `U_b`.
    pub u_b: [f64; 2],
    /// Inlet flux `Q_e` imposed on `x = 0`.
    pub q_e: f64,
    pub tol: f64,
    /// `None` means ten times the number of unknowns.
    pub max_iter: Option<usize>,
    pub output_dir: PathBuf,
    pub lateral: LateralBoundary,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            nx: 64,
            ny: 64,
            gap: GapProfile::default(),
            roughness: RoughnessSpec::smooth(),
            u_b: [1.0, 0.0],
            q_e: 0.5,
            tol: 1e-10,
            max_iter: None,
            output_dir: PathBuf::from("out"),
            lateral: LateralBoundary::Dirichlet,
        }
    }
}

impl ScenarioConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::with_lateral(self.nx, self.ny, self.lateral)
    }

    /// Same scenario with every rough region removed.
    pub fn without_roughness(&self) -> Self {
        ScenarioConfig {
            roughness: RoughnessSpec::smooth(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        let finite = [
            ("velocity.ubx", self.u_b[0]),
            ("velocity.uby", self.u_b[1]),
            ("inlet.flux", self.q_e),
            ("solver.tol", self.tol),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err(invalid(key, format!("{v} is not finite")));
            }
        }
        if self.tol <= 0.0 {
            return Err(invalid("solver.tol", "must be positive"));
        }
        if self.max_iter == Some(0) {
            return Err(invalid("solver.max_iter", "must be positive"));
        }
        match &self.gap {
            GapProfile::QuadraticChannel { c0, c1 } => {
                if !c0.is_finite() {
                    return Err(invalid("gap.c0", "not finite"));
                }
                if !c1.is_finite() {
                    return Err(invalid("gap.c1", "not finite"));
                }
                // (2x-1)² ranges over [0, 1] on the domain
                if c1.min(c0 + c1) <= 0.0 {
                    return Err(invalid("gap.c1", "gap height must stay positive on [0,1]"));
                }
            }
            GapProfile::Constant { c0 } => {
                if !(c0.is_finite() && *c0 > 0.0) {
                    return Err(invalid("gap.c0", "constant gap must be positive"));
                }
            }
            GapProfile::Tabulated(table) => {
                if table.values.iter().any(|&v| v <= 0.0) {
                    return Err(invalid("gap.table_path", "gap table has non-positive heights"));
                }
            }
        }
        self.roughness.validate()
    }

    /// Key/value document that [`load_config`] reads back to an equal config.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("grid.nx", self.nx.to_string());
        line("grid.ny", self.ny.to_string());
        line("gap.kind", self.gap.kind().to_string());
        match &self.gap {
            GapProfile::QuadraticChannel { c0, c1 } => {
                line("gap.c0", format!("{c0:?}"));
                line("gap.c1", format!("{c1:?}"));
            }
            GapProfile::Constant { c0 } => line("gap.c0", format!("{c0:?}")),
            GapProfile::Tabulated(table) => {
                if let Some(path) = &table.source {
                    line("gap.table_path", path.display().to_string());
                }
            }
        }
        line("velocity.ubx", format!("{:?}", self.u_b[0]));
        line("velocity.uby", format!("{:?}", self.u_b[1]));
        line("inlet.flux", format!("{:?}", self.q_e));
        for (k, r) in self.roughness.regions.iter().enumerate() {
            let intensity = match r.intensity {
                RegionIntensity::Direct(n) => format!("n={n:?}"),
                RegionIntensity::Cosine {
                    amplitude,
                    wavenumber,
                } => format!("amp={amplitude:?},wav={wavenumber}"),
            };
            line(
                &format!("rough.region.{}", k + 1),
                format!(
                    "\"{:?},{:?},{:?},{:?},{intensity}\"",
                    r.x0, r.y0, r.x1, r.y1
                ),
            );
        }
        line("solver.tol", format!("{:?}", self.tol));
        if let Some(m) = self.max_iter {
            line("solver.max_iter", m.to_string());
        }
        if self.lateral == LateralBoundary::Natural {
            line("validation.lateral_neumann", "true".into());
        }
        line("output.dir", self.output_dir.display().to_string());
        out
    }
}

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Parses a config document; a relative `gap.table_path` resolves against the
/// current directory.
pub fn load_config(text: &str) -> Result<ScenarioConfig> {
    load_config_with_base(text, Path::new("."))
}

/// Reads and parses a config file; relative table paths resolve against the
/// file's directory.
pub fn load_config_file(path: &Path) -> Result<ScenarioConfig> {
    ScenarioConfig::default().apply_file(path)
}

pub fn load_config_with_base(text: &str, base: &Path) -> Result<ScenarioConfig> {
    ScenarioConfig::default().apply_document(text, base)
}

/// One `key = value` pair and the line it came from.
#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub line: usize,
    pub value: String,
}

pub(crate) fn parse_document(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty key".into(),
            });
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value)
            .trim();
        let previous = entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
        if let Some(prev) = previous {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key `{key}` (first set on line {})", prev.line),
            });
        }
    }
    Ok(entries)
}

fn number(key: &str, entry: &Entry) -> Result<f64> {
    let v: f64 = entry
        .value
        .parse()
        .map_err(|_| invalid(key, format!("`{}` is not a number", entry.value)))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("{v} is not finite")))
    }
}

fn count(key: &str, entry: &Entry) -> Result<usize> {
    entry
        .value
        .parse()
        .map_err(|_| invalid(key, format!("`{}` is not a non-negative integer", entry.value)))
}

fn flag(key: &str, entry: &Entry) -> Result<bool> {
    match entry.value.as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(invalid(key, format!("`{other}` is not a boolean"))),
    }
}

fn parse_region(key: &str, value: &str) -> Result<RoughRegion> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    let usage = "expected `x0,y0,x1,y1,n=<N>` or `x0,y0,x1,y1,amp=<a>,wav=<k>`";
    if parts.len() < 5 {
        return Err(invalid(key, usage));
    }
    let mut coords = [0.0; 4];
    for (c, p) in coords.iter_mut().zip(&parts[..4]) {
        *c = p
            .parse()
            .map_err(|_| invalid(key, format!("bad coordinate `{p}`; {usage}")))?;
    }
    let mut named = BTreeMap::new();
    for p in &parts[4..] {
        let (name, v) = p
            .split_once('=')
            .ok_or_else(|| invalid(key, format!("bad field `{p}`; {usage}")))?;
        if named.insert(name.trim(), v.trim()).is_some() {
            return Err(invalid(key, format!("field `{}` given twice", name.trim())));
        }
    }
    let real = |name: &str, v: &str| -> Result<f64> {
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| invalid(key, format!("bad {name} `{v}`")))
    };
    let intensity = match (named.get("n"), named.get("amp"), named.get("wav")) {
        (Some(n), None, None) if named.len() == 1 => RegionIntensity::Direct(real("n", n)?),
        (None, Some(a), Some(k)) if named.len() == 2 => RegionIntensity::Cosine {
            amplitude: real("amp", a)?,
            wavenumber: k
                .parse()
                .map_err(|_| invalid(key, format!("bad wav `{k}`")))?,
        },
        _ => return Err(invalid(key, usage)),
    };
    Ok(RoughRegion {
        x0: coords[0],
        y0: coords[1],
        x1: coords[2],
        y1: coords[3],
        intensity,
    })
}

impl ScenarioConfig {
    /// Parses `text` and applies its keys on top of `self`.
    pub fn apply_document(self, text: &str, base: &Path) -> Result<Self> {
        let entries = parse_document(text)?;
        self.overlay(&entries, base)
    }

    /// Reads a config file and applies its keys on top of `self`.
    pub fn apply_file(self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        self.apply_document(&text, base)
    }

    /// Applies parsed entries on top of `self`. Rough regions in `entries`
    /// replace any regions already present.
    pub(crate) fn overlay(mut self, entries: &BTreeMap<String, Entry>, base: &Path) -> Result<Self> {
        let mut gap_kind: Option<&str> = None;
        let mut c0: Option<f64> = None;
        let mut c1: Option<f64> = None;
        let mut table_path: Option<PathBuf> = None;
        let mut regions: BTreeMap<usize, RoughRegion> = BTreeMap::new();

        for (key, entry) in entries {
            let k = key.as_str();
            match k {
                "grid.nx" => self.nx = count(k, entry)?,
                "grid.ny" => self.ny = count(k, entry)?,
                "gap.kind" => match entry.value.as_str() {
                    kind @ ("quadratic_channel" | "constant" | "tabulated") => gap_kind = Some(kind),
                    other => return Err(invalid(k, format!("unknown gap kind `{other}`"))),
                },
                "gap.c0" => c0 = Some(number(k, entry)?),
                "gap.c1" => c1 = Some(number(k, entry)?),
                "gap.table_path" => table_path = Some(base.join(&entry.value)),
                "velocity.ubx" => self.u_b[0] = number(k, entry)?,
                "velocity.uby" => self.u_b[1] = number(k, entry)?,
                "inlet.flux" => self.q_e = number(k, entry)?,
                "solver.tol" => self.tol = number(k, entry)?,
                "solver.max_iter" => self.max_iter = Some(count(k, entry)?),
                "output.dir" => self.output_dir = PathBuf::from(&entry.value),
                "validation.lateral_neumann" => {
                    self.lateral = if flag(k, entry)? {
                        LateralBoundary::Natural
                    } else {
                        LateralBoundary::Dirichlet
                    }
                }
                _ => {
                    let index = k
                        .strip_prefix("rough.region.")
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|&i| i >= 1)
                        .ok_or_else(|| invalid(k, "unknown key"))?;
                    regions.insert(index, parse_region(k, &entry.value)?);
                }
            }
        }

        let kind = gap_kind.unwrap_or(match (&self.gap, table_path.is_some()) {
            (_, true) => "tabulated",
            (g, false) => g.kind(),
        });
        self.gap = match kind {
            "quadratic_channel" => {
                let (d0, d1) = match self.gap {
                    GapProfile::QuadraticChannel { c0, c1 } => (c0, c1),
                    _ => (1.0, 0.5),
                };
                GapProfile::QuadraticChannel {
                    c0: c0.unwrap_or(d0),
                    c1: c1.unwrap_or(d1),
                }
            }
            "constant" => {
                if c1.is_some() {
                    return Err(invalid("gap.c1", "not used by a constant gap"));
                }
                let d0 = match self.gap {
                    GapProfile::Constant { c0 } => c0,
                    _ => 1.0,
                };
                GapProfile::Constant {
                    c0: c0.unwrap_or(d0),
                }
            }
            _ => {
                if c0.is_some() || c1.is_some() {
                    return Err(invalid("gap.c0", "not used by a tabulated gap"));
                }
                match table_path {
                    Some(path) => GapProfile::Tabulated(GapTable::load(&path).map_err(|e| {
                        invalid("gap.table_path", e.to_string())
                    })?),
                    None => match &self.gap {
                        GapProfile::Tabulated(t) => GapProfile::Tabulated(t.clone()),
                        _ => return Err(invalid("gap.table_path", "required for a tabulated gap")),
                    },
                }
            }
        };

        if !regions.is_empty() {
            let expected: Vec<usize> = (1..=regions.len()).collect();
            let found: Vec<usize> = regions.keys().copied().collect();
            if found != expected {
                let missing = expected.iter().find(|i| !regions.contains_key(i)).unwrap();
                return Err(invalid(
                    &format!("rough.region.{missing}"),
                    "region indices must run 1, 2, ... without gaps",
                ));
            }
            self.roughness = RoughnessSpec {
                regions: regions.into_values().collect(),
            };
        }

        self.validate()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = load_config("grid.nx=8\ngrid.ny=8\n").unwrap();
        assert_eq!((c.nx, c.ny), (8, 8));
        assert_eq!(c.gap, GapProfile::QuadraticChannel { c0: 1.0, c1: 0.5 });
        assert_eq!(c.u_b, [1.0, 0.0]);
        assert_eq!(c.q_e, 0.5);
        assert!(c.roughness.is_smooth());
        assert_eq!(c.tol, 1e-10);
        assert_eq!(c.max_iter, None);
        assert_eq!(c.lateral, LateralBoundary::Dirichlet);
    }

    #[test]
    fn right_half_region() {
        let c = load_config("grid.nx = 8\nrough.region.1 = \"0.5,0,1,1,n=2\" # fig 3\n").unwrap();
        assert_eq!(
            c.roughness.regions,
            vec![RoughRegion {
                x0: 0.5,
                y0: 0.0,
                x1: 1.0,
                y1: 1.0,
                intensity: RegionIntensity::Direct(2.0)
            }]
        );
        let c = load_config("rough.region.1 = 0,0,0.5,1,amp=0.1,wav=3\n").unwrap();
        assert_eq!(
            c.roughness.regions[0].intensity,
            RegionIntensity::Cosine {
                amplitude: 0.1,
                wavenumber: 3
            }
        );
    }

    #[test]
    fn overlapping_regions_rejected() {
        let err = load_config("rough.region.1 = 0,0,0.6,1,n=2\nrough.region.2 = 0.5,0,1,1,n=1\n")
            .unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "rough.region.2"), "{err}");
    }

    #[test]
    fn errors_carry_line_or_key() {
        let err = load_config("grid.nx = 8\n\nno equals sign\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = load_config("grid.nx = 8\ngrid.nx = 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_config("grid.nz = 8\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "grid.nz"));
        let err = load_config("grid.nx = 1\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "grid.nx"));
        let err = load_config("solver.tol = 0\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "solver.tol"));
        let err = load_config("inlet.flux = nan\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "inlet.flux"));
        let err = load_config("gap.c1 = -0.6\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "gap.c1"));
        let err = load_config("rough.region.2 = 0,0,1,1,n=1\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "rough.region.1"));
        let err = load_config("rough.region.1 = 0,0,1,1,n=1,amp=2\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "rough.region.1"));
        let err = load_config("gap.kind = tabulated\n").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "gap.table_path"));
    }

    #[test]
    fn constant_gap_and_flags() {
        let c = load_config(
            "gap.kind = constant\ngap.c0 = 2\nvalidation.lateral_neumann = true\nsolver.max_iter = 50\noutput.dir = results\n",
        )
        .unwrap();
        assert_eq!(c.gap, GapProfile::Constant { c0: 2.0 });
        assert_eq!(c.lateral, LateralBoundary::Natural);
        assert_eq!(c.max_iter, Some(50));
        assert_eq!(c.output_dir, PathBuf::from("results"));
    }

    #[test]
    fn tabulated_gap_from_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("h.csv"), "1,2\n1,2\n1,2\n").unwrap();
        let cfg = dir.path().join("run.cfg");
        std::fs::write(&cfg, "gap.kind = tabulated\ngap.table_path = h.csv\n").unwrap();
        let c = load_config_file(&cfg).unwrap();
        assert!(c.gap.is_y_independent());
        assert!((c.gap.evaluate(0.25, 0.9).unwrap() - 1.25).abs() < 1e-15);
        let reread = load_config(&c.to_document()).unwrap();
        assert_eq!(reread, c);
    }

    #[test]
    fn document_round_trip() {
        let c = load_config(
            "grid.nx=12\ngrid.ny=10\nvelocity.uby=-0.25\ninlet.flux=0.125\nrough.region.1=0.1,0.2,0.3,0.4,n=2.5\nrough.region.2=0.5,0,1,1,amp=0.05,wav=2\n",
        )
        .unwrap();
        assert_eq!(load_config(&c.to_document()).unwrap(), c);
    }
}
