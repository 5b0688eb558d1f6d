//! Field sampling, streamline tracing and plot-data output.
//!
//! Grids are sampled row by row (y-outer, x-inner) and written to CSV or
//! JSON with a fixed schema: columns `x,y,u,v,speed,psi,mask`. Masked nodes
//! (inside an obstacle or too close to a boundary) carry no field values.
//! All floating-point output uses shortest round-trip decimal formatting, so
//! writing and re-parsing reproduces values bit for bit.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::par;
use crate::potential::{ComplexPotential, PointClass};

/// Rectangular sampling grid: `nx` columns spanning `[x_min, x_max]` and
/// `ny` rows spanning `[y_min, y_max]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) || !(self.y_min < self.y_max) {
            return Err(Error::InvalidConfig(
                "grid bounds must satisfy x_min < x_max and y_min < y_max".into(),
            ));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidConfig("grid needs nx, ny >= 2".into()));
        }
        Ok(())
    }

    pub fn rect(&self) -> Rect {
        Rect {
            x_min: self.x_min,
            x_max: self.x_max,
            y_min: self.y_min,
            y_max: self.y_max,
        }
    }

    pub fn node(&self, ix: usize, iy: usize) -> Complex64 {
        let dx = (self.x_max - self.x_min) / (self.nx - 1) as f64;
        let dy = (self.y_max - self.y_min) / (self.ny - 1) as f64;
        Complex64::new(self.x_min + ix as f64 * dx, self.y_min + iy as f64 * dy)
    }
}

/// Grid spec in CLI form `xmin,xmax,ymin,ymax,nx,ny`.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::InvalidConfig(format!(
                "grid spec needs 6 comma-separated fields, got {}",
                parts.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            parts[i]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad grid field {:?}", parts[i])))
        };
        let int = |i: usize| -> Result<usize> {
            parts[i]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad grid field {:?}", parts[i])))
        };
        let spec = GridSpec {
            x_min: num(0)?,
            x_max: num(1)?,
            y_min: num(2)?,
            y_max: num(3)?,
            nx: int(4)?,
            ny: int(5)?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Node classification in the output schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mask {
    Exterior,
    Obstacle,
    NearBoundary,
}

impl Mask {
    pub fn label(&self) -> &'static str {
        match self {
            Mask::Exterior => "exterior",
            Mask::Obstacle => "obstacle",
            Mask::NearBoundary => "near_boundary",
        }
    }
}

/// One grid node. Field values are present exactly when the mask is
/// `Exterior`.
#[derive(Debug, Clone, Copy)]
pub struct FieldNode {
    pub mask: Mask,
    pub velocity: Option<Complex64>,
    pub speed: Option<f64>,
    pub psi: Option<f64>,
}

/// Sampled field values over a grid, row-major with y as the outer index.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub spec: GridSpec,
    nodes: Vec<FieldNode>,
}

impl FieldGrid {
    pub fn node(&self, ix: usize, iy: usize) -> &FieldNode {
        &self.nodes[iy * self.spec.nx + ix]
    }

    pub fn nodes(&self) -> &[FieldNode] {
        &self.nodes
    }
}

/// Sample velocity, speed and stream function over the grid. Nodes inside
/// obstacles or quadrature bands are masked rather than failing; any
/// per-node evaluation error also masks that node as near-boundary.
pub fn sample_field(pot: &ComplexPotential, spec: &GridSpec) -> Result<FieldGrid> {
    spec.validate()?;
    let nx = spec.nx;
    let mut nodes = vec![
        FieldNode {
            mask: Mask::NearBoundary,
            velocity: None,
            speed: None,
            psi: None,
        };
        nx * spec.ny
    ];
    par::for_each_chunk(&mut nodes, nx, |iy, row| {
        for (ix, out) in row.iter_mut().enumerate() {
            let z = spec.node(ix, iy);
            *out = match pot.classify(z) {
                PointClass::Obstacle(_) => FieldNode {
                    mask: Mask::Obstacle,
                    velocity: None,
                    speed: None,
                    psi: None,
                },
                PointClass::NearBoundary { .. } => FieldNode {
                    mask: Mask::NearBoundary,
                    velocity: None,
                    speed: None,
                    psi: None,
                },
                PointClass::Exterior => {
                    match (pot.eval_velocity(z), pot.stream_function(z)) {
                        (Ok(vel), Ok(psi)) => FieldNode {
                            mask: Mask::Exterior,
                            velocity: Some(vel),
                            speed: Some(vel.norm()),
                            psi: Some(psi),
                        },
                        _ => FieldNode {
                            mask: Mask::NearBoundary,
                            velocity: None,
                            speed: None,
                            psi: None,
                        },
                    }
                }
            };
        }
    });
    Ok(FieldGrid { spec: *spec, nodes })
}

/// A traced streamline: the seed and the polyline of visited points.
#[derive(Debug, Clone)]
pub struct Streamline {
    pub seed: Complex64,
    pub points: Vec<Complex64>,
}

/// Why a trace stopped; informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    LeftBounds,
    NearBoundary,
    Stagnant,
    MaxSteps,
}

/// Trace a streamline by classical fourth-order Runge-Kutta on the
/// unit-speed field `dz/ds = velocity / |velocity|`, so `step` is arc
/// length. Stops on leaving `bounds`, entering a quadrature band, velocity
/// collapse, or after `max_steps`.
pub fn trace_streamline(
    pot: &ComplexPotential,
    seed: Complex64,
    step: f64,
    max_steps: usize,
    bounds: Rect,
) -> Result<(Streamline, StopReason)> {
    if pot.classify(seed) != PointClass::Exterior {
        return Err(Error::SeedInvalid { z: seed });
    }
    let dir = |z: Complex64| -> Result<Complex64> {
        let v = pot.eval_velocity(z)?;
        let n = v.norm();
        if n < 1e-10 {
            return Err(Error::SeedInvalid { z });
        }
        Ok(v / n)
    };
    let mut points = vec![seed];
    let mut z = seed;
    let mut reason = StopReason::MaxSteps;
    for _ in 0..max_steps {
        let v = match pot.eval_velocity(z) {
            Ok(v) => v,
            Err(_) => {
                reason = StopReason::NearBoundary;
                break;
            }
        };
        if v.norm() < 1e-10 {
            reason = StopReason::Stagnant;
            break;
        }
        let k1 = match dir(z) {
            Ok(k) => k,
            Err(_) => {
                reason = StopReason::NearBoundary;
                break;
            }
        };
        let stage = |w: Complex64| dir(w);
        let k2 = match stage(z + 0.5 * step * k1) {
            Ok(k) => k,
            Err(_) => {
                reason = StopReason::NearBoundary;
                break;
            }
        };
        let k3 = match stage(z + 0.5 * step * k2) {
            Ok(k) => k,
            Err(_) => {
                reason = StopReason::NearBoundary;
                break;
            }
        };
        let k4 = match stage(z + step * k3) {
            Ok(k) => k,
            Err(_) => {
                reason = StopReason::NearBoundary;
                break;
            }
        };
        z += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        points.push(z);
        if !bounds.contains(z) {
            reason = StopReason::LeftBounds;
            break;
        }
    }
    Ok((Streamline { seed, points }, reason))
}

/// Seed positions spaced uniformly along the upstream edge of `bounds`
/// (the edge the far-field velocity enters through).
pub fn auto_seeds(velocity: Complex64, bounds: Rect, count: usize) -> Vec<Complex64> {
    let mut seeds = Vec::with_capacity(count);
    let horizontal = velocity.re.abs() >= velocity.im.abs();
    for j in 0..count {
        let frac = (j as f64 + 0.5) / count as f64;
        let z = if horizontal {
            let x = if velocity.re >= 0.0 {
                bounds.x_min
            } else {
                bounds.x_max
            };
            Complex64::new(x, bounds.y_min + frac * bounds.height())
        } else {
            let y = if velocity.im >= 0.0 {
                bounds.y_min
            } else {
                bounds.y_max
            };
            Complex64::new(bounds.x_min + frac * bounds.width(), y)
        };
        seeds.push(z);
    }
    seeds
}

/// Output encoding for the writers; never inferred from the file name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FromStr for FileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<FileFormat> {
        match s {
            "csv" => Ok(FileFormat::Csv),
            "json" => Ok(FileFormat::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }
}

const FIELD_COLUMNS: [&str; 7] = ["x", "y", "u", "v", "speed", "psi", "mask"];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write a sampled grid to `path`. CSV columns are exactly
/// `x,y,u,v,speed,psi,mask` with empty value fields on masked rows; JSON is
/// an object `{spec, columns, rows}` with `null` in place of missing values.
pub fn write_field(grid: &FieldGrid, path: &Path, format: FileFormat) -> Result<()> {
    let text = match format {
        FileFormat::Csv => field_csv(grid),
        FileFormat::Json => field_json(grid),
    };
    std::fs::write(path, text).map_err(io_err(path))
}

fn field_csv(grid: &FieldGrid) -> String {
    let mut out = String::new();
    out.push_str(&FIELD_COLUMNS.join(","));
    out.push('\n');
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for iy in 0..grid.spec.ny {
        for ix in 0..grid.spec.nx {
            let z = grid.spec.node(ix, iy);
            let n = grid.node(ix, iy);
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                z.re,
                z.im,
                opt(n.velocity.map(|v| v.re)),
                opt(n.velocity.map(|v| v.im)),
                opt(n.speed),
                opt(n.psi),
                n.mask.label()
            )
            .expect("string write");
        }
    }
    out
}

fn field_json(grid: &FieldGrid) -> String {
    use serde_json::{json, Value};
    let mut rows = Vec::with_capacity(grid.spec.nx * grid.spec.ny);
    let opt = |v: Option<f64>| v.map(Value::from).unwrap_or(Value::Null);
    for iy in 0..grid.spec.ny {
        for ix in 0..grid.spec.nx {
            let z = grid.spec.node(ix, iy);
            let n = grid.node(ix, iy);
            rows.push(json!([
                z.re,
                z.im,
                opt(n.velocity.map(|v| v.re)),
                opt(n.velocity.map(|v| v.im)),
                opt(n.speed),
                opt(n.psi),
                n.mask.label(),
            ]));
        }
    }
    let doc = json!({
        "spec": grid.spec,
        "columns": FIELD_COLUMNS,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("field grid serializes");
    text.push('\n');
    text
}

/// Write streamlines to `path`: JSON as a list of
/// `{seed: [x, y], points: [[x, y], ...]}` objects, CSV with columns
/// `line,point,x,y`.
pub fn write_streamlines(lines: &[Streamline], path: &Path, format: FileFormat) -> Result<()> {
    let text = match format {
        FileFormat::Csv => {
            let mut out = String::from("line,point,x,y\n");
            for (li, line) in lines.iter().enumerate() {
                for (pi, p) in line.points.iter().enumerate() {
                    writeln!(out, "{li},{pi},{},{}", p.re, p.im).expect("string write");
                }
            }
            out
        }
        FileFormat::Json => {
            use serde_json::json;
            let items: Vec<_> = lines
                .iter()
                .map(|l| {
                    json!({
                        "seed": [l.seed.re, l.seed.im],
                        "points": l.points.iter().map(|p| [p.re, p.im]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut text =
                serde_json::to_string_pretty(&serde_json::Value::Array(items)).expect("serializes");
            text.push('\n');
            text
        }
    };
    std::fs::write(path, text).map_err(io_err(path))
}
