//! Problem configuration: the JSON file schema, its resolution into a
//! validated [`Geometry`] plus solver parameters, and the bundled example
//! configurations used throughout the tests and docs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Geometry, TrigCurve};

pub const DEFAULT_TRUNCATION_M: usize = 32;
pub const DEFAULT_EVAL_N: usize = 1024;

/// One harmonic `d_k e^{ikt}` of a contour; negative `k` is first-class.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Harmonic {
    pub k: i32,
    pub re: f64,
    pub im: f64,
}

impl Harmonic {
    pub fn coeff(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ContourSpec {
    pub harmonics: Vec<Harmonic>,
    pub circulation: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct VelocitySpec {
    pub re: f64,
    pub im: f64,
}

/// On-disk problem description. Optional fields keep their absence on
/// round-trip so that write -> read -> write is byte-identical.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProblemConfig {
    pub contours: Vec<ContourSpec>,
    pub velocity: VelocitySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_n: Option<usize>,
}

/// Resolved solver parameters: far-field velocity, per-contour circulations
/// and discretization sizes with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub velocity: Complex64,
    pub circulations: Vec<f64>,
    /// Galerkin truncation order M.
    pub truncation_m: usize,
    /// Quadrature grid size N (even, at least 2M + 2).
    pub quadrature_n: usize,
    /// Default node count for evaluating the boundary integral of the
    /// potential away from the solve grid.
    pub eval_n: usize,
}

impl FlowConfig {
    pub fn new(velocity: Complex64, circulations: Vec<f64>, truncation_m: usize) -> FlowConfig {
        FlowConfig {
            velocity,
            circulations,
            truncation_m,
            quadrature_n: default_quadrature_n(truncation_m),
            eval_n: DEFAULT_EVAL_N,
        }
    }

    pub fn with_quadrature_n(mut self, n: usize) -> FlowConfig {
        self.quadrature_n = n;
        self
    }

    pub fn with_eval_n(mut self, n: usize) -> FlowConfig {
        self.eval_n = n;
        self
    }

    pub fn validate(&self, n_contours: usize) -> Result<()> {
        if self.truncation_m < 1 {
            return Err(Error::InvalidConfig("truncation order must be at least 1".into()));
        }
        if self.quadrature_n % 2 != 0 || self.quadrature_n < 2 * self.truncation_m + 2 {
            return Err(Error::InvalidConfig(format!(
                "quadrature size {} must be even and at least 2M + 2 = {}",
                self.quadrature_n,
                2 * self.truncation_m + 2
            )));
        }
        if self.eval_n < 16 {
            return Err(Error::InvalidConfig("eval_n must be at least 16".into()));
        }
        if self.circulations.len() != n_contours {
            return Err(Error::InvalidConfig(format!(
                "{} circulations for {} contours",
                self.circulations.len(),
                n_contours
            )));
        }
        if !self.velocity.re.is_finite() || !self.velocity.im.is_finite() {
            return Err(Error::InvalidConfig("velocity must be finite".into()));
        }
        if self.circulations.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidConfig("circulations must be finite".into()));
        }
        Ok(())
    }
}

pub fn default_quadrature_n(m: usize) -> usize {
    let n = 256usize.max(8 * m).max(2 * m + 2);
    n + n % 2
}

impl ProblemConfig {
    /// Validate the file contents and build the geometry and solver
    /// parameters. Contours are validated individually (simple, closed,
    /// counterclockwise) and jointly (pairwise disjoint).
    pub fn resolve(&self) -> Result<(Geometry, FlowConfig)> {
        if self.contours.is_empty() {
            return Err(Error::InvalidConfig("configuration has no contours".into()));
        }
        let mut curves = Vec::with_capacity(self.contours.len());
        for (s, spec) in self.contours.iter().enumerate() {
            if !spec.harmonics.iter().any(|h| h.coeff().norm() > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "contour {s} has no nonzero harmonic"
                )));
            }
            if !spec.circulation.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "contour {s} has non-finite circulation"
                )));
            }
            let curve = TrigCurve::new(spec.harmonics.iter().map(|h| (h.k, h.coeff())))
                .map_err(|e| relabel_contour(e, s))?;
            curves.push(curve);
        }
        let geometry = Geometry::new(curves)?;

        let m = self.truncation_m.unwrap_or(DEFAULT_TRUNCATION_M);
        let n = self.quadrature_n.unwrap_or_else(|| default_quadrature_n(m));
        let config = FlowConfig {
            velocity: Complex64::new(self.velocity.re, self.velocity.im),
            circulations: self.contours.iter().map(|c| c.circulation).collect(),
            truncation_m: m,
            quadrature_n: n,
            eval_n: self.eval_n.unwrap_or(DEFAULT_EVAL_N),
        };
        config.validate(geometry.len())?;
        Ok((geometry, config))
    }

    /// Canonical JSON encoding (pretty, trailing newline). Stable field
    /// order makes the encoding deterministic.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ProblemConfig> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

fn relabel_contour(e: Error, s: usize) -> Error {
    match e {
        Error::SelfIntersecting { .. } => Error::SelfIntersecting { contour: s },
        Error::ClockwiseOrientation { .. } => Error::ClockwiseOrientation { contour: s },
        Error::NoInteriorPoint { .. } => Error::NoInteriorPoint { contour: s },
        other => other,
    }
}

fn harmonic(k: i32, c: Complex64) -> Harmonic {
    Harmonic {
        k,
        re: c.re,
        im: c.im,
    }
}

/// Lower obstacle of the elliptic examples: `2 e^{-it} + 4 e^{it}`.
fn elliptic_lower() -> Vec<Harmonic> {
    vec![
        harmonic(-1, Complex64::new(2.0, 0.0)),
        harmonic(1, Complex64::new(4.0, 0.0)),
    ]
}

/// Upper obstacle of the elliptic examples:
/// `e^{-i pi/4} (3 e^{it} - e^{-it}) + 10i`.
fn elliptic_upper() -> Vec<Harmonic> {
    let rot = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    vec![
        harmonic(-1, -rot),
        harmonic(0, Complex64::new(0.0, 10.0)),
        harmonic(1, 3.0 * rot),
    ]
}

/// Base cusped obstacle:
/// `0.15 e^{2it} + 1.6 e^{it} + (0.8 + 0.3i) e^{-it} - 0.25i e^{-2it}`,
/// optionally rotated by `rot`, scaled by `scale` and shifted by `shift`.
fn cusped(scale: f64, rot: Complex64, shift: Complex64) -> Vec<Harmonic> {
    let f = scale * rot;
    let mut hs = vec![
        harmonic(-2, f * Complex64::new(0.0, -0.25)),
        harmonic(-1, f * Complex64::new(0.8, 0.3)),
        harmonic(1, f * Complex64::new(1.6, 0.0)),
        harmonic(2, f * Complex64::new(0.15, 0.0)),
    ];
    if shift.norm() > 0.0 {
        hs.insert(2, harmonic(0, shift));
    }
    hs
}

const EXAMPLE_VELOCITY: VelocitySpec = VelocitySpec { re: 1.0, im: 0.1 };

/// Names of the bundled example configurations, in order.
pub fn example_names() -> &'static [&'static str] {
    &[
        "example1", "example2", "example3", "example4", "example5", "example6",
    ]
}

/// Bundled example configurations: flows around two obstacles with velocity
/// `1 + 0.1i` at infinity.
///
/// * `example1` - two elliptic obstacles, no circulation
/// * `example2` - same obstacles, circulations `-0.4 pi` (lower) and `-1.2 pi` (upper)
/// * `example3` - same obstacles, circulations `0.4 pi` and `-1.2 pi`
/// * `example4` - two cusped obstacles (scaled copy and shifted copy)
/// * `example5` - cusped pair with the upper obstacle rotated by `pi/6`
/// * `example6` - as `example5` with the obstacles closer together
pub fn example(name: &str) -> Option<ProblemConfig> {
    let two = |a: Vec<Harmonic>, ga: f64, b: Vec<Harmonic>, gb: f64| ProblemConfig {
        contours: vec![
            ContourSpec {
                harmonics: a,
                circulation: ga,
            },
            ContourSpec {
                harmonics: b,
                circulation: gb,
            },
        ],
        velocity: EXAMPLE_VELOCITY,
        truncation_m: None,
        quadrature_n: None,
        eval_n: None,
    };
    let pi = std::f64::consts::PI;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let rot6 = Complex64::from_polar(1.0, pi / 6.0);
    match name {
        "example1" => Some(two(elliptic_lower(), 0.0, elliptic_upper(), 0.0)),
        "example2" => Some(two(elliptic_lower(), -0.4 * pi, elliptic_upper(), -1.2 * pi)),
        "example3" => Some(two(elliptic_lower(), 0.4 * pi, elliptic_upper(), -1.2 * pi)),
        "example4" => Some(two(
            cusped(2.0, one, zero),
            0.0,
            cusped(1.0, one, Complex64::new(0.0, 10.0)),
            0.0,
        )),
        "example5" => Some(two(
            cusped(2.0, one, zero),
            0.0,
            cusped(1.0, rot6, Complex64::new(0.0, 10.0)),
            0.0,
        )),
        "example6" => Some(two(
            cusped(2.0, one, zero),
            0.0,
            cusped(1.0, rot6, Complex64::new(0.0, 5.0)),
            0.0,
        )),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_all_resolve() {
        for name in example_names() {
            let cfg = example(name).unwrap();
            let (geom, flow) = cfg.resolve().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(geom.len(), 2, "{name}");
            assert_eq!(flow.truncation_m, DEFAULT_TRUNCATION_M);
            assert_eq!(flow.quadrature_n, 256);
        }
        assert!(example("example7").is_none());
    }

    #[test]
    fn example_circulations() {
        let pi = std::f64::consts::PI;
        let (_, flow) = example("example1").unwrap().resolve().unwrap();
        assert_eq!(flow.circulations, vec![0.0, 0.0]);
        let (_, flow) = example("example2").unwrap().resolve().unwrap();
        assert_eq!(flow.circulations, vec![-0.4 * pi, -1.2 * pi]);
        let (_, flow) = example("example3").unwrap().resolve().unwrap();
        assert_eq!(flow.circulations, vec![0.4 * pi, -1.2 * pi]);
    }

    #[test]
    fn example_geometry_anchors() {
        // The upper elliptic obstacle is centered at 10i.
        let (geom, _) = example("example1").unwrap().resolve().unwrap();
        let p = geom.interior_point(1);
        assert!((p - Complex64::new(0.0, 10.0)).norm() < 1e-12);
        // The sharp-cornered obstacles center on 0 and 10i and have a
        // pronounced speed dip at the corner, though |z'| stays positive.
        let (geom, _) = example("example4").unwrap().resolve().unwrap();
        assert!(geom.interior_point(0).norm() < 1e-12);
        assert!((geom.interior_point(1) - Complex64::new(0.0, 10.0)).norm() < 1e-12);
        for s in 0..2 {
            let c = geom.curve(s);
            assert!(!c.is_cusped());
            assert!(c.min_speed() < 0.05 * c.max_speed());
        }
    }

    #[test]
    fn config_json_roundtrip_is_byte_identical() {
        let cfg = example("example2").unwrap();
        let text = cfg.to_json();
        let parsed = ProblemConfig::from_json(&text).unwrap();
        assert_eq!(parsed.to_json(), text);
    }

    #[test]
    fn empty_contours_rejected() {
        let cfg = ProblemConfig {
            contours: vec![],
            velocity: VelocitySpec { re: 1.0, im: 0.0 },
            truncation_m: None,
            quadrature_n: None,
            eval_n: None,
        };
        assert!(matches!(cfg.resolve(), Err(Error::InvalidConfig(_))));
    }
}
