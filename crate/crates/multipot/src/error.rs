use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by geometry validation, the solver pipeline and field
/// evaluation. Variants carry enough context to point at the offending
/// contour or parameter.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point is {distance:.3e} from the contour, below tolerance {tolerance:.3e}")]
    PointOnBoundary { distance: f64, tolerance: f64 },

    #[error("contour {contour} is traced clockwise; the solver requires counterclockwise orientation")]
    ClockwiseOrientation { contour: usize },

    #[error("contour {contour} is not a simple closed curve (self-intersection detected)")]
    SelfIntersecting { contour: usize },

    #[error("contours {first} and {second} intersect")]
    ContoursIntersect { first: usize, second: usize },

    #[error("contour {inner} lies inside contour {outer}; obstacles must be pairwise exterior")]
    NestedContours { inner: usize, outer: usize },

    #[error("no valid interior point found for contour {contour}")]
    NoInteriorPoint { contour: usize },

    #[error("curvature undefined at t = {t}: |z'(t)| = {speed:.3e} is below the cusp tolerance")]
    CuspAtParameter { t: f64, speed: f64 },

    #[error("contours {sigma} and {s} pass within {distance:.3e} of each other")]
    CoincidentPoints { sigma: usize, s: usize, distance: f64 },

    #[error("sample count {n} must be even")]
    OddSampleCount { n: usize },

    #[error("{n} samples are insufficient for truncation order {m}; need at least 2M + 2")]
    InsufficientSamples { n: usize, m: usize },

    #[error("trig polynomial has nonzero mean {mean:.3e}; only zero-mean polynomials have a periodic antiderivative")]
    NonzeroMean { mean: f64 },

    #[error("linear system is numerically singular (pivot ratio {pivot:.3e})")]
    SingularMatrix { pivot: f64 },

    #[error("constant-determination system is singular; geometry validation likely failed")]
    SingularConstantSystem,

    #[error("point {z} lies inside obstacle {contour}")]
    PointInsideObstacle { z: Complex64, contour: usize },

    #[error(
        "point {z} is {distance:.3e} from contour {contour}, inside the quadrature \
         breakdown band {threshold:.3e}; retry with more evaluation nodes"
    )]
    NearBoundary {
        z: Complex64,
        contour: usize,
        distance: f64,
        threshold: f64,
    },

    #[error("streamline seed {z} is not in the flow domain")]
    SeedInvalid { z: Complex64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{stage} failed for contour {contour}: {source}")]
    Stage {
        stage: &'static str,
        contour: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str, contour: usize) -> Error {
        Error::Stage {
            stage,
            contour,
            source: Box::new(self),
        }
    }
}
