//! On-disk solution archive: the configuration echo, the solved Fourier
//! coefficients and constants per contour, and solver diagnostics. An
//! archive is self-contained; downstream commands rebuild the evaluable
//! potential from it without the original configuration file.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use multipot::assembly::{BoundaryDensity, ContourDensity, FlowSolution};
use multipot::potential::ComplexPotential;
use multipot::spectral::TrigPoly;
use multipot::{Error, Geometry, ProblemConfig, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexVal {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexVal {
    fn from(z: Complex64) -> Self {
        ComplexVal { re: z.re, im: z.im }
    }
}

impl ComplexVal {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchiveContour {
    /// Cosine coefficients of the solved tangential density derivative.
    pub alpha: Vec<f64>,
    /// Sine coefficients of the solved tangential density derivative.
    pub beta: Vec<f64>,
    /// Complex constant completing the boundary values.
    pub q0: ComplexVal,
    pub interior_point: ComplexVal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchiveDiagnostics {
    pub residual: f64,
    pub condition_estimate: f64,
    pub assemble_seconds: f64,
    pub solve_seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionArchive {
    pub config: ProblemConfig,
    pub contours: Vec<ArchiveContour>,
    pub diagnostics: ArchiveDiagnostics,
}

impl SolutionArchive {
    pub fn from_solution(
        config: ProblemConfig,
        geom: &Geometry,
        solution: &FlowSolution,
    ) -> SolutionArchive {
        let contours = solution
            .density
            .contours
            .iter()
            .enumerate()
            .map(|(s, d)| {
                let p_prime = d.p_tilde.derivative();
                ArchiveContour {
                    alpha: p_prime.cos_coeffs().to_vec(),
                    beta: p_prime.sin_coeffs().to_vec(),
                    q0: d.q0.into(),
                    interior_point: geom.interior_point(s).into(),
                }
            })
            .collect();
        SolutionArchive {
            config,
            contours,
            diagnostics: ArchiveDiagnostics {
                residual: solution.diagnostics.residual,
                condition_estimate: solution.diagnostics.condition_estimate,
                assemble_seconds: solution.diagnostics.assemble_seconds,
                solve_seconds: solution.diagnostics.solve_seconds,
            },
        }
    }

    /// Rebuild the evaluable potential: geometry from the embedded config,
    /// integrated density from the stored coefficients, boundary data
    /// resampled from its closed form.
    pub fn rebuild(&self) -> Result<ComplexPotential> {
        let (geom, flow) = self.config.resolve()?;
        if self.contours.len() != geom.len() {
            return Err(Error::InvalidConfig(format!(
                "archive has {} contours, config resolves to {}",
                self.contours.len(),
                geom.len()
            )));
        }
        let n = flow.quadrature_n;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let contours = self
            .contours
            .iter()
            .enumerate()
            .map(|(s, c)| {
                let p_prime = TrigPoly::new(0.0, c.alpha.clone(), c.beta.clone());
                let p_tilde = p_prime.antiderivative()?;
                let q_samples = (0..n)
                    .map(|l| multipot::kernels::boundary_q(&flow, &geom, s, h * l as f64))
                    .collect();
                Ok(ContourDensity {
                    p_tilde,
                    q_samples,
                    q0: c.q0.value(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ComplexPotential::new(
            geom,
            flow,
            BoundaryDensity {
                contours,
                quadrature_n: n,
            },
        )
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("archive serializes");
        text.push('\n');
        text
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<SolutionArchive> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("archive {}: {e}", path.display())))
    }
}
