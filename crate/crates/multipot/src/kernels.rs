//! Integral-equation kernels and boundary data.
//!
//! The two kernels are tangential derivatives of `arg` and `log| |` of the
//! chord `z_sigma(tau) - z_s(t)`. Both are evaluated through complex closed
//! forms, never by differencing multivalued functions:
//!
//! * `K(tau, t) =  Im( z_s'(t) / (z_sigma(tau) - z_s(t)) )`
//! * `L(tau, t) = -Re( z_s'(t) / (z_sigma(tau) - z_s(t)) )`
//!
//! On the same contour `L` carries the periodic singularity
//! `-(1/2) cot((tau - t)/2)`; the smooth remainder after subtracting it is
//! what enters grid quadrature, while the singular part is applied through
//! the conjugate-function transform [`hilbert_transform`].

use num_complex::Complex64;

use crate::config::FlowConfig;
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::par;
use crate::spectral::{inverse_fft_real, real_fft};

/// Relative tolerance (times the geometry diameter) below which two points
/// on distinct contours are considered coincident.
const COINCIDENT_REL_TOL: f64 = 1e-12;

/// `|z'|` below this fraction of `max |z'|` is treated as a cusp node.
const CUSP_REL_TOL: f64 = 1e-6;

/// Offset used by the Richardson extrapolation that fills the diagonal of
/// the smooth log-kernel remainder.
const RICHARDSON_EPS: f64 = 1e-3;

/// Kernel values on the uniform grid: `value(i, l) = kernel(tau_l, t_i)`,
/// target angle along rows, source angle along columns.
#[derive(Debug, Clone)]
pub struct KernelGrid {
    pub n: usize,
    /// Source contour index (integration variable tau).
    pub source: usize,
    /// Target contour index (collocation variable t).
    pub target: usize,
    values: Vec<f64>,
}

impl KernelGrid {
    pub fn value(&self, i: usize, l: usize) -> f64 {
        self.values[i * self.n + l]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

fn chord(geom: &Geometry, sigma: usize, s: usize, tau: f64, t: f64) -> Result<Complex64> {
    let w = geom.curve(sigma).point(tau) - geom.curve(s).point(t);
    if sigma != s {
        let tol = COINCIDENT_REL_TOL * geom.diameter();
        if w.norm() < tol {
            return Err(Error::CoincidentPoints {
                sigma,
                s,
                distance: w.norm(),
            });
        }
    }
    Ok(w)
}

/// Diagonal limit of the `arg`-derivative kernel at parameter `t` of contour
/// `s`: `-Im(conj(z') z'') / (2 |z'|^2)`, which equals `-k(t) |z'(t)| / 2` in
/// terms of the signed curvature. At a cusp node the limit continues as
/// `-Im(conj(z'') z''') / (4 |z''|^2)`.
fn kernel_k_diagonal(geom: &Geometry, s: usize, t: f64) -> f64 {
    let curve = geom.curve(s);
    let d1 = curve.derivative(t, 1);
    let speed = d1.norm();
    if speed > CUSP_REL_TOL * curve.max_speed() {
        let d2 = curve.derivative(t, 2);
        -(d1.conj() * d2).im / (2.0 * speed * speed)
    } else {
        let d2 = curve.derivative(t, 2);
        let d3 = curve.derivative(t, 3);
        let n2 = d2.norm_sqr();
        if n2 > 0.0 {
            -(d2.conj() * d3).im / (4.0 * n2)
        } else {
            0.0
        }
    }
}

/// `arg`-derivative kernel `K(tau, t) = -d/dt arg(z_sigma(tau) - z_s(t))`.
///
/// Off the diagonal this is `Im(z_s'(t) / (z_sigma(tau) - z_s(t)))`; on the
/// same contour with `tau = t` the analytic limit is used.
pub fn kernel_k(geom: &Geometry, sigma: usize, s: usize, tau: f64, t: f64) -> Result<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (tau - t).rem_euclid(two_pi);
    if sigma == s && (d < 1e-14 || two_pi - d < 1e-14) {
        return Ok(kernel_k_diagonal(geom, s, t));
    }
    let w = chord(geom, sigma, s, tau, t)?;
    Ok((geom.curve(s).derivative(t, 1) / w).im)
}

fn l_full(geom: &Geometry, sigma: usize, s: usize, tau: f64, t: f64) -> Result<f64> {
    let w = chord(geom, sigma, s, tau, t)?;
    Ok(-(geom.curve(s).derivative(t, 1) / w).re)
}

/// Richardson-extrapolated diagonal of the smooth log-kernel remainder:
/// the limit of `L(t + eps, t) + (1/2) cot(eps/2)` as `eps -> 0`, estimated
/// from symmetric samples at `eps` and `eps/2`.
fn l_smooth_diagonal(geom: &Geometry, s: usize, t: f64) -> f64 {
    let curve = geom.curve(s);
    if curve.derivative(t, 1).norm() <= CUSP_REL_TOL * curve.max_speed() {
        // At a cusp node the cot subtraction no longer matches the kernel's
        // own singularity; the value is multiplied by q'(t) ~ 0 downstream.
        return 0.0;
    }
    let g = |eps: f64| -> f64 {
        let w = curve.point(t + eps) - curve.point(t);
        -(curve.derivative(t, 1) / w).re + 0.5 / (0.5 * eps).tan()
    };
    let sym = |eps: f64| 0.5 * (g(eps) + g(-eps));
    let e = RICHARDSON_EPS;
    (4.0 * sym(0.5 * e) - sym(e)) / 3.0
}

/// Smooth part of the log-derivative kernel.
///
/// For `sigma != s` the kernel itself is smooth and returned whole. For
/// `sigma == s` the periodic singularity `-(1/2) cot((tau - t)/2)` is
/// subtracted, and the diagonal is filled by Richardson extrapolation.
pub fn kernel_l_smooth(geom: &Geometry, sigma: usize, s: usize, tau: f64, t: f64) -> Result<f64> {
    if sigma != s {
        return l_full(geom, sigma, s, tau, t);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (tau - t).rem_euclid(two_pi);
    if d.abs() < 1e-14 || (two_pi - d).abs() < 1e-14 {
        return Ok(l_smooth_diagonal(geom, s, t));
    }
    Ok(l_full(geom, s, s, tau, t)? + 0.5 / (0.5 * (tau - t)).tan())
}

/// Grid of the `arg`-derivative kernel for the contour pair `(sigma, s)`.
pub fn kernel_k_grid(geom: &Geometry, sigma: usize, s: usize, n: usize) -> Result<KernelGrid> {
    let src = geom.curve(sigma).sampled(n);
    let tgt = geom.curve(s).sampled(n);
    let h = 2.0 * std::f64::consts::PI / n as f64;

    let tol = COINCIDENT_REL_TOL * geom.diameter();
    if sigma != s {
        for zs in &src.z {
            for zt in &tgt.z {
                if (zs - zt).norm() < tol {
                    return Err(Error::CoincidentPoints {
                        sigma,
                        s,
                        distance: (zs - zt).norm(),
                    });
                }
            }
        }
    }

    let mut values = vec![0.0f64; n * n];
    par::for_each_chunk(&mut values, n, |i, row| {
        let t = h * i as f64;
        let dz_t = tgt.dz[i];
        for (l, out) in row.iter_mut().enumerate() {
            *out = if sigma == s && l == i {
                kernel_k_diagonal(geom, s, t)
            } else {
                (dz_t / (src.z[l] - tgt.z[i])).im
            };
        }
    });
    Ok(KernelGrid {
        n,
        source: sigma,
        target: s,
        values,
    })
}

/// Grid of the log-derivative kernel: the full smooth kernel for
/// `sigma != s`, the cot-subtracted remainder (diagonal included) for
/// `sigma == s`.
pub fn kernel_l_grid(geom: &Geometry, sigma: usize, s: usize, n: usize) -> Result<KernelGrid> {
    let src = geom.curve(sigma).sampled(n);
    let tgt = geom.curve(s).sampled(n);
    let h = 2.0 * std::f64::consts::PI / n as f64;

    let mut values = vec![0.0f64; n * n];
    par::for_each_chunk(&mut values, n, |i, row| {
        let t = h * i as f64;
        let dz_t = tgt.dz[i];
        for (l, out) in row.iter_mut().enumerate() {
            *out = if sigma != s {
                -(dz_t / (src.z[l] - tgt.z[i])).re
            } else if l == i {
                l_smooth_diagonal(geom, s, t)
            } else {
                let tau = h * l as f64;
                -(dz_t / (src.z[l] - tgt.z[i])).re + 0.5 / (0.5 * (tau - t)).tan()
            };
        }
    });
    Ok(KernelGrid {
        n,
        source: sigma,
        target: s,
        values,
    })
}

/// Known imaginary boundary part (up to the per-contour constant, which is
/// absorbed into the solved complex constants):
/// `q_s(t) = -Im(conj(v) z_s(t)) + sum_sigma (Gamma_sigma / 2 pi) ln |z_s(t) - z*_sigma|`.
pub fn boundary_q(config: &FlowConfig, geom: &Geometry, s: usize, t: f64) -> f64 {
    let z = geom.curve(s).point(t);
    let mut q = -(config.velocity.conj() * z).im;
    for (sigma, &gamma) in config.circulations.iter().enumerate() {
        q += gamma / (2.0 * std::f64::consts::PI) * (z - geom.interior_point(sigma)).norm().ln();
    }
    q
}

/// Tangential derivative of [`boundary_q`]:
/// `q_s'(t) = -Im( conj(v) z_s'(t) + sum_sigma c_sigma z_s'(t) / (z_s(t) - z*_sigma) )`
/// with `c_sigma = Gamma_sigma / (2 pi i)`.
pub fn boundary_q_prime(config: &FlowConfig, geom: &Geometry, s: usize, t: f64) -> f64 {
    let z = geom.curve(s).point(t);
    let dz = geom.curve(s).derivative(t, 1);
    let mut w = config.velocity.conj() * dz;
    for (sigma, &gamma) in config.circulations.iter().enumerate() {
        let c = Complex64::new(0.0, -gamma / (2.0 * std::f64::consts::PI));
        w += c * dz / (z - geom.interior_point(sigma));
    }
    -w.im
}

/// Conjugate-function transform on the uniform grid:
/// `g(t) = (1/2pi) p.v. \int f(tau) cot((tau - t)/2) dtau`.
///
/// Computed as a Fourier multiplier: the mean maps to zero and each positive
/// harmonic `e^{ilt}` is multiplied by `+i` (so `cos -> -sin`, `sin -> cos`;
/// the orientation of the cot argument fixes this sign, and the quadrature
/// oracle in the tests freezes it). Applying the transform twice negates a
/// zero-mean input. The Nyquist bin is zeroed; its conjugate partner
/// `sin(nt/2)` vanishes on the grid, so this is exact for grid data.
pub fn hilbert_transform(samples: &[f64]) -> Result<Vec<f64>> {
    let n = samples.len();
    if n % 2 != 0 {
        return Err(Error::OddSampleCount { n });
    }
    let mut spectrum = real_fft(samples);
    spectrum[0] = Complex64::new(0.0, 0.0);
    spectrum[n / 2] = Complex64::new(0.0, 0.0);
    for l in 1..n / 2 {
        spectrum[l] *= Complex64::new(0.0, 1.0);
        spectrum[n - l] *= Complex64::new(0.0, -1.0);
    }
    Ok(inverse_fft_real(spectrum))
}

/// Right-hand side samples
/// `Q_s(t_i) = sum_sigma (1/pi) p.v. \int q_sigma'(tau) L_{sigma s}(tau, t_i) dtau`
/// on the uniform `n`-grid.
///
/// Smooth parts go through the periodic trapezoid rule on the kernel grids;
/// the same-contour cot singularity contributes exactly
/// `-hilbert_transform(q_s')`.
pub fn rhs_q(config: &FlowConfig, geom: &Geometry, s: usize, n: usize) -> Result<Vec<f64>> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut out = vec![0.0f64; n];

    for sigma in 0..geom.len() {
        let qp: Vec<f64> = (0..n)
            .map(|l| boundary_q_prime(config, geom, sigma, h * l as f64))
            .collect();
        let grid = kernel_l_grid(geom, sigma, s, n)?;
        for i in 0..n {
            let row = grid.row(i);
            let mut acc = 0.0;
            for l in 0..n {
                acc += qp[l] * row[l];
            }
            out[i] += acc * 2.0 / n as f64;
        }
        if sigma == s {
            let conj = hilbert_transform(&qp)?;
            for i in 0..n {
                out[i] -= conj[i];
            }
        }
    }
    Ok(out)
}
