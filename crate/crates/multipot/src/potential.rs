//! Evaluation of the complex potential away from the boundary.
//!
//! The potential is a boundary integral plus closed-form terms:
//!
//! ```text
//! phi(z) = sign * sum_s (1/2pi i) \oint psi_s(th) z_s'(th) / (z_s(th) - z) dth
//!          + conj(v) z + sum_s c_s log(z - z*_s),        c_s = Gamma_s / (2pi i)
//! ```
//!
//! with `psi_s = p~_s + i q_s + q0_s` from the solve. The boundary integral
//! is evaluated by the periodic trapezoid rule on `n_eval` nodes, which is
//! spectrally accurate until `z` comes within a few node spacings of a
//! contour; inside that band evaluation fails with
//! [`Error::NearBoundary`](crate::error::Error) and the caller can retry on
//! a refined copy ([`ComplexPotential::with_eval_nodes`] or
//! [`ComplexPotential::with_min_clearance`]).
//!
//! Only `Im phi` (the stream function) and derivatives of `phi` are used
//! downstream, so the principal branch of the per-obstacle `log` terms is
//! fine: for real circulations the branch jumps sit entirely in `Re phi`.

use num_complex::Complex64;

use crate::assembly::BoundaryDensity;
use crate::config::FlowConfig;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Rect};
use crate::kernels::boundary_q;
use crate::par;

/// Sign of the Cauchy-integral term in the potential.
///
/// Counterclockwise obstacle contours bound the flow domain from the
/// *inside*, which flips the usual interior-domain Cauchy representation:
/// the disk oracle (uniform flow past a circle, `psi = v R^2 / z`) passes
/// only with `-1`. Frozen here and asserted by the oracle tests.
pub const CAUCHY_SIGN: f64 = -1.0;

/// Multiple of the boundary node spacing (in arc length) below which the
/// trapezoid evaluation of the Cauchy integral is no longer trusted.
const NEAR_BOUNDARY_SPACINGS: f64 = 5.0;

/// Hard cap on boundary refinement.
const MAX_EVAL_NODES: usize = 1 << 20;

/// Classification of an evaluation point against the obstacle set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointClass {
    /// In the flow domain, clear of every contour's quadrature band.
    Exterior,
    /// Inside the obstacle bounded by the given contour.
    Obstacle(usize),
    /// Too close to the given contour for the current node count.
    NearBoundary {
        contour: usize,
        distance: f64,
        threshold: f64,
    },
}

struct ContourEval {
    /// Boundary nodes `z_s(th_l)`.
    z: Vec<Complex64>,
    /// Node weights `psi_s(th_l) z_s'(th_l)`.
    w: Vec<Complex64>,
}

/// The solved flow, evaluable anywhere in the flow domain. Immutable and
/// safe to share across threads.
pub struct ComplexPotential {
    geom: Geometry,
    config: FlowConfig,
    density: BoundaryDensity,
    /// `c_s = Gamma_s / (2 pi i)`, purely imaginary for real circulations.
    c: Vec<Complex64>,
    n_eval: usize,
    eval: Vec<ContourEval>,
    thresholds: Vec<f64>,
}

impl ComplexPotential {
    pub fn new(geom: Geometry, config: FlowConfig, density: BoundaryDensity) -> Result<Self> {
        if density.contours.len() != geom.len() {
            return Err(Error::InvalidConfig(format!(
                "density has {} contours for a {}-contour geometry",
                density.contours.len(),
                geom.len()
            )));
        }
        let c = config
            .circulations
            .iter()
            .map(|&g| Complex64::new(0.0, -g / (2.0 * std::f64::consts::PI)))
            .collect();
        let n_eval = config.eval_n;
        let (eval, thresholds) = build_eval(&geom, &config, &density, n_eval);
        Ok(ComplexPotential {
            geom,
            config,
            density,
            c,
            n_eval,
            eval,
            thresholds,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn config(&self) -> &FlowConfig {
        &self.config
    }

    pub fn density(&self) -> &BoundaryDensity {
        &self.density
    }

    pub fn eval_nodes(&self) -> usize {
        self.n_eval
    }

    /// Near-boundary threshold of contour `s` at the current node count.
    pub fn threshold(&self, s: usize) -> f64 {
        self.thresholds[s]
    }

    /// Copy of this potential with the boundary integral resampled on
    /// `n_eval` nodes.
    pub fn with_eval_nodes(&self, n_eval: usize) -> Self {
        let (eval, thresholds) = build_eval(&self.geom, &self.config, &self.density, n_eval);
        ComplexPotential {
            geom: self.geom.clone(),
            config: self.config.clone(),
            density: self.density.clone(),
            c: self.c.clone(),
            n_eval,
            eval,
            thresholds,
        }
    }

    /// Copy refined until every contour's near-boundary threshold is below
    /// `distance`, so points that far from the boundary evaluate cleanly.
    pub fn with_min_clearance(&self, distance: f64) -> Self {
        let needed = NEAR_BOUNDARY_SPACINGS * 2.0 * std::f64::consts::PI * self.geom.max_speed()
            / distance
            * 1.25;
        let n = (needed.ceil() as usize)
            .max(self.n_eval)
            .next_power_of_two()
            .min(MAX_EVAL_NODES);
        if n == self.n_eval {
            return self.with_eval_nodes(self.n_eval);
        }
        self.with_eval_nodes(n)
    }

    /// Classify `z` against every contour: inside an obstacle, inside the
    /// quadrature band, or cleanly exterior.
    pub fn classify(&self, z: Complex64) -> PointClass {
        for (s, curve) in self.geom.curves().iter().enumerate() {
            let threshold = self.thresholds[s];
            if !curve.bbox().padded(threshold * 2.0).contains(z) {
                continue;
            }
            let distance = curve.distance_to(z);
            if distance < threshold {
                return PointClass::NearBoundary {
                    contour: s,
                    distance,
                    threshold,
                };
            }
            match curve.winding_number(z) {
                Ok(0) => {}
                Ok(_) => return PointClass::Obstacle(s),
                Err(_) => {
                    return PointClass::NearBoundary {
                        contour: s,
                        distance,
                        threshold,
                    }
                }
            }
        }
        PointClass::Exterior
    }

    fn guard(&self, z: Complex64) -> Result<()> {
        match self.classify(z) {
            PointClass::Exterior => Ok(()),
            PointClass::Obstacle(contour) => Err(Error::PointInsideObstacle { z, contour }),
            PointClass::NearBoundary {
                contour,
                distance,
                threshold,
            } => Err(Error::NearBoundary {
                z,
                contour,
                distance,
                threshold,
            }),
        }
    }

    /// Trapezoid factor `sign / (2 pi i) * (2 pi / n) = sign * (-i) / n`.
    fn cauchy_factor(&self) -> Complex64 {
        Complex64::new(0.0, -CAUCHY_SIGN / self.n_eval as f64)
    }

    /// Boundary-integral part of `phi` without domain checks.
    fn cauchy_potential(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ce in &self.eval {
            for (zl, wl) in ce.z.iter().zip(&ce.w) {
                acc += wl / (zl - z);
            }
        }
        acc * self.cauchy_factor()
    }

    /// Boundary-integral part of `phi'` without domain checks.
    fn cauchy_derivative(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ce in &self.eval {
            for (zl, wl) in ce.z.iter().zip(&ce.w) {
                let d = zl - z;
                acc += wl / (d * d);
            }
        }
        acc * self.cauchy_factor()
    }

    pub(crate) fn raw_potential(&self, z: Complex64) -> Complex64 {
        let mut phi = self.cauchy_potential(z) + self.config.velocity.conj() * z;
        for (s, c) in self.c.iter().enumerate() {
            phi += c * (z - self.geom.interior_point(s)).ln();
        }
        phi
    }

    pub(crate) fn raw_derivative(&self, z: Complex64) -> Complex64 {
        let mut dphi = self.cauchy_derivative(z) + self.config.velocity.conj();
        for (s, c) in self.c.iter().enumerate() {
            dphi += c / (z - self.geom.interior_point(s));
        }
        dphi
    }

    /// Complex potential at `z`. The additive constant carries no physics;
    /// only differences and derivatives do.
    pub fn eval_potential(&self, z: Complex64) -> Result<Complex64> {
        self.guard(z)?;
        Ok(self.raw_potential(z))
    }

    /// Flow velocity at `z`: the conjugate of `d phi / dz`.
    pub fn eval_velocity(&self, z: Complex64) -> Result<Complex64> {
        self.guard(z)?;
        Ok(self.raw_derivative(z).conj())
    }

    /// Stream function `Im phi`, constant along flow lines and on every
    /// obstacle boundary. Single-valued for real circulations.
    pub fn stream_function(&self, z: Complex64) -> Result<f64> {
        Ok(self.eval_potential(z)?.im)
    }

    /// Stream-function samples on a probe loop offset outward from contour
    /// `s` by `offset`, at `count` uniformly spaced parameters. The node
    /// count is boosted internally so the probes clear the quadrature band.
    pub fn boundary_stream_probe(&self, s: usize, offset: f64, count: usize) -> Result<Vec<f64>> {
        let boosted = self.with_min_clearance(offset / 1.5);
        let loop_pts = offset_loop(&boosted.geom, s, offset, count);
        Ok(par::map_indexed(loop_pts.len(), |l| {
            boosted.raw_potential(loop_pts[l]).im
        }))
    }

    /// Loop integral `\oint phi'(z) dz` on an offset probe loop around
    /// contour `s`; the real part is the circulation, the imaginary part
    /// the net flux (zero for an impermeable obstacle).
    fn boundary_loop_integral(&self, s: usize) -> Result<Complex64> {
        let offset = 0.02 * self.geom.curve(s).diameter();
        let boosted = self.with_min_clearance(offset / 1.5);
        let count = 16384;
        let pts = offset_loop(&boosted.geom, s, offset, count);
        let derivs = par::map_indexed(count, |l| boosted.raw_derivative(pts[l]));
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..count {
            let next = (l + 1) % count;
            acc += 0.5 * (derivs[l] + derivs[next]) * (pts[next] - pts[l]);
        }
        Ok(acc)
    }

    /// Measured circulation around contour `s` (should reproduce the
    /// configured value).
    pub fn circulation_check(&self, s: usize) -> Result<f64> {
        Ok(self.boundary_loop_integral(s)?.re)
    }

    /// Net flux out of contour `s` (should vanish).
    pub fn net_flux(&self, s: usize) -> Result<f64> {
        Ok(self.boundary_loop_integral(s)?.im)
    }

    /// Fitted decay exponent `e` of `|velocity(R e^{i th}) - v| ~ C / R^e`
    /// over two decades of `R` starting at ten geometry diameters, eight
    /// angles per radius.
    pub fn far_field_decay_exponent(&self) -> f64 {
        let diam = self.geom.diameter();
        let radii: Vec<f64> = (0..7)
            .map(|k| 10.0 * diam * 10f64.powf(k as f64 * 2.0 / 6.0))
            .collect();
        let mut points = Vec::new();
        for &r in &radii {
            let mut worst = 0.0f64;
            for a in 0..8 {
                let th = 2.0 * std::f64::consts::PI * a as f64 / 8.0;
                let z = Complex64::from_polar(r, th);
                let err = (self.raw_derivative(z).conj() - self.config.velocity).norm();
                worst = worst.max(err);
            }
            if worst > 0.0 {
                points.push((r.ln(), worst.ln()));
            }
        }
        if points.len() < 2 {
            // Velocity already exact to rounding; report a large exponent.
            return f64::INFINITY;
        }
        -fit_slope(&points)
    }

    /// Zeros of `phi'` in the search window: scan an `nx x ny` speed grid
    /// for local minima, then polish each candidate with damped Newton using
    /// a numerically differentiated second derivative.
    ///
    /// Stagnation points sitting on an obstacle boundary are reported at the
    /// accuracy of the refined boundary quadrature (a few node spacings).
    pub fn find_stagnation_points(&self, window: Rect, nx: usize, ny: usize) -> Vec<Complex64> {
        let boosted = self.with_eval_nodes((self.n_eval * 8).clamp(8192, MAX_EVAL_NODES));
        let diam = self.geom.diameter();

        // Speed scan; obstacle and band points are excluded.
        let mut speeds = vec![f64::INFINITY; nx * ny];
        let dx = window.width() / (nx - 1).max(1) as f64;
        let dy = window.height() / (ny - 1).max(1) as f64;
        let node = |i: usize, j: usize| {
            Complex64::new(window.x_min + i as f64 * dx, window.y_min + j as f64 * dy)
        };
        for j in 0..ny {
            for i in 0..nx {
                let z = node(i, j);
                if boosted.guard(z).is_ok() {
                    speeds[j * nx + i] = boosted.raw_derivative(z).norm();
                }
            }
        }
        let grid_max = speeds
            .iter()
            .cloned()
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max);
        if grid_max < 1e-12 {
            // Degenerate (zero) flow: every point is trivially stagnant.
            return Vec::new();
        }
        let speed_scale = self.config.velocity.norm().max(grid_max);

        let mut seeds: Vec<(f64, Complex64)> = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let v = speeds[j * nx + i];
                if !v.is_finite() {
                    continue;
                }
                let mut is_min = true;
                for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii >= 0 && ii < nx as i64 && jj >= 0 && jj < ny as i64 {
                        let w = speeds[jj as usize * nx + ii as usize];
                        if w.is_finite() && w < v {
                            is_min = false;
                            break;
                        }
                    }
                }
                if is_min {
                    seeds.push((v, node(i, j)));
                }
            }
        }
        seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
        seeds.truncate(48);

        let tol_newton = 1e-10 * self.config.velocity.norm().max(1e-12);
        let band = boosted.thresholds.iter().cloned().fold(0.0, f64::max);
        // Inside the quadrature band the discrete Cauchy sum deviates enough
        // from the field to grow zeros of its own. Candidates that land
        // there are re-polished against a twice-finer quadrature: genuine
        // boundary stagnation points barely move, artifacts either fly off
        // to a real root (and merge with it) or stop being zeros at all.
        let mut finer: Option<ComplexPotential> = None;
        let mut found: Vec<Complex64> = Vec::new();
        for (_, seed) in seeds {
            let mut z = match newton_polish(&boosted, seed, diam, tol_newton) {
                Some(z) => z,
                None => continue,
            };
            let mut near_band = match boosted.classify(z) {
                PointClass::Obstacle(_) => continue,
                PointClass::Exterior => false,
                PointClass::NearBoundary { .. } => true,
            };
            let mut residual = boosted.raw_derivative(z).norm();
            if near_band {
                let fine = finer.get_or_insert_with(|| {
                    self.with_eval_nodes((boosted.n_eval * 2).min(MAX_EVAL_NODES))
                });
                let z_fine = match newton_polish(fine, z, diam, tol_newton) {
                    Some(z) => z,
                    None => continue,
                };
                if (z_fine - z).norm() > band {
                    continue;
                }
                z = z_fine;
                residual = fine.raw_derivative(z).norm();
                near_band = match fine.classify(z) {
                    PointClass::Obstacle(_) => continue,
                    PointClass::Exterior => false,
                    PointClass::NearBoundary { .. } => true,
                };
            }
            if !window.padded(0.25 * diam).contains(z) {
                continue;
            }
            let accept = if near_band {
                residual < 1e-6 * speed_scale
            } else {
                residual < (1e-8 * self.config.velocity.norm()).max(1e-12)
            };
            if std::env::var("MULTIPOT_DEBUG_STAGNATION").is_ok() {
                eprintln!(
                    "candidate {z}: residual {residual:.3e}, near_band {near_band}, \
                     speed_scale {speed_scale:.3e}, accept {accept}"
                );
            }
            if !accept {
                continue;
            }
            // Merge duplicates; within a quadrature band two candidates
            // closer than the band width are one point at this resolution.
            let merge_radius = if near_band {
                band.max(1e-6 * diam)
            } else {
                1e-6 * diam
            };
            if found.iter().all(|p| (p - z).norm() > merge_radius) {
                found.push(z);
            }
        }
        found.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        found
    }
}

fn build_eval(
    geom: &Geometry,
    config: &FlowConfig,
    density: &BoundaryDensity,
    n_eval: usize,
) -> (Vec<ContourEval>, Vec<f64>) {
    let h = 2.0 * std::f64::consts::PI / n_eval as f64;
    let mut eval = Vec::with_capacity(geom.len());
    let mut thresholds = Vec::with_capacity(geom.len());
    for (s, curve) in geom.curves().iter().enumerate() {
        let sc = curve.sampled(n_eval);
        let d = &density.contours[s];
        let w: Vec<Complex64> = (0..n_eval)
            .map(|l| {
                let t = h * l as f64;
                let psi =
                    Complex64::new(d.p_tilde.eval(t), boundary_q(config, geom, s, t)) + d.q0;
                psi * sc.dz[l]
            })
            .collect();
        eval.push(ContourEval { z: sc.z, w });
        thresholds.push(NEAR_BOUNDARY_SPACINGS * h * curve.max_speed());
    }
    (eval, thresholds)
}

/// Closed probe loop offset outward from contour `s` along the unit normal
/// `-i z' / |z'|`. Near-degenerate tangents (at sharp corners or cusps)
/// reuse the previous node's direction so the loop stays closed and
/// exterior.
fn offset_loop(geom: &Geometry, s: usize, offset: f64, count: usize) -> Vec<Complex64> {
    let curve = geom.curve(s);
    let h = 2.0 * std::f64::consts::PI / count as f64;
    let floor = 1e-9 * curve.max_speed();
    let mut last_dir = Complex64::new(0.0, 0.0);
    // Seed the fallback direction from the last valid tangent of the loop.
    for l in (0..count).rev() {
        let dz = curve.derivative(h * l as f64, 1);
        if dz.norm() > floor {
            last_dir = Complex64::new(0.0, -1.0) * dz / dz.norm();
            break;
        }
    }
    (0..count)
        .map(|l| {
            let t = h * l as f64;
            let dz = curve.derivative(t, 1);
            if dz.norm() > floor {
                last_dir = Complex64::new(0.0, -1.0) * dz / dz.norm();
            }
            curve.point(t) + offset * last_dir
        })
        .collect()
}

/// Damped Newton iteration on `phi'(z) = 0` with a central-difference
/// second derivative. Returns the final iterate (the caller filters by
/// residual).
fn newton_polish(
    pot: &ComplexPotential,
    seed: Complex64,
    diam: f64,
    tol: f64,
) -> Option<Complex64> {
    let fd_h = 1e-6 * diam.max(1.0);
    let mut z = seed;
    let mut residual = pot.raw_derivative(z).norm();
    for _ in 0..50 {
        if residual < tol {
            return Some(z);
        }
        let dphi = pot.raw_derivative(z);
        let d2 = (pot.raw_derivative(z + Complex64::new(fd_h, 0.0))
            - pot.raw_derivative(z - Complex64::new(fd_h, 0.0)))
            / (2.0 * fd_h);
        if d2.norm() == 0.0 {
            break;
        }
        let mut step = -dphi / d2;
        if step.norm() > 0.5 * diam {
            step *= 0.5 * diam / step.norm();
        }
        let mut improved = false;
        for _ in 0..30 {
            let cand = z + step;
            let r = pot.raw_derivative(cand).norm();
            if r < residual {
                z = cand;
                residual = r;
                improved = true;
                break;
            }
            step *= 0.5;
            if step.norm() < 1e-15 * diam.max(1.0) {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    Some(z)
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::solve_flow;
    use crate::geometry::TrigCurve;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn disk_potential(radius: f64, v: Complex64, gamma: f64) -> ComplexPotential {
        let geom =
            Geometry::new(vec![TrigCurve::circle(Complex64::new(0.0, 0.0), radius)]).unwrap();
        let cfg = FlowConfig::new(v, vec![gamma], 32);
        let sol = solve_flow(&cfg, &geom).unwrap();
        ComplexPotential::new(geom, cfg, sol.density).unwrap()
    }

    /// Closed-form potential of uniform flow with circulation past a disk.
    fn disk_oracle(radius: f64, v: Complex64, gamma: f64, z: Complex64) -> Complex64 {
        v.conj() * z + v * radius * radius / z
            + Complex64::new(0.0, -gamma / (2.0 * PI)) * z.ln()
    }

    #[test]
    fn trivial_flow_has_constant_potential() {
        let pot = disk_potential(1.0, Complex64::new(0.0, 0.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = pot.eval_potential(Complex64::new(3.0, 0.0)).unwrap();
        for _ in 0..50 {
            let z = Complex64::from_polar(rng.gen_range(1.5..20.0), rng.gen_range(0.0..2.0 * PI));
            let phi = pot.eval_potential(z).unwrap();
            assert!(
                (phi - base).norm() < 1e-10,
                "spread at {z}: {}",
                (phi - base).norm()
            );
        }
    }

    #[test]
    fn disk_flow_matches_closed_form() {
        let v = Complex64::new(1.0, 0.0);
        let pot = disk_potential(1.0, v, 0.0);
        let z = Complex64::new(2.0, 0.0);
        let phi = pot.eval_potential(z).unwrap();
        let oracle = disk_oracle(1.0, v, 0.0, z);
        // Compare up to one global additive constant.
        let shift = phi - oracle;
        let z2 = Complex64::new(-1.0, 2.5);
        let shift2 = pot.eval_potential(z2).unwrap() - disk_oracle(1.0, v, 0.0, z2);
        assert!((shift - shift2).norm() < 1e-10);
        assert_abs_diff_eq!(oracle.re, 2.5, epsilon = 1e-15);
    }

    #[test]
    fn disk_flow_with_circulation_matches_closed_form() {
        let v = Complex64::new(1.0, 0.0);
        let gamma = 2.0 * PI;
        let pot = disk_potential(1.0, v, gamma);
        let probes = [
            Complex64::new(0.0, 2.0),
            Complex64::new(-3.0, 1.0),
            Complex64::new(1.5, -1.5),
        ];
        let shifts: Vec<Complex64> = probes
            .iter()
            .map(|&z| pot.eval_potential(z).unwrap() - disk_oracle(1.0, v, gamma, z))
            .collect();
        for s in &shifts[1..] {
            assert!(
                (s - shifts[0]).norm() < 1e-9,
                "shift spread {}",
                (s - shifts[0]).norm()
            );
        }
    }

    #[test]
    fn velocity_examples() {
        let v = Complex64::new(1.0, 0.0);
        let pot = disk_potential(1.0, v, 0.0);
        // phi' = 1 - 1/z^2, velocity = conj(phi').
        let vel = pot.eval_velocity(Complex64::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(vel.re, 0.75, epsilon = 1e-10);
        assert_abs_diff_eq!(vel.im, 0.0, epsilon = 1e-10);

        let far = pot.eval_velocity(Complex64::new(1e6, 0.0)).unwrap();
        assert!((far - v).norm() < 1e-5);
    }

    #[test]
    fn velocity_is_conjugate_derivative_of_potential() {
        let pot = disk_potential(1.0, Complex64::new(1.0, 0.1), -0.4 * PI);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-5;
        for _ in 0..100 {
            let z = Complex64::from_polar(rng.gen_range(1.5..10.0), rng.gen_range(0.0..2.0 * PI));
            let dx = (pot.eval_potential(z + h).unwrap() - pot.eval_potential(z - h).unwrap())
                / (2.0 * h);
            let vel = pot.eval_velocity(z).unwrap();
            assert!(
                (vel - dx.conj()).norm() < 1e-7,
                "at {z}: {}",
                (vel - dx.conj()).norm()
            );
        }
    }

    #[test]
    fn stream_function_examples() {
        let v = Complex64::new(1.0, 0.0);
        let pot = disk_potential(1.0, v, 0.0);
        // Im(z + 1/z) at 2i: 2 - 1/2.
        assert_abs_diff_eq!(
            pot.stream_function(Complex64::new(0.0, 2.0)).unwrap(),
            1.5,
            epsilon = 1e-10
        );

        let still = disk_potential(1.0, Complex64::new(0.0, 0.0), 0.0);
        let a = still.stream_function(Complex64::new(3.0, 1.0)).unwrap();
        let b = still.stream_function(Complex64::new(-2.0, -4.0)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn stream_function_constant_on_boundary_probe() {
        // The stream function genuinely varies to first order in the probe
        // offset (by 2 |u_t| delta, here 4 delta for the disk), so the probe
        // must sit close enough that the physical term stays below the
        // check's tolerance; what remains measures solver error.
        let pot = disk_potential(1.0, Complex64::new(1.0, 0.0), 0.0);
        let offset = 2e-5;
        let values = pot.boundary_stream_probe(0, offset, 64).unwrap();
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        assert!(max - min < 1e-4, "boundary stream spread {}", max - min);
        // And the values pin the boundary level Im phi = 0 of the disk flow.
        assert!(values.iter().all(|v| v.abs() < 1e-4));
    }

    #[test]
    fn near_boundary_and_interior_guards() {
        let pot = disk_potential(1.0, Complex64::new(1.0, 0.0), 0.0);
        assert!(matches!(
            pot.eval_potential(Complex64::new(0.2, 0.0)),
            Err(Error::PointInsideObstacle { .. })
        ));
        assert!(matches!(
            pot.eval_potential(Complex64::new(1.001, 0.0)),
            Err(Error::NearBoundary { .. })
        ));
        // Refinement shrinks the band and the same point evaluates.
        let fine = pot.with_min_clearance(5e-4);
        assert!(fine.eval_potential(Complex64::new(1.001, 0.0)).is_ok());
    }

    #[test]
    fn circulation_checks() {
        let pot = disk_potential(1.0, Complex64::new(1.0, 0.0), 0.0);
        let c = pot.circulation_check(0).unwrap();
        assert!(c.abs() < 1e-6 * (1.0 + pot.geometry().diameter()));

        let gamma = 2.0 * PI;
        let pot = disk_potential(1.0, Complex64::new(1.0, 0.0), gamma);
        assert_abs_diff_eq!(
            pot.circulation_check(0).unwrap(),
            gamma,
            epsilon = 1e-6 * gamma
        );
        // No net flux through an impermeable boundary.
        assert!(pot.net_flux(0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn far_field_decays() {
        let pot = disk_potential(2.0, Complex64::new(1.0, 0.1), 0.0);
        let e = pot.far_field_decay_exponent();
        assert!(e >= 0.9, "far-field exponent {e}");
    }

    #[test]
    fn stagnation_points_of_disk_flow() {
        let pot = disk_potential(1.0, Complex64::new(1.0, 0.0), 0.0);
        let pts = pot.find_stagnation_points(
            Rect {
                x_min: -2.0,
                x_max: 2.0,
                y_min: -2.0,
                y_max: 2.0,
            },
            41,
            41,
        );
        // phi' = 1 - 1/z^2 vanishes at +-1, on the boundary itself; the
        // finder reports them at quadrature-band accuracy.
        assert_eq!(pts.len(), 2, "points: {pts:?}");
        let tol = pot.threshold(0);
        assert!(
            (pts[0] - Complex64::new(-1.0, 0.0)).norm() < tol,
            "{}",
            pts[0]
        );
        assert!(
            (pts[1] - Complex64::new(1.0, 0.0)).norm() < tol,
            "{}",
            pts[1]
        );
    }

    #[test]
    fn stagnation_points_move_with_circulation() {
        // For v = 1 and Gamma just below the critical 4 pi, the zeros of
        // z^2 + Gamma z/(2 pi i) - 1 sit at
        // i Gamma/(4 pi) +- sqrt(1 - (Gamma/4 pi)^2).
        let gamma = -4.0 * PI * 0.995;
        let pot = disk_potential(1.0, Complex64::new(1.0, 0.0), gamma);
        let g4 = gamma / (4.0 * PI);
        let expected_re = (1.0 - g4 * g4).sqrt();
        let expected = [
            Complex64::new(-expected_re, g4),
            Complex64::new(expected_re, g4),
        ];
        let pts = pot.find_stagnation_points(
            Rect {
                x_min: -2.0,
                x_max: 2.0,
                y_min: -2.0,
                y_max: 2.0,
            },
            41,
            41,
        );
        assert_eq!(pts.len(), 2, "points: {pts:?}");
        let tol = 2.0 * pot.threshold(0);
        for (p, e) in pts.iter().zip(&expected) {
            assert!((p - e).norm() < tol, "found {p}, expected {e}");
        }
    }

    #[test]
    fn stagnation_empty_for_zero_flow() {
        let pot = disk_potential(1.0, Complex64::new(0.0, 0.0), 0.0);
        let pts = pot.find_stagnation_points(
            Rect {
                x_min: -3.0,
                x_max: 3.0,
                y_min: -3.0,
                y_max: 3.0,
            },
            21,
            21,
        );
        assert!(pts.is_empty());
    }
}

