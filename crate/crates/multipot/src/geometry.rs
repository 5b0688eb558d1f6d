//! Boundary contours as trigonometric polynomials.
//!
//! Each obstacle boundary is a closed curve `z(t) = sum_k d_k e^{ikt}`,
//! `t in [0, 2pi]`, with a finite two-sided set of complex harmonics. The
//! module validates that contours are simple, counterclockwise and pairwise
//! disjoint, and provides the derivative, curvature, winding-number and
//! interior-point queries the solver builds on.
//!
//! Curves with cusps (isolated parameters where `|z'(t)|` vanishes) are
//! accepted; they are flagged so that curvature queries at the cusp fail
//! loudly while everything else runs unchanged.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of polyline samples used for simplicity/disjointness checks and
/// distance queries. This is a validation heuristic, not a proof: a curve
/// that self-intersects only between adjacent samples can slip through.
const POLYLINE_SAMPLES: usize = 1024;

/// Number of samples used for `|z'|` statistics and cusp detection.
const SPEED_SAMPLES: usize = 4096;

/// A curve is flagged cusped when `min |z'| < CUSP_REL_TOL * max |z'|`.
const CUSP_REL_TOL: f64 = 1e-6;

/// Axis-aligned rectangle, used for bounding boxes and search windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x_min && z.re <= self.x_max && z.im >= self.y_min && z.im <= self.y_max
    }

    /// Grow the rectangle by `margin` on every side.
    pub fn padded(&self, margin: f64) -> Rect {
        Rect {
            x_min: self.x_min - margin,
            x_max: self.x_max + margin,
            y_min: self.y_min - margin,
            y_max: self.y_max + margin,
        }
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            x_min: self.x_min.min(other.x_min),
            x_max: self.x_max.max(other.x_max),
            y_min: self.y_min.min(other.y_min),
            y_max: self.y_max.max(other.y_max),
        }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

/// Samples of a curve and its derivative on the uniform grid `t_i = 2pi i/n`.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub z: Vec<Complex64>,
    pub dz: Vec<Complex64>,
}

/// One boundary contour `z(t) = sum_k d_k e^{ikt}` stored as its nonzero
/// harmonics. Construction validates that the curve is simple, closed (true
/// by periodicity) and counterclockwise.
#[derive(Debug, Clone)]
pub struct TrigCurve {
    /// Nonzero harmonics sorted by index k.
    harmonics: Vec<(i32, Complex64)>,
    /// Cached polyline for distance and intersection queries.
    polyline: Vec<Complex64>,
    diameter: f64,
    max_speed: f64,
    min_speed: f64,
    cusped: bool,
    interior: Complex64,
    bbox: Rect,
}

impl TrigCurve {
    /// Build and validate a curve from `(k, d_k)` harmonic pairs. Duplicate
    /// indices are summed and zero coefficients dropped.
    pub fn new<I>(harmonics: I) -> Result<TrigCurve>
    where
        I: IntoIterator<Item = (i32, Complex64)>,
    {
        let mut merged: Vec<(i32, Complex64)> = Vec::new();
        for (k, d) in harmonics {
            match merged.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, v)) => *v += d,
                None => merged.push((k, d)),
            }
        }
        merged.retain(|(_, d)| d.norm() > 0.0);
        merged.sort_by_key(|(k, _)| *k);
        if !merged.iter().any(|(k, _)| *k != 0) {
            return Err(Error::InvalidConfig(
                "curve needs at least one nonzero harmonic with k != 0".into(),
            ));
        }
        if merged
            .iter()
            .any(|(_, d)| !d.re.is_finite() || !d.im.is_finite())
        {
            return Err(Error::InvalidConfig("curve harmonics must be finite".into()));
        }

        let eval = |t: f64| -> Complex64 {
            merged
                .iter()
                .map(|&(k, d)| d * Complex64::from_polar(1.0, k as f64 * t))
                .sum()
        };
        let eval_d = |t: f64| -> Complex64 {
            merged
                .iter()
                .map(|&(k, d)| {
                    d * Complex64::new(0.0, k as f64) * Complex64::from_polar(1.0, k as f64 * t)
                })
                .sum()
        };

        let polyline: Vec<Complex64> = (0..POLYLINE_SAMPLES)
            .map(|i| eval(2.0 * std::f64::consts::PI * i as f64 / POLYLINE_SAMPLES as f64))
            .collect();

        let mut max_speed = 0.0f64;
        let mut min_speed = f64::INFINITY;
        for i in 0..SPEED_SAMPLES {
            let t = 2.0 * std::f64::consts::PI * i as f64 / SPEED_SAMPLES as f64;
            let s = eval_d(t).norm();
            max_speed = max_speed.max(s);
            min_speed = min_speed.min(s);
        }

        let mut bbox = Rect {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for &p in &polyline {
            bbox.x_min = bbox.x_min.min(p.re);
            bbox.x_max = bbox.x_max.max(p.re);
            bbox.y_min = bbox.y_min.min(p.im);
            bbox.y_max = bbox.y_max.max(p.im);
        }

        let diameter = polyline_diameter(&polyline);

        let mut curve = TrigCurve {
            harmonics: merged,
            polyline,
            diameter,
            max_speed,
            min_speed,
            cusped: min_speed < CUSP_REL_TOL * max_speed,
            interior: Complex64::new(0.0, 0.0),
            bbox,
        };

        if let Some((a, b)) = self_intersection(&curve.polyline) {
            let _ = (a, b);
            return Err(Error::SelfIntersecting { contour: 0 });
        }
        curve.interior = curve.find_interior_point()?;
        Ok(curve)
    }

    /// Convenience constructor for a circle of radius `r` centered at `c`.
    pub fn circle(c: Complex64, r: f64) -> TrigCurve {
        TrigCurve::new([(0, c), (1, Complex64::new(r, 0.0))]).expect("circle is a valid curve")
    }

    pub fn harmonics(&self) -> &[(i32, Complex64)] {
        &self.harmonics
    }

    /// Constant harmonic `d_0`, the mean of the curve.
    pub fn mean(&self) -> Complex64 {
        self.harmonics
            .iter()
            .find(|(k, _)| *k == 0)
            .map(|&(_, d)| d)
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Curve point `z(t) = sum_k d_k e^{ikt}`.
    pub fn point(&self, t: f64) -> Complex64 {
        self.harmonics
            .iter()
            .map(|&(k, d)| d * Complex64::from_polar(1.0, k as f64 * t))
            .sum()
    }

    /// Derivative `sum_k (ik)^order d_k e^{ikt}` for order 1 or 2.
    pub fn derivative(&self, t: f64, order: u32) -> Complex64 {
        self.harmonics
            .iter()
            .map(|&(k, d)| {
                let ik = Complex64::new(0.0, k as f64);
                let mut f = Complex64::new(1.0, 0.0);
                for _ in 0..order {
                    f *= ik;
                }
                d * f * Complex64::from_polar(1.0, k as f64 * t)
            })
            .sum()
    }

    /// Curve and derivative samples on the uniform `n`-point grid.
    pub fn sampled(&self, n: usize) -> SampledCurve {
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let mut z = Vec::with_capacity(n);
        let mut dz = Vec::with_capacity(n);
        for i in 0..n {
            let t = h * i as f64;
            z.push(self.point(t));
            dz.push(self.derivative(t, 1));
        }
        SampledCurve { z, dz }
    }

    /// Signed curvature `Im(conj(z') z'') / |z'|^3`.
    ///
    /// Fails with [`Error::CuspAtParameter`] when `|z'(t)|` is below the cusp
    /// tolerance, since curvature is undefined there.
    pub fn curvature(&self, t: f64) -> Result<f64> {
        let d1 = self.derivative(t, 1);
        let speed = d1.norm();
        if speed <= CUSP_REL_TOL * self.max_speed {
            return Err(Error::CuspAtParameter { t, speed });
        }
        let d2 = self.derivative(t, 2);
        Ok((d1.conj() * d2).im / (speed * speed * speed))
    }

    /// Winding number of the curve about `z`, by trapezoid quadrature of
    /// `(1/2pi i) \oint z'(t) / (z(t) - z) dt` rounded to the nearest integer.
    ///
    /// The node count grows as `z` approaches the curve so that the rounded
    /// value stays trustworthy; points closer than `1e-10 * diameter` are
    /// rejected as on-boundary.
    pub fn winding_number(&self, z: Complex64) -> Result<i32> {
        let dist = self.distance_to(z);
        let tolerance = 1e-10 * self.diameter;
        if dist < tolerance {
            return Err(Error::PointOnBoundary {
                distance: dist,
                tolerance,
            });
        }
        // Quadrature error decays like exp(-c n d / max|z'|); pick n so the
        // exponent is safely large before rounding.
        let n = ((64.0 * self.max_speed / dist).ceil() as usize)
            .clamp(1024, 1 << 18)
            .next_power_of_two();
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let t = h * i as f64;
            acc += self.derivative(t, 1) / (self.point(t) - z);
        }
        let w = (acc * h / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).re;
        Ok(w.round() as i32)
    }

    /// A validated point strictly inside the region bounded by the curve.
    ///
    /// Tries the curve mean `d_0` first, then the area centroid of the
    /// polyline; a candidate is accepted when the curve winds around it
    /// exactly once.
    pub fn interior_point(&self) -> Result<Complex64> {
        Ok(self.interior)
    }

    fn find_interior_point(&self) -> Result<Complex64> {
        let mut saw_clockwise = false;
        for candidate in [self.mean(), polyline_area_centroid(&self.polyline)] {
            match self.winding_number(candidate) {
                Ok(1) => return Ok(candidate),
                Ok(-1) => saw_clockwise = true,
                _ => {}
            }
        }
        if saw_clockwise {
            Err(Error::ClockwiseOrientation { contour: 0 })
        } else {
            Err(Error::NoInteriorPoint { contour: 0 })
        }
    }

    /// Distance from `z` to the sampled polyline, measured against the
    /// segments (accurate to the polyline sag, not the vertex spacing).
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let n = self.polyline.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.polyline[i];
            let b = self.polyline[(i + 1) % n];
            let ab = b - a;
            let len2 = ab.norm_sqr();
            let t = if len2 > 0.0 {
                (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            best = best.min((z - (a + t * ab)).norm());
        }
        best
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn max_speed(&self) -> f64 {
        self.max_speed
    }

    pub fn min_speed(&self) -> f64 {
        self.min_speed
    }

    /// True when `|z'|` drops below `1e-6 * max |z'|` somewhere on the curve.
    pub fn is_cusped(&self) -> bool {
        self.cusped
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub(crate) fn polyline(&self) -> &[Complex64] {
        &self.polyline
    }
}

/// The full obstacle set: an ordered list of disjoint contours plus one
/// validated interior point per contour. Immutable after construction and
/// safe to share across threads.
#[derive(Debug, Clone)]
pub struct Geometry {
    curves: Vec<TrigCurve>,
    interior_points: Vec<Complex64>,
    diameter: f64,
}

impl Geometry {
    pub fn new(curves: Vec<TrigCurve>) -> Result<Geometry> {
        if curves.is_empty() {
            return Err(Error::InvalidConfig("geometry needs at least one contour".into()));
        }
        let interior_points: Vec<Complex64> = curves
            .iter()
            .enumerate()
            .map(|(s, c)| {
                c.interior_point().map_err(|e| match e {
                    Error::NoInteriorPoint { .. } => Error::NoInteriorPoint { contour: s },
                    Error::ClockwiseOrientation { .. } => Error::ClockwiseOrientation { contour: s },
                    other => other,
                })
            })
            .collect::<Result<_>>()?;

        for a in 0..curves.len() {
            for b in (a + 1)..curves.len() {
                if polylines_intersect(curves[a].polyline(), curves[b].polyline()) {
                    return Err(Error::ContoursIntersect { first: a, second: b });
                }
                // A contour nested inside another would make its interior
                // point wind nonzero with respect to the outer curve.
                if curves[b].winding_number(interior_points[a]).unwrap_or(0) != 0 {
                    return Err(Error::NestedContours { inner: a, outer: b });
                }
                if curves[a].winding_number(interior_points[b]).unwrap_or(0) != 0 {
                    return Err(Error::NestedContours { inner: b, outer: a });
                }
            }
        }

        let diameter = geometry_diameter(&curves);
        Ok(Geometry {
            curves,
            interior_points,
            diameter,
        })
    }

    pub fn curves(&self) -> &[TrigCurve] {
        &self.curves
    }

    pub fn curve(&self, s: usize) -> &TrigCurve {
        &self.curves[s]
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn interior_points(&self) -> &[Complex64] {
        &self.interior_points
    }

    pub fn interior_point(&self, s: usize) -> Complex64 {
        self.interior_points[s]
    }

    /// Largest pairwise distance over boundary samples of all contours.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Union of the contour bounding boxes.
    pub fn bbox(&self) -> Rect {
        let mut r = self.curves[0].bbox();
        for c in &self.curves[1..] {
            r = r.union(&c.bbox());
        }
        r
    }

    /// Largest `max |z'|` over all contours.
    pub fn max_speed(&self) -> f64 {
        self.curves
            .iter()
            .map(TrigCurve::max_speed)
            .fold(0.0, f64::max)
    }
}

fn polyline_diameter(points: &[Complex64]) -> f64 {
    // Subsample; pairwise over the full polyline is wasteful and the value
    // only feeds tolerances.
    let step = (points.len() / 256).max(1);
    let pts: Vec<Complex64> = points.iter().step_by(step).copied().collect();
    let mut d = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

fn geometry_diameter(curves: &[TrigCurve]) -> f64 {
    let mut pts: Vec<Complex64> = Vec::new();
    for c in curves {
        let step = (c.polyline().len() / 128).max(1);
        pts.extend(c.polyline().iter().step_by(step));
    }
    let mut d = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

/// Area centroid of the closed polyline via the shoelace formula. Falls back
/// to the vertex mean when the enclosed area is degenerate.
fn polyline_area_centroid(points: &[Complex64]) -> Complex64 {
    let n = points.len();
    let mut area = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        let cross = p.re * q.im - q.re * p.im;
        area += cross;
        cx += (p.re + q.re) * cross;
        cy += (p.im + q.im) * cross;
    }
    area *= 0.5;
    if area.abs() < f64::MIN_POSITIVE.sqrt() {
        let mean: Complex64 = points.iter().sum::<Complex64>() / n as f64;
        return mean;
    }
    Complex64::new(cx / (6.0 * area), cy / (6.0 * area))
}

#[derive(Clone, Copy)]
struct Segment {
    a: Complex64,
    b: Complex64,
}

impl Segment {
    fn min_x(&self) -> f64 {
        self.a.re.min(self.b.re)
    }
    fn max_x(&self) -> f64 {
        self.a.re.max(self.b.re)
    }
    fn bbox_overlaps(&self, other: &Segment) -> bool {
        self.max_x() >= other.min_x()
            && other.max_x() >= self.min_x()
            && self.a.im.max(self.b.im) >= other.a.im.min(other.b.im)
            && other.a.im.max(other.b.im) >= self.a.im.min(self.b.im)
    }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_properly_intersect(s: &Segment, t: &Segment) -> bool {
    if !s.bbox_overlaps(t) {
        return false;
    }
    let d1 = orient(s.a, s.b, t.a);
    let d2 = orient(s.a, s.b, t.b);
    let d3 = orient(t.a, t.b, s.a);
    let d4 = orient(t.a, t.b, s.b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// X-sweep over the closed polyline's segments; reports the first pair of
/// non-adjacent segments that properly intersect.
fn self_intersection(points: &[Complex64]) -> Option<(usize, usize)> {
    let n = points.len();
    let segs: Vec<Segment> = (0..n)
        .map(|i| Segment {
            a: points[i],
            b: points[(i + 1) % n],
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| segs[i].min_x().total_cmp(&segs[j].min_x()));

    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let si = &segs[i];
        active.retain(|&j| segs[j].max_x() >= si.min_x());
        for &j in &active {
            let adjacent = {
                let d = i.abs_diff(j);
                d <= 1 || d == n - 1
            };
            if !adjacent && segments_properly_intersect(si, &segs[j]) {
                return Some((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    None
}

fn polylines_intersect(a: &[Complex64], b: &[Complex64]) -> bool {
    let na = a.len();
    let nb = b.len();
    let segs_a: Vec<Segment> = (0..na)
        .map(|i| Segment {
            a: a[i],
            b: a[(i + 1) % na],
        })
        .collect();
    let segs_b: Vec<Segment> = (0..nb)
        .map(|i| Segment {
            a: b[i],
            b: b[(i + 1) % nb],
        })
        .collect();
    for sa in &segs_a {
        for sb in &segs_b {
            if segments_properly_intersect(sa, sb) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit_circle() -> TrigCurve {
        TrigCurve::circle(Complex64::new(0.0, 0.0), 1.0)
    }

    fn ellipse() -> TrigCurve {
        // z(t) = 2 e^{-it} + 4 e^{it}
        TrigCurve::new([(-1, Complex64::new(2.0, 0.0)), (1, Complex64::new(4.0, 0.0))]).unwrap()
    }

    /// Sharp-cornered test curve:
    /// 0.15 e^{2it} + 1.6 e^{it} + (0.8+0.3i) e^{-it} - 0.25i e^{-2it}.
    fn cusp_curve() -> TrigCurve {
        TrigCurve::new([
            (2, Complex64::new(0.15, 0.0)),
            (1, Complex64::new(1.6, 0.0)),
            (-1, Complex64::new(0.8, 0.3)),
            (-2, Complex64::new(0.0, -0.25)),
        ])
        .unwrap()
    }

    #[test]
    fn curve_point_examples() {
        let c = unit_circle();
        let z = c.point(0.0);
        assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);

        let e = ellipse();
        let z = e.point(0.0);
        assert_abs_diff_eq!(z.re, 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-14);
        let z = e.point(PI / 2.0);
        assert_abs_diff_eq!(z.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z.im, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn curve_derivative_examples() {
        let c = unit_circle();
        let d = c.derivative(0.0, 1);
        assert_abs_diff_eq!(d.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.im, 1.0, epsilon = 1e-15);
        let d2 = c.derivative(0.0, 2);
        assert_abs_diff_eq!(d2.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d2.im, 0.0, epsilon = 1e-15);

        let e = ellipse();
        let d = e.derivative(0.0, 1);
        assert_abs_diff_eq!(d.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.im, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let e = cusp_curve();
        let h = 1e-5;
        for i in 0..17 {
            let t = 2.0 * PI * i as f64 / 17.0;
            let fd = (e.point(t + h) - e.point(t - h)) / (2.0 * h);
            let an = e.derivative(t, 1);
            assert!((fd - an).norm() < 1e-8, "t = {t}: fd {fd} vs {an}");
        }
    }

    #[test]
    fn periodicity_is_exact() {
        let e = cusp_curve();
        for i in 0..13 {
            let t = 2.0 * PI * i as f64 / 13.0;
            let diff = (e.point(t + 2.0 * PI) - e.point(t)).norm();
            assert!(diff < 1e-12, "period violation {diff} at t = {t}");
        }
    }

    #[test]
    fn winding_number_examples() {
        let c = unit_circle();
        assert_eq!(c.winding_number(Complex64::new(0.0, 0.0)).unwrap(), 1);
        assert_eq!(c.winding_number(Complex64::new(5.0, 0.0)).unwrap(), 0);

        // Rotated ellipse shifted to 10i.
        let rot = Complex64::from_polar(1.0, -PI / 4.0);
        let upper = TrigCurve::new([
            (1, 3.0 * rot),
            (-1, -rot),
            (0, Complex64::new(0.0, 10.0)),
        ])
        .unwrap();
        assert_eq!(upper.winding_number(Complex64::new(0.0, 10.0)).unwrap(), 1);
    }

    #[test]
    fn winding_rejects_boundary_point() {
        let c = unit_circle();
        let err = c.winding_number(Complex64::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::PointOnBoundary { .. }));
    }

    #[test]
    fn interior_point_examples() {
        let c = unit_circle();
        assert_abs_diff_eq!(c.interior_point().unwrap().norm(), 0.0, epsilon = 1e-15);

        let rot = Complex64::from_polar(1.0, -PI / 4.0);
        let upper = TrigCurve::new([
            (1, 3.0 * rot),
            (-1, -rot),
            (0, Complex64::new(0.0, 10.0)),
        ])
        .unwrap();
        let p = upper.interior_point().unwrap();
        assert_abs_diff_eq!(p.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.im, 10.0, epsilon = 1e-12);

        let cusp = cusp_curve();
        let p = cusp.interior_point().unwrap();
        assert_abs_diff_eq!(p.norm(), 0.0, epsilon = 1e-12);
        assert_eq!(cusp.winding_number(p).unwrap(), 1);
    }

    #[test]
    fn curvature_examples() {
        let c = unit_circle();
        for r in [0.5, 1.0, 2.0, 7.0] {
            let circle = TrigCurve::circle(Complex64::new(0.0, 0.0), r);
            for i in 0..8 {
                let t = 2.0 * PI * i as f64 / 8.0;
                assert_abs_diff_eq!(circle.curvature(t).unwrap(), 1.0 / r, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(c.curvature(1.234).unwrap(), 1.0, epsilon = 1e-12);

        // Cross-check the ellipse against a turning-angle finite difference:
        // curvature = d(arg z')/dt / |z'|.
        let e = ellipse();
        let t = 0.0;
        let h = 1e-6;
        let a1 = e.derivative(t + h, 1);
        let a0 = e.derivative(t - h, 1);
        let oracle = (a1 / a0).arg() / (2.0 * h) / e.derivative(t, 1).norm();
        assert_abs_diff_eq!(e.curvature(t).unwrap(), oracle, epsilon = 1e-6);
    }

    #[test]
    fn curvature_errors_at_cusp() {
        // Deltoid 2 e^{it} + e^{-2it}: |z'| vanishes exactly at t = 0,
        // 2pi/3 and 4pi/3.
        let deltoid = TrigCurve::new([
            (1, Complex64::new(2.0, 0.0)),
            (-2, Complex64::new(1.0, 0.0)),
        ])
        .unwrap();
        assert!(deltoid.is_cusped());
        assert!(matches!(
            deltoid.curvature(0.0),
            Err(Error::CuspAtParameter { .. })
        ));
        // Away from the cusps the curvature is well-defined.
        assert!(deltoid.curvature(0.5).is_ok());

        // The sharp-cornered example obstacle is not a true cusp: its
        // boundary speed stays bounded away from zero.
        let sharp = cusp_curve();
        assert!(!sharp.is_cusped());
        assert!(sharp.min_speed() > 1e-2);
        assert!(sharp.curvature(3.5152788).is_ok());
    }

    #[test]
    fn clockwise_curve_is_rejected() {
        // e^{-it}: unit circle traced clockwise.
        let err = TrigCurve::new([(-1, Complex64::new(1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::ClockwiseOrientation { .. }));
    }

    #[test]
    fn self_intersecting_curve_is_rejected() {
        // A figure-eight-like curve: e^{it} + 1.5 e^{-2it} loops over itself.
        let err = TrigCurve::new([
            (1, Complex64::new(1.0, 0.0)),
            (-2, Complex64::new(1.5, 0.0)),
        ]);
        assert!(err.is_err());
    }

    #[test]
    fn geometry_validates_disjointness() {
        let a = TrigCurve::circle(Complex64::new(0.0, 0.0), 1.0);
        let b = TrigCurve::circle(Complex64::new(1.0, 0.0), 1.0);
        let err = Geometry::new(vec![a, b]).unwrap_err();
        assert!(matches!(err, Error::ContoursIntersect { .. }));

        let outer = TrigCurve::circle(Complex64::new(0.0, 0.0), 5.0);
        let inner = TrigCurve::circle(Complex64::new(0.0, 0.0), 1.0);
        let err = Geometry::new(vec![outer, inner]).unwrap_err();
        assert!(matches!(err, Error::NestedContours { .. }));
    }

    #[test]
    fn geometry_winding_of_interior_points() {
        let a = TrigCurve::circle(Complex64::new(0.0, 0.0), 1.0);
        let b = TrigCurve::circle(Complex64::new(10.0, 0.0), 1.0);
        let g = Geometry::new(vec![a, b]).unwrap();
        for s in 0..2 {
            for sigma in 0..2 {
                let expected = if s == sigma { 1 } else { 0 };
                assert_eq!(
                    g.curve(sigma).winding_number(g.interior_point(s)).unwrap(),
                    expected
                );
            }
        }
    }
}
