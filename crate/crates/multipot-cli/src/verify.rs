//! Solution invariant checks: boundary impermeability, circulation
//! reproduction and far-field recovery, reported one PASS/FAIL line each.

use multipot::potential::ComplexPotential;
use multipot::Result;

/// Probe offset for the boundary-constancy check, as a fraction of the
/// contour diameter. The stream function varies to first order in the
/// offset (slope = tangential speed), so the offset must keep that physical
/// term below the tolerance; what remains measures solver error.
pub const PROBE_OFFSET_FRACTION: f64 = 3e-5;

/// Probe count per contour for the boundary-constancy check.
pub const PROBE_COUNT: usize = 128;

/// Boundary-constancy tolerance: `max - min < 5e-4 * |v| * diameter`.
pub const STREAM_SPREAD_TOL: f64 = 5e-4;

/// Circulation tolerance: relative for nonzero targets...
pub const CIRCULATION_REL_TOL: f64 = 1e-4;
/// ... absolute (scaled by `1 + |v| * diameter`) when the target is zero.
pub const CIRCULATION_ABS_TOL: f64 = 1e-6;

/// Minimum acceptable far-field decay exponent.
pub const FAR_FIELD_MIN_EXPONENT: f64 = 0.9;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn report_line(&self) -> String {
        format!(
            "{} {} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub fn boundary_constancy(pot: &ComplexPotential, s: usize) -> Result<Check> {
    let diam = pot.geometry().curve(s).diameter();
    let offset = PROBE_OFFSET_FRACTION * diam;
    let values = pot.boundary_stream_probe(s, offset, PROBE_COUNT)?;
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let spread = max - min;
    let threshold = STREAM_SPREAD_TOL * pot.config().velocity.norm() * diam;
    Ok(Check {
        name: format!("boundary_constancy contour={s}"),
        pass: spread < threshold,
        detail: format!("spread={spread:.3e} threshold={threshold:.3e}"),
    })
}

pub fn circulation(pot: &ComplexPotential, s: usize) -> Result<Check> {
    let target = pot.config().circulations[s];
    let measured = pot.circulation_check(s)?;
    let diam = pot.geometry().curve(s).diameter();
    let tol = if target == 0.0 {
        CIRCULATION_ABS_TOL * (1.0 + pot.config().velocity.norm() * diam)
    } else {
        CIRCULATION_REL_TOL * target.abs()
    };
    Ok(Check {
        name: format!("circulation contour={s}"),
        pass: (measured - target).abs() <= tol,
        detail: format!("measured={measured:.6e} target={target:.6e} tol={tol:.3e}"),
    })
}

pub fn far_field(pot: &ComplexPotential) -> Check {
    let exponent = pot.far_field_decay_exponent();
    Check {
        name: "far_field".to_string(),
        pass: exponent >= FAR_FIELD_MIN_EXPONENT,
        detail: format!("exponent={exponent:.3} threshold={FAR_FIELD_MIN_EXPONENT}"),
    }
}

/// Run all checks; errors during a check become a FAIL line.
pub fn run_all(pot: &ComplexPotential) -> Vec<Check> {
    let mut checks = Vec::new();
    for s in 0..pot.geometry().len() {
        checks.push(boundary_constancy(pot, s).unwrap_or_else(|e| Check {
            name: format!("boundary_constancy contour={s}"),
            pass: false,
            detail: format!("error: {e}"),
        }));
    }
    for s in 0..pot.geometry().len() {
        checks.push(circulation(pot, s).unwrap_or_else(|e| Check {
            name: format!("circulation contour={s}"),
            pass: false,
            detail: format!("error: {e}"),
        }));
    }
    checks.push(far_field(pot));
    checks
}
