//! Side-by-side comparison of the closed forms with the oracle.

use std::fmt;

use super::{
    arc_exact_opening, measure_mask_with, numeric_tangency, raster_opening, rasterize_shape,
    RecoveredAngles,
};
use crate::analytic::{
    annulus_angles, dumbbell_angles, energies, square_angles, CandidateKind, Validity,
};
use crate::error::Result;
use crate::shapes::{validate, Problem, ShapeSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute, radians.
    pub angle: f64,
    /// Relative, closed form against the arc-exact oracle.
    pub energy: f64,
    /// Relative, closed form against raster measurements.
    pub raster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            angle: 1e-9,
            energy: 1e-6,
            raster: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Neither side can place the tangent ball.
    ConsistentInfeasible,
}

impl CheckStatus {
    pub fn passed(self) -> bool {
        !matches!(self, CheckStatus::Fail)
    }

    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::ConsistentInfeasible => "consistent-infeasible",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One comparison. For angles `error` is absolute, otherwise relative.
/// Values are NaN where a side has nothing to report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub analytic: f64,
    pub oracle: f64,
    pub error: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
}

impl Check {
    fn compare(
        name: impl Into<String>,
        analytic: f64,
        oracle: f64,
        tolerance: f64,
        relative: bool,
    ) -> Self {
        let diff = (analytic - oracle).abs();
        let error = if relative {
            diff / analytic.abs().max(f64::MIN_POSITIVE)
        } else {
            diff
        };
        Self {
            name: name.into(),
            analytic,
            oracle,
            error,
            tolerance,
            status: if error <= tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        }
    }

    fn flag(name: impl Into<String>, analytic: bool, oracle: bool, status: CheckStatus) -> Self {
        Self {
            name: name.into(),
            analytic: analytic as u8 as f64,
            oracle: oracle as u8 as f64,
            error: (analytic != oracle) as u8 as f64,
            tolerance: 0.0,
            status,
        }
    }
}

/// Closed-form angles as `(name, value)` pairs, without admissibility
/// checks, or `None` when an arccos argument is out of range.
fn closed_form_angles(shape: &ShapeSpec, lambda: f64) -> Option<Vec<(&'static str, f64)>> {
    match shape {
        ShapeSpec::Annulus(s) => annulus_angles(s, lambda)
            .ok()
            .map(|a| vec![("phi", a.phi), ("theta", a.theta)]),
        ShapeSpec::SquareAnnulus(s) => square_angles(s, lambda)
            .ok()
            .map(|a| vec![("phi", a.phi), ("theta", a.theta)]),
        ShapeSpec::Dumbbell(s) => dumbbell_angles(s, lambda).ok().map(|a| {
            vec![
                ("phi", a.phi),
                ("theta", a.theta),
                ("omega", a.omega),
                ("psi", a.psi),
            ]
        }),
        ShapeSpec::Disc(_) => Some(Vec::new()),
    }
}

fn recovered(angles: &RecoveredAngles) -> Vec<f64> {
    match angles {
        RecoveredAngles::Annulus(a) => vec![a.phi, a.theta],
        RecoveredAngles::Square(a) => vec![a.phi, a.theta],
        RecoveredAngles::Dumbbell(a) => vec![a.phi, a.theta, a.omega, a.psi],
    }
}

/// Runs every applicable comparison for one problem.
///
/// Tangency is compared even for inadmissible problems, where agreement on
/// infeasibility counts as a pass. Energy comparisons need an admissible
/// problem; raster comparisons use `resolution` columns.
pub fn verify_problem(
    problem: &Problem,
    resolution: usize,
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let (shape, lambda) = (&problem.shape, problem.lambda);
    let mut checks = Vec::new();

    let analytic_angles = closed_form_angles(shape, lambda);
    let oracle_balls = numeric_tangency(shape, lambda);
    match (&analytic_angles, &oracle_balls) {
        (Some(names), Ok(balls)) => {
            if let Some(ball) = balls.first() {
                for ((name, want), got) in names.iter().zip(recovered(&ball.angles)) {
                    checks.push(Check::compare(
                        format!("angle:{name}"),
                        *want,
                        got,
                        tol.angle,
                        false,
                    ));
                }
            }
        }
        (None, Err(_)) => checks.push(Check::flag(
            "tangency",
            false,
            false,
            CheckStatus::ConsistentInfeasible,
        )),
        (analytic, oracle) => checks.push(Check::flag(
            "tangency",
            analytic.is_some(),
            oracle.is_ok(),
            CheckStatus::Fail,
        )),
    }

    if !validate(problem).passed() {
        return Ok(checks);
    }

    let list = energies(problem)?;
    let by_kind = |kind: CandidateKind| list.iter().find(|e| e.candidate.kind == kind);

    // Trivial candidates against the raster of Ω.
    let omega = rasterize_shape(shape, resolution)?;
    let measured = measure_mask_with(&omega, shape);
    if let Some(e) = by_kind(CandidateKind::Empty).and_then(|e| e.total()) {
        checks.push(Check::compare(
            "raster:E(empty)",
            e,
            lambda * measured.area,
            tol.raster,
            true,
        ));
    }
    if let Some(e) = by_kind(CandidateKind::Omega).and_then(|e| e.total()) {
        checks.push(Check::compare(
            "raster:E(omega)",
            e,
            measured.perimeter,
            tol.raster,
            true,
        ));
    }

    let Some(opening) = by_kind(CandidateKind::Opening) else {
        return Ok(checks);
    };
    if opening.validity == Validity::AngleUndefined
        || opening.validity == Validity::OpeningEqualsOmega
    {
        return Ok(checks);
    }
    let arc = arc_exact_opening(shape, lambda)?;
    checks.push(Check::flag(
        "opening:balls-disjoint",
        opening.validity == Validity::Valid,
        arc.clearance > 0.0,
        if (opening.validity == Validity::Valid) == (arc.clearance > 0.0) {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
    ));
    if opening.validity != Validity::Valid {
        return Ok(checks);
    }
    let terms = opening.terms.expect("valid candidates have terms");
    let label = opening.candidate.to_string();
    checks.push(Check::compare(
        format!("arc:{label}:perimeter"),
        terms.perimeter,
        arc.energy.perimeter,
        tol.energy,
        true,
    ));
    checks.push(Check::compare(
        format!("arc:{label}:fidelity"),
        terms.fidelity_area,
        arc.energy.fidelity_area,
        tol.energy,
        true,
    ));
    checks.push(Check::compare(
        format!("arc:{label}:total"),
        terms.total,
        arc.energy.total,
        tol.energy,
        true,
    ));

    // The raster opening has no membership predicate, so thin pieces carry
    // pixel-scale error; compare within its own error band when that is wider.
    let raster = raster_opening(shape, lambda, resolution)?;
    let band = tol.raster.max(raster.measure.est_error);
    checks.push(Check::compare(
        format!("raster:{label}:area"),
        shape.area() - terms.fidelity_area,
        raster.measure.area,
        band,
        true,
    ));
    checks.push(Check::compare(
        format!("raster:{label}:total"),
        terms.total,
        raster.energy.total,
        band,
        true,
    ));
    Ok(checks)
}
