use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use thiserror::Error;

use crate::shapes::{AnnulusSpec, DumbbellSpec, SquareAnnulusSpec};

/// Roundoff slack for arccos arguments. Arguments within this distance of
/// `[-1, 1]` are clamped; anything further out is geometric infeasibility.
pub const ACOS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AngleError {
    #[error("annulus is concentric; the tangent-ball angles are undefined")]
    Concentric,
    #[error("arccos argument for {angle} is {argument}, outside [-1, 1]")]
    OutOfRange { angle: &'static str, argument: f64 },
}

/// `acos(x)` for `x ∈ [-1 - ACOS_SLACK, 1 + ACOS_SLACK]`, `None` otherwise.
pub fn acos_checked(x: f64) -> Option<f64> {
    if !x.is_finite() || x.abs() > 1.0 + ACOS_SLACK {
        None
    } else {
        Some(x.clamp(-1.0, 1.0).acos())
    }
}

fn acos_named(angle: &'static str, argument: f64) -> Result<f64, AngleError> {
    acos_checked(argument).ok_or(AngleError::OutOfRange { angle, argument })
}

/// Angles of the `1/λ`-ball tangent to both annulus circles, both measured
/// from the direction of the narrow gap: `phi` at the inner center, `theta`
/// at the outer center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusAngles {
    pub phi: f64,
    pub theta: f64,
}

/// ```text
/// cos φ = ((R - 1/λ)² - d² - (r + 1/λ)²) / (2d(r + 1/λ))
/// cos θ = ((R - 1/λ)² + d² - (r + 1/λ)²) / (2d(R - 1/λ))
/// ```
/// with `d = R - r - δ`.
pub fn annulus_angles(spec: &AnnulusSpec, lambda: f64) -> Result<AnnulusAngles, AngleError> {
    if spec.is_concentric() {
        return Err(AngleError::Concentric);
    }
    let rho = 1.0 / lambda;
    let d = spec.center_offset();
    let reach_out = spec.outer_radius() - rho;
    let reach_in = spec.inner_radius() + rho;
    let cos_phi = (reach_out * reach_out - d * d - reach_in * reach_in) / (2.0 * d * reach_in);
    let cos_theta = (reach_out * reach_out + d * d - reach_in * reach_in) / (2.0 * d * reach_out);
    Ok(AnnulusAngles {
        phi: acos_named("phi", cos_phi)?,
        theta: acos_named("theta", cos_theta)?,
    })
}

/// Angles of a corner ball of the square annulus, measured from the
/// outward corner diagonal: `phi` at the outer arc center, `theta` at the
/// inner arc center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareAngles {
    pub phi: f64,
    pub theta: f64,
}

/// ```text
/// cos φ = (2r - λδ²) / (√2 δ (λr - 1))
/// cos θ = (2r + λδ²) / (√2 δ (λr + 1))
/// ```
pub fn square_angles(spec: &SquareAnnulusSpec, lambda: f64) -> Result<SquareAngles, AngleError> {
    let (r, d) = (spec.corner_radius(), spec.gap());
    let cos_phi = (2.0 * r - lambda * d * d) / (SQRT_2 * d * (lambda * r - 1.0));
    let cos_theta = (2.0 * r + lambda * d * d) / (SQRT_2 * d * (lambda * r + 1.0));
    Ok(SquareAngles {
        phi: acos_named("phi", cos_phi)?,
        theta: acos_named("theta", cos_theta)?,
    })
}

/// Dumbbell angles: `phi` locates the fillet centers from the disc center,
/// `theta` the handle-pinching ball from a fillet center, `omega` and `psi`
/// follow from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumbbellAngles {
    pub phi: f64,
    pub theta: f64,
    pub omega: f64,
    pub psi: f64,
}

/// ```text
/// φ = asin((r + δ/2)/(R + r))    θ = acos((r + δ/2)/(r + 1/λ))
/// ω = π/2 + θ                    ψ = π - ω - φ
/// ```
pub fn dumbbell_angles(spec: &DumbbellSpec, lambda: f64) -> Result<DumbbellAngles, AngleError> {
    let phi = spec.fillet_angle();
    let theta = acos_named(
        "theta",
        spec.fillet_height() / (spec.fillet_radius() + 1.0 / lambda),
    )?;
    let omega = FRAC_PI_2 + theta;
    Ok(DumbbellAngles {
        phi,
        theta,
        omega,
        psi: PI - omega - phi,
    })
}
