//! Independent numeric checks of every closed form.
//!
//! Nothing here uses the closed-form angle or energy algebra: tangent balls
//! are found by root finding, the opening is computed exactly on the pixel
//! grid from a distance transform, and sets bounded by arcs are measured
//! with Green's theorem.

pub mod arcs;
mod edt;
mod measure;
mod tangency;
mod verify;

pub use arcs::{ball_clearance, omega_boundary, opening_boundary, ArcSet, Piece};
pub use edt::{dilate, disc_threshold, erode, opening, squared_distance};
pub use measure::{
    contour_length, measure_mask, measure_mask_with, Measure, Method, EST_ERROR_PER_PIXEL,
};
pub use tangency::{
    annulus_tangency, dumbbell_tangency, numeric_tangency, square_tangency, BoundaryPart, Contact,
    RecoveredAngles, TangencyResult, RESIDUAL_RELATIVE,
};
pub use verify::{verify_problem, Check, CheckStatus, Tolerances};

use crate::analytic::CandidateKind;
use crate::error::{Error, Result};
use crate::mask::{rasterize, rasterize_on, Grid, PixelMask};
use crate::shapes::{Disc, Region, ShapeSpec};

/// Padding added around a shape's bounding box before rasterizing, as a
/// fraction of the box's larger side.
pub const PADDING_FRACTION: f64 = 0.03;

pub fn default_padding(shape: &ShapeSpec) -> f64 {
    let b = shape.bounding_box();
    PADDING_FRACTION * b.width().max(b.height())
}

/// Rasterizes Ω with [`default_padding`].
pub fn rasterize_shape(shape: &ShapeSpec, resolution: usize) -> Result<PixelMask> {
    rasterize(shape, resolution, default_padding(shape))
}

/// Perimeter, symmetric-difference area, and energy of one set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericEnergy {
    pub perimeter: f64,
    pub fidelity_area: f64,
    pub total: f64,
}

impl NumericEnergy {
    fn new(perimeter: f64, fidelity_area: f64, lambda: f64) -> Self {
        Self {
            perimeter,
            fidelity_area,
            total: perimeter + lambda * fidelity_area,
        }
    }
}

/// The opening measured exactly from its arc boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcOpening {
    pub boundary: ArcSet,
    pub measure: Measure,
    pub energy: NumericEnergy,
    /// Smallest distance between mirrored ball centers minus `2/λ`.
    pub clearance: f64,
    pub balls: Vec<TangencyResult>,
}

/// `Σ = opening(Ω, 1/λ)` built from [`numeric_tangency`] and measured with
/// [`ArcSet`]. `|Ω △ Σ| = |Ω| - |Σ|` because `Σ ⊆ Ω`.
pub fn arc_exact_opening(shape: &ShapeSpec, lambda: f64) -> Result<ArcOpening> {
    let balls = numeric_tangency(shape, lambda)?;
    let boundary = opening_boundary(shape, &balls)?;
    let omega = omega_boundary(shape);
    let area = boundary.area();
    let perimeter = boundary.perimeter();
    let residual = balls.iter().map(|b| b.residual).fold(0.0, f64::max);
    let scale = omega.perimeter();
    Ok(ArcOpening {
        clearance: ball_clearance(shape, &balls)?,
        energy: NumericEnergy::new(perimeter, omega.area() - area, lambda),
        measure: Measure {
            area,
            perimeter,
            method: Method::ArcExact,
            est_error: (residual + boundary.closure_gap()) / scale.max(f64::MIN_POSITIVE),
        },
        boundary,
        balls,
    })
}

/// The opening of the rasterized Ω and its measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterOpening {
    pub omega: PixelMask,
    pub opened: PixelMask,
    pub measure: Measure,
    pub energy: NumericEnergy,
}

pub fn raster_opening(shape: &ShapeSpec, lambda: f64, resolution: usize) -> Result<RasterOpening> {
    let omega = rasterize_shape(shape, resolution)?;
    let opened = opening(&omega, 1.0 / lambda)?;
    let measure = measure_mask(&opened);
    let removed = (omega.count() - opened.count()) as f64 * omega.grid().pixel_area();
    Ok(RasterOpening {
        energy: NumericEnergy::new(measure.perimeter, removed, lambda),
        measure,
        omega,
        opened,
    })
}

/// Both numeric versions of the opening candidate's energy.
#[derive(Debug, Clone, PartialEq)]
pub struct OpeningEnergy {
    pub raster: RasterOpening,
    pub arc_exact: ArcOpening,
}

pub fn opening_energy(shape: &ShapeSpec, lambda: f64, resolution: usize) -> Result<OpeningEnergy> {
    Ok(OpeningEnergy {
        arc_exact: arc_exact_opening(shape, lambda)?,
        raster: raster_opening(shape, lambda, resolution)?,
    })
}

/// `Per(Σ) + λ|Σ △ Ω|` of a raster candidate, with Ω rasterized on the
/// candidate's grid.
pub fn candidate_energy_numeric(
    shape: &ShapeSpec,
    lambda: f64,
    candidate: &PixelMask,
) -> Result<NumericEnergy> {
    let omega = rasterize_on(shape, *candidate.grid());
    let diff = candidate.symmetric_difference_count(&omega)? as f64 * candidate.grid().pixel_area();
    Ok(NumericEnergy::new(contour_length(candidate), diff, lambda))
}

/// Rasterizes one of the family's candidate sets on `grid`. The opening is
/// computed from the rasterized Ω.
pub fn candidate_mask(
    shape: &ShapeSpec,
    lambda: f64,
    kind: CandidateKind,
    grid: Grid,
) -> Result<PixelMask> {
    let region: Box<dyn Region> = match (kind, shape) {
        (CandidateKind::Empty, _) => return Ok(PixelMask::empty(grid)),
        (CandidateKind::Omega, _) => return Ok(rasterize_on(shape, grid)),
        (CandidateKind::Opening, _) => return opening(&rasterize_on(shape, grid), 1.0 / lambda),
        (CandidateKind::OuterDisc, ShapeSpec::Annulus(s)) => {
            Box::new(Disc::new(s.outer_center(), s.outer_radius()))
        }
        (CandidateKind::InnerDisc, ShapeSpec::Annulus(s)) => {
            Box::new(Disc::new(s.inner_center(), s.inner_radius()))
        }
        (CandidateKind::OuterRoundedSquare, ShapeSpec::SquareAnnulus(s)) => {
            Box::new(s.outer_region())
        }
        (CandidateKind::InnerRoundedSquare, ShapeSpec::SquareAnnulus(s)) => {
            Box::new(s.inner_region())
        }
        (kind, shape) => {
            return Err(Error::InvalidShape(format!(
                "candidate {} does not belong to the {} family",
                kind.label(),
                shape.family()
            )))
        }
    };
    Ok(rasterize_on(region.as_ref(), grid))
}
