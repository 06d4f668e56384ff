//! The parametric input regions Ω, their admissibility rules, and exact
//! point membership.
//!
//! Coordinate conventions:
//!
//! * **Annulus**: outer circle centered at the origin, inner circle centered
//!   at `(R - r - δ, 0)`, so the narrow gap of width `δ` lies on the `+x` axis.
//! * **Square annulus**: centered at the origin and axis aligned. The outer
//!   boundary is the set of points at distance `r` from the closed square of
//!   side `L + 2δ`; the inner boundary is the set at distance `r` from the
//!   concentric square of side `L`.
//! * **Dumbbell**: left end disc centered at the origin, right end disc at
//!   `(L + 2 x_f, 0)` with `x_f = sqrt((R + r)² - (r + δ/2)²)`. The handle is
//!   `x ∈ [x_f, x_f + L]`, `|y| ≤ δ/2`, and the four fillet circles of radius
//!   `r` sit at `(x_f, ±(r + δ/2))` and `(x_f + L, ±(r + δ/2))`.
//! * **Disc**: a single disc at the origin. It is not one of the thin-minimizer
//!   families; it is the calibration case for the discrete solver.
//!
//! Boundary points resolve toward Ω (non-strict inequalities).

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{dist_to_centered_square, Point, Rect};

/// Region between two non-concentric circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSpec {
    outer_radius: f64,
    inner_radius: f64,
    gap: f64,
}

/// Relative roundoff under which `δ` and `R - r` are treated as equal.
const CONCENTRIC_SLACK: f64 = 1e-12;

impl AnnulusSpec {
    /// `outer_radius = R`, `inner_radius = r`, `gap = δ` (minimum distance
    /// between the two circles).
    pub fn new(outer_radius: f64, inner_radius: f64, gap: f64) -> Result<Self> {
        let spec = Self {
            outer_radius,
            inner_radius,
            gap,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        let (big, small, gap) = (self.outer_radius, self.inner_radius, self.gap);
        if !(small > 0.0 && small < big) {
            return Err(Error::InvalidShape(format!(
                "annulus needs 0 < r < R (r = {small}, R = {big})"
            )));
        }
        if !(gap > 0.0 && gap <= big - small + CONCENTRIC_SLACK * big) {
            return Err(Error::InvalidShape(format!(
                "annulus needs 0 < δ ≤ R - r (δ = {gap}, R - r = {})",
                big - small
            )));
        }
        Ok(())
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Distance between the two centers, `d = R - r - δ`.
    pub fn center_offset(&self) -> f64 {
        (self.outer_radius - self.inner_radius - self.gap).max(0.0)
    }

    pub fn outer_center(&self) -> Point {
        Point::ORIGIN
    }

    pub fn inner_center(&self) -> Point {
        Point::new(self.center_offset(), 0.0)
    }

    /// `δ = R - r` up to roundoff: the two circles share a center.
    pub fn is_concentric(&self) -> bool {
        self.center_offset() <= CONCENTRIC_SLACK * self.outer_radius
    }

    pub fn area(&self) -> f64 {
        PI * (self.outer_radius.powi(2) - self.inner_radius.powi(2))
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * PI * (self.outer_radius + self.inner_radius)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.norm_sq() <= self.outer_radius * self.outer_radius
            && (p - self.inner_center()).norm_sq() >= self.inner_radius * self.inner_radius
    }

    pub fn bounding_box(&self) -> Rect {
        let big = self.outer_radius;
        Rect::new(Point::new(-big, -big), Point::new(big, big))
    }
}

/// Square annulus with rounded corners of radius `r` on both boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareAnnulusSpec {
    corner_radius: f64,
    side: f64,
    gap: f64,
}

impl SquareAnnulusSpec {
    /// `corner_radius = r`, `side = L` (inner straight side, arc to arc),
    /// `gap = δ` (distance between the straight edges).
    pub fn new(corner_radius: f64, side: f64, gap: f64) -> Result<Self> {
        if !(corner_radius > 0.0 && side > 0.0 && gap > 0.0) {
            return Err(Error::InvalidShape(format!(
                "square annulus needs r, L, δ > 0 (r = {corner_radius}, L = {side}, δ = {gap})"
            )));
        }
        Ok(Self {
            corner_radius,
            side,
            gap,
        })
    }

    pub fn corner_radius(&self) -> f64 {
        self.corner_radius
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Half side of the core square whose `r`-neighbourhood is the inner
    /// rounded square.
    pub fn inner_half(&self) -> f64 {
        0.5 * self.side
    }

    pub fn outer_half(&self) -> f64 {
        0.5 * self.side + self.gap
    }

    pub fn outer_region(&self) -> RoundedSquare {
        RoundedSquare::new(self.outer_half(), self.corner_radius)
    }

    pub fn inner_region(&self) -> RoundedSquare {
        RoundedSquare::new(self.inner_half(), self.corner_radius)
    }

    /// `4δL + 8δr + 4δ²`.
    pub fn area(&self) -> f64 {
        let (r, l, d) = (self.corner_radius, self.side, self.gap);
        4.0 * d * l + 8.0 * d * r + 4.0 * d * d
    }

    /// `4πr + 8L + 8δ`.
    pub fn perimeter(&self) -> f64 {
        4.0 * PI * self.corner_radius + 8.0 * self.side + 8.0 * self.gap
    }

    pub fn contains(&self, p: Point) -> bool {
        self.outer_region().contains(p)
            && dist_to_centered_square(p, self.inner_half()) >= self.corner_radius
    }

    pub fn bounding_box(&self) -> Rect {
        self.outer_region().bounding_box()
    }
}

/// Two discs joined by a straight handle with filleted corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumbbellSpec {
    end_radius: f64,
    fillet_radius: f64,
    handle_length: f64,
    handle_width: f64,
}

impl DumbbellSpec {
    /// `end_radius = R`, `fillet_radius = r`, `handle_length = L` (flat edge,
    /// arc to arc), `handle_width = δ`.
    pub fn new(
        end_radius: f64,
        fillet_radius: f64,
        handle_length: f64,
        handle_width: f64,
    ) -> Result<Self> {
        if !(fillet_radius > 0.0 && fillet_radius < end_radius) {
            return Err(Error::InvalidShape(format!(
                "dumbbell needs 0 < r < R (r = {fillet_radius}, R = {end_radius})"
            )));
        }
        if !(handle_length > 0.0 && handle_width > 0.0) {
            return Err(Error::InvalidShape(format!(
                "dumbbell needs L, δ > 0 (L = {handle_length}, δ = {handle_width})"
            )));
        }
        if !(fillet_radius + 0.5 * handle_width < end_radius + fillet_radius) {
            return Err(Error::InvalidShape(
                "dumbbell needs r + δ/2 < R + r for the fillet construction".into(),
            ));
        }
        Ok(Self {
            end_radius,
            fillet_radius,
            handle_length,
            handle_width,
        })
    }

    pub fn end_radius(&self) -> f64 {
        self.end_radius
    }

    pub fn fillet_radius(&self) -> f64 {
        self.fillet_radius
    }

    pub fn handle_length(&self) -> f64 {
        self.handle_length
    }

    pub fn handle_width(&self) -> f64 {
        self.handle_width
    }

    /// Height of the fillet centers above the axis, `r + δ/2`.
    pub fn fillet_height(&self) -> f64 {
        self.fillet_radius + 0.5 * self.handle_width
    }

    /// Horizontal offset `x_f` of the fillet centers from the adjacent disc
    /// center.
    pub fn fillet_offset(&self) -> f64 {
        let hyp = self.end_radius + self.fillet_radius;
        let h = self.fillet_height();
        (hyp * hyp - h * h).sqrt()
    }

    /// Distance between the two disc centers, `L + 2 x_f`.
    pub fn center_separation(&self) -> f64 {
        self.handle_length + 2.0 * self.fillet_offset()
    }

    pub fn left_center(&self) -> Point {
        Point::ORIGIN
    }

    pub fn right_center(&self) -> Point {
        Point::new(self.center_separation(), 0.0)
    }

    /// Polar angle of a fillet center seen from its disc center,
    /// `arcsin((r + δ/2)/(R + r))`.
    pub fn fillet_angle(&self) -> f64 {
        (self.fillet_height() / (self.end_radius + self.fillet_radius)).asin()
    }

    /// `2πR² + (2r+δ)x_f - 2(π/2 - φ)r² - 2φR² + δL`.
    pub fn area(&self) -> f64 {
        let (big, r, l, d) = (
            self.end_radius,
            self.fillet_radius,
            self.handle_length,
            self.handle_width,
        );
        let phi = self.fillet_angle();
        2.0 * PI * big * big + (2.0 * r + d) * self.fillet_offset()
            - 2.0 * (0.5 * PI - phi) * r * r
            - 2.0 * phi * big * big
            + d * l
    }

    /// `4(π - φ)R + 4(π/2 - φ)r + 2L`.
    pub fn perimeter(&self) -> f64 {
        let phi = self.fillet_angle();
        4.0 * (PI - phi) * self.end_radius
            + 4.0 * (0.5 * PI - phi) * self.fillet_radius
            + 2.0 * self.handle_length
    }

    pub fn contains(&self, p: Point) -> bool {
        let big = self.end_radius;
        let sep = self.center_separation();
        // Fold onto the left half, upper quadrant.
        let x = if p.x > 0.5 * sep { sep - p.x } else { p.x };
        let y = p.y.abs();
        if x * x + y * y <= big * big {
            return true;
        }
        if x < 0.0 {
            return false;
        }
        if y <= 0.5 * self.handle_width {
            return true;
        }
        let xf = self.fillet_offset();
        if x > xf {
            return false;
        }
        let fillet = Point::new(xf, self.fillet_height());
        // Corner fill: on the handle side of the ray towards the fillet
        // center and outside the fillet circle.
        y * xf <= fillet.y * x
            && (Point::new(x, y) - fillet).norm_sq() >= self.fillet_radius * self.fillet_radius
    }

    pub fn bounding_box(&self) -> Rect {
        let big = self.end_radius;
        Rect::new(
            Point::new(-big, -big),
            Point::new(self.center_separation() + big, big),
        )
    }
}

/// A disc at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSpec {
    radius: f64,
}

impl DiscSpec {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidShape(format!(
                "disc needs radius > 0 (got {radius})"
            )));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn region(&self) -> Disc {
        Disc::new(Point::ORIGIN, self.radius)
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * PI * self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Annulus,
    SquareAnnulus,
    Dumbbell,
    Disc,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Annulus => "annulus",
            Family::SquareAnnulus => "square",
            Family::Dumbbell => "dumbbell",
            Family::Disc => "disc",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "annulus" => Ok(Family::Annulus),
            "square" | "square-annulus" => Ok(Family::SquareAnnulus),
            "dumbbell" => Ok(Family::Dumbbell),
            "disc" => Ok(Family::Disc),
            other => Err(Error::InvalidShape(format!("unknown family '{other}'"))),
        }
    }
}

/// One of the parametric regions Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeSpec {
    Annulus(AnnulusSpec),
    SquareAnnulus(SquareAnnulusSpec),
    Dumbbell(DumbbellSpec),
    Disc(DiscSpec),
}

impl ShapeSpec {
    pub fn family(&self) -> Family {
        match self {
            ShapeSpec::Annulus(_) => Family::Annulus,
            ShapeSpec::SquareAnnulus(_) => Family::SquareAnnulus,
            ShapeSpec::Dumbbell(_) => Family::Dumbbell,
            ShapeSpec::Disc(_) => Family::Disc,
        }
    }

    /// Closed-form `|Ω|`.
    pub fn area(&self) -> f64 {
        match self {
            ShapeSpec::Annulus(s) => s.area(),
            ShapeSpec::SquareAnnulus(s) => s.area(),
            ShapeSpec::Dumbbell(s) => s.area(),
            ShapeSpec::Disc(s) => s.area(),
        }
    }

    /// Closed-form `Per(Ω)`.
    pub fn perimeter(&self) -> f64 {
        match self {
            ShapeSpec::Annulus(s) => s.perimeter(),
            ShapeSpec::SquareAnnulus(s) => s.perimeter(),
            ShapeSpec::Dumbbell(s) => s.perimeter(),
            ShapeSpec::Disc(s) => s.perimeter(),
        }
    }

    /// The λ at which `E(∅) = E(Ω)`, i.e. `Per(Ω)/|Ω|`.
    pub fn crossover_lambda(&self) -> f64 {
        self.perimeter() / self.area()
    }

    /// Multiplies every length by `s`.
    pub fn scaled(&self, s: f64) -> Result<ShapeSpec> {
        Ok(match self {
            ShapeSpec::Annulus(a) => ShapeSpec::Annulus(AnnulusSpec::new(
                a.outer_radius * s,
                a.inner_radius * s,
                a.gap * s,
            )?),
            ShapeSpec::SquareAnnulus(q) => ShapeSpec::SquareAnnulus(SquareAnnulusSpec::new(
                q.corner_radius * s,
                q.side * s,
                q.gap * s,
            )?),
            ShapeSpec::Dumbbell(d) => ShapeSpec::Dumbbell(DumbbellSpec::new(
                d.end_radius * s,
                d.fillet_radius * s,
                d.handle_length * s,
                d.handle_width * s,
            )?),
            ShapeSpec::Disc(d) => ShapeSpec::Disc(DiscSpec::new(d.radius * s)?),
        })
    }
}

impl From<AnnulusSpec> for ShapeSpec {
    fn from(s: AnnulusSpec) -> Self {
        ShapeSpec::Annulus(s)
    }
}

impl From<SquareAnnulusSpec> for ShapeSpec {
    fn from(s: SquareAnnulusSpec) -> Self {
        ShapeSpec::SquareAnnulus(s)
    }
}

impl From<DumbbellSpec> for ShapeSpec {
    fn from(s: DumbbellSpec) -> Self {
        ShapeSpec::Dumbbell(s)
    }
}

impl From<DiscSpec> for ShapeSpec {
    fn from(s: DiscSpec) -> Self {
        ShapeSpec::Disc(s)
    }
}

/// A planar set with an exact membership predicate.
pub trait Region: Sync {
    fn contains(&self, p: Point) -> bool;
    fn bounding_box(&self) -> Rect;
}

impl Region for ShapeSpec {
    fn contains(&self, p: Point) -> bool {
        match self {
            ShapeSpec::Annulus(s) => s.contains(p),
            ShapeSpec::SquareAnnulus(s) => s.contains(p),
            ShapeSpec::Dumbbell(s) => s.contains(p),
            ShapeSpec::Disc(s) => s.region().contains(p),
        }
    }

    fn bounding_box(&self) -> Rect {
        match self {
            ShapeSpec::Annulus(s) => s.bounding_box(),
            ShapeSpec::SquareAnnulus(s) => s.bounding_box(),
            ShapeSpec::Dumbbell(s) => s.bounding_box(),
            ShapeSpec::Disc(s) => s.region().bounding_box(),
        }
    }
}

/// Closed disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }
}

impl Region for Disc {
    fn contains(&self, p: Point) -> bool {
        (p - self.center).norm_sq() <= self.radius * self.radius
    }

    fn bounding_box(&self) -> Rect {
        let r = Point::new(self.radius, self.radius);
        Rect::new(self.center - r, self.center + r)
    }
}

/// Points within `radius` of the centered square `[-half, half]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundedSquare {
    pub half: f64,
    pub radius: f64,
}

impl RoundedSquare {
    pub fn new(half: f64, radius: f64) -> Self {
        Self { half, radius }
    }

    pub fn area(&self) -> f64 {
        let side = 2.0 * self.half;
        side * side + 4.0 * side * self.radius + PI * self.radius * self.radius
    }

    pub fn perimeter(&self) -> f64 {
        8.0 * self.half + 2.0 * PI * self.radius
    }
}

impl Region for RoundedSquare {
    fn contains(&self, p: Point) -> bool {
        dist_to_centered_square(p, self.half) <= self.radius
    }

    fn bounding_box(&self) -> Rect {
        let e = self.half + self.radius;
        Rect::new(Point::new(-e, -e), Point::new(e, e))
    }
}

/// A shape paired with the fidelity weight λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    pub shape: ShapeSpec,
    pub lambda: f64,
}

impl Problem {
    pub fn new(shape: impl Into<ShapeSpec>, lambda: f64) -> Self {
        Self {
            shape: shape.into(),
            lambda,
        }
    }

    /// Radius of the balls whose union forms the opening, `1/λ`.
    pub fn ball_radius(&self) -> f64 {
        1.0 / self.lambda
    }
}

/// Outcome of one admissibility inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    /// The inequality, e.g. `"2/λ < r"`.
    pub constraint: &'static str,
    pub passed: bool,
    /// The inequality with numbers substituted.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdmissibilityReport {
    pub checks: Vec<ConstraintCheck>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `Ok` when every check passed, otherwise an error naming the
    /// violated inequalities.
    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let msg = self
            .violations()
            .map(|c| format!("{} violated ({})", c.constraint, c.detail))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::Inadmissible(msg))
    }

    fn push(&mut self, constraint: &'static str, passed: bool, detail: String) {
        self.checks.push(ConstraintCheck {
            constraint,
            passed,
            detail,
        });
    }
}

/// Checks the family-specific admissibility inequalities of a problem.
///
/// Never fails; inspect [`AdmissibilityReport::passed`]. A passing report is
/// the precondition of every closed-form energy in [`crate::analytic`].
pub fn validate(problem: &Problem) -> AdmissibilityReport {
    let mut report = AdmissibilityReport::default();
    let lambda = problem.lambda;
    report.push("λ > 0", lambda > 0.0, format!("λ = {lambda}"));
    if !(lambda > 0.0) {
        return report;
    }
    let rho = 1.0 / lambda;
    match &problem.shape {
        ShapeSpec::Annulus(a) => {
            let (big, r, d) = (a.outer_radius, a.inner_radius, a.gap);
            report.push(
                "0 < r < R",
                r > 0.0 && r < big,
                format!("r = {r}, R = {big}"),
            );
            report.push(
                "0 < δ ≤ R - r",
                d > 0.0 && d <= big - r,
                format!("δ = {d}, R - r = {}", big - r),
            );
            report.push(
                "2/λ < r",
                2.0 * rho < r,
                format!("2/λ = {}, r = {r}", 2.0 * rho),
            );
        }
        ShapeSpec::SquareAnnulus(q) => {
            let (r, d) = (q.corner_radius, q.gap);
            let lower = (d * r + d * d) / (2.0 * r + d);
            let upper = d * FRAC_1_SQRT_2;
            report.push(
                "(δr+δ²)/(2r+δ) < 1/λ",
                lower < rho,
                format!("(δr+δ²)/(2r+δ) = {lower}, 1/λ = {rho}"),
            );
            report.push(
                "1/λ < δ/√2",
                rho < upper,
                format!("1/λ = {rho}, δ/√2 = {upper}"),
            );
            report.push(
                "2/λ < r",
                2.0 * rho < r,
                format!("2/λ = {}, r = {r}", 2.0 * rho),
            );
        }
        ShapeSpec::Dumbbell(b) => {
            let (big, r, d) = (b.end_radius, b.fillet_radius, b.handle_width);
            report.push(
                "0 < r < R",
                r > 0.0 && r < big,
                format!("r = {r}, R = {big}"),
            );
            report.push(
                "2/λ < r",
                2.0 * rho < r,
                format!("2/λ = {}, r = {r}", 2.0 * rho),
            );
            report.push(
                "δ < 2/λ",
                d < 2.0 * rho,
                format!("δ = {d}, 2/λ = {}", 2.0 * rho),
            );
        }
        ShapeSpec::Disc(s) => {
            report.push(
                "radius > 0",
                s.radius > 0.0,
                format!("radius = {}", s.radius),
            );
        }
    }
    report
}
