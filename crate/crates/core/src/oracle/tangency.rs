//! Tangent-ball placement by root finding, independent of the closed-form
//! angle algebra.
//!
//! Every family's tangent ball satisfies two circle-distance constraints
//! `|c - A| = a` and `|c - B| = b`. Candidates come from a 720-point scan of
//! `c` around the first circle with bisection on sign changes; each is then
//! polished by a damped Newton iteration on both residuals.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::analytic::{AnnulusAngles, DumbbellAngles, SquareAngles};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::shapes::{AnnulusSpec, DumbbellSpec, ShapeSpec, SquareAnnulusSpec};

const SCAN_POINTS: usize = 720;
const NEWTON_STEPS: usize = 50;

/// Residual tolerance relative to the shape's characteristic length.
pub const RESIDUAL_RELATIVE: f64 = 1e-11;

/// Which part of ∂Ω a contact point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPart {
    /// Annulus outer circle.
    OuterCircle,
    /// Annulus inner circle.
    InnerCircle,
    /// Square annulus outer boundary: corner arc or straight edge.
    OuterCorner {
        on_arc: bool,
    },
    /// Square annulus inner boundary: corner arc or straight edge.
    InnerCorner {
        on_arc: bool,
    },
    UpperFillet,
    LowerFillet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub part: BoundaryPart,
    pub point: Point,
}

/// Angles read back off the solved geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecoveredAngles {
    Annulus(AnnulusAngles),
    Square(SquareAngles),
    Dumbbell(DumbbellAngles),
}

/// One tangent `1/λ`-ball.
#[derive(Debug, Clone, PartialEq)]
pub struct TangencyResult {
    pub center: Point,
    pub radius: f64,
    pub contacts: Vec<Contact>,
    pub angles: RecoveredAngles,
    /// Largest violation of the two distance constraints.
    pub residual: f64,
}

/// A circle the ball center must stay at a fixed distance from.
#[derive(Debug, Clone, Copy)]
struct Constraint {
    center: Point,
    distance: f64,
}

impl Constraint {
    fn residual(&self, c: Point) -> f64 {
        c.dist(self.center) - self.distance
    }
}

/// All points at distance `a.distance` from `a.center` and `b.distance` from
/// `b.center`, with their residuals.
fn solve_pair(a: Constraint, b: Constraint, scale: f64) -> Vec<(Point, f64)> {
    if !(a.distance > 0.0 && b.distance > 0.0) {
        return Vec::new();
    }
    let on_a = |t: f64| a.center + Point::polar(t) * a.distance;
    let f = |t: f64| b.residual(on_a(t));
    let step = TAU / SCAN_POINTS as f64;
    let ts: Vec<f64> = (0..=SCAN_POINTS).map(|i| i as f64 * step).collect();
    let fs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();

    let mut params = Vec::new();
    for i in 0..SCAN_POINTS {
        if fs[i] == 0.0 {
            params.push(ts[i]);
        } else if fs[i].signum() != fs[i + 1].signum() && fs[i + 1] != 0.0 {
            params.push(bisect(&f, ts[i], fs[i], ts[i + 1]));
        }
    }
    if params.is_empty() {
        // Tangential contact: |f| has a double root that no sign change
        // brackets.
        let i = (0..SCAN_POINTS)
            .min_by(|&i, &j| fs[i].abs().total_cmp(&fs[j].abs()))
            .expect("scan is nonempty");
        let t = golden_min(|t| f(t).abs(), ts[i] - step, ts[i] + step);
        if f(t).abs() <= RESIDUAL_RELATIVE * scale {
            params.push(t);
        }
    }

    params
        .into_iter()
        .map(|t| {
            let c = newton_polish(a, b, on_a(t));
            (c, a.residual(c).abs().max(b.residual(c).abs()))
        })
        .filter(|&(_, res)| res <= RESIDUAL_RELATIVE * scale)
        .collect()
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut f_lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return if f(lo).abs() <= f(hi).abs() { lo } else { hi };
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
}

fn golden_min(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Damped Newton on `(|c - A| - a, |c - B| - b)`. Steps that do not reduce
/// the residual are halved; a singular Jacobian ends the iteration.
fn newton_polish(a: Constraint, b: Constraint, start: Point) -> Point {
    let norm = |c: Point| a.residual(c).abs().max(b.residual(c).abs());
    let mut c = start;
    let mut current = norm(c);
    for _ in 0..NEWTON_STEPS {
        if current == 0.0 {
            break;
        }
        let ua = (c - a.center).normalized();
        let ub = (c - b.center).normalized();
        let det = ua.cross(ub);
        if det.abs() < 1e-12 {
            break;
        }
        let (ra, rb) = (a.residual(c), b.residual(c));
        // Solve [ua; ub] · step = -(ra, rb).
        let step = Point::new(-ra * ub.y + rb * ua.y, ra * ub.x - rb * ua.x) * (1.0 / det);
        let mut damping = 1.0;
        let mut improved = false;
        while damping > 1e-6 {
            let trial = c + step * damping;
            let value = norm(trial);
            if value < current {
                c = trial;
                current = value;
                improved = true;
                break;
            }
            damping *= 0.5;
        }
        if !improved {
            break;
        }
    }
    c
}

fn infeasible(what: &str, lambda: f64) -> Error {
    Error::Infeasible(format!(
        "no {what} tangent ball of radius 1/λ exists at λ = {lambda}"
    ))
}

/// Symmetry-distinct tangent balls of radius `1/λ`: the annulus ball above
/// the axis, the square annulus ball on the counter-clockwise side of the
/// first-quadrant diagonal, and the dumbbell ball pinching the left end of
/// the handle. The disc has none.
pub fn numeric_tangency(shape: &ShapeSpec, lambda: f64) -> Result<Vec<TangencyResult>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Inadmissible(format!(
            "λ must be positive, got {lambda}"
        )));
    }
    Ok(match shape {
        ShapeSpec::Annulus(s) => vec![annulus_tangency(s, lambda)?],
        ShapeSpec::SquareAnnulus(s) => vec![square_tangency(s, lambda)?],
        ShapeSpec::Dumbbell(s) => vec![dumbbell_tangency(s, lambda)?],
        ShapeSpec::Disc(_) => Vec::new(),
    })
}

pub fn annulus_tangency(spec: &AnnulusSpec, lambda: f64) -> Result<TangencyResult> {
    let rho = 1.0 / lambda;
    let (outer, inner) = (spec.outer_center(), spec.inner_center());
    if spec.is_concentric() {
        return Err(Error::Infeasible(
            "concentric annulus: every tangent position is equivalent".into(),
        ));
    }
    let a = Constraint {
        center: outer,
        distance: spec.outer_radius() - rho,
    };
    let b = Constraint {
        center: inner,
        distance: spec.inner_radius() + rho,
    };
    let (center, residual) = solve_pair(a, b, spec.outer_radius())
        .into_iter()
        .filter(|(c, _)| c.y >= 0.0)
        .max_by(|p, q| p.0.y.total_cmp(&q.0.y))
        .ok_or_else(|| infeasible("annulus", lambda))?;

    let to_outer = (center - outer).normalized();
    let to_inner = (center - inner).normalized();
    Ok(TangencyResult {
        center,
        radius: rho,
        contacts: vec![
            Contact {
                part: BoundaryPart::OuterCircle,
                point: outer + to_outer * spec.outer_radius(),
            },
            Contact {
                part: BoundaryPart::InnerCircle,
                point: inner + to_inner * spec.inner_radius(),
            },
        ],
        angles: RecoveredAngles::Annulus(AnnulusAngles {
            phi: to_inner.angle().abs(),
            theta: to_outer.angle().abs(),
        }),
        residual,
    })
}

/// Corner-quadrant test for a boundary point relative to its corner arc
/// center: the point is on the arc when both coordinates are beyond the
/// center's.
fn on_corner_arc(point: Point, arc_center: Point) -> bool {
    let slack = 1e-12 * arc_center.norm().max(1.0);
    point.x >= arc_center.x - slack && point.y >= arc_center.y - slack
}

pub fn square_tangency(spec: &SquareAnnulusSpec, lambda: f64) -> Result<TangencyResult> {
    let rho = 1.0 / lambda;
    let r = spec.corner_radius();
    let outer = Point::new(spec.outer_half(), spec.outer_half());
    let inner = Point::new(spec.inner_half(), spec.inner_half());
    let a = Constraint {
        center: outer,
        distance: r - rho,
    };
    let b = Constraint {
        center: inner,
        distance: r + rho,
    };
    let scale = spec.outer_half() + r;
    let (center, residual) = solve_pair(a, b, scale)
        .into_iter()
        .filter(|(c, _)| c.y >= c.x)
        .max_by(|p, q| (p.0.y - p.0.x).total_cmp(&(q.0.y - q.0.x)))
        .ok_or_else(|| infeasible("square annulus corner", lambda))?;

    let to_outer = (center - outer).normalized();
    let to_inner = (center - inner).normalized();
    let outer_contact = outer + to_outer * r;
    let inner_contact = inner + to_inner * r;
    Ok(TangencyResult {
        center,
        radius: rho,
        contacts: vec![
            Contact {
                part: BoundaryPart::OuterCorner {
                    on_arc: on_corner_arc(outer_contact, outer),
                },
                point: outer_contact,
            },
            Contact {
                part: BoundaryPart::InnerCorner {
                    on_arc: on_corner_arc(inner_contact, inner),
                },
                point: inner_contact,
            },
        ],
        angles: RecoveredAngles::Square(SquareAngles {
            phi: (to_outer.angle() - FRAC_PI_4).abs(),
            theta: (to_inner.angle() - FRAC_PI_4).abs(),
        }),
        residual,
    })
}

pub fn dumbbell_tangency(spec: &DumbbellSpec, lambda: f64) -> Result<TangencyResult> {
    let rho = 1.0 / lambda;
    let r = spec.fillet_radius();
    let disc = spec.left_center();
    let upper = Point::new(spec.fillet_offset(), spec.fillet_height());
    let lower = Point::new(upper.x, -upper.y);
    let a = Constraint {
        center: upper,
        distance: r + rho,
    };
    let b = Constraint {
        center: lower,
        distance: r + rho,
    };
    // The second intersection sits inside the handle, which is narrower
    // than the ball.
    let (center, residual) = solve_pair(a, b, spec.end_radius() + r)
        .into_iter()
        .filter(|(c, _)| c.x <= upper.x)
        .min_by(|p, q| p.0.x.total_cmp(&q.0.x))
        .ok_or_else(|| infeasible("dumbbell", lambda))?;

    let up = center - upper;
    let phi = (upper - disc).angle();
    // Measured from the downward vertical at the upper fillet center.
    let theta = up.x.abs().atan2(-up.y);
    let omega = FRAC_PI_2 + theta;
    let psi = (disc - upper).angle_to(up);
    let contact_upper = upper + up.normalized() * r;
    let contact_lower = lower + (center - lower).normalized() * r;
    debug_assert!((0.0..=PI).contains(&phi));
    Ok(TangencyResult {
        center,
        radius: rho,
        contacts: vec![
            Contact {
                part: BoundaryPart::UpperFillet,
                point: contact_upper,
            },
            Contact {
                part: BoundaryPart::LowerFillet,
                point: contact_lower,
            },
        ],
        angles: RecoveredAngles::Dumbbell(DumbbellAngles {
            phi,
            theta,
            omega,
            psi,
        }),
        residual,
    })
}
