//! Sets bounded by circular arcs and segments, measured exactly.
//!
//! Area comes from Green's theorem, `A = ½∮(x dy - y dx)`, which has a
//! closed form on each arc and segment, so no polyline refinement is
//! needed.

use std::f64::consts::{FRAC_PI_2, TAU};

use super::tangency::TangencyResult;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::shapes::{AnnulusSpec, DumbbellSpec, ShapeSpec, SquareAnnulusSpec};

/// One piece of a closed boundary loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    /// Arc of the circle `center`, `radius` from polar angle `start`
    /// through the signed angle `sweep` (positive is counter-clockwise).
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        sweep: f64,
    },
    Segment {
        from: Point,
        to: Point,
    },
}

impl Piece {
    pub fn full_circle(center: Point, radius: f64, ccw: bool) -> Self {
        Piece::Arc {
            center,
            radius,
            start: 0.0,
            sweep: if ccw { TAU } else { -TAU },
        }
    }

    /// Arc from `from` to `to` (both on the circle), going counter-clockwise
    /// or clockwise.
    pub fn arc_between(center: Point, radius: f64, from: Point, to: Point, ccw: bool) -> Self {
        let start = (from - center).angle();
        let end = (to - center).angle();
        let ccw_sweep = (end - start).rem_euclid(TAU);
        let sweep = if ccw {
            ccw_sweep
        } else if ccw_sweep == 0.0 {
            0.0
        } else {
            ccw_sweep - TAU
        };
        Piece::Arc {
            center,
            radius,
            start,
            sweep,
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
            Piece::Segment { from, to } => from.dist(to),
        }
    }

    /// `∫(x dy - y dx)` along the piece.
    pub fn green(&self) -> f64 {
        match *self {
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let end = start + sweep;
                radius * radius * sweep
                    + radius
                        * (center.x * (end.sin() - start.sin())
                            - center.y * (end.cos() - start.cos()))
            }
            Piece::Segment { from, to } => from.cross(to),
        }
    }

    pub fn start_point(&self) -> Point {
        match *self {
            Piece::Arc {
                center,
                radius,
                start,
                ..
            } => center + Point::polar(start) * radius,
            Piece::Segment { from, .. } => from,
        }
    }

    pub fn end_point(&self) -> Point {
        match *self {
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + Point::polar(start + sweep) * radius,
            Piece::Segment { to, .. } => to,
        }
    }
}

/// A region bounded by closed loops: counter-clockwise outer boundaries and
/// clockwise holes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSet {
    pub loops: Vec<Vec<Piece>>,
}

impl ArcSet {
    pub fn perimeter(&self) -> f64 {
        self.loops.iter().flatten().map(Piece::length).sum()
    }

    pub fn area(&self) -> f64 {
        0.5 * self.loops.iter().flatten().map(Piece::green).sum::<f64>()
    }

    /// Largest jump between consecutive pieces of any loop.
    pub fn closure_gap(&self) -> f64 {
        self.loops
            .iter()
            .flat_map(|l| {
                l.iter()
                    .zip(l.iter().cycle().skip(1))
                    .map(|(a, b)| a.end_point().dist(b.start_point()))
            })
            .fold(0.0, f64::max)
    }
}

/// `∂Ω` for each family.
pub fn omega_boundary(shape: &ShapeSpec) -> ArcSet {
    match shape {
        ShapeSpec::Annulus(s) => ArcSet {
            loops: vec![
                vec![Piece::full_circle(s.outer_center(), s.outer_radius(), true)],
                vec![Piece::full_circle(
                    s.inner_center(),
                    s.inner_radius(),
                    false,
                )],
            ],
        },
        ShapeSpec::SquareAnnulus(s) => ArcSet {
            loops: vec![
                rounded_square(s.outer_half(), s.corner_radius(), true),
                rounded_square(s.inner_half(), s.corner_radius(), false),
            ],
        },
        ShapeSpec::Dumbbell(s) => ArcSet {
            loops: vec![dumbbell_loop(s)],
        },
        ShapeSpec::Disc(s) => ArcSet {
            loops: vec![vec![Piece::full_circle(Point::ORIGIN, s.radius(), true)]],
        },
    }
}

/// Rotation by a quarter turn `k` times.
fn quarter_turn(p: Point, k: usize) -> Point {
    match k % 4 {
        0 => p,
        1 => Point::new(-p.y, p.x),
        2 => Point::new(-p.x, -p.y),
        _ => Point::new(p.y, -p.x),
    }
}

/// Boundary of the points within `radius` of `[-half, half]²`.
fn rounded_square(half: f64, radius: f64, ccw: bool) -> Vec<Piece> {
    let mut pieces = Vec::with_capacity(8);
    for k in 0..4 {
        let corner = quarter_turn(Point::new(half, half), k);
        let start = FRAC_PI_2 * k as f64;
        pieces.push(Piece::Arc {
            center: corner,
            radius,
            start,
            sweep: FRAC_PI_2,
        });
        let from = corner + Point::polar(start + FRAC_PI_2) * radius;
        let next = quarter_turn(Point::new(half, half), k + 1);
        let to = next + Point::polar(start + FRAC_PI_2) * radius;
        pieces.push(Piece::Segment { from, to });
    }
    if ccw {
        pieces
    } else {
        reverse(pieces)
    }
}

fn reverse(pieces: Vec<Piece>) -> Vec<Piece> {
    pieces
        .into_iter()
        .rev()
        .map(|p| match p {
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => Piece::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
            Piece::Segment { from, to } => Piece::Segment { from: to, to: from },
        })
        .collect()
}

fn dumbbell_loop(spec: &DumbbellSpec) -> Vec<Piece> {
    let (big, r) = (spec.end_radius(), spec.fillet_radius());
    let (xf, hf, half) = (
        spec.fillet_offset(),
        spec.fillet_height(),
        0.5 * spec.handle_width(),
    );
    let left = spec.left_center();
    let right = spec.right_center();
    let fillets = [
        Point::new(xf, -hf),
        Point::new(right.x - xf, -hf),
        Point::new(right.x - xf, hf),
        Point::new(xf, hf),
    ];
    let disc_contact = |disc: Point, fillet: Point| disc + (fillet - disc).normalized() * big;
    let edge_contact = |fillet: Point| Point::new(fillet.x, fillet.y.signum() * half);
    let [f_ll, f_lr, f_ur, f_ul] = fillets;
    vec![
        Piece::arc_between(
            left,
            big,
            disc_contact(left, f_ul),
            disc_contact(left, f_ll),
            true,
        ),
        Piece::arc_between(f_ll, r, disc_contact(left, f_ll), edge_contact(f_ll), false),
        Piece::Segment {
            from: edge_contact(f_ll),
            to: edge_contact(f_lr),
        },
        Piece::arc_between(
            f_lr,
            r,
            edge_contact(f_lr),
            disc_contact(right, f_lr),
            false,
        ),
        Piece::arc_between(
            right,
            big,
            disc_contact(right, f_lr),
            disc_contact(right, f_ur),
            true,
        ),
        Piece::arc_between(
            f_ur,
            r,
            disc_contact(right, f_ur),
            edge_contact(f_ur),
            false,
        ),
        Piece::Segment {
            from: edge_contact(f_ur),
            to: edge_contact(f_ul),
        },
        Piece::arc_between(f_ul, r, edge_contact(f_ul), disc_contact(left, f_ul), false),
    ]
}

fn single_ball(balls: &[TangencyResult]) -> Result<&TangencyResult> {
    balls
        .first()
        .ok_or_else(|| Error::Infeasible("no tangent ball to assemble the opening from".into()))
}

/// Boundary of the opening assembled from the tangent balls found by
/// [`numeric_tangency`](super::numeric_tangency): surviving arcs of `∂Ω`
/// joined by ball arcs, with the other balls placed by symmetry.
pub fn opening_boundary(shape: &ShapeSpec, balls: &[TangencyResult]) -> Result<ArcSet> {
    match shape {
        ShapeSpec::Annulus(s) => Ok(annulus_opening(s, single_ball(balls)?)),
        ShapeSpec::SquareAnnulus(s) => Ok(square_opening(s, single_ball(balls)?)),
        ShapeSpec::Dumbbell(s) => Ok(dumbbell_opening(s, single_ball(balls)?)),
        ShapeSpec::Disc(_) => Ok(omega_boundary(shape)),
    }
}

fn mirror_y(p: Point) -> Point {
    Point::new(p.x, -p.y)
}

fn annulus_opening(spec: &AnnulusSpec, ball: &TangencyResult) -> ArcSet {
    let (outer, inner) = (spec.outer_center(), spec.inner_center());
    let (big, r, rho) = (spec.outer_radius(), spec.inner_radius(), ball.radius);
    let up = ball.center;
    let down = mirror_y(up);
    let out_up = ball.contacts[0].point;
    let in_up = ball.contacts[1].point;
    let (out_down, in_down) = (mirror_y(out_up), mirror_y(in_up));
    ArcSet {
        loops: vec![vec![
            Piece::arc_between(outer, big, out_up, out_down, true),
            Piece::arc_between(down, rho, out_down, in_down, true),
            Piece::arc_between(inner, r, in_down, in_up, false),
            Piece::arc_between(up, rho, in_up, out_up, true),
        ]],
    }
}

fn square_opening(spec: &SquareAnnulusSpec, ball: &TangencyResult) -> ArcSet {
    let r = spec.corner_radius();
    let rho = ball.radius;
    let outer = Point::new(spec.outer_half(), spec.outer_half());
    let inner = Point::new(spec.inner_half(), spec.inner_half());
    let swap = |p: Point| Point::new(p.y, p.x);
    // First-quadrant piece; the ball above the diagonal and its mirror.
    let above = ball.center;
    let below = swap(above);
    let out_above = ball.contacts[0].point;
    let in_above = ball.contacts[1].point;
    let (out_below, in_below) = (swap(out_above), swap(in_above));
    let corner = |k: usize| {
        let t = |p: Point| quarter_turn(p, k);
        vec![
            Piece::arc_between(t(outer), r, t(out_below), t(out_above), true),
            Piece::arc_between(t(above), rho, t(out_above), t(in_above), true),
            Piece::arc_between(t(inner), r, t(in_above), t(in_below), false),
            Piece::arc_between(t(below), rho, t(in_below), t(out_below), true),
        ]
    };
    ArcSet {
        loops: (0..4).map(corner).collect(),
    }
}

fn dumbbell_opening(spec: &DumbbellSpec, ball: &TangencyResult) -> ArcSet {
    let (big, r, rho) = (spec.end_radius(), spec.fillet_radius(), ball.radius);
    let left = spec.left_center();
    let right = spec.right_center();
    let (xf, hf) = (spec.fillet_offset(), spec.fillet_height());
    let disc_contact = |disc: Point, fillet: Point| disc + (fillet - disc).normalized() * big;
    let mirror_x = |p: Point| Point::new(right.x - p.x, p.y);

    let f_ul = Point::new(xf, hf);
    let f_ll = mirror_y(f_ul);
    let c_l = ball.center;
    let p_ul = ball.contacts[0].point;
    let p_ll = ball.contacts[1].point;
    let left_piece = vec![
        Piece::arc_between(
            left,
            big,
            disc_contact(left, f_ul),
            disc_contact(left, f_ll),
            true,
        ),
        Piece::arc_between(f_ll, r, disc_contact(left, f_ll), p_ll, false),
        Piece::arc_between(c_l, rho, p_ll, p_ul, true),
        Piece::arc_between(f_ul, r, p_ul, disc_contact(left, f_ul), false),
    ];

    let (f_ur, f_lr, c_r) = (mirror_x(f_ul), mirror_x(f_ll), mirror_x(c_l));
    let (p_ur, p_lr) = (mirror_x(p_ul), mirror_x(p_ll));
    let right_piece = vec![
        Piece::arc_between(
            right,
            big,
            disc_contact(right, f_lr),
            disc_contact(right, f_ur),
            true,
        ),
        Piece::arc_between(f_ur, r, disc_contact(right, f_ur), p_ur, false),
        Piece::arc_between(c_r, rho, p_ur, p_lr, true),
        Piece::arc_between(f_lr, r, p_lr, disc_contact(right, f_lr), false),
    ];
    ArcSet {
        loops: vec![left_piece, right_piece],
    }
}

/// Distance between the two mirrored balls that could first collide:
/// across the annulus axis, across the square's diagonal and between
/// neighbouring corners, across the dumbbell handle. Returns the smallest
/// center distance minus `2/λ`; positive means the balls are disjoint.
pub fn ball_clearance(shape: &ShapeSpec, balls: &[TangencyResult]) -> Result<f64> {
    let ball = single_ball(balls)?;
    let (c, rho) = (ball.center, ball.radius);
    Ok(match shape {
        ShapeSpec::Annulus(_) => 2.0 * c.y.abs() - 2.0 * rho,
        ShapeSpec::SquareAnnulus(_) => {
            let across_diagonal = c.dist(Point::new(c.y, c.x));
            // The above-diagonal ball of the first quadrant and the
            // below-diagonal ball of the second.
            let neighbour = quarter_turn(Point::new(c.y, c.x), 1);
            across_diagonal.min(c.dist(neighbour)) - 2.0 * rho
        }
        ShapeSpec::Dumbbell(s) => (s.center_separation() - 2.0 * c.x) - 2.0 * rho,
        ShapeSpec::Disc(_) => f64::INFINITY,
    })
}
