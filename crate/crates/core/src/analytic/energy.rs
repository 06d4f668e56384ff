//! Per-family candidate energies.
//!
//! The opening candidate's boundary consists of the surviving arcs of ∂Ω
//! joined by arcs of the tangent `1/λ`-balls. Each ball arc of angular span
//! `α` adds `α/λ` to the perimeter, and the circular segment it cuts off
//! removes `α/(2λ²)` from the area of the removed region, which is why the
//! ball-arc coefficient in the perimeter is twice the one in the total.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use super::{
    annulus_angles, candidate_of_kind, dumbbell_angles, square_angles, CandidateEnergy,
    CandidateKind, EnergyTerms, Validity,
};
use crate::error::Result;
use crate::shapes::{
    validate, AnnulusSpec, DiscSpec, DumbbellSpec, Family, Problem, ShapeSpec, SquareAnnulusSpec,
};

fn entry(
    family: Family,
    kind: CandidateKind,
    validity: Validity,
    terms: Option<EnergyTerms>,
) -> CandidateEnergy {
    CandidateEnergy {
        candidate: candidate_of_kind(family, kind).expect("kind belongs to family"),
        validity,
        terms,
    }
}

fn always(
    family: Family,
    kind: CandidateKind,
    perimeter: f64,
    area: f64,
    lambda: f64,
) -> CandidateEnergy {
    entry(
        family,
        kind,
        Validity::Valid,
        Some(EnergyTerms::new(perimeter, area, lambda)),
    )
}

fn sort_by_index(mut list: Vec<CandidateEnergy>) -> Vec<CandidateEnergy> {
    list.sort_by_key(|e| e.candidate.index);
    list
}

/// Candidate energies for a validated problem, in candidate-index order.
pub fn energies(problem: &Problem) -> Result<Vec<CandidateEnergy>> {
    match &problem.shape {
        ShapeSpec::Annulus(s) => annulus_energies(s, problem.lambda),
        ShapeSpec::SquareAnnulus(s) => square_energies(s, problem.lambda),
        ShapeSpec::Dumbbell(s) => dumbbell_energies(s, problem.lambda),
        ShapeSpec::Disc(s) => disc_energies(s, problem.lambda),
    }
}

/// `S1` outer disc, `S2` empty, `S3` Ω, `S4` opening, `S5` inner disc.
pub fn annulus_energies(spec: &AnnulusSpec, lambda: f64) -> Result<Vec<CandidateEnergy>> {
    validate(&Problem::new(*spec, lambda)).into_result()?;
    let f = Family::Annulus;
    let (big, r, gap) = (spec.outer_radius(), spec.inner_radius(), spec.gap());
    let rho = 1.0 / lambda;
    let outer_area = PI * big * big;
    let inner_area = PI * r * r;
    let mut list = vec![
        always(
            f,
            CandidateKind::OuterDisc,
            2.0 * PI * big,
            inner_area,
            lambda,
        ),
        always(f, CandidateKind::Empty, 0.0, spec.area(), lambda),
        always(f, CandidateKind::Omega, spec.perimeter(), 0.0, lambda),
        always(
            f,
            CandidateKind::InnerDisc,
            2.0 * PI * r,
            outer_area,
            lambda,
        ),
    ];

    let opening = if rho <= 0.5 * gap {
        entry(
            f,
            CandidateKind::Opening,
            Validity::OpeningEqualsOmega,
            None,
        )
    } else {
        match annulus_angles(spec, lambda) {
            Err(_) => entry(f, CandidateKind::Opening, Validity::AngleUndefined, None),
            Ok(a) => {
                let d = spec.center_offset();
                let arc = PI - a.phi + a.theta;
                let perimeter =
                    2.0 * (PI - a.phi) * r + 2.0 * (PI - a.theta) * big + 2.0 * arc * rho;
                // Area cut out next to the narrow gap.
                let removed = big * big * a.theta
                    - r * r * a.phi
                    - d * (big - rho) * a.theta.sin()
                    - arc * rho * rho;
                let validity = if a.phi.sin() > 1.0 / (lambda * r + 1.0) {
                    Validity::Valid
                } else {
                    Validity::BallsOverlapOrTouch
                };
                entry(
                    f,
                    CandidateKind::Opening,
                    validity,
                    Some(EnergyTerms::new(perimeter, removed, lambda)),
                )
            }
        }
    };
    list.push(opening);
    Ok(sort_by_index(list))
}

/// `S1` outer rounded square, `S2` empty, `S3` Ω, `S4` opening, `S5` inner
/// rounded square.
pub fn square_energies(spec: &SquareAnnulusSpec, lambda: f64) -> Result<Vec<CandidateEnergy>> {
    validate(&Problem::new(*spec, lambda)).into_result()?;
    let f = Family::SquareAnnulus;
    let (r, gap) = (spec.corner_radius(), spec.gap());
    let rho = 1.0 / lambda;
    let outer = spec.outer_region();
    let inner = spec.inner_region();
    let mut list = vec![
        always(
            f,
            CandidateKind::OuterRoundedSquare,
            outer.perimeter(),
            inner.area(),
            lambda,
        ),
        always(f, CandidateKind::Empty, 0.0, spec.area(), lambda),
        always(f, CandidateKind::Omega, spec.perimeter(), 0.0, lambda),
        always(
            f,
            CandidateKind::InnerRoundedSquare,
            inner.perimeter(),
            outer.area(),
            lambda,
        ),
    ];

    let opening = if rho <= 0.5 * gap {
        entry(
            f,
            CandidateKind::Opening,
            Validity::OpeningEqualsOmega,
            None,
        )
    } else {
        match square_angles(spec, lambda) {
            Err(_) => entry(f, CandidateKind::Opening, Validity::AngleUndefined, None),
            Ok(a) => {
                let arc = PI - a.phi + a.theta;
                let perimeter = 8.0 * r * (a.phi + a.theta) + 8.0 * arc * rho;
                // Four corner pieces survive.
                let kept = 4.0
                    * (r * r * (a.phi - a.theta)
                        + SQRT_2 * gap * (r + rho) * a.theta.sin()
                        + arc * rho * rho);
                // Balls on either side of one diagonal, and balls of two
                // neighbouring corners facing each other across a flat.
                let same_corner = (r + rho) * a.theta.sin() > rho;
                let across_flat = spec.inner_half() + (r + rho) * (FRAC_PI_4 + a.theta).cos() > rho;
                let validity = if same_corner && across_flat {
                    Validity::Valid
                } else {
                    Validity::BallsOverlapOrTouch
                };
                entry(
                    f,
                    CandidateKind::Opening,
                    validity,
                    Some(EnergyTerms::new(perimeter, spec.area() - kept, lambda)),
                )
            }
        }
    };
    list.push(opening);
    Ok(sort_by_index(list))
}

/// `S1` empty, `S2` Ω, `S3` opening.
pub fn dumbbell_energies(spec: &DumbbellSpec, lambda: f64) -> Result<Vec<CandidateEnergy>> {
    validate(&Problem::new(*spec, lambda)).into_result()?;
    let f = Family::Dumbbell;
    let (big, r) = (spec.end_radius(), spec.fillet_radius());
    let rho = 1.0 / lambda;
    let mut list = vec![
        always(f, CandidateKind::Empty, 0.0, spec.area(), lambda),
        always(f, CandidateKind::Omega, spec.perimeter(), 0.0, lambda),
    ];

    let opening = if 2.0 * rho <= spec.handle_width() {
        entry(
            f,
            CandidateKind::Opening,
            Validity::OpeningEqualsOmega,
            None,
        )
    } else {
        match dumbbell_angles(spec, lambda) {
            Ok(a) if a.psi > 0.0 => {
                let arc = PI - a.omega;
                let perimeter = 4.0 * (PI - a.phi) * big + 4.0 * a.psi * r + 4.0 * arc * rho;
                let kept = 2.0
                    * (PI * big * big - a.phi * big * big - a.psi * r * r
                        + (r + rho) * (big + r) * a.psi.sin()
                        + arc * rho * rho);
                // The pinching balls at the two ends must stay apart.
                let apart = spec.handle_length() + 2.0 * (r + rho) * a.theta.sin() > 2.0 * rho;
                let validity = if apart {
                    Validity::Valid
                } else {
                    Validity::BallsOverlapOrTouch
                };
                entry(
                    f,
                    CandidateKind::Opening,
                    validity,
                    Some(EnergyTerms::new(perimeter, spec.area() - kept, lambda)),
                )
            }
            _ => entry(f, CandidateKind::Opening, Validity::AngleUndefined, None),
        }
    };
    list.push(opening);
    Ok(sort_by_index(list))
}

/// `S1` empty, `S2` the disc. The opening of a disc by a smaller ball is
/// the disc, so there is no third candidate.
pub fn disc_energies(spec: &DiscSpec, lambda: f64) -> Result<Vec<CandidateEnergy>> {
    validate(&Problem::new(*spec, lambda)).into_result()?;
    let f = Family::Disc;
    Ok(vec![
        always(f, CandidateKind::Empty, 0.0, spec.area(), lambda),
        always(f, CandidateKind::Omega, spec.perimeter(), 0.0, lambda),
    ])
}
