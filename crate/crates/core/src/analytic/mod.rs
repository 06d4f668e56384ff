//! Closed-form candidate energies for the three shape families.
//!
//! For each family the candidate minimizers of `Per(Σ) + λ|Σ △ Ω|` form a
//! short fixed list: the empty set, Ω itself, the union of all `1/λ`-balls
//! inside Ω (the morphological opening), and, for the two annuli, the filled
//! outer and inner boundaries. Every candidate is reported with its
//! perimeter and symmetric-difference area separately so the numeric oracle
//! can check each term on its own.

mod angles;
mod energy;
mod sweep;
mod touch;

use std::fmt;

pub use angles::{
    acos_checked, annulus_angles, dumbbell_angles, square_angles, AngleError, AnnulusAngles,
    DumbbellAngles, SquareAngles, ACOS_SLACK,
};
pub use energy::{annulus_energies, disc_energies, dumbbell_energies, energies, square_energies};
pub use sweep::{phase_sweep, Axis, CellOutcome, Param, Params, PhaseCell};
pub use touch::{annulus_touch_delta, touch_residual, TouchPoint};

use crate::error::{Error, Result};
use crate::shapes::Family;

/// Relative tolerance under which two candidate energies count as tied.
pub const TIE_RELATIVE: f64 = 1e-12;

/// What a candidate set is, independent of its index within the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateKind {
    Empty,
    Omega,
    Opening,
    OuterDisc,
    InnerDisc,
    OuterRoundedSquare,
    InnerRoundedSquare,
}

impl CandidateKind {
    pub fn label(self) -> &'static str {
        match self {
            CandidateKind::Empty => "empty",
            CandidateKind::Omega => "omega",
            CandidateKind::Opening => "opening",
            CandidateKind::OuterDisc => "outer-disc",
            CandidateKind::InnerDisc => "inner-disc",
            CandidateKind::OuterRoundedSquare => "outer-rounded-square",
            CandidateKind::InnerRoundedSquare => "inner-rounded-square",
        }
    }
}

/// A candidate set, numbered as in its family's list (`S1`, `S2`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub index: u8,
    pub kind: CandidateKind,
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.index)
    }
}

impl Candidate {
    const fn new(index: u8, kind: CandidateKind) -> Self {
        Self { index, kind }
    }

    /// `S3:omega` style label.
    pub fn describe(&self) -> String {
        format!("S{}:{}", self.index, self.kind.label())
    }
}

use CandidateKind::*;

const ANNULUS: [Candidate; 5] = [
    Candidate::new(1, OuterDisc),
    Candidate::new(2, Empty),
    Candidate::new(3, Omega),
    Candidate::new(4, Opening),
    Candidate::new(5, InnerDisc),
];

const SQUARE: [Candidate; 5] = [
    Candidate::new(1, OuterRoundedSquare),
    Candidate::new(2, Empty),
    Candidate::new(3, Omega),
    Candidate::new(4, Opening),
    Candidate::new(5, InnerRoundedSquare),
];

const DUMBBELL: [Candidate; 3] = [
    Candidate::new(1, Empty),
    Candidate::new(2, Omega),
    Candidate::new(3, Opening),
];

const DISC: [Candidate; 2] = [Candidate::new(1, Empty), Candidate::new(2, Omega)];

/// The fixed candidate list of a family, in index order.
pub fn candidates(family: Family) -> &'static [Candidate] {
    match family {
        Family::Annulus => &ANNULUS,
        Family::SquareAnnulus => &SQUARE,
        Family::Dumbbell => &DUMBBELL,
        Family::Disc => &DISC,
    }
}

pub fn candidate_of_kind(family: Family, kind: CandidateKind) -> Option<Candidate> {
    candidates(family).iter().copied().find(|c| c.kind == kind)
}

/// Whether a candidate's closed form describes a genuine competitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Validity {
    Valid,
    /// The tangent `1/λ`-balls overlap or touch, so the opening boundary is
    /// not the assumed arc chain.
    BallsOverlapOrTouch,
    /// The `1/λ`-balls pass everywhere; the opening is Ω itself.
    OpeningEqualsOmega,
    /// An angle's arccos argument is out of range, or the construction is
    /// degenerate.
    AngleUndefined,
}

impl Validity {
    pub fn label(self) -> &'static str {
        match self {
            Validity::Valid => "valid",
            Validity::BallsOverlapOrTouch => "balls-overlap",
            Validity::OpeningEqualsOmega => "opening-equals-omega",
            Validity::AngleUndefined => "angle-undefined",
        }
    }
}

/// `Per(Σ)`, `|Σ △ Ω|`, and `Per(Σ) + λ|Σ △ Ω|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTerms {
    pub perimeter: f64,
    pub fidelity_area: f64,
    pub total: f64,
}

impl EnergyTerms {
    pub fn new(perimeter: f64, fidelity_area: f64, lambda: f64) -> Self {
        Self {
            perimeter,
            fidelity_area,
            total: perimeter + lambda * fidelity_area,
        }
    }
}

/// One candidate's energy. `terms` is absent when the closed form cannot be
/// evaluated (undefined angles).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateEnergy {
    pub candidate: Candidate,
    pub validity: Validity,
    pub terms: Option<EnergyTerms>,
}

impl CandidateEnergy {
    pub fn total(&self) -> Option<f64> {
        self.terms.map(|t| t.total)
    }

    pub fn is_valid(&self) -> bool {
        self.validity == Validity::Valid && self.terms.is_some()
    }
}

/// The minimal valid candidate(s). More than one entry means an exact tie.
#[derive(Debug, Clone, PartialEq)]
pub struct WinnerReport {
    pub winners: Vec<Candidate>,
    pub energy: f64,
    /// Relative gap to the best valid non-winner, if there is one.
    pub margin: Option<f64>,
}

impl WinnerReport {
    pub fn is_tie(&self) -> bool {
        self.winners.len() > 1
    }

    /// The unique winner, or `None` on a tie.
    pub fn unique(&self) -> Option<Candidate> {
        match self.winners.as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }

    /// `S3` or `S2|S3` for ties.
    pub fn label(&self) -> String {
        self.winners
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Picks the valid candidate(s) of minimal total energy. Energies within
/// [`TIE_RELATIVE`] of the minimum are all reported.
pub fn argmin_candidate(energies: &[CandidateEnergy]) -> Result<WinnerReport> {
    let valid: Vec<(Candidate, f64)> = energies
        .iter()
        .filter(|e| e.is_valid())
        .filter_map(|e| e.total().map(|t| (e.candidate, t)))
        .collect();
    let best = valid.iter().map(|&(_, t)| t).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NoValidCandidate);
    }
    let tol = TIE_RELATIVE * best.abs().max(f64::MIN_POSITIVE);
    let winners: Vec<Candidate> = valid
        .iter()
        .filter(|&&(_, t)| t - best <= tol)
        .map(|&(c, _)| c)
        .collect();
    let runner_up = valid
        .iter()
        .filter(|&&(_, t)| t - best > tol)
        .map(|&(_, t)| t)
        .fold(f64::INFINITY, f64::min);
    let margin = runner_up
        .is_finite()
        .then(|| (runner_up - best) / best.abs().max(f64::MIN_POSITIVE));
    Ok(WinnerReport {
        winners,
        energy: best,
        margin,
    })
}
