//! Two-parameter sweeps producing phase diagrams of the winning candidate.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{argmin_candidate, energies, CandidateEnergy, WinnerReport};
use crate::error::{Error, Result};
use crate::shapes::{
    validate, AnnulusSpec, DiscSpec, DumbbellSpec, Family, Problem, ShapeSpec, SquareAnnulusSpec,
};

/// A sweepable parameter. Families read only the ones they use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    /// `R`: annulus outer radius, dumbbell end radius, disc radius.
    OuterRadius,
    /// `r`: annulus inner radius, corner or fillet radius.
    InnerRadius,
    /// `δ`: gap or handle width.
    Delta,
    /// `L`: side or handle length.
    Length,
    Lambda,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::OuterRadius => "R",
            Param::InnerRadius => "r",
            Param::Delta => "delta",
            Param::Length => "L",
            Param::Lambda => "lambda",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(Param::OuterRadius),
            "r" => Ok(Param::InnerRadius),
            "delta" => Ok(Param::Delta),
            "L" => Ok(Param::Length),
            "lambda" => Ok(Param::Lambda),
            other => Err(Error::InvalidSweep(format!("unknown parameter '{other}'"))),
        }
    }
}

/// A partial assignment of parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Params([Option<f64>; 5]);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: Param, value: f64) -> Self {
        self.set(p, value);
        self
    }

    pub fn set(&mut self, p: Param, value: f64) {
        self.0[p.slot()] = Some(value);
    }

    pub fn get(&self, p: Param) -> Option<f64> {
        self.0[p.slot()]
    }

    fn need(&self, p: Param, family: Family) -> Result<f64> {
        self.get(p)
            .ok_or_else(|| Error::InvalidSweep(format!("family {family} needs parameter '{p}'")))
    }

    /// Parameters the family's shape uses (λ excluded).
    pub fn shape_params(family: Family) -> &'static [Param] {
        use Param::*;
        match family {
            Family::Annulus => &[OuterRadius, InnerRadius, Delta],
            Family::SquareAnnulus => &[InnerRadius, Length, Delta],
            Family::Dumbbell => &[OuterRadius, InnerRadius, Length, Delta],
            Family::Disc => &[OuterRadius],
        }
    }

    /// Builds the problem. Fails when a parameter is missing or the shape's
    /// own invariants are violated.
    pub fn problem(&self, family: Family) -> Result<Problem> {
        use Param::*;
        let lambda = self.need(Lambda, family)?;
        let shape: ShapeSpec = match family {
            Family::Annulus => AnnulusSpec::new(
                self.need(OuterRadius, family)?,
                self.need(InnerRadius, family)?,
                self.need(Delta, family)?,
            )?
            .into(),
            Family::SquareAnnulus => SquareAnnulusSpec::new(
                self.need(InnerRadius, family)?,
                self.need(Length, family)?,
                self.need(Delta, family)?,
            )?
            .into(),
            Family::Dumbbell => DumbbellSpec::new(
                self.need(OuterRadius, family)?,
                self.need(InnerRadius, family)?,
                self.need(Length, family)?,
                self.need(Delta, family)?,
            )?
            .into(),
            Family::Disc => DiscSpec::new(self.need(OuterRadius, family)?)?.into(),
        };
        Ok(Problem::new(shape, lambda))
    }
}

/// A swept parameter with `steps` values evenly spaced over `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: Param, min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !min.is_finite() || !max.is_finite() || (steps > 1 && !(min < max)) {
            return Err(Error::InvalidSweep(format!(
                "axis {param} needs min < max and steps ≥ 1 (got [{min}, {max}], {steps})"
            )));
        }
        Ok(Self {
            param,
            min,
            max,
            steps,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:min:max:steps`, e.g. `lambda:2.5:12:100`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, steps] = parts.as_slice() else {
            return Err(Error::InvalidSweep(format!(
                "axis '{s}' is not of the form name:min:max:steps"
            )));
        };
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidSweep(format!("'{v}' is not a number")))
        };
        let steps = steps
            .parse::<usize>()
            .map_err(|_| Error::InvalidSweep(format!("'{steps}' is not a step count")))?;
        Axis::new(name.parse()?, num(min)?, num(max)?, steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    /// Shape invariants or admissibility inequalities fail here.
    Inadmissible(String),
    Evaluated {
        energies: Vec<CandidateEnergy>,
        winner: WinnerReport,
    },
}

/// One grid point of a phase sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCell {
    pub axis1_value: f64,
    pub axis2_value: f64,
    pub problem: Option<Problem>,
    pub outcome: CellOutcome,
}

impl PhaseCell {
    pub fn winner(&self) -> Option<&WinnerReport> {
        match &self.outcome {
            CellOutcome::Evaluated { winner, .. } => Some(winner),
            CellOutcome::Inadmissible(_) => None,
        }
    }

    pub fn energies(&self) -> Option<&[CandidateEnergy]> {
        match &self.outcome {
            CellOutcome::Evaluated { energies, .. } => Some(energies),
            CellOutcome::Inadmissible(_) => None,
        }
    }
}

fn evaluate(family: Family, params: Params) -> (Option<Problem>, CellOutcome) {
    let problem = match params.problem(family) {
        Ok(p) => p,
        Err(e) => return (None, CellOutcome::Inadmissible(e.to_string())),
    };
    if let Err(e) = validate(&problem).into_result() {
        return (Some(problem), CellOutcome::Inadmissible(e.to_string()));
    }
    let outcome = energies(&problem).and_then(|energies| {
        let winner = argmin_candidate(&energies)?;
        Ok(CellOutcome::Evaluated { energies, winner })
    });
    match outcome {
        Ok(o) => (Some(problem), o),
        Err(e) => (Some(problem), CellOutcome::Inadmissible(e.to_string())),
    }
}

/// Evaluates every grid point of `axis1 × axis2` with the remaining
/// parameters taken from `fixed`. Rows come out with `axis2` as the outer
/// loop and `axis1` as the inner loop; inadmissible points are kept.
pub fn phase_sweep(
    family: Family,
    fixed: &Params,
    axis1: &Axis,
    axis2: &Axis,
) -> Result<Vec<PhaseCell>> {
    if axis1.param == axis2.param {
        return Err(Error::InvalidSweep("the two axes must differ".into()));
    }
    let points: Vec<(usize, usize)> = (0..axis2.steps)
        .flat_map(|j| (0..axis1.steps).map(move |i| (i, j)))
        .collect();
    Ok(points
        .into_par_iter()
        .map(|(i, j)| {
            let (v1, v2) = (axis1.value(i), axis2.value(j));
            let params = fixed.with(axis1.param, v1).with(axis2.param, v2);
            let (problem, outcome) = evaluate(family, params);
            PhaseCell {
                axis1_value: v1,
                axis2_value: v2,
                problem,
                outcome,
            }
        })
        .collect())
}
