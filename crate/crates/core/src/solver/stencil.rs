use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Which pixel pairs carry a boundary-length term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Neighborhood {
    Eight,
    #[default]
    Sixteen,
}

impl Neighborhood {
    pub fn size(self) -> usize {
        match self {
            Neighborhood::Eight => 8,
            Neighborhood::Sixteen => 16,
        }
    }

    /// One offset per undirected direction, ordered by angle in `[0, π)`.
    fn half_offsets(self) -> &'static [(i32, i32)] {
        match self {
            Neighborhood::Eight => &[(1, 0), (1, 1), (0, 1), (-1, 1)],
            Neighborhood::Sixteen => &[
                (1, 0),
                (2, 1),
                (1, 1),
                (1, 2),
                (0, 1),
                (-1, 2),
                (-1, 1),
                (-2, 1),
            ],
        }
    }
}

impl fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.size())
    }
}

impl FromStr for Neighborhood {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "8" => Ok(Neighborhood::Eight),
            "16" => Ok(Neighborhood::Sixteen),
            other => Err(Error::InvalidShape(format!(
                "unknown stencil {other:?}, expected 8 or 16"
            ))),
        }
    }
}

/// Directed pixel offsets with Cauchy–Crofton length weights.
///
/// A straight boundary of length `ℓ` crossing the grid cuts, on average,
/// edges of total weight `ℓ` when edge `k` has weight
/// `h·Δφ_k / (2|o_k|)`, where `Δφ_k` is the angle between the neighbouring
/// directions' bisectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    offsets: Vec<(i32, i32)>,
    weights: Vec<f64>,
    reverse: Vec<usize>,
}

impl Stencil {
    pub fn new(neighborhood: Neighborhood, spacing: f64) -> Self {
        let half = neighborhood.half_offsets();
        let angles: Vec<f64> = half
            .iter()
            .map(|&(x, y)| (y as f64).atan2(x as f64))
            .collect();
        let n = half.len();
        let half_weights: Vec<f64> = (0..n)
            .map(|k| {
                let prev = if k == 0 {
                    angles[n - 1] - PI
                } else {
                    angles[k - 1]
                };
                let next = if k + 1 == n {
                    angles[0] + PI
                } else {
                    angles[k + 1]
                };
                let (x, y) = half[k];
                spacing * 0.5 * (next - prev) / (2.0 * (x as f64).hypot(y as f64))
            })
            .collect();
        // Direction k + n is the negation of direction k.
        let offsets: Vec<(i32, i32)> = half
            .iter()
            .copied()
            .chain(half.iter().map(|&(x, y)| (-x, -y)))
            .collect();
        let weights = half_weights
            .iter()
            .chain(half_weights.iter())
            .copied()
            .collect();
        let reverse = (0..2 * n).map(|k| (k + n) % (2 * n)).collect();
        Self {
            offsets,
            weights,
            reverse,
        }
    }

    /// The same edges with every offset negated.
    pub fn reversed(&self) -> Self {
        Self {
            offsets: self.offsets.iter().map(|&(x, y)| (-x, -y)).collect(),
            weights: self.weights.clone(),
            reverse: self.reverse.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }

    /// Edge weights in length units.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index of the negated offset.
    pub fn reverse(&self, k: usize) -> usize {
        self.reverse[k]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|k| {
            let r = self.reverse[k];
            let (x, y) = self.offsets[k];
            self.offsets[r] == (-x, -y) && self.weights[r] == self.weights[k]
        })
    }
}
