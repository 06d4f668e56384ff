//! Exact discrete minimization of `Per(Σ) + λ|Σ △ Ω|` over all pixel masks.
//!
//! Pixels in Σ sit on the source side of an s-t cut. A pixel of Ω left out
//! of Σ cuts its source arc, a pixel outside Ω put into Σ cuts its sink
//! arc, both of capacity `λh²`. Neighbouring pixels on opposite sides cut
//! the stencil edge between them. Everything outside the grid is treated as
//! outside Σ, so edges leaving the grid are added to the sink arcs.
//!
//! All capacities are integers in units of a quantum `q`, so the cut value
//! of any mask can be recomputed exactly and compared against the flow.

mod preflow;
mod stencil;

pub use preflow::WorkCounters;
pub use stencil::{Neighborhood, Stencil};

use rayon::prelude::*;

use crate::analytic::{candidates, Candidate};
use crate::error::{Error, Result};
use crate::mask::{raster_grid, raster_size, rasterize_on, Grid, PixelMask};
use crate::oracle::{candidate_mask, default_padding, rasterize_shape};
use crate::shapes::{Problem, ShapeSpec};

/// Capacities are rounded to multiples of this fraction of the largest one.
pub const QUANTUM_FRACTION: f64 = 1e-7;

/// Default memory budget for one solve: 4 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Largest symmetric difference, as a fraction of `|Ω|` in pixels, for a
/// solver mask to count as one of the family's candidates.
pub const CLASSIFY_FRACTION: f64 = 0.03;

/// Integer capacities shared by the graph and the audit.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    pub stencil: Stencil,
    pub quantum: f64,
    /// `λh²` in units of `quantum`.
    pub unary_units: u64,
    /// Stencil edge weights in units of `quantum`.
    pub edge_units: Vec<u32>,
}

impl Weights {
    pub fn new(lambda: f64, spacing: f64, neighborhood: Neighborhood) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Inadmissible(format!(
                "λ must be positive and finite, got {lambda}"
            )));
        }
        let stencil = Stencil::new(neighborhood, spacing);
        let unary = lambda * spacing * spacing;
        let largest = stencil.weights().iter().copied().fold(unary, f64::max);
        let quantum = QUANTUM_FRACTION * largest;
        let units = |c: f64| (c / quantum).round();
        let edge_units = stencil.weights().iter().map(|&w| units(w) as u32).collect();
        Ok(Self {
            unary_units: units(unary) as u64,
            edge_units,
            quantum,
            stencil,
        })
    }
}

/// Options for [`build_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphOptions {
    pub neighborhood: Neighborhood,
    /// Bytes the graph and the max-flow state may use.
    pub memory_budget: u64,
}

impl Default for GraphOptions {
    fn default() -> Self {
        Self {
            neighborhood: Neighborhood::default(),
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Bytes needed to build and cut the graph of a `width × height` grid.
pub fn estimate_memory(width: usize, height: usize, neighborhood: Neighborhood) -> u64 {
    // Terminal capacities (2 × u64), residuals (m × u32), sink residual and
    // excess (2 × u64), label, current arc, label-list links (2 × u32),
    // worst-case active buckets and search queue (2 × u32), output mask.
    let per_node = 16 + 4 * neighborhood.size() as u64 + 16 + 4 + 1 + 8 + 8 + 1;
    (width as u64)
        .saturating_mul(height as u64)
        .saturating_mul(per_node)
}

/// An s-t graph on a pixel grid, stored implicitly: edge capacities depend
/// only on the stencil direction.
#[derive(Debug, Clone, PartialEq)]
pub struct CutGraph {
    grid: Grid,
    lambda: f64,
    weights: Weights,
    source: Vec<u64>,
    sink: Vec<u64>,
}

impl CutGraph {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn stencil(&self) -> &Stencil {
        &self.weights.stencil
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn quantum(&self) -> f64 {
        self.weights.quantum
    }

    pub fn edge_units(&self) -> &[u32] {
        &self.weights.edge_units
    }

    /// Per-pixel source capacities, in quanta.
    pub fn source_units(&self) -> &[u64] {
        &self.source
    }

    /// Per-pixel sink capacities, in quanta, including edges leaving the grid.
    pub fn sink_units(&self) -> &[u64] {
        &self.sink
    }

    /// Stencil edges as `(offset, capacity)` sorted by offset.
    pub fn edge_table(&self) -> Vec<((i32, i32), u32)> {
        let mut table: Vec<_> = self
            .stencil()
            .offsets()
            .iter()
            .copied()
            .zip(self.edge_units().iter().copied())
            .collect();
        table.sort_unstable();
        table
    }

    /// Value of the cut whose source side is `mask`, in quanta.
    pub fn cut_units(&self, mask: &PixelMask) -> Result<u64> {
        self.grid.ensure_same(mask.grid())?;
        let (w, h) = (self.grid.width, self.grid.height);
        let stencil = self.stencil();
        let total = (0..h)
            .into_par_iter()
            .map(|j| {
                let mut sum = 0u64;
                for i in 0..w {
                    let p = j * w + i;
                    if !mask.get(i, j) {
                        sum += self.source[p];
                        continue;
                    }
                    sum += self.sink[p];
                    for (k, &(dx, dy)) in stencil.offsets().iter().enumerate() {
                        let (x, y) = (i as isize + dx as isize, j as isize + dy as isize);
                        let inside = x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h;
                        if inside && !mask.get(x as usize, y as usize) {
                            sum += self.edge_units()[k] as u64;
                        }
                    }
                }
                sum
            })
            .sum();
        Ok(total)
    }
}

fn check_budget(width: usize, height: usize, options: GraphOptions) -> Result<()> {
    let required = estimate_memory(width, height, options.neighborhood);
    if required > options.memory_budget {
        return Err(Error::MemoryBudget {
            required,
            budget: options.memory_budget,
        });
    }
    Ok(())
}

/// Builds the cut graph of `Per(Σ) + λ|Σ △ Ω|` on Ω's grid.
pub fn build_graph(omega: &PixelMask, lambda: f64, options: GraphOptions) -> Result<CutGraph> {
    let grid = *omega.grid();
    check_budget(grid.width, grid.height, options)?;
    let weights = Weights::new(lambda, grid.spacing, options.neighborhood)?;
    let (w, h) = (grid.width, grid.height);
    let offsets = weights.stencil.offsets();
    let mut source = vec![0u64; w * h];
    let mut sink = vec![0u64; w * h];
    source
        .par_chunks_mut(w)
        .zip(sink.par_chunks_mut(w))
        .enumerate()
        .for_each(|(j, (src, snk))| {
            for i in 0..w {
                if omega.get(i, j) {
                    src[i] = weights.unary_units;
                } else {
                    snk[i] = weights.unary_units;
                }
                for (k, &(dx, dy)) in offsets.iter().enumerate() {
                    let (x, y) = (i as isize + dx as isize, j as isize + dy as isize);
                    if x < 0 || y < 0 || x as usize >= w || y as usize >= h {
                        snk[i] += weights.edge_units[k] as u64;
                    }
                }
            }
        });
    Ok(CutGraph {
        grid,
        lambda,
        weights,
        source,
        sink,
    })
}

/// Output of [`min_cut`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Source side of the minimum cut: the discrete minimizer.
    pub mask: PixelMask,
    /// Energy of `mask` in energy units.
    pub energy_discrete: f64,
    /// Maximum flow in energy units.
    pub maxflow: f64,
    pub energy_units: u64,
    pub flow_units: u64,
    pub quantum: f64,
    /// Constant added to the cut value to get the energy. The graph encodes
    /// both mismatch directions as terminal arcs, so this is always zero.
    pub offset: f64,
    pub work: WorkCounters,
}

/// Exact minimum cut. The returned mask is the set of pixels that cannot
/// reach the sink in the final residual graph: the largest minimizer.
pub fn min_cut(graph: &CutGraph) -> Result<SolveResult> {
    let outcome = preflow::max_flow(graph);
    let mask = PixelMask::new(graph.grid, outcome.source_side)?;
    let energy_units = graph.cut_units(&mask)?;
    let q = graph.quantum();
    Ok(SolveResult {
        energy_discrete: energy_units as f64 * q,
        maxflow: outcome.flow as f64 * q,
        energy_units,
        flow_units: outcome.flow,
        quantum: q,
        offset: 0.0,
        work: outcome.work,
        mask,
    })
}

/// Rasterizes the problem's Ω at `resolution` columns and solves it. The
/// memory budget is checked before anything is rasterized.
pub fn solve_problem(
    problem: &Problem,
    resolution: usize,
    options: GraphOptions,
) -> Result<SolveResult> {
    let (width, height) = raster_size(&problem.shape, resolution, default_padding(&problem.shape));
    check_budget(width, height, options)?;
    let omega = rasterize_shape(&problem.shape, resolution)?;
    min_cut(&build_graph(&omega, problem.lambda, options)?)
}

/// Discrete energy split into its two terms, in quanta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteEnergy {
    pub perimeter_units: u64,
    pub fidelity_units: u64,
    pub quantum: f64,
}

impl DiscreteEnergy {
    pub fn total_units(&self) -> u64 {
        self.perimeter_units + self.fidelity_units
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter_units as f64 * self.quantum
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity_units as f64 * self.quantum
    }

    pub fn total(&self) -> f64 {
        self.total_units() as f64 * self.quantum
    }
}

/// Recomputes the discrete energy of any mask directly from the weights,
/// without a graph.
pub fn audit_energy(
    mask: &PixelMask,
    omega: &PixelMask,
    lambda: f64,
    neighborhood: Neighborhood,
) -> Result<DiscreteEnergy> {
    mask.grid().ensure_same(omega.grid())?;
    let weights = Weights::new(lambda, mask.spacing(), neighborhood)?;
    let mismatched = mask.symmetric_difference_count(omega)? as u64;
    let (w, h) = (mask.width(), mask.height());
    let offsets = weights.stencil.offsets();
    let perimeter_units = (0..h)
        .into_par_iter()
        .map(|j| {
            let mut sum = 0u64;
            for i in (0..w).filter(|&i| mask.get(i, j)) {
                for (k, &(dx, dy)) in offsets.iter().enumerate() {
                    let (x, y) = (i as isize + dx as isize, j as isize + dy as isize);
                    let inside = x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h;
                    if !inside || !mask.get(x as usize, y as usize) {
                        sum += weights.edge_units[k] as u64;
                    }
                }
            }
            sum
        })
        .sum();
    Ok(DiscreteEnergy {
        perimeter_units,
        fidelity_units: mismatched * weights.unary_units,
        quantum: weights.quantum,
    })
}

/// Nearest analytic candidate to a solver mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// Nearest candidate by symmetric difference, lowest index on ties.
    pub nearest: Option<Candidate>,
    pub symmetric_difference: usize,
    /// `symmetric_difference / |Ω|` in pixels.
    pub fraction: f64,
    /// Whether the nearest candidate is farther than [`CLASSIFY_FRACTION`].
    pub novel: bool,
}

impl Classification {
    /// The matched candidate, or `None` for a novel result.
    pub fn candidate(&self) -> Option<Candidate> {
        self.nearest.filter(|_| !self.novel)
    }

    /// `S3:omega`, or `novel`.
    pub fn label(&self) -> String {
        self.candidate()
            .map_or_else(|| "novel".to_string(), |c| c.describe())
    }
}

/// Matches a solver mask against every rasterized candidate of the family.
///
/// The mask must live on the grid [`rasterize_shape`] produces for `shape`
/// at the mask's width. Candidates that cannot be rasterized at this
/// spacing (an opening radius below one pixel) are skipped.
pub fn classify_result(
    result: &SolveResult,
    shape: &ShapeSpec,
    lambda: f64,
) -> Result<Classification> {
    let grid = *result.mask.grid();
    raster_grid(shape, grid.width, default_padding(shape))?.ensure_same(&grid)?;
    let omega = rasterize_on(shape, grid);
    let mut best: Option<(Candidate, usize)> = None;
    for &candidate in candidates(shape.family()) {
        let mask = match candidate_mask(shape, lambda, candidate.kind, grid) {
            Ok(mask) => mask,
            Err(Error::RadiusBelowSpacing { .. }) => continue,
            Err(e) => return Err(e),
        };
        let diff = mask.symmetric_difference_count(&result.mask)?;
        if best.is_none_or(|(_, d)| diff < d) {
            best = Some((candidate, diff));
        }
    }
    let (nearest, symmetric_difference) = match best {
        Some((c, d)) => (Some(c), d),
        None => (None, usize::MAX),
    };
    let fraction = match omega.count() {
        0 if symmetric_difference == 0 => 0.0,
        0 => f64::INFINITY,
        n => symmetric_difference as f64 / n as f64,
    };
    Ok(Classification {
        nearest,
        symmetric_difference,
        fraction,
        novel: !(fraction <= CLASSIFY_FRACTION),
    })
}
