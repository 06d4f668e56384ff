//! The annulus gap width at which the two tangent `1/λ`-balls meet.
//!
//! At contact `sin φ = 1/(λr + 1)`; combined with the closed form for
//! `cos φ` through `sin²φ + cos²φ = 1` this gives a scalar equation in `δ`.

use crate::error::{Error, Result};

/// Number of interior points scanned for sign changes before bisection.
const SCAN_POINTS: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct TouchPoint {
    /// Root in the first (smallest-δ) bracket.
    pub delta: f64,
    /// `g(delta)`.
    pub residual: f64,
    /// Every root found, one per bracket, in increasing δ.
    pub roots: Vec<f64>,
}

/// `g(δ) = sin²φ + cos²φ - 1` with `sin φ = 1/(λr + 1)` and `cos φ` from
/// the closed form at gap `δ`.
pub fn touch_residual(outer: f64, inner: f64, lambda: f64, delta: f64) -> f64 {
    let rho = 1.0 / lambda;
    let d = outer - inner - delta;
    let reach_out = outer - rho;
    let reach_in = inner + rho;
    let cos_phi = (reach_out * reach_out - d * d - reach_in * reach_in) / (2.0 * d * reach_in);
    let sin_phi = 1.0 / (lambda * inner + 1.0);
    sin_phi * sin_phi + cos_phi * cos_phi - 1.0
}

/// Finds `δ* ∈ (0, R - r)` where the two tangent balls touch, for outer
/// radius `outer = R` and inner radius `inner = r`.
///
/// Scans [`SCAN_POINTS`] interior points for sign changes of
/// [`touch_residual`], then bisects each bracket to machine precision.
pub fn annulus_touch_delta(outer: f64, inner: f64, lambda: f64) -> Result<TouchPoint> {
    if !(lambda > 0.0 && 2.0 / lambda < inner && inner < outer) {
        return Err(Error::Inadmissible(format!(
            "touching curve needs 2/λ < r < R (λ = {lambda}, r = {inner}, R = {outer})"
        )));
    }
    let width = outer - inner;
    let g = |delta: f64| touch_residual(outer, inner, lambda, delta);
    let samples: Vec<(f64, f64)> = (1..=SCAN_POINTS)
        .map(|i| {
            let delta = width * i as f64 / (SCAN_POINTS + 1) as f64;
            (delta, g(delta))
        })
        .collect();

    let mut roots = Vec::new();
    for pair in samples.windows(2) {
        let ((a, ga), (b, gb)) = (pair[0], pair[1]);
        if ga == 0.0 {
            roots.push(a);
        } else if ga.signum() != gb.signum() && gb != 0.0 {
            roots.push(bisect(&g, a, ga, b));
        }
    }
    if let Some(&(last, gl)) = samples.last() {
        if gl == 0.0 {
            roots.push(last);
        }
    }

    match roots.first() {
        Some(&delta) => Ok(TouchPoint {
            delta,
            residual: g(delta),
            roots,
        }),
        None => Err(Error::Infeasible(format!(
            "no sign change of the touching equation on (0, {width}) at λ = {lambda}"
        ))),
    }
}

fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut g_lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}
