//! Exact squared Euclidean distance transform and the morphological
//! opening built on it.
//!
//! The transform is the separable lower-envelope-of-parabolas algorithm:
//! one pass down every column, one pass along every row. All distances are
//! integers in squared pixel units, so erosion and dilation by the digital
//! disc `{o ∈ ℤ² : |o|² ≤ K}` are exact threshold tests.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mask::PixelMask;

/// Squared distance standing in for "no feature on this line".
const FAR: u64 = u64::MAX / 4;

/// 1D squared distance transform of `f` (feature cost per position) into
/// `out`, using scratch buffers `v` and `z`.
fn transform_line(f: &[u64], out: &mut [u64], v: &mut Vec<usize>, z: &mut Vec<f64>) {
    v.clear();
    z.clear();
    for (q, &fq) in f.iter().enumerate() {
        if fq >= FAR {
            continue;
        }
        let qf = q as f64;
        loop {
            match v.last() {
                None => {
                    v.push(q);
                    z.push(f64::NEG_INFINITY);
                    break;
                }
                Some(&p) => {
                    let pf = p as f64;
                    let s = ((fq as f64 + qf * qf) - (f[p] as f64 + pf * pf)) / (2.0 * (qf - pf));
                    if s <= *z.last().expect("z tracks v") {
                        v.pop();
                        z.pop();
                    } else {
                        v.push(q);
                        z.push(s);
                        break;
                    }
                }
            }
        }
    }
    if v.is_empty() {
        out.fill(FAR);
        return;
    }
    let mut k = 0;
    for (q, slot) in out.iter_mut().enumerate() {
        while k + 1 < v.len() && z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q.abs_diff(p) as u64;
        *slot = d * d + f[p];
    }
}

/// Squared distance (in pixel units) from every pixel center to the
/// nearest feature pixel center. With `outside_is_feature`, the plane
/// outside the grid counts as feature.
pub fn squared_distance(
    features: &[bool],
    width: usize,
    height: usize,
    outside_is_feature: bool,
) -> Vec<u64> {
    assert_eq!(features.len(), width * height);
    // Column pass, stored column-major.
    let columns: Vec<Vec<u64>> = (0..width)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new(), vec![0u64; height]),
            |(v, z, f), i| {
                for (j, slot) in f.iter_mut().enumerate() {
                    *slot = if features[j * width + i] { 0 } else { FAR };
                }
                let mut out = vec![0u64; height];
                transform_line(f, &mut out, v, z);
                if outside_is_feature {
                    for (j, d) in out.iter_mut().enumerate() {
                        let edge = (j + 1).min(height - j) as u64;
                        *d = (*d).min(edge * edge);
                    }
                }
                out
            },
        )
        .collect();

    let mut result = vec![0u64; width * height];
    result.par_chunks_mut(width).enumerate().for_each_init(
        || (Vec::new(), Vec::new(), vec![0u64; width]),
        |(v, z, f), (j, row)| {
            for (i, slot) in f.iter_mut().enumerate() {
                *slot = columns[i][j];
            }
            transform_line(f, row, v, z);
            if outside_is_feature {
                for (i, d) in row.iter_mut().enumerate() {
                    let edge = (i + 1).min(width - i) as u64;
                    *d = (*d).min(edge * edge);
                }
            }
        },
    );
    result
}

/// `K = ⌊(radius/h)²⌋`: the digital disc of that radius is
/// `{o : |o|² ≤ K}`.
pub fn disc_threshold(radius: f64, spacing: f64) -> Result<u64> {
    if !(radius >= spacing) {
        return Err(Error::RadiusBelowSpacing { radius, spacing });
    }
    Ok(((radius / spacing) * (radius / spacing)).floor() as u64)
}

/// Pixels whose whole digital disc lies in the mask. Everything outside the
/// grid is background.
pub fn erode(mask: &PixelMask, radius: f64) -> Result<PixelMask> {
    let k = disc_threshold(radius, mask.spacing())?;
    let background: Vec<bool> = mask.bits().iter().map(|&b| !b).collect();
    let d = squared_distance(&background, mask.width(), mask.height(), true);
    PixelMask::new(*mask.grid(), d.into_iter().map(|d| d > k).collect())
}

/// Union of the digital discs centered on the mask's pixels.
pub fn dilate(mask: &PixelMask, radius: f64) -> Result<PixelMask> {
    let k = disc_threshold(radius, mask.spacing())?;
    let d = squared_distance(mask.bits(), mask.width(), mask.height(), false);
    PixelMask::new(*mask.grid(), d.into_iter().map(|d| d <= k).collect())
}

/// Morphological opening: erosion followed by dilation with the same
/// digital disc, i.e. the union of all discs of `radius` inside the mask.
pub fn opening(mask: &PixelMask, radius: f64) -> Result<PixelMask> {
    dilate(&erode(mask, radius)?, radius)
}
