//! Binary rasters of planar sets and their portable-graymap encoding.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::shapes::Region;

/// Smallest accepted `resolution` for [`rasterize`].
pub const MIN_RESOLUTION: usize = 16;

/// Largest pixel count a raster may have.
const MAX_PIXELS: usize = 1 << 34;

/// Uniform pixel grid. Pixel `(i, j)` (column `i`, row `j`) is centered at
/// `(origin.x + i·h, origin.y - j·h)`: row 0 is the top row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub width: usize,
    pub height: usize,
    pub spacing: f64,
    pub origin: Point,
}

impl Grid {
    pub fn new(width: usize, height: usize, spacing: f64, origin: Point) -> Result<Self> {
        if width == 0 || height == 0 || !(spacing > 0.0) {
            return Err(Error::GridMismatch(format!(
                "grid needs width, height ≥ 1 and spacing > 0 (got {width}x{height}, h = {spacing})"
            )));
        }
        match width.checked_mul(height) {
            Some(n) if n <= MAX_PIXELS => {}
            _ => return Err(Error::ResolutionOverflow { width, height }),
        }
        Ok(Self {
            width,
            height,
            spacing,
            origin,
        })
    }

    /// Grid covering `rect` with `columns` pixels across.
    pub fn covering(rect: Rect, columns: usize) -> Result<Self> {
        let spacing = rect.width() / columns as f64;
        let rows = covering_rows(rect, columns);
        if !rows.is_finite() || rows > MAX_PIXELS as f64 {
            return Err(Error::ResolutionOverflow {
                width: columns,
                height: usize::MAX,
            });
        }
        let rows = rows as usize;
        let center = rect.center();
        let origin = Point::new(
            center.x - 0.5 * (columns as f64 - 1.0) * spacing,
            center.y + 0.5 * (rows as f64 - 1.0) * spacing,
        );
        Grid::new(columns, rows, spacing, origin)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + i as f64 * self.spacing,
            self.origin.y - j as f64 * self.spacing,
        )
    }

    pub fn pixel_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{}x{} @ h={} vs {}x{} @ h={}",
                self.width, self.height, self.spacing, other.width, other.height, other.spacing
            )))
        }
    }
}

/// Binary raster of a planar set.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMask {
    grid: Grid,
    bits: Vec<bool>,
}

impl PixelMask {
    pub fn new(grid: Grid, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} bits for a {}x{} grid",
                bits.len(),
                grid.width,
                grid.height
            )));
        }
        Ok(Self { grid, bits })
    }

    pub fn empty(grid: Grid) -> Self {
        Self {
            bits: vec![false; grid.len()],
            grid,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn width(&self) -> usize {
        self.grid.width
    }

    pub fn height(&self) -> usize {
        self.grid.height
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[self.grid.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let k = self.grid.index(i, j);
        self.bits[k] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `count × h²`.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.grid.pixel_area()
    }

    pub fn is_subset_of(&self, other: &PixelMask) -> bool {
        self.grid == other.grid && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Number of pixels set in exactly one of the two masks.
    pub fn symmetric_difference_count(&self, other: &PixelMask) -> Result<usize> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }

    pub fn complement(&self) -> PixelMask {
        PixelMask {
            grid: self.grid,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// Writes a binary graymap: `P5`, maxval 255, `0` outside, `255` inside,
    /// top row first.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width(), self.height())?;
        let bytes: Vec<u8> = self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        out.write_all(&bytes)
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.bits.len() + 32);
        self.write_pgm(&mut buf)
            .expect("writing to a Vec cannot fail");
        buf
    }

    /// Reads a graymap written by [`PixelMask::write_pgm`]. Pixels with a
    /// value of at least half the maxval are inside. The physical grid is
    /// not stored in the file and must be supplied.
    pub fn read_pgm<R: Read>(mut input: R, spacing: f64, origin: Point) -> Result<Self> {
        let mut data = Vec::new();
        input
            .read_to_end(&mut data)
            .map_err(|e| Error::Graymap(e.to_string()))?;
        let (header, offset) = parse_pgm_header(&data)?;
        let [width, height, maxval] = header;
        if maxval == 0 || maxval > 255 {
            return Err(Error::Graymap(format!("unsupported maxval {maxval}")));
        }
        let pixels = &data[offset..];
        if pixels.len() != width * height {
            return Err(Error::Graymap(format!(
                "expected {} pixel bytes, found {}",
                width * height,
                pixels.len()
            )));
        }
        let grid = Grid::new(width, height, spacing, origin)?;
        let threshold = maxval.div_ceil(2);
        PixelMask::new(
            grid,
            pixels.iter().map(|&v| v as usize >= threshold).collect(),
        )
    }
}

fn parse_pgm_header(data: &[u8]) -> Result<([usize; 3], usize)> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(Error::Graymap("missing P5 magic".into()));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        while pos < data.len() && data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < data.len() && data[pos].is_ascii_digit() {
            pos += 1;
        }
        *field = std::str::from_utf8(&data[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Graymap("bad header field".into()))?;
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= data.len() || !data[pos].is_ascii_whitespace() {
        return Err(Error::Graymap("truncated header".into()));
    }
    Ok((fields, pos + 1))
}

/// Rasterizes `region` onto an existing grid by sampling pixel centers.
pub fn rasterize_on(region: &dyn Region, grid: Grid) -> PixelMask {
    let mut bits = vec![false; grid.len()];
    bits.par_chunks_mut(grid.width)
        .enumerate()
        .for_each(|(j, row)| {
            for (i, bit) in row.iter_mut().enumerate() {
                *bit = region.contains(grid.center(i, j));
            }
        });
    PixelMask { grid, bits }
}

/// Rows of the grid covering `rect` with `columns` pixels across, before
/// any size limit is applied.
fn covering_rows(rect: Rect, columns: usize) -> f64 {
    (rect.height() / (rect.width() / columns as f64))
        .round()
        .max(1.0)
}

/// `(columns, rows)` of the grid [`rasterize`] would use, without building
/// it. Rows saturate at `usize::MAX`.
pub fn raster_size(region: &dyn Region, resolution: usize, padding: f64) -> (usize, usize) {
    let rows = covering_rows(region.bounding_box().expanded(padding), resolution);
    (
        resolution,
        if rows < usize::MAX as f64 {
            rows as usize
        } else {
            usize::MAX
        },
    )
}

/// The grid [`rasterize`] uses for `region`.
pub fn raster_grid(region: &dyn Region, resolution: usize, padding: f64) -> Result<Grid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooSmall {
            resolution,
            minimum: MIN_RESOLUTION,
        });
    }
    Grid::covering(region.bounding_box().expanded(padding), resolution)
}

/// Rasterizes `region` over its bounding box expanded by `padding`, with
/// `resolution` pixels across. A pixel is set iff its center lies in the
/// region.
pub fn rasterize(region: &dyn Region, resolution: usize, padding: f64) -> Result<PixelMask> {
    Ok(rasterize_on(
        region,
        raster_grid(region, resolution, padding)?,
    ))
}
