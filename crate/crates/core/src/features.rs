//! Block-grid partitioning and concatenated per-block code histograms.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::descriptors::{
    gdp_code, kirsch_responses, lbp_code, lbp_uniform_bin, uniform_bin, LbpCode, Neighborhood,
    GDP_BINS, LBP_BINS, LBP_UNIFORM_BINS,
};
use crate::error::{Error, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DescriptorKind {
    /// Uniform GDP codes, 8 bins.
    Gdp,
    /// Raw 8-bit LBP codes, 256 bins.
    Lbp,
    /// Uniform LBP, 58 uniform bins plus one catch-all.
    LbpUniform,
}

impl DescriptorKind {
    pub const ALL: [DescriptorKind; 3] = [
        DescriptorKind::Gdp,
        DescriptorKind::Lbp,
        DescriptorKind::LbpUniform,
    ];

    pub fn bins(self) -> usize {
        match self {
            DescriptorKind::Gdp => GDP_BINS,
            DescriptorKind::Lbp => LBP_BINS,
            DescriptorKind::LbpUniform => LBP_UNIFORM_BINS,
        }
    }

    pub fn feature_len(self, n: usize) -> usize {
        n * n * self.bins()
    }

    pub fn name(self) -> &'static str {
        match self {
            DescriptorKind::Gdp => "gdp",
            DescriptorKind::Lbp => "lbp",
            DescriptorKind::LbpUniform => "lbpu",
        }
    }

    /// Raw per-pixel code for a neighborhood (GDP: 0..16, LBP: 0..256).
    pub fn code(self, nbhd: &Neighborhood) -> u8 {
        match self {
            DescriptorKind::Gdp => gdp_code(&kirsch_responses(nbhd)).value(),
            DescriptorKind::Lbp | DescriptorKind::LbpUniform => lbp_code(nbhd).0,
        }
    }

    /// Histogram bin of a raw code, `None` when the code is not counted.
    pub fn bin(self, code: u8) -> Option<usize> {
        match self {
            DescriptorKind::Gdp => crate::descriptors::GdpCode::new(code).and_then(uniform_bin),
            DescriptorKind::Lbp => Some(usize::from(code)),
            DescriptorKind::LbpUniform => Some(lbp_uniform_bin(LbpCode(code))),
        }
    }
}

impl fmt::Display for DescriptorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DescriptorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gdp" => Ok(DescriptorKind::Gdp),
            "lbp" => Ok(DescriptorKind::Lbp),
            "lbpu" | "lbp_u" | "lbp-u" => Ok(DescriptorKind::LbpUniform),
            other => Err(Error::invalid(format!(
                "unknown descriptor kind {other:?} (expected gdp, lbp or lbpu)"
            ))),
        }
    }
}

/// Near-equal `n × n` partition of an image. Bound `i` on an axis of length
/// `dim` is `floor(i·dim/n)`, so spans differ by at most one pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGrid {
    pub n: usize,
    pub row_bounds: Vec<usize>,
    pub col_bounds: Vec<usize>,
}

pub fn block_grid(width: usize, height: usize, n: usize) -> Result<BlockGrid> {
    if n == 0 {
        return Err(Error::invalid("block count must be at least 1"));
    }
    if width < n || height < n {
        return Err(Error::invalid(format!(
            "{width}x{height} image is too small for a {n}x{n} block grid"
        )));
    }
    let bounds = |dim: usize| (0..=n).map(|i| i * dim / n).collect();
    Ok(BlockGrid {
        n,
        row_bounds: bounds(height),
        col_bounds: bounds(width),
    })
}

impl BlockGrid {
    /// Block index along one axis for each pixel coordinate.
    fn axis_lookup(bounds: &[usize]) -> Vec<usize> {
        let mut lookup = Vec::with_capacity(*bounds.last().unwrap_or(&0));
        for (block, span) in bounds.windows(2).enumerate() {
            lookup.extend(std::iter::repeat_n(block, span[1] - span[0]));
        }
        lookup
    }

    /// Pixel ranges `(rows, cols)` covered by block `(row, col)`.
    pub fn block_span(&self, row: usize, col: usize) -> (Range<usize>, Range<usize>) {
        (
            self.row_bounds[row]..self.row_bounds[row + 1],
            self.col_bounds[col]..self.col_bounds[col + 1],
        )
    }

    /// Row-major block index of pixel `(x, y)`.
    pub fn block_of(&self, x: usize, y: usize) -> usize {
        let find = |bounds: &[usize], v: usize| bounds.partition_point(|&b| b <= v) - 1;
        find(&self.row_bounds, y) * self.n + find(&self.col_bounds, x)
    }
}

/// Per-pixel codes over the image interior; border pixels lack a full 3x3
/// neighborhood and have no code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMap {
    pub kind: DescriptorKind,
    /// Full image dimensions; codes cover `1..width-1` × `1..height-1`.
    pub width: usize,
    pub height: usize,
    codes: Vec<u8>,
}

impl CodeMap {
    /// Code of interior pixel `(x, y)` in image coordinates.
    pub fn get(&self, x: usize, y: usize) -> Option<u8> {
        if x == 0 || y == 0 || x + 1 >= self.width || y + 1 >= self.height {
            return None;
        }
        Some(self.codes[(y - 1) * (self.width - 2) + (x - 1)])
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }
}

pub fn extract_codes(img: &GrayImage, kind: DescriptorKind) -> Result<CodeMap> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::invalid(format!(
            "descriptor extraction needs at least 3x3 pixels, got {w}x{h}"
        )));
    }
    let mut codes = Vec::with_capacity((w - 2) * (h - 2));
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let nbhd = Neighborhood::at(img, x, y).expect("interior pixel");
            codes.push(kind.code(&nbhd));
        }
    }
    Ok(CodeMap {
        kind,
        width: w,
        height: h,
        codes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub kind: DescriptorKind,
    pub n: usize,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Histogram slice of block `(row, col)`.
    pub fn block(&self, row: usize, col: usize) -> &[f64] {
        let bins = self.kind.bins();
        let start = (row * self.n + col) * bins;
        &self.values[start..start + bins]
    }
}

/// Raw per-block counts, row-major by block, `n²·bins` entries.
pub fn block_counts(codes: &CodeMap, grid: &BlockGrid) -> Vec<u32> {
    let bins = codes.kind.bins();
    let mut counts = vec![0u32; grid.n * grid.n * bins];
    let rows = BlockGrid::axis_lookup(&grid.row_bounds);
    let cols = BlockGrid::axis_lookup(&grid.col_bounds);
    let inner_w = codes.width - 2;
    for (i, &code) in codes.codes.iter().enumerate() {
        let (x, y) = (i % inner_w + 1, i / inner_w + 1);
        if let Some(bin) = codes.kind.bin(code) {
            let block = rows[y] * grid.n + cols[x];
            counts[block * bins + bin] += 1;
        }
    }
    counts
}

/// Counts of a single block, computed on its own.
pub fn block_histogram(codes: &CodeMap, grid: &BlockGrid, row: usize, col: usize) -> Vec<u32> {
    let mut hist = vec![0u32; codes.kind.bins()];
    let (rows, cols) = grid.block_span(row, col);
    for y in rows {
        for x in cols.clone() {
            if let Some(bin) = codes.get(x, y).and_then(|c| codes.kind.bin(c)) {
                hist[bin] += 1;
            }
        }
    }
    hist
}

/// Codes every interior pixel, histograms them per block of the `n × n`
/// grid and L1-normalizes each block by its own counted total. Blocks with
/// nothing counted stay all-zero.
pub fn feature_vector(img: &GrayImage, kind: DescriptorKind, n: usize) -> Result<FeatureVector> {
    let grid = block_grid(img.width(), img.height(), n)?;
    let codes = extract_codes(img, kind)?;
    let counts = block_counts(&codes, &grid);
    let mut values = Vec::with_capacity(counts.len());
    for block in counts.chunks(kind.bins()) {
        let total: u32 = block.iter().sum();
        if total == 0 {
            values.extend(std::iter::repeat_n(0.0, block.len()));
        } else {
            let total = f64::from(total);
            values.extend(block.iter().map(|&c| f64::from(c) / total));
        }
    }
    Ok(FeatureVector { kind, n, values })
}
