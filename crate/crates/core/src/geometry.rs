//! Panel geometry: cut masks, sub-plates and placement conflicts.
//!
//! The flat panel is a grid of 10 × 6 square cells. A 16-bit [`CutMask`]
//! selects grid lines to cut along: bits 0–9 are lengthwise cut lines (bit
//! `i` cuts after cell row `i + 1`), bits 10–15 are widthwise cut lines
//! (bit `10 + j` cuts after cell column `j + 1`). A cut that falls on the
//! outer edge of the grid (bit 9, bit 15) is accepted but produces nothing.

use std::fmt;

/// Number of bits in a cut mask.
pub const MASK_BITS: usize = 16;
/// Bits 0..LENGTH_BITS address lengthwise cut lines.
pub const LENGTH_BITS: usize = 10;
/// Bits LENGTH_BITS..MASK_BITS address widthwise cut lines.
pub const WIDTH_BITS: usize = 6;
/// Maximum number of set bits kept by [`resolve_cuts`].
pub const MAX_CUTS: u32 = 6;
/// Upper bound on the number of plates any resolved mask decodes to.
pub const MAX_PLATES: usize = 16;

/// Physical layout of the uncut panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelSpec {
    pub length_in: f64,
    pub width_in: f64,
    pub cell_in: f64,
    pub cells_len: usize,
    pub cells_wid: usize,
}

impl PanelSpec {
    /// A 65 × 39 inch panel of sixty 6-inch cells.
    pub const STANDARD: PanelSpec = PanelSpec {
        length_in: 65.0,
        width_in: 39.0,
        cell_in: 6.0,
        cells_len: 10,
        cells_wid: 6,
    };

    pub fn cells_total(&self) -> usize {
        self.cells_len * self.cells_wid
    }

    /// Area of one cell in square inches.
    pub fn cell_area(&self) -> f64 {
        self.cell_in * self.cell_in
    }
}

impl Default for PanelSpec {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// The 16 candidate cut lines of a panel, stored as a bit set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CutMask(u16);

impl CutMask {
    pub const EMPTY: CutMask = CutMask(0);

    pub const fn from_bits(bits: u16) -> Self {
        CutMask(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    /// Builds a mask from set bit indices. Indices ≥ 16 are ignored.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let bits = indices
            .into_iter()
            .filter(|&i| i < MASK_BITS)
            .fold(0u16, |acc, i| acc | (1 << i));
        CutMask(bits)
    }

    pub fn get(self, index: usize) -> bool {
        debug_assert!(index < MASK_BITS);
        self.0 & (1 << index) != 0
    }

    pub fn set(&mut self, index: usize, value: bool) {
        debug_assert!(index < MASK_BITS);
        if value {
            self.0 |= 1 << index;
        } else {
            self.0 &= !(1 << index);
        }
    }

    pub fn flip(&mut self, index: usize) {
        debug_assert!(index < MASK_BITS);
        self.0 ^= 1 << index;
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_resolved(self) -> bool {
        self.count() <= MAX_CUTS
    }

    pub fn resolved(self) -> Self {
        resolve_cuts(self)
    }

    /// Set bit indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..MASK_BITS).filter(move |&i| self.get(i))
    }
}

/// Renders bit 0 first, e.g. `1000000000001000` has bits 0 and 12 set.
impl fmt::Display for CutMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..MASK_BITS {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for CutMask {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.len() != MASK_BITS {
            return Err(format!("expected {MASK_BITS} bits, got {}", s.len()));
        }
        let mut mask = CutMask::EMPTY;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => mask.set(i, true),
                other => return Err(format!("invalid bit character {other:?}")),
            }
        }
        Ok(mask)
    }
}

/// Limits a mask to at most six cuts, keeping the lowest-index set bits.
pub fn resolve_cuts(mask: CutMask) -> CutMask {
    let mut bits = mask.bits();
    while bits.count_ones() > MAX_CUTS {
        // clear the highest set bit
        bits &= !(1u16 << (15 - bits.leading_zeros()));
    }
    CutMask(bits)
}

/// A rectangular block of cells. Ranges are half-open cell indices; rows run
/// along the panel length, columns along its width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubPlate {
    pub row_start: usize,
    pub row_end: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl SubPlate {
    pub fn rows(&self) -> usize {
        self.row_end - self.row_start
    }

    pub fn cols(&self) -> usize {
        self.col_end - self.col_start
    }

    pub fn cell_count(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn overlaps(&self, other: &SubPlate) -> bool {
        self.row_start < other.row_end
            && other.row_start < self.row_end
            && self.col_start < other.col_end
            && other.col_start < self.col_end
    }
}

fn split_points(mask: CutMask, offset: usize, bits: usize, cells: usize) -> Vec<usize> {
    let mut points = vec![0];
    points.extend(
        (0..bits)
            .filter(|&i| mask.get(offset + i))
            .map(|i| i + 1)
            .filter(|&line| line < cells),
    );
    points.push(cells);
    points
}

/// Cuts the panel along the mask's interior cut lines and returns the
/// resulting plates in row-major order.
pub fn decode(mask: CutMask, spec: &PanelSpec) -> Vec<SubPlate> {
    debug_assert_eq!(spec.cells_len, LENGTH_BITS);
    debug_assert_eq!(spec.cells_wid, WIDTH_BITS);
    let rows = split_points(mask, 0, LENGTH_BITS, spec.cells_len);
    let cols = split_points(mask, LENGTH_BITS, WIDTH_BITS, spec.cells_wid);
    let mut plates = Vec::with_capacity((rows.len() - 1) * (cols.len() - 1));
    for r in rows.windows(2) {
        for c in cols.windows(2) {
            plates.push(SubPlate {
                row_start: r[0],
                row_end: r[1],
                col_start: c[0],
                col_end: c[1],
            });
        }
    }
    plates
}

/// Height, tilt and compass orientation of one plate on the tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    /// Inches above the base of the tree, 32..=72.
    pub height: f64,
    /// Degrees from horizontal, -90..=90.
    pub tilt: f64,
    /// Degrees clockwise from north, 0..360.
    pub azimuth: f64,
}

impl Placement {
    pub const HEIGHT_RANGE: (f64, f64) = (32.0, 72.0);
    pub const TILT_RANGE: (f64, f64) = (-90.0, 90.0);
    pub const AZIMUTH_RANGE: (f64, f64) = (0.0, 360.0);

    pub fn new(height: f64, tilt: f64, azimuth: f64) -> Self {
        Placement {
            height,
            tilt,
            azimuth,
        }
    }

    pub fn is_valid(&self) -> bool {
        let (hl, hh) = Self::HEIGHT_RANGE;
        let (tl, th) = Self::TILT_RANGE;
        (hl..=hh).contains(&self.height)
            && (tl..=th).contains(&self.tilt)
            && (0.0..360.0).contains(&self.azimuth)
    }

    pub fn conflicts_with(&self, other: &Placement, rule: &ConflictRule) -> bool {
        (self.height - other.height).abs() < rule.height_threshold
            && (self.tilt - other.tilt).abs() < rule.tilt_threshold
            && circular_distance(self.azimuth, other.azimuth) < rule.azimuth_threshold
    }
}

/// A plate together with where it sits on the tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedPlate {
    pub plate: SubPlate,
    pub placement: Placement,
}

/// Two placed plates conflict when they are close in height, tilt and
/// orientation at the same time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConflictRule {
    pub height_threshold: f64,
    pub tilt_threshold: f64,
    pub azimuth_threshold: f64,
    /// Watts deducted per conflicting pair.
    pub penalty: f64,
}

impl Default for ConflictRule {
    fn default() -> Self {
        ConflictRule {
            height_threshold: 20.0,
            tilt_threshold: 90.0,
            azimuth_threshold: 45.0,
            penalty: 50.0,
        }
    }
}

/// Shortest angular distance between two compass bearings, in `[0, 180]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Number of unordered plate pairs that conflict under `rule`.
pub fn count_conflicts(plates: &[PlacedPlate], rule: &ConflictRule) -> usize {
    let mut count = 0;
    for (i, a) in plates.iter().enumerate() {
        for b in &plates[i + 1..] {
            if a.placement.conflicts_with(&b.placement, rule) {
                count += 1;
            }
        }
    }
    count
}
