//! Per-pixel descriptor kernels: LBP codes, Kirsch compass responses and
//! Gradient Direction Pattern (GDP) codes, plus the uniform-pattern bin
//! mappings used by the block histograms.
//!
//! Neighbors are indexed clockwise from the top-left corner:
//!
//! ```text
//! S1(NW) S2(N) S3(NE)
//! S8(W)  C     S4(E)
//! S7(SW) S6(S) S5(SE)
//! ```
//!
//! so ring index `d` and `d + 4` are always opposite directions.

use std::ops::{Add, Mul, Sub};

use crate::image::GrayImage;

/// Compass direction of a ring position, in ring order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    NorthWest,
    North,
    NorthEast,
    East,
    SouthEast,
    South,
    SouthWest,
    West,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::NorthWest,
        Direction::North,
        Direction::NorthEast,
        Direction::East,
        Direction::SouthEast,
        Direction::South,
        Direction::SouthWest,
        Direction::West,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Direction {
        Self::ALL[(self.index() + 4) % 8]
    }

    /// `(dx, dy)` offset of this ring position from the center.
    pub fn offset(self) -> (isize, isize) {
        RING_OFFSETS[self.index()]
    }
}

const RING_OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
];

/// A center intensity and its eight neighbors in ring order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Neighborhood {
    pub center: u8,
    pub ring: [u8; 8],
}

impl Neighborhood {
    pub fn new(center: u8, ring: [u8; 8]) -> Self {
        Self { center, ring }
    }

    /// Builds a neighborhood from a 3x3 patch given row-major.
    pub fn from_rows(rows: [[u8; 3]; 3]) -> Self {
        let ring = RING_OFFSETS.map(|(dx, dy)| rows[(1 + dy) as usize][(1 + dx) as usize]);
        Self {
            center: rows[1][1],
            ring,
        }
    }

    /// The 3x3 neighborhood centred on `(x, y)`, or `None` when any neighbor
    /// would fall outside the image.
    pub fn at(img: &GrayImage, x: usize, y: usize) -> Option<Self> {
        if x == 0 || y == 0 || x + 1 >= img.width() || y + 1 >= img.height() {
            return None;
        }
        let ring = RING_OFFSETS
            .map(|(dx, dy)| img.get((x as isize + dx) as usize, (y as isize + dy) as usize));
        Some(Self {
            center: img.get(x, y),
            ring,
        })
    }

    pub fn to_rows(&self) -> [[u8; 3]; 3] {
        let mut rows = [[self.center; 3]; 3];
        for (&(dx, dy), &v) in RING_OFFSETS.iter().zip(&self.ring) {
            rows[(1 + dy) as usize][(1 + dx) as usize] = v;
        }
        rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LbpCode(pub u8);

/// 4-bit gradient direction pattern, always `< 16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GdpCode(u8);

impl GdpCode {
    pub fn new(value: u8) -> Option<Self> {
        (value < 16).then_some(Self(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// All 16 codes in ascending order.
    pub fn all() -> impl Iterator<Item = GdpCode> {
        (0..16).map(GdpCode)
    }
}

/// Basic 8-neighbor LBP. Bit for `S_k` is set when `S_k >= C`, and `S1`
/// carries the most significant bit (`S_k` weighs `2^(8-k)`).
pub fn lbp_code(nbhd: &Neighborhood) -> LbpCode {
    let code = nbhd
        .ring
        .iter()
        .fold(0u8, |acc, &s| (acc << 1) | u8::from(s >= nbhd.center));
    LbpCode(code)
}

/// The eight Kirsch compass responses at a pixel, in ring order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KirschResponses(pub [i32; 8]);

impl KirschResponses {
    pub fn get(&self, dir: Direction) -> i32 {
        self.0[dir.index()]
    }

    pub fn gdp_code(&self) -> GdpCode {
        gdp_code(self)
    }
}

/// Kirsch masks: `+5` on the three ring positions centred on a direction,
/// `-3` on the other five, `0` at the center. With `s3` the sum of the three
/// and `t` the ring total, the response is `5·s3 − 3·(t − s3) = 8·s3 − 3·t`.
pub fn kirsch_responses(nbhd: &Neighborhood) -> KirschResponses {
    let ring = nbhd.ring.map(i32::from);
    let total: i32 = ring.iter().sum();
    KirschResponses(std::array::from_fn(|d| {
        let s3 = ring[(d + 7) % 8] + ring[d] + ring[(d + 1) % 8];
        8 * s3 - 3 * total
    }))
}

/// Kirsch responses over any signed numeric ring, e.g. scaled or unclamped
/// intensities that no longer fit in a byte.
pub fn kirsch_responses_of<T>(ring: &[T; 8]) -> [T; 8]
where
    T: Copy + From<i8> + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let total = ring.iter().fold(T::from(0), |acc, &v| acc + v);
    std::array::from_fn(|d| {
        let s3 = ring[(d + 7) % 8] + ring[d] + ring[(d + 1) % 8];
        T::from(5) * s3 - T::from(3) * (total - s3)
    })
}

/// GDP code from opposite-direction response pairs, MSB first:
/// `NW>=SE`, `N>=S`, `NE>=SW`, `E>=W`.
pub fn gdp_code(resp: &KirschResponses) -> GdpCode {
    gdp_code_from(&resp.0)
}

/// [`gdp_code`] over any ordered response type.
pub fn gdp_code_from<T: PartialOrd>(responses: &[T; 8]) -> GdpCode {
    let code = (0..4).fold(0u8, |acc, d| {
        (acc << 1) | u8::from(responses[d] >= responses[d + 4])
    });
    GdpCode(code)
}

/// Adjacent-bit changes reading the 4 bits MSB to LSB, not wrapping around.
pub fn transition_count(code: GdpCode) -> u32 {
    let v = code.0;
    ((v ^ (v >> 1)) & 0b0111).count_ones()
}

pub fn is_uniform(code: GdpCode) -> bool {
    transition_count(code) <= 1
}

// uniform GDP codes 0,1,3,7,8,12,14,15 get bins 0..=7; others are dropped
const GDP_BIN: [Option<u8>; 16] = {
    let mut table = [None; 16];
    let mut code = 0;
    let mut next = 0u8;
    while code < 16 {
        let v = code as u8;
        if ((v ^ (v >> 1)) & 0b0111).count_ones() <= 1 {
            table[code] = Some(next);
            next += 1;
        }
        code += 1;
    }
    table
};

/// Histogram bin of a uniform GDP code, ascending by code value. Non-uniform
/// codes have no bin and are left out of histograms.
pub fn uniform_bin(code: GdpCode) -> Option<usize> {
    GDP_BIN[code.0 as usize].map(usize::from)
}

pub const GDP_BINS: usize = 8;
pub const LBP_BINS: usize = 256;
pub const LBP_UNIFORM_BINS: usize = 59;

const fn circular_transitions(v: u8) -> u32 {
    (v ^ v.rotate_left(1)).count_ones()
}

const LBP_UNIFORM_BIN: [u8; 256] = {
    let mut table = [58u8; 256];
    let mut code = 0;
    let mut next = 0u8;
    while code < 256 {
        if circular_transitions(code as u8) <= 2 {
            table[code] = next;
            next += 1;
        }
        code += 1;
    }
    table
};

/// Standard 59-bin uniform LBP mapping: the 58 codes with at most two
/// circular transitions take bins 0..=57 in ascending code order, every
/// other code shares bin 58.
pub fn lbp_uniform_bin(code: LbpCode) -> usize {
    usize::from(LBP_UNIFORM_BIN[code.0 as usize])
}
