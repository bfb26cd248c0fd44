//! Cube-face sector addressing.
//!
//! Directions from the grid center are centrally projected onto the unit cube
//! around it; each cube face carries a `d × d` grid, giving `6·d²` pyramidal
//! sectors. On face `±a` the in-face coordinates are the components along
//! axes `(a + 1) % 3` and `(a + 2) % 3`, divided by `|v_a|`.

use crate::geometry::{Point3, EPS_MERGE};

use super::FilterError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CubeFace {
    PosX,
    NegX,
    PosY,
    NegY,
    PosZ,
    NegZ,
}

impl CubeFace {
    pub const ALL: [CubeFace; 6] = [
        CubeFace::PosX,
        CubeFace::NegX,
        CubeFace::PosY,
        CubeFace::NegY,
        CubeFace::PosZ,
        CubeFace::NegZ,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> CubeFace {
        Self::ALL[i]
    }

    #[inline]
    pub fn from_axis(axis: usize, positive: bool) -> CubeFace {
        Self::ALL[2 * axis + usize::from(!positive)]
    }

    #[inline]
    pub fn axis(self) -> usize {
        self.index() / 2
    }

    #[inline]
    pub fn sign(self) -> f64 {
        if self.index().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// The two in-face axes, in `(u, v)` order.
    #[inline]
    pub fn plane_axes(self) -> (usize, usize) {
        let a = self.axis();
        ((a + 1) % 3, (a + 2) % 3)
    }

    /// Point on the (possibly extended) face plane at in-face coordinates
    /// `(s, t)`.
    pub fn point_at(self, s: f64, t: f64) -> Point3 {
        let mut c = [0.0; 3];
        let (b, e) = self.plane_axes();
        c[self.axis()] = self.sign();
        c[b] = s;
        c[e] = t;
        c.into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectorId {
    pub face: CubeFace,
    pub u: usize,
    pub v: usize,
}

impl SectorId {
    #[inline]
    pub fn linear(self, d: usize) -> usize {
        (self.face.index() * d + self.u) * d + self.v
    }

    #[inline]
    pub fn from_linear(i: usize, d: usize) -> SectorId {
        SectorId {
            face: CubeFace::from_index(i / (d * d)),
            u: (i / d) % d,
            v: i % d,
        }
    }

    /// In-face coordinates of the sector's center on the unit cube.
    pub fn midpoint_coords(self, d: usize) -> (f64, f64) {
        let step = 2.0 / d as f64;
        (
            -1.0 + (self.u as f64 + 0.5) * step,
            -1.0 + (self.v as f64 + 0.5) * step,
        )
    }

    /// Direction from the grid center through the middle of the sector.
    pub fn axis_direction(self, d: usize) -> Point3 {
        let (s, t) = self.midpoint_coords(d);
        self.face.point_at(s, t)
    }
}

/// Number of sectors for `d` divisions per face edge.
#[inline]
pub fn sector_count(d: usize) -> usize {
    6 * d * d
}

/// Face and in-face coordinates (each in `[-1, 1]`) of a nonzero direction.
/// Dominant-axis ties resolve to the lower axis (x before y before z).
#[inline]
pub(crate) fn project(v: Point3) -> (CubeFace, f64, f64) {
    const NEXT: [usize; 3] = [1, 2, 0];
    const AFTER: [usize; 3] = [2, 0, 1];
    let c = v.to_array();
    let (ax, ay, az) = (c[0].abs(), c[1].abs(), c[2].abs());
    let axis = if ax >= ay && ax >= az {
        0
    } else if ay >= az {
        1
    } else {
        2
    };
    let positive = c[axis] >= 0.0;
    let inv = 1.0 / c[axis].abs();
    (
        CubeFace::from_axis(axis, positive),
        c[NEXT[axis]] * inv,
        c[AFTER[axis]] * inv,
    )
}

#[inline]
pub(crate) fn cell(coord: f64, d: usize) -> usize {
    // Truncation equals floor here: negative values clamp to 0 anyway.
    let x = (coord + 1.0) * 0.5 * d as f64;
    if x <= 0.0 {
        0
    } else {
        (x as usize).min(d - 1)
    }
}

/// Sector containing `p` as seen from `center`.
pub fn sector_of(center: Point3, d: usize, p: Point3) -> Result<SectorId, FilterError> {
    let v = p - center;
    if v.norm_sq() <= EPS_MERGE * EPS_MERGE {
        return Err(FilterError::ZeroDirection);
    }
    let (face, s, t) = project(v);
    Ok(SectorId {
        face,
        u: cell(s, d),
        v: cell(t, d),
    })
}

/// Grid offsets of the 8-neighborhood in counter-clockwise ring order,
/// starting at `+u`. Even slots are edge neighbors, odd slots diagonals.
pub const RING_OFFSETS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Per-sector neighbors in [`RING_OFFSETS`] order, as linear indices.
/// Diagonals that would cross a cube vertex are `None`.
pub type NeighborTable = Vec<[Option<u32>; 8]>;

/// Resolves the sector at in-face coordinates `(s, t)` of `face`, where at
/// most one coordinate may leave `[-1, 1]`; the overshoot is folded over the
/// cube edge onto the adjacent face.
fn fold(face: CubeFace, s: f64, t: f64, d: usize) -> Option<usize> {
    let out_s = s.abs() > 1.0;
    let out_t = t.abs() > 1.0;
    let dir = match (out_s, out_t) {
        (false, false) => face.point_at(s, t),
        (true, true) => return None,
        (true, false) => {
            let (b, _) = face.plane_axes();
            let mut c = face.point_at(s, t).to_array();
            c[face.axis()] = face.sign() * (2.0 - s.abs());
            c[b] = s.signum();
            c.into()
        }
        (false, true) => {
            let (_, e) = face.plane_axes();
            let mut c = face.point_at(s, t).to_array();
            c[face.axis()] = face.sign() * (2.0 - t.abs());
            c[e] = t.signum();
            c.into()
        }
    };
    let (f, a, b) = project(dir);
    Some(
        SectorId {
            face: f,
            u: cell(a, d),
            v: cell(b, d),
        }
        .linear(d),
    )
}

pub fn build_neighbor_table(d: usize) -> NeighborTable {
    assert!(d >= 1, "division count must be at least 1");
    let step = 2.0 / d as f64;
    (0..sector_count(d))
        .map(|i| {
            let id = SectorId::from_linear(i, d);
            let (s, t) = id.midpoint_coords(d);
            RING_OFFSETS.map(|(du, dv)| {
                fold(id.face, s + du as f64 * step, t + dv as f64 * step, d).map(|j| j as u32)
            })
        })
        .collect()
}
