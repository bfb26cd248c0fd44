//! Per-sector maxima and the test-plane cap.
//!
//! Each sector keeps the point farthest from the center seen so far. A point
//! that is not a new maximum is tested against a cap built from its sector's
//! maximum `A` and the maxima of the neighbors bordering the quadrant (around
//! `A`'s projection) that the point falls into: edge neighbors `U`, `V` and
//! diagonal `W`. The cap is the pair of triangles `(A, U, W)` and
//! `(A, W, V)`; each triangle together with the center spans a tetrahedron.
//! All tetrahedron vertices lie inside the hull of the input (the center and
//! the seeds are inside the initial polyhedron, the rest are input points),
//! so a point strictly inside one of them can never be a hull vertex.

use crate::geometry::{orient3d_det, plane_through, OrientedPlane, Point3, EPS_MERGE, EPS_ORIENT};

use super::polyhedron::InitialPolyhedron;
use super::sectors::{build_neighbor_table, cell, project, sector_count, NeighborTable, SectorId};
use super::FilterError;

/// Outcome of offering a point to the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offer {
    Kept,
    Discarded,
    NewMaximum,
}

const ALL_STALE: u8 = 0b1111;

/// Quadrants whose cap uses ring slot `k`: slot `2q` is `U` of quadrant `q`
/// and `V` of quadrant `q - 1`; slot `2q + 1` is `W` of quadrant `q`.
const SLOT_QUADRANTS: [u8; 8] = [
    0b1001, 0b0001, 0b0011, 0b0010, 0b0110, 0b0100, 0b1100, 0b1000,
];

#[derive(Debug, Clone, Copy)]
struct Tetra {
    /// Cap plane first; it rejects most points.
    planes: [OrientedPlane; 4],
}

impl Tetra {
    /// Tetrahedron `(center, a, b, c)`, or `None` if it is flat.
    fn new(center: Point3, a: Point3, b: Point3, c: Point3) -> Option<Tetra> {
        let len = [a - center, b - center, c - center, b - a, c - a, c - b]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let vol = orient3d_det(center, a, b, c);
        if !(vol.abs() > EPS_ORIENT * len * len * len) {
            return None;
        }
        Some(Tetra {
            planes: [
                plane_through(a, b, c, center).ok()?,
                plane_through(center, a, b, c).ok()?,
                plane_through(center, b, c, a).ok()?,
                plane_through(center, c, a, b).ok()?,
            ],
        })
    }

    /// Stand-in for an absent tetrahedron; contains nothing.
    const EMPTY: Tetra = Tetra {
        planes: [OrientedPlane {
            normal: Point3::ORIGIN,
            offset: f64::INFINITY,
        }; 4],
    };

    #[inline]
    fn strictly_contains(&self, p: Point3, tol: f64) -> bool {
        let e = self.planes.map(|pl| pl.signed_eval(p));
        let hi = |a: f64, b: f64| if a > b { a } else { b };
        hi(hi(e[0], e[1]), hi(e[2], e[3])) < -tol
    }
}

#[derive(Debug, Clone, Copy)]
struct QuadrantCap {
    tetras: [Tetra; 2],
}

impl Default for QuadrantCap {
    fn default() -> Self {
        QuadrantCap {
            tetras: [Tetra::EMPTY; 2],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SectorGrid {
    d: usize,
    center: Point3,
    tolerance: f64,
    maxima: Vec<Point3>,
    max_dist_sq: Vec<f64>,
    synthetic: Vec<bool>,
    /// In-face coordinates of each maximum's projection.
    max_proj: Vec<(f64, f64)>,
    neighbors: NeighborTable,
    /// Sectors whose caps read this sector's maximum, with the mask of the
    /// quadrants that do.
    dependents: Vec<Vec<(u32, u8)>>,
    caps: Vec<[QuadrantCap; 4]>,
    /// Bit `q` set when quadrant `q`'s cap must be rebuilt.
    stale: Vec<u8>,
    suspicious: Vec<(Point3, u32)>,
}

impl SectorGrid {
    /// Grid with every maximum parked at the center. Call [`Self::init_maxima`]
    /// before offering points.
    pub fn new(center: Point3, d: usize, tolerance: f64) -> SectorGrid {
        assert!(d >= 1, "division count must be at least 1");
        let count = sector_count(d);
        let neighbors = build_neighbor_table(d);
        let mut dependents: Vec<Vec<(u32, u8)>> = vec![Vec::new(); count];
        for (i, ring) in neighbors.iter().enumerate() {
            for (k, &j) in ring.iter().enumerate() {
                let Some(j) = j else { continue };
                let deps = &mut dependents[j as usize];
                match deps.iter_mut().find(|(x, _)| *x == i as u32) {
                    Some((_, mask)) => *mask |= SLOT_QUADRANTS[k],
                    None => deps.push((i as u32, SLOT_QUADRANTS[k])),
                }
            }
        }
        SectorGrid {
            d,
            center,
            tolerance,
            maxima: vec![center; count],
            max_dist_sq: vec![0.0; count],
            synthetic: vec![true; count],
            max_proj: vec![(0.0, 0.0); count],
            neighbors,
            dependents,
            caps: vec![[QuadrantCap::default(); 4]; count],
            stale: vec![ALL_STALE; count],
            suspicious: Vec::new(),
        }
    }

    /// Grid centered on the polyhedron with seeded maxima.
    pub fn seeded(poly: &InitialPolyhedron, d: usize) -> SectorGrid {
        let mut grid = SectorGrid::new(poly.center, d, poly.tolerance);
        grid.init_maxima(poly);
        grid
    }

    pub fn divisions(&self) -> usize {
        self.d
    }

    pub fn center(&self) -> Point3 {
        self.center
    }

    pub fn sector_count(&self) -> usize {
        self.maxima.len()
    }

    pub fn maximum(&self, sector: usize) -> Point3 {
        self.maxima[sector]
    }

    pub fn max_dist_sq(&self, sector: usize) -> f64 {
        self.max_dist_sq[sector]
    }

    /// Whether the sector's maximum is still the synthetic seed.
    pub fn is_synthetic(&self, sector: usize) -> bool {
        self.synthetic[sector]
    }

    pub fn neighbors(&self) -> &NeighborTable {
        &self.neighbors
    }

    /// Stored suspicious points with their sector index.
    pub fn suspicious(&self) -> &[(Point3, u32)] {
        &self.suspicious
    }

    /// Seeds every sector with the point where the ray from the center through
    /// the sector's midpoint leaves the polyhedron.
    pub fn init_maxima(&mut self, poly: &InitialPolyhedron) {
        for s in 0..self.maxima.len() {
            let id = SectorId::from_linear(s, self.d);
            let dir = id.axis_direction(self.d);
            let mut t = f64::INFINITY;
            for f in &poly.faces {
                let rate = f.normal.dot(dir);
                if rate > 0.0 {
                    t = t.min(-f.signed_eval(self.center) / rate);
                }
            }
            debug_assert!(t.is_finite() && t > 0.0);
            let seed = self.center + dir * t;
            let (s1, s2) = id.midpoint_coords(self.d);
            self.maxima[s] = seed;
            self.max_dist_sq[s] = seed.dist_sq(self.center);
            self.max_proj[s] = (s1, s2);
            self.synthetic[s] = true;
        }
        self.stale.iter_mut().for_each(|x| *x = ALL_STALE);
    }

    /// Sector index and in-face coordinates of `p`.
    #[inline]
    fn locate(&self, p: Point3) -> Result<(usize, f64, f64), FilterError> {
        let v = p - self.center;
        if v.norm_sq() <= EPS_MERGE * EPS_MERGE {
            return Err(FilterError::ZeroDirection);
        }
        let (face, s, t) = project(v);
        let id = SectorId {
            face,
            u: cell(s, self.d),
            v: cell(t, self.d),
        };
        Ok((id.linear(self.d), s, t))
    }

    #[inline]
    fn tie_band(max_dist_sq: f64) -> f64 {
        EPS_MERGE * max_dist_sq.max(EPS_MERGE)
    }

    pub fn offer_point(&mut self, p: Point3) -> Result<Offer, FilterError> {
        let (s, s1, s2) = self.locate(p)?;
        let d2 = p.dist_sq(self.center);
        let m2 = self.max_dist_sq[s];
        let band = Self::tie_band(m2);
        if d2 > m2 + band {
            self.set_maximum(s, p, d2, (s1, s2));
            self.suspicious.push((p, s as u32));
            return Ok(Offer::NewMaximum);
        }
        if d2 < m2 - band && self.cap_contains(s, p, s1, s2) {
            return Ok(Offer::Discarded);
        }
        self.suspicious.push((p, s as u32));
        Ok(Offer::Kept)
    }

    fn set_maximum(&mut self, s: usize, p: Point3, d2: f64, proj: (f64, f64)) {
        self.maxima[s] = p;
        self.max_dist_sq[s] = d2;
        self.max_proj[s] = proj;
        self.synthetic[s] = false;
        self.invalidate(s);
    }

    fn invalidate(&mut self, s: usize) {
        self.stale[s] = ALL_STALE;
        for &(j, mask) in &self.dependents[s] {
            self.stale[j as usize] |= mask;
        }
    }

    #[inline]
    fn quadrant(&self, s: usize, s1: f64, s2: f64) -> usize {
        let (a1, a2) = self.max_proj[s];
        match (s1 >= a1, s2 >= a2) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        }
    }

    fn rebuild_cap(&mut self, s: usize, q: usize) {
        let c = self.center;
        let a = self.maxima[s];
        let ring = &self.neighbors[s];
        let at = |k: usize| ring[k].map(|j| self.maxima[j as usize]);
        let (u, w, v) = (at(2 * q), at(2 * q + 1), at((2 * q + 2) % 8));
        let mut cap = QuadrantCap::default();
        if let (Some(u), Some(v)) = (u, v) {
            let pair = w.and_then(|w| Some([Tetra::new(c, a, u, w)?, Tetra::new(c, a, w, v)?]));
            match pair {
                Some(pair) => cap.tetras = pair,
                None => cap.tetras[0] = Tetra::new(c, a, u, v).unwrap_or(Tetra::EMPTY),
            }
        }
        self.caps[s][q] = cap;
        self.stale[s] &= !(1 << q);
    }

    /// True when `p` (in sector `s`, projected at `(s1, s2)`) lies strictly
    /// inside the cap tetrahedra of its quadrant.
    #[inline]
    fn cap_contains(&mut self, s: usize, p: Point3, s1: f64, s2: f64) -> bool {
        let q = self.quadrant(s, s1, s2);
        if self.stale[s] & (1 << q) != 0 {
            self.rebuild_cap(s, q);
        }
        let tol = self.tolerance;
        self.caps[s][q]
            .tetras
            .iter()
            .any(|t| t.strictly_contains(p, tol))
    }

    /// Stores a point without testing it; used for points the grid cannot
    /// place (coincident with the center).
    pub fn keep_unsorted(&mut self, p: Point3) {
        self.suspicious.push((p, 0));
    }

    /// Re-tests every stored point against the final maxima and returns the
    /// survivors. Synthetic seeds are never stored, so never returned.
    pub fn recheck(&mut self) -> Vec<Point3> {
        let stored = std::mem::take(&mut self.suspicious);
        let mut survivors = Vec::with_capacity(stored.len() / 2 + 8);
        for &(p, s) in &stored {
            let s = s as usize;
            let keep = match self.locate(p) {
                Ok((_, s1, s2)) => {
                    let d2 = p.dist_sq(self.center);
                    let m2 = self.max_dist_sq[s];
                    d2 >= m2 - Self::tie_band(m2) || !self.cap_contains(s, p, s1, s2)
                }
                Err(_) => true,
            };
            if keep {
                survivors.push(p);
            }
        }
        self.suspicious = stored;
        survivors
    }

    /// Folds another grid over the same center and division count into this
    /// one: farther maxima win and stored points are pooled.
    pub fn merge(&mut self, other: SectorGrid) {
        assert_eq!(self.d, other.d, "grids must share the division count");
        assert_eq!(self.center, other.center, "grids must share the center");
        for s in 0..self.maxima.len() {
            if other.max_dist_sq[s] > self.max_dist_sq[s] {
                self.maxima[s] = other.maxima[s];
                self.max_dist_sq[s] = other.max_dist_sq[s];
                self.max_proj[s] = other.max_proj[s];
                self.synthetic[s] = other.synthetic[s];
                self.invalidate(s);
            }
        }
        self.suspicious.extend(other.suspicious);
    }
}
