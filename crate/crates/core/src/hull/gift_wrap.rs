//! Brute-force gift wrapping, used as a reference engine in tests.
//!
//! Each facet is found by pivoting a plane around an edge of an already
//! known facet until no point lies outside it. All points within the hull
//! tolerance of that plane are collected and their planar hull becomes the
//! facet, so coplanar regions are handled as one polygon and never produce
//! conflicting triangulations. Cost is O(N·F).

use std::collections::{HashSet, VecDeque};

use crate::geometry::{HullMesh, Point3};

use super::quickhull::{hull_tolerance, initial_simplex};
use super::HullError;

/// Inputs larger than this are refused by [`gift_wrap`].
pub const DEFAULT_ORACLE_CAP: usize = 5000;

/// Hull of `points` by gift wrapping; refuses more than
/// [`DEFAULT_ORACLE_CAP`] points.
pub fn gift_wrap(points: &[Point3]) -> Result<HullMesh, HullError> {
    gift_wrap_with_cap(points, DEFAULT_ORACLE_CAP)
}

pub fn gift_wrap_with_cap(points: &[Point3], cap: usize) -> Result<HullMesh, HullError> {
    if points.len() > cap {
        return Err(HullError::OracleCapExceeded { n: points.len(), cap });
    }
    if points.len() < 4 {
        return Err(HullError::DegenerateInput(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(HullError::NonFinite(i));
    }
    let tol = hull_tolerance(points);
    initial_simplex(points, tol)?;

    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    Wrapper { pts: &pts, tol }.run()
}

struct Wrapper<'a> {
    pts: &'a [Point3],
    tol: f64,
}

impl Wrapper<'_> {
    /// Finds `p` such that every point is on or behind the plane of the
    /// counter-clockwise triangle `(u, v, p)`. `v` may be a synthetic point
    /// off the input.
    fn pivot(&self, u: usize, pu: Point3, pv: Point3) -> Option<(Point3, usize)> {
        let axis = pv - pu;
        let axis_len = axis.norm();
        let mut best: Option<(usize, Point3)> = None;
        for (q, &pq) in self.pts.iter().enumerate() {
            if q == u || axis.cross(pq - pu).norm() / axis_len <= self.tol {
                continue;
            }
            match best {
                None => best = Some((q, unit_normal(pu, pv, pq))),
                Some((_, n)) => {
                    if n.dot(pq - pu) > self.tol {
                        best = Some((q, unit_normal(pu, pv, pq)));
                    }
                }
            }
        }
        best.map(|(q, n)| (n, q))
    }

    /// Counter-clockwise (seen from outside) polygon of all points within
    /// the tolerance of the plane through `anchor` with unit normal `n`.
    fn facet(&self, anchor: Point3, n: Point3) -> Vec<usize> {
        let e1 = if n.x.abs() < 0.9 {
            Point3::new(1.0, 0.0, 0.0)
        } else {
            Point3::new(0.0, 1.0, 0.0)
        };
        let e1 = {
            let t = e1 - n * n.dot(e1);
            t / t.norm()
        };
        let e2 = n.cross(e1);
        let mut flat: Vec<(f64, f64, usize)> = self
            .pts
            .iter()
            .enumerate()
            .filter(|(_, &q)| n.dot(q - anchor).abs() <= self.tol)
            .map(|(i, &q)| {
                let r = q - anchor;
                (r.dot(e1), r.dot(e2), i)
            })
            .collect();
        flat.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        monotone_chain(&flat, self.tol)
    }

    fn run(&self) -> Result<HullMesh, HullError> {
        // The lexicographically smallest point is a hull vertex and the
        // plane x = a.x supports the set; pivot around a vertical axis there.
        let a = 0;
        let pa = self.pts[a];
        let (n0, _) = self
            .pivot(a, pa, pa + Point3::new(0.0, 0.0, 1.0))
            .ok_or_else(|| HullError::DegenerateInput("all points are collinear".into()))?;
        let first = self.facet(pa, n0);
        let first = if first.len() >= 3 {
            first
        } else {
            // The supporting set is an edge from `a`; pivot around it.
            let b = self
                .pts
                .iter()
                .enumerate()
                .filter(|(_, &q)| n0.dot(q - pa).abs() <= self.tol)
                .max_by(|x, y| x.1.dist_sq(pa).total_cmp(&y.1.dist_sq(pa)))
                .map(|(i, _)| i)
                .ok_or_else(|| HullError::Internal("empty support set".into()))?;
            let (n1, _) = self
                .pivot(a, pa, self.pts[b])
                .ok_or_else(|| HullError::Internal("pivot found no point".into()))?;
            self.facet(pa, n1)
        };
        if first.len() < 3 {
            return Err(HullError::Internal("initial facet is not a polygon".into()));
        }

        let mut polygons: Vec<Vec<usize>> = Vec::new();
        let mut emitted: HashSet<(usize, usize)> = HashSet::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        self.emit(first, &mut polygons, &mut emitted, &mut queue)?;

        while let Some((u, v)) = queue.pop_front() {
            if emitted.contains(&(v, u)) {
                continue;
            }
            let (n, _) = self
                .pivot(v, self.pts[v], self.pts[u])
                .ok_or_else(|| HullError::Internal("pivot found no point".into()))?;
            let poly = self.facet(self.pts[v], n);
            let closes = (0..poly.len()).any(|i| poly[i] == v && poly[(i + 1) % poly.len()] == u);
            if !closes {
                return Err(HullError::Internal(format!(
                    "facet across edge ({u}, {v}) does not contain it"
                )));
            }
            self.emit(poly, &mut polygons, &mut emitted, &mut queue)?;
        }
        Ok(self.mesh(&polygons))
    }

    fn emit(
        &self,
        poly: Vec<usize>,
        polygons: &mut Vec<Vec<usize>>,
        emitted: &mut HashSet<(usize, usize)>,
        queue: &mut VecDeque<(usize, usize)>,
    ) -> Result<(), HullError> {
        let k = poly.len();
        for i in 0..k {
            let e = (poly[i], poly[(i + 1) % k]);
            if !emitted.insert(e) {
                return Err(HullError::Internal(format!("edge {e:?} emitted twice")));
            }
            if !emitted.contains(&(e.1, e.0)) {
                queue.push_back(e);
            }
        }
        polygons.push(poly);
        Ok(())
    }

    fn mesh(&self, polygons: &[Vec<usize>]) -> HullMesh {
        let mut remap = vec![usize::MAX; self.pts.len()];
        let mut vertices = Vec::new();
        let mut id = |i: usize| {
            if remap[i] == usize::MAX {
                remap[i] = vertices.len();
                vertices.push(self.pts[i]);
            }
            remap[i]
        };
        let mut faces = Vec::new();
        for poly in polygons {
            let root = id(poly[0]);
            for w in poly[1..].windows(2) {
                faces.push([root, id(w[0]), id(w[1])]);
            }
        }
        HullMesh { vertices, faces }
    }
}

fn unit_normal(a: Point3, b: Point3, c: Point3) -> Point3 {
    let n = (b - a).cross(c - a);
    n / n.norm()
}

/// Strict convex hull of sorted 2D points, counter-clockwise. A point
/// within `tol` of the line through its neighbors is dropped.
fn monotone_chain(pts: &[(f64, f64, usize)], tol: f64) -> Vec<usize> {
    let turn = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        let cross = (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
        let len = ((b.0 - o.0).powi(2) + (b.1 - o.1).powi(2)).sqrt();
        cross > tol * len
    };
    if pts.len() < 3 {
        return pts.iter().map(|p| p.2).collect();
    }
    let mut lower: Vec<&(f64, f64, usize)> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && !turn(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&(f64, f64, usize)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|p| p.2).collect()
}
