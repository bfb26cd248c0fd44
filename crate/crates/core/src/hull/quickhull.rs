//! QuickHull with conflict lists and an explicit work stack.
//!
//! The initial simplex uses the min-x and max-x points, then the min-y point
//! (or, if that one is collinear with the first two, the point farthest from
//! their line) and finally the point farthest from that triangle's plane.
//! Each face keeps the points outside it; the farthest one is added next,
//! the faces it sees are removed and the horizon is coned to it.

use std::collections::HashMap;

use crate::geometry::{orient3d, HullMesh, OrientedPlane, Orientation, Point3, EPS_HULL, EPS_MERGE};

use super::HullError;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Face {
    v: [u32; 3],
    /// `adj[i]` shares edge `v[i] → v[(i + 1) % 3]`.
    adj: [u32; 3],
    plane: OrientedPlane,
    outside: Vec<u32>,
    furthest: u32,
    furthest_dist: f64,
    alive: bool,
    visited: u32,
}

impl Face {
    fn new(points: &[Point3], v: [u32; 3]) -> Face {
        let [a, b, c] = v.map(|i| points[i as usize]);
        let normal = (b - a).cross(c - a);
        let centroid = (a + b + c) / 3.0;
        let plane = OrientedPlane::from_normal_and_point(normal, centroid).unwrap_or(OrientedPlane {
            normal: Point3::ORIGIN,
            offset: 0.0,
        });
        Face {
            v,
            adj: [NONE; 3],
            plane,
            outside: Vec::new(),
            furthest: NONE,
            furthest_dist: 0.0,
            alive: true,
            visited: 0,
        }
    }

    #[inline]
    fn push_outside(&mut self, idx: u32, dist: f64) {
        if dist > self.furthest_dist || self.furthest == NONE {
            self.furthest = idx;
            self.furthest_dist = dist;
        }
        self.outside.push(idx);
    }

    #[inline]
    fn edge_slot(&self, from: u32, to: u32) -> Option<usize> {
        (0..3).find(|&i| self.v[i] == from && self.v[(i + 1) % 3] == to)
    }
}

/// Containment tolerance scaled to the coordinate magnitude.
pub(crate) fn hull_tolerance(points: &[Point3]) -> f64 {
    let scale = points.iter().map(|p| p.max_abs()).fold(0.0, f64::max);
    EPS_HULL * scale.max(1.0)
}

pub(crate) fn initial_simplex(points: &[Point3], tol: f64) -> Result<[u32; 4], HullError> {
    let argmin = |f: &dyn Fn(&Point3) -> f64| -> usize {
        let mut best = 0;
        for (i, p) in points.iter().enumerate() {
            if f(p) < f(&points[best]) {
                best = i;
            }
        }
        best
    };
    let a = argmin(&|p| p.x);
    let mut b = argmin(&|p| -p.x);
    if points[a].dist_sq(points[b]) <= EPS_MERGE * EPS_MERGE {
        // All x equal: take the farthest point from a instead.
        b = argmin(&|p| -p.dist_sq(points[a]));
        if points[a].dist_sq(points[b]) <= tol * tol {
            return Err(HullError::DegenerateInput("all points coincide".into()));
        }
    }
    let (pa, pb) = (points[a], points[b]);
    let ab = pb - pa;
    let line_dist = |p: &Point3| ab.cross(*p - pa).norm() / ab.norm();
    let mut c = argmin(&|p| p.y);
    if line_dist(&points[c]) <= tol {
        c = argmin(&|p| -line_dist(p));
        if line_dist(&points[c]) <= tol {
            return Err(HullError::DegenerateInput("all points are collinear".into()));
        }
    }
    let pc = points[c];
    let n = ab.cross(pc - pa);
    let n = n / n.norm();
    let d = argmin(&|p| -(n.dot(*p - pa)).abs());
    if n.dot(points[d] - pa).abs() <= tol
        || orient3d(pa, pb, pc, points[d]) == Orientation::Zero
    {
        return Err(HullError::DegenerateInput("all points are coplanar".into()));
    }
    Ok([a as u32, b as u32, c as u32, d as u32])
}

/// Convex hull of `points`. Only strict extreme points (beyond the
/// containment tolerance) become vertices.
pub fn quickhull(points: &[Point3]) -> Result<HullMesh, HullError> {
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
    let simplex = initial_simplex(points, tol)?;
    let mut hull = Builder::new(points, tol, simplex);
    hull.run()?;
    Ok(hull.into_mesh())
}

struct Builder<'a> {
    points: &'a [Point3],
    /// Points closer than this to the hull are dropped.
    tol: f64,
    /// A face is visible from the eye beyond this distance. Kept far below
    /// `tol` so concave edges cannot pile up across insertions.
    visible_tol: f64,
    faces: Vec<Face>,
    stamp: u32,
}

impl<'a> Builder<'a> {
    fn new(points: &'a [Point3], tol: f64, s: [u32; 4]) -> Builder<'a> {
        let [a, b, c, d] = s;
        // Orient abc so that d is behind it.
        let (b, c) = if orient3d(points[a as usize], points[b as usize], points[c as usize], points[d as usize])
            == Orientation::Positive
        {
            (c, b)
        } else {
            (b, c)
        };
        let mut faces = vec![
            Face::new(points, [a, b, c]),
            Face::new(points, [a, d, b]),
            Face::new(points, [b, d, c]),
            Face::new(points, [c, d, a]),
        ];
        link_all(&mut faces, &[0, 1, 2, 3]);

        let mut builder = Builder {
            points,
            tol,
            visible_tol: tol * (EPS_MERGE / EPS_HULL),
            faces,
            stamp: 0,
        };
        let all: Vec<u32> = (0..points.len() as u32)
            .filter(|i| !s.contains(i))
            .collect();
        builder.assign(&all, &[0, 1, 2, 3]);
        builder
    }

    /// Hands each point to the first candidate face it is outside of;
    /// points outside none of them are interior and dropped.
    fn assign(&mut self, pts: &[u32], candidates: &[u32]) {
        for &i in pts {
            let p = self.points[i as usize];
            for &f in candidates {
                let face = &mut self.faces[f as usize];
                let dist = face.plane.signed_eval(p);
                if dist > self.tol {
                    face.push_outside(i, dist);
                    break;
                }
            }
        }
    }

    fn run(&mut self) -> Result<(), HullError> {
        let mut stack: Vec<u32> = (0..self.faces.len() as u32).collect();
        while let Some(f) = stack.pop() {
            let face = &self.faces[f as usize];
            if !face.alive || face.outside.is_empty() {
                continue;
            }
            let eye = face.furthest;
            let new_faces = self.add_point(f, eye)?;
            stack.extend(new_faces.iter().filter(|&&nf| !self.faces[nf as usize].outside.is_empty()));
        }
        Ok(())
    }

    fn add_point(&mut self, start: u32, eye: u32) -> Result<Vec<u32>, HullError> {
        let p = self.points[eye as usize];
        self.stamp += 1;
        let stamp = self.stamp;

        // Visible region by flood fill; horizon edges are those whose
        // neighbor is not visible, stored as (from, to, outer face).
        let mut visible = vec![start];
        let mut horizon: Vec<(u32, u32, u32)> = Vec::new();
        self.faces[start as usize].visited = stamp;
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            for e in 0..3 {
                let g = self.faces[f as usize].adj[e];
                let gf = &self.faces[g as usize];
                if gf.visited == stamp {
                    continue;
                }
                if gf.plane.signed_eval(p) > self.visible_tol {
                    self.faces[g as usize].visited = stamp;
                    visible.push(g);
                } else {
                    let v = self.faces[f as usize].v;
                    horizon.push((v[e], v[(e + 1) % 3], g));
                }
            }
        }
        // A face reached through a later-visible neighbor may have been
        // recorded as a horizon neighbor before it was marked visible.
        horizon.retain(|&(_, _, g)| self.faces[g as usize].visited != stamp);

        let mut orphans: Vec<u32> = Vec::new();
        for &f in &visible {
            let face = &mut self.faces[f as usize];
            face.alive = false;
            orphans.extend(face.outside.drain(..).filter(|&i| i != eye));
        }

        let mut new_ids = Vec::with_capacity(horizon.len());
        let mut by_start: HashMap<u32, u32> = HashMap::with_capacity(horizon.len());
        for &(a, b, outer) in &horizon {
            let id = self.faces.len() as u32;
            let mut nf = Face::new(self.points, [a, b, eye]);
            nf.adj[0] = outer;
            self.faces.push(nf);
            let slot = self.faces[outer as usize]
                .edge_slot(b, a)
                .ok_or_else(|| HullError::Internal("horizon edge without twin".into()))?;
            self.faces[outer as usize].adj[slot] = id;
            if by_start.insert(a, id).is_some() {
                return Err(HullError::Internal("horizon is not a simple cycle".into()));
            }
            new_ids.push(id);
        }
        for &id in &new_ids {
            let b = self.faces[id as usize].v[1];
            // Edge b → eye is shared with the new face starting at b;
            // edge eye → a with the new face ending at a.
            let next = *by_start
                .get(&b)
                .ok_or_else(|| HullError::Internal("open horizon".into()))?;
            self.faces[id as usize].adj[1] = next;
            self.faces[next as usize].adj[2] = id;
        }

        self.assign(&orphans, &new_ids);
        Ok(new_ids)
    }

    fn into_mesh(self) -> HullMesh {
        let mut remap: HashMap<u32, usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut faces = Vec::new();
        for f in self.faces.iter().filter(|f| f.alive) {
            let tri = f.v.map(|i| {
                *remap.entry(i).or_insert_with(|| {
                    vertices.push(self.points[i as usize]);
                    vertices.len() - 1
                })
            });
            faces.push(tri);
        }
        HullMesh { vertices, faces }
    }
}

/// Links adjacency among a closed set of faces by matching twin edges.
fn link_all(faces: &mut [Face], ids: &[u32]) {
    for &f in ids {
        for e in 0..3 {
            let (from, to) = (faces[f as usize].v[e], faces[f as usize].v[(e + 1) % 3]);
            let twin = ids
                .iter()
                .copied()
                .find(|&g| g != f && faces[g as usize].edge_slot(to, from).is_some());
            faces[f as usize].adj[e] = twin.expect("closed simplex");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron() {
        let pts = vec![
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(0., 1., 0.),
            Point3::new(0., 0., 1.),
        ];
        let m = quickhull(&pts).unwrap();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.face_count(), 4);
        assert_eq!(m.edge_count(), 6);
    }

    #[test]
    fn cube_with_center() {
        let mut pts = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    pts.push(Point3::new(x, y, z));
                }
            }
        }
        pts.push(Point3::new(0.5, 0.5, 0.5));
        let m = quickhull(&pts).unwrap();
        assert_eq!(m.vertex_count(), 8);
        assert_eq!(m.face_count(), 12);
        assert!(!m.vertices.contains(&Point3::new(0.5, 0.5, 0.5)));
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn degenerate_inputs() {
        let p = Point3::new(1., 2., 3.);
        assert!(matches!(quickhull(&[p; 3]), Err(HullError::DegenerateInput(_))));
        assert!(matches!(quickhull(&[p; 10]), Err(HullError::DegenerateInput(_))));
        let line: Vec<Point3> = (0..10).map(|i| Point3::new(i as f64, i as f64, 0.)).collect();
        assert!(matches!(quickhull(&line), Err(HullError::DegenerateInput(_))));
        let plane: Vec<Point3> = (0..20)
            .map(|i| Point3::new((i % 5) as f64, (i / 5) as f64, 2.0))
            .collect();
        assert!(matches!(quickhull(&plane), Err(HullError::DegenerateInput(_))));
        let mut bad = plane.clone();
        bad.push(Point3::new(f64::NAN, 0., 0.));
        assert!(matches!(quickhull(&bad), Err(HullError::NonFinite(20))));
    }

    #[test]
    fn duplicates_are_harmless() {
        let mut pts = vec![
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(0., 1., 0.),
            Point3::new(0., 0., 1.),
        ];
        pts.extend(pts.clone());
        pts.push(Point3::new(0.1, 0.1, 0.1));
        let m = quickhull(&pts).unwrap();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.face_count(), 4);
    }
}
