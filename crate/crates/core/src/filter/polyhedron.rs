use crate::geometry::{orient3d_det, plane_through, OrientedPlane, Point3, EPS_DEGENERATE, EPS_PLANE};

use super::FilterError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
}

/// Convex polyhedron spanned by the estimated axis extremes. Every face plane
/// has its normal pointing out of the solid.
#[derive(Debug, Clone)]
pub struct InitialPolyhedron {
    pub vertices: Vec<Point3>,
    pub faces: Vec<OrientedPlane>,
    /// Average of the distinct vertices.
    pub center: Point3,
    /// Plane tolerance, scaled by the extent of the vertex set.
    pub tolerance: f64,
}

impl InitialPolyhedron {
    /// Inside when no face evaluates above the tolerance (boundary included).
    pub fn classify(&self, p: Point3) -> Location {
        if self.faces.iter().all(|f| f.signed_eval(p) <= self.tolerance) {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// True when `p` is below every face by more than the tolerance.
    #[inline]
    pub fn strictly_contains(&self, p: Point3) -> bool {
        self.faces.iter().all(|f| f.signed_eval(p) < -self.tolerance)
    }
}

pub fn classify_inside(poly: &InitialPolyhedron, p: Point3) -> Location {
    poly.classify(p)
}

/// Builds the inner polyhedron from the six extremes (min-x, max-x, min-y,
/// max-y, min-z, max-z).
///
/// The faces are every plane through three extremes that supports all of
/// them. When the extremes are in convex position this is exactly the eight
/// octant triangles `(x±, y±, z±)`; when they are not (or some coincide) it
/// still yields the true hull of the extremes, so the face set always
/// encloses a bounded convex region.
pub fn build_initial_polyhedron(extremes: &[Point3; 6]) -> Result<InitialPolyhedron, FilterError> {
    let mut vertices: Vec<Point3> = Vec::with_capacity(6);
    for &p in extremes {
        if !vertices.contains(&p) {
            vertices.push(p);
        }
    }
    if vertices.len() < 4 {
        return Err(FilterError::DegenerateExtremes);
    }
    let center = vertices.iter().fold(Point3::ORIGIN, |a, &v| a + v) / vertices.len() as f64;
    let extent = vertices
        .iter()
        .map(|v| (*v - center).max_abs())
        .fold(0.0, f64::max);
    if !volume_is_nonzero(&vertices, extent) {
        return Err(FilterError::DegenerateExtremes);
    }
    let tolerance = EPS_PLANE * extent.max(1.0);

    let mut faces: Vec<OrientedPlane> = Vec::with_capacity(8);
    let n = vertices.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Ok(plane) = plane_through(vertices[i], vertices[j], vertices[k], center) else {
                    continue;
                };
                let supports = vertices.iter().all(|&v| plane.signed_eval(v) <= tolerance);
                let duplicate = faces.iter().any(|f| {
                    f.normal.dot(plane.normal) > 1.0 - 1e-12
                        && (f.offset - plane.offset).abs() <= tolerance
                });
                if supports && !duplicate {
                    faces.push(plane);
                }
            }
        }
    }
    if faces.len() < 4 || faces.iter().any(|f| !(f.signed_eval(center) < -tolerance)) {
        return Err(FilterError::DegenerateExtremes);
    }
    Ok(InitialPolyhedron {
        vertices,
        faces,
        center,
        tolerance,
    })
}

fn volume_is_nonzero(vertices: &[Point3], extent: f64) -> bool {
    let n = vertices.len();
    let mut best = 0.0f64;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let det = orient3d_det(vertices[a], vertices[b], vertices[c], vertices[d]);
                    best = best.max(det.abs());
                }
            }
        }
    }
    // Side lengths are bounded by 2·extent.
    let len = 2.0 * extent;
    best > EPS_DEGENERATE * len * len * len
}
