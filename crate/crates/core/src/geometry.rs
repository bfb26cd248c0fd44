//! Points, oriented planes, the orientation predicate and the hull mesh type.
//!
//! All predicates are plain floating point with explicit tolerances; there is
//! no adaptive or exact arithmetic here.

use std::ops::{Add, Div, Index, Mul, Neg, Sub};

use thiserror::Error;

/// Collinearity threshold, relative to the product of the two edge lengths.
pub const EPS_DEGENERATE: f64 = 1e-12;
/// Orientation threshold, relative to the cube of the longest pairwise distance.
pub const EPS_ORIENT: f64 = 1e-12;
/// Absolute plane-distance tolerance for unit-normal planes.
pub const EPS_PLANE: f64 = 1e-9;
/// Absolute containment tolerance for hull faces.
pub const EPS_HULL: f64 = 1e-9;
/// Two points closer than this are the same point.
pub const EPS_MERGE: f64 = 1e-12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GeometryError {
    #[error("triangle is degenerate (collinear vertices)")]
    DegenerateTriangle,
}

/// A point (or free vector) in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist_sq(self, o: Point3) -> f64 {
        (self - o).norm_sq()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Lexicographic comparison on (x, y, z) using the IEEE total order.
    pub fn lex_cmp(&self, o: &Point3) -> std::cmp::Ordering {
        self.x
            .total_cmp(&o.x)
            .then(self.y.total_cmp(&o.y))
            .then(self.z.total_cmp(&o.z))
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl Index<usize> for Point3 {
    type Output = f64;

    #[inline]
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Point3 index out of range: {i}"),
        }
    }
}

impl Add for Point3 {
    type Output = Point3;
    #[inline]
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    #[inline]
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    #[inline]
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    #[inline]
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    #[inline]
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Implicit plane `normal · x + offset = 0` with a unit normal, so that
/// [`OrientedPlane::signed_eval`] is a signed Euclidean distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedPlane {
    pub normal: Point3,
    pub offset: f64,
}

impl OrientedPlane {
    /// Builds a plane from an arbitrary nonzero normal and a point on it.
    /// Returns `None` for a zero (or non-finite) normal.
    pub fn from_normal_and_point(normal: Point3, on_plane: Point3) -> Option<Self> {
        let len = normal.norm();
        if !(len > 0.0) || !len.is_finite() {
            return None;
        }
        let n = normal / len;
        Some(OrientedPlane {
            normal: n,
            offset: -n.dot(on_plane),
        })
    }

    #[inline]
    pub fn signed_eval(&self, p: Point3) -> f64 {
        self.normal.dot(p) + self.offset
    }

    pub fn flipped(self) -> Self {
        OrientedPlane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }
}

/// Evaluates `F(p) = n · p + d`.
#[inline]
pub fn signed_eval(plane: &OrientedPlane, p: Point3) -> f64 {
    plane.signed_eval(p)
}

/// Plane through `a`, `b`, `c`, oriented so that `inside_ref` lies on the
/// non-positive side.
pub fn plane_through(
    a: Point3,
    b: Point3,
    c: Point3,
    inside_ref: Point3,
) -> Result<OrientedPlane, GeometryError> {
    let ab = b - a;
    let ac = c - a;
    let n = ab.cross(ac);
    let scale = ab.norm() * ac.norm();
    if !(n.norm() > EPS_DEGENERATE * scale) || scale == 0.0 {
        return Err(GeometryError::DegenerateTriangle);
    }
    let plane =
        OrientedPlane::from_normal_and_point(n, a).ok_or(GeometryError::DegenerateTriangle)?;
    if plane.signed_eval(inside_ref) > 0.0 {
        Ok(plane.flipped())
    } else {
        Ok(plane)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Negative,
    Zero,
    Positive,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Negative => -1,
            Orientation::Zero => 0,
            Orientation::Positive => 1,
        }
    }
}

/// Raw determinant of `(b − a, c − a, p − a)`.
#[inline]
pub fn orient3d_det(a: Point3, b: Point3, c: Point3, p: Point3) -> f64 {
    (b - a).cross(c - a).dot(p - a)
}

/// Sign of [`orient3d_det`]; positive when `p` lies on the side the
/// right-handed normal of triangle `abc` points to. Zero within a
/// tolerance relative to the cube of the largest pairwise distance.
pub fn orient3d(a: Point3, b: Point3, c: Point3, p: Point3) -> Orientation {
    let det = orient3d_det(a, b, c, p);
    // Longest pairwise distance, cubed; symmetric in all four arguments.
    let len = [b - a, c - a, p - a, c - b, p - b, p - c]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if det.abs() <= EPS_ORIENT * len * len * len {
        Orientation::Zero
    } else if det > 0.0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

/// Closed triangulated polyhedron. Faces are index triples into `vertices`,
/// wound counter-clockwise when seen from outside.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HullMesh {
    pub vertices: Vec<Point3>,
    pub faces: Vec<[usize; 3]>,
}

impl HullMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Number of distinct undirected edges.
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn centroid(&self) -> Point3 {
        if self.vertices.is_empty() {
            return Point3::ORIGIN;
        }
        let sum = self
            .vertices
            .iter()
            .fold(Point3::ORIGIN, |acc, &v| acc + v);
        sum / self.vertices.len() as f64
    }

    /// Unnormalized right-handed normal of face `i`.
    pub fn face_normal(&self, i: usize) -> Point3 {
        let [a, b, c] = self.faces[i];
        let (a, b, c) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        (b - a).cross(c - a)
    }

    pub fn face_plane(&self, i: usize) -> Option<OrientedPlane> {
        let [a, ..] = self.faces[i];
        OrientedPlane::from_normal_and_point(self.face_normal(i), self.vertices[a])
    }

    /// Vertices sorted lexicographically, for set comparisons.
    pub fn sorted_vertices(&self) -> Vec<Point3> {
        let mut v = self.vertices.clone();
        v.sort_by(Point3::lex_cmp);
        v
    }
}

/// Compares two point sets as sets, matching points within `tol` per coordinate.
pub fn same_point_set(a: &[Point3], b: &[Point3], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(Point3::lex_cmp);
    b.sort_by(Point3::lex_cmp);
    if a.iter()
        .zip(&b)
        .all(|(p, q)| (*p - *q).max_abs() <= tol)
    {
        return true;
    }
    // Lexicographic order can interleave near-equal points; fall back to matching.
    let mut used = vec![false; b.len()];
    a.iter().all(|p| {
        match b
            .iter()
            .enumerate()
            .position(|(j, q)| !used[j] && (*p - *q).max_abs() <= tol)
        {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plane(n: [f64; 3], d: f64) -> OrientedPlane {
        OrientedPlane {
            normal: n.into(),
            offset: d,
        }
    }

    #[test]
    fn signed_eval_examples() {
        assert_eq!(signed_eval(&plane([0., 0., 1.], 0.), Point3::new(5., 7., 0.)), 0.0);
        assert_eq!(signed_eval(&plane([0., 0., 1.], 0.), Point3::new(0., 0., 2.)), 2.0);
        assert_eq!(signed_eval(&plane([1., 1., 1.], -3.), Point3::new(1., 1., 1.)), 0.0);
    }

    #[test]
    fn plane_through_unit_simplex() {
        let p = plane_through(
            Point3::new(1., 0., 0.),
            Point3::new(0., 1., 0.),
            Point3::new(0., 0., 1.),
            Point3::ORIGIN,
        )
        .unwrap();
        let k = 1.0 / 3f64.sqrt();
        assert!((p.normal - Point3::new(k, k, k)).max_abs() < 1e-15);
        assert!(p.signed_eval(Point3::ORIGIN) < 0.0);
    }

    #[test]
    fn plane_through_collinear() {
        let r = plane_through(
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(2., 0., 0.),
            Point3::new(0., 5., 0.),
        );
        assert_eq!(r, Err(GeometryError::DegenerateTriangle));
    }

    #[test]
    fn plane_through_flips_for_positive_ref() {
        let (a, b, c) = (
            Point3::new(0.3, -0.2, 0.1),
            Point3::new(1.1, 0.4, -0.5),
            Point3::new(-0.7, 0.9, 0.2),
        );
        let raw = (b - a).cross(c - a);
        let r = a + raw; // on the positive side of the raw orientation
        let p = plane_through(a, b, c, r).unwrap();
        let unit = raw / raw.norm();
        assert!((p.normal + unit).max_abs() < 1e-15);
        assert!(p.signed_eval(r) <= 0.0);
    }

    #[test]
    fn orient3d_examples() {
        let o = Point3::ORIGIN;
        let ex = Point3::new(1., 0., 0.);
        let ey = Point3::new(0., 1., 0.);
        assert_eq!(orient3d(o, ex, ey, Point3::new(0., 0., 1.)), Orientation::Positive);
        assert_eq!(orient3d(o, ex, ey, Point3::new(3., -2., 0.)), Orientation::Zero);
        assert_eq!(orient3d(o, ey, ex, Point3::new(0., 0., 1.)), Orientation::Negative);
    }

    #[test]
    fn euler_of_tetrahedron() {
        let m = HullMesh {
            vertices: vec![
                Point3::new(0., 0., 0.),
                Point3::new(1., 0., 0.),
                Point3::new(0., 1., 0.),
                Point3::new(0., 0., 1.),
            ],
            faces: vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
        };
        assert_eq!(m.edge_count(), 6);
        assert_eq!(m.euler_characteristic(), 2);
    }

    fn pt() -> impl Strategy<Value = Point3> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y, z)| Point3::new(x, y, z))
    }

    proptest! {
        #[test]
        fn signed_eval_is_affine(n in pt(), d in -5.0..5.0f64, p in pt(), q in pt(), alpha in 0.0..=1.0f64) {
            prop_assume!(n.norm() > 1e-3);
            let pl = OrientedPlane::from_normal_and_point(n, Point3::ORIGIN).map(|mut pl| { pl.offset = d; pl }).unwrap();
            let lhs = pl.signed_eval(p * alpha + q * (1.0 - alpha));
            let rhs = alpha * pl.signed_eval(p) + (1.0 - alpha) * pl.signed_eval(q);
            let scale = 1.0 + lhs.abs().max(rhs.abs()) + p.norm() + q.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * scale);
        }

        #[test]
        fn plane_through_contains_vertices(a in pt(), b in pt(), c in pt(), r in pt()) {
            if let Ok(pl) = plane_through(a, b, c, r) {
                for v in [a, b, c] {
                    prop_assert!(pl.signed_eval(v).abs() <= EPS_PLANE * (1.0 + v.norm()));
                }
                prop_assert!(pl.signed_eval(r) <= EPS_PLANE * (1.0 + r.norm()));
            }
        }

        #[test]
        fn orient3d_antisymmetric(a in pt(), b in pt(), c in pt(), p in pt()) {
            let s = orient3d(a, b, c, p).sign();
            prop_assert_eq!(orient3d(b, a, c, p).sign(), -s);
            prop_assert_eq!(orient3d(a, c, b, p).sign(), -s);
            prop_assert_eq!(orient3d(c, b, a, p).sign(), -s);
        }
    }
}
