use std::collections::{HashMap, HashSet};

use crate::geometry::{HullMesh, OrientedPlane, Point3, EPS_MERGE};

use super::quickhull::hull_tolerance;

/// Outcome of [`validate_hull`]. Violations are recorded, never raised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Input points lying outside some face plane by more than the tolerance.
    pub outside_points: Vec<usize>,
    /// Largest distance of an input point outside a face plane.
    pub worst_containment: f64,
    pub euler_characteristic: i64,
    /// Undirected edges not shared by exactly one pair of opposite half-edges.
    pub bad_edges: Vec<(usize, usize)>,
    /// Faces whose normal does not point away from the mesh centroid.
    pub inward_faces: Vec<usize>,
    /// Mesh vertices with no input point within the merge tolerance.
    pub foreign_vertices: Vec<usize>,
    /// Containment tolerance used.
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn containment_ok(&self) -> bool {
        self.outside_points.is_empty()
    }

    pub fn topology_ok(&self) -> bool {
        self.euler_characteristic == 2 && self.bad_edges.is_empty()
    }

    pub fn orientation_ok(&self) -> bool {
        self.inward_faces.is_empty()
    }

    pub fn vertices_ok(&self) -> bool {
        self.foreign_vertices.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.containment_ok() && self.topology_ok() && self.orientation_ok() && self.vertices_ok()
    }

    /// One-line summary of the failed checks, empty when valid.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.containment_ok() {
            parts.push(format!(
                "{} points outside (worst {:.3e})",
                self.outside_points.len(),
                self.worst_containment
            ));
        }
        if self.euler_characteristic != 2 {
            parts.push(format!("V-E+F = {}", self.euler_characteristic));
        }
        if !self.bad_edges.is_empty() {
            parts.push(format!("{} non-manifold edges", self.bad_edges.len()));
        }
        if !self.orientation_ok() {
            parts.push(format!("{} inward faces", self.inward_faces.len()));
        }
        if !self.vertices_ok() {
            parts.push(format!("{} vertices not in input", self.foreign_vertices.len()));
        }
        parts.join("; ")
    }
}

/// Checks `mesh` against `points`: containment, Euler characteristic and
/// edge manifoldness, outward normals, and vertices drawn from the input.
pub fn validate_hull(points: &[Point3], mesh: &HullMesh) -> ValidationReport {
    let mut report = ValidationReport {
        euler_characteristic: mesh.euler_characteristic(),
        tolerance: hull_tolerance(points),
        ..ValidationReport::default()
    };
    check_edges(mesh, &mut report);
    check_orientation(mesh, &mut report);
    check_containment(points, mesh, &mut report);
    check_vertices(points, mesh, &mut report);
    report
}

fn check_edges(mesh: &HullMesh, report: &mut ValidationReport) {
    let mut half: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &mesh.faces {
        for i in 0..3 {
            *half.entry((f[i], f[(i + 1) % 3])).or_default() += 1;
        }
    }
    let mut bad: HashSet<(usize, usize)> = HashSet::new();
    for (&(a, b), &count) in &half {
        if count != 1 || half.get(&(b, a)) != Some(&1) {
            bad.insert((a.min(b), a.max(b)));
        }
    }
    report.bad_edges = bad.into_iter().collect();
    report.bad_edges.sort_unstable();
}

fn check_orientation(mesh: &HullMesh, report: &mut ValidationReport) {
    let c = mesh.centroid();
    for (i, f) in mesh.faces.iter().enumerate() {
        let fc = (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
        if !(mesh.face_normal(i).dot(fc - c) > 0.0) {
            report.inward_faces.push(i);
        }
    }
}

fn check_containment(points: &[Point3], mesh: &HullMesh, report: &mut ValidationReport) {
    let c = mesh.centroid();
    // Planes re-expressed relative to the centroid: eval(p) = n · (p - c) + offset.
    let planes: Vec<OrientedPlane> = (0..mesh.face_count())
        .filter_map(|i| mesh.face_plane(i))
        .map(|pl| OrientedPlane {
            normal: pl.normal,
            offset: pl.signed_eval(c),
        })
        .collect();
    if planes.is_empty() {
        return;
    }
    // Points well inside the largest sphere around the centroid that fits
    // under every plane need no per-face test.
    let inner = planes.iter().map(|p| -p.offset).fold(f64::INFINITY, f64::min);
    let skip_sq = if inner > 0.0 { inner * inner } else { -1.0 };
    let tree = NormalTree::new(&planes);
    let tol = report.tolerance;
    let mut stack = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let q = p - c;
        if q.norm_sq() < skip_sq {
            continue;
        }
        // Faces that cannot beat this threshold are never evaluated; that
        // keeps both the outside test and the running maximum exact.
        let floor = report.worst_containment.max(0.0).min(tol);
        let worst = tree.max_eval(&planes, q, floor, &mut stack);
        if worst > tol {
            report.outside_points.push(i);
        }
        if worst > report.worst_containment {
            report.worst_containment = worst;
        }
    }
}

/// Bounding hierarchy over face planes. A node covers a contiguous range of
/// `order` and bounds every plane in it by
/// `eval(q) <= axis · q + radius·|q| + max_offset`.
struct NormalTree {
    order: Vec<u32>,
    nodes: Vec<Node>,
}

struct Node {
    axis: Point3,
    radius: f64,
    max_offset: f64,
    range: (u32, u32),
    children: Option<(u32, u32)>,
}

const LEAF_SIZE: usize = 8;

impl NormalTree {
    fn new(planes: &[OrientedPlane]) -> Self {
        let mut tree = NormalTree {
            order: (0..planes.len() as u32).collect(),
            nodes: Vec::new(),
        };
        tree.build(planes, 0, planes.len());
        tree
    }

    fn build(&mut self, planes: &[OrientedPlane], lo: usize, hi: usize) -> u32 {
        let ids = &mut self.order[lo..hi];
        let mut sum = Point3::ORIGIN;
        let (mut min, mut max) = (Point3::new(1.0, 1.0, 1.0), Point3::new(-1.0, -1.0, -1.0));
        let mut max_offset = f64::NEG_INFINITY;
        for &f in ids.iter() {
            let pl = &planes[f as usize];
            let n = pl.normal;
            sum = sum + n;
            min = Point3::new(min.x.min(n.x), min.y.min(n.y), min.z.min(n.z));
            max = Point3::new(max.x.max(n.x), max.y.max(n.y), max.z.max(n.z));
            max_offset = max_offset.max(pl.offset);
        }
        let axis = sum / ids.len() as f64;
        let radius = ids
            .iter()
            .map(|&f| (planes[f as usize].normal - axis).norm())
            .fold(0.0, f64::max);
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            axis,
            radius,
            max_offset,
            range: (lo as u32, hi as u32),
            children: None,
        });
        if hi - lo > LEAF_SIZE {
            let spread = max - min;
            let k = if spread.x >= spread.y && spread.x >= spread.z {
                0
            } else if spread.y >= spread.z {
                1
            } else {
                2
            };
            let mid = (hi - lo) / 2;
            ids.select_nth_unstable_by(mid, |&a, &b| {
                planes[a as usize].normal[k].total_cmp(&planes[b as usize].normal[k])
            });
            let left = self.build(planes, lo, lo + mid);
            let right = self.build(planes, lo + mid, hi);
            self.nodes[id as usize].children = Some((left, right));
        }
        id
    }

    /// Largest plane evaluation at `q` if it exceeds `floor`, otherwise
    /// some value not above `floor`.
    fn max_eval(&self, planes: &[OrientedPlane], q: Point3, floor: f64, stack: &mut Vec<u32>) -> f64 {
        let qn = q.norm();
        let mut best = f64::NEG_INFINITY;
        stack.clear();
        stack.push(0);
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            let bound = node.axis.dot(q) + node.radius * qn + node.max_offset;
            // Headroom for rounding in both the bound and the evaluations.
            let slack = 8.0 * f64::EPSILON * (qn + node.max_offset.abs() + 1.0);
            if bound + slack <= floor.max(best) {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &f in &self.order[node.range.0 as usize..node.range.1 as usize] {
                        best = best.max(planes[f as usize].signed_eval(q));
                    }
                }
            }
        }
        best
    }
}

fn check_vertices(points: &[Point3], mesh: &HullMesh, report: &mut ValidationReport) {
    let key = |p: &Point3| (p.x.to_bits(), p.y.to_bits(), p.z.to_bits());
    let exact: HashSet<_> = points.iter().map(key).collect();
    for (i, v) in mesh.vertices.iter().enumerate() {
        if exact.contains(&key(v)) {
            continue;
        }
        let tol_sq = EPS_MERGE * EPS_MERGE * v.max_abs().max(1.0).powi(2);
        if !points.iter().any(|p| p.dist_sq(*v) <= tol_sq) {
            report.foreign_vertices.push(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::quickhull;

    fn cube() -> Vec<Point3> {
        let mut pts = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    pts.push(Point3::new(x, y, z));
                }
            }
        }
        pts.push(Point3::new(0.5, 0.5, 0.5));
        pts.push(Point3::new(0.2, 0.7, 0.1));
        pts
    }

    #[test]
    fn quickhull_output_is_valid() {
        let pts = cube();
        let mesh = quickhull(&pts).unwrap();
        let r = validate_hull(&pts, &mesh);
        assert!(r.is_valid(), "{}", r.summary());
        assert!(r.summary().is_empty());
    }

    #[test]
    fn flipped_face_is_reported() {
        let pts = cube();
        let mut mesh = quickhull(&pts).unwrap();
        mesh.faces[3].swap(1, 2);
        let r = validate_hull(&pts, &mesh);
        assert_eq!(r.inward_faces, vec![3]);
        assert!(!r.orientation_ok());
        assert!(!r.bad_edges.is_empty());
    }

    #[test]
    fn missing_extreme_is_reported() {
        let mut pts = cube();
        let mesh = quickhull(&pts).unwrap();
        pts.push(Point3::new(1.5, 0.5, 0.5));
        let r = validate_hull(&pts, &mesh);
        assert_eq!(r.outside_points, vec![pts.len() - 1]);
        assert!((r.worst_containment - 0.5).abs() < 1e-12);
        assert!(r.topology_ok() && r.orientation_ok());
    }

    #[test]
    fn foreign_vertex_is_reported() {
        let pts = cube();
        let mut mesh = quickhull(&pts).unwrap();
        mesh.vertices[0] = mesh.vertices[0] + Point3::new(1e-3, 0.0, 0.0);
        let r = validate_hull(&pts, &mesh);
        assert_eq!(r.foreign_vertices, vec![0]);
    }

    #[test]
    fn normal_tree_matches_brute_force() {
        use crate::distributions::{generate, DatasetKind, DatasetSpec};
        let hull_pts = generate(&DatasetSpec::new(DatasetKind::SphereSurface, 3000, 2)).unwrap();
        let mesh = quickhull(&hull_pts).unwrap();
        let planes: Vec<OrientedPlane> = (0..mesh.face_count()).filter_map(|i| mesh.face_plane(i)).collect();
        let tree = NormalTree::new(&planes);
        let probes = generate(&DatasetSpec::new(DatasetKind::Gauss, 2000, 5)).unwrap();
        let mut stack = Vec::new();
        for floor in [-1.0, 0.0, 0.3] {
            for &q in &probes {
                let brute = planes.iter().map(|pl| pl.signed_eval(q)).fold(f64::NEG_INFINITY, f64::max);
                let fast = tree.max_eval(&planes, q, floor, &mut stack);
                if brute > floor {
                    assert_eq!(fast, brute, "{q:?}");
                } else {
                    assert!(fast <= floor);
                }
            }
        }
    }
}
