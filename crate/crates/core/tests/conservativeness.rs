//! Every vertex of the true hull survives the filter.

use sch::filter::{run_filter, run_filter_parallel, FilterConfig};
use sch::geometry::Point3;
use sch::hull::gift_wrap_with_cap;
use sch::{generate, DatasetKind, DatasetSpec};

fn assert_superset(suspicious: &[Point3], hull: &[Point3], ctx: &str) {
    let key = |p: &Point3| (p.x.to_bits(), p.y.to_bits(), p.z.to_bits());
    let kept: std::collections::HashSet<_> = suspicious.iter().map(key).collect();
    let missing: Vec<&Point3> = hull.iter().filter(|v| !kept.contains(&key(v))).collect();
    assert!(missing.is_empty(), "{ctx}: {} hull vertices filtered out, e.g. {:?}", missing.len(), missing[0]);
}

#[test]
fn hull_vertices_are_never_eliminated() {
    for kind in DatasetKind::ALL {
        for n in [100, 500, 1000, 2000] {
            for seed in 0..10 {
                let pts = generate(&DatasetSpec::new(kind, n, seed)).unwrap();
                let hull = gift_wrap_with_cap(&pts, 2000).unwrap();
                for d in [1, 4, 8] {
                    let cfg = FilterConfig::default().with_divisions(d).with_seed(seed);
                    let out = run_filter(&pts, &cfg).unwrap();
                    assert_superset(&out.suspicious, &hull.vertices, &format!("{kind} n={n} seed={seed} d={d}"));
                    assert!(out.stats.is_consistent());
                }
            }
        }
    }
}

#[test]
fn partitioned_runs_stay_conservative() {
    for kind in DatasetKind::ALL {
        let pts = generate(&DatasetSpec::new(kind, 2000, 42)).unwrap();
        let hull = gift_wrap_with_cap(&pts, 2000).unwrap();
        for threads in [2, 3, 7] {
            let out = run_filter_parallel(&pts, &FilterConfig::default(), threads).unwrap();
            assert_superset(&out.suspicious, &hull.vertices, &format!("{kind} threads={threads}"));
            assert_eq!(out.stats.accounted(), pts.len());
        }
    }
}

#[test]
fn adversarial_small_sets() {
    // Points on a few spheres of very different radii, plus exact duplicates
    // and points on the initial polyhedron's faces.
    let mut pts = generate(&DatasetSpec::new(DatasetKind::SphereSurface, 300, 5)).unwrap();
    let inner: Vec<Point3> = pts.iter().map(|&p| p * 0.5).collect();
    pts.extend(inner);
    pts.extend(pts.clone().into_iter().take(50));
    for axis in 0..3 {
        let mut e = [0.0; 3];
        e[axis] = 1.5;
        pts.push(e.into());
        e[axis] = -1.5;
        pts.push(e.into());
    }
    pts.push(Point3::new(0.5, 0.5, 0.5));
    let hull = gift_wrap_with_cap(&pts, 2000).unwrap();
    for d in [1, 2, 3, 4, 8, 16] {
        let cfg = FilterConfig::default().with_divisions(d).with_sample_fraction(1.0);
        let out = run_filter(&pts, &cfg).unwrap();
        assert_superset(&out.suspicious, &hull.vertices, &format!("d={d}"));
    }
}
