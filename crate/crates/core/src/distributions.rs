//! Seeded dataset generators.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with [`DatasetSpec::seed`],
//! so a `(kind, n, seed, radius)` tuple always produces the same points on
//! every platform.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::geometry::Point3;

/// Smallest dataset that can span a nonzero volume.
pub const MIN_POINTS: usize = 4;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DistributionError {
    #[error("Halton base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("invalid dataset spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatasetKind {
    UniformBall,
    UniformCube,
    Halton,
    Gauss,
    GaussRing,
    SphereSurface,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 6] = [
        DatasetKind::UniformBall,
        DatasetKind::UniformCube,
        DatasetKind::Halton,
        DatasetKind::Gauss,
        DatasetKind::GaussRing,
        DatasetKind::SphereSurface,
    ];

    /// Short name used on the command line and in output files.
    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::UniformBall => "ball",
            DatasetKind::UniformCube => "cube",
            DatasetKind::Halton => "halton",
            DatasetKind::Gauss => "gauss",
            DatasetKind::GaussRing => "gauss-ring",
            DatasetKind::SphereSurface => "sphere",
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DatasetKind {
    type Err = DistributionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k = match s.to_ascii_lowercase().as_str() {
            "ball" | "uniform-ball" | "uniformball" => DatasetKind::UniformBall,
            "cube" | "uniform-cube" | "uniformcube" => DatasetKind::UniformCube,
            "halton" => DatasetKind::Halton,
            "gauss" | "gaussian" => DatasetKind::Gauss,
            "gauss-ring" | "gaussring" | "ring" => DatasetKind::GaussRing,
            "sphere" | "sphere-surface" | "spheresurface" => DatasetKind::SphereSurface,
            other => {
                return Err(DistributionError::InvalidSpec(format!(
                    "unknown distribution '{other}'"
                )))
            }
        };
        Ok(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    pub n: usize,
    pub seed: u64,
    /// Scales ball, sphere and Gauss-ring datasets. Ignored by the cube,
    /// Halton and Gauss families.
    pub radius: f64,
}

impl DatasetSpec {
    pub fn new(kind: DatasetKind, n: usize, seed: u64) -> Self {
        DatasetSpec {
            kind,
            n,
            seed,
            radius: 1.0,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn validate(&self) -> Result<(), DistributionError> {
        if self.n < MIN_POINTS {
            return Err(DistributionError::InvalidSpec(format!(
                "need at least {MIN_POINTS} points, got {}",
                self.n
            )));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(DistributionError::InvalidSpec(format!(
                "radius must be positive and finite, got {}",
                self.radius
            )));
        }
        Ok(())
    }
}

/// Radical inverse of `k` in base `p`: the base-`p` digits of `k` mirrored
/// around the radix point.
pub fn halton_element(p: u64, k: u64) -> Result<f64, DistributionError> {
    if p < 2 {
        return Err(DistributionError::InvalidBase(p));
    }
    let inv = 1.0 / p as f64;
    let mut weight = inv;
    let mut rest = k;
    let mut value = 0.0;
    while rest > 0 {
        value += (rest % p) as f64 * weight;
        rest /= p;
        weight *= inv;
    }
    Ok(value)
}

/// `k`-th point (1-based) of the 3D Halton sequence in bases 2, 3, 5.
pub fn halton_point(k: u64) -> Point3 {
    Point3::new(
        halton_element(2, k).unwrap(),
        halton_element(3, k).unwrap(),
        halton_element(5, k).unwrap(),
    )
}

/// Shell radius `0.5 + 0.5 · sign · g` of a Gauss-ring sample.
#[inline]
pub fn gauss_ring_radius(sign: f64, gauss_abs: f64) -> f64 {
    0.5 + 0.5 * sign * gauss_abs
}

/// Rejection-samples the cube `[-1, 1]³` until a point lands in the unit ball.
/// The origin itself is rejected so that the result can be normalized.
fn ball_sample(rng: &mut ChaCha8Rng) -> Point3 {
    loop {
        let p = Point3::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n2 = p.norm_sq();
        if n2 <= 1.0 && n2 > 0.0 {
            return p;
        }
    }
}

fn unit_direction(rng: &mut ChaCha8Rng) -> Point3 {
    let p = ball_sample(rng);
    p / p.norm()
}

pub fn generate(spec: &DatasetSpec) -> Result<Vec<Point3>, DistributionError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let r = spec.radius;
    let points = match spec.kind {
        DatasetKind::UniformCube => (0..n)
            .map(|_| Point3::new(rng.random(), rng.random(), rng.random()))
            .collect(),
        DatasetKind::UniformBall => (0..n).map(|_| ball_sample(&mut rng) * r).collect(),
        DatasetKind::SphereSurface => (0..n).map(|_| unit_direction(&mut rng) * r).collect(),
        DatasetKind::Gauss => (0..n)
            .map(|_| {
                Point3::new(
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                )
            })
            .collect(),
        DatasetKind::GaussRing => (0..n)
            .map(|_| {
                let dir = unit_direction(&mut rng);
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let g: f64 = rng.sample(StandardNormal);
                // A negative radius places the point on the opposite side.
                dir * (gauss_ring_radius(sign, g.abs()) * r)
            })
            .collect(),
        DatasetKind::Halton => (1..=n as u64).map(halton_point).collect(),
    };
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// First nine Halton(2,3,5) triples as exact fractions.
    const HALTON_9: [[(f64, f64); 3]; 9] = [
        [(1., 2.), (1., 3.), (1., 5.)],
        [(1., 4.), (2., 3.), (2., 5.)],
        [(3., 4.), (1., 9.), (3., 5.)],
        [(1., 8.), (4., 9.), (4., 5.)],
        [(5., 8.), (7., 9.), (1., 25.)],
        [(3., 8.), (2., 9.), (6., 25.)],
        [(7., 8.), (5., 9.), (11., 25.)],
        [(1., 16.), (8., 9.), (16., 25.)],
        [(9., 16.), (1., 27.), (21., 25.)],
    ];

    #[test]
    fn halton_element_examples() {
        assert_eq!(halton_element(2, 1).unwrap(), 0.5);
        assert!((halton_element(3, 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((halton_element(5, 5).unwrap() - 1.0 / 25.0).abs() < 1e-15);
        assert_eq!(halton_element(2, 4).unwrap(), 0.125);
        assert_eq!(halton_element(1, 3), Err(DistributionError::InvalidBase(1)));
        assert_eq!(halton_element(0, 3), Err(DistributionError::InvalidBase(0)));
    }

    #[test]
    fn halton_first_nine_match_fractions() {
        let pts = generate(&DatasetSpec::new(DatasetKind::Halton, 9, 0)).unwrap();
        for (p, row) in pts.iter().zip(HALTON_9) {
            for (axis, (num, den)) in row.into_iter().enumerate() {
                assert!((p[axis] - num / den).abs() <= 1e-15, "{p:?} axis {axis}");
            }
        }
    }

    #[test]
    fn halton_two_points() {
        let pts = generate(&DatasetSpec::new(DatasetKind::Halton, 4, 0)).unwrap();
        assert_eq!(pts[0], Point3::new(0.5, 1.0 / 3.0, 0.2));
        assert!((pts[1] - Point3::new(0.25, 2.0 / 3.0, 0.4)).max_abs() < 1e-15);
    }

    #[test]
    fn halton_stays_in_half_open_cube() {
        let pts = generate(&DatasetSpec::new(DatasetKind::Halton, 5000, 0)).unwrap();
        assert!(pts
            .iter()
            .all(|p| (0..3).all(|i| p[i] > 0.0 && p[i] < 1.0)));
    }

    #[test]
    fn too_few_points_rejected() {
        for kind in DatasetKind::ALL {
            assert!(matches!(
                generate(&DatasetSpec::new(kind, 3, 1)),
                Err(DistributionError::InvalidSpec(_))
            ));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in DatasetKind::ALL {
            let spec = DatasetSpec::new(kind, 500, 42);
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a.len(), 500);
            assert!(a
                .iter()
                .zip(&b)
                .all(|(p, q)| p.to_array().map(f64::to_bits) == q.to_array().map(f64::to_bits)));
        }
    }

    #[test]
    fn sphere_surface_is_normalized() {
        for seed in 0..3 {
            let spec = DatasetSpec::new(DatasetKind::SphereSurface, 2000, seed).with_radius(2.5);
            for p in generate(&spec).unwrap() {
                assert!((p.norm() - 2.5).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ball_points_inside_unit_ball() {
        let pts = generate(&DatasetSpec::new(DatasetKind::UniformBall, 20_000, 7)).unwrap();
        assert!(pts.iter().all(|p| p.norm() <= 1.0));
    }

    #[test]
    fn ball_inner_half_radius_fraction() {
        // Volume ratio of the radius-0.5 ball: 0.5³.
        let expected = 0.5f64.powi(3);
        let pts = generate(&DatasetSpec::new(DatasetKind::UniformBall, 10_000, 3)).unwrap();
        let inner = pts.iter().filter(|p| p.norm() <= 0.5).count() as f64 / pts.len() as f64;
        assert!((inner - expected).abs() <= 0.02, "fraction {inner}");
    }

    #[test]
    fn cube_points_in_unit_cube() {
        let pts = generate(&DatasetSpec::new(DatasetKind::UniformCube, 5000, 9)).unwrap();
        assert!(pts.iter().all(|p| (0..3).all(|i| (0.0..1.0).contains(&p[i]))));
    }

    #[test]
    fn gauss_ring_radius_arithmetic() {
        assert_eq!(gauss_ring_radius(1.0, 0.0), 0.5);
        assert_eq!(gauss_ring_radius(-1.0, 0.0), 0.5);
        assert_eq!(gauss_ring_radius(1.0, 1.0), 1.0);
        assert_eq!(gauss_ring_radius(-1.0, 3.0), -1.0);
    }

    #[test]
    fn gauss_ring_mean_radius() {
        // The sign of r is lost once the point is built, so replay the
        // generator's draws to get the signed radii.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let _ = unit_direction(&mut rng);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let g: f64 = rng.sample(StandardNormal);
            sum += gauss_ring_radius(sign, g.abs());
        }
        let mean = sum / n as f64;
        assert!((mean - 0.5).abs() <= 0.01, "mean radius {mean}");

        // The generator must agree with that simulation point for point.
        let pts = generate(&DatasetSpec::new(DatasetKind::GaussRing, 1000, 11)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in pts {
            let dir = unit_direction(&mut rng);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let g: f64 = rng.sample(StandardNormal);
            let r = gauss_ring_radius(sign, g.abs());
            assert!((p - dir * r).max_abs() < 1e-15);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in DatasetKind::ALL {
            assert_eq!(kind.name().parse::<DatasetKind>().unwrap(), kind);
        }
        assert!("pyramid".parse::<DatasetKind>().is_err());
    }
}
