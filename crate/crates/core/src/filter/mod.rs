//! Linear-time point reduction ahead of the final hull.
//!
//! The pipeline has four stages:
//!
//! 1. estimate the six axis extremes from a random sample of the input;
//! 2. drop every point strictly inside the polyhedron they span;
//! 3. route the remaining points into cube-face sectors around the
//!    polyhedron's center, discarding points that fall under the cap of
//!    per-sector maxima (see [`grid`]);
//! 4. re-test the stored points against the final maxima.
//!
//! Every discard is backed by a containment proof, so the output always
//! contains every vertex of the input's convex hull.

pub mod grid;
pub mod polyhedron;
pub mod sectors;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::Point3;

pub use grid::{Offer, SectorGrid};
pub use polyhedron::{build_initial_polyhedron, classify_inside, InitialPolyhedron, Location};
pub use sectors::{build_neighbor_table, sector_count, sector_of, CubeFace, NeighborTable, SectorId};

pub const DEFAULT_DIVISIONS: usize = 8;
pub const DEFAULT_SAMPLE_FRACTION: f64 = 0.10;
pub const DEFAULT_SEED: u64 = 0x5c4e_11a5;
/// Length of each contiguous run drawn when sampling for extremes.
pub const SAMPLE_RUN: usize = 64;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FilterError {
    #[error("input point set is empty")]
    EmptyInput,
    #[error("estimated extremes span no volume")]
    DegenerateExtremes,
    #[error("point coincides with the grid center")]
    ZeroDirection,
    #[error("invalid filter configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    /// Sector divisions per cube-face edge; `6·d²` sectors in total.
    pub divisions: usize,
    /// Fraction of the input sampled when estimating extremes, in `(0, 1]`.
    pub sample_fraction: f64,
    /// Seed for the extreme-estimation sample.
    pub seed: u64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            divisions: DEFAULT_DIVISIONS,
            sample_fraction: DEFAULT_SAMPLE_FRACTION,
            seed: DEFAULT_SEED,
        }
    }
}

impl FilterConfig {
    pub fn with_divisions(mut self, d: usize) -> Self {
        self.divisions = d;
        self
    }

    pub fn with_sample_fraction(mut self, f: f64) -> Self {
        self.sample_fraction = f;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        if self.divisions < 1 {
            return Err(FilterError::InvalidConfig("divisions must be at least 1".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(FilterError::InvalidConfig(format!(
                "sample fraction must lie in (0, 1], got {}",
                self.sample_fraction
            )));
        }
        Ok(())
    }
}

/// Wall-clock time spent in each stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub extremes: Duration,
    pub initial_filter: Duration,
    pub sectors: Duration,
    pub recheck: Duration,
    pub final_hull: Duration,
    pub total: Duration,
}

/// Per-stage point counts. The four elimination/survival counters always
/// sum to `n_input`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FilterStats {
    pub n_input: usize,
    pub n_sampled_for_extremes: usize,
    pub n_eliminated_initial: usize,
    pub n_eliminated_planes: usize,
    pub n_eliminated_recheck: usize,
    pub n_suspicious: usize,
    /// Filled in by the hull stage.
    pub n_hull_vertices: usize,
    /// The extremes were degenerate and every point was passed through.
    pub degenerate_fallback: bool,
    pub timings: StageTimings,
}

impl FilterStats {
    pub fn accounted(&self) -> usize {
        self.n_eliminated_initial
            + self.n_eliminated_planes
            + self.n_eliminated_recheck
            + self.n_suspicious
    }

    pub fn is_consistent(&self) -> bool {
        self.accounted() == self.n_input && self.n_hull_vertices <= self.n_suspicious
    }

    fn pass_through(n: usize, sampled: usize) -> FilterStats {
        FilterStats {
            n_input: n,
            n_sampled_for_extremes: sampled,
            n_suspicious: n,
            degenerate_fallback: true,
            ..FilterStats::default()
        }
    }
}

/// Axis extremes in the order min-x, max-x, min-y, max-y, min-z, max-z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub points: [Point3; 6],
    pub sampled: usize,
}

/// Estimates the axis extremes from `⌈fraction·N⌉` sampled points: runs of
/// [`SAMPLE_RUN`] consecutive points starting at offsets drawn by a
/// generator seeded with `seed`. A fraction of 1 scans every point.
pub fn estimate_extremes(
    points: &[Point3],
    sample_fraction: f64,
    seed: u64,
) -> Result<Extremes, FilterError> {
    if points.is_empty() {
        return Err(FilterError::EmptyInput);
    }
    if !(sample_fraction > 0.0 && sample_fraction <= 1.0) {
        return Err(FilterError::InvalidConfig(format!(
            "sample fraction must lie in (0, 1], got {sample_fraction}"
        )));
    }
    let n = points.len();
    let m = ((sample_fraction * n as f64).ceil() as usize).clamp(1, n);
    let visit = |ext: &mut [Point3; 6], p: Point3| {
        for axis in 0..3 {
            if p[axis] < ext[2 * axis][axis] {
                ext[2 * axis] = p;
            }
            if p[axis] > ext[2 * axis + 1][axis] {
                ext[2 * axis + 1] = p;
            }
        }
    };
    let ext = if m == n {
        let mut ext = [points[0]; 6];
        points.iter().for_each(|&p| visit(&mut ext, p));
        ext
    } else {
        // Runs of consecutive points at random offsets: same sample size,
        // far fewer cache misses than independent indices.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let run = SAMPLE_RUN.min(m);
        let mut ext = [points[rng.random_range(0..n)]; 6];
        let mut taken = 0;
        while taken < m {
            let len = run.min(m - taken);
            let start = rng.random_range(0..=n - len);
            for &p in &points[start..start + len] {
                visit(&mut ext, p);
            }
            taken += len;
        }
        ext
    };
    Ok(Extremes {
        points: ext,
        sampled: m,
    })
}

/// Surviving points plus the stage statistics.
#[derive(Debug, Clone)]
pub struct FilterOutput {
    pub suspicious: Vec<Point3>,
    pub stats: FilterStats,
}

/// Runs the full reduction pipeline on a single thread.
pub fn run_filter(points: &[Point3], config: &FilterConfig) -> Result<FilterOutput, FilterError> {
    run_filter_parallel(points, config, 1)
}

/// Runs the pipeline with the initial test and sector stage split over
/// `threads` contiguous partitions, each with its own grid. The grids are
/// merged (farther maximum wins) before a single recheck, so the result
/// satisfies the same guarantees as the sequential run.
pub fn run_filter_parallel(
    points: &[Point3],
    config: &FilterConfig,
    threads: usize,
) -> Result<FilterOutput, FilterError> {
    config.validate()?;
    let total_start = Instant::now();
    let n = points.len();

    let start = Instant::now();
    let extremes = estimate_extremes(points, config.sample_fraction, config.seed)?;
    let t_extremes = start.elapsed();

    let poly = match build_initial_polyhedron(&extremes.points) {
        Ok(poly) => poly,
        Err(FilterError::DegenerateExtremes) => {
            let mut stats = FilterStats::pass_through(n, extremes.sampled);
            stats.timings.extremes = t_extremes;
            stats.timings.total = total_start.elapsed();
            return Ok(FilterOutput {
                suspicious: points.to_vec(),
                stats,
            });
        }
        Err(e) => return Err(e),
    };

    let threads = threads.clamp(1, n.max(1));
    let chunk = n.div_ceil(threads);
    let partitions: Vec<Partition> = if threads == 1 {
        vec![filter_partition(points, &poly, config.divisions)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = points
                .chunks(chunk)
                .map(|part| scope.spawn(|| filter_partition(part, &poly, config.divisions)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("filter worker panicked"))
                .collect()
        })
    };

    let mut eliminated_initial = 0;
    let mut eliminated_planes = 0;
    let mut t_initial = Duration::ZERO;
    let mut t_sectors = Duration::ZERO;
    let mut unsorted = Vec::new();
    let mut merged: Option<SectorGrid> = None;
    for part in partitions {
        eliminated_initial += part.eliminated_initial;
        eliminated_planes += part.discarded;
        t_initial = t_initial.max(part.t_initial);
        t_sectors = t_sectors.max(part.t_sectors);
        unsorted.extend(part.unsorted);
        match merged.as_mut() {
            None => merged = Some(part.grid),
            Some(g) => g.merge(part.grid),
        }
    }
    let mut grid = merged.expect("at least one partition");

    let start = Instant::now();
    let stored = grid.suspicious().len();
    let mut suspicious = grid.recheck();
    let eliminated_recheck = stored - suspicious.len();
    suspicious.extend(unsorted);
    let t_recheck = start.elapsed();

    let stats = FilterStats {
        n_input: n,
        n_sampled_for_extremes: extremes.sampled,
        n_eliminated_initial: eliminated_initial,
        n_eliminated_planes: eliminated_planes,
        n_eliminated_recheck: eliminated_recheck,
        n_suspicious: suspicious.len(),
        n_hull_vertices: 0,
        degenerate_fallback: false,
        timings: StageTimings {
            extremes: t_extremes,
            initial_filter: t_initial,
            sectors: t_sectors,
            recheck: t_recheck,
            final_hull: Duration::ZERO,
            total: total_start.elapsed(),
        },
    };
    debug_assert_eq!(stats.accounted(), n);
    Ok(FilterOutput { suspicious, stats })
}

struct Partition {
    grid: SectorGrid,
    eliminated_initial: usize,
    discarded: usize,
    unsorted: Vec<Point3>,
    t_initial: Duration,
    t_sectors: Duration,
}

fn filter_partition(points: &[Point3], poly: &InitialPolyhedron, d: usize) -> Partition {
    // Polyhedron vertices are themselves input points and usually hull
    // vertices, so only points strictly inside are eliminated.
    let start = Instant::now();
    let outside: Vec<Point3> = points
        .iter()
        .copied()
        .filter(|&p| !poly.strictly_contains(p))
        .collect();
    let t_initial = start.elapsed();

    let start = Instant::now();
    let mut grid = SectorGrid::seeded(poly, d);
    let mut discarded = 0;
    let mut unsorted = Vec::new();
    for &p in &outside {
        match grid.offer_point(p) {
            Ok(Offer::Discarded) => discarded += 1,
            Ok(_) => {}
            Err(_) => unsorted.push(p),
        }
    }
    let t_sectors = start.elapsed();
    Partition {
        grid,
        eliminated_initial: points.len() - outside.len(),
        discarded,
        unsorted,
        t_initial,
        t_sectors,
    }
}
