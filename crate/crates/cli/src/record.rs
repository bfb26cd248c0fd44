//! Run records: the JSON written by `hull` and the CSV rows written by
//! `bench`.

use std::time::Duration;

use sch::{DatasetSpec, FilterStats, HullConfig, HullMesh};
use serde::{Deserialize, Serialize};

/// Where the points came from. `seed` is absent for files not written by
/// `gen`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub kind: String,
    pub n: usize,
    pub seed: Option<u64>,
}

impl DatasetInfo {
    pub fn from_spec(spec: &DatasetSpec) -> Self {
        DatasetInfo {
            kind: spec.kind.name().to_string(),
            n: spec.n,
            seed: Some(spec.seed),
        }
    }

    pub fn from_file(n: usize) -> Self {
        DatasetInfo {
            kind: "file".to_string(),
            n,
            seed: None,
        }
    }
}

/// Counts and timings of one hull run. Fractions are computed from the
/// counts on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n_input: usize,
    pub n_sampled: usize,
    pub eliminated_initial: usize,
    pub eliminated_planes: usize,
    pub eliminated_recheck: usize,
    pub suspicious: usize,
    pub hull_vertices: usize,
    pub hull_faces: usize,
    pub ms_extremes: f64,
    pub ms_initial_filter: f64,
    pub ms_sectors: f64,
    pub ms_recheck: f64,
    pub ms_final_hull: f64,
    pub ms_total: f64,
    pub divisions: usize,
    pub sample_fraction: f64,
    /// `sch` when the filter ran, otherwise the engine name.
    pub algorithm: String,
    /// Engine that built the final hull.
    pub engine: String,
    pub degenerate_fallback: bool,
    pub dataset: DatasetInfo,
}

pub fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl RunRecord {
    pub fn new(dataset: DatasetInfo, config: &HullConfig, stats: &FilterStats, mesh: &HullMesh) -> Self {
        let t = &stats.timings;
        RunRecord {
            n_input: stats.n_input,
            n_sampled: stats.n_sampled_for_extremes,
            eliminated_initial: stats.n_eliminated_initial,
            eliminated_planes: stats.n_eliminated_planes,
            eliminated_recheck: stats.n_eliminated_recheck,
            suspicious: stats.n_suspicious,
            hull_vertices: mesh.vertex_count(),
            hull_faces: mesh.face_count(),
            ms_extremes: ms(t.extremes),
            ms_initial_filter: ms(t.initial_filter),
            ms_sectors: ms(t.sectors),
            ms_recheck: ms(t.recheck),
            ms_final_hull: ms(t.final_hull),
            ms_total: ms(t.total),
            divisions: config.divisions,
            sample_fraction: config.sample_fraction,
            algorithm: if config.filter_enabled {
                "sch".to_string()
            } else {
                config.final_algorithm.name().to_string()
            },
            engine: config.final_algorithm.name().to_string(),
            degenerate_fallback: stats.degenerate_fallback,
            dataset,
        }
    }

    /// The four elimination/survival counts sum to the input size and the
    /// hull uses only suspicious points.
    pub fn is_consistent(&self) -> bool {
        self.eliminated_initial + self.eliminated_planes + self.eliminated_recheck + self.suspicious
            == self.n_input
            && self.hull_vertices <= self.suspicious
    }

    fn fraction(&self, count: usize) -> f64 {
        if self.n_input == 0 {
            0.0
        } else {
            count as f64 / self.n_input as f64
        }
    }

    pub fn fraction_initial(&self) -> f64 {
        self.fraction(self.eliminated_initial)
    }

    pub fn fraction_planes(&self) -> f64 {
        self.fraction(self.eliminated_planes)
    }

    pub fn fraction_recheck(&self) -> f64 {
        self.fraction(self.eliminated_recheck)
    }

    pub fn fraction_suspicious(&self) -> f64 {
        self.fraction(self.suspicious)
    }

    pub fn fraction_hull(&self) -> f64 {
        self.fraction(self.hull_vertices)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Run,
    Median,
}

/// One flat CSV row of `bench` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub row: RowKind,
    /// Empty on median rows.
    pub repeat: Option<usize>,
    pub dist: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub divisions: usize,
    pub sample_fraction: f64,
    pub algorithm: String,
    pub n_input: usize,
    pub n_sampled: usize,
    pub eliminated_initial: usize,
    pub eliminated_planes: usize,
    pub eliminated_recheck: usize,
    pub suspicious: usize,
    pub hull_vertices: usize,
    pub hull_faces: usize,
    pub frac_initial: f64,
    pub frac_planes: f64,
    pub frac_recheck: f64,
    pub frac_suspicious: f64,
    pub frac_hull: f64,
    pub ms_extremes: f64,
    pub ms_initial_filter: f64,
    pub ms_sectors: f64,
    pub ms_recheck: f64,
    pub ms_final_hull: f64,
    pub ms_total: f64,
}

impl BenchRow {
    pub fn from_record(r: &RunRecord, row: RowKind, repeat: Option<usize>) -> Self {
        BenchRow {
            row,
            repeat,
            dist: r.dataset.kind.clone(),
            n: r.dataset.n,
            seed: r.dataset.seed,
            divisions: r.divisions,
            sample_fraction: r.sample_fraction,
            algorithm: r.algorithm.clone(),
            n_input: r.n_input,
            n_sampled: r.n_sampled,
            eliminated_initial: r.eliminated_initial,
            eliminated_planes: r.eliminated_planes,
            eliminated_recheck: r.eliminated_recheck,
            suspicious: r.suspicious,
            hull_vertices: r.hull_vertices,
            hull_faces: r.hull_faces,
            frac_initial: r.fraction_initial(),
            frac_planes: r.fraction_planes(),
            frac_recheck: r.fraction_recheck(),
            frac_suspicious: r.fraction_suspicious(),
            frac_hull: r.fraction_hull(),
            ms_extremes: r.ms_extremes,
            ms_initial_filter: r.ms_initial_filter,
            ms_sectors: r.ms_sectors,
            ms_recheck: r.ms_recheck,
            ms_final_hull: r.ms_final_hull,
            ms_total: r.ms_total,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.eliminated_initial + self.eliminated_planes + self.eliminated_recheck + self.suspicious
            == self.n_input
            && self.hull_vertices <= self.suspicious
    }
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Summary of repeated runs of one cell: counts from the first run (they
/// do not change between repeats), timings as per-stage medians.
pub fn median_record(runs: &[RunRecord]) -> RunRecord {
    let col = |f: fn(&RunRecord) -> f64| median(&runs.iter().map(f).collect::<Vec<_>>());
    RunRecord {
        ms_extremes: col(|r| r.ms_extremes),
        ms_initial_filter: col(|r| r.ms_initial_filter),
        ms_sectors: col(|r| r.ms_sectors),
        ms_recheck: col(|r| r.ms_recheck),
        ms_final_hull: col(|r| r.ms_final_hull),
        ms_total: col(|r| r.ms_total),
        ..runs[0].clone()
    }
}
