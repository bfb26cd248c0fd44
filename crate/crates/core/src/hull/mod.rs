//! Hull engines and the filtered pipeline built on them.

mod gift_wrap;
mod quickhull;
mod validate;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::filter::{
    run_filter_parallel, FilterConfig, FilterError, FilterStats, DEFAULT_DIVISIONS,
    DEFAULT_SAMPLE_FRACTION, DEFAULT_SEED,
};
use crate::geometry::{HullMesh, Point3};

pub use gift_wrap::{gift_wrap, gift_wrap_with_cap, DEFAULT_ORACLE_CAP};
pub use quickhull::quickhull;
pub use validate::{validate_hull, ValidationReport};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum HullError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("{n} points exceed the gift-wrap cap of {cap}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<FilterError> for HullError {
    fn from(e: FilterError) -> Self {
        match e {
            FilterError::InvalidConfig(msg) => HullError::InvalidConfig(msg),
            FilterError::EmptyInput => HullError::DegenerateInput("no points".into()),
            other => HullError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FinalAlgorithm {
    #[default]
    QuickHull,
    GiftWrap,
}

impl FinalAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            FinalAlgorithm::QuickHull => "quickhull",
            FinalAlgorithm::GiftWrap => "giftwrap",
        }
    }

    pub fn run(self, points: &[Point3]) -> Result<HullMesh, HullError> {
        match self {
            FinalAlgorithm::QuickHull => quickhull(points),
            FinalAlgorithm::GiftWrap => gift_wrap(points),
        }
    }
}

impl fmt::Display for FinalAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FinalAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "quickhull" | "qh" => Ok(FinalAlgorithm::QuickHull),
            "giftwrap" | "gift-wrap" | "gift_wrap" | "gw" => Ok(FinalAlgorithm::GiftWrap),
            other => Err(format!("unknown hull algorithm '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullConfig {
    pub divisions: usize,
    pub sample_fraction: f64,
    pub filter_enabled: bool,
    pub final_algorithm: FinalAlgorithm,
    pub seed: u64,
    /// Worker threads for the filter stage.
    pub threads: usize,
}

impl Default for HullConfig {
    fn default() -> Self {
        HullConfig {
            divisions: DEFAULT_DIVISIONS,
            sample_fraction: DEFAULT_SAMPLE_FRACTION,
            filter_enabled: true,
            final_algorithm: FinalAlgorithm::QuickHull,
            seed: DEFAULT_SEED,
            threads: 1,
        }
    }
}

impl HullConfig {
    pub fn with_divisions(mut self, d: usize) -> Self {
        self.divisions = d;
        self
    }

    pub fn with_sample_fraction(mut self, f: f64) -> Self {
        self.sample_fraction = f;
        self
    }

    pub fn with_filter(mut self, enabled: bool) -> Self {
        self.filter_enabled = enabled;
        self
    }

    pub fn with_algorithm(mut self, algorithm: FinalAlgorithm) -> Self {
        self.final_algorithm = algorithm;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn filter_config(&self) -> FilterConfig {
        FilterConfig {
            divisions: self.divisions,
            sample_fraction: self.sample_fraction,
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<(), HullError> {
        self.filter_config().validate()?;
        if self.threads == 0 {
            return Err(HullError::InvalidConfig("threads must be at least 1".into()));
        }
        Ok(())
    }
}

/// Filters `points` and runs the configured engine on the survivors. With
/// the filter disabled every point goes to the engine and all points are
/// reported as suspicious.
pub fn schull(points: &[Point3], config: &HullConfig) -> Result<(HullMesh, FilterStats), HullError> {
    config.validate()?;
    if points.len() < 4 {
        return Err(HullError::DegenerateInput(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(HullError::NonFinite(i));
    }
    let start = Instant::now();
    let (mesh, mut stats) = if config.filter_enabled {
        let out = run_filter_parallel(points, &config.filter_config(), config.threads)?;
        let t = Instant::now();
        let mesh = config.final_algorithm.run(&out.suspicious)?;
        let mut stats = out.stats;
        stats.timings.final_hull = t.elapsed();
        (mesh, stats)
    } else {
        let t = Instant::now();
        let mesh = config.final_algorithm.run(points)?;
        let mut stats = FilterStats {
            n_input: points.len(),
            n_suspicious: points.len(),
            ..FilterStats::default()
        };
        stats.timings.final_hull = t.elapsed();
        (mesh, stats)
    };
    stats.n_hull_vertices = mesh.vertex_count();
    stats.timings.total = start.elapsed();
    Ok((mesh, stats))
}
