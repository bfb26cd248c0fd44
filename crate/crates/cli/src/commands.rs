use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use sch::filter::{StageTimings, DEFAULT_DIVISIONS, DEFAULT_SAMPLE_FRACTION, DEFAULT_SEED};
use sch::{generate, quickhull, schull, DatasetKind, DatasetSpec, FilterStats, FinalAlgorithm, HullConfig, HullMesh, Point3};

use crate::error::CliError;
use crate::io::{read_points, write_mesh, write_points, PointFormat};
use crate::record::{median_record, BenchRow, DatasetInfo, RowKind, RunRecord};

#[derive(Args, Debug, Clone, PartialEq)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_kind)]
    pub dist: DatasetKind,
    /// Number of points; `1e6` style literals are accepted.
    #[arg(long, value_parser = parse_count)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to binary for `.bin` files and text otherwise.
    #[arg(long, value_enum)]
    pub format: Option<PointFormat>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct HullArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "quickhull", value_parser = parse_algo)]
    pub algo: FinalAlgorithm,
    #[arg(long, default_value_t = DEFAULT_DIVISIONS)]
    pub divisions: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_FRACTION)]
    pub sample_fraction: f64,
    /// Run the engine on every input point.
    #[arg(long)]
    pub no_filter: bool,
    /// Seed for the extreme-point sampling.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Run record as JSON; printed to stdout when omitted.
    #[arg(long)]
    pub stats_out: Option<PathBuf>,
    #[arg(long)]
    pub hull_out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct BenchArgs {
    #[arg(long, value_parser = parse_kind)]
    pub dist: DatasetKind,
    #[arg(long, value_delimiter = ',', value_parser = parse_count, required = true)]
    pub n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32")]
    pub d_list: Vec<usize>,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeats: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_FRACTION)]
    pub sample_fraction: f64,
    /// CSV output; printed to stdout when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<DatasetKind, String> {
    s.parse().map_err(|e: sch::distributions::DistributionError| e.to_string())
}

fn parse_algo(s: &str) -> Result<FinalAlgorithm, String> {
    s.parse()
}

/// Accepts plain integers and exact float literals such as `1e6`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= (1u64 << 53) as f64 => Ok(v as usize),
        _ => Err(format!("'{s}' is not a point count")),
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<Vec<Point3>, CliError> {
    let spec = DatasetSpec::new(args.dist, args.n, args.seed).with_radius(args.radius);
    let points = generate(&spec)?;
    let format = args.format.unwrap_or_else(|| PointFormat::for_path(&args.out));
    write_points(&args.out, &points, format, Some(&spec))?;
    Ok(points)
}

impl HullArgs {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        HullArgs {
            input: input.into(),
            algo: FinalAlgorithm::QuickHull,
            divisions: DEFAULT_DIVISIONS,
            sample_fraction: DEFAULT_SAMPLE_FRACTION,
            no_filter: false,
            seed: DEFAULT_SEED,
            threads: 1,
            stats_out: None,
            hull_out: None,
        }
    }

    pub fn config(&self) -> HullConfig {
        HullConfig::default()
            .with_algorithm(self.algo)
            .with_divisions(self.divisions)
            .with_sample_fraction(self.sample_fraction)
            .with_filter(!self.no_filter)
            .with_seed(self.seed)
            .with_threads(self.threads)
    }
}

/// Builds the hull of a point file and writes whichever outputs were asked
/// for. The record is returned either way.
pub fn cmd_hull(args: &HullArgs) -> Result<(RunRecord, HullMesh), CliError> {
    let file = read_points(&args.input)?;
    let config = args.config();
    let (mesh, stats) = schull(&file.points, &config)?;
    let dataset = match file.origin {
        Some(spec) if spec.n == file.points.len() => DatasetInfo::from_spec(&spec),
        _ => DatasetInfo::from_file(file.points.len()),
    };
    let record = RunRecord::new(dataset, &config, &stats, &mesh);
    if let Some(path) = &args.hull_out {
        write_mesh(path, &mesh)?;
    }
    if let Some(path) = &args.stats_out {
        write_json(path, &record)?;
    }
    Ok((record, mesh))
}

pub fn write_json(path: &Path, record: &RunRecord) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(record)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Times the plain engine on the full input, reported in the same shape as
/// a filtered run.
pub fn quickhull_record(points: &[Point3], dataset: DatasetInfo, config: &HullConfig) -> Result<(RunRecord, HullMesh), CliError> {
    let start = Instant::now();
    let mesh = quickhull(points)?;
    let elapsed = start.elapsed();
    let stats = FilterStats {
        n_input: points.len(),
        n_suspicious: points.len(),
        n_hull_vertices: mesh.vertex_count(),
        timings: StageTimings {
            final_hull: elapsed,
            total: elapsed,
            ..StageTimings::default()
        },
        ..FilterStats::default()
    };
    let config = config
        .with_filter(false)
        .with_algorithm(FinalAlgorithm::QuickHull);
    Ok((RunRecord::new(dataset, &config, &stats, &mesh), mesh))
}

pub fn sch_record(points: &[Point3], dataset: DatasetInfo, config: &HullConfig) -> Result<(RunRecord, HullMesh), CliError> {
    let (mesh, stats) = schull(points, config)?;
    Ok((RunRecord::new(dataset, config, &stats, &mesh), mesh))
}

impl BenchArgs {
    pub fn new(dist: DatasetKind, n_list: Vec<usize>, d_list: Vec<usize>, repeats: u32) -> Self {
        BenchArgs {
            dist,
            n_list,
            d_list,
            repeats,
            seed: 0,
            sample_fraction: DEFAULT_SAMPLE_FRACTION,
            csv: None,
        }
    }
}

/// Runs every `(n, d)` cell with both algorithms. Each algorithm gets one
/// untimed warm-up run per cell, then `repeats` timed runs and a median
/// row. Rows are written to `out` as they complete.
pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<Vec<BenchRow>, CliError> {
    if args.repeats == 0 {
        return Err(CliError::Usage("repeats must be at least 1".into()));
    }
    let mut writer = csv::Writer::from_writer(out);
    let mut rows = Vec::new();
    for &n in &args.n_list {
        let spec = DatasetSpec::new(args.dist, n, args.seed);
        let points = generate(&spec)?;
        let dataset = DatasetInfo::from_spec(&spec);
        for &d in &args.d_list {
            let config = HullConfig::default()
                .with_divisions(d)
                .with_sample_fraction(args.sample_fraction)
                .with_seed(args.seed);
            config.validate()?;
            type Runner = fn(&[Point3], DatasetInfo, &HullConfig) -> Result<(RunRecord, HullMesh), CliError>;
            for run in [sch_record as Runner, quickhull_record as Runner] {
                run(&points, dataset.clone(), &config)?;
                let mut records = Vec::with_capacity(args.repeats as usize);
                for repeat in 0..args.repeats as usize {
                    let (record, _) = run(&points, dataset.clone(), &config)?;
                    let row = BenchRow::from_record(&record, RowKind::Run, Some(repeat));
                    writer.serialize(&row)?;
                    rows.push(row);
                    records.push(record);
                }
                let row = BenchRow::from_record(&median_record(&records), RowKind::Median, None);
                writer.serialize(&row)?;
                writer.flush().map_err(|e| CliError::Encode(e.to_string()))?;
                rows.push(row);
            }
        }
    }
    writer.flush().map_err(|e| CliError::Encode(e.to_string()))?;
    Ok(rows)
}
