//! Command-line front end for `sch`: dataset generation, hull runs with
//! per-stage statistics, and timing sweeps against plain QuickHull.

pub mod commands;
pub mod error;
pub mod io;
pub mod record;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

pub use commands::{cmd_bench, cmd_gen, cmd_hull, BenchArgs, GenArgs, HullArgs};
pub use error::{CliError, EXIT_BAD_INPUT, EXIT_INTERNAL, EXIT_OK};
pub use record::{BenchRow, DatasetInfo, RowKind, RunRecord};

#[derive(Parser, Debug)]
#[command(name = "sch", version, about = "Convex hulls of large 3D point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a seeded synthetic point set.
    Gen(GenArgs),
    /// Build the hull of a point file.
    Hull(HullArgs),
    /// Time the filtered pipeline against QuickHull on the full input.
    Bench(BenchArgs),
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_BAD_INPUT
                }
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Gen(args) => cmd_gen(&args).map(|_| ()),
        Command::Hull(args) => {
            let (record, _) = cmd_hull(&args)?;
            if args.stats_out.is_none() {
                let text = serde_json::to_string_pretty(&record)?;
                writeln!(stdout, "{text}").map_err(|e| CliError::Encode(e.to_string()))?;
            }
            Ok(())
        }
        Command::Bench(args) => match &args.csv {
            Some(path) => {
                let mut file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
                cmd_bench(&args, &mut file).map(|_| ())
            }
            None => cmd_bench(&args, stdout).map(|_| ()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("sch").chain(args.iter().copied()), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_and_version_succeed() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("gen") && out.contains("bench"));
        assert_eq!(call(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(call(&[]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["frobnicate"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["gen", "--dist", "torus", "--n", "10", "--out", "x"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["bench", "--dist", "ball", "--n-list", "100", "--repeats", "0"]).0, EXIT_BAD_INPUT);
    }

    #[test]
    fn gen_then_hull_through_the_cli() {
        let dir = tempfile::tempdir().unwrap();
        let pts = dir.path().join("c.bin");
        let pts = pts.to_str().unwrap();
        let (code, _, err) = call(&["gen", "--dist", "cube", "--n", "2e3", "--seed", "4", "--out", pts]);
        assert_eq!(code, EXIT_OK, "{err}");
        let mesh = dir.path().join("c.mesh");
        let (code, out, err) = call(&[
            "hull", "--in", pts, "--algo", "giftwrap", "--divisions", "2",
            "--sample-fraction", "0.5", "--hull-out", mesh.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        let record: RunRecord = serde_json::from_str(&out).unwrap();
        assert_eq!(record.n_input, 2000);
        assert_eq!(record.divisions, 2);
        assert_eq!(record.algorithm, "sch");
        assert_eq!(record.engine, "giftwrap");
        assert!(record.is_consistent());
        assert!(mesh.exists());

        let (code, out, _) = call(&["hull", "--in", pts, "--no-filter"]);
        assert_eq!(code, EXIT_OK);
        let plain: RunRecord = serde_json::from_str(&out).unwrap();
        assert_eq!(plain.algorithm, "quickhull");
        assert_eq!(plain.suspicious, 2000);
        assert_eq!(plain.hull_vertices, record.hull_vertices);
    }

    #[test]
    fn bad_files_exit_1_with_diagnostic() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.txt");
        fs::write(&bad, "0 0 0\n1 2\n").unwrap();
        let (code, _, err) = call(&["hull", "--in", bad.to_str().unwrap()]);
        assert_eq!(code, EXIT_BAD_INPUT);
        assert!(err.contains("bad.txt:2:"), "{err}");

        let (code, _, err) = call(&["hull", "--in", "/nonexistent/pts.txt"]);
        assert_eq!(code, EXIT_BAD_INPUT);
        assert!(err.contains("/nonexistent/pts.txt"), "{err}");

        let few = dir.path().join("few.txt");
        fs::write(&few, "0 0 0\n1 0 0\n0 1 0\n").unwrap();
        let (code, _, err) = call(&["hull", "--in", few.to_str().unwrap()]);
        assert_eq!(code, EXIT_BAD_INPUT);
        assert!(err.contains("degenerate"), "{err}");
    }

    #[test]
    fn bench_writes_csv_file() {
        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("b.csv");
        let (code, _, err) = call(&[
            "bench", "--dist", "gauss", "--n-list", "1000,2000", "--d-list", "2",
            "--repeats", "2", "--csv", csv_path.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        let rows: Vec<BenchRow> = csv::Reader::from_path(&csv_path)
            .unwrap()
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        assert!(rows.iter().all(BenchRow::is_consistent));
    }
}
