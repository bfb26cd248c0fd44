//! Point and mesh file formats.
//!
//! Text point files hold one point per line as three decimal literals
//! separated by spaces; lines starting with `#` are comments. Binary point
//! files start with the magic `SCH3PTS1`, then a little-endian `u64` count,
//! then `count` triples of little-endian `f64`. Meshes are text with
//! `v x y z` and `f i j k` records, indices 1-based.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use sch::{DatasetKind, DatasetSpec, HullMesh, Point3};

use crate::error::CliError;

pub const BINARY_MAGIC: &[u8; 8] = b"SCH3PTS1";
const HEADER_LEN: usize = 16;
const ORIGIN_TAG: &str = "# sch gen";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointFormat {
    Text,
    Binary,
}

impl PointFormat {
    /// Binary for a `.bin` extension, text otherwise.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("bin") => PointFormat::Binary,
            _ => PointFormat::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFile {
    pub points: Vec<Point3>,
    /// Generator parameters, when the file was written by `gen` in text
    /// format.
    pub origin: Option<DatasetSpec>,
}

/// Reads a point file, detecting the binary format by its magic bytes.
pub fn read_points(path: &Path) -> Result<PointFile, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    if bytes.starts_with(BINARY_MAGIC) {
        return Ok(PointFile {
            points: decode_binary(path, &bytes)?,
            origin: None,
        });
    }
    let text = String::from_utf8(bytes).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: 0,
        msg: format!("not UTF-8 text: {e}"),
    })?;
    parse_text(path, &text)
}

pub fn parse_text(path: &Path, text: &str) -> Result<PointFile, CliError> {
    let mut points = Vec::new();
    let mut origin = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if origin.is_none() {
                origin = parse_origin(line);
            }
            continue;
        }
        let err = |msg: String| CliError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!("expected 3 coordinates, found {}", fields.len())));
        }
        let mut c = [0.0; 3];
        for (slot, field) in c.iter_mut().zip(&fields) {
            let v: f64 = field
                .parse()
                .map_err(|_| err(format!("'{field}' is not a number")))?;
            if !v.is_finite() {
                return Err(err(format!("'{field}' is not finite")));
            }
            *slot = v;
        }
        points.push(Point3::from(c));
    }
    Ok(PointFile { points, origin })
}

fn decode_binary(path: &Path, bytes: &[u8]) -> Result<Vec<Point3>, CliError> {
    let bad = |msg: String| CliError::BadBinary {
        path: path.to_path_buf(),
        msg,
    };
    if bytes.len() < HEADER_LEN {
        return Err(bad("truncated header".into()));
    }
    let count = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
    let body = &bytes[HEADER_LEN..];
    let expected = usize::try_from(count)
        .ok()
        .and_then(|c| c.checked_mul(24))
        .ok_or_else(|| bad(format!("count {count} is too large")))?;
    if body.len() != expected {
        return Err(bad(format!(
            "header declares {count} points ({expected} bytes) but {} bytes follow",
            body.len()
        )));
    }
    let f = |b: &[u8]| f64::from_le_bytes(b.try_into().expect("8 bytes"));
    Ok(body
        .chunks_exact(24)
        .map(|c| Point3::new(f(&c[0..8]), f(&c[8..16]), f(&c[16..24])))
        .collect())
}

pub fn write_points(
    path: &Path,
    points: &[Point3],
    format: PointFormat,
    origin: Option<&DatasetSpec>,
) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let result = match format {
        PointFormat::Text => write_text(&mut w, points, origin),
        PointFormat::Binary => write_binary(&mut w, points),
    };
    result.and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

fn write_text(w: &mut impl Write, points: &[Point3], origin: Option<&DatasetSpec>) -> std::io::Result<()> {
    if let Some(s) = origin {
        writeln!(w, "{}", format_origin(s))?;
    }
    // Display for f64 prints the shortest literal that parses back exactly.
    for p in points {
        writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
    }
    Ok(())
}

fn write_binary(w: &mut impl Write, points: &[Point3]) -> std::io::Result<()> {
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(points.len() as u64).to_le_bytes())?;
    for p in points {
        for c in p.to_array() {
            w.write_all(&c.to_le_bytes())?;
        }
    }
    Ok(())
}

fn format_origin(s: &DatasetSpec) -> String {
    format!(
        "{ORIGIN_TAG} dist={} n={} seed={} radius={}",
        s.kind, s.n, s.seed, s.radius
    )
}

fn parse_origin(line: &str) -> Option<DatasetSpec> {
    let rest = line.strip_prefix(ORIGIN_TAG)?;
    let (mut kind, mut n, mut seed, mut radius) = (None, None, None, 1.0);
    for kv in rest.split_whitespace() {
        let (k, v) = kv.split_once('=')?;
        match k {
            "dist" => kind = v.parse::<DatasetKind>().ok(),
            "n" => n = v.parse().ok(),
            "seed" => seed = v.parse().ok(),
            "radius" => radius = v.parse().ok()?,
            _ => {}
        }
    }
    Some(DatasetSpec::new(kind?, n?, seed?).with_radius(radius))
}

pub fn write_mesh(path: &Path, mesh: &HullMesh) -> Result<(), CliError> {
    fs::write(path, format_mesh(mesh)).map_err(|e| CliError::io(path, e))
}

pub fn format_mesh(mesh: &HullMesh) -> String {
    let mut out = String::with_capacity(mesh.vertices.len() * 64 + mesh.faces.len() * 24);
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v.x, v.y, v.z);
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

pub fn read_mesh(path: &Path) -> Result<HullMesh, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_mesh(path, &text)
}

pub fn parse_mesh(path: &Path, text: &str) -> Result<HullMesh, CliError> {
    let mut mesh = HullMesh::default();
    let mut raw_faces = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = |msg: String| CliError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg,
        };
        let mut fields = line.split_whitespace();
        let tag = match fields.next() {
            None => continue,
            Some(t) if t.starts_with('#') => continue,
            Some(t) => t,
        };
        let rest: Vec<&str> = fields.collect();
        if rest.len() != 3 {
            return Err(err(format!("expected 3 values after '{tag}'")));
        }
        match tag {
            "v" => {
                let mut c = [0.0; 3];
                for (slot, s) in c.iter_mut().zip(&rest) {
                    *slot = s.parse().map_err(|_| err(format!("'{s}' is not a number")))?;
                }
                mesh.vertices.push(Point3::from(c));
            }
            "f" => {
                let mut f = [0usize; 3];
                for (slot, s) in f.iter_mut().zip(&rest) {
                    let k: usize = s.parse().map_err(|_| err(format!("'{s}' is not an index")))?;
                    if k == 0 {
                        return Err(err("indices are 1-based".into()));
                    }
                    *slot = k - 1;
                }
                raw_faces.push((i + 1, f));
            }
            other => return Err(err(format!("unknown record '{other}'"))),
        }
    }
    for (line, f) in raw_faces {
        if f.iter().any(|&k| k >= mesh.vertices.len()) {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("face references a vertex beyond {}", mesh.vertices.len()),
            });
        }
        mesh.faces.push(f);
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(PointFormat::for_path(Path::new("a.bin")), PointFormat::Binary);
        assert_eq!(PointFormat::for_path(Path::new("a.BIN")), PointFormat::Binary);
        assert_eq!(PointFormat::for_path(Path::new("a.txt")), PointFormat::Text);
        assert_eq!(PointFormat::for_path(Path::new("a")), PointFormat::Text);
    }

    #[test]
    fn text_with_comments_and_blanks() {
        let f = parse_text(Path::new("x"), "# header\n\n1 2 3\n  4.5  -6e-3 7\n").unwrap();
        assert_eq!(
            f.points,
            vec![Point3::new(1., 2., 3.), Point3::new(4.5, -6e-3, 7.)]
        );
        assert!(f.origin.is_none());
    }

    #[test]
    fn malformed_line_is_named() {
        let e = parse_text(Path::new("pts.txt"), "0 0 0\n1 2\n").unwrap_err();
        match e {
            CliError::Parse { line, ref msg, .. } => {
                assert_eq!(line, 2);
                assert!(msg.contains("3 coordinates"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_text(Path::new("pts.txt"), "0 0 x\n").unwrap_err();
        assert!(e.to_string().starts_with("pts.txt:1:"), "{e}");
        assert!(parse_text(Path::new("p"), "0 0 nan\n").is_err());
        assert!(parse_text(Path::new("p"), "0 inf 0\n").is_err());
    }

    #[test]
    fn origin_round_trip() {
        let spec = DatasetSpec::new(DatasetKind::GaussRing, 123, 9).with_radius(2.5);
        assert_eq!(parse_origin(&format_origin(&spec)), Some(spec));
        assert_eq!(parse_origin("# something else"), None);
        assert_eq!(parse_origin("# sch gen dist=nope n=3 seed=1"), None);
    }

    #[test]
    fn binary_round_trip_and_detection() {
        let dir = tmp();
        let path = dir.path().join("p.dat");
        let pts = vec![Point3::new(0.1, -2.0, 3e300), Point3::new(-0.0, 5e-324, 1.0)];
        write_points(&path, &pts, PointFormat::Binary, None).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], BINARY_MAGIC);
        assert_eq!(bytes.len(), 16 + 48);
        let back = read_points(&path).unwrap();
        assert_eq!(back.points.len(), 2);
        for (a, b) in back.points.iter().zip(&pts) {
            assert_eq!(a.to_array().map(f64::to_bits), b.to_array().map(f64::to_bits));
        }
    }

    #[test]
    fn truncated_binary_is_rejected() {
        let dir = tmp();
        let path = dir.path().join("p.bin");
        let mut bytes = BINARY_MAGIC.to_vec();
        bytes.extend(3u64.to_le_bytes());
        bytes.extend([0u8; 24]);
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_points(&path), Err(CliError::BadBinary { .. })));
        fs::write(&path, BINARY_MAGIC).unwrap();
        assert!(matches!(read_points(&path), Err(CliError::BadBinary { .. })));
    }

    #[test]
    fn missing_file_is_io() {
        let e = read_points(Path::new("/nonexistent/points.txt")).unwrap_err();
        assert!(matches!(e, CliError::Io { .. }));
    }

    #[test]
    fn mesh_round_trip() {
        let mesh = HullMesh {
            vertices: vec![
                Point3::new(0., 0., 0.),
                Point3::new(1., 0., 0.),
                Point3::new(0., 1., 0.),
                Point3::new(0., 0., 1.),
            ],
            faces: vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]],
        };
        let text = format_mesh(&mesh);
        assert!(text.contains("f 1 3 2\n"));
        assert_eq!(parse_mesh(Path::new("m"), &text).unwrap(), mesh);
    }

    #[test]
    fn mesh_errors() {
        assert!(parse_mesh(Path::new("m"), "v 0 0 0\nf 1 1 2\n").is_err());
        assert!(parse_mesh(Path::new("m"), "v 0 0 0\nf 0 1 1\n").is_err());
        assert!(parse_mesh(Path::new("m"), "q 1 2 3\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trips_exactly(coords in prop::collection::vec(
            (-1e6f64..1e6, -1e-6f64..1e-6, prop::num::f64::NORMAL), 1..40)
        ) {
            let pts: Vec<Point3> = coords.iter().map(|&(a, b, c)| Point3::new(a, b, c)).collect();
            let mut buf = Vec::new();
            write_text(&mut buf, &pts, None).unwrap();
            let back = parse_text(Path::new("t"), std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(back.points, pts);
        }
    }
}
