//! File formats: coefficient vectors (CSV and headered binary), phantom
//! tables, cubature rules, sinograms, benchmark results, binary PGM images
//! with a scaling sidecar, and the key-value experiment config.

use crate::bench::{BenchResult, BenchRow, ImageGrid};
use crate::error::{Error, Result};
use crate::phantom::{Ellipse, Phantom};
use crate::needlet::CubatureRule;
use crate::svd::{coefficient_count, CoefficientVector, SvdIndex};
use crate::Lp;
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Read, Write as IoWrite};
use std::path::Path;

fn open_writer(path: &Path) -> Result<BufWriter<std::fs::File>> {
    Ok(BufWriter::new(std::fs::File::create(path)?))
}

fn open_reader(path: &Path) -> Result<BufReader<std::fs::File>> {
    Ok(BufReader::new(std::fs::File::open(path)?))
}

fn parse_field<T: std::str::FromStr>(field: &str, line_no: usize, what: &str) -> Result<T> {
    field.trim().parse().map_err(|_| {
        Error::Parse(format!("line {line_no}: cannot parse {what} from '{field}'"))
    })
}

/// Writes `k,l,i,value` rows (one per coefficient, canonical order).
pub fn write_coefficients_csv(path: &Path, c: &CoefficientVector) -> Result<()> {
    let mut w = open_writer(path)?;
    writeln!(w, "k,l,i,value")?;
    for idx in crate::svd::enumerate_indices(c.max_degree()) {
        writeln!(
            w,
            "{},{},{},{:.17e}",
            idx.k(),
            idx.l(),
            idx.harmonic().selector(),
            c.get(idx)
        )?;
    }
    Ok(())
}

pub fn read_coefficients_csv(path: &Path) -> Result<CoefficientVector> {
    let r = open_reader(path)?;
    let mut entries: Vec<(SvdIndex, f64)> = Vec::new();
    let mut max_degree = 0u32;
    for (line_no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('k') {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = |what: &str| -> Result<&str> {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {line_no}: missing {what}")))
        };
        let k: u32 = parse_field(next("k")?, line_no, "k")?;
        let l: u32 = parse_field(next("l")?, line_no, "l")?;
        let i: u32 = parse_field(next("i")?, line_no, "i")?;
        let value: f64 = parse_field(next("value")?, line_no, "value")?;
        let idx = SvdIndex::from_triple(k, l, i)?;
        max_degree = max_degree.max(k);
        entries.push((idx, value));
    }
    if entries.is_empty() {
        return Err(Error::Parse("no coefficient rows found".into()));
    }
    let mut c = CoefficientVector::zeros(max_degree);
    if entries.len() != coefficient_count(max_degree) {
        return Err(Error::Parse(format!(
            "expected {} rows for degree {max_degree}, found {}",
            coefficient_count(max_degree),
            entries.len()
        )));
    }
    for (idx, value) in entries {
        c.set(idx, value);
    }
    Ok(c)
}

const COEF_MAGIC: &[u8; 4] = b"RNLC";

/// Headered little-endian binary: magic, max_degree u32, then f64 values.
pub fn write_coefficients_binary(path: &Path, c: &CoefficientVector) -> Result<()> {
    let mut w = open_writer(path)?;
    w.write_all(COEF_MAGIC)?;
    w.write_all(&c.max_degree().to_le_bytes())?;
    for v in c.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_coefficients_binary(path: &Path) -> Result<CoefficientVector> {
    let mut r = open_reader(path)?;
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != COEF_MAGIC {
        return Err(Error::Parse("bad magic in coefficient file".into()));
    }
    let mut buf4 = [0u8; 4];
    r.read_exact(&mut buf4)?;
    let max_degree = u32::from_le_bytes(buf4);
    let n = coefficient_count(max_degree);
    let mut values = Vec::with_capacity(n);
    let mut buf8 = [0u8; 8];
    for _ in 0..n {
        r.read_exact(&mut buf8)?;
        values.push(f64::from_le_bytes(buf8));
    }
    CoefficientVector::from_values(max_degree, values)
}

/// Ellipse table: `cx,cy,a,b,phi,density` with phi in radians.
pub fn write_phantom_csv(path: &Path, phantom: &Phantom) -> Result<()> {
    let mut w = open_writer(path)?;
    writeln!(w, "cx,cy,a,b,phi,density")?;
    for e in phantom.ellipses() {
        writeln!(
            w,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            e.center_x, e.center_y, e.semi_a, e.semi_b, e.phi, e.density
        )?;
    }
    Ok(())
}

pub fn read_phantom_csv(path: &Path) -> Result<Phantom> {
    let r = open_reader(path)?;
    let mut ellipses = Vec::new();
    for (line_no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("cx") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!(
                "line {line_no}: expected 6 fields, got {}",
                fields.len()
            )));
        }
        ellipses.push(Ellipse::new(
            parse_field(fields[0], line_no, "cx")?,
            parse_field(fields[1], line_no, "cy")?,
            parse_field(fields[2], line_no, "a")?,
            parse_field(fields[3], line_no, "b")?,
            parse_field(fields[4], line_no, "phi")?,
            parse_field(fields[5], line_no, "density")?,
        )?);
    }
    Phantom::new(ellipses)
}

/// Cubature nodes as `r,theta,weight` rows.
pub fn write_cubature_csv(path: &Path, rule: &CubatureRule) -> Result<()> {
    let mut w = open_writer(path)?;
    writeln!(w, "r,theta,weight")?;
    for (node, weight) in rule.nodes().iter().zip(rule.weights()) {
        writeln!(w, "{:.17e},{:.17e},{:.17e}", node.r, node.theta, weight)?;
    }
    Ok(())
}

/// Sinogram samples as `theta,s,value` rows.
pub fn write_sinogram_csv(path: &Path, samples: &[(f64, f64, f64)]) -> Result<()> {
    let mut w = open_writer(path)?;
    writeln!(w, "theta,s,value")?;
    for (theta, s, value) in samples {
        writeln!(w, "{theta:.17e},{s:.17e},{value:.17e}")?;
    }
    Ok(())
}

/// Regression grid as `i1,i2,value` rows.
pub fn write_grid_csv(path: &Path, grid: &[f64], n1: usize, n2: usize) -> Result<()> {
    let mut w = open_writer(path)?;
    writeln!(w, "i1,i2,value")?;
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            writeln!(w, "{i1},{i2},{:.17e}", grid[i1 * n2 + i2])?;
        }
    }
    Ok(())
}

pub fn read_grid_csv(path: &Path) -> Result<(Vec<f64>, usize, usize)> {
    let r = open_reader(path)?;
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();
    for (line_no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('i') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line {line_no}: expected 3 fields")));
        }
        cells.push((
            parse_field(fields[0], line_no, "i1")?,
            parse_field(fields[1], line_no, "i2")?,
            parse_field(fields[2], line_no, "value")?,
        ));
    }
    let n1 = cells.iter().map(|c| c.0).max().map_or(0, |m| m + 1);
    let n2 = cells.iter().map(|c| c.1).max().map_or(0, |m| m + 1);
    if n1 * n2 != cells.len() {
        return Err(Error::Parse(format!(
            "grid is not dense: {} cells for {n1} x {n2}",
            cells.len()
        )));
    }
    let mut grid = vec![0.0; n1 * n2];
    for (i1, i2, v) in cells {
        grid[i1 * n2 + i2] = v;
    }
    Ok((grid, n1, n2))
}

/// Benchmark rows with the fixed schema
/// `model,estimator,tuning,noise,p,mean_error,std_error,R`.
pub fn write_bench_csv(path: &Path, result: &BenchResult) -> Result<()> {
    let mut w = open_writer(path)?;
    write!(w, "{}", bench_csv_string(result))?;
    Ok(())
}

pub fn bench_csv_string(result: &BenchResult) -> String {
    let mut out = String::from("model,estimator,tuning,noise,p,mean_error,std_error,R\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{:.12e},{},{:.12e},{:.12e},{}\n",
            row.model,
            row.estimator,
            row.tuning,
            row.noise,
            row.p,
            row.mean_error,
            row.std_error,
            row.realizations
        ));
    }
    out
}

pub fn read_bench_csv(path: &Path) -> Result<BenchResult> {
    let r = open_reader(path)?;
    let mut rows = Vec::new();
    for (line_no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("model") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Parse(format!("line {line_no}: expected 8 fields")));
        }
        rows.push(BenchRow {
            model: fields[0].to_string(),
            estimator: fields[1].to_string(),
            tuning: parse_field(fields[2], line_no, "tuning")?,
            noise: parse_field(fields[3], line_no, "noise")?,
            p: Lp::parse(fields[4])?,
            mean_error: parse_field(fields[5], line_no, "mean_error")?,
            std_error: parse_field(fields[6], line_no, "std_error")?,
            realizations: parse_field(fields[7], line_no, "R")?,
        });
    }
    Ok(BenchResult { rows })
}

/// Writes an 8-bit binary PGM (P5) with linear min-max scaling over
/// in-disk pixels; pixels outside the disk map to 0. The scaling is
/// recorded in `<path>.scale.txt`.
pub fn write_pgm(path: &Path, img: &ImageGrid) -> Result<()> {
    let finite: Vec<f64> = img.values.iter().copied().filter(|v| v.is_finite()).collect();
    let (lo, hi) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut w = open_writer(path)?;
    write!(w, "P5\n{} {}\n255\n", img.width, img.height)?;
    let bytes: Vec<u8> = img
        .values
        .iter()
        .map(|&v| {
            if v.is_finite() {
                (((v - lo) / span * 255.0).round().clamp(0.0, 255.0)) as u8
            } else {
                0
            }
        })
        .collect();
    w.write_all(&bytes)?;
    drop(w);

    let sidecar = path.with_extension(format!(
        "{}.scale.txt",
        path.extension().and_then(|e| e.to_str()).unwrap_or("pgm")
    ));
    let mut s = open_writer(&sidecar)?;
    writeln!(s, "min={lo:.17e}")?;
    writeln!(s, "max={hi:.17e}")?;
    writeln!(s, "outside=0")?;
    Ok(())
}

/// Key-value experiment config: `key = value` lines, '#' comments.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let r = open_reader(path)?;
    let mut map = BTreeMap::new();
    for (line_no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {line_no}: expected 'key = value'")))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Splits a comma-separated list into parsed items.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("cannot parse list item '{part}'")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phantom::{shepp_logan, PhantomVariant};

    fn tmp(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("radonlet_test_{}_{name}", std::process::id()));
        p
    }

    #[test]
    fn coefficient_csv_round_trip() {
        let mut c = CoefficientVector::zeros(7);
        let mut state = 3u64;
        for v in c.values_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            *v = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        }
        let path = tmp("coef.csv");
        write_coefficients_csv(&path, &c).unwrap();
        let back = read_coefficients_csv(&path).unwrap();
        assert_eq!(c, back);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn coefficient_binary_round_trip() {
        let mut c = CoefficientVector::zeros(5);
        for (i, v) in c.values_mut().iter_mut().enumerate() {
            *v = i as f64 * 0.25 - 1.0;
        }
        let path = tmp("coef.bin");
        write_coefficients_binary(&path, &c).unwrap();
        let back = read_coefficients_binary(&path).unwrap();
        assert_eq!(c, back);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn phantom_csv_round_trip() {
        let ph = shepp_logan(PhantomVariant::Modified);
        let path = tmp("phantom.csv");
        write_phantom_csv(&path, &ph).unwrap();
        let back = read_phantom_csv(&path).unwrap();
        assert_eq!(ph, back);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn bench_csv_round_trip() {
        let result = BenchResult {
            rows: vec![
                BenchRow {
                    model: "white-noise".into(),
                    estimator: "needlet".into(),
                    tuning: 5,
                    noise: 2.0,
                    p: Lp::Finite(2.0),
                    mean_error: 1.25,
                    std_error: 0.125,
                    realizations: 50,
                },
                BenchRow {
                    model: "white-noise".into(),
                    estimator: "svd".into(),
                    tuning: 32,
                    noise: 2.0,
                    p: Lp::Infinity,
                    mean_error: 3.5,
                    std_error: 0.5,
                    realizations: 50,
                },
            ],
        };
        let path = tmp("bench.csv");
        write_bench_csv(&path, &result).unwrap();
        let back = read_bench_csv(&path).unwrap();
        assert_eq!(result, back);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn pgm_has_binary_header_and_sidecar() {
        let img = ImageGrid {
            width: 4,
            height: 2,
            values: vec![0.0, 1.0, 2.0, f64::NAN, 0.5, 1.5, 2.0, 0.0],
        };
        let path = tmp("img.pgm");
        write_pgm(&path, &img).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert!(bytes.starts_with(b"P5\n4 2\n255\n"));
        assert_eq!(bytes.len(), b"P5\n4 2\n255\n".len() + 8);
        let sidecar = path.with_extension("pgm.scale.txt");
        let text = std::fs::read_to_string(&sidecar).unwrap();
        assert!(text.contains("min=0"));
        assert!(text.contains("outside=0"));
        std::fs::remove_file(&path).ok();
        std::fs::remove_file(&sidecar).ok();
    }

    #[test]
    fn config_parsing() {
        let path = tmp("config.txt");
        std::fs::write(
            &path,
            "# comment\nnoise = 0.5,1,2\nnorm = 1,2,inf\nseed = 7\n",
        )
        .unwrap();
        let map = read_config(&path).unwrap();
        assert_eq!(map["noise"], "0.5,1,2");
        assert_eq!(map["seed"], "7");
        let levels: Vec<f64> = parse_list(&map["noise"]).unwrap();
        assert_eq!(levels, vec![0.5, 1.0, 2.0]);
        std::fs::remove_file(&path).ok();
    }
}
