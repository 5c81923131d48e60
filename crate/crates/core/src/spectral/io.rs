//! Field files.
//!
//! Two layouts carry the same content: the discretization header (dimension,
//! side lengths, modes per axis `N`, grid points per axis `M`) followed by the
//! `N^dim` coefficients in row-major multi-index order (first axis slowest).
//!
//! CSV (`.csv`), one record per line, `.` decimal separator:
//!
//! ```text
//! format,fracsys-field,1
//! dim,2
//! lengths,1,1
//! modes,32
//! grid,64
//! coefficients,1024
//! 0.0123
//! ...
//! ```
//!
//! Binary (any other extension), little-endian:
//!
//! ```text
//! b"FSF1" | u32 dim | u32 N | u32 M | f64 × dim lengths | f64 × N^dim coefficients
//! ```
//!
//! Values are stored as `f64` regardless of the in-memory scalar type.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Basis, Domain, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAGIC: &[u8; 4] = b"FSF1";
const CSV_TAG: &str = "fracsys-field";

pub fn write_csv<T: Real, W: Write>(field: &SpectralField<T>, w: W) -> Result<()> {
    let b = field.basis();
    let mut out = csv::WriterBuilder::new().flexible(true).from_writer(w);
    out.write_record(["format", CSV_TAG, "1"])?;
    out.write_record(["dim".to_string(), b.dim().to_string()])?;
    let mut lengths = vec!["lengths".to_string()];
    lengths.extend(b.domain().lengths().iter().map(|l| l.as_f64().to_string()));
    out.write_record(&lengths)?;
    out.write_record(["modes".to_string(), b.modes().to_string()])?;
    out.write_record(["grid".to_string(), b.grid().to_string()])?;
    out.write_record(["coefficients".to_string(), b.size().to_string()])?;
    for c in field.coeffs() {
        out.write_record([c.as_f64().to_string()])?;
    }
    out.flush()?;
    Ok(())
}

fn header_value<'a>(rec: &'a csv::StringRecord, key: &str) -> Result<&'a csv::StringRecord> {
    if rec.get(0) != Some(key) {
        return Err(Error::Format(format!(
            "expected `{key}` record, found {:?}",
            rec.get(0).unwrap_or("")
        )));
    }
    Ok(rec)
}

fn parse<F: std::str::FromStr>(s: Option<&str>, what: &str) -> Result<F> {
    s.and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Format(format!("bad {what}: {:?}", s.unwrap_or(""))))
}

pub fn read_csv<T: Real, R: Read>(r: R) -> Result<SpectralField<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(r);
    let mut records = rdr.records();
    let mut next = |key: &str| -> Result<csv::StringRecord> {
        let rec = records
            .next()
            .ok_or_else(|| Error::Format(format!("missing `{key}` record")))??;
        header_value(&rec, key)?;
        Ok(rec)
    };
    let fmt = next("format")?;
    if fmt.get(1) != Some(CSV_TAG) || fmt.get(2) != Some("1") {
        return Err(Error::Format(format!("unsupported field format {fmt:?}")));
    }
    let dim: usize = parse(next("dim")?.get(1), "dim")?;
    let lens = next("lengths")?;
    let lengths = (1..lens.len())
        .map(|i| parse::<f64>(lens.get(i), "length").map(T::lit))
        .collect::<Result<Vec<T>>>()?;
    let modes: usize = parse(next("modes")?.get(1), "modes")?;
    let grid: usize = parse(next("grid")?.get(1), "grid")?;
    let count: usize = parse(next("coefficients")?.get(1), "coefficient count")?;
    let basis = Basis::new(Domain::new(dim, lengths)?, modes, grid)?;
    if count != basis.size() {
        return Err(Error::Format(format!(
            "header announces {count} coefficients, basis has {}",
            basis.size()
        )));
    }
    let coeffs = records
        .map(|rec| parse::<f64>(rec?.get(0), "coefficient").map(T::lit))
        .collect::<Result<Vec<T>>>()?;
    SpectralField::new(basis, coeffs)
}

pub fn write_binary<T: Real, W: Write>(field: &SpectralField<T>, mut w: W) -> Result<()> {
    let b = field.basis();
    w.write_all(MAGIC)?;
    for n in [b.dim(), b.modes(), b.grid()] {
        let n = u32::try_from(n).map_err(|_| Error::Format(format!("{n} exceeds u32")))?;
        w.write_all(&n.to_le_bytes())?;
    }
    for l in b.domain().lengths() {
        w.write_all(&l.as_f64().to_le_bytes())?;
    }
    for c in field.coeffs() {
        w.write_all(&c.as_f64().to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_binary<T: Real, R: Read>(mut r: R) -> Result<SpectralField<T>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a binary field file".into()));
    }
    let mut u32s = [0usize; 3];
    for slot in &mut u32s {
        let mut buf = [0u8; 4];
        r.read_exact(&mut buf)?;
        *slot = u32::from_le_bytes(buf) as usize;
    }
    let [dim, modes, grid] = u32s;
    if !(1..=3).contains(&dim) {
        return Err(Error::Format(format!("bad dimension {dim}")));
    }
    let mut read_f64 = || -> Result<f64> {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        Ok(f64::from_le_bytes(buf))
    };
    let lengths = (0..dim)
        .map(|_| read_f64().map(T::lit))
        .collect::<Result<Vec<T>>>()?;
    let basis = Basis::new(Domain::new(dim, lengths)?, modes, grid)?;
    let coeffs = (0..basis.size())
        .map(|_| read_f64().map(T::lit))
        .collect::<Result<Vec<T>>>()?;
    SpectralField::new(basis, coeffs)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Writes a field, choosing the layout from the extension.
pub fn save<T: Real>(field: &SpectralField<T>, path: &Path) -> Result<()> {
    let w = BufWriter::new(File::create(path)?);
    if is_csv(path) {
        write_csv(field, w)
    } else {
        write_binary(field, w)
    }
}

pub fn load<T: Real>(path: &Path) -> Result<SpectralField<T>> {
    let r = BufReader::new(File::open(path)?);
    if is_csv(path) {
        read_csv(r)
    } else {
        read_binary(r)
    }
}
