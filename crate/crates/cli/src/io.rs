//! Snapshot input (CSV or KVC1 binary) and atomic output files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kvcauchy::{CMatrix, C64};

pub const MAGIC: &[u8; 4] = b"KVC1";

/// Reads a snapshot matrix, picking the format from the magic bytes.
pub fn read_snapshots(path: &Path) -> Result<CMatrix> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    if bytes.starts_with(MAGIC) {
        decode_kvc1(&bytes)
    } else {
        let text = String::from_utf8(bytes).context("input is neither KVC1 nor UTF-8 CSV")?;
        parse_csv(&text)
    }
}

pub fn encode_kvc1(a: &CMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + 16 * a.data().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(a.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(a.cols() as u64).to_le_bytes());
    for z in a.data() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn decode_kvc1(bytes: &[u8]) -> Result<CMatrix> {
    if bytes.len() < 20 || &bytes[..4] != MAGIC {
        bail!("not a KVC1 file");
    }
    let dim = |k: usize| u64::from_le_bytes(bytes[k..k + 8].try_into().expect("8 bytes"));
    let (n, cols) = (dim(4), dim(12));
    let count = n.checked_mul(cols).and_then(|c| c.checked_mul(16)).context("KVC1 dimensions overflow")?;
    if (bytes.len() - 20) as u64 != count {
        bail!("KVC1 payload has {} bytes, expected {count} for {n}x{cols}", bytes.len() - 20);
    }
    let f = |k: usize| f64::from_le_bytes(bytes[k..k + 8].try_into().expect("8 bytes"));
    let data = (0..(n * cols) as usize).map(|k| C64::new(f(20 + 16 * k), f(28 + 16 * k))).collect();
    Ok(CMatrix::from_col_major(n as usize, cols as usize, data)?)
}

/// One snapshot per column. With a `re_0,im_0,re_1,im_1,...` header each
/// snapshot spans two columns; without a header every value is real.
pub fn parse_csv(text: &str) -> Result<CMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.context("malformed CSV")?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        bail!("CSV input is empty");
    }
    let complex = rows[0][0].parse::<f64>().is_err();
    if complex {
        let header = rows.remove(0);
        if header.len() % 2 != 0 {
            bail!("complex CSV header needs re/im pairs, got {} columns", header.len());
        }
        for (k, h) in header.iter().enumerate() {
            let want = if k % 2 == 0 { format!("re_{}", k / 2) } else { format!("im_{}", k / 2) };
            if *h != want {
                bail!("CSV header column {k} is '{h}', expected '{want}'");
            }
        }
    }
    let width = rows.first().map(Vec::len).context("CSV has a header but no data")?;
    let mut vals = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            bail!("CSV row {} has {} fields, expected {width}", i + 1, row.len());
        }
        let parsed: Vec<f64> = row
            .iter()
            .map(|f| f.parse::<f64>().with_context(|| format!("bad number '{f}' in CSV row {}", i + 1)))
            .collect::<Result<_>>()?;
        vals.push(parsed);
    }
    let n = vals.len();
    let cols = if complex { width / 2 } else { width };
    let a = CMatrix::from_fn(n, cols, |i, j| {
        if complex {
            C64::new(vals[i][2 * j], vals[i][2 * j + 1])
        } else {
            C64::new(vals[i][j], 0.0)
        }
    });
    if !a.is_finite() {
        bail!("CSV contains non-finite values");
    }
    Ok(a)
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let name = path.file_name().context("output path has no file name")?.to_string_lossy();
    let tmp: PathBuf = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("cannot create {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("cannot move output into {}", path.display()))?;
    Ok(())
}

/// CSV body from a header and rows of preformatted fields.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(w.into_inner().context("CSV flush failed")?)
}

/// Shortest round-trip representation.
pub fn fmt(x: f64) -> String {
    format!("{x:e}")
}
