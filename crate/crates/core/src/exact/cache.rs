//! Table persistence.
//!
//! Binary layout: magic `OPT1`, `n_max` as u64 little-endian, then for each
//! value a u32 little-endian byte length followed by the little-endian
//! magnitude bytes. The method is part of the file name, not the payload.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::{table_oracle, table_theta, Method, OverpartitionTable, KNOWN_PREFIX};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"OPT1";

pub fn write_cache<W: Write>(table: &OverpartitionTable, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&table.n_max().to_le_bytes())?;
    for v in table.values() {
        let bytes = if v.bits() == 0 {
            Vec::new()
        } else {
            v.to_bytes_le()
        };
        let len = u32::try_from(bytes.len())
            .map_err(|_| Error::Cache("value too large for the cache format".into()))?;
        w.write_all(&len.to_le_bytes())?;
        w.write_all(&bytes)?;
    }
    Ok(())
}

/// Reads a cached table and re-checks its leading entries against
/// [`KNOWN_PREFIX`].
pub fn read_cache<R: Read>(mut r: R, method: Method) -> Result<OverpartitionTable> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Cache("bad magic bytes".into()));
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let n_max = u64::from_le_bytes(word);
    let mut values = Vec::with_capacity((n_max as usize).saturating_add(1).min(1 << 24));
    for _ in 0..=n_max {
        let mut len = [0u8; 4];
        r.read_exact(&mut len)?;
        let mut bytes = vec![0u8; u32::from_le_bytes(len) as usize];
        r.read_exact(&mut bytes)?;
        values.push(BigUint::from_bytes_le(&bytes));
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Cache("trailing bytes after the last value".into()));
    }
    for (n, (got, &want)) in values.iter().zip(KNOWN_PREFIX.iter()).enumerate() {
        if *got != BigUint::from(want) {
            return Err(Error::Cache(format!(
                "cached p̄({n}) = {got} does not match the known value {want}"
            )));
        }
    }
    Ok(OverpartitionTable::from_values(values, method))
}

/// CSV with header `n,overpartition`.
pub fn export_csv<W: Write>(table: &OverpartitionTable, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["n", "overpartition"])?;
    for (n, v) in table.values().iter().enumerate() {
        wtr.write_record([n.to_string(), v.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R, method: Method) -> Result<OverpartitionTable> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["n", "overpartition"] {
        return Err(Error::Parse(format!("unexpected CSV header {headers:?}")));
    }
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let n: usize = rec[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {:?}", &rec[0])))?;
        if n != i {
            return Err(Error::Parse(format!("row {i} has index {n}")));
        }
        let v = rec[1]
            .parse::<BigUint>()
            .map_err(|_| Error::Parse(format!("bad value {:?}", &rec[1])))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Parse("empty table".into()));
    }
    Ok(OverpartitionTable::from_values(values, method))
}

/// A directory of cached tables keyed by method and `n_max`.
#[derive(Clone, Debug)]
pub struct CacheStore {
    dir: PathBuf,
}

impl CacheStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CacheStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, method: Method, n_max: u64) -> PathBuf {
        self.dir.join(format!("overpartitions-{}-{n_max}.opt", method.as_str()))
    }

    /// Load a cached table, or build and store it. A cache file that fails
    /// validation is rebuilt and overwritten.
    pub fn load_or_build(&self, method: Method, n_max: u64) -> Result<OverpartitionTable> {
        let path = self.path_for(method, n_max);
        if let Ok(file) = fs::File::open(&path) {
            if let Ok(t) = read_cache(std::io::BufReader::new(file), method) {
                if t.n_max() == n_max {
                    return Ok(t);
                }
            }
        }
        let table = match method {
            Method::ThetaRecurrence => table_theta(n_max),
            Method::ConvolutionOracle => table_oracle(n_max),
        };
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("tmp");
        {
            let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
            write_cache(&table, &mut w)?;
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_layout() {
        let t = table_theta(2);
        let mut buf = Vec::new();
        write_cache(&t, &mut buf).unwrap();
        let expected: Vec<u8> = [
            b"OPT1".as_slice(),
            &2u64.to_le_bytes(),
            &1u32.to_le_bytes(),
            &[1],
            &1u32.to_le_bytes(),
            &[2],
            &1u32.to_le_bytes(),
            &[4],
        ]
        .concat();
        assert_eq!(buf, expected);
    }

    #[test]
    fn roundtrip_and_validation() {
        let t = table_theta(300);
        let mut buf = Vec::new();
        write_cache(&t, &mut buf).unwrap();
        let back = read_cache(buf.as_slice(), Method::ThetaRecurrence).unwrap();
        assert_eq!(back, t);

        // corrupt p̄(4) = 14 -> 15
        let offset = 4 + 8 + 4 * 5 + 4;
        assert_eq!(buf[offset], 14);
        buf[offset] = 15;
        assert!(matches!(
            read_cache(buf.as_slice(), Method::ThetaRecurrence),
            Err(Error::Cache(_))
        ));
        assert!(read_cache(&b"OPT2"[..], Method::ThetaRecurrence).is_err());
    }

    #[test]
    fn csv_export() {
        let t = table_theta(10);
        let mut out = Vec::new();
        export_csv(&t, &mut out).unwrap();
        let text = String::from_utf8(out.clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 12);
        assert_eq!(lines[0], "n,overpartition");
        assert_eq!(lines[11], "10,232");
        let back = read_csv(out.as_slice(), Method::ThetaRecurrence).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn store_rebuilds_corrupt_files() {
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::new(dir.path());
        let a = store.load_or_build(Method::ThetaRecurrence, 50).unwrap();
        let path = store.path_for(Method::ThetaRecurrence, 50);
        assert!(path.exists());
        let b = store.load_or_build(Method::ThetaRecurrence, 50).unwrap();
        assert_eq!(a, b);
        fs::write(&path, b"garbage").unwrap();
        let c = store.load_or_build(Method::ThetaRecurrence, 50).unwrap();
        assert_eq!(a, c);
    }
}
