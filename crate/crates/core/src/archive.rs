//! Trace archives and their on-disk format.
//!
//! Layout (all integers little-endian):
//!
//! | field          | type          |
//! |----------------|---------------|
//! | magic          | `b"FRTR"`     |
//! | version        | `u16` = 1     |
//! | genus          | `u8`          |
//! | coeff count    | `u8`          |
//! | coefficients   | `i64` each, constant term first |
//! | x_max          | `u64`         |
//! | record count   | `u64`         |
//! | records        | `(p: u64, a1: i64)`, ascending `p` |

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const MAGIC: [u8; 4] = *b"FRTR";
pub const VERSION: u16 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ArchiveError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a trace archive (bad magic)")]
    BadMagic,
    #[error("unsupported archive version {0}")]
    UnsupportedVersion(u16),
    #[error("records not strictly increasing at p = {0}")]
    Unsorted(u64),
    #[error("genus {0} or {1} coefficients do not fit the header")]
    HeaderOverflow(u32, usize),
}

/// One good prime and its Frobenius trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusRecord {
    pub p: u64,
    pub a1: i64,
    /// Optional Weil coefficients `c_2..c_g`; not persisted.
    pub higher: Option<Vec<i64>>,
}

impl FrobeniusRecord {
    pub fn new(p: u64, a1: i64) -> Self {
        FrobeniusRecord { p, a1, higher: None }
    }
}

/// Traces at all good primes up to `x_max` for one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceArchive {
    pub genus: u32,
    /// Curve coefficients, constant term first.
    pub coeffs: Vec<i64>,
    pub x_max: u64,
    pub records: Vec<FrobeniusRecord>,
}

impl TraceArchive {
    pub fn write_to<W: Write>(&self, w: W) -> Result<(), ArchiveError> {
        let mut w = BufWriter::new(w);
        if self.genus > u8::MAX as u32 || self.coeffs.len() > u8::MAX as usize {
            return Err(ArchiveError::HeaderOverflow(self.genus, self.coeffs.len()));
        }
        w.write_all(&MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&[self.genus as u8, self.coeffs.len() as u8])?;
        for c in &self.coeffs {
            w.write_all(&c.to_le_bytes())?;
        }
        w.write_all(&self.x_max.to_le_bytes())?;
        w.write_all(&(self.records.len() as u64).to_le_bytes())?;
        for r in &self.records {
            w.write_all(&r.p.to_le_bytes())?;
            w.write_all(&r.a1.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self, ArchiveError> {
        let mut r = BufReader::new(r);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if magic != MAGIC {
            return Err(ArchiveError::BadMagic);
        }
        let version = u16::from_le_bytes(read_array(&mut r)?);
        if version != VERSION {
            return Err(ArchiveError::UnsupportedVersion(version));
        }
        let [genus, ncoeffs] = read_array::<2>(&mut r)?;
        let coeffs = (0..ncoeffs)
            .map(|_| read_array(&mut r).map(i64::from_le_bytes))
            .collect::<Result<Vec<_>, _>>()?;
        let x_max = u64::from_le_bytes(read_array(&mut r)?);
        let count = u64::from_le_bytes(read_array(&mut r)?);
        let mut records = Vec::with_capacity(count.min(1 << 24) as usize);
        let mut last = 0u64;
        for _ in 0..count {
            let p = u64::from_le_bytes(read_array(&mut r)?);
            let a1 = i64::from_le_bytes(read_array(&mut r)?);
            if p <= last {
                return Err(ArchiveError::Unsorted(p));
            }
            last = p;
            records.push(FrobeniusRecord::new(p, a1));
        }
        Ok(TraceArchive { genus: genus as u32, coeffs, x_max, records })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        buf
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ArchiveError> {
        self.write_to(File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ArchiveError> {
        Self::read_from(File::open(path)?)
    }

    /// Records with `lo <= p < hi`.
    pub fn range(&self, lo: u64, hi: u64) -> &[FrobeniusRecord] {
        let a = self.records.partition_point(|r| r.p < lo);
        let b = self.records.partition_point(|r| r.p < hi);
        &self.records[a..b.max(a)]
    }
}

fn read_array<const N: usize>(r: &mut impl Read) -> io::Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}
