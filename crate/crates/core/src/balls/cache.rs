//! Ball cache files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    4 bytes  "HSCB"
//! version  u32
//! spec     u32 length + UTF-8 canonical GroupSpec string
//! radius   u32
//! count    u64
//! records  count × (u32 byte length, canonical element bytes, u32 element length)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::Ball;
use crate::error::{Error, Result};
use crate::group::{Element, GroupModel};

pub const CACHE_MAGIC: &[u8; 4] = b"HSCB";
pub const CACHE_VERSION: u32 = 1;

pub fn cache_save(ball: &Ball, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    let spec = ball.model().spec().to_string();
    w.write_all(&(spec.len() as u32).to_le_bytes())?;
    w.write_all(spec.as_bytes())?;
    w.write_all(&ball.radius().to_le_bytes())?;
    w.write_all(&(ball.len() as u64).to_le_bytes())?;
    for (x, l) in ball.iter() {
        let bytes = x.canonical_bytes();
        w.write_all(&(bytes.len() as u32).to_le_bytes())?;
        w.write_all(&bytes)?;
        w.write_all(&l.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Loads a ball saved for `model`; the header must name the same spec.
pub fn cache_load(model: &GroupModel, path: &Path) -> Result<Ball> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::CacheMismatch(format!("{} is not a ball cache file", path.display())));
    }
    let version = read_u32(&mut r)?;
    if version != CACHE_VERSION {
        return Err(Error::CacheMismatch(format!(
            "cache format version {version}, expected {CACHE_VERSION}"
        )));
    }
    let spec_len = read_u32(&mut r)? as usize;
    let mut spec = vec![0u8; spec_len];
    r.read_exact(&mut spec)?;
    let spec = String::from_utf8(spec).map_err(|_| Error::CacheMismatch("spec header is not UTF-8".into()))?;
    let expected = model.spec().to_string();
    if spec != expected {
        return Err(Error::CacheMismatch(format!("cache holds {spec}, model is {expected}")));
    }
    let radius = read_u32(&mut r)?;
    let count = read_u64(&mut r)?;
    let mut pairs = Vec::with_capacity(count.min(1 << 24) as usize);
    for _ in 0..count {
        let n = read_u32(&mut r)? as usize;
        let mut bytes = vec![0u8; n];
        r.read_exact(&mut bytes)?;
        let x = Element::from_canonical_bytes(&bytes)
            .filter(|x| model.is_valid(x))
            .ok_or_else(|| Error::CacheMismatch("malformed element record".into()))?;
        let l = read_u32(&mut r)?;
        pairs.push((x, l));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::CacheMismatch("trailing bytes after the last record".into()));
    }
    Ball::from_pairs(model.clone(), radius, pairs)
}
