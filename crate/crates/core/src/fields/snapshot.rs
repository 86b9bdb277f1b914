//! Flat binary field snapshots for external plotting.
//!
//! Layout, little-endian: magic `G2FS`, `u32` version, valence tag `u8` with
//! two `u8` parameters, boundary `u8`, then per axis `u32` resolution, `f64`
//! spacing, `f64` origin, `u8` uniform flag, `u32` start, `u32` length, then a
//! `u64` value count and the values as `f64`, point-major with the last axis
//! fastest.

use std::io::{Read, Write};

use super::{AxisExtent, Boundary, Chart, TensorField, Valence};
use crate::error::{Error, Result};
use crate::exterior::DIM;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"G2FS";
const VERSION: u32 = 1;

pub fn write_snapshot<W: Write>(field: &TensorField, mut w: W) -> Result<()> {
    let c = field.chart();
    w.write_all(SNAPSHOT_MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    let (tag, p0, p1) = match field.valence() {
        Valence::Form(k) => (0u8, k as u8, 0u8),
        Valence::Tensor { up, down } => (1, up as u8, down as u8),
        Valence::FormGradient(k) => (2, k as u8, 0),
    };
    w.write_all(&[tag, p0, p1, (c.boundary() == Boundary::Periodic) as u8])?;
    for a in 0..DIM {
        w.write_all(&(c.resolution()[a] as u32).to_le_bytes())?;
        w.write_all(&c.spacing()[a].to_le_bytes())?;
        w.write_all(&c.origin()[a].to_le_bytes())?;
        let (uniform, start, len) = match field.extents()[a] {
            AxisExtent::Uniform => (1u8, 0u32, 1u32),
            AxisExtent::Span { start, len } => (0, start as u32, len as u32),
        };
        w.write_all(&[uniform])?;
        w.write_all(&start.to_le_bytes())?;
        w.write_all(&len.to_le_bytes())?;
    }
    w.write_all(&(field.values().len() as u64).to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn take<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<TensorField> {
    if &take::<4, _>(&mut r)? != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(&mut r)?);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let [tag, p0, p1, periodic] = take(&mut r)?;
    let valence = match tag {
        0 => Valence::Form(p0 as usize),
        1 => Valence::Tensor {
            up: p0 as usize,
            down: p1 as usize,
        },
        2 => Valence::FormGradient(p0 as usize),
        t => return Err(Error::Snapshot(format!("unknown valence tag {t}"))),
    };
    valence.validate().map_err(|e| Error::Snapshot(e.to_string()))?;
    let mut resolution = [0usize; DIM];
    let mut spacing = [0.0; DIM];
    let mut origin = [0.0; DIM];
    let mut extents = [AxisExtent::Uniform; DIM];
    for a in 0..DIM {
        resolution[a] = u32::from_le_bytes(take(&mut r)?) as usize;
        spacing[a] = f64::from_le_bytes(take(&mut r)?);
        origin[a] = f64::from_le_bytes(take(&mut r)?);
        let [uniform] = take(&mut r)?;
        let start = u32::from_le_bytes(take(&mut r)?) as usize;
        let len = u32::from_le_bytes(take(&mut r)?) as usize;
        if uniform == 0 {
            if len == 0 || start + len > resolution[a] {
                return Err(Error::Snapshot(format!("axis {a} span out of range")));
            }
            extents[a] = AxisExtent::Span { start, len };
        }
    }
    let boundary = if periodic == 1 {
        Boundary::Periodic
    } else {
        Boundary::InteriorOnly
    };
    let chart = Chart::new(resolution, spacing, origin, boundary)?;
    let count = u64::from_le_bytes(take(&mut r)?) as usize;
    let points: usize = extents.iter().map(|e| e.len()).product();
    if count != points * valence.components() {
        return Err(Error::Snapshot(format!(
            "value count {count} does not match {points} points of {valence:?}"
        )));
    }
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        values.push(f64::from_le_bytes(take(&mut r)?));
    }
    Ok(TensorField {
        chart,
        valence,
        extents,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = Chart::periodic([6, 5, 5, 5, 5, 5, 5], [1.0; DIM]).unwrap();
        let mut dep = [false; DIM];
        dep[0] = true;
        let f = TensorField::sample(&c, Valence::Form(1), dep, |x| (0..7).map(|i| x[0] + i as f64).collect()).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&f, &mut buf).unwrap();
        assert_eq!(&buf[..4], SNAPSHOT_MAGIC);
        let g = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn truncated_input_fails() {
        let c = Chart::periodic([5; DIM], [1.0; DIM]).unwrap();
        let f = TensorField::constant(&c, Valence::SCALAR, &[1.0]).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&f, &mut buf).unwrap();
        assert!(read_snapshot(&buf[..buf.len() - 3]).is_err());
        assert!(read_snapshot(&b"XXXX"[..]).is_err());
    }
}
