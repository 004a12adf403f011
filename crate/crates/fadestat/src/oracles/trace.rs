//! Raw trace dump: a text header line `fadestat-trace v1 <sample_rate> <n_samples>`
//! followed by little-endian `f64` samples.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const MAGIC: &str = "fadestat-trace v1";

pub fn write_trace<W: Write>(mut w: W, sample_rate_hz: f64, samples: &[f64]) -> Result<()> {
    writeln!(w, "{MAGIC} {sample_rate_hz} {}", samples.len())?;
    for x in samples {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Returns the sample rate and the samples.
pub fn read_trace<R: BufRead>(mut r: R) -> Result<(f64, Vec<f64>)> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let rest = header
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| Error::InvalidConfig("not a fadestat trace".into()))?;
    let mut parts = rest.split_whitespace();
    let bad = || Error::InvalidConfig(format!("malformed trace header {header:?}"));
    let rate: f64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let n: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let mut buf = vec![0u8; n * 8];
    r.read_exact(&mut buf)?;
    let samples = buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((rate, samples))
}
