//! Binary checkpoint format.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic    4 bytes  b"ACNN"
//! version  u32      currently 1
//! n_layers u32
//! per layer: in_dim u32, out_dim u32, activation tag u8
//! per layer: weights (out*in f64 LE), then biases (out f64 LE)
//! ```
//!
//! Parameters round-trip bit-exactly.

use std::path::Path;

use crate::error::Error;
use crate::nn::{Activation, Layer, MlpModel};
use crate::Result;

const MAGIC: &[u8; 4] = b"ACNN";
const VERSION: u32 = 1;

pub fn encode(model: &MlpModel) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(model.layers.len() as u32).to_le_bytes());
    for l in &model.layers {
        out.extend_from_slice(&(l.in_dim as u32).to_le_bytes());
        out.extend_from_slice(&(l.out_dim as u32).to_le_bytes());
        out.push(l.activation.tag());
    }
    for l in &model.layers {
        for w in l.weights.iter().chain(l.biases.iter()) {
            out.extend_from_slice(&w.to_bits().to_le_bytes());
        }
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<MlpModel> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.take(4)?;
    if magic != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let n_layers = cur.u32()? as usize;
    if n_layers == 0 || n_layers > 64 {
        return Err(Error::Checkpoint(format!("implausible layer count {n_layers}")));
    }
    let mut headers = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        let in_dim = cur.u32()? as usize;
        let out_dim = cur.u32()? as usize;
        let tag = cur.take(1)?[0];
        let activation = Activation::from_tag(tag)
            .ok_or_else(|| Error::Checkpoint(format!("unknown activation tag {tag}")))?;
        if in_dim == 0 || out_dim == 0 || in_dim > 1 << 20 || out_dim > 1 << 20 {
            return Err(Error::Checkpoint("implausible layer dims".into()));
        }
        headers.push((in_dim, out_dim, activation));
    }
    for pair in headers.windows(2) {
        if pair[0].1 != pair[1].0 {
            return Err(Error::Checkpoint(format!(
                "adjacent layer dims disagree: {} out vs {} in",
                pair[0].1, pair[1].0
            )));
        }
    }
    // reject absurd totals before allocating
    let total: usize = headers
        .iter()
        .map(|&(i, o, _)| i.checked_mul(o).and_then(|w| w.checked_add(o)))
        .try_fold(0usize, |acc, x| x.and_then(|x| acc.checked_add(x)))
        .ok_or_else(|| Error::Checkpoint("parameter count overflow".into()))?;
    if total > 1 << 26 {
        return Err(Error::Checkpoint("checkpoint too large".into()));
    }
    let mut layers = Vec::with_capacity(n_layers);
    for (in_dim, out_dim, activation) in headers {
        let mut weights = vec![0.0; in_dim * out_dim];
        for w in &mut weights {
            *w = cur.f64()?;
        }
        let mut biases = vec![0.0; out_dim];
        for b in &mut biases {
            *b = cur.f64()?;
        }
        if weights.iter().chain(biases.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Checkpoint("non-finite parameter".into()));
        }
        layers.push(Layer {
            in_dim,
            out_dim,
            weights,
            biases,
            activation,
        });
    }
    if cur.pos != bytes.len() {
        return Err(Error::Checkpoint("trailing bytes".into()));
    }
    Ok(MlpModel { layers })
}

pub fn save(model: &MlpModel, path: &Path) -> Result<()> {
    std::fs::write(path, encode(model)).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn load(path: &Path) -> Result<MlpModel> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    decode(&bytes)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Checkpoint("truncated".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        let b = self.take(8)?;
        Ok(f64::from_bits(u64::from_le_bytes(b.try_into().unwrap())))
    }
}
