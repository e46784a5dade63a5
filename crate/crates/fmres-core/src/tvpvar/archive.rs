//! Binary persistence for posterior samples.
//!
//! Layout: a 10-byte magic tag, a little-endian `u64` giving the length of a
//! JSON header (shapes plus free-form string annotations), then the numeric
//! payload as little-endian `f64` tensors in a fixed order: the three path
//! draws, the three standard-deviation chains, the three mean paths.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tvpvar::{ChainDraws, PathDraws, TvpVarPosterior};

const MAGIC: &[u8; 10] = b"FMRESPOST\x01";

#[derive(Serialize, Deserialize)]
struct Header {
    k: usize,
    lags: usize,
    t: usize,
    draws: usize,
    dim_beta: usize,
    dim_alpha: usize,
    annotations: BTreeMap<String, String>,
}

fn write_f64s<W: Write>(w: &mut W, values: &[f64]) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(8 * 65_536);
    for chunk in values.chunks(65_536) {
        buf.clear();
        for v in chunk {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_f64s<R: Read>(r: &mut R, len: usize, what: &str) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(len);
    let mut buf = vec![0u8; 8 * 65_536];
    let mut remaining = len;
    while remaining > 0 {
        let take = remaining.min(65_536);
        let bytes = &mut buf[..8 * take];
        r.read_exact(bytes).map_err(|_| {
            Error::invalid(format!(
                "posterior archive is truncated while reading {what} ({len} values expected)"
            ))
        })?;
        for i in 0..take {
            let mut b = [0u8; 8];
            b.copy_from_slice(&bytes[8 * i..8 * i + 8]);
            out.push(f64::from_le_bytes(b));
        }
        remaining -= take;
    }
    Ok(out)
}

/// Write a posterior and its annotations to `path`.
pub fn save_posterior(
    path: &Path,
    post: &TvpVarPosterior,
    annotations: &BTreeMap<String, String>,
) -> Result<()> {
    let t = post.t_len();
    let header = Header {
        k: post.k,
        lags: post.lags,
        t,
        draws: post.beta.n_draws(),
        dim_beta: post.beta.dim(),
        dim_alpha: post.alpha.dim(),
        annotations: annotations.clone(),
    };
    let header_json = serde_json::to_vec(&header)
        .map_err(|e| Error::invalid(format!("cannot encode archive header: {e}")))?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e| Error::io(path, e);
    w.write_all(MAGIC).map_err(io_err)?;
    w.write_all(&(header_json.len() as u64).to_le_bytes())
        .map_err(io_err)?;
    w.write_all(&header_json).map_err(io_err)?;
    write_f64s(&mut w, post.beta.raw()).map_err(io_err)?;
    write_f64s(&mut w, post.alpha.raw()).map_err(io_err)?;
    write_f64s(&mut w, post.h.raw()).map_err(io_err)?;
    write_f64s(&mut w, post.sigma_beta.raw()).map_err(io_err)?;
    write_f64s(&mut w, post.sigma_alpha.raw()).map_err(io_err)?;
    write_f64s(&mut w, post.sigma_h.raw()).map_err(io_err)?;
    for path_slice in [&post.beta_mean, &post.alpha_mean, &post.h_mean] {
        for v in path_slice {
            write_f64s(&mut w, v.as_slice()).map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

/// Read a posterior and its annotations back from `path`.
pub fn load_posterior(path: &Path) -> Result<(TvpVarPosterior, BTreeMap<String, String>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut magic = [0u8; 10];
    r.read_exact(&mut magic).map_err(|e| Error::io(path, e))?;
    if &magic != MAGIC {
        return Err(Error::invalid(format!(
            "{} is not a posterior archive (bad magic bytes)",
            path.display()
        )));
    }
    let mut len_bytes = [0u8; 8];
    r.read_exact(&mut len_bytes).map_err(|e| Error::io(path, e))?;
    let header_len = u64::from_le_bytes(len_bytes) as usize;
    if header_len > 16 * 1024 * 1024 {
        return Err(Error::invalid("posterior archive header is implausibly large"));
    }
    let mut header_json = vec![0u8; header_len];
    r.read_exact(&mut header_json)
        .map_err(|e| Error::io(path, e))?;
    let header: Header = serde_json::from_slice(&header_json)
        .map_err(|e| Error::invalid(format!("posterior archive header is malformed: {e}")))?;
    let Header {
        k,
        lags,
        t,
        draws,
        dim_beta,
        dim_alpha,
        annotations,
    } = header;
    if dim_beta != k * (1 + k * lags) || dim_alpha != k * (k - 1) / 2 || t == 0 || draws == 0 {
        return Err(Error::invalid(
            "posterior archive header has inconsistent shapes",
        ));
    }

    let beta = PathDraws::from_raw(t, dim_beta, read_f64s(&mut r, draws * t * dim_beta, "coefficient draws")?)?;
    let alpha = PathDraws::from_raw(t, dim_alpha, read_f64s(&mut r, draws * t * dim_alpha, "impact draws")?)?;
    let h = PathDraws::from_raw(t, k, read_f64s(&mut r, draws * t * k, "volatility draws")?)?;
    let sigma_beta = ChainDraws::from_raw(dim_beta, read_f64s(&mut r, draws * dim_beta, "coefficient innovation chains")?)?;
    let sigma_alpha = ChainDraws::from_raw(dim_alpha, read_f64s(&mut r, draws * dim_alpha, "impact innovation chains")?)?;
    let sigma_h = ChainDraws::from_raw(k, read_f64s(&mut r, draws * k, "volatility innovation chains")?)?;
    let read_mean = |r: &mut BufReader<File>, dim: usize, what: &str| -> Result<Vec<DVector<f64>>> {
        let flat = read_f64s(r, t * dim, what)?;
        Ok((0..t)
            .map(|i| DVector::from_column_slice(&flat[i * dim..(i + 1) * dim]))
            .collect())
    };
    let beta_mean = read_mean(&mut r, dim_beta, "coefficient means")?;
    let alpha_mean = read_mean(&mut r, dim_alpha, "impact means")?;
    let h_mean = read_mean(&mut r, k, "volatility means")?;

    let mut trailing = [0u8; 1];
    if r.read(&mut trailing).map_err(|e| Error::io(path, e))? != 0 {
        return Err(Error::invalid(
            "posterior archive has trailing bytes after the expected payload",
        ));
    }

    Ok((
        TvpVarPosterior {
            k,
            lags,
            beta,
            alpha,
            h,
            sigma_beta,
            sigma_alpha,
            sigma_h,
            beta_mean,
            alpha_mean,
            h_mean,
        },
        annotations,
    ))
}
