//! On-disk formats: header-less CSV matrices, 0/1 mask CSVs, the binary
//! posterior sample stream, and JSON run manifests.
//!
//! CSV: comma-separated, one matrix row per line, floats printed with 17
//! significant digits (`{:.16e}`) so every `f64` round-trips bit-exactly.
//!
//! Sample stream: magic `HSGS`, version `u32 = 1`, then `n, p, q, nmc` as
//! little-endian `u64`, then `nmc` records of `p*q` little-endian `f64`
//! (`beta` in `vec(B')` order) followed by `q(q+1)/2` `f64` (the packed
//! upper triangle of `Omega`). Everything little-endian.
//!
//! Manifests are written atomically (temp file in the target directory,
//! then rename), so a manifest that exists is always complete.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::types::{tri_len, GibbsConfig, PosteriorSamples};
use crate::{Error, Result};

/// Magic bytes opening a sample stream.
pub const STREAM_MAGIC: [u8; 4] = *b"HSGS";
/// Current sample stream version.
pub const STREAM_VERSION: u32 = 1;

/// Write a matrix as header-less CSV with full-precision floats.
pub fn write_matrix_csv(path: &Path, m: &Array2<f64>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in m.rows() {
        let mut first = true;
        for v in row.iter() {
            if !first {
                w.write_all(b",")?;
            }
            write!(w, "{v:.16e}")?;
            first = false;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read a header-less CSV matrix, requiring rectangular shape and finite
/// values.
pub fn read_matrix_csv(path: &Path) -> Result<Array2<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split(',') {
            let v: f64 = tok.trim().parse().map_err(|_| {
                Error::Format(format!(
                    "{}: line {}: not a number: {tok:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Format(format!(
                    "{}: line {} has {} fields, expected {}",
                    path.display(),
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Format(format!("{}: empty matrix", path.display())));
    }
    let (nr, nc) = (rows.len(), rows[0].len());
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((nr, nc), flat)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Write a boolean mask as 0/1 CSV.
pub fn write_mask_csv(path: &Path, m: &Array2<bool>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in m.rows() {
        let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        w.write_all(line.join(",").as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read a 0/1 CSV mask, rejecting any other token.
pub fn read_mask_csv(path: &Path) -> Result<Array2<bool>> {
    let m = read_matrix_csv(path)?;
    let mut out = Array2::from_elem(m.dim(), false);
    for (idx, &v) in m.indexed_iter() {
        out[idx] = if v == 0.0 {
            false
        } else if v == 1.0 {
            true
        } else {
            return Err(Error::Format(format!(
                "{}: mask entry {v} is neither 0 nor 1",
                path.display()
            )));
        };
    }
    Ok(out)
}

/// Serialize posterior draws to the binary sample stream.
pub fn write_samples(path: &Path, samples: &PosteriorSamples) -> Result<()> {
    samples.validate()?;
    let (n, p, q) = samples.dims;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&STREAM_MAGIC)?;
    w.write_u32::<LittleEndian>(STREAM_VERSION)?;
    for dim in [n, p, q, samples.nmc()] {
        w.write_u64::<LittleEndian>(dim as u64)?;
    }
    for draw in 0..samples.nmc() {
        for v in samples.beta_draws.row(draw).iter() {
            w.write_f64::<LittleEndian>(*v)?;
        }
        for v in samples.omega_draws.row(draw).iter() {
            w.write_f64::<LittleEndian>(*v)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Header of a sample stream: `(n, p, q, nmc)`.
pub fn read_samples_header(path: &Path) -> Result<(usize, usize, usize, usize)> {
    let mut r = BufReader::new(File::open(path)?);
    read_header(&mut r, path)
}

fn read_header(r: &mut impl Read, path: &Path) -> Result<(usize, usize, usize, usize)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format(format!("{}: too short for a sample stream", path.display())))?;
    if magic != STREAM_MAGIC {
        return Err(Error::Format(format!(
            "{}: bad magic {magic:?}, expected {STREAM_MAGIC:?}",
            path.display()
        )));
    }
    let version = r
        .read_u32::<LittleEndian>()
        .map_err(|_| Error::Format(format!("{}: truncated version", path.display())))?;
    if version != STREAM_VERSION {
        return Err(Error::Format(format!(
            "{}: unsupported stream version {version}",
            path.display()
        )));
    }
    let mut dims = [0usize; 4];
    for d in dims.iter_mut() {
        let v = r
            .read_u64::<LittleEndian>()
            .map_err(|_| Error::Format(format!("{}: truncated header", path.display())))?;
        *d = usize::try_from(v)
            .map_err(|_| Error::Format(format!("{}: dimension {v} too large", path.display())))?;
    }
    Ok((dims[0], dims[1], dims[2], dims[3]))
}

/// Deserialize a sample stream.
///
/// The stream carries no sampler configuration, so the returned
/// [`PosteriorSamples::config`] is a placeholder (`burnin = 0`, `thin = 1`,
/// `seed = 0`, `nmc` from the header); only the draws and dimensions are
/// authoritative.
pub fn read_samples(path: &Path) -> Result<PosteriorSamples> {
    let mut r = BufReader::new(File::open(path)?);
    let (n, p, q, nmc) = read_header(&mut r, path)?;
    let (pq, tri) = (p * q, tri_len(q));
    let mut beta_draws = Array2::zeros((nmc, pq));
    let mut omega_draws = Array2::zeros((nmc, tri));
    for draw in 0..nmc {
        for j in 0..pq {
            beta_draws[(draw, j)] = r.read_f64::<LittleEndian>().map_err(|_| {
                Error::Format(format!(
                    "{}: truncated at draw {draw} (expected {nmc} records)",
                    path.display()
                ))
            })?;
        }
        for j in 0..tri {
            omega_draws[(draw, j)] = r.read_f64::<LittleEndian>().map_err(|_| {
                Error::Format(format!(
                    "{}: truncated at draw {draw} (expected {nmc} records)",
                    path.display()
                ))
            })?;
        }
    }
    let mut tail = [0u8; 1];
    if r.read(&mut tail)? != 0 {
        return Err(Error::Format(format!(
            "{}: trailing bytes after {nmc} records",
            path.display()
        )));
    }
    let samples = PosteriorSamples {
        beta_draws,
        omega_draws,
        dims: (n, p, q),
        config: GibbsConfig { burnin: 0, nmc, thin: 1, seed: 0, pd_jitter: 0.0 },
    };
    samples.validate()?;
    Ok(samples)
}

/// Reproducibility record written next to every command's outputs: the
/// command, its fully resolved parameters, and enough bookkeeping to
/// regenerate the outputs byte-identically on the same build.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub wall_seconds: f64,
    pub version: String,
    /// Free-form notes, e.g. lenient padding applied by a generator.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, params: serde_json::Value, seed: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            params,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            wall_seconds: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
            notes: Vec::new(),
        }
    }
}

/// Write a manifest atomically: serialize to a temp file in the same
/// directory, then rename over the target.
pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<()> {
    let json = serde_json::to_string_pretty(manifest)?;
    let tmp = path.with_extension("json.tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        w.write_all(json.as_bytes())?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{std_normal, Rng};
    use ndarray::array;
    use tempfile::tempdir;

    #[test]
    fn csv_roundtrip_is_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let m = array![
            [1.0, -2.5e-17, std::f64::consts::PI],
            [1.0 / 3.0, 6.02214076e23, -0.1]
        ];
        write_matrix_csv(&path, &m).unwrap();
        let back = read_matrix_csv(&path).unwrap();
        assert_eq!(m, back, "CSV round-trip must be bit-exact");
    }

    #[test]
    fn csv_rejects_malformed() {
        let dir = tempdir().unwrap();
        let ragged = dir.path().join("ragged.csv");
        std::fs::write(&ragged, "1,2\n3\n").unwrap();
        assert!(matches!(read_matrix_csv(&ragged), Err(Error::Format(_))));

        let junk = dir.path().join("junk.csv");
        std::fs::write(&junk, "1,apple\n").unwrap();
        assert!(matches!(read_matrix_csv(&junk), Err(Error::Format(_))));

        let empty = dir.path().join("empty.csv");
        std::fs::write(&empty, "").unwrap();
        assert!(matches!(read_matrix_csv(&empty), Err(Error::Format(_))));
    }

    #[test]
    fn mask_roundtrip_and_validation() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("mask.csv");
        let m = array![[true, false], [false, true]];
        write_mask_csv(&path, &m).unwrap();
        assert_eq!(read_mask_csv(&path).unwrap(), m);

        std::fs::write(&path, "0,2\n1,1\n").unwrap();
        assert!(matches!(read_mask_csv(&path), Err(Error::Format(_))));
    }

    fn fake_samples(n: usize, p: usize, q: usize, nmc: usize, seed: u64) -> PosteriorSamples {
        let mut rng = Rng::from_seed(seed);
        PosteriorSamples {
            beta_draws: Array2::from_shape_fn((nmc, p * q), |_| std_normal(&mut rng)),
            omega_draws: Array2::from_shape_fn((nmc, tri_len(q)), |_| std_normal(&mut rng)),
            dims: (n, p, q),
            config: GibbsConfig::default(),
        }
    }

    #[test]
    fn stream_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("samples.bin");
        let s = fake_samples(7, 3, 2, 5, 111);
        write_samples(&path, &s).unwrap();

        let header = read_samples_header(&path).unwrap();
        assert_eq!(header, (7, 3, 2, 5));

        let back = read_samples(&path).unwrap();
        assert_eq!(back.dims, (7, 3, 2));
        assert_eq!(back.beta_draws, s.beta_draws);
        assert_eq!(back.omega_draws, s.omega_draws);

        // Expected byte count: 4 + 4 + 4*8 + nmc*(pq + tri)*8.
        let len = std::fs::metadata(&path).unwrap().len();
        assert_eq!(len, 4 + 4 + 32 + 5 * (6 + 3) * 8);
    }

    #[test]
    fn stream_rejects_corruption() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("samples.bin");
        let s = fake_samples(4, 2, 2, 3, 112);
        write_samples(&path, &s).unwrap();

        // Truncate mid-record.
        let bytes = std::fs::read(&path).unwrap();
        let cut = path.with_extension("cut");
        std::fs::write(&cut, &bytes[..bytes.len() - 11]).unwrap();
        assert!(matches!(read_samples(&cut), Err(Error::Format(_))));

        // Trailing garbage.
        let mut extended = bytes.clone();
        extended.push(0);
        let ext = path.with_extension("ext");
        std::fs::write(&ext, &extended).unwrap();
        assert!(matches!(read_samples(&ext), Err(Error::Format(_))));

        // Bad magic.
        let mut bad = bytes.clone();
        bad[0] = b'X';
        std::fs::write(&path, &bad).unwrap();
        assert!(matches!(read_samples(&path), Err(Error::Format(_))));
    }

    #[test]
    fn manifest_roundtrip_atomic() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("run.manifest.json");
        let mut m = RunManifest::new("fit", serde_json::json!({"nmc": 10}), 42);
        m.outputs.push(PathBuf::from("samples.bin"));
        m.wall_seconds = 1.25;
        m.notes.push("example note".into());
        write_manifest(&path, &m).unwrap();

        // No temp file left behind.
        let leftovers: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.path().extension().map(|x| x == "tmp").unwrap_or(false))
            .collect();
        assert!(leftovers.is_empty());

        let back = read_manifest(&path).unwrap();
        assert_eq!(back.command, "fit");
        assert_eq!(back.seed, 42);
        assert_eq!(back.params["nmc"], 10);
        assert_eq!(back.notes, vec!["example note".to_string()]);
    }
}
