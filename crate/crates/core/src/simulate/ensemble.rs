//! On-disk layout of a [`PathEnsemble`], all fields little-endian:
//!
//! | bytes | field                         |
//! |-------|-------------------------------|
//! | 8     | magic `HLITOENS`              |
//! | 4     | `u32` format version (1)      |
//! | 8     | `u64` number of paths         |
//! | 8     | `u64` number of steps         |
//! | 8     | `f64` dt                      |
//! | 8     | `u64` seed                    |
//! | 24    | `f64` r, omega, sigma2        |
//!
//! followed by `n_paths × (n_steps + 1)` pairs `(re, im)` of `f64`, path by
//! path. Header size is 68 bytes.

use std::fmt::Write as _;
use std::io::{Read, Write};

use super::ou::PathEnsemble;
use crate::error::{Error, Result};
use crate::{Complex64, OUParams};

pub const ENSEMBLE_MAGIC: &[u8; 8] = b"HLITOENS";
pub const ENSEMBLE_VERSION: u32 = 1;

pub fn write_ensemble<W: Write>(ensemble: &PathEnsemble, mut w: W) -> Result<()> {
    w.write_all(ENSEMBLE_MAGIC)?;
    w.write_all(&ENSEMBLE_VERSION.to_le_bytes())?;
    w.write_all(&(ensemble.n_paths() as u64).to_le_bytes())?;
    w.write_all(&(ensemble.n_steps() as u64).to_le_bytes())?;
    w.write_all(&ensemble.dt.to_le_bytes())?;
    w.write_all(&ensemble.seed.to_le_bytes())?;
    let p = &ensemble.params;
    for v in [p.r(), p.omega(), p.sigma2()] {
        w.write_all(&v.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(16 * (ensemble.n_steps() + 1));
    for path in &ensemble.paths {
        buf.clear();
        for z in path {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    Ok(u64::from_le_bytes(read_array(r)?))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array(r)?))
}

pub fn read_ensemble<R: Read>(mut r: R) -> Result<PathEnsemble> {
    let magic: [u8; 8] = read_array(&mut r)?;
    if &magic != ENSEMBLE_MAGIC {
        return Err(Error::InvalidArgument("not an ensemble file (bad magic)".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != ENSEMBLE_VERSION {
        return Err(Error::InvalidArgument(format!("unsupported ensemble version {version}")));
    }
    let n_paths = read_u64(&mut r)? as usize;
    let n_steps = read_u64(&mut r)? as usize;
    let dt = read_f64(&mut r)?;
    let seed = read_u64(&mut r)?;
    let params = OUParams::new(read_f64(&mut r)?, read_f64(&mut r)?, read_f64(&mut r)?)?;
    let mut paths = Vec::with_capacity(n_paths);
    for _ in 0..n_paths {
        let mut path = Vec::with_capacity(n_steps + 1);
        for _ in 0..=n_steps {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            path.push(Complex64::new(re, im));
        }
        paths.push(path);
    }
    Ok(PathEnsemble {
        paths,
        dt,
        seed,
        params,
    })
}

/// `path,step,t,re,im` rows; floats in shortest round-trip form.
pub fn ensemble_to_csv(ensemble: &PathEnsemble) -> String {
    let mut out = String::from("path,step,t,re,im\n");
    for (p, path) in ensemble.paths.iter().enumerate() {
        for (k, z) in path.iter().enumerate() {
            let _ = writeln!(out, "{p},{k},{:?},{:?},{:?}", k as f64 * ensemble.dt, z.re, z.im);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{sample_ou, Start};

    fn small() -> PathEnsemble {
        let p = OUParams::new(1.2, -0.4, 0.6).unwrap();
        sample_ou(&p, Start::Stationary, 0.25, 5, 3, 77).unwrap()
    }

    #[test]
    fn binary_round_trip() {
        let e = small();
        let mut bytes = Vec::new();
        write_ensemble(&e, &mut bytes).unwrap();
        assert_eq!(bytes.len(), 68 + 3 * 6 * 16);
        assert_eq!(&bytes[..8], b"HLITOENS");
        assert_eq!(read_ensemble(&bytes[..]).unwrap(), e);
    }

    #[test]
    fn rejects_corrupt_input() {
        let e = small();
        let mut bytes = Vec::new();
        write_ensemble(&e, &mut bytes).unwrap();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(read_ensemble(&bad[..]).is_err());
        assert!(read_ensemble(&bytes[..bytes.len() - 1]).is_err());
        let mut wrong_version = bytes;
        wrong_version[8] = 9;
        assert!(read_ensemble(&wrong_version[..]).is_err());
    }

    #[test]
    fn csv_layout() {
        let e = small();
        let csv = ensemble_to_csv(&e);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "path,step,t,re,im");
        assert_eq!(lines.len(), 1 + 3 * 6);
        assert!(lines[2].starts_with("0,1,0.25,"));
        let last: Vec<f64> = lines[18].split(',').skip(3).map(|s| s.parse().unwrap()).collect();
        assert_eq!(Complex64::new(last[0], last[1]), e.paths[2][5]);
    }
}
