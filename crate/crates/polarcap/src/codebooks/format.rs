//! Codebook text format.
//!
//! ```text
//! # optional comment lines
//! <dim> <count> <kind> [radius]
//! <re> <im> <re> <im> ...      one line per codeword, dim pairs
//! ```
//!
//! Floats are written with 17 significant digits so the file reads back
//! bit-identical. The radius is present exactly for the polar-cap kinds.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::{grassmannian_pack_with, Codebook, CodebookKind, PackingOptions, PackingReport};
use crate::linalg::{ComplexVector, UnitVector};
use crate::{Error, Result};

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_codebook(cb: &Codebook) -> String {
    let mut out = format!("{} {} {}", cb.dim(), cb.len(), cb.kind());
    if let Some(r) = cb.radius() {
        write!(out, " {}", fmt_f64(r)).unwrap();
    }
    out.push('\n');
    for c in cb.codewords() {
        let line: Vec<String> = c
            .entries()
            .iter()
            .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn read_codebook(text: &str) -> Result<Codebook> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 3 {
        return Err(parse_err(hl, "header needs `dim count kind [radius]`"));
    }
    let dim: usize = parse_num(toks[0], hl, "dim")?;
    let count: usize = parse_num(toks[1], hl, "count")?;
    let kind: CodebookKind = toks[2]
        .parse()
        .map_err(|e: Error| parse_err(hl, e.to_string()))?;
    let radius = match (kind.is_pcc(), toks.len()) {
        (true, 4) => Some(parse_num::<f64>(toks[3], hl, "radius")?),
        (false, 3) => None,
        _ => return Err(parse_err(hl, format!("wrong header arity for kind {kind}"))),
    };

    let mut words = Vec::with_capacity(count);
    for (ln, line) in lines {
        let vals = line
            .split_whitespace()
            .map(|t| parse_num::<f64>(t, ln, "float"))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != 2 * dim {
            return Err(parse_err(
                ln,
                format!("expected {} numbers, got {}", 2 * dim, vals.len()),
            ));
        }
        let entries = vals.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let v = ComplexVector::new(entries).map_err(|e| parse_err(ln, e.to_string()))?;
        words.push(UnitVector::new(v).map_err(|e| parse_err(ln, e.to_string()))?);
    }
    if words.len() != count {
        return Err(parse_err(
            hl,
            format!("header says {count} codewords, found {}", words.len()),
        ));
    }
    Codebook::new(words, kind, radius)
}

/// On-disk cache of Grassmannian packings keyed by `(dim, count, seed)`.
///
/// Each entry is a codebook file whose leading comment records the
/// [`PackingReport`].
#[derive(Debug, Clone)]
pub struct PackingCache {
    dir: PathBuf,
}

impl PackingCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, dim: usize, count: usize, seed: u64) -> PathBuf {
        self.dir
            .join(format!("grassmannian_d{dim}_n{count}_s{seed}.txt"))
    }

    /// Loads the cached packing or computes and stores it.
    pub fn get_or_pack(
        &self,
        dim: usize,
        count: usize,
        seed: u64,
        opts: &PackingOptions,
    ) -> Result<(Codebook, PackingReport)> {
        let path = self.path_for(dim, count, seed);
        if path.exists() {
            let text = fs::read_to_string(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            return decode_entry(&text, seed);
        }
        let (cb, report) = grassmannian_pack_with(dim, count, seed, opts)?;
        fs::create_dir_all(&self.dir).map_err(|source| Error::Io {
            path: self.dir.clone(),
            source,
        })?;
        fs::write(&path, encode_entry(&cb, &report))
            .map_err(|source| Error::Io { path, source })?;
        Ok((cb, report))
    }
}

pub(crate) fn encode_entry(cb: &Codebook, report: &PackingReport) -> String {
    format!(
        "# packing min_distance={} bound={} iterations={} seed={}\n{}",
        fmt_f64(report.min_distance),
        fmt_f64(report.welch_rankin_bound),
        report.iterations,
        report.seed,
        write_codebook(cb)
    )
}

fn decode_entry(text: &str, seed: u64) -> Result<(Codebook, PackingReport)> {
    let cb = read_codebook(text)?;
    let iterations = text
        .lines()
        .next()
        .and_then(|l| {
            l.split_whitespace()
                .find_map(|t| t.strip_prefix("iterations="))
        })
        .and_then(|v| v.parse().ok())
        .unwrap_or(0);
    let min_distance = if cb.len() < 2 {
        1.0
    } else {
        super::min_pairwise_distance(&cb, false)?
    };
    let report = PackingReport {
        min_distance,
        welch_rankin_bound: super::welch_rankin_bound(cb.dim(), cb.len()),
        iterations,
        seed,
    };
    Ok((cb, report))
}
