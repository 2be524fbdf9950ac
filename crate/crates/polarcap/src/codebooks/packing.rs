//! Max-min Grassmannian line packing.
//!
//! Each restart starts from random lines and descends a log-sum-exp smooth
//! maximum of the pairwise `|xᵢᴴxⱼ|²`, renormalizing after every step. The
//! temperature grows and the step size shrinks geometrically. The best
//! configuration seen (by true minimum distance) is kept, and the best
//! restart wins.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Codebook, CodebookKind};
use crate::channel::{sample_gaussian_vector, RngStream};
use crate::linalg::{inner_unchecked, ComplexVector, UnitVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackingOptions {
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 2000,
        }
    }
}

/// Quality audit of a packing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingReport {
    pub min_distance: f64,
    pub welch_rankin_bound: f64,
    pub iterations: usize,
    pub seed: u64,
}

/// Chordal simplex bound `√(count·(dim−1) / (dim·(count−1)))`, capped at 1.
///
/// A single line has no pairs; the bound is then 1.
pub fn welch_rankin_bound(dim: usize, count: usize) -> f64 {
    if count < 2 {
        return 1.0;
    }
    let (d, n) = (dim as f64, count as f64);
    ((n * (d - 1.0)) / (d * (n - 1.0))).sqrt().min(1.0)
}

pub(crate) fn min_distance_of(words: &[UnitVector]) -> f64 {
    let v: Vec<&[Complex64]> = words.iter().map(|w| w.entries()).collect();
    max_coherence_sqr(&v).map_or(1.0, |c| (1.0 - c).max(0.0).sqrt())
}

fn max_coherence_sqr<V: AsRef<[Complex64]>>(x: &[V]) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let c = inner_unchecked(x[i].as_ref(), x[j].as_ref()).norm_sqr();
            worst = Some(worst.map_or(c, |w| w.max(c)));
        }
    }
    worst
}

fn normalize(v: &mut [Complex64]) {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v {
        *z /= n;
    }
}

fn random_line(rng: &mut rand_chacha::ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    loop {
        let mut v = sample_gaussian_vector(rng, dim);
        if v.iter().any(|z| z.norm_sqr() > 0.0) {
            normalize(&mut v);
            return v;
        }
    }
}

const BETA_START: f64 = 10.0;
const BETA_END: f64 = 2.0e4;
const STEP_START: f64 = 0.2;
const STEP_END: f64 = 2.0e-4;

fn pack_once(
    dim: usize,
    count: usize,
    stream: RngStream,
    max_iters: usize,
) -> (Vec<Vec<Complex64>>, f64) {
    let mut rng = stream.generator();
    let mut x: Vec<Vec<Complex64>> = (0..count).map(|_| random_line(&mut rng, dim)).collect();
    let mut best = x.clone();
    let mut best_coh = max_coherence_sqr(&x).unwrap_or(0.0);

    let npairs = count * (count - 1) / 2;
    let mut ip = vec![Complex64::new(0.0, 0.0); npairs];
    let mut coh = vec![0.0f64; npairs];
    let mut grad = vec![vec![Complex64::new(0.0, 0.0); dim]; count];

    for it in 0..max_iters {
        let t = it as f64 / max_iters.max(1) as f64;
        let beta = BETA_START * (BETA_END / BETA_START).powf(t);
        let step = STEP_START * (STEP_END / STEP_START).powf(t);

        let mut k = 0;
        let mut cmax = 0.0f64;
        for i in 0..count {
            for j in i + 1..count {
                ip[k] = inner_unchecked(&x[j], &x[i]);
                coh[k] = ip[k].norm_sqr();
                cmax = cmax.max(coh[k]);
                k += 1;
            }
        }

        for g in grad.iter_mut() {
            g.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        }
        // Softmax weights of the smooth max; ∂|xⱼᴴxᵢ|²/∂x̄ᵢ = xⱼ(xⱼᴴxᵢ).
        let mut k = 0;
        for i in 0..count {
            for j in i + 1..count {
                let w = (beta * (coh[k] - cmax)).exp();
                let c = ip[k] * w;
                let (head, tail) = grad.split_at_mut(j);
                for d in 0..dim {
                    head[i][d] += x[j][d] * c;
                    tail[0][d] += x[i][d] * c.conj();
                }
                k += 1;
            }
        }

        let gmax = grad
            .iter()
            .map(|g| g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if gmax == 0.0 {
            break;
        }
        let scale = step / gmax;
        for (xi, gi) in x.iter_mut().zip(&grad) {
            for (a, b) in xi.iter_mut().zip(gi) {
                *a -= b * scale;
            }
            normalize(xi);
        }

        let c = max_coherence_sqr(&x).unwrap_or(0.0);
        if c < best_coh {
            best_coh = c;
            best.clone_from(&x);
        }
    }
    (best, (1.0 - best_coh).max(0.0).sqrt())
}

/// Packs `count` lines in `C^dim` with the default number of restarts.
pub fn grassmannian_pack(
    dim: usize,
    count: usize,
    seed: u64,
    max_iters: usize,
) -> Result<(Codebook, PackingReport)> {
    grassmannian_pack_with(
        dim,
        count,
        seed,
        &PackingOptions {
            max_iters,
            ..PackingOptions::default()
        },
    )
}

/// Packs `count` lines in `C^dim`.
///
/// Restart `r` draws from stream `(seed, r)`; restarts run in parallel and the
/// winner is the largest minimum distance, lowest restart index on ties.
pub fn grassmannian_pack_with(
    dim: usize,
    count: usize,
    seed: u64,
    opts: &PackingOptions,
) -> Result<(Codebook, PackingReport)> {
    if dim < 1 {
        return Err(Error::invalid("dim", "must be at least 1"));
    }
    if count < 1 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    if opts.restarts < 1 {
        return Err(Error::invalid("restarts", "must be at least 1"));
    }

    let lines: Vec<Vec<Complex64>> = if dim == 1 {
        vec![vec![Complex64::new(1.0, 0.0)]; count]
    } else if count == 1 {
        let mut rng = RngStream::new(seed, 0).generator();
        vec![random_line(&mut rng, dim)]
    } else {
        let runs: Vec<(Vec<Vec<Complex64>>, f64)> = (0..opts.restarts)
            .into_par_iter()
            .map(|r| pack_once(dim, count, RngStream::new(seed, r as u64), opts.max_iters))
            .collect();
        let mut winner = 0;
        for (r, run) in runs.iter().enumerate() {
            if run.1 > runs[winner].1 {
                winner = r;
            }
        }
        runs.into_iter().nth(winner).expect("restarts ≥ 1").0
    };

    let words = lines
        .into_iter()
        .map(|v| UnitVector::new(ComplexVector::new(v)?))
        .collect::<Result<Vec<_>>>()?;
    let min_distance = min_distance_of(&words);
    let report = PackingReport {
        min_distance,
        welch_rankin_bound: welch_rankin_bound(dim, count),
        iterations: opts.max_iters,
        seed,
    };
    Ok((
        Codebook::new(words, CodebookKind::Grassmannian, None)?,
        report,
    ))
}
