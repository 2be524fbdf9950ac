//! Rician fading channel draws.
//!
//! `h = √(K/(K+1))·G·a(θ) + (1/√(K+1))·h_nlos` with `G ~ CN(0,1)` and
//! `h_nlos ~ CN(0, I)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{array_response, ComplexVector};
use crate::{Error, Result};

/// Key of an independent random stream.
///
/// The generator is ChaCha8 seeded from `master_seed` with its stream word set
/// to `stream_id`, so equal keys replay identical sequences and different
/// trials never overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Draws `CN(0, 1)`: independent `N(0, 1/2)` real and imaginary parts.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

pub(crate) fn sample_gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| sample_complex_gaussian(rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Rician K-factor, linear scale.
    pub k_factor: f64,
    pub n_t: usize,
    /// LOS angle in radians, `[0, π]`.
    pub theta: f64,
    pub d_over_lambda: f64,
}

impl ChannelParams {
    pub fn new(k_factor: f64, n_t: usize, theta: f64, d_over_lambda: f64) -> Result<Self> {
        let p = Self {
            k_factor,
            n_t,
            theta,
            d_over_lambda,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_factor >= 0.0 && self.k_factor.is_finite()) {
            return Err(Error::invalid(
                "k_factor",
                "must be a finite nonnegative real",
            ));
        }
        if self.n_t < 2 {
            return Err(Error::invalid("n_t", "need at least 2 transmit antennas"));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::invalid(
                "theta",
                format!("{} is outside [0, π]", self.theta),
            ));
        }
        if !(self.d_over_lambda > 0.0 && self.d_over_lambda.is_finite()) {
            return Err(Error::invalid("d_over_lambda", "must be a positive real"));
        }
        Ok(())
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::new(self.k_factor, self.n_t, theta, self.d_over_lambda)
    }

    fn los_weights(&self) -> (f64, f64) {
        let k = self.k_factor;
        ((k / (k + 1.0)).sqrt(), 1.0 / (k + 1.0).sqrt())
    }

    /// Assembles `h` from its LOS gain and NLOS part.
    pub fn assemble(&self, g_los: Complex64, h_nlos: &ComplexVector) -> Result<ComplexVector> {
        let a = array_response(self.theta, self.n_t, self.d_over_lambda)?;
        crate::linalg::check_dims(self.n_t, h_nlos.dim())?;
        let (w_los, w_nlos) = self.los_weights();
        let los = g_los * w_los;
        ComplexVector::new(
            a.entries()
                .iter()
                .zip(h_nlos.entries())
                .map(|(a_k, n_k)| los * a_k + n_k * w_nlos)
                .collect(),
        )
    }
}

/// One channel draw with its components kept for auditing.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: ComplexVector,
    pub g_los: Complex64,
    pub h_nlos: ComplexVector,
}

impl ChannelRealization {
    /// Largest entrywise gap between the stored `h` and a fresh assembly.
    pub fn assembly_error(&self, params: &ChannelParams) -> Result<f64> {
        let again = params.assemble(self.g_los, &self.h_nlos)?;
        Ok(again
            .entries()
            .iter()
            .zip(self.h.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn realize<R: Rng + ?Sized>(
    params: &ChannelParams,
    g_los: Complex64,
    rng: &mut R,
) -> ChannelRealization {
    let h_nlos = ComplexVector::new(sample_gaussian_vector(rng, params.n_t))
        .expect("n_t ≥ 2 by ChannelParams");
    let h = params
        .assemble(g_los, &h_nlos)
        .expect("ChannelParams validated");
    ChannelRealization { h, g_los, h_nlos }
}

/// Draws `G_LOS`, then `h_nlos`, then assembles `h`.
pub fn sample_channel<R: Rng + ?Sized>(params: &ChannelParams, rng: &mut R) -> ChannelRealization {
    let g_los = sample_complex_gaussian(rng);
    realize(params, g_los, rng)
}

/// Draws a channel with `|G_LOS|² = g_los_sq` and a uniform LOS phase.
pub fn sample_channel_given_glos_sq<R: Rng + ?Sized>(
    params: &ChannelParams,
    g_los_sq: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if !(g_los_sq >= 0.0 && g_los_sq.is_finite()) {
        return Err(Error::invalid(
            "g_los_sq",
            "must be a finite nonnegative real",
        ));
    }
    let phase = rng.random::<f64>() * 2.0 * PI;
    let g_los = Complex64::from_polar(g_los_sq.sqrt(), phase);
    Ok(realize(params, g_los, rng))
}

/// `p`-quantile of `|G_LOS|² ~ Exp(1)`, i.e. `−ln(1 − p)`.
pub fn glos_sq_percentile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("{p} is outside (0, 1)")));
    }
    Ok(-(-p).ln_1p())
}

#[cfg(test)]
mod tests {
    #![allow(clippy::approx_constant)]

    use super::*;

    fn params(k: f64) -> ChannelParams {
        ChannelParams::new(k, 4, 1.1, 0.5).unwrap()
    }

    #[test]
    fn replay_is_identical() {
        let s = RngStream::new(9, 3);
        let a: Vec<_> = {
            let mut r = s.generator();
            (0..64).map(|_| sample_complex_gaussian(&mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = s.generator();
            (0..64).map(|_| sample_complex_gaussian(&mut r)).collect()
        };
        assert_eq!(a, b);
        let mut other = RngStream::new(9, 4).generator();
        assert_ne!(a[0], sample_complex_gaussian(&mut other));
    }

    #[test]
    fn gaussian_moments() {
        let n = 1_000_000;
        let mut rng = RngStream::new(1, 0).generator();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = 0.0;
        let mut cross = 0.0;
        for _ in 0..n {
            let z = sample_complex_gaussian(&mut rng);
            sum += z;
            pow += z.norm_sqr();
            cross += z.re * z.im;
        }
        let nf = n as f64;
        assert!((sum / nf).norm() <= 0.005);
        assert!((pow / nf - 1.0).abs() <= 0.005);
        // E[re·im] = 0 with sd 1/(2√n).
        assert!((cross / nf).abs() <= 3.0 * 0.5 / nf.sqrt());
    }

    #[test]
    fn rayleigh_limit_is_nlos() {
        let p = params(0.0);
        let mut rng = RngStream::new(5, 0).generator();
        let r = sample_channel(&p, &mut rng);
        assert_eq!(r.h, r.h_nlos);
    }

    #[test]
    fn strong_los_limit() {
        let p = params(1e12);
        let mut rng = RngStream::new(5, 1).generator();
        let a = array_response(p.theta, p.n_t, p.d_over_lambda).unwrap();
        let r = sample_channel(&p, &mut rng);
        let target = a.scale(r.g_los);
        let err: f64 =
            r.h.entries()
                .iter()
                .zip(target.entries())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
        assert!(err / target.norm() <= 1e-5);
    }

    #[test]
    fn conditioned_draws_fix_power() {
        let p = params(2.0);
        let mut rng = RngStream::new(8, 0).generator();
        for g in [0.0, 0.0513, 1.0, 7.5] {
            let r = sample_channel_given_glos_sq(&p, g, &mut rng).unwrap();
            assert!((r.g_los.norm_sqr() - g).abs() <= 1e-12);
            assert!(r.assembly_error(&p).unwrap() <= 1e-12);
        }
        let r = sample_channel_given_glos_sq(&p, 0.0, &mut rng).unwrap();
        let expect = r.h_nlos.scale(Complex64::new(1.0 / 3.0f64.sqrt(), 0.0));
        for (a, b) in r.h.entries().iter().zip(expect.entries()) {
            assert!((a - b).norm() <= 1e-15);
        }
        assert!(sample_channel_given_glos_sq(&p, -1.0, &mut rng).is_err());
    }

    #[test]
    fn mean_channel_power() {
        let n = 1_000_000;
        for k in [0.0, 3.0] {
            let p = params(k);
            let mut rng = RngStream::new(11, 0).generator();
            let mean: f64 = (0..n)
                .map(|_| sample_channel(&p, &mut rng).h.norm_sqr())
                .sum::<f64>()
                / n as f64;
            assert!((mean - 4.0).abs() <= 0.02, "K={k}: {mean}");
        }
        let p = params(1.0);
        let mut rng = RngStream::new(12, 0).generator();
        let mean: f64 = (0..n)
            .map(|_| {
                sample_channel_given_glos_sq(&p, 1.0, &mut rng)
                    .unwrap()
                    .h
                    .norm_sqr()
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean - 4.0).abs() <= 0.02, "{mean}");
    }

    #[test]
    fn nlos_entry_variance() {
        let n = 1_000_000;
        let p = params(1.0);
        let mut rng = RngStream::new(13, 0).generator();
        let mut acc = [0.0f64; 4];
        let mut acc4 = [0.0f64; 4];
        for _ in 0..n {
            let r = sample_channel(&p, &mut rng);
            for (k, z) in r.h_nlos.entries().iter().enumerate() {
                acc[k] += z.norm_sqr();
                acc4[k] += z.norm_sqr().powi(2);
            }
        }
        for k in 0..4 {
            let m = acc[k] / n as f64;
            let var = acc4[k] / n as f64 - m * m;
            assert!(
                (m - 1.0).abs() <= 3.0 * (var / n as f64).sqrt(),
                "entry {k}: {m}"
            );
        }
    }

    #[test]
    fn percentiles() {
        assert!((glos_sq_percentile(0.05).unwrap() - 0.0513).abs() < 5e-5);
        assert!((glos_sq_percentile(0.10).unwrap() - 0.1054).abs() < 5e-5);
        assert!((glos_sq_percentile(0.50).unwrap() - 0.6931).abs() < 5e-5);
        assert_eq!(glos_sq_percentile(0.5).unwrap(), 2.0f64.ln());
        for bad in [0.0, 1.0, -0.2, 1.5] {
            assert!(glos_sq_percentile(bad).is_err());
        }
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(-1.0, 4, 0.0, 0.5).is_err());
        assert!(ChannelParams::new(1.0, 1, 0.0, 0.5).is_err());
        assert!(ChannelParams::new(1.0, 4, 3.5, 0.5).is_err());
        assert!(ChannelParams::new(1.0, 4, 0.0, 0.0).is_err());
    }
}
