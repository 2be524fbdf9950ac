//! Beamforming codebooks.
//!
//! A polar-cap codebook (PCC) with basis `w` and radius `δ` contains `w` and
//! codewords `U_w·[√(1−δ²); δ·g_j]`, where `U_w` is a unitary completion of
//! `w` and `{g_j}` is a Grassmannian packing in one dimension less. Every
//! non-basis codeword then sits at chordal distance exactly `δ` from `w`.

mod format;
mod packing;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{sample_gaussian_vector, ChannelParams};
use crate::linalg::{
    check_dims, chordal_distance, normalized_array_response, unitary_completion, ComplexVector,
    UnitVector, UnitaryMatrix, TOLERANCES,
};
use crate::{Error, Result};

pub(crate) use format::fmt_f64;
pub use format::{read_codebook, write_codebook, PackingCache};
pub use packing::{
    grassmannian_pack, grassmannian_pack_with, welch_rankin_bound, PackingOptions, PackingReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodebookKind {
    Grassmannian,
    Rvq,
    Dft,
    FixedPcc,
    AdaptivePcc,
}

impl CodebookKind {
    pub fn is_pcc(self) -> bool {
        matches!(self, CodebookKind::FixedPcc | CodebookKind::AdaptivePcc)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CodebookKind::Grassmannian => "grassmannian",
            CodebookKind::Rvq => "rvq",
            CodebookKind::Dft => "dft",
            CodebookKind::FixedPcc => "fixed-pcc",
            CodebookKind::AdaptivePcc => "adaptive-pcc",
        }
    }
}

impl fmt::Display for CodebookKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodebookKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "grassmannian" => CodebookKind::Grassmannian,
            "rvq" => CodebookKind::Rvq,
            "dft" => CodebookKind::Dft,
            "fixed-pcc" => CodebookKind::FixedPcc,
            "adaptive-pcc" => CodebookKind::AdaptivePcc,
            other => {
                return Err(Error::invalid(
                    "kind",
                    format!("unknown codebook kind `{other}`"),
                ))
            }
        })
    }
}

/// An ordered set of unit-norm codewords of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    codewords: Vec<UnitVector>,
    kind: CodebookKind,
    radius: Option<f64>,
}

impl Codebook {
    /// Builds a codebook and checks its invariants.
    ///
    /// For the PCC kinds `radius` is required, codeword 0 is the basis and
    /// every other codeword must lie at chordal distance `radius` from it
    /// (tolerance 1e-9).
    pub fn new(
        codewords: Vec<UnitVector>,
        kind: CodebookKind,
        radius: Option<f64>,
    ) -> Result<Self> {
        let first = codewords
            .first()
            .ok_or(Error::TooFewCodewords { need: 1, got: 0 })?;
        let dim = first.dim();
        for c in &codewords {
            check_dims(dim, c.dim())?;
        }
        if kind.is_pcc() {
            let r = radius
                .ok_or_else(|| Error::invalid("radius", "polar-cap codebooks need a radius"))?;
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::invalid("radius", format!("{r} is outside [0, 1]")));
            }
        }
        let cb = Self {
            codewords,
            kind,
            radius: if kind.is_pcc() { radius } else { None },
        };
        if let Some(dev) = cb.radius_deviation() {
            if dev > TOLERANCES.pcc_radius {
                return Err(Error::Invariant(format!(
                    "codeword off the polar cap by {dev:e}"
                )));
            }
        }
        Ok(cb)
    }

    pub fn codewords(&self) -> &[UnitVector] {
        &self.codewords
    }

    pub fn get(&self, j: usize) -> Option<&UnitVector> {
        self.codewords.get(j)
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.codewords[0].dim()
    }

    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    /// Codeword 0 for polar-cap kinds.
    pub fn basis(&self) -> Option<&UnitVector> {
        self.kind.is_pcc().then(|| &self.codewords[0])
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Worst `|d(basis, c_j) − radius|` over non-basis codewords, for PCCs.
    pub fn radius_deviation(&self) -> Option<f64> {
        let basis = self.basis()?;
        let r = self.radius?;
        Some(
            self.codewords[1..]
                .iter()
                .map(|c| (chordal_distance(basis, c).expect("equal dims") - r).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Minimum chordal distance over unordered codeword pairs.
///
/// With `non_basis_only` set, a polar-cap codebook's basis is left out.
pub fn min_pairwise_distance(cb: &Codebook, non_basis_only: bool) -> Result<f64> {
    let skip = usize::from(non_basis_only && cb.kind().is_pcc());
    let words = &cb.codewords()[skip..];
    if words.len() < 2 {
        return Err(Error::TooFewCodewords {
            need: 2,
            got: words.len(),
        });
    }
    Ok(packing::min_distance_of(words))
}

/// `2^b_bits` normalized `CN(0, I)` draws.
pub fn rvq_codebook<R: Rng + ?Sized>(n_t: usize, b_bits: u32, rng: &mut R) -> Result<Codebook> {
    if n_t == 0 {
        return Err(Error::invalid("n_t", "must be positive"));
    }
    let size = codebook_size(b_bits)?;
    let mut words = Vec::with_capacity(size);
    while words.len() < size {
        let v = ComplexVector::new(sample_gaussian_vector(rng, n_t))?;
        // A zero draw has probability zero; redraw rather than fail.
        if let Ok(u) = v.normalized() {
            words.push(u);
        }
    }
    Codebook::new(words, CodebookKind::Rvq, None)
}

/// Oversampled DFT: entry `k` of codeword `m` is `e^{j2πkm/2^b}/√n_t`.
pub fn dft_codebook(n_t: usize, b_bits: u32) -> Result<Codebook> {
    let size = codebook_size(b_bits)?;
    if n_t == 0 || size < n_t {
        return Err(Error::invalid(
            "b_bits",
            format!("2^{b_bits} = {size} codewords cannot cover n_t = {n_t}"),
        ));
    }
    let scale = 1.0 / (n_t as f64).sqrt();
    let words = (0..size)
        .map(|m| {
            let entries = (0..n_t)
                .map(|k| {
                    // Reduce k·m mod size first so the phase argument stays small.
                    let step = (k * m) % size;
                    Complex64::from_polar(
                        scale,
                        2.0 * std::f64::consts::PI * step as f64 / size as f64,
                    )
                })
                .collect();
            UnitVector::new(ComplexVector::new(entries)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Codebook::new(words, CodebookKind::Dft, None)
}

pub(crate) fn codebook_size(b_bits: u32) -> Result<usize> {
    if b_bits >= usize::BITS - 1 {
        return Err(Error::invalid(
            "b_bits",
            format!("{b_bits} bits is too many"),
        ));
    }
    Ok(1usize << b_bits)
}

fn check_radius(radius: f64) -> Result<()> {
    if (0.0..=1.0).contains(&radius) {
        Ok(())
    } else {
        Err(Error::invalid(
            "radius",
            format!("{radius} is outside [0, 1]"),
        ))
    }
}

/// `U · [√(1−δ²); δ·g]`.
pub(crate) fn cap_codeword(u: &UnitaryMatrix, radius: f64, g: &UnitVector) -> Result<UnitVector> {
    check_dims(u.dim() - 1, g.dim())?;
    let mut stacked = Vec::with_capacity(u.dim());
    stacked.push(Complex64::new((1.0 - radius * radius).max(0.0).sqrt(), 0.0));
    stacked.extend(g.entries().iter().map(|z| z * radius));
    let v = u.apply(&stacked)?;
    UnitVector::new(v)
}

fn check_ingredient(basis_dim: usize, grassmannian: &Codebook) -> Result<()> {
    if basis_dim < 2 {
        return Err(Error::invalid("basis", "polar-cap codebooks need dim ≥ 2"));
    }
    check_dims(basis_dim - 1, grassmannian.dim())
}

/// Polar-cap codebook with the given basis, radius and Grassmannian ingredient.
pub fn pcc_construct(basis: &UnitVector, radius: f64, grassmannian: &Codebook) -> Result<Codebook> {
    pcc_with_kind(basis, radius, grassmannian, CodebookKind::FixedPcc)
}

pub(crate) fn pcc_with_kind(
    basis: &UnitVector,
    radius: f64,
    grassmannian: &Codebook,
    kind: CodebookKind,
) -> Result<Codebook> {
    check_radius(radius)?;
    check_ingredient(basis.dim(), grassmannian)?;
    let u = unitary_completion(basis);
    let mut words = Vec::with_capacity(grassmannian.len() + 1);
    words.push(basis.clone());
    for g in grassmannian.codewords() {
        words.push(cap_codeword(&u, radius, g)?);
    }
    Codebook::new(words, kind, Some(radius))
}

/// Radius `√(1 − |hᴴĥ_θ|²/‖h‖²)` of the adaptive codebook, clamped to `[0, 1]`.
pub fn adaptive_radius(h: &ComplexVector, basis: &UnitVector) -> Result<f64> {
    let mrt = h.normalized()?;
    Ok(chordal_distance(&mrt, basis)?.clamp(0.0, 1.0))
}

/// The channel-adaptive PCC: basis `ĥ_θ`, radius `d(h/‖h‖, ĥ_θ)`.
///
/// Returns the codebook and its radius.
pub fn adaptive_pcc(
    h: &ComplexVector,
    params: &ChannelParams,
    grassmannian: &Codebook,
) -> Result<(Codebook, f64)> {
    check_dims(params.n_t, h.dim())?;
    let basis = normalized_array_response(params.theta, params.n_t, params.d_over_lambda)?;
    let radius = adaptive_radius(h, &basis)?;
    let cb = pcc_with_kind(&basis, radius, grassmannian, CodebookKind::AdaptivePcc)?;
    Ok((cb, radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RngStream;
    use crate::linalg::normalized_array_response;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn ingredient() -> Codebook {
        grassmannian_pack(3, 15, 1, 300).unwrap().0
    }

    fn random_unit(seed: u64, dim: usize) -> UnitVector {
        let mut rng = RngStream::new(seed, 77).generator();
        ComplexVector::new(sample_gaussian_vector(&mut rng, dim))
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn rvq_examples() {
        let mut rng = RngStream::new(4, 0).generator();
        let cb = rvq_codebook(4, 4, &mut rng).unwrap();
        assert_eq!(cb.len(), 16);
        assert!(cb
            .codewords()
            .iter()
            .all(|c| (c.norm() - 1.0).abs() <= 1e-12));
        let mut again = RngStream::new(4, 0).generator();
        assert_eq!(rvq_codebook(4, 4, &mut again).unwrap(), cb);
        assert_eq!(rvq_codebook(3, 0, &mut again).unwrap().len(), 1);
    }

    #[test]
    fn rvq_pair_correlation_mean() {
        // |f_iᴴf_j|² ~ Beta(1, n_t − 1) with mean 1/n_t.
        let mut rng = RngStream::new(5, 0).generator();
        let pairs = 100_000;
        let mut acc = 0.0;
        for _ in 0..pairs {
            let cb = rvq_codebook(4, 1, &mut rng).unwrap();
            acc += cb.codewords()[0]
                .inner(&cb.codewords()[1])
                .unwrap()
                .norm_sqr();
        }
        assert!((acc / pairs as f64 - 0.25).abs() <= 0.01);
    }

    #[test]
    fn dft_examples() {
        let cb = dft_codebook(2, 1).unwrap();
        let s = 0.5f64.sqrt();
        let expect = [[s, s], [s, -s]];
        for (c, e) in cb.codewords().iter().zip(expect) {
            for (z, x) in c.entries().iter().zip(e) {
                assert!((z - Complex64::new(x, 0.0)).norm() < 1e-15);
            }
        }

        let cb = dft_codebook(4, 2).unwrap();
        assert!((min_pairwise_distance(&cb, false).unwrap() - 1.0).abs() < 1e-12);

        let cb = dft_codebook(4, 4).unwrap();
        assert_eq!(cb.len(), 16);
        let adj: Vec<f64> = (0..16)
            .map(|m| {
                cb.codewords()[m]
                    .inner(&cb.codewords()[(m + 1) % 16])
                    .unwrap()
                    .norm()
            })
            .collect();
        for a in &adj {
            assert!((a - adj[0]).abs() < 1e-12);
        }
        assert!(dft_codebook(4, 1).is_err());
    }

    #[test]
    fn pcc_degenerate_radii() {
        let g = ingredient();
        let basis = normalized_array_response(0.7, 4, 0.5).unwrap();
        let cb = pcc_construct(&basis, 0.0, &g).unwrap();
        for c in cb.codewords() {
            assert!(chordal_distance(c, &basis).unwrap() < 1e-7);
            assert!((c.inner(&basis).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        let cb = pcc_construct(&basis, 1.0, &g).unwrap();
        for c in &cb.codewords()[1..] {
            assert!(c.inner(&basis).unwrap().norm() < 1e-12);
        }
        assert_eq!(cb.basis(), Some(&basis));
    }

    #[test]
    fn pcc_rejects_bad_inputs() {
        let g = ingredient();
        let basis = random_unit(1, 5);
        assert!(matches!(
            pcc_construct(&basis, 0.5, &g),
            Err(Error::DimensionMismatch { .. })
        ));
        let basis = random_unit(1, 4);
        assert!(pcc_construct(&basis, 1.5, &g).is_err());
        assert!(pcc_construct(&basis, -0.1, &g).is_err());
    }

    fn min_euclidean_separation(cb: &Codebook) -> f64 {
        let w = &cb.codewords()[1..];
        let mut best = f64::INFINITY;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let d: f64 = w[i]
                    .entries()
                    .iter()
                    .zip(w[j].entries())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum();
                best = best.min(d.sqrt());
            }
        }
        best
    }

    // ‖c_k − c_l‖ = δ‖g_k − g_l‖ exactly; the chordal separation
    // 2δ²(1 − Re c) − δ⁴|1 − c|² is only increasing, not linear.
    #[test]
    fn pcc_separation_scales_with_radius() {
        let g = ingredient();
        let basis = random_unit(3, 4);
        let cbs: Vec<Codebook> = [0.3, 0.6, 0.9]
            .iter()
            .map(|&r| pcc_construct(&basis, r, &g).unwrap())
            .collect();
        let e: Vec<f64> = cbs.iter().map(min_euclidean_separation).collect();
        assert!((e[1] / e[0] - 2.0).abs() < 1e-6);
        assert!((e[2] / e[0] - 3.0).abs() < 1e-6);
        let d: Vec<f64> = cbs
            .iter()
            .map(|cb| min_pairwise_distance(cb, true).unwrap())
            .collect();
        assert!(d[0] < d[1] && d[1] < d[2]);
    }

    #[test]
    fn adaptive_examples() {
        let g = ingredient();
        let params = ChannelParams::new(1.0, 4, PI / 2.0, 0.5).unwrap();

        let a = crate::linalg::array_response(params.theta, 4, 0.5).unwrap();
        let (cb, r) = adaptive_pcc(&a.scale(Complex64::new(-0.3, 2.0)), &params, &g).unwrap();
        assert!(r < 1e-7);
        for c in cb.codewords() {
            assert!((c.inner(&cb.codewords()[0]).unwrap().norm() - 1.0).abs() < 1e-12);
        }

        let orth = ComplexVector::from_real(&[1.0, -1.0, 1.0, -1.0]).unwrap();
        let (_, r) = adaptive_pcc(&orth, &params, &g).unwrap();
        assert_eq!(r, 1.0);

        let h = ComplexVector::from_real(&[2.0, 1.0, 1.0, 1.0]).unwrap();
        let (cb, r) = adaptive_pcc(&h, &params, &g).unwrap();
        assert!((r - (3.0f64 / 28.0).sqrt()).abs() < 1e-12);
        assert!((r - 0.32733).abs() < 1e-5);
        assert_eq!(cb.kind(), CodebookKind::AdaptivePcc);
        assert_eq!(cb.len(), 16);

        let zero = ComplexVector::from_real(&[0.0; 4]).unwrap();
        assert!(matches!(
            adaptive_pcc(&zero, &params, &g),
            Err(Error::ZeroChannel)
        ));
    }

    #[test]
    fn min_pairwise_examples() {
        let eye = Codebook::new(
            (0..3)
                .map(|k| UnitVector::canonical(3, k).unwrap())
                .collect(),
            CodebookKind::Grassmannian,
            None,
        )
        .unwrap();
        assert_eq!(min_pairwise_distance(&eye, false).unwrap(), 1.0);

        let mut words = eye.codewords().to_vec();
        words.push(words[1].clone());
        let dup = Codebook::new(words, CodebookKind::Rvq, None).unwrap();
        assert_eq!(min_pairwise_distance(&dup, false).unwrap(), 0.0);

        let single =
            Codebook::new(vec![eye.codewords()[0].clone()], CodebookKind::Rvq, None).unwrap();
        assert!(matches!(
            min_pairwise_distance(&single, false),
            Err(Error::TooFewCodewords { .. })
        ));
    }

    #[test]
    fn codebook_rejects_off_cap_words() {
        let basis = UnitVector::canonical(2, 0).unwrap();
        let other = UnitVector::canonical(2, 1).unwrap();
        assert!(matches!(
            Codebook::new(vec![basis, other], CodebookKind::FixedPcc, Some(0.5)),
            Err(Error::Invariant(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pcc_radius_invariant(seed in any::<u64>(), radius in 0.0f64..=1.0) {
            let g = ingredient();
            let basis = random_unit(seed, 4);
            let cb = pcc_construct(&basis, radius, &g).unwrap();
            prop_assert!(cb.radius_deviation().unwrap() <= 1e-9);
            prop_assert_eq!(&cb.codewords()[0], &basis);
        }

        #[test]
        fn adaptive_phase_invariance(seed in any::<u64>(), scale in 0.01f64..100.0, phase in 0.0f64..std::f64::consts::TAU) {
            let g = ingredient();
            let params = ChannelParams::new(2.0, 4, 1.0, 0.5).unwrap();
            let mut rng = RngStream::new(seed, 0).generator();
            let h = ComplexVector::new(sample_gaussian_vector(&mut rng, 4)).unwrap();
            let (cb, r) = adaptive_pcc(&h, &params, &g).unwrap();
            let (cb2, r2) = adaptive_pcc(&h.scale(Complex64::from_polar(scale, phase)), &params, &g).unwrap();
            prop_assert!((r - r2).abs() <= 1e-9);
            for (a, b) in cb.codewords().iter().zip(cb2.codewords()) {
                prop_assert!((a.inner(b).unwrap().norm() - 1.0).abs() <= 1e-9);
            }
            let direct = crate::linalg::chordal_distance(&h.normalized().unwrap(), &cb.codewords()[0]).unwrap();
            prop_assert!((direct - r).abs() <= 1e-12);
        }
    }
}
