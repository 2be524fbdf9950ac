//! The limited-feedback loop: RX picks a codeword and reports it with the
//! cap radius; TX rebuilds that single codeword.

use crate::channel::ChannelParams;
use crate::codebooks::{adaptive_radius, cap_codeword, pcc_with_kind, Codebook, CodebookKind};
use crate::linalg::{
    check_dims, normalized_array_response, unitary_completion, ComplexVector, UnitVector,
};
use crate::{Error, Result};

/// What the receiver sends back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackReport {
    pub best_index: usize,
    pub radius: f64,
    pub radius_bits: Option<u32>,
    pub radius_quantized: Option<f64>,
}

impl FeedbackReport {
    pub fn new(best_index: usize, radius: f64, radius_bits: Option<u32>) -> Result<Self> {
        let radius_quantized = radius_bits
            .map(|b| quantize_radius(radius, b))
            .transpose()?;
        Ok(Self {
            best_index,
            radius,
            radius_bits,
            radius_quantized,
        })
    }

    /// The radius the transmitter actually sees.
    pub fn radius_at_tx(&self) -> f64 {
        self.radius_quantized.unwrap_or(self.radius)
    }
}

/// Index maximizing `|hᴴf_j|`; the lowest index wins ties.
pub fn select_codeword(h: &ComplexVector, cb: &Codebook) -> Result<usize> {
    if cb.is_empty() {
        return Err(Error::TooFewCodewords { need: 1, got: 0 });
    }
    check_dims(cb.dim(), h.dim())?;
    if h.norm_sqr() == 0.0 {
        return Err(Error::ZeroChannel);
    }
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (j, f) in cb.codewords().iter().enumerate() {
        let v = h.inner(f)?.norm_sqr();
        if v > best_val {
            best = j;
            best_val = v;
        }
    }
    Ok(best)
}

/// Midpoint of the half-open cell `[l, u)` of a uniform `2^bits` partition of
/// `[0, 1]` containing `radius`; `radius = 1` lands in the top cell.
pub fn quantize_radius(radius: f64, bits: u32) -> Result<f64> {
    if bits < 1 {
        return Err(Error::invalid(
            "bits",
            "radius quantization needs at least 1 bit",
        ));
    }
    if !(0.0..=1.0).contains(&radius) {
        return Err(Error::invalid(
            "radius",
            format!("{radius} is outside [0, 1]"),
        ));
    }
    let cells = crate::codebooks::codebook_size(bits)? as f64;
    let idx = (radius * cells).floor().min(cells - 1.0);
    Ok((idx + 0.5) / cells)
}

/// Runs the receiver side: build the adaptive PCC, choose a codeword, report.
///
/// With `radius_bits` set the codebook is built on the quantized radius, the
/// same one the transmitter will use.
pub fn rx_feedback(
    h: &ComplexVector,
    params: &ChannelParams,
    grassmannian: &Codebook,
    radius_bits: Option<u32>,
) -> Result<(Codebook, FeedbackReport)> {
    check_dims(params.n_t, h.dim())?;
    let basis = normalized_array_response(params.theta, params.n_t, params.d_over_lambda)?;
    let radius = adaptive_radius(h, &basis)?;
    let mut report = FeedbackReport::new(0, radius, radius_bits)?;
    let cb = pcc_with_kind(
        &basis,
        report.radius_at_tx(),
        grassmannian,
        CodebookKind::AdaptivePcc,
    )?;
    report.best_index = select_codeword(h, &cb)?;
    Ok((cb, report))
}

/// Transmitter-side beamformer for a reported `(radius, best_index)`.
///
/// Computes only the selected codeword. With the unquantized radius it is
/// bit-identical to codeword `best_index` of the receiver's adaptive PCC.
pub fn tx_reconstruct(
    params: &ChannelParams,
    radius: f64,
    best_index: usize,
    grassmannian: &Codebook,
) -> Result<UnitVector> {
    let basis = normalized_array_response(params.theta, params.n_t, params.d_over_lambda)?;
    reconstruct_with_basis(&basis, radius, best_index, grassmannian)
}

/// [`tx_reconstruct`] for an arbitrary basis codeword.
pub fn reconstruct_with_basis(
    basis: &UnitVector,
    radius: f64,
    best_index: usize,
    grassmannian: &Codebook,
) -> Result<UnitVector> {
    let size = grassmannian.len() + 1;
    if best_index >= size {
        return Err(Error::IndexOutOfRange {
            index: best_index,
            size,
        });
    }
    if !(0.0..=1.0).contains(&radius) {
        return Err(Error::invalid(
            "radius",
            format!("{radius} is outside [0, 1]"),
        ));
    }
    check_dims(basis.dim().saturating_sub(1), grassmannian.dim())?;
    if best_index == 0 {
        return Ok(basis.clone());
    }
    let u = unitary_completion(basis);
    cap_codeword(&u, radius, &grassmannian.codewords()[best_index - 1])
}

/// `|hᴴf|² / ‖h‖²`, clamped to `[0, 1]`.
pub fn beamforming_gain(h: &ComplexVector, f: &UnitVector) -> Result<f64> {
    Ok(raw_gain(h, f)?.clamp(0.0, 1.0))
}

pub(crate) fn raw_gain(h: &ComplexVector, f: &UnitVector) -> Result<f64> {
    let p = h.norm_sqr();
    if p == 0.0 {
        return Err(Error::ZeroChannel);
    }
    Ok(h.inner(f)?.norm_sqr() / p)
}

fn check_powers(p_s: f64, n_0: f64) -> Result<()> {
    if !(p_s > 0.0 && p_s.is_finite()) {
        return Err(Error::invalid("p_s", "must be a positive real"));
    }
    if !(n_0 > 0.0 && n_0.is_finite()) {
        return Err(Error::invalid("n_0", "must be a positive real"));
    }
    Ok(())
}

/// Received SNR `p_s·|hᴴf|²/n_0`.
pub fn received_snr(h: &ComplexVector, f: &UnitVector, p_s: f64, n_0: f64) -> Result<f64> {
    check_powers(p_s, n_0)?;
    Ok(p_s * h.inner(f)?.norm_sqr() / n_0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkMetrics {
    pub bf_gain: f64,
    pub snr: f64,
    pub p_s: f64,
    pub n_0: f64,
}

impl LinkMetrics {
    pub fn compute(h: &ComplexVector, f: &UnitVector, p_s: f64, n_0: f64) -> Result<Self> {
        check_powers(p_s, n_0)?;
        let bf_gain = beamforming_gain(h, f)?;
        Ok(Self {
            bf_gain,
            snr: p_s * bf_gain * h.norm_sqr() / n_0,
            p_s,
            n_0,
        })
    }
}
