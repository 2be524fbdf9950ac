//! Beamforming codebooks centred on the line-of-sight direction, for
//! multi-antenna transmitters that learn the channel through a few bits of
//! feedback.
//!
//! The receiver knows the channel `h` and the line-of-sight direction
//! `ĥ_θ`. It builds a polar cap of codewords centred on `ĥ_θ` whose radius is
//! the chordal distance between `ĥ_θ` and the MRT direction `h/‖h‖`, picks the
//! best codeword and feeds back its index together with the radius. The
//! transmitter rebuilds that one codeword from the shared Grassmannian
//! ingredient.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: chordal distance, Householder unitary completion, ULA
//!   array responses.
//! - [`channel`]: seeded Rician channel draws, optionally conditioned on the
//!   LOS fading power.
//! - [`codebooks`]: Grassmannian packer, RVQ, DFT, fixed-radius and adaptive
//!   polar-cap codebooks, plus the text file format.
//! - [`feedback`]: codeword selection, radius quantization, TX-side
//!   reconstruction and link metrics.
//! - [`analysis`]: closed-form conditional moments and the radius-mean
//!   approximation.
//! - [`sim`]: Monte-Carlo estimators and the three experiment drivers.
//! - [`cli`]: the `polarcap` command-line front end.
//!
//! ```
//! use polarcap::channel::{sample_channel, ChannelParams, RngStream};
//! use polarcap::codebooks::{adaptive_pcc, grassmannian_pack};
//! use polarcap::feedback::{beamforming_gain, select_codeword, tx_reconstruct};
//!
//! let params = ChannelParams::new(3.0, 4, 1.0, 0.5).unwrap();
//! let (ingredient, _) = grassmannian_pack(3, 15, 1, 500).unwrap();
//! let mut rng = RngStream::new(42, 0).generator();
//! let draw = sample_channel(&params, &mut rng);
//!
//! let (cb, radius) = adaptive_pcc(&draw.h, &params, &ingredient).unwrap();
//! let j = select_codeword(&draw.h, &cb).unwrap();
//! let f = tx_reconstruct(&params, radius, j, &ingredient).unwrap();
//! assert!(beamforming_gain(&draw.h, &f).unwrap() > 0.0);
//! ```

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod codebooks;
mod error;
pub mod feedback;
pub mod linalg;
pub mod sim;

pub use error::{Error, Result};
pub use num_complex::Complex64;
