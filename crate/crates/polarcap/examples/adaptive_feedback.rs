//! One feedback round per channel draw: the receiver picks a codeword from
//! the adaptive polar cap, the transmitter rebuilds it from (index, radius).

use polarcap::analysis::db_to_linear;
use polarcap::channel::{sample_channel, ChannelParams, RngStream};
use polarcap::codebooks::{grassmannian_pack, rvq_codebook};
use polarcap::feedback::{beamforming_gain, rx_feedback, select_codeword, tx_reconstruct};
use polarcap::sim::mc_mean;

fn main() -> polarcap::Result<()> {
    let (n_t, bits, trials) = (4, 4, 20_000);
    let g = grassmannian_pack(n_t - 1, (1 << bits) - 1, 1, 2000)?.0;
    println!("K[dB]  adaptive   (3-bit radius)  rvq");
    for k_db in [-5.0, 5.0, 15.0] {
        let params = ChannelParams::new(db_to_linear(k_db), n_t, 1.1, 0.5)?;
        let mut rng = RngStream::new(11, 0).generator();
        let (mut pcc, mut pcc_q, mut rvq) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..trials {
            let h = sample_channel(&params, &mut rng).h;
            for (bits_r, out) in [(None, &mut pcc), (Some(3), &mut pcc_q)] {
                let (_, fb) = rx_feedback(&h, &params, &g, bits_r)?;
                let f = tx_reconstruct(&params, fb.radius_at_tx(), fb.best_index, &g)?;
                out.push(beamforming_gain(&h, &f)?);
            }
            let cb = rvq_codebook(n_t, bits, &mut rng)?;
            rvq.push(beamforming_gain(
                &h,
                &cb.codewords()[select_codeword(&h, &cb)?],
            )?);
        }
        println!(
            "{k_db:>5}  {:.4}     {:.4}          {:.4}",
            mc_mean(&pcc)?.mean,
            mc_mean(&pcc_q)?.mean,
            mc_mean(&rvq)?.mean
        );
    }
    Ok(())
}
