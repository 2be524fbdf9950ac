//! Rician channel draws against their conditional closed forms.

use polarcap::analysis::{cond_mean_den, cond_mean_num, db_to_linear};
use polarcap::channel::{sample_channel_given_glos_sq, ChannelParams, RngStream};
use polarcap::linalg::normalized_array_response;
use polarcap::sim::mc_mean;

fn main() -> polarcap::Result<()> {
    let (n_t, theta, g_sq) = (4, 1.0, 0.5);
    let a = normalized_array_response(theta, n_t, 0.5)?;
    println!("K[dB]  E|hᴴa|² mc / exact      E‖h‖² mc / exact");
    for k_db in [-10.0, 0.0, 10.0, 20.0] {
        let k = db_to_linear(k_db);
        let params = ChannelParams::new(k, n_t, theta, 0.5)?;
        let mut rng = RngStream::new(7, 0).generator();
        let (mut num, mut den) = (Vec::new(), Vec::new());
        for _ in 0..200_000 {
            let h = sample_channel_given_glos_sq(&params, g_sq, &mut rng)?.h;
            num.push(a.inner(&h)?.norm_sqr());
            den.push(h.norm_sqr());
        }
        println!(
            "{k_db:>5}  {:.4} / {:.4}          {:.4} / {:.4}",
            mc_mean(&num)?.mean,
            cond_mean_num(k, n_t, g_sq),
            mc_mean(&den)?.mean,
            cond_mean_den(k, n_t, g_sq)
        );
    }
    Ok(())
}
