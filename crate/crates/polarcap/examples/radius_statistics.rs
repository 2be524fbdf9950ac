//! Closed-form radius statistics and their validity numbers over K.

use polarcap::analysis::{db_to_linear, validity_expectations, CondStats};

fn main() {
    let g_sq = 0.1054;
    for n_t in [4, 6] {
        println!("n_t = {n_t}, |g|² = {g_sq}");
        println!("K[dB]  E[δ|g]≈   cv_num  cv_den  validity");
        for k_db in [0.0, 5.0, 10.0, 15.0, 20.0] {
            let k = db_to_linear(k_db);
            let s = CondStats::at(k, n_t, g_sq);
            let (v1, v2) = validity_expectations(k, n_t);
            println!(
                "{k_db:>5}  {:.5}   {:.4}  {:.4}  ({v1:.0}, {v2:.0})",
                s.delta_mean_approx, s.cv_num, s.cv_den
            );
        }
        println!();
    }
}
