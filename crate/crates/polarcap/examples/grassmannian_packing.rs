//! Line packings against the Welch/Rankin bound.
//!
//! `cargo run --release --example grassmannian_packing [dim count]`

use polarcap::codebooks::{grassmannian_pack_with, PackingOptions};

fn main() -> polarcap::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let cases: Vec<(usize, usize)> = match args[..] {
        [d, n] => vec![(d, n)],
        _ => vec![(2, 3), (2, 4), (3, 7), (3, 9), (3, 15), (4, 16)],
    };
    println!("dim count  min distance  bound");
    for (d, n) in cases {
        let (_, r) = grassmannian_pack_with(d, n, 1, &PackingOptions::default())?;
        println!(
            "{d:>3} {n:>5}  {:.6}      {:.6}",
            r.min_distance, r.welch_rankin_bound
        );
    }
    Ok(())
}
