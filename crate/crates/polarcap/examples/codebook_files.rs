//! Builds each baseline codebook and round-trips it through the text format.

use polarcap::channel::RngStream;
use polarcap::codebooks::{
    dft_codebook, grassmannian_pack, min_pairwise_distance, pcc_construct, read_codebook,
    rvq_codebook, write_codebook,
};
use polarcap::linalg::normalized_array_response;

fn main() -> polarcap::Result<()> {
    let (n_t, bits) = (4, 4);
    let ingredient = grassmannian_pack(n_t - 1, (1 << bits) - 1, 1, 2000)?.0;
    let basis = normalized_array_response(1.2, n_t, 0.5)?;
    let books = [
        rvq_codebook(n_t, bits, &mut RngStream::new(3, 0).generator())?,
        dft_codebook(n_t, bits)?,
        pcc_construct(&basis, 0.6, &ingredient)?,
    ];
    for cb in &books {
        let text = write_codebook(cb);
        let back = read_codebook(&text)?;
        assert_eq!(&back, cb);
        println!(
            "{:<12} {} codewords, min distance {:.4}, {} bytes on disk",
            cb.kind().to_string(),
            cb.len(),
            min_pairwise_distance(cb, false)?,
            text.len()
        );
    }
    println!(
        "\n{}",
        write_codebook(&books[1])
            .lines()
            .take(3)
            .collect::<Vec<_>>()
            .join("\n")
    );
    Ok(())
}
