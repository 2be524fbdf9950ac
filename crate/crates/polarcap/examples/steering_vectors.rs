//! ULA steering vectors, chordal distance and the Householder completion.

use polarcap::linalg::{chordal_distance, normalized_array_response, unitary_completion};

fn main() -> polarcap::Result<()> {
    let n_t = 4;
    let broadside = normalized_array_response(std::f64::consts::FRAC_PI_2, n_t, 0.5)?;
    println!("theta      d(a(theta), a(pi/2))");
    for deg in [90.0, 80.0, 60.0, 30.0, 0.0f64] {
        let a = normalized_array_response(deg.to_radians(), n_t, 0.5)?;
        println!("{deg:>5.0}°    {:.6}", chordal_distance(&broadside, &a)?);
    }

    let u = unitary_completion(&normalized_array_response(1.0, n_t, 0.5)?);
    println!(
        "\ncompletion of a(1 rad): gram deviation {:.2e}",
        u.gram_deviation()
    );
    Ok(())
}
