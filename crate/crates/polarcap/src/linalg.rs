//! Complex vector primitives: chordal distance, unitary completion and
//! uniform-linear-array responses.

use std::f64::consts::PI;
use std::ops::Deref;

use num_complex::Complex64;

use crate::{Error, Result};

/// Numerical tolerances shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed `| ‖v‖₂ − 1 |` for a [`UnitVector`].
    pub unit_norm: f64,
    /// Allowed entrywise `‖AᴴA − I‖_max` for a [`UnitaryMatrix`].
    pub unitary: f64,
    /// `|1 − w₁[0]|` below which unitary completion returns the identity.
    pub householder_identity: f64,
    /// Allowed deviation of a polar-cap codeword from the stored radius.
    pub pcc_radius: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    unit_norm: 1e-12,
    unitary: 1e-10,
    householder_identity: 1e-14,
    pcc_radius: 1e-9,
};

/// A dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("entries", "vector must have dim ≥ 1"));
        }
        Ok(Self(entries))
    }

    /// Builds a vector from real entries.
    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `selfᴴ · other`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(inner_unchecked(&self.0, &other.0))
    }

    pub fn scale(&self, c: Complex64) -> ComplexVector {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    /// Returns `self / ‖self‖₂`.
    pub fn normalized(&self) -> Result<UnitVector> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroChannel);
        }
        let inv = 1.0 / n;
        Ok(UnitVector(Self(self.0.iter().map(|z| z * inv).collect())))
    }
}

pub(crate) fn inner_unchecked(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// A complex vector with unit ℓ₂ norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(ComplexVector);

impl UnitVector {
    /// Wraps `v`, rejecting it unless `| ‖v‖₂ − 1 | ≤ 1e-12`.
    pub fn new(v: ComplexVector) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > TOLERANCES.unit_norm {
            return Err(Error::NotUnitNorm { norm });
        }
        Ok(Self(v))
    }

    /// The `k`-th canonical basis vector of `C^dim`.
    pub fn canonical(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange {
                index: k,
                size: dim,
            });
        }
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[k] = Complex64::new(1.0, 0.0);
        Ok(Self(ComplexVector::new(e)?))
    }

    pub fn as_vector(&self) -> &ComplexVector {
        &self.0
    }

    pub fn into_vector(self) -> ComplexVector {
        self.0
    }

    /// Multiplies by a unit-modulus phase; the result stays unit norm.
    pub fn rotate(&self, phase: f64) -> UnitVector {
        UnitVector(self.0.scale(Complex64::from_polar(1.0, phase)))
    }
}

impl Deref for UnitVector {
    type Target = ComplexVector;

    fn deref(&self) -> &ComplexVector {
        &self.0
    }
}

/// A square unitary matrix stored by columns.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    columns: Vec<ComplexVector>,
}

impl UnitaryMatrix {
    /// Checks the columns are orthonormal to within `1e-10` entrywise.
    pub fn new(columns: Vec<ComplexVector>) -> Result<Self> {
        let m = Self { columns };
        let n = m.dim();
        for c in &m.columns {
            check_dims(n, c.dim())?;
        }
        let dev = m.gram_deviation();
        if dev > TOLERANCES.unitary {
            return Err(Error::Invariant(format!(
                "columns are not orthonormal (‖AᴴA − I‖_max = {dev:e})"
            )));
        }
        Ok(m)
    }

    pub fn identity(dim: usize) -> Self {
        let columns = (0..dim)
            .map(|k| {
                UnitVector::canonical(dim, k)
                    .expect("k < dim")
                    .into_vector()
            })
            .collect();
        Self { columns }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[ComplexVector] {
        &self.columns
    }

    pub fn column(&self, k: usize) -> &ComplexVector {
        &self.columns[k]
    }

    /// Entry at row `r`, column `c`.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.columns[c].entries()[r]
    }

    /// `A · x`.
    pub fn apply(&self, x: &[Complex64]) -> Result<ComplexVector> {
        check_dims(self.dim(), x.len())?;
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (col, &xc) in self.columns.iter().zip(x) {
            for (o, a) in out.iter_mut().zip(col.entries()) {
                *o += a * xc;
            }
        }
        ComplexVector::new(out)
    }

    /// `‖AᴴA − I‖_max`.
    pub fn gram_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let g = inner_unchecked(self.columns[i].entries(), self.columns[j].entries());
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Chordal distance `√(1 − |xᴴy|²)`, with the radicand clamped at 0.
pub fn chordal_distance(x: &UnitVector, y: &UnitVector) -> Result<f64> {
    let ip = x.inner(y)?;
    Ok((1.0 - ip.norm_sqr()).max(0.0).sqrt())
}

/// Unitary matrix whose first column is `w1`.
///
/// Writes `w1[0] = r·e^{jφ}` and reflects `e₁` onto `−e^{−jφ}w1` with the
/// Householder vector `v = e₁ + e^{−jφ}w1`, whose first entry `1 + r` never
/// cancels. The reflector is then rescaled by `−e^{jφ}`. Returns the identity
/// when `|1 − w1[0]| ≤ 1e-14`.
pub fn unitary_completion(w1: &UnitVector) -> UnitaryMatrix {
    let n = w1.dim();
    let w = w1.entries();
    if (Complex64::new(1.0, 0.0) - w[0]).norm() <= TOLERANCES.householder_identity {
        return UnitaryMatrix::identity(n);
    }
    let r = w[0].norm();
    let phase = if r > 0.0 {
        w[0] / r
    } else {
        Complex64::new(1.0, 0.0)
    };
    let unphase = phase.conj();

    // v = e1 + z with z = conj(phase)·w1, so z[0] = r ≥ 0.
    let mut v: Vec<Complex64> = w.iter().map(|&x| unphase * x).collect();
    v[0] += 1.0;
    let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let tau = 2.0 / v_norm_sqr;

    // Column k of −phase·(I − τ v vᴴ) is −phase·(e_k − τ v conj(v_k)).
    let mut columns = Vec::with_capacity(n);
    columns.push(w1.as_vector().clone());
    for k in 1..n {
        let coeff = tau * v[k].conj();
        let col: Vec<Complex64> = (0..n)
            .map(|i| {
                let e = if i == k { 1.0 } else { 0.0 };
                -phase * (Complex64::new(e, 0.0) - v[i] * coeff)
            })
            .collect();
        columns.push(ComplexVector(col));
    }
    UnitaryMatrix { columns }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::invalid(
            "theta",
            format!("{theta} is outside [0, π]"),
        ))
    }
}

/// ULA response: entry `k` is `exp(−j·2π·k·(d/λ)·cos θ)`, `k = 0..n_t−1`.
pub fn array_response(theta: f64, n_t: usize, d_over_lambda: f64) -> Result<ComplexVector> {
    check_theta(theta)?;
    if n_t == 0 {
        return Err(Error::invalid("n_t", "must be positive"));
    }
    if !(d_over_lambda > 0.0 && d_over_lambda.is_finite()) {
        return Err(Error::invalid("d_over_lambda", "must be a positive real"));
    }
    let step = -2.0 * PI * d_over_lambda * theta.cos();
    ComplexVector::new(
        (0..n_t)
            .map(|k| Complex64::from_polar(1.0, step * k as f64))
            .collect(),
    )
}

/// `array_response / √n_t`, the LOS direction `ĥ_θ`.
pub fn normalized_array_response(theta: f64, n_t: usize, d_over_lambda: f64) -> Result<UnitVector> {
    let a = array_response(theta, n_t, d_over_lambda)?;
    let inv = 1.0 / (n_t as f64).sqrt();
    Ok(UnitVector(a.scale(Complex64::new(inv, 0.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit(entries: &[Complex64]) -> UnitVector {
        ComplexVector::new(entries.to_vec())
            .unwrap()
            .normalized()
            .unwrap()
    }

    fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> UnitVector {
        let v: Vec<_> = (0..dim)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        unit(&v)
    }

    #[test]
    fn chordal_examples() {
        let x = unit(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let y = unit(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let z = unit(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(chordal_distance(&x, &x).unwrap(), 0.0);
        assert_eq!(chordal_distance(&x, &y).unwrap(), 1.0);
        assert!((chordal_distance(&x, &z).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chordal_rejects_dim_mismatch() {
        let x = UnitVector::canonical(2, 0).unwrap();
        let y = UnitVector::canonical(3, 0).unwrap();
        assert!(matches!(
            chordal_distance(&x, &y),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn unit_vector_rejects_non_unit() {
        let v = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(UnitVector::new(v), Err(Error::NotUnitNorm { .. })));
        assert!(ComplexVector::new(vec![]).is_err());
    }

    #[test]
    fn completion_of_e1_is_identity() {
        let e1 = UnitVector::canonical(5, 0).unwrap();
        assert_eq!(unitary_completion(&e1), UnitaryMatrix::identity(5));
    }

    #[test]
    fn completion_of_e2_in_c2() {
        let w = UnitVector::canonical(2, 1).unwrap();
        let u = unitary_completion(&w);
        assert_eq!(u.column(0), w.as_vector());
        assert!(u.gram_deviation() < 1e-15);
        let second = u.column(1);
        assert!(second.inner(w.as_vector()).unwrap().norm() < 1e-15);
        assert!((second.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn completion_of_phased_e1() {
        // |1 − w[0]| is large even though w is e1 up to phase.
        let w = unit(&[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let u = unitary_completion(&w);
        assert_eq!(u.column(0), w.as_vector());
        assert!(u.gram_deviation() < 1e-15);
    }

    #[test]
    fn completion_random_dim4_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let w = random_unit(&mut rng, 4);
            let u = unitary_completion(&w);
            assert!(u.gram_deviation() <= TOLERANCES.unitary);
            for (a, b) in u.column(0).entries().iter().zip(w.entries()) {
                assert!((a - b).norm() <= 1e-12);
            }
            assert_eq!(unitary_completion(&w), u);
            let e1 = UnitVector::canonical(4, 0).unwrap();
            let back = u.apply(e1.entries()).unwrap();
            for (a, b) in back.entries().iter().zip(w.entries()) {
                assert!((a - b).norm() <= 1e-12);
            }
        }
        // Checked constructor accepts a completion.
        let u = unitary_completion(&random_unit(&mut rng, 6));
        assert!(UnitaryMatrix::new(u.columns().to_vec()).is_ok());
    }

    #[test]
    fn array_response_examples() {
        let a = array_response(PI / 2.0, 4, 0.5).unwrap();
        for z in a.entries() {
            assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        }
        let a = array_response(0.0, 4, 0.5).unwrap();
        for (k, z) in a.entries().iter().enumerate() {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((z - c(s, 0.0)).norm() < 1e-14);
        }
        let a = array_response(PI / 3.0, 2, 0.5).unwrap();
        assert!((a.entries()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((a.entries()[1] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn array_response_rejects_bad_theta() {
        assert!(array_response(-0.1, 4, 0.5).is_err());
        assert!(array_response(PI + 1e-9, 4, 0.5).is_err());
        assert!(normalized_array_response(4.0, 4, 0.5).is_err());
    }

    #[test]
    fn normalized_array_response_examples() {
        let h = normalized_array_response(PI / 2.0, 4, 0.5).unwrap();
        for z in h.entries() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }
        let h = normalized_array_response(0.0, 2, 0.5).unwrap();
        let s = 0.5f64.sqrt();
        assert!((h.entries()[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((h.entries()[1] - c(-s, 0.0)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn chordal_symmetric_and_phase_invariant(
            seed in any::<u64>(), phase in 0.0f64..(2.0 * PI), dim in 1usize..7
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_unit(&mut rng, dim);
            let y = random_unit(&mut rng, dim);
            let dxy = chordal_distance(&x, &y).unwrap();
            let sq = |d: f64| d * d;
            // Compared squared: √ amplifies rounding near zero distance.
            prop_assert!((sq(dxy) - sq(chordal_distance(&y, &x).unwrap())).abs() <= 1e-12);
            prop_assert!((sq(dxy) - sq(chordal_distance(&x.rotate(phase), &y).unwrap())).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&dxy));
        }

        #[test]
        fn array_response_norm(theta in 0.0f64..=PI, n_t in 1usize..12, dl in 0.1f64..2.0) {
            let a = array_response(theta, n_t, dl).unwrap();
            prop_assert!((a.norm() - (n_t as f64).sqrt()).abs() < 1e-12);
            let h = normalized_array_response(theta, n_t, dl).unwrap();
            prop_assert!((h.norm() - 1.0).abs() < 1e-12);
        }
    }
}
