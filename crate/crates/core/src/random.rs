//! Seeded randomness for test oracles and random-state constructors.
//!
//! Every random object in the crate is drawn from [`SeededRng`], a ChaCha8
//! stream keyed by a `u64` via `SeedableRng::seed_from_u64`. A fixed seed
//! reproduces the same stream on every run and platform for a given
//! `rand_chacha` major version.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matkernel::{ComplexMatrix, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal sample (independent N(0,1) real and imaginary parts).
pub fn complex_gaussian(rng: &mut SeededRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn complex_gaussian_vector(n: usize, rng: &mut SeededRng) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn complex_gaussian_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let x = complex_gaussian_matrix(n, n, rng);
    (&x + &x.adjoint()).scale(0.5)
}

/// `count` orthonormal vectors in `C^n` by Gram-Schmidt on Gaussian draws.
pub fn orthonormal_frame(n: usize, count: usize, rng: &mut SeededRng) -> Vec<Vec<Complex64>> {
    assert!(count <= n, "cannot fit {count} orthonormal vectors in dimension {n}");
    let mut frame: Vec<Vec<Complex64>> = Vec::with_capacity(count);
    while frame.len() < count {
        let mut v = complex_gaussian_vector(n, rng);
        // two passes keep the residual overlaps at rounding level
        for _ in 0..2 {
            for u in &frame {
                let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= overlap * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        frame.push(v);
    }
    frame
}

/// Haar-distributed unitary, columns from [`orthonormal_frame`].
pub fn random_unitary(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let frame = orthonormal_frame(n, n, rng);
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, col) in frame.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Random unit vector in `C^n`.
pub fn random_unit_vector(n: usize, rng: &mut SeededRng) -> Vec<Complex64> {
    let mut v = complex_gaussian_vector(n, rng);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        v = vec![ZERO; n];
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    v.iter_mut().for_each(|z| *z /= norm);
    v
}
