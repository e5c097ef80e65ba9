//! Comparison criteria, all reported on the `SN − 1` scale, and the
//! special measurements they need: Weyl-Heisenberg SICs and prime-dimension MUBs.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::{
    correlation_matrix, klr_constants, parametric_trace_norm, realignment_sn_bound, schmidt_bound, PovmParams,
};
use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, ZERO};
use crate::povm::SymmetricPovm;
use crate::states::{DensityMatrix, PureState};

/// Tolerance on `|⟨ψ|ψ'⟩|² = 1/(d+1)` for SIC orbits.
pub const SIC_TOL: f64 = 1e-10;

fn root_of_unity(d: usize, power: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (power % d) as f64 / d as f64)
}

/// `(1, d²)`-POVM `{|ψ_jk⟩⟨ψ_jk|/d}` from the clock-and-shift orbit
/// `ψ_jk = X^j Z^k ψ` of a fiducial, after checking the SIC overlaps.
pub fn sic_from_fiducial(fiducial: &[Complex64]) -> Result<SymmetricPovm> {
    let d = fiducial.len();
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let norm = fiducial.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut orbit = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let v: Vec<Complex64> = (0..d)
                .map(|n| {
                    let src = (n + d - j) % d;
                    root_of_unity(d, k * src) * fiducial[src] / norm
                })
                .collect();
            orbit.push(v);
        }
    }
    let target = 1.0 / (d as f64 + 1.0);
    for (a, u) in orbit.iter().enumerate() {
        for (b, v) in orbit.iter().enumerate().skip(a + 1) {
            let overlap = u.iter().zip(v).map(|(p, q)| p.conj() * q).sum::<Complex64>().norm_sqr();
            if (overlap - target).abs() > SIC_TOL {
                return Err(Error::NotASic(format!(
                    "|<psi_{a}|psi_{b}>|^2 = {overlap:.12}, expected {target:.12}"
                )));
            }
        }
    }
    let effects = orbit.iter().map(|v| ComplexMatrix::outer(v, v).scale(1.0 / d as f64)).collect();
    SymmetricPovm::from_effects(d, 1, d * d, effects)
}

/// Qutrit SIC from the fiducial `(|1⟩ − |2⟩)/√2`.
pub fn sic_povm_d3() -> SymmetricPovm {
    let s = FRAC_1_SQRT_2;
    sic_from_fiducial(&[ZERO, Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]).expect("known SIC fiducial")
}

/// Qubit SIC (tetrahedron) from the Bloch vector `(1,1,1)/√3`.
pub fn sic_povm_d2() -> SymmetricPovm {
    let theta = (1.0 / 3f64.sqrt()).acos();
    let fiducial = [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), PI / 4.0),
    ];
    sic_from_fiducial(&fiducial).expect("known SIC fiducial")
}

/// SIC in the dimensions with a built-in fiducial.
pub fn sic_povm(d: usize) -> Result<SymmetricPovm> {
    match d {
        2 => Ok(sic_povm_d2()),
        3 => Ok(sic_povm_d3()),
        _ => Err(Error::Unsupported(format!("no built-in SIC fiducial for d = {d}"))),
    }
}

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..d).take_while(|p| p * p <= d).all(|p| !d.is_multiple_of(p))
}

/// `(d+1, d)`-POVM of projectors onto a complete set of mutually unbiased
/// bases, for prime `d`: the computational basis followed by the quadratic
/// phase bases `ω^{b k² + j k}/√d` (Pauli X and Y eigenbases for `d = 2`).
pub fn mub_povm(d: usize) -> Result<SymmetricPovm> {
    if !is_prime(d) {
        return Err(Error::Unsupported(format!("MUB construction needs prime d, got {d}")));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let mut bases: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(d + 1);
    bases.push(
        (0..d)
            .map(|j| (0..d).map(|k| if j == k { Complex64::new(1.0, 0.0) } else { ZERO }).collect())
            .collect(),
    );
    if d == 2 {
        let i = Complex64::new(0.0, 1.0);
        let s = Complex64::new(scale, 0.0);
        bases.push(vec![vec![s, s], vec![s, -s]]);
        bases.push(vec![vec![s, s * i], vec![s, -s * i]]);
    } else {
        for b in 0..d {
            bases.push(
                (0..d)
                    .map(|j| (0..d).map(|k| root_of_unity(d, b * k * k + j * k) * scale).collect())
                    .collect(),
            );
        }
    }
    let effects = bases.iter().flatten().map(|v| ComplexMatrix::outer(v, v)).collect();
    SymmetricPovm::from_effects(d, d + 1, d, effects)
}

/// Lower bound on `SN − 1` from GSICs of purities `x_a`, `x_b` on the two
/// sides, evaluated through the parameter-only trace norm.
pub fn gsic_baseline(rho: &DensityMatrix, x_a: f64, x_b: f64) -> Result<f64> {
    let (d_a, d_b) = (rho.d_a(), rho.d_b());
    let a = PovmParams::complete(d_a, d_a * d_a, x_a)?;
    let b = PovmParams::complete(d_b, d_b * d_b, x_b)?;
    let norm = parametric_trace_norm(rho, a, b)?;
    Ok(schmidt_bound(norm, &klr_constants(a, b)?).0)
}

/// Same criterion with SICs on both sides; for `d⊗d` this is
/// `d(d+1)(‖P‖ − 2/(d(d+1)))`.
pub fn sic_baseline(rho: &DensityMatrix) -> Result<f64> {
    let (pa, pb) = (sic_povm(rho.d_a())?, sic_povm(rho.d_b())?);
    let norm = correlation_matrix(rho, &pa, &pb)?.trace_norm();
    Ok(schmidt_bound(norm, &klr_constants(PovmParams::of(&pa), PovmParams::of(&pb))?).0)
}

/// `‖R(ρ)‖_tr − 1`.
pub fn realignment_baseline(rho: &DensityMatrix) -> f64 {
    realignment_sn_bound(rho) - 1.0
}

/// `d·⟨Ψ⁺|ρ|Ψ⁺⟩ − 1`, from `SN > r` whenever the fidelity exceeds `r/d`.
pub fn fidelity_baseline(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.d_a();
    if rho.d_b() != d {
        return Err(Error::Unsupported(format!("fidelity criterion needs d⊗d, got {d}x{}", rho.d_b())));
    }
    let phi = PureState::maximally_entangled(d);
    let f = rho.matrix().sandwich(phi.amplitudes(), phi.amplitudes()).re;
    Ok(d as f64 * f - 1.0)
}
