//! Bipartite states: validated density matrices, pure states with their
//! Schmidt decomposition, and the named state families used in the
//! reproduction runs.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, StateInvariant};
use crate::matkernel::{hermitian_eig, partial_trace_b, ComplexMatrix, HERMITIAN_TOL, ZERO};
use crate::random::{orthonormal_frame, seeded_rng};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = -1e-10;
pub const NORM_TOL: f64 = 1e-12;
/// Schmidt coefficients at or below this count as zero.
pub const SCHMIDT_ZERO: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    d_a: usize,
    d_b: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(d_a: usize, d_b: usize, mat: ComplexMatrix) -> Result<Self> {
        let n = d_a * d_b;
        if d_a == 0 || d_b == 0 || mat.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix {:?} does not match {d_a}x{d_b}",
                mat.shape()
            )));
        }
        let deviation = mat.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::InvalidState {
                invariant: StateInvariant::Hermitian,
                detail: format!("max |rho - rho^†| = {deviation:.3e}"),
            });
        }
        let trace = mat.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState {
                invariant: StateInvariant::Trace,
                detail: format!("trace = {:.12} (defect {:.3e})", trace.re, trace.re - 1.0),
            });
        }
        let min = hermitian_eig(&mat)?.values[0];
        if min < PSD_TOL {
            return Err(Error::InvalidState {
                invariant: StateInvariant::Positivity,
                detail: format!("min eigenvalue = {min:.3e}"),
            });
        }
        Ok(Self { d_a, d_b, mat })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { d_a: psi.d_a, d_b: psi.d_b, mat: ComplexMatrix::outer(&psi.amps, &psi.amps) }
    }

    /// `w·self + (1−w)·other`.
    pub fn mix(&self, w: f64, other: &Self) -> Result<Self> {
        if (self.d_a, self.d_b) != (other.d_a, other.d_b) {
            return Err(Error::DimensionMismatch("mixing states of different shapes".into()));
        }
        Self::new(self.d_a, self.d_b, &self.mat.scale(w) + &other.mat.scale(1.0 - w))
    }

    pub fn to_file(&self) -> DensityMatrixFile {
        DensityMatrixFile { d_a: self.d_a, d_b: self.d_b, matrix: self.mat.clone() }
    }

    pub fn from_file(file: DensityMatrixFile) -> Result<Self> {
        Self::new(file.d_a, file.d_b, file.matrix)
    }
}

/// JSON form `{"dA", "dB", "matrix"}` with rows of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixFile {
    #[serde(rename = "dA")]
    pub d_a: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
    pub matrix: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct PureState {
    d_a: usize,
    d_b: usize,
    amps: Vec<Complex64>,
    schmidt: OnceLock<Vec<f64>>,
}

impl PureState {
    pub fn new(d_a: usize, d_b: usize, amps: Vec<Complex64>) -> Result<Self> {
        if d_a == 0 || d_b == 0 || amps.len() != d_a * d_b {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {d_a}x{d_b}", amps.len())));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::ParameterOutOfRange(format!("state norm {norm} is not 1")));
        }
        Ok(Self { d_a, d_b, amps, schmidt: OnceLock::new() })
    }

    /// Rescales `amps` to unit norm first.
    pub fn normalized(d_a: usize, d_b: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Self::new(d_a, d_b, amps)
    }

    /// `|i⟩|k⟩`
    pub fn basis_product(d_a: usize, d_b: usize, i: usize, k: usize) -> Result<Self> {
        let mut amps = vec![ZERO; d_a * d_b];
        amps[i * d_b + k] = Complex64::new(1.0, 0.0);
        Self::new(d_a, d_b, amps)
    }

    /// `Σ_i |ii⟩/√d`
    pub fn maximally_entangled(d: usize) -> Self {
        let mut amps = vec![ZERO; d * d];
        for i in 0..d {
            amps[i * d + i] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        }
        Self { d_a: d, d_b: d, amps, schmidt: OnceLock::new() }
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Nonzero Schmidt coefficients, nonincreasing.
    pub fn schmidt_coefficients(&self) -> &[f64] {
        self.schmidt.get_or_init(|| {
            schmidt_decompose(self).coefficients.into_iter().filter(|&c| c > SCHMIDT_ZERO).collect()
        })
    }

    pub fn schmidt_rank(&self) -> usize {
        self.schmidt_coefficients().len()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `|ψ⟩ = Σ λ_s |e_s⟩⊗|f_s⟩` with all `min(dA, dB)` coefficients,
/// nonincreasing; `left[s]`/`right[s]` are `e_s`/`f_s`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c > SCHMIDT_ZERO).count()
    }

    /// Amplitudes `Σ λ_s e_s ⊗ f_s`.
    pub fn reassemble(&self) -> Vec<Complex64> {
        let (d_a, d_b) = (self.left[0].len(), self.right[0].len());
        let mut amps = vec![ZERO; d_a * d_b];
        for ((lambda, e), f) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for i in 0..d_a {
                for k in 0..d_b {
                    amps[i * d_b + k] += e[i] * f[k] * *lambda;
                }
            }
        }
        amps
    }
}

/// Schmidt decomposition via the SVD of the `dA×dB` coefficient matrix.
pub fn schmidt_decompose(psi: &PureState) -> SchmidtDecomposition {
    let (d_a, d_b) = (psi.d_a, psi.d_b);
    let coeffs = DMatrix::from_row_slice(d_a, d_b, &psi.amps);
    let svd = SVD::new(coeffs, true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    SchmidtDecomposition {
        coefficients: order.iter().map(|&s| svd.singular_values[s]).collect(),
        left: order.iter().map(|&s| (0..d_a).map(|i| u[(i, s)]).collect()).collect(),
        right: order.iter().map(|&s| (0..d_b).map(|k| v_t[(s, k)]).collect()).collect(),
    }
}

/// Deterministic pure state of Schmidt rank exactly `r`: Dirichlet(1)
/// weights for `λ_s²` and Gaussian orthonormal frames on both sides.
pub fn random_schmidt_rank_state(d_a: usize, d_b: usize, r: usize, seed: u64) -> Result<PureState> {
    if r == 0 || r > d_a.min(d_b) {
        return Err(Error::ParameterOutOfRange(format!(
            "Schmidt rank {r} outside 1..={}",
            d_a.min(d_b)
        )));
    }
    let mut rng = seeded_rng(seed);
    let weights = loop {
        let raw: Vec<f64> = (0..r).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|v| v / total).collect();
        if w.iter().all(|&p| p.sqrt() > 1e-6) {
            break w;
        }
    };
    let left = orthonormal_frame(d_a, r, &mut rng);
    let right = orthonormal_frame(d_b, r, &mut rng);
    let decomposition = SchmidtDecomposition {
        coefficients: weights.iter().map(|p| p.sqrt()).collect(),
        left,
        right,
    };
    PureState::normalized(d_a, d_b, decomposition.reassemble())
}

/// `√(2(1 − tr ρ_A²))` via the reduced state.
pub fn pure_concurrence(psi: &PureState) -> f64 {
    let rho = ComplexMatrix::outer(&psi.amps, &psi.amps);
    let reduced = partial_trace_b(&rho, psi.d_a, psi.d_b).expect("shape fixed by construction");
    let purity = reduced.trace_product(&reduced).re;
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("{name} = {v} must lie in (0, 1)")))
    }
}

fn check_closed_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("{name} = {v} must lie in [0, 1]")))
    }
}

fn real_symmetric(n: usize, entries: &[(usize, usize, f64)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for &(i, j, v) in entries {
        m[(i, j)] = Complex64::new(v, 0.0);
        m[(j, i)] = Complex64::new(v, 0.0);
    }
    m
}

pub fn maximally_mixed(d_a: usize, d_b: usize) -> DensityMatrix {
    let n = d_a * d_b;
    DensityMatrix { d_a, d_b, mat: ComplexMatrix::identity(n).scale(1.0 / n as f64) }
}

/// Horodecki's bound entangled `2⊗4` family.
pub fn horodecki_2x4(tau: f64) -> Result<DensityMatrix> {
    check_open_unit("tau", tau)?;
    let edge = (1.0 + tau) / 2.0;
    let corner = (1.0 - tau * tau).sqrt() / 2.0;
    let mut entries: Vec<(usize, usize, f64)> = (0..8).map(|i| (i, i, tau)).collect();
    entries.extend([(4, 4, edge), (7, 7, edge), (0, 5, tau), (1, 6, tau), (2, 7, tau), (4, 7, corner)]);
    let m = real_symmetric(8, &entries).scale(1.0 / (1.0 + 7.0 * tau));
    DensityMatrix::new(2, 4, m)
}

/// `q|ξ⟩⟨ξ| + (1−q)ρ_τ` with `ξ = (|00⟩+|11⟩)/√2` in `2⊗4`.
pub fn bell_horodecki_2x4(tau: f64, q: f64) -> Result<DensityMatrix> {
    check_closed_unit("q", q)?;
    let bound = horodecki_2x4(tau)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 8];
    amps[0] = Complex64::new(s, 0.0);
    amps[5] = Complex64::new(s, 0.0);
    let xi = PureState::new(2, 4, amps)?;
    xi.density().mix(q, &bound)
}

fn ququart_ket(entries: &[(usize, usize, f64)]) -> Vec<Complex64> {
    let mut amps = vec![ZERO; 16];
    for &(i, k, v) in entries {
        amps[i * 4 + k] = Complex64::new(v, 0.0);
    }
    amps
}

/// Pure state `ξ = (|00⟩ + |11⟩ + √23|22⟩)/5` of the ququart mixture.
pub fn ququart_xi() -> PureState {
    let amps = ququart_ket(&[(0, 0, 0.2), (1, 1, 0.2), (2, 2, 23f64.sqrt() / 5.0)]);
    PureState::normalized(4, 4, amps).expect("unit vector")
}

fn ququart_mixture_with(p: f64, third_level: usize) -> Result<DensityMatrix> {
    check_closed_unit("p", p)?;
    let r3 = 1.0 / 3f64.sqrt();
    let phi = ququart_ket(&[(0, 0, r3), (1, 1, r3), (third_level, third_level, r3)]);
    let w = ququart_ket(&[(2, 3, 1.0), (3, 2, 1.0)]);
    let rho = &ComplexMatrix::outer(&phi, &phi).scale(0.5) + &ComplexMatrix::outer(&w, &w).scale(0.25);
    let rho = DensityMatrix::new(4, 4, rho)?;
    rho.mix(p, &ququart_xi().density())
}

/// `p·ρ + (1−p)|ξ⟩⟨ξ|` on `4⊗4`, where
/// `ρ = ½|φ⟩⟨φ| + ¼(|23⟩+|32⟩)(⟨23|+⟨32|)` and `φ = (|00⟩+|11⟩+|22⟩)/√3`
/// shares its third level with `ξ`.
pub fn ququart_mixture(p: f64) -> Result<DensityMatrix> {
    ququart_mixture_with(p, 2)
}

/// Variant with `φ = (|00⟩+|11⟩+|33⟩)/√3`, whose third level differs from
/// the one `ξ` populates. Kept for comparison; its thresholds sit near
/// `p ≈ 0.753` for both the correlation and realignment curves.
pub fn ququart_mixture_split_levels(p: f64) -> Result<DensityMatrix> {
    ququart_mixture_with(p, 3)
}

/// `v|Ψ⁺⟩⟨Ψ⁺| + (1−v)I/d²`.
pub fn isotropic(d: usize, v: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_closed_unit("v", v)?;
    PureState::maximally_entangled(d).density().mix(v, &maximally_mixed(d, d))
}

/// Entry `(7,7)` of the `3⊗3` Horodecki matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horodecki3x3Form {
    /// `τ`, so the diagonal sums to `1 + 8τ`.
    Standard,
    /// `0`, leaving trace `(1+7τ)/(1+8τ)`. Never a valid state.
    ZeroedEntry,
}

/// Unvalidated `3⊗3` Horodecki matrix with prefactor `1/(1+8τ)`.
pub fn horodecki_3x3_matrix(tau: f64, form: Horodecki3x3Form) -> ComplexMatrix {
    let edge = (1.0 + tau) / 2.0;
    let corner = (1.0 - tau * tau).sqrt() / 2.0;
    let mut entries: Vec<(usize, usize, f64)> = (0..9).map(|i| (i, i, tau)).collect();
    entries.extend([(6, 6, edge), (8, 8, edge), (0, 4, tau), (0, 8, tau), (4, 8, tau), (6, 8, corner)]);
    if form == Horodecki3x3Form::ZeroedEntry {
        entries.push((7, 7, 0.0));
    }
    real_symmetric(9, &entries).scale(1.0 / (1.0 + 8.0 * tau))
}

pub fn horodecki_3x3_form(tau: f64, form: Horodecki3x3Form) -> Result<DensityMatrix> {
    check_open_unit("tau", tau)?;
    DensityMatrix::new(3, 3, horodecki_3x3_matrix(tau, form))
}

pub fn horodecki_3x3(tau: f64) -> Result<DensityMatrix> {
    horodecki_3x3_form(tau, Horodecki3x3Form::Standard)
}

/// `q·ρ_τ + (1−q)I/9`.
pub fn noisy_horodecki_3x3(tau: f64, q: f64) -> Result<DensityMatrix> {
    check_closed_unit("q", q)?;
    horodecki_3x3(tau)?.mix(q, &maximally_mixed(3, 3))
}
