//! Trace-norm criteria on correlation matrices of product `(N,M)`-POVMs.
//!
//! For measurements `{E^A_{α,k}}` and `{E^B_{β,l}}` the correlation matrix
//! `P(ρ)` collects `tr(ρ E^A_{α,k} ⊗ E^B_{β,l})`. Any state of Schmidt number
//! at most `r` satisfies `‖P‖_tr ≤ L/K + (r−1)·R/K`, which turns a measured
//! trace norm into a certified lower bound on the Schmidt number.

mod baselines;
mod report;

pub use baselines::*;
pub use report::*;

use serde::Serialize;

use crate::basis::gellmann_basis;
use crate::error::{Error, Result};
use crate::matkernel::{real_trace_norm, realign, trace_norm, ComplexMatrix, ZERO};
use crate::povm::{check_window, SymmetricPovm};
use crate::states::{schmidt_decompose, DensityMatrix, PureState};

/// Largest imaginary part tolerated in a correlation entry.
pub const IMAG_TOL: f64 = 1e-10;
/// Slack in the integer ceiling, so rounding never certifies an extra level.
pub const CEIL_SLACK: f64 = 1e-9;

/// Real `(N_A·M_A) × (N_B·M_B)` matrix of joint outcome probabilities,
/// row-major, rows α-major and columns β-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n_a: usize,
    m_a: usize,
    n_b: usize,
    m_b: usize,
    data: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn rows(&self) -> usize {
        self.n_a * self.m_a
    }

    pub fn cols(&self) -> usize {
        self.n_b * self.m_b
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols() + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Sum of block `(α, β)`, which is 1 for complete measurements.
    pub fn block_sum(&self, alpha: usize, beta: usize) -> f64 {
        let mut sum = 0.0;
        for k in 0..self.m_a {
            for l in 0..self.m_b {
                sum += self.get(alpha * self.m_a + k, beta * self.m_b + l);
            }
        }
        sum
    }

    pub fn trace_norm(&self) -> f64 {
        real_trace_norm(self.rows(), self.cols(), &self.data)
    }
}

/// `tr(ρ A_i ⊗ B_j)` for Hermitian operator lists, checked to be real.
pub(crate) fn expectation_table(
    rho: &DensityMatrix,
    ops_a: &[ComplexMatrix],
    ops_b: &[ComplexMatrix],
) -> Result<Vec<f64>> {
    let (d_a, d_b) = (rho.d_a(), rho.d_b());
    if ops_a.iter().any(|a| a.shape() != (d_a, d_a)) || ops_b.iter().any(|b| b.shape() != (d_b, d_b)) {
        return Err(Error::DimensionMismatch(format!(
            "local operators do not match the {d_a}x{d_b} state"
        )));
    }
    let m = rho.matrix();
    let mut table = Vec::with_capacity(ops_a.len() * ops_b.len());
    for (row, a) in ops_a.iter().enumerate() {
        // σ = tr_A[(A ⊗ I) ρ]
        let mut sigma = ComplexMatrix::zeros(d_b, d_b);
        for i in 0..d_a {
            for j in 0..d_a {
                let coeff = a[(i, j)];
                if coeff == ZERO {
                    continue;
                }
                for k in 0..d_b {
                    for l in 0..d_b {
                        sigma[(k, l)] += coeff * m[(j * d_b + k, i * d_b + l)];
                    }
                }
            }
        }
        for (col, b) in ops_b.iter().enumerate() {
            let value = b.trace_product(&sigma);
            if value.im.abs() >= IMAG_TOL {
                return Err(Error::ImaginaryResidue { row, col, residue: value.im });
            }
            table.push(value.re);
        }
    }
    Ok(table)
}

pub fn correlation_matrix(rho: &DensityMatrix, pa: &SymmetricPovm, pb: &SymmetricPovm) -> Result<CorrelationMatrix> {
    if pa.d() != rho.d_a() || pb.d() != rho.d_b() {
        return Err(Error::DimensionMismatch(format!(
            "measurements act on {}x{}, state is {}x{}",
            pa.d(),
            pb.d(),
            rho.d_a(),
            rho.d_b()
        )));
    }
    let data = expectation_table(rho, pa.effects(), pb.effects())?;
    Ok(CorrelationMatrix { n_a: pa.n(), m_a: pa.m(), n_b: pb.n(), m_b: pb.m(), data })
}

/// Local measurement parameters `(d, N, M, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PovmParams {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub x: f64,
}

impl PovmParams {
    pub fn of(p: &SymmetricPovm) -> Self {
        Self { d: p.d(), n: p.n(), m: p.m(), x: p.x() }
    }

    /// Parameters of an informationally complete family, `N = (d²−1)/(M−1)`.
    pub fn complete(d: usize, m: usize, x: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if m < 2 || !(d * d - 1).is_multiple_of(m - 1) {
            return Err(Error::ParameterOutOfRange(format!("M = {m} does not divide d²−1 = {} into groups", d * d - 1)));
        }
        check_window(d, m, x)?;
        Ok(Self { d, n: (d * d - 1) / (m - 1), m, x })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionConstants {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub a: PovmParams,
    pub b: PovmParams,
}

pub fn klr_constants(a: PovmParams, b: PovmParams) -> Result<CriterionConstants> {
    check_window(a.d, a.m, a.x)?;
    check_window(b.d, b.m, b.x)?;
    let (da, ma, xa) = (a.d as f64, a.m as f64, a.x);
    let (db, mb, xb) = (b.d as f64, b.m as f64, b.x);
    let k = (da * db * (ma - 1.0) * (mb - 1.0)).sqrt();
    let l = ((da - 1.0) * (db - 1.0) * (ma * ma * xa + da * da) * (mb * mb * xb + db * db) / (ma * mb)).sqrt();
    let r = (da * db * (ma * ma * xa - da) * (mb * mb * xb - db) / (ma * mb)).sqrt();
    Ok(CriterionConstants { k, l, r, a, b })
}

pub fn constants_for(pa: &SymmetricPovm, pb: &SymmetricPovm) -> Result<CriterionConstants> {
    klr_constants(PovmParams::of(pa), PovmParams::of(pb))
}

/// `max(1, ⌈s + 1 − 1e−9⌉)`.
pub fn sn_int_from_real(sn_real_lb: f64) -> u32 {
    let ceil = (sn_real_lb + 1.0 - CEIL_SLACK).ceil();
    if ceil.is_finite() && ceil > 1.0 {
        ceil as u32
    } else {
        1
    }
}

/// `((K‖P‖ − L)/R, certified integer Schmidt number)`; the real value bounds `SN − 1`.
pub fn schmidt_bound(trace_norm: f64, c: &CriterionConstants) -> (f64, u32) {
    let real = (c.k * trace_norm - c.l) / c.r;
    (real, sn_int_from_real(real))
}

/// Largest trace norm compatible with separability, `L/K`.
pub fn separability_bound(c: &CriterionConstants) -> f64 {
    c.l / c.k
}

/// `L/K + (r−1)·R/K`.
pub fn rank_bound(c: &CriterionConstants, r: usize) -> f64 {
    (c.l + (r as f64 - 1.0) * c.r) / c.k
}

/// Equal-measurement form `(d−1)(M²x+d²)/(dM(M−1)) + (r−1)(M²x−d)/(M(M−1))`.
pub fn corollary1_bound(d: usize, m: usize, x: f64, r: usize) -> Result<f64> {
    check_window(d, m, x)?;
    let (d, m, r) = (d as f64, m as f64, r as f64);
    let mm1 = m * (m - 1.0);
    Ok((d - 1.0) * (m * m * x + d * d) / (d * mm1) + (r - 1.0) * (m * m * x - d) / mm1)
}

/// `max(0, (K/R)·√(2/(d(d−1)))·(‖P‖ − L/K))` with `d = min(dA, dB)`.
pub fn concurrence_lower_bound(trace_norm: f64, c: &CriterionConstants, d_a: usize, d_b: usize) -> f64 {
    let d = d_a.min(d_b) as f64;
    let value = c.k / c.r * (2.0 / (d * (d - 1.0))).sqrt() * (trace_norm - c.l / c.k);
    value.max(0.0)
}

/// `(‖D_s‖_tr, ‖O_{s,t}‖_tr)` for the diagonal and off-diagonal pieces of a
/// pure state's correlation matrix in its Schmidt basis.
pub fn pure_norm_closed_forms(a: PovmParams, b: PovmParams) -> Result<(f64, f64)> {
    check_window(a.d, a.m, a.x)?;
    check_window(b.d, b.m, b.x)?;
    let diag = |p: PovmParams| {
        let (d, m) = (p.d as f64, p.m as f64);
        ((d - 1.0) * (m * m * p.x + d * d) / (d * m * (m - 1.0))).sqrt()
    };
    let off = |p: PovmParams| {
        let (d, m) = (p.d as f64, p.m as f64);
        ((m * m * p.x - d) / (m * (m - 1.0))).sqrt()
    };
    Ok((diag(a) * diag(b), off(a) * off(b)))
}

/// Builds `D_s` (entries `⟨s|E^A|s⟩⟨s|E^B|s⟩`) and `O_{s,t}` (entries
/// `⟨t|E^A|s⟩⟨t|E^B|s⟩`) in the computational basis and returns their trace norms.
pub fn direct_pure_norms(pa: &SymmetricPovm, pb: &SymmetricPovm, s: usize, t: usize) -> Result<(f64, f64)> {
    let d = pa.d().min(pb.d());
    if s >= d || t >= d || s == t {
        return Err(Error::ParameterOutOfRange(format!("need distinct levels below {d}, got ({s}, {t})")));
    }
    let build = |u: usize, v: usize| {
        ComplexMatrix::from_fn(pa.effects().len(), pb.effects().len(), |i, j| {
            pa.effects()[i][(v, u)] * pb.effects()[j][(v, u)]
        })
    };
    Ok((trace_norm(&build(s, s)), trace_norm(&build(s, t))))
}

/// Both sides of the pure-state identity for equal measurements on `d⊗d`:
/// `M(M−1)/(M²x−d)·(‖P‖ − (d−1)(M²x+d²)/(dM(M−1))) = 2 Σ_{i<j} λ_i λ_j`.
pub fn pure_state_equality(psi: &PureState, p: &SymmetricPovm) -> Result<(f64, f64)> {
    if psi.d_a() != p.d() || psi.d_b() != p.d() {
        return Err(Error::DimensionMismatch(format!(
            "pure state is {}x{}, measurement dimension {}",
            psi.d_a(),
            psi.d_b(),
            p.d()
        )));
    }
    if !p.is_informationally_complete() {
        return Err(Error::NotInformationallyComplete("pure-state identity needs a complete family".into()));
    }
    let norm = correlation_matrix(&psi.density(), p, p)?.trace_norm();
    let (d, m, x) = (p.d() as f64, p.m() as f64, p.x());
    let mm1 = m * (m - 1.0);
    let lhs = mm1 / (m * m * x - d) * (norm - (d - 1.0) * (m * m * x + d * d) / (d * mm1));
    let lambdas = schmidt_decompose(psi).coefficients;
    let total: f64 = lambdas.iter().sum();
    let squares: f64 = lambdas.iter().map(|l| l * l).sum();
    Ok((lhs, total * total - squares))
}

/// `‖R(ρ)‖_tr`, itself a lower bound on the Schmidt number.
pub fn realignment_sn_bound(rho: &DensityMatrix) -> f64 {
    let r = realign(rho.matrix(), rho.d_a(), rho.d_b()).expect("shape fixed by DensityMatrix");
    trace_norm(&r)
}

/// `‖P‖_tr = N/M + vN(M²x−d)/(dM)` for the isotropic state.
pub fn isotropic_norm_closed_form(d: usize, n: usize, m: usize, x: f64, v: f64) -> Result<f64> {
    check_window(d, m, x)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::ParameterOutOfRange(format!("v = {v} must lie in [0, 1]")));
    }
    let (d, n, m) = (d as f64, n as f64, m as f64);
    Ok(n / m + v * n * (m * m * x - d) / (d * m))
}

/// `v_opt = (rd−1)/(d²−1)`: isotropic states above it have Schmidt number > r.
pub fn fidelity_isotropic_threshold(d: usize, r: usize) -> Result<f64> {
    if r == 0 || r >= d {
        return Err(Error::ParameterOutOfRange(format!("r = {r} must satisfy 1 <= r < d = {d}")));
    }
    let (d, r) = (d as f64, r as f64);
    Ok((r * d - 1.0) / (d * d - 1.0))
}

/// `(rank-r bound, isotropic trace norm)`; above `v_opt` the second
/// strictly exceeds the first.
pub fn fidelity_implication(d: usize, m: usize, x: f64, r: usize, v: f64) -> Result<(f64, f64)> {
    let params = PovmParams::complete(d, m, x)?;
    fidelity_isotropic_threshold(d, r)?;
    Ok((corollary1_bound(d, m, x, r)?, isotropic_norm_closed_form(d, params.n, m, x, v)?))
}

/// `‖P(ρ)‖_tr` for any informationally complete pair with the given
/// parameters, without building the effects.
///
/// The map `σ ↦ (tr E_i σ)_i` factors as an isometry times
/// `diag(c_0, c_1, …, c_1)` in the basis `{I/√d, G_μ}` with
/// `c_0² = dN/M` and `c_1² = (M²x−d)/(M(M−1))`, so the norm depends on the
/// measurements only through `(d, N, M, x)`.
pub fn parametric_trace_norm(rho: &DensityMatrix, a: PovmParams, b: PovmParams) -> Result<f64> {
    if a.d != rho.d_a() || b.d != rho.d_b() {
        return Err(Error::DimensionMismatch(format!(
            "parameters for {}x{}, state is {}x{}",
            a.d,
            b.d,
            rho.d_a(),
            rho.d_b()
        )));
    }
    for p in [a, b] {
        if p.n * (p.m - 1) != p.d * p.d - 1 {
            return Err(Error::NotInformationallyComplete(format!("({}, {}) in d = {}", p.n, p.m, p.d)));
        }
        check_window(p.d, p.m, p.x)?;
    }
    let scaled = |p: PovmParams| -> Result<Vec<ComplexMatrix>> {
        let (d, n, m) = (p.d as f64, p.n as f64, p.m as f64);
        let c0 = (d * n / m).sqrt();
        let c1 = ((m * m * p.x - d) / (m * (m - 1.0))).sqrt();
        let mut ops = vec![ComplexMatrix::identity(p.d).scale(c0 / d.sqrt())];
        ops.extend(gellmann_basis(p.d)?.ops().iter().map(|g| g.scale(c1)));
        Ok(ops)
    };
    let (ops_a, ops_b) = (scaled(a)?, scaled(b)?);
    let table = expectation_table(rho, &ops_a, &ops_b)?;
    Ok(real_trace_norm(ops_a.len(), ops_b.len(), &table))
}

#[cfg(test)]
mod tests;
