//! Informationally complete `(N,M)`-POVMs.
//!
//! From a grouped traceless basis `{G_{α,k}}` the effects are
//! `E_{α,k} = I/M + t·H_{α,k}` with
//!
//! ```text
//! H_{α,k} = G_α − √M(√M+1)·G_{α,k}   (k < M)
//! H_{α,M} = (√M+1)·G_α               G_α = Σ_k G_{α,k}
//! ```
//!
//! and the common purity `x = tr(E²) = d/M² + t²(M−1)(√M+1)²`.
//! Effects are stored flattened α-major: index `α·M + k`.

use serde::{Deserialize, Serialize};

use crate::basis::GroupedBasis;
use crate::error::{Error, Result};
use crate::matkernel::{hermitian_eig, min_eigenvalue, ComplexMatrix};

/// Default tolerance for the defining trace relations.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for an effect.
pub const PSD_TOL: f64 = -1e-10;
/// Slack when checking `t` against its interval.
const T_SLACK: f64 = 1e-12;

/// Open-closed window `(d/M², min{d²/M², d/M}]` for the purity `x`.
pub fn purity_window(d: usize, m: usize) -> (f64, f64) {
    let (d, m) = (d as f64, m as f64);
    (d / (m * m), (d * d / (m * m)).min(d / m))
}

/// Checks `d/M² < x ≤ min{d²/M², d/M}` (upper end with rounding slack).
pub fn check_window(d: usize, m: usize, x: f64) -> Result<()> {
    let (lo, hi) = purity_window(d, m);
    if x.is_finite() && x > lo && x <= hi * (1.0 + 1e-12) {
        Ok(())
    } else {
        Err(Error::WindowViolation { d, m, x, lo, hi })
    }
}

pub fn x_of_t(d: usize, m: usize, t: f64) -> f64 {
    let mf = m as f64;
    let s = mf.sqrt() + 1.0;
    d as f64 / (mf * mf) + t * t * (mf - 1.0) * s * s
}

/// Nonnegative `t` realizing purity `x`, the inverse of [`x_of_t`].
pub fn t_of_x(d: usize, m: usize, x: f64) -> Result<f64> {
    check_window(d, m, x)?;
    let mf = m as f64;
    let s = mf.sqrt() + 1.0;
    Ok(((x - d as f64 / (mf * mf)) / ((mf - 1.0) * s * s)).sqrt())
}

/// `H_{α,k}` for every group, flattened α-major.
pub fn build_h(gb: &GroupedBasis) -> Vec<ComplexMatrix> {
    let root = (gb.m() as f64).sqrt();
    let mut out = Vec::with_capacity(gb.n() * gb.m());
    for (alpha, group) in gb.groups().iter().enumerate() {
        let g_alpha = gb.group_sum(alpha);
        for g in group {
            out.push(&g_alpha - &g.scale(root * (root + 1.0)));
        }
        out.push(g_alpha.scale(root + 1.0));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TInterval {
    pub lo: f64,
    pub hi: f64,
}

impl TInterval {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo - T_SLACK && t <= self.hi + T_SLACK
    }

    /// Point at fraction `f` of the way from `lo` to `hi`.
    pub fn lerp(&self, f: f64) -> f64 {
        self.lo + f * (self.hi - self.lo)
    }
}

/// Interval of `t` keeping every `I/M + tH` positive semidefinite:
/// `[-1/(M·λ_max), 1/(M·|λ_min|)]` over the pooled spectrum of all `H`.
pub fn t_range(h_ops: &[ComplexMatrix], m: usize) -> Result<TInterval> {
    let mut lambda_max = f64::NEG_INFINITY;
    let mut lambda_min = f64::INFINITY;
    for h in h_ops {
        let eig = hermitian_eig(h)?;
        lambda_min = lambda_min.min(eig.values[0]);
        lambda_max = lambda_max.max(*eig.values.last().unwrap());
    }
    if h_ops.is_empty() || lambda_max <= 1e-14 || lambda_min >= -1e-14 {
        return Err(Error::Degenerate);
    }
    let mf = m as f64;
    Ok(TInterval { lo: -1.0 / (mf * lambda_max), hi: 1.0 / (mf * lambda_min.abs()) })
}

#[derive(Debug, Clone)]
pub struct SymmetricPovm {
    d: usize,
    n: usize,
    m: usize,
    t: Option<f64>,
    x: f64,
    effects: Vec<ComplexMatrix>,
    h_ops: Option<Vec<ComplexMatrix>>,
}

impl SymmetricPovm {
    /// Wraps externally constructed effects (flattened α-major). The purity
    /// is read off the first effect; use [`validate_povm`] to check the
    /// remaining relations.
    pub fn from_effects(d: usize, n: usize, m: usize, effects: Vec<ComplexMatrix>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if n == 0 || m < 2 || effects.len() != n * m {
            return Err(Error::DimensionMismatch(format!(
                "{} effects for an ({n},{m})-POVM",
                effects.len()
            )));
        }
        if let Some(bad) = effects.iter().find(|e| e.shape() != (d, d)) {
            return Err(Error::DimensionMismatch(format!(
                "effect of shape {:?} in dimension {d}",
                bad.shape()
            )));
        }
        let x = effects[0].trace_product(&effects[0]).re;
        Ok(Self { d, n, m, t: None, x, effects, h_ops: None })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> Option<f64> {
        self.t
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn effect(&self, alpha: usize, k: usize) -> &ComplexMatrix {
        &self.effects[alpha * self.m + k]
    }

    pub fn h_ops(&self) -> Option<&[ComplexMatrix]> {
        self.h_ops.as_deref()
    }

    pub fn is_informationally_complete(&self) -> bool {
        self.n * (self.m - 1) == self.d * self.d - 1
    }

    pub fn to_file(&self) -> PovmFile {
        PovmFile { d: self.d, n: self.n, m: self.m, t: self.t, x: self.x, effects: self.effects.clone() }
    }

    pub fn from_file(file: PovmFile) -> Result<Self> {
        let mut p = Self::from_effects(file.d, file.n, file.m, file.effects)?;
        p.t = file.t;
        p.x = file.x;
        Ok(p)
    }
}

/// JSON form `{d, N, M, t, x, effects}`; each effect is a list of rows of
/// `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmFile {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub t: Option<f64>,
    pub x: f64,
    pub effects: Vec<ComplexMatrix>,
}

pub fn build_povm(gb: &GroupedBasis, t: f64) -> Result<SymmetricPovm> {
    let (d, n, m) = (gb.d(), gb.n(), gb.m());
    let h_ops = build_h(gb);
    let range = t_range(&h_ops, m)?;
    if !t.is_finite() || !range.contains(t) {
        return Err(Error::TOutOfRange { t, lo: range.lo, hi: range.hi });
    }
    let base = ComplexMatrix::identity(d).scale(1.0 / m as f64);
    let effects: Vec<ComplexMatrix> = h_ops.iter().map(|h| &base + &h.scale(t)).collect();
    for (idx, e) in effects.iter().enumerate() {
        let min_eigenvalue = min_eigenvalue(e)?;
        if min_eigenvalue < PSD_TOL {
            return Err(Error::PsdViolation { alpha: idx / m, k: idx % m, min_eigenvalue });
        }
    }
    Ok(SymmetricPovm { d, n, m, t: Some(t), x: x_of_t(d, m, t), effects, h_ops: Some(h_ops) })
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub relation: &'static str,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PovmValidation {
    pub checks: Vec<RelationCheck>,
    /// `d/M² < x ≤ min{d²/M², d/M}`; reported separately since `t = 0`
    /// yields a valid but non-informative POVM sitting on the open end.
    pub window_ok: bool,
    pub passed: bool,
}

impl PovmValidation {
    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.relation).collect()
    }

    pub fn deviation(&self, relation: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.relation == relation).map(|c| c.max_deviation)
    }
}

pub fn validate_povm(p: &SymmetricPovm, tol: f64) -> PovmValidation {
    let (d, n, m, x) = (p.d as f64, p.n, p.m, p.x);
    let mf = m as f64;
    let intra = (d - mf * x) / (mf * (mf - 1.0));
    let inter = d / (mf * mf);

    let mut trace_dev: f64 = 0.0;
    let mut purity_dev: f64 = 0.0;
    let mut intra_dev: f64 = 0.0;
    let mut inter_dev: f64 = 0.0;
    let mut hermitian_dev: f64 = 0.0;
    let mut psd_dev: f64 = 0.0;
    let mut complete_dev: f64 = 0.0;

    for a in 0..n {
        let mut sum = ComplexMatrix::zeros(p.d, p.d);
        for k in 0..m {
            let e = p.effect(a, k);
            sum = &sum + e;
            hermitian_dev = hermitian_dev.max(e.hermiticity_deviation());
            trace_dev = trace_dev.max((e.trace() - d / mf).norm());
            let min_eig = if e.hermiticity_deviation() <= crate::matkernel::HERMITIAN_TOL {
                min_eigenvalue(e).unwrap_or(f64::NEG_INFINITY)
            } else {
                f64::NEG_INFINITY
            };
            psd_dev = psd_dev.max((-min_eig).max(0.0));
            for b in 0..n {
                for l in 0..m {
                    let overlap = e.trace_product(p.effect(b, l));
                    let (want, slot) = if a == b && k == l {
                        (x, &mut purity_dev)
                    } else if a == b {
                        (intra, &mut intra_dev)
                    } else {
                        (inter, &mut inter_dev)
                    };
                    *slot = slot.max((overlap - want).norm());
                }
            }
        }
        complete_dev = complete_dev.max(sum.max_abs_diff(&ComplexMatrix::identity(p.d)));
    }

    let check = |relation, max_deviation: f64| RelationCheck { relation, max_deviation, passed: max_deviation <= tol };
    let checks = vec![
        check("hermitian", hermitian_dev),
        check("trace", trace_dev),
        check("purity", purity_dev),
        check("intra-group overlap", intra_dev),
        check("inter-group overlap", inter_dev),
        check("completeness", complete_dev),
        check("positivity", psd_dev),
    ];
    let passed = checks.iter().all(|c| c.passed);
    PovmValidation { checks, window_ok: check_window(p.d, p.m, p.x).is_ok(), passed }
}

/// Operators reconstructing any `σ` from its outcome traces:
/// `σ = Σ tr(E_{α,k}σ) F_{α,k}` with `F = (E − A·I)/(x − y)`.
#[derive(Debug, Clone)]
pub struct DualFrame {
    pub ops: Vec<ComplexMatrix>,
    pub w: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
}

impl DualFrame {
    pub fn reconstruct(&self, p: &SymmetricPovm, sigma: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(p.d, p.d);
        for (e, f) in p.effects.iter().zip(&self.ops) {
            out = &out + &f.scale_complex(e.trace_product(sigma));
        }
        out
    }
}

pub fn dual_frame(p: &SymmetricPovm) -> Result<DualFrame> {
    if !p.is_informationally_complete() {
        return Err(Error::NotInformationallyComplete(format!(
            "N(M-1) = {} but d^2-1 = {}",
            p.n * (p.m - 1),
            p.d * p.d - 1
        )));
    }
    let (d, n, m, x) = (p.d as f64, p.n as f64, p.m as f64, p.x);
    let w = d / m;
    let y = (d - m * x) / (m * (m - 1.0));
    let z = d / (m * m);
    // x - y = (M²x - d)/(M(M-1)) vanishes exactly at the open end of the window
    if x - y <= 1e-14 {
        return Err(Error::NotInformationallyComplete(format!("x = {x} sits at the lower window edge")));
    }
    let a = ((n - 1.0) * z + y) / (n * w);
    let shift = ComplexMatrix::identity(p.d).scale(a);
    let ops = p.effects.iter().map(|e| (e - &shift).scale(1.0 / (x - y))).collect();
    Ok(DualFrame { ops, w, y, z, a })
}

/// Both sides of
/// `Σ|tr(E σ)|² = [d(M²x−d)·tr(σσ†) + (d³−M²x)|tr σ|²] / (dM(M−1))`.
pub fn lemma1_check(p: &SymmetricPovm, sigma: &ComplexMatrix) -> Result<(f64, f64)> {
    if sigma.shape() != (p.d, p.d) {
        return Err(Error::DimensionMismatch(format!(
            "sigma is {:?}, POVM dimension {}",
            sigma.shape(),
            p.d
        )));
    }
    let lhs = p.effects.iter().map(|e| e.trace_product(sigma).norm_sqr()).sum();
    let (d, m, x) = (p.d as f64, p.m as f64, p.x);
    let hs = sigma.frobenius_norm().powi(2);
    let tr2 = sigma.trace().norm_sqr();
    let rhs = (d * (m * m * x - d) * hs + (d.powi(3) - m * m * x) * tr2) / (d * m * (m - 1.0));
    Ok((lhs, rhs))
}
