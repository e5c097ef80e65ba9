//! One-parameter state families, sweeps over the parameter and bisection
//! for the values where a curve crosses a given level.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{gellmann_basis, group_basis, GroupingScheme};
use crate::criteria::{
    constants_for, correlation_matrix, fidelity_baseline, full_report, gsic_baseline, mub_povm,
    realignment_baseline, schmidt_bound, sic_baseline, sic_povm, BaselineSelection, CriterionReport,
};
use crate::error::{Error, Result};
use crate::io::format_f64;
use crate::povm::{build_povm, SymmetricPovm};
use crate::states::{
    bell_horodecki_2x4, isotropic, noisy_horodecki_3x3, ququart_mixture, ququart_mixture_split_levels, DensityMatrix,
};

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "SNEST_THREADS";
pub const DEFAULT_POINTS: usize = 201;
pub const DEFAULT_T: f64 = 0.01;
pub const DEFAULT_BISECTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Bell state mixed into the `2⊗4` Horodecki state at fixed `τ`; sweeps `q`.
    BellHorodecki2x4 { tau: f64 },
    /// `4⊗4` mixture; sweeps `p`.
    Ququart { split_levels: bool },
    /// Isotropic `d⊗d`; sweeps `v`.
    Isotropic { d: usize },
    /// Noisy `3⊗3` Horodecki state at fixed `q`; sweeps `τ`.
    NoisyHorodecki3x3 { q: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::BellHorodecki2x4 { .. } => "bell-horodecki-2x4",
            Family::Ququart { split_levels: false } => "ququart-mixture",
            Family::Ququart { split_levels: true } => "ququart-mixture-split",
            Family::Isotropic { .. } => "isotropic",
            Family::NoisyHorodecki3x3 { .. } => "noisy-horodecki-3x3",
        }
    }

    pub fn param_name(&self) -> &'static str {
        match self {
            Family::BellHorodecki2x4 { .. } => "q",
            Family::Ququart { .. } => "p",
            Family::Isotropic { .. } => "v",
            Family::NoisyHorodecki3x3 { .. } => "tau",
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match *self {
            Family::BellHorodecki2x4 { .. } => (2, 4),
            Family::Ququart { .. } => (4, 4),
            Family::Isotropic { d } => (d, d),
            Family::NoisyHorodecki3x3 { .. } => (3, 3),
        }
    }

    pub fn state(&self, param: f64) -> Result<DensityMatrix> {
        match *self {
            Family::BellHorodecki2x4 { tau } => bell_horodecki_2x4(tau, param),
            Family::Ququart { split_levels: false } => ququart_mixture(param),
            Family::Ququart { split_levels: true } => ququart_mixture_split_levels(param),
            Family::Isotropic { d } => isotropic(d, param),
            Family::NoisyHorodecki3x3 { q } => noisy_horodecki_3x3(param, q),
        }
    }

    pub fn default_range(&self) -> (f64, f64) {
        match self {
            Family::NoisyHorodecki3x3 { .. } => (0.05, 0.95),
            _ => (0.0, 1.0),
        }
    }

    /// Default measurement on each side, all at deformation `t`.
    pub fn default_measurements(&self, t: f64) -> (Measurement, Measurement) {
        let (d_a, d_b) = self.dims();
        (Measurement::default_for(d_a, t), Measurement::default_for(d_b, t))
    }
}

/// Local measurement recipe.
#[derive(Debug, Clone, PartialEq)]
pub enum Measurement {
    Grouped { n: usize, m: usize, scheme: GroupingScheme, t: f64 },
    Sic,
    Mub,
}

impl Measurement {
    /// `(3,2)` for qubits, `(8,2)` for qutrits, `(5,4)` for ququarts with
    /// their fixed groupings, and a sequential `(d+1, d)` family otherwise.
    pub fn default_for(d: usize, t: f64) -> Self {
        let (n, m, scheme) = match d {
            3 => (8, 2, GroupingScheme::Qutrit82),
            4 => (5, 4, GroupingScheme::Ququart54),
            _ => (d + 1, d, GroupingScheme::Sequential),
        };
        Measurement::Grouped { n, m, scheme, t }
    }

    pub fn build(&self, d: usize) -> Result<SymmetricPovm> {
        match self {
            Measurement::Grouped { n, m, scheme, t } => {
                let gb = group_basis(&gellmann_basis(d)?, *n, *m, scheme)?;
                build_povm(&gb, *t)
            }
            Measurement::Sic => sic_povm(d),
            Measurement::Mub => mub_povm(d),
        }
    }
}

/// Quantity tracked along a sweep, all on the `SN − 1` scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    Red,
    Gsic,
    Sic,
    Realignment,
    Fidelity,
}

impl Curve {
    pub fn name(&self) -> &'static str {
        match self {
            Curve::Red => "red",
            Curve::Gsic => "gsic",
            Curve::Sic => "sic",
            Curve::Realignment => "realignment",
            Curve::Fidelity => "fidelity",
        }
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "red" | "main" | "sn" => Ok(Curve::Red),
            "gsic" => Ok(Curve::Gsic),
            "sic" => Ok(Curve::Sic),
            "realignment" | "orange" => Ok(Curve::Realignment),
            "fidelity" => Ok(Curve::Fidelity),
            other => Err(Error::ParameterOutOfRange(format!(
                "unknown curve `{other}` (expected red, gsic, sic, realignment, fidelity)"
            ))),
        }
    }
}

/// A family with its measurements built once.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub family: Family,
    pub pa: SymmetricPovm,
    pub pb: SymmetricPovm,
    pub baselines: BaselineSelection,
}

impl Evaluator {
    pub fn new(family: Family, a: &Measurement, b: &Measurement, baselines: BaselineSelection) -> Result<Self> {
        let (d_a, d_b) = family.dims();
        Ok(Self { family, pa: a.build(d_a)?, pb: b.build(d_b)?, baselines })
    }

    pub fn report(&self, param: f64) -> Result<CriterionReport> {
        full_report(&self.family.state(param)?, &self.pa, &self.pb, &self.baselines)
    }

    pub fn curve(&self, curve: Curve, param: f64) -> Result<f64> {
        let rho = self.family.state(param)?;
        match curve {
            Curve::Red => {
                let norm = correlation_matrix(&rho, &self.pa, &self.pb)?.trace_norm();
                Ok(schmidt_bound(norm, &constants_for(&self.pa, &self.pb)?).0)
            }
            Curve::Gsic => {
                let (x_a, x_b) = self.baselines.gsic.ok_or_else(|| {
                    Error::ParameterOutOfRange("the gsic curve needs GSIC purities".into())
                })?;
                gsic_baseline(&rho, x_a, x_b)
            }
            Curve::Sic => sic_baseline(&rho),
            Curve::Realignment => Ok(realignment_baseline(&rho)),
            Curve::Fidelity => fidelity_baseline(&rho),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub a: Measurement,
    pub b: Measurement,
    pub baselines: BaselineSelection,
}

impl SweepSpec {
    /// Default range, resolution and measurements at `t = 0.01`.
    pub fn for_family(family: Family) -> Self {
        let (lo, hi) = family.default_range();
        let (a, b) = family.default_measurements(DEFAULT_T);
        Self { family, lo, hi, points: DEFAULT_POINTS, a, b, baselines: BaselineSelection::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo >= self.hi {
            return Err(Error::ParameterOutOfRange(format!("need lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if self.points < 2 {
            return Err(Error::ParameterOutOfRange(format!("need at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    /// Evenly spaced ascending grid including both ends.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub report: CriterionReport,
}

/// Thread count from `SNEST_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Evaluates every grid point, concurrently, returning rows in ascending order.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let eval = Evaluator::new(spec.family, &spec.a, &spec.b, spec.baselines.clone())?;
    let grid = spec.grid();
    with_pool(threads, || {
        grid.par_iter()
            .map(|&param| Ok(SweepRow { param, report: eval.report(param)? }))
            .collect::<Result<Vec<_>>>()
    })?
}

/// CSV with columns `param, trace_norm, sn_real_lb, sn_int_lb,
/// concurrence_lb`, one column per selected baseline, then
/// `sn_real_lb_clamped = max(0, sn_real_lb)`.
pub fn write_csv<W: Write>(rows: &[SweepRow], baselines: &BaselineSelection, writer: W) -> Result<()> {
    let names = baselines.names();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    let mut header = vec!["param", "trace_norm", "sn_real_lb", "sn_int_lb", "concurrence_lb"];
    header.extend(&names);
    header.push("sn_real_lb_clamped");
    w.write_record(&header)?;
    for row in rows {
        let r = &row.report;
        let mut record = vec![
            format_f64(row.param),
            format_f64(r.trace_norm),
            format_f64(r.sn_real_lb),
            r.sn_int_lb.to_string(),
            format_f64(r.concurrence_lb),
        ];
        record.extend(names.iter().map(|n| format_f64(r.baselines[*n])));
        record.push(format_f64(r.sn_real_lb.max(0.0)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    /// Midpoint of the final bracket.
    pub value: f64,
    pub level: f64,
    /// Curve evaluated at `value`.
    pub curve_value: f64,
    /// Width of the final bracket.
    pub tolerance: f64,
    pub iterations: u32,
}

/// Bisects `f(p) = level` on `[lo, hi]` until the bracket is at most `tol` wide.
pub fn bisect(f: impl Fn(f64) -> Result<f64>, level: f64, lo: f64, hi: f64, tol: f64) -> Result<ThresholdResult> {
    if lo.is_nan() || hi.is_nan() || lo >= hi || tol.is_nan() || tol <= 0.0 {
        return Err(Error::ParameterOutOfRange(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    let (g_lo, g_hi) = (f_lo - level, f_hi - level);
    if g_lo.is_nan() || g_hi.is_nan() || g_lo.signum() == g_hi.signum() && g_lo != 0.0 && g_hi != 0.0 {
        return Err(Error::NoSignChange { level, lo, hi, f_lo, f_hi });
    }
    let (mut a, mut b, mut g_a) = (lo, hi, g_lo);
    let mut iterations = 0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let g_mid = f(mid)? - level;
        if g_mid == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if g_mid.signum() == g_a.signum() {
            a = mid;
            g_a = g_mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }
    let value = 0.5 * (a + b);
    Ok(ThresholdResult { value, level, curve_value: f(value)?, tolerance: b - a, iterations })
}

pub fn threshold(eval: &Evaluator, curve: Curve, level: f64, lo: f64, hi: f64, tol: f64) -> Result<ThresholdResult> {
    bisect(|p| eval.curve(curve, p), level, lo, hi, tol)
}
