use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    concurrence_lower_bound, constants_for, correlation_matrix, fidelity_baseline, gsic_baseline,
    realignment_baseline, schmidt_bound, sic_baseline, CriterionConstants,
};
use crate::error::Result;
use crate::povm::SymmetricPovm;
use crate::states::DensityMatrix;

/// Which comparison criteria to evaluate alongside the main one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BaselineSelection {
    /// GSIC purities `(x_A, x_B)`.
    pub gsic: Option<(f64, f64)>,
    pub sic: bool,
    pub realignment: bool,
    pub fidelity: bool,
}

impl BaselineSelection {
    pub fn names(&self) -> Vec<&'static str> {
        let mut names = Vec::new();
        if self.gsic.is_some() {
            names.push("gsic");
        }
        if self.sic {
            names.push("sic");
        }
        if self.realignment {
            names.push("realignment");
        }
        if self.fidelity {
            names.push("fidelity");
        }
        names
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub trace_norm: f64,
    pub constants: CriterionConstants,
    /// Lower bound on `SN − 1`.
    pub sn_real_lb: f64,
    pub sn_int_lb: u32,
    pub entangled: bool,
    pub concurrence_lb: f64,
    /// Baseline values on the `SN − 1` scale.
    pub baselines: BTreeMap<String, f64>,
}

pub fn full_report(
    rho: &DensityMatrix,
    pa: &SymmetricPovm,
    pb: &SymmetricPovm,
    baselines: &BaselineSelection,
) -> Result<CriterionReport> {
    let trace_norm = correlation_matrix(rho, pa, pb)?.trace_norm();
    let constants = constants_for(pa, pb)?;
    let (sn_real_lb, sn_int_lb) = schmidt_bound(trace_norm, &constants);
    let concurrence_lb = concurrence_lower_bound(trace_norm, &constants, rho.d_a(), rho.d_b());

    let mut map = BTreeMap::new();
    if let Some((x_a, x_b)) = baselines.gsic {
        map.insert("gsic".to_string(), gsic_baseline(rho, x_a, x_b)?);
    }
    if baselines.sic {
        map.insert("sic".to_string(), sic_baseline(rho)?);
    }
    if baselines.realignment {
        map.insert("realignment".to_string(), realignment_baseline(rho));
    }
    if baselines.fidelity {
        map.insert("fidelity".to_string(), fidelity_baseline(rho)?);
    }
    Ok(CriterionReport {
        trace_norm,
        constants,
        sn_real_lb,
        sn_int_lb,
        entangled: sn_real_lb > 0.0,
        concurrence_lb,
        baselines: map,
    })
}
