//! Serialized results. Field order is the output order.

use kakeya_core::certifier::{Certificate, Constants, StepAudit};
use kakeya_core::evaluator::Convergence;
use kakeya_core::OverlapValue;
use serde::Serialize;

use crate::schema::{ConfigDoc, CubeDoc};

#[derive(Debug, Clone, Serialize)]
pub struct ValueReport {
    pub value: f64,
    pub error_estimate: Option<f64>,
    pub cells_per_side: usize,
    pub convergence: &'static str,
}

pub fn convergence_name(c: Convergence) -> &'static str {
    match c {
        Convergence::Fixed => "fixed",
        Convergence::Converged => "converged",
        Convergence::NotConverged => "not_converged",
    }
}

impl From<&OverlapValue> for ValueReport {
    fn from(v: &OverlapValue) -> Self {
        ValueReport {
            value: v.value,
            error_estimate: v.error_estimate,
            cells_per_side: v.cells_per_side,
            convergence: convergence_name(v.convergence),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub n: usize,
    pub c_lw: f64,
    pub c_step: f64,
}

impl From<&Constants> for ConstantsReport {
    fn from(c: &Constants) -> Self {
        ConstantsReport {
            n: c.n,
            c_lw: c.c_lw,
            c_step: c.c_step,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub w: f64,
    pub per_side: usize,
    pub sub_side: f64,
    pub numeric_bound: f64,
    /// Per family: `[count, number of subcubes]` pairs, counts increasing.
    pub histograms: Vec<Vec<(f64, usize)>>,
}

impl From<&StepAudit> for AuditReport {
    fn from(a: &StepAudit) -> Self {
        AuditReport {
            w: a.w,
            per_side: a.per_side,
            sub_side: a.sub_side,
            numeric_bound: a.numeric_bound,
            histograms: a.histograms.clone(),
        }
    }
}

/// How a certificate was compared against the functional.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    /// `exact2d` or `quadrature`.
    pub method: &'static str,
    pub value: f64,
    pub error_estimate: Option<f64>,
    pub bound: f64,
    pub sound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub n: usize,
    pub delta: f64,
    pub s: f64,
    pub m: u32,
    pub ladder: Vec<f64>,
    pub constants: ConstantsReport,
    pub counts: Vec<f64>,
    pub cover_side: f64,
    pub multiplicity: usize,
    pub epsilon_exponent: f64,
    pub chain_value: f64,
    pub final_bound: f64,
    pub first_step: Option<AuditReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckReport>,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        CertificateReport {
            n: c.n,
            delta: c.delta,
            s: c.s,
            m: c.m,
            ladder: c.ladder.clone(),
            constants: (&c.constants).into(),
            counts: c.counts.clone(),
            cover_side: c.cover_side,
            multiplicity: c.multiplicity,
            epsilon_exponent: c.epsilon_exponent,
            chain_value: c.chain_value(),
            final_bound: c.final_bound,
            first_step: c.first_step.as_ref().map(Into::into),
            check: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LwReportOut {
    pub left: f64,
    pub right: f64,
    pub ratio: f64,
    pub error_estimate: Option<f64>,
    pub vacuous: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub delta: f64,
    pub c_step: f64,
    pub lhs: ValueReport,
    pub rhs: ValueReport,
    pub ratio: f64,
    pub tolerance: f64,
    pub vacuous: bool,
    pub converged: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProblemReport {
    pub centers: Vec<Vec<f64>>,
    /// Row-major.
    pub map: Vec<Vec<f64>>,
    pub distortion_factor: f64,
    pub max_angle: f64,
    pub cube: CubeDoc,
    pub counts: Vec<f64>,
    pub final_bound: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReduceReport {
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    pub problems: Vec<ProblemReport>,
    pub total_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckReport>,
}

/// One sweep row; also the CSV record, columns in field order.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRowReport {
    pub s: f64,
    pub value: f64,
    pub error_estimate: Option<f64>,
    pub cells_per_side: usize,
    pub convergence: &'static str,
    pub bound: f64,
    pub ratio: f64,
    pub sound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub delta: f64,
    pub seed: u64,
    pub rows: Vec<SweepRowReport>,
    pub slope: Option<f64>,
}

/// One trace entry; also the CSV record.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub restart: usize,
    pub iteration: usize,
    pub proposed: f64,
    pub accepted: bool,
    pub current: f64,
    pub best: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub seed: u64,
    pub best_ratio: f64,
    pub best_restart: usize,
    pub best: ConfigDoc,
    pub trace: Vec<TraceReport>,
}
