//! Numerical |Ω_a| against the closed-form soliton, split by the moving
//! window |ζ − ζ_c(τ)| ≤ half-width.

use serde::{Deserialize, Serialize};

use super::state::FieldGrid;
use crate::analytic::{validity_report, AnalyticSoliton};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowPolicy {
    /// Window half-width in units of w_s/2.
    pub half_width_factor: f64,
    /// Only rows with τ ≤ this are compared.
    pub tau_limit: Option<f64>,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy {
            half_width_factor: 1.0,
            tau_limit: None,
        }
    }
}

/// All errors are relative to the analytic pulse over every compared node:
/// L∞ errors are divided by max|Ω_a|, L2 errors by (Σ|Ω_a|²)^{1/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub in_window_linf: f64,
    pub in_window_l2: f64,
    pub out_window_linf: f64,
    pub out_window_l2: f64,
    pub global_linf: f64,
    pub global_l2: f64,
    pub in_window_nodes: usize,
    pub out_window_nodes: usize,
    /// Validity margin at the first and last compared τ.
    pub margin_first: f64,
    pub margin_last: f64,
    pub tau_last: f64,
}

pub fn compare_to_analytic(fields: &FieldGrid, soliton: &AnalyticSoliton, policy: WindowPolicy) -> Result<ErrorReport> {
    fields.check_shape()?;
    let tau_limit = policy.tau_limit.unwrap_or(f64::INFINITY);
    let rows: Vec<usize> = (0..fields.taus.len()).filter(|&j| fields.taus[j] <= tau_limit).collect();
    let Some(&last_row) = rows.last() else {
        return Err(Error::Shape(format!("no tau rows at or below {tau_limit:e}")));
    };
    let tau_last = fields.taus[last_row];
    if tau_last > soliton.alpha().tau_max() * (1.0 + 1e-12) {
        return Err(Error::Shape(format!(
            "grid reaches tau = {tau_last:e} s but the analytic solution covers only {:e} s",
            soliton.alpha().tau_max()
        )));
    }

    let cfg = soliton.config();
    let (mut in_max, mut out_max) = (0.0f64, 0.0f64);
    let (mut in_sq, mut out_sq) = (0.0f64, 0.0f64);
    let (mut ref_max, mut ref_sq) = (0.0f64, 0.0f64);
    let (mut n_in, mut n_out) = (0usize, 0usize);
    let mut margins = Vec::with_capacity(rows.len());

    for &j in &rows {
        let tau = fields.taus[j];
        let report = validity_report(cfg, soliton.alpha(), tau)?;
        margins.push(report.margin);
        let half_width = 0.5 * report.w_s * policy.half_width_factor;
        for (i, &zeta) in fields.zetas.iter().enumerate() {
            let reference = soliton.fields(tau, zeta)?.omega_a.abs();
            let err = (fields.omega_a[[i, j]].norm() - reference).abs();
            ref_max = ref_max.max(reference);
            ref_sq += reference * reference;
            if (zeta - report.zeta_c).abs() <= half_width {
                in_max = in_max.max(err);
                in_sq += err * err;
                n_in += 1;
            } else {
                out_max = out_max.max(err);
                out_sq += err * err;
                n_out += 1;
            }
        }
    }
    if ref_max == 0.0 {
        return Err(Error::Shape("analytic probe field vanishes on every compared node".into()));
    }
    let ref_l2 = ref_sq.sqrt();
    Ok(ErrorReport {
        in_window_linf: in_max / ref_max,
        in_window_l2: in_sq.sqrt() / ref_l2,
        out_window_linf: out_max / ref_max,
        out_window_l2: out_sq.sqrt() / ref_l2,
        global_linf: in_max.max(out_max) / ref_max,
        global_l2: (in_sq + out_sq).sqrt() / ref_l2,
        in_window_nodes: n_in,
        out_window_nodes: n_out,
        margin_first: margins[0],
        margin_last: margins[margins.len() - 1],
        tau_last,
    })
}
