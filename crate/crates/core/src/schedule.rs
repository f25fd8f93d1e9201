//! The control-field schedule p(τ).

use crate::error::{Error, Result};

/// Free function p(τ) that parameterizes the background control field.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlSchedule {
    Constant { p0: f64 },
    Tabulated(TabulatedSchedule),
    /// C¹ smoothstep from `p_start` at `tau_start` to `p_end` at `tau_end`,
    /// flat outside the ramp.
    SmoothRamp {
        p_start: f64,
        p_end: f64,
        tau_start: f64,
        tau_end: f64,
    },
}

impl ControlSchedule {
    pub fn constant(p0: f64) -> Result<Self> {
        if !p0.is_finite() {
            return Err(Error::invalid("p0", format!("must be finite, got {p0}")));
        }
        Ok(ControlSchedule::Constant { p0 })
    }

    pub fn tabulated(taus: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        TabulatedSchedule::new(taus, values).map(ControlSchedule::Tabulated)
    }

    pub fn smooth_ramp(p_start: f64, p_end: f64, tau_start: f64, tau_end: f64) -> Result<Self> {
        if ![p_start, p_end, tau_start, tau_end].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("smooth_ramp", "all ramp parameters must be finite"));
        }
        if tau_end <= tau_start {
            return Err(Error::invalid(
                "smooth_ramp",
                format!("tau_end ({tau_end:e}) must exceed tau_start ({tau_start:e})"),
            ));
        }
        Ok(ControlSchedule::SmoothRamp {
            p_start,
            p_end,
            tau_start,
            tau_end,
        })
    }

    /// Closed τ interval on which the schedule is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            ControlSchedule::Tabulated(t) => (t.taus[0], t.taus[t.taus.len() - 1]),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Returns `(p, ∂τp)`.
    pub fn eval(&self, tau: f64) -> Result<(f64, f64)> {
        match self {
            ControlSchedule::Constant { p0 } => Ok((*p0, 0.0)),
            ControlSchedule::Tabulated(t) => t.eval(tau),
            ControlSchedule::SmoothRamp {
                p_start,
                p_end,
                tau_start,
                tau_end,
            } => {
                let width = tau_end - tau_start;
                let s = ((tau - tau_start) / width).clamp(0.0, 1.0);
                let p = p_start + (p_end - p_start) * s * s * (3.0 - 2.0 * s);
                let dp = (p_end - p_start) * 6.0 * s * (1.0 - s) / width;
                Ok((p, dp))
            }
        }
    }

    /// Smallest |p| over `[0, tau_max]`, used to size quadrature steps.
    pub fn min_abs_p(&self, tau_max: f64) -> Result<f64> {
        match self {
            ControlSchedule::Constant { p0 } => Ok(p0.abs()),
            ControlSchedule::SmoothRamp { p_start, p_end, .. } => {
                if p_start.signum() != p_end.signum() {
                    Ok(0.0)
                } else {
                    Ok(p_start.abs().min(p_end.abs()))
                }
            }
            ControlSchedule::Tabulated(t) => {
                let (lo, hi) = self.domain();
                if lo > 0.0 || hi < tau_max {
                    return Err(Error::Domain { tau: tau_max, lo, hi });
                }
                // Monotone interpolation never leaves the range of adjacent
                // nodes, so a sign change between nodes is the only way to dip
                // below the smallest node magnitude.
                let mut m = f64::INFINITY;
                for w in t.values.windows(2) {
                    if w[0].signum() != w[1].signum() {
                        return Ok(0.0);
                    }
                    m = m.min(w[0].abs()).min(w[1].abs());
                }
                Ok(m)
            }
        }
    }
}

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolant through `(taus, values)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSchedule {
    taus: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedSchedule {
    pub fn new(taus: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if taus.len() != values.len() {
            return Err(Error::invalid(
                "tabulated",
                format!("{} nodes but {} values", taus.len(), values.len()),
            ));
        }
        if taus.len() < 2 {
            return Err(Error::invalid("tabulated", "need at least two nodes"));
        }
        if taus.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("tabulated", "nodes and values must be finite"));
        }
        if taus.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("tabulated", "nodes must be strictly increasing"));
        }
        let slopes = pchip_slopes(&taus, &values);
        Ok(TabulatedSchedule {
            taus,
            values,
            slopes,
        })
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn eval(&self, tau: f64) -> Result<(f64, f64)> {
        let n = self.taus.len();
        let (lo, hi) = (self.taus[0], self.taus[n - 1]);
        if !(tau >= lo && tau <= hi) {
            return Err(Error::Domain { tau, lo, hi });
        }
        let idx = self.taus.partition_point(|&x| x <= tau);
        if idx > 0 && self.taus[idx - 1] == tau {
            return Ok((self.values[idx - 1], self.slopes[idx - 1]));
        }
        let i = idx.clamp(1, n - 1) - 1;
        Ok(hermite(
            self.taus[i],
            self.taus[i + 1],
            self.values[i],
            self.values[i + 1],
            self.slopes[i],
            self.slopes[i + 1],
            tau,
        ))
    }
}

/// Cubic Hermite value and derivative on `[x0, x1]`.
pub(crate) fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1;
    let deriv = (6.0 * t2 - 6.0 * t) / h * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * d0
        + (-6.0 * t2 + 6.0 * t) / h * y1
        + (3.0 * t2 - 2.0 * t) * d1;
    (value, deriv)
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}
