//! Parameter schedules: real-valued functions of normalized time `s = t/τ`
//! with analytic derivatives.
//!
//! Built-in kinds cover the interpolations used for the gate boundary
//! conditions: constant, linear, quadratic, trigonometric (`sin²`), an arc
//! of cycloid, and tabulated samples with cubic interpolation. Physical-time
//! derivatives are obtained by dividing `derivative(s)` by the total
//! evolution time at the call site.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A differentiable schedule over normalized time `s ∈ [0, 1]`.
///
/// Values are angles in radians. The cycloid is parameterized by its ratio
/// `r ≥ 1/2`; its end value is reached by solving for `r`
/// (see [`solve_cycloid_ratio`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// `value` for all `s`.
    Constant { value: f64 },
    /// `end_value · s`.
    Linear { end_value: f64 },
    /// `end_value · s²`.
    Quadratic { end_value: f64 },
    /// `end_value · sin²(πs/2)`.
    Trigonometric { end_value: f64 },
    /// `r·arccos(1 − s/r) − √(s(2r − s))`, the arc of a cycloid of ratio `r`.
    Cycloid { r: f64 },
    /// Uniform samples on `[0, 1]`, evaluated with a natural cubic spline.
    Tabulated { values: Vec<f64> },
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    Ok(())
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            Schedule::Cycloid { r } => {
                if !(*r >= 0.5) {
                    return Err(Error::InvalidParameter(format!(
                        "cycloid ratio r = {r} must be >= 1/2 (arccos argument leaves [-1, 1])"
                    )));
                }
            }
            Schedule::Tabulated { values } => {
                if values.len() < 2 {
                    return Err(Error::InvalidParameter(
                        "tabulated schedule needs at least 2 samples".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "tabulated schedule contains non-finite samples".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn start_value(&self) -> f64 {
        match self {
            Schedule::Constant { value } => *value,
            Schedule::Tabulated { values } => values[0],
            _ => 0.0,
        }
    }

    pub fn end_value(&self) -> f64 {
        match self {
            Schedule::Constant { value } => *value,
            Schedule::Linear { end_value }
            | Schedule::Quadratic { end_value }
            | Schedule::Trigonometric { end_value } => *end_value,
            Schedule::Cycloid { r } => cycloid_value(*r, 1.0),
            Schedule::Tabulated { values } => *values.last().unwrap(),
        }
    }

    /// Schedule value at normalized time `s`.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        self.validate()?;
        Ok(match self {
            Schedule::Constant { value } => *value,
            Schedule::Linear { end_value } => end_value * s,
            Schedule::Quadratic { end_value } => end_value * s * s,
            Schedule::Trigonometric { end_value } => {
                let half = (std::f64::consts::PI * s / 2.0).sin();
                end_value * half * half
            }
            Schedule::Cycloid { r } => cycloid_value(*r, s),
            Schedule::Tabulated { values } => spline(values).value(s),
        })
    }

    /// Analytic derivative `d(value)/ds` at normalized time `s`.
    pub fn derivative(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        self.validate()?;
        match self {
            Schedule::Constant { .. } => Ok(0.0),
            Schedule::Linear { end_value } => Ok(*end_value),
            Schedule::Quadratic { end_value } => Ok(2.0 * end_value * s),
            Schedule::Trigonometric { end_value } => {
                Ok(end_value * std::f64::consts::FRAC_PI_2 * (std::f64::consts::PI * s).sin())
            }
            Schedule::Cycloid { r } => {
                // dθ/ds = √(s / (2r − s)); diverges only as s → 2r, which is
                // reachable inside [0, 1] just at r = 1/2, s = 1.
                let den = 2.0 * r - s;
                if den <= f64::EPSILON {
                    return Err(Error::UnboundedDerivative { s });
                }
                Ok((s / den).sqrt())
            }
            Schedule::Tabulated { values } => Ok(spline(values).derivative(s)),
        }
    }
}

fn cycloid_value(r: f64, s: f64) -> f64 {
    let arg = (1.0 - s / r).clamp(-1.0, 1.0);
    r * arg.acos() - (s * (2.0 * r - s)).max(0.0).sqrt()
}

/// Finds the cycloid ratio `r` such that the schedule ends at `target_end`,
/// by bisection on `[1/2, 10]`. The end value is strictly decreasing in `r`
/// from `π/2` (at `r = 1/2`) toward 0.
pub fn solve_cycloid_ratio(target_end: f64) -> Result<f64> {
    if !(target_end > 0.0 && target_end <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "target end value {target_end} outside (0, pi/2]"
        )));
    }
    let (mut lo, mut hi) = (0.5, 10.0);
    let f = |r: f64| cycloid_value(r, 1.0) - target_end;
    let (flo, fhi) = (f(lo), f(hi));
    if flo * fhi > 0.0 {
        return Err(Error::NoSolution(format!(
            "no cycloid ratio in [0.5, 10] reaches end value {target_end}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo < 1e-15 {
            return Ok(mid);
        }
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Natural cubic spline over uniform samples on `[0, 1]`.
struct Spline<'a> {
    values: &'a [f64],
    second: Vec<f64>,
}

fn spline(values: &[f64]) -> Spline<'_> {
    let n = values.len();
    let h = 1.0 / (n - 1) as f64;
    // Tridiagonal solve for second derivatives, natural boundary conditions.
    let mut second = vec![0.0; n];
    if n > 2 {
        let m = n - 2;
        let mut diag = vec![4.0; m];
        let mut rhs = vec![0.0; m];
        for i in 0..m {
            rhs[i] = 6.0 * (values[i] - 2.0 * values[i + 1] + values[i + 2]) / (h * h);
        }
        for i in 1..m {
            let w = 1.0 / diag[i - 1];
            diag[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        second[m] = rhs[m - 1] / diag[m - 1];
        for i in (0..m - 1).rev() {
            second[i + 1] = (rhs[i] - second[i + 2]) / diag[i];
        }
    }
    Spline { values, second }
}

impl Spline<'_> {
    fn segment(&self, s: f64) -> (usize, f64, f64) {
        let n = self.values.len();
        let h = 1.0 / (n - 1) as f64;
        let i = ((s / h) as usize).min(n - 2);
        (i, s - i as f64 * h, h)
    }

    fn value(&self, s: f64) -> f64 {
        let (i, x, h) = self.segment(s);
        let (a, b) = (h - x, x);
        self.values[i] * a / h + self.values[i + 1] * b / h
            + ((a * a * a / h - a * h) * self.second[i]
                + (b * b * b / h - b * h) * self.second[i + 1])
                / 6.0
    }

    fn derivative(&self, s: f64) -> f64 {
        let (i, x, h) = self.segment(s);
        let (a, b) = (h - x, x);
        (self.values[i + 1] - self.values[i]) / h
            + ((h - 3.0 * a * a / h) * self.second[i] + (3.0 * b * b / h - h) * self.second[i + 1])
                / 6.0
    }
}
