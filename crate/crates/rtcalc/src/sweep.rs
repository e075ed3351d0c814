//! Parameter sweeps over grids of α and η.

use rtcalc_core::invariant::{self as inv, InvariantError};
use rtcalc_core::qarith::GlobalParams;
use rtcalc_core::tangle::ColoredBraid;
use rtcalc_core::{Tolerances, C64};
use serde::Serialize;

use crate::complex::{format_complex, parse_complex};

/// Parses `a,b,c` (complex values) or `start:stop:step` (real, inclusive).
pub fn parse_grid(s: &str) -> Result<Vec<C64>, String> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, h] = parts[..] else {
            return Err(format!("range {s:?} must be start:stop:step"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?} in range {s:?}"));
        let (a, b, h) = (num(a)?, num(b)?, num(h)?);
        if !(h > 0.0) || b < a {
            return Err(format!("range {s:?} needs step > 0 and stop >= start"));
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        // a + k·h rounded to 12 digits, so 0.1:0.9:0.1 gives 0.3 and not 0.30000000000000004
        return Ok((0..=n).map(|k| C64::new(((a + k as f64 * h) * 1e12).round() / 1e12, 0.0)).collect());
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_complex).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: [f64; 2],
    pub eta: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// `ok`, `guarded`, or an error message.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub r: u32,
    pub rows: Vec<SweepRow>,
    /// Largest deviation of `F′_η/F′_η₀` from the sin-ratio, over the α
    /// values with at least two successful η columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_ratio_residual: Option<f64>,
}

impl SweepTable {
    pub fn ok_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.status == "ok").count()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("alpha,eta,value,residual,status\n");
        for row in &self.rows {
            let c = |z: [f64; 2]| format_complex(C64::new(z[0], z[1]));
            let value = row.value.map(c).unwrap_or_default();
            let residual = row.residual.map(|x| format!("{x:e}")).unwrap_or_default();
            s.push_str(&format!("{},{},{},{},{}\n", c(row.alpha), c(row.eta), value, residual, row.status.replace(',', ";")));
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            let c = |z: [f64; 2]| format_complex(C64::new(z[0], z[1]));
            let value = row.value.map(c).unwrap_or_else(|| "-".into());
            s.push_str(&format!("α = {:<12} η = {:<12} F′ = {:<44} {}\n", c(row.alpha), c(row.eta), value, row.status));
        }
        if let Some(x) = self.eta_ratio_residual {
            s.push_str(&format!("η-ratio residual {x:.3e}\n"));
        }
        s
    }
}

/// Evaluates `F′_η` of `link(α)` on every grid point. Points where α or η
/// fall inside the guard are kept as `guarded` rows.
pub fn sweep(
    params: &GlobalParams,
    alphas: &[C64],
    etas: &[C64],
    cut: Option<usize>,
    tol: &Tolerances,
    link: impl Fn(C64) -> Result<ColoredBraid, InvariantError>,
) -> SweepTable {
    let mut rows = Vec::with_capacity(alphas.len() * etas.len());
    let mut ratio_max: Option<f64> = None;
    for &alpha in alphas {
        let mut first: Option<(C64, C64)> = None;
        for &eta in etas {
            let res = link(alpha).and_then(|cb| inv::renormalized(&cb, eta, cut, tol));
            let mut row = SweepRow { alpha: [alpha.re, alpha.im], eta: [eta.re, eta.im], value: None, residual: None, status: String::new() };
            match res {
                Ok(r) => {
                    row.value = Some([r.value.re, r.value.im]);
                    row.residual = Some(r.scalar_residual);
                    row.status = "ok".into();
                    match first {
                        None => first = Some((eta, r.value)),
                        Some((eta0, v0)) => {
                            let expected = inv::eta_ratio(params, eta, eta0) * v0;
                            let d = (r.value - expected).norm() / expected.norm().max(1.0);
                            ratio_max = Some(ratio_max.map_or(d, |m| m.max(d)));
                        }
                    }
                }
                Err(InvariantError::Guarded { .. }) | Err(InvariantError::NoGenericColor) => row.status = "guarded".into(),
                Err(e) => row.status = e.to_string(),
            }
            rows.push(row);
        }
    }
    SweepTable { r: params.r(), rows, eta_ratio_residual: ratio_max }
}
