//! Convergence tables and observed orders.

use crate::error::{Error, Result};

/// Errors measured on one refinement level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    pub nx: usize,
    /// Grid label `1/nx`.
    pub h: f64,
    pub dt: f64,
    pub err_u_vtilde: f64,
    pub err_p_l2l2: f64,
    pub total: f64,
    /// Time-accumulated residual indicator.
    pub eta: f64,
    /// `||div u_h||` in L2(L2).
    pub div_l2l2: f64,
}

impl LevelResult {
    pub fn new(
        level: usize,
        nx: usize,
        dt: f64,
        err_u_vtilde: f64,
        err_p_l2l2: f64,
        eta: f64,
        div_l2l2: f64,
    ) -> Self {
        Self {
            level,
            nx,
            h: 1.0 / nx as f64,
            dt,
            err_u_vtilde,
            err_p_l2l2,
            total: err_u_vtilde.hypot(err_p_l2l2),
            eta,
            div_l2l2,
        }
    }
}

/// Which step size the rate is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateBasis {
    /// Mesh size (h and dt refined together).
    Space,
    /// Time step at a fixed mesh.
    Time,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub result: LevelResult,
    /// Observed order against the previous row; `None` for the first row.
    pub roc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub basis: RateBasis,
    pub rows: Vec<RateRow>,
}

pub const RATE_TABLE_HEADER: &str = "level,nx,h,dt,err_u_vtilde,err_p_l2l2,total,roc,eta";

/// `log(e0/e1) / log(s0/s1)`
pub fn convergence_rate(e0: f64, e1: f64, s0: f64, s1: f64) -> f64 {
    (e0 / e1).ln() / (s0 / s1).ln()
}

/// Least-squares slope of `log(errors)` against `log(sizes)`.
pub fn fitted_order(sizes: &[f64], errors: &[f64]) -> Result<f64> {
    if sizes.len() != errors.len() || sizes.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two (size, error) pairs".into(),
        ));
    }
    let xs: Vec<f64> = sizes.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

pub fn rate_table(levels: &[LevelResult], basis: RateBasis) -> Result<RateTable> {
    if levels.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a rate table needs at least 2 levels, got {}",
            levels.len()
        )));
    }
    let size = |r: &LevelResult| match basis {
        RateBasis::Space => r.h,
        RateBasis::Time => r.dt,
    };
    let rows = levels
        .iter()
        .enumerate()
        .map(|(i, r)| RateRow {
            result: *r,
            roc: (i > 0).then(|| {
                let p = &levels[i - 1];
                convergence_rate(p.total, r.total, size(p), size(r))
            }),
        })
        .collect();
    Ok(RateTable { basis, rows })
}

/// Fixed CSV float format: 9 significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

impl RateTable {
    pub fn rocs(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.roc).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(RATE_TABLE_HEADER);
        out.push('\n');
        for row in &self.rows {
            let r = &row.result;
            let roc = row.roc.map(fmt_float).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.level,
                r.nx,
                fmt_float(r.h),
                fmt_float(r.dt),
                fmt_float(r.err_u_vtilde),
                fmt_float(r.err_p_l2l2),
                fmt_float(r.total),
                roc,
                fmt_float(r.eta),
            ));
        }
        out
    }
}
