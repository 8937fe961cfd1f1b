//! Small dense least-squares fits via SVD with column equilibration.

use crate::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

#[allow(unused_imports)]
use crate::prelude::*;

/// Least-squares solution with diagnostics.
#[derive(Debug, Clone)]
pub struct LsqFit {
    /// Fitted coefficients, one per basis column.
    pub coef: Vec<f64>,
    /// Root-mean-square residual.
    pub rms_residual: f64,
    /// Root-mean-square of the data (for relative residuals).
    pub rms_data: f64,
    /// 2-norm condition number of the column-equilibrated design matrix.
    pub condition: f64,
}

impl LsqFit {
    /// Residual relative to the data scale.
    pub fn relative_residual(&self) -> f64 {
        if self.rms_data == 0.0 {
            self.rms_residual
        } else {
            self.rms_residual / self.rms_data
        }
    }
}

/// Solve `min ‖A c − b‖₂` where `rows[i]` is row `i` of `A`.
pub fn solve(rows: &[Vec<f64>], b: &[f64]) -> Result<LsqFit> {
    let n = rows.len();
    if n == 0 || n != b.len() {
        return Err(Error::Fit(format!("{} rows vs {} data", n, b.len())));
    }
    let p = rows[0].len();
    if n < p {
        return Err(Error::Fit(format!("{n} samples for {p} unknowns")));
    }
    let mut scale = alloc::vec![0.0f64; p];
    for r in rows {
        for (j, v) in r.iter().enumerate() {
            scale[j] = scale[j].max(v.abs());
        }
    }
    for s in scale.iter_mut() {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    let a = DMatrix::from_fn(n, p, |i, j| rows[i][j] / scale[j]);
    let bv = DVector::from_column_slice(b);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let x = svd
        .solve(&bv, 1e-15 * smax)
        .map_err(|e| Error::Fit(format!("svd solve: {e}")))?;
    let r = &a * &x - &bv;
    let rms_residual = (r.norm_squared() / n as f64).sqrt();
    let rms_data = (bv.norm_squared() / n as f64).sqrt();
    let coef = (0..p).map(|j| x[j] / scale[j]).collect();
    Ok(LsqFit { coef, rms_residual, rms_data, condition })
}
