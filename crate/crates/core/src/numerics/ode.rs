//! Dormand–Prince 5(4) adaptive Runge–Kutta for complex two-component
//! first-order systems (a second-order scalar ODE in `(f, f')` form).

use crate::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use crate::prelude::*;

type C = Complex64;
/// State vector `(f, f')`.
pub type State = [C; 2];

/// Step-control settings.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Relative tolerance per component.
    pub rtol: f64,
    /// Absolute tolerance per component.
    pub atol: f64,
    /// Largest admissible step.
    pub h_max: f64,
    /// Give up below this step.
    pub h_min: f64,
    /// Step budget.
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-14, h_max: 0.25, h_min: 1e-12, max_steps: 2_000_000 }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

/// Integrate `y' = rhs(x, y)` from `(x0, y0)` and return the state at each
/// of `targets`, which must be monotone in the direction of integration.
/// Steps are clipped so that every target is hit exactly.
pub fn integrate<F>(rhs: F, x0: f64, y0: State, targets: &[f64], opts: OdeOptions) -> Result<Vec<State>>
where
    F: Fn(f64, &State) -> State,
{
    let mut out = Vec::with_capacity(targets.len());
    if targets.is_empty() {
        return Ok(out);
    }
    let dir = if targets[targets.len() - 1] >= x0 { 1.0 } else { -1.0 };
    let mut x = x0;
    let mut y = y0;
    let mut k1 = rhs(x, &y);
    let mut h = opts.h_max.min(0.01);
    let mut steps = 0usize;
    for &xt in targets {
        if (xt - x) * dir < 0.0 {
            return Err(Error::Invalid(format!("ODE targets not monotone at {xt}")));
        }
        while (xt - x) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StepSize(format!("step budget exhausted near x = {x}")));
            }
            let remaining = (xt - x).abs();
            let mut hs = h.min(remaining).min(opts.h_max);
            let last = hs >= remaining * (1.0 - 1e-12);
            if last {
                hs = remaining;
            }
            let hh = hs * dir;
            let k2 = rhs(x + hh * 0.2, &axpy(&y, hh, &[(A21, &k1)]));
            let k3 = rhs(x + hh * 0.3, &axpy(&y, hh, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(x + hh * 0.8, &axpy(&y, hh, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(
                x + hh * (8.0 / 9.0),
                &axpy(&y, hh, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                x + hh,
                &axpy(&y, hh, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let ynew = axpy(&y, hh, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let xnew = if last { xt } else { x + hh };
            let k7 = rhs(xnew, &ynew);
            let mut err: f64 = 0.0;
            for c in 0..2 {
                let e = (k1[c] * E1 + k3[c] * E3 + k4[c] * E4 + k5[c] * E5 + k6[c] * E6 + k7[c] * E7) * hh;
                let sc = opts.atol + opts.rtol * y[c].norm().max(ynew[c].norm());
                err = err.max(e.norm() / sc);
            }
            if err <= 1.0 || hs <= opts.h_min {
                if !err.is_finite() {
                    return Err(Error::StepSize(format!("non-finite state near x = {x}")));
                }
                x = xnew;
                y = ynew;
                k1 = k7;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h = hs * fac;
                } else {
                    h = h.max(hs * fac.min(1.0));
                }
            } else {
                h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h < opts.h_min {
                    return Err(Error::StepSize(format!("step below {} near x = {x}", opts.h_min)));
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_oscillator_matches_exponentials() {
        // f'' = k² f with f = e^{kx}
        let k = C::new(0.7, 2.3);
        let targets: Vec<f64> = (1..=20).map(|i| -0.25 * i as f64).collect();
        let sol = integrate(|_, y| [y[1], k * k * y[0]], 0.0, [C::new(1.0, 0.0), k], &targets, OdeOptions::default())
            .unwrap();
        for (x, s) in targets.iter().zip(&sol) {
            let ex = (k * x).exp();
            assert!((s[0] - ex).norm() < 1e-9 * ex.norm(), "x={x}");
            assert!((s[1] - k * ex).norm() < 1e-9 * (k * ex).norm());
        }
    }
}
