//! Modified Bessel functions `I_ν`, `K_ν` of real fractional order and the
//! zero-energy solutions Φ₁, Φ₂ of `f'' = x^{−m} f`.
//!
//! `I_ν`, `K_ν` use Temme's series for `x < 2` and Steed's continued fraction
//! for `K` when `x ≥ 2`, with the `I` ratio from the forward continued
//! fraction and the Wronskian `I_ν K_ν' − I_ν' K_ν = −1/x` (the classical
//! `bessik` arrangement). `1/Γ(1 ± μ)` for `|μ| ≤ 1/2` comes from the Taylor
//! series of `1/Γ`, which avoids the cancellation in `(1/Γ(1−μ) − 1/Γ(1+μ))/2μ`.

use crate::{Error, Result};
use alloc::format;
use core::f64::consts::PI;

#[allow(unused_imports)]
use crate::prelude::*;

/// Taylor coefficients of `1/Γ(z) = Σ_{k≥1} c_k z^k` (c_1 = 1).
const RGAM: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// `(gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ))` for `|μ| ≤ 1/2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+μ) = Σ_k c_k μ^{k−1}: even part gam2, odd part −μ·gam1.
    let mut gam2 = 0.0;
    let mut gam1 = 0.0;
    let mu2 = mu * mu;
    let mut p = 1.0;
    for k in (0..RGAM.len()).step_by(2) {
        gam2 += RGAM[k] * p; // c_{k+1} μ^{k}
        if k + 1 < RGAM.len() {
            gam1 -= RGAM[k + 1] * p; // −c_{k+2} μ^{k}
        }
        p *= mu2;
    }
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// Values and derivatives `(I_ν, I_ν', K_ν, K_ν')` at real `x > 0`, `ν ≥ 0`.
pub fn bessel_ik(nu: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;
    const MAXIT: usize = 100_000;
    if !(x > 0.0) || !(nu >= 0.0) {
        return Err(Error::OutOfRange(format!("bessel_ik needs x > 0, ν ≥ 0 (x = {x}, ν = {nu})")));
    }
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    // CF1 for I'_ν/I_ν
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Quadrature(format!("CF1 failed at x = {x}")));
    }
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut fact = nu * xi;
    for _ in (1..=nl).rev() {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;
    let (mut rkmu, mut rk1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut cc = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cc *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = cc * ff;
            sum += del;
            let del1 = cc * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Quadrature(format!("Temme series failed at x = {x}")));
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut cc = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut ok = false;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            cc = -a * cc / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Quadrature(format!("Steed CF2 failed at x = {x}")));
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let ri = (rimu * ril1) / ril;
    let rip = (rimu * rip1) / ril;
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    let rk = rkmu;
    let rkp = nu * xi * rkmu - rk1;
    Ok((ri, rip, rk, rkp))
}

/// Γ(x) for real x (thin wrapper so callers need not depend on `libm`).
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Zero-energy solution pair of `f'' = x^{−m} f` for `x > 0`, normalized by
/// `Φ₁ → 1` and `Φ₂/x → 1` as `x → ∞`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroEnergyPair {
    m: u32,
    nu: f64,
    c1: f64,
    c2: f64,
}

/// `(Φ₁, Φ₁', Φ₂, Φ₂')` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroEnergySample {
    /// Φ₁(x).
    pub phi1: f64,
    /// Φ₁'(x).
    pub dphi1: f64,
    /// Φ₂(x).
    pub phi2: f64,
    /// Φ₂'(x).
    pub dphi2: f64,
}

impl ZeroEnergyPair {
    /// Pair for decay power `m ≥ 3`; the Bessel order is `ν = 1/(m−2)`.
    pub fn new(m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::OutOfRange(format!("zero-energy pair needs m ≥ 3 (got {m})")));
        }
        let mm2 = (m - 2) as f64;
        let nu = 1.0 / mm2;
        Ok(Self {
            m,
            nu,
            c1: mm2.powf(nu) * gamma(1.0 + nu),
            c2: 2.0 * mm2.powf(-nu) / gamma(nu),
        })
    }

    /// Bessel order ν.
    pub fn order(&self) -> f64 {
        self.nu
    }

    /// Evaluate both solutions and derivatives at `x > 0`.
    pub fn sample(&self, x: f64) -> Result<ZeroEnergySample> {
        if !(x > 0.0) {
            return Err(Error::OutOfRange(format!("zero-energy solutions need x > 0 (got {x})")));
        }
        let a = 0.5 * (self.m as f64 - 2.0);
        let z = 2.0 * x.powf(-a) / (self.m as f64 - 2.0);
        let dz = -a * z / x;
        let (i, ip, k, kp) = bessel_ik(self.nu, z)?;
        let sx = x.sqrt();
        Ok(ZeroEnergySample {
            phi1: self.c1 * sx * i,
            dphi1: self.c1 * (0.5 * i / sx + sx * ip * dz),
            phi2: self.c2 * sx * k,
            dphi2: self.c2 * (0.5 * k / sx + sx * kp * dz),
        })
    }
}

/// Φ₁(x) for decay power `m`.
pub fn phi1(m: u32, x: f64) -> Result<f64> {
    Ok(ZeroEnergyPair::new(m)?.sample(x)?.phi1)
}

/// Φ₂(x) for decay power `m`.
pub fn phi2(m: u32, x: f64) -> Result<f64> {
    Ok(ZeroEnergyPair::new(m)?.sample(x)?.phi2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_closed_forms() {
        for &x in &[0.05, 0.7, 1.9, 2.0, 3.5, 12.0] {
            let (i, ip, k, kp) = bessel_ik(0.5, x).unwrap();
            let pre = (2.0 / (PI * x)).sqrt();
            let iex = pre * x.sinh();
            let kex = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((i - iex).abs() < 1e-13 * iex, "I x={x}");
            assert!((k - kex).abs() < 1e-13 * kex, "K x={x}");
            let ipex = pre * x.cosh() - iex / (2.0 * x);
            let kpex = -kex * (1.0 + 1.0 / (2.0 * x));
            assert!((ip - ipex).abs() < 1e-12 * ipex.abs());
            assert!((kp - kpex).abs() < 1e-12 * kpex.abs());
        }
    }

    #[test]
    fn integer_order_one_reference_values() {
        // I_1(1), K_1(1), I_1(3), K_1(3) (tabulated)
        let (i, _, k, _) = bessel_ik(1.0, 1.0).unwrap();
        assert!((i - 0.565_159_103_992_485).abs() < 1e-14);
        assert!((k - 0.601_907_230_197_234_6).abs() < 1e-14);
        let (i, _, k, _) = bessel_ik(1.0, 3.0).unwrap();
        assert!((i - 3.953_370_217_402_609).abs() < 1e-13);
        assert!((k - 0.040_156_431_128_194_18).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_gamma_series() {
        for &mu in &[-0.5, -0.2, 0.0, 0.3, 0.5] {
            let (_, _, gp, gm) = temme_gammas(mu);
            assert!((gp - 1.0 / gamma(1.0 + mu)).abs() < 1e-15);
            assert!((gm - 1.0 / gamma(1.0 - mu)).abs() < 1e-15);
        }
    }
}
