//! Divided differences of the logarithm and the curvature integrands built
//! from them.
//!
//! `m2` and `m3` are the first and (negated) second divided differences of
//! `log`. Both have removable singularities at coincident arguments; inside
//! a relative gap of `EvalPolicy::rel_degeneracy_tol` they are evaluated from
//! a Taylor expansion of `log` around the mean argument.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series;

/// Controls when the coincident-argument expansions take over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPolicy {
    pub rel_degeneracy_tol: f64,
    pub series_order: usize,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            rel_degeneracy_tol: 1e-6,
            series_order: 4,
        }
    }
}

impl EvalPolicy {
    pub fn new(rel_degeneracy_tol: f64, series_order: usize) -> Result<Self> {
        let p = Self {
            rel_degeneracy_tol,
            series_order,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_degeneracy_tol > 0.0 && self.rel_degeneracy_tol < 1e-2) {
            return Err(Error::Usage(format!(
                "rel_degeneracy_tol must lie in (0, 1e-2), got {}",
                self.rel_degeneracy_tol
            )));
        }
        if self.series_order < 2 {
            return Err(Error::Usage(format!(
                "series_order must be at least 2, got {}",
                self.series_order
            )));
        }
        Ok(())
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} must be a positive finite real")))
    }
}

/// Complete homogeneous symmetric polynomials `h_0..=h_deg` of `vars`.
fn complete_homogeneous(vars: &[f64], deg: usize) -> Vec<f64> {
    let mut h = vec![0.0; deg + 1];
    h[0] = 1.0;
    for &v in vars {
        // h^{(i)}_m = h^{(i-1)}_m + v * h^{(i)}_{m-1}
        for m in 1..=deg {
            h[m] += v * h[m - 1];
        }
    }
    h
}

/// Divided difference `log[x_0, ..., x_k]` by expansion around the mean.
///
/// With `d_i = (x_i - mu) / mu` the divided difference is
/// `sum_{j>=k} (-1)^{j+1} / (j mu^k) h_{j-k}(d)`.
fn log_divided_difference_series(points: &[f64], order: usize) -> f64 {
    let k = points.len() - 1;
    let mu = points.iter().sum::<f64>() / points.len() as f64;
    let rel: Vec<f64> = points.iter().map(|&p| (p - mu) / mu).collect();
    let h = complete_homogeneous(&rel, order);
    let mut acc = 0.0;
    // Sum the small terms first.
    for m in (0..=order).rev() {
        let j = (k + m) as f64;
        let sign = if (k + m) % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * h[m] / j;
    }
    acc / mu.powi(k as i32)
}

/// Relative spread below which `m3` of three clustered points is summed from
/// its series rather than the cancelling difference quotient.
const CLUSTER_BAND: f64 = 0.05;

#[inline]
fn near(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.max(y)
}

pub(crate) fn m2_unchecked(x: f64, y: f64, policy: &EvalPolicy) -> f64 {
    if x == y {
        return 1.0 / x;
    }
    if near(x, y, policy.rel_degeneracy_tol) {
        return log_divided_difference_series(&[x, y], policy.series_order);
    }
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    let d = hi - lo;
    (d / lo).ln_1p() / d
}

pub(crate) fn m3_unchecked(x: f64, y: f64, z: f64, policy: &EvalPolicy) -> f64 {
    let mut s = [x, y, z];
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let [lo, mid, hi] = s;
    if lo == hi {
        return 0.5 / (lo * lo);
    }
    if near(lo, hi, policy.rel_degeneracy_tol) {
        return -log_divided_difference_series(&s, policy.series_order);
    }
    if near(lo, hi, CLUSTER_BAND) {
        // The difference quotient below would lose eps/spread; sum the
        // series far enough to reach rounding level instead.
        let spread = (hi - lo) / (lo + mid + hi) * 3.0;
        let order = ((39.2 / -spread.ln()).ceil() as usize + 2).max(policy.series_order);
        return -log_divided_difference_series(&s, order);
    }
    (m2_unchecked(lo, mid, policy) - m2_unchecked(hi, mid, policy)) / (hi - lo)
}

pub(crate) fn phi_unchecked(x: f64, y: f64, z: f64, policy: &EvalPolicy) -> f64 {
    let mxy = m2_unchecked(x, y, policy);
    let myz = m2_unchecked(y, z, policy);
    let mzx = m2_unchecked(z, x, policy);
    let t = m3_unchecked(x, y, z, policy);
    let first = 0.5 * t * t / (mxy * myz * mzx);
    let second = m3_unchecked(y, y, x, policy) * m3_unchecked(y, y, z, policy) * y / (mxy * myz);
    first - second
}

pub(crate) fn v_unchecked(x: f64, y: f64, policy: &EvalPolicy) -> f64 {
    let mxy = m2_unchecked(x, y, policy);
    let t = m3_unchecked(x, x, y, policy);
    let s = m3_unchecked(y, y, x, policy);
    let mm = mxy * mxy;
    // m(x,x) = 1/x
    0.5 * t * t * x / mm - t * s * y / mm
}

/// `m(x,y) = (log x - log y) / (x - y)`, with `m(x,x) = 1/x`.
pub fn m2(x: f64, y: f64, policy: &EvalPolicy) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    Ok(m2_unchecked(x, y, policy))
}

/// `m(x,y,z) = (m(x,z) - m(y,z)) / (y - x)`, with `m(x,x,x) = 1/(2x^2)`.
///
/// This is minus the second divided difference of `log`, hence positive.
pub fn m3(x: f64, y: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    check_positive("z", z)?;
    Ok(m3_unchecked(x, y, z, policy))
}

/// Complex curvature integrand `phi(x,y,z)`.
pub fn phi(x: f64, y: f64, z: f64, policy: &EvalPolicy) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    check_positive("z", z)?;
    Ok(phi_unchecked(x, y, z, policy))
}

/// Real-correction integrand `v(x,y)`.
pub fn v_fn(x: f64, y: f64, policy: &EvalPolicy) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    Ok(v_unchecked(x, y, policy))
}

#[inline]
fn near_one(u: f64) -> bool {
    (u - 1.0).abs() < series::RADIUS
}

pub(crate) fn phi1_unchecked(u: f64) -> f64 {
    if near_one(u) {
        return series::horner(&series::PHI1, u - 1.0);
    }
    1.0 / (u * u.ln()) + 1.0 / (1.0 - u)
}

pub(crate) fn phi2_unchecked(u: f64) -> f64 {
    if near_one(u) {
        return series::horner(&series::PHI2, u - 1.0);
    }
    1.0 / u.ln() + 1.0 / (1.0 - u)
}

pub(crate) fn kappa_unchecked(c: f64) -> f64 {
    if near_one(c) {
        return series::horner(&series::KAPPA, c - 1.0);
    }
    let l = c.ln();
    1.5 / (c * l * l) - (2.0 * c + 1.0) / (c * (c - 1.0) * l) + (c + 2.0) / (2.0 * (c - 1.0) * (c - 1.0))
}

pub(crate) fn rho_unchecked(c: f64) -> f64 {
    if near_one(c) {
        return series::horner(&series::RHO, c - 1.0);
    }
    let l = c.ln();
    1.5 / (l * l) - (c + 2.0) / ((c - 1.0) * l) + (1.0 + 2.0 * c) / (2.0 * (1.0 - c) * (1.0 - c))
}

/// `phi1(u) = 1/(u log u) + 1/(1-u)`, with `phi1(1) = -1/2`.
///
/// Within `series::RADIUS` of 1 the value comes from an 18-term Taylor
/// table; the closed form cancels badly there. The policy is validated but
/// the switch radius is fixed, because these single-argument functions lose
/// accuracy on a much wider band than the two-point divided differences.
pub fn phi1(u: f64, policy: &EvalPolicy) -> Result<f64> {
    policy.validate()?;
    check_positive("u", u)?;
    Ok(phi1_unchecked(u))
}

/// `phi2(u) = 1/log u + 1/(1-u)`, with `phi2(1) = 1/2`.
pub fn phi2(u: f64, policy: &EvalPolicy) -> Result<f64> {
    policy.validate()?;
    check_positive("u", u)?;
    Ok(phi2_unchecked(u))
}

/// `kappa(c) = v(c, 1)`, with `kappa(1) = -1/8`.
pub fn kappa_fn(c: f64, policy: &EvalPolicy) -> Result<f64> {
    policy.validate()?;
    check_positive("c", c)?;
    Ok(kappa_unchecked(c))
}

/// `rho(c) = v(1, c)`, with `rho(1) = -1/8`.
pub fn rho_fn(c: f64, policy: &EvalPolicy) -> Result<f64> {
    policy.validate()?;
    check_positive("c", c)?;
    Ok(rho_unchecked(c))
}
