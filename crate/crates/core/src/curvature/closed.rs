//! Closed-form reductions of the `beta2` and `gamma` groups.
//!
//! Both are checked against the direct `phi` sums, which remain the source
//! of truth. Conventions:
//!
//! * `beta2`: with `c = (a+b)/(2 lam_k)` and `x = (a-b)/(2 lam_k)`,
//!   `lam_k * beta2(a, b, lam_k) = 3 w + 2 (q1 + q2) + 2 r` where, writing
//!   `ell = log((c+x)/(c-x))` and `rho = m(c+x, 1) / m(c-x, 1)`,
//!   `w = (t(x) + t(-x))/2` with `t(x) = (rho - 1)/(x ell)`,
//!   `q1 = (phi1(c-x) - phi1(c+x))/ell`,
//!   `q2 = (phi2(c+x) - phi2(c-x))/(2x)`,
//!   `r = -phi2(c-x) phi2(c+x)`.
//! * `gamma`: for one displaced argument `x` (in units of `lam_l`) and
//!   `c = lam_k/lam_l`, the three summands containing it reduce to
//!   `3 w + q + r + d` with
//!   `w = m(x,c,1)^2 / (2 m(x,c) m(c,1) m(x,1))`,
//!   `q = phi1(c) phi2(x/c)`, `r = -phi2(c/x) phi2(1/x) / x`,
//!   `d = -phi2(c) phi2(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{m2_unchecked, m3_unchecked, phi1_unchecked, phi2_unchecked, phi_unchecked, EvalPolicy};

use super::terms::beta2_unchecked;

fn check_beta_domain(x: f64, c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("c = {c} must be positive")));
    }
    if !(x > 0.0 && x < c) {
        return Err(Error::Usage(format!("x = {x} outside (0, c = {c})")));
    }
    Ok(())
}

/// Components of the `beta2` reduction at `(x, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beta2Parts {
    pub w: f64,
    pub q1: f64,
    pub q2: f64,
    pub r: f64,
}

impl Beta2Parts {
    pub fn q(&self) -> f64 {
        self.q1 + self.q2
    }

    pub fn total(&self) -> f64 {
        3.0 * self.w + 2.0 * self.q() + 2.0 * self.r
    }
}

/// `t(x) = (m(c+x,1)/m(c-x,1) - 1) / (x log((c+x)/(c-x)))`, odd in the
/// sense that `t(-x)` swaps the two `m` values.
pub fn t_beta(x: f64, c: f64, p: &EvalPolicy) -> Result<f64> {
    if !(c > 0.0 && x.abs() < c && x != 0.0) {
        return Err(Error::Usage(format!("t_beta needs 0 < |x| < c, got x = {x}, c = {c}")));
    }
    let rho = m2_unchecked(c + x, 1.0, p) / m2_unchecked(c - x, 1.0, p);
    let ell = log_ratio(x, c);
    Ok((rho - 1.0) / (x * ell))
}

// log((c+x)/(c-x)), odd in x
fn log_ratio(x: f64, c: f64) -> f64 {
    (2.0 * x / (c - x)).ln_1p()
}

pub(crate) fn beta2_parts_unchecked(x: f64, c: f64, p: &EvalPolicy) -> Beta2Parts {
    let (hi, lo) = (c + x, c - x);
    let rho = m2_unchecked(hi, 1.0, p) / m2_unchecked(lo, 1.0, p);
    let ell = log_ratio(x, c);
    // (t(x) + t(-x))/2 = (rho + 1/rho - 2)/(2 x ell)
    let w = (rho - 1.0) * (rho - 1.0) / (2.0 * rho * x * ell);
    let q1 = (phi1_unchecked(lo) - phi1_unchecked(hi)) / ell;
    let q2 = (phi2_unchecked(hi) - phi2_unchecked(lo)) / (2.0 * x);
    let r = -phi2_unchecked(lo) * phi2_unchecked(hi);
    Beta2Parts { w, q1, q2, r }
}

pub fn beta2_parts(x: f64, c: f64, p: &EvalPolicy) -> Result<Beta2Parts> {
    check_beta_domain(x, c)?;
    Ok(beta2_parts_unchecked(x, c, p))
}

/// `lam_k * beta2(a, b, lam_k)` from the closed form, with `a = lam_k (c+x)`
/// and `b = lam_k (c-x)`.
pub fn beta2_closed(x: f64, c: f64) -> Result<f64> {
    Ok(beta2_parts(x, c, &EvalPolicy::default())?.total())
}

/// The same quantity from the direct `phi` sum, using the scaling law with
/// `lam_k = 1`.
pub fn beta2_direct(x: f64, c: f64) -> Result<f64> {
    check_beta_domain(x, c)?;
    Ok(beta2_unchecked(c + x, c - x, 1.0, &EvalPolicy::default()))
}

/// Components of the `gamma` reduction for one displaced argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParts {
    pub w: f64,
    pub q: f64,
    pub r: f64,
    pub d: f64,
}

impl GammaParts {
    pub fn total(&self) -> f64 {
        3.0 * self.w + self.q + self.r + self.d
    }
}

fn check_gamma_domain(x: f64, c: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Usage(format!("x = {x} must be positive")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Usage(format!("c = {c} must be positive")));
    }
    Ok(())
}

pub(crate) fn gamma_parts_unchecked(x: f64, c: f64, p: &EvalPolicy) -> GammaParts {
    let t = m3_unchecked(x, c, 1.0, p);
    let w = 0.5 * t * t / (m2_unchecked(x, c, p) * m2_unchecked(c, 1.0, p) * m2_unchecked(x, 1.0, p));
    let q = phi1_unchecked(c) * phi2_unchecked(x / c);
    let r = -phi2_unchecked(c / x) * phi2_unchecked(1.0 / x) / x;
    let d = -phi2_unchecked(c) * phi2_unchecked(x);
    GammaParts { w, q, r, d }
}

pub fn gamma_parts(x: f64, c: f64, p: &EvalPolicy) -> Result<GammaParts> {
    check_gamma_domain(x, c)?;
    Ok(gamma_parts_unchecked(x, c, p))
}

/// `phi(x,c,1) + phi(c,x,1) + phi(c,1,x)` from the closed form.
pub fn gamma_closed(x: f64, c: f64) -> Result<f64> {
    Ok(gamma_parts(x, c, &EvalPolicy::default())?.total())
}

/// The same quantity from the direct `phi` sum.
pub fn gamma_direct(x: f64, c: f64) -> Result<f64> {
    check_gamma_domain(x, c)?;
    let p = EvalPolicy::default();
    Ok(phi_unchecked(x, c, 1.0, &p) + phi_unchecked(c, x, 1.0, &p) + phi_unchecked(c, 1.0, x, &p))
}

/// `gamma(a, b, lam_k, lam_l)` assembled from two closed-form halves.
pub fn gamma_closed_pair(a: f64, b: f64, lam_k: f64, lam_l: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b), ("lam_k", lam_k), ("lam_l", lam_l)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} = {v} must be positive")));
        }
    }
    let c = lam_k / lam_l;
    Ok((gamma_closed(a / lam_l, c)? + gamma_closed(b / lam_l, c)?) / lam_l)
}
