//! Scalar functions whose signs carry the proofs of the monotone summands.
//!
//! Near `c = 1` the functions with a removable singularity switch to an
//! 18-term Taylor table inside `series::RADIUS`.

use crate::kernels::{kappa_unchecked, rho_unchecked};
use crate::series;

#[inline]
fn near_one(c: f64) -> bool {
    (c - 1.0).abs() < series::RADIUS
}

/// `alpha(a, b) = -tau_alpha(b/a) / (a + b)`; decreasing on `(0, 1)`.
pub fn tau_alpha(c: f64) -> f64 {
    if near_one(c) {
        return series::horner(&series::TAU_ALPHA, c - 1.0);
    }
    let l = c.ln();
    let p = 1.0 + c;
    -0.5 * p * p / ((1.0 - c) * (1.0 - c)) + p * (1.0 + c * c) / (c * (c - 1.0) * l)
        - 0.5 * p * p / (c * l * l)
}

/// Non-negative function closing the alpha argument.
pub fn q_alpha(c: f64) -> f64 {
    let num = 10.0 * c.powi(7) - 26.0 * c.powi(6) - c.powi(5) - 25.0 * c.powi(4) - 3.0 * c.powi(3)
        - 27.0 * c * c
        - 18.0 * c
        - 6.0;
    let den = 96.0 * c.powi(7) + 84.0 * c.powi(6) + 156.0 * c.powi(5) - 240.0 * c.powi(4)
        + 176.0 * c.powi(3)
        - 144.0 * c * c
        + 52.0 * c
        + 12.0;
    c.ln() + 2.0 * (c - 1.0) * num / (c * den)
}

/// `2 phi(c,c,1) + phi(c,1,c)`, the per-eigenvalue beta1 profile.
pub fn tau_beta(c: f64) -> f64 {
    if near_one(c) {
        return series::horner(&series::TAU_BETA, c - 1.0);
    }
    let l = c.ln();
    -(2.0 * c - 3.0) / (2.0 * c * l * l) + 1.0 / (c * (1.0 - c) * l) + c / (2.0 * (1.0 - c) * (1.0 - c))
}

/// First concave piece of `tau_beta`; `tau1 + tau2/2 = tau_beta`.
pub fn tau1_beta(c: f64) -> f64 {
    if near_one(c) {
        return series::horner(&series::TAU1, c - 1.0);
    }
    let l = c.ln();
    (3.0 - c) / (4.0 * c * l * l) - 1.0 / (2.0 * c * (c - 1.0) * l)
}

/// Second concave piece of `tau_beta`.
pub fn tau2_beta(c: f64) -> f64 {
    if near_one(c) {
        return series::horner(&series::TAU2, c - 1.0);
    }
    let l = c.ln();
    (3.0 - 3.0 * c) / (2.0 * c * l * l) - 1.0 / (c * (c - 1.0) * l) + c / ((1.0 - c) * (1.0 - c))
}

/// Positive function closing the condition-4 argument for beta2.
pub fn d_u(u: f64) -> f64 {
    let num = 2484.0 * u * u - 1284.0 * u + 655.0;
    let den = 48.0 * u.powi(3) - 27.0 * u * u + 12.0 * u + 1.0;
    u.ln() + 16.0 / 3.0 + 18.0 / u + num / (3.0 * den)
}

/// Positive function from the beta1 argument.
pub fn eta(c: f64) -> f64 {
    let l = c.ln();
    let den = c * (576.0 * c.powi(3) + 216.0 * c * c + 144.0 * c + 216.0);
    let p1 = 450.0 * c.powi(5) - 1920.0 * c.powi(4) + 45.0 * c.powi(3) + 20.0 * c * c - 63.0 * c - 432.0;
    let p2 = 6285.0 * c.powi(5) - 5112.0 * c.powi(4) + 924.0 * c.powi(3) + 392.0 * c * c + 579.0 * c
        + 1440.0;
    -l * l + 2.0 * p1 / den * l + p2 / den
}

/// Negative function (away from `c = 1`) from the real-case argument.
pub fn tau_real(c: f64) -> f64 {
    let l = c.ln();
    let c5 = c.powi(5);
    let a = 30.0 * c.powi(6) - 211.0 * c5 - 198.0 * c.powi(4) + 207.0 * c.powi(3) + 18.0 * c * c
        + 54.0 * c
        + 90.0;
    let b = 351.0 * c5 + 1306.0 * c.powi(4) - 29.0 * c.powi(3) + 1120.0 * c * c + 957.0 * c + 765.0;
    let d = 1249.0 * c.powi(4) + 1132.0 * c.powi(3) - 744.0 * c * c - 872.0 * c - 705.0;
    let m = 1.0 - c;
    1440.0 * l * l * l - 24.0 / c5 * a * l * l + 8.0 / c5 * m * b * l + 4.0 / c5 * m * m * d
}

/// `kappa(c) + rho(c)`; concave on `(0, inf)`.
pub fn kappa_plus_rho(c: f64) -> f64 {
    kappa_unchecked(c) + rho_unchecked(c)
}
