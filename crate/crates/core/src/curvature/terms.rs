//! Summand groups of the curvature around a distinguished pair `(a, b)` and
//! the pair-sums they split into.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{phi_unchecked as phi, v_unchecked, EvalPolicy};

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} must be a positive finite real")))
    }
}

pub(crate) fn alpha_unchecked(a: f64, b: f64, p: &EvalPolicy) -> f64 {
    2.0 * phi(a, a, b, p) + 2.0 * phi(b, b, a, p) + phi(a, b, a, p) + phi(b, a, b, p)
}

pub(crate) fn beta1_unchecked(a: f64, b: f64, k: f64, p: &EvalPolicy) -> f64 {
    2.0 * phi(a, a, k, p) + 2.0 * phi(b, b, k, p) + phi(a, k, a, p) + phi(b, k, b, p)
}

pub(crate) fn beta2_unchecked(a: f64, b: f64, k: f64, p: &EvalPolicy) -> f64 {
    2.0 * phi(a, b, k, p) + 2.0 * phi(b, a, k, p) + phi(a, k, b, p) + phi(b, k, a, p)
}

pub(crate) fn gamma_unchecked(a: f64, b: f64, k: f64, l: f64, p: &EvalPolicy) -> f64 {
    phi(a, k, l, p) + phi(b, k, l, p) + phi(k, a, l, p) + phi(k, b, l, p) + phi(k, l, a, p) + phi(k, l, b, p)
}

pub(crate) fn gamma_star_unchecked(a: f64, b: f64, k: f64, l: f64, p: &EvalPolicy) -> f64 {
    phi(a, k, l, p) + phi(b, k, l, p) + phi(k, a, l, p) + phi(k, b, l, p) + phi(l, k, a, p) + phi(l, k, b, p)
}

/// Group of summands containing only `a` and `b`.
pub fn alpha(a: f64, b: f64, p: &EvalPolicy) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    Ok(alpha_unchecked(a, b, p))
}

/// Summands with `a` or `b` twice and one other eigenvalue.
pub fn beta1(a: f64, b: f64, lam_k: f64, p: &EvalPolicy) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    positive("lam_k", lam_k)?;
    Ok(beta1_unchecked(a, b, lam_k, p))
}

/// Summands with `a`, `b` and one other eigenvalue.
pub fn beta2(a: f64, b: f64, lam_k: f64, p: &EvalPolicy) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    positive("lam_k", lam_k)?;
    Ok(beta2_unchecked(a, b, lam_k, p))
}

/// Summands with exactly one of `a`, `b` and the ordered pair `(k, l)`.
pub fn gamma(a: f64, b: f64, lam_k: f64, lam_l: f64, p: &EvalPolicy) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    positive("lam_k", lam_k)?;
    positive("lam_l", lam_l)?;
    Ok(gamma_unchecked(a, b, lam_k, lam_l, p))
}

/// Variant of `gamma` whose last pair is `phi(l, k, .)` instead of
/// `phi(k, l, .)`.
pub fn gamma_star(a: f64, b: f64, lam_k: f64, lam_l: f64, p: &EvalPolicy) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    positive("lam_k", lam_k)?;
    positive("lam_l", lam_l)?;
    Ok(gamma_star_unchecked(a, b, lam_k, lam_l, p))
}

/// `v(k, l) + v(l, k)`.
pub fn v_pair(lam_k: f64, lam_l: f64, p: &EvalPolicy) -> Result<f64> {
    positive("lam_k", lam_k)?;
    positive("lam_l", lam_l)?;
    Ok(v_unchecked(lam_k, lam_l, p) + v_unchecked(lam_l, lam_k, p))
}

/// `v(k, j) + v(l, j) + v(j, k) + v(j, l)`.
pub fn v_cross(lam_k: f64, lam_l: f64, lam_j: f64, p: &EvalPolicy) -> Result<f64> {
    positive("lam_k", lam_k)?;
    positive("lam_l", lam_l)?;
    positive("lam_j", lam_j)?;
    Ok(v_unchecked(lam_k, lam_j, p)
        + v_unchecked(lam_l, lam_j, p)
        + v_unchecked(lam_j, lam_k, p)
        + v_unchecked(lam_j, lam_l, p))
}

/// Named pair-sums of the summand groups, evaluated at `(a - x, b + x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubtermName {
    /// `phi(A,A,B) + phi(B,B,A)`
    AlphaAab,
    /// `phi(A,B,A) + phi(B,A,B)`
    AlphaAba,
    /// `phi(A,A,k) + phi(B,B,k)`
    Beta1Diag,
    /// `Beta1Diag + Beta1Cross`
    Beta1Sum,
    /// `phi(A,k,A) + phi(B,k,B)`
    Beta1Cross,
    /// `phi(A,B,k) + phi(B,A,k)`
    Beta2Adjacent,
    /// `Beta2Adjacent + Beta2Cross`
    Beta2Sum,
    /// `phi(A,k,B) + phi(B,k,A)`
    Beta2Cross,
    /// `phi(k,A,l) + phi(k,B,l)`
    GammaMiddle,
    /// `phi(A,k,l) + phi(B,k,l)`
    GammaOuter,
    /// Full six-term `gamma_star`.
    GammaStar,
}

impl SubtermName {
    pub const ALL: [SubtermName; 11] = [
        SubtermName::AlphaAab,
        SubtermName::AlphaAba,
        SubtermName::Beta1Diag,
        SubtermName::Beta1Sum,
        SubtermName::Beta1Cross,
        SubtermName::Beta2Adjacent,
        SubtermName::Beta2Sum,
        SubtermName::Beta2Cross,
        SubtermName::GammaMiddle,
        SubtermName::GammaOuter,
        SubtermName::GammaStar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SubtermName::AlphaAab => "alpha-aab",
            SubtermName::AlphaAba => "alpha-aba",
            SubtermName::Beta1Diag => "beta1-diag",
            SubtermName::Beta1Sum => "beta1-sum",
            SubtermName::Beta1Cross => "beta1-cross",
            SubtermName::Beta2Adjacent => "beta2-adjacent",
            SubtermName::Beta2Sum => "beta2-sum",
            SubtermName::Beta2Cross => "beta2-cross",
            SubtermName::GammaMiddle => "gamma-middle",
            SubtermName::GammaOuter => "gamma-outer",
            SubtermName::GammaStar => "gamma-star",
        }
    }

    pub fn needs_lam_k(self) -> bool {
        !matches!(self, SubtermName::AlphaAab | SubtermName::AlphaAba)
    }

    pub fn needs_lam_l(self) -> bool {
        matches!(
            self,
            SubtermName::GammaMiddle | SubtermName::GammaOuter | SubtermName::GammaStar
        )
    }
}

impl fmt::Display for SubtermName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubtermName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SubtermName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown subterm name '{s}'")))
    }
}

pub(crate) fn subterm_unchecked(name: SubtermName, a: f64, b: f64, k: f64, l: f64, p: &EvalPolicy) -> f64 {
    use SubtermName::*;
    let (aa, bb) = (a, b);
    match name {
        AlphaAab => phi(aa, aa, bb, p) + phi(bb, bb, aa, p),
        AlphaAba => phi(aa, bb, aa, p) + phi(bb, aa, bb, p),
        Beta1Diag => phi(aa, aa, k, p) + phi(bb, bb, k, p),
        Beta1Cross => phi(aa, k, aa, p) + phi(bb, k, bb, p),
        Beta1Sum => {
            subterm_unchecked(Beta1Diag, a, b, k, l, p) + subterm_unchecked(Beta1Cross, a, b, k, l, p)
        }
        Beta2Adjacent => phi(aa, bb, k, p) + phi(bb, aa, k, p),
        Beta2Cross => phi(aa, k, bb, p) + phi(bb, k, aa, p),
        Beta2Sum => {
            subterm_unchecked(Beta2Adjacent, a, b, k, l, p)
                + subterm_unchecked(Beta2Cross, a, b, k, l, p)
        }
        GammaMiddle => phi(k, aa, l, p) + phi(k, bb, l, p),
        GammaOuter => phi(aa, k, l, p) + phi(bb, k, l, p),
        GammaStar => gamma_star_unchecked(aa, bb, k, l, p),
    }
}

/// Evaluates `name` at the displaced pair `(a - x, b + x)`.
///
/// `lam_k` is required by every name except the two alpha pair-sums and
/// `lam_l` by the gamma names; `0 <= x <= (a - b)/2`.
pub fn subterm(name: SubtermName, a: f64, b: f64, x: f64, lam_k: f64, lam_l: Option<f64>) -> Result<f64> {
    subterm_with(name, a, b, x, Some(lam_k), lam_l, &EvalPolicy::default())
}

pub fn subterm_with(
    name: SubtermName,
    a: f64,
    b: f64,
    x: f64,
    lam_k: Option<f64>,
    lam_l: Option<f64>,
    p: &EvalPolicy,
) -> Result<f64> {
    positive("a", a)?;
    positive("b", b)?;
    let half = 0.5 * (a - b);
    if !(x >= 0.0 && x <= half * (1.0 + 1e-12)) {
        return Err(Error::Usage(format!("x = {x} outside [0, (a-b)/2 = {half}]")));
    }
    let k = match (name.needs_lam_k(), lam_k) {
        (true, Some(k)) => {
            positive("lam_k", k)?;
            k
        }
        (true, None) => return Err(Error::Usage(format!("{name} needs lam_k"))),
        (false, _) => 1.0,
    };
    let l = match (name.needs_lam_l(), lam_l) {
        (true, Some(l)) => {
            positive("lam_l", l)?;
            l
        }
        (true, None) => return Err(Error::Usage(format!("{name} needs lam_l"))),
        (false, _) => 1.0,
    };
    let x = x.min(half);
    Ok(subterm_unchecked(name, a - x, b + x, k, l, p))
}
