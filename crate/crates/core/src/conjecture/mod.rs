//! Verification sweeps: majorisation monotonicity of the curvature, of its
//! summand groups, derivative conditions on the closed forms, signs of the
//! scalar inequality functions, and counterexample searches.
//!
//! Every check returns a [`SweepReport`] tagged with a [`ClaimClass`].
//! Random inputs are drawn sequentially from a seeded generator before any
//! parallel evaluation, and results are collected in grid order, so a report
//! depends only on its inputs.

pub mod functions;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::terms::{
    alpha_unchecked, beta1_unchecked, beta2_unchecked, gamma_unchecked, subterm_unchecked,
};
use crate::curvature::closed::{beta2_parts_unchecked, gamma_parts_unchecked};
use crate::curvature::{scal, scal_real, SubtermName};
use crate::error::{Error, Result};
use crate::kernels::{phi2_unchecked, v_unchecked, EvalPolicy};
use crate::states::{sample_spectrum, t_transform};

pub use crate::report::{ClaimClass, ReportBuilder, Row, SweepReport, Verdict, Violation, STRICT_TOL};

/// Width of the band around `c = 1` left out of inequality grids.
pub const COLLAR: f64 = 1e-4;
/// Relative step for first differences of the closed forms.
pub const FIRST_DIFF_REL_STEP: f64 = 1e-4;
/// Relative step for second differences.
pub const SECOND_DIFF_REL_STEP: f64 = 1e-3;

/// `n` points spaced logarithmically on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `n` points spaced uniformly on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Claim class of each named pair-sum as stated alongside the grouping.
pub fn subterm_claim(name: SubtermName) -> ClaimClass {
    use SubtermName::*;
    match name {
        AlphaAab | AlphaAba | Beta1Diag | Beta1Sum => ClaimClass::Proven,
        Beta2Adjacent | Beta2Sum | GammaMiddle => ClaimClass::Evidenced,
        Beta1Cross | Beta2Cross | GammaOuter | GammaStar => ClaimClass::Disproven,
    }
}

/// Grouped term tracked along `(a - x, b + x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "name")]
pub enum Term {
    Alpha,
    Beta1,
    Beta2,
    Gamma,
    /// `v(a,b) + v(b,a)`; `a`, `b` play the roles of the pair `(k, l)`.
    VPair,
    /// `v(a,j) + v(b,j) + v(j,a) + v(j,b)` with `j = lam_k`.
    VCross,
    Subterm(SubtermName),
}

impl Term {
    pub fn claim(self) -> ClaimClass {
        match self {
            Term::Alpha | Term::Beta1 | Term::VPair | Term::VCross => ClaimClass::Proven,
            Term::Beta2 | Term::Gamma => ClaimClass::Evidenced,
            Term::Subterm(n) => subterm_claim(n),
        }
    }

    pub fn needs_lam_k(self) -> bool {
        match self {
            Term::Alpha | Term::VPair => false,
            Term::Beta1 | Term::Beta2 | Term::Gamma | Term::VCross => true,
            Term::Subterm(n) => n.needs_lam_k(),
        }
    }

    pub fn needs_lam_l(self) -> bool {
        match self {
            Term::Gamma => true,
            Term::Subterm(n) => n.needs_lam_l(),
            _ => false,
        }
    }

    pub fn label(self) -> String {
        match self {
            Term::Alpha => "alpha".into(),
            Term::Beta1 => "beta1".into(),
            Term::Beta2 => "beta2".into(),
            Term::Gamma => "gamma".into(),
            Term::VPair => "v-pair".into(),
            Term::VCross => "v-cross".into(),
            Term::Subterm(n) => n.as_str().into(),
        }
    }

    fn eval(self, a: f64, b: f64, k: f64, l: f64, p: &EvalPolicy) -> f64 {
        match self {
            Term::Alpha => alpha_unchecked(a, b, p),
            Term::Beta1 => beta1_unchecked(a, b, k, p),
            Term::Beta2 => beta2_unchecked(a, b, k, p),
            Term::Gamma => gamma_unchecked(a, b, k, l, p),
            Term::VPair => v_unchecked(a, b, p) + v_unchecked(b, a, p),
            Term::VCross => v_unchecked(a, k, p) + v_unchecked(b, k, p) + v_unchecked(k, a, p) + v_unchecked(k, b, p),
            Term::Subterm(n) => subterm_unchecked(n, a, b, k, l, p),
        }
    }
}

impl std::str::FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alpha" => Term::Alpha,
            "beta1" => Term::Beta1,
            "beta2" => Term::Beta2,
            "gamma" => Term::Gamma,
            "v-pair" => Term::VPair,
            "v-cross" => Term::VCross,
            other => Term::Subterm(other.parse()?),
        })
    }
}

/// Monotonicity task: `term` should increase along `x_grid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedTermTask {
    pub term: Term,
    pub a: f64,
    pub b: f64,
    pub lam_k: Option<f64>,
    pub lam_l: Option<f64>,
    pub x_grid: Vec<f64>,
}

impl GroupedTermTask {
    pub fn new(term: Term, a: f64, b: f64, lam_k: Option<f64>, lam_l: Option<f64>, x_grid: Vec<f64>) -> Result<Self> {
        if !(b > 0.0 && a > b && a.is_finite()) {
            return Err(Error::Usage(format!("need a > b > 0, got a = {a}, b = {b}")));
        }
        if term.needs_lam_k() != lam_k.is_some() {
            return Err(Error::Usage(format!("{} {} lam_k", term.label(), if term.needs_lam_k() { "needs" } else { "takes no" })));
        }
        if term.needs_lam_l() != lam_l.is_some() {
            return Err(Error::Usage(format!("{} {} lam_l", term.label(), if term.needs_lam_l() { "needs" } else { "takes no" })));
        }
        for v in lam_k.iter().chain(lam_l.iter()) {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("eigenvalue {v} must be positive")));
            }
        }
        let half = 0.5 * (a - b);
        if x_grid.is_empty() {
            return Err(Error::Usage("x grid is empty".into()));
        }
        if x_grid.iter().any(|&x| !(x >= 0.0 && x <= half)) {
            return Err(Error::Usage(format!("x grid must lie in [0, {half}]")));
        }
        if x_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("x grid must be strictly increasing".into()));
        }
        Ok(Self { term, a, b, lam_k, lam_l, x_grid })
    }

    /// Task over `points` uniform steps covering `[0, (a-b)/2]`.
    pub fn uniform(term: Term, a: f64, b: f64, lam_k: Option<f64>, lam_l: Option<f64>, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Usage("need at least two grid points".into()));
        }
        let half = 0.5 * (a - b);
        let grid = (0..points).map(|i| half * (i as f64 / (points - 1) as f64)).collect();
        Self::new(term, a, b, lam_k, lam_l, grid)
    }
}

/// Random T-transform chains toward the uniform spectrum; every link must
/// raise both `scal` and `scal_real`.
pub fn check_conjecture<R: Rng + ?Sized>(n: usize, trials: usize, rng: &mut R, steps_per_chain: usize) -> Result<SweepReport> {
    if n < 2 {
        return Err(Error::Usage("conjecture check needs n >= 2".into()));
    }
    let mut links = Vec::new();
    for trial in 0..trials {
        let mut s = sample_spectrum(n, rng)?;
        for step in 0..steps_per_chain {
            let k = rng.gen_range(0..n);
            let mut l = rng.gen_range(0..n - 1);
            if l >= k {
                l += 1;
            }
            let t: f64 = rng.gen();
            let next = t_transform(&s, k, l, t)?;
            if next.values() != s.values() {
                links.push((trial, step, s.clone(), next.clone()));
            }
            s = next;
        }
    }
    let values: Vec<[f64; 4]> = links
        .par_iter()
        .map(|(_, _, less, more)| [scal(less), scal(more), scal_real(less), scal_real(more)])
        .collect();
    let mut b = ReportBuilder::new(
        format!("scal and scal_real increase along random T-transform chains, n = {n}, {trials} chains x {steps_per_chain} steps"),
        ClaimClass::Evidenced,
        &["trial", "step", "real"],
    );
    for ((trial, step, _, _), v) in links.iter().zip(&values) {
        b.push(vec![*trial as f64, *step as f64, 0.0], v[1], v[1] - v[0], v[0]);
        b.push(vec![*trial as f64, *step as f64, 1.0], v[3], v[3] - v[2], v[2]);
    }
    b.diagnostic("links", links.len() as f64);
    Ok(b.finish())
}

/// Successive differences of the grouped term along its grid.
pub fn check_term_monotonicity(task: &GroupedTermTask) -> SweepReport {
    let p = EvalPolicy::default();
    let k = task.lam_k.unwrap_or(1.0);
    let l = task.lam_l.unwrap_or(1.0);
    let vals: Vec<f64> = task
        .x_grid
        .par_iter()
        .map(|&x| task.term.eval(task.a - x, task.b + x, k, l, &p))
        .collect();
    let mut b = ReportBuilder::new(
        format!(
            "{} increasing along (a - x, b + x): a = {}, b = {}, lam_k = {:?}, lam_l = {:?}, {} grid points",
            task.term.label(),
            task.a,
            task.b,
            task.lam_k,
            task.lam_l,
            task.x_grid.len()
        ),
        task.term.claim(),
        &["x"],
    );
    for i in 1..vals.len() {
        b.push(vec![task.x_grid[i]], vals[i], vals[i] - vals[i - 1], vals[i - 1]);
    }
    b.finish()
}

/// The four derivative conditions on the beta2 reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Beta2Condition {
    /// `d/dx (w + q) < 0`
    WPlusQ,
    /// `d/dx (2w + q1 + r) < 0`
    TwoWPlusQ1PlusR,
    /// `d/dx q2 < 0`
    Q2,
    /// `d/dx r < 0`
    R,
    /// `d/dx (3w + 2q + 2r) < 0`, the combined statement.
    Total,
}

impl Beta2Condition {
    pub const ALL: [Beta2Condition; 5] = [
        Beta2Condition::WPlusQ,
        Beta2Condition::TwoWPlusQ1PlusR,
        Beta2Condition::Q2,
        Beta2Condition::R,
        Beta2Condition::Total,
    ];

    pub fn claim(self) -> ClaimClass {
        match self {
            Beta2Condition::R => ClaimClass::Proven,
            _ => ClaimClass::Evidenced,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Beta2Condition::WPlusQ => "condition 1: d/dx (w + q) < 0",
            Beta2Condition::TwoWPlusQ1PlusR => "condition 2: d/dx (2w + q1 + r) < 0",
            Beta2Condition::Q2 => "condition 3: d/dx q2 < 0",
            Beta2Condition::R => "condition 4: d/dx r < 0",
            Beta2Condition::Total => "combined: d/dx (3w + 2q + 2r) < 0",
        }
    }

    fn eval(self, x: f64, c: f64, p: &EvalPolicy) -> f64 {
        if self == Beta2Condition::R {
            // Only r is needed; skip the rest of the reduction.
            return -phi2_unchecked(c - x) * phi2_unchecked(c + x);
        }
        let b = beta2_parts_unchecked(x, c, p);
        match self {
            Beta2Condition::WPlusQ => b.w + b.q(),
            Beta2Condition::TwoWPlusQ1PlusR => 2.0 * b.w + b.q1 + b.r,
            Beta2Condition::Q2 => b.q2,
            Beta2Condition::R => unreachable!(),
            Beta2Condition::Total => b.total(),
        }
    }
}

/// Interior x grid for a given `c`: `x_i = c (i+1)/(res+1)`.
fn beta_x_grid(c: f64, res: usize) -> impl Iterator<Item = f64> {
    (0..res).map(move |i| c * (i + 1) as f64 / (res + 1) as f64)
}

fn first_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let up = f(x + h);
    let down = f(x - h);
    (up - down, f(x))
}

fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let mid = f(x);
    (f(x + h) - 2.0 * mid + f(x - h), mid)
}

/// Sign of `d/dx` of one beta2 condition over the `(c, x)` grid with
/// `x in (0, c)`.
///
/// The slack at each point is minus the central difference
/// `f(x+h) - f(x-h)` with `h = FIRST_DIFF_REL_STEP * min(x, c - x)`; the row
/// value is the derivative estimate.
pub fn check_beta2_condition(cond: Beta2Condition, c_grid: &[f64], x_resolution: usize) -> SweepReport {
    let p = EvalPolicy::default();
    let pts: Vec<(f64, f64)> = c_grid
        .iter()
        .flat_map(|&c| beta_x_grid(c, x_resolution).map(move |x| (c, x)))
        .collect();
    let res: Vec<(f64, f64, f64)> = pts
        .par_iter()
        .map(|&(c, x)| {
            let h = FIRST_DIFF_REL_STEP * x.min(c - x);
            let (diff, f) = first_difference(|t| cond.eval(t, c, &p), x, h);
            (diff, f, diff / (2.0 * h))
        })
        .collect();
    let mut b = ReportBuilder::new(
        format!(
            "beta2 {} on {} c values x {} interior x values",
            cond.label(),
            c_grid.len(),
            x_resolution
        ),
        cond.claim(),
        &["c", "x"],
    );
    for (&(c, x), &(diff, f, deriv)) in pts.iter().zip(&res) {
        b.push(vec![c, x], deriv, -diff, f);
    }
    b.finish()
}

/// Conditions 1-4 plus the combined statement.
pub fn check_beta2_conditions(c_grid: &[f64], x_resolution: usize) -> Vec<SweepReport> {
    Beta2Condition::ALL
        .iter()
        .map(|&c| check_beta2_condition(c, c_grid, x_resolution))
        .collect()
}

/// The two concavity conditions on the gamma reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaCondition {
    /// `d2/dx2 (2w + d) < 0`
    TwoWPlusD,
    /// `d2/dx2 (w + q + r) < 0`
    WPlusQPlusR,
    /// `d2/dx2 (3w + q + r + d) < 0`, the combined statement.
    Total,
}

impl GammaCondition {
    pub const ALL: [GammaCondition; 3] = [GammaCondition::TwoWPlusD, GammaCondition::WPlusQPlusR, GammaCondition::Total];

    pub fn label(self) -> &'static str {
        match self {
            GammaCondition::TwoWPlusD => "condition 1: d2/dx2 (2w + d) < 0",
            GammaCondition::WPlusQPlusR => "condition 2: d2/dx2 (w + q + r) < 0",
            GammaCondition::Total => "combined: d2/dx2 (3w + q + r + d) < 0",
        }
    }

    fn eval(self, x: f64, c: f64, p: &EvalPolicy) -> f64 {
        let g = gamma_parts_unchecked(x, c, p);
        match self {
            GammaCondition::TwoWPlusD => 2.0 * g.w + g.d,
            GammaCondition::WPlusQPlusR => g.w + g.q + g.r,
            GammaCondition::Total => g.total(),
        }
    }
}

/// Sign of `d2/dx2` of one gamma condition on the `c_grid x x_grid`
/// product, with `h = SECOND_DIFF_REL_STEP * x`.
pub fn check_gamma_condition(cond: GammaCondition, c_grid: &[f64], x_grid: &[f64]) -> SweepReport {
    let p = EvalPolicy::default();
    let pts: Vec<(f64, f64)> = c_grid
        .iter()
        .flat_map(|&c| x_grid.iter().map(move |&x| (c, x)))
        .collect();
    let res: Vec<(f64, f64, f64)> = pts
        .par_iter()
        .map(|&(c, x)| {
            let h = SECOND_DIFF_REL_STEP * x;
            let (diff, f) = second_difference(|t| cond.eval(t, c, &p), x, h);
            (diff, f, diff / (h * h))
        })
        .collect();
    let mut b = ReportBuilder::new(
        format!("gamma {} on {} c values x {} x values", cond.label(), c_grid.len(), x_grid.len()),
        ClaimClass::Evidenced,
        &["c", "x"],
    );
    for (&(c, x), &(diff, f, deriv)) in pts.iter().zip(&res) {
        b.push(vec![c, x], deriv, -diff, f);
    }
    b.finish()
}

pub fn check_gamma_conditions(c_grid: &[f64], x_grid: &[f64]) -> Vec<SweepReport> {
    GammaCondition::ALL
        .iter()
        .map(|&c| check_gamma_condition(c, c_grid, x_grid))
        .collect()
}

/// Largest relative disagreement between derivatives of the closed forms
/// and of the direct `phi` sums at `points` seeded random locations.
///
/// beta2 uses first differences at `(c, x)` with `c` log-uniform on
/// `[1e-2, 1e2]` and `x/c` uniform on `[0.05, 0.95]`; gamma uses second
/// differences at log-uniform `c, x` on `[1e-2, 1e4]`.
pub fn derivative_cross_check(seed: u64, points: usize) -> (f64, f64) {
    let p = EvalPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta_pts = Vec::with_capacity(points);
    let mut gamma_pts = Vec::with_capacity(points);
    for _ in 0..points {
        let c = 10f64.powf(rng.gen_range(-2.0..2.0));
        let x = c * rng.gen_range(0.05..0.95);
        beta_pts.push((c, x));
        let gc = 10f64.powf(rng.gen_range(-2.0..4.0));
        let gx = 10f64.powf(rng.gen_range(-2.0..4.0));
        gamma_pts.push((gc, gx));
    }
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let beta = beta_pts
        .iter()
        .map(|&(c, x)| {
            let h = FIRST_DIFF_REL_STEP * x.min(c - x);
            let (closed, _) = first_difference(|t| beta2_parts_unchecked(t, c, &p).total(), x, h);
            let (direct, _) = first_difference(|t| beta2_unchecked(c + t, c - t, 1.0, &p), x, h);
            rel(closed, direct)
        })
        .fold(0.0, f64::max);
    let gamma = gamma_pts
        .iter()
        .map(|&(c, x)| {
            let h = SECOND_DIFF_REL_STEP * x;
            let (closed, _) = second_difference(|t| gamma_parts_unchecked(t, c, &p).total(), x, h);
            let direct_f = |t: f64| {
                crate::kernels::phi_unchecked(t, c, 1.0, &p)
                    + crate::kernels::phi_unchecked(c, t, 1.0, &p)
                    + crate::kernels::phi_unchecked(c, 1.0, t, &p)
            };
            let (direct, _) = second_difference(direct_f, x, h);
            rel(closed, direct)
        })
        .fold(0.0, f64::max);
    (beta, gamma)
}

/// Named scalar inequality functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityName {
    TauAlpha,
    QAlpha,
    Tau1Beta,
    Tau2Beta,
    DU,
    Eta,
    TauReal,
    KappaPlusRhoConcave,
}

impl InequalityName {
    pub const ALL: [InequalityName; 8] = [
        InequalityName::TauAlpha,
        InequalityName::QAlpha,
        InequalityName::Tau1Beta,
        InequalityName::Tau2Beta,
        InequalityName::DU,
        InequalityName::Eta,
        InequalityName::TauReal,
        InequalityName::KappaPlusRhoConcave,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityName::TauAlpha => "tau-alpha",
            InequalityName::QAlpha => "q-alpha",
            InequalityName::Tau1Beta => "tau1-beta",
            InequalityName::Tau2Beta => "tau2-beta",
            InequalityName::DU => "d-u",
            InequalityName::Eta => "eta",
            InequalityName::TauReal => "tau-real",
            InequalityName::KappaPlusRhoConcave => "kappa-plus-rho-concave",
        }
    }

    pub fn function(self) -> fn(f64) -> f64 {
        use functions::*;
        match self {
            InequalityName::TauAlpha => tau_alpha,
            InequalityName::QAlpha => q_alpha,
            InequalityName::Tau1Beta => tau1_beta,
            InequalityName::Tau2Beta => tau2_beta,
            InequalityName::DU => d_u,
            InequalityName::Eta => eta,
            InequalityName::TauReal => tau_real,
            InequalityName::KappaPlusRhoConcave => kappa_plus_rho,
        }
    }
}

impl std::str::FromStr for InequalityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InequalityName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown inequality '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedSign {
    Positive,
    NonNegative,
    Negative,
    Decreasing,
    Concave,
}

/// A named function, the interval it is claimed on and the claimed sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalitySpec {
    pub name: InequalityName,
    pub domain: (f64, f64),
    pub expected: ExpectedSign,
    pub collar: f64,
}

impl InequalitySpec {
    /// Stated sign on a desk-scale domain. `tau-alpha` is claimed
    /// decreasing only on `(0, 1)`; everything else on the half-line, here
    /// truncated to `[1e-3, 1e3]`.
    pub fn standard(name: InequalityName) -> Self {
        let (domain, expected) = match name {
            InequalityName::TauAlpha => ((1e-3, 1.0), ExpectedSign::Decreasing),
            InequalityName::QAlpha => ((1e-3, 1e3), ExpectedSign::NonNegative),
            InequalityName::Tau1Beta | InequalityName::Tau2Beta => ((1e-3, 1e3), ExpectedSign::Concave),
            InequalityName::DU | InequalityName::Eta => ((1e-3, 1e3), ExpectedSign::Positive),
            InequalityName::TauReal => ((1e-3, 1e3), ExpectedSign::Negative),
            InequalityName::KappaPlusRhoConcave => ((1e-3, 1e3), ExpectedSign::Concave),
        };
        Self {
            name,
            domain,
            expected,
            collar: COLLAR,
        }
    }

    /// Log grid on the domain with the collar around 1 removed.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        log_grid(self.domain.0, self.domain.1, points)
            .into_iter()
            .filter(|c| (c - 1.0).abs() >= self.collar)
            .collect()
    }
}

/// Checks the claimed sign of `spec` at every grid point.
pub fn check_inequality(spec: &InequalitySpec, grid: &[f64]) -> SweepReport {
    let f = spec.name.function();
    let res: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&c| match spec.expected {
            ExpectedSign::Positive | ExpectedSign::NonNegative => {
                let v = f(c);
                (v, v, v)
            }
            ExpectedSign::Negative => {
                let v = f(c);
                (v, -v, v)
            }
            ExpectedSign::Decreasing => {
                let h = FIRST_DIFF_REL_STEP * c;
                let (diff, v) = first_difference(f, c, h);
                (diff / (2.0 * h), -diff, v)
            }
            ExpectedSign::Concave => {
                let h = SECOND_DIFF_REL_STEP * c;
                let (diff, v) = second_difference(f, c, h);
                (diff / (h * h), -diff, v)
            }
        })
        .collect();
    let mut b = ReportBuilder::new(
        format!(
            "{} is {:?} on [{}, {}] ({} points, collar {} around 1)",
            spec.name.as_str(),
            spec.expected,
            spec.domain.0,
            spec.domain.1,
            grid.len(),
            spec.collar
        ),
        ClaimClass::Proven,
        &["c"],
    );
    for (&c, &(value, slack, scale)) in grid.iter().zip(&res) {
        let slack = match spec.expected {
            // Equality is allowed; shift ties to the passing side.
            ExpectedSign::NonNegative => slack + STRICT_TOL * (1.0 + scale.abs()),
            _ => slack,
        };
        b.push(vec![c], value, slack, scale);
    }
    b.finish()
}

/// Parameters of a seeded counterexample search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub samples: usize,
    pub grid_points: usize,
    /// When set, `lam_l = lam_k / ratio`.
    pub ratio: Option<f64>,
    /// Stop after the chunk in which this many violating samples were seen.
    pub max_violations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            samples: 100_000,
            grid_points: 21,
            ratio: None,
            max_violations: 10,
        }
    }
}

const SEARCH_CHUNK: usize = 4096;

/// Seeded search for a decreasing step of a named pair-sum.
///
/// Each sample draws `a > b` and `lam_k`, `lam_l` uniformly from `(0, 1)`
/// (or sets `lam_l = lam_k / ratio`) and walks a uniform grid of
/// `grid_points` values of `x` on `[0, (a-b)/2]`. One row per sample holds
/// its worst step; `location` is `(sample, a, b, lam_k, lam_l, x)`.
pub fn find_counterexample(name: SubtermName, cfg: &SearchConfig) -> Result<SweepReport> {
    if cfg.grid_points < 2 {
        return Err(Error::Usage("need at least two grid points".into()));
    }
    if let Some(r) = cfg.ratio {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Usage(format!("ratio {r} must be positive")));
        }
    }
    let p = EvalPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut params = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let (mut a, mut b): (f64, f64) = (rng.gen(), rng.gen());
        if a < b {
            std::mem::swap(&mut a, &mut b);
        }
        let k: f64 = rng.gen();
        let l: f64 = rng.gen();
        let l = cfg.ratio.map_or(l, |r| k / r);
        params.push((a, b, k, l));
    }
    let ratio_txt = cfg.ratio.map_or(String::new(), |r| format!(", lam_k/lam_l = {r}"));
    let mut builder = ReportBuilder::new(
        format!(
            "search for a decreasing step of {name} over {} samples x {} grid points{ratio_txt}",
            cfg.samples, cfg.grid_points
        ),
        subterm_claim(name),
        &["sample", "a", "b", "lam_k", "lam_l", "x"],
    )
    .seed(cfg.seed);
    let mut searched = 0usize;
    let mut violating_samples = 0usize;
    for (chunk_idx, chunk) in params.chunks(SEARCH_CHUNK).enumerate() {
        let worst: Vec<(usize, f64, f64, f64)> = chunk
            .par_iter()
            .map(|&(a, b, k, l)| worst_step(name, a, b, k, l, cfg.grid_points, &p))
            .collect();
        for (i, (&(a, b, k, l), &(step, x, value, slack_scale))) in chunk.iter().zip(&worst).enumerate() {
            let idx = chunk_idx * SEARCH_CHUNK + i;
            let _ = step;
            let (slack, scale) = (value, slack_scale);
            let margin = builder.push(vec![idx as f64, a, b, k, l, x], slack, slack, scale);
            if margin < 0.0 {
                violating_samples += 1;
            }
        }
        searched += chunk.len();
        if violating_samples >= cfg.max_violations.max(1) {
            break;
        }
    }
    builder.diagnostic("samples_searched", searched as f64);
    builder.diagnostic("violating_samples", violating_samples as f64);
    Ok(builder.finish())
}

// Worst (most negative) successive difference of the pair-sum on the grid:
// returns (step index, x at the step's right end, difference, value there).
fn worst_step(name: SubtermName, a: f64, b: f64, k: f64, l: f64, points: usize, p: &EvalPolicy) -> (usize, f64, f64, f64) {
    let half = 0.5 * (a - b);
    let mut prev = subterm_unchecked(name, a, b, k, l, p);
    let mut best = (0usize, 0.0, f64::INFINITY, prev);
    let mut best_margin = f64::INFINITY;
    for i in 1..points {
        let x = half * (i as f64 / (points - 1) as f64);
        let v = subterm_unchecked(name, a - x, b + x, k, l, p);
        let diff = v - prev;
        let margin = diff + STRICT_TOL * (1.0 + prev.abs());
        if margin < best_margin {
            best_margin = margin;
            best = (i, x, diff, prev);
        }
        prev = v;
    }
    best
}

/// Searches `gamma-star` at each ratio in turn; returns
/// `(ratio, violating samples, min margin)` per ratio.
pub fn scan_gamma_star(ratios: &[f64], base: &SearchConfig) -> Result<Vec<(f64, usize, f64)>> {
    ratios
        .iter()
        .map(|&r| {
            let cfg = SearchConfig { ratio: Some(r), ..*base };
            let rep = find_counterexample(SubtermName::GammaStar, &cfg)?;
            Ok((r, rep.violation_count, rep.min_margin.unwrap_or(f64::INFINITY)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = log_grid(1e-2, 1e2, 5);
        assert!((g[2] - 1.0).abs() < 1e-15 && (g[4] - 100.0).abs() < 1e-12);
        assert_eq!(linear_grid(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn term_parsing_and_claims() {
        assert_eq!("alpha".parse::<Term>().unwrap(), Term::Alpha);
        assert_eq!("gamma-star".parse::<Term>().unwrap(), Term::Subterm(SubtermName::GammaStar));
        assert_eq!(Term::Subterm(SubtermName::Beta1Cross).claim(), ClaimClass::Disproven);
        assert!("bogus".parse::<Term>().is_err());
    }

    #[test]
    fn task_validation() {
        assert!(GroupedTermTask::uniform(Term::Alpha, 0.1, 0.7, None, None, 10).is_err());
        assert!(GroupedTermTask::uniform(Term::Beta1, 0.7, 0.1, None, None, 10).is_err());
        assert!(GroupedTermTask::new(Term::Alpha, 0.7, 0.1, None, None, vec![0.0, 0.5]).is_err());
    }

    #[test]
    fn proven_terms_are_monotone() {
        let t = GroupedTermTask::uniform(Term::Alpha, 0.7, 0.1, None, None, 1000).unwrap();
        let r = check_term_monotonicity(&t);
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.violations.first());
        let t = GroupedTermTask::uniform(Term::Beta1, 0.5, 0.2, Some(0.3), None, 200).unwrap();
        assert!(check_term_monotonicity(&t).matches_claim());
        let t = GroupedTermTask::uniform(Term::VPair, 0.8, 0.2, None, None, 200).unwrap();
        assert!(check_term_monotonicity(&t).matches_claim());
    }

    #[test]
    fn qubit_conjecture_has_no_violations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = check_conjecture(2, 50, &mut rng, 5).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = check_conjecture(3, 10, &mut rng, 0).unwrap();
        assert_eq!((r.points_checked, r.verdict), (0, Verdict::Pass));
    }

    #[test]
    fn search_is_reproducible() {
        let cfg = SearchConfig {
            samples: 500,
            ..SearchConfig::default()
        };
        let a = find_counterexample(SubtermName::Beta1Cross, &cfg).unwrap();
        let b = find_counterexample(SubtermName::Beta1Cross, &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.matches_claim());
    }

    #[test]
    fn inequality_parsing() {
        for n in InequalityName::ALL {
            assert_eq!(n.as_str().parse::<InequalityName>().unwrap(), n);
        }
    }
}
