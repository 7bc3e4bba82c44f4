//! Kubo-Mori metric, scalar curvature formulas and their summand groups.
//!
//! `scal` is the sum of `phi` over index triples that are not all equal and
//! `scal_real` adds the `v` correction over all index pairs. As checked by
//! the intrinsic oracle in [`crate::oracle`], `scal` is the scalar curvature
//! of the full positive cone at a trace-one point; the trace-one slice
//! differs by the constant [`slice_offset`].

pub(crate) mod closed;
pub(crate) mod terms;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{m2_unchecked, phi_unchecked, v_unchecked, EvalPolicy};
use crate::linalg::CMatrix;
use crate::states::{eigh_checked, unit, DensityMatrix, Spectrum, TangentVector};

pub use closed::{
    beta2_closed, beta2_direct, beta2_parts, gamma_closed, gamma_closed_pair, gamma_direct,
    gamma_parts, t_beta, Beta2Parts, GammaParts,
};
pub use terms::{
    alpha, beta1, beta2, gamma, gamma_star, subterm, subterm_with, v_cross, v_pair, SubtermName,
};

/// Spectra at least this long are summed in parallel.
const PARALLEL_MIN_N: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    FOffdiag,
    HOffdiag,
    FDiag,
}

/// `F_kl = E_kl + E_lk` (so `F_kk = 2 E_kk`) or `H_kl = i E_kl - i E_lk`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisElement {
    pub kind: BasisKind,
    pub k: usize,
    pub l: usize,
    pub matrix: TangentVector,
}

/// Matrix-unit basis of the self-adjoint matrices: all `F_kl` with `k < l`,
/// then all `H_kl` (omitted when `real_only`), then the diagonal `F_kk`.
pub fn basis(n: usize, real_only: bool) -> Vec<BasisElement> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(n * n);
    let mut push = |kind, k, l, m: CMatrix| {
        let matrix = TangentVector::new(m, false).expect("basis elements are self-adjoint");
        out.push(BasisElement { kind, k, l, matrix });
    };
    for k in 0..n {
        for l in (k + 1)..n {
            push(BasisKind::FOffdiag, k, l, unit(n, k, l, one).add(&unit(n, l, k, one)));
        }
    }
    if !real_only {
        for k in 0..n {
            for l in (k + 1)..n {
                push(BasisKind::HOffdiag, k, l, unit(n, k, l, i).add(&unit(n, l, k, -i)));
            }
        }
    }
    for k in 0..n {
        push(BasisKind::FDiag, k, k, unit(n, k, k, one.scale(2.0)));
    }
    out
}

/// Kubo-Mori inner products at a fixed positive definite point.
///
/// The point need not have unit trace, which the cone chart of the oracle
/// relies on.
#[derive(Debug, Clone)]
pub struct KuboMoriAt {
    u: CMatrix,
    u_adj: CMatrix,
    kernel: Vec<f64>,
    n: usize,
}

impl KuboMoriAt {
    pub fn new(point: &CMatrix) -> Result<Self> {
        let (vals, u) = eigh_checked(point)?;
        if let Some(&min) = vals.last() {
            if min <= 0.0 {
                return Err(Error::Boundary(format!("eigenvalue {min:e} is not positive")));
            }
        }
        let n = vals.len();
        let p = EvalPolicy::default();
        let mut kernel = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                kernel[a * n + b] = m2_unchecked(vals[a], vals[b], &p);
            }
        }
        Ok(Self {
            u_adj: u.adjoint(),
            u,
            kernel,
            n,
        })
    }

    /// `U* X U`
    pub fn rotate(&self, x: &CMatrix) -> CMatrix {
        self.u_adj.matmul(x).matmul(&self.u)
    }

    /// `G(X, Y)` for directions already expressed in the eigenbasis.
    pub fn inner_rotated(&self, xt: &CMatrix, yt: &CMatrix) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                let z = xt[(a, b)] * yt[(b, a)];
                acc += self.kernel[a * n + b] * z.re;
            }
        }
        acc
    }

    pub fn inner(&self, x: &CMatrix, y: &CMatrix) -> Result<f64> {
        if x.dim() != self.n || y.dim() != self.n {
            return Err(Error::Usage("direction dimension does not match the point".into()));
        }
        Ok(self.inner_rotated(&self.rotate(x), &self.rotate(y)))
    }
}

/// Kubo-Mori inner product `G_D(X, Y)`.
pub fn kubo_mori(d: &DensityMatrix, x: &TangentVector, y: &TangentVector) -> Result<f64> {
    if x.dim() != d.dim() || y.dim() != d.dim() {
        return Err(Error::Usage(format!(
            "dimension mismatch: state {}, directions {} and {}",
            d.dim(),
            x.dim(),
            y.dim()
        )));
    }
    KuboMoriAt::new(d.matrix())?.inner(x.matrix(), y.matrix())
}

fn phi_row(l: &[f64], j: usize, p: &EvalPolicy) -> f64 {
    let mut acc = 0.0;
    for k in 0..l.len() {
        for m in 0..l.len() {
            if j == k && k == m {
                continue;
            }
            acc += phi_unchecked(l[j], l[k], l[m], p);
        }
    }
    acc
}

/// Sum of `phi` over all index triples except the `n` all-equal ones.
pub fn scal(s: &Spectrum) -> f64 {
    scal_with(s, &EvalPolicy::default())
}

pub fn scal_with(s: &Spectrum, policy: &EvalPolicy) -> f64 {
    let l = s.values();
    let n = l.len();
    // Per-row partials summed in index order, so the parallel and serial
    // paths give identical bits.
    let rows: Vec<f64> = if n >= PARALLEL_MIN_N {
        (0..n).into_par_iter().map(|j| phi_row(l, j, policy)).collect()
    } else {
        (0..n).map(|j| phi_row(l, j, policy)).collect()
    };
    rows.iter().sum()
}

/// `sum_{k,l} v(lambda_k, lambda_l)`, optionally skipping `k = l`.
pub fn v_sum(s: &Spectrum, include_diagonal: bool) -> f64 {
    let p = EvalPolicy::default();
    let l = s.values();
    let mut acc = 0.0;
    for k in 0..l.len() {
        for m in 0..l.len() {
            if k == m && !include_diagonal {
                continue;
            }
            acc += v_unchecked(l[k], l[m], &p);
        }
    }
    acc
}

/// `scal/4 + (1/4) sum_{k,l} v`, the pair sum including `k = l`.
pub fn scal_real(s: &Spectrum) -> f64 {
    0.25 * scal(s) + 0.25 * v_sum(s, true)
}

/// Real counterpart of `scal` with the pair sum restricted to `k != l`.
///
/// This is what the intrinsic oracle measures on the real symmetric cone;
/// it differs from [`scal_real`] by `(1/4) sum_k v(lambda_k, lambda_k)`,
/// i.e. by `-n^2 / 32` at the uniform spectrum.
pub fn scal_real_offdiagonal(s: &Spectrum) -> f64 {
    0.25 * scal(s) + 0.25 * v_sum(s, false)
}

/// Dimension of the trace-one slice: `n^2 - 1` (complex) or
/// `n(n+1)/2 - 1` (real).
pub fn state_space_dim(n: usize, real: bool) -> usize {
    if real {
        n * (n + 1) / 2 - 1
    } else {
        n * n - 1
    }
}

/// `Scal(slice) - Scal(cone)` at trace-one points.
///
/// The cone metric is `dr^2 + r^2 g/4` over the slice, which shifts the
/// scalar curvature by `d(d-1)/4` with `d` the slice dimension.
pub fn slice_offset(n: usize, real: bool) -> f64 {
    let d = state_space_dim(n, real) as f64;
    d * (d - 1.0) / 4.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaEntry {
    pub k: usize,
    pub l: usize,
    pub value: f64,
}

/// Summand groups of `scal` relative to a distinguished eigenvalue pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBreakdown {
    pub pair: (usize, usize),
    pub a: f64,
    pub b: f64,
    pub degenerate_pair: bool,
    pub alpha: f64,
    pub beta1: BTreeMap<usize, f64>,
    pub beta2: BTreeMap<usize, f64>,
    pub gamma: Vec<GammaEntry>,
    pub delta_total: f64,
    pub total: f64,
}

impl CurvatureBreakdown {
    pub fn group_sum(&self) -> f64 {
        self.alpha
            + self.beta1.values().sum::<f64>()
            + self.beta2.values().sum::<f64>()
            + self.gamma.iter().map(|g| g.value).sum::<f64>()
            + self.delta_total
    }
}

/// Splits `scal(s)` around the pair `(i, j)` (0-based positions).
pub fn decompose(s: &Spectrum, i: usize, j: usize) -> Result<CurvatureBreakdown> {
    decompose_with(s, i, j, &EvalPolicy::default())
}

pub fn decompose_with(s: &Spectrum, i: usize, j: usize, p: &EvalPolicy) -> Result<CurvatureBreakdown> {
    let n = s.len();
    if i == j {
        return Err(Error::Usage("decompose needs two distinct indices".into()));
    }
    if i >= n || j >= n {
        return Err(Error::Usage(format!("index out of range for length {n}")));
    }
    let l = s.values();
    let (a, b) = (l[i], l[j]);
    let others: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();

    let alpha = terms::alpha_unchecked(a, b, p);
    let mut beta1 = BTreeMap::new();
    let mut beta2 = BTreeMap::new();
    for &k in &others {
        beta1.insert(k, terms::beta1_unchecked(a, b, l[k], p));
        beta2.insert(k, terms::beta2_unchecked(a, b, l[k], p));
    }
    let mut gamma = Vec::with_capacity(others.len() * others.len());
    for &k in &others {
        for &m in &others {
            gamma.push(GammaEntry {
                k,
                l: m,
                value: terms::gamma_unchecked(a, b, l[k], l[m], p),
            });
        }
    }
    let mut delta_total = 0.0;
    for &x in &others {
        for &y in &others {
            for &z in &others {
                if x == y && y == z {
                    continue;
                }
                delta_total += phi_unchecked(l[x], l[y], l[z], p);
            }
        }
    }
    let mut out = CurvatureBreakdown {
        pair: (i, j),
        a,
        b,
        degenerate_pair: a == b,
        alpha,
        beta1,
        beta2,
        gamma,
        delta_total,
        total: 0.0,
    };
    out.total = out.group_sum();
    Ok(out)
}
