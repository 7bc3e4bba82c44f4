//! Finite-difference oracles for the metric and the scalar curvature.
//!
//! `metric_fd` recovers the Kubo-Mori metric from the relative entropy and
//! `scal_fd` computes the scalar curvature intrinsically from metric values
//! in a linear chart, with no use of the closed formulas.
//!
//! Two chart kinds are provided. `StateSpace` charts move inside the
//! trace-one slice. `Cone` charts add the radial direction `D` itself and so
//! live in the full cone of positive definite matrices; the closed formula
//! `curvature::scal` agrees with the cone curvature, and the slice curvature
//! exceeds it by `curvature::slice_offset`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{state_space_dim, KuboMoriAt};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::states::{relative_entropy_pd, unit, DensityMatrix, TangentVector};

/// Largest chart dimension accepted by `scal_fd`. Admits the complex
/// three-level cone (9 directions); the cost grows like `dim^2` metric
/// evaluations plus a `dim^4` contraction.
pub const MAX_CHART_DIM: usize = 9;
/// Metric condition number above which `scal_fd` gives up.
pub const MAX_CONDITION: f64 = 1e12;
pub const DEFAULT_CURVATURE_STEP: f64 = 1e-3;
pub const DEFAULT_METRIC_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    StateSpace,
    Cone,
}

/// Linear chart `theta -> D + sum theta_i dir_i`.
#[derive(Debug, Clone)]
pub struct Chart {
    base: DensityMatrix,
    directions: Vec<TangentVector>,
    step: f64,
    kind: ChartKind,
    real: bool,
}

impl Chart {
    /// Validates direction count, tracelessness and positivity of the whole
    /// finite-difference stencil.
    pub fn new(
        base: DensityMatrix,
        directions: Vec<TangentVector>,
        step: f64,
        kind: ChartKind,
        real: bool,
    ) -> Result<Self> {
        let n = base.dim();
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Usage(format!("step = {step} must be positive")));
        }
        if real && !base.is_real() {
            return Err(Error::Usage("real chart needs a real base point".into()));
        }
        let slice = state_space_dim(n, real);
        let want = match kind {
            ChartKind::StateSpace => slice,
            ChartKind::Cone => slice + 1,
        };
        if directions.len() != want {
            return Err(Error::Usage(format!(
                "{kind:?} chart at n = {n} needs {want} directions, got {}",
                directions.len()
            )));
        }
        if directions.iter().any(|d| d.dim() != n) {
            return Err(Error::Usage("direction dimension does not match the base point".into()));
        }
        let traceless = directions.iter().filter(|d| d.matrix().trace().norm() <= 1e-12).count();
        let need = match kind {
            ChartKind::StateSpace => want,
            ChartKind::Cone => want - 1,
        };
        if traceless < need {
            return Err(Error::Usage(format!(
                "{kind:?} chart needs at least {need} traceless directions, got {traceless}"
            )));
        }
        if real && directions.iter().any(|d| d.matrix().max_abs_imag() != 0.0) {
            return Err(Error::Usage("real chart directions must be real".into()));
        }
        let chart = Self {
            base,
            directions,
            step,
            kind,
            real,
        };
        for theta in chart.stencil() {
            let (vals, _) = chart.point(&theta).eigh()?;
            if vals.last().copied().unwrap_or(0.0) <= 0.0 {
                return Err(Error::Boundary("stencil point leaves the positive cone".into()));
            }
        }
        Ok(chart)
    }

    /// Default directions: the matrix-unit basis rotated into the eigenbasis
    /// of `base`, with consecutive diagonal differences in place of the
    /// diagonal units, orthonormalised for the metric at `base`.
    pub fn state_space(base: DensityMatrix, real: bool, step: f64) -> Result<Self> {
        let dirs = default_directions(&base, real, false)?;
        Self::new(base, dirs, step, ChartKind::StateSpace, real)
    }

    /// `state_space` directions plus the radial direction `base` itself.
    pub fn cone(base: DensityMatrix, real: bool, step: f64) -> Result<Self> {
        let dirs = default_directions(&base, real, true)?;
        Self::new(base, dirs, step, ChartKind::Cone, real)
    }

    pub fn base(&self) -> &DensityMatrix {
        &self.base
    }

    pub fn directions(&self) -> &[TangentVector] {
        &self.directions
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    /// Same chart with directions replaced by `sum_j mix[i][j] dir_j`.
    pub fn recombined(&self, mix: &[Vec<f64>]) -> Result<Self> {
        let d = self.dimension();
        if mix.len() != d || mix.iter().any(|r| r.len() != d) {
            return Err(Error::Usage("mixing matrix has the wrong shape".into()));
        }
        let n = self.base.dim();
        let mut dirs = Vec::with_capacity(d);
        for row in mix {
            let mut m = CMatrix::zeros(n);
            for (c, dir) in row.iter().zip(&self.directions) {
                m = m.axpy(*c, dir.matrix());
            }
            let m = m.add(&m.adjoint()).scale(0.5);
            let traceless = m.trace().norm() <= 1e-12;
            dirs.push(TangentVector::new(m, traceless)?);
        }
        Self::new(self.base.clone(), dirs, self.step, self.kind, self.real)
    }

    fn point(&self, theta: &[f64]) -> CMatrix {
        let mut m = self.base.matrix().clone();
        for (t, d) in theta.iter().zip(&self.directions) {
            if *t != 0.0 {
                m = m.axpy(*t, d.matrix());
            }
        }
        m
    }

    fn stencil(&self) -> Vec<Vec<f64>> {
        let d = self.dimension();
        let h = self.step;
        let mut pts = vec![vec![0.0; d]];
        for a in 0..d {
            for s in [h, -h] {
                let mut t = vec![0.0; d];
                t[a] = s;
                pts.push(t);
            }
        }
        for a in 0..d {
            for b in (a + 1)..d {
                for (sa, sb) in [(h, h), (h, -h), (-h, h), (-h, -h)] {
                    let mut t = vec![0.0; d];
                    t[a] = sa;
                    t[b] = sb;
                    pts.push(t);
                }
            }
        }
        pts
    }

    /// Metric coefficients `g_ab(theta)` as a row-major `d x d` array.
    pub fn metric_at(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let km = KuboMoriAt::new(&self.point(theta))?;
        let rot: Vec<CMatrix> = self.directions.iter().map(|d| km.rotate(d.matrix())).collect();
        let d = self.dimension();
        let mut g = vec![0.0; d * d];
        for a in 0..d {
            for b in a..d {
                let v = km.inner_rotated(&rot[a], &rot[b]);
                g[a * d + b] = v;
                g[b * d + a] = v;
            }
        }
        Ok(g)
    }
}

fn default_directions(base: &DensityMatrix, real: bool, radial: bool) -> Result<Vec<TangentVector>> {
    let n = base.dim();
    let (_, u) = base.matrix().eigh()?;
    let ua = u.adjoint();
    let rot = |m: &CMatrix| {
        let r = u.matmul(m).matmul(&ua);
        let r = r.add(&r.adjoint()).scale(0.5);
        if real {
            CMatrix::from_fn(n, |i, j| Complex64::new(r[(i, j)].re, 0.0))
        } else {
            r
        }
    };
    let one = Complex64::new(1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);
    let mut raw = Vec::new();
    for k in 0..n {
        for l in (k + 1)..n {
            raw.push(rot(&unit(n, k, l, one).add(&unit(n, l, k, one))));
        }
    }
    if !real {
        for k in 0..n {
            for l in (k + 1)..n {
                raw.push(rot(&unit(n, k, l, im).add(&unit(n, l, k, -im))));
            }
        }
    }
    for k in 0..n.saturating_sub(1) {
        raw.push(rot(&unit(n, k, k, one).sub(&unit(n, k + 1, k + 1, one))));
    }

    let km = KuboMoriAt::new(base.matrix())?;
    let mut ortho: Vec<CMatrix> = Vec::with_capacity(raw.len() + 1);
    for m in raw {
        let mut v = m;
        for e in &ortho {
            let c = km.inner(&v, e)?;
            v = v.axpy(-c, e);
        }
        let norm = km.inner(&v, &v)?.sqrt();
        ortho.push(v.scale(1.0 / norm));
    }
    let mut out: Vec<TangentVector> = ortho
        .into_iter()
        .map(|m| {
            let tr = m.trace();
            // remove rounding-level trace
            let fix = CMatrix::identity(n).scale(tr.re / n as f64);
            TangentVector::new(m.sub(&fix), true)
        })
        .collect::<Result<_>>()?;
    if radial {
        // G_D(D, X) = Tr X = 0 and G_D(D, D) = Tr D = 1, so D is already a
        // unit normal to the slice.
        out.push(TangentVector::new(base.matrix().clone(), false)?);
    }
    Ok(out)
}

/// Minus the central mixed second difference of the relative entropy
/// `S(D + tX, D + sY)` at `t = s = 0`.
///
/// The mixed partial of `S` itself equals `-G_D(X, Y)`: only the
/// `-Tr P log Q` part of `S(P, Q)` depends on both arguments. The sign is
/// flipped here so the result approximates the metric.
pub fn metric_fd(d: &DensityMatrix, x: &TangentVector, y: &TangentVector, h: f64) -> Result<f64> {
    if x.dim() != d.dim() || y.dim() != d.dim() {
        return Err(Error::Usage("dimension mismatch".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Usage(format!("h = {h} must be positive")));
    }
    let dm = d.matrix();
    let p = |s: f64| dm.axpy(s * h, x.matrix());
    let q = |s: f64| dm.axpy(s * h, y.matrix());
    let mut vals = [0.0; 4];
    for (slot, (sp, sq)) in vals.iter_mut().zip([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]) {
        *slot = relative_entropy_pd(&p(sp), &q(sq)).map_err(|e| match e {
            Error::Boundary(m) => Error::Boundary(format!("stencil leaves the positive cone: {m}")),
            other => other,
        })?;
    }
    Ok(-(vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h * h))
}

/// One Richardson step on `metric_fd`: `(4 M(h) - M(2h)) / 3`.
pub fn metric_fd_richardson(d: &DensityMatrix, x: &TangentVector, y: &TangentVector, h: f64) -> Result<f64> {
    let fine = metric_fd(d, x, y, h)?;
    let coarse = metric_fd(d, x, y, 2.0 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Scalar curvature at the chart origin from finite differences of the
/// metric.
pub fn scal_fd(chart: &Chart) -> Result<f64> {
    let d = chart.dimension();
    if d > MAX_CHART_DIM {
        return Err(Error::Usage(format!(
            "chart dimension {d} exceeds the limit {MAX_CHART_DIM}"
        )));
    }
    let pts = chart.stencil();
    let metrics: Vec<Vec<f64>> = pts
        .par_iter()
        .map(|t| chart.metric_at(t))
        .collect::<Result<_>>()?;
    let h = chart.step();
    let g0 = &metrics[0];
    let dd = d * d;

    // first derivatives: dg[c][a*d+b]
    let mut dg = vec![vec![0.0; dd]; d];
    // second derivatives: ddg[c*d+e][a*d+b]
    let mut ddg = vec![vec![0.0; dd]; dd];
    for c in 0..d {
        let plus = &metrics[1 + 2 * c];
        let minus = &metrics[2 + 2 * c];
        for ab in 0..dd {
            dg[c][ab] = (plus[ab] - minus[ab]) / (2.0 * h);
            ddg[c * d + c][ab] = (plus[ab] - 2.0 * g0[ab] + minus[ab]) / (h * h);
        }
    }
    let mut idx = 1 + 2 * d;
    for c in 0..d {
        for e in (c + 1)..d {
            let (pp, pm, mp, mm) = (&metrics[idx], &metrics[idx + 1], &metrics[idx + 2], &metrics[idx + 3]);
            idx += 4;
            for ab in 0..dd {
                let v = (pp[ab] - pm[ab] - mp[ab] + mm[ab]) / (4.0 * h * h);
                ddg[c * d + e][ab] = v;
                ddg[e * d + c][ab] = v;
            }
        }
    }
    scalar_curvature_from_jets(d, g0, &dg, &ddg)
}

/// Scalar curvature from the metric and its first and second partial
/// derivatives at a point.
///
/// `g` is `d x d` row-major, `dg[c]` holds `d_c g` and `ddg[c*d+e]` holds
/// `d_c d_e g`. Uses
/// `R_abcd = 1/2 (g_ad,bc + g_bc,ad - g_ac,bd - g_bd,ac)
///           + g_ef (G^e_bc G^f_ad - G^e_bd G^f_ac)`
/// and `R = g^ac g^bd R_abcd`, the convention in which the unit 2-sphere
/// has `R = 2`.
pub fn scalar_curvature_from_jets(d: usize, g: &[f64], dg: &[Vec<f64>], ddg: &[Vec<f64>]) -> Result<f64> {
    let cond = condition_number(d, g)?;
    if cond > MAX_CONDITION {
        return Err(Error::Numerical(format!("metric condition number {cond:e} exceeds {MAX_CONDITION:e}")));
    }
    let ginv = invert(d, g)?;
    let gi = |a: usize, b: usize| ginv[a * d + b];
    let dgf = |c: usize, a: usize, b: usize| dg[c][a * d + b];
    let ddgf = |c: usize, e: usize, a: usize, b: usize| ddg[c * d + e][a * d + b];

    // Christoffel symbols of the first kind: low[f][b][c] = G_{f,bc}
    let mut low = vec![0.0; d * d * d];
    for f in 0..d {
        for b in 0..d {
            for c in 0..d {
                low[(f * d + b) * d + c] = 0.5 * (dgf(b, f, c) + dgf(c, f, b) - dgf(f, b, c));
            }
        }
    }
    // second kind: up[e][b][c] = g^{ef} G_{f,bc}
    let mut up = vec![0.0; d * d * d];
    for e in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut s = 0.0;
                for f in 0..d {
                    s += gi(e, f) * low[(f * d + b) * d + c];
                }
                up[(e * d + b) * d + c] = s;
            }
        }
    }
    let low_at = |e: usize, b: usize, c: usize| low[(e * d + b) * d + c];
    let up_at = |e: usize, b: usize, c: usize| up[(e * d + b) * d + c];

    let mut scal = 0.0;
    for a in 0..d {
        for c in 0..d {
            let gac = gi(a, c);
            if gac == 0.0 {
                continue;
            }
            for b in 0..d {
                for dd in 0..d {
                    let gbd = gi(b, dd);
                    if gbd == 0.0 {
                        continue;
                    }
                    let second = 0.5
                        * (ddgf(b, c, a, dd) + ddgf(a, dd, b, c) - ddgf(b, dd, a, c) - ddgf(a, c, b, dd));
                    let mut quad = 0.0;
                    for e in 0..d {
                        // g_ef G^e_bc G^f_ad = G^e_bc G_{e,ad}
                        quad += up_at(e, b, c) * low_at(e, a, dd) - up_at(e, b, dd) * low_at(e, a, c);
                    }
                    scal += gac * gbd * (second + quad);
                }
            }
        }
    }
    Ok(scal)
}

/// Scalar curvature of an arbitrary metric `theta -> g(theta)` at the origin,
/// using the same stencil as `scal_fd`.
pub fn scalar_curvature_fd<F>(d: usize, h: f64, metric: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    let zero = vec![0.0; d];
    let g0 = metric(&zero)?;
    let dd = d * d;
    let at = |a: usize, sa: f64, b: Option<(usize, f64)>| {
        let mut t = zero.clone();
        t[a] += sa;
        if let Some((b, sb)) = b {
            t[b] += sb;
        }
        metric(&t)
    };
    let mut dg = vec![vec![0.0; dd]; d];
    let mut ddg = vec![vec![0.0; dd]; dd];
    for c in 0..d {
        let plus = at(c, h, None)?;
        let minus = at(c, -h, None)?;
        for ab in 0..dd {
            dg[c][ab] = (plus[ab] - minus[ab]) / (2.0 * h);
            ddg[c * d + c][ab] = (plus[ab] - 2.0 * g0[ab] + minus[ab]) / (h * h);
        }
        for e in (c + 1)..d {
            let pp = at(c, h, Some((e, h)))?;
            let pm = at(c, h, Some((e, -h)))?;
            let mp = at(c, -h, Some((e, h)))?;
            let mm = at(c, -h, Some((e, -h)))?;
            for ab in 0..dd {
                let v = (pp[ab] - pm[ab] - mp[ab] + mm[ab]) / (4.0 * h * h);
                ddg[c * d + e][ab] = v;
                ddg[e * d + c][ab] = v;
            }
        }
    }
    scalar_curvature_from_jets(d, &g0, &dg, &ddg)
}

fn condition_number(d: usize, g: &[f64]) -> Result<f64> {
    let m = CMatrix::from_fn(d, |i, j| Complex64::new(g[i * d + j], 0.0));
    let (vals, _) = m.eigh()?;
    let max = vals[0];
    let min = vals[d - 1];
    if min <= 0.0 {
        return Err(Error::Numerical(format!("metric is not positive definite (min eigenvalue {min:e})")));
    }
    Ok(max / min)
}

/// Gauss-Jordan inverse with partial pivoting.
fn invert(d: usize, g: &[f64]) -> Result<Vec<f64>> {
    let mut a = g.to_vec();
    let mut inv = vec![0.0; d * d];
    for i in 0..d {
        inv[i * d + i] = 1.0;
    }
    for col in 0..d {
        let piv = (col..d)
            .max_by(|&i, &j| a[i * d + col].abs().partial_cmp(&a[j * d + col].abs()).unwrap())
            .unwrap();
        if a[piv * d + col] == 0.0 {
            return Err(Error::Numerical("singular metric".into()));
        }
        if piv != col {
            for k in 0..d {
                a.swap(piv * d + k, col * d + k);
                inv.swap(piv * d + k, col * d + k);
            }
        }
        let p = a[col * d + col];
        for k in 0..d {
            a[col * d + k] /= p;
            inv[col * d + k] /= p;
        }
        for r in 0..d {
            if r != col {
                let f = a[r * d + col];
                if f != 0.0 {
                    for k in 0..d {
                        a[r * d + k] -= f * a[col * d + k];
                        inv[r * d + k] -= f * inv[col * d + k];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Least-squares slope of `log err` against `log h`.
pub fn loglog_slope(hs: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
