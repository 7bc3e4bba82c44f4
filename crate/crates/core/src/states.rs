//! Spectra, density matrices, majorisation, T-transforms and Gibbs states.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Tolerance on `|sum - 1|` for spectra and traces.
pub const TRACE_TOL: f64 = 1e-12;
/// Entrywise tolerance for Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Slack allowed in prefix-sum comparisons, to absorb summation rounding.
pub const MAJORISATION_TOL: f64 = 1e-12;
/// Smallest entry accepted by `sample_spectrum`.
pub const SAMPLE_FLOOR: f64 = 1e-6;

/// Eigenvalues of an invertible density matrix, kept in descending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Spectrum::new(v).map_err(serde::de::Error::custom)
    }
}

fn sort_desc(v: &mut [f64]) {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
}

impl Spectrum {
    /// Sorts `values` descending and checks positivity and normalisation.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Usage("spectrum must be non-empty".into()));
        }
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("non-finite eigenvalue {x}")));
        }
        if let Some(x) = values.iter().find(|&&x| x <= 0.0) {
            return Err(Error::Boundary(format!("eigenvalue {x} is not strictly positive")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain(format!("eigenvalues sum to {sum}, expected 1")));
        }
        sort_desc(&mut values);
        Ok(Self { values })
    }

    /// Normalises positive weights to a spectrum.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::Domain("weights must have a positive finite sum".into()));
        }
        Self::new(weights.iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("spectrum must be non-empty".into()));
        }
        Ok(Self {
            values: vec![1.0 / n as f64; n],
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Hermitian, trace-one, strictly positive definite matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    matrix: CMatrix,
    real: bool,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Domain(format!("matrix is not Hermitian (defect {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Domain(format!("trace is {tr}, expected 1")));
        }
        let (vals, _) = matrix.eigh()?;
        let min = vals.last().copied().unwrap_or(0.0);
        if min <= 0.0 {
            return Err(Error::Boundary(format!("smallest eigenvalue {min:e} is not positive")));
        }
        let real = matrix.max_abs_imag() == 0.0;
        Ok(Self { matrix, real })
    }

    /// Diagonal density matrix with the given spectrum.
    pub fn diagonal(s: &Spectrum) -> Self {
        Self {
            matrix: CMatrix::from_real_diag(s.values()),
            real: true,
        }
    }

    /// `U diag(s) U*`.
    pub fn conjugated(s: &Spectrum, u: &CMatrix) -> Result<Self> {
        let m = crate::linalg::conjugate_diag(u, s.values());
        // Symmetrise away rounding so the Hermitian check is exact.
        let m = m.add(&m.adjoint()).scale(0.5);
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// True when every entry is real, i.e. the state lies in the real
    /// (symmetric) submanifold.
    pub fn is_real(&self) -> bool {
        self.real
    }
}

/// Self-adjoint direction, optionally flagged as tangent to the trace-one
/// slice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentVector {
    matrix: CMatrix,
    traceless: bool,
}

impl TangentVector {
    pub fn new(matrix: CMatrix, traceless: bool) -> Result<Self> {
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Domain(format!("direction is not self-adjoint (defect {defect:e})")));
        }
        if traceless && matrix.trace().norm() > TRACE_TOL {
            return Err(Error::Domain(format!(
                "direction flagged traceless has trace {}",
                matrix.trace()
            )));
        }
        Ok(Self { matrix, traceless })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_traceless(&self) -> bool {
        self.traceless
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Spectra ordered by majorisation, neighbours differing in at most two
/// sorted positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorisationChain {
    members: Vec<Spectrum>,
}

impl MajorisationChain {
    pub fn new(members: Vec<Spectrum>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Usage("chain must have at least one member".into()));
        }
        for w in members.windows(2) {
            if !majorizes(&w[0], &w[1])? {
                return Err(Error::Ordering("chain members are not ordered by majorisation".into()));
            }
            let changed = w[0]
                .values()
                .iter()
                .zip(w[1].values())
                .filter(|(a, b)| (*a - *b).abs() > MAJORISATION_TOL)
                .count();
            if changed > 2 {
                return Err(Error::Ordering(format!(
                    "consecutive chain members differ in {changed} positions"
                )));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Spectrum] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Hamiltonian spectrum together with an increasing list of inverse
/// temperatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsPath {
    hamiltonian_eigs: Vec<f64>,
    betas: Vec<f64>,
}

impl GibbsPath {
    pub fn new(hamiltonian_eigs: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if hamiltonian_eigs.is_empty() {
            return Err(Error::Usage("Hamiltonian must have at least one eigenvalue".into()));
        }
        if hamiltonian_eigs.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("Hamiltonian eigenvalues must be finite".into()));
        }
        if betas.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
            return Err(Error::Usage("inverse temperatures must be positive".into()));
        }
        if betas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("inverse temperatures must be strictly increasing".into()));
        }
        Ok(Self {
            hamiltonian_eigs,
            betas,
        })
    }

    pub fn hamiltonian_eigs(&self) -> &[f64] {
        &self.hamiltonian_eigs
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Gibbs spectra at every inverse temperature of the path.
    pub fn states(&self) -> Result<Vec<Spectrum>> {
        self.betas.iter().map(|&b| gibbs(self, b)).collect()
    }

    /// Checks that each state majorises its higher-temperature neighbour.
    pub fn is_majorisation_chain(&self) -> Result<bool> {
        let states = self.states()?;
        for w in states.windows(2) {
            if !majorizes(&w[0], &w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Descending eigenvalues of a density matrix.
pub fn eigvalsh(d: &DensityMatrix) -> Result<Spectrum> {
    let (vals, _) = d.matrix().eigh()?;
    if let Some(&min) = vals.last() {
        if min <= 0.0 {
            return Err(Error::Boundary(format!("eigenvalue {min:e} is not positive")));
        }
    }
    // The eigenvalues of a trace-one matrix sum to one up to rounding.
    let sum: f64 = vals.iter().sum();
    Spectrum::new(vals.iter().map(|v| v / sum).collect())
}

/// Eigen-decomposition of an arbitrary Hermitian matrix, with the checks
/// `eigvalsh` applies to density matrices.
pub fn eigh_checked(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::Domain(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    m.eigh()
}

/// True iff `a` is majorised by `b`, i.e. `a` is more mixed.
pub fn majorizes(a: &Spectrum, b: &Spectrum) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "spectra have different lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (mut sa, mut sb) = (0.0, 0.0);
    for (x, y) in a.values().iter().zip(b.values()) {
        sa += x;
        sb += y;
        if sa > sb + MAJORISATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mixes entries `k` and `l` with weight `t` and re-sorts.
pub fn t_transform(x: &Spectrum, k: usize, l: usize, t: f64) -> Result<Spectrum> {
    let n = x.len();
    if k == l {
        return Err(Error::Usage("T-transform needs two distinct indices".into()));
    }
    if k >= n || l >= n {
        return Err(Error::Usage(format!("index out of range for length {n}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Usage(format!("t = {t} outside [0, 1]")));
    }
    let mut v = x.values().to_vec();
    let (xk, xl) = (v[k], v[l]);
    v[k] = t * xk + (1.0 - t) * xl;
    v[l] = (1.0 - t) * xk + t * xl;
    sort_desc(&mut v);
    Ok(Spectrum { values: v })
}

/// One step of a T-transform decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TStep {
    pub k: usize,
    pub l: usize,
    pub t: f64,
}

const DECOMPOSE_EQ_TOL: f64 = 1e-15;

/// T-transforms that carry `b` to the more mixed `a`.
///
/// Working on `y = b`: take the largest index `j` with `a_j < y_j` and the
/// first index `k > j` with `a_k > y_k`, then move
/// `min(y_j - a_j, a_k - y_k)` from `y_j` to `y_k`. Each step fixes one more
/// coordinate and keeps `y` sorted, so at most `n - 1` steps are needed.
pub fn t_transform_decompose(a: &Spectrum, b: &Spectrum) -> Result<Vec<TStep>> {
    if !majorizes(a, b)? {
        return Err(Error::Ordering("first spectrum is not majorised by the second".into()));
    }
    let n = a.len();
    let av = a.values();
    let mut y = b.values().to_vec();
    let mut steps = Vec::new();
    let eq = |p: f64, q: f64| (p - q).abs() <= DECOMPOSE_EQ_TOL * p.abs().max(q.abs()).max(1.0);

    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&i| av[i] < y[i] && !eq(av[i], y[i])) else {
            break;
        };
        let Some(k) = ((j + 1)..n).find(|&i| av[i] > y[i] && !eq(av[i], y[i])) else {
            break;
        };
        let delta = (y[j] - av[j]).min(av[k] - y[k]);
        let gap = y[j] - y[k];
        let t = (1.0 - delta / gap).clamp(0.0, 1.0);
        steps.push(TStep { k: j, l: k, t });
        let (yj, yk) = (y[j], y[k]);
        y[j] = t * yj + (1.0 - t) * yk;
        y[k] = (1.0 - t) * yj + t * yk;
        // Snap the coordinate this step was meant to match.
        if (y[j] - av[j]).abs() <= (y[k] - av[k]).abs() {
            y[j] = av[j];
        } else {
            y[k] = av[k];
        }
    }
    Ok(steps)
}

/// Majorisation chain from `a` up to `b` through two-entry steps.
pub fn pair_chain(a: &Spectrum, b: &Spectrum) -> Result<MajorisationChain> {
    let steps = t_transform_decompose(a, b)?;
    let mut members = vec![b.clone()];
    for s in &steps {
        let next = t_transform(members.last().unwrap(), s.k, s.l, s.t)?;
        members.push(next);
    }
    members.reverse();
    MajorisationChain::new(members)
}

/// Gibbs spectrum `exp(-beta H) / Tr exp(-beta H)`, sorted descending.
///
/// `beta = 0` is accepted and gives the uniform spectrum.
pub fn gibbs(path: &GibbsPath, beta: f64) -> Result<Spectrum> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Usage(format!("beta = {beta} must be non-negative")));
    }
    let e = path.hamiltonian_eigs();
    let emin = e.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = e.iter().map(|&x| (-beta * (x - emin)).exp()).collect();
    let z: f64 = w.iter().sum();
    let mut v: Vec<f64> = w.iter().map(|x| x / z).collect();
    if let Some(x) = v.iter().find(|&&x| x <= 0.0) {
        return Err(Error::Boundary(format!(
            "Gibbs weight underflowed to {x} at beta = {beta}"
        )));
    }
    sort_desc(&mut v);
    Ok(Spectrum { values: v })
}

/// `-sum lambda log lambda`.
pub fn von_neumann_entropy(s: &Spectrum) -> f64 {
    -s.values().iter().map(|&x| x * x.ln()).sum::<f64>()
}

/// Matrix logarithm of a Hermitian positive definite matrix.
pub fn logm_pd(m: &CMatrix) -> Result<CMatrix> {
    let (vals, u) = eigh_checked(m)?;
    if let Some(&min) = vals.last() {
        if min <= 0.0 {
            return Err(Error::Boundary(format!("eigenvalue {min:e} is not positive")));
        }
    }
    let logs: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
    Ok(crate::linalg::conjugate_diag(&u, &logs))
}

/// `Tr A (log A - log B)` for Hermitian positive definite `A`, `B`, without
/// a trace constraint.
pub fn relative_entropy_pd(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Usage("matrices have different dimensions".into()));
    }
    let diff = logm_pd(a)?.sub(&logm_pd(b)?);
    Ok(a.trace_product_re(&diff))
}

/// Umegaki relative entropy `Tr D1 (log D1 - log D2)`.
pub fn relative_entropy(d1: &DensityMatrix, d2: &DensityMatrix) -> Result<f64> {
    relative_entropy_pd(d1.matrix(), d2.matrix())
}

/// Uniform point of the open simplex, rejecting samples with an entry
/// below `SAMPLE_FLOOR`.
pub fn sample_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::Usage("spectrum must be non-empty".into()));
    }
    if n == 1 {
        return Ok(Spectrum { values: vec![1.0] });
    }
    loop {
        let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let sum: f64 = w.iter().sum();
        let mut v: Vec<f64> = w.iter().map(|x| x / sum).collect();
        if v.iter().any(|&x| x < SAMPLE_FLOOR) {
            continue;
        }
        sort_desc(&mut v);
        return Ok(Spectrum { values: v });
    }
}

/// `E_kl` as a complex matrix.
pub(crate) fn unit(n: usize, k: usize, l: usize, z: Complex64) -> CMatrix {
    let mut m = CMatrix::zeros(n);
    m[(k, l)] = z;
    m
}
