//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's kernels.
#![allow(dead_code)]

use km_core::Spectrum;
use rand::Rng;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

pub struct Quadrature {
    rule: Vec<(f64, f64)>,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { rule: gauss_legendre(10) }
    }
}

impl Quadrature {
    fn panel(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
        r * self.rule.iter().map(|&(x, w)| w * f(m + r * x)).sum::<f64>()
    }

    /// Adaptive bisection: a panel is accepted when it agrees with the sum
    /// of its halves to `abs_tol`.
    pub fn integrate(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
        let mut stack = vec![(a, b, self.panel(f, a, b), 0u32)];
        let mut total = 0.0;
        while let Some((lo, hi, whole, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let left = self.panel(f, lo, mid);
            let right = self.panel(f, mid, hi);
            if (left + right - whole).abs() <= abs_tol || depth > 40 {
                total += left + right;
            } else {
                stack.push((lo, mid, left, depth + 1));
                stack.push((mid, hi, right, depth + 1));
            }
        }
        total
    }

    /// `int_0^inf prod_i 1/(t + x_i) dt` after `t = e^s`. With two points this
    /// is the first divided difference of log; with three, minus the second.
    pub fn resolvent_integral(&self, xs: &[f64]) -> f64 {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(0.0, f64::max);
        let f = |s: f64| {
            let t = s.exp();
            t / xs.iter().map(|x| t + x).product::<f64>()
        };
        // Panels of unit width in s; a coarse pass sets the tolerance for
        // the adaptive one.
        let (a, b) = (lo.ln() - 40.0, hi.ln() + 40.0);
        let panels = (b - a).ceil() as usize;
        let w = (b - a) / panels as f64;
        let edges = |i: usize| (a + i as f64 * w, a + (i + 1) as f64 * w);
        let coarse: f64 = (0..panels).map(|i| {
            let (l, r) = edges(i);
            self.panel(&f, l, r)
        }).sum();
        let tol = 1e-14 * coarse.abs() / panels as f64;
        (0..panels)
            .map(|i| {
                let (l, r) = edges(i);
                self.integrate(&f, l, r, tol)
            })
            .sum()
    }
}

/// `phi` straight from the divided-difference formulas in extended form,
/// with the second divided differences taken from quadrature.
pub fn phi_quadrature(q: &Quadrature, x: f64, y: f64, z: f64) -> f64 {
    let m2 = |a: f64, b: f64| q.resolvent_integral(&[a, b]);
    let m3 = |a: f64, b: f64, c: f64| q.resolvent_integral(&[a, b, c]);
    0.5 * m3(x, y, z).powi(2) / (m2(x, y) * m2(y, z) * m2(z, x))
        - m3(y, y, x) * m3(y, y, z) / (m2(y, x) * m2(y, y) * m2(y, z))
}

/// Textbook closed-form kernels, used only away from coincidences.
pub mod naive {
    pub fn m2(x: f64, y: f64) -> f64 {
        if x == y {
            1.0 / x
        } else {
            (x.ln() - y.ln()) / (x - y)
        }
    }

    pub fn m3(x: f64, y: f64, z: f64) -> f64 {
        if x == y && y == z {
            return 0.5 / (x * x);
        }
        // Order so the divided difference never divides by zero.
        let mut v = [x, y, z];
        v.sort_by(f64::total_cmp);
        let [a, b, c] = v;
        if a == c {
            0.5 / (a * a)
        } else if a == b {
            (m2(a, c) - 1.0 / a) / (a - c)
        } else {
            (m2(b, c) - m2(a, c)) / (a - b)
        }
    }

    pub fn phi(x: f64, y: f64, z: f64) -> f64 {
        let (a, b) = phi_terms(x, y, z);
        a - b
    }

    pub fn v(x: f64, y: f64) -> f64 {
        let (a, b) = v_terms(x, y);
        a - b
    }

    /// The two terms whose difference is `v`.
    pub fn v_terms(x: f64, y: f64) -> (f64, f64) {
        let mm = m2(x, y).powi(2);
        (
            0.5 * m3(x, x, y).powi(2) / (mm * m2(x, x)),
            m3(x, x, y) * m3(y, y, x) / (mm * m2(y, y)),
        )
    }

    /// The two terms whose difference is `phi`.
    pub fn phi_terms(x: f64, y: f64, z: f64) -> (f64, f64) {
        (
            0.5 * m3(x, y, z).powi(2) / (m2(x, y) * m2(y, z) * m2(z, x)),
            m3(y, y, x) * m3(y, y, z) / (m2(y, x) * m2(y, y) * m2(y, z)),
        )
    }

    /// Unoptimised triple loop over every index triple that is not all-equal.
    pub fn scal(l: &[f64]) -> f64 {
        let n = l.len();
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    if !(j == k && k == m) {
                        s += phi(l[j], l[k], l[m]);
                    }
                }
            }
        }
        s
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Log-uniform draw on `[lo, hi]`.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Random spectrum kept well inside the simplex: the minimum entry is at
/// least `floor / n`.
pub fn interior_spectrum<R: Rng>(rng: &mut R, n: usize, floor: f64) -> Spectrum {
    let w: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    let v: Vec<f64> = w.iter().map(|x| (1.0 - floor) * x / total + floor / n as f64).collect();
    Spectrum::from_weights(&v).unwrap()
}
