//! All-roots factorization of real polynomials.
//!
//! Coefficients are in the monomial basis, ascending: `coeffs[i]` multiplies
//! `u^i`. The main solver is Aberth–Ehrlich simultaneous iteration started
//! from circles read off the Newton polygon of `ln|a_i|`. Low-degree inputs
//! that fail to converge fall back to the eigenvalues of the companion matrix.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Largest degree for which the companion-matrix fallback is attempted.
pub const COMPANION_MAX_DEGREE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Bound on the scaled residual `|p(u)| / (||a||_inf max(1,|u|)^d)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub leading_coeff: Complex64,
    pub degree: usize,
    pub max_residual: f64,
    pub iterations: usize,
}

/// Polynomial normalised to `||a||_inf = 1`, with the evaluation kernels the
/// iteration needs.
struct Poly {
    a: Vec<f64>,
    abs: Vec<f64>,
}

/// Value of `p / p'` at a point plus the data for the stopping rule.
struct Eval {
    ratio: Complex64,
    /// `|p(z)| / max(1,|z|)^d`
    scaled: f64,
    /// Running-error bound on `scaled`.
    bound: f64,
}

impl Poly {
    fn new(coeffs: &[f64]) -> Self {
        let m = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let a: Vec<f64> = coeffs.iter().map(|c| c / m).collect();
        let abs = a.iter().map(|c| c.abs()).collect();
        Self { a, abs }
    }

    fn degree(&self) -> usize {
        self.a.len() - 1
    }

    fn eval(&self, z: Complex64) -> Eval {
        let d = self.degree();
        let r = z.norm();
        if r <= 1.0 {
            let (p, dp, b) = horner(self.a.iter().rev(), self.abs.iter().rev(), z);
            Eval {
                ratio: p / dp,
                scaled: p.norm(),
                bound: b,
            }
        } else {
            // p(z) = z^d q(1/z) with q the reversed polynomial
            let y = z.inv();
            let (q, dq, b) = horner(self.a.iter(), self.abs.iter(), y);
            let denom = Complex64::new(d as f64, 0.0) - y * dq / q;
            Eval {
                ratio: z / denom,
                scaled: q.norm(),
                bound: b,
            }
        }
    }

    fn scaled_residual(&self, z: Complex64) -> f64 {
        self.eval(z).scaled
    }
}

/// Horner for value and derivative with coefficients given high to low, plus
/// the rounding-error bound `4 d eps sum |a_i| |z|^i` at the same point.
fn horner<'a>(
    coeffs: impl Iterator<Item = &'a f64>,
    abs: impl Iterator<Item = &'a f64>,
    z: Complex64,
) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
        count += 1;
    }
    let r = z.norm();
    let mut b = 0.0;
    for &c in abs {
        b = b * r + c;
    }
    (p, dp, 4.0 * count as f64 * EPS * b)
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, ln|a_i|)`.
fn initial_guesses(p: &Poly) -> Vec<Complex64> {
    let d = p.degree();
    let pts: Vec<(usize, f64)> = p
        .a
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| (i, c.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(pts.len());
    for &pt in &pts {
        while hull.len() >= 2 {
            let (i1, y1) = hull[hull.len() - 2];
            let (i2, y2) = hull[hull.len() - 1];
            let cross = (i2 as f64 - i1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(d);
    // zero low-order coefficients mean roots at the origin
    let first = hull[0].0;
    for _ in 0..first {
        out.push(Complex64::new(0.0, 0.0));
    }
    const SIGMA: f64 = 0.7;
    for w in hull.windows(2) {
        let (i, yi) = w[0];
        let (j, yj) = w[1];
        let m = j - i;
        let radius = ((yi - yj) / m as f64).exp();
        for q in 0..m {
            let angle = TAU * q as f64 / m as f64 + TAU * i as f64 / d as f64 + SIGMA;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    debug_assert_eq!(out.len(), d);
    out
}

fn aberth(p: &Poly, z: &mut [Complex64], max_iter: usize) -> usize {
    let n = z.len();
    let mut done = vec![false; n];
    let mut iterations = 0;
    for it in 0..max_iter {
        iterations = it + 1;
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let e = p.eval(z[k]);
            if e.scaled <= e.bound {
                done[k] = true;
                continue;
            }
            all_done = false;
            let zk = z[k];
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    sum += (zk - zj).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - e.ratio * sum;
            let step = if denom.norm() > 0.0 && denom.is_finite() {
                e.ratio / denom
            } else {
                e.ratio
            };
            if !step.is_finite() {
                // p'(z) vanished: nudge off the critical point
                z[k] = zk + Complex64::new(1e-8, 1e-8) * (1.0 + zk.norm());
                continue;
            }
            z[k] = zk - step;
            if step.norm() <= 2.0 * EPS * z[k].norm() {
                done[k] = true;
            }
        }
        if all_done {
            break;
        }
    }
    iterations
}

fn companion_roots(p: &Poly) -> Vec<Complex64> {
    let d = p.degree();
    let lead = p.a[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.a[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Newton refinement: keeps stepping while the steps shrink and stay below
/// `max_move * (1 + |z|)`.
fn polish(p: &Poly, z: &mut [Complex64], steps: usize, max_move: f64) {
    for zk in z.iter_mut() {
        let mut last = f64::INFINITY;
        for _ in 0..steps {
            let step = p.eval(*zk).ratio;
            let size = step.norm();
            if !step.is_finite() || size >= last || size > max_move * (1.0 + zk.norm()) {
                break;
            }
            last = size;
            *zk -= step;
        }
    }
}

fn max_scaled_residual(p: &Poly, z: &[Complex64]) -> f64 {
    z.iter().map(|r| p.scaled_residual(*r)).fold(0.0, f64::max)
}

/// Finds every root of `sum_i coeffs[i] u^i`.
pub fn factor_polynomial(coeffs: &[f64], cfg: &RootConfig) -> Result<RootSet> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidConfig("polynomial coefficient is not finite".into()));
    }
    if coeffs.len() < 2 {
        return Err(Error::DegreeZero);
    }
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    if lead == 0.0 {
        return Err(Error::InvalidConfig(
            "leading coefficient is zero; strip it before factoring".into(),
        ));
    }
    let p = Poly::new(coeffs);

    if d == 1 {
        let root = Complex64::new(-coeffs[0] / coeffs[1], 0.0);
        return Ok(RootSet {
            roots: vec![root],
            leading_coeff: Complex64::new(lead, 0.0),
            degree: 1,
            max_residual: p.scaled_residual(root),
            iterations: 0,
        });
    }

    let mut z = initial_guesses(&p);
    let iterations = aberth(&p, &mut z, cfg.max_iter);
    polish(&p, &mut z, 8, 1e-3);
    let mut best = max_scaled_residual(&p, &z);

    if (best > cfg.tol || z.iter().any(|r| !r.is_finite())) && d <= COMPANION_MAX_DEGREE {
        let mut alt = companion_roots(&p);
        polish(&p, &mut alt, 20, f64::INFINITY);
        let alt_res = max_scaled_residual(&p, &alt);
        if alt_res < best || !best.is_finite() {
            z = alt;
            best = alt_res;
        }
    }

    if !(best <= cfg.tol) {
        return Err(Error::NoConvergence {
            iterations,
            best_residual: best,
        });
    }
    Ok(RootSet {
        roots: z,
        leading_coeff: Complex64::new(lead, 0.0),
        degree: d,
        max_residual: best,
        iterations,
    })
}

/// Scaled residual `|p(u_k)| / (||a||_inf max(1,|u_k|)^d)` for each root.
pub fn eval_residuals(coeffs: &[f64], roots: &RootSet) -> Vec<f64> {
    let p = Poly::new(coeffs);
    roots.roots.iter().map(|r| p.scaled_residual(*r)).collect()
}

/// Leja order: start from the largest root, then repeatedly take the root
/// farthest (in product of distances) from those already chosen. Multiplying
/// factors in this order keeps intermediate coefficients small.
fn leja_order(roots: &[Complex64]) -> Vec<Complex64> {
    let n = roots.len();
    let mut left: Vec<Complex64> = roots.to_vec();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let first = (0..n).max_by(|&a, &b| left[a].norm().total_cmp(&left[b].norm())).unwrap();
    out.push(left.swap_remove(first));
    // log of the product of distances to the chosen set
    let mut score: Vec<f64> = left.iter().map(|z| (z - out[0]).norm().ln()).collect();
    while !left.is_empty() {
        let k = (0..left.len()).max_by(|&a, &b| score[a].total_cmp(&score[b])).unwrap();
        let z = left.swap_remove(k);
        score.swap_remove(k);
        for (s, w) in score.iter_mut().zip(&left) {
            *s += (w - z).norm().ln();
        }
        out.push(z);
    }
    out
}

/// Ascending coefficients of `lead * prod (u - root)`; real parts only.
pub fn expand_roots(lead: f64, roots: &[Complex64]) -> Vec<f64> {
    let mut c = vec![Complex64::new(lead, 0.0)];
    for r in leja_order(roots) {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * r;
        }
        c = next;
    }
    c.into_iter().map(|v| v.re).collect()
}
