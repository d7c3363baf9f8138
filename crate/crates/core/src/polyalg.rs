//! Laurent polynomials, DFT coefficient recovery, Aberth–Ehrlich
//! simultaneous root finding, annulus zero counts, and a numerical check of
//! Jensen's formula on a closed annulus.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numeric::{tree_mean, two_prod, two_sum};

type C64 = Complex64;

const TRIM_REL: f64 = 1e-13;

/// `p(z) = Σ_j coeffs[j] z^{k_min + j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    k_min: i64,
    coeffs: Vec<C64>,
}

impl LaurentPoly {
    /// Builds a Laurent polynomial, trimming leading and trailing coefficients
    /// below `1e-13 · max|c|`. An all-zero input gives the zero polynomial.
    pub fn new(k_min: i64, coeffs: Vec<C64>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 || !max.is_finite() {
            return Self {
                k_min: 0,
                coeffs: Vec::new(),
            };
        }
        let keep = |c: &C64| c.norm() > TRIM_REL * max;
        let first = coeffs.iter().position(keep).unwrap_or(0);
        let last = coeffs.iter().rposition(keep).unwrap_or(0);
        Self {
            k_min: k_min + first as i64,
            coeffs: coeffs[first..=last].to_vec(),
        }
    }

    /// Ordinary polynomial `leading · Π (z − r)`, expanded without trimming.
    pub fn from_roots(roots: &[C64], leading: C64) -> Self {
        let mut c = vec![leading];
        for &r in roots {
            let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
            for (j, &cj) in c.iter().enumerate() {
                next[j + 1] += cj;
                next[j] -= cj * r;
            }
            c = next;
        }
        // no trimming: tiny extreme coefficients are genuine here
        Self { k_min: 0, coeffs: c }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.coeffs.len() as i64 - 1
    }

    /// Coefficients in ascending exponent order starting at `k_min`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> C64 {
        let j = k - self.k_min;
        if j < 0 {
            return C64::new(0.0, 0.0);
        }
        self.coeffs.get(j as usize).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the ordinary polynomial `z^{−k_min} p(z)`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let q = horner(&self.coeffs, z);
        q * z.powi(self.k_min as i32)
    }

    /// `z^{−k_min} p(z)` by compensated Horner.
    pub fn eval_polynomial_compensated(&self, z: C64) -> C64 {
        comp_horner(&self.coeffs, z)
    }
}

fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &cj| acc * z + cj)
}

/// `(q(z), q'(z))` by Horner.
fn horner_with_derivative(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &cj in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + cj;
    }
    (p, dp)
}

#[inline]
fn two_prod_c(a: C64, b: C64) -> (C64, C64) {
    let (p1, e1) = two_prod(a.re, b.re);
    let (p2, e2) = two_prod(-a.im, b.im);
    let (p3, e3) = two_prod(a.re, b.im);
    let (p4, e4) = two_prod(a.im, b.re);
    let (re, e5) = two_sum(p1, p2);
    let (im, e6) = two_sum(p3, p4);
    (C64::new(re, im), C64::new(e1 + e2 + e5, e3 + e4 + e6))
}

#[inline]
fn two_sum_c(a: C64, b: C64) -> (C64, C64) {
    let (re, er) = two_sum(a.re, b.re);
    let (im, ei) = two_sum(a.im, b.im);
    (C64::new(re, im), C64::new(er, ei))
}

fn comp_horner(c: &[C64], z: C64) -> C64 {
    let mut r = C64::new(0.0, 0.0);
    let mut err = C64::new(0.0, 0.0);
    for &cj in c.iter().rev() {
        let (p, pe) = two_prod_c(r, z);
        let (s, se) = two_sum_c(p, cj);
        r = s;
        err = err * z + (pe + se);
    }
    r + err
}

/// Zeros of a function with a known number of zeros, with per-root residuals
/// `|p/p'| / max(1, |z|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<C64>,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl RootSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Errors unless the iteration converged.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::RootsNotConverged {
                iterations: self.iterations,
                max_residual: self.max_residual(),
            })
        }
    }
}

/// Anything Aberth's method can be run on: a function with `degree()` zeros
/// whose Newton correction `p(z)/p'(z)` can be evaluated.
pub trait RootTarget: Sync {
    fn degree(&self) -> usize;

    fn newton_correction(&self, z: C64) -> C64;

    fn residual(&self, z: C64) -> f64 {
        self.newton_correction(z).norm() / z.norm().max(1.0)
    }

    /// True when `p(z)` is indistinguishable from rounding noise, so further
    /// corrections cannot improve `z`.
    fn at_noise_floor(&self, _z: C64) -> bool {
        false
    }
}

impl RootTarget for LaurentPoly {
    fn degree(&self) -> usize {
        LaurentPoly::degree(self)
    }

    fn newton_correction(&self, z: C64) -> C64 {
        let d = self.degree() as f64;
        if z.norm() <= 1.0 {
            let (p, dp) = horner_with_derivative(&self.coeffs, z);
            p / dp
        } else {
            // reversed polynomial at w = 1/z keeps Horner stable outside the disk
            let w = z.inv();
            let rev: Vec<C64> = self.coeffs.iter().rev().copied().collect();
            let (r, dr) = horner_with_derivative(&rev, w);
            z / (d - w * dr / r)
        }
    }

    fn residual(&self, z: C64) -> f64 {
        let p = comp_horner(&self.coeffs, z);
        let (_, dp) = horner_with_derivative(&self.coeffs, z);
        if p == C64::new(0.0, 0.0) {
            return 0.0;
        }
        (p / dp).norm() / z.norm().max(1.0)
    }

    fn at_noise_floor(&self, z: C64) -> bool {
        let a = z.norm();
        let bound = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * a + c.norm());
        let d = self.coeffs.len() as f64;
        horner(&self.coeffs, z).norm() <= 4.0 * d * f64::EPSILON * bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AberthOptions {
    /// Stop once every correction is below `tol · max(1, |z|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// A root whose correction is below `stall_tol · max(1, |z|)` and no
    /// longer shrinking has reached the evaluation noise and is frozen.
    pub stall_tol: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_iter: 1000,
            stall_tol: 1e-10,
        }
    }
}

/// Aberth–Ehrlich iteration with synchronous (Jacobi-style) sweeps; a root
/// stops moving once its own correction meets the tolerance.
pub fn aberth_solve<T: RootTarget + ?Sized>(
    target: &T,
    initial: Vec<C64>,
    opts: &AberthOptions,
) -> RootSet {
    let d = initial.len();
    let mut z = initial;
    let mut done = vec![false; d];
    let mut last = vec![f64::INFINITY; d];
    let mut iterations = 0;
    while iterations < opts.max_iter && done.iter().any(|f| !f) {
        iterations += 1;
        let snapshot = &z;
        let updates: Vec<Option<C64>> = (0..d)
            .into_par_iter()
            .map(|i| {
                if done[i] {
                    return None;
                }
                let zi = snapshot[i];
                let nwt = target.newton_correction(zi);
                let s: C64 = snapshot
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &zj)| (zi - zj).inv())
                    .sum();
                let w = if nwt.is_finite() {
                    nwt / (C64::new(1.0, 0.0) - nwt * s)
                } else {
                    // p' = 0: limit of the Aberth step as the Newton step blows up
                    -s.inv()
                };
                Some(w)
            })
            .collect();
        for (i, upd) in updates.into_iter().enumerate() {
            let Some(w) = upd else { continue };
            if !w.is_finite() {
                // collision or overflow: nudge and keep iterating
                let bump = C64::new(1e-3, 7e-4) * z[i].norm().max(1.0);
                z[i] += bump;
                continue;
            }
            z[i] -= w;
            let scale = z[i].norm().max(1.0);
            let step = w.norm();
            let stalled = step < opts.stall_tol * scale && step >= 0.5 * last[i];
            if step < opts.tol * scale || stalled || target.at_noise_floor(z[i]) {
                done[i] = true;
            }
            last[i] = step;
        }
    }
    let residuals = z.par_iter().map(|&zi| target.residual(zi)).collect();
    RootSet {
        roots: z,
        residuals,
        converged: done.iter().all(|&f| f),
        iterations,
    }
}

/// `count` points on a circle, with a fixed angular offset so that real
/// polynomials do not start on their symmetry axis.
pub fn circle_guesses(center: C64, radius: f64, count: usize) -> Vec<C64> {
    (0..count)
        .map(|t| center + C64::from_polar(radius, TAU * t as f64 / count as f64 + 0.4))
        .collect()
}

/// Initial guesses from the upper convex hull of `(j, log|c_j|)`.
fn newton_polygon_guesses(c: &[C64]) -> Vec<C64> {
    let d = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(j, v)| (j, v.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(d);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let count = j - i;
        let r = ((li - lj) / count as f64).exp();
        let offset = TAU * i as f64 / d as f64 + 0.4;
        for t in 0..count {
            guesses.push(C64::from_polar(r, TAU * t as f64 / count as f64 + offset));
        }
    }
    guesses
}

/// All roots of `z^{−k_min} p(z)`.
pub fn aberth_roots(p: &LaurentPoly, tol: f64, max_iter: usize) -> Result<RootSet> {
    if p.degree() < 1 {
        return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
    }
    let guesses = newton_polygon_guesses(p.coeffs());
    let mut rs = aberth_solve(p, guesses, &AberthOptions { tol, max_iter, ..AberthOptions::default() });
    if rs.converged {
        polish(p, &mut rs.roots, 2);
        rs.residuals = rs.roots.par_iter().map(|&zi| p.residual(zi)).collect();
    }
    Ok(rs)
}

/// Aberth sweeps with `p` evaluated by compensated Horner, which sharpens
/// clustered roots past the accuracy plain Horner allows.
fn polish(p: &LaurentPoly, z: &mut [C64], sweeps: usize) {
    for _ in 0..sweeps {
        let snapshot = z.to_vec();
        let updates: Vec<C64> = (0..z.len())
            .into_par_iter()
            .map(|i| {
                let zi = snapshot[i];
                let f = comp_horner(&p.coeffs, zi);
                let (_, df) = horner_with_derivative(&p.coeffs, zi);
                let nwt = f / df;
                let s: C64 = snapshot
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &zj)| (zi - zj).inv())
                    .sum();
                nwt / (C64::new(1.0, 0.0) - nwt * s)
            })
            .collect();
        for (zi, w) in z.iter_mut().zip(updates) {
            if w.is_finite() {
                *zi -= w;
            }
        }
    }
}

/// Coefficients `c_k`, `k_min ≤ k ≤ k_max`, of the Laurent polynomial whose
/// values at `ρ e^{2πij/N}` are `values[j]`.
pub fn dft_interpolate(values: &[C64], rho: f64, k_min: i64, k_max: i64) -> Result<LaurentPoly> {
    if k_max < k_min {
        return Err(Error::InvalidInput("empty exponent range".into()));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidInput(format!("sampling radius must be positive, got {rho}")));
    }
    let n = values.len();
    let needed = (k_max - k_min + 1) as usize;
    if n < needed {
        return Err(Error::Dimension { needed, got: n });
    }
    let mut buf = values.to_vec();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let log_rho = rho.ln();
    let coeffs = (k_min..=k_max)
        .map(|k| {
            let idx = k.rem_euclid(n as i64) as usize;
            buf[idx] / n as f64 * (-(k as f64) * log_rho).exp()
        })
        .collect();
    Ok(LaurentPoly::new(k_min, coeffs))
}

/// Samples of `p` at `ρ e^{2πij/N}`, `j = 0..N`.
pub fn sample_circle(p: &LaurentPoly, rho: f64, n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| p.eval(C64::from_polar(rho, TAU * j as f64 / n as f64)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnulusCount {
    pub interior: usize,
    pub boundary: usize,
}

/// Counts roots strictly inside `r1 < |z| < r2` and roots on either circle.
/// `boundary_tol` is relative: a root is on the circle of radius `r` when
/// `||z| − r| ≤ boundary_tol · r`.
pub fn annulus_count(rs: &RootSet, r1: f64, r2: f64, boundary_tol: f64) -> Result<AnnulusCount> {
    if !(r1 > 0.0 && r1 < r2) {
        return Err(Error::InvalidInput(format!("need 0 < r1 < r2, got {r1}, {r2}")));
    }
    let mut out = AnnulusCount {
        interior: 0,
        boundary: 0,
    };
    for z in &rs.roots {
        let m = z.norm();
        if (m - r1).abs() <= boundary_tol * r1 || (m - r2).abs() <= boundary_tol * r2 {
            out.boundary += 1;
        } else if m > r1 && m < r2 {
            out.interior += 1;
        }
    }
    Ok(out)
}

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenReport {
    /// Difference of the circle means of `log|p|`.
    pub lhs: f64,
    /// Zero sum plus boundary and contour terms.
    pub rhs: f64,
    pub residual: f64,
    pub quadrature_points: usize,
    /// Set when a quadrature node hit a zero: the residual with the nodes
    /// shifted by half a step.
    pub shifted_residual: Option<f64>,
}

fn circle_mean_log(p: &LaurentPoly, r: f64, m: usize, shift: f64) -> f64 {
    let vals: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let t = TAU * (j as f64 + shift) / m as f64;
            p.eval(C64::from_polar(r, t)).norm().ln()
        })
        .collect();
    tree_mean(&vals)
}

fn converged_circle_mean(p: &LaurentPoly, r: f64, m0: usize, shift: f64) -> (f64, usize) {
    const CAP: usize = 1 << 22;
    let mut m = m0;
    let mut prev = circle_mean_log(p, r, m, shift);
    while m < CAP {
        let next = circle_mean_log(p, r, 2 * m, shift);
        m *= 2;
        if (next - prev).abs() < 1e-12 || !next.is_finite() {
            return (next, m);
        }
        prev = next;
    }
    (prev, m)
}

/// Evaluates both sides of Jensen's formula on `r1 ≤ |z| ≤ r2`.
pub fn jensen_residual(p: &LaurentPoly, r1: f64, r2: f64, quadrature: usize) -> Result<JensenReport> {
    if !(r1 > 0.0 && r1 < r2) {
        return Err(Error::InvalidInput(format!("need 0 < r1 < r2, got {r1}, {r2}")));
    }
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let need = 2 * p.degree() + 16;
    if quadrature < need {
        return Err(Error::Dimension {
            needed: need,
            got: quadrature,
        });
    }
    let roots = if p.degree() >= 1 {
        aberth_roots(p, 1e-14, 2000)?.require_converged()?.roots
    } else {
        Vec::new()
    };
    let tol = DEFAULT_BOUNDARY_TOL;
    let log_ratio = (r2 / r1).ln();
    let mut interior = 0.0;
    let mut on_r1 = 0usize;
    let mut inside = 0usize;
    for z in &roots {
        let m = z.norm();
        if (m - r1).abs() <= tol * r1 {
            on_r1 += 1;
        } else if m < r1 {
            inside += 1;
        } else if m < r2 && (m - r2).abs() > tol * r2 {
            interior += (r2 / m).ln();
        }
    }
    let contour = inside as f64 + 0.5 * on_r1 as f64 + p.k_min() as f64;
    let rhs = interior + 0.5 * on_r1 as f64 * log_ratio + log_ratio * contour;

    let side = |shift: f64| {
        let (outer, m2) = converged_circle_mean(p, r2, quadrature, shift);
        let (inner, m1) = converged_circle_mean(p, r1, quadrature, shift);
        (outer - inner, m1.max(m2))
    };
    let (lhs, m) = side(0.0);
    if lhs.is_finite() {
        return Ok(JensenReport {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            quadrature_points: m,
            shifted_residual: None,
        });
    }
    let (lhs_shifted, m) = side(0.5);
    Ok(JensenReport {
        lhs: lhs_shifted,
        rhs,
        residual: f64::INFINITY,
        quadrature_points: m,
        shifted_residual: Some((lhs_shifted - rhs).abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sorted_re(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    fn random_in_annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
        let r = rng.gen_range(lo..hi);
        C64::from_polar(r, rng.gen_range(0.0..TAU))
    }

    #[test]
    fn trims_small_extremes() {
        let p = LaurentPoly::new(-2, vec![c(1e-20, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.k_min(), -1);
        assert_eq!(p.k_max(), 0);
        assert_eq!(p.coeff(0), c(2.0, 0.0));
        assert!(LaurentPoly::new(3, vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn interpolates_monomial() {
        let vals: Vec<C64> = (0..4).map(|j| C64::from_polar(1.0, TAU * j as f64 / 4.0)).collect();
        let p = dft_interpolate(&vals, 1.0, -1, 1).unwrap();
        assert_eq!(p.k_min(), 1);
        assert_eq!(p.coeffs().len(), 1);
        assert_abs_diff_eq!(p.coeff(1).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn interpolates_two_term_laurent() {
        let f = LaurentPoly::new(-1, vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let vals = sample_circle(&f, 2.0, 8);
        let p = dft_interpolate(&vals, 2.0, -1, 1).unwrap();
        assert!((p.coeff(-1) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((p.coeff(1) - c(1.0, 0.0)).norm() < 1e-12);
        assert!(p.coeff(0).norm() < 1e-12);
    }

    #[test]
    fn interpolation_needs_enough_samples() {
        let err = dft_interpolate(&[c(1.0, 0.0); 3], 1.0, -2, 2).unwrap_err();
        assert!(matches!(err, Error::Dimension { needed: 5, got: 3 }));
        assert!(dft_interpolate(&[c(1.0, 0.0); 8], 0.0, -2, 2).is_err());
    }

    #[test]
    fn simple_roots() {
        let p = LaurentPoly::new(0, vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let rs = aberth_roots(&p, 1e-14, 200).unwrap();
        assert!(rs.converged);
        let r = sorted_re(rs.roots);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-14);

        let p = LaurentPoly::new(0, vec![c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        let rs = aberth_roots(&p, 1e-14, 200).unwrap();
        let r = sorted_re(rs.roots);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-10);
        }
        assert!(rs.residuals.iter().all(|&v| v < 1e-13));
    }

    #[test]
    fn laurent_roots_ignore_pole_order() {
        // z^{-3}(z − 2)
        let p = LaurentPoly::new(-3, vec![c(-2.0, 0.0), c(1.0, 0.0)]);
        let rs = aberth_roots(&p, 1e-14, 100).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert!((rs.roots[0] - c(2.0, 0.0)).norm() < 1e-14);
        assert!(aberth_roots(&LaurentPoly::new(2, vec![c(1.0, 0.0)]), 1e-14, 10).is_err());
    }

    #[test]
    fn degree_forty_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let roots: Vec<C64> = (0..40).map(|_| random_in_annulus(&mut rng, 0.5, 2.0)).collect();
        let p = LaurentPoly::from_roots(&roots, c(1.0, 0.0));
        let vals = sample_circle(&p, 1.0, 64);
        let q = dft_interpolate(&vals, 1.0, 0, 40).unwrap();
        let rs = aberth_roots(&q, 1e-14, 500).unwrap();
        assert!(rs.converged);
        for r in &roots {
            let best = rs.roots.iter().map(|z| (z - r).norm()).fold(f64::MAX, f64::min);
            assert!(best < 1e-8, "root {r} missed by {best}");
        }
    }

    #[test]
    fn counts_in_annulus() {
        let rs = RootSet {
            roots: vec![c(0.5, 0.0), c(1.5, 0.0), c(3.0, 0.0)],
            residuals: vec![0.0; 3],
            converged: true,
            iterations: 0,
        };
        assert_eq!(
            annulus_count(&rs, 1.0, 2.0, 1e-6).unwrap(),
            AnnulusCount { interior: 1, boundary: 0 }
        );
        let rs = RootSet {
            roots: vec![c(1.0, 0.0)],
            residuals: vec![0.0],
            converged: true,
            iterations: 0,
        };
        assert_eq!(
            annulus_count(&rs, 1.0, 2.0, 1e-6).unwrap(),
            AnnulusCount { interior: 0, boundary: 1 }
        );
        assert!(annulus_count(&rs, 2.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn roots_of_unity_sit_on_boundary() {
        // z^{2n} − c has all roots on |z| = c^{1/2n}
        let n = 6;
        let cval = 3.0f64;
        let mut coeffs = vec![c(0.0, 0.0); 2 * n + 1];
        coeffs[0] = c(-cval, 0.0);
        coeffs[2 * n] = c(1.0, 0.0);
        let p = LaurentPoly::new(0, coeffs);
        let rs = aberth_roots(&p, 1e-14, 500).unwrap();
        let r = cval.powf(1.0 / (2 * n) as f64);
        let count = annulus_count(&rs, r, 2.0 * r, 1e-6).unwrap();
        assert_eq!(count, AnnulusCount { interior: 0, boundary: 2 * n });
    }

    #[test]
    fn jensen_one_zero() {
        let a = c(0.3, 0.9);
        let p = LaurentPoly::new(0, vec![-a, c(1.0, 0.0)]);
        let rep = jensen_residual(&p, 0.7, 1.3, 32).unwrap();
        assert_abs_diff_eq!(rep.lhs, (1.3 / a.norm()).ln(), epsilon = 1e-10);
        assert!(rep.residual < 1e-10);
    }

    #[test]
    fn jensen_monomial() {
        let p = LaurentPoly::new(1, vec![c(1.0, 0.0)]);
        let rep = jensen_residual(&p, 0.7, 1.3, 16).unwrap();
        assert_abs_diff_eq!(rep.rhs, (1.3f64 / 0.7).ln(), epsilon = 1e-15);
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn jensen_zero_on_inner_circle_gets_half_weights() {
        // zero on |z| = r1 and a quadrature node exactly on it
        let p = LaurentPoly::new(0, vec![c(-0.7, 0.0), c(1.0, 0.0)]);
        let rep = jensen_residual(&p, 0.7, 1.3, 32).unwrap();
        assert!(rep.residual.is_infinite());
        assert!(rep.shifted_residual.unwrap() < 1e-3);
    }

    #[test]
    fn jensen_checks_quadrature_size() {
        let p = LaurentPoly::new(0, vec![c(-0.7, 0.0), c(1.0, 0.0)]);
        assert!(jensen_residual(&p, 0.7, 1.3, 10).is_err());
    }

    #[test]
    fn compensated_horner_beats_plain_near_cluster() {
        // (z − 1)^8 expanded; exact value at 1 + 1e-3 is 1e-24
        let p = LaurentPoly::from_roots(&[c(1.0, 0.0); 8], c(1.0, 0.0));
        let z = c(1.001, 0.0);
        let comp = p.eval_polynomial_compensated(z).re;
        assert!((comp - 1e-24).abs() < 1e-28);
        let plain = p.eval(z).re;
        assert!((plain - 1e-24).abs() > 1e-20);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn dft_round_trip(seed in any::<u64>(), k_min in -15i64..0, width in 1i64..31, rho in 0.5f64..2.0) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coeffs: Vec<C64> = (0..=width).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                let p = LaurentPoly::new(k_min, coeffs);
                let n = (width as usize + 1).next_power_of_two();
                let q = dft_interpolate(&sample_circle(&p, rho, n), rho, k_min, k_min + width).unwrap();
                let scale = rho.powf(width as f64).max(rho.powf(-(width as f64)));
                for k in k_min..=k_min + width {
                    prop_assert!((p.coeff(k) - q.coeff(k)).norm() < 1e-10 * scale);
                }
            }

            #[test]
            fn vieta_and_reconstruction(seed in any::<u64>(), d in 2usize..60) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coeffs: Vec<C64> = (0..=d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                let p = LaurentPoly::new(0, coeffs);
                let dd = p.degree();
                prop_assume!(dd >= 1);
                let rs = aberth_roots(&p, 1e-14, 2000).unwrap();
                prop_assert!(rs.converged);
                let cd = p.coeffs()[dd];
                let sum: C64 = rs.roots.iter().sum();
                let maxr = rs.roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
                prop_assert!((sum + p.coeffs()[dd - 1] / cd).norm() <= 1e-8 * (1.0 + maxr) * dd as f64);
                let back = LaurentPoly::from_roots(&rs.roots, cd);
                // coefficient scale of the expansion: c_d · Π(z + |r_i|)
                let moduli: Vec<C64> = rs.roots.iter().map(|z| c(-z.norm(), 0.0)).collect();
                let scale = LaurentPoly::from_roots(&moduli, c(cd.norm(), 0.0));
                for (k, (a, b)) in p.coeffs().iter().zip(back.coeffs()).enumerate() {
                    prop_assert!((a - b).norm() <= 1e-7 * scale.coeffs()[k].norm());
                }
            }
        }
    }
}
