//! Transfer-matrix products and Dirichlet determinant recurrences for the
//! Schrödinger cocycle `S_{E,v}(θ) = [[E − v(θ), −1], [1, 0]]`, carried with a
//! separate log-scale so that products of any length stay representable.
//!
//! Sign convention: the recurrence `f_l = (E − v_l) f_{l−1} − f_{l−2}`,
//! `f_0 = 1`, `f_{−1} = 0` produces `f_n = det(E − H_n)`; the other
//! convention is `det(H_n − E) = (−1)^n f_n`.
//!
//! Lyapunov exponents use the operator 2-norm.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{orbit_phase, phase_grid, FourierPotential};
use crate::numeric::{pow2, pow2_exponent, tree_mean};

/// Norm used in every finite-n Lyapunov exponent; reported in output metadata.
pub const NORM_NAME: &str = "operator-2";

// rescale when the largest squared modulus leaves [1/4, 4]
const LO2: f64 = 0.25;
const HI2: f64 = 4.0;

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocycleParams {
    /// Frequency in radians, reduced modulo `2π`.
    pub alpha: f64,
    pub energy: C64,
    /// Imaginary phase offset.
    pub y: f64,
    /// Number of steps, at least 1.
    pub n: usize,
}

impl CocycleParams {
    pub fn new(alpha: f64, energy: C64, y: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("truncation length n must be >= 1".into()));
        }
        if !(alpha.is_finite() && y.is_finite() && energy.re.is_finite() && energy.im.is_finite())
        {
            return Err(Error::InvalidInput("cocycle parameters must be finite".into()));
        }
        Ok(Self {
            alpha: alpha.rem_euclid(std::f64::consts::TAU),
            energy,
            y,
            n,
        })
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }

    pub fn with_y(self, y: f64) -> Self {
        Self { y, ..self }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("truncation length n must be >= 1".into()));
        }
        Ok(())
    }
}

/// 2×2 product stored as `e^{log_scale} · m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMatrix {
    pub m: [[C64; 2]; 2],
    pub log_scale: f64,
}

impl ScaledMatrix {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
            log_scale: 0.0,
        }
    }

    /// Unscaled entries; may overflow for long products.
    pub fn value(&self) -> [[C64; 2]; 2] {
        let s = self.log_scale.exp();
        self.m.map(|row| row.map(|v| v * s))
    }

    /// `log ‖M‖₂` of the represented matrix.
    pub fn log_norm(&self) -> f64 {
        0.5 * norm2_sq(&self.m).ln() + self.log_scale
    }

    /// Determinant of the represented matrix (overflows only if it is huge).
    pub fn det(&self) -> C64 {
        let [[a, b], [c, d]] = self.m;
        (a * d - b * c) * (2.0 * self.log_scale).exp()
    }

    fn rescale(&mut self) {
        let max2 = self
            .m
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .fold(0.0, f64::max);
        if (LO2..=HI2).contains(&max2) || max2 == 0.0 || !max2.is_finite() {
            return;
        }
        let e = pow2_exponent(max2.sqrt());
        let f = pow2(-e);
        for v in self.m.iter_mut().flatten() {
            *v *= f;
        }
        self.log_scale += f64::from(e) * LN_2;
    }
}

/// Determinant pair `(f_l, f_{l−1})` stored as `e^{log_scale} · (f_cur, f_prev)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPair {
    pub f_cur: C64,
    pub f_prev: C64,
    pub log_scale: f64,
}

impl ScaledPair {
    fn start() -> Self {
        Self {
            f_cur: C64::new(1.0, 0.0),
            f_prev: C64::new(0.0, 0.0),
            log_scale: 0.0,
        }
    }

    /// `(f_cur, f_prev)` multiplied by `e^{log_scale − reference}`; used to
    /// bring a batch of samples to a shared scale.
    pub fn at_scale(&self, reference: f64) -> (C64, C64) {
        let s = (self.log_scale - reference).exp();
        (self.f_cur * s, self.f_prev * s)
    }

    /// `log |f_n|`, `−∞` when `f_n` vanishes exactly.
    pub fn log_abs(&self) -> f64 {
        let a = self.f_cur.norm();
        if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            a.ln() + self.log_scale
        }
    }

    #[inline]
    fn step(&mut self, a: C64) {
        let next = a * self.f_cur - self.f_prev;
        self.f_prev = self.f_cur;
        self.f_cur = next;
        let max2 = self.f_cur.norm_sqr().max(self.f_prev.norm_sqr());
        if !(LO2..=HI2).contains(&max2) && max2 != 0.0 && max2.is_finite() {
            let e = pow2_exponent(max2.sqrt());
            let f = pow2(-e);
            self.f_cur *= f;
            self.f_prev *= f;
            self.log_scale += f64::from(e) * LN_2;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LEResult {
    /// Estimate in nats per step.
    pub value: f64,
    pub n_used: usize,
    pub grid_used: usize,
    pub est_error: f64,
}

/// How a phase-averaged exponent is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeEstimator {
    /// Mean over the uniform phase grid.
    #[default]
    Grid,
    /// Single orbit of length `n · grid` started at phase 0.
    Birkhoff,
}

/// Doubling schedule for [`converged_le`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeConfig {
    pub n_start: usize,
    pub grid_start: usize,
    pub n_max: usize,
    pub grid_max: usize,
    pub estimator: LeEstimator,
}

impl Default for LeConfig {
    fn default() -> Self {
        Self {
            n_start: 512,
            grid_start: 64,
            n_max: 1 << 15,
            grid_max: 2048,
            estimator: LeEstimator::Grid,
        }
    }
}

/// `E − v(x + kα + iy)`.
#[inline]
fn diagonal(pot: &FourierPotential, p: &CocycleParams, growth: f64, x: f64, k: usize) -> Result<C64> {
    let phase = orbit_phase(x, k, p.alpha);
    let v = pot.eval_unit(C64::cis(phase), growth);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinitePotential { re: phase, im: p.y });
    }
    Ok(p.energy - v)
}

/// `M_n(x + iy) = S(x + iy + nα) ⋯ S(x + iy + α)`.
pub fn transfer_product(pot: &FourierPotential, params: &CocycleParams, x: f64) -> Result<ScaledMatrix> {
    params.check()?;
    let growth = (-params.y).exp();
    let mut acc = ScaledMatrix::identity();
    for k in 1..=params.n {
        let a = diagonal(pot, params, growth, x, k)?;
        let [r0, r1] = acc.m;
        acc.m = [[a * r0[0] - r1[0], a * r0[1] - r1[1]], r0];
        acc.rescale();
    }
    Ok(acc)
}

/// `(1/n) log ‖M_n(x + iy)‖₂`.
pub fn finite_le(pot: &FourierPotential, params: &CocycleParams, x: f64) -> Result<f64> {
    let m = transfer_product(pot, params, x)?;
    Ok(m.log_norm() / params.n as f64)
}

fn grid_values(pot: &FourierPotential, params: &CocycleParams, xs: &[f64]) -> Result<Vec<f64>> {
    xs.par_iter().map(|&x| finite_le(pot, params, x)).collect()
}

/// Mean of [`finite_le`] over the uniform grid `{2πj/M}`; `est_error` is 0
/// (no refinement). See [`averaged_le_refined`].
pub fn averaged_le(pot: &FourierPotential, params: &CocycleParams, grid: usize) -> Result<LEResult> {
    if grid == 0 {
        return Err(Error::InvalidInput("phase grid must have at least one point".into()));
    }
    let xs: Vec<f64> = phase_grid(grid).collect();
    let vals = grid_values(pot, params, &xs)?;
    Ok(LEResult {
        value: tree_mean(&vals),
        n_used: params.n,
        grid_used: grid,
        est_error: 0.0,
    })
}

/// Like [`averaged_le`] but also evaluates the `2M` grid; the returned value
/// is the `2M` mean and `est_error` the change from the `M` mean.
pub fn averaged_le_refined(
    pot: &FourierPotential,
    params: &CocycleParams,
    grid: usize,
) -> Result<LEResult> {
    if grid == 0 {
        return Err(Error::InvalidInput("phase grid must have at least one point".into()));
    }
    let fine: Vec<f64> = phase_grid(2 * grid).collect();
    let odd: Vec<f64> = fine.iter().skip(1).step_by(2).copied().collect();
    let even: Vec<f64> = fine.iter().step_by(2).copied().collect();
    let ev = grid_values(pot, params, &even)?;
    let ov = grid_values(pot, params, &odd)?;
    let coarse = tree_mean(&ev);
    let all: Vec<f64> = ev.iter().zip(&ov).flat_map(|(&a, &b)| [a, b]).collect();
    let value = tree_mean(&all);
    Ok(LEResult {
        value,
        n_used: params.n,
        grid_used: 2 * grid,
        est_error: (value - coarse).abs(),
    })
}

/// Single-orbit estimate `(1/N) log ‖M_N(x0 + iy)‖` with `N = params.n`.
pub fn birkhoff_le(pot: &FourierPotential, params: &CocycleParams, x0: f64) -> Result<f64> {
    finite_le(pot, params, x0)
}

/// Doubles `n` and the phase grid until successive estimates differ by less
/// than `tol`.
pub fn converged_le(
    pot: &FourierPotential,
    alpha: f64,
    energy: C64,
    y: f64,
    tol: f64,
    cfg: &LeConfig,
) -> Result<LEResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let base = CocycleParams::new(alpha, energy, y, cfg.n_start.max(1))?;
    let constant = pot.is_constant();
    let estimate = |n: usize, m: usize| -> Result<f64> {
        let p = base.with_n(n);
        match cfg.estimator {
            LeEstimator::Grid => Ok(averaged_le(pot, &p, m)?.value),
            LeEstimator::Birkhoff => birkhoff_le(pot, &p.with_n(n * m), 0.0),
        }
    };
    let mut n = cfg.n_start.max(1);
    let mut m = if constant { 1 } else { cfg.grid_start.max(1) };
    let mut prev = estimate(n, m)?;
    let mut before = f64::NAN;
    loop {
        let n2 = 2 * n;
        let m2 = if constant { 1 } else { (2 * m).min(cfg.grid_max.max(m)) };
        if n2 > cfg.n_max {
            return Err(Error::LeNotConverged {
                previous: before,
                last: prev,
                n,
                grid: m,
            });
        }
        let next = estimate(n2, m2)?;
        let diff = (next - prev).abs();
        if diff < tol {
            return Ok(LEResult {
                value: next,
                n_used: n2,
                grid_used: m2,
                est_error: diff,
            });
        }
        before = prev;
        prev = next;
        n = n2;
        m = m2;
    }
}

/// `(f_n, f_{n−1})` at phase `x + iy`.
pub fn det_recurrence(pot: &FourierPotential, params: &CocycleParams, x: f64) -> Result<ScaledPair> {
    params.check()?;
    let growth = (-params.y).exp();
    let mut pair = ScaledPair::start();
    for k in 1..=params.n {
        pair.step(diagonal(pot, params, growth, x, k)?);
    }
    Ok(pair)
}

/// `log |f_n|` and `arg f_n`; `arg` is `None` when `f_n` vanishes exactly, in
/// which case `log_abs` is `−∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FnLog {
    pub log_abs: f64,
    pub arg: Option<f64>,
}

pub fn log_abs_fn(pot: &FourierPotential, params: &CocycleParams, x: f64) -> Result<FnLog> {
    let pair = det_recurrence(pot, params, x)?;
    let log_abs = pair.log_abs();
    let arg = log_abs.is_finite().then(|| pair.f_cur.arg());
    Ok(FnLog { log_abs, arg })
}

/// Fraction of grid phases where `(1/n) log |f_n|` deviates from its grid
/// mean by more than `epsilon`. Exact zeros of `f_n` count as deviating.
pub fn ldt_deviation_fraction(
    pot: &FourierPotential,
    params: &CocycleParams,
    epsilon: f64,
    grid: usize,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    if grid < 16 {
        return Err(Error::InvalidInput(format!("grid must have at least 16 points, got {grid}")));
    }
    let xs: Vec<f64> = phase_grid(grid).collect();
    let n = params.n as f64;
    let samples: Vec<f64> = xs
        .par_iter()
        .map(|&x| Ok(det_recurrence(pot, params, x)?.log_abs() / n))
        .collect::<Result<_>>()?;
    let finite: Vec<f64> = samples.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return Ok(1.0);
    }
    let mean = tree_mean(&finite);
    let deviating = samples
        .iter()
        .filter(|&&v| !v.is_finite() || (v - mean).abs() > epsilon)
        .count();
    Ok(deviating as f64 / grid as f64)
}

fn norm2_sq(m: &[[C64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = *m;
    let fro = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    let det = (a * d - b * c).norm_sqr();
    let disc = (fro * fro - 4.0 * det).max(0.0);
    0.5 * (fro + disc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::amo_potential;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn free_le(e: f64) -> f64 {
        // log of the dominant root of t² − E t + 1
        ((e + (e * e - 4.0).sqrt()) / 2.0).ln()
    }

    fn matmul(a: [[C64; 2]; 2], b: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    #[test]
    fn free_rotation_has_order_four() {
        let p = CocycleParams::new(1.0, c(0.0, 0.0), 0.0, 4).unwrap();
        let m = transfer_product(&FourierPotential::zero(), &p, 0.3).unwrap().value();
        assert_eq!(m, ScaledMatrix::identity().m);
    }

    #[test]
    fn single_factor() {
        let p = CocycleParams::new(1.0, c(3.0, 0.0), 0.0, 1).unwrap();
        let m = transfer_product(&FourierPotential::zero(), &p, 0.0).unwrap().value();
        assert_eq!(m, [[c(3.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
    }

    #[test]
    fn two_step_amo_by_hand() {
        let pot = amo_potential(0.5).unwrap();
        let alpha = FRAC_PI_2;
        let p = CocycleParams::new(alpha, c(0.0, 0.0), 0.0, 2).unwrap();
        let s = |k: f64| {
            let v = 2.0 * 0.5 * (k * alpha).cos();
            [[c(-v, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
        };
        let expect = matmul(s(2.0), s(1.0));
        let got = transfer_product(&pot, &p, 0.0).unwrap().value();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got[i][j] - expect[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn free_le_values() {
        let zero = FourierPotential::zero();
        let p = CocycleParams::new(1.0, c(3.0, 0.0), 0.0, 10_000).unwrap();
        let l = finite_le(&zero, &p, 0.0).unwrap();
        assert_abs_diff_eq!(l, free_le(3.0), epsilon = 1e-3);
        assert_abs_diff_eq!(free_le(3.0), 0.962_423_650_119_206_9, epsilon = 1e-12);
        let p0 = CocycleParams::new(1.0, c(0.0, 0.0), 0.0, 10_000).unwrap();
        assert_abs_diff_eq!(finite_le(&zero, &p0, 0.0).unwrap(), 0.0, epsilon = 1e-3);
    }

    #[test]
    fn constant_integrand_average_is_exact() {
        let zero = FourierPotential::zero();
        let p = CocycleParams::new(1.0, c(3.0, 0.5), 0.2, 300).unwrap();
        let single = finite_le(&zero, &p, 0.0).unwrap();
        for m in [1, 3, 17, 64] {
            assert_eq!(averaged_le(&zero, &p, m).unwrap().value, single);
        }
    }

    #[test]
    fn amo_above_transition_matches_oracle() {
        let pot = amo_potential(0.5).unwrap();
        let alpha = crate::model::GOLDEN_ALPHA;
        let p = CocycleParams::new(alpha, c(0.0, 0.0), 1.5, 4096).unwrap();
        let r = averaged_le(&pot, &p, 512).unwrap();
        assert_abs_diff_eq!(r.value, 0.806_852_819_440_054_7, epsilon = 5e-3);
    }

    #[test]
    fn converged_le_cases() {
        let cfg = LeConfig::default();
        let zero = FourierPotential::zero();
        let r = converged_le(&zero, 1.0, c(3.0, 0.0), 0.0, 1e-4, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, free_le(3.0), epsilon = 1e-4);
        assert!(r.est_error < 1e-4);

        let pot = amo_potential(0.5).unwrap();
        let alpha = crate::model::GOLDEN_ALPHA;
        let r = converged_le(&pot, alpha, c(0.0, 0.0), 1.0, 1e-3, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 0.5f64.ln() + 1.0, epsilon = 5e-3);
        let r = converged_le(&pot, alpha, c(0.0, 0.0), 0.2, 1e-3, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 5e-3);
    }

    #[test]
    fn converged_le_reports_caps() {
        let cfg = LeConfig {
            n_start: 4,
            grid_start: 4,
            n_max: 16,
            grid_max: 8,
            estimator: LeEstimator::Grid,
        };
        let pot = amo_potential(0.5).unwrap();
        let err = converged_le(&pot, 1.0, c(0.0, 0.0), 0.0, 1e-12, &cfg).unwrap_err();
        assert!(matches!(err, Error::LeNotConverged { .. }));
        assert_eq!(err.exit_code(), 2);
        assert!(converged_le(&pot, 1.0, c(0.0, 0.0), 0.0, 0.0, &cfg).is_err());
    }

    #[test]
    fn birkhoff_estimator_agrees() {
        let pot = amo_potential(0.5).unwrap();
        let alpha = crate::model::GOLDEN_ALPHA;
        let cfg = LeConfig {
            estimator: LeEstimator::Birkhoff,
            ..LeConfig::default()
        };
        let r = converged_le(&pot, alpha, c(0.0, 0.0), 1.5, 1e-3, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 0.5f64.ln() + 1.5, epsilon = 5e-3);
    }

    #[test]
    fn recurrence_small_cases() {
        let pot = amo_potential(0.7).unwrap();
        let alpha = 0.9;
        let e = c(0.3, 0.1);
        let p = CocycleParams::new(alpha, e, 0.4, 1).unwrap();
        let pair = det_recurrence(&pot, &p, 0.2).unwrap();
        let expect = e - pot.eval(c(0.2 + alpha, 0.4));
        assert!((pair.f_cur * pair.log_scale.exp() - expect).norm() < 1e-14);
        assert_eq!(pair.f_prev * pair.log_scale.exp(), c(1.0, 0.0));
    }

    #[test]
    fn chebyshev_closed_form() {
        let zero = FourierPotential::zero();
        let theta: f64 = 0.7;
        for n in [1usize, 2, 5, 40, 333] {
            let p = CocycleParams::new(1.0, c(2.0 * theta.cos(), 0.0), 0.0, n).unwrap();
            let pair = det_recurrence(&zero, &p, 0.0).unwrap();
            let got = pair.f_cur.re * pair.log_scale.exp();
            let expect = (((n + 1) as f64) * theta).sin() / theta.sin();
            assert_abs_diff_eq!(got, expect, epsilon = 1e-11 * n as f64);
        }
    }

    #[test]
    fn log_abs_fn_cases() {
        let zero = FourierPotential::zero();
        let p = CocycleParams::new(1.0, c(10.0, 0.0), 0.0, 1).unwrap();
        let r = log_abs_fn(&zero, &p, 0.0).unwrap();
        assert_abs_diff_eq!(r.log_abs, 10f64.ln(), epsilon = 1e-15);
        assert_eq!(r.arg, Some(0.0));

        let p = CocycleParams::new(1.0, c(3.0, 0.0), 0.0, 2000).unwrap();
        let r = log_abs_fn(&zero, &p, 1.1).unwrap();
        assert_abs_diff_eq!(r.log_abs / 2000.0, free_le(3.0), epsilon = 2e-2);

        // f_1 = E − v vanishes exactly
        let p = CocycleParams::new(1.0, c(0.0, 0.0), 0.0, 1).unwrap();
        let r = log_abs_fn(&zero, &p, 0.0).unwrap();
        assert_eq!(r.log_abs, f64::NEG_INFINITY);
        assert_eq!(r.arg, None);
    }

    #[test]
    fn log_abs_fn_average_matches_le() {
        let pot = amo_potential(0.5).unwrap();
        let alpha = crate::model::GOLDEN_ALPHA;
        let p = CocycleParams::new(alpha, c(3.5, 0.0), 0.5, 2000).unwrap();
        let logs: Vec<f64> = phase_grid(256)
            .map(|x| log_abs_fn(&pot, &p, x).unwrap().log_abs / 2000.0)
            .collect();
        let mean = tree_mean(&logs);
        let le = averaged_le(&pot, &p, 256).unwrap().value;
        assert_abs_diff_eq!(mean, le, epsilon = 2e-2);
    }

    #[test]
    fn ldt_cases() {
        let zero = FourierPotential::zero();
        let p = CocycleParams::new(1.0, c(3.0, 0.0), 0.0, 500).unwrap();
        assert_eq!(ldt_deviation_fraction(&zero, &p, 1e-9, 64).unwrap(), 0.0);
        assert!(ldt_deviation_fraction(&zero, &p, 0.0, 64).is_err());
        assert!(ldt_deviation_fraction(&zero, &p, 0.1, 8).is_err());

        let pot = amo_potential(0.5).unwrap();
        let alpha = crate::model::GOLDEN_ALPHA;
        let p = CocycleParams::new(alpha, c(3.5, 0.0), 0.0, 2000).unwrap();
        assert_eq!(ldt_deviation_fraction(&pot, &p, 1.0, 128).unwrap(), 0.0);
        let small = ldt_deviation_fraction(&pot, &p.with_n(500), 0.1, 256).unwrap();
        let large = ldt_deviation_fraction(&pot, &p.with_n(4000), 0.1, 256).unwrap();
        assert!(large <= small + 0.02);

        // supercritical coupling, short products: deviations are common and
        // become rarer as n grows
        let pot = amo_potential(1.5).unwrap();
        let p = CocycleParams::new(alpha, c(0.5, 0.0), 0.0, 20).unwrap();
        let short = ldt_deviation_fraction(&pot, &p, 0.1, 1024).unwrap();
        let long = ldt_deviation_fraction(&pot, &p.with_n(640), 0.1, 1024).unwrap();
        assert!(short > 0.02 && long < short, "{short} {long}");
    }

    #[test]
    fn le_is_periodic_in_phase() {
        let pot = amo_potential(0.8).unwrap();
        let p = CocycleParams::new(0.77, c(1.0, 0.3), 0.2, 200).unwrap();
        let a = finite_le(&pot, &p, 0.4).unwrap();
        let b = finite_le(&pot, &p, 0.4 + 2.0 * PI).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn rejects_zero_length() {
        assert!(CocycleParams::new(1.0, c(0.0, 0.0), 0.0, 0).is_err());
        let bad = CocycleParams {
            alpha: 1.0,
            energy: c(0.0, 0.0),
            y: 0.0,
            n: 0,
        };
        assert!(transfer_product(&FourierPotential::zero(), &bad, 0.0).is_err());
    }
}
