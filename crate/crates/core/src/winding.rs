//! Finite-volume winding numbers `ν_n(E, iy) = −W/n`, where `W` is the net
//! number of turns of `x ↦ f_n(E, x + iy)` over one period, the one-sided
//! limits `ν±`, and the integer cross-check against zero counts.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::accel::Side;
use crate::cocycle::{converged_le, det_recurrence, CocycleParams, LeConfig};
use crate::error::{Error, LimitRow, Result};
use crate::model::FourierPotential;
use crate::numeric::{arg_increment, tree_sum};
use crate::polyalg::{annulus_count, AberthOptions, AnnulusCount, DEFAULT_BOUNDARY_TOL};
use crate::zeros::fn_zeros;

type C64 = Complex64;

const MAX_GRID: usize = 1 << 20;
const SUSPECT_AFTER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingResult {
    pub total_winding: i64,
    pub n: usize,
    pub nu_n: f64,
    pub grid_used: usize,
    /// `log min |f_n|` on the final grid.
    pub min_log_abs: f64,
}

#[derive(Clone, Copy)]
struct Sample {
    log_abs: f64,
    unit: C64,
}

fn sample(pot: &FourierPotential, params: &CocycleParams, xs: &[f64]) -> Result<Vec<Sample>> {
    xs.par_iter()
        .map(|&x| {
            let p = det_recurrence(pot, params, x)?;
            let log_abs = p.log_abs();
            let unit = if log_abs.is_finite() { p.f_cur / p.f_cur.norm() } else { C64::new(0.0, 0.0) };
            Ok(Sample { log_abs, unit })
        })
        .collect()
}

/// Net turns from consecutive samples, or `None` when some increment is
/// too large to be trusted.
fn turns(samples: &[Sample]) -> Option<i64> {
    let m = samples.len();
    let inc: Vec<f64> = (0..m)
        .map(|j| arg_increment(samples[j].unit, samples[(j + 1) % m].unit))
        .collect();
    if inc.iter().any(|d| d.abs() >= 0.5 * PI) {
        return None;
    }
    let total = tree_sum(&inc);
    let w = (total / TAU).round();
    ((total - TAU * w).abs() < 1e-6).then_some(w as i64)
}

/// Winding of `x ↦ f_n(E, x + iy)`: the grid is doubled until every angle
/// increment is below `π/2` and the count agrees across one doubling.
pub fn winding_n(pot: &FourierPotential, params: &CocycleParams, grid: usize) -> Result<WindingResult> {
    if grid < 64 {
        return Err(Error::InvalidInput(format!("winding grid must be at least 64, got {grid}")));
    }
    let n = params.n;
    let xs = |m: usize| -> Vec<f64> { (0..m).map(|j| TAU * j as f64 / m as f64).collect() };
    let mut m = grid;
    let mut samples = sample(pot, params, &xs(m))?;
    let mut previous: Option<i64> = None;
    let mut doublings = 0usize;
    loop {
        let min_log = samples.iter().map(|s| s.log_abs).fold(f64::INFINITY, f64::min);
        if min_log == f64::NEG_INFINITY {
            return Err(Error::ZeroOnContour {
                y: params.y,
                grid: m,
                min_log_abs: min_log,
            });
        }
        if doublings >= SUSPECT_AFTER {
            let mean = tree_sum(&samples.iter().map(|s| s.log_abs).collect::<Vec<_>>()) / m as f64;
            if min_log < mean + 1e-12f64.ln() {
                return Err(Error::ZeroOnContour {
                    y: params.y,
                    grid: m,
                    min_log_abs: min_log,
                });
            }
        }
        let current = turns(&samples);
        if let (Some(a), Some(b)) = (previous, current) {
            if a == b {
                return Ok(WindingResult {
                    total_winding: b,
                    n,
                    nu_n: -(b as f64) / n as f64,
                    grid_used: m,
                    min_log_abs: min_log,
                });
            }
        }
        if 2 * m > MAX_GRID {
            return Err(Error::WindingUnresolved { y: params.y, grid: m });
        }
        // reuse the even points of the doubled grid
        let fine = xs(2 * m);
        let odd: Vec<f64> = fine.iter().skip(1).step_by(2).copied().collect();
        let new = sample(pot, params, &odd)?;
        samples = samples.into_iter().zip(new).flat_map(|(a, b)| [a, b]).collect();
        m *= 2;
        doublings += 1;
        previous = current;
    }
}

/// Schedule for [`winding_limit`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitConfig {
    /// Decreasing offsets `ε`; the last two decide.
    pub eps_seq: Vec<f64>,
    pub n_start: usize,
    pub n_max: usize,
    /// Lyapunov exponent tolerance for the positivity check.
    pub le_tol: f64,
    /// Shift applied to `y` when a contour hits a zero.
    pub perturbation: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            eps_seq: vec![0.08, 0.04, 0.02],
            n_start: 1000,
            n_max: 8000,
            le_tol: 1e-3,
            perturbation: 1e-3,
        }
    }
}

fn initial_grid(pot: &FourierPotential, n: usize) -> usize {
    (4 * n * pot.degree().max(1) as usize).next_power_of_two().max(64)
}

fn winding_perturbed(pot: &FourierPotential, params: &CocycleParams, delta: f64) -> Result<WindingResult> {
    let grid = initial_grid(pot, params.n);
    match winding_n(pot, params, grid) {
        Err(Error::ZeroOnContour { .. }) => match winding_n(pot, &params.with_y(params.y + delta), grid) {
            Err(Error::ZeroOnContour { .. }) => winding_n(pot, &params.with_y(params.y - delta), grid),
            r => r,
        },
        r => r,
    }
}

/// Outcome of [`winding_limit`], including every `(ε, n)` evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitResult {
    pub value: i64,
    pub table: Vec<LimitRow>,
}

/// `ν±(E, iy)`: `ν_n` at `y ± ε` with `n` doubled until the nearest integer
/// settles, then required to agree across the two smallest `ε`.
pub fn winding_limit(
    pot: &FourierPotential,
    alpha: f64,
    energy: C64,
    y: f64,
    side: Side,
    cfg: &LimitConfig,
) -> Result<LimitResult> {
    if cfg.eps_seq.len() < 2 || cfg.eps_seq.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidInput("need at least two positive epsilons".into()));
    }
    if cfg.n_start == 0 || cfg.n_max < 2 * cfg.n_start {
        return Err(Error::InvalidInput("n schedule must allow one doubling".into()));
    }
    let sign = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let mut table = Vec::new();
    let mut settled: Vec<Option<i64>> = Vec::new();
    for &eps in &cfg.eps_seq {
        let ye = y + sign * eps;
        let le = converged_le(pot, alpha, energy, ye, cfg.le_tol, &LeConfig::default())?;
        if le.value <= 2.0 * cfg.le_tol {
            return Err(Error::LeNotPositive { y: ye, value: le.value });
        }
        let mut n = cfg.n_start;
        let mut last: Option<i64> = None;
        let mut result = None;
        while n <= cfg.n_max {
            let params = CocycleParams::new(alpha, energy, ye, n)?;
            let w = winding_perturbed(pot, &params, cfg.perturbation)?;
            let r = w.nu_n.round();
            let rounded = ((w.nu_n - r).abs() < 0.25).then_some(r as i64);
            table.push(LimitRow {
                epsilon: sign * eps,
                n,
                nu_n: w.nu_n,
                rounded,
            });
            if rounded.is_some() && rounded == last {
                result = rounded;
                break;
            }
            last = rounded;
            n *= 2;
        }
        settled.push(result);
    }
    let k = settled.len();
    match (settled[k - 2], settled[k - 1]) {
        (Some(a), Some(b)) if a == b => Ok(LimitResult { value: a, table }),
        _ => Err(Error::LimitNotStabilized { table }),
    }
}

/// Both sides of the count identity for the annulus `e^{−y2} < |z| < e^{−y1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountCheck {
    pub n: usize,
    pub winding_low: i64,
    pub winding_high: i64,
    pub interior: usize,
    pub boundary: usize,
    /// `2 (W(y1) − W(y2)) − 2·interior − boundary`; the identity holds when 0.
    pub doubled_residual: i64,
}

impl CountCheck {
    /// `n(ν_n(y2) − ν_n(y1)) − (interior + boundary/2)` divided by `n`.
    pub fn residual(&self) -> f64 {
        self.doubled_residual as f64 / (2 * self.n) as f64
    }
}

/// Compares the winding difference between two levels with the number of
/// zeros of `f_n(E, ·)` in the annulus between the two contours.
pub fn count_consistency(
    pot: &FourierPotential,
    alpha: f64,
    energy: C64,
    y1: f64,
    y2: f64,
    n: usize,
) -> Result<CountCheck> {
    if !(y1 < y2) {
        return Err(Error::InvalidInput(format!("need y1 < y2, got {y1}, {y2}")));
    }
    let grid = initial_grid(pot, n);
    let low = winding_n(pot, &CocycleParams::new(alpha, energy, y1, n)?, grid)?;
    let high = winding_n(pot, &CocycleParams::new(alpha, energy, y2, n)?, grid)?;
    let rs = fn_zeros(pot, alpha, energy, n, &AberthOptions::default())?.require_converged()?;
    let AnnulusCount { interior, boundary } = annulus_count(&rs, (-y2).exp(), (-y1).exp(), DEFAULT_BOUNDARY_TOL)?;
    let doubled = 2 * (low.total_winding - high.total_winding) - 2 * interior as i64 - boundary as i64;
    Ok(CountCheck {
        n,
        winding_low: low.total_winding,
        winding_high: high.total_winding,
        interior,
        boundary,
        doubled_residual: doubled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{amo_potential, GOLDEN_ALPHA};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_determinant_has_no_winding() {
        let p = CocycleParams::new(GOLDEN_ALPHA, c(10.0, 0.0), 0.0, 1).unwrap();
        let w = winding_n(&FourierPotential::zero(), &p, 64).unwrap();
        assert_eq!(w.total_winding, 0);
        assert_eq!(w.nu_n, 0.0);
    }

    #[test]
    fn single_exponential_winds_once_per_step() {
        // v = e^{iθ}: f_n is a polynomial in z of degree n with all zeros
        // near 0, so a small contour still encloses none and a large one all
        let pot = FourierPotential::new([(1, c(1.0, 0.0))]).unwrap();
        let n = 5;
        let big = winding_n(&pot, &CocycleParams::new(GOLDEN_ALPHA, c(0.1, 0.0), -3.0, n).unwrap(), 64).unwrap();
        assert_eq!(big.total_winding, n as i64);
        assert_eq!(big.nu_n, -1.0);
        let small = winding_n(&pot, &CocycleParams::new(GOLDEN_ALPHA, c(10.0, 0.0), 3.0, n).unwrap(), 64).unwrap();
        assert_eq!(small.total_winding, 0);
    }

    #[test]
    fn amo_levels() {
        let pot = amo_potential(0.5).unwrap();
        let e = c(3.5, 0.0);
        let w0 = winding_n(&pot, &CocycleParams::new(GOLDEN_ALPHA, e, 0.2, 200).unwrap(), 1024).unwrap();
        assert_eq!(w0.total_winding, 0);
        let w1 = winding_n(&pot, &CocycleParams::new(GOLDEN_ALPHA, e, 2.4, 200).unwrap(), 1024).unwrap();
        assert_eq!(w1.nu_n, 1.0);
    }

    #[test]
    fn exact_zero_on_contour() {
        // f_1 = E − v(x + α) vanishes at x = −α when E = v(0)
        let pot = amo_potential(0.5).unwrap();
        let alpha = TAU / 4.0;
        let p = CocycleParams::new(alpha, c(1.0, 0.0), 0.0, 1).unwrap();
        let r = winding_n(&pot, &p, 64);
        assert!(matches!(r, Err(Error::ZeroOnContour { .. })), "{r:?}");
    }

    #[test]
    fn first_order_count_identity() {
        let pot = FourierPotential::new([(1, c(0.6, 0.2)), (-1, c(0.3, 0.0))]).unwrap();
        for (y1, y2) in [(-2.0, 2.0), (-0.3, 0.4), (0.9, 1.7)] {
            let chk = count_consistency(&pot, GOLDEN_ALPHA, c(0.4, 0.1), y1, y2, 1).unwrap();
            assert_eq!(chk.doubled_residual, 0, "{chk:?}");
        }
    }

    #[test]
    fn free_limit_is_zero() {
        let cfg = LimitConfig {
            n_start: 64,
            n_max: 256,
            ..LimitConfig::default()
        };
        for side in [Side::Plus, Side::Minus] {
            let r = winding_limit(&FourierPotential::zero(), GOLDEN_ALPHA, c(3.0, 0.0), 0.4, side, &cfg).unwrap();
            assert_eq!(r.value, 0);
        }
    }
}
