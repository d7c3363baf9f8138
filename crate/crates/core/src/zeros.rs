//! Zeros of `z ↦ f_n(E, z)` with `z = e^{i(x+iy)}`, their radii, and the
//! concentration on circles `|z| = e^{−γ_j}` at the turning points.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::accel::PiecewiseLinear;
use crate::cocycle::{det_recurrence, CocycleParams};
use crate::error::{Error, Result};
use crate::model::{orbit_phase, FourierPotential};
use crate::numeric::{pow2, pow2_exponent};
use crate::polyalg::{aberth_solve, circle_guesses, dft_interpolate, AberthOptions, LaurentPoly, RootSet, RootTarget};

type C64 = Complex64;

/// Largest truncation accepted for zero extraction.
pub const ZEROS_N_CAP: usize = 150;

const VALIDATION_POINTS: usize = 16;
const VALIDATION_SEED: u64 = 0x5eed_2e40;

/// Exponent range `[k_bottom, k_top]` of `f_n` as a Laurent polynomial in `z`.
pub fn exponent_range(pot: &FourierPotential, n: usize) -> (i64, i64) {
    match pot.support() {
        Some((lo, hi)) => (n as i64 * i64::from(lo.min(0)), n as i64 * i64::from(hi.max(0))),
        None => (0, 0),
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("truncation length n must be >= 1".into()));
    }
    if n > ZEROS_N_CAP {
        return Err(Error::InvalidInput(format!(
            "zero extraction is limited to n <= {ZEROS_N_CAP} in double precision, got {n}"
        )));
    }
    Ok(())
}

/// Coefficients of `f_n(E, ·)` by sampling the recurrence on `|z| = ρ` and
/// interpolating; checked against the recurrence at fresh points.
pub fn fn_laurent(pot: &FourierPotential, alpha: f64, energy: C64, n: usize, rho: f64) -> Result<LaurentPoly> {
    check_n(n)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidInput(format!("sample radius must be positive, got {rho}")));
    }
    let (k_min, k_max) = exponent_range(pot, n);
    let width = (k_max - k_min + 1) as usize;
    let big_n = width.next_power_of_two().max(2);
    let params = CocycleParams::new(alpha, energy, -rho.ln(), n)?;
    let pairs: Vec<_> = (0..big_n)
        .into_par_iter()
        .map(|j| det_recurrence(pot, &params, TAU * j as f64 / big_n as f64))
        .collect::<Result<_>>()?;
    let reference = pairs.iter().map(|p| p.log_scale).fold(f64::NEG_INFINITY, f64::max);
    let values: Vec<C64> = pairs.iter().map(|p| p.at_scale(reference).0).collect();
    let scaled = dft_interpolate(&values, rho, k_min, k_max)?;
    let factor = reference.exp();
    if !factor.is_finite() {
        return Err(Error::IllConditioned {
            what: "interpolation",
            rel_err: f64::INFINITY,
        });
    }
    let poly = LaurentPoly::new(
        scaled.k_min(),
        scaled.coeffs().iter().map(|c| c * factor).collect(),
    );

    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max) * factor;
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
    let mut worst = 0.0f64;
    for _ in 0..VALIDATION_POINTS {
        let x = rng.gen_range(0.0..TAU);
        let pair = det_recurrence(pot, &params, x)?;
        let direct = pair.f_cur * pair.log_scale.exp();
        let got = poly.eval(C64::from_polar(rho, x));
        let scale = if sup > 0.0 { sup } else { 1.0 };
        worst = worst.max((got - direct).norm() / scale);
    }
    if !(worst <= 1e-8) {
        return Err(Error::IllConditioned {
            what: "interpolation",
            rel_err: worst,
        });
    }
    Ok(poly)
}

/// `Σ v̂_k u^k` and `Σ k v̂_k u^k`.
fn series_with_derivative(pot: &FourierPotential, u: C64) -> (C64, C64) {
    let mut v = C64::new(0.0, 0.0);
    let mut dv = C64::new(0.0, 0.0);
    for (&k, &c) in pot.coeffs().iter().rev() {
        let t = c * u.powi(k);
        v += t;
        dv += t * f64::from(k);
    }
    (v, dv)
}

/// `z^{−k_bottom} f_n(E, z)` evaluated through the recurrence, with the
/// derivative carried alongside. No coefficients are formed.
pub struct ZeroTarget<'a> {
    pot: &'a FourierPotential,
    energy: C64,
    rot: Vec<C64>,
    k_bottom: i64,
    degree: usize,
}

impl<'a> ZeroTarget<'a> {
    pub fn new(pot: &'a FourierPotential, alpha: f64, energy: C64, n: usize) -> Result<Self> {
        let params = CocycleParams::new(alpha, energy, 0.0, n)?;
        let (k_bottom, k_top) = exponent_range(pot, n);
        Ok(Self {
            pot,
            energy,
            rot: (1..=n).map(|l| C64::cis(orbit_phase(0.0, l, params.alpha))).collect(),
            k_bottom,
            degree: (k_top - k_bottom) as usize,
        })
    }

    /// `(f_n, f_n')` at a common (discarded) scale.
    fn eval(&self, z: C64) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        let (mut f, mut fp) = (C64::new(1.0, 0.0), zero);
        let (mut g, mut gp) = (zero, zero);
        let zinv = z.inv();
        for w in &self.rot {
            let (v, kv) = series_with_derivative(self.pot, w * z);
            let a = self.energy - v;
            let dv = kv * zinv;
            let f_next = a * f - fp;
            let g_next = a * g - gp - dv * f;
            fp = f;
            f = f_next;
            gp = g;
            g = g_next;
            let m = f.norm().max(fp.norm()).max(g.norm()).max(gp.norm());
            if !(0.5..=2.0).contains(&m) && m.is_finite() && m > 0.0 {
                let s = pow2(-pow2_exponent(m));
                f *= s;
                fp *= s;
                g *= s;
                gp *= s;
            }
        }
        (f, g)
    }

    /// Log-modulus ratio of the extreme coefficients, used to place the
    /// starting circle.
    fn start_radius(&self) -> f64 {
        let n = self.rot.len() as f64;
        let Some((lo, hi)) = self.pot.support() else {
            return 1.0;
        };
        let top = if hi > 0 { self.pot.coeff(hi).norm().ln() * n } else { 0.0 };
        let bottom = if lo < 0 { self.pot.coeff(lo).norm().ln() * n } else { 0.0 };
        if self.degree == 0 {
            return 1.0;
        }
        ((bottom - top) / self.degree as f64).exp()
    }
}

impl RootTarget for ZeroTarget<'_> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn newton_correction(&self, z: C64) -> C64 {
        let (f, g) = self.eval(z);
        let log_deriv = g / f - self.k_bottom as f64 / z;
        log_deriv.inv()
    }

}

/// All zeros of `z^{−k_bottom} f_n(E, z)`; `2n` of them for the AMO.
pub fn fn_zeros(pot: &FourierPotential, alpha: f64, energy: C64, n: usize, opts: &AberthOptions) -> Result<RootSet> {
    check_n(n)?;
    let target = ZeroTarget::new(pot, alpha, energy, n)?;
    if target.degree == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            residuals: Vec::new(),
            converged: true,
            iterations: 0,
        });
    }
    let guesses = circle_guesses(C64::new(0.0, 0.0), target.start_radius(), target.degree);
    Ok(aberth_solve(&target, guesses, opts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCircleReport {
    pub n: usize,
    pub degree: usize,
    #[serde(skip)]
    pub roots: Vec<C64>,
    /// `−log |z_i|` per root.
    pub radii_log: Vec<f64>,
    pub turning_points: Vec<f64>,
    /// `(γ_j, fraction of roots within epsilon of γ_j)`.
    pub fractions: Vec<(f64, f64)>,
    /// Index into `turning_points` per root.
    pub assigned: Vec<Option<usize>>,
    pub epsilon: f64,
    pub unassigned_fraction: f64,
    pub max_residual: f64,
}

/// Turning points to test against: the fitted breakpoints, mirrored to
/// `±γ_j` when the potential is real and `E` is real.
pub fn circle_levels(pl: &PiecewiseLinear, symmetric: bool, epsilon: f64) -> Vec<f64> {
    let mut g: Vec<f64> = pl.breakpoints.clone();
    if symmetric {
        g.extend(pl.breakpoints.iter().map(|v| -v));
    }
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() < 0.5 * epsilon);
    g
}

/// Classifies the zeros of `f_n(E, ·)` by their distance (in `−log|z|`) to
/// the turning points of `pl`.
pub fn zero_circle_report(
    pot: &FourierPotential,
    alpha: f64,
    energy: C64,
    n: usize,
    pl: &PiecewiseLinear,
    epsilon: f64,
) -> Result<ZeroCircleReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let probe = if (pl.y_min..=pl.y_max).contains(&0.0) { 0.0 } else { pl.y_min };
    if pl.value_at(probe) <= 3.0 * pl.fit_residual {
        return Err(Error::Hypothesis(format!(
            "the fitted Lyapunov exponent at y={probe} is not positive; zero circles are not predicted"
        )));
    }
    let rs = fn_zeros(pot, alpha, energy, n, &AberthOptions::default())?.require_converged()?;
    let symmetric = pot.is_real() && energy.im == 0.0;
    let levels = circle_levels(pl, symmetric, epsilon);
    let radii_log: Vec<f64> = rs.roots.iter().map(|z| -z.norm().ln()).collect();
    let assigned: Vec<Option<usize>> = radii_log
        .iter()
        .map(|&r| {
            levels
                .iter()
                .enumerate()
                .map(|(j, g)| (j, (r - g).abs()))
                .filter(|&(_, d)| d < epsilon)
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(j, _)| j)
        })
        .collect();
    let total = rs.len().max(1) as f64;
    let fractions = levels
        .iter()
        .enumerate()
        .map(|(j, &g)| (g, assigned.iter().filter(|a| **a == Some(j)).count() as f64 / total))
        .collect();
    let unassigned = if rs.is_empty() {
        0.0
    } else {
        assigned.iter().filter(|a| a.is_none()).count() as f64 / total
    };
    Ok(ZeroCircleReport {
        n,
        degree: rs.len(),
        max_residual: rs.max_residual(),
        roots: rs.roots,
        radii_log,
        turning_points: levels,
        fractions,
        assigned,
        epsilon,
        unassigned_fraction: unassigned,
    })
}

/// Every root has a partner within `tol · max(1, |p|)` of its reflection
/// `p = 1/conj(z)`.
pub fn symmetry_check(rs: &RootSet, tol: f64) -> bool {
    rs.roots.iter().all(|z| {
        let p = z.conj().inv();
        let reach = tol * p.norm().max(1.0);
        rs.roots.iter().any(|w| (w - p).norm() <= reach)
    })
}
