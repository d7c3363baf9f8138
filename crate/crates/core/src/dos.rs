//! Spectra of the Dirichlet truncations `H_n(x + iy)`, pooled eigenvalue
//! measures, their logarithmic potential, and the two identities linking it
//! to the Lyapunov exponent.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::accel::{fit_quantized, le_profile, PiecewiseLinear, DEFAULT_SLOPE_TOL};
use crate::cocycle::{converged_le, det_recurrence, CocycleParams, LeConfig};
use crate::error::{Error, Result};
use crate::model::{energy_bound, orbit_phase, phase_grid, FourierPotential};
use crate::numeric::{pow2, pow2_exponent, tree_sum};
use crate::polyalg::{aberth_solve, circle_guesses, dft_interpolate, AberthOptions, LaurentPoly, RootSet, RootTarget};

type C64 = Complex64;

pub const DEFAULT_GUARD: f64 = 0.1;

/// Recorded in every report: the limit statements assume the zero set of
/// the Lyapunov exponent at level `y` has zero area, which is not checked.
pub const AREA_ASSUMPTION: &str = "assumes the set {E: L(E, iy) = 0} has zero Lebesgue measure (not verified)";

/// Diagonal `v(x + iy + jα)`, `j = 1..n`.
fn diagonal(pot: &FourierPotential, alpha: f64, x: f64, y: f64, n: usize) -> Result<Vec<C64>> {
    let params = CocycleParams::new(alpha, C64::new(0.0, 0.0), y, n)?;
    (1..=n)
        .map(|j| {
            let v = pot.eval(C64::new(orbit_phase(x, j, params.alpha), y));
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinitePotential { re: x, im: y })
            }
        })
        .collect()
}

/// `E ↦ det(E − H_n(x + iy))`, monic of degree `n`, by interpolation on the
/// circle `|E| = energy_bound + 1`.
pub fn charpoly_in_e(pot: &FourierPotential, alpha: f64, x: f64, y: f64, n: usize) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::InvalidInput("truncation length n must be >= 1".into()));
    }
    let radius = energy_bound(pot, y) + 1.0;
    let m = n + 1;
    let at = |e: C64| -> Result<(C64, f64)> {
        let p = det_recurrence(pot, &CocycleParams::new(alpha, e, y, n)?, x)?;
        Ok((p.f_cur, p.log_scale))
    };
    let samples: Vec<(C64, f64)> = (0..m)
        .into_par_iter()
        .map(|j| at(C64::from_polar(radius, TAU * j as f64 / m as f64)))
        .collect::<Result<_>>()?;
    // |E|^n dominates on this circle, so a shared scale of radius^n is safe
    let reference = n as f64 * radius.ln();
    let values: Vec<C64> = samples.iter().map(|(f, s)| f * (s - reference).exp()).collect();
    let scaled = dft_interpolate(&values, radius, 0, n as i64)?;
    let factor = reference.exp();
    let raw: Vec<C64> = (0..=n as i64).map(|k| scaled.coeff(k) * factor).collect();
    let lead = raw[n];
    if !((lead - 1.0).norm() <= 1e-10) {
        return Err(Error::IllConditioned {
            what: "charpoly",
            rel_err: (lead - 1.0).norm(),
        });
    }
    let coeffs: Vec<C64> = raw.iter().map(|c| c / lead).collect();
    let poly = LaurentPoly::new(0, coeffs);

    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a7_b011);
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let e = C64::from_polar(radius, rng.gen_range(0.0..TAU));
        let (f, s) = at(e)?;
        let direct = f * s.exp();
        worst = worst.max((poly.eval(e) - direct).norm() / direct.norm());
    }
    if !(worst <= 1e-8) {
        return Err(Error::IllConditioned {
            what: "charpoly",
            rel_err: worst,
        });
    }
    Ok(poly)
}

/// `det(E − H_n)` in `E` through the recurrence, with derivative.
struct SpectrumTarget {
    diag: Vec<C64>,
}

impl SpectrumTarget {
    fn eval(&self, e: C64) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        let (mut f, mut fp) = (C64::new(1.0, 0.0), zero);
        let (mut g, mut gp) = (zero, zero);
        for v in &self.diag {
            let a = e - v;
            let f_next = a * f - fp;
            let g_next = f + a * g - gp;
            (fp, f) = (f, f_next);
            (gp, g) = (g, g_next);
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

    /// `log |det(E − H_n)|` without overflow.
    fn log_abs(&self, e: C64) -> f64 {
        let (mut f, mut fp, mut scale) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), 0.0f64);
        for v in &self.diag {
            let next = (e - v) * f - fp;
            (fp, f) = (f, next);
            let m = f.norm().max(fp.norm());
            if !(0.5..=2.0).contains(&m) && m.is_finite() && m > 0.0 {
                let k = pow2_exponent(m);
                let s = pow2(-k);
                f *= s;
                fp *= s;
                scale += f64::from(k) * std::f64::consts::LN_2;
            }
        }
        f.norm().ln() + scale
    }
}

impl RootTarget for SpectrumTarget {
    fn degree(&self) -> usize {
        self.diag.len()
    }

    fn newton_correction(&self, e: C64) -> C64 {
        let (f, g) = self.eval(e);
        f / g
    }

}

/// Eigenvalues of `H_n(x + iy)`, certified by the trace and determinant.
pub fn truncated_spectrum(pot: &FourierPotential, alpha: f64, x: f64, y: f64, n: usize) -> Result<RootSet> {
    if n == 0 {
        return Err(Error::InvalidInput("truncation length n must be >= 1".into()));
    }
    let diag = diagonal(pot, alpha, x, y, n)?;
    let trace: C64 = diag.iter().sum();
    let center = trace / n as f64;
    let spread = diag.iter().map(|v| (v - center).norm()).fold(0.0, f64::max);
    let target = SpectrumTarget { diag };
    let guesses = circle_guesses(center, spread + 2.0, n);
    let rs = aberth_solve(&target, guesses, &AberthOptions::default()).require_converged()?;

    let sum: C64 = rs.roots.iter().sum();
    let mass: f64 = rs.roots.iter().map(|e| e.norm()).sum::<f64>().max(1.0);
    let trace_tol = if n <= 64 { 1e-8 } else { 1e-6 };
    let trace_err = (sum - trace).norm() / mass;
    if !(trace_err <= trace_tol) {
        return Err(Error::RootCheck(format!(
            "eigenvalue sum misses the trace by {trace_err:e} (relative)"
        )));
    }
    // Π E_j = det H_n = (−1)^n det(0 − H_n)
    let want = target.log_abs(C64::new(0.0, 0.0));
    let got = tree_sum(&rs.roots.iter().map(|e| e.norm().ln()).collect::<Vec<_>>());
    if want.is_finite() && !((got - want).abs() <= 1e-6 * want.abs().max(1.0)) {
        return Err(Error::RootCheck(format!(
            "eigenvalue product has log-modulus {got}, determinant gives {want}"
        )));
    }
    Ok(rs)
}

/// Eigenvalues pooled over the phases `{2πs/S}` with weight `1/(nS)` each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalMeasure {
    #[serde(skip)]
    pub points: Vec<C64>,
    pub n: usize,
    pub phase_count: usize,
    pub weight: f64,
    pub y: f64,
}

pub fn empirical_dos(pot: &FourierPotential, alpha: f64, y: f64, n: usize, phases: usize) -> Result<EmpiricalMeasure> {
    if phases == 0 {
        return Err(Error::InvalidInput("need at least one phase sample".into()));
    }
    let xs: Vec<f64> = phase_grid(phases).collect();
    let spectra: Vec<RootSet> = xs
        .par_iter()
        .map(|&x| {
            truncated_spectrum(pot, alpha, x, y, n).map_err(|e| match e {
                Error::RootsNotConverged { .. } | Error::RootCheck(_) => {
                    Error::RootCheck(format!("spectrum at phase x={x}: {e}"))
                }
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EmpiricalMeasure {
        points: spectra.into_iter().flat_map(|r| r.roots).collect(),
        n,
        phase_count: phases,
        weight: 1.0 / (n * phases) as f64,
        y,
    })
}

/// `Σ weight · log|E − E_j|`; `−∞` when `E` is one of the points.
pub fn log_potential(mu: &EmpiricalMeasure, e: C64) -> f64 {
    let terms: Vec<f64> = mu.points.iter().map(|p| (e - p).norm().ln()).collect();
    if terms.contains(&f64::NEG_INFINITY) {
        return f64::NEG_INFINITY;
    }
    mu.weight * tree_sum(&terms)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThoulessProbe {
    pub re: f64,
    pub im: f64,
    pub potential: f64,
    /// Lyapunov exponent and residual; absent for excluded probes.
    pub lyapunov: Option<f64>,
    pub residual: Option<f64>,
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThoulessReport {
    pub y: f64,
    pub n: usize,
    pub phase_count: usize,
    pub guard: f64,
    pub probes: Vec<ThoulessProbe>,
    pub max_residual: f64,
    pub assumption: &'static str,
}

fn distance_to_cloud(mu: &EmpiricalMeasure, e: C64) -> f64 {
    mu.points.iter().map(|p| (e - p).norm()).fold(f64::INFINITY, f64::min)
}

/// Compares the log-potential of the pooled spectrum with the Lyapunov
/// exponent at probes farther than `guard` from every eigenvalue.
#[allow(clippy::too_many_arguments)]
pub fn thouless_report(
    pot: &FourierPotential,
    alpha: f64,
    y: f64,
    n: usize,
    phases: usize,
    probes: &[C64],
    guard: f64,
    le_tol: f64,
) -> Result<ThoulessReport> {
    if !(guard > 0.0) {
        return Err(Error::InvalidInput("guard distance must be positive".into()));
    }
    let mu = empirical_dos(pot, alpha, y, n, phases)?;
    thouless_from_measure(pot, alpha, &mu, probes, guard, le_tol)
}

/// As [`thouless_report`] for an already computed measure.
pub fn thouless_from_measure(
    pot: &FourierPotential,
    alpha: f64,
    mu: &EmpiricalMeasure,
    probes: &[C64],
    guard: f64,
    le_tol: f64,
) -> Result<ThoulessReport> {
    let mut out = Vec::with_capacity(probes.len());
    for &e in probes {
        let potential = log_potential(mu, e);
        let excluded = distance_to_cloud(mu, e) < guard;
        let (lyapunov, residual) = if excluded {
            (None, None)
        } else {
            let l = converged_le(pot, alpha, e, mu.y, le_tol, &LeConfig::default())?.value;
            (Some(l), Some((potential - l).abs()))
        };
        out.push(ThoulessProbe {
            re: e.re,
            im: e.im,
            potential,
            lyapunov,
            residual,
            excluded,
        });
    }
    let max_residual = out.iter().filter_map(|p| p.residual).fold(0.0, f64::max);
    Ok(ThoulessReport {
        y: mu.y,
        n: mu.n,
        phase_count: mu.phase_count,
        guard,
        probes: out,
        max_residual,
        assumption: AREA_ASSUMPTION,
    })
}

/// `count` probes evenly spaced on `|E − center| = radius`.
pub fn probe_circle(center: C64, radius: f64, count: usize) -> Vec<C64> {
    (0..count)
        .map(|k| center + C64::from_polar(radius, TAU * (k as f64 + 0.5) / count as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccdenConfig {
    pub profile_points: usize,
    pub le_tol: f64,
    pub slope_tol: f64,
}

impl Default for AccdenConfig {
    fn default() -> Self {
        Self {
            profile_points: 41,
            le_tol: 1e-3,
            slope_tol: DEFAULT_SLOPE_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccdenReport {
    pub energy_re: f64,
    pub energy_im: f64,
    pub y: f64,
    /// `L(E, i0) + ∫_0^y ω+`.
    pub lhs: f64,
    /// Log-potential of the pooled spectrum at level `y`.
    pub rhs: f64,
    pub residual: f64,
    pub l0: f64,
    pub fit: PiecewiseLinear,
    pub assumption: &'static str,
}

/// `∫_a^b` of the fitted slopes, piece by piece.
pub fn slope_integral(pl: &PiecewiseLinear, a: f64, b: f64) -> f64 {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend(pl.breakpoints.iter().copied());
    edges.push(f64::INFINITY);
    let total: f64 = pl
        .slopes
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let l = edges[j].max(lo);
            let r = edges[j + 1].min(hi);
            if r > l {
                k as f64 * (r - l)
            } else {
                0.0
            }
        })
        .sum();
    sign * total
}

/// Both sides of `L(E, i0) + ∫_0^y ω+(E, iỹ) dỹ = ∫ log|E − Ẽ| dN^{iy}(Ẽ)`:
/// the left from a fitted profile, the right from pooled spectra.
#[allow(clippy::too_many_arguments)]
pub fn accden_check(
    pot: &FourierPotential,
    alpha: f64,
    energy: C64,
    y: f64,
    n: usize,
    phases: usize,
    cfg: &AccdenConfig,
) -> Result<AccdenReport> {
    if !pot.is_real() {
        return Err(Error::Hypothesis("the identity is stated for real potentials".into()));
    }
    let (lo, hi) = if y == 0.0 { (0.0, 0.5) } else { (y.min(0.0), y.max(0.0)) };
    let profile = le_profile(pot, alpha, energy, lo, hi, cfg.profile_points.max(5), cfg.le_tol, &LeConfig::default())?;
    let fit = fit_quantized(&profile, cfg.slope_tol)?;
    let l0 = fit.value_at(0.0);
    if l0 <= 3.0 * fit.fit_residual {
        return Err(Error::Hypothesis(format!(
            "L(E, i0) = {l0} is not clearly positive (fit residual {})",
            fit.fit_residual
        )));
    }
    let lhs = l0 + slope_integral(&fit, 0.0, y);
    let mu = empirical_dos(pot, alpha, y, n, phases)?;
    let rhs = log_potential(&mu, energy);
    Ok(AccdenReport {
        energy_re: energy.re,
        energy_im: energy.im,
        y,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        l0,
        fit,
        assumption: AREA_ASSUMPTION,
    })
}
