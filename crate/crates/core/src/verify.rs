//! The acceptance suite: eleven desk-scale checks of the identities between
//! Lyapunov exponent, acceleration, winding number, zeros and density of
//! states. Shared by the `verify` command and the `acceptance` test target.

use std::f64::consts::{LN_2, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::accel::{acceleration_at, fit_quantized, le_profile, local_slopes, PiecewiseLinear, Side};
use crate::cocycle::{
    averaged_le, averaged_le_refined, converged_le, det_recurrence, ldt_deviation_fraction, transfer_product,
    CocycleParams, LeConfig,
};
use crate::dos::{accden_check, charpoly_in_e, probe_circle, thouless_report, truncated_spectrum, AccdenConfig};
use crate::error::{Error, Result};
use crate::model::{amo_le_oracle, amo_potential, FourierPotential, GOLDEN_ALPHA};
use crate::polyalg::{aberth_roots, dft_interpolate, jensen_residual, sample_circle, LaurentPoly};
use crate::winding::{count_consistency, winding_limit, winding_n, LimitConfig};
use crate::zeros::{fn_zeros, symmetry_check, zero_circle_report};

type C64 = Complex64;

/// `log((3 + √5)/2)`: spectral radius of the free cocycle at `E = 3`.
pub const FREE_LE_AT_3: f64 = 0.962_423_650_119_206_9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Multiplies every numeric tolerance; values below 1 tighten the suite.
    pub tolerance_scale: f64,
    pub seed: u64,
    /// Randomized cases per property in criterion 10.
    pub cases_per_property: usize,
    /// Criteria to run (1 to 11); empty means all.
    pub criteria: Vec<u8>,
    /// Enforce the stated wall-clock limits.
    pub check_runtime: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            tolerance_scale: 1.0,
            seed: 20_240_917,
            cases_per_property: 75,
            criteria: Vec::new(),
            check_runtime: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub time_limit: Option<f64>,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} criterion {:>2} {}: {} [{:.1} s]",
            self.id, self.name, self.detail, self.seconds
        )
    }
}

struct Check {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: String) -> Result<Check> {
    Ok(Check { passed, detail })
}

const NAMES: [&str; 11] = [
    "free-cocycle Lyapunov exponent",
    "almost-Mathieu Lyapunov formula",
    "acceleration quantization",
    "topological transition",
    "zero circles",
    "count identity",
    "Jensen identity on the annulus",
    "Thouless formula",
    "accden identity",
    "property suites",
    "empirical large deviations",
];

const LIMITS: [Option<f64>; 11] = [
    Some(2.0),
    Some(60.0),
    None,
    Some(300.0),
    Some(120.0),
    None,
    Some(30.0),
    Some(300.0),
    None,
    None,
    None,
];

/// Runs one criterion, timing it and turning errors into failures.
pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Outcome {
    let idx = usize::from(id.clamp(1, 11) - 1);
    let start = Instant::now();
    let res = match id {
        1 => c1_free_le(cfg),
        2 => c2_amo_formula(cfg),
        3 => c3_quantization(cfg),
        4 => c4_transition(cfg),
        5 => c5_zero_circles(cfg),
        6 => c6_count_identity(cfg),
        7 => c7_jensen(cfg),
        8 => c8_thouless(cfg),
        9 => c9_accden(cfg),
        10 => c10_properties(cfg),
        11 => c11_ldt(cfg),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let limit = LIMITS[idx];
    let (mut passed, mut detail) = match res {
        Ok(c) => (c.passed, c.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(l) = limit.filter(|_| cfg.check_runtime) {
        if seconds >= l {
            passed = false;
            detail.push_str(&format!("; runtime {seconds:.1} s exceeds {l} s"));
        }
    }
    Outcome {
        id,
        name: NAMES[idx],
        passed,
        detail,
        seconds,
        time_limit: limit,
    }
}

/// Runs the selected criteria in order, calling `report` after each.
pub fn run_all(cfg: &VerifyConfig, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let ids: Vec<u8> = if cfg.criteria.is_empty() {
        (1..=11).collect()
    } else {
        cfg.criteria.clone()
    };
    ids.into_iter()
        .map(|id| {
            let o = run_criterion(id, cfg);
            report(&o);
            o
        })
        .collect()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn amo() -> FourierPotential {
    amo_potential(0.5).expect("valid coupling")
}

fn c1_free_le(cfg: &VerifyConfig) -> Result<Check> {
    let r = converged_le(&FourierPotential::zero(), GOLDEN_ALPHA, c(3.0, 0.0), 0.0, 1e-4, &LeConfig::default())?;
    let err = (r.value - FREE_LE_AT_3).abs();
    check(
        err <= 1e-3 * cfg.tolerance_scale,
        format!("L = {:.6}, |L - log((3+sqrt 5)/2)| = {err:.2e}", r.value),
    )
}

fn c2_amo_formula(cfg: &VerifyConfig) -> Result<Check> {
    let pot = amo();
    let mut worst = 0.0f64;
    let mut worst_y = 0.0;
    for y in [0.0, 0.2, 0.5, 0.7, 1.0, 1.5] {
        let p = CocycleParams::new(GOLDEN_ALPHA, c(0.0, 0.0), y, 4096)?;
        let l = averaged_le(&pot, &p, 512)?.value;
        let err = (l - amo_le_oracle(0.5, y, 0.0)).abs();
        if err > worst {
            worst = err;
            worst_y = y;
        }
    }
    check(
        worst <= 5e-3 * cfg.tolerance_scale,
        format!("max |L - max(log 0.5 + y, 0)| = {worst:.2e} at y = {worst_y}"),
    )
}

fn profile_fit(pot: &FourierPotential, e: C64, y_max: f64, points: usize) -> Result<(crate::accel::LEProfile, PiecewiseLinear)> {
    let prof = le_profile(pot, GOLDEN_ALPHA, e, 0.0, y_max, points, 1e-4, &LeConfig::default())?;
    let pl = fit_quantized(&prof, 0.1)?;
    Ok((prof, pl))
}

fn c3_quantization(cfg: &VerifyConfig) -> Result<Check> {
    let pot = amo();
    let mut parts = Vec::new();
    let mut ok = true;
    for e in [c(3.5, 0.0), c(4.0, 0.0), c(2.0, 2.0)] {
        let (prof, pl) = profile_fit(&pot, e, 2.75, 111)?;
        let s = local_slopes(&prof);
        let worst = prof
            .y_grid
            .iter()
            .zip(&s)
            .filter(|(y, _)| pl.breakpoints.iter().all(|g| (*y - g).abs() > 0.05))
            .map(|(_, v)| (v - v.round()).abs())
            .fold(0.0, f64::max);
        ok &= worst < 0.05 * cfg.tolerance_scale;
        parts.push(format!("E={e}: slopes {:?}, max deviation {worst:.1e}", pl.slopes));
    }
    check(ok, parts.join("; "))
}

fn c4_transition(cfg: &VerifyConfig) -> Result<Check> {
    let pot = amo();
    let e = c(3.5, 0.0);
    let l0 = converged_le(&pot, GOLDEN_ALPHA, e, 0.0, 1e-4, &LeConfig::default())?.value;
    let gamma = l0 + LN_2;
    let (_, pl) = profile_fit(&pot, e, 2.75, 56)?;
    let Some(&bp) = pl.breakpoints.first() else {
        return check(false, format!("no breakpoint found, slopes {:?}", pl.slopes));
    };
    let mut ok = (bp - gamma).abs() <= 0.02 * cfg.tolerance_scale && pl.breakpoints.len() == 1;
    let mut parts = vec![format!("breakpoint {bp:.4} vs L0 + log 2 = {gamma:.4}")];
    let lim = LimitConfig::default();
    for (y, want) in [(0.5 * gamma, 0i64), (gamma + 0.3, 1)] {
        for side in [Side::Plus, Side::Minus] {
            let nu = winding_limit(&pot, GOLDEN_ALPHA, e, y, side, &lim)?.value;
            let omega = acceleration_at(&pl, y, side)?;
            ok &= nu == want && omega == want;
            parts.push(format!("y={y:.3} {side:?}: nu={nu} omega={omega}"));
        }
    }
    check(ok, parts.join("; "))
}

fn c5_zero_circles(cfg: &VerifyConfig) -> Result<Check> {
    let pot = amo();
    let e = c(3.5, 0.0);
    let n = 100;
    let l0 = converged_le(&pot, GOLDEN_ALPHA, e, 0.0, 1e-4, &LeConfig::default())?.value;
    // L(3.5, iy) = max(log 0.5 + y, L0)
    let pl = PiecewiseLinear::from_lines(vec![0, 1], vec![l0, -LN_2], 0.0, 3.0)?;
    let rep = zero_circle_report(&pot, GOLDEN_ALPHA, e, n, &pl, 0.05)?;
    let rs = fn_zeros(&pot, GOLDEN_ALPHA, e, n, &Default::default())?;
    let sym = symmetry_check(&rs, 1e-6);
    let assigned = 1.0 - rep.unassigned_fraction;
    let fractions_ok = rep.fractions.len() == 2
        && rep.fractions.iter().all(|(_, f)| (f - 0.5).abs() <= 0.05 * cfg.tolerance_scale);
    let ok = rep.degree == 2 * n
        && rep.max_residual < 1e-8 * cfg.tolerance_scale
        && assigned >= 0.9
        && fractions_ok
        && sym;
    check(
        ok,
        format!(
            "{} roots, max residual {:.1e}, {:.1}% within 0.05 of +-{:.4}, fractions {:?}, symmetric {sym}",
            rep.degree,
            rep.max_residual,
            100.0 * assigned,
            l0 + LN_2,
            rep.fractions.iter().map(|(g, f)| format!("{g:.3}:{f:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn c6_count_identity(_cfg: &VerifyConfig) -> Result<Check> {
    let pot = amo();
    let e = c(3.5, 0.0);
    let annuli = [(0.5, 1.0), (1.5, 2.2), (-2.2, -1.5), (-2.5, 2.5), (1.0, 3.0)];
    let mut bad = Vec::new();
    let mut nontrivial = 0;
    for n in [20, 60, 100] {
        for &(y1, y2) in &annuli {
            let chk = count_consistency(&pot, GOLDEN_ALPHA, e, y1, y2, n)?;
            if chk.interior + chk.boundary > 0 {
                nontrivial += 1;
            }
            if chk.doubled_residual != 0 {
                bad.push(format!("n={n} ({y1},{y2}): {chk:?}"));
            }
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            format!("15 annuli exact ({nontrivial} containing zeros)")
        } else {
            bad.join("; ")
        },
    )
}

/// Random polynomial with known roots kept `1e−3` away from both circles.
fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize, r1: f64, r2: f64) -> (LaurentPoly, Vec<C64>) {
    let d = rng.gen_range(1..=max_degree);
    let mut roots = Vec::with_capacity(d);
    while roots.len() < d {
        let r = rng.gen_range(0.3..2.2f64);
        if (r - r1).abs() < 1e-3 * r1 || (r - r2).abs() < 1e-3 * r2 {
            continue;
        }
        roots.push(C64::from_polar(r, rng.gen_range(0.0..TAU)));
    }
    let lead = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
    let p = LaurentPoly::from_roots(&roots, lead);
    let shift = rng.gen_range(-3i64..=3);
    (LaurentPoly::new(shift, p.coeffs().to_vec()), roots)
}

fn c7_jensen(cfg: &VerifyConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7);
    let (r1, r2) = (0.7, 1.3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (p, _) = random_poly(&mut rng, 40, r1, r2);
        let rep = jensen_residual(&p, r1, r2, 2 * p.degree() + 16)?;
        worst = worst.max(rep.residual);
    }
    check(
        worst < 1e-8 * cfg.tolerance_scale,
        format!("100 polynomials, max residual {worst:.2e}"),
    )
}

fn c8_thouless(cfg: &VerifyConfig) -> Result<Check> {
    let free = thouless_report(
        &FourierPotential::zero(),
        GOLDEN_ALPHA,
        0.0,
        200,
        1,
        &probe_circle(c(0.0, 0.0), 3.0, 16),
        0.1,
        1e-4,
    )?;
    let amo_rep = thouless_report(&amo(), GOLDEN_ALPHA, 1.0, 128, 64, &probe_circle(c(0.0, 0.0), 6.0, 16), 0.1, 1e-3)?;
    let counted = |r: &crate::dos::ThoulessReport| r.probes.iter().filter(|p| !p.excluded).count();
    let ok = free.max_residual < 0.05 * cfg.tolerance_scale
        && amo_rep.max_residual < 0.1 * cfg.tolerance_scale
        && counted(&free) == 16
        && counted(&amo_rep) == 16;
    check(
        ok,
        format!(
            "free n=200: max residual {:.2e} over {} probes; AMO y=1 n=128 S=64: {:.2e} over {} probes",
            free.max_residual,
            counted(&free),
            amo_rep.max_residual,
            counted(&amo_rep)
        ),
    )
}

fn c9_accden(cfg: &VerifyConfig) -> Result<Check> {
    let r = accden_check(&amo(), GOLDEN_ALPHA, c(3.5, 0.0), 1.5, 128, 64, &AccdenConfig::default())?;
    check(
        r.residual < 0.1 * cfg.tolerance_scale,
        format!("lhs {:.5}, rhs {:.5}, |lhs - rhs| = {:.2e}", r.lhs, r.rhs, r.residual),
    )
}

fn random_potential(rng: &mut ChaCha8Rng, real: bool) -> FourierPotential {
    let m = rng.gen_range(1..=3i32);
    let mut terms = Vec::new();
    for k in 1..=m {
        let a = C64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..TAU));
        if real {
            terms.push((k, a));
            terms.push((-k, a.conj()));
        } else {
            terms.push((k, a));
            terms.push((-k, C64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..TAU))));
        }
    }
    terms.push((0, c(rng.gen_range(-1.0..1.0), if real { 0.0 } else { rng.gen_range(-1.0..1.0) })));
    FourierPotential::new(terms).expect("finite coefficients")
}

fn random_energy(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-4.0..4.0), rng.gen_range(-2.0..2.0))
}

/// `(f_{n−1}, f_{n−2})` with the conventions `f_0 = 1`, `f_{−1} = 0`.
fn f_at(pot: &FourierPotential, p: &CocycleParams, x: f64, n: i64) -> Result<C64> {
    match n {
        -1 => Ok(c(0.0, 0.0)),
        0 => Ok(c(1.0, 0.0)),
        _ => {
            let pair = det_recurrence(pot, &p.with_n(n as usize), x)?;
            Ok(pair.f_cur * pair.log_scale.exp())
        }
    }
}

fn c10_properties(cfg: &VerifyConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k = cfg.cases_per_property.max(1);
    let tol = cfg.tolerance_scale;
    let mut failures: Vec<String> = Vec::new();
    let mut cases = 0usize;

    // unimodularity, relative to the conditioning ‖M‖² of the determinant
    for _ in 0..k {
        let pot = random_potential(&mut rng, false);
        let n = rng.gen_range(1..=400);
        let p = CocycleParams::new(GOLDEN_ALPHA, random_energy(&mut rng), rng.gen_range(-1.0..1.0), n)?;
        let m = transfer_product(&pot, &p, rng.gen_range(0.0..TAU))?;
        let [[a, b], [cc, d]] = m.m;
        let det_scaled = a * d - b * cc;
        let norm2 = (2.0 * m.log_norm() - 2.0 * m.log_scale).exp();
        let err = (det_scaled - (-2.0 * m.log_scale).exp()).norm() / norm2;
        cases += 1;
        if !(err <= n as f64 * 1e-12 * tol) {
            failures.push(format!("unimodularity n={n}: {err:e}"));
        }
    }
    // transfer matrix entries in terms of Dirichlet determinants
    for _ in 0..k {
        let pot = random_potential(&mut rng, false);
        let n = rng.gen_range(1..=50usize);
        let e = random_energy(&mut rng);
        let p = CocycleParams::new(GOLDEN_ALPHA, e, rng.gen_range(-1.0..1.0), n)?;
        let x = rng.gen_range(0.0..TAU);
        let m = transfer_product(&pot, &p, x)?.value();
        let xa = x + GOLDEN_ALPHA;
        let want = [
            [f_at(&pot, &p, x, n as i64)?, -f_at(&pot, &p, xa, n as i64 - 1)?],
            [f_at(&pot, &p, x, n as i64 - 1)?, -f_at(&pot, &p, xa, n as i64 - 2)?],
        ];
        let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        let err = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (m[i][j] - want[i][j]).norm() / scale)
            .fold(0.0, f64::max);
        cases += 1;
        if !(err <= 1e-9 * tol) {
            failures.push(format!("entry identity n={n}: {err:e}"));
        }
    }
    // Vieta: eigenvalue trace and determinant, plus the charpoly trace coefficient
    for _ in 0..k {
        let pot = random_potential(&mut rng, false);
        let n = rng.gen_range(1..=40usize);
        let (x, y) = (rng.gen_range(0.0..TAU), rng.gen_range(-1.0..1.0));
        cases += 1;
        match truncated_spectrum(&pot, GOLDEN_ALPHA, x, y, n) {
            Ok(_) => {}
            Err(e) => failures.push(format!("spectrum n={n}: {e}")),
        }
        if n <= 12 {
            let cp = charpoly_in_e(&pot, GOLDEN_ALPHA, x, y, n)?;
            let p = CocycleParams::new(GOLDEN_ALPHA, c(0.0, 0.0), y, n)?;
            let tr: C64 = (1..=n)
                .map(|j| pot.eval(c(x + j as f64 * p.alpha, y)))
                .sum();
            let err = (cp.coeff(n as i64 - 1) + tr).norm() / tr.norm().max(1.0);
            if !(err <= 1e-9 * tol) {
                failures.push(format!("charpoly trace n={n}: {err:e}"));
            }
        }
    }
    // DFT round trip
    for _ in 0..k {
        let k_min = rng.gen_range(-15i64..=0);
        let width = rng.gen_range(1i64..=31);
        let coeffs: Vec<C64> = (0..width).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let p = LaurentPoly::new(k_min, coeffs.clone());
        let rho = rng.gen_range(0.5..2.0);
        let big_n = (width as usize).next_power_of_two();
        let back = dft_interpolate(&sample_circle(&p, rho, big_n), rho, k_min, k_min + width - 1)?;
        // coefficient k is recovered from samples of size ~ max_j |c_j| ρ^j
        let size = (0..width)
            .map(|j| coeffs[j as usize].norm() * rho.powi((k_min + j) as i32))
            .fold(0.0, f64::max);
        let err = (0..width)
            .map(|j| (back.coeff(k_min + j) - coeffs[j as usize]).norm() * rho.powi((k_min + j) as i32) / size)
            .fold(0.0, f64::max);
        cases += 1;
        if !(err < 1e-10 * tol) {
            failures.push(format!("dft round trip width={width}: {err:e}"));
        }
    }
    // root reconstruction
    for _ in 0..k {
        let (p, _) = random_poly(&mut rng, 30, 0.7, 1.3);
        let poly = LaurentPoly::new(0, p.coeffs().to_vec());
        let rs = aberth_roots(&poly, 1e-14, 2000)?;
        let lead = poly.coeffs()[poly.degree()];
        let back = LaurentPoly::from_roots(&rs.roots, lead);
        let moduli: Vec<C64> = rs.roots.iter().map(|z| c(-z.norm(), 0.0)).collect();
        let scale = LaurentPoly::from_roots(&moduli, c(lead.norm(), 0.0));
        let err = (0..=poly.degree() as i64)
            .map(|j| (poly.coeff(j) - back.coeff(j)).norm() / scale.coeff(j).norm())
            .fold(0.0, f64::max);
        cases += 1;
        if !rs.converged || !(err <= 1e-7 * tol) {
            failures.push(format!("reconstruction degree {}: {err:e}", poly.degree()));
        }
    }
    // evenness of the exponent in y for real potentials and real energies
    for _ in 0..k {
        let pot = random_potential(&mut rng, true);
        let e = c(rng.gen_range(-4.0..4.0), 0.0);
        let y = rng.gen_range(0.05..1.0);
        let n = rng.gen_range(16..=256usize);
        let p = CocycleParams::new(GOLDEN_ALPHA, e, y, n)?;
        let up = averaged_le_refined(&pot, &p, 16)?;
        let down = averaged_le_refined(&pot, &p.with_y(-y), 16)?;
        let err = (up.value - down.value).abs();
        cases += 1;
        if !(err <= 2.0 * (up.est_error + down.est_error) + 1e-12 * tol) {
            failures.push(format!("evenness y={y}: {err:e}"));
        }
    }
    // n·ν_n is an integer
    for _ in 0..k {
        let pot = random_potential(&mut rng, false);
        let n = rng.gen_range(1..=60usize);
        let e = random_energy(&mut rng);
        let y = rng.gen_range(-1.5..1.5);
        let p = CocycleParams::new(GOLDEN_ALPHA, e, y, n)?;
        let grid = (4 * n * pot.degree() as usize).next_power_of_two().max(64);
        let w = match winding_n(&pot, &p, grid) {
            Err(Error::ZeroOnContour { .. }) => winding_n(&pot, &p.with_y(y + 1e-3), grid),
            r => r,
        };
        cases += 1;
        match w {
            Ok(w) if (w.nu_n * n as f64 + w.total_winding as f64).abs() < 1e-9 => {}
            Ok(w) => failures.push(format!("winding n={n}: nu_n={} W={}", w.nu_n, w.total_winding)),
            Err(e) => failures.push(format!("winding n={n}: {e}")),
        }
    }
    let head: Vec<String> = failures.iter().take(5).cloned().collect();
    check(
        failures.is_empty() && cases >= 500,
        format!("{cases} cases, {} failures{}", failures.len(), if head.is_empty() { String::new() } else { format!(": {}", head.join("; ")) }),
    )
}

fn c11_ldt(cfg: &VerifyConfig) -> Result<Check> {
    let pot = amo();
    let p = CocycleParams::new(GOLDEN_ALPHA, c(3.5, 0.0), 0.0, 500)?;
    let grid = 1024;
    let short = ldt_deviation_fraction(&pot, &p, 0.1, grid)?;
    let long = ldt_deviation_fraction(&pot, &p.with_n(4000), 0.1, grid)?;
    let t = cfg.tolerance_scale;
    check(
        long <= short + 0.02 * t && short <= 0.2 * t && long <= 0.2 * t,
        format!("deviation fraction {short:.4} at n=500, {long:.4} at n=4000 (grid {grid})"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        let cfg = VerifyConfig {
            check_runtime: false,
            ..VerifyConfig::default()
        };
        for id in [1, 2] {
            let o = run_criterion(id, &cfg);
            assert!(o.passed, "{o}");
        }
    }

    #[test]
    fn broken_tolerance_fails() {
        let cfg = VerifyConfig {
            tolerance_scale: 1e-9,
            check_runtime: false,
            ..VerifyConfig::default()
        };
        assert!(!run_criterion(1, &cfg).passed);
        assert!(!run_criterion(12, &cfg).passed);
    }
}
