//! The profile `y ↦ L(E, iy)`, its convex piecewise-linear fit with integer
//! slopes, one-sided accelerations and the regularity test.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::{converged_le, LeConfig};
use crate::error::{Error, Result};
use crate::model::FourierPotential;
use crate::numeric::tree_mean;

type C64 = Complex64;

pub const DEFAULT_SLOPE_TOL: f64 = 0.1;

/// Sampled Lyapunov exponents on an increasing `y` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LEProfile {
    #[serde(skip)]
    pub energy: C64,
    pub y_grid: Vec<f64>,
    pub l_values: Vec<f64>,
    pub est_error: Vec<f64>,
}

impl LEProfile {
    /// Builds a profile from existing samples (e.g. read from a file).
    pub fn from_samples(energy: C64, y_grid: Vec<f64>, l_values: Vec<f64>, est_error: Vec<f64>) -> Result<Self> {
        if y_grid.len() != l_values.len() || y_grid.len() != est_error.len() {
            return Err(Error::InvalidInput("profile columns have different lengths".into()));
        }
        if y_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("profile y grid must be strictly increasing".into()));
        }
        if l_values.iter().chain(&est_error).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("profile values must be finite".into()));
        }
        Ok(Self {
            energy,
            y_grid,
            l_values,
            est_error,
        })
    }

    pub fn len(&self) -> usize {
        self.y_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_grid.is_empty()
    }
}

/// Convex model `y ↦ max_j (slope_j · y + intercept_j)` over `[y_min, y_max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinear {
    pub breakpoints: Vec<f64>,
    pub slopes: Vec<i64>,
    pub intercepts: Vec<f64>,
    /// Grid interval `(last point of left piece, first point of right piece)`
    /// that contains each breakpoint.
    pub brackets: Vec<(f64, f64)>,
    /// Model value at `y_min`.
    pub anchor: f64,
    pub fit_residual: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl PiecewiseLinear {
    /// Model `max_j (slopes[j]·y + intercepts[j])` with strictly increasing
    /// slopes, e.g. from a closed-form Lyapunov exponent.
    pub fn from_lines(slopes: Vec<i64>, intercepts: Vec<f64>, y_min: f64, y_max: f64) -> Result<Self> {
        if slopes.is_empty() || slopes.len() != intercepts.len() || !(y_min < y_max) {
            return Err(Error::InvalidInput("need matching nonempty slopes and intercepts".into()));
        }
        if slopes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("slopes must be strictly increasing".into()));
        }
        let breakpoints: Vec<f64> = (1..slopes.len())
            .map(|j| (intercepts[j - 1] - intercepts[j]) / (slopes[j] - slopes[j - 1]) as f64)
            .collect();
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("a line never attains the maximum".into()));
        }
        let mut pl = Self {
            brackets: breakpoints.iter().map(|&g| (g, g)).collect(),
            breakpoints,
            slopes,
            intercepts,
            anchor: 0.0,
            fit_residual: 0.0,
            y_min,
            y_max,
        };
        pl.anchor = pl.value_at(y_min);
        Ok(pl)
    }

    fn piece(&self, y: f64, side: Side) -> usize {
        match side {
            Side::Plus => self.breakpoints.iter().filter(|&&g| g <= y).count(),
            Side::Minus => self.breakpoints.iter().filter(|&&g| g < y).count(),
        }
    }

    pub fn value_at(&self, y: f64) -> f64 {
        let i = self.piece(y, Side::Plus);
        self.slopes[i] as f64 * y + self.intercepts[i]
    }

    /// `∫_a^b` of the model.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut cuts = vec![lo];
        cuts.extend(self.breakpoints.iter().copied().filter(|&g| g > lo && g < hi));
        cuts.push(hi);
        let total: f64 = cuts
            .windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (self.value_at(w[0]) + self.value_at(w[1])))
            .sum();
        sign * total
    }
}

/// Samples [`converged_le`] on `points` equally spaced values of `y`.
/// Non-real potentials must not mix signs of `y`.
#[allow(clippy::too_many_arguments)]
pub fn le_profile(
    pot: &FourierPotential,
    alpha: f64,
    energy: C64,
    y_min: f64,
    y_max: f64,
    points: usize,
    tol: f64,
    cfg: &LeConfig,
) -> Result<LEProfile> {
    if !(y_min < y_max) {
        return Err(Error::InvalidInput(format!("empty y range [{y_min}, {y_max}]")));
    }
    if points < 5 {
        return Err(Error::InvalidInput(format!("a profile needs at least 5 points, got {points}")));
    }
    if !pot.is_real() && y_min < 0.0 && y_max > 0.0 {
        return Err(Error::InvalidInput(
            "profiles of a non-real potential must not cross y = 0; fit each side separately".into(),
        ));
    }
    let step = (y_max - y_min) / (points - 1) as f64;
    let y_grid: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { y_max } else { y_min + step * i as f64 })
        .collect();
    let results: Vec<_> = y_grid
        .par_iter()
        .map(|&y| {
            converged_le(pot, alpha, energy, y, tol, cfg).map_err(|e| Error::ProfilePoint {
                y,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    Ok(LEProfile {
        energy,
        l_values: results.iter().map(|r| r.value).collect(),
        est_error: results.iter().map(|r| r.est_error).collect(),
        y_grid,
    })
}

/// Finite-difference slopes: central inside, one-sided at the two ends.
pub fn local_slopes(profile: &LEProfile) -> Vec<f64> {
    let (y, l) = (&profile.y_grid, &profile.l_values);
    let n = y.len();
    (0..n)
        .map(|i| {
            let a = i.saturating_sub(1);
            let b = (i + 1).min(n - 1);
            (l[b] - l[a]) / (y[b] - y[a])
        })
        .collect()
}

struct Run {
    slope: i64,
    start: usize,
    end: usize, // inclusive
}

/// Fits a convex piecewise-linear function with integer slopes.
///
/// Local slopes are rounded; maximal runs of equal rounded slope form the
/// pieces. Points whose stencil straddles a change of run are not checked
/// for quantization, and runs with no such checkable point are treated as
/// transition debris. Breakpoints are intersections of consecutive lines.
pub fn fit_quantized(profile: &LEProfile, slope_tol: f64) -> Result<PiecewiseLinear> {
    let n = profile.len();
    if n < 5 {
        return Err(Error::InvalidInput(format!("a fit needs at least 5 points, got {n}")));
    }
    let (y, l) = (&profile.y_grid, &profile.l_values);
    let s = local_slopes(profile);
    let rounded: Vec<i64> = s.iter().map(|v| v.round() as i64).collect();

    let mut runs: Vec<Run> = Vec::new();
    for (i, &r) in rounded.iter().enumerate() {
        match runs.last_mut() {
            Some(last) if last.slope == r => last.end = i,
            _ => runs.push(Run {
                slope: r,
                start: i,
                end: i,
            }),
        }
    }

    // a point is checkable when its whole stencil sits inside its run
    let checkable = |run: &Run, i: usize| {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(n - 1);
        lo >= run.start && hi <= run.end
    };
    let mut supported: Vec<(i64, Vec<usize>, usize, usize)> = Vec::new();
    for run in &runs {
        let idx: Vec<usize> = (run.start..=run.end).filter(|&i| checkable(run, i)).collect();
        for &i in &idx {
            if (s[i] - run.slope as f64).abs() > slope_tol {
                return Err(Error::QuantizationViolated {
                    y: y[i],
                    slope: s[i],
                    tol: slope_tol,
                });
            }
        }
        if idx.is_empty() {
            continue;
        }
        match supported.last_mut() {
            Some(last) if last.0 == run.slope => {
                last.1.extend(idx);
                last.3 = run.end;
            }
            _ => supported.push((run.slope, idx, run.start, run.end)),
        }
    }
    if supported.is_empty() {
        let (i, _) = s
            .iter()
            .enumerate()
            .map(|(i, v)| (i, (v - v.round()).abs()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        return Err(Error::QuantizationViolated {
            y: y[i],
            slope: s[i],
            tol: slope_tol,
        });
    }
    for w in supported.windows(2) {
        if w[1].0 < w[0].0 {
            return Err(Error::ConvexityViolated {
                y: y[w[1].2],
                left: w[0].0,
                right: w[1].0,
            });
        }
    }

    let slopes: Vec<i64> = supported.iter().map(|p| p.0).collect();
    let intercepts: Vec<f64> = supported
        .iter()
        .map(|(k, idx, _, _)| {
            let vals: Vec<f64> = idx.iter().map(|&i| l[i] - *k as f64 * y[i]).collect();
            tree_mean(&vals)
        })
        .collect();
    let mut breakpoints = Vec::with_capacity(slopes.len() - 1);
    let mut brackets = Vec::with_capacity(slopes.len() - 1);
    for j in 1..slopes.len() {
        let g = (intercepts[j - 1] - intercepts[j]) / (slopes[j] - slopes[j - 1]) as f64;
        breakpoints.push(g);
        brackets.push((y[supported[j - 1].3], y[supported[j].2]));
    }
    if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::ConvexityViolated {
            y: breakpoints[0],
            left: slopes[0],
            right: slopes[slopes.len() - 1],
        });
    }
    let mut pl = PiecewiseLinear {
        breakpoints,
        slopes,
        intercepts,
        brackets,
        anchor: 0.0,
        fit_residual: 0.0,
        y_min: y[0],
        y_max: y[n - 1],
    };
    pl.anchor = pl.value_at(y[0]);
    pl.fit_residual = y
        .iter()
        .zip(l)
        .map(|(&yi, &li)| (pl.value_at(yi) - li).abs())
        .fold(0.0, f64::max);
    Ok(pl)
}

/// `ω±` at `y`: the slope of the piece on the requested side.
pub fn acceleration_at(pl: &PiecewiseLinear, y: f64, side: Side) -> Result<i64> {
    let inside = match side {
        Side::Plus => y >= pl.y_min && y < pl.y_max,
        Side::Minus => y > pl.y_min && y <= pl.y_max,
    };
    if !inside {
        return Err(Error::OutOfRange {
            y,
            min: pl.y_min,
            max: pl.y_max,
        });
    }
    Ok(pl.slopes[pl.piece(y, side)])
}

/// Regular (locally affine) at `y` with the model value clearly positive.
pub fn regularity_test(pl: &PiecewiseLinear, y: f64) -> Result<bool> {
    let plus = acceleration_at(pl, y, Side::Plus)?;
    let minus = acceleration_at(pl, y, Side::Minus)?;
    Ok(plus == minus && pl.value_at(y) > 3.0 * pl.fit_residual)
}
