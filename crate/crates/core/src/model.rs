//! Potentials as finite Fourier series, evaluation at complexified phases,
//! and the closed-form almost-Mathieu Lyapunov exponent.
//!
//! The phase torus is `R / 2πZ`; all phases here are in radians.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Golden-mean frequency `2π(√5 − 1)/2`, the default α.
pub const GOLDEN_ALPHA: f64 = TAU * 0.618_033_988_749_894_9;

const REALNESS_TOL: f64 = 1e-14;

/// Trigonometric polynomial `v(θ) = Σ_k v̂_k e^{ikθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotential {
    coeffs: BTreeMap<i32, Complex64>,
    degree: u32,
    is_real: bool,
}

impl FourierPotential {
    /// Builds a potential from `(k, v̂_k)` pairs. Exact zeros are dropped and
    /// repeated `k` are accumulated.
    pub fn new<I>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Complex64)>,
    {
        let mut map: BTreeMap<i32, Complex64> = BTreeMap::new();
        for (k, c) in coeffs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "Fourier coefficient for k={k} is not finite"
                )));
            }
            *map.entry(k).or_default() += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        let degree = map.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0);
        let scale = map.values().map(|c| c.norm()).fold(0.0, f64::max);
        let is_real = map.iter().all(|(&k, &c)| {
            let partner = map.get(&-k).copied().unwrap_or_default();
            (partner - c.conj()).norm() <= REALNESS_TOL * scale
        });
        Ok(Self {
            coeffs: map,
            degree,
            is_real,
        })
    }

    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
            degree: 0,
            is_real: true,
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, k: i32) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    /// True when the potential has no `k ≠ 0` terms, so every cocycle built
    /// from it is phase independent.
    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&k| k == 0)
    }

    /// Smallest and largest `k` carrying a nonzero coefficient.
    pub fn support(&self) -> Option<(i32, i32)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Evaluates `Σ_k v̂_k e^{ikθ}` at a complex phase.
    pub fn eval(&self, theta: Complex64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let x = theta.re.rem_euclid(TAU);
        let w = Complex64::cis(x);
        // |e^{iθ}| = e^{-Im θ}
        let growth = (-theta.im).exp();
        self.eval_unit(w, growth)
    }

    /// Evaluates the series at `z = growth · w` with `|w| = 1`, summing the
    /// terms from large `|k|` to small.
    pub(crate) fn eval_unit(&self, w: Complex64, growth: f64) -> Complex64 {
        let d = self.degree as usize;
        if d == 0 {
            return self.coeff(0);
        }
        let mut pows = Vec::with_capacity(d + 1);
        let mut p = Complex64::new(1.0, 0.0);
        pows.push(p);
        for _ in 0..d {
            p *= w;
            pows.push(p);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..=d).rev() {
            let ki = k as i32;
            let g = growth.powi(ki);
            if let Some(c) = self.coeffs.get(&ki) {
                acc += c * pows[k] * g;
            }
            if let Some(c) = self.coeffs.get(&-ki) {
                acc += c * pows[k].conj() / g;
            }
        }
        acc + self.coeff(0)
    }
}

/// Almost-Mathieu potential `2λ cos θ`.
pub fn amo_potential(lambda: f64) -> Result<FourierPotential> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "coupling must be positive and finite, got {lambda}"
        )));
    }
    let c = Complex64::new(lambda, 0.0);
    FourierPotential::new([(-1, c), (1, c)])
}

pub fn eval_potential(pot: &FourierPotential, theta: Complex64) -> Complex64 {
    pot.eval(theta)
}

/// `L(E, iy) = max{log λ + y, L(E, i0)}` for the almost-Mathieu cocycle, `y ≥ 0`.
pub fn amo_le_oracle(lambda: f64, y: f64, l0: f64) -> f64 {
    (lambda.ln() + y).max(l0)
}

/// Row-sum bound `2 + Σ_k |v̂_k| e^{|k||y|}` on the spectrum of any Dirichlet
/// truncation at imaginary phase offset `y`.
pub fn energy_bound(pot: &FourierPotential, y: f64) -> f64 {
    2.0 + pot
        .coeffs
        .iter()
        .map(|(&k, c)| c.norm() * (f64::from(k.unsigned_abs()) * y.abs()).exp())
        .sum::<f64>()
}

/// On-disk potential description: `{"coeffs": [[k, re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialFile {
    pub coeffs: Vec<(i32, f64, f64)>,
}

impl PotentialFile {
    pub fn from_potential(pot: &FourierPotential) -> Self {
        Self {
            coeffs: pot.coeffs.iter().map(|(&k, c)| (k, c.re, c.im)).collect(),
        }
    }

    pub fn to_potential(&self) -> Result<FourierPotential> {
        for &(k, re, im) in &self.coeffs {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "coefficient for k={k} must be finite"
                )));
            }
        }
        FourierPotential::new(
            self.coeffs
                .iter()
                .map(|&(k, re, im)| (k, Complex64::new(re, im))),
        )
    }

    pub fn parse(text: &str) -> Result<FourierPotential> {
        let file: PotentialFile = serde_json::from_str(text)?;
        file.to_potential()
    }

    pub fn load(path: &Path) -> Result<FourierPotential> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Parses a frequency given as a fraction of `2π`: the keyword `golden`, a
/// decimal, or a `p/q` ratio. Returns radians reduced modulo `2π`.
pub fn parse_frequency(text: &str) -> Result<f64> {
    let t = text.trim();
    let fraction = if t.eq_ignore_ascii_case("golden") {
        return Ok(GOLDEN_ALPHA);
    } else if let Some((p, q)) = t.split_once('/') {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad frequency numerator in {t:?}")))?;
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad frequency denominator in {t:?}")))?;
        if q == 0.0 {
            return Err(Error::InvalidInput("frequency denominator is zero".into()));
        }
        p / q
    } else {
        t.parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse frequency {t:?}")))?
    };
    if !fraction.is_finite() {
        return Err(Error::InvalidInput(format!("frequency {t:?} is not finite")));
    }
    Ok((fraction * TAU).rem_euclid(TAU))
}

/// Parses a complex number such as `3.5`, `2+2i`, `-1.5i` or `1e-3-2i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse complex number {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-')
            && !matches!(bytes[idx - 1], b'e' | b'E')
        {
            split = Some(idx);
            break;
        }
    }
    let imag = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(idx) => {
            let re = body[..idx].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[idx..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// Phase `x + kα + iy` reduced so that its real part lies in `[0, 2π)`.
#[inline]
pub(crate) fn orbit_phase(x: f64, k: usize, alpha: f64) -> f64 {
    (k as f64).mul_add(alpha, x).rem_euclid(TAU)
}

/// Uniform grid `{2πj/m}` on the circle.
pub(crate) fn phase_grid(m: usize) -> impl Iterator<Item = f64> + Clone {
    (0..m).map(move |j| 2.0 * PI * j as f64 / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // cosh by its Taylor series, independent of the exp-based evaluation
    fn cosh_series(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..40 {
            term *= x * x / ((2 * k - 1) as f64 * (2 * k) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn zero_potential_evaluates_to_zero() {
        assert_eq!(FourierPotential::zero().eval(c(1.3, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn amo_values() {
        let v = amo_potential(0.5).unwrap();
        assert_abs_diff_eq!(v.eval(c(0.0, 0.0)).re, 1.0, epsilon = 1e-15);
        let at_i = v.eval(c(0.0, 1.0));
        assert_abs_diff_eq!(at_i.re, cosh_series(1.0), epsilon = 1e-12);
        assert_abs_diff_eq!(at_i.re, 1.543_080_634_815_243_7, epsilon = 1e-12);
        assert!(at_i.im.abs() < 1e-15);
    }

    #[test]
    fn amo_coefficients() {
        for lambda in [0.5, 1.0, 2.0] {
            let v = amo_potential(lambda).unwrap();
            assert_eq!(v.degree(), 1);
            assert!(v.is_real());
            assert_eq!(v.coeff(-1), c(lambda, 0.0));
            assert_eq!(v.coeff(1), c(lambda, 0.0));
            assert_eq!(v.coeffs().len(), 2);
        }
        assert!(amo_potential(0.0).is_err());
        assert!(amo_potential(-1.0).is_err());
    }

    #[test]
    fn realness_flag() {
        let complex = FourierPotential::new([(1, c(0.5, 0.0))]).unwrap();
        assert!(!complex.is_real());
        let real = FourierPotential::new([(2, c(0.3, 0.2)), (-2, c(0.3, -0.2)), (0, c(1.0, 0.0))])
            .unwrap();
        assert!(real.is_real());
        assert_eq!(real.degree(), 2);
        let off = FourierPotential::new([(0, c(1.0, 1e-3))]).unwrap();
        assert!(!off.is_real());
    }

    #[test]
    fn oracle_branches() {
        assert_abs_diff_eq!(amo_le_oracle(0.5, 1.0, 0.0), 0.306_852_819_440_054_7, epsilon = 1e-12);
        assert_eq!(amo_le_oracle(0.5, 0.2, 0.0), 0.0);
        assert_eq!(amo_le_oracle(0.5, 0.0, 0.9), 0.9);
    }

    #[test]
    fn energy_bounds() {
        assert_eq!(energy_bound(&FourierPotential::zero(), 0.0), 2.0);
        let v = amo_potential(0.5).unwrap();
        assert_abs_diff_eq!(energy_bound(&v, 0.0), 3.0, epsilon = 1e-15);
        let direct = 2.0 + 0.5 * std::f64::consts::E + 0.5 * std::f64::consts::E;
        assert_abs_diff_eq!(energy_bound(&v, 1.0), direct, epsilon = 1e-12);
        assert_abs_diff_eq!(energy_bound(&v, 1.0), 4.718_281_828_459_045, epsilon = 1e-12);
    }

    #[test]
    fn potential_file_round_trip() {
        let pot = PotentialFile::parse(r#"{"coeffs": [[-1, 0.5, 0.0], [1, 0.5, 0.0]]}"#).unwrap();
        assert_eq!(pot, amo_potential(0.5).unwrap());
        let text = serde_json::to_string(&PotentialFile::from_potential(&pot)).unwrap();
        assert_eq!(PotentialFile::parse(&text).unwrap(), pot);
        assert!(PotentialFile::parse(r#"{"coeffs": [[1.5, 0.5, 0.0]]}"#).is_err());
        assert!(PotentialFile::parse(r#"{"coeffs": [[1, 0.5]]}"#).is_err());
    }

    #[test]
    fn frequency_forms() {
        assert_eq!(parse_frequency("golden").unwrap(), GOLDEN_ALPHA);
        assert_abs_diff_eq!(parse_frequency("0.25").unwrap(), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(parse_frequency("1/3").unwrap(), TAU / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(parse_frequency("1.25").unwrap(), PI / 2.0, epsilon = 1e-14);
        assert!(parse_frequency("1/0").is_err());
        assert!(parse_frequency("abc").is_err());
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("3.5").unwrap(), c(3.5, 0.0));
        assert_eq!(parse_complex("2+2i").unwrap(), c(2.0, 2.0));
        assert_eq!(parse_complex("2 - 0.5i").unwrap(), c(2.0, -0.5));
        assert_eq!(parse_complex("-1.5i").unwrap(), c(0.0, -1.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1e-3-2i").unwrap(), c(1e-3, -2.0));
        assert_eq!(parse_complex("-1e+2+1e-1i").unwrap(), c(-100.0, 0.1));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn potential() -> impl Strategy<Value = FourierPotential> {
            proptest::collection::vec((-4i32..=4, -1.0f64..1.0, -1.0f64..1.0), 0..6).prop_map(
                |terms| {
                    FourierPotential::new(terms.into_iter().map(|(k, re, im)| (k, c(re, im))))
                        .unwrap()
                },
            )
        }

        fn real_potential() -> impl Strategy<Value = FourierPotential> {
            proptest::collection::vec((0i32..=4, -1.0f64..1.0, -1.0f64..1.0), 0..5).prop_map(
                |terms| {
                    let mut all = Vec::new();
                    for (k, re, im) in terms {
                        if k == 0 {
                            all.push((0, c(re, 0.0)));
                        } else {
                            all.push((k, c(re, im)));
                            all.push((-k, c(re, -im)));
                        }
                    }
                    FourierPotential::new(all).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn real_potential_is_real_on_real_phases(pot in real_potential(), x in -10.0f64..10.0) {
                prop_assert!(pot.is_real());
                let v = pot.eval(c(x, 0.0));
                prop_assert!(v.im.abs() <= 1e-12 * (1.0 + pot.abs_sum()));
            }

            #[test]
            fn periodic_in_real_part(pot in potential(), x in -10.0f64..10.0, y in -1.5f64..1.5) {
                let a = pot.eval(c(x, y));
                let b = pot.eval(c(x + TAU, y));
                prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
            }

            #[test]
            fn oracle_monotone_and_convex(lambda in 0.05f64..3.0, l0 in 0.0f64..2.0) {
                let ys: Vec<f64> = (0..60).map(|i| i as f64 * 0.05).collect();
                let vals: Vec<f64> = ys.iter().map(|&y| amo_le_oracle(lambda, y, l0)).collect();
                for w in vals.windows(2) {
                    prop_assert!(w[1] >= w[0]);
                }
                for w in vals.windows(3) {
                    prop_assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-12);
                }
            }
        }
    }
}
