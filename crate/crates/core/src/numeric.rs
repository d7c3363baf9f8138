//! Small numeric helpers shared across modules.

use num_complex::Complex64;

const LEAF: usize = 8;

/// Pairwise sum with a fixed tree shape, so the result depends only on the
/// input order and never on how the values were produced.
pub fn tree_sum(values: &[f64]) -> f64 {
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    tree_sum(&values[..mid]) + tree_sum(&values[mid..])
}

/// Mean computed as `v₀ + Σ(vᵢ − v₀)/m`; exact for constant input.
pub fn tree_mean(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return f64::NAN;
    };
    let shifted: Vec<f64> = values.iter().map(|v| v - first).collect();
    first + tree_sum(&shifted) / values.len() as f64
}

/// Rescales so that the largest modulus lands in `[1/√2, √2]`, using an exact
/// power of two. Returns the base-2 exponent that was divided out.
#[inline]
pub(crate) fn pow2_exponent(max_norm: f64) -> i32 {
    max_norm.log2().round() as i32
}

#[inline]
pub(crate) fn pow2(e: i32) -> f64 {
    // exact for the exponent range met in practice (|e| < 1000)
    2f64.powi(e)
}

/// Principal argument difference `arg(b / a)` in `(−π, π]`.
#[inline]
pub(crate) fn arg_increment(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Exact error-free sum `a + b = s + e`.
#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Exact error-free product `a · b = p + e` (requires FMA).
#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sum_matches_naive_on_small_integers() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(tree_sum(&v), 499_500.0);
        assert_eq!(tree_sum(&[]), 0.0);
    }

    #[test]
    fn mean_of_constant_is_exact() {
        for m in [1usize, 3, 7, 10, 513] {
            let v = vec![0.1 + 0.2; m];
            assert_eq!(tree_mean(&v), 0.1 + 0.2);
        }
    }

    #[test]
    fn eft_identities() {
        let (s, e) = two_sum(1.0, 1e-17);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-17);
        let a = 1.0 + f64::EPSILON;
        let (p, e) = two_prod(a, a);
        assert_eq!(p, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(e, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn increments_are_principal() {
        let a = Complex64::cis(3.0);
        let b = Complex64::cis(-3.0);
        let d = arg_increment(a, b);
        assert!((d - (2.0 * std::f64::consts::PI - 6.0)).abs() < 1e-12);
    }
}
