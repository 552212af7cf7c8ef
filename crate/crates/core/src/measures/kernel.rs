//! The entire series `K(z) = sum_k z^k / (k!)^2`, which equals `J0(2 sqrt(-z))`
//! for `z < 0` and `I0(2 sqrt(z))` for `z > 0`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub z: f64,
    pub value: f64,
    pub terms_used: u32,
}

/// Sums the series until the tail is provably below `rel_tol * max(1, |S|)`.
///
/// Once `|z| <= (k + 2)^2 / 2` every later term ratio is at most `1/2`, so the
/// tail after term `k` is bounded by twice the magnitude of term `k + 1`.
pub fn kernel_eval(z: f64, rel_tol: f64) -> KernelValue {
    let mut sum = 0.0;
    let mut term = 1.0;
    let mut k: u32 = 0;
    loop {
        sum += term;
        let kf = f64::from(k);
        let next = term * z / ((kf + 1.0) * (kf + 1.0));
        let geometric = z.abs() <= (kf + 2.0) * (kf + 2.0) / 2.0;
        if geometric && 2.0 * next.abs() < rel_tol * sum.abs().max(1.0) {
            return KernelValue { z, value: sum, terms_used: k + 1 };
        }
        if !next.is_finite() {
            return KernelValue { z, value: sum, terms_used: k + 1 };
        }
        term = next;
        k += 1;
    }
}

pub(crate) fn kernel(z: f64) -> f64 {
    kernel_eval(z, 1e-15).value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        let k = kernel_eval(0.0, 1e-12);
        assert_eq!(k.value, 1.0);
        assert_eq!(k.terms_used, 1);
    }

    #[test]
    fn bessel_at_two_sqrt_five() {
        let k = kernel_eval(-5.0, 1e-9);
        assert!((k.value + 0.3268).abs() < 1e-3, "{}", k.value);
    }

    #[test]
    fn positive_argument_grows() {
        // I0(2) = 2.2795853023360673
        let k = kernel_eval(1.0, 1e-14);
        assert!((k.value - 2.279_585_302_336_067).abs() < 1e-13);
    }
}
