//! Log-space coefficients shared by the SU(1,1) and Berezin series.

/// `ln((x)_n / n!)` where `(x)_n = x (x+1) ... (x+n-1)` is the rising factorial.
///
/// For `x = 2k` this is `ln(Gamma(n+2k) / (n! Gamma(2k)))`.
pub fn ln_rising_over_factorial(x: f64, n: usize) -> f64 {
    (0..n).map(|i| ((x + i as f64) / (i as f64 + 1.0)).ln()).sum()
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}
