use crate::error::{Error, Result};

/// Coefficients `B_2k / (2k (2k - 1))` of the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this the argument is shifted up with `Gamma(x + 1) = x Gamma(x)`.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// `ln Gamma(x)` for `x > 0`.
///
/// Stirling's series with eight correction terms, which truncates below
/// 1e-17 relative at `x >= 10`; smaller arguments are lifted by the
/// functional equation first.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("log_gamma needs a finite x > 0, got {x}")));
    }
    if x >= ASYMPTOTIC_FROM {
        return Ok(stirling(x));
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < ASYMPTOTIC_FROM {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - product.ln())
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// `ln n!`
pub fn ln_factorial(n: u32) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 20 {
        return (2..=n).map(f64::from).product::<f64>().ln();
    }
    stirling(f64::from(n) + 1.0)
}
