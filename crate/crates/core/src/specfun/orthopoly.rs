/// Associated Laguerre polynomial `L_n^alpha(y)` by the three-term recurrence
/// in `n`, seeded with `L_0 = 1` and `L_1 = 1 + alpha - y`.
pub fn laguerre_assoc(n: usize, alpha: f64, y: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 1.0 + alpha - y;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - y) * curr - (jf + alpha) * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// `d^order/dy^order L_n^alpha(y)` from `d/dy L_n^alpha = -L_{n-1}^{alpha+1}`.
pub fn laguerre_assoc_derivative(n: usize, alpha: f64, y: f64, order: usize) -> f64 {
    if order > n {
        return 0.0;
    }
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * laguerre_assoc(n - order, alpha + order as f64, y)
}

/// Physicists' Hermite polynomial, `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 2.0 * x;
    for j in 1..n {
        let next = 2.0 * x * curr - 2.0 * j as f64 * prev;
        prev = curr;
        curr = next;
    }
    curr
}

/// `H_n'(x) = 2n H_{n-1}(x)`
pub fn hermite_derivative(n: usize, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0 * n as f64 * hermite(n - 1, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit sum `sum_j (-1)^j C(n+alpha, n-j) y^j / j!`.
    fn laguerre_series(n: usize, alpha: f64, y: f64) -> f64 {
        let mut total = 0.0;
        for j in 0..=n {
            // C(n + alpha, n - j) = prod_{i=1}^{n-j} (alpha + j + i) / i
            let mut binom = 1.0;
            for i in 1..=(n - j) {
                binom *= (alpha + (j + i) as f64) / i as f64;
            }
            let mut fact = 1.0;
            for i in 1..=j {
                fact *= i as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom * y.powi(j as i32) / fact;
        }
        total
    }

    #[test]
    fn low_degrees() {
        assert_eq!(laguerre_assoc(0, 3.7, -2.0), 1.0);
        assert_eq!(laguerre_assoc(1, 2.5, 0.75), 1.0 + 2.5 - 0.75);
        assert!((laguerre_assoc(2, 0.0, 2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_series() {
        for n in 0..8 {
            for &alpha in &[0.0, 0.5, 18.0, 20.0] {
                for &y in &[0.0, 0.3, 4.0, 25.0] {
                    let a = laguerre_assoc(n, alpha, y);
                    let b = laguerre_series(n, alpha, y);
                    assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "n={n} alpha={alpha} y={y}");
                }
            }
        }
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 12.0), 1.0);
        assert_eq!(hermite(1, 3.0), 6.0);
        assert_eq!(hermite(2, 1.0), 2.0);
        // H_3 = 8x^3 - 12x
        assert_eq!(hermite(3, 2.0), 64.0 - 24.0);
        assert_eq!(hermite_derivative(3, 2.0), 6.0 * hermite(2, 2.0));
    }

    #[test]
    fn laguerre_ode_residual() {
        for n in 0..7 {
            for &alpha in &[0.0, 18.0, 20.0] {
                for &y in &[0.5, 3.0, 17.0, 40.0] {
                    let l = laguerre_assoc(n, alpha, y);
                    let d1 = laguerre_assoc_derivative(n, alpha, y, 1);
                    let d2 = laguerre_assoc_derivative(n, alpha, y, 2);
                    let residual = y * d2 + (1.0 + alpha - y) * d1 + n as f64 * l;
                    let scale = l.abs().max(d1.abs() * y).max(1.0);
                    assert!(residual.abs() < 1e-8 * scale, "n={n} alpha={alpha} y={y}: {residual}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (n, alpha, y, h) = (5, 3.5, 2.2, 1e-5);
        let fd = (laguerre_assoc(n, alpha, y + h) - laguerre_assoc(n, alpha, y - h)) / (2.0 * h);
        assert!((fd - laguerre_assoc_derivative(n, alpha, y, 1)).abs() < 1e-6);
    }
}
