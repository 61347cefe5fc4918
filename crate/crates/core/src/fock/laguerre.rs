/// Generalized Laguerre polynomial `L_j^{(α)}(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+α−x) L_k − (k+α) L_{k−1}`.
pub fn laguerre(j: usize, alpha: usize, x: f64) -> f64 {
    laguerre_all(j, alpha, x)[j]
}

/// `L_0^{(α)}(x), …, L_j^{(α)}(x)`.
pub fn laguerre_all(j: usize, alpha: usize, x: f64) -> Vec<f64> {
    let a = alpha as f64;
    let mut out = Vec::with_capacity(j + 1);
    out.push(1.0);
    if j == 0 {
        return out;
    }
    out.push(1.0 + a - x);
    for k in 1..j {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Σ_{n=0}^{j} (−1)^n (j+α)! / ((j−n)! (n+α)! n!) xⁿ`, evaluated with
    /// exact binomials in u128.
    fn explicit_sum(j: usize, alpha: usize, x: f64) -> f64 {
        fn binom(n: u128, k: u128) -> u128 {
            (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
        }
        let mut total = 0.0;
        let mut n_fact = 1.0;
        for n in 0..=j {
            if n > 0 {
                n_fact *= n as f64;
            }
            // (j+α)! / ((j−n)! (n+α)!) = C(j+α, j−n)
            let b = binom((j + alpha) as u128, (j - n) as u128) as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * b * x.powi(n as i32) / n_fact;
        }
        total
    }

    #[test]
    fn low_orders() {
        for &x in &[0.0, 0.3, 2.0, 7.5] {
            for alpha in 0..4 {
                assert_eq!(laguerre(0, alpha, x), 1.0);
            }
            assert!((laguerre(1, 0, x) - (1.0 - x)).abs() < 1e-15);
        }
        // explicit sum at j=2, α=1, x=2: 3 − 3·2 + 2²/2 = −1
        assert!((explicit_sum(2, 1, 2.0) + 1.0).abs() < 1e-15);
        assert!((laguerre(2, 1, 2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for j in 0..=12 {
            for alpha in 0..=12 {
                for &x in &[0.1, 1.0, 5.0] {
                    let a = laguerre(j, alpha, x);
                    let b = explicit_sum(j, alpha, x);
                    let scale = b.abs().max(1e-300);
                    assert!(
                        (a - b).abs() <= 1e-10 * scale.max(1.0),
                        "j={j} alpha={alpha} x={x}: {a} vs {b}"
                    );
                }
            }
        }
    }
}
