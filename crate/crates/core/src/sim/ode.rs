//! Fixed-step integration.

/// One classical fourth-order Runge-Kutta step of `ẋ = f(x)` with step `h`.
pub fn rk4_step<const N: usize>(f: impl Fn(&[f64; N]) -> [f64; N], x: &[f64; N], h: f64) -> [f64; N] {
    let offset = |base: &[f64; N], k: &[f64; N], s: f64| core::array::from_fn(|i| base[i] + s * k[i]);
    let k1 = f(x);
    let k2 = f(&offset(x, &k1, h / 2.0));
    let k3 = f(&offset(x, &k2, h / 2.0));
    let k4 = f(&offset(x, &k3, h));
    core::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Number of steps of size `dt` that make up `horizon`, if it is a whole
/// multiple.
pub fn step_count(dt: f64, horizon: f64) -> Option<usize> {
    if !(dt.is_finite() && dt > 0.0 && horizon.is_finite() && horizon >= 0.0) {
        return None;
    }
    let n = crate::math::round(horizon / dt);
    if (n * dt - horizon).abs() <= 1e-9 * horizon.max(dt) {
        Some(n as usize)
    } else {
        None
    }
}

/// Sample times `k·dt` for `k = 0..=n`, or none at all when `n = 0`.
pub fn sample_times(dt: f64, n: usize) -> alloc::vec::Vec<f64> {
    if n == 0 {
        return alloc::vec::Vec::new();
    }
    (0..=n).map(|k| k as f64 * dt).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut x = [1.0];
        for _ in 0..100 {
            x = rk4_step(|x| [-x[0]], &x, 0.01);
        }
        approx::assert_abs_diff_eq!(x[0], libm::exp(-1.0), epsilon = 1e-10);
    }

    #[test]
    fn steps() {
        assert_eq!(step_count(0.1, 30.0), Some(300));
        assert_eq!(step_count(0.01, 2.0), Some(200));
        assert_eq!(step_count(0.1, 0.0), Some(0));
        assert_eq!(step_count(0.3, 1.0), None);
        assert_eq!(step_count(0.0, 1.0), None);
        assert!(sample_times(0.1, 0).is_empty());
        assert_eq!(sample_times(0.5, 2), [0.0, 0.5, 1.0]);
    }
}
