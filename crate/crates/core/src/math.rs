// Thin wrappers so the rest of the crate reads like std float code.

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn fabs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Relative tolerance used when comparing time stamps and grid coordinates
/// that were produced by different float paths.
#[inline]
pub fn close(a: f64, b: f64) -> bool {
    let scale = 1.0f64.max(fabs(a)).max(fabs(b));
    fabs(a - b) <= 1e-12 * scale
}
