//! Fixed float formatting shared by every text artifact.

/// Scientific notation with 17 significant digits; enough to round-trip any
/// `f64` and identical on every platform.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}
