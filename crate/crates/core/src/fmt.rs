//! Float formatting for machine-readable output.

/// Formats with 17 significant digits so the decimal text round-trips to the
/// exact same f64. Non-finite values print as `inf`, `-inf`, `nan`.
pub fn float17(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
