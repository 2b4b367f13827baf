//! Text formatting shared by the report writers.

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Column order of SWKB result tables.
pub const SWKB_COLUMNS: [&str; 9] = ["name", "class", "n", "E_n", "x1", "x2", "integral", "residual", "converged"];
