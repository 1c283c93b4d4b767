//! Floating-point comparison policy.
//!
//! Distances are compared with a relative tolerance of `1e-9`. Upper-bound
//! checks accept `value <= bound * (1 + 1e-9)`.

pub const REL_TOL: f64 = 1e-9;

/// `value <= bound` up to the relative tolerance.
pub fn within(value: f64, bound: f64) -> bool {
    if value.is_infinite() {
        return bound.is_infinite() && value.is_sign_positive() == bound.is_sign_positive();
    }
    value <= bound + REL_TOL * bound.abs()
}

/// Relative equality with an absolute floor for values near zero.
pub fn approx_eq(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= REL_TOL * scale
}

/// Strictly smaller by more than the tolerance.
pub fn definitely_less(a: f64, b: f64) -> bool {
    a < b && !approx_eq(a, b)
}
