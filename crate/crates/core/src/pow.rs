//! Powers of extended nonnegative reals.
//!
//! Every envelope and norm routine raises values in `[0, +inf]` to real
//! exponents through [`pow_ext`], so the conventions for negative exponents
//! hold identically everywhere:
//!
//! * `0^q = +inf` for `q < 0`
//! * `(+inf)^q = 0` for `q < 0`
//! * `(+inf)^q = +inf` for `q > 0`
//! * `b^0 = 1` for every `b`, including `0` and `+inf`

/// `base^exp` for `base` in `[0, +inf]`.
///
/// Negative or NaN bases yield NaN.
#[inline]
pub fn pow_ext(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        return 1.0;
    }
    if base == 0.0 {
        return if exp < 0.0 { f64::INFINITY } else { 0.0 };
    }
    if base == f64::INFINITY {
        return if exp < 0.0 { 0.0 } else { f64::INFINITY };
    }
    if base.is_nan() || base < 0.0 {
        return f64::NAN;
    }
    if exp == 1.0 {
        return base;
    }
    base.powf(exp)
}

/// `(ab)^q` for `a, b` in `[0, +inf]` with the product conventions of the
/// overlap quantity: for `q < 0` the term vanishes when either factor is
/// infinite, for `q > 0` it vanishes when either factor is zero.
#[inline]
pub fn product_pow(a: f64, b: f64, q: f64) -> f64 {
    if q < 0.0 && (a == f64::INFINITY || b == f64::INFINITY) {
        return 0.0;
    }
    if q > 0.0 && (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    pow_ext(a, q) * pow_ext(b, q)
}
