//! Directed rounding on top of round-to-nearest hardware arithmetic.
//!
//! Each operation is computed once in round-to-nearest; an error-free
//! transformation then gives the sign of the rounding error, and the result is
//! moved one ulp in the required direction only when it was inexact. This
//! gives the same bounds as true directed rounding without touching the FPU
//! control word, so it is thread- and wasm-safe.
//!
//! Outside the range where the error terms are exactly representable the
//! code falls back to unconditional one-ulp nudging, which is still outward.

// Magnitudes for which Dekker splitting and the product error term are exact.
const SAFE_HI: f64 = 1.0e290;
const SAFE_LO: f64 = 1.0e-280;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    // 2^27 + 1
    let c = 134_217_729.0 * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

#[inline]
fn in_safe_range(x: f64) -> bool {
    let m = x.abs();
    m > SAFE_LO && m < SAFE_HI
}

#[inline]
fn down_from(r: f64, err_sign: f64) -> f64 {
    if err_sign < 0.0 {
        r.next_down()
    } else {
        r
    }
}

#[inline]
fn up_from(r: f64, err_sign: f64) -> f64 {
    if err_sign > 0.0 {
        r.next_up()
    } else {
        r
    }
}

#[inline]
fn overflow_down(s: f64) -> f64 {
    if s == f64::INFINITY {
        f64::MAX
    } else {
        s
    }
}

#[inline]
fn overflow_up(s: f64) -> f64 {
    if s == f64::NEG_INFINITY {
        f64::MIN
    } else {
        s
    }
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return overflow_down(s);
    }
    if e.is_finite() {
        down_from(s, e)
    } else {
        s.next_down()
    }
}

pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return overflow_up(s);
    }
    if e.is_finite() {
        up_from(s, e)
    } else {
        s.next_up()
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        return overflow_down(p);
    }
    if in_safe_range(p) && a.abs() < SAFE_HI && b.abs() < SAFE_HI {
        let (p, e) = two_prod(a, b);
        down_from(p, e)
    } else {
        p.next_down()
    }
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        return overflow_up(p);
    }
    if in_safe_range(p) && a.abs() < SAFE_HI && b.abs() < SAFE_HI {
        let (p, e) = two_prod(a, b);
        up_from(p, e)
    } else {
        p.next_up()
    }
}

/// Sign of `a/b - q` for the round-to-nearest quotient `q`.
#[inline]
fn div_residual_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if !(in_safe_range(q) && in_safe_range(a) && in_safe_range(b)) {
        return None;
    }
    let (p, e) = two_prod(q, b);
    // a - q*b is exactly representable; both subtractions are exact.
    let r = (a - p) - e;
    Some(if b > 0.0 { r } else { -r })
}

pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !q.is_finite() {
        return overflow_down(q);
    }
    match div_residual_sign(a, b, q) {
        Some(sign) => down_from(q, sign),
        None => q.next_down(),
    }
}

pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if !q.is_finite() {
        return overflow_up(q);
    }
    match div_residual_sign(a, b, q) {
        Some(sign) => up_from(q, sign),
        None => q.next_up(),
    }
}

fn sqrt_residual_sign(x: f64, s: f64) -> Option<f64> {
    if !(in_safe_range(x) && in_safe_range(s)) {
        return None;
    }
    let (p, e) = two_prod(s, s);
    Some((x - p) - e)
}

/// Lower bound of `sqrt(x)` for `x >= 0`.
pub fn sqrt_down(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    match sqrt_residual_sign(x, s) {
        Some(sign) => down_from(s, sign).max(0.0),
        None => s.next_down().max(0.0),
    }
}

/// Upper bound of `sqrt(x)` for `x >= 0`.
pub fn sqrt_up(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    match sqrt_residual_sign(x, s) {
        Some(sign) => up_from(s, sign),
        None => s.next_up(),
    }
}

fn cube_up(c: f64) -> f64 {
    if c >= 0.0 {
        mul_up(mul_up(c, c), c)
    } else {
        -mul_down(mul_down(-c, -c), -c)
    }
}

fn cube_down(c: f64) -> f64 {
    if c >= 0.0 {
        mul_down(mul_down(c, c), c)
    } else {
        -mul_up(mul_up(-c, -c), -c)
    }
}

/// Largest float `c` found with `c^3 <= x`, verified by outward cubing.
pub fn cbrt_down(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut c = x.cbrt();
    while cube_up(c) > x {
        c = c.next_down();
    }
    c
}

/// Smallest float `c` found with `c^3 >= x`, verified by outward cubing.
pub fn cbrt_up(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut c = x.cbrt();
    while cube_down(c) < x {
        c = c.next_up();
    }
    c
}
