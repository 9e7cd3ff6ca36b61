//! Exact integer helpers: sign, square-root floor/ceiling quotients and the
//! small periodic cosine tables that appear in the escape formulas.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// `sign(x)` with the convention `sign(0) = +1`.
#[inline]
pub fn sign(x: &BigInt) -> i32 {
    if x.is_negative() {
        -1
    } else {
        1
    }
}

/// Floor square root of a nonnegative integer.
pub fn isqrt(d: &BigInt) -> BigInt {
    debug_assert!(!d.is_negative());
    d.sqrt()
}

/// `⌊(p + √d) / q⌋` for `d >= 0`, `q > 0`, computed without leaving the integers.
///
/// With `s = ⌊√d⌋`: if `d` is not a perfect square, no integer multiple of `q`
/// can lie in `(p + s, p + √d]`, since that would make `√d` an integer. So the
/// floor of the exact value equals `⌊(p + s) / q⌋` in every case.
pub fn floor_sqrt_ratio(p: &BigInt, d: &BigInt, q: &BigInt) -> BigInt {
    debug_assert!(q.is_positive());
    let s = isqrt(d);
    (p + s).div_floor(q)
}

/// `⌈(p + √d) / q⌉` for `d >= 0`, `q > 0`.
pub fn ceil_sqrt_ratio(p: &BigInt, d: &BigInt, q: &BigInt) -> BigInt {
    debug_assert!(q.is_positive());
    let s = isqrt(d);
    let num = p + &s;
    let (quot, rem) = num.div_mod_floor(q);
    if &s * &s == *d && rem.is_zero() {
        quot
    } else {
        quot + 1
    }
}

/// `cos(πz/2)` for integer `z`: 1, 0, −1, 0 by `z mod 4`.
pub fn cos_half_pi(z: &BigInt) -> i64 {
    match mod4(z) {
        0 => 1,
        2 => -1,
        _ => 0,
    }
}

/// `cos(πz)` for integer `z`.
pub fn cos_pi(z: &BigInt) -> i64 {
    if z.is_even() {
        1
    } else {
        -1
    }
}

pub fn mod4(z: &BigInt) -> u8 {
    z.mod_floor(&BigInt::from(4)).to_u8().unwrap_or(0)
}
