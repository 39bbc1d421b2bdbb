//! Exact counts and their decimal rendering.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

pub fn factorial(n: usize) -> BigCount {
    (2..=n as u64).fold(BigCount::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigCount::one();
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

fn pow10(e: u32) -> BigCount {
    BigCount::from(10u32).pow(e)
}

fn decimal_digits(x: &BigCount) -> i64 {
    x.to_str_radix(10).len() as i64
}

/// `num / den` in scientific notation with `sig` significant digits, rounding
/// half away from zero: `sci_ratio(227688224788008012, 1, 1) == "2e17"`.
pub fn sci_ratio(num: &BigCount, den: &BigCount, sig: usize) -> String {
    assert!(!den.is_zero(), "division by zero");
    let sig = sig.max(1);
    if num.is_zero() {
        return "0".into();
    }
    // exponent estimate, corrected below
    let mut exp = decimal_digits(num) - decimal_digits(den);
    let lower = pow10(sig as u32 - 1);
    let upper = pow10(sig as u32);
    let scaled = |exp: i64| -> (BigCount, BigCount) {
        let shift = sig as i64 - 1 - exp;
        if shift >= 0 {
            (num * pow10(shift as u32), den.clone())
        } else {
            (num.clone(), den * pow10((-shift) as u32))
        }
    };
    loop {
        let (n, d) = scaled(exp);
        let q = &n / &d;
        if q >= upper {
            exp += 1;
        } else if q < lower {
            exp -= 1;
        } else {
            break;
        }
    }
    let (n, d) = scaled(exp);
    let mut q = (n * 2u32 + &d) / (d * 2u32);
    if q >= upper {
        q /= 10u32;
        exp += 1;
    }
    let digits = q.to_str_radix(10);
    let mantissa = if digits.len() > 1 {
        format!("{}.{}", &digits[..1], &digits[1..])
    } else {
        digits
    };
    format!("{mantissa}e{exp}")
}

/// Integer in scientific notation with `sig` significant digits.
pub fn sci(x: &BigCount, sig: usize) -> String {
    sci_ratio(x, &BigCount::one(), sig)
}

/// Nearest `f64` to `num / den`, valid beyond the `f64` range of either part.
pub fn ratio_to_f64(num: &BigCount, den: &BigCount) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // bring both to at most 960 bits before converting
    let shift_n = (nb - 960).max(0);
    let shift_d = (db - 960).max(0);
    let n = (num >> shift_n as usize).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift_d as usize).to_f64().unwrap_or(f64::INFINITY);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

pub fn to_f64(x: &BigCount) -> f64 {
    ratio_to_f64(x, &BigCount::one())
}
