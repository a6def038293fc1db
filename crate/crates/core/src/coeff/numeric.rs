//! Numeric evaluation of coefficients: substitutes `L_p -> log p` using
//! rigorous rational interval enclosures, so the returned radius is a
//! guaranteed bound on the substitution error.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Coefficient, Rational};

/// An approximation with a rigorous error bound:
/// `|true value - value| <= radius`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericEval {
    pub value: Rational,
    pub radius: Rational,
}

impl NumericEval {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering of the midpoint, rounded to `digits` places.
    pub fn decimal(&self, digits: u32) -> String {
        decimal_string(&self.value, digits)
    }
}

fn pow10(digits: u32) -> BigInt {
    BigInt::from(10u32).pow(digits)
}

/// `r` rounded to the nearest `digits`-place decimal, as a plain string.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let scale = pow10(digits);
    let scaled = r.abs() * BigRational::from(scale.clone());
    // round half away from zero
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor();
    let rounded = rounded.to_integer();
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{rounded}");
    }
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    format!("{sign}{int_part}.{frac:0>width$}", frac = frac_part, width = digits as usize)
}

/// Rigorous enclosure of `ln m` for a natural number `m >= 1`, scaled so
/// that both endpoints have denominator `10^digits`.
fn ln_interval(m: u64, digits: u32) -> (Rational, Rational) {
    assert!(m >= 1);
    if m == 1 {
        return (Rational::zero(), Rational::zero());
    }
    let scale = pow10(digits);
    if m.is_power_of_two() {
        let j = m.trailing_zeros() as i64;
        let (lo, hi) = ln2_fixed(&scale);
        return (
            Rational::new(lo * j, scale.clone()),
            Rational::new(hi * j, scale),
        );
    }
    // m = 2^k * x with x in (1, 2): ln m = k ln 2 + 2 atanh((x-1)/(x+1)).
    let k = 63 - m.leading_zeros();
    let two_k = 1u64 << k;
    let a = BigInt::from(m - two_k);
    let b = BigInt::from(m + two_k);
    let (lo_x, hi_x) = atanh_fixed(&a, &b, &scale);
    let (lo2, hi2) = ln2_fixed(&scale);
    (
        Rational::new(lo_x + &lo2 * k, scale.clone()),
        Rational::new(hi_x + &hi2 * k, scale),
    )
}

/// Fixed-point enclosure of `ln 2 * scale` via `2 atanh(1/3)`.
fn ln2_fixed(scale: &BigInt) -> (BigInt, BigInt) {
    atanh_fixed(&BigInt::one(), &BigInt::from(3), scale)
}

/// Enclosure of `2 atanh(a/b) * scale` for `0 <= a/b <= 1/3`.
///
/// All divisions floor, so the running sum only ever undershoots; the
/// upper endpoint adds a budget of one lost unit per operation plus a
/// tail bound, which keeps the enclosure rigorous without tracking each
/// rounding individually.
fn atanh_fixed(a: &BigInt, b: &BigInt, scale: &BigInt) -> (BigInt, BigInt) {
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let a2 = a * a;
    let b2 = b * b;
    let mut p = (a * scale) / b; // ~ t^j * scale for odd j
    let mut j = BigInt::one();
    let mut sum = BigInt::zero();
    let mut terms: u64 = 0;
    while !p.is_zero() {
        sum += &p / &j;
        terms += 1;
        p = (&p * &a2) / &b2;
        j += 2;
    }
    // Undershoot per summed term is < 3 scaled units (propagated floor
    // losses), and the discarded tail is < 1 unit once p hits zero.
    let slack = BigInt::from(3 * terms + 2);
    (sum.clone() * 2, (sum + slack) * 2)
}

pub(super) fn eval(c: &Coefficient, precision: u32) -> NumericEval {
    if let Some(q) = c.as_rational() {
        return NumericEval { value: q.clone(), radius: Rational::zero() };
    }
    let target = Rational::new(BigInt::one(), pow10(precision));
    let mut digits = precision + 8;
    for attempt in 0..3 {
        let out = eval_at_digits(c, digits);
        if out.radius <= target || attempt == 2 {
            return out;
        }
        digits *= 2;
    }
    unreachable!()
}

fn eval_at_digits(c: &Coefficient, digits: u32) -> NumericEval {
    let mut logs: HashMap<u64, (Rational, Rational)> = HashMap::new();
    let mut lo_acc = Rational::zero();
    let mut hi_acc = Rational::zero();
    for (m, q) in c.terms() {
        let mut lo = Rational::one();
        let mut hi = Rational::one();
        for &(p, e) in m.factors() {
            let (llo, lhi) = logs
                .entry(p)
                .or_insert_with(|| ln_interval(p, digits))
                .clone();
            // ln p > 0, so interval powers are monotone.
            for _ in 0..e {
                lo *= &llo;
                hi *= &lhi;
            }
        }
        let (tlo, thi) = if q.is_negative() { (&hi * q, &lo * q) } else { (&lo * q, &hi * q) };
        lo_acc += tlo;
        hi_acc += thi;
    }
    let two = Rational::from(BigInt::from(2));
    NumericEval {
        value: (&lo_acc + &hi_acc) / &two,
        radius: (&hi_acc - &lo_acc) / &two,
    }
}
