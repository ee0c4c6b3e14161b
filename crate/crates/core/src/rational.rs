//! Exact rational numbers and the scalar abstraction shared by the LP
//! subsolver and MUSSQ.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational used throughout the model.
pub type Q = BigRational;

/// Integer as a rational.
pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(v: f64) -> Option<Q> {
    Q::from_float(v)
}

pub fn max_q<'a>(a: &'a Q, b: &'a Q) -> &'a Q {
    if a >= b {
        a
    } else {
        b
    }
}

/// Smallest integer `>= q`.
pub fn ceil_int(q: &Q) -> BigInt {
    q.ceil().to_integer()
}

/// Formats a rational as a plain decimal when it has a finite decimal
/// expansion and as `num/den` otherwise.
pub fn format_q(q: &Q) -> String {
    if q.is_integer() {
        return q.to_integer().to_string();
    }
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let digits = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = (q * Q::from_integer(scale)).to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int_part, frac_part) = s.split_at(s.len() - digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_part)
}

/// Parses `"3"`, `"-2.75"`, `"1e-3"` or `"7/3"` into an exact rational.
pub fn parse_q(text: &str) -> Result<Q, Error> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let mut value = Q::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let shift = exp - fp.len() as i32;
    let ten = Q::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Arithmetic needed by the tableau simplex and by MUSSQ.
///
/// Exact for [`Q`]; for `f64` the sign tests use an absolute tolerance.
pub trait Scalar: Clone + Debug + PartialOrd + Zero + One {
    fn from_q(q: &Q) -> Self;
    fn to_q(&self) -> Q;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn div_by(&mut self, d: &Self);
    fn ratio(a: &Self, b: &Self) -> Self {
        let mut r = a.clone();
        r.div_by(b);
        r
    }
}

impl Scalar for Q {
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn to_q(&self) -> Q {
        self.clone()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *self -= a * b;
        }
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *self += a * b;
        }
    }
    fn div_by(&mut self, d: &Self) {
        *self /= d;
    }
}

/// Absolute tolerance for float sign tests.
pub const FLOAT_EPS: f64 = 1e-9;

impl Scalar for f64 {
    fn from_q(q: &Q) -> Self {
        to_f64(q)
    }
    fn to_q(&self) -> Q {
        from_f64(*self).unwrap_or_else(Q::zero)
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn div_by(&mut self, d: &Self) {
        *self /= d;
    }
}
