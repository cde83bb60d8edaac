//! Exact rational scalars.
//!
//! Every quantity in the engine is an exact [`Rational`]. Printing is canonical
//! (`p/q` in lowest terms with `q > 0`, integers without a denominator) so that
//! repeated runs produce byte-identical reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Significant digits of the decimal echo column.
pub const DECIMAL_DIGITS: usize = 12;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p`, `-p`, `p/q` (q ≠ 0). Whitespace is not accepted inside the token.
pub fn parse_rational(token: &str) -> Option<Rational> {
    match token.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => token.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Canonical exact form: `p` for integers, `p/q` otherwise.
pub fn fmt_exact(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn fmt_point(point: &[Rational]) -> String {
    let parts: Vec<String> = point.iter().map(fmt_exact).collect();
    format!("({})", parts.join(", "))
}

/// Decimal rendering with [`DECIMAL_DIGITS`] significant digits, rounding half to even.
pub fn fmt_decimal(value: &Rational) -> String {
    fmt_decimal_digits(value, DECIMAL_DIGITS)
}

pub fn fmt_decimal_digits(value: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let a = value.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= a < 10^(e+1)
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }

    let scaled = &a * pow10(sig as i64 - 1 - e);
    let mut digits = round_half_even(&scaled);
    let limit = num_traits::pow(ten.clone(), sig);
    if digits >= limit {
        digits /= &ten;
        e += 1;
    }
    let digits = digits.to_string();
    debug_assert_eq!(digits.len(), sig);

    let body = if e.abs() > 20 {
        let mut s = String::new();
        s.push_str(&digits[..1]);
        let tail = digits[1..].trim_end_matches('0');
        if !tail.is_empty() {
            s.push('.');
            s.push_str(tail);
        }
        format!("{s}e{e}")
    } else if e >= sig as i64 - 1 {
        let zeros = (e - (sig as i64 - 1)) as usize;
        format!("{digits}{}", "0".repeat(zeros))
    } else if e < 0 {
        let lead = "0".repeat((-e - 1) as usize);
        let s = format!("0.{lead}{digits}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        let split = (e + 1) as usize;
        let s = format!("{}.{}", &digits[..split], &digits[split..]);
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn round_half_even(value: &Rational) -> BigInt {
    let floor = value.floor().to_integer();
    let frac = value - Rational::from_integer(floor.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if frac > half || (frac == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    }
}

pub fn ceil_int(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

pub fn floor_int(value: &Rational) -> BigInt {
    value.floor().to_integer()
}

/// Ceiling as `i64`; panics only if the value does not fit, which callers rule out.
pub fn ceil_i64(value: &Rational) -> i64 {
    ceil_int(value).to_i64().expect("ceiling exceeds i64 range")
}

pub fn floor_i64(value: &Rational) -> i64 {
    floor_int(value).to_i64().expect("floor exceeds i64 range")
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators (1 for an empty input).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to a primitive integer vector with the same direction.
/// Returns the scale factor used alongside the integers; the zero vector maps to itself.
pub fn primitive_direction(values: &[Rational]) -> (Vec<BigInt>, Rational) {
    let l = denominator_lcm(values);
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return (ints, Rational::one());
    }
    let prim = ints.iter().map(|v| v / &g).collect();
    (prim, Rational::new(l, g))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
