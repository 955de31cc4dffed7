//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Largest multiple of `1/2^bits` not above `x`. Used to move oracle output
/// onto an exact grid.
pub fn from_f64_floor(x: f64, bits: u32) -> Rational {
    if !x.is_finite() || x <= 0.0 {
        return zero();
    }
    let scale = (1u64 << bits) as f64;
    let num = (x * scale).floor();
    let Some(n) = num_traits::FromPrimitive::from_f64(num) else {
        return zero();
    };
    Rational::new(n, BigInt::from(1u64 << bits))
}

/// Largest multiple of `1/2^bits` not above `x`.
pub fn floor_to_grid(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    Rational::new(
        (x * Rational::from_integer(scale.clone()))
            .floor()
            .to_integer(),
        scale,
    )
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Prints `p/q`, or just `p` for integers.
pub fn fmt(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rational::new(p, q))
    } else {
        let p: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(p))
    }
}

pub fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}

/// Least common multiple of the denominators; multiplying by it makes every
/// value integral.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(fmt(&frac(6, 3)), "2");
        assert_eq!(fmt(&frac(-3, 4)), "-3/4");
        assert!(parse("1/0").is_none());
        assert!(parse("x").is_none());
    }

    #[test]
    fn floor_grid() {
        assert_eq!(from_f64_floor(0.75, 4), frac(3, 4));
        assert_eq!(from_f64_floor(-1.0, 4), zero());
        assert!(from_f64_floor(0.1, 10) <= frac(1, 10));
        assert_eq!(floor_to_grid(&frac(7, 10), 2), frac(1, 2));
        assert_eq!(floor_to_grid(&frac(-1, 3), 1), frac(-1, 2));
    }

    #[test]
    fn lcm_of_denominators() {
        let vals = [frac(1, 4), frac(1, 6), int(3)];
        assert_eq!(common_denominator(vals.iter()), BigInt::from(12));
    }
}
