//! Helpers for exact rational arithmetic on the torus.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Fractional part in [0, 1).
pub fn mod1(x: &Rat) -> Rat {
    x - x.floor()
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Canonical text form: "n" for integers, "n/d" otherwise.
pub fn rat_to_string(x: &Rat) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim().parse::<BigInt>().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("invalid integer '{t}'"),
        })
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
        None => Ok(Rat::from(parse_int(s)?)),
    }
}

/// Integer square root check: Some(r) iff n = r^2 with r >= 0.
pub fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod1_basics() {
        assert_eq!(mod1(&rat(7, 2)), rat(1, 2));
        assert_eq!(mod1(&rat(-1, 4)), rat(3, 4));
        assert_eq!(mod1(&rat_int(3)), rat_int(0));
    }

    #[test]
    fn rat_round_trip() {
        for s in ["3/4", "-5", "0", "-7/3"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(rat_to_string(&x), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn perfect_sqrt_check() {
        assert_eq!(perfect_sqrt(&BigInt::from(49)), Some(BigInt::from(7)));
        assert_eq!(perfect_sqrt(&BigInt::from(48)), None);
        assert_eq!(perfect_sqrt(&BigInt::from(-4)), None);
    }
}
