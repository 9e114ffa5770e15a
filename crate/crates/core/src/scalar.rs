//! Exact scalar arithmetic: rational numbers extended with the two infinities.
//!
//! All interval endpoints, delays, and distances in this crate are `Scalar`s.
//! Keeping endpoints rational makes equality of matrices decidable, which is
//! what fixed-point detection in the Kleene star iteration relies on.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};

use crate::error::Error;

/// Exact rational backing type. `i128` keeps arithmetic allocation-free;
/// checked operations catch the (astronomically unlikely) overflow.
pub type Rat = Ratio<i128>;

fn rat_checked<T>(v: Option<T>) -> T {
    v.expect("rational arithmetic overflow (endpoints out of supported range)")
}

/// An exact rational number, or one of the symbols -inf / +inf.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl Scalar {
    pub fn from_int(v: i64) -> Self {
        Scalar::Finite(Rat::from_integer(v as i128))
    }

    /// Exact fraction `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Finite(Rat::new(num as i128, den as i128))
    }

    pub fn zero() -> Self {
        Scalar::Finite(Rat::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Scalar::Finite(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn expect_finite(&self) -> &Rat {
        self.as_rat().expect("expected a finite scalar")
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::NegInf => true,
            Scalar::Finite(r) => r.is_negative(),
            Scalar::PosInf => false,
        }
    }

    /// Sum that treats infinities as absorbing. Panics on `-inf + inf`.
    pub fn add(&self, other: &Scalar) -> Scalar {
        use Scalar::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(rat_checked(a.checked_add(b))),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                panic!("undefined sum -inf + inf")
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }

    /// Difference `self - other` with absorbing infinities; panics on `inf - inf`.
    pub fn sub(&self, other: &Scalar) -> Scalar {
        use Scalar::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(rat_checked(a.checked_sub(b))),
            (PosInf, PosInf) | (NegInf, NegInf) => panic!("undefined difference inf - inf"),
            (PosInf, _) | (_, NegInf) => PosInf,
            (NegInf, _) | (_, PosInf) => NegInf,
        }
    }

    /// Product of finite scalars; infinities are rejected.
    pub fn mul_finite(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Finite(a), Scalar::Finite(b)) => {
                Scalar::Finite(rat_checked(a.checked_mul(b)))
            }
            _ => panic!("mul_finite on infinite scalar"),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::NegInf | Scalar::PosInf => Scalar::PosInf,
            Scalar::Finite(r) => Scalar::Finite(r.abs()),
        }
    }

    /// Absolute difference; `|inf - inf| = 0` for equal infinities.
    pub fn abs_diff(&self, other: &Scalar) -> Scalar {
        use Scalar::*;
        match (self, other) {
            (PosInf, PosInf) | (NegInf, NegInf) => Scalar::zero(),
            (Finite(a), Finite(b)) => Finite(rat_checked(a.checked_sub(b)).abs()),
            _ => PosInf,
        }
    }

    pub fn half(&self) -> Scalar {
        match self {
            Scalar::Finite(r) => Scalar::Finite(r / Rat::from_integer(2)),
            other => other.clone(),
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::NegInf => f64::NEG_INFINITY,
            Scalar::PosInf => f64::INFINITY,
            Scalar::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        use Scalar::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::NegInf => write!(f, "-inf"),
            Scalar::PosInf => write!(f, "inf"),
            Scalar::Finite(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `inf`, `-inf`, integers, fractions `p/q`, and decimal literals.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let err = || Error::ScalarParse(s.to_string());
        match s {
            "inf" | "+inf" => return Ok(Scalar::PosInf),
            "-inf" => return Ok(Scalar::NegInf),
            _ => {}
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: i128 = num.trim().parse().map_err(|_| err())?;
            let d: i128 = den.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Scalar::Finite(Rat::new(n, d)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let neg = int_part.trim_start().starts_with('-');
            let i: i128 = if int_part.is_empty() || int_part == "-" {
                0
            } else {
                int_part.parse().map_err(|_| err())?
            };
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            if frac_part.len() > 27 {
                return Err(err());
            }
            let f: i128 = frac_part.parse().map_err(|_| err())?;
            let den = 10i128.pow(frac_part.len() as u32);
            let mag = Rat::new(i.abs(), 1) + Rat::new(f, den);
            let val = if neg { -mag } else { mag };
            return Ok(Scalar::Finite(val));
        }
        let n: i128 = s.parse().map_err(|_| err())?;
        Ok(Scalar::Finite(Rat::from_integer(n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_total() {
        let vals = [
            Scalar::NegInf,
            Scalar::from_int(-3),
            Scalar::ratio(1, 2),
            Scalar::from_int(1),
            Scalar::PosInf,
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["-inf", "inf", "5", "-7", "3/4", "-22/7"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        let v: Scalar = "3.25".parse().unwrap();
        assert_eq!(v, Scalar::ratio(13, 4));
        let v: Scalar = "-0.5".parse().unwrap();
        assert_eq!(v, Scalar::ratio(-1, 2));
        assert!("abc".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
    }

    #[test]
    fn abs_diff_handles_infinities() {
        assert_eq!(Scalar::PosInf.abs_diff(&Scalar::PosInf), Scalar::zero());
        assert_eq!(Scalar::PosInf.abs_diff(&Scalar::from_int(3)), Scalar::PosInf);
        assert_eq!(
            Scalar::from_int(3).abs_diff(&Scalar::from_int(-4)),
            Scalar::from_int(7)
        );
    }
}
