//! The propagation-delay semi-ring: lifetimes paired with light-travel time.
//!
//! Multiplication intersects the first lifetime with the second shifted back
//! by the first delay, and adds the delays; addition takes the union of
//! lifetimes and the worst-case (max) delay.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::lifetime::sample_interval_set;
use super::Semiring;
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::scalar::Scalar;

/// A lifetime together with a non-negative propagation delay.
#[derive(Clone, PartialEq, Eq)]
pub struct DelayedLifetime {
    pub lifetime: IntervalSet,
    pub delay: Scalar,
}

impl DelayedLifetime {
    pub fn new(lifetime: IntervalSet, delay: Scalar) -> Self {
        assert!(
            delay.is_finite() && !delay.is_negative(),
            "delay must be finite and non-negative"
        );
        DelayedLifetime { lifetime, delay }
    }

    /// Quotient normalization: every empty-lifetime element collapses to
    /// `(empty, 0)`. Without this the literal definition breaks annihilation,
    /// since `(empty,0) * (I,s) = (empty,s)`.
    pub fn normalized(mut self) -> Self {
        if self.lifetime.is_empty() {
            self.delay = Scalar::zero();
        }
        self
    }

    /// Times at which a message sent during the lifetime is received.
    pub fn arrival_set(&self) -> IntervalSet {
        self.lifetime.shift(&self.delay)
    }
}

impl fmt::Debug for DelayedLifetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {})", self.lifetime, self.delay)
    }
}

impl fmt::Display for DelayedLifetime {
    /// Canonical text form `(intervalset; delay)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.lifetime, self.delay)
    }
}

impl FromStr for DelayedLifetime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::ValueParse {
            kind: "delayed lifetime",
            text: s.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(err)?;
        let (set, delay) = inner.rsplit_once(';').ok_or_else(err)?;
        let lifetime: IntervalSet = set.parse()?;
        let delay: Scalar = delay.parse()?;
        if !delay.is_finite() || delay.is_negative() {
            return Err(err());
        }
        Ok(DelayedLifetime::new(lifetime, delay).normalized())
    }
}

/// Spec object for the delay semi-ring. `normalize: false` exposes the raw
/// operations of the definition, which fail annihilation; the axiom suite
/// keeps that failure as a regression witness for the quotient decision.
#[derive(Debug, Clone, Copy)]
pub struct DelaySemiring {
    pub normalize: bool,
}

impl Default for DelaySemiring {
    fn default() -> Self {
        DelaySemiring { normalize: true }
    }
}

impl DelaySemiring {
    pub fn raw() -> Self {
        DelaySemiring { normalize: false }
    }

    fn out(&self, v: DelayedLifetime) -> DelayedLifetime {
        if self.normalize {
            v.normalized()
        } else {
            v
        }
    }
}

impl Semiring for DelaySemiring {
    type Elem = DelayedLifetime;

    fn zero(&self) -> DelayedLifetime {
        DelayedLifetime::new(IntervalSet::empty(), Scalar::zero())
    }

    fn one(&self) -> DelayedLifetime {
        DelayedLifetime::new(IntervalSet::full(), Scalar::zero())
    }

    fn add(&self, a: &DelayedLifetime, b: &DelayedLifetime) -> DelayedLifetime {
        self.out(DelayedLifetime::new(
            a.lifetime.union(&b.lifetime),
            a.delay.clone().max(b.delay.clone()),
        ))
    }

    fn mul(&self, a: &DelayedLifetime, b: &DelayedLifetime) -> Result<DelayedLifetime> {
        let neg_s = Scalar::zero().sub(&a.delay);
        let lifetime = a.lifetime.intersect(&b.lifetime.shift(&neg_s));
        Ok(self.out(DelayedLifetime::new(lifetime, a.delay.add(&b.delay))))
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> DelayedLifetime {
        let lifetime = sample_interval_set(rng, 2, 0, 50);
        let delay = Scalar::ratio(rng.gen_range(0..=20), *[1, 2].get(rng.gen_range(0..2)).unwrap());
        self.out(DelayedLifetime::new(lifetime, delay))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dl(lo: i64, hi: i64, delay: i64) -> DelayedLifetime {
        DelayedLifetime::new(IntervalSet::of(lo, hi), Scalar::from_int(delay))
    }

    #[test]
    fn worked_products() {
        let ring = DelaySemiring::default();
        // A -> B -> D
        let ab = dl(0, 10, 1);
        let bd = dl(9, 15, 3);
        let got = ring.mul(&ab, &bd).unwrap();
        assert_eq!(got, dl(8, 10, 4));
        // A -> C -> D
        let ac = dl(0, 10, 3);
        let cd = dl(9, 10, 2);
        let got = ring.mul(&ac, &cd).unwrap();
        assert_eq!(got, dl(6, 7, 5));
        // worst-case aggregation of the two routes
        let sum = ring.add(&dl(8, 10, 4), &dl(6, 7, 5));
        assert_eq!(
            sum.lifetime,
            IntervalSet::of(6, 7).union(&IntervalSet::of(8, 10))
        );
        assert_eq!(sum.delay, Scalar::from_int(5));
    }

    #[test]
    fn identities() {
        let ring = DelaySemiring::default();
        let x = dl(3, 7, 2);
        assert_eq!(ring.mul(&x, &ring.one()).unwrap(), x);
        assert_eq!(ring.mul(&ring.one(), &x).unwrap(), x);
        assert_eq!(ring.add(&x, &ring.zero()), x);
        assert_eq!(ring.add(&x, &x), x);
    }

    #[test]
    fn raw_ring_breaks_annihilation() {
        let raw = DelaySemiring::raw();
        let x = dl(0, 5, 3);
        let z = raw.zero();
        let zx = raw.mul(&z, &x).unwrap();
        assert_ne!(zx, z, "raw definition keeps the phantom delay");
        let norm = DelaySemiring::default();
        assert_eq!(norm.mul(&norm.zero(), &x).unwrap(), norm.zero());
    }

    #[test]
    fn text_roundtrip() {
        let v = DelayedLifetime::new(
            IntervalSet::of(6, 7).union(&IntervalSet::of(8, 10)),
            Scalar::from_int(5),
        );
        let text = v.to_string();
        assert_eq!(text, "([6,7]u[8,10]; 5)");
        assert_eq!(text.parse::<DelayedLifetime>().unwrap(), v);
    }
}
