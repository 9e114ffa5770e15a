//! The two-element semi-ring: OR as addition, AND as multiplication.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::error::Result;

#[derive(Debug, Clone, Copy, Default)]
pub struct BoolSemiring;

impl Semiring for BoolSemiring {
    type Elem = bool;

    fn zero(&self) -> bool {
        false
    }

    fn one(&self) -> bool {
        true
    }

    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }

    fn mul(&self, a: &bool, b: &bool) -> Result<bool> {
        Ok(*a && *b)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> bool {
        rng.gen()
    }
}
