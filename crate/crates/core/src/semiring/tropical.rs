//! The min-plus semi-ring on `R ∪ {∞}`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::error::Result;
use crate::scalar::Scalar;

/// Elements are `Scalar`s restricted to finite values and `+inf`;
/// `+inf` is the additive neutral (it loses every `min`).
#[derive(Debug, Clone, Copy, Default)]
pub struct TropicalSemiring;

impl Semiring for TropicalSemiring {
    type Elem = Scalar;

    fn zero(&self) -> Scalar {
        Scalar::PosInf
    }

    fn one(&self) -> Scalar {
        Scalar::zero()
    }

    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.clone().min(b.clone())
    }

    fn mul(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(a.add(b))
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Scalar {
        if rng.gen_ratio(1, 8) {
            Scalar::PosInf
        } else {
            Scalar::ratio(rng.gen_range(-100..=100), *[1, 2, 4].get(rng.gen_range(0..3)).unwrap())
        }
    }
}
