//! The lifetime semi-ring: interval sets under union and intersection.

use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::error::Result;
use crate::interval::IntervalSet;

#[derive(Debug, Clone, Copy, Default)]
pub struct LifetimeSemiring;

impl Semiring for LifetimeSemiring {
    type Elem = IntervalSet;

    fn zero(&self) -> IntervalSet {
        IntervalSet::empty()
    }

    fn one(&self) -> IntervalSet {
        IntervalSet::full()
    }

    fn add(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.union(b)
    }

    fn mul(&self, a: &IntervalSet, b: &IntervalSet) -> Result<IntervalSet> {
        Ok(a.intersect(b))
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> IntervalSet {
        sample_interval_set(rng, 3, 0, 100)
    }
}

/// Random interval set with at most `max_components` intervals and small
/// rational endpoints in `[lo, hi]`.
pub fn sample_interval_set(
    rng: &mut ChaCha8Rng,
    max_components: usize,
    lo: i64,
    hi: i64,
) -> IntervalSet {
    use rand::Rng;
    let n = rng.gen_range(0..=max_components);
    let mut ivs = Vec::with_capacity(n);
    for _ in 0..n {
        let den = *[1, 2, 4].get(rng.gen_range(0..3)).unwrap();
        let a = rng.gen_range(lo * den..=hi * den);
        let b = rng.gen_range(a..=hi * den);
        ivs.push((
            crate::scalar::Scalar::ratio(a, den),
            crate::scalar::Scalar::ratio(b, den),
        ));
    }
    IntervalSet::from_intervals(ivs)
}
