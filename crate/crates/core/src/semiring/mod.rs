//! Pluggable semi-ring abstraction and the concrete instances used by TVGs.
//!
//! A semi-ring spec is a small value object (not a set of associated
//! functions) because several instances need runtime context: the path
//! semi-ring carries its vertex universe and walk budget, the delay
//! semi-ring carries its normalization switch.

use std::fmt::Debug;

use rand_chacha::ChaCha8Rng;

use crate::error::Result;

pub mod axioms;
pub mod boolean;
pub mod contact;
pub mod delay;
pub mod endo;
pub mod lifetime;
pub mod path;
pub mod tropical;

pub use axioms::{axioms_check, AxiomReport, AxiomViolation};
pub use boolean::BoolSemiring;
pub use contact::{Affine, ContactMap, ContactSemiring};
pub use delay::{DelaySemiring, DelayedLifetime};
pub use endo::{EndoSemiring, MonotoneEndo};
pub use lifetime::LifetimeSemiring;
pub use path::{PathSemiring, PathSum};
pub use tropical::TropicalSemiring;

/// A semi-ring: two monoids (addition, multiplication) with distributivity
/// and an annihilating zero.
///
/// `mul` is fallible because two instances enforce resource limits there:
/// the path semi-ring rejects walks over its length budget, and the contact
/// semi-ring rejects products that leave its representable fragment.
pub trait Semiring: Clone + Debug {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    /// Decidable equality; defaults to structural equality, which is correct
    /// for every instance here because values are kept in canonical form.
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// Random element source for the axiom suite and property tests.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
}
