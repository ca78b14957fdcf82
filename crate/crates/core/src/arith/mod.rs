//! Exact coefficient arithmetic: prime and extension finite fields, the
//! rationals, quadratic number fields, rational quaternion algebras, cyclic
//! Galois pairs and the Brauer-class bookkeeping built on top of them.
//!
//! Fields are value objects implementing [`Field`]; elements are plain data
//! and every operation goes through the field, in the style of a ring store.
//! Nothing here uses floating point.

pub mod brauer;
pub mod finite;
pub mod galois;
pub mod hilbert;
pub mod ntheory;
pub mod quadratic;
pub mod quaternion;
pub mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

pub use brauer::BrauerClass;
pub use finite::Fq;
pub use galois::{FiniteGaloisPair, GaloisPair, QuadraticPair};
pub use hilbert::{hilbert_symbol, quat_is_division, Place};
pub use quadratic::{QuadElem, QuadField};
pub use quaternion::{Quat, QuaternionAlgebra};
pub use rational::{parse_rational, rational_to_string, Rationals};

/// A commutative field with exact arithmetic.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Number of elements, `None` for infinite fields.
    fn order(&self) -> Option<u64>;

    /// All elements in a fixed order, `None` for infinite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    /// A random element. Infinite fields draw small integral coordinates so
    /// that random search stays cheap in exact arithmetic.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn display(&self, a: &Self::Elem) -> String;
}
