//! Hilbert symbols over Q and the division test for quaternion algebras.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ntheory::{is_prime, legendre, odd_prime_support, residue};
use crate::error::{Error, Result};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::Argument(format!("{p} is not a prime place")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Same square class, integral: a * denom(a)^2.
fn integral_representative(a: &BigRational) -> BigInt {
    a.numer() * a.denom()
}

fn split_valuation(mut x: BigInt, p: u64) -> (u32, BigInt) {
    let bp = BigInt::from(p);
    let mut v = 0;
    while (&x % &bp).is_zero() {
        x /= &bp;
        v += 1;
    }
    (v, x)
}

/// The local Hilbert symbol (a, b)_v in {+1, -1}: +1 iff z^2 = a x^2 + b y^2
/// has a nontrivial solution over the completion of Q at `place`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Argument("Hilbert symbol of zero".into()));
    }
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::Argument(format!("{p} is not a prime place")));
            }
            let (alpha, u) = split_valuation(integral_representative(a), p);
            let (beta, v) = split_valuation(integral_representative(b), p);
            if p == 2 {
                let eps = |x: &BigInt| ((residue(x, 4) - 1) / 2) as u32;
                let omega = |x: &BigInt| {
                    let r = residue(x, 8);
                    ((r * r - 1) / 8 % 2) as u32
                };
                let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
                Ok(if e % 2 == 0 { 1 } else { -1 })
            } else {
                let eps_p = ((p - 1) / 2 % 2) as u32;
                let mut s = if (alpha * beta * eps_p).is_multiple_of(2) { 1 } else { -1 };
                if beta % 2 == 1 {
                    s *= legendre(&u, p);
                }
                if alpha % 2 == 1 {
                    s *= legendre(&v, p);
                }
                Ok(s)
            }
        }
    }
}

/// Places where (a, b)_Q can ramify: infinity, 2 and the odd primes dividing
/// numerators or denominators of a and b.
pub fn candidate_places(a: &BigRational, b: &BigRational) -> Result<Vec<Place>> {
    let mut places = vec![Place::Infinity, Place::Prime(2)];
    let mut odd = odd_prime_support(a)?;
    odd.extend(odd_prime_support(b)?);
    odd.sort_unstable();
    odd.dedup();
    places.extend(odd.into_iter().map(Place::Prime));
    Ok(places)
}

/// Places where the quaternion algebra (a, b)_Q is ramified.
pub fn ramified_places(a: &BigRational, b: &BigRational) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for place in candidate_places(a, b)? {
        if hilbert_symbol(a, b, place)? == -1 {
            out.push(place);
        }
    }
    Ok(out)
}

/// Whether (a, b)_Q is a division algebra (as opposed to Mat_2(Q)).
pub fn quat_is_division(a: &BigRational, b: &BigRational) -> Result<bool> {
    Ok(!ramified_places(a, b)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn known_symbols() {
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Prime(3)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(5), Place::Infinity).unwrap(), 1);
    }

    #[test]
    fn bad_places() {
        assert!(Place::prime(0).is_err());
        assert!(Place::prime(9).is_err());
        assert!(hilbert_symbol(&rat(2), &rat(3), Place::Prime(15)).is_err());
        assert!(hilbert_symbol(&rat(0), &rat(3), Place::Infinity).is_err());
    }

    #[test]
    fn division_examples() {
        assert!(quat_is_division(&rat(-1), &rat(-1)).unwrap());
        assert!(!quat_is_division(&rat(1), &rat(7)).unwrap());
        assert!(!quat_is_division(&rat(-1), &rat(5)).unwrap());
        assert_eq!(
            ramified_places(&rat(-1), &rat(-1)).unwrap(),
            vec![Place::Infinity, Place::Prime(2)]
        );
    }
}
