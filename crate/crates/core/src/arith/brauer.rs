use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::galois::{GaloisPair, PairDescriptor, QuadraticPair};
use super::ntheory::squarefree_part;
use crate::error::{Error, Result};

/// A Brauer class, stored as normalized cyclic-algebra data.
///
/// `Cyclic` records the pair and a cocycle value whose square class has been
/// reduced to a squarefree integer. Two `Cyclic` values with different
/// `lambda` can still be the same class; use [`BrauerClass::equivalent`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BrauerClass {
    Trivial,
    Cyclic {
        pair: PairDescriptor,
        #[serde(with = "bigint_string")]
        lambda: BigInt,
        index: u32,
    },
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl BrauerClass {
    /// The class of the quaternion algebra (m, lambda)_Q, assumed nontrivial.
    pub(crate) fn cyclic_quadratic(m: i64, lambda: &BigRational) -> Result<Self> {
        let (s, _) = squarefree_part(lambda)?;
        Ok(BrauerClass::Cyclic {
            pair: PairDescriptor::Quadratic { m },
            lambda: s,
            index: 2,
        })
    }

    pub fn index(&self) -> u32 {
        match self {
            BrauerClass::Trivial => 1,
            BrauerClass::Cyclic { index, .. } => *index,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, BrauerClass::Trivial)
    }

    /// Class equality: for cyclic classes over the same quadratic pair this
    /// is norm membership of the quotient of cocycle values.
    pub fn equivalent(&self, other: &BrauerClass) -> Result<bool> {
        match (self, other) {
            (BrauerClass::Trivial, BrauerClass::Trivial) => Ok(true),
            (BrauerClass::Trivial, BrauerClass::Cyclic { .. })
            | (BrauerClass::Cyclic { .. }, BrauerClass::Trivial) => Ok(false),
            (
                BrauerClass::Cyclic { pair: p1, lambda: l1, .. },
                BrauerClass::Cyclic { pair: p2, lambda: l2, .. },
            ) => match (p1, p2) {
                (PairDescriptor::Quadratic { m: m1 }, PairDescriptor::Quadratic { m: m2 })
                    if m1 == m2 =>
                {
                    let pair = QuadraticPair::new(*m1)?;
                    pair.same_class(
                        &BigRational::from_integer(l1.clone()),
                        &BigRational::from_integer(l2.clone()),
                    )
                }
                _ => Err(Error::NotDecidable(
                    "comparison of cyclic classes over different pairs".into(),
                )),
            },
        }
    }

    /// The quaternion constants (m, lambda) when the class is quadratic cyclic.
    pub fn quaternion_constants(&self) -> Option<(i64, BigInt)> {
        match self {
            BrauerClass::Cyclic { pair: PairDescriptor::Quadratic { m }, lambda, .. } => {
                Some((*m, lambda.clone()))
            }
            _ => None,
        }
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BrauerClass::Trivial => write!(f, "Trivial"),
            BrauerClass::Cyclic { pair: PairDescriptor::Quadratic { m }, lambda, .. } => {
                write!(f, "({m},{lambda})_Q")
            }
            BrauerClass::Cyclic { pair, lambda, .. } => write!(f, "cyclic({pair:?}, {lambda})"),
        }
    }
}

/// Convenience: class of lambda over any pair.
pub fn brauer_class<P: GaloisPair>(
    pair: &P,
    lambda: &<P::Base as crate::arith::Field>::Elem,
) -> Result<BrauerClass> {
    pair.brauer_class(lambda)
}
