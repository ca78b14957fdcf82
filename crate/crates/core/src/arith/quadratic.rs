use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::ntheory::{abs_u64, factor};
use super::rational::rational_to_string;
use super::Field;
use crate::error::{Error, Result};

/// a + b*sqrt(m) with rational a, b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadElem { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadElem { a, b: BigRational::zero() }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

/// The quadratic field Q(sqrt(m)) for a squarefree integer m != 0, 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadField {
    m: i64,
    m_rat: BigRational,
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self> {
        if m == 0 || m == 1 {
            return Err(Error::Argument(format!("m = {m} does not define a quadratic field")));
        }
        if factor(abs_u64(&BigInt::from(m))?).values().any(|&e| e > 1) {
            return Err(Error::Argument(format!("m = {m} is not squarefree")));
        }
        Ok(QuadField { m, m_rat: BigRational::from_integer(m.into()) })
    }

    /// Q(i).
    pub fn gaussian() -> Self {
        Self::new(-1).unwrap()
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// The element sqrt(m).
    pub fn sqrt_m(&self) -> QuadElem {
        QuadElem::new(BigRational::zero(), BigRational::one())
    }

    pub fn elem(&self, a: BigRational, b: BigRational) -> QuadElem {
        QuadElem::new(a, b)
    }

    pub fn from_ints(&self, a: i64, b: i64) -> QuadElem {
        QuadElem::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn conj(&self, x: &QuadElem) -> QuadElem {
        QuadElem::new(x.a.clone(), -&x.b)
    }

    /// a^2 - m b^2.
    pub fn norm(&self, x: &QuadElem) -> BigRational {
        &x.a * &x.a - &self.m_rat * &x.b * &x.b
    }
}

impl Field for QuadField {
    type Elem = QuadElem;

    fn zero(&self) -> QuadElem {
        QuadElem::rational(BigRational::zero())
    }
    fn one(&self) -> QuadElem {
        QuadElem::rational(BigRational::one())
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a + &y.a, &x.b + &y.b)
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a - &y.a, &x.b - &y.b)
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem::new(-&x.a, -&x.b)
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(
            &x.a * &y.a + &self.m_rat * &x.b * &y.b,
            &x.a * &y.b + &x.b * &y.a,
        )
    }
    fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        let n = self.norm(x);
        if n.is_zero() {
            return None;
        }
        Some(QuadElem::new(&x.a / &n, -&x.b / &n))
    }
    fn from_i64(&self, n: i64) -> QuadElem {
        QuadElem::rational(BigRational::from_integer(n.into()))
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Option<Vec<QuadElem>> {
        None
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> QuadElem {
        self.from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3))
    }
    fn display(&self, x: &QuadElem) -> String {
        let root = if self.m == -1 { "i".to_string() } else { format!("sqrt({})", self.m) };
        match (x.a.is_zero(), x.b.is_zero()) {
            (_, true) => rational_to_string(&x.a),
            (true, false) if x.b.is_one() => root,
            (true, false) => format!("{}{}", rational_to_string(&x.b), root),
            (false, false) => {
                let sign = if x.b.is_negative() { "-" } else { "+" };
                let mag = x.b.abs();
                let coeff = if mag.is_one() { String::new() } else { rational_to_string(&mag) };
                format!("{}{}{}{}", rational_to_string(&x.a), sign, coeff, root)
            }
        }
    }
}
