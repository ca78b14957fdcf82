use num_rational::BigRational;
use num_traits::{One, Zero};

use super::hilbert::quat_is_division;
use super::rational::rational_to_string;
use crate::error::{Error, Result};

/// x0 + x1*i + x2*j + x3*ij.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quat(pub [BigRational; 4]);

impl Quat {
    pub fn zero() -> Self {
        Quat(std::array::from_fn(|_| BigRational::zero()))
    }

    pub fn one() -> Self {
        Self::scalar(BigRational::one())
    }

    pub fn scalar(x: BigRational) -> Self {
        let mut q = Self::zero();
        q.0[0] = x;
        q
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Quat(c.map(|x| BigRational::from_integer(x.into())))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

/// The quaternion algebra (a, b)_Q: i^2 = a, j^2 = b, ij = -ji.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    a: BigRational,
    b: BigRational,
}

impl QuaternionAlgebra {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Argument("quaternion constants must be nonzero".into()));
        }
        Ok(QuaternionAlgebra { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    /// Hamilton's quaternions (-1, -1)_Q.
    pub fn hamilton() -> Self {
        Self::from_ints(-1, -1).unwrap()
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_division(&self) -> Result<bool> {
        quat_is_division(&self.a, &self.b)
    }

    pub fn i(&self) -> Quat {
        Quat::from_ints([0, 1, 0, 0])
    }

    pub fn j(&self) -> Quat {
        Quat::from_ints([0, 0, 1, 0])
    }

    pub fn ij(&self) -> Quat {
        Quat::from_ints([0, 0, 0, 1])
    }

    pub fn add(&self, x: &Quat, y: &Quat) -> Quat {
        Quat(std::array::from_fn(|k| &x.0[k] + &y.0[k]))
    }

    pub fn sub(&self, x: &Quat, y: &Quat) -> Quat {
        Quat(std::array::from_fn(|k| &x.0[k] - &y.0[k]))
    }

    pub fn neg(&self, x: &Quat) -> Quat {
        Quat(std::array::from_fn(|k| -&x.0[k]))
    }

    pub fn scale(&self, c: &BigRational, x: &Quat) -> Quat {
        Quat(std::array::from_fn(|k| c * &x.0[k]))
    }

    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        Quat([
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - &ab * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    pub fn conj(&self, x: &Quat) -> Quat {
        Quat([x.0[0].clone(), -&x.0[1], -&x.0[2], -&x.0[3]])
    }

    /// Reduced norm x0^2 - a x1^2 - b x2^2 + ab x3^2.
    pub fn nrd(&self, x: &Quat) -> BigRational {
        let [x0, x1, x2, x3] = &x.0;
        x0 * x0 - &self.a * x1 * x1 - &self.b * x2 * x2 + &self.a * &self.b * x3 * x3
    }

    pub fn trd(&self, x: &Quat) -> BigRational {
        &x.0[0] + &x.0[0]
    }

    /// Two-sided inverse conj(x)/Nrd(x).
    pub fn inv(&self, x: &Quat) -> Result<Quat> {
        let n = self.nrd(x);
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self.scale(&n.recip(), &self.conj(x)))
    }

    pub fn display(&self, x: &Quat) -> String {
        let names = ["", "i", "j", "ij"];
        let terms: Vec<String> = x
            .0
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| match (n, c.is_one()) {
                ("", _) => rational_to_string(c),
                (n, true) => n.to_string(),
                (n, false) if *c == -BigRational::one() => format!("-{n}"),
                (n, false) => format!("{}{}", rational_to_string(c), n),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+").replace("+-", "-")
        }
    }
}
