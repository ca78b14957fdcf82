//! Cyclic Galois pairs L/k with a distinguished generator sigma.
//!
//! Two families are supported: F_{q^n}/F_q with the q-power Frobenius, and
//! Q(sqrt(m))/Q with conjugation. Norm membership is decided for every
//! finite pair and for Q(i)/Q; other quadratic pairs report `NotDecidable`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::brauer::BrauerClass;
use super::finite::Fq;
use super::ntheory::{abs_u64, factor, two_squares};
use super::quadratic::{QuadElem, QuadField};
use super::rational::Rationals;
use super::Field;
use crate::error::{Error, Result};

/// Serializable description of a Galois pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PairDescriptor {
    Finite {
        p: u32,
        base_modulus: Vec<u32>,
        ext_modulus: Vec<u32>,
    },
    Quadratic {
        m: i64,
    },
}

pub trait GaloisPair: Clone + std::fmt::Debug + Send + Sync {
    type Base: Field;
    type Ext: Field;

    fn base(&self) -> &Self::Base;
    fn ext(&self) -> &Self::Ext;
    /// n = [L : k] >= 2.
    fn degree(&self) -> usize;
    fn sigma(&self, x: &<Self::Ext as Field>::Elem) -> <Self::Ext as Field>::Elem;
    fn embed(&self, x: &<Self::Base as Field>::Elem) -> <Self::Ext as Field>::Elem;
    /// The preimage of x under `embed`, if x lies in k.
    fn restrict(&self, x: &<Self::Ext as Field>::Elem) -> Option<<Self::Base as Field>::Elem>;
    /// A basis of L over k.
    fn basis(&self) -> Vec<<Self::Ext as Field>::Elem>;
    fn descriptor(&self) -> PairDescriptor;

    /// Whether lambda is a norm from L.
    fn is_norm(&self, lambda: &<Self::Base as Field>::Elem) -> Result<bool>;

    /// Some a in L with N(a) = lambda, `None` if lambda is not a norm.
    fn norm_witness(
        &self,
        lambda: &<Self::Base as Field>::Elem,
    ) -> Result<Option<<Self::Ext as Field>::Elem>>;

    /// The class of the cyclic algebra (L/k, sigma, lambda).
    fn brauer_class(&self, lambda: &<Self::Base as Field>::Elem) -> Result<BrauerClass>;

    /// sigma^i(x).
    fn galois_apply(
        &self,
        x: &<Self::Ext as Field>::Elem,
        i: usize,
    ) -> <Self::Ext as Field>::Elem {
        let mut y = x.clone();
        for _ in 0..i % self.degree() {
            y = self.sigma(&y);
        }
        y
    }

    /// N(x) = x * sigma(x) * ... * sigma^{n-1}(x), which lies in k.
    fn norm(&self, x: &<Self::Ext as Field>::Elem) -> <Self::Base as Field>::Elem {
        let l = self.ext();
        let mut acc = l.one();
        let mut y = x.clone();
        for _ in 0..self.degree() {
            acc = l.mul(&acc, &y);
            y = self.sigma(&y);
        }
        self.restrict(&acc).expect("norms lie in the base field")
    }
}

/// F_{q^n} / F_q with sigma the q-power Frobenius.
#[derive(Clone, Debug)]
pub struct FiniteGaloisPair {
    base: Fq,
    ext: Fq,
    degree: usize,
    q: u64,
    embed: Vec<u32>,
    restrict: HashMap<u32, u32>,
}

impl FiniteGaloisPair {
    pub fn new(base: Fq, ext: Fq) -> Result<Self> {
        if base.characteristic() != ext.characteristic() {
            return Err(Error::Argument("fields of different characteristic".into()));
        }
        if !ext.degree().is_multiple_of(base.degree()) || ext.degree() == base.degree() {
            return Err(Error::Argument(format!(
                "{base:?} is not a proper subfield of {ext:?}"
            )));
        }
        let degree = (ext.degree() / base.degree()) as usize;
        let q = base.size() as u64;
        // The image of the base generator is a root of the base modulus in L.
        let image_of_x = if base.degree() == 1 {
            0
        } else {
            let m = base.modulus();
            (0..ext.size())
                .find(|r| {
                    let mut acc = 0u32;
                    for &c in m.iter().rev() {
                        acc = ext.add(&ext.mul(&acc, r), &ext.from_i64(c as i64));
                    }
                    acc == 0
                })
                .ok_or_else(|| Error::Invariant("base modulus has no root in extension".into()))?
        };
        let embed: Vec<u32> = (0..base.size())
            .map(|a| {
                let coeffs = base.coeffs(a);
                let mut acc = 0u32;
                for &c in coeffs.iter().rev() {
                    acc = ext.add(&ext.mul(&acc, &image_of_x), &ext.from_i64(c as i64));
                }
                if base.degree() == 1 {
                    ext.from_i64(a as i64)
                } else {
                    acc
                }
            })
            .collect();
        let restrict = embed.iter().enumerate().map(|(a, &e)| (e, a as u32)).collect();
        Ok(FiniteGaloisPair { base, ext, degree, q, embed, restrict })
    }

    /// F_{p^{k n}} / F_{p^k} with default moduli.
    pub fn standard(p: u32, base_degree: u32, degree: u32) -> Result<Self> {
        Self::new(Fq::new(p, base_degree)?, Fq::new(p, base_degree * degree)?)
    }
}

impl GaloisPair for FiniteGaloisPair {
    type Base = Fq;
    type Ext = Fq;

    fn base(&self) -> &Fq {
        &self.base
    }
    fn ext(&self) -> &Fq {
        &self.ext
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn sigma(&self, x: &u32) -> u32 {
        self.ext.pow(x, self.q)
    }
    fn embed(&self, x: &u32) -> u32 {
        self.embed[*x as usize]
    }
    fn restrict(&self, x: &u32) -> Option<u32> {
        self.restrict.get(x).copied()
    }
    fn basis(&self) -> Vec<u32> {
        // powers of a primitive element span L over k
        let g = self.ext.primitive_element();
        let mut out = Vec::new();
        let mut cur = 1u32;
        for _ in 0..self.degree {
            out.push(cur);
            cur = self.ext.mul(&cur, &g);
        }
        out
    }
    fn descriptor(&self) -> PairDescriptor {
        PairDescriptor::Finite {
            p: self.ext.characteristic(),
            base_modulus: self.base.modulus().to_vec(),
            ext_modulus: self.ext.modulus().to_vec(),
        }
    }
    fn is_norm(&self, lambda: &u32) -> Result<bool> {
        if *lambda == 0 {
            return Err(Error::Argument("norm membership of zero".into()));
        }
        // the norm map between finite fields is surjective
        Ok(true)
    }
    fn norm_witness(&self, lambda: &u32) -> Result<Option<u32>> {
        if *lambda == 0 {
            return Err(Error::Argument("norm witness of zero".into()));
        }
        Ok((1..self.ext.size()).find(|a| self.norm(a) == *lambda))
    }
    fn brauer_class(&self, lambda: &u32) -> Result<BrauerClass> {
        if *lambda == 0 {
            return Err(Error::Argument("Brauer class of zero".into()));
        }
        Ok(BrauerClass::Trivial)
    }
}

/// Q(sqrt(m)) / Q with sigma the conjugation sqrt(m) -> -sqrt(m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPair {
    field: QuadField,
}

impl QuadraticPair {
    pub fn new(m: i64) -> Result<Self> {
        Ok(QuadraticPair { field: QuadField::new(m)? })
    }

    /// Q(i)/Q, the pair on which norm membership is decided.
    pub fn gaussian() -> Self {
        QuadraticPair { field: QuadField::gaussian() }
    }

    pub fn m(&self) -> i64 {
        self.field.m()
    }

    fn require_decidable(&self) -> Result<()> {
        if self.field.m() == -1 {
            Ok(())
        } else {
            Err(Error::NotDecidable(format!(
                "norm membership for Q(sqrt({}))/Q is only decided for m = -1",
                self.field.m()
            )))
        }
    }

    /// Whether the classes of (L/Q, sigma, l1) and (L/Q, sigma, l2) agree,
    /// decided by norm membership of l1/l2.
    pub fn same_class(&self, l1: &BigRational, l2: &BigRational) -> Result<bool> {
        if l1.is_zero() || l2.is_zero() {
            return Err(Error::Argument("zero cocycle value".into()));
        }
        self.is_norm(&(l1 / l2))
    }
}

/// n > 0 is a sum of two integer squares iff primes 3 mod 4 occur to even powers.
fn is_sum_of_two_squares(n: &BigInt) -> Result<bool> {
    let m = abs_u64(n)?;
    Ok(factor(m).iter().all(|(&p, &e)| p % 4 != 3 || e % 2 == 0))
}

impl GaloisPair for QuadraticPair {
    type Base = Rationals;
    type Ext = QuadField;

    fn base(&self) -> &Rationals {
        &Rationals
    }
    fn ext(&self) -> &QuadField {
        &self.field
    }
    fn degree(&self) -> usize {
        2
    }
    fn sigma(&self, x: &QuadElem) -> QuadElem {
        self.field.conj(x)
    }
    fn embed(&self, x: &BigRational) -> QuadElem {
        QuadElem::rational(x.clone())
    }
    fn restrict(&self, x: &QuadElem) -> Option<BigRational> {
        x.is_rational().then(|| x.a.clone())
    }
    fn basis(&self) -> Vec<QuadElem> {
        vec![self.field.one(), self.field.sqrt_m()]
    }
    fn descriptor(&self) -> PairDescriptor {
        PairDescriptor::Quadratic { m: self.field.m() }
    }
    fn is_norm(&self, lambda: &BigRational) -> Result<bool> {
        if lambda.is_zero() {
            return Err(Error::Argument("norm membership of zero".into()));
        }
        self.require_decidable()?;
        if lambda.is_negative() {
            return Ok(false);
        }
        Ok(is_sum_of_two_squares(lambda.numer())? && is_sum_of_two_squares(lambda.denom())?)
    }
    fn norm_witness(&self, lambda: &BigRational) -> Result<Option<QuadElem>> {
        if !self.is_norm(lambda)? {
            return Ok(None);
        }
        // lambda = n/d = (n d)/d^2 and n d = x^2 + y^2
        let nd = lambda.numer() * lambda.denom();
        let (x, y) = two_squares(abs_u64(&nd)?)
            .ok_or_else(|| Error::Invariant("two-squares decomposition failed".into()))?;
        let d = BigRational::from_integer(lambda.denom().clone());
        let a = QuadElem::new(BigRational::from_integer(x) / &d, BigRational::from_integer(y) / &d);
        debug_assert_eq!(self.norm(&a), *lambda);
        Ok(Some(a))
    }
    fn brauer_class(&self, lambda: &BigRational) -> Result<BrauerClass> {
        if self.is_norm(lambda)? {
            Ok(BrauerClass::Trivial)
        } else {
            BrauerClass::cyclic_quadratic(self.field.m(), lambda)
        }
    }
}
