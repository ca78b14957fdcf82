//! Finite fields F_p and F_{p^n}.
//!
//! An element of F_{p^n} = F_p[x]/(f) is stored as the integer
//! `c0 + c1*p + ... + c_{n-1}*p^{n-1}` built from its coefficient vector, so
//! elements are `u32` indices in `0..q` and zero is index 0. Fields up to
//! `TABLE_LIMIT` elements precompute addition and multiplication tables.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::ntheory::is_prime;
use super::Field;
use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 256;
const ORDER_LIMIT: u64 = 1 << 24;

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The finite field F_q with q = p^n, given by a monic irreducible modulus.
#[derive(Clone)]
pub struct Fq {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, low degree first, length n + 1.
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}[mod {:?}]", self.p, self.n, self.modulus)
        }
    }
}

/// Polynomial remainder over F_p; both inputs low degree first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = (top as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    super::ntheory::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let n = modulus.len() - 1;
    // no monic divisor of degree 1..=n/2
    for deg in 1..=n / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(deg + 1);
            let mut t = idx;
            for _ in 0..deg {
                div.push((t % p as u64) as u32);
                t /= p as u64;
            }
            div.push(1);
            if poly_rem(modulus, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Fq {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::with_modulus(p, vec![0, 1])
    }

    /// F_{p^n} with the lexicographically first monic irreducible modulus.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("extension degree must be positive".into()));
        }
        if n == 1 {
            return Self::prime(p);
        }
        if !is_prime(p as u64) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        let count = (p as u64).checked_pow(n).filter(|&c| c <= ORDER_LIMIT).ok_or_else(|| {
            Error::Argument(format!("field of order {p}^{n} is too large"))
        })?;
        for idx in 0..count {
            let mut m = Vec::with_capacity(n as usize + 1);
            let mut t = idx;
            for _ in 0..n {
                m.push((t % p as u64) as u32);
                t /= p as u64;
            }
            m.push(1);
            if m[0] != 0 && is_irreducible(&m, p) {
                return Self::with_modulus(p, m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// F_p[x]/(modulus); the modulus must be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::Argument("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Argument("modulus coefficients must be reduced mod p".into()));
        }
        let n = (modulus.len() - 1) as u32;
        if !is_irreducible(&modulus, p) {
            return Err(Error::Argument(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let q = (p as u64)
            .checked_pow(n)
            .filter(|&q| q <= ORDER_LIMIT)
            .ok_or_else(|| Error::Argument(format!("field of order {p}^{n} is too large")))?
            as u32;
        let mut field = Fq { p, n, q, modulus, tables: None };
        if q as u64 <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_raw(a as u32, b as u32);
                mul[a * q + b] = self.mul_raw(a as u32, b as u32);
            }
        }
        let neg = (0..q).map(|a| self.neg_raw(a as u32)).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u32;
        }
        Tables { add, mul, neg, inv }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficient vector (length n, low degree first) of an element.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut t = a;
        for _ in 0..self.n {
            out.push(t % self.p);
            t /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.n as usize {
            return Err(Error::Domain(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.n
            )));
        }
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::Domain(format!("coefficient {c} not reduced mod {}", self.p)));
            }
            acc = acc * self.p + c;
        }
        Ok(acc)
    }

    /// The class of x in F_p[x]/(f).
    pub fn generator(&self) -> u32 {
        if self.n == 1 {
            // F_p[x]/(x) identifies x with 0; use a primitive root instead.
            return self.primitive_element();
        }
        self.p
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let order = self.q as u64 - 1;
        let prime_factors: Vec<u64> = super::ntheory::factor(order).into_keys().collect();
        (1..self.q)
            .find(|&g| {
                prime_factors
                    .iter()
                    .all(|&r| !self.is_one(&self.pow(&g, order / r)))
            })
            .expect("multiplicative group is cyclic")
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut acc = 0u32;
        let mut place = 1u32;
        for _ in 0..self.n {
            let d = (a % self.p + b % self.p) % self.p;
            acc += d * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        acc
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let coeffs: Vec<u32> = self.coeffs(a).iter().map(|&c| (self.p - c) % self.p).collect();
        self.from_coeffs(&coeffs).unwrap()
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let p = self.p as u64;
        let mut prod = vec![0u32; 2 * self.n as usize - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r).unwrap()
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.q {
            Ok(a)
        } else {
            Err(Error::Domain(format!("{a} is not an element of {self:?}")))
        }
    }
}

impl Field for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            Some(t) => t.add[(*a * self.q + *b) as usize],
            None if self.n == 1 => (a + b) % self.p,
            None => self.add_raw(*a, *b),
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[*a as usize],
            None if self.n == 1 => (self.p - a) % self.p,
            None => self.neg_raw(*a),
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[(*a * self.q + *b) as usize],
            None if self.n == 1 => (*a as u64 * *b as u64 % self.p as u64) as u32,
            None => self.mul_raw(*a, *b),
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.inv[*a as usize]),
            None => Some(self.pow(a, self.q as u64 - 2)),
        }
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn order(&self) -> Option<u64> {
        Some(self.q as u64)
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.q).collect())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }
    fn display(&self, a: &u32) -> String {
        if self.n == 1 {
            return a.to_string();
        }
        let terms: Vec<String> = self
            .coeffs(*a)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        let f = Fq::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.generator();
        // w^2 = w + 1
        assert_eq!(f.mul(&w, &w), f.add(&w, &1));
        assert_eq!(f.pow(&w, 3), 1);
        for a in 1..4 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(Fq::with_modulus(2, vec![1, 0, 1]).is_err());
        assert!(Fq::with_modulus(3, vec![1, 0, 1]).is_ok());
        assert!(Fq::with_modulus(4, vec![0, 1]).is_err());
    }

    #[test]
    fn tables_agree_with_raw_arithmetic() {
        let f = Fq::new(3, 2).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul(&a, &b), f.mul_raw(a, b));
                assert_eq!(f.add(&a, &b), f.add_raw(a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Fq::new(2, 10).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.pow(&g, 1023), 1);
        assert_ne!(f.pow(&g, 341), 1);
        let x = 777;
        assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), 1);
    }
}
