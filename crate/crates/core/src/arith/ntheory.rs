//! Elementary number theory on machine integers: factorization, Legendre
//! symbols, modular square roots and sums of two squares.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as a map prime -> exponent. `factor(1)` is empty.
pub fn factor(n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out
}

/// Converts |n| to u64, failing for integers beyond 64 bits.
pub fn abs_u64(n: &BigInt) -> Result<u64> {
    n.abs()
        .to_u64()
        .ok_or_else(|| Error::NotDecidable(format!("integer {n} exceeds 64 bits")))
}

/// Legendre symbol (a/p) for an odd prime p, in {-1, 0, 1}.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = residue(a, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Least nonnegative residue of a big integer modulo m.
pub fn residue(a: &BigInt, m: u64) -> u64 {
    let r = a % BigInt::from(m);
    let r = if r.sign() == Sign::Minus { r + BigInt::from(m) } else { r };
    r.to_u64().expect("residue fits")
}

/// Smallest square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// x, y >= 0 with x^2 + y^2 = p for a prime p = 2 or p = 1 mod 4
/// (Hermite-Serret: Euclid on (p, sqrt(-1) mod p) until below sqrt(p)).
pub fn prime_two_squares(p: u64) -> Option<(u64, u64)> {
    if p == 2 {
        return Some((1, 1));
    }
    if p % 4 != 1 {
        return None;
    }
    let r = sqrt_mod(p - 1, p)?;
    let (mut a, mut b) = (p, r);
    while (b as u128) * (b as u128) > p as u128 {
        (a, b) = (b, a % b);
    }
    let c = a % b;
    (b * b + c * c == p).then_some((b, c))
}

/// Gaussian-integer product (a + bi)(c + di).
fn gauss_mul(x: (BigInt, BigInt), y: (BigInt, BigInt)) -> (BigInt, BigInt) {
    (
        &x.0 * &y.0 - &x.1 * &y.1,
        &x.0 * &y.1 + &x.1 * &y.0,
    )
}

/// Writes a nonnegative integer as x^2 + y^2, `None` if impossible.
pub fn two_squares(n: u64) -> Option<(BigInt, BigInt)> {
    if n == 0 {
        return Some((BigInt::zero(), BigInt::zero()));
    }
    let mut acc = (BigInt::one(), BigInt::zero());
    for (p, e) in factor(n) {
        if p % 4 == 3 {
            if e % 2 == 1 {
                return None;
            }
            let scale = BigInt::from(p).pow(e / 2);
            acc = (acc.0 * &scale, acc.1 * &scale);
        } else {
            let (x, y) = prime_two_squares(p)?;
            for _ in 0..e {
                acc = gauss_mul(acc, (BigInt::from(x), BigInt::from(y)));
            }
        }
    }
    Some(acc)
}

/// Squarefree decomposition of a nonzero rational: returns (s, r) with
/// `x = s * r^2`, `s` a squarefree integer carrying the sign of `x`.
pub fn squarefree_part(x: &BigRational) -> Result<(BigInt, BigRational)> {
    if x.is_zero() {
        return Err(Error::Argument("squarefree part of zero".into()));
    }
    // x = n/d = n*d / d^2
    let nd = x.numer() * x.denom();
    let m = abs_u64(&nd)?;
    let mut s = BigInt::one();
    let mut root = BigInt::one();
    for (p, e) in factor(m) {
        if e % 2 == 1 {
            s *= p;
        }
        root *= BigInt::from(p).pow(e / 2);
    }
    if nd.is_negative() {
        s = -s;
    }
    let r = BigRational::new(root, x.denom().clone());
    Ok((s, r))
}

/// Odd primes dividing numerator or denominator of a rational.
pub fn odd_prime_support(x: &BigRational) -> Result<Vec<u64>> {
    let mut ps: Vec<u64> = factor(abs_u64(x.numer())?)
        .into_keys()
        .chain(factor(abs_u64(x.denom())?).into_keys())
        .filter(|&p| p != 2)
        .collect();
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small_and_large() {
        assert_eq!(factor(360), BTreeMap::from([(2, 3), (3, 2), (5, 1)]));
        assert!(factor(1).is_empty());
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factor(big), BTreeMap::from([(998_244_353, 1), (1_000_000_007, 1)]));
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod(4, 5), Some(2));
        assert_eq!(sqrt_mod(2, 5), None);
        // -1 is a square modulo primes that are 1 mod 4
        let r = sqrt_mod(1_000_000_008, 1_000_000_009).unwrap();
        assert_eq!(mul_mod(r, r, 1_000_000_009), 1_000_000_008);
        assert_eq!(sqrt_mod(1_000_000_006, 1_000_000_007), None);
    }

    #[test]
    fn two_squares_reconstructs() {
        for n in 0..500u64 {
            if let Some((x, y)) = two_squares(n) {
                assert_eq!(&x * &x + &y * &y, BigInt::from(n));
            }
        }
        assert!(two_squares(3).is_none());
        assert!(two_squares(21).is_none());
        assert!(two_squares(9).is_some());
    }

    #[test]
    fn squarefree_decomposition() {
        let (s, r) = squarefree_part(&BigRational::new((-12).into(), 5.into())).unwrap();
        assert_eq!(s, BigInt::from(-15));
        assert_eq!(BigRational::from_integer(s) * &r * &r, BigRational::new((-12).into(), 5.into()));
    }
}
