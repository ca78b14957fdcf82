//! One-sided stability certificates over Q and Q(sqrt(m)).
//!
//! A representation over a number field is reduced modulo small primes. If
//! some reduction is geometrically stable over F_p, so is the original: a
//! destabilizing subrepresentation over the algebraic closure is a point of a
//! projective quiver Grassmannian and specializes to the special fibre.
//! Instability is certified only by an explicit subrepresentation over the
//! base field, checked exactly. Anything else is reported as `Unknown`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::hom::end_dim;
use super::rep::Representation;
use super::slope;
use super::stability::{stability_verdict, StabilityVerdict, Verdict};
use super::subrep::{generated_subrep, largest_subrep_within, SubrepWitness};
use crate::arith::ntheory::{is_prime, legendre, residue, sqrt_mod};
use crate::arith::{Field, Fq, QuadElem, QuadField, Rationals};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Reduction data for one prime: the prime and, for quadratic fields, the
/// chosen square root of m modulo p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reducer {
    pub p: u32,
    pub sqrt_m: Option<u32>,
}

/// Number fields whose elements can be reduced modulo primes.
pub trait Reduce: Field {
    /// Whether p is a usable prime for this field, and the reduction data.
    fn reducer(&self, p: u32) -> std::result::Result<Reducer, String>;
    /// The image in F_p, `None` when p divides a denominator.
    fn reduce(&self, x: &Self::Elem, r: &Reducer) -> Option<u32>;
    /// The symmetric integer lift of a residue, as an element of the field.
    fn lift(&self, a: u32, p: u32) -> Self::Elem;
}

fn reduce_rational(x: &BigRational, p: u32) -> Option<u32> {
    let den = residue(x.denom(), p as u64);
    if den == 0 {
        return None;
    }
    let num = residue(x.numer(), p as u64);
    let f = Fq::prime(p).ok()?;
    Some(f.mul(&(num as u32), &f.inv(&(den as u32))?))
}

fn symmetric_lift(a: u32, p: u32) -> i64 {
    let a = a as i64;
    let p = p as i64;
    if a > p / 2 {
        a - p
    } else {
        a
    }
}

impl Reduce for Rationals {
    fn reducer(&self, p: u32) -> std::result::Result<Reducer, String> {
        if !is_prime(p as u64) {
            return Err(format!("{p} is not prime"));
        }
        Ok(Reducer { p, sqrt_m: None })
    }

    fn reduce(&self, x: &BigRational, r: &Reducer) -> Option<u32> {
        reduce_rational(x, r.p)
    }

    fn lift(&self, a: u32, p: u32) -> BigRational {
        self.from_i64(symmetric_lift(a, p))
    }
}

impl Reduce for QuadField {
    fn reducer(&self, p: u32) -> std::result::Result<Reducer, String> {
        if !is_prime(p as u64) {
            return Err(format!("{p} is not prime"));
        }
        let m = self.m();
        if p == 2 || m.rem_euclid(p as i64) == 0 {
            return Err(format!("{p} ramifies in Q(sqrt({m}))"));
        }
        if legendre(&BigInt::from(m), p as u64) != 1 {
            return Err(format!("{m} is not a square modulo {p}"));
        }
        let s = sqrt_mod(m.rem_euclid(p as i64) as u64, p as u64)
            .ok_or_else(|| format!("no square root of {m} modulo {p}"))?;
        Ok(Reducer { p, sqrt_m: Some(s as u32) })
    }

    fn reduce(&self, x: &QuadElem, r: &Reducer) -> Option<u32> {
        let f = Fq::prime(r.p).ok()?;
        let a = reduce_rational(&x.a, r.p)?;
        let b = reduce_rational(&x.b, r.p)?;
        Some(f.add(&a, &f.mul(&b, &r.sqrt_m?)))
    }

    fn lift(&self, a: u32, p: u32) -> QuadElem {
        self.from_i64(symmetric_lift(a, p))
    }
}

/// What happened at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeAttempt {
    pub prime: u32,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport<E> {
    /// `Stable` means geometrically stable.
    pub verdict: StabilityVerdict<E>,
    /// The prime whose reduction certified geometric stability.
    pub prime: Option<u32>,
    /// For a `Stable` verdict, End of the reduction (always 1).
    pub end_dim: Option<usize>,
    pub attempts: Vec<PrimeAttempt>,
}

/// The reduction of W modulo the prime described by `r`, if every entry reduces.
pub fn reduce_rep<F: Reduce>(w: &Representation<F>, r: &Reducer) -> Result<Option<Representation<Fq>>> {
    let fp = Fq::prime(r.p)?;
    let mut maps = Vec::with_capacity(w.maps().len());
    for m in w.maps() {
        match m.try_map(|x| w.field().reduce(x, r)) {
            Some(mm) => maps.push(mm),
            None => return Ok(None),
        }
    }
    Ok(Some(Representation::new(w.quiver().clone(), fp, w.dims().clone(), maps)?))
}

/// Certifies geometric stability, or instability with an exact witness.
pub fn geom_stability_certificate<F: Reduce>(
    w: &Representation<F>,
    theta: &[i64],
    primes: &[u32],
    budget: u128,
) -> Result<CertificateReport<F::Elem>> {
    if w.dims().is_zero() {
        return Err(Error::Argument("stability of the zero representation".into()));
    }
    let f = w.field();
    let mu = slope(w.dims(), theta)?;
    let mut attempts = Vec::new();
    let mut semistable_mod_p = false;
    let mut lifted: Vec<SubrepWitness<F::Elem>> = Vec::new();
    for &p in primes {
        let r = match f.reducer(p) {
            Ok(r) => r,
            Err(why) => {
                attempts.push(PrimeAttempt { prime: p, outcome: format!("skipped: {why}") });
                continue;
            }
        };
        let Some(wp) = reduce_rep(w, &r)? else {
            attempts.push(PrimeAttempt {
                prime: p,
                outcome: "skipped: prime divides a denominator".into(),
            });
            continue;
        };
        let v = match stability_verdict(&wp, theta, budget) {
            Ok(v) => v,
            Err(Error::Budget { required, .. }) => {
                attempts.push(PrimeAttempt {
                    prime: p,
                    outcome: format!("skipped: enumeration needs {required} checks"),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        if v.verdict == Verdict::Stable {
            let e = end_dim(&wp)?;
            if e == 1 {
                attempts.push(PrimeAttempt { prime: p, outcome: "geometrically stable".into() });
                return Ok(CertificateReport {
                    verdict: StabilityVerdict::plain(Verdict::Stable, mu),
                    prime: Some(p),
                    end_dim: Some(1),
                    attempts,
                });
            }
            attempts.push(PrimeAttempt {
                prime: p,
                outcome: format!("stable but End has dimension {e}"),
            });
        } else {
            attempts.push(PrimeAttempt { prime: p, outcome: format!("{}", v.verdict) });
        }
        if v.verdict != Verdict::Unstable {
            semistable_mod_p = true;
        }
        if let Some(wit) = v.witness {
            let spans: Vec<Matrix<F::Elem>> =
                wit.bases.iter().map(|b| b.map(|x| f.lift(*x, p))).collect();
            lifted.push(SubrepWitness::from_spanning(f, &spans));
        }
    }

    // exact candidates over the base field
    let mut candidates = lifted;
    let d = w.dims();
    for (v, &dv) in d.0.iter().enumerate() {
        for i in 0..dv {
            let gens: Vec<Matrix<F::Elem>> = d
                .0
                .iter()
                .enumerate()
                .map(|(u, &du)| {
                    if u == v {
                        let mut e = vec![f.zero(); du];
                        e[i] = f.one();
                        Matrix::from_columns(du, &[e])
                    } else {
                        Matrix::zeros(f, du, 0)
                    }
                })
                .collect();
            candidates.push(generated_subrep(w, &gens));
        }
        let bounds: Vec<Matrix<F::Elem>> = d
            .0
            .iter()
            .enumerate()
            .map(|(u, &du)| if u == v { Matrix::zeros(f, du, 0) } else { Matrix::identity(f, du) })
            .collect();
        candidates.push(largest_subrep_within(w, &bounds));
    }
    let mut best: Option<(BigRational, SubrepWitness<F::Elem>)> = None;
    for c in candidates {
        if c.is_zero() || &c.dims == d || !c.is_closed(w) {
            continue;
        }
        let s = slope(&c.dims, theta)?;
        if best.as_ref().is_none_or(|(bs, _)| s > *bs) {
            best = Some((s, c));
        }
    }
    let mut verdict = StabilityVerdict::plain(Verdict::Unknown, mu.clone());
    if let Some((s, c)) = best {
        if s > mu {
            verdict.verdict = Verdict::Unstable;
            verdict.witness = Some(c);
            verdict.witness_slope = Some(s);
        } else if s == mu {
            verdict.verdict =
                if semistable_mod_p { Verdict::StrictlySemistable } else { Verdict::Unknown };
            if !semistable_mod_p {
                verdict.notes.push("equal-slope subrepresentation found; semistability not certified".into());
            }
            verdict.witness = Some(c);
            verdict.witness_slope = Some(s);
        }
    }
    if verdict.verdict == Verdict::Unknown {
        if attempts.iter().all(|a| a.outcome.starts_with("skipped")) {
            verdict.notes.push("no usable prime".into());
        } else {
            verdict.notes.push("no reduction is geometrically stable and no exact witness was found".into());
        }
    }
    Ok(CertificateReport { verdict, prime: None, end_dim: None, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{DimVector, Quiver};

    const B: u128 = 1_000_000;

    #[test]
    fn kronecker_over_q() {
        let w = Representation::from_int_maps(
            Quiver::kronecker(2),
            Rationals,
            vec![1, 1],
            vec![vec![vec![1]], vec![vec![1]]],
        )
        .unwrap();
        let rep = geom_stability_certificate(&w, &[1, -1], &[2], B).unwrap();
        assert_eq!(rep.verdict.verdict, Verdict::Stable);
        assert_eq!(rep.prime, Some(2));

        let z = Representation::zero(Quiver::kronecker(2), Rationals, DimVector(vec![1, 1])).unwrap();
        let rep = geom_stability_certificate(&z, &[1, -1], &[2, 3], B).unwrap();
        assert_eq!(rep.verdict.verdict, Verdict::Unstable);
        assert_eq!(rep.verdict.witness.unwrap().dims, DimVector(vec![1, 0]));
    }

    #[test]
    fn quaternionic_kronecker_certified_at_five() {
        let l = QuadField::gaussian();
        let e = |a: i64, b: i64| l.from_ints(a, b);
        let maps = vec![
            Matrix::from_rows(vec![vec![e(1, 0), e(0, 0)], vec![e(0, 0), e(1, 0)]]),
            Matrix::from_rows(vec![vec![e(0, 1), e(0, 0)], vec![e(0, 0), e(0, -1)]]),
            Matrix::from_rows(vec![vec![e(0, 0), e(-1, 0)], vec![e(1, 0), e(0, 0)]]),
        ];
        let w = Representation::new(Quiver::kronecker(3), l.clone(), DimVector(vec![2, 2]), maps).unwrap();
        assert_eq!(l.reducer(5).unwrap().sqrt_m, Some(2));
        assert!(l.reducer(3).is_err());
        let rep = geom_stability_certificate(&w, &[1, -1], &[2, 3, 5], B).unwrap();
        assert_eq!(rep.verdict.verdict, Verdict::Stable);
        assert_eq!(rep.prime, Some(5));
    }

    #[test]
    fn denominators_skip_primes() {
        let w = Representation::new(
            Quiver::kronecker(2),
            Rationals,
            DimVector(vec![1, 1]),
            vec![
                Matrix::from_rows(vec![vec![BigRational::new(1.into(), 2.into())]]),
                Matrix::from_rows(vec![vec![Rationals.from_i64(1)]]),
            ],
        )
        .unwrap();
        let rep = geom_stability_certificate(&w, &[1, -1], &[2, 3], B).unwrap();
        assert!(rep.attempts[0].outcome.contains("denominator"));
        assert_eq!(rep.prime, Some(3));
    }
}
