//! Slope (semi)stability, the scss and Harder-Narasimhan filtrations over
//! finite fields.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::hom::end_dim;
use super::rep::Representation;
use super::subrep::{enumerate_subreps, SubrepWitness};
use super::{slope, DimVector};
use crate::arith::Field;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
    /// Only produced by certificates over infinite fields.
    Unknown,
}

impl Verdict {
    pub fn is_semistable(self) -> Option<bool> {
        match self {
            Verdict::Stable | Verdict::StrictlySemistable => Some(true),
            Verdict::Unstable => Some(false),
            Verdict::Unknown => None,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Stable => "Stable",
            Verdict::StrictlySemistable => "StrictlySemistable",
            Verdict::Unstable => "Unstable",
            Verdict::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// A verdict together with the subrepresentation that decides it.
///
/// `Unstable` always carries a witness of slope strictly above `slope`;
/// `StrictlySemistable` carries a proper witness of equal slope.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict<E> {
    pub verdict: Verdict,
    pub slope: BigRational,
    pub witness: Option<SubrepWitness<E>>,
    pub witness_slope: Option<BigRational>,
    pub notes: Vec<String>,
}

impl<E> StabilityVerdict<E> {
    pub fn plain(verdict: Verdict, slope: BigRational) -> Self {
        StabilityVerdict { verdict, slope, witness: None, witness_slope: None, notes: Vec::new() }
    }
}

fn proper_nonzero<E: Clone + PartialEq>(
    subs: Vec<SubrepWitness<E>>,
    d: &DimVector,
) -> Vec<SubrepWitness<E>> {
    subs.into_iter().filter(|s| !s.is_zero() && &s.dims != d).collect()
}

/// Every nonzero subdimension vector of d has the same slope.
fn constant_slope(d: &DimVector, theta: &[i64]) -> bool {
    let mut on_support = d.0.iter().zip(theta).filter(|(&x, _)| x > 0).map(|(_, &t)| t);
    match on_support.next() {
        Some(t0) => on_support.all(|t| t == t0),
        None => true,
    }
}

fn require_nonzero<F: Field>(w: &Representation<F>) -> Result<()> {
    if w.dims().is_zero() {
        return Err(Error::Argument("stability of the zero representation".into()));
    }
    Ok(())
}

/// Decides θ-stability over a finite field by exhaustive subrepresentation
/// enumeration.
pub fn stability_verdict<F: Field>(
    w: &Representation<F>,
    theta: &[i64],
    budget: u128,
) -> Result<StabilityVerdict<F::Elem>> {
    require_nonzero(w)?;
    let mu = slope(w.dims(), theta)?;
    let subs = enumerate_subreps(w, budget)?;
    let mut best: Option<(BigRational, SubrepWitness<F::Elem>)> = None;
    for s in proper_nonzero(subs, w.dims()) {
        let m = slope(&s.dims, theta)?;
        let better = match &best {
            None => true,
            Some((bm, bs)) => m > *bm || (m == *bm && s.dims.total() > bs.dims.total()),
        };
        if better {
            best = Some((m, s));
        }
    }
    let verdict = match &best {
        None => Verdict::Stable,
        Some((m, _)) if *m > mu => Verdict::Unstable,
        Some((m, _)) if *m == mu => Verdict::StrictlySemistable,
        Some(_) => Verdict::Stable,
    };
    let mut out = StabilityVerdict::plain(verdict, mu);
    if verdict != Verdict::Stable {
        let (m, s) = best.expect("a witness exists");
        out.witness = Some(s);
        out.witness_slope = Some(m);
    }
    Ok(out)
}

/// Stable over F_q and End(W) = F_q; equivalent to stability over the
/// algebraic closure.
pub fn is_geometrically_stable<F: Field>(
    w: &Representation<F>,
    theta: &[i64],
    budget: u128,
) -> Result<bool> {
    if w.dims().is_zero() {
        return Ok(false);
    }
    if stability_verdict(w, theta, budget)?.verdict != Verdict::Stable {
        return Ok(false);
    }
    Ok(end_dim(w)? == 1)
}

/// The maximal subrepresentation among those of maximal slope. Returns the
/// full witness exactly when W is semistable.
pub fn scss<F: Field>(
    w: &Representation<F>,
    theta: &[i64],
    budget: u128,
) -> Result<SubrepWitness<F::Elem>> {
    require_nonzero(w)?;
    let f = w.field();
    if theta.len() == w.dims().len() && constant_slope(w.dims(), theta) {
        return Ok(SubrepWitness::full(f, w.dims()));
    }
    let subs: Vec<_> = enumerate_subreps(w, budget)?.into_iter().filter(|s| !s.is_zero()).collect();
    let slopes: Vec<BigRational> =
        subs.iter().map(|s| slope(&s.dims, theta)).collect::<Result<_>>()?;
    let top = slopes.iter().max().expect("W itself is listed").clone();
    let maximal: Vec<&SubrepWitness<F::Elem>> =
        subs.iter().zip(&slopes).filter(|(_, m)| **m == top).map(|(s, _)| s).collect();
    let largest = maximal
        .iter()
        .max_by_key(|s| s.dims.total())
        .expect("nonempty");
    if let Some(bad) = maximal.iter().find(|s| !s.contained_in(f, largest)) {
        return Err(Error::Invariant(format!(
            "two incomparable subrepresentations of maximal slope: {} and {}",
            largest.dims, bad.dims
        )));
    }
    Ok((*largest).clone())
}

/// 0 = W^0 ⊂ W^1 ⊂ ... ⊂ W^l = W; `steps` holds W^1..W^l.
#[derive(Clone, Debug, PartialEq)]
pub struct HnFiltration<E> {
    pub steps: Vec<SubrepWitness<E>>,
    /// Slopes of the subquotients W^i / W^{i-1}.
    pub slopes: Vec<BigRational>,
}

impl<E: Clone + PartialEq> HnFiltration<E> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Dimension vectors of the subquotients.
    pub fn subquotient_dims(&self) -> Vec<DimVector> {
        let mut prev = vec![0; self.steps[0].dims.len()];
        self.steps
            .iter()
            .map(|s| {
                let d = DimVector(s.dims.0.iter().zip(&prev).map(|(a, b)| a - b).collect());
                prev = s.dims.0.clone();
                d
            })
            .collect()
    }

    /// Re-verifies every defining property against `w`: the chain is
    /// increasing and closed, slopes strictly decrease and every subquotient
    /// is semistable.
    pub fn check<F: Field<Elem = E>>(
        &self,
        w: &Representation<F>,
        theta: &[i64],
        budget: u128,
    ) -> Result<()> {
        let f = w.field();
        let fail = |msg: String| Err(Error::Invariant(msg));
        if self.steps.last().map(|s| &s.dims) != Some(w.dims()) {
            return fail("filtration does not end at W".into());
        }
        if self.slopes.windows(2).any(|p| p[0] <= p[1]) {
            return fail("slopes are not strictly decreasing".into());
        }
        let mut prev = SubrepWitness::zero(f, w.dims());
        for (i, step) in self.steps.iter().enumerate() {
            if !step.is_closed(w) || !prev.contained_in(f, step) || step.dims == prev.dims {
                return fail(format!("step {} is not a proper extension of the previous one", i + 1));
            }
            let sub = w.restrict(step)?;
            let inner = sub_witness_in(f, &prev, step);
            let (quot, _) = sub.quotient(&inner)?;
            if slope(quot.dims(), theta)? != self.slopes[i] {
                return fail(format!("slope of subquotient {} is wrong", i + 1));
            }
            if !constant_slope(quot.dims(), theta)
                && stability_verdict(&quot, theta, budget)?.verdict == Verdict::Unstable
            {
                return fail(format!("subquotient {} is not semistable", i + 1));
            }
            prev = step.clone();
        }
        Ok(())
    }
}

/// Expresses `inner` (contained in `outer`) in the coordinates of `outer`'s basis.
fn sub_witness_in<F: Field>(
    f: &F,
    inner: &SubrepWitness<F::Elem>,
    outer: &SubrepWitness<F::Elem>,
) -> SubrepWitness<F::Elem> {
    let spans: Vec<Matrix<F::Elem>> = inner
        .bases
        .iter()
        .zip(&outer.bases)
        .map(|(i, o)| linalg::solve(f, o, i).expect("contained subspace"))
        .collect();
    SubrepWitness::from_spanning(f, &spans)
}

/// Harder-Narasimhan filtration, built from scss(W) and the filtration of
/// the quotient pulled back through the complement basis.
pub fn hn_filtration<F: Field>(
    w: &Representation<F>,
    theta: &[i64],
    budget: u128,
) -> Result<HnFiltration<F::Elem>> {
    require_nonzero(w)?;
    let f = w.field();
    let first = scss(w, theta, budget)?;
    let mu1 = slope(&first.dims, theta)?;
    if &first.dims == w.dims() {
        return Ok(HnFiltration { steps: vec![first], slopes: vec![mu1] });
    }
    let (quot, complements) = w.quotient(&first)?;
    let rest = hn_filtration(&quot, theta, budget)?;
    let mut steps = vec![first.clone()];
    for y in &rest.steps {
        let spans: Vec<Matrix<F::Elem>> = first
            .bases
            .iter()
            .zip(&complements)
            .zip(&y.bases)
            .map(|((u, c), yb)| u.hstack(&linalg::mul(f, c, yb)))
            .collect();
        steps.push(SubrepWitness::from_spanning(f, &spans));
    }
    let mut slopes = vec![mu1];
    slopes.extend(rest.slopes);
    Ok(HnFiltration { steps, slopes })
}
