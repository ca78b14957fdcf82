//! Subrepresentations: witnesses, canonical subspaces of F_q^d and the
//! exhaustive enumeration that decides stability over finite fields.

use std::collections::HashMap;

use super::rep::Representation;
use super::DimVector;
use crate::arith::Field;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A subrepresentation given by one basis matrix per vertex. The columns of
/// `bases[v]` span U_v; constructors keep them in canonical form (the
/// transpose is in reduced row echelon form), so equal subspaces have equal
/// witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubrepWitness<E> {
    pub bases: Vec<Matrix<E>>,
    pub dims: DimVector,
}

impl<E: Clone + PartialEq> SubrepWitness<E> {
    /// Canonicalizes arbitrary spanning sets.
    pub fn from_spanning<F: Field<Elem = E>>(f: &F, spans: &[Matrix<E>]) -> Self {
        let bases: Vec<Matrix<E>> = spans.iter().map(|m| linalg::column_space(f, m)).collect();
        let dims = DimVector(bases.iter().map(Matrix::cols).collect());
        SubrepWitness { bases, dims }
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, ambient: &DimVector) -> Self {
        let bases = ambient.0.iter().map(|&d| Matrix::zeros(f, d, 0)).collect();
        SubrepWitness { bases, dims: DimVector(vec![0; ambient.len()]) }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: &DimVector) -> Self {
        let bases = ambient.0.iter().map(|&d| Matrix::identity(f, d)).collect();
        SubrepWitness { bases, dims: ambient.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_zero()
    }

    /// Closure under every arrow map, checked by rank.
    pub fn is_closed<F: Field<Elem = E>>(&self, w: &Representation<F>) -> bool {
        let f = w.field();
        w.quiver().arrows().iter().zip(w.maps()).all(|(a, m)| {
            let image = linalg::mul(f, m, &self.bases[a.tail]);
            let target = &self.bases[a.head];
            linalg::rank(f, &target.hstack(&image)) == target.cols()
        })
    }

    /// U_v contained in U'_v at every vertex.
    pub fn contained_in<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        self.bases.iter().zip(&other.bases).all(|(u, w)| {
            linalg::rank(f, &w.hstack(u)) == w.cols()
        })
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let spans: Vec<Matrix<E>> =
            self.bases.iter().zip(&other.bases).map(|(u, w)| u.hstack(w)).collect();
        Self::from_spanning(f, &spans)
    }

    pub fn map_entries<F: Field, T: Clone + PartialEq>(
        &self,
        field: &F,
        op: impl Fn(&E) -> T,
    ) -> SubrepWitness<T>
    where
        F: Field<Elem = T>,
    {
        let spans: Vec<Matrix<T>> = self.bases.iter().map(|m| m.map(&op)).collect();
        SubrepWitness::from_spanning(field, &spans)
    }
}

/// The smallest subrepresentation containing the given vectors at each vertex.
pub fn generated_subrep<F: Field>(
    w: &Representation<F>,
    generators: &[Matrix<F::Elem>],
) -> SubrepWitness<F::Elem> {
    let f = w.field();
    let mut current = SubrepWitness::from_spanning(f, generators);
    loop {
        let mut spans = current.bases.clone();
        for (a, m) in w.quiver().arrows().iter().zip(w.maps()) {
            let image = linalg::mul(f, m, &current.bases[a.tail]);
            spans[a.head] = spans[a.head].hstack(&image);
        }
        let next = SubrepWitness::from_spanning(f, &spans);
        if next.dims == current.dims {
            return next;
        }
        current = next;
    }
}

/// The largest subrepresentation contained in the given subspaces
/// (columns of `bounds[v]` span the allowed space at v).
pub fn largest_subrep_within<F: Field>(
    w: &Representation<F>,
    bounds: &[Matrix<F::Elem>],
) -> SubrepWitness<F::Elem> {
    let f = w.field();
    let mut current = SubrepWitness::from_spanning(f, bounds);
    loop {
        let mut changed = false;
        for (a, m) in w.quiver().arrows().iter().zip(w.maps()) {
            // U_t <- { x in U_t : M x in U_h }
            let ut = &current.bases[a.tail];
            let uh = &current.bases[a.head];
            if ut.cols() == 0 {
                continue;
            }
            let image = linalg::mul(f, m, ut);
            // solve image * c = uh * y  ->  kernel of [image | -uh]
            let neg_uh = uh.map(|x| f.neg(x));
            let stacked = image.hstack(&neg_uh);
            let ker = linalg::kernel(f, &stacked);
            let coeffs: Vec<Vec<F::Elem>> =
                ker.iter().map(|v| v[..ut.cols()].to_vec()).collect();
            let new_span = if coeffs.is_empty() {
                Matrix::zeros(f, ut.rows(), 0)
            } else {
                linalg::mul(f, ut, &Matrix::from_columns(ut.cols(), &coeffs))
            };
            let new_basis = linalg::column_space(f, &new_span);
            if new_basis.cols() < ut.cols() {
                current.bases[a.tail] = new_basis;
                current.dims.0[a.tail] = current.bases[a.tail].cols();
                changed = true;
            }
        }
        if !changed {
            return current;
        }
    }
}

/// All subspaces of F_q^d for each d, in canonical form, keyed by dimension.
#[derive(Clone, Debug)]
pub struct SubspaceCatalog<E> {
    by_dim: HashMap<usize, Vec<Matrix<E>>>,
}

impl<E: Clone + PartialEq> SubspaceCatalog<E> {
    pub fn new() -> Self {
        SubspaceCatalog { by_dim: HashMap::new() }
    }

    /// Number of subspaces of F_q^d (sum of Gaussian binomials), saturating.
    pub fn count(q: u64, d: usize) -> u128 {
        let q = q as u128;
        let mut total: u128 = 0;
        for k in 0..=d {
            let mut num: u128 = 1;
            let mut den: u128 = 1;
            for i in 0..k {
                num = num.saturating_mul(q.saturating_pow((d - i) as u32).saturating_sub(1));
                den = den.saturating_mul(q.saturating_pow((i + 1) as u32) - 1);
            }
            total = total.saturating_add(if num == u128::MAX { u128::MAX } else { num / den });
        }
        total
    }

    pub fn subspaces<F: Field<Elem = E>>(&mut self, f: &F, d: usize) -> &[Matrix<E>] {
        self.by_dim.entry(d).or_insert_with(|| all_subspaces(f, d))
    }
}

impl<E: Clone + PartialEq> Default for SubspaceCatalog<E> {
    fn default() -> Self {
        Self::new()
    }
}

/// Every subspace of F_q^d as a canonical d x k column basis, ordered by
/// dimension and then by pivot pattern.
fn all_subspaces<F: Field>(f: &F, d: usize) -> Vec<Matrix<F::Elem>> {
    let elems = f.elements().expect("subspace enumeration needs a finite field");
    let mut out = Vec::new();
    for k in 0..=d {
        for pivots in combinations(d, k) {
            // free positions: row i, column c > pivots[i], c not a pivot
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let pv = pivots.clone();
                    (pivots[i] + 1..d).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
                })
                .collect();
            let mut digits = vec![0usize; free.len()];
            loop {
                let mut rows = Matrix::zeros(f, k, d);
                for (i, &p) in pivots.iter().enumerate() {
                    rows.set(i, p, f.one());
                }
                for (slot, &(i, c)) in free.iter().enumerate() {
                    rows.set(i, c, elems[digits[slot]].clone());
                }
                out.push(rows.transpose());
                // next digit tuple
                let mut pos = 0;
                while pos < digits.len() {
                    digits[pos] += 1;
                    if digits[pos] < elems.len() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == digits.len() {
                    break;
                }
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Whether `v` lies in the span of a canonical basis (columns, transpose in
/// RREF): subtract the pivot-coordinate combination and test for zero.
fn in_canonical_span<F: Field>(f: &F, basis: &Matrix<F::Elem>, v: &[F::Elem]) -> bool {
    let d = basis.rows();
    let mut residual = v.to_vec();
    for j in 0..basis.cols() {
        let pivot = (0..d).find(|&i| !f.is_zero(basis.get(i, j))).expect("nonzero basis vector");
        let c = residual[pivot].clone();
        if f.is_zero(&c) {
            continue;
        }
        for (i, r) in residual.iter_mut().enumerate() {
            *r = f.sub(r, &f.mul(&c, basis.get(i, j)));
        }
    }
    residual.iter().all(|x| f.is_zero(x))
}

/// Enumerates all subrepresentations (including 0 and W) of a representation
/// over a finite field. The search is a backtracking over vertices that
/// rejects a partial assignment as soon as an arrow between assigned vertices
/// fails closure; `budget` caps the product of per-vertex subspace counts.
pub fn enumerate_subreps<F: Field>(
    w: &Representation<F>,
    budget: u128,
) -> Result<Vec<SubrepWitness<F::Elem>>> {
    let mut catalog = SubspaceCatalog::new();
    enumerate_subreps_with(w, budget, &mut catalog)
}

pub fn enumerate_subreps_with<F: Field>(
    w: &Representation<F>,
    budget: u128,
    catalog: &mut SubspaceCatalog<F::Elem>,
) -> Result<Vec<SubrepWitness<F::Elem>>> {
    let f = w.field();
    let q = f
        .order()
        .ok_or_else(|| Error::Domain("subrepresentation enumeration needs a finite field".into()))?;
    let bound = w
        .dims()
        .0
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(SubspaceCatalog::<F::Elem>::count(q, d)));
    if bound > budget {
        return Err(Error::Budget {
            what: "subrepresentation enumeration".into(),
            required: bound,
            limit: budget,
        });
    }
    let n = w.dims().len();
    for &d in &w.dims().0 {
        catalog.subspaces(f, d);
    }
    let lists: Vec<&[Matrix<F::Elem>]> =
        w.dims().0.iter().map(|d| catalog.by_dim[d].as_slice()).collect();
    // arrows checked once both endpoints are assigned, i.e. at max(head, tail)
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in w.quiver().arrows().iter().enumerate() {
        checks[a.head.max(a.tail)].push(i);
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    backtrack(w, &lists, &checks, &mut chosen, &mut out);
    Ok(out)
}

fn backtrack<F: Field>(
    w: &Representation<F>,
    lists: &[&[Matrix<F::Elem>]],
    checks: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    out: &mut Vec<SubrepWitness<F::Elem>>,
) {
    let v = chosen.len();
    if v == lists.len() {
        let bases: Vec<Matrix<F::Elem>> =
            chosen.iter().enumerate().map(|(u, &i)| lists[u][i].clone()).collect();
        let dims = DimVector(bases.iter().map(Matrix::cols).collect());
        out.push(SubrepWitness { bases, dims });
        return;
    }
    let f = w.field();
    for i in 0..lists[v].len() {
        chosen.push(i);
        let ok = checks[v].iter().all(|&ai| {
            let a = &w.quiver().arrows()[ai];
            let ut = &lists[a.tail][chosen[a.tail]];
            let uh = &lists[a.head][chosen[a.head]];
            let m = w.map(ai);
            (0..ut.cols()).all(|j| in_canonical_span(f, uh, &linalg::mul_vec(f, m, &ut.column(j))))
        });
        if ok {
            backtrack(w, lists, checks, chosen, out);
        }
        chosen.pop();
    }
}
