//! Intertwiner spaces Hom(W, W') and isomorphism search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::rep::Representation;
use crate::arith::Field;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A basis of Hom(W, W'): each element is one `d'_v x d_v` matrix per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct HomBasis<E> {
    pub elements: Vec<Vec<Matrix<E>>>,
}

impl<E: Clone> HomBasis<E> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Linear combination of basis elements.
pub fn combine<F: Field>(
    f: &F,
    basis: &HomBasis<F::Elem>,
    coeffs: &[F::Elem],
) -> Vec<Matrix<F::Elem>> {
    let first = &basis.elements[0];
    let mut acc: Vec<Matrix<F::Elem>> =
        first.iter().map(|m| Matrix::zeros(f, m.rows(), m.cols())).collect();
    for (c, elem) in coeffs.iter().zip(&basis.elements) {
        if f.is_zero(c) {
            continue;
        }
        for (a, m) in acc.iter_mut().zip(elem) {
            *a = linalg::add(f, a, &linalg::scale(f, c, m));
        }
    }
    acc
}

/// Solves f_{h(a)} M_a = M'_a f_{t(a)} for all arrows.
pub fn hom_space<F: Field>(
    w: &Representation<F>,
    w2: &Representation<F>,
) -> Result<HomBasis<F::Elem>> {
    if w.quiver() != w2.quiver() || w.field() != w2.field() {
        return Err(Error::Domain("Hom between representations of different shape".into()));
    }
    let f = w.field();
    let d = &w.dims().0;
    let d2 = &w2.dims().0;
    // unknown layout: vertex blocks, each d2[v] x d[v] row-major
    let mut offset = Vec::with_capacity(d.len());
    let mut total = 0;
    for v in 0..d.len() {
        offset.push(total);
        total += d2[v] * d[v];
    }
    let var = |v: usize, i: usize, j: usize| offset[v] + i * d[v] + j;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (ai, a) in w.quiver().arrows().iter().enumerate() {
        let (h, t) = (a.head, a.tail);
        let m = w.map(ai);
        let m2 = w2.map(ai);
        for i in 0..d2[h] {
            for j in 0..d[t] {
                let mut row = vec![f.zero(); total];
                for k in 0..d[h] {
                    let idx = var(h, i, k);
                    row[idx] = f.add(&row[idx], m.get(k, j));
                }
                for k in 0..d2[t] {
                    let idx = var(t, k, j);
                    row[idx] = f.sub(&row[idx], m2.get(i, k));
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..total)
            .map(|i| {
                let mut e = vec![f.zero(); total];
                e[i] = f.one();
                e
            })
            .collect()
    } else {
        linalg::kernel(f, &Matrix::from_rows(rows))
    };
    let elements = kernel
        .into_iter()
        .map(|x| {
            (0..d.len())
                .map(|v| {
                    Matrix::from_vec(d2[v], d[v], x[offset[v]..offset[v] + d2[v] * d[v]].to_vec())
                })
                .collect()
        })
        .collect();
    Ok(HomBasis { elements })
}

pub fn end_dim<F: Field>(w: &Representation<F>) -> Result<usize> {
    Ok(hom_space(w, w)?.dim())
}

/// End(W) = k.
pub fn is_schur<F: Field>(w: &Representation<F>) -> Result<bool> {
    Ok(end_dim(w)? == 1)
}

/// Checks that `f` intertwines W -> W'.
pub fn is_intertwiner<F: Field>(
    w: &Representation<F>,
    w2: &Representation<F>,
    maps: &[Matrix<F::Elem>],
) -> bool {
    let f = w.field();
    w.quiver().arrows().iter().enumerate().all(|(ai, a)| {
        linalg::mul(f, &maps[a.head], w.map(ai)) == linalg::mul(f, w2.map(ai), &maps[a.tail])
    })
}

fn all_invertible<F: Field>(f: &F, maps: &[Matrix<F::Elem>]) -> bool {
    maps.iter().all(|m| linalg::is_invertible(f, m))
}

/// Parameters of the isomorphism search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoSearch {
    /// Exhaustive enumeration over finite fields is used when q^dim is at most this.
    pub enumeration_budget: u128,
    /// Random combinations tried before the deterministic fallback.
    pub trials: usize,
    pub seed: u64,
}

impl Default for IsoSearch {
    fn default() -> Self {
        IsoSearch { enumeration_budget: 1 << 20, trials: 64, seed: 0x5eed }
    }
}

/// Finds an invertible element of Hom(W, W'), i.e. an isomorphism W -> W'.
///
/// Over finite fields the search is exhaustive whenever q^dim Hom fits the
/// enumeration budget, so `Ok(None)` is a proof of non-isomorphism. Over
/// infinite fields random combinations are tried and then a small integer
/// grid; when both fail the answer is `Inconclusive`, never `None`.
pub fn is_isomorphic<F: Field>(
    w: &Representation<F>,
    w2: &Representation<F>,
    search: &IsoSearch,
) -> Result<Option<Vec<Matrix<F::Elem>>>> {
    if w.quiver() != w2.quiver() || w.field() != w2.field() {
        return Err(Error::Domain("isomorphism test across different quivers or fields".into()));
    }
    if w.dims() != w2.dims() {
        return Ok(None);
    }
    let f = w.field();
    if w.dims().is_zero() {
        return Ok(Some(w.dims().0.iter().map(|_| Matrix::zeros(f, 0, 0)).collect()));
    }
    let hom = hom_space(w, w2)?;
    let end1 = end_dim(w)?;
    if hom.dim() != end1 || hom_space(w2, w)?.dim() != end1 || end_dim(w2)? != end1 {
        return Ok(None);
    }
    find_invertible(f, &hom, search, "isomorphism search")
}

/// Searches a Hom basis for an element invertible at every vertex.
pub fn find_invertible<F: Field>(
    f: &F,
    hom: &HomBasis<F::Elem>,
    search: &IsoSearch,
    what: &str,
) -> Result<Option<Vec<Matrix<F::Elem>>>> {
    if hom.dim() == 0 {
        return Ok(None);
    }
    for e in &hom.elements {
        if all_invertible(f, e) {
            return Ok(Some(e.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    match f.elements() {
        Some(elems) => {
            let q = elems.len() as u128;
            let space = q.checked_pow(hom.dim() as u32);
            if matches!(space, Some(s) if s <= search.enumeration_budget) {
                let mut digits = vec![0usize; hom.dim()];
                loop {
                    let coeffs: Vec<F::Elem> = digits.iter().map(|&i| elems[i].clone()).collect();
                    let cand = combine(f, hom, &coeffs);
                    if all_invertible(f, &cand) {
                        return Ok(Some(cand));
                    }
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
                        return Ok(None);
                    }
                }
            }
            for _ in 0..search.trials.max(1) * 16 {
                let coeffs: Vec<F::Elem> = (0..hom.dim()).map(|_| f.random(&mut rng)).collect();
                let cand = combine(f, hom, &coeffs);
                if all_invertible(f, &cand) {
                    return Ok(Some(cand));
                }
            }
            Err(Error::Inconclusive { what: what.into(), seed: search.seed })
        }
        None => {
            for _ in 0..search.trials {
                let coeffs: Vec<F::Elem> = (0..hom.dim()).map(|_| f.random(&mut rng)).collect();
                let cand = combine(f, hom, &coeffs);
                if all_invertible(f, &cand) {
                    return Ok(Some(cand));
                }
            }
            // deterministic grid {-1, 0, 1, 2}^dim, capped
            let grid: Vec<F::Elem> = [-1, 0, 1, 2].iter().map(|&x| f.from_i64(x)).collect();
            let mut digits = vec![0usize; hom.dim()];
            for _ in 0..4usize.saturating_pow(hom.dim() as u32).min(1 << 16) {
                let coeffs: Vec<F::Elem> = digits.iter().map(|&i| grid[i].clone()).collect();
                let cand = combine(f, hom, &coeffs);
                if all_invertible(f, &cand) {
                    return Ok(Some(cand));
                }
                for d in digits.iter_mut() {
                    *d += 1;
                    if *d < grid.len() {
                        break;
                    }
                    *d = 0;
                }
            }
            Err(Error::Inconclusive { what: what.into(), seed: search.seed })
        }
    }
}
