use std::sync::Arc;

use super::subrep::SubrepWitness;
use super::{DimVector, Quiver};
use crate::arith::{Field, GaloisPair};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A representation of a quiver over a field: one matrix per arrow, of shape
/// `d_{h(a)} x d_{t(a)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation<F: Field> {
    quiver: Arc<Quiver>,
    field: F,
    dims: DimVector,
    maps: Vec<Matrix<F::Elem>>,
}

impl<F: Field> Representation<F> {
    pub fn new(
        quiver: Arc<Quiver>,
        field: F,
        dims: DimVector,
        maps: Vec<Matrix<F::Elem>>,
    ) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::Argument(format!(
                "dimension vector {dims} has the wrong length for {} vertices",
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Argument(format!(
                "{} matrices for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            let want = (dims[a.head], dims[a.tail]);
            if m.shape() != want {
                return Err(Error::Argument(format!(
                    "arrow {:?}: matrix is {}x{}, expected {}x{}",
                    a.id,
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Representation { quiver, field, dims, maps })
    }

    /// All arrow maps zero.
    pub fn zero(quiver: Arc<Quiver>, field: F, dims: DimVector) -> Result<Self> {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(&field, dims.0[a.head], dims.0[a.tail]))
            .collect();
        Self::new(quiver, field, dims, maps)
    }

    /// Convenience for small examples: entries given as integers.
    pub fn from_int_maps(
        quiver: Arc<Quiver>,
        field: F,
        dims: Vec<usize>,
        maps: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let dims = DimVector(dims);
        let maps = quiver
            .arrows()
            .iter()
            .zip(maps)
            .map(|(a, rows)| {
                let (r, c) = (dims[a.head], dims[a.tail]);
                if rows.is_empty() {
                    return Matrix::zeros(&field, r, c);
                }
                Matrix::from_rows(
                    rows.into_iter()
                        .map(|row| row.into_iter().map(|x| field.from_i64(x)).collect())
                        .collect(),
                )
            })
            .collect();
        Self::new(quiver, field, dims, maps)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix<F::Elem>] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix<F::Elem> {
        &self.maps[arrow]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.quiver == other.quiver && self.field == other.field && self.dims == other.dims
    }

    pub(crate) fn check_gauge(&self, g: &[Matrix<F::Elem>]) -> Result<()> {
        if g.len() != self.dims.len()
            || g.iter().zip(&self.dims.0).any(|(m, &d)| m.shape() != (d, d))
        {
            return Err(Error::Argument("gauge element has the wrong shape".into()));
        }
        Ok(())
    }

    /// g . M = (g_{h(a)} M_a g_{t(a)}^{-1}).
    pub fn act(&self, g: &[Matrix<F::Elem>]) -> Result<Self> {
        self.check_gauge(g)?;
        let f = &self.field;
        let inv: Vec<Matrix<F::Elem>> = g
            .iter()
            .map(|m| linalg::inverse(f, m).ok_or(Error::NotInvertible))
            .collect::<Result<_>>()?;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| linalg::mul(f, &linalg::mul(f, &g[a.head], m), &inv[a.tail]))
            .collect();
        Ok(Representation { maps, ..self.clone() })
    }

    /// Replaces every matrix entry through `op`, keeping shapes.
    pub fn map_entries<G: Field>(
        &self,
        field: G,
        op: impl Fn(&F::Elem) -> G::Elem,
    ) -> Representation<G> {
        Representation {
            quiver: self.quiver.clone(),
            field,
            dims: self.dims.clone(),
            maps: self.maps.iter().map(|m| m.map(&op)).collect(),
        }
    }

    /// L (x)_k W for a rep over the base field of `pair`.
    pub fn base_change<P>(&self, pair: &P) -> Representation<P::Ext>
    where
        P: GaloisPair<Base = F>,
    {
        self.map_entries(pair.ext().clone(), |x| pair.embed(x))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.quiver != other.quiver || self.field != other.field {
            return Err(Error::Domain("direct sum of incompatible representations".into()));
        }
        let f = &self.field;
        let dims = DimVector(self.dims.0.iter().zip(&other.dims.0).map(|(a, b)| a + b).collect());
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(x, y)| {
                Matrix::from_blocks(&[
                    vec![x.clone(), Matrix::zeros(f, x.rows(), y.cols())],
                    vec![Matrix::zeros(f, y.rows(), x.cols()), y.clone()],
                ])
            })
            .collect();
        Self::new(self.quiver.clone(), self.field.clone(), dims, maps)
    }

    /// The subrepresentation spanned by a witness, in the witness basis.
    pub fn restrict(&self, w: &SubrepWitness<F::Elem>) -> Result<Self> {
        let f = &self.field;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| {
                let image = linalg::mul(f, m, &w.bases[a.tail]);
                linalg::solve(f, &w.bases[a.head], &image).ok_or_else(|| {
                    Error::Argument(format!("witness is not closed under arrow {:?}", a.id))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.quiver.clone(), self.field.clone(), w.dims.clone(), maps)
    }

    /// Quotient W/U, with matrices written in a complement basis obtained by
    /// extending the witness basis greedily with standard basis vectors in
    /// index order. Returns the quotient and the per-vertex complement bases.
    pub fn quotient(
        &self,
        w: &SubrepWitness<F::Elem>,
    ) -> Result<(Self, Vec<Matrix<F::Elem>>)> {
        let f = &self.field;
        let mut complements = Vec::with_capacity(self.dims.len());
        let mut full_inv = Vec::with_capacity(self.dims.len());
        for (v, &d) in self.dims.0.iter().enumerate() {
            let comp = greedy_complement(f, &w.bases[v], d);
            let full = w.bases[v].hstack(&comp);
            full_inv.push(linalg::inverse(f, &full).ok_or_else(|| {
                Error::Invariant("extended basis is singular".into())
            })?);
            complements.push(comp);
        }
        let qdims = DimVector(
            self.dims.0.iter().zip(&w.dims.0).map(|(d, e)| d - e).collect(),
        );
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| {
                // coordinates of M * c in the basis [U | C] of the head; keep the C-part
                let image = linalg::mul(f, m, &complements[a.tail]);
                let coords = linalg::mul(f, &full_inv[a.head], &image);
                let e = w.dims[a.head];
                coords.block(e, coords.rows(), 0, coords.cols())
            })
            .collect();
        Ok((Self::new(self.quiver.clone(), self.field.clone(), qdims, maps)?, complements))
    }
}

/// Standard basis vectors, in index order, that extend `basis` (d x k) to a
/// basis of the whole space; returned as a d x (d - k) matrix.
pub(crate) fn greedy_complement<F: Field>(
    f: &F,
    basis: &Matrix<F::Elem>,
    d: usize,
) -> Matrix<F::Elem> {
    let mut current = basis.clone();
    let mut rank = linalg::rank(f, &current);
    let mut chosen = Vec::new();
    for i in 0..d {
        if rank == d {
            break;
        }
        let mut e = vec![f.zero(); d];
        e[i] = f.one();
        let candidate = current.hstack(&Matrix::from_columns(d, &[e.clone()]));
        let r = linalg::rank(f, &candidate);
        if r > rank {
            rank = r;
            current = candidate;
            chosen.push(e);
        }
    }
    Matrix::from_columns(d, &chosen)
}
