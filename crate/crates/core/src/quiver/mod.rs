//! Quivers, their representations, intertwiners, subrepresentations and
//! slope stability.
//!
//! Matrix convention: the map of an arrow `a` is a `d_{h(a)} x d_{t(a)}`
//! matrix acting on column vectors, and the gauge group acts by
//! `g . M_a = g_{h(a)} M_a g_{t(a)}^{-1}`.

pub mod certificate;
pub mod hom;
pub mod rep;
pub mod stability;
pub mod subrep;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use certificate::{geom_stability_certificate, CertificateReport};
pub use hom::{end_dim, hom_space, is_isomorphic, is_schur, HomBasis};
pub use rep::Representation;
pub use stability::{
    hn_filtration, is_geometrically_stable, scss, stability_verdict, HnFiltration,
    StabilityVerdict, Verdict,
};
pub use subrep::{enumerate_subreps, SubrepWitness, SubspaceCatalog};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    /// t(a)
    pub tail: usize,
    /// h(a)
    pub head: usize,
}

/// A finite quiver (V, A, h, t). Loops and multiple arrows are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(Error::Argument(format!("duplicate vertex {v:?}")));
            }
        }
        let mut ids = std::collections::HashSet::new();
        for a in &arrows {
            if a.tail >= vertices.len() || a.head >= vertices.len() {
                return Err(Error::Argument(format!("arrow {:?} has an unknown endpoint", a.id)));
            }
            if !ids.insert(&a.id) {
                return Err(Error::Argument(format!("duplicate arrow {:?}", a.id)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Builds a quiver from vertex names and `(id, from, to)` triples.
    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |name: &str| {
            vs.iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Argument(format!("unknown vertex {name:?}")))
        };
        let arrows = arrows
            .iter()
            .map(|&(id, from, to)| {
                Ok(Arrow { id: id.to_string(), tail: find(from)?, head: find(to)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(vs, arrows)
    }

    /// The m-Kronecker quiver: vertices 1, 2 and m parallel arrows 1 -> 2.
    pub fn kronecker(m: usize) -> Arc<Self> {
        let arrows = (0..m)
            .map(|i| Arrow { id: format!("a{}", i + 1), tail: 0, head: 1 })
            .collect();
        Arc::new(Quiver::new(vec!["1".into(), "2".into()], arrows).unwrap())
    }

    /// One vertex with one loop.
    pub fn jordan() -> Arc<Self> {
        Self::loops(1)
    }

    /// One vertex with `k` loops.
    pub fn loops(k: usize) -> Arc<Self> {
        let arrows = (0..k).map(|i| Arrow { id: format!("x{}", i + 1), tail: 0, head: 0 }).collect();
        Arc::new(Quiver::new(vec!["1".into()], arrows).unwrap())
    }

    /// The A2 quiver 1 -> 2.
    pub fn a2() -> Arc<Self> {
        Self::kronecker(1)
    }

    /// n vertices, no arrows.
    pub fn discrete(n: usize) -> Arc<Self> {
        let vs = (1..=n).map(|i| i.to_string()).collect();
        Arc::new(Quiver::new(vs, vec![]).unwrap())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// Stable short hash used to key golden census files.
    pub fn fingerprint(&self) -> String {
        // FNV-1a over a canonical text form
        let mut text = self.vertices.join(",");
        for a in &self.arrows {
            text.push_str(&format!(";{}:{}>{}", a.id, a.tail, a.head));
        }
        let mut h: u64 = 0xcbf29ce484222325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

/// A dimension vector, one entry per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn new(d: Vec<usize>) -> Self {
        DimVector(d)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// e | d_v for every vertex.
    pub fn divisible_by(&self, e: usize) -> bool {
        e > 0 && self.0.iter().all(|&d| d % e == 0)
    }

    pub fn divide(&self, e: usize) -> Option<DimVector> {
        self.divisible_by(e).then(|| DimVector(self.0.iter().map(|d| d / e).collect()))
    }

    pub fn scale(&self, e: usize) -> DimVector {
        DimVector(self.0.iter().map(|d| d * e).collect())
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, v: usize) -> &usize {
        &self.0[v]
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// mu_theta(e) = (sum theta_v e_v) / (sum e_v).
pub fn slope(e: &DimVector, theta: &[i64]) -> Result<BigRational> {
    if e.len() != theta.len() {
        return Err(Error::Argument(format!(
            "theta has {} entries for {} vertices",
            theta.len(),
            e.len()
        )));
    }
    let total = e.total();
    if total == 0 {
        return Err(Error::Argument("slope of the zero dimension vector".into()));
    }
    let num: i64 = e.0.iter().zip(theta).map(|(&d, &t)| d as i64 * t).sum();
    Ok(BigRational::new(BigInt::from(num), BigInt::from(total as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, ratio};

    #[test]
    fn slope_examples() {
        assert_eq!(slope(&DimVector(vec![1, 1]), &[1, -1]).unwrap(), rat(0));
        assert_eq!(slope(&DimVector(vec![1, 0]), &[1, -1]).unwrap(), rat(1));
        assert_eq!(slope(&DimVector(vec![2, 1]), &[1, -1]).unwrap(), ratio(1, 3));
        assert!(slope(&DimVector(vec![0, 0]), &[1, -1]).is_err());
        assert!(slope(&DimVector(vec![1]), &[1, -1]).is_err());
    }

    #[test]
    fn quiver_validation() {
        assert!(Quiver::from_names(&["1", "1"], &[]).is_err());
        assert!(Quiver::from_names(&["1"], &[("a", "1", "2")]).is_err());
        assert!(Quiver::from_names(&["1"], &[("a", "1", "1"), ("a", "1", "1")]).is_err());
        let k = Quiver::kronecker(3);
        assert_eq!(k.arrows().len(), 3);
        assert_ne!(k.fingerprint(), Quiver::kronecker(2).fingerprint());
    }

    #[test]
    fn divisibility() {
        let d = DimVector(vec![4, 2]);
        assert_eq!(d.divide(2), Some(DimVector(vec![2, 1])));
        assert!(!DimVector(vec![3, 2]).divisible_by(2));
    }
}
