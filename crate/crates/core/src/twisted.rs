//! Representations over quaternion algebras, the Morita splitting and
//! twisted representations in descent-datum form.
//!
//! A D-representation has one matrix of quaternions per arrow. Modules are
//! right D-modules, so a D-matrix acts on column vectors from the left and
//! D-linear maps are again left multiplications by D-matrices.
//!
//! Over L = Q(sqrt(m)) the algebra D = (m, lambda)_Q splits by
//! i -> diag(sqrt(m), -sqrt(m)) and j -> [[0, lambda], [1, 0]]. The image of
//! a D-representation is fixed by the standard structure
//! u_std = diag([[0, lambda], [1, 0]], ...), and conversely.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{
    BrauerClass, Field, GaloisPair, QuadElem, QuadField, QuadraticPair, Quat, QuaternionAlgebra,
    Rationals,
};
use crate::descent::{
    cocycle_scalar, division_form, hilbert90_descend, verify_modified_action_fixed,
    DescentDatum,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::quiver::certificate::{geom_stability_certificate, CertificateReport};
use crate::quiver::{DimVector, Quiver, Representation};

/// A representation of a quiver in right modules over a quaternion algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct DRep {
    pub quiver: Arc<Quiver>,
    pub algebra: QuaternionAlgebra,
    pub dims: DimVector,
    pub maps: Vec<Matrix<Quat>>,
}

impl DRep {
    pub fn new(
        quiver: Arc<Quiver>,
        algebra: QuaternionAlgebra,
        dims: DimVector,
        maps: Vec<Matrix<Quat>>,
    ) -> Result<Self> {
        if dims.len() != quiver.vertex_count() || maps.len() != quiver.arrows().len() {
            return Err(Error::Argument("D-representation does not match its quiver".into()));
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            if m.shape() != (dims[a.head], dims[a.tail]) {
                return Err(Error::Argument(format!("arrow {:?}: wrong D-matrix shape", a.id)));
            }
        }
        Ok(DRep { quiver, algebra, dims, maps })
    }

    /// Conjugates every arrow matrix by the same unit quaternion g at every
    /// vertex: M -> g M g^{-1}.
    pub fn conjugate(&self, g: &Quat) -> Result<Self> {
        let alg = &self.algebra;
        let gi = alg.inv(g)?;
        let maps = self
            .maps
            .iter()
            .map(|m| m.map(|x| alg.mul(&alg.mul(g, x), &gi)))
            .collect();
        Ok(DRep { maps, ..self.clone() })
    }
}

/// Product of quaternion matrices.
pub fn qmat_mul(alg: &QuaternionAlgebra, a: &Matrix<Quat>, b: &Matrix<Quat>) -> Matrix<Quat> {
    assert_eq!(a.cols(), b.rows());
    let mut data = Vec::with_capacity(a.rows() * b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = Quat::zero();
            for k in 0..a.cols() {
                acc = alg.add(&acc, &alg.mul(a.get(i, k), b.get(k, j)));
            }
            data.push(acc);
        }
    }
    Matrix::from_vec(a.rows(), b.cols(), data)
}

/// The rational 4r x 4c matrix of x -> A x on D^c = Q^{4c}, with coordinates
/// (1, i, j, ij) per entry.
pub fn regular_matrix(alg: &QuaternionAlgebra, a: &Matrix<Quat>) -> Matrix<BigRational> {
    let basis = [Quat::one(), alg.i(), alg.j(), alg.ij()];
    let mut out = Matrix::filled(4 * a.rows(), 4 * a.cols(), BigRational::zero());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            for (k, e) in basis.iter().enumerate() {
                let img = alg.mul(a.get(r, c), e);
                for t in 0..4 {
                    out.set(4 * r + t, 4 * c + k, img.0[t].clone());
                }
            }
        }
    }
    out
}

/// The 2x2 image of a quaternion under the splitting of (m, lambda)_Q over
/// Q(sqrt(m)).
pub fn split_quat(lambda: &BigRational, x: &Quat) -> Matrix<QuadElem> {
    let [x0, x1, x2, x3] = &x.0;
    let e = |a: &BigRational, b: &BigRational| QuadElem::new(a.clone(), b.clone());
    Matrix::from_rows(vec![
        vec![e(x0, x1), e(&(lambda * x2), &(lambda * x3))],
        vec![e(x2, &-x3), e(x0, &-x1)],
    ])
}

fn check_constants(pair: &QuadraticPair, alg: &QuaternionAlgebra) -> Result<()> {
    if *alg.a() != BigRational::from_integer(pair.m().into()) {
        return Err(Error::Argument(format!(
            "the algebra has i^2 = {}, but the pair adjoins sqrt({})",
            alg.a(),
            pair.m()
        )));
    }
    Ok(())
}

/// Splits a D-representation into an L-representation of twice the dimension.
pub fn morita_split(r: &DRep, pair: &QuadraticPair) -> Result<Representation<QuadField>> {
    check_constants(pair, &r.algebra)?;
    let l = pair.ext();
    let lambda = r.algebra.b();
    let maps = r
        .maps
        .iter()
        .map(|m| {
            let blocks: Vec<Vec<Matrix<QuadElem>>> = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| split_quat(lambda, m.get(i, j))).collect())
                .collect();
            if m.rows() == 0 || m.cols() == 0 {
                Matrix::zeros(l, 2 * m.rows(), 2 * m.cols())
            } else {
                Matrix::from_blocks(&blocks)
            }
        })
        .collect();
    Representation::new(r.quiver.clone(), l.clone(), r.dims.scale(2), maps)
}

/// The standard structure diag([[0, lambda], [1, 0]], ...) at every vertex.
pub fn standard_structure(
    l: &QuadField,
    dims: &DimVector,
    lambda: &BigRational,
) -> Vec<Matrix<QuadElem>> {
    dims.0
        .iter()
        .map(|&d| {
            let mut m = Matrix::zeros(l, d, d);
            for b in 0..d / 2 {
                m.set(2 * b, 2 * b + 1, QuadElem::rational(lambda.clone()));
                m.set(2 * b + 1, 2 * b, l.one());
            }
            m
        })
        .collect()
}

/// Inverse of [`morita_split`] on representations fixed by the standard
/// structure for the cocycle value `lambda`.
pub fn morita_unsplit(
    pair: &QuadraticPair,
    w: &Representation<QuadField>,
    lambda: &BigRational,
) -> Result<DRep> {
    let l = pair.ext();
    let half = w
        .dims()
        .divide(2)
        .ok_or_else(|| Error::Argument(format!("dimension vector {} is not even", w.dims())))?;
    let u_std = standard_structure(l, w.dims(), lambda);
    if !verify_modified_action_fixed(pair, w, &u_std) {
        return Err(Error::Argument(
            "representation is not fixed by the standard quaternionic structure".into(),
        ));
    }
    let algebra = QuaternionAlgebra::new(BigRational::from_integer(pair.m().into()), lambda.clone())?;
    let maps = w
        .maps()
        .iter()
        .map(|m| {
            let (rows, cols) = (m.rows() / 2, m.cols() / 2);
            let mut data = Vec::with_capacity(rows * cols);
            for i in 0..rows {
                for j in 0..cols {
                    let p = m.get(2 * i, 2 * j);
                    let r = m.get(2 * i + 1, 2 * j);
                    let q = Quat([p.a.clone(), p.b.clone(), r.a.clone(), -&r.b]);
                    if split_quat(lambda, &q) != m.block(2 * i, 2 * i + 2, 2 * j, 2 * j + 2) {
                        return Err(Error::Invariant(format!(
                            "block ({i},{j}) is not the image of a quaternion"
                        )));
                    }
                    data.push(q);
                }
            }
            Ok(Matrix::from_vec(rows, cols, data))
        })
        .collect::<Result<Vec<_>>>()?;
    DRep::new(w.quiver().clone(), algebra, half, maps)
}

/// A twisted representation in descent-datum form: W over L, a transition
/// u : sigma(W) -> W and the scalar lambda of the cyclic cocycle identity.
#[derive(Clone, Debug)]
pub struct TwistedRep<P: GaloisPair> {
    pub pair: P,
    pub rep: Representation<P::Ext>,
    pub u: Vec<Matrix<<P::Ext as Field>::Elem>>,
    pub lambda: <P::Base as Field>::Elem,
    pub index: u32,
}

impl<P: GaloisPair> TwistedRep<P> {
    pub fn from_datum(datum: &DescentDatum<P>, index: u32) -> Self {
        TwistedRep {
            pair: datum.pair.clone(),
            rep: datum.rep.clone(),
            u: datum.u.clone(),
            lambda: datum.lambda.clone(),
            index,
        }
    }

    pub fn datum(&self) -> DescentDatum<P> {
        DescentDatum {
            pair: self.pair.clone(),
            rep: self.rep.clone(),
            u: self.u.clone(),
            lambda: self.lambda.clone(),
        }
    }
}

/// dim_L(W) / index, componentwise.
pub fn twisted_dim<P: GaloisPair>(t: &TwistedRep<P>) -> Result<DimVector> {
    t.rep.dims().divide(t.index as usize).ok_or_else(|| {
        Error::Invariant(format!("index {} does not divide {}", t.index, t.rep.dims()))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedValidation {
    pub ok: bool,
    pub problems: Vec<String>,
}

/// Checks that u : sigma(W) -> W is an isomorphism, the cyclic product is
/// lambda times the identity and the index divides the dimensions.
pub fn validate_twisted<P: GaloisPair>(t: &TwistedRep<P>) -> TwistedValidation {
    let l = t.pair.ext();
    let mut problems = Vec::new();
    let q = t.rep.quiver();
    if t.rep.check_gauge(&t.u).is_err() {
        problems.push("u has the wrong shape".into());
        return TwistedValidation { ok: false, problems };
    }
    for (v, uv) in t.u.iter().enumerate() {
        if !linalg::is_invertible(l, uv) {
            problems.push(format!("u is singular at vertex {}", q.vertices()[v]));
        }
    }
    for (a, m) in q.arrows().iter().zip(t.rep.maps()) {
        let lhs = linalg::mul(l, &t.u[a.head], &m.map(|x| t.pair.sigma(x)));
        let rhs = linalg::mul(l, m, &t.u[a.tail]);
        if lhs != rhs {
            problems.push(format!("u_h sigma(M) != M u_t at arrow {}", a.id));
        }
    }
    let prod = crate::descent::cocycle_power(&t.pair, &t.u, t.pair.degree());
    let expect = t.pair.embed(&t.lambda);
    for (v, p) in prod.iter().enumerate() {
        if *p != Matrix::scalar(l, p.rows(), &expect) {
            problems.push(format!(
                "cyclic product at vertex {} is not {} times the identity",
                q.vertices()[v],
                t.pair.base().display(&t.lambda)
            ));
        }
    }
    if !t.rep.dims().divisible_by(t.index as usize) {
        problems.push(format!("index {} does not divide {}", t.index, t.rep.dims()));
    }
    TwistedValidation { ok: problems.is_empty(), problems }
}

/// The form attached to a twisted representation: a k-representation for
/// the trivial class, a D-representation otherwise.
#[derive(Clone, Debug)]
pub enum Form {
    Base(Representation<Rationals>),
    Quaternion(DRep),
}

/// Converts a validated twisted representation over Q(sqrt(m)) into its form.
pub fn twisted_to_drep(t: &TwistedRep<QuadraticPair>, seed: u64, attempts: usize) -> Result<Form> {
    let v = validate_twisted(t);
    if !v.ok {
        return Err(Error::Argument(format!("invalid twisted representation: {}", v.problems.join("; "))));
    }
    let datum = t.datum();
    if t.pair.is_norm(&t.lambda)? {
        Ok(Form::Base(hilbert90_descend(&datum, seed, attempts)?.form))
    } else {
        Ok(Form::Quaternion(division_form(&datum, seed, attempts)?.drep))
    }
}

/// (morita_split(R), u_std, lambda) with the index of the algebra.
pub fn drep_to_twisted(r: &DRep) -> Result<TwistedRep<QuadraticPair>> {
    let a = r.algebra.a();
    if !a.is_integer() {
        return Err(Error::Argument("i^2 must be an integer to split over Q(sqrt(i^2))".into()));
    }
    let m: i64 = a
        .to_integer()
        .try_into()
        .map_err(|_| Error::Argument("i^2 is too large".into()))?;
    let pair = QuadraticPair::new(m)?;
    let rep = morita_split(r, &pair)?;
    let u = standard_structure(pair.ext(), rep.dims(), r.algebra.b());
    let index = if r.algebra.is_division()? { 2 } else { 1 };
    let lambda = r.algebra.b().clone();
    debug_assert_eq!(cocycle_scalar(&pair, &u), Some(lambda.clone()));
    Ok(TwistedRep { pair, rep, u, lambda, index })
}

/// Geometric stability of a D-representation, i.e. of its split image.
pub fn drep_is_geom_stable(
    r: &DRep,
    theta: &[i64],
    primes: &[u32],
    budget: u128,
) -> Result<CertificateReport<QuadElem>> {
    let t = drep_to_twisted(r)?;
    geom_stability_certificate(&t.rep, theta, primes, budget)
}

/// A Q-basis of the D-linear intertwiners R -> R'.
pub fn drep_hom_space(r: &DRep, r2: &DRep) -> Result<Vec<Vec<Matrix<Quat>>>> {
    if r.algebra != r2.algebra || r.quiver != r2.quiver {
        return Err(Error::Domain("Hom between D-representations over different data".into()));
    }
    let alg = &r.algebra;
    let (d, d2) = (&r.dims.0, &r2.dims.0);
    let basis = [Quat::one(), alg.i(), alg.j(), alg.ij()];
    // unknown k <-> (vertex, row, col, quaternion coordinate)
    let mut slots = Vec::new();
    for v in 0..d.len() {
        for i in 0..d2[v] {
            for j in 0..d[v] {
                for c in 0..4 {
                    slots.push((v, i, j, c));
                }
            }
        }
    }
    let unit = |k: usize| -> Vec<Matrix<Quat>> {
        let (v0, i0, j0, c0) = slots[k];
        (0..d.len())
            .map(|v| {
                let mut m = Matrix::filled(d2[v], d[v], Quat::zero());
                if v == v0 {
                    m.set(i0, j0, basis[c0].clone());
                }
                m
            })
            .collect()
    };
    let residual = |f: &[Matrix<Quat>]| -> Vec<BigRational> {
        let mut out = Vec::new();
        for (ai, a) in r.quiver.arrows().iter().enumerate() {
            let lhs = qmat_mul(alg, &f[a.head], &r.maps[ai]);
            let rhs = qmat_mul(alg, &r2.maps[ai], &f[a.tail]);
            for (x, y) in lhs.data().iter().zip(rhs.data()) {
                out.extend(alg.sub(x, y).0);
            }
        }
        out
    };
    let units: Vec<Vec<Matrix<Quat>>> = (0..slots.len()).map(unit).collect();
    let columns: Vec<Vec<BigRational>> = units.iter().map(|u| residual(u)).collect();
    let rows = columns.first().map_or(0, Vec::len);
    let kernel = if rows == 0 {
        (0..slots.len())
            .map(|k| {
                let mut e = vec![BigRational::zero(); slots.len()];
                e[k] = Rationals.one();
                e
            })
            .collect()
    } else {
        linalg::kernel(&Rationals, &Matrix::from_columns(rows, &columns))
    };
    Ok(kernel
        .into_iter()
        .map(|x| {
            (0..d.len())
                .map(|v| {
                    let mut m = Matrix::filled(d2[v], d[v], Quat::zero());
                    for (k, &(v0, i, j, c)) in slots.iter().enumerate() {
                        if v0 == v && !x[k].is_zero() {
                            let add = alg.scale(&x[k], &basis[c]);
                            let cur = m.get(i, j).clone();
                            m.set(i, j, alg.add(&cur, &add));
                        }
                    }
                    m
                })
                .collect()
        })
        .collect())
}

/// A D-linear isomorphism R -> R', searched in the Q-span of the Hom basis.
pub fn drep_isomorphism(
    r: &DRep,
    r2: &DRep,
    trials: usize,
    seed: u64,
) -> Result<Option<Vec<Matrix<Quat>>>> {
    if r.dims != r2.dims {
        return Ok(None);
    }
    let alg = &r.algebra;
    let hom = drep_hom_space(r, r2)?;
    if hom.len() != drep_hom_space(r, r)?.len() || hom.len() != drep_hom_space(r2, r)?.len() {
        return Ok(None);
    }
    let invertible = |f: &[Matrix<Quat>]| {
        f.iter().all(|m| linalg::is_invertible(&Rationals, &regular_matrix(alg, m)))
    };
    if r.dims.is_zero() {
        return Ok(Some(r.dims.0.iter().map(|_| Matrix::filled(0, 0, Quat::zero())).collect()));
    }
    if let Some(b) = hom.iter().find(|b| invertible(b)) {
        return Ok(Some(b.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let coeffs: Vec<BigRational> = hom.iter().map(|_| Rationals.random(&mut rng)).collect();
        let f: Vec<Matrix<Quat>> = (0..r.dims.len())
            .map(|v| {
                let mut acc = Matrix::filled(r2.dims[v], r.dims[v], Quat::zero());
                for (c, b) in coeffs.iter().zip(&hom) {
                    let scaled = b[v].map(|x| alg.scale(c, x));
                    acc = Matrix::from_vec(
                        acc.rows(),
                        acc.cols(),
                        acc.data().iter().zip(scaled.data()).map(|(x, y)| alg.add(x, y)).collect(),
                    );
                }
                acc
            })
            .collect();
        if invertible(&f) {
            return Ok(Some(f));
        }
    }
    if hom.is_empty() {
        return Ok(None);
    }
    Err(Error::Inconclusive { what: "D-isomorphism search".into(), seed })
}

/// The class of a twisted representation over a quadratic pair.
pub fn twisted_class(t: &TwistedRep<QuadraticPair>) -> Result<BrauerClass> {
    t.pair.brauer_class(&t.lambda)
}
