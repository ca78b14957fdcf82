//! Galois twists, modifying elements, the type map to the Brauer group,
//! constructive Hilbert 90 and quaternionic forms.
//!
//! For a cyclic pair L/k with generator sigma, a Galois-fixed orbit is
//! recorded by a single u with `u . sigma(W) = W`; the rest of the modifying
//! family is `u sigma(u) ... sigma^{i-1}(u)`. The cyclic product over all n
//! powers is a scalar lambda in k, and the type of the orbit is the class of
//! the cyclic algebra (L/k, sigma, lambda).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::ntheory::squarefree_part;
use crate::arith::{BrauerClass, Field, GaloisPair, QuadElem, QuadraticPair, QuaternionAlgebra, Rationals};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::quiver::hom::{find_invertible, hom_space, IsoSearch};
use crate::quiver::Representation;
use crate::twisted::{morita_unsplit, standard_structure, DRep};

type ExtElem<P> = <<P as GaloisPair>::Ext as Field>::Elem;
type BaseElem<P> = <<P as GaloisPair>::Base as Field>::Elem;

/// sigma^i applied to every entry of a matrix.
pub fn twist_matrix<P: GaloisPair>(pair: &P, m: &Matrix<ExtElem<P>>, i: usize) -> Matrix<ExtElem<P>> {
    m.map(|x| pair.galois_apply(x, i))
}

/// The twisted representation sigma^i(W). Negative powers are taken mod n.
pub fn twist<P: GaloisPair>(
    pair: &P,
    w: &Representation<P::Ext>,
    i: i64,
) -> Representation<P::Ext> {
    let k = i.rem_euclid(pair.degree() as i64) as usize;
    w.map_entries(w.field().clone(), |x| pair.galois_apply(x, k))
}

/// (u sigma(u) ... sigma^{i-1}(u))_v for every vertex, i.e. u_{sigma^i}.
pub fn cocycle_power<P: GaloisPair>(
    pair: &P,
    u: &[Matrix<ExtElem<P>>],
    i: usize,
) -> Vec<Matrix<ExtElem<P>>> {
    let l = pair.ext();
    u.iter()
        .map(|uv| {
            let mut acc = Matrix::identity(l, uv.rows());
            for j in 0..i {
                acc = linalg::mul(l, &acc, &twist_matrix(pair, uv, j));
            }
            acc
        })
        .collect()
}

/// The cocycle scalar: the common value of u sigma(u) ... sigma^{n-1}(u) at
/// every vertex, if that product is a scalar matrix with entry in k.
pub fn cocycle_scalar<P: GaloisPair>(pair: &P, u: &[Matrix<ExtElem<P>>]) -> Option<BaseElem<P>> {
    let l = pair.ext();
    let prod = cocycle_power(pair, u, pair.degree());
    let mut value: Option<ExtElem<P>> = None;
    for p in prod.iter().filter(|p| p.rows() > 0) {
        let c = linalg::scalar_value(l, p)?;
        match &value {
            None => value = Some(c),
            Some(v) if *v == c => {}
            Some(_) => return None,
        }
    }
    pair.restrict(&value.unwrap_or_else(|| l.one()))
}

/// u . sigma(W) = W, i.e. u_h sigma(M_a) = M_a u_t with u invertible.
pub fn verify_modified_action_fixed<P: GaloisPair>(
    pair: &P,
    w: &Representation<P::Ext>,
    u: &[Matrix<ExtElem<P>>],
) -> bool {
    let l = pair.ext();
    if w.check_gauge(u).is_err() || !u.iter().all(|m| linalg::is_invertible(l, m)) {
        return false;
    }
    w.quiver().arrows().iter().zip(w.maps()).all(|(a, m)| {
        linalg::mul(l, &u[a.head], &twist_matrix(pair, m, 1)) == linalg::mul(l, m, &u[a.tail])
    })
}

/// A Galois-fixed orbit together with its modifying element.
#[derive(Clone, Debug)]
pub struct DescentDatum<P: GaloisPair> {
    pub pair: P,
    pub rep: Representation<P::Ext>,
    pub u: Vec<Matrix<ExtElem<P>>>,
    pub lambda: BaseElem<P>,
}

impl<P: GaloisPair> DescentDatum<P> {
    /// Builds a datum from given u, computing lambda and checking both
    /// defining identities.
    pub fn new(pair: P, rep: Representation<P::Ext>, u: Vec<Matrix<ExtElem<P>>>) -> Result<Self> {
        if !verify_modified_action_fixed(&pair, &rep, &u) {
            return Err(Error::Argument("u does not satisfy u . sigma(W) = W".into()));
        }
        let lambda = cocycle_scalar(&pair, &u).ok_or_else(|| {
            Error::Argument("u sigma(u) ... is not a scalar in the base field".into())
        })?;
        Ok(DescentDatum { pair, rep, u, lambda })
    }

    /// Re-checks u . sigma(W) = W and the cyclic product identity.
    pub fn verify(&self) -> bool {
        verify_modified_action_fixed(&self.pair, &self.rep, &self.u)
            && cocycle_scalar(&self.pair, &self.u).as_ref() == Some(&self.lambda)
    }

    /// Replaces u by a u for a nonzero scalar a; lambda becomes N(a) lambda.
    pub fn rescale(&self, a: &ExtElem<P>) -> Result<Self> {
        let l = self.pair.ext();
        if l.is_zero(a) {
            return Err(Error::NotInvertible);
        }
        let u = self.u.iter().map(|m| linalg::scale(l, a, m)).collect();
        let k = self.pair.base();
        let lambda = k.mul(&self.pair.norm(a), &self.lambda);
        Ok(DescentDatum { pair: self.pair.clone(), rep: self.rep.clone(), u, lambda })
    }

    pub fn class(&self) -> Result<BrauerClass> {
        self.pair.brauer_class(&self.lambda)
    }
}

/// Scales u so that its last nonzero entry (last vertex, row-major) is 1.
fn normalize_u<F: Field>(l: &F, u: &mut [Matrix<F::Elem>]) {
    let last = u
        .iter()
        .rev()
        .find_map(|m| m.data().iter().rev().find(|x| !l.is_zero(x)).cloned());
    if let Some(c) = last {
        let inv = l.inv(&c).expect("nonzero");
        for m in u.iter_mut() {
            *m = linalg::scale(l, &inv, m);
        }
    }
}

/// Solves for u : sigma(W) -> W. Returns `None` when the orbit of W is not
/// fixed by sigma. The returned u is normalized so that its last nonzero
/// entry is 1.
pub fn solve_modifying_u<P: GaloisPair>(
    pair: &P,
    w: &Representation<P::Ext>,
    search: &IsoSearch,
) -> Result<Option<DescentDatum<P>>> {
    let l = pair.ext();
    let sw = twist(pair, w, 1);
    let hom = hom_space(&sw, w)?;
    let Some(mut u) = find_invertible(l, &hom, search, "modifying element search")? else {
        return Ok(None);
    };
    normalize_u(l, &mut u);
    debug_assert!(verify_modified_action_fixed(pair, w, &u));
    let lambda = cocycle_scalar(pair, &u).ok_or_else(|| {
        Error::Invariant(
            "cocycle product is not a scalar in the base field; the input is not geometrically stable"
                .into(),
        )
    })?;
    Ok(Some(DescentDatum { pair: pair.clone(), rep: w.clone(), u, lambda }))
}

/// The type of a Galois-fixed orbit.
#[derive(Clone, Debug)]
pub struct TypeMapResult<P: GaloisPair> {
    pub class: BrauerClass,
    pub datum: DescentDatum<P>,
    pub log: Vec<String>,
}

/// The Brauer class [c_u] of the orbit of W; `NotGaloisFixed` if there is none.
pub fn type_map<P: GaloisPair>(
    pair: &P,
    w: &Representation<P::Ext>,
    search: &IsoSearch,
) -> Result<TypeMapResult<P>> {
    let datum = solve_modifying_u(pair, w, search)?.ok_or(Error::NotGaloisFixed)?;
    let class = datum.class()?;
    let log = vec![
        format!("u solved from Hom(sigma(W), W), search seed {}", search.seed),
        format!("lambda = {}", pair.base().display(&datum.lambda)),
    ];
    Ok(TypeMapResult { class, datum, log })
}

/// A k-form of a Galois-fixed orbit: `form` base-changed to L equals
/// `g^{-1} . W`.
#[derive(Clone, Debug)]
pub struct Descent<P: GaloisPair> {
    pub form: Representation<P::Base>,
    pub g: Vec<Matrix<ExtElem<P>>>,
    pub attempts: usize,
    pub seed: u64,
}

/// Constructive Hilbert 90 for a datum of trivial class.
///
/// After rescaling u by a norm witness the cyclic product is 1, and for a
/// random c the averaged matrix g = sum_i u_{sigma^i} sigma^i(c) satisfies
/// g = u sigma(g); when g is invertible, g^{-1} . W is sigma-fixed.
pub fn hilbert90_descend<P: GaloisPair>(
    datum: &DescentDatum<P>,
    seed: u64,
    max_attempts: usize,
) -> Result<Descent<P>> {
    let pair = &datum.pair;
    let l = pair.ext();
    let a = if pair.base().is_one(&datum.lambda) {
        l.one()
    } else {
        pair.norm_witness(&datum.lambda)?
            .ok_or_else(|| Error::Argument("the cocycle class is not trivial".into()))?
    };
    let datum = datum.rescale(&l.inv(&a).ok_or(Error::NotInvertible)?)?;
    if !pair.base().is_one(&datum.lambda) {
        return Err(Error::Invariant("norm witness did not normalize the cocycle".into()));
    }
    let n = pair.degree();
    let powers: Vec<Vec<Matrix<ExtElem<P>>>> =
        (0..n).map(|i| cocycle_power(pair, &datum.u, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Vec::with_capacity(datum.u.len());
    let mut attempts = 0;
    for (v, uv) in datum.u.iter().enumerate() {
        let d = uv.rows();
        let mut found = None;
        for t in 0..max_attempts.max(1) {
            attempts += 1;
            // the first try uses c = I, which already works when u = 1
            let c = if t == 0 {
                Matrix::identity(l, d)
            } else {
                Matrix::from_vec(d, d, (0..d * d).map(|_| l.random(&mut rng)).collect())
            };
            let mut gv = Matrix::zeros(l, d, d);
            for (i, pw) in powers.iter().enumerate() {
                gv = linalg::add(l, &gv, &linalg::mul(l, &pw[v], &twist_matrix(pair, &c, i)));
            }
            if linalg::is_invertible(l, &gv) {
                found = Some(gv);
                break;
            }
        }
        match found {
            Some(gv) => g.push(gv),
            None => return Err(Error::Inconclusive { what: "Hilbert 90 averaging".into(), seed }),
        }
    }
    let ginv: Vec<Matrix<ExtElem<P>>> =
        g.iter().map(|m| linalg::inverse(l, m).expect("checked invertible")).collect();
    let descended = datum.rep.act(&ginv)?;
    let maps = descended
        .maps()
        .iter()
        .map(|m| m.try_map(|x| pair.restrict(x)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invariant("descended matrices are not sigma-fixed".into()))?;
    let form = Representation::new(
        datum.rep.quiver().clone(),
        pair.base().clone(),
        datum.rep.dims().clone(),
        maps,
    )?;
    Ok(Descent { form, g, attempts, seed })
}

/// A quaternionic form of a datum with nontrivial class over Q(sqrt(m))/Q.
#[derive(Clone, Debug)]
pub struct DivisionForm {
    pub drep: DRep,
    /// Per-vertex change of basis with h . W fixed by the standard structure.
    pub h: Vec<Matrix<QuadElem>>,
    /// The squarefree cocycle value used for the standard structure.
    pub lambda: BigInt,
}

/// Writes a datum of nontrivial class over a quadratic pair as a
/// representation over the quaternion division algebra (m, lambda)_Q.
///
/// u is first rescaled by a rational so that lambda is squarefree, then
/// moved to the standard block structure diag([[0, lambda], [1, 0]]) by a
/// per-vertex change of basis, after which every arrow matrix reads off as a
/// matrix of quaternions.
pub fn division_form(
    datum: &DescentDatum<QuadraticPair>,
    seed: u64,
    max_attempts: usize,
) -> Result<DivisionForm> {
    let pair = &datum.pair;
    let l = pair.ext();
    if pair.is_norm(&datum.lambda)? {
        return Err(Error::Argument("the cocycle class is trivial; use Hilbert 90 descent".into()));
    }
    if let Some(v) = datum.rep.dims().0.iter().position(|d| d % 2 != 0) {
        return Err(Error::Argument(format!(
            "dimension {} at vertex {} is odd, but the index 2 of the class must divide every dimension",
            datum.rep.dims()[v],
            datum.rep.quiver().vertices()[v]
        )));
    }
    let (s, r) = squarefree_part(&datum.lambda)?;
    let datum = datum.rescale(&QuadElem::rational(BigRational::one() / r))?;
    let lambda_s = BigRational::from_integer(s.clone());
    debug_assert_eq!(datum.lambda, lambda_s);
    let algebra = QuaternionAlgebra::new(BigRational::from_integer(pair.m().into()), lambda_s.clone())?;
    if !algebra.is_division()? {
        return Err(Error::Invariant("nontrivial class but the quaternion algebra splits".into()));
    }
    let u_std = standard_structure(l, datum.rep.dims(), &lambda_s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = Vec::with_capacity(u_std.len());
    for (uv, sv) in datum.u.iter().zip(&u_std) {
        h.push(normalizing_basis(l, uv, sv, &mut rng, max_attempts).ok_or(
            Error::Inconclusive { what: "quaternionic normalization".into(), seed },
        )?);
    }
    let moved = datum.rep.act(&h)?;
    if !verify_modified_action_fixed(pair, &moved, &u_std) {
        return Err(Error::Invariant("normalized representation is not fixed by the standard structure".into()));
    }
    let drep = morita_unsplit(pair, &moved, &lambda_s)?;
    Ok(DivisionForm { drep, h, lambda: s })
}

/// An invertible h with h u = u_std sigma(h), found in the Q-solution space
/// of that linear system (h = h0 + sqrt(m) h1).
fn normalizing_basis(
    l: &crate::arith::QuadField,
    u: &Matrix<QuadElem>,
    u_std: &Matrix<QuadElem>,
    rng: &mut ChaCha8Rng,
    max_attempts: usize,
) -> Option<Matrix<QuadElem>> {
    let d = u.rows();
    if u == u_std {
        return Some(Matrix::identity(l, d));
    }
    let q = Rationals;
    let unknowns = 2 * d * d;
    // column k of the system: the residual h u - u_std sigma(h) for the k-th
    // unit unknown, split into rational and sqrt(m) parts
    let unit = |k: usize| -> Matrix<QuadElem> {
        let mut h = Matrix::zeros(l, d, d);
        let (part, idx) = (k / (d * d), k % (d * d));
        let e = if part == 0 { l.one() } else { l.sqrt_m() };
        h.set(idx / d, idx % d, e);
        h
    };
    let columns: Vec<Vec<BigRational>> = (0..unknowns)
        .map(|k| {
            let h = unit(k);
            let hs = h.map(|x| l.conj(x));
            let res = linalg::sub(l, &linalg::mul(l, &h, u), &linalg::mul(l, u_std, &hs));
            res.data().iter().flat_map(|x| [x.a.clone(), x.b.clone()]).collect()
        })
        .collect();
    let system = Matrix::from_columns(2 * d * d, &columns);
    let kernel = linalg::kernel(&q, &system);
    let build = |coeffs: &[BigRational]| -> Matrix<QuadElem> {
        let mut h = Matrix::zeros(l, d, d);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                h = linalg::add(l, &h, &linalg::scale(l, &QuadElem::rational(c.clone()), &unit(k)));
            }
        }
        h
    };
    let basis: Vec<Matrix<QuadElem>> = kernel.iter().map(|x| build(x)).collect();
    if let Some(b) = basis.iter().find(|b| linalg::is_invertible(l, b)) {
        return Some(b.clone());
    }
    for _ in 0..max_attempts {
        let mut h = Matrix::zeros(l, d, d);
        for b in &basis {
            let c = q.random(rng);
            h = linalg::add(l, &h, &linalg::scale(l, &QuadElem::rational(c), b));
        }
        if linalg::is_invertible(l, &h) {
            return Some(h);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FiniteGaloisPair, Fq, QuadField};
    use crate::quiver::{DimVector, Quiver};

    pub(crate) fn quaternionic_kronecker() -> Representation<QuadField> {
        let l = QuadField::gaussian();
        let e = |a: i64, b: i64| l.from_ints(a, b);
        let maps = vec![
            Matrix::from_rows(vec![vec![e(1, 0), e(0, 0)], vec![e(0, 0), e(1, 0)]]),
            Matrix::from_rows(vec![vec![e(0, 1), e(0, 0)], vec![e(0, 0), e(0, -1)]]),
            Matrix::from_rows(vec![vec![e(0, 0), e(-1, 0)], vec![e(1, 0), e(0, 0)]]),
        ];
        Representation::new(Quiver::kronecker(3), l, DimVector(vec![2, 2]), maps).unwrap()
    }

    #[test]
    fn twist_is_conjugation() {
        let pair = QuadraticPair::gaussian();
        let l = pair.ext().clone();
        let w = Representation::new(
            Quiver::jordan(),
            l.clone(),
            DimVector(vec![1]),
            vec![Matrix::from_rows(vec![vec![l.from_ints(0, 1)]])],
        )
        .unwrap();
        assert_eq!(twist(&pair, &w, 1).map(0).get(0, 0), &l.from_ints(0, -1));
        assert_eq!(twist(&pair, &w, 2), w);
        assert_eq!(twist(&pair, &w, -1), twist(&pair, &w, 1));
    }

    #[test]
    fn quaternionic_type() {
        let pair = QuadraticPair::gaussian();
        let w = quaternionic_kronecker();
        let t = type_map(&pair, &w, &IsoSearch::default()).unwrap();
        let l = pair.ext();
        let j = Matrix::from_rows(vec![
            vec![l.from_ints(0, 0), l.from_ints(-1, 0)],
            vec![l.from_ints(1, 0), l.from_ints(0, 0)],
        ]);
        assert_eq!(t.datum.u, vec![j.clone(), j]);
        assert_eq!(t.datum.lambda, Rationals.from_i64(-1));
        assert_eq!(t.class.to_string(), "(-1,-1)_Q");
        let form = division_form(&t.datum, 1, 50).unwrap();
        assert_eq!(form.h, vec![Matrix::identity(l, 2); 2]);
        let alg = &form.drep.algebra;
        assert_eq!(form.drep.maps[0].get(0, 0), &crate::arith::Quat::one());
        assert_eq!(form.drep.maps[1].get(0, 0), &alg.i());
        assert_eq!(form.drep.maps[2].get(0, 0), &alg.j());
    }

    #[test]
    fn not_fixed_orbit() {
        let pair = QuadraticPair::gaussian();
        let l = pair.ext().clone();
        let w = Representation::new(
            Quiver::kronecker(2),
            l.clone(),
            DimVector(vec![1, 1]),
            vec![
                Matrix::from_rows(vec![vec![l.from_ints(1, 0)]]),
                Matrix::from_rows(vec![vec![l.from_ints(0, 1)]]),
            ],
        )
        .unwrap();
        assert!(solve_modifying_u(&pair, &w, &IsoSearch::default()).unwrap().is_none());
        assert!(matches!(type_map(&pair, &w, &IsoSearch::default()), Err(Error::NotGaloisFixed)));
    }

    #[test]
    fn hilbert90_on_f4() {
        let pair = FiniteGaloisPair::standard(2, 1, 2).unwrap();
        let l = pair.ext().clone();
        let omega = l.generator();
        let w = Representation::new(
            Quiver::jordan(),
            l.clone(),
            DimVector(vec![1]),
            vec![Matrix::from_rows(vec![vec![1]])],
        )
        .unwrap();
        let datum = DescentDatum::new(pair.clone(), w.clone(), vec![Matrix::from_rows(vec![vec![omega]])]).unwrap();
        assert_eq!(datum.lambda, 1);
        let out = hilbert90_descend(&datum, 7, 20).unwrap();
        assert_eq!(out.form.map(0).get(0, 0), &1);
        assert_eq!(out.form.field(), &Fq::prime(2).unwrap());
    }

    #[test]
    fn hilbert90_over_gaussian_rationals() {
        let pair = QuadraticPair::gaussian();
        let l = pair.ext().clone();
        let base = Representation::from_int_maps(
            Quiver::kronecker(2),
            Rationals,
            vec![2, 1],
            vec![vec![vec![1, 0]], vec![vec![0, 1]]],
        )
        .unwrap();
        let g0 = vec![
            Matrix::from_rows(vec![
                vec![l.from_ints(1, 1), l.from_ints(0, 0)],
                vec![l.from_ints(0, 0), l.from_ints(1, 0)],
            ]),
            Matrix::identity(&l, 1),
        ];
        let w = base.base_change(&pair).act(&g0).unwrap();
        let datum = solve_modifying_u(&pair, &w, &IsoSearch::default()).unwrap().unwrap();
        assert!(datum.class().unwrap().is_trivial());
        let out = hilbert90_descend(&datum, 3, 50).unwrap();
        let back = out.form.base_change(&pair);
        assert!(crate::quiver::is_isomorphic(&back, &w, &IsoSearch::default()).unwrap().is_some());
    }

    #[test]
    fn rescaling_changes_lambda_by_a_norm() {
        let pair = QuadraticPair::gaussian();
        let w = quaternionic_kronecker();
        let d = solve_modifying_u(&pair, &w, &IsoSearch::default()).unwrap().unwrap();
        let a = pair.ext().from_ints(2, 1);
        let d2 = d.rescale(&a).unwrap();
        assert!(d2.verify());
        assert_eq!(d2.lambda, Rationals.from_i64(-5));
        assert!(d2.class().unwrap().equivalent(&d.class().unwrap()).unwrap());
    }
}
