//! JSON file formats.
//!
//! A quiver is `{"vertices": [...], "arrows": [{"id", "from", "to"}]}`. A
//! representation is `{"quiver", "ring", "dims": {vertex: int}, "matrices":
//! {arrow: [[elem]]}}`, where the ring is one of
//!
//! * `{"type": "rational"}`, elements `"p/q"` strings or integers;
//! * `{"type": "prime", "p": p}` or `{"type": "finite", "p": p, "n": n}`
//!   (optionally with `"modulus"`, low degree first), elements integer codes
//!   `sum c_i p^i` or coefficient arrays;
//! * `{"type": "quadratic", "m": m}`, elements `[a, b]` for a + b sqrt(m);
//! * `{"type": "quaternion", "a": a, "b": b}`, elements `[x0, x1, x2, x3]`
//!   for x0 + x1 i + x2 j + x3 ij.
//!
//! A descent datum adds `"u": {vertex: [[elem]]}`, `"lambda"` and `"pair"`
//! to a representation under `"rep"`; a twisted representation further adds
//! `"index"`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::arith::galois::PairDescriptor;
use crate::arith::{
    parse_rational, rational_to_string, FiniteGaloisPair, Field, Fq, GaloisPair, Quat, QuadElem,
    QuadField, QuadraticPair, QuaternionAlgebra, Rationals,
};
use crate::descent::DescentDatum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quiver::{Arrow, DimVector, Quiver, Representation, SubrepWitness};
use crate::twisted::{DRep, TwistedRep};

fn perr(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

/// Parses JSON text, reporting line and column on syntax errors.
pub fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("{what}: line {} column {}: {e}", e.line(), e.column()))
    })
}

pub fn read_json(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

/// Deterministic pretty-printed JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(path, format!("missing field {key:?}")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(path, "expected an array"))
}

fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| perr(path, "expected an integer"))
}

fn name(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(perr(path, "expected a name")),
    }
}

fn rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(i.into())),
            None => Err(perr(path, "expected an integer or a \"p/q\" string")),
        },
        Value::String(s) => parse_rational(s).map_err(|e| perr(path, e)),
        _ => Err(perr(path, "expected a rational number")),
    }
}

fn rational_components<const N: usize>(v: &Value, path: &str) -> Result<[BigRational; N]> {
    match v {
        Value::Array(xs) => {
            if xs.len() != N {
                return Err(perr(path, format!("expected {N} components")));
            }
            let parts = xs
                .iter()
                .enumerate()
                .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(parts.try_into().expect("length checked"))
        }
        _ => {
            let mut out: [BigRational; N] = std::array::from_fn(|_| BigRational::from_integer(0.into()));
            out[0] = rational(v, path)?;
            Ok(out)
        }
    }
}

/// Fields with a JSON encoding for their elements.
pub trait JsonRing: Field {
    fn ring_json(&self) -> Value;
    fn elem_to_json(&self, x: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value, path: &str) -> Result<Self::Elem>;
}

impl JsonRing for Fq {
    fn ring_json(&self) -> Value {
        if self.degree() == 1 {
            json!({"type": "prime", "p": self.characteristic()})
        } else {
            json!({"type": "finite", "p": self.characteristic(), "n": self.degree(), "modulus": self.modulus()})
        }
    }
    fn elem_to_json(&self, x: &u32) -> Value {
        json!(x)
    }
    fn elem_from_json(&self, v: &Value, path: &str) -> Result<u32> {
        match v {
            Value::Array(cs) => {
                let coeffs = cs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let c = int(c, &format!("{path}[{i}]"))?;
                        Ok(c.rem_euclid(self.characteristic() as i64) as u32)
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.from_coeffs(&coeffs).map_err(|e| perr(path, e))
            }
            _ => {
                let c = int(v, path)?;
                if self.degree() == 1 {
                    Ok(self.from_i64(c))
                } else if (0..self.size() as i64).contains(&c) {
                    Ok(c as u32)
                } else {
                    Err(perr(path, format!("element code {c} outside 0..{}", self.size())))
                }
            }
        }
    }
}

impl JsonRing for Rationals {
    fn ring_json(&self) -> Value {
        json!({"type": "rational"})
    }
    fn elem_to_json(&self, x: &BigRational) -> Value {
        json!(rational_to_string(x))
    }
    fn elem_from_json(&self, v: &Value, path: &str) -> Result<BigRational> {
        rational(v, path)
    }
}

impl JsonRing for QuadField {
    fn ring_json(&self) -> Value {
        json!({"type": "quadratic", "m": self.m()})
    }
    fn elem_to_json(&self, x: &QuadElem) -> Value {
        json!([rational_to_string(&x.a), rational_to_string(&x.b)])
    }
    fn elem_from_json(&self, v: &Value, path: &str) -> Result<QuadElem> {
        let [a, b] = rational_components::<2>(v, path)?;
        Ok(QuadElem::new(a, b))
    }
}

pub fn quat_to_json(x: &Quat) -> Value {
    Value::Array(x.0.iter().map(|c| json!(rational_to_string(c))).collect())
}

pub fn quat_from_json(v: &Value, path: &str) -> Result<Quat> {
    Ok(Quat(rational_components::<4>(v, path)?))
}

pub fn matrix_to_json<E: Clone>(m: &Matrix<E>, elem: impl Fn(&E) -> Value) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| elem(m.get(i, j))).collect()))
            .collect(),
    )
}

fn matrix_from_json<E: Clone>(
    v: &Value,
    rows: usize,
    cols: usize,
    path: &str,
    elem: &impl Fn(&Value, &str) -> Result<E>,
) -> Result<Matrix<E>> {
    let rs = array(v, path)?;
    if rs.len() != rows {
        return Err(perr(path, format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, r) in rs.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cs = array(r, &rp)?;
        if cs.len() != cols {
            return Err(perr(&rp, format!("expected {cols} entries, found {}", cs.len())));
        }
        for (j, x) in cs.iter().enumerate() {
            data.push(elem(x, &format!("{rp}[{j}]"))?);
        }
    }
    Ok(Matrix::from_vec(rows, cols, data))
}

pub fn quiver_to_json(q: &Quiver) -> Value {
    json!({
        "vertices": q.vertices(),
        "arrows": q.arrows().iter().map(|a| json!({
            "id": a.id,
            "from": q.vertices()[a.tail],
            "to": q.vertices()[a.head],
        })).collect::<Vec<_>>(),
    })
}

pub fn quiver_from_json(v: &Value, path: &str) -> Result<Quiver> {
    let vs = array(field(v, "vertices", path)?, &format!("{path}.vertices"))?
        .iter()
        .enumerate()
        .map(|(i, x)| name(x, &format!("{path}.vertices[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let find = |n: &str, p: &str| {
        vs.iter().position(|v| v == n).ok_or_else(|| perr(p, format!("unknown vertex {n:?}")))
    };
    let mut arrows = Vec::new();
    let ap = format!("{path}.arrows");
    let empty = Vec::new();
    let list = match v.get("arrows") {
        Some(a) => array(a, &ap)?,
        None => &empty,
    };
    for (i, a) in list.iter().enumerate() {
        let p = format!("{ap}[{i}]");
        let id = name(field(a, "id", &p)?, &format!("{p}.id"))?;
        let from = name(field(a, "from", &p)?, &format!("{p}.from"))?;
        let to = name(field(a, "to", &p)?, &format!("{p}.to"))?;
        arrows.push(Arrow { id, tail: find(&from, &format!("{p}.from"))?, head: find(&to, &format!("{p}.to"))? });
    }
    Quiver::new(vs, arrows).map_err(|e| perr(path, e))
}

fn dims_to_json(q: &Quiver, d: &DimVector) -> Value {
    Value::Object(q.vertices().iter().cloned().zip(d.0.iter().map(|&x| json!(x))).collect())
}

fn dims_from_json(q: &Quiver, v: &Value, path: &str) -> Result<DimVector> {
    let obj = object(v, path)?;
    for k in obj.keys() {
        if q.vertex_index(k).is_none() {
            return Err(perr(path, format!("unknown vertex {k:?}")));
        }
    }
    let d = q
        .vertices()
        .iter()
        .map(|name| {
            let p = format!("{path}.{name}");
            let x = int(obj.get(name).ok_or_else(|| perr(path, format!("missing vertex {name:?}")))?, &p)?;
            usize::try_from(x).map_err(|_| perr(&p, "dimension must be nonnegative"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DimVector(d))
}

/// Per-arrow matrices keyed by arrow id; empty matrices may be omitted.
fn matrices_from_json<E: Clone>(
    q: &Quiver,
    d: &DimVector,
    v: Option<&Value>,
    path: &str,
    elem: &impl Fn(&Value, &str) -> Result<E>,
) -> Result<Vec<Matrix<E>>> {
    let empty = Map::new();
    let obj = match v {
        Some(v) => object(v, path)?,
        None => &empty,
    };
    for k in obj.keys() {
        if q.arrow_index(k).is_none() {
            return Err(perr(path, format!("unknown arrow {k:?}")));
        }
    }
    q.arrows()
        .iter()
        .map(|a| {
            let (r, c) = (d[a.head], d[a.tail]);
            let p = format!("{path}.{}", a.id);
            match obj.get(&a.id) {
                Some(m) => matrix_from_json(m, r, c, &p, elem),
                None if r * c == 0 => Ok(Matrix::from_vec(r, c, Vec::new())),
                None => Err(perr(path, format!("missing matrix for arrow {:?}", a.id))),
            }
        })
        .collect()
}

fn vertex_matrices_to_json<E: Clone>(q: &Quiver, ms: &[Matrix<E>], elem: impl Fn(&E) -> Value) -> Value {
    Value::Object(
        q.vertices()
            .iter()
            .cloned()
            .zip(ms.iter().map(|m| matrix_to_json(m, &elem)))
            .collect(),
    )
}

fn vertex_matrices_from_json<E: Clone>(
    q: &Quiver,
    d: &DimVector,
    v: &Value,
    path: &str,
    elem: &impl Fn(&Value, &str) -> Result<E>,
) -> Result<Vec<Matrix<E>>> {
    let obj = object(v, path)?;
    q.vertices()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let p = format!("{path}.{name}");
            match obj.get(name) {
                Some(m) => matrix_from_json(m, d[i], d[i], &p, elem),
                None if d[i] == 0 => Ok(Matrix::from_vec(0, 0, Vec::new())),
                None => Err(perr(path, format!("missing vertex {name:?}"))),
            }
        })
        .collect()
}

pub fn rep_to_json<F: JsonRing>(w: &Representation<F>) -> Value {
    let q = w.quiver();
    let f = w.field();
    json!({
        "quiver": quiver_to_json(q),
        "ring": f.ring_json(),
        "dims": dims_to_json(q, w.dims()),
        "matrices": Value::Object(q.arrows().iter().zip(w.maps()).map(|(a, m)| {
            (a.id.clone(), matrix_to_json(m, |x| f.elem_to_json(x)))
        }).collect()),
    })
}

pub fn drep_to_json(r: &DRep) -> Value {
    let q = &r.quiver;
    json!({
        "quiver": quiver_to_json(q),
        "ring": Ring::Quaternion(r.algebra.clone()).to_json(),
        "dims": dims_to_json(q, &r.dims),
        "matrices": Value::Object(q.arrows().iter().zip(&r.maps).map(|(a, m)| {
            (a.id.clone(), matrix_to_json(m, quat_to_json))
        }).collect()),
    })
}

pub fn witness_to_json<F: JsonRing>(f: &F, q: &Quiver, w: &SubrepWitness<F::Elem>) -> Value {
    json!({
        "dims": w.dims.0,
        "bases": Value::Object(q.vertices().iter().cloned().zip(
            w.bases.iter().map(|b| matrix_to_json(b, |x| f.elem_to_json(x)))
        ).collect()),
    })
}

/// The coefficient ring of a representation file.
#[derive(Clone, Debug, PartialEq)]
pub enum Ring {
    Rational,
    Finite(Fq),
    Quadratic(QuadField),
    Quaternion(QuaternionAlgebra),
}

impl Ring {
    pub fn to_json(&self) -> Value {
        match self {
            Ring::Rational => Rationals.ring_json(),
            Ring::Finite(f) => f.ring_json(),
            Ring::Quadratic(f) => f.ring_json(),
            Ring::Quaternion(alg) => {
                json!({"type": "quaternion", "a": rational_to_string(alg.a()), "b": rational_to_string(alg.b())})
            }
        }
    }
}

pub fn ring_from_json(v: &Value, path: &str) -> Result<Ring> {
    let ty = field(v, "type", path)?
        .as_str()
        .ok_or_else(|| perr(&format!("{path}.type"), "expected a string"))?;
    let small = |key: &str| -> Result<u32> {
        let p = format!("{path}.{key}");
        u32::try_from(int(field(v, key, path)?, &p)?).map_err(|_| perr(&p, "out of range"))
    };
    match ty {
        "rational" => Ok(Ring::Rational),
        "prime" => Ok(Ring::Finite(Fq::prime(small("p")?).map_err(|e| perr(path, e))?)),
        "finite" | "ext" => {
            let p = small("p")?;
            let f = match v.get("modulus") {
                Some(m) => {
                    let mp = format!("{path}.modulus");
                    let coeffs = array(m, &mp)?
                        .iter()
                        .enumerate()
                        .map(|(i, c)| Ok(int(c, &format!("{mp}[{i}]"))?.rem_euclid(p as i64) as u32))
                        .collect::<Result<Vec<_>>>()?;
                    Fq::with_modulus(p, coeffs)
                }
                None => Fq::new(p, if v.get("n").is_some() { small("n")? } else { 1 }),
            }
            .map_err(|e| perr(path, e))?;
            if v.get("n").is_some() && small("n")? != f.degree() {
                return Err(perr(path, "degree does not match the modulus"));
            }
            Ok(Ring::Finite(f))
        }
        "quadratic" => {
            let m = int(field(v, "m", path)?, &format!("{path}.m"))?;
            QuadField::new(m).map(Ring::Quadratic).map_err(|e| perr(path, e))
        }
        "quaternion" => {
            let a = rational(field(v, "a", path)?, &format!("{path}.a"))?;
            let b = rational(field(v, "b", path)?, &format!("{path}.b"))?;
            QuaternionAlgebra::new(a, b).map(Ring::Quaternion).map_err(|e| perr(path, e))
        }
        other => Err(perr(&format!("{path}.type"), format!("unknown ring {other:?}"))),
    }
}

/// A representation over any supported ring.
#[derive(Clone, Debug)]
pub enum AnyRep {
    Finite(Representation<Fq>),
    Rational(Representation<Rationals>),
    Quadratic(Representation<QuadField>),
    Quaternion(DRep),
}

impl AnyRep {
    pub fn to_json(&self) -> Value {
        match self {
            AnyRep::Finite(w) => rep_to_json(w),
            AnyRep::Rational(w) => rep_to_json(w),
            AnyRep::Quadratic(w) => rep_to_json(w),
            AnyRep::Quaternion(r) => drep_to_json(r),
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        match self {
            AnyRep::Finite(w) => w.quiver(),
            AnyRep::Rational(w) => w.quiver(),
            AnyRep::Quadratic(w) => w.quiver(),
            AnyRep::Quaternion(r) => &r.quiver,
        }
    }
}

fn typed_rep<F: JsonRing>(
    q: Arc<Quiver>,
    f: F,
    d: DimVector,
    v: &Value,
    path: &str,
) -> Result<Representation<F>> {
    let ms = matrices_from_json(&q, &d, v.get("matrices"), &format!("{path}.matrices"), &|x, p| {
        f.elem_from_json(x, p)
    })?;
    Representation::new(q, f, d, ms).map_err(|e| perr(path, e))
}

pub fn rep_from_value(v: &Value, path: &str) -> Result<AnyRep> {
    object(v, path)?;
    for k in object(v, path)?.keys() {
        if !["quiver", "ring", "dims", "matrices"].contains(&k.as_str()) {
            return Err(perr(path, format!("unknown field {k:?}")));
        }
    }
    let q = Arc::new(quiver_from_json(field(v, "quiver", path)?, &format!("{path}.quiver"))?);
    let ring = ring_from_json(field(v, "ring", path)?, &format!("{path}.ring"))?;
    let d = dims_from_json(&q, field(v, "dims", path)?, &format!("{path}.dims"))?;
    Ok(match ring {
        Ring::Rational => AnyRep::Rational(typed_rep(q, Rationals, d, v, path)?),
        Ring::Finite(f) => AnyRep::Finite(typed_rep(q, f, d, v, path)?),
        Ring::Quadratic(f) => AnyRep::Quadratic(typed_rep(q, f, d, v, path)?),
        Ring::Quaternion(alg) => {
            let ms = matrices_from_json(&q, &d, v.get("matrices"), &format!("{path}.matrices"), &quat_from_json)?;
            AnyRep::Quaternion(DRep::new(q, alg, d, ms).map_err(|e| perr(path, e))?)
        }
    })
}

pub fn parse_rep(text: &str) -> Result<AnyRep> {
    rep_from_value(&parse_json(text, "representation")?, "$")
}

/// Typed extraction helpers for callers that know the ring.
impl AnyRep {
    pub fn into_finite(self) -> Result<Representation<Fq>> {
        match self {
            AnyRep::Finite(w) => Ok(w),
            _ => Err(Error::Domain("expected a representation over a finite field".into())),
        }
    }
    pub fn into_rational(self) -> Result<Representation<Rationals>> {
        match self {
            AnyRep::Rational(w) => Ok(w),
            _ => Err(Error::Domain("expected a representation over Q".into())),
        }
    }
    pub fn into_quadratic(self) -> Result<Representation<QuadField>> {
        match self {
            AnyRep::Quadratic(w) => Ok(w),
            _ => Err(Error::Domain("expected a representation over a quadratic field".into())),
        }
    }
    pub fn into_drep(self) -> Result<DRep> {
        match self {
            AnyRep::Quaternion(r) => Ok(r),
            _ => Err(Error::Domain("expected a representation over a quaternion algebra".into())),
        }
    }
}

pub fn pair_to_json<P: GaloisPair>(pair: &P) -> Value {
    serde_json::to_value(pair.descriptor()).expect("descriptor serializes")
}

/// A finite pair from `{"type":"finite","p","base_modulus","ext_modulus"}` or
/// `{"type":"finite","p","base_degree","degree"}`.
pub fn finite_pair_from_json(v: &Value, path: &str) -> Result<FiniteGaloisPair> {
    if v.get("base_modulus").is_some() {
        let d: PairDescriptor = serde_json::from_value(v.clone()).map_err(|e| perr(path, e))?;
        return match d {
            PairDescriptor::Finite { p, base_modulus, ext_modulus } => FiniteGaloisPair::new(
                Fq::with_modulus(p, base_modulus).map_err(|e| perr(path, e))?,
                Fq::with_modulus(p, ext_modulus).map_err(|e| perr(path, e))?,
            ),
            PairDescriptor::Quadratic { .. } => Err(perr(path, "expected a finite pair")),
        };
    }
    let get = |k: &str| -> Result<u32> {
        let p = format!("{path}.{k}");
        u32::try_from(int(field(v, k, path)?, &p)?).map_err(|_| perr(&p, "out of range"))
    };
    let base_degree = if v.get("base_degree").is_some() { get("base_degree")? } else { 1 };
    FiniteGaloisPair::standard(get("p")?, base_degree, get("degree")?).map_err(|e| perr(path, e))
}

/// Descent data and twisted representations over a supported pair.
#[derive(Clone, Debug)]
pub enum AnyTwisted {
    Finite(TwistedRep<FiniteGaloisPair>),
    Quadratic(TwistedRep<QuadraticPair>),
}

fn typed_twisted<P>(pair: P, v: &Value, path: &str, lambda_required: bool) -> Result<TwistedRep<P>>
where
    P: GaloisPair,
    P::Ext: JsonRing,
    P::Base: JsonRing,
{
    let rp = format!("{path}.rep");
    let rep_v = field(v, "rep", path)?;
    let q = Arc::new(quiver_from_json(field(rep_v, "quiver", &rp)?, &format!("{rp}.quiver"))?);
    let d = dims_from_json(&q, field(rep_v, "dims", &rp)?, &format!("{rp}.dims"))?;
    // the ring of the file must be the extension field of the pair
    if let Some(r) = rep_v.get("ring") {
        let declared = ring_from_json(r, &format!("{rp}.ring"))?.to_json();
        if declared != pair.ext().ring_json() {
            return Err(perr(&format!("{rp}.ring"), "ring does not match the extension field of the pair"));
        }
    }
    let l = pair.ext().clone();
    let rep = typed_rep(q.clone(), l.clone(), d.clone(), rep_v, &rp)?;
    let u = vertex_matrices_from_json(&q, &d, field(v, "u", path)?, &format!("{path}.u"), &|x, p| {
        l.elem_from_json(x, p)
    })?;
    let lambda = match v.get("lambda") {
        Some(x) => pair.base().elem_from_json(x, &format!("{path}.lambda"))?,
        None if !lambda_required => {
            crate::descent::cocycle_scalar(&pair, &u).ok_or_else(|| {
                perr(path, "u sigma(u) ... is not a scalar; lambda cannot be inferred")
            })?
        }
        None => return Err(perr(path, "missing field \"lambda\"")),
    };
    let index = match v.get("index") {
        Some(x) => u32::try_from(int(x, &format!("{path}.index"))?)
            .map_err(|_| perr(&format!("{path}.index"), "out of range"))?,
        None => 1,
    };
    Ok(TwistedRep { pair, rep, u, lambda, index })
}

fn twisted_from_value(v: &Value, path: &str, lambda_required: bool) -> Result<AnyTwisted> {
    object(v, path)?;
    let pp = format!("{path}.pair");
    let pv = field(v, "pair", path)?;
    let ty = field(pv, "type", &pp)?.as_str().unwrap_or_default();
    match ty {
        "finite" => Ok(AnyTwisted::Finite(typed_twisted(finite_pair_from_json(pv, &pp)?, v, path, lambda_required)?)),
        "quadratic" => {
            let m = int(field(pv, "m", &pp)?, &format!("{pp}.m"))?;
            let pair = QuadraticPair::new(m).map_err(|e| perr(&pp, e))?;
            Ok(AnyTwisted::Quadratic(typed_twisted(pair, v, path, lambda_required)?))
        }
        other => Err(perr(&format!("{pp}.type"), format!("unknown pair type {other:?}"))),
    }
}

/// A twisted representation; `lambda` and `index` are taken as declared and
/// checked later by validation.
pub fn parse_twisted(text: &str) -> Result<AnyTwisted> {
    twisted_from_value(&parse_json(text, "twisted representation")?, "$", true)
}

/// A descent datum; lambda may be omitted and is then computed, and the
/// defining identities are checked.
pub fn parse_datum(text: &str) -> Result<AnyTwisted> {
    let t = twisted_from_value(&parse_json(text, "descent datum")?, "$", false)?;
    fn check<P: GaloisPair>(t: &TwistedRep<P>) -> Result<()> {
        if t.datum().verify() {
            Ok(())
        } else {
            Err(Error::Argument("u does not satisfy u . sigma(W) = W with the cyclic product equal to lambda".into()))
        }
    }
    match &t {
        AnyTwisted::Finite(x) => check(x)?,
        AnyTwisted::Quadratic(x) => check(x)?,
    }
    Ok(t)
}

pub fn datum_to_json<P>(d: &DescentDatum<P>) -> Value
where
    P: GaloisPair,
    P::Ext: JsonRing,
    P::Base: JsonRing,
{
    let l = d.pair.ext();
    json!({
        "rep": rep_to_json(&d.rep),
        "u": vertex_matrices_to_json(d.rep.quiver(), &d.u, |x| l.elem_to_json(x)),
        "lambda": d.pair.base().elem_to_json(&d.lambda),
        "pair": pair_to_json(&d.pair),
    })
}

pub fn twisted_to_json<P>(t: &TwistedRep<P>) -> Value
where
    P: GaloisPair,
    P::Ext: JsonRing,
    P::Base: JsonRing,
{
    let mut v = datum_to_json(&t.datum());
    v["index"] = json!(t.index);
    v
}

impl AnyTwisted {
    pub fn to_json(&self) -> Value {
        match self {
            AnyTwisted::Finite(t) => twisted_to_json(t),
            AnyTwisted::Quadratic(t) => twisted_to_json(t),
        }
    }
}

pub fn bigint_json(x: &BigInt) -> Value {
    json!(x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const KRONECKER_F2: &str = r#"{
        "quiver": {"vertices": ["1", "2"], "arrows": [{"id": "a", "from": "1", "to": "2"}, {"id": "b", "from": "1", "to": "2"}]},
        "ring": {"type": "prime", "p": 2},
        "dims": {"1": 1, "2": 1},
        "matrices": {"a": [[1]], "b": [[0]]}
    }"#;

    #[test]
    fn finite_round_trip() {
        let r = parse_rep(KRONECKER_F2).unwrap();
        let w = r.clone().into_finite().unwrap();
        assert_eq!(w.maps()[0].get(0, 0), &1);
        let again = rep_from_value(&r.to_json(), "$").unwrap().into_finite().unwrap();
        assert_eq!(again, w);
    }

    #[test]
    fn extension_field_elements() {
        let text = r#"{
            "quiver": {"vertices": [1], "arrows": [{"id": "x", "from": 1, "to": 1}]},
            "ring": {"type": "finite", "p": 2, "n": 2},
            "dims": {"1": 1},
            "matrices": {"x": [[[0, 1]]]}
        }"#;
        let w = parse_rep(text).unwrap().into_finite().unwrap();
        assert_eq!(w.maps()[0].get(0, 0), &2);
    }

    #[test]
    fn quadratic_and_quaternion() {
        let text = r#"{
            "quiver": {"vertices": ["1", "2"], "arrows": [{"id": "a", "from": "1", "to": "2"}]},
            "ring": {"type": "quadratic", "m": -1},
            "dims": {"1": 1, "2": 1},
            "matrices": {"a": [[["1/2", -3]]]}
        }"#;
        let w = parse_rep(text).unwrap().into_quadratic().unwrap();
        assert_eq!(w.maps()[0].get(0, 0), &QuadElem::new(parse_rational("1/2").unwrap(), parse_rational("-3").unwrap()));
        let h = parse_rep(&text.replace(r#"{"type": "quadratic", "m": -1}"#, r#"{"type": "quaternion", "a": -1, "b": -1}"#)
            .replace(r#"["1/2", -3]"#, "[0, 1, 0, 0]"))
        .unwrap()
        .into_drep()
        .unwrap();
        assert_eq!(h.maps[0].get(0, 0), &Quat::from_ints([0, 1, 0, 0]));
        let back = rep_from_value(&drep_to_json(&h), "$").unwrap().into_drep().unwrap();
        assert_eq!(back.maps, h.maps);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = KRONECKER_F2.replace(r#""b": [[0]]"#, r#""b": [[0, 1]]"#);
        match parse_rep(&bad) {
            Err(Error::Parse(m)) => assert!(m.contains("$.matrices.b[0]"), "{m}"),
            other => panic!("{other:?}"),
        }
        match parse_rep("{\n  \"quiver\": ") {
            Err(Error::Parse(m)) => assert!(m.contains("line 2"), "{m}"),
            other => panic!("{other:?}"),
        }
        let missing = KRONECKER_F2.replace(r#", "2": 1}"#, "}");
        assert!(matches!(parse_rep(&missing), Err(Error::Parse(m)) if m.contains("missing vertex")));
        let unknown = KRONECKER_F2.replace(r#""type": "prime""#, r#""type": "octonion""#);
        assert!(matches!(parse_rep(&unknown), Err(Error::Parse(_))));
    }

    #[test]
    fn empty_matrices_may_be_omitted() {
        let text = r#"{
            "quiver": {"vertices": ["1", "2"], "arrows": [{"id": "a", "from": "1", "to": "2"}]},
            "ring": {"type": "rational"},
            "dims": {"1": 1, "2": 0}
        }"#;
        let w = parse_rep(text).unwrap().into_rational().unwrap();
        assert_eq!(w.maps()[0].shape(), (0, 1));
    }

    #[test]
    fn datum_round_trip() {
        let pair = FiniteGaloisPair::standard(2, 1, 2).unwrap();
        let l = pair.ext().clone();
        let w = Representation::new(Quiver::jordan(), l.clone(), DimVector(vec![1]), vec![Matrix::from_vec(1, 1, vec![1])]).unwrap();
        let d = DescentDatum::new(pair, w, vec![Matrix::from_vec(1, 1, vec![1])]).unwrap();
        let text = to_pretty(&datum_to_json(&d));
        match parse_datum(&text).unwrap() {
            AnyTwisted::Finite(t) => {
                assert_eq!(t.rep, d.rep);
                assert_eq!(t.lambda, d.lambda);
            }
            other => panic!("{other:?}"),
        }
        let by_degree = text.replace("\"type\": \"finite\"", "\"type\": \"finite\", \"degree\": 2");
        assert!(parse_datum(&by_degree).is_ok());
    }
}
