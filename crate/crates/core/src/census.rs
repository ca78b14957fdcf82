//! Finite-field censuses: geometrically stable orbit counts, descent
//! verification over F_q ⊂ F_{q^n}, and classification records of rational
//! points by Brauer type.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::ntheory::factor;
use crate::arith::{BrauerClass, FiniteGaloisPair, Field, Fq, GaloisPair, QuadElem, QuadField, QuadraticPair, Rationals};
use crate::config::JobConfig;
use crate::descent::{division_form, hilbert90_descend, solve_modifying_u, type_map};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::quiver::certificate::geom_stability_certificate;
use crate::quiver::hom::is_isomorphic;
use crate::quiver::stability::{is_geometrically_stable, stability_verdict, Verdict};
use crate::quiver::{DimVector, Quiver, Representation};
use crate::twisted::{morita_split, twisted_dim, DRep, TwistedRep};

/// The field with q elements, q a prime power.
pub fn field_of_order(q: u64) -> Result<Fq> {
    let f = factor(q);
    if f.len() != 1 {
        return Err(Error::Argument(format!("{q} is not a prime power")));
    }
    let (&p, &n) = f.iter().next().expect("one prime");
    let p = u32::try_from(p).map_err(|_| Error::Argument(format!("characteristic of {q} too large")))?;
    Fq::new(p, n)
}

/// |GL_d(F_q)| = prod_{i<d} (q^d - q^i).
pub fn gl_order(d: usize, q: u64) -> u128 {
    let q = q as u128;
    (0..d).fold(1u128, |acc, i| {
        acc.saturating_mul(q.saturating_pow(d as u32).saturating_sub(q.saturating_pow(i as u32)))
    })
}

/// Rep_{Q,d}(F_q), with points encoded as base-q integers (arrow order,
/// row-major, least significant digit first).
#[derive(Clone, Debug)]
pub struct RepSpace {
    quiver: Arc<Quiver>,
    field: Fq,
    dims: DimVector,
    shapes: Vec<(usize, usize)>,
    q: u64,
    size: u64,
}

impl RepSpace {
    pub fn new(quiver: Arc<Quiver>, field: Fq, dims: DimVector, limit: u64) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::Argument("dimension vector does not match the quiver".into()));
        }
        let shapes: Vec<(usize, usize)> =
            quiver.arrows().iter().map(|a| (dims[a.head], dims[a.tail])).collect();
        let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let q = field.size() as u64;
        let size = (q as u128).checked_pow(entries as u32).unwrap_or(u128::MAX);
        if size > limit as u128 {
            return Err(Error::Budget {
                what: format!("enumeration of Rep_{{Q,{dims}}}(F_{q})"),
                required: size,
                limit: limit as u128,
            });
        }
        Ok(RepSpace { quiver, field, dims, shapes, q, size: size as u64 })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn decode(&self, mut code: u64) -> Vec<Matrix<u32>> {
        self.shapes
            .iter()
            .map(|&(r, c)| {
                let data = (0..r * c)
                    .map(|_| {
                        let x = (code % self.q) as u32;
                        code /= self.q;
                        x
                    })
                    .collect();
                Matrix::from_vec(r, c, data)
            })
            .collect()
    }

    pub fn encode(&self, maps: &[Matrix<u32>]) -> u64 {
        let mut code = 0u64;
        let mut place = 1u64;
        for m in maps {
            for &x in m.data() {
                code += x as u64 * place;
                place = place.wrapping_mul(self.q);
            }
        }
        code
    }

    pub fn rep(&self, code: u64) -> Representation<Fq> {
        Representation::new(self.quiver.clone(), self.field.clone(), self.dims.clone(), self.decode(code))
            .expect("shapes come from the space")
    }

    /// Generators of prod GL_{d_v}(F_q): diag(g, 1, ..., 1) for a primitive
    /// g, and transvections I + c e_ij with c running over an F_p-basis of F_q.
    fn generators(&self) -> Vec<Generator> {
        let f = &self.field;
        let g = f.primitive_element();
        let mut basis = vec![f.one()];
        for _ in 1..f.degree() {
            let next = f.mul(basis.last().expect("nonempty"), &g);
            basis.push(next);
        }
        let mut gens = Vec::new();
        for (v, &d) in self.dims.0.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let mut m = Matrix::identity(f, d);
            m.set(0, 0, g);
            gens.push(Generator::new(f, v, m));
            for i in 0..d {
                for j in 0..d {
                    if i == j {
                        continue;
                    }
                    for c in &basis {
                        let mut t = Matrix::identity(f, d);
                        t.set(i, j, *c);
                        gens.push(Generator::new(f, v, t));
                    }
                }
            }
        }
        gens
    }

    fn apply(&self, gen: &Generator, code: u64) -> u64 {
        let f = &self.field;
        let mut maps = self.decode(code);
        for (a, m) in self.quiver.arrows().iter().zip(maps.iter_mut()) {
            if a.head == gen.vertex {
                *m = linalg::mul(f, &gen.g, m);
            }
            if a.tail == gen.vertex {
                *m = linalg::mul(f, m, &gen.inv);
            }
        }
        self.encode(&maps)
    }

    pub fn group_order(&self) -> u128 {
        self.dims.0.iter().fold(1u128, |acc, &d| acc.saturating_mul(gl_order(d, self.q)))
    }
}

#[derive(Clone, Debug)]
struct Generator {
    vertex: usize,
    g: Matrix<u32>,
    inv: Matrix<u32>,
}

impl Generator {
    fn new(f: &Fq, vertex: usize, g: Matrix<u32>) -> Self {
        let inv = linalg::inverse(f, &g).expect("generators are invertible");
        Generator { vertex, g, inv }
    }
}

/// Orbits of a G-stable set of points. `canonical` maps every point to the
/// minimal code in its orbit.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub canonical: HashMap<u64, u64>,
    pub representatives: Vec<u64>,
}

/// Canonical forms by breadth-first traversal of the generators; each orbit
/// is traversed once and memoized.
pub fn orbits_by_canonical_form(space: &RepSpace, points: &[u64]) -> Result<OrbitPartition> {
    let gens = space.generators();
    let mut canonical: HashMap<u64, u64> = HashMap::with_capacity(points.len());
    let mut reps = Vec::new();
    for &p in points {
        if canonical.contains_key(&p) {
            continue;
        }
        let mut orbit = vec![p];
        let mut seen = std::collections::HashSet::from([p]);
        let mut queue = VecDeque::from([p]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = space.apply(g, x);
                if seen.insert(y) {
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        let min = *orbit.iter().min().expect("nonempty");
        for x in orbit {
            canonical.insert(x, min);
        }
        reps.push(min);
    }
    if canonical.len() != points.len() {
        return Err(Error::Invariant("point set is not stable under the group".into()));
    }
    reps.sort_unstable();
    Ok(OrbitPartition { canonical, representatives: reps })
}

/// Orbit count by union-find over the edges x -- g.x of the action graph.
pub fn orbit_count_union_find(space: &RepSpace, points: &[u64]) -> Result<usize> {
    let gens = space.generators();
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    let mut parent: Vec<usize> = (0..sorted.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..sorted.len() {
        for g in &gens {
            let y = space.apply(g, sorted[i]);
            let j = sorted
                .binary_search(&y)
                .map_err(|_| Error::Invariant("point set is not stable under the group".into()))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    Ok((0..sorted.len()).filter(|&i| find(&mut parent, i) == i).count())
}

/// The support of d is disconnected, or is one vertex with d_v >= 2 and at
/// most one loop. Either way there are no geometrically stable points: a
/// disconnected support makes every point decomposable, and a single
/// endomorphism of a space of dimension >= 2 has an eigenvector over the
/// algebraic closure, spanning a subrepresentation of the same slope.
pub fn vanishing_reason(quiver: &Quiver, d: &DimVector) -> Option<String> {
    let support: Vec<usize> = (0..d.len()).filter(|&v| d[v] > 0).collect();
    if support.is_empty() {
        return Some("zero dimension vector".into());
    }
    // connected components of the support
    let mut comp: Vec<usize> = (0..d.len()).collect();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            x = c[x];
        }
        x
    }
    for a in quiver.arrows() {
        if d[a.head] > 0 && d[a.tail] > 0 {
            let (x, y) = (root(&mut comp, a.head), root(&mut comp, a.tail));
            comp[x] = y;
        }
    }
    let roots: std::collections::BTreeSet<usize> =
        support.iter().map(|&v| root(&mut comp, v)).collect();
    if roots.len() > 1 {
        return Some("support is disconnected, so every point decomposes".into());
    }
    if support.len() == 1 {
        let v = support[0];
        let loops = quiver.arrows().iter().filter(|a| a.head == v && a.tail == v).count();
        if d[v] >= 2 && loops <= 1 {
            return Some("single vertex with at most one loop: an eigenvector spans a subrepresentation of equal slope".into());
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCount {
    pub quiver: String,
    pub dims: DimVector,
    pub theta: Vec<i64>,
    pub q: u64,
    pub geom_stable_orbits: u64,
    /// Stable over F_q but with End larger than F_q.
    pub stable_not_geom_orbits: Option<u64>,
    pub geom_stable_points: Option<u64>,
    pub method: String,
}

fn classify_points(
    space: &RepSpace,
    theta: &[i64],
    budget: u128,
) -> Result<(Vec<u64>, Vec<u64>)> {
    let results: Vec<Result<Option<(u64, bool)>>> = (0..space.size())
        .into_par_iter()
        .map(|code| {
            let w = space.rep(code);
            let v = stability_verdict(&w, theta, budget)?;
            if v.verdict != Verdict::Stable {
                return Ok(None);
            }
            Ok(Some((code, crate::quiver::end_dim(&w)? == 1)))
        })
        .collect();
    let mut geom = Vec::new();
    let mut other = Vec::new();
    for r in results {
        if let Some((code, g)) = r? {
            if g {
                geom.push(code);
            } else {
                other.push(code);
            }
        }
    }
    Ok((geom, other))
}

/// Counts geometrically stable orbits in Rep_{Q,d}(F_q) by enumeration,
/// with two independent orbit counts and a Burnside cross-check. Over
/// budget, a vanishing criterion may still decide the count.
pub fn count_geom_stable_orbits(
    quiver: &Arc<Quiver>,
    d: &DimVector,
    theta: &[i64],
    q: u64,
    config: &JobConfig,
) -> Result<OrbitCount> {
    let field = field_of_order(q)?;
    let base = OrbitCount {
        quiver: quiver.fingerprint(),
        dims: d.clone(),
        theta: theta.to_vec(),
        q,
        geom_stable_orbits: 0,
        stable_not_geom_orbits: None,
        geom_stable_points: None,
        method: String::new(),
    };
    if d.is_zero() {
        return Ok(OrbitCount { method: "zero dimension vector".into(), ..base });
    }
    let space = match RepSpace::new(quiver.clone(), field, d.clone(), config.max_orbit_space) {
        Ok(s) => s,
        Err(e @ Error::Budget { .. }) => {
            return match vanishing_reason(quiver, d) {
                Some(why) => Ok(OrbitCount { method: format!("vanishing: {why}"), ..base }),
                None => Err(e),
            };
        }
        Err(e) => return Err(e),
    };
    let (geom, other) = classify_points(&space, theta, config.max_subspace_checks)?;
    let part = orbits_by_canonical_form(&space, &geom)?;
    let uf = orbit_count_union_find(&space, &geom)?;
    if uf != part.representatives.len() {
        return Err(Error::Invariant(format!(
            "orbit counts disagree: canonical forms {}, union-find {uf}",
            part.representatives.len()
        )));
    }
    // stabilizers of geometrically stable points are the scalars
    let burnside = geom.len() as u128 * (q as u128 - 1);
    let g = space.group_order();
    if !burnside.is_multiple_of(g) || burnside / g != uf as u128 {
        return Err(Error::Invariant(format!(
            "Burnside check failed: {} points, |G| = {g}, {uf} orbits",
            geom.len()
        )));
    }
    let other_orbits = orbit_count_union_find(&space, &other)?;
    Ok(OrbitCount {
        geom_stable_orbits: uf as u64,
        stable_not_geom_orbits: Some(other_orbits as u64),
        geom_stable_points: Some(geom.len() as u64),
        method: "enumeration; canonical forms, union-find and Burnside agree".into(),
        ..base
    })
}

/// Minimal-degree polynomial through (q, count) data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialFit {
    pub points: Vec<(u64, u64)>,
    pub degree: usize,
    /// Coefficients from the constant term up, as "p/q" strings.
    pub coefficients: Vec<String>,
    pub integral: bool,
    /// Value minus fit at every point of the minimal fit.
    pub residuals: Vec<String>,
    pub display: String,
}

fn interpolate(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    // Newton form, expanded to monomial coefficients
    let n = points.len();
    let mut coef: Vec<BigRational> = points.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&points[i].0 - &points[i - j].0);
        }
    }
    let mut poly = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (x - x_i) + coef[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if k + 1 < n {
                next[k + 1] = &next[k + 1] + &poly[k];
            }
            next[k] = &next[k] - &poly[k] * &points[i].0;
        }
        next[0] = &next[0] + &coef[i];
        poly = next;
    }
    while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    poly
}

fn eval(poly: &[BigRational], x: &BigRational) -> BigRational {
    poly.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Fits the smallest-degree polynomial through the counts; residuals and
/// integrality are reported, not enforced.
pub fn fit_polynomial(points: &[(u64, u64)]) -> PolynomialFit {
    let pts: Vec<(BigRational, BigRational)> = points
        .iter()
        .map(|&(q, c)| (BigRational::from_integer(q.into()), BigRational::from_integer(c.into())))
        .collect();
    let mut chosen = Vec::new();
    for deg in 0..pts.len() {
        let poly = interpolate(&pts[..=deg]);
        if pts.iter().all(|(x, y)| eval(&poly, x) == *y) {
            chosen = poly;
            break;
        }
    }
    if pts.is_empty() {
        chosen = vec![BigRational::zero()];
    }
    let residuals = pts
        .iter()
        .map(|(x, y)| crate::arith::rational_to_string(&(y - eval(&chosen, x))))
        .collect();
    let integral = chosen.iter().all(|c| c.is_integer());
    let mut terms = Vec::new();
    for (k, c) in chosen.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = crate::arith::rational_to_string(c);
        terms.push(match k {
            0 => cs,
            1 if c.is_one() => "q".to_string(),
            1 => format!("{cs}q"),
            _ if c.is_one() => format!("q^{k}"),
            _ => format!("{cs}q^{k}"),
        });
    }
    let display = if terms.is_empty() { "0".into() } else { terms.join(" + ").replace("+ -", "- ") };
    PolynomialFit {
        points: points.to_vec(),
        degree: chosen.len().saturating_sub(1),
        coefficients: chosen.iter().map(crate::arith::rational_to_string).collect(),
        integral,
        residuals,
        display,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusPolynomiality {
    pub counts: Vec<OrbitCount>,
    pub fit: PolynomialFit,
}

pub fn census_polynomiality(
    quiver: &Arc<Quiver>,
    d: &DimVector,
    theta: &[i64],
    qs: &[u64],
    config: &JobConfig,
) -> Result<CensusPolynomiality> {
    let counts = qs
        .iter()
        .map(|&q| count_geom_stable_orbits(quiver, d, theta, q, config))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_polynomial(&counts.iter().map(|c| (c.q, c.geom_stable_orbits)).collect::<Vec<_>>());
    Ok(CensusPolynomiality { counts, fit })
}

/// How a classification record's form is presented.
#[derive(Clone, Debug)]
pub enum RecordForm {
    Finite(Representation<Fq>),
    Rational(Representation<Rationals>),
    Quaternionic { drep: DRep, twisted_dims: DimVector },
}

/// The decomposition of one rational point by Brauer type.
#[derive(Clone, Debug)]
pub struct ClassificationRecord {
    pub dims: DimVector,
    pub class: BrauerClass,
    pub lambda: String,
    pub form: RecordForm,
    /// The form, carried back to L, is isomorphic to the input.
    pub round_trip: bool,
}

impl ClassificationRecord {
    pub fn index(&self) -> u32 {
        self.class.index()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentCensusReport {
    pub quiver: String,
    pub dims: DimVector,
    pub theta: Vec<i64>,
    pub q: u64,
    pub n: u32,
    pub orbits_over_extension: u64,
    pub fixed_orbits: u64,
    pub base_count: u64,
    pub descended: u64,
    pub method: String,
    pub violations: Vec<String>,
}

impl DescentCensusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive descent check over F_q ⊂ F_{q^n}: every Frobenius-fixed
/// geometrically stable orbit descends, forms from distinct orbits are
/// non-isomorphic over F_q, forms from one orbit are isomorphic, and the
/// number of fixed orbits equals the count over F_q.
pub fn verify_descent_census(
    quiver: &Arc<Quiver>,
    d: &DimVector,
    theta: &[i64],
    q: u64,
    n: u32,
    config: &JobConfig,
) -> Result<(DescentCensusReport, Vec<ClassificationRecord>)> {
    let k = field_of_order(q)?;
    let pair = FiniteGaloisPair::standard(k.characteristic(), k.degree(), n)?;
    let (base, ext) = (pair.base().clone(), pair.ext().clone());
    let base_count = count_geom_stable_orbits(quiver, d, theta, q, config)?;
    let mut report = DescentCensusReport {
        quiver: quiver.fingerprint(),
        dims: d.clone(),
        theta: theta.to_vec(),
        q,
        n,
        orbits_over_extension: 0,
        fixed_orbits: 0,
        base_count: base_count.geom_stable_orbits,
        descended: 0,
        method: String::new(),
        violations: Vec::new(),
    };
    let mut records = Vec::new();
    if d.is_zero() {
        report.method = "zero dimension vector".into();
        return Ok((report, records));
    }
    let space = match RepSpace::new(quiver.clone(), ext.clone(), d.clone(), config.max_orbit_space) {
        Ok(s) => s,
        Err(e @ Error::Budget { .. }) => {
            return match vanishing_reason(quiver, d) {
                Some(why) => {
                    report.method = format!("vanishing: {why}");
                    if report.base_count != 0 {
                        report.violations.push("vanishing criterion contradicts the base count".into());
                    }
                    Ok((report, records))
                }
                None => Err(e),
            };
        }
        Err(e) => return Err(e),
    };
    report.method = "enumeration".into();
    let (geom, _) = classify_points(&space, theta, config.max_subspace_checks)?;
    let part = orbits_by_canonical_form(&space, &geom)?;
    report.orbits_over_extension = part.representatives.len() as u64;
    let search = config.iso_search();

    // the base space is no larger than the extension space
    let base_space = RepSpace::new(quiver.clone(), base.clone(), d.clone(), u64::MAX)?;
    let (base_geom, _) = classify_points(&base_space, theta, config.max_subspace_checks)?;
    let base_part = orbits_by_canonical_form(&base_space, &base_geom)?;

    let mut forms: Vec<(u64, Representation<Fq>)> = Vec::new();
    for &rep_code in &part.representatives {
        let w = space.rep(rep_code);
        // independent fixedness test: sigma(W) lies in the same orbit
        let sigma_code = space.encode(crate::descent::twist(&pair, &w, 1).maps());
        let fixed_by_orbit = part.canonical.get(&sigma_code) == Some(&rep_code);
        let datum = solve_modifying_u(&pair, &w, &search)?;
        if fixed_by_orbit != datum.is_some() {
            report.violations.push(format!(
                "orbit {rep_code}: canonical forms and the Hom solve disagree on Frobenius-fixedness"
            ));
            continue;
        }
        let Some(datum) = datum else { continue };
        report.fixed_orbits += 1;
        let class = datum.class()?;
        let descent = match hilbert90_descend(&datum, config.seed ^ rep_code, config.descent_attempts) {
            Ok(x) => x,
            Err(e) => {
                report.violations.push(format!("orbit {rep_code}: descent failed: {e}"));
                continue;
            }
        };
        let back = descent.form.base_change(&pair);
        let round_trip = is_isomorphic(&back, &w, &search)?.is_some();
        if !round_trip {
            report.violations.push(format!("orbit {rep_code}: form is not isomorphic over L"));
        }
        if !is_geometrically_stable(&descent.form, theta, config.max_subspace_checks)? {
            report.violations.push(format!("orbit {rep_code}: form is not geometrically stable"));
        }
        // a second descent with another seed must give an F_q-isomorphic form
        let again = hilbert90_descend(&datum, config.seed.wrapping_add(1) ^ rep_code.rotate_left(17), config.descent_attempts)?;
        if is_isomorphic(&again.form, &descent.form, &search)?.is_none() {
            report.violations.push(format!("orbit {rep_code}: two forms of one orbit are not isomorphic over F_q"));
        }
        report.descended += 1;
        let form_code = base_space.encode(descent.form.maps());
        forms.push((form_code, descent.form.clone()));
        records.push(ClassificationRecord {
            dims: d.clone(),
            class,
            lambda: base.display(&datum.lambda),
            form: RecordForm::Finite(descent.form),
            round_trip,
        });
    }
    // distinct orbits give non-isomorphic forms
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            if is_isomorphic(&forms[i].1, &forms[j].1, &search)?.is_some() {
                report.violations.push(format!("forms {i} and {j} from distinct orbits are isomorphic over F_q"));
            }
        }
    }
    // the forms hit every F_q-orbit exactly once
    let mut hit: BTreeMap<u64, usize> = BTreeMap::new();
    for (code, _) in &forms {
        match base_part.canonical.get(code) {
            Some(c) => *hit.entry(*c).or_default() += 1,
            None => report.violations.push(format!("form {code} is not a geometrically stable F_q-point")),
        }
    }
    if hit.len() != base_part.representatives.len() || hit.values().any(|&k| k != 1) {
        report.violations.push(format!(
            "forms cover {} of {} F_q-orbits",
            hit.len(),
            base_part.representatives.len()
        ));
    }
    if report.fixed_orbits != report.base_count {
        report.violations.push(format!(
            "{} fixed orbits over F_{} but {} orbits over F_{q}",
            report.fixed_orbits,
            q.pow(n),
            report.base_count
        ));
    }
    Ok((report, records))
}

/// Classifies a Galois-fixed, certified geometrically stable point over
/// Q(sqrt(m)) by its Brauer type, attaching a Q-form or a quaternionic form.
pub fn decompose_rational_point(
    pair: &QuadraticPair,
    w: &Representation<QuadField>,
    theta: &[i64],
    config: &JobConfig,
) -> Result<ClassificationRecord> {
    let cert = geom_stability_certificate(w, theta, &config.primes, config.max_subspace_checks)?;
    if cert.verdict.verdict != Verdict::Stable {
        return Err(Error::Argument(format!(
            "geometric stability is not certified (verdict {})",
            cert.verdict.verdict
        )));
    }
    let search = config.iso_search();
    let t = type_map(pair, w, &search)?;
    let lambda = crate::arith::rational_to_string(&t.datum.lambda);
    if t.class.is_trivial() {
        let descent = hilbert90_descend(&t.datum, config.seed, config.descent_attempts)?;
        let round_trip = is_isomorphic(&descent.form.base_change(pair), w, &search)?.is_some();
        return Ok(ClassificationRecord {
            dims: w.dims().clone(),
            class: t.class,
            lambda,
            form: RecordForm::Rational(descent.form),
            round_trip,
        });
    }
    if !w.dims().divisible_by(t.class.index() as usize) {
        return Err(Error::Invariant(format!(
            "class of index {} on dimension vector {}",
            t.class.index(),
            w.dims()
        )));
    }
    let form = division_form(&t.datum, config.seed, config.descent_attempts)?;
    let split = morita_split(&form.drep, pair)?;
    let round_trip = is_isomorphic(&split, w, &search)?.is_some();
    let twisted = TwistedRep::from_datum(&t.datum, t.class.index());
    Ok(ClassificationRecord {
        dims: w.dims().clone(),
        class: t.class,
        lambda,
        form: RecordForm::Quaternionic { twisted_dims: twisted_dim(&twisted)?, drep: form.drep },
        round_trip,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub records: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks ind(class) | d_v for every record.
pub fn index_divisibility_audit(records: &[(DimVector, u32)]) -> AuditReport {
    let violations = records
        .iter()
        .enumerate()
        .filter(|(_, (d, e))| !d.divisible_by(*e as usize))
        .map(|(i, (d, e))| format!("record {i}: index {e} does not divide {d}"))
        .collect();
    AuditReport { records: records.len(), violations }
}

/// Audit input from classification records.
pub fn audit_entries(records: &[ClassificationRecord]) -> Vec<(DimVector, u32)> {
    records.iter().map(|r| (r.dims.clone(), r.index())).collect()
}

/// Convenience used by the quaternionic examples: the element a + b i.
pub fn gaussian(l: &QuadField, a: i64, b: i64) -> QuadElem {
    l.from_ints(a, b)
}
