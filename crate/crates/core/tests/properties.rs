//! Randomized invariants across the arithmetic, stability, descent and
//! census layers.

mod common;

use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quiver_forms::arith::hilbert::candidate_places;
use quiver_forms::arith::{
    hilbert_symbol, quat_is_division, FiniteGaloisPair, Field, Fq, GaloisPair, Quat, QuadField,
    QuadraticPair, QuaternionAlgebra,
};
use quiver_forms::census::{orbit_count_union_find, orbits_by_canonical_form, RepSpace};
use quiver_forms::config::JobConfig;
use quiver_forms::descent::{division_form, hilbert90_descend, solve_modifying_u, twist, type_map};
use quiver_forms::io;
use quiver_forms::linalg::{self, Matrix};
use quiver_forms::quiver::stability::{is_geometrically_stable, Verdict};
use quiver_forms::quiver::{
    enumerate_subreps, hn_filtration, hom_space, is_isomorphic, scss, slope, stability_verdict,
    DimVector, Quiver, Representation,
};
use quiver_forms::twisted::{
    drep_to_twisted, morita_split, morita_unsplit, split_quat, twisted_dim, validate_twisted, DRep,
    TwistedRep,
};

use common::*;

const BUDGET: u128 = 1_000_000;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn random_rep(quiver: std::sync::Arc<Quiver>, f: &Fq, dims: &[usize], rng: &mut ChaCha8Rng) -> Representation<Fq> {
    let maps = quiver
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.head], dims[a.tail]);
            Matrix::from_vec(r, c, (0..r * c).map(|_| f.random(rng)).collect())
        })
        .collect();
    Representation::new(quiver, f.clone(), DimVector(dims.to_vec()), maps).unwrap()
}

fn random_gauge<F: Field>(f: &F, dims: &DimVector, rng: &mut ChaCha8Rng) -> Vec<Matrix<F::Elem>> {
    dims.0
        .iter()
        .map(|&d| loop {
            let m = Matrix::from_vec(d, d, (0..d * d).map(|_| f.random(rng)).collect());
            if linalg::is_invertible(f, &m) {
                break m;
            }
        })
        .collect()
}

/// A random small K2 or K3 representation over F_2 or F_3.
fn small_rep(rng: &mut ChaCha8Rng) -> (Representation<Fq>, Vec<i64>) {
    let p = [2u32, 3][rng.gen_range(0..2)];
    let f = Fq::prime(p).unwrap();
    let m = rng.gen_range(1..=3);
    let dims = vec![rng.gen_range(0..=2), rng.gen_range(0..=2)];
    let dims = if dims == [0, 0] { vec![1, 1] } else { dims };
    let theta = [vec![1, -1], vec![-1, 1], vec![2, -1]][rng.gen_range(0..3)].clone();
    (random_rep(kronecker(m), &f, &dims, rng), theta)
}

/// A geometrically stable rep over F_2 of K2/K3.
fn geom_stable_f2(rng: &mut ChaCha8Rng) -> Representation<Fq> {
    let f = Fq::prime(2).unwrap();
    loop {
        let m = rng.gen_range(2..=3);
        let dims = [[1, 1], [1, 2], [2, 1], [2, 2]][rng.gen_range(0..4)];
        let w = random_rep(kronecker(m), &f, &dims, rng);
        if is_geometrically_stable(&w, &[1, -1], BUDGET).unwrap() {
            return w;
        }
    }
}

fn random_quat(rng: &mut ChaCha8Rng, r: i64) -> Quat {
    Quat::from_ints(std::array::from_fn(|_| rng.gen_range(-r..=r)))
}

fn division_b(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let b = rng.gen_range(-30i64..=30);
        if b != 0 && quat_is_division(&rat(-1), &rat(b)).unwrap() {
            return b;
        }
    }
}

fn random_drep(rng: &mut ChaCha8Rng, b: i64) -> DRep {
    let alg = QuaternionAlgebra::from_ints(-1, b).unwrap();
    let d = [[1usize, 1], [1, 2], [2, 1]][rng.gen_range(0..3)];
    let quiver = kronecker(3);
    let maps = quiver
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (d[a.head], d[a.tail]);
            Matrix::from_vec(r, c, (0..r * c).map(|_| random_quat(rng, 2)).collect())
        })
        .collect();
    DRep::new(quiver, alg, DimVector(d.to_vec()), maps).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn sigma_fixes_exactly_the_base_field(p in prop::sample::select(vec![2u32, 3, 5]), n in 2u32..=3) {
        let pair = FiniteGaloisPair::standard(p, 1, n).unwrap();
        let l = pair.ext();
        let fixed: Vec<u32> = l.elements().unwrap().into_iter().filter(|x| pair.sigma(x) == *x).collect();
        let mut embedded: Vec<u32> = pair.base().elements().unwrap().iter().map(|x| pair.embed(x)).collect();
        embedded.sort_unstable();
        let mut fixed_sorted = fixed.clone();
        fixed_sorted.sort_unstable();
        prop_assert_eq!(fixed_sorted, embedded);
        for x in l.elements().unwrap() {
            prop_assert_eq!(pair.galois_apply(&x, n as usize), x);
        }
    }

    #[test]
    fn norm_is_multiplicative(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = FiniteGaloisPair::standard(3, 1, 2).unwrap();
        let l = pair.ext();
        let (x, y) = (l.random(&mut rng), l.random(&mut rng));
        prop_assert_eq!(pair.norm(&l.mul(&x, &y)), pair.base().mul(&pair.norm(&x), &pair.norm(&y)));
        let g = QuadraticPair::gaussian();
        let lq = g.ext();
        let (x, y) = (lq.random(&mut rng), lq.random(&mut rng));
        prop_assert_eq!(g.norm(&lq.mul(&x, &y)), g.norm(&x) * g.norm(&y));
    }

    #[test]
    fn norms_form_a_subgroup(a in 1i64..400, b in 1i64..400, c in 1i64..400) {
        let pair = QuadraticPair::gaussian();
        let x = BigRational::new(a.into(), b.into());
        let y = BigRational::new(c.into(), 1.into());
        let (nx, ny) = (pair.is_norm(&x).unwrap(), pair.is_norm(&y).unwrap());
        if nx && ny {
            prop_assert!(pair.is_norm(&(&x * &y)).unwrap());
        }
        prop_assert_eq!(pair.is_norm(&(BigRational::from_integer(1.into()) / &x)).unwrap(), nx);
        if nx {
            prop_assert_eq!(pair.is_norm(&(&x * &y)).unwrap(), ny);
        }
        if let Some(w) = pair.norm_witness(&x).unwrap() {
            prop_assert_eq!(pair.norm(&w), x);
        }
    }

    #[test]
    fn class_equality_is_norm_of_ratio(a in -60i64..60, b in -60i64..60) {
        prop_assume!(a != 0 && b != 0);
        let pair = QuadraticPair::gaussian();
        let (ca, cb) = (pair.brauer_class(&rat(a)).unwrap(), pair.brauer_class(&rat(b)).unwrap());
        let ratio = BigRational::new(a.into(), b.into());
        prop_assert_eq!(ca.equivalent(&cb).unwrap(), pair.is_norm(&ratio).unwrap());
        prop_assert_eq!(ca.is_trivial(), pair.is_norm(&rat(a)).unwrap());
    }

    #[test]
    fn hilbert_reciprocity(an in -500i64..500, ad in 1i64..50, bn in -500i64..500, bd in 1i64..50) {
        prop_assume!(an != 0 && bn != 0);
        let a = BigRational::new(an.into(), ad.into());
        let b = BigRational::new(bn.into(), bd.into());
        let prod: i32 = candidate_places(&a, &b).unwrap().into_iter().map(|v| hilbert_symbol(&a, &b, v).unwrap()).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn division_iff_nontrivial_class(b in -200i64..200) {
        prop_assume!(b != 0);
        let pair = QuadraticPair::gaussian();
        prop_assert_eq!(quat_is_division(&rat(-1), &rat(b)).unwrap(), !pair.brauer_class(&rat(b)).unwrap().is_trivial());
    }

    #[test]
    fn subreps_are_closed_and_complete(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, _) = small_rep(&mut rng);
        let subs = enumerate_subreps(&w, BUDGET).unwrap();
        for s in &subs {
            prop_assert!(s.is_closed(&w));
        }
        let mut ours: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for s in &subs {
            *ours.entry(s.dims.0.clone()).or_default() += 1;
        }
        let mut oracle: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for e in PlainRep::from_rep(&w).subrep_dims() {
            *oracle.entry(e).or_default() += 1;
        }
        prop_assert_eq!(ours, oracle);
    }

    #[test]
    fn verdicts_match_brute_force(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, theta) = small_rep(&mut rng);
        let v = stability_verdict(&w, &theta, BUDGET).unwrap();
        let expect = match oracle_stability(&PlainRep::from_rep(&w), &theta) {
            2 => Verdict::Stable,
            1 => Verdict::StrictlySemistable,
            _ => Verdict::Unstable,
        };
        prop_assert_eq!(v.verdict, expect);
        if v.verdict == Verdict::Unstable {
            let wit = v.witness.unwrap();
            prop_assert!(wit.is_closed(&w));
            prop_assert!(slope(&wit.dims, &theta).unwrap() > v.slope);
        }
    }

    #[test]
    fn scss_contains_every_maximal_slope_subrep(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, theta) = small_rep(&mut rng);
        let s = scss(&w, &theta, BUDGET).unwrap();
        let mu = slope(&s.dims, &theta).unwrap();
        for t in enumerate_subreps(&w, BUDGET).unwrap() {
            if t.is_zero() {
                continue;
            }
            let m = slope(&t.dims, &theta).unwrap();
            prop_assert!(m <= mu);
            if m == mu {
                prop_assert!(t.contained_in(w.field(), &s));
            }
        }
    }

    #[test]
    fn hn_filtration_verifies(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, theta) = small_rep(&mut rng);
        let hn = hn_filtration(&w, &theta, BUDGET).unwrap();
        prop_assert!(hn.check(&w, &theta, BUDGET).is_ok());
        let g = random_gauge(w.field(), w.dims(), &mut rng);
        let moved = hn_filtration(&w.act(&g).unwrap(), &theta, BUDGET).unwrap();
        prop_assert_eq!(&moved.slopes, &hn.slopes);
        prop_assert_eq!(moved.subquotient_dims(), hn.subquotient_dims());
    }

    #[test]
    fn semistability_is_stable_under_base_change(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, theta) = small_rep(&mut rng);
        let p = w.field().characteristic();
        let pair = FiniteGaloisPair::standard(p, 1, 2).unwrap();
        let v = stability_verdict(&w, &theta, BUDGET).unwrap().verdict;
        let vl = stability_verdict(&w.base_change(&pair), &theta, BUDGET).unwrap().verdict;
        prop_assert_eq!(v.is_semistable(), vl.is_semistable());
    }

    #[test]
    fn geometric_stability_means_stable_over_extensions(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Fq::prime(2).unwrap();
        let m = rng.gen_range(2..=3);
        let dims = [[1usize, 1], [1, 2], [2, 2], [2, 1]][rng.gen_range(0..4)];
        let w = random_rep(kronecker(m), &f, &dims, &mut rng);
        let geom = is_geometrically_stable(&w, &[1, -1], BUDGET).unwrap();
        let mut all = true;
        for n in 1..=3 {
            let stable = if n == 1 {
                stability_verdict(&w, &[1, -1], BUDGET).unwrap().verdict == Verdict::Stable
            } else {
                let pair = FiniteGaloisPair::standard(2, 1, n).unwrap();
                stability_verdict(&w.base_change(&pair), &[1, -1], BUDGET).unwrap().verdict == Verdict::Stable
            };
            all &= stable;
        }
        prop_assert_eq!(geom, all);
    }

    #[test]
    fn hom_dimension_is_isomorphism_invariant(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, _) = small_rep(&mut rng);
        let f = w.field().clone();
        let w2 = random_rep(w.quiver().clone(), &f, &w.dims().0, &mut rng);
        let g = random_gauge(&f, w.dims(), &mut rng);
        let gw = w.act(&g).unwrap();
        prop_assert_eq!(hom_space(&gw, &w2).unwrap().dim(), hom_space(&w, &w2).unwrap().dim());
        prop_assert_eq!(hom_space(&w2, &gw).unwrap().dim(), hom_space(&w2, &w).unwrap().dim());
        prop_assert!(is_isomorphic(&w, &gw, &JobConfig::default().iso_search()).unwrap().is_some());
    }

    #[test]
    fn twisting_is_a_cyclic_action(seed: u64, i in -4i64..4, j in -4i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = FiniteGaloisPair::standard(2, 1, 3).unwrap();
        let w = random_rep(kronecker(2), pair.ext(), &[2, 1], &mut rng);
        prop_assert_eq!(twist(&pair, &twist(&pair, &w, i), j), twist(&pair, &w, i + j));
        prop_assert_eq!(twist(&pair, &w, 3), w);
    }

    #[test]
    fn descent_data_and_forms(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = JobConfig::default();
        let pair = FiniteGaloisPair::standard(2, 1, 2).unwrap();
        let w2 = geom_stable_f2(&mut rng);
        let w = w2.base_change(&pair).act(&random_gauge(pair.ext(), w2.dims(), &mut rng)).unwrap();
        let datum = solve_modifying_u(&pair, &w, &cfg.iso_search()).unwrap().expect("base changes are fixed");
        prop_assert!(datum.verify());
        prop_assert!(datum.class().unwrap().is_trivial());
        let a = rng.gen_range(1..pair.ext().size());
        let re = datum.rescale(&a).unwrap();
        prop_assert!(re.verify());
        prop_assert_eq!(type_map(&pair, &w, &cfg.iso_search()).unwrap().class, re.class().unwrap());
        let d = hilbert90_descend(&datum, seed, cfg.descent_attempts).unwrap();
        prop_assert!(is_isomorphic(&d.form.base_change(&pair), &w, &cfg.iso_search()).unwrap().is_some());
        prop_assert!(is_isomorphic(&d.form, &w2, &cfg.iso_search()).unwrap().is_some());
    }

    #[test]
    fn non_fixed_orbits_have_no_datum(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = JobConfig::default();
        let pair = FiniteGaloisPair::standard(2, 1, 2).unwrap();
        let w = random_rep(kronecker(2), pair.ext(), &[1, 1], &mut rng);
        prop_assume!(is_geometrically_stable(&w, &[1, -1], BUDGET).unwrap());
        // K2 with d = (1,1): the orbit is the point [a : b] of P^1, fixed iff it lies in P^1(F_2)
        let (a, b) = (*w.map(0).get(0, 0), *w.map(1).get(0, 0));
        let point_fixed = a == 0 || b == 0 || pair.restrict(&pair.ext().mul(&a, &pair.ext().inv(&b).unwrap())).is_some();
        let datum = solve_modifying_u(&pair, &w, &cfg.iso_search()).unwrap();
        prop_assert_eq!(datum.is_some(), point_fixed);
    }

    #[test]
    fn division_forms_halve_dimensions(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = JobConfig::default();
        let b = division_b(&mut rng);
        let r = random_drep(&mut rng, b);
        let t = drep_to_twisted(&r).unwrap();
        prop_assert_eq!(twisted_dim(&t).unwrap(), r.dims.clone());
        let datum = t.datum();
        let form = division_form(&datum, seed, cfg.descent_attempts).unwrap();
        prop_assert_eq!(form.drep.dims.scale(2), t.rep.dims().clone());
        let split = morita_split(&form.drep, &t.pair).unwrap();
        prop_assert!(is_isomorphic(&split, &t.rep, &cfg.iso_search()).unwrap().is_some());
    }

    #[test]
    fn splitting_is_a_ring_homomorphism(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = rng.gen_range(-20i64..=20);
        prop_assume!(b != 0);
        let alg = QuaternionAlgebra::from_ints(-1, b).unwrap();
        let l = QuadField::gaussian();
        let (x, y) = (random_quat(&mut rng, 5), random_quat(&mut rng, 5));
        let s = |z: &Quat| split_quat(&rat(b), z);
        prop_assert_eq!(s(&alg.mul(&x, &y)), linalg::mul(&l, &s(&x), &s(&y)));
        prop_assert_eq!(s(&alg.add(&x, &y)), linalg::add(&l, &s(&x), &s(&y)));
        prop_assert_eq!(s(&Quat::one()), Matrix::identity(&l, 2));
    }

    #[test]
    fn morita_and_json_round_trips(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = division_b(&mut rng);
        let r = random_drep(&mut rng, b);
        let pair = QuadraticPair::gaussian();
        let split = morita_split(&r, &pair).unwrap();
        prop_assert_eq!(morita_unsplit(&pair, &split, &rat(b)).unwrap(), r.clone());
        let back = io::parse_rep(&io::to_pretty(&io::drep_to_json(&r))).unwrap().into_drep().unwrap();
        prop_assert_eq!(back, r);
        let back = io::parse_rep(&io::to_pretty(&io::rep_to_json(&split))).unwrap().into_quadratic().unwrap();
        prop_assert_eq!(back, split);
        let (w, _) = small_rep(&mut rng);
        let back = io::parse_rep(&io::to_pretty(&io::rep_to_json(&w))).unwrap().into_finite().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn validation_survives_rescaling_u(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = division_b(&mut rng);
        let t = drep_to_twisted(&random_drep(&mut rng, b)).unwrap();
        prop_assert!(validate_twisted(&t).ok);
        let l = t.pair.ext().clone();
        let a = loop {
            let a = l.random(&mut rng);
            if !l.is_zero(&a) {
                break a;
            }
        };
        let re = t.datum().rescale(&a).unwrap();
        let t2 = TwistedRep::from_datum(&re, t.index);
        prop_assert!(validate_twisted(&t2).ok);
        prop_assert!(t.pair.brauer_class(&t2.lambda).unwrap().equivalent(&t.pair.brauer_class(&t.lambda).unwrap()).unwrap());
        let mut bad = t.clone();
        bad.lambda = &bad.lambda + rat(1);
        prop_assert!(!validate_twisted(&bad).ok);
    }

    #[test]
    fn orbit_counts_agree(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = [2u64, 3][rng.gen_range(0..2)];
        let f = Fq::prime(q as u32).unwrap();
        let dims = [[1usize, 1], [1, 2], [2, 1]][rng.gen_range(0..3)];
        let m = rng.gen_range(1..=2);
        let space = RepSpace::new(kronecker(m), f, DimVector(dims.to_vec()), 1 << 16).unwrap();
        let theta = [[1i64, -1], [-1, 1]][rng.gen_range(0..2)];
        // any union of orbits works; take all semistable points
        let points: Vec<u64> = (0..space.size())
            .filter(|&c| stability_verdict(&space.rep(c), &theta, BUDGET).unwrap().verdict != Verdict::Unstable)
            .collect();
        let part = orbits_by_canonical_form(&space, &points).unwrap();
        prop_assert_eq!(part.representatives.len(), orbit_count_union_find(&space, &points).unwrap());
        for &c in &points {
            let rep = space.rep(part.canonical[&c]);
            prop_assert!(is_isomorphic(&rep, &space.rep(c), &JobConfig::default().iso_search()).unwrap().is_some());
        }
    }
}
