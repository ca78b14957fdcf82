//! Shared fixtures and independent oracles for the integration tests. The
//! oracles use plain modular arithmetic and set-based subspace enumeration,
//! sharing no code with the library's linear algebra.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::sync::Arc;

use quiver_forms::arith::{QuadField, QuadraticPair};
use quiver_forms::linalg::Matrix;
use quiver_forms::quiver::{DimVector, Quiver, Representation};

/// Writes a line straight to the process stdout, past the test harness's
/// output capture.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

/// The 3-Kronecker representation (I, diag(i, -i), [[0, -1], [1, 0]]) over Q(i).
pub fn quaternionic_kronecker() -> (QuadraticPair, Representation<QuadField>) {
    let pair = QuadraticPair::gaussian();
    let l = QuadField::gaussian();
    let e = |a: i64, b: i64| l.from_ints(a, b);
    let maps = vec![
        Matrix::from_rows(vec![vec![e(1, 0), e(0, 0)], vec![e(0, 0), e(1, 0)]]),
        Matrix::from_rows(vec![vec![e(0, 1), e(0, 0)], vec![e(0, 0), e(0, -1)]]),
        Matrix::from_rows(vec![vec![e(0, 0), e(-1, 0)], vec![e(1, 0), e(0, 0)]]),
    ];
    let w = Representation::new(Quiver::kronecker(3), l, DimVector(vec![2, 2]), maps).unwrap();
    (pair, w)
}

/// All vectors of F_p^n, encoded base p with the first coordinate least significant.
pub fn vector(code: usize, p: u64, n: usize) -> Vec<u64> {
    let mut c = code as u64;
    (0..n)
        .map(|_| {
            let x = c % p;
            c /= p;
            x
        })
        .collect()
}

pub fn encode(v: &[u64], p: u64) -> usize {
    v.iter().rev().fold(0u64, |acc, &x| acc * p + x) as usize
}

/// Every subspace of F_p^n as the set of codes of its vectors, grown by
/// adjoining one vector at a time and closing under linear combinations.
pub fn subspaces(p: u64, n: usize) -> Vec<BTreeSet<usize>> {
    thread_local! {
        static CACHE: std::cell::RefCell<std::collections::HashMap<(u64, usize), Vec<BTreeSet<usize>>>> =
            Default::default();
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&(p, n)).cloned()) {
        return hit;
    }
    let out = subspaces_uncached(p, n);
    CACHE.with(|c| c.borrow_mut().insert((p, n), out.clone()));
    out
}

fn subspaces_uncached(p: u64, n: usize) -> Vec<BTreeSet<usize>> {
    let total = p.pow(n as u32) as usize;
    let zero: BTreeSet<usize> = [0].into_iter().collect();
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        for v in 0..total {
            if s.contains(&v) {
                continue;
            }
            let vv = vector(v, p, n);
            let mut span = BTreeSet::new();
            for &x in &s {
                let xv = vector(x, p, n);
                for c in 0..p {
                    let y: Vec<u64> = xv.iter().zip(&vv).map(|(a, b)| (a + c * b) % p).collect();
                    span.insert(encode(&y, p));
                }
            }
            if seen.insert(span.clone()) {
                frontier.push(span);
            }
        }
    }
    seen.into_iter().collect()
}

/// Dimension of a subspace from its size.
pub fn dim_of(s: &BTreeSet<usize>, p: u64) -> usize {
    let mut k = 0;
    let mut size = 1;
    while size < s.len() {
        size *= p as usize;
        k += 1;
    }
    k
}

pub fn apply(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % p).collect()
}

/// A representation over F_p in plain form: arrows as (tail, head) and
/// matrices as nested vectors.
#[derive(Clone, Debug)]
pub struct PlainRep {
    pub p: u64,
    pub dims: Vec<usize>,
    pub arrows: Vec<(usize, usize)>,
    pub maps: Vec<Vec<Vec<u64>>>,
}

impl PlainRep {
    pub fn from_rep(w: &Representation<quiver_forms::arith::Fq>) -> Self {
        let p = w.field().characteristic() as u64;
        assert_eq!(w.field().degree(), 1, "plain oracle works over prime fields");
        PlainRep {
            p,
            dims: w.dims().0.clone(),
            arrows: w.quiver().arrows().iter().map(|a| (a.tail, a.head)).collect(),
            maps: w.maps().iter().map(|m| m.to_rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect()).collect(),
        }
    }

    /// Dimension vectors of all subrepresentations, by brute force.
    pub fn subrep_dims(&self) -> Vec<Vec<usize>> {
        let per_vertex: Vec<Vec<BTreeSet<usize>>> = self.dims.iter().map(|&d| subspaces(self.p, d)).collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; self.dims.len()];
        loop {
            let closed = self.arrows.iter().zip(&self.maps).all(|(&(t, h), m)| {
                per_vertex[t][choice[t]].iter().all(|&x| {
                    let image = apply(m, &vector(x, self.p, self.dims[t]), self.p);
                    per_vertex[h][choice[h]].contains(&encode(&image, self.p))
                })
            });
            if closed {
                out.push(choice.iter().enumerate().map(|(v, &c)| dim_of(&per_vertex[v][c], self.p)).collect());
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return out;
                }
                choice[i] += 1;
                if choice[i] < per_vertex[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

/// Slope as a reduced fraction (numerator, denominator).
pub fn slope(e: &[usize], theta: &[i64]) -> (i64, i64) {
    let num: i64 = e.iter().zip(theta).map(|(&d, &t)| d as i64 * t).sum();
    let den: i64 = e.iter().sum::<usize>() as i64;
    (num, den)
}

pub fn slope_gt(a: (i64, i64), b: (i64, i64)) -> bool {
    a.0 * b.1 > b.0 * a.1
}

pub fn slope_eq(a: (i64, i64), b: (i64, i64)) -> bool {
    a.0 * b.1 == b.0 * a.1
}

/// Stable / semistable / unstable by brute force: 2, 1, 0.
pub fn oracle_stability(w: &PlainRep, theta: &[i64]) -> u8 {
    let mu = slope(&w.dims, theta);
    let total: usize = w.dims.iter().sum();
    let mut verdict = 2;
    for e in w.subrep_dims() {
        let s: usize = e.iter().sum();
        if s == 0 || s == total {
            continue;
        }
        let m = slope(&e, theta);
        if slope_gt(m, mu) {
            return 0;
        }
        if slope_eq(m, mu) {
            verdict = 1;
        }
    }
    verdict
}

/// Orbits of K2 with d = (1,1) over F_p: pairs (a, b) up to the action
/// (a, b) -> (g a / h, g b / h); stable points are (a, b) != 0 for theta = (1, -1).
pub fn kronecker_orbit_oracle(p: u64) -> usize {
    let mut orbits: Vec<BTreeSet<(u64, u64)>> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if a == 0 && b == 0 {
                continue;
            }
            if orbits.iter().any(|o| o.contains(&(a, b))) {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for g in 1..p {
                for h in 1..p {
                    let hinv = (1..p).find(|x| x * h % p == 1).unwrap();
                    orbit.insert((g * a % p * hinv % p, g * b % p * hinv % p));
                }
            }
            orbits.push(orbit);
        }
    }
    orbits.len()
}

pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum::<u64>() % p).collect())
        .collect()
}

pub fn all_matrices(p: u64, n: usize) -> Vec<Vec<Vec<u64>>> {
    let total = p.pow((n * n) as u32) as usize;
    (0..total).map(|c| vector(c, p, n * n).chunks(n).map(|r| r.to_vec()).collect()).collect()
}

pub fn det2(m: &[Vec<u64>], p: u64) -> u64 {
    (m[0][0] * m[1][1] + p * p - m[0][1] * m[1][0] % p) % p
}

/// Jordan quiver, d = (2), over F_p: conjugacy classes of matrices without an
/// eigenvector in F_p^2, with and without a scalar endomorphism ring.
/// Returns (classes with End = F_p, classes with End larger).
pub fn jordan_two_oracle(p: u64) -> (usize, usize) {
    let gl: Vec<Vec<Vec<u64>>> = all_matrices(p, 2).into_iter().filter(|g| det2(g, p) != 0).collect();
    let inv = |g: &Vec<Vec<u64>>| gl.iter().find(|h| mat_mul(g, h, p) == vec![vec![1, 0], vec![0, 1]]).unwrap().clone();
    let no_eigenvector = |m: &Vec<Vec<u64>>| {
        (1..p * p).all(|c| {
            let v = vector(c as usize, p, 2);
            let mv = apply(m, &v, p);
            // mv in span(v)?
            !(0..p).any(|l| mv.iter().zip(&v).all(|(a, b)| *a == l * b % p))
        })
    };
    let all = all_matrices(p, 2);
    let mut classes: Vec<BTreeSet<Vec<Vec<u64>>>> = Vec::new();
    let (mut scalar_end, mut larger_end) = (0, 0);
    for m in &all {
        if !no_eigenvector(m) || classes.iter().any(|c| c.contains(m)) {
            continue;
        }
        classes.push(gl.iter().map(|g| mat_mul(&mat_mul(g, m, p), &inv(g), p)).collect());
        let commuting = all.iter().filter(|x| mat_mul(x, m, p) == mat_mul(m, x, p)).count() as u64;
        if commuting == p {
            scalar_end += 1;
        } else {
            larger_end += 1;
        }
    }
    (scalar_end, larger_end)
}

/// Monic polynomials over F_p of degree k, coefficients low degree first.
pub fn monic_polys(p: u64, k: usize) -> Vec<Vec<u64>> {
    (0..p.pow(k as u32) as usize)
        .map(|c| {
            let mut v = vector(c, p, k);
            v.push(1);
            v
        })
        .collect()
}

/// Whether f divides g over F_p (f monic).
pub fn divides(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut r = g.to_vec();
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        for (i, &c) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

pub fn companion(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let k = f.len() - 1;
    let mut m = vec![vec![0; k]; k];
    for i in 1..k {
        m[i][i - 1] = 1;
    }
    for i in 0..k {
        m[i][k - 1] = (p - f[i]) % p;
    }
    m
}

/// Rational canonical forms of n x n matrices over F_p: block diagonal
/// companion matrices of invariant factor chains f_1 | f_2 | ... | f_r.
/// One matrix per conjugacy class.
pub fn rational_canonical_forms(p: u64, n: usize) -> Vec<Vec<Vec<u64>>> {
    fn chains(p: u64, remaining: usize, last: Option<&Vec<u64>>, acc: &mut Vec<Vec<u64>>, out: &mut Vec<Vec<Vec<u64>>>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        let min_deg = last.map_or(1, |f| f.len() - 1);
        for k in min_deg..=remaining {
            for f in monic_polys(p, k) {
                if last.is_some_and(|g| !divides(g, &f, p)) {
                    continue;
                }
                acc.push(f.clone());
                chains(p, remaining - k, Some(&f), acc, out);
                acc.pop();
            }
        }
    }
    let mut all = Vec::new();
    chains(p, n, None, &mut Vec::new(), &mut all);
    all.into_iter()
        .map(|fs| {
            let mut m = vec![vec![0; n]; n];
            let mut off = 0;
            for f in &fs {
                let c = companion(f, p);
                for i in 0..c.len() {
                    for j in 0..c.len() {
                        m[off + i][off + j] = c[i][j];
                    }
                }
                off += c.len();
            }
            m
        })
        .collect()
}

pub fn kronecker(m: usize) -> Arc<Quiver> {
    Quiver::kronecker(m)
}
