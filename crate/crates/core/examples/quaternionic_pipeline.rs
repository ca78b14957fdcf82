//! A Galois-fixed 3-Kronecker representation over Q(i) with no Q-form: its
//! Brauer type is Hamilton's quaternions, and it comes from the
//! D-representation (1, i, j).

use quiver_forms::arith::{Field, QuadField, QuadraticPair};
use quiver_forms::config::JobConfig;
use quiver_forms::descent::{division_form, type_map};
use quiver_forms::linalg::Matrix;
use quiver_forms::quiver::{geom_stability_certificate, is_isomorphic, DimVector, Quiver, Representation};
use quiver_forms::twisted::morita_split;

fn main() -> quiver_forms::Result<()> {
    let cfg = JobConfig::default();
    let pair = QuadraticPair::gaussian();
    let l = QuadField::gaussian();
    let e = |a, b| l.from_ints(a, b);
    let w = Representation::new(
        Quiver::kronecker(3),
        l.clone(),
        DimVector(vec![2, 2]),
        vec![
            Matrix::identity(&l, 2),
            Matrix::from_rows(vec![vec![e(0, 1), e(0, 0)], vec![e(0, 0), e(0, -1)]]),
            Matrix::from_rows(vec![vec![e(0, 0), e(-1, 0)], vec![e(1, 0), e(0, 0)]]),
        ],
    )?;

    let cert = geom_stability_certificate(&w, &[1, -1], &cfg.primes, cfg.max_subspace_checks)?;
    println!("geometric stability: {} (prime {:?})", cert.verdict.verdict, cert.prime);

    let t = type_map(&pair, &w, &cfg.iso_search())?;
    for (v, u) in t.datum.u.iter().enumerate() {
        let rows: Vec<String> = u.to_rows().iter().map(|r| r.iter().map(|x| l.display(x)).collect::<Vec<_>>().join(" ")).collect();
        println!("u at vertex {}: [{}]", v + 1, rows.join("; "));
    }
    println!("lambda = {}, class {} of index {}", t.datum.lambda, t.class, t.class.index());

    let form = division_form(&t.datum, cfg.seed, cfg.descent_attempts)?;
    let alg = &form.drep.algebra;
    let maps: Vec<String> = form.drep.maps.iter().map(|m| alg.display(m.get(0, 0))).collect();
    println!("D-form of dimension {}: ({})", form.drep.dims, maps.join(", "));

    let split = morita_split(&form.drep, &pair)?;
    println!("split form isomorphic to W: {}", is_isomorphic(&split, &w, &cfg.iso_search())?.is_some());
    Ok(())
}
