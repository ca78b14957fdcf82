//! Stability of Kronecker representations over a finite field and over Q(i).

use quiver_forms::arith::{Fq, QuadField};
use quiver_forms::linalg::Matrix;
use quiver_forms::quiver::{end_dim, geom_stability_certificate, stability_verdict, DimVector, Quiver, Representation};

fn main() -> quiver_forms::Result<()> {
    let theta = [1, -1];
    let f2 = Fq::prime(2)?;
    // (1, 0): a point of P^1(F_2), stable with End = F_2
    let w = Representation::from_int_maps(Quiver::kronecker(2), f2.clone(), vec![1, 1], vec![vec![vec![1]], vec![vec![0]]])?;
    let v = stability_verdict(&w, &theta, 1 << 20)?;
    println!("K2 (1, 0) over F_2: {} with End dimension {}", v.verdict, end_dim(&w)?);

    // the zero representation is destabilized by the first vertex
    let z = Representation::zero(Quiver::kronecker(2), f2, DimVector(vec![1, 1]))?;
    let v = stability_verdict(&z, &theta, 1 << 20)?;
    println!("K2 zero rep: {} (witness {}, slope {})", v.verdict, v.witness.unwrap().dims, v.witness_slope.unwrap());

    // over Q(i) stability is certified by reduction modulo primes
    let l = QuadField::gaussian();
    let e = |a, b| l.from_ints(a, b);
    let w = Representation::new(
        Quiver::kronecker(2),
        l.clone(),
        DimVector(vec![1, 1]),
        vec![Matrix::from_rows(vec![vec![e(1, 0)]]), Matrix::from_rows(vec![vec![e(0, 1)]])],
    )?;
    let cert = geom_stability_certificate(&w, &theta, &[2, 3, 5, 13], 1 << 20)?;
    println!("K2 (1, i) over Q(i): {} certified at {:?}", cert.verdict.verdict, cert.prime);
    for a in &cert.attempts {
        println!("  p = {}: {}", a.prime, a.outcome);
    }
    Ok(())
}
