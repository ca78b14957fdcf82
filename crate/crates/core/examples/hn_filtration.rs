//! Harder-Narasimhan filtration of a Kronecker representation over F_3,
//! and its compatibility with base change to F_9.

use quiver_forms::arith::{FiniteGaloisPair, Fq, GaloisPair};
use quiver_forms::quiver::{hn_filtration, Quiver, Representation};

fn main() -> quiver_forms::Result<()> {
    let f3 = Fq::prime(3)?;
    let theta = [1, -1];
    // d = (2, 2) with a = diag(1, 0), b = 0: the kernel of a splits off
    let w = Representation::from_int_maps(
        Quiver::kronecker(2),
        f3,
        vec![2, 2],
        vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 0]]],
    )?;
    let hn = hn_filtration(&w, &theta, 1 << 20)?;
    hn.check(&w, &theta, 1 << 20)?;
    for (i, (d, s)) in hn.subquotient_dims().iter().zip(&hn.slopes).enumerate() {
        println!("W^{} / W^{}: dimension {d}, slope {s}", i + 1, i);
    }

    let pair = FiniteGaloisPair::standard(3, 1, 2)?;
    let over_f9 = hn_filtration(&w.base_change(&pair), &theta, 1 << 20)?;
    let lifted: Vec<_> = hn.steps.iter().map(|s| s.map_entries(pair.ext(), |x| pair.embed(x))).collect();
    println!("same filtration over F_9: {}", lifted == over_f9.steps);
    Ok(())
}
