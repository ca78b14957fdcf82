//! Hilbert symbols, quaternion algebras and Brauer classes over Q(i)/Q.

use num_rational::BigRational;
use quiver_forms::arith::hilbert::ramified_places;
use quiver_forms::arith::{quat_is_division, GaloisPair, QuadraticPair};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn main() -> quiver_forms::Result<()> {
    let pair = QuadraticPair::gaussian();
    for b in [-1i64, 2, 3, 5, 6, 7, -3] {
        let places: Vec<String> = ramified_places(&q(-1), &q(b))?.iter().map(|p| p.to_string()).collect();
        let class = pair.brauer_class(&q(b))?;
        println!(
            "(-1,{b})_Q: division {}, ramified at [{}], class {class}",
            quat_is_division(&q(-1), &q(b))?,
            places.join(", ")
        );
    }
    // the classes agree iff 3/7 is a norm from Q(i)
    let (c3, c7) = (pair.brauer_class(&q(3))?, pair.brauer_class(&q(7))?);
    println!("[(-1,3)] = [(-1,7)]: {}", c3.equivalent(&c7)?);
    if let Some(w) = pair.norm_witness(&q(13))? {
        println!("13 = N({})", quiver_forms::arith::Field::display(pair.ext(), &w));
    }
    Ok(())
}
