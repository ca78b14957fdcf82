//! Twisted representations: from a D-representation to a descent datum and
//! back, with validation and rescaling of the transition maps.

use num_rational::BigRational;
use quiver_forms::arith::{GaloisPair, Quat, QuaternionAlgebra};
use quiver_forms::linalg::Matrix;
use quiver_forms::quiver::{DimVector, Quiver};
use quiver_forms::twisted::{drep_to_twisted, twisted_class, twisted_dim, twisted_to_drep, validate_twisted, DRep, Form, TwistedRep};

fn main() -> quiver_forms::Result<()> {
    // (-1, 3)_Q is ramified at 3 and infinity
    let alg = QuaternionAlgebra::from_ints(-1, 3)?;
    let (i, j) = (alg.i(), alg.j());
    let r = DRep::new(
        Quiver::kronecker(3),
        alg.clone(),
        DimVector(vec![1, 1]),
        vec![
            Matrix::from_rows(vec![vec![Quat::one()]]),
            Matrix::from_rows(vec![vec![i.clone()]]),
            Matrix::from_rows(vec![vec![alg.add(&i, &j)]]),
        ],
    )?;
    let t = drep_to_twisted(&r)?;
    println!("split dimension {}, index {}, twisted dimension {}", t.rep.dims(), t.index, twisted_dim(&t)?);
    println!("class {}", twisted_class(&t)?);
    println!("valid: {}", validate_twisted(&t).ok);

    let rescaled = TwistedRep::from_datum(&t.datum().rescale(&t.pair.ext().from_ints(1, 1))?, t.index);
    println!("after u -> (1 + i) u: lambda {}, valid {}", rescaled.lambda, validate_twisted(&rescaled).ok);

    let mut broken = t.clone();
    broken.lambda = BigRational::from_integer(5.into());
    println!("with lambda replaced by 5: {:?}", validate_twisted(&broken).problems);

    match twisted_to_drep(&rescaled, 1, 64)? {
        Form::Quaternion(d) => println!("recovered a D-representation of dimension {} over ({}, {})_Q", d.dims, d.algebra.a(), d.algebra.b()),
        Form::Base(w) => println!("recovered a Q-form of dimension {}", w.dims()),
    }
    Ok(())
}
