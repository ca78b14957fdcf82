//! Galois descent from F_4 to F_2, checked orbit by orbit.

use quiver_forms::census::verify_descent_census;
use quiver_forms::config::JobConfig;
use quiver_forms::quiver::{DimVector, Quiver};

fn main() -> quiver_forms::Result<()> {
    let cfg = JobConfig::default();
    for (name, quiver, dims, theta) in [
        ("K2", Quiver::kronecker(2), vec![1, 1], vec![1, -1]),
        ("K2", Quiver::kronecker(2), vec![1, 2], vec![1, -1]),
        ("K3", Quiver::kronecker(3), vec![1, 1], vec![1, -1]),
        ("Jordan", Quiver::jordan(), vec![1], vec![0]),
    ] {
        let (r, records) = verify_descent_census(&quiver, &DimVector(dims), &theta, 2, 2, &cfg)?;
        println!(
            "{name} {}: {} orbits over F_4, {} Frobenius-fixed, {} over F_2, {} violations",
            r.dims,
            r.orbits_over_extension,
            r.fixed_orbits,
            r.base_count,
            r.violations.len()
        );
        for rec in records.iter().take(3) {
            println!("  class {}, lambda {}, round trip {}", rec.class, rec.lambda, rec.round_trip);
        }
    }
    Ok(())
}
