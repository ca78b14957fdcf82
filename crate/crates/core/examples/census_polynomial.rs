//! Orbit counts of geometrically stable points over several F_q and the
//! polynomial they fit.

use quiver_forms::census::census_polynomiality;
use quiver_forms::config::JobConfig;
use quiver_forms::quiver::{DimVector, Quiver};

fn main() -> quiver_forms::Result<()> {
    let cfg = JobConfig::default();
    let cases = [
        ("K2 (1,1)", Quiver::kronecker(2), vec![1, 1], vec![1, -1], vec![2, 3, 4, 5]),
        ("K3 (1,1)", Quiver::kronecker(3), vec![1, 1], vec![1, -1], vec![2, 3, 4, 5]),
        ("K2 (1,2)", Quiver::kronecker(2), vec![1, 2], vec![1, -1], vec![2, 3, 4, 5]),
        ("Jordan (2)", Quiver::jordan(), vec![2], vec![0], vec![2, 3, 5]),
    ];
    for (name, quiver, dims, theta, qs) in cases {
        let r = census_polynomiality(&quiver, &DimVector(dims), &theta, &qs, &cfg)?;
        let counts: Vec<String> = r.counts.iter().map(|c| format!("{}: {}", c.q, c.geom_stable_orbits)).collect();
        println!("{name}: {} -> {}", counts.join(", "), r.fit.display);
    }
    Ok(())
}
