//! Orbit counts against stored values keyed by quiver fingerprint,
//! dimension vector, theta and q.

use std::path::Path;

use serde_json::Value;

use quiver_forms::census::count_geom_stable_orbits;
use quiver_forms::cli::quiver_by_name;
use quiver_forms::config::JobConfig;
use quiver_forms::quiver::DimVector;

fn key(fingerprint: &str, dims: &[usize], theta: &[i64], q: u64) -> String {
    let d: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
    let t: Vec<String> = theta.iter().map(|x| x.to_string().replace('-', "m")).collect();
    format!("{fingerprint}_d{}_t{}_q{q}", d.join("-"), t.join("_"))
}

#[test]
fn stored_counts_reproduce() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/census");
    let cfg = JobConfig::default();
    let mut checked = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let file = entry.unwrap().path();
        let golden: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
        let quiver = quiver_by_name(golden["quiver"].as_str().unwrap()).unwrap();
        let dims: Vec<usize> = serde_json::from_value(golden["dims"].clone()).unwrap();
        let theta: Vec<i64> = serde_json::from_value(golden["theta"].clone()).unwrap();
        let q = golden["q"].as_u64().unwrap();
        assert_eq!(quiver.fingerprint(), golden["fingerprint"].as_str().unwrap(), "{}", file.display());
        assert_eq!(
            file.file_stem().unwrap().to_str().unwrap(),
            key(&quiver.fingerprint(), &dims, &theta, q),
            "file name does not match its contents"
        );
        let c = count_geom_stable_orbits(&quiver, &DimVector(dims), &theta, q, &cfg).unwrap();
        assert_eq!(c.geom_stable_orbits, golden["geom_stable_orbits"].as_u64().unwrap(), "{}", file.display());
        assert_eq!(c.stable_not_geom_orbits, golden["stable_not_geom_orbits"].as_u64(), "{}", file.display());
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} golden files");
}
