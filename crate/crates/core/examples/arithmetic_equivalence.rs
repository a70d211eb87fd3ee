//! Zeta coefficients of Q(3^(1/8)) and Q(48^(1/8)) agree away from 2 and 3,
//! although the fields are not isomorphic.
//!
//!     cargo run --release --example arithmetic_equivalence -- 5000

use std::collections::BTreeSet;

use zeta_qsm::io::load_field;
use zeta_qsm::lseries::{equiv_check_masked, zeta_coeffs};

fn main() -> zeta_qsm::Result<()> {
    let limit: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let k = load_field(format!("{dir}/k8_3.field"))?;
    let l = load_field(format!("{dir}/k8_48.field"))?;

    println!("undetermined primes: K {:?}, L {:?}", k.undetermined_primes()?, l.undetermined_primes()?);
    let report = equiv_check_masked(&k, &l, limit, &BTreeSet::from([2, 3]))?;
    println!(
        "{} vs {}: equal = {}, {} indices compared, masked {:?}",
        k.label(),
        l.label(),
        report.equal,
        report.compared,
        report.masked
    );

    let zk = zeta_coeffs(&k, 40)?;
    let row: Vec<String> = (1..=40).map(|n| zk.get(n).map_or("-".into(), |c| c.to_string())).collect();
    println!("a_n(K), n <= 40: {}", row.join(" "));

    // Q(i) and Q(sqrt -2) differ already at n = 3.
    let g = load_field(format!("{dir}/gauss.field"))?;
    let m2 = load_field(format!("{dir}/sqrt_m2.field"))?;
    let r = equiv_check_masked(&g, &m2, 100, &BTreeSet::new())?;
    println!("Q(i) vs Q(sqrt -2): first mismatch at {:?}", r.first_mismatch);
    Ok(())
}
