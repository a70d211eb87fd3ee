//! Ideal counts by norm and residue class, and a norm-preserving matching of
//! prime ideals between Q(3^(1/8)) and Q(48^(1/8)).

use std::collections::BTreeSet;

use zeta_qsm::io::load_field;
use zeta_qsm::reciprocity::{build_psi, count_identity_check, frob_count, psi_on_ideals};

fn main() -> zeta_qsm::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let k = load_field(format!("{dir}/k8_3.field"))?;
    let l = load_field(format!("{dir}/k8_48.field"))?;
    let mask = BTreeSet::from([2, 3]);

    for m in [5u64, 7, 12] {
        let r = count_identity_check(&k, &l, m, 1000, &mask)?;
        println!("m = {m:>2}: pass = {}, {} norms checked", r.pass, r.checked);
    }
    let c = frob_count(&k, 5, 49)?;
    println!("ideals of norm 49 by class mod 5: {:?}", c.table);

    let psi = build_psi(&k, &l, 200, &mask)?;
    for (p, i, f, j) in psi.rows().into_iter().take(8) {
        println!("  P{p}.{i} (f = {f}) -> Q{p}.{j}");
    }
    let pairs = psi_on_ideals(&k, &psi)?;
    println!("{} ideals mapped; norms preserved: {}", pairs.len(), pairs.iter().all(|(a, b)| a.norm() == b.norm()));
    Ok(())
}
