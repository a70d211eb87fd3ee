//! Truncated QSM system of Q(i): partition function, Gibbs states, the KMS
//! defect and character-twisted KMS values.

use zeta_qsm::io::load_field;
use zeta_qsm::lseries::DirichletChar;
use zeta_qsm::qsm::{Operator, TruncatedQSM};

fn main() -> zeta_qsm::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let k = load_field(format!("{dir}/gauss.field"))?;
    let beta = 2.0;

    for limit in [100u64, 1000, 10_000] {
        let q = TruncatedQSM::with_auto_mask(&k, limit)?;
        let p = q.basis()[1].clone();
        let defect = q.kms_defect(&Operator::mu(p.clone()), &Operator::mu_star(p.clone()), beta)?;
        println!(
            "N = {limit:>5}: dim {:>5}, Z = {:.12}, omega(e_{p}) = {:.12}, defect {defect:.3e}",
            q.basis().len(),
            q.partition_function(beta)?,
            q.gibbs_expectation(&Operator::projection(p.clone()), beta)?.re,
        );
    }

    let q = TruncatedQSM::with_auto_mask(&k, 2000)?;
    let chi = DirichletChar::prime_modulus(5, 4, 1)?;
    for gamma in 1..5 {
        let v = q.kms_state_value(&chi, gamma, beta)?;
        println!("chi mod 5, gamma = {gamma}: {:.12} (routes differ by {:.1e})", v.route_a, v.diff());
    }
    Ok(())
}
