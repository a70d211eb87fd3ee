//! zeta_{K(sqrt D)} = zeta_K * L_K(chi_D) for small K and D.

use zeta_qsm::io::load_field;
use zeta_qsm::lseries::artin_factorization_check;
use zeta_qsm::Error;

fn main() -> zeta_qsm::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for name in ["q", "gauss", "sqrt_m2"] {
        let k = load_field(format!("{dir}/{name}.field"))?;
        for d in [-4i64, -3, -8, 5, 8, 12, -7] {
            match artin_factorization_check(&k, d, 1000) {
                Ok(r) => println!(
                    "K = {:<12} D = {d:>3}: compositum {:<24} {} ({} compared)",
                    k.label(),
                    r.compositum.to_string(),
                    if r.report.equal { "ok" } else { "MISMATCH" },
                    r.report.compared
                ),
                // sqrt D already lies in K
                Err(Error::ReduciblePolynomial(_)) => println!("K = {:<12} D = {d:>3}: skipped", k.label()),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}
