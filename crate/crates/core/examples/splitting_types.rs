//! Factoring x^8 - 3 modulo small primes and reading off how each prime
//! splits in Q(3^(1/8)).

use zeta_qsm::arith::{factor_mod_p, FpPoly, Poly};
use zeta_qsm::number_field::NumberField;

fn main() -> zeta_qsm::Result<()> {
    let f = Poly::from_i64(&[-3, 0, 0, 0, 0, 0, 0, 0, 1]);
    let k = NumberField::new("Q(3^(1/8))", f.clone(), Default::default())?;
    println!("disc(f) = {}", k.poly_discriminant());
    println!("primes dividing disc: {:?}", k.bad_primes());

    for p in [2u64, 3, 5, 7, 11, 13, 17, 41, 73, 97] {
        let fp = FpPoly::reduce(&f, p)?;
        let factors: Vec<String> = factor_mod_p(&fp)?
            .iter()
            .map(|(g, e)| if *e == 1 { format!("({g})") } else { format!("({g})^{e}") })
            .collect();
        let st = k.splitting_type(p)?;
        println!(
            "p = {p:>3}: {:<60} (e, f) = {}",
            factors.join(""),
            st.map_or("undetermined".into(), |s| format!("{:?}", s.pairs()))
        );
    }
    Ok(())
}
