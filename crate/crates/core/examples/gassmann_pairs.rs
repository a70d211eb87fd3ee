//! Gassmann triples: subgroups meeting every conjugacy class equally often
//! without being conjugate.

use zeta_qsm::gassmann::{gassmann_equivalent, splitting_from_frobenius};
use zeta_qsm::io::load_group;

fn main() -> zeta_qsm::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for (file, a, b) in [("fano.group", "points", "lines"), ("order32.group", "h1", "h2")] {
        let (g, subs) = load_group(format!("{dir}/{file}"))?;
        let (h1, h2) = (&subs[a], &subs[b]);
        let r = gassmann_equivalent(&g, h1, h2)?;
        println!(
            "{file}: |G| = {}, |{a}| = {}, |{b}| = {}, {} classes",
            g.order(),
            h1.order(),
            h2.order(),
            g.classes().len()
        );
        println!("  equivalent = {}, conjugate = {}", r.equivalent, r.conjugate);
        // same cycle type of Frobenius on both coset spaces
        for (i, class) in g.classes().iter().enumerate() {
            let x = class[0];
            println!(
                "  class {i:>2} (size {:>2}): G/{a} f = {:?}  G/{b} f = {:?}",
                class.len(),
                splitting_from_frobenius(&g, h1, x)?.inertia_degrees(),
                splitting_from_frobenius(&g, h2, x)?.inertia_degrees()
            );
        }
    }
    Ok(())
}
