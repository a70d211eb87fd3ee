//! Class groups of imaginary quadratic fields through reduced forms, and the
//! split of ideal counts by class.

use zeta_qsm::class_group::ClassGroup;

fn main() -> zeta_qsm::Result<()> {
    for d in [-23i64, -84, -56, -163, -4 * 5 * 7 * 11] {
        let cg = ClassGroup::new(d)?;
        let forms: Vec<String> = cg.forms().iter().map(|f| f.to_string()).collect();
        println!("D = {d}: h = {}, structure {:?}", cg.class_number(), cg.structure());
        println!("  forms: {}", forms.join(" "));
    }

    let cg = ClassGroup::new(-23)?;
    let counts = cg.ideal_counts_up_to(30);
    for (i, f) in cg.forms().iter().enumerate() {
        let row: Vec<String> = (1..=30).map(|n| counts[i][n].to_string()).collect();
        println!("ideals in class {f}, n <= 30: {}", row.join(""));
    }
    for chi in cg.characters() {
        let l = cg.class_char_l_coeffs(&chi, 12)?;
        let row: Vec<String> = (1..=12).map(|n| l.get(n).unwrap().to_string()).collect();
        println!("L(chi = {:?}): {}", chi.exps, row.join(", "));
    }
    Ok(())
}
