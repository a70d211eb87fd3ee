//! Downloads a defining polynomial by label into a field file.
//!
//!     cargo run --example fetch_field -- 2.0.4.1 gauss.field

use zeta_qsm::fetch::{endpoint, fetch_field};
use zeta_qsm::io::load_field;

fn main() -> zeta_qsm::Result<()> {
    let mut args = std::env::args().skip(1);
    let label = args.next().unwrap_or_else(|| "2.0.4.1".into());
    let out = args.next().unwrap_or_else(|| format!("{label}.field"));
    let url = fetch_field(&endpoint(), &label, out.as_ref())?;
    let k = load_field(&out)?;
    println!("{url}\n{} -> {out}: {}", label, k.poly());
    Ok(())
}
