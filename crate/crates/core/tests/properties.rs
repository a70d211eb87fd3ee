use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use zeta_qsm::arith::integer::{gcd, pow_mod, primes_up_to};
use zeta_qsm::arith::{kronecker_symbol, FpPoly, Poly};
use zeta_qsm::io::load_field;
use zeta_qsm::lseries::{local_ideal_count, zeta_coeffs};
use zeta_qsm::number_field::NumberField;

const CORPUS: [&str; 7] = ["q", "gauss", "sqrt_m2", "k8_3", "k8_48", "k8_18", "k8_288"];

fn field(name: &str) -> NumberField {
    load_field(format!("{}/data/{name}.field", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn primes_to_100() -> Vec<u64> {
    primes_up_to(100)
}

/// Euler's criterion, valid for odd primes.
fn legendre_oracle(a: i64, p: u64) -> i32 {
    let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn discriminant_vanishes_iff_repeated_factor(
        body in proptest::collection::vec(-20i64..=20, 2..7),
        pi in 0usize..25,
    ) {
        let p = primes_to_100()[pi];
        let mut c = body;
        c.push(1);
        let f = Poly::from_i64(&c);
        let disc = f.discriminant().unwrap();
        let fp = FpPoly::reduce(&f, p).unwrap();
        prop_assert_eq!(disc.mod_floor(&BigInt::from(p)) == BigInt::from(0), fp.has_repeated_factor());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn kronecker_is_multiplicative(a in -500i64..500, b in -500i64..500, m in -300i64..300, n in -300i64..300) {
        prop_assume!(m != 0 && n != 0);
        prop_assert_eq!(kronecker_symbol(a, m * n), kronecker_symbol(a, m) * kronecker_symbol(a, n));
        prop_assert_eq!(kronecker_symbol(a * b, n), kronecker_symbol(a, n) * kronecker_symbol(b, n));
    }

    #[test]
    fn kronecker_matches_euler_criterion(a in -10_000i64..10_000, pi in 1usize..25) {
        let p = primes_to_100()[pi];
        prop_assert_eq!(kronecker_symbol(a, p as i64), legendre_oracle(a, p));
    }
}

#[test]
fn zeta_coefficients_are_multiplicative() {
    for name in CORPUS {
        let z = zeta_coeffs(&field(name), 2000).unwrap();
        for m in 2..=2000u64 {
            for n in 2..=2000 / m {
                if gcd(m, n) != 1 {
                    continue;
                }
                if let (Some(a), Some(b), Some(c)) = (z.integer(m), z.integer(n), z.integer(m * n)) {
                    assert_eq!(c, a * b, "{name}: a_{m} a_{n} != a_{}", m * n);
                }
            }
        }
    }
}

#[test]
fn prime_power_coefficients_match_local_counts() {
    for name in CORPUS {
        let k = field(name);
        let z = zeta_coeffs(&k, 2000).unwrap();
        for p in primes_up_to(2000) {
            let Some(st) = k.splitting_type(p).unwrap() else {
                assert!(z.get(p).is_none(), "{name}: undetermined p = {p} not masked");
                continue;
            };
            let mut q = p;
            let mut e = 1;
            while q <= 2000 {
                assert_eq!(z.integer(q), Some(local_ideal_count(&st, e) as i64), "{name}: a_{q}");
                q *= p;
                e += 1;
            }
        }
    }
}

#[test]
fn splitting_invariants() {
    for name in CORPUS {
        let k = field(name);
        for p in primes_up_to(10_000) {
            let Some(st) = k.splitting_type(p).unwrap() else {
                assert!(k.bad_primes().contains(&p));
                continue;
            };
            assert_eq!(st.degree(), k.degree(), "{name}, p = {p}");
            if !st.is_unramified() {
                assert!(k.bad_primes().contains(&p), "{name}: ramified p = {p} does not divide disc");
            }
            if !k.bad_primes().contains(&p) {
                // unramified: the factor degrees of f mod p
                let fp = FpPoly::reduce(k.poly(), p).unwrap();
                let mut degs = zeta_qsm::arith::fp_poly::factor_degrees(&fp).unwrap();
                degs.sort_unstable();
                let mut fs: Vec<usize> = st.inertia_degrees().into_iter().map(|f| f as usize).collect();
                fs.sort_unstable();
                assert_eq!(degs, fs);
                assert!(st.is_unramified());
            }
        }
    }
}

/// Independent oracle for Q(i): count pairs (x, y) with x^2 + y^2 = n up to
/// units, which equals a_n.
#[test]
fn gaussian_counts_from_lattice_points() {
    let z = zeta_coeffs(&field("gauss"), 3000).unwrap();
    let mut reps: BTreeMap<u64, i64> = BTreeMap::new();
    for x in -60i64..=60 {
        for y in -60i64..=60 {
            let n = (x * x + y * y) as u64;
            if n > 0 && n <= 3000 {
                *reps.entry(n).or_default() += 1;
            }
        }
    }
    for n in 1..=3000u64 {
        assert_eq!(z.integer(n), Some(reps.get(&n).copied().unwrap_or(0) / 4), "n = {n}");
    }
}
