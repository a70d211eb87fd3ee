//! Machine-integer number theory: primality, factorization, Kronecker symbol.
//!
//! Everything here works on `u64`/`i64`. Factorization of larger values goes
//! through [`factor_bigint`], which strips small primes by trial division and
//! requires the cofactor to fit in 64 bits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin, valid for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn rho(n: u64) -> u64 {
    let f = |x: u64, c: u64| (mul_mod(x, x, n) + c) % n;
    for c in 1..n {
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x, c);
            y = f(f(y, c), c);
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("rho failed on composite {n}")
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization of `n >= 1` as sorted `(prime, exponent)` pairs.
/// `factor_integer(1)` is empty.
pub fn factor_integer(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor_integer needs n >= 1");
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    factor_into(n, &mut primes);
    collect_powers(primes)
}

fn collect_powers(mut primes: Vec<u64>) -> Vec<(u64, u32)> {
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Factor a nonzero big integer (sign ignored). Primes below 10^6 are removed
/// by trial division; the remaining cofactor must be below 2^64.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut m = n.abs();
    if m.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut primes = Vec::new();
    for p in primes_up_to(1_000_000) {
        if m.is_one() {
            break;
        }
        let bp = BigInt::from(p);
        while (&m % &bp).is_zero() {
            m /= &bp;
            primes.push(p);
        }
        if m.to_u64().is_some() {
            break;
        }
    }
    let rest = m.to_u64().ok_or_else(|| Error::TooLarge(n.to_string()))?;
    let mut out = collect_powers(primes);
    for (p, e) in factor_integer(rest) {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, f)) => *f += e,
            None => out.push((p, e)),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for `0..=n` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Kronecker symbol `(a/n)`, extended to all integers `n`.
pub fn kronecker_symbol(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut sign = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            sign = -sign;
        }
    }
    // Jacobi symbol (a/n) with n odd and positive.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Whether `d` is a fundamental discriminant (`d = 1` excluded).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: u64| factor_integer(m).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Smallest primitive root modulo an odd prime `p` (or 1 for p = 2).
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let order_factors: Vec<u64> = factor_integer(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| order_factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime modulus has a primitive root")
}

pub fn totient(n: u64) -> u64 {
    factor_integer(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
