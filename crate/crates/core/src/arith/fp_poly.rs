//! Polynomials over the prime field F_p and their factorization.
//!
//! Factorization runs square-free decomposition, distinct-degree
//! factorization and Cantor-Zassenhaus equal-degree splitting. The random
//! splitting polynomials come from a fixed-seed ChaCha stream, so results
//! are reproducible; output order is canonical anyway.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::integer::{inv_mod, is_prime, mul_mod};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    /// Builds a polynomial from residues (reduced mod `p`). Fails if `p` is
    /// not prime.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::from_reduced(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    fn from_reduced(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    /// Reduction of an integer polynomial mod `p`.
    pub fn reduce(f: &Poly, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let bp = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let r = ((c % &bp) + &bp) % &bp;
                r.to_u64().expect("residue fits u64")
            })
            .collect();
        Ok(Self::from_reduced(p, coeffs))
    }

    /// Lift to an integer polynomial with coefficients in `[0, p)`.
    pub fn lift(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn constant(&self, c: u64) -> Self {
        Self::from_reduced(self.p, vec![c % self.p])
    }

    fn one(&self) -> Self {
        self.constant(1)
    }

    fn x(&self) -> Self {
        Self::from_reduced(self.p, vec![0, 1])
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let p = self.p;
        Self::from_reduced(
            p,
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(0);
                    let b = o.coeffs.get(i).copied().unwrap_or(0);
                    (a + b) % p
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let p = self.p;
        Self::from_reduced(
            p,
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(0);
                    let b = o.coeffs.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::from_reduced(self.p, Vec::new());
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::from_reduced(p, out)
    }

    fn scale(&self, k: u64) -> Self {
        let p = self.p;
        Self::from_reduced(p, self.coeffs.iter().map(|&c| mul_mod(c, k, p)).collect())
    }

    pub fn make_monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => self.scale(inv_mod(lc, self.p).expect("nonzero mod prime")),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.degree();
        let inv_lc = inv_mod(*d.coeffs.last().unwrap(), p).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::from_reduced(p, Vec::new()), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv_lc, p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - mul_mod(c, dc, p)) % p;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_reduced(p, quot), Self::from_reduced(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::from_reduced(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    fn pow_mod_big(&self, exp: &BigUint, modulus: &Self) -> Self {
        let mut acc = self.one();
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    fn pow_mod(&self, exp: u64, modulus: &Self) -> Self {
        self.pow_mod_big(&BigUint::from(exp), modulus)
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        // Frobenius is the identity on F_p, so coefficients stay put.
        Self::from_reduced(
            self.p,
            self.coeffs.iter().step_by(p).copied().collect(),
        )
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }
}

impl Ord for FpPoly {
    /// Canonical order: degree, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.lift(), self.p)
    }
}

/// Square-free decomposition of a monic polynomial: `(g_i, i)` with
/// `f = prod g_i^i`, each `g_i` square-free and pairwise coprime.
fn square_free(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in square_free(&f.pth_root()) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.degree() > 0 {
            out.push((z.make_monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if c.degree() > 0 {
        for (g, m) in square_free(&c.make_monic().pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a square-free monic polynomial.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = f.x();
    let mut xq = x.clone();
    let mut d = 0;
    while rest.degree() >= 2 * (d + 1) {
        d += 1;
        xq = xq.pow_mod(f.p, &rest);
        let g = rest.gcd(&xq.sub(&x));
        if g.degree() > 0 {
            rest = rest.div_rem(&g).0;
            xq = xq.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((rest.make_monic(), deg));
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d` into its factors.
fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.degree();
    if n == d {
        return vec![f.make_monic()];
    }
    let p = f.p;
    loop {
        let coeffs: Vec<u64> = (0..n).map(|_| rng.random_range(0..p)).collect();
        let a = FpPoly::from_reduced(p, coeffs);
        if a.degree() == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(d-1)).
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
            a.pow_mod_big(&e, f).sub(&f.one())
        };
        let g = f.gcd(&candidate);
        if g.degree() > 0 && g.degree() < n {
            let h = f.div_rem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h.make_monic(), d, rng));
            return out;
        }
    }
}

/// Factors a monic polynomial over F_p into monic irreducibles with
/// multiplicities, sorted canonically (degree, then coefficients).
pub fn factor_mod_p(f: &FpPoly) -> Result<Vec<(FpPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d ^ f.p);
    let mut out = Vec::new();
    for (g, mult) in square_free(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Degrees of the irreducible factors, with multiplicity, ascending.
pub fn factor_degrees(f: &FpPoly) -> Result<Vec<usize>> {
    let mut degs: Vec<usize> = factor_mod_p(f)?
        .into_iter()
        .flat_map(|(g, m)| std::iter::repeat_n(g.degree(), m as usize))
        .collect();
    degs.sort_unstable();
    Ok(degs)
}

impl FpPoly {
    /// Whether `self` has a repeated irreducible factor.
    pub fn has_repeated_factor(&self) -> bool {
        self.degree() > 0 && self.gcd(&self.derivative()).degree() > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec()).unwrap()
    }

    fn product(factors: &[(FpPoly, u32)], p: u64) -> FpPoly {
        let mut acc = fp(p, &[1]);
        for (g, m) in factors {
            for _ in 0..*m {
                acc = acc.mul(g);
            }
        }
        acc
    }

    /// Exhaustive irreducibility: no monic factor of degree 1..=n/2.
    fn brute_irreducible(f: &FpPoly) -> bool {
        let p = f.p;
        let n = f.degree();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    c.push(k % p);
                    k /= p;
                }
                c.push(1);
                if f.rem(&fp(p, &c)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            factor_mod_p(&fp(5, &[1, 0, 1])).unwrap(),
            vec![(fp(5, &[2, 1]), 1), (fp(5, &[3, 1]), 1)]
        );
        // roots 2 and 3: x - 2 = x + 3, x - 3 = x + 2
        assert_eq!(fp(5, &[2, 1]).coeffs(), &[2, 1]);
        assert_eq!(factor_mod_p(&fp(2, &[1, 0, 1])).unwrap(), vec![(fp(2, &[1, 1]), 2)]);
        assert_eq!(factor_mod_p(&fp(3, &[1, 0, 1])).unwrap(), vec![(fp(3, &[1, 0, 1]), 1)]);
    }

    #[test]
    fn x2_plus_1_mod_5_roots_by_exhaustion() {
        let roots: Vec<u64> = (0..5).filter(|x| (x * x + 1) % 5 == 0).collect();
        assert_eq!(roots, vec![2, 3]);
    }

    #[test]
    fn errors() {
        assert_eq!(factor_mod_p(&fp(5, &[])), Err(Error::ZeroPolynomial));
        assert_eq!(factor_mod_p(&fp(5, &[1, 2])), Err(Error::NonMonic));
        assert_eq!(FpPoly::new(6, vec![1]), Err(Error::NotPrime(6)));
    }

    #[test]
    fn x8_plus_1_mod_2_is_eighth_power() {
        let f = fp(2, &[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(factor_mod_p(&f).unwrap(), vec![(fp(2, &[1, 1]), 8)]);
    }

    #[test]
    fn inseparable_power_in_char_3() {
        // (x^2 + 1)^3 (x + 1)^4 mod 3
        let a = fp(3, &[1, 0, 1]);
        let b = fp(3, &[1, 1]);
        let f = product(&[(a.clone(), 3), (b.clone(), 4)], 3);
        assert_eq!(factor_mod_p(&f).unwrap(), vec![(b, 4), (a, 3)]);
    }

    const SMALL_PRIMES: [u64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];

    proptest! {
        #[test]
        fn product_of_factors_is_input(
            pi in 0usize..25,
            body in proptest::collection::vec(0u64..97, 0..8),
        ) {
            let p = SMALL_PRIMES[pi];
            let mut c = body;
            c.push(1);
            let f = fp(p, &c);
            let factors = factor_mod_p(&f).unwrap();
            prop_assert_eq!(product(&factors, p), f);
            for w in factors.windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for (g, _) in &factors {
                prop_assert!(g.is_monic());
                if p.pow(g.degree() as u32 / 2) <= 100_000 {
                    prop_assert!(brute_irreducible(g));
                }
            }
        }
    }
}
