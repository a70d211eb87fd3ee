//! Number fields `Q[x]/(f)` and the decomposition of rational primes.
//!
//! Splitting data comes from factoring `f` mod `p` (Dedekind-Kummer). That is
//! only trustworthy when `p` does not divide the index `[O_K : Z[theta]]`,
//! which holds automatically for `p` not dividing `disc(f)` and is decided by
//! the Dedekind criterion for the remaining primes. Primes that fail the
//! criterion and carry no user override are reported as undetermined.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::integer::{factor_bigint, gcd, is_prime};
use crate::arith::irreducible::{check_irreducible, Irreducibility};
use crate::arith::{factor_mod_p, FpPoly, Poly};
use crate::error::{Error, Result};

/// Ramification/inertia data `(e_i, f_i)` of the primes above `p`, sorted by
/// `f` then `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    pairs: Vec<(u32, u32)>,
}

impl SplittingType {
    pub fn new(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_by_key(|&(e, f)| (f, e));
        SplittingType { pairs }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// `sum e_i * f_i`, which equals the field degree.
    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|&(e, f)| e * f).sum()
    }

    pub fn inertia_degrees(&self) -> Vec<u32> {
        let mut fs: Vec<u32> = self.pairs.iter().map(|&(_, f)| f).collect();
        fs.sort_unstable();
        fs
    }

    pub fn is_unramified(&self) -> bool {
        self.pairs.iter().all(|&(e, _)| e == 1)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (e, g)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({e},{g})")?;
        }
        write!(f, "]")
    }
}

/// A prime ideal above `p`. `index` is its position among the primes above
/// `p`: the canonical order of the irreducible factors of `f mod p`, or the
/// order of the override list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub index: usize,
    pub e: u32,
    pub f: u32,
    /// The factor of `f mod p` this prime corresponds to, when known.
    pub residue_factor: Option<FpPoly>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }
}

type Decomposition = Option<Arc<Vec<PrimeIdeal>>>;

pub struct NumberField {
    label: String,
    poly: Poly,
    disc: BigInt,
    bad_primes: BTreeSet<u64>,
    overrides: BTreeMap<u64, SplittingType>,
    cache: RwLock<HashMap<u64, Decomposition>>,
}

impl Clone for NumberField {
    fn clone(&self) -> Self {
        NumberField {
            label: self.label.clone(),
            poly: self.poly.clone(),
            disc: self.disc.clone(),
            bad_primes: self.bad_primes.clone(),
            overrides: self.overrides.clone(),
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("label", &self.label)
            .field("poly", &self.poly.to_string())
            .field("disc", &self.disc)
            .field("bad_primes", &self.bad_primes)
            .field("overrides", &self.overrides)
            .finish()
    }
}

impl NumberField {
    /// Validates `poly` (monic, irreducible over Q), computes its
    /// discriminant and bad primes, and checks every override.
    pub fn new(
        label: impl Into<String>,
        poly: Poly,
        overrides: BTreeMap<u64, SplittingType>,
    ) -> Result<Self> {
        if poly.is_zero() || poly.degree() == 0 {
            return Err(Error::ZeroPolynomial);
        }
        if !poly.is_monic() {
            return Err(Error::NonMonic);
        }
        match check_irreducible(&poly)? {
            Irreducibility::Irreducible => {}
            Irreducibility::Reducible(g) => {
                return Err(Error::ReduciblePolynomial(format!("{poly} has factor {g}")))
            }
        }
        let degree = poly.degree() as u32;
        let disc = poly.discriminant()?;
        let bad_primes = factor_bigint(&disc)?.into_iter().map(|(p, _)| p).collect();
        for (&p, st) in &overrides {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if st.degree() != degree {
                return Err(Error::InvalidOverride { prime: p, sum: st.degree(), degree });
            }
        }
        Ok(NumberField {
            label: label.into(),
            poly,
            disc,
            bad_primes,
            overrides,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Q, represented by `f = x`.
    pub fn rationals() -> Self {
        NumberField::new("Q", Poly::x(), BTreeMap::new()).expect("x is irreducible")
    }

    /// `Q(sqrt d)` for a fundamental discriminant `d`, using the maximal-order
    /// generator: `x^2 - x + (1-d)/4` or `x^2 - d/4`.
    pub fn quadratic(label: impl Into<String>, d: i64) -> Result<Self> {
        let poly = if d.rem_euclid(4) == 1 {
            Poly::from_i64(&[(1 - d) / 4, -1, 1])
        } else {
            Poly::from_i64(&[-d / 4, 0, 1])
        };
        NumberField::new(label, poly, BTreeMap::new())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree() as u32
    }

    pub fn poly_discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn bad_primes(&self) -> &BTreeSet<u64> {
        &self.bad_primes
    }

    pub fn overrides(&self) -> &BTreeMap<u64, SplittingType> {
        &self.overrides
    }

    fn is_bad(&self, p: u64) -> bool {
        self.bad_primes.contains(&p)
    }

    /// Dedekind criterion: whether `p` does not divide `[O_K : Z[theta]]`.
    /// Only meaningful for `p | disc(f)`.
    pub fn is_regular_at(&self, p: u64) -> Result<bool> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !self.is_bad(p) {
            return Err(Error::NotBadPrime(p));
        }
        let fbar = FpPoly::reduce(&self.poly, p)?;
        let factors = factor_mod_p(&fbar)?;
        // g = product of distinct factors, h = fbar / g, both lifted.
        let mut g = Poly::from_i64(&[1]);
        let mut h = Poly::from_i64(&[1]);
        for (q, m) in &factors {
            let lift = q.lift();
            g = g.mul(&lift);
            for _ in 1..*m {
                h = h.mul(&lift);
            }
        }
        let diff = g.mul(&h).sub(&self.poly);
        let bp = BigInt::from(p);
        debug_assert!(diff.coeffs().iter().all(|c| (c % &bp).is_zero()));
        let quotient = Poly::new(diff.coeffs().iter().map(|c| c / &bp).collect());
        let fq = FpPoly::reduce(&quotient, p)?;
        let gq = FpPoly::reduce(&g, p)?;
        let hq = FpPoly::reduce(&h, p)?;
        let common = fq.gcd(&gq).gcd(&hq);
        Ok(common.degree() == 0 && !common.is_zero())
    }

    /// The primes above `p`, or `None` when `p` is undetermined.
    pub fn prime_ideals(&self, p: u64) -> Result<Option<Arc<Vec<PrimeIdeal>>>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if let Some(hit) = self.cache.read().expect("cache lock").get(&p) {
            return Ok(hit.clone());
        }
        let computed = self.compute_prime_ideals(p)?.map(Arc::new);
        self.cache
            .write()
            .expect("cache lock")
            .entry(p)
            .or_insert(computed.clone());
        Ok(computed)
    }

    fn compute_prime_ideals(&self, p: u64) -> Result<Option<Vec<PrimeIdeal>>> {
        if self.degree() == 1 {
            return Ok(Some(vec![PrimeIdeal { p, index: 0, e: 1, f: 1, residue_factor: None }]));
        }
        if self.is_bad(p) {
            if let Some(st) = self.overrides.get(&p) {
                return Ok(Some(
                    st.pairs()
                        .iter()
                        .enumerate()
                        .map(|(index, &(e, f))| PrimeIdeal { p, index, e, f, residue_factor: None })
                        .collect(),
                ));
            }
            if !self.is_regular_at(p)? {
                return Ok(None);
            }
        }
        let fbar = FpPoly::reduce(&self.poly, p)?;
        Ok(Some(
            factor_mod_p(&fbar)?
                .into_iter()
                .enumerate()
                .map(|(index, (g, e))| PrimeIdeal {
                    p,
                    index,
                    e,
                    f: g.degree() as u32,
                    residue_factor: Some(g),
                })
                .collect(),
        ))
    }

    /// Splitting type of `p`, or `None` when it cannot be determined.
    pub fn splitting_type(&self, p: u64) -> Result<Option<SplittingType>> {
        Ok(self
            .prime_ideals(p)?
            .map(|ps| SplittingType::new(ps.iter().map(|q| (q.e, q.f)).collect())))
    }

    /// Cyclotomic Artin image of an ideal of this field with the given norm.
    pub fn frobenius_residue(&self, ideal_norm: u64, m: u64) -> Result<u64> {
        frobenius_residue(ideal_norm, m)
    }

    /// Bad primes whose splitting is undetermined.
    pub fn undetermined_primes(&self) -> Result<BTreeSet<u64>> {
        let mut out = BTreeSet::new();
        for &p in &self.bad_primes {
            if self.prime_ideals(p)?.is_none() {
                out.insert(p);
            }
        }
        Ok(out)
    }
}

/// Image of an ideal of norm `ideal_norm` in `Gal(Q(zeta_m)/Q) = (Z/m)*`:
/// the Frobenius of an ideal prime to `m` acts as `zeta -> zeta^{N(a)}`, so
/// the cyclotomic Artin symbol is just the norm mod `m`. Independent of the
/// field.
pub fn frobenius_residue(ideal_norm: u64, m: u64) -> Result<u64> {
    if m == 0 || gcd(ideal_norm, m) != 1 {
        return Err(Error::NotCoprime { value: ideal_norm, modulus: m });
    }
    Ok(ideal_norm % m)
}
