//! Exact Dirichlet-series coefficients: Dedekind zeta functions, twists by
//! Dirichlet characters, convolution, and the comparisons built on them.

mod character;

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;

pub use character::{fundamental_discriminant_of, DirichletChar};

use crate::arith::integer::{gcd, primes_up_to, smallest_prime_factors};
use crate::arith::Poly;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::number_field::{NumberField, SplittingType};

/// Coefficients `a_1..a_N` of a Dirichlet series with values in `Z[zeta_r]`.
/// Indices divisible by a masked prime carry no value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSeries {
    label: String,
    order: u32,
    coeffs: Vec<Option<Cyclo>>,
    mask: BTreeSet<u64>,
}

impl CoeffSeries {
    /// Builds a series from explicit values (`values[0]` is `a_1`). Entries
    /// divisible by a masked prime are dropped.
    pub fn from_values(label: impl Into<String>, order: u32, values: Vec<Cyclo>, mask: BTreeSet<u64>) -> Self {
        let coeffs = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let n = i as u64 + 1;
                (!divisible_by_any(n, &mask)).then(|| v.lift(order))
            })
            .collect();
        CoeffSeries { label: label.into(), order, coeffs, mask }
    }

    pub fn from_integers(label: impl Into<String>, values: &[i64]) -> Self {
        CoeffSeries::from_values(
            label,
            1,
            values.iter().map(|&v| Cyclo::from_int(1, v)).collect(),
            BTreeSet::new(),
        )
    }

    /// The Dirichlet-convolution identity `[1, 0, 0, ...]`.
    pub fn delta(limit: usize) -> Self {
        let mut v = vec![0i64; limit];
        if limit > 0 {
            v[0] = 1;
        }
        CoeffSeries::from_integers("delta", &v)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn limit(&self) -> usize {
        self.coeffs.len()
    }

    /// Cyclotomic order of the value ring.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn mask(&self) -> &BTreeSet<u64> {
        &self.mask
    }

    pub fn get(&self, n: u64) -> Option<&Cyclo> {
        self.coeffs.get((n as usize).checked_sub(1)?)?.as_ref()
    }

    pub fn is_masked(&self, n: u64) -> bool {
        self.get(n).is_none()
    }

    /// Integer value at `n`, if unmasked and rational.
    pub fn integer(&self, n: u64) -> Option<i64> {
        self.get(n).and_then(Cyclo::as_integer)
    }

    /// `(n, value)` for every unmasked index.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &Cyclo)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (i as u64 + 1, c)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Adds primes to the mask, blanking the affected coefficients.
    pub fn masked_by(mut self, extra: &BTreeSet<u64>) -> Self {
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            if divisible_by_any(i as u64 + 1, extra) {
                *c = None;
            }
        }
        self.mask.extend(extra);
        self
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }
}

fn lcm_order(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

pub(crate) fn divisible_by_any(n: u64, primes: &BTreeSet<u64>) -> bool {
    primes.iter().any(|&p| n.is_multiple_of(p))
}

/// Number of ideals of norm `p^k` above a prime with the given splitting:
/// `#{x >= 0 : sum f_i x_i = k}`. Ramification indices play no role.
pub fn local_ideal_count(st: &SplittingType, k: u32) -> u64 {
    let k = k as usize;
    let mut ways = vec![0u64; k + 1];
    ways[0] = 1;
    for &(_, f) in st.pairs() {
        let f = f as usize;
        for s in f..=k {
            ways[s] += ways[s - f];
        }
    }
    ways[k]
}

/// Ideal counts `a_n` of `zeta_K` for `n <= limit`. Undetermined primes are
/// masked. Splitting data for the primes is gathered in parallel; the merge
/// runs in increasing `n`, so the output does not depend on thread count.
pub fn zeta_coeffs(field: &NumberField, limit: usize) -> Result<CoeffSeries> {
    let primes = primes_up_to(limit as u64);
    let splits: Vec<Result<Option<SplittingType>>> =
        primes.par_iter().map(|&p| field.splitting_type(p)).collect();
    let mut local: Vec<Option<Vec<u64>>> = vec![None; limit + 1];
    let mut mask = BTreeSet::new();
    for (&p, st) in primes.iter().zip(splits) {
        match st? {
            Some(st) => {
                let mut counts = vec![1u64];
                let mut pk = p;
                let mut k = 1;
                while pk <= limit as u64 {
                    counts.push(local_ideal_count(&st, k));
                    k += 1;
                    pk = pk.saturating_mul(p);
                }
                local[p as usize] = Some(counts);
            }
            None => {
                mask.insert(p);
            }
        }
    }
    let spf = smallest_prime_factors(limit);
    let mut values: Vec<Option<i64>> = vec![None; limit + 1];
    if limit >= 1 {
        values[1] = Some(1);
    }
    for n in 2..=limit {
        let p = spf[n] as usize;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        values[n] = match (&local[p], values[m]) {
            (Some(counts), Some(rest)) => Some(rest * counts[k] as i64),
            _ => None,
        };
    }
    let coeffs = values[1..]
        .iter()
        .map(|v| v.map(|v| Cyclo::from_int(1, v)))
        .collect();
    Ok(CoeffSeries { label: field.label().to_string(), order: 1, coeffs, mask })
}

/// Twist by a Dirichlet character: `c_n = a_n chi(n)`, with `c_n = 0` when
/// `gcd(n, m) > 1`. The cyclotomic Artin image of an ideal is its norm mod
/// `m`, so this is `L_K(chi o N, s)`.
pub fn twist_coeffs(z: &CoeffSeries, chi: &DirichletChar) -> CoeffSeries {
    let order = lcm_order(z.order, chi.order());
    let coeffs = z
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_ref()
                .map(|c| c.lift(order).mul(&chi.value(i as u64 + 1).lift(order)))
        })
        .collect();
    CoeffSeries {
        label: format!("{}*chi_{}", z.label, chi.modulus()),
        order,
        coeffs,
        mask: z.mask.clone(),
    }
}

/// `(u * v)_n = sum_{d | n} u_d v_{n/d}`. The result is masked wherever
/// either input is, so its mask is the union of both masks.
pub fn dirichlet_convolve(u: &CoeffSeries, v: &CoeffSeries) -> Result<CoeffSeries> {
    if u.limit() != v.limit() {
        return Err(Error::LimitMismatch(u.limit(), v.limit()));
    }
    let limit = u.limit();
    let order = lcm_order(u.order, v.order);
    let mask: BTreeSet<u64> = u.mask.union(&v.mask).copied().collect();
    let mut acc: Vec<Cyclo> = vec![Cyclo::zero(order); limit];
    for d in 1..=limit {
        let Some(ud) = u.get(d as u64) else { continue };
        let ud = ud.lift(order);
        for q in 1..=limit / d {
            if let Some(vq) = v.get(q as u64) {
                let idx = d * q - 1;
                acc[idx] = acc[idx].add(&ud.mul(&vq.lift(order)));
            }
        }
    }
    Ok(CoeffSeries::from_values(
        format!("{}*{}", u.label, v.label),
        order,
        acc,
        mask,
    ))
}

/// Result of comparing two coefficient series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub equal: bool,
    pub first_mismatch: Option<u64>,
    pub masked: BTreeSet<u64>,
    /// Number of indices compared (unmasked on both sides).
    pub compared: usize,
}

/// Compares two series on indices unmasked for both, after additionally
/// masking `extra`.
pub fn compare_series(u: &CoeffSeries, v: &CoeffSeries, extra: &BTreeSet<u64>) -> Result<EquivReport> {
    if u.limit() != v.limit() {
        return Err(Error::LimitMismatch(u.limit(), v.limit()));
    }
    let masked: BTreeSet<u64> = u.mask.iter().chain(&v.mask).chain(extra).copied().collect();
    let order = lcm_order(u.order, v.order);
    let mut compared = 0;
    for n in 1..=u.limit() as u64 {
        if divisible_by_any(n, &masked) {
            continue;
        }
        let (Some(a), Some(b)) = (u.get(n), v.get(n)) else { continue };
        compared += 1;
        if a.lift(order) != b.lift(order) {
            return Ok(EquivReport { equal: false, first_mismatch: Some(n), masked, compared });
        }
    }
    Ok(EquivReport { equal: true, first_mismatch: None, masked, compared })
}

/// Coefficientwise comparison of `zeta_K` and `zeta_L` up to `limit`.
pub fn equiv_check(k: &NumberField, l: &NumberField, limit: usize) -> Result<EquivReport> {
    equiv_check_masked(k, l, limit, &BTreeSet::new())
}

/// [`equiv_check`] with additional primes excluded from the comparison.
pub fn equiv_check_masked(
    k: &NumberField,
    l: &NumberField,
    limit: usize,
    extra: &BTreeSet<u64>,
) -> Result<EquivReport> {
    compare_series(&zeta_coeffs(k, limit)?, &zeta_coeffs(l, limit)?, extra)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 1.0 {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(())
}

/// Neumaier-compensated accumulator; terms are added in the caller's order.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `sum_{n <= N, unmasked} a_n n^{-beta}` for a real-valued series, summed
/// in increasing `n` with compensation.
pub fn partial_sum(z: &CoeffSeries, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !z.is_real() {
        return Err(Error::InvalidCharacter(format!(
            "series {} has values of order {}; use partial_sum_complex",
            z.label, z.order
        )));
    }
    let mut acc = CompensatedSum::default();
    for (n, c) in z.iter() {
        let a = c.as_integer().expect("real series");
        if a != 0 {
            acc.add(a as f64 * (n as f64).powf(-beta));
        }
    }
    Ok(acc.value())
}

/// Complex partial sum, compensated separately in each component.
pub fn partial_sum_complex(z: &CoeffSeries, beta: f64) -> Result<Complex64> {
    check_beta(beta)?;
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (n, c) in z.iter() {
        if c.is_zero() {
            continue;
        }
        let w = c.to_complex() * (n as f64).powf(-beta);
        re.add(w.re);
        im.add(w.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Characteristic polynomial of `theta + sqrt d`, `Res_y(f(y), (x - y)^2 - d)`.
/// It defines `K(sqrt d)` provided `sqrt d` is not already in `K`.
pub fn compositum_poly(f: &Poly, d: i64) -> Poly {
    f.compositum_with_sqrt(d)
}

/// Outcome of an Artin-factorization check `zeta_{K(sqrt D)} = zeta_K L_K(chi_D)`.
#[derive(Clone, Debug)]
pub struct ArtinReport {
    pub compositum: Poly,
    pub report: EquivReport,
}

/// Compares `zeta_{K(sqrt d)}` against `zeta_K * L_K(chi_d)` up to `limit`.
///
/// `sqrt d` must not lie in `K` (not checked here; construction of the
/// compositum fails if its polynomial is reducible). Primes dividing both
/// the conductor of `chi_d` and `disc(f)` are masked: above them the
/// quadratic character of `K(sqrt d)/K` need not vanish, so it differs from
/// `chi_d o N`.
pub fn artin_factorization_check(field: &NumberField, d: i64, limit: usize) -> Result<ArtinReport> {
    let chi = DirichletChar::quadratic(d)?;
    let comp_poly = compositum_poly(field.poly(), d);
    let comp = NumberField::new(
        format!("{}(sqrt {d})", field.label()),
        comp_poly.clone(),
        Default::default(),
    )?;
    let zk = zeta_coeffs(field, limit)?;
    let product = dirichlet_convolve(&zk, &twist_coeffs(&zk, &chi))?;
    let zkm = zeta_coeffs(&comp, limit)?;
    let disc = field.poly_discriminant();
    let shared: BTreeSet<u64> = crate::arith::integer::factor_integer(chi.modulus())
        .into_iter()
        .map(|(p, _)| p)
        .filter(|&p| (disc % num_bigint::BigInt::from(p)) == num_bigint::BigInt::from(0))
        .collect();
    Ok(ArtinReport { compositum: comp_poly, report: compare_series(&zkm, &product, &shared)? })
}

/// Whether `gcd(n, m) == 1`.
pub fn coprime(n: u64, m: u64) -> bool {
    gcd(n, m) == 1
}
