//! Counting ideals by norm and cyclotomic Frobenius, the counting identity
//! between two fields, and norm-preserving matchings of ideals.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::integer::{gcd, primes_up_to, totient};
use crate::error::{Error, Result};
use crate::ideal::{enumerate_ideals, ideals_of_norm, IdealVec, PrimeLabel};
use crate::lseries::{divisible_by_any, equiv_check_masked};
use crate::number_field::{frobenius_residue, NumberField};

/// For a modulus `m` and a norm `n`: the number of ideals of norm `n` in each
/// residue class `gamma` of `(Z/m)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobCount {
    pub modulus: u64,
    pub norm: u64,
    pub table: BTreeMap<u64, u64>,
}

impl FrobCount {
    pub fn total(&self) -> u64 {
        self.table.values().sum()
    }

    /// Residue classes with a nonzero count.
    pub fn support(&self) -> Vec<u64> {
        self.table.iter().filter(|(_, &c)| c > 0).map(|(&g, _)| g).collect()
    }
}

pub fn frob_count(field: &NumberField, m: u64, n: u64) -> Result<FrobCount> {
    if m == 0 || gcd(n, m) != 1 {
        return Err(Error::NotCoprime { value: n, modulus: m });
    }
    let ideals = ideals_of_norm(field, n)?.ok_or(Error::MaskedIndex(n))?;
    let mut table: BTreeMap<u64, u64> = (0..m).filter(|&g| gcd(g, m) == 1).map(|g| (g % m, 0)).collect();
    if m == 1 {
        table.insert(0, 0);
    }
    for a in &ideals {
        *table.get_mut(&frobenius_residue(a.norm(), m)?).expect("unit residue") += 1;
    }
    debug_assert_eq!(table.len() as u64, totient(m).max(1));
    Ok(FrobCount { modulus: m, norm: n, table })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub pass: bool,
    /// First `(n, gamma)` where the counts differ.
    pub first_failure: Option<(u64, u64)>,
    pub masked: BTreeSet<u64>,
    pub checked: usize,
}

/// `b_{K,n}(gamma) = b_{L,n}(gamma)` for every unmasked `n <= limit` prime to
/// `m` and every `gamma` in `(Z/m)*`.
pub fn count_identity_check(
    k: &NumberField,
    l: &NumberField,
    m: u64,
    limit: u64,
    extra_mask: &BTreeSet<u64>,
) -> Result<CountReport> {
    let mut masked = extra_mask.clone();
    for f in [k, l] {
        masked.extend(f.undetermined_primes()?.into_iter().filter(|&p| p <= limit));
    }
    let mut checked = 0;
    for n in 1..=limit {
        if gcd(n, m) != 1 || divisible_by_any(n, &masked) {
            continue;
        }
        let (a, b) = (frob_count(k, m, n)?, frob_count(l, m, n)?);
        checked += 1;
        if let Some((&g, _)) = a.table.iter().find(|(g, c)| b.table.get(g) != Some(c)) {
            return Ok(CountReport { pass: false, first_failure: Some((n, g)), masked, checked });
        }
    }
    Ok(CountReport { pass: true, first_failure: None, masked, checked })
}

/// A norm-preserving matching of ideals `J_K -> J_L`, built prime by prime
/// and extended multiplicatively. At the cyclotomic level every such
/// matching is compatible with the Artin map, since Frobenius is the norm
/// mod `m`; this is one such matching, not a canonical one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psi {
    pub primes: BTreeMap<PrimeLabel, PrimeLabel>,
    pub mask: BTreeSet<u64>,
    pub limit: u64,
}

impl Psi {
    pub fn apply(&self, a: &IdealVec) -> Option<IdealVec> {
        let mut exps = Vec::new();
        for (l, &e) in a.exps() {
            exps.push((*self.primes.get(l)?, e));
        }
        Some(IdealVec::from_exps(exps))
    }

    /// `(p, K index, f, L index)` rows.
    pub fn rows(&self) -> Vec<(u64, usize, u32, usize)> {
        self.primes.iter().map(|(a, b)| (a.p, a.index, a.f, b.index)).collect()
    }
}

/// Matches the primes above each unmasked `p <= limit` with equal inertia
/// degree, in factor order. Fails with `NotEquivalent` if the zeta
/// coefficients differ on the range and `Obstruction(p)` if the inertia
/// degrees above `p` differ.
pub fn build_psi(k: &NumberField, l: &NumberField, limit: u64, extra_mask: &BTreeSet<u64>) -> Result<Psi> {
    let report = equiv_check_masked(k, l, limit as usize, extra_mask)?;
    if let Some(n) = report.first_mismatch {
        return Err(Error::NotEquivalent(n));
    }
    let mask = report.masked;
    let mut primes = BTreeMap::new();
    for p in primes_up_to(limit) {
        if mask.contains(&p) {
            continue;
        }
        let (Some(pk), Some(pl)) = (k.prime_ideals(p)?, l.prime_ideals(p)?) else {
            return Err(Error::UndeterminedPrime(vec![p]));
        };
        let mut by_f: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for q in pl.iter() {
            by_f.entry(q.f).or_default().push(q.index);
        }
        for q in pk.iter() {
            let target = by_f.get_mut(&q.f).and_then(|v| (!v.is_empty()).then(|| v.remove(0)));
            let Some(j) = target else { return Err(Error::Obstruction(p)) };
            primes.insert(PrimeLabel { p, index: q.index, f: q.f }, PrimeLabel { p, index: j, f: q.f });
        }
        if by_f.values().any(|v| !v.is_empty()) {
            return Err(Error::Obstruction(p));
        }
    }
    Ok(Psi { primes, mask, limit })
}

/// Applies `psi` to every enumerated ideal of `K` of norm `<= limit`.
pub fn psi_on_ideals(k: &NumberField, psi: &Psi) -> Result<Vec<(IdealVec, IdealVec)>> {
    enumerate_ideals(k, psi.limit, &psi.mask)?
        .into_iter()
        .map(|a| {
            let b = psi
                .apply(&a)
                .ok_or_else(|| Error::OutOfRange(format!("ideal {a} has an unmatched prime")))?;
            Ok((a, b))
        })
        .collect()
}
