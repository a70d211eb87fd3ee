//! Integral ideals as exponent vectors over prime ideals, and their
//! enumeration by norm.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arith::integer::{factor_integer, primes_up_to};
use crate::error::{Error, Result};
use crate::number_field::NumberField;

/// A prime ideal: the `index`-th prime above `p`, of inertia degree `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeLabel {
    pub p: u64,
    pub index: usize,
    pub f: u32,
}

impl PrimeLabel {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }
}

impl fmt::Display for PrimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}.{}", self.p, self.index)
    }
}

/// An integral ideal `prod P^e`. The empty vector is the unit ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealVec {
    exps: BTreeMap<PrimeLabel, u32>,
    norm: u64,
}

impl Default for IdealVec {
    fn default() -> Self {
        IdealVec::unit()
    }
}

impl IdealVec {
    pub fn unit() -> Self {
        IdealVec { exps: BTreeMap::new(), norm: 1 }
    }

    pub fn prime(label: PrimeLabel) -> Self {
        IdealVec { exps: BTreeMap::from([(label, 1)]), norm: label.norm() }
    }

    /// Panics if the norm overflows `u64`.
    pub fn from_exps(exps: impl IntoIterator<Item = (PrimeLabel, u32)>) -> Self {
        let exps: BTreeMap<PrimeLabel, u32> = exps.into_iter().filter(|&(_, e)| e > 0).collect();
        let norm = exps.iter().fold(1u64, |acc, (l, &e)| {
            acc.checked_mul(l.norm().checked_pow(e).expect("norm overflow"))
                .expect("norm overflow")
        });
        IdealVec { exps, norm }
    }

    pub fn exps(&self) -> &BTreeMap<PrimeLabel, u32> {
        &self.exps
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, o: &IdealVec) -> IdealVec {
        let mut exps = self.exps.clone();
        for (&l, &e) in &o.exps {
            *exps.entry(l).or_insert(0) += e;
        }
        IdealVec::from_exps(exps)
    }

    pub fn divides(&self, o: &IdealVec) -> bool {
        self.exps.iter().all(|(l, &e)| o.exps.get(l).copied().unwrap_or(0) >= e)
    }

    /// `o / self` when `self | o`.
    pub fn quotient_of(&self, o: &IdealVec) -> Option<IdealVec> {
        if !self.divides(o) {
            return None;
        }
        let mut exps = o.exps.clone();
        for (l, e) in &self.exps {
            *exps.get_mut(l).expect("divides") -= e;
        }
        Some(IdealVec::from_exps(exps))
    }

    pub fn gcd(&self, o: &IdealVec) -> IdealVec {
        IdealVec::from_exps(
            self.exps
                .iter()
                .filter_map(|(l, &e)| o.exps.get(l).map(|&f| (*l, e.min(f)))),
        )
    }
}

impl fmt::Display for IdealVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(l, &e)| if e == 1 { l.to_string() } else { format!("{l}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Prime ideals of norm `<= limit`, skipping masked primes. Fails with the
/// undetermined primes that are not masked.
pub fn prime_labels_up_to(field: &NumberField, limit: u64, mask: &BTreeSet<u64>) -> Result<Vec<PrimeLabel>> {
    let mut labels = Vec::new();
    let mut undetermined = Vec::new();
    for p in primes_up_to(limit) {
        if mask.contains(&p) {
            continue;
        }
        match field.prime_ideals(p)? {
            Some(ps) => labels.extend(
                ps.iter()
                    .filter(|q| q.p.checked_pow(q.f).is_some_and(|n| n <= limit))
                    .map(|q| PrimeLabel { p, index: q.index, f: q.f }),
            ),
            None => undetermined.push(p),
        }
    }
    if !undetermined.is_empty() {
        return Err(Error::UndeterminedPrime(undetermined));
    }
    labels.sort_by_key(|l| (l.norm(), l.p, l.index));
    Ok(labels)
}

/// Every ideal of norm `<= limit` supported on unmasked primes, sorted by
/// norm and then exponent vector.
pub fn enumerate_ideals(field: &NumberField, limit: u64, mask: &BTreeSet<u64>) -> Result<Vec<IdealVec>> {
    let labels = prime_labels_up_to(field, limit, mask)?;
    let mut out = Vec::new();
    let mut stack: Vec<(PrimeLabel, u32)> = Vec::new();
    descend(&labels, 0, 1, limit, &mut stack, &mut out);
    out.sort_by(|a, b| (a.norm, &a.exps).cmp(&(b.norm, &b.exps)));
    Ok(out)
}

fn descend(
    labels: &[PrimeLabel],
    start: usize,
    norm: u64,
    limit: u64,
    stack: &mut Vec<(PrimeLabel, u32)>,
    out: &mut Vec<IdealVec>,
) {
    out.push(IdealVec { exps: stack.iter().copied().collect(), norm });
    for (j, &l) in labels.iter().enumerate().skip(start) {
        let q = l.norm();
        if norm.saturating_mul(q) > limit {
            break;
        }
        let mut n = norm * q;
        let mut e = 1;
        while n <= limit {
            stack.push((l, e));
            descend(labels, j + 1, n, limit, stack, out);
            stack.pop();
            e += 1;
            n = n.saturating_mul(q);
        }
    }
}

/// All ideals of norm exactly `n`, or `None` if `n` involves an
/// undetermined prime.
pub fn ideals_of_norm(field: &NumberField, n: u64) -> Result<Option<Vec<IdealVec>>> {
    let mut acc = vec![IdealVec::unit()];
    for (p, k) in factor_integer(n) {
        let Some(primes) = field.prime_ideals(p)? else { return Ok(None) };
        let labels: Vec<PrimeLabel> = primes.iter().map(|q| PrimeLabel { p, index: q.index, f: q.f }).collect();
        let local = local_ideals(&labels, k);
        acc = acc.iter().flat_map(|a| local.iter().map(move |b| a.mul(b))).collect();
        if acc.is_empty() {
            break;
        }
    }
    acc.sort();
    Ok(Some(acc))
}

/// Ideals above one rational prime with `sum f_i x_i = k`.
fn local_ideals(labels: &[PrimeLabel], k: u32) -> Vec<IdealVec> {
    fn go(labels: &[PrimeLabel], k: u32, cur: &mut Vec<(PrimeLabel, u32)>, out: &mut Vec<IdealVec>) {
        let Some((&l, rest)) = labels.split_first() else {
            if k == 0 {
                out.push(IdealVec::from_exps(cur.iter().copied()));
            }
            return;
        };
        for x in 0..=k / l.f {
            cur.push((l, x));
            go(rest, k - x * l.f, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(labels, k, &mut Vec::new(), &mut out);
    out
}
