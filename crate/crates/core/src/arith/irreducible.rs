//! Irreducibility of monic integer polynomials over Q at desk scale.
//!
//! First try to certify irreducibility from factorization patterns modulo
//! small good primes: any factor over Q of degree d forces a sub-multiset of
//! every mod-p degree pattern to sum to d. When the patterns leave some d
//! open (e.g. biquadratic fields, whose Galois group has no 4-cycle), fall
//! back to numerical roots and test every d-subset: the candidate factor's
//! coefficients are rounded and then checked by exact division, so a
//! reported factor is always genuine.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::fp_poly::{factor_degrees, FpPoly};
use super::integer::primes_up_to;
use super::poly::Poly;
use crate::error::{Error, Result};

const CERTIFICATE_PRIME_BOUND: u64 = 1000;

/// Outcome of [`check_irreducible`] when no error occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper monic factor over Z.
    Reducible(Poly),
}

/// Degrees `1..n` still possible for a factor over Q, given mod-p patterns.
pub fn open_factor_degrees(f: &Poly) -> Result<BTreeSet<usize>> {
    let n = f.degree();
    let disc = f.discriminant()?;
    let mut open: BTreeSet<usize> = (1..n).collect();
    for p in primes_up_to(CERTIFICATE_PRIME_BOUND) {
        if open.is_empty() {
            break;
        }
        if (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        let degs = factor_degrees(&FpPoly::reduce(f, p)?)?;
        let mut sums = BTreeSet::from([0usize]);
        for d in degs {
            let shifted: Vec<usize> = sums.iter().map(|s| s + d).collect();
            sums.extend(shifted);
        }
        open.retain(|d| sums.contains(d));
    }
    Ok(open)
}

pub fn check_irreducible(f: &Poly) -> Result<Irreducibility> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let n = f.degree();
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }
    if n == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    if f.discriminant()?.is_zero() {
        // Repeated factor: gcd(f, f') is a proper factor, but any witness
        // will do for reporting.
        return match search_factor(f, &(1..=n / 2).collect())? {
            Some(g) => Ok(Irreducibility::Reducible(g)),
            None => Err(Error::IrreducibilityUnknown(f.to_string())),
        };
    }
    let open = open_factor_degrees(f)?;
    if open.is_empty() {
        return Ok(Irreducibility::Irreducible);
    }
    let small: BTreeSet<usize> = open.into_iter().filter(|&d| 2 * d <= n).collect();
    match search_factor(f, &small)? {
        Some(g) => Ok(Irreducibility::Reducible(g)),
        None => Ok(Irreducibility::Irreducible),
    }
}

fn search_factor(f: &Poly, degrees: &BTreeSet<usize>) -> Result<Option<Poly>> {
    let roots = match complex_roots(f) {
        Some(r) => r,
        None => return Err(Error::IrreducibilityUnknown(f.to_string())),
    };
    for &d in degrees {
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            if let Some(g) = candidate_factor(&roots, &idx) {
                let (_, r) = f.div_rem_monic(&g)?;
                if r.is_zero() {
                    return Ok(Some(g));
                }
            }
            if !next_combination(&mut idx, roots.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn candidate_factor(roots: &[Complex64], idx: &[usize]) -> Option<Poly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &i in idx {
        let r = roots[i];
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    let mut out = Vec::with_capacity(c.len());
    for z in c {
        let tol = 1e-6 * (1.0 + z.re.abs());
        let rounded = z.re.round();
        if z.im.abs() > tol || (z.re - rounded).abs() > tol {
            return None;
        }
        out.push(BigInt::from(rounded as i64));
    }
    Some(Poly::new(out))
}

/// All complex roots by Aberth-Ehrlich iteration, or `None` if it fails to
/// converge.
pub fn complex_roots(f: &Poly) -> Option<Vec<Complex64>> {
    let n = f.degree();
    let coeffs: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let deriv: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let eval = |c: &[f64], z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &k| a * z + k);
    // Cauchy bound for the initial circle.
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let p = eval(&coeffs, z[i]);
            let dp = eval(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-15 {
            return Some(z);
        }
    }
    // Converged to within rounding noise is still fine for the rounding test.
    let ok = z.iter().all(|&r| {
        let scale: f64 = coeffs.iter().map(|c| c.abs()).sum::<f64>() * (1.0 + r.norm()).powi(n as i32);
        eval(&coeffs, r).norm() <= 1e-9 * scale
    });
    ok.then_some(z)
}
