//! Exact elements of `Z[zeta_r]`.
//!
//! Values are stored in the power basis `1, zeta, ..., zeta^{phi(r)-1}`
//! reduced modulo the cyclotomic polynomial, so equality is coefficientwise.
//! Orders 1 and 2 are plain integers.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<i64>,
}

/// Integer cyclotomic polynomial `Phi_r`, lowest degree first.
pub fn cyclotomic_poly(r: u32) -> Vec<i64> {
    // x^r - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; r as usize + 1];
    num[0] = -1;
    num[r as usize] = 1;
    for d in (1..r).filter(|d| r.is_multiple_of(*d)) {
        num = div_monic(&num, &cyclotomic_poly(d));
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= c * dc;
        }
    }
    quot
}

fn phi(r: u32) -> usize {
    (1..=r).filter(|k| k.gcd(&r) == 1).count()
}

impl Cyclo {
    fn reduce(order: u32, mut dense: Vec<i64>) -> Self {
        let n = phi(order);
        if dense.len() > n {
            let phi_r = cyclotomic_poly(order);
            for k in (n..dense.len()).rev() {
                let c = dense[k];
                if c != 0 {
                    for (j, &pc) in phi_r.iter().enumerate() {
                        dense[k - n + j] -= c * pc;
                    }
                }
            }
        }
        dense.resize(n, 0);
        Cyclo { order, coeffs: dense }
    }

    pub fn from_int(order: u32, v: i64) -> Self {
        let mut c = vec![0; phi(order)];
        c[0] = v;
        Cyclo { order, coeffs: c }
    }

    pub fn zero(order: u32) -> Self {
        Self::from_int(order, 0)
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    /// `zeta_order^k`.
    pub fn root_power(order: u32, k: u32) -> Self {
        let k = (k % order) as usize;
        let mut dense = vec![0; k + 1];
        dense[k] = 1;
        Self::reduce(order, dense)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    /// Re-express in `Z[zeta_target]`; `target` must be a multiple of the order.
    pub fn lift(&self, target: u32) -> Self {
        assert!(target.is_multiple_of(self.order), "cannot lift order {} to {}", self.order, target);
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut dense = vec![0; (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            dense[i * step] = c;
        }
        Self::reduce(target, dense)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = a.order.lcm(&b.order);
        (a.lift(l), b.lift(l))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.order == o.order {
            let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
            return Cyclo { order: self.order, coeffs };
        }
        let (a, b) = Self::common(self, o);
        a.add(&b)
    }

    pub fn neg(&self) -> Self {
        Cyclo { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclo { order: self.order, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.order != o.order {
            let (a, b) = Self::common(self, o);
            return a.mul(&b);
        }
        if self.coeffs.len() == 1 {
            return o.scale(self.coeffs[0]);
        }
        let mut dense = vec![0i64; 2 * self.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                dense[i + j] += a * b;
            }
        }
        Self::reduce(self.order, dense)
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU / self.order as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for &c in &self.coeffs {
            acc += pw * c as f64;
            pw *= z;
        }
        acc
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let m = c.abs();
            match (i, m) {
                (0, _) => write!(f, "{m}")?,
                (1, 1) => write!(f, "z{}", self.order)?,
                (1, _) => write!(f, "{m}*z{}", self.order)?,
                (_, 1) => write!(f, "z{}^{i}", self.order)?,
                _ => write!(f, "{m}*z{}^{i}", self.order)?,
            }
        }
        Ok(())
    }
}
