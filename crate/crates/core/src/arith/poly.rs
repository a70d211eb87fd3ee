use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial with integer coefficients, lowest degree first.
///
/// Always trimmed: the last stored coefficient is nonzero, and the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn x() -> Self {
        Poly::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| {
                acc * x + c.to_f64().unwrap_or(f64::NAN)
            })
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_default()
                        + other.coeffs.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Division by a monic polynomial: returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !divisor.is_monic() {
            return Err(Error::NonMonic);
        }
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Resultant `Res(self, other)` as the determinant of the Sylvester
    /// matrix, evaluated with fraction-free (Bareiss) elimination.
    pub fn resultant(&self, other: &Poly) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let (m, n) = (self.degree(), other.degree());
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        // Rows hold coefficients highest degree first.
        for r in 0..n {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                mat[r][r + i] = c.clone();
            }
        }
        for r in 0..m {
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + r][r + i] = c.clone();
            }
        }
        bareiss_determinant(mat)
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)` of a monic polynomial.
    /// Degree-1 polynomials have discriminant 1.
    pub fn discriminant(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_monic() {
            return Err(Error::NonMonic);
        }
        let n = self.degree();
        if n == 0 {
            return Err(Error::ZeroPolynomial);
        }
        let res = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        Ok(res * BigInt::from(sign))
    }

    /// `f(x + s) f(x - s)` with `s^2 = d`: the characteristic polynomial of
    /// `theta + sqrt(d)`, equal to `Res_y(f(y), (x - y)^2 - d)`.
    pub fn compositum_with_sqrt(&self, d: i64) -> Poly {
        // f(x + s) = A(x) + s B(x), collecting even and odd powers of s.
        let d = BigInt::from(d);
        let mut a = Poly::zero();
        let mut b = Poly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            // (x + s)^k = sum_j C(k, j) x^(k-j) s^j
            let mut binom = BigInt::one();
            let mut s_pow_even = BigInt::one();
            for j in 0..=k {
                let mut term = vec![BigInt::zero(); k - j + 1];
                term[k - j] = c * &binom;
                if j % 2 == 0 {
                    a = a.add(&Poly::new(term).scale(&s_pow_even));
                } else {
                    b = b.add(&Poly::new(term).scale(&s_pow_even));
                    s_pow_even *= &d;
                }
                binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
            }
        }
        a.mul(&a).sub(&b.mul(&b).scale(&d))
    }

    /// Content-free check used by the irreducibility test.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[n - 1][n - 1]
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    /// Resultant by the Euclidean algorithm over Q, independent of the
    /// Sylvester/Bareiss route.
    fn euclid_resultant(f: &[i64], g: &[i64]) -> BigRational {
        fn trim(v: &mut Vec<BigRational>) {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
        }
        let to_q = |v: &[i64]| -> Vec<BigRational> {
            v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
        };
        let mut a = to_q(f);
        let mut b = to_q(g);
        trim(&mut a);
        trim(&mut b);
        let mut acc = BigRational::one();
        loop {
            let (m, n) = (a.len() - 1, b.len() - 1);
            if n == 0 {
                return acc * b[0].pow(m as i32);
            }
            // Res(a, b) = (-1)^{mn} lc(b)^{m - deg r} Res(b, r), r = a mod b
            let mut r = a.clone();
            while r.len() > n {
                let q = r.last().unwrap() / b.last().unwrap();
                let shift = r.len() - 1 - n;
                for (j, c) in b.iter().enumerate() {
                    r[shift + j] = &r[shift + j] - &q * c;
                }
                trim(&mut r);
                if r.is_empty() {
                    break;
                }
            }
            if r.is_empty() {
                return BigRational::zero();
            }
            let k = r.len() - 1;
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            acc *= b.last().unwrap().pow((m - k) as i32);
            a = b;
            b = r;
        }
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(Poly::from_i64(&[1, 0, 1]).discriminant().unwrap(), BigInt::from(-4));
        assert_eq!(Poly::from_i64(&[-5, 0, 1]).discriminant().unwrap(), BigInt::from(20));
        assert_eq!(Poly::from_i64(&[0, 1]).discriminant().unwrap(), BigInt::one());
        assert_eq!(
            Poly::from_i64(&[1, 0, 2]).discriminant(),
            Err(Error::NonMonic)
        );
    }

    #[test]
    fn discriminant_x8_minus_3_against_euclid_oracle() {
        let f = [-3, 0, 0, 0, 0, 0, 0, 0, 1];
        let df = [0, 0, 0, 0, 0, 0, 0, 8];
        let oracle = euclid_resultant(&f, &df);
        // (-1)^{28} = 1
        let expected = BigInt::from(-36691771392i64);
        assert_eq!(oracle, BigRational::from_integer(expected.clone()));
        assert_eq!(Poly::from_i64(&f).discriminant().unwrap(), expected);
    }

    #[test]
    fn resultant_matches_euclid_on_small_corpus() {
        let corpus: &[&[i64]] = &[
            &[1, 1, 1],
            &[-2, 0, 0, 1],
            &[3, -1, 4, 1],
            &[5, 0, -7, 0, 1],
            &[1, -3, 0, 2, 0, 1],
            &[-48, 0, 0, 0, 0, 0, 0, 0, 1],
        ];
        for f in corpus {
            for g in corpus {
                let ours = Poly::from_i64(f).resultant(&Poly::from_i64(g));
                assert_eq!(BigRational::from_integer(ours), euclid_resultant(f, g));
            }
        }
    }

    #[test]
    fn compositum_of_gaussian_and_sqrt2() {
        // (x - i - s)(x - i + s)(x + i - s)(x + i + s) with s^2 = 2
        let h = Poly::from_i64(&[1, 0, 1]).compositum_with_sqrt(2);
        assert_eq!(h, Poly::from_i64(&[9, 0, -2, 0, 1]));
        let root = num_complex::Complex64::new(2f64.sqrt(), 1.0);
        assert!(h.eval_f64(root).norm() < 1e-12);
    }

    #[test]
    fn div_rem_monic_roundtrip() {
        let f = Poly::from_i64(&[-1, 0, 0, 0, 1]);
        let g = Poly::from_i64(&[1, 0, 1]);
        let (q, r) = f.div_rem_monic(&g).unwrap();
        assert_eq!(q, Poly::from_i64(&[-1, 0, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_i64(&[-3, 0, 0, 0, 0, 0, 0, 0, 1]).to_string(), "x^8 - 3");
        assert_eq!(Poly::from_i64(&[6, -1, 1]).to_string(), "x^2 - x + 6");
    }
}
