use std::fmt;

use num_integer::Integer;

use crate::arith::integer::{factor_integer, is_fundamental_discriminant, is_prime, kronecker_symbol, primitive_root};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};

/// Dirichlet character mod `m` with values in the `r`-th roots of unity,
/// stored by exponent: `chi(a) = zeta_r^{exps[a mod m]}`, and `None` off
/// `(Z/m)*` (the zero convention for ideals not prime to the conductor).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirichletChar {
    modulus: u64,
    order: u32,
    exps: Vec<Option<u32>>,
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletChar(mod {}, order {})", self.modulus, self.order)
    }
}

impl DirichletChar {
    /// Builds a character from an exponent function on units, checking
    /// multiplicativity exhaustively.
    pub fn from_fn(modulus: u64, order: u32, f: impl Fn(u64) -> u32) -> Result<Self> {
        if modulus == 0 || order == 0 {
            return Err(Error::InvalidCharacter("modulus and order must be positive".into()));
        }
        let exps: Vec<Option<u32>> = (0..modulus)
            .map(|a| (a.gcd(&modulus) == 1).then(|| f(a) % order))
            .collect();
        let chi = DirichletChar { modulus, order, exps };
        chi.validate()?;
        Ok(chi)
    }

    fn validate(&self) -> Result<()> {
        let m = self.modulus;
        if self.exps[(1 % m) as usize] != Some(0) {
            return Err(Error::InvalidCharacter("chi(1) != 1".into()));
        }
        for a in 0..m {
            let Some(ea) = self.exps[a as usize] else { continue };
            for b in a..m {
                let Some(eb) = self.exps[b as usize] else { continue };
                let ab = (a * b % m) as usize;
                if self.exps[ab] != Some((ea + eb) % self.order) {
                    return Err(Error::InvalidCharacter(format!(
                        "not multiplicative at ({a}, {b}) mod {m}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(modulus: u64) -> Self {
        DirichletChar::from_fn(modulus, 1, |_| 0).expect("trivial character")
    }

    /// The quadratic character attached to `Q(sqrt d)` for a non-square `d`:
    /// the Kronecker symbol of its fundamental discriminant.
    pub fn quadratic(d: i64) -> Result<Self> {
        let disc = fundamental_discriminant_of(d)?;
        DirichletChar::from_fn(disc.unsigned_abs(), 2, |a| {
            if kronecker_symbol(disc, a as i64) == 1 {
                0
            } else {
                1
            }
        })
    }

    /// Character mod an odd prime `p` sending the smallest primitive root to
    /// `zeta_order^k`. Needs `order | p - 1`.
    pub fn prime_modulus(p: u64, order: u32, k: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidCharacter(format!("{p} is not an odd prime")));
        }
        if !(p - 1).is_multiple_of(order as u64) {
            return Err(Error::InvalidCharacter(format!("order {order} does not divide {}", p - 1)));
        }
        let g = primitive_root(p);
        let mut dlog = vec![0u32; p as usize];
        let mut x = 1u64;
        for j in 0..p - 1 {
            dlog[x as usize] = j as u32;
            x = x * g % p;
        }
        DirichletChar::from_fn(p, order, |a| {
            ((dlog[a as usize] as u64 * k as u64) % order as u64) as u32
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Exponent of `chi(n)`, or `None` when `gcd(n, m) > 1`.
    pub fn exponent(&self, n: u64) -> Option<u32> {
        self.exps[(n % self.modulus) as usize]
    }

    pub fn value(&self, n: u64) -> Cyclo {
        match self.exponent(n) {
            Some(e) => Cyclo::root_power(self.order, e),
            None => Cyclo::zero(self.order),
        }
    }

    /// `chi(g)^{-1}` for a unit `g`.
    pub fn inverse_value(&self, g: u64) -> Option<Cyclo> {
        self.exponent(g)
            .map(|e| Cyclo::root_power(self.order, (self.order - e) % self.order))
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|e| e.is_none_or(|e| e == 0))
    }

    pub fn conj(&self) -> Self {
        DirichletChar {
            modulus: self.modulus,
            order: self.order,
            exps: self.exps.iter().map(|e| e.map(|e| (self.order - e) % self.order)).collect(),
        }
    }
}

/// Fundamental discriminant of `Q(sqrt d)`.
pub fn fundamental_discriminant_of(d: i64) -> Result<i64> {
    if d == 0 {
        return Err(Error::InvalidCharacter("d = 0".into()));
    }
    let mut core: i64 = if d < 0 { -1 } else { 1 };
    for (p, e) in factor_integer(d.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    if core == 1 {
        return Err(Error::InvalidCharacter(format!("{d} is a square")));
    }
    let disc = if core.rem_euclid(4) == 1 { core } else { 4 * core };
    debug_assert!(is_fundamental_discriminant(disc));
    Ok(disc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_minus_4() {
        let chi = DirichletChar::quadratic(-4).unwrap();
        assert_eq!(chi.modulus(), 4);
        let vals: Vec<i64> = (1..=8).map(|n| chi.value(n).as_integer().unwrap()).collect();
        assert_eq!(vals, vec![1, 0, -1, 0, 1, 0, -1, 0]);
        assert_eq!(DirichletChar::quadratic(-1).unwrap(), chi);
    }

    #[test]
    fn chi_5_on_squares() {
        let chi = DirichletChar::quadratic(5).unwrap();
        // squares mod 5 are {1, 4}
        for a in 1..5u64 {
            let square = (1..5u64).any(|x| x * x % 5 == a);
            assert_eq!(chi.value(a).as_integer().unwrap(), if square { 1 } else { -1 });
        }
        assert_eq!(chi.value(9).as_integer(), Some(1));
    }

    #[test]
    fn fundamental_discriminants_of_nonsquares() {
        assert_eq!(fundamental_discriminant_of(2).unwrap(), 8);
        assert_eq!(fundamental_discriminant_of(12).unwrap(), 12);
        assert_eq!(fundamental_discriminant_of(48).unwrap(), 12);
        assert_eq!(fundamental_discriminant_of(-7).unwrap(), -7);
        assert!(fundamental_discriminant_of(9).is_err());
    }

    #[test]
    fn rejects_non_multiplicative_tables() {
        let err = DirichletChar::from_fn(5, 2, |a| if a == 2 { 1 } else { 0 });
        assert!(matches!(err, Err(Error::InvalidCharacter(_))));
    }

    #[test]
    fn quartic_character_mod_5() {
        let chi = DirichletChar::prime_modulus(5, 4, 1).unwrap();
        // primitive root 2: chi(2) = i, chi(4) = -1, chi(3) = -i
        assert_eq!(chi.exponent(2), Some(1));
        assert_eq!(chi.exponent(4), Some(2));
        assert_eq!(chi.exponent(3), Some(3));
        assert_eq!(chi.exponent(5), None);
        assert_eq!(chi.conj().exponent(2), Some(3));
        assert!(DirichletChar::prime_modulus(7, 4, 1).is_err());
    }

    #[test]
    fn multiplicativity_exhaustive_small_moduli() {
        for p in [3u64, 5, 7, 11, 13] {
            for r in (1..=(p - 1) as u32).filter(|r| (p - 1) % *r as u64 == 0) {
                let chi = DirichletChar::prime_modulus(p, r, 1).unwrap();
                for a in 0..p {
                    for b in 0..p {
                        assert_eq!(chi.value(a).mul(&chi.value(b)), chi.value(a * b));
                    }
                }
            }
        }
    }
}
