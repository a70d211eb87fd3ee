//! Class groups of imaginary quadratic fields via reduced binary quadratic
//! forms, per-class ideal counts, and L-series of class-group characters.
//!
//! A form `(a, b, c)` stands for the ideal class of `[a, (-b + sqrt D)/2]`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;

use crate::arith::integer::{factor_integer, is_fundamental_discriminant};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::lseries::CoeffSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Reduced form in the same proper equivalence class (positive definite
    /// forms only).
    pub fn reduce(&self) -> QuadForm {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let d = b * b - 4 * a * c;
        let normalize = |a: i128, b: i128| -> (i128, i128) {
            // b -> b + 2ak with -a < b <= a
            let mut r = b.rem_euclid(2 * a);
            if r > a {
                r -= 2 * a;
            }
            (r, (r * r - d) / (4 * a))
        };
        (b, c) = normalize(a, b);
        while a > c || (a == c && b < 0) {
            (a, b) = (c, -b);
            (b, c) = normalize(a, b);
        }
        QuadForm { a: a as i64, b: b as i64, c: c as i64 }
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn check_discriminant(d: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::NotNegative(d));
    }
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(())
}

/// The principal form of discriminant `d`.
pub fn principal_form(d: i64) -> QuadForm {
    let b = d.rem_euclid(2);
    QuadForm { a: 1, b, c: (b * b - d) / 4 }
}

/// All reduced primitive forms of a negative fundamental discriminant, by `a`,
/// then `|b|`, with `b > 0` before `-b`.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    check_discriminant(d)?;
    let mut out = Vec::new();
    // reduced forms satisfy 3a^2 <= |D|
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm { a, b, c: num / (4 * a) };
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), f.b < 0));
    Ok(out)
}

/// Gauss composition followed by reduction.
pub fn compose(f1: &QuadForm, f2: &QuadForm) -> Result<QuadForm> {
    let d = f1.discriminant();
    if f2.discriminant() != d {
        return Err(Error::DiscriminantMismatch(d, f2.discriminant()));
    }
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, dd) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let g = a2.extended_gcd(&a1);
        (g.x, g.gcd)
    };
    let (x2, y2, d1) = if s % dd == 0 {
        (0, -1, dd)
    } else {
        let g = s.extended_gcd(&dd);
        (g.x, -g.y, g.gcd)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - d as i128) / (4 * a3);
    debug_assert_eq!(b3 * b3 - 4 * a3 * c3, d as i128);
    Ok(QuadForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce())
}

/// A character of the class group: `chi(g_i) = zeta_{n_i}^{k_i}` on the
/// cyclic basis `g_i` of orders `n_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassChar {
    pub exps: Vec<u32>,
}

/// The class group of a negative fundamental discriminant.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    d: i64,
    forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
    table: Vec<Vec<usize>>,
    /// Basis elements (form indices) and their prime-power orders.
    basis: Vec<(usize, u32)>,
    /// Coordinates of every class on `basis`.
    coords: Vec<Vec<u32>>,
    w: u32,
}

impl ClassGroup {
    pub fn new(d: i64) -> Result<Self> {
        let forms = reduced_forms(d)?;
        let index: HashMap<QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut table = vec![vec![0; forms.len()]; forms.len()];
        for (i, f) in forms.iter().enumerate() {
            for (j, g) in forms.iter().enumerate() {
                table[i][j] = index[&compose(f, g)?];
            }
        }
        let w = match d {
            -4 => 2,
            -3 => 3,
            _ => 1,
        };
        let mut cg = ClassGroup { d, forms, index, table, basis: Vec::new(), coords: Vec::new(), w };
        cg.basis = cg.find_basis();
        cg.coords = cg.compute_coords();
        Ok(cg)
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    /// Half the number of units.
    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn identity(&self) -> usize {
        self.index[&principal_form(self.d)]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn class_of(&self, f: &QuadForm) -> Option<usize> {
        self.index.get(&f.reduce()).copied()
    }

    pub fn pow(&self, i: usize, k: u64) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, i))
    }

    pub fn element_order(&self, i: usize) -> u32 {
        let e = self.identity();
        let mut x = i;
        let mut k = 1;
        while x != e {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Elementary divisors (cyclic prime-power orders of the basis).
    pub fn structure(&self) -> Vec<u32> {
        self.basis.iter().map(|&(_, n)| n).collect()
    }

    /// Exponent vector of class `i` on the cyclic basis.
    pub fn coordinates(&self, i: usize) -> &[u32] {
        &self.coords[i]
    }

    fn subgroup_size(&self, gens: &[usize]) -> usize {
        let mut seen = BTreeSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.len()
    }

    /// For each prime `p | h`, a basis of the Sylow p-subgroup found by
    /// backtracking over elements of the required orders.
    fn find_basis(&self) -> Vec<(usize, u32)> {
        let h = self.class_number() as u64;
        let mut basis = Vec::new();
        for (p, _) in factor_integer(h) {
            let p = p as u32;
            let sylow: Vec<usize> = (0..self.forms.len())
                .filter(|&i| {
                    let mut n = self.element_order(i);
                    while n.is_multiple_of(p) {
                        n /= p;
                    }
                    n == 1
                })
                .collect();
            let orders = self.p_group_type(&sylow, p);
            let mut chosen = Vec::new();
            assert!(self.extend_basis(&sylow, &orders, &mut chosen), "abelian p-group has a basis");
            basis.extend(chosen.into_iter().zip(orders));
        }
        basis
    }

    /// Invariants `p^{e_1} >= p^{e_2} >= ...` of an abelian p-group from the
    /// sizes of its `p^k`-torsion subgroups.
    fn p_group_type(&self, sylow: &[usize], p: u32) -> Vec<u32> {
        let mut torsion_logs = vec![0u32];
        let mut k = 1;
        loop {
            let pk = p.pow(k);
            let size = sylow.iter().filter(|&&i| pk % self.element_order(i) == 0).count();
            let log = size.ilog(p as usize);
            if log == *torsion_logs.last().unwrap() {
                break;
            }
            torsion_logs.push(log);
            k += 1;
        }
        // number of cyclic factors of order >= p^k is the k-th increment
        let incr: Vec<u32> = torsion_logs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut orders = Vec::new();
        for k in 1..=incr.len() {
            let at_least_k = incr[k - 1];
            let at_least_k1 = incr.get(k).copied().unwrap_or(0);
            for _ in 0..at_least_k - at_least_k1 {
                orders.push(p.pow(k as u32));
            }
        }
        orders.sort_unstable_by(|a, b| b.cmp(a));
        orders
    }

    fn extend_basis(&self, sylow: &[usize], orders: &[u32], chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == orders.len() {
            return true;
        }
        let want = orders[chosen.len()];
        let target: usize = orders[..=chosen.len()].iter().map(|&n| n as usize).product();
        for &g in sylow {
            if self.element_order(g) != want {
                continue;
            }
            chosen.push(g);
            if self.subgroup_size(chosen) == target && self.extend_basis(sylow, orders, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn compute_coords(&self) -> Vec<Vec<u32>> {
        let mut coords = vec![Vec::new(); self.forms.len()];
        let orders: Vec<u32> = self.structure();
        let mut exps = vec![0u32; orders.len()];
        loop {
            let elem = self
                .basis
                .iter()
                .zip(&exps)
                .fold(self.identity(), |acc, (&(g, _), &e)| self.mul(acc, self.pow(g, e as u64)));
            coords[elem] = exps.clone();
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return coords;
                }
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// Every character of the group, in lexicographic exponent order.
    pub fn characters(&self) -> Vec<ClassChar> {
        let orders = self.structure();
        let mut out = vec![ClassChar { exps: vec![] }];
        for &n in &orders {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..n).map(move |k| {
                        let mut e = c.exps.clone();
                        e.push(k);
                        ClassChar { exps: e }
                    })
                })
                .collect();
        }
        out
    }

    pub fn trivial_character(&self) -> ClassChar {
        ClassChar { exps: vec![0; self.basis.len()] }
    }

    /// Order of the cyclotomic ring holding the character values.
    pub fn character_order(&self) -> u32 {
        self.structure().into_iter().fold(1, |a, n| a.lcm(&n))
    }

    /// `chi(class)` as an element of `Z[zeta_r]`, `r = character_order()`.
    pub fn char_value(&self, chi: &ClassChar, class: usize) -> Result<Cyclo> {
        let orders = self.structure();
        if chi.exps.len() != orders.len() || chi.exps.iter().zip(&orders).any(|(k, n)| k >= n) {
            return Err(Error::InvalidCharacter(format!("{:?} for structure {orders:?}", chi.exps)));
        }
        let r = self.character_order();
        let e: u64 = self.coords[class]
            .iter()
            .zip(&chi.exps)
            .zip(&orders)
            .map(|((&c, &k), &n)| c as u64 * k as u64 * (r / n) as u64)
            .sum();
        Ok(Cyclo::root_power(r, (e % r as u64) as u32))
    }

    /// Class of the prime ideal `(p, theta - r)` of the maximal order
    /// `Z[theta]`, where `theta = (D mod 2 + sqrt D)/2` and `r` is a root of
    /// its minimal polynomial mod `p`. Inert primes (`r = None`) are
    /// principal.
    pub fn class_of_prime(&self, p: u64, root: Option<u64>) -> usize {
        let Some(r) = root else { return self.identity() };
        let delta = self.d.rem_euclid(2);
        let p = p as i64;
        // theta - r = (-b + sqrt D)/2 with b = 2r - delta; b^2 = D mod 4p
        let b = 2 * r as i64 - delta;
        let bp = b.rem_euclid(2 * p);
        let f = QuadForm { a: p, b: bp, c: (bp * bp - self.d) / (4 * p) };
        debug_assert_eq!(f.discriminant(), self.d);
        self.index[&f.reduce()]
    }

    /// Representation counts `r_F(n)` for every class and every `n <= limit`.
    fn representation_counts(&self, limit: u64) -> Vec<Vec<u64>> {
        let dabs = self.d.unsigned_abs() as f64;
        self.forms
            .iter()
            .map(|f| {
                let mut counts = vec![0u64; limit as usize + 1];
                // 4a*F(x,y) = (2ax + by)^2 + |D| y^2, so |D| y^2 <= 4an;
                // symmetrically |D| x^2 <= 4cn.
                let ymax = (2.0 * (f.a as f64 * limit as f64 / dabs).sqrt()).floor() as i64 + 1;
                let xmax = (2.0 * (f.c as f64 * limit as f64 / dabs).sqrt()).floor() as i64 + 1;
                for y in -ymax..=ymax {
                    for x in -xmax..=xmax {
                        let v = f.eval(x, y);
                        if v >= 1 && v as u64 <= limit {
                            counts[v as usize] += 1;
                        }
                    }
                }
                counts
            })
            .collect()
    }

    /// Number of integral ideals of norm `n` in each class, `r_F(n) / 2w`.
    pub fn ideal_count_by_class(&self, n: u64) -> Result<Vec<u64>> {
        if n == 0 {
            return Err(Error::OutOfRange("n must be positive".into()));
        }
        Ok(self.ideal_counts_up_to(n).into_iter().map(|c| c[n as usize]).collect())
    }

    /// `counts[class][n]` for `n <= limit`.
    pub fn ideal_counts_up_to(&self, limit: u64) -> Vec<Vec<u64>> {
        let units = 2 * self.w as u64;
        let mut counts = self.representation_counts(limit);
        for c in &mut counts {
            c[0] = 0;
            for v in c.iter_mut() {
                debug_assert_eq!(*v % units, 0);
                *v /= units;
            }
        }
        counts
    }

    /// `c_n = sum_C chi(C) count_C(n)` for `n <= limit`.
    pub fn class_char_l_coeffs(&self, chi: &ClassChar, limit: usize) -> Result<CoeffSeries> {
        let counts = self.ideal_counts_up_to(limit as u64);
        let r = self.character_order();
        let values: Vec<Cyclo> = (0..self.forms.len())
            .map(|c| self.char_value(chi, c))
            .collect::<Result<_>>()?;
        let coeffs = (1..=limit)
            .map(|n| {
                (0..self.forms.len()).fold(Cyclo::zero(r), |acc, c| {
                    acc.add(&values[c].scale(counts[c][n] as i64))
                })
            })
            .collect();
        Ok(CoeffSeries::from_values(
            format!("L(D={}, chi={:?})", self.d, chi.exps),
            r,
            coeffs,
            BTreeSet::new(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lseries::zeta_coeffs;
    use crate::number_field::NumberField;

    fn fundamental_negative(max: i64) -> impl Iterator<Item = i64> {
        (1..=max).map(|k| -k).filter(|&d| is_fundamental_discriminant(d))
    }

    #[test]
    fn reduced_form_examples() {
        assert_eq!(reduced_forms(-4).unwrap(), vec![QuadForm::new(1, 0, 1)]);
        assert_eq!(
            reduced_forms(-23).unwrap(),
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, 1, 3), QuadForm::new(2, -1, 3)]
        );
        assert_eq!(reduced_forms(-12), Err(Error::NotFundamental(-12)));
        assert_eq!(reduced_forms(5), Err(Error::NotNegative(5)));
    }

    #[test]
    fn known_class_numbers() {
        for (d, h) in [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-56, 4), (-71, 7), (-84, 4), (-163, 1)] {
            assert_eq!(reduced_forms(d).unwrap().len(), h, "D = {d}");
        }
    }

    #[test]
    fn composition_examples() {
        let (p, f, g) = (QuadForm::new(1, 1, 6), QuadForm::new(2, 1, 3), QuadForm::new(2, -1, 3));
        assert_eq!(compose(&f, &f).unwrap(), g);
        assert_eq!(compose(&p, &f).unwrap(), f);
        assert_eq!(compose(&f, &g).unwrap(), p);
        assert_eq!(
            compose(&f, &QuadForm::new(1, 0, 1)),
            Err(Error::DiscriminantMismatch(-23, -4))
        );
    }

    #[test]
    fn group_axioms_for_small_discriminants() {
        for d in fundamental_negative(200) {
            let cg = ClassGroup::new(d).unwrap();
            let h = cg.class_number();
            let e = cg.identity();
            for i in 0..h {
                assert_eq!(cg.mul(e, i), i);
                assert!((0..h).any(|j| cg.mul(i, j) == e));
                assert_eq!(cg.mul(i, cg.index[&cg.forms[i].inverse()]), e);
                for j in 0..h {
                    assert_eq!(cg.mul(i, j), cg.mul(j, i));
                    for k in 0..h {
                        assert_eq!(cg.mul(cg.mul(i, j), k), cg.mul(i, cg.mul(j, k)), "D = {d}");
                    }
                }
            }
            assert_eq!(cg.structure().iter().product::<u32>() as usize, h);
            let distinct: BTreeSet<&Vec<u32>> = cg.coords.iter().collect();
            assert_eq!(distinct.len(), h);
        }
    }

    #[test]
    fn noncyclic_structure() {
        // D = -84: class group (Z/2)^2
        let cg = ClassGroup::new(-84).unwrap();
        assert_eq!(cg.structure(), vec![2, 2]);
        let cg = ClassGroup::new(-56).unwrap();
        assert_eq!(cg.structure(), vec![4]);
    }

    #[test]
    fn ideal_count_examples() {
        let g = ClassGroup::new(-4).unwrap();
        assert_eq!(g.ideal_count_by_class(5).unwrap(), vec![2]);
        let cg = ClassGroup::new(-23).unwrap();
        assert_eq!(cg.ideal_count_by_class(2).unwrap(), vec![0, 1, 1]);
        for d in [-3, -4, -23, -47] {
            let cg = ClassGroup::new(d).unwrap();
            let one = cg.ideal_count_by_class(1).unwrap();
            assert_eq!(one[cg.identity()], 1);
            assert_eq!(one.iter().sum::<u64>(), 1);
        }
    }

    #[test]
    fn class_counts_sum_to_zeta_coefficients() {
        for d in [-3, -4, -7, -8, -15, -20, -23, -47, -84] {
            let cg = ClassGroup::new(d).unwrap();
            let k = NumberField::quadratic(format!("D{d}"), d).unwrap();
            let z = zeta_coeffs(&k, 500).unwrap();
            let counts = cg.ideal_counts_up_to(500);
            for n in 1..=500u64 {
                let total: u64 = counts.iter().map(|c| c[n as usize]).sum();
                assert_eq!(z.integer(n), Some(total as i64), "D = {d}, n = {n}");
            }
        }
    }

    #[test]
    fn character_examples() {
        let cg = ClassGroup::new(-23).unwrap();
        let triv = cg.class_char_l_coeffs(&cg.trivial_character(), 50).unwrap();
        let k = NumberField::quadratic("D-23", -23).unwrap();
        let z = zeta_coeffs(&k, 50).unwrap();
        assert_eq!(triv.iter().map(|(_, c)| c.as_integer().unwrap()).collect::<Vec<_>>(),
                   z.iter().map(|(_, c)| c.as_integer().unwrap()).collect::<Vec<_>>());
        let cubic = ClassChar { exps: vec![1] };
        let l = cg.class_char_l_coeffs(&cubic, 50).unwrap();
        assert_eq!(l.get(1).unwrap().as_integer(), Some(1));
        assert_eq!(l.get(2).unwrap().as_integer(), Some(-1));
    }

    #[test]
    fn character_orthogonality() {
        for d in [-23, -47, -56, -84] {
            let cg = ClassGroup::new(d).unwrap();
            let h = cg.class_number() as i64;
            let counts = cg.ideal_counts_up_to(200);
            let r = cg.character_order();
            let mut total = vec![Cyclo::zero(r); 200];
            for chi in cg.characters() {
                let l = cg.class_char_l_coeffs(&chi, 200).unwrap();
                for n in 1..=200u64 {
                    total[n as usize - 1] = total[n as usize - 1].add(l.get(n).unwrap());
                }
            }
            for n in 1..=200usize {
                let principal = counts[cg.identity()][n] as i64;
                assert_eq!(total[n - 1], Cyclo::from_int(r, h * principal), "D = {d}, n = {n}");
            }
        }
    }

    #[test]
    fn prime_classes_match_enumeration() {
        // For D = -23, theta^2 - theta + 6: primes split as (p, theta - r).
        let cg = ClassGroup::new(-23).unwrap();
        let k = NumberField::quadratic("D-23", -23).unwrap();
        for p in crate::arith::integer::primes_up_to(200) {
            let ideals = k.prime_ideals(p).unwrap().unwrap();
            let classes: Vec<usize> = ideals
                .iter()
                .map(|q| {
                    let root = (q.f == 1).then(|| {
                        let g = q.residue_factor.as_ref().unwrap();
                        (p - g.coeffs()[0] % p) % p
                    });
                    cg.class_of_prime(p, root)
                })
                .collect();
            for (q, &class) in ideals.iter().zip(&classes) {
                let counts = cg.ideal_count_by_class(q.norm()).unwrap();
                assert!(counts[class] >= 1, "p = {p}");
            }
            if classes.len() == 2 {
                // conjugate primes lie in inverse classes
                assert_eq!(cg.mul(classes[0], classes[1]), cg.identity());
                // principal iff p = x^2 + xy + 6y^2
                let principal = (0..20i64).any(|x| (0..20i64).any(|y| x * x + x * y + 6 * y * y == p as i64 || x * x - x * y + 6 * y * y == p as i64));
                assert_eq!(classes[0] == cg.identity(), principal, "p = {p}");
            }
        }
    }
}
