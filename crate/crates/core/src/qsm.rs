//! A truncated model of the QSM system of a number field: the Hilbert space
//! spanned by integral ideals of norm `<= N`, the Hamiltonian `H e_n =
//! log N(n) e_n`, Gibbs states, the time evolution, and KMS checks.
//!
//! Operators are words in diagonal functions, the isometries `mu_n` and
//! their adjoints. Every word is first brought to the normal form
//! `c * f * mu_A * mu_B^*` using the relations of the infinite algebra
//!
//! * `mu_B^* g = (sigma_B g) mu_B^*` with `(sigma_B g)(m) = g(Bm)`,
//! * `mu_A g = (rho_A g) mu_A` with `(rho_A g)(m) = g(m/A)` (0 if `A` does not divide `m`),
//! * `mu_B^* mu_C = mu_{C/G} mu_{B/G}^*` with `G = gcd(B, C)`,
//!
//! and only then evaluated on the truncated basis, where shifts past the
//! cutoff annihilate the basis vector. The diagonal of `f mu_A mu_B^*`
//! vanishes unless `A = B`, in which case it is `f(m) [B | m]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::class_group::{ClassChar, ClassGroup};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::ideal::{enumerate_ideals, IdealVec, PrimeLabel};
use crate::lseries::{partial_sum, partial_sum_complex, twist_coeffs, zeta_coeffs, CompensatedSum, DirichletChar};
use crate::number_field::NumberField;

pub const MAX_BETA: f64 = 50.0;

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 1.0 || beta > MAX_BETA {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(())
}

/// A function on integral ideals with exact cyclotomic values.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagFn {
    One,
    /// Indicator of the ideals divisible by `n`; `e_n = mu_n mu_n^*`.
    Divisible(IdealVec),
    /// `m -> chi(N m) chi(gamma)^{-1}`.
    Character { chi: DirichletChar, gamma: u64 },
    /// Completely multiplicative function given on prime ideals; primes
    /// absent from the table map to 0.
    Multiplicative { label: String, primes: Arc<BTreeMap<PrimeLabel, Cyclo>> },
    /// Values on a finite set of ideals, 0 elsewhere.
    Table(Arc<BTreeMap<IdealVec, Cyclo>>),
    /// `m -> g(n m)`.
    Shift(IdealVec, Box<DiagFn>),
    /// `m -> g(m / n)` if `n | m`, else 0.
    Translate(IdealVec, Box<DiagFn>),
    Product(Vec<DiagFn>),
}

impl DiagFn {
    pub fn character(chi: DirichletChar, gamma: u64) -> Result<Self> {
        if chi.exponent(gamma).is_none() {
            return Err(Error::NotCoprime { value: gamma, modulus: chi.modulus() });
        }
        Ok(DiagFn::Character { chi, gamma })
    }

    /// The class-group character `chi` as a function on ideals of
    /// `NumberField::quadratic(D)` supported on primes of norm `<= limit`.
    pub fn class_character(field: &NumberField, cg: &ClassGroup, chi: &ClassChar, limit: u64) -> Result<Self> {
        let expected = NumberField::quadratic("", cg.discriminant())?;
        if field.poly() != expected.poly() {
            return Err(Error::InvalidCharacter(format!(
                "field {} is not the maximal-order model of discriminant {}",
                field.label(),
                cg.discriminant()
            )));
        }
        let mut primes = BTreeMap::new();
        for p in crate::arith::integer::primes_up_to(limit) {
            let ideals = field.prime_ideals(p)?.expect("quadratic maximal orders are regular");
            for q in ideals.iter() {
                let root = (q.f == 1).then(|| {
                    let g = q.residue_factor.as_ref().expect("factor from Dedekind-Kummer");
                    (p - g.coeffs()[0] % p) % p
                });
                let class = cg.class_of_prime(p, root);
                primes.insert(PrimeLabel { p, index: q.index, f: q.f }, cg.char_value(chi, class)?);
            }
        }
        Ok(DiagFn::Multiplicative { label: format!("{:?}", chi.exps), primes: Arc::new(primes) })
    }

    pub fn eval(&self, m: &IdealVec) -> Cyclo {
        match self {
            DiagFn::One => Cyclo::one(1),
            DiagFn::Divisible(n) => Cyclo::from_int(1, n.divides(m) as i64),
            DiagFn::Character { chi, gamma } => match chi.inverse_value(*gamma) {
                Some(inv) => chi.value(m.norm()).mul(&inv),
                None => Cyclo::zero(chi.order()),
            },
            DiagFn::Multiplicative { primes, .. } => {
                let mut acc = Cyclo::one(1);
                for (l, &e) in m.exps() {
                    let Some(v) = primes.get(l) else { return Cyclo::zero(1) };
                    for _ in 0..e {
                        acc = acc.mul(v);
                    }
                }
                acc
            }
            DiagFn::Table(t) => t.get(m).cloned().unwrap_or_else(|| Cyclo::zero(1)),
            DiagFn::Shift(n, g) => g.eval(&n.mul(m)),
            DiagFn::Translate(n, g) => match n.quotient_of(m) {
                Some(q) => g.eval(&q),
                None => Cyclo::zero(1),
            },
            DiagFn::Product(fs) => fs.iter().fold(Cyclo::one(1), |acc, f| acc.mul(&f.eval(m))),
        }
    }

    fn times(self, o: DiagFn) -> DiagFn {
        match (self, o) {
            (DiagFn::One, g) | (g, DiagFn::One) => g,
            (DiagFn::Product(mut a), DiagFn::Product(b)) => {
                a.extend(b);
                DiagFn::Product(a)
            }
            (DiagFn::Product(mut a), g) => {
                a.push(g);
                DiagFn::Product(a)
            }
            (f, g) => DiagFn::Product(vec![f, g]),
        }
    }

    fn shifted(self, n: &IdealVec) -> DiagFn {
        if n.is_unit() || self == DiagFn::One {
            return self;
        }
        DiagFn::Shift(n.clone(), Box::new(self))
    }

    /// `rho_n`; on `One` this returns `One`, which agrees with `rho_n(One)`
    /// on the range of `mu_n`, the only place it is ever evaluated.
    fn translated(self, n: &IdealVec) -> DiagFn {
        if n.is_unit() || self == DiagFn::One {
            return self;
        }
        DiagFn::Translate(n.clone(), Box::new(self))
    }
}

/// A complex scalar in polar form. The time evolution only rotates the
/// angle, so its modulus is exactly 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polar {
    pub modulus: f64,
    pub angle: f64,
}

impl Polar {
    pub const ONE: Polar = Polar { modulus: 1.0, angle: 0.0 };

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.angle)
    }

    fn mul(self, o: Polar) -> Polar {
        Polar { modulus: self.modulus * o.modulus, angle: self.angle + o.angle }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Diagonal(DiagFn),
    /// `mu_n`: `e_m -> e_{nm}`.
    Shift(IdealVec),
    /// `mu_n^*`.
    ShiftAdj(IdealVec),
    Product(Vec<Operator>),
    /// `sigma_t(op)`.
    Evolved(Box<Operator>, f64),
}

impl Operator {
    pub fn identity() -> Self {
        Operator::Diagonal(DiagFn::One)
    }

    pub fn mu(n: IdealVec) -> Self {
        Operator::Shift(n)
    }

    pub fn mu_star(n: IdealVec) -> Self {
        Operator::ShiftAdj(n)
    }

    /// The projection `e_n = mu_n mu_n^*`.
    pub fn projection(n: IdealVec) -> Self {
        Operator::Product(vec![Operator::Shift(n.clone()), Operator::ShiftAdj(n)])
    }

    pub fn diag(f: DiagFn) -> Self {
        Operator::Diagonal(f)
    }

    pub fn then(self, o: Operator) -> Self {
        match (self, o) {
            (Operator::Product(mut a), Operator::Product(b)) => {
                a.extend(b);
                Operator::Product(a)
            }
            (Operator::Product(mut a), b) => {
                a.push(b);
                Operator::Product(a)
            }
            (a, b) => Operator::Product(vec![a, b]),
        }
    }

    /// Normal form `c f mu_A mu_B^*`.
    pub fn normal_form(&self) -> Monomial {
        match self {
            Operator::Diagonal(f) => Monomial { scale: Polar::ONE, f: f.clone(), a: IdealVec::unit(), b: IdealVec::unit() },
            Operator::Shift(n) => Monomial { scale: Polar::ONE, f: DiagFn::One, a: n.clone(), b: IdealVec::unit() },
            Operator::ShiftAdj(n) => Monomial { scale: Polar::ONE, f: DiagFn::One, a: IdealVec::unit(), b: n.clone() },
            Operator::Product(ops) => ops
                .iter()
                .fold(Monomial::identity(), |acc, op| acc.mul(&op.normal_form())),
            Operator::Evolved(op, t) => {
                let mut m = op.normal_form();
                m.scale = m.scale.mul(time_phase(&m.a, &m.b, *t));
                m
            }
        }
    }
}

/// `(N(A)/N(B))^{it}`.
fn time_phase(a: &IdealVec, b: &IdealVec, t: f64) -> Polar {
    Polar { modulus: 1.0, angle: t * ((a.norm() as f64).ln() - (b.norm() as f64).ln()) }
}

/// `scale * f * mu_a * mu_b^*`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub scale: Polar,
    pub f: DiagFn,
    pub a: IdealVec,
    pub b: IdealVec,
}

impl Monomial {
    pub fn identity() -> Self {
        Monomial { scale: Polar::ONE, f: DiagFn::One, a: IdealVec::unit(), b: IdealVec::unit() }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        // f1 mu_A1 mu_B1^* f2 mu_A2 mu_B2^*
        //   = f1 rho_A1(sigma_B1 f2) mu_A1 mu_{A2/G} mu_{B1/G}^* mu_B2^*
        let g = self.b.gcd(&o.a);
        let a2g = g.quotient_of(&o.a).expect("gcd divides");
        let b1g = g.quotient_of(&self.b).expect("gcd divides");
        let f2 = o.f.clone().shifted(&self.b).translated(&self.a);
        Monomial {
            scale: self.scale.mul(o.scale),
            f: self.f.clone().times(f2),
            a: self.a.mul(&a2g),
            b: o.b.mul(&b1g),
        }
    }

    /// `N(A)^{-beta} N(B)^{beta}`, the factor of `sigma_{i beta}`.
    pub fn analytic_factor(&self, beta: f64) -> f64 {
        (self.a.norm() as f64).powf(-beta) * (self.b.norm() as f64).powf(beta)
    }
}

/// `sigma_t(op)`. Diagonal operators are fixed; repeated evolution adds the
/// times, so `sigma_s(sigma_t(x))` and `sigma_{t+s}(x)` are the same value.
pub fn time_evolve(op: &Operator, t: f64) -> Operator {
    match op {
        Operator::Diagonal(_) => op.clone(),
        Operator::Evolved(inner, t0) => Operator::Evolved(inner.clone(), t0 + t),
        _ if t == 0.0 => op.clone(),
        _ => Operator::Evolved(Box::new(op.clone()), t),
    }
}

/// The scalar by which `sigma_t` multiplies a monomial.
pub fn evolution_scale(op: &Operator, t: f64) -> Polar {
    let m = op.normal_form();
    time_phase(&m.a, &m.b, t)
}

/// Route A (trace over the truncated basis) against route B (L-series
/// partial sums) for one KMS value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KmsValue {
    pub route_a: Complex64,
    pub route_b: Complex64,
}

impl KmsValue {
    pub fn diff(&self) -> f64 {
        (self.route_a - self.route_b).norm()
    }
}

/// The QSM system cut off at norm `N`.
#[derive(Debug)]
pub struct TruncatedQSM {
    field: NumberField,
    limit: u64,
    mask: BTreeSet<u64>,
    basis: Vec<IdealVec>,
    spectrum: Vec<f64>,
    /// `(norm, first, end)` runs of the basis.
    runs: Vec<(u64, usize, usize)>,
    weights: RwLock<HashMap<u64, Arc<Vec<f64>>>>,
}

impl TruncatedQSM {
    /// Enumerates the basis. Primes in `mask` are left out; any other
    /// undetermined prime up to `limit` is an error.
    pub fn new(field: &NumberField, limit: u64, mask: &BTreeSet<u64>) -> Result<Self> {
        let basis = enumerate_ideals(field, limit, mask)?;
        let spectrum = basis.iter().map(|m| (m.norm() as f64).ln()).collect();
        let mut runs: Vec<(u64, usize, usize)> = Vec::new();
        for (i, m) in basis.iter().enumerate() {
            match runs.last_mut() {
                Some(r) if r.0 == m.norm() => r.2 = i + 1,
                _ => runs.push((m.norm(), i, i + 1)),
            }
        }
        Ok(TruncatedQSM {
            field: field.clone(),
            limit,
            mask: mask.clone(),
            basis,
            spectrum,
            runs,
            weights: RwLock::new(HashMap::new()),
        })
    }

    /// [`TruncatedQSM::new`] with the field's own undetermined primes masked.
    pub fn with_auto_mask(field: &NumberField, limit: u64) -> Result<Self> {
        let mask = field.undetermined_primes()?.into_iter().filter(|&p| p <= limit).collect();
        TruncatedQSM::new(field, limit, &mask)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn mask(&self) -> &BTreeSet<u64> {
        &self.mask
    }

    pub fn basis(&self) -> &[IdealVec] {
        &self.basis
    }

    /// `log N(m)` per basis element.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Number of basis elements of each norm `1..=N` (index 0 unused).
    pub fn count_by_norm(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.limit as usize + 1];
        for &(n, s, e) in &self.runs {
            c[n as usize] = (e - s) as u64;
        }
        c
    }

    /// Multiset of norms as a sorted list.
    pub fn norms(&self) -> Vec<u64> {
        self.basis.iter().map(IdealVec::norm).collect()
    }

    /// `n^{-beta}` per norm run, cached per `beta`.
    fn run_weights(&self, beta: f64) -> Arc<Vec<f64>> {
        let key = beta.to_bits();
        if let Some(w) = self.weights.read().expect("weights lock").get(&key) {
            return w.clone();
        }
        let w: Arc<Vec<f64>> = Arc::new(self.runs.iter().map(|&(n, _, _)| (n as f64).powf(-beta)).collect());
        self.weights.write().expect("weights lock").entry(key).or_insert(w).clone()
    }

    /// `Tr e^{-beta H}` on the truncated space, summed by ascending norm.
    pub fn partition_function(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        let w = self.run_weights(beta);
        let mut acc = CompensatedSum::default();
        for (&(_, s, e), &x) in self.runs.iter().zip(w.iter()) {
            acc.add((e - s) as f64 * x);
        }
        Ok(acc.value())
    }

    /// `sum_{B | m} f(m) N(m)^{-beta}` over the basis, unnormalized.
    fn weighted_trace(&self, f: &DiagFn, b: &IdealVec, beta: f64) -> Complex64 {
        let w = self.run_weights(beta);
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for (&(_, s, e), &x) in self.runs.iter().zip(w.iter()) {
            let mut run: Option<Cyclo> = None;
            for m in &self.basis[s..e] {
                if !b.divides(m) {
                    continue;
                }
                let v = f.eval(m);
                run = Some(match run {
                    Some(r) => r.add(&v),
                    None => v,
                });
            }
            let Some(run) = run else { continue };
            if run.is_zero() {
                continue;
            }
            let z = run.to_complex() * x;
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// `Tr(op e^{-beta H}) / Tr(e^{-beta H})`.
    pub fn gibbs_expectation(&self, op: &Operator, beta: f64) -> Result<Complex64> {
        check_beta(beta)?;
        let nf = op.normal_form();
        self.monomial_expectation(&nf, beta)
    }

    fn monomial_expectation(&self, nf: &Monomial, beta: f64) -> Result<Complex64> {
        let z = self.partition_function(beta)?;
        if nf.a != nf.b {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(nf.scale.to_complex() * (self.weighted_trace(&nf.f, &nf.b, beta) / z))
    }

    /// `|omega(ab) - omega(b sigma_{i beta}(a))|`.
    pub fn kms_defect(&self, a: &Operator, b: &Operator, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        let na = a.normal_form();
        let nb = b.normal_form();
        let ab = self.monomial_expectation(&na.mul(&nb), beta)?;
        let ba = self.monomial_expectation(&nb.mul(&na), beta)? * na.analytic_factor(beta);
        Ok((ab - ba).norm())
    }

    /// `omega_{beta,gamma}(f_chi)`: route A is the Gibbs trace of
    /// `f_chi(m) = chi(N m) chi(gamma)^{-1}`; route B is the twisted series
    /// divided by the partition function and `chi(gamma)`.
    pub fn kms_state_value(&self, chi: &DirichletChar, gamma: u64, beta: f64) -> Result<KmsValue> {
        let f = DiagFn::character(chi.clone(), gamma)?;
        let route_a = self.gibbs_expectation(&Operator::diag(f), beta)?;
        let z = self.series(beta)?;
        let twisted = twist_coeffs(&self.zeta_series()?, chi);
        let l = partial_sum_complex(&twisted, beta)?;
        let inv = chi.inverse_value(gamma).expect("gamma is a unit").to_complex();
        let route_b = (l / z) * inv;
        Ok(KmsValue { route_a, route_b })
    }

    /// Class-group analogue of [`TruncatedQSM::kms_state_value`] for
    /// `NumberField::quadratic(D)`, with `gamma` the principal class.
    pub fn class_kms_value(&self, cg: &ClassGroup, chi: &ClassChar, beta: f64) -> Result<KmsValue> {
        let f = DiagFn::class_character(&self.field, cg, chi, self.limit)?;
        let route_a = self.gibbs_expectation(&Operator::diag(f), beta)?;
        let z = self.series(beta)?;
        let l = cg.class_char_l_coeffs(chi, self.limit as usize)?.masked_by(&self.mask);
        let route_b = partial_sum_complex(&l, beta)? / z;
        Ok(KmsValue { route_a, route_b })
    }

    fn zeta_series(&self) -> Result<crate::lseries::CoeffSeries> {
        Ok(zeta_coeffs(&self.field, self.limit as usize)?.masked_by(&self.mask))
    }

    /// The partition function by the coefficient route.
    pub fn series(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        partial_sum(&self.zeta_series()?, beta)
    }
}

/// Whether the two truncated spectra agree as multisets of norms.
pub fn spectrum_equal(k: &NumberField, l: &NumberField, limit: u64, mask: &BTreeSet<u64>) -> Result<bool> {
    let qk = TruncatedQSM::new(k, limit, mask)?;
    let ql = TruncatedQSM::new(l, limit, mask)?;
    Ok(qk.norms() == ql.norms())
}
